//! Structural model of the cyclic shift network.
//!
//! The routing fabric is a pair of full-width rotators plus one output
//! multiplexer stage. With `Z` of the `N` lanes active and a shift value
//! `SV < Z`, rotator A rotates the full width by `SV` and rotator B by
//! `SV + (N - Z)`; output lane `i` takes rotator A when `i < Z - SV` and
//! rotator B otherwise, which reproduces a true `Z`-point cyclic shift on
//! the active lanes. Each rotator is modeled as a cascade of conditional
//! fixed rotations (rotate by `2^k` iff bit `k` of the shift amount is set),
//! so stages and switches are countable: `ceil(log2 N)` rotator stages, 7
//! for the 96-lane network, plus the final mux stage.
//!
//! The same fabric splits into two 48-lane or four 24-lane independent
//! sub-networks, each shifting a different frame; that is what lets the
//! decoder process extra frames at small lifting sizes.
//!
//! Inactive lanes carry no value in the model; if one is ever routed to an
//! active output the model panics, which is the point: misrouting must not
//! be silently absorbed.

use crate::error::{Error, Result};
use crate::qllr::Qllr;

/// Lane width of the full network (the largest supported lifting size).
pub const NETWORK_WIDTH: usize = 96;

/// How the 96-lane fabric is partitioned.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PartitionMode {
    /// One 96-lane network, one frame.
    Single96,
    /// Two independent 48-lane networks, two frames.
    Dual48,
    /// Four independent 24-lane networks, four frames.
    Quad24,
}

impl PartitionMode {
    /// The mode the decoder front end selects for a lifting size.
    pub fn for_z(z: usize) -> PartitionMode {
        if z <= 24 {
            PartitionMode::Quad24
        } else if z <= 48 {
            PartitionMode::Dual48
        } else {
            PartitionMode::Single96
        }
    }

    /// Lane width of each sub-network.
    pub fn sub_width(self) -> usize {
        match self {
            PartitionMode::Single96 => 96,
            PartitionMode::Dual48 => 48,
            PartitionMode::Quad24 => 24,
        }
    }

    /// Number of independent sub-networks (frames shifted in parallel).
    pub fn sub_networks(self) -> usize {
        NETWORK_WIDTH / self.sub_width()
    }
}

/// Geometry of one shift operation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ShiftConfig {
    /// Network width.
    pub n: usize,
    /// Active lanes, `1..=n`.
    pub z: usize,
    /// Shift value, `0..z`.
    pub sv: usize,
}

impl ShiftConfig {
    pub fn new(n: usize, z: usize, sv: usize) -> Result<ShiftConfig> {
        if n == 0 || z == 0 || z > n {
            return Err(Error::Config(format!(
                "active lanes Z = {z} out of range 1..={n}"
            )));
        }
        if sv >= z {
            return Err(Error::Config(format!(
                "shift value SV = {sv} must be below Z = {z}"
            )));
        }
        Ok(ShiftConfig { n, z, sv })
    }
}

/// Reference semantics of the network: `out[i] = data[(i + sv) mod len]`.
pub fn cyclic_shift_oracle<T: Copy>(data: &[T], sv: usize) -> Vec<T> {
    let n = data.len();
    (0..n).map(|i| data[(i + sv) % n]).collect()
}

/// Which rotator each active output lane selected, plus the stage counts of
/// the evaluated fabric.
#[derive(Debug, Clone)]
pub struct ShiftTrace {
    /// `true` where the duplicate (rotator B) path was selected.
    pub from_duplicate: Vec<bool>,
    /// Conditional-rotation stages per rotator.
    pub rotator_stages: usize,
    /// Rotator stages plus the final multiplexer stage.
    pub total_stages: usize,
}

/// Conditional-rotation stages needed to reach any amount below `n`.
pub fn rotator_stage_count(n: usize) -> usize {
    n.next_power_of_two().trailing_zeros() as usize
}

fn rotate_cascade<T: Copy>(lanes: &[Option<T>], amount: usize) -> Vec<Option<T>> {
    let n = lanes.len();
    let mut cur = lanes.to_vec();
    for k in 0..rotator_stage_count(n) {
        if (amount >> k) & 1 == 1 {
            let step = 1 << k;
            cur = (0..n).map(|i| cur[(i + step) % n]).collect();
        }
    }
    cur
}

/// Evaluates the two-rotator network on `data` (length `cfg.z`).
pub fn banyan_variant_shift<T: Copy>(data: &[T], cfg: &ShiftConfig) -> Result<Vec<T>> {
    Ok(banyan_variant_shift_traced(data, cfg)?.0)
}

/// As [`banyan_variant_shift`], also reporting the mux selections.
pub fn banyan_variant_shift_traced<T: Copy>(
    data: &[T],
    cfg: &ShiftConfig,
) -> Result<(Vec<T>, ShiftTrace)> {
    ShiftConfig::new(cfg.n, cfg.z, cfg.sv)?;
    if data.len() != cfg.z {
        return Err(Error::Dimension(format!(
            "expected {} active lanes of data, got {}",
            cfg.z,
            data.len()
        )));
    }
    let mut lanes: Vec<Option<T>> = data.iter().copied().map(Some).collect();
    lanes.resize(cfg.n, None);

    let rot_a = rotate_cascade(&lanes, cfg.sv);
    let rot_b = rotate_cascade(&lanes, cfg.sv + (cfg.n - cfg.z));

    let threshold = cfg.z - cfg.sv;
    let mut out = Vec::with_capacity(cfg.z);
    let mut from_duplicate = Vec::with_capacity(cfg.z);
    for i in 0..cfg.z {
        let take_b = i >= threshold;
        let lane = if take_b { rot_b[i] } else { rot_a[i] };
        out.push(lane.expect("inactive lane routed to an active output"));
        from_duplicate.push(take_b);
    }
    let rotator_stages = rotator_stage_count(cfg.n);
    Ok((
        out,
        ShiftTrace {
            from_duplicate,
            rotator_stages,
            total_stages: rotator_stages + 1,
        },
    ))
}

/// Shifts one frame per sub-network. Every frame must carry the same number
/// of active lanes (the hardware partitions its lanes uniformly), and the
/// frame count must match the mode.
pub fn partitioned_shift<T: Copy>(
    frames: &[(Vec<T>, usize)],
    mode: PartitionMode,
) -> Result<Vec<Vec<T>>> {
    if frames.len() != mode.sub_networks() {
        return Err(Error::Config(format!(
            "{:?} takes exactly {} frames, got {}",
            mode,
            mode.sub_networks(),
            frames.len()
        )));
    }
    let z = frames[0].0.len();
    if frames.iter().any(|(data, _)| data.len() != z) {
        return Err(Error::Config(
            "all frames must share the same number of active lanes".into(),
        ));
    }
    if z > mode.sub_width() {
        return Err(Error::Config(format!(
            "Z = {z} exceeds the {}-lane sub-networks of {:?}",
            mode.sub_width(),
            mode
        )));
    }
    frames
        .iter()
        .map(|(data, sv)| {
            let cfg = ShiftConfig::new(mode.sub_width(), z, *sv)?;
            banyan_variant_shift(data, &cfg)
        })
        .collect()
}

/// Convenience alias for shifting decoder messages.
pub fn shift_messages(data: &[Qllr], cfg: &ShiftConfig) -> Result<Vec<Qllr>> {
    banyan_variant_shift(data, cfg)
}

/// Closed-form switch and stage counts for the classic topologies, valid for
/// power-of-two widths.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct NetworkCost {
    pub n: usize,
    /// Benes: `2 * N * log2(N) - N` multiplexers.
    pub benes_muxes: usize,
    /// Benes: `2 * log2(N) - 1` stages.
    pub benes_stages: usize,
    /// Banyan: `N * log2(N)` multiplexers.
    pub banyan_muxes: usize,
    /// Banyan: `log2(N)` stages.
    pub banyan_stages: usize,
    /// QSN critical path: `log2(N) + 1` stages.
    pub qsn_stages: usize,
}

/// Evaluates the closed-form cost table; `n` must be a power of two >= 2.
pub fn network_costs(n: usize) -> Result<NetworkCost> {
    if n < 2 || !n.is_power_of_two() {
        return Err(Error::Config(format!(
            "closed-form costs need a power-of-two width, got {n}"
        )));
    }
    let log2n = n.trailing_zeros() as usize;
    Ok(NetworkCost {
        n,
        benes_muxes: 2 * n * log2n - n,
        benes_stages: 2 * log2n - 1,
        banyan_muxes: n * log2n,
        banyan_stages: log2n,
        qsn_stages: log2n + 1,
    })
}

/// Multiplexer count of the modeled fabric at width `n`: two rotators of
/// `ceil(log2 n)` conditional-rotation stages (each `n` 2:1 muxes) plus the
/// final selection stage.
pub fn structural_mux_count(n: usize) -> usize {
    2 * n * rotator_stage_count(n) + n
}
