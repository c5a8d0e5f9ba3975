//! Analytical cycle and throughput model.
//!
//! Worst-case accounting: every frame runs the full iteration budget, so
//!
//! ```text
//! throughput = f_clk * frames_pipelined * frames_parallel * bits_per_frame
//!              / (cycles_per_iter * max_iters)
//! ```
//!
//! `frames_pipelined` captures the two-frames-in-the-pipe check-node
//! scheduling; `frames_parallel` is the sub-network count of the shift
//! fabric (1, 2, or 4 by lifting size). `bits_per_frame` defaults to the
//! transmitted bits `(20 + mb) * Z`, which is the convention that reproduces
//! the published operating points. The per-iteration cycle count is a
//! schedule constant: 18 cycles for the mother code; other rates take a
//! user-supplied value.

use crate::basegraph::{CodeConfig, BG1_INFO_COLS};
use crate::error::{Error, Result};
use crate::shiftnet::PartitionMode;

/// Cycles per iteration when decoding the mother code (rate 11/12).
pub const MOTHER_CODE_CYCLES_PER_ITER: u32 = 18;

/// Schedule table mapping `mb` to cycles per iteration. Only the mother code
/// is pre-filled; other rates must be supplied by the caller.
pub fn cycles_per_iter_for(mb: usize) -> Option<u32> {
    (mb == 4).then_some(MOTHER_CODE_CYCLES_PER_ITER)
}

/// Which bit count a frame contributes to throughput.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BitsConvention {
    /// Transmitted bits, `(20 + mb) * Z` (default).
    Tx,
    /// Information bits, `22 * Z`.
    Info,
    /// Full codeword bits, `(22 + mb) * Z`.
    Code,
}

impl BitsConvention {
    pub fn bits_per_frame(self, z: usize, mb: usize) -> u64 {
        let cols = match self {
            BitsConvention::Tx => BG1_INFO_COLS - 2 + mb,
            BitsConvention::Info => BG1_INFO_COLS,
            BitsConvention::Code => BG1_INFO_COLS + mb,
        };
        (cols * z) as u64
    }
}

/// Inputs of the throughput model.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PerfParams {
    pub f_clk_hz: f64,
    pub cycles_per_iter: u32,
    pub max_iters: u32,
    /// Frames interleaved in the check-node pipeline.
    pub frames_pipelined: u32,
    /// Frames in independent shift sub-networks (1, 2, or 4).
    pub frames_parallel: u32,
    pub bits_per_frame: u64,
}

impl PerfParams {
    /// Mother-code defaults: 18 cycles/iteration, 10 iterations, two frames
    /// pipelined, one shift network.
    pub fn new(f_clk_hz: f64, bits_per_frame: u64) -> PerfParams {
        PerfParams {
            f_clk_hz,
            cycles_per_iter: MOTHER_CODE_CYCLES_PER_ITER,
            max_iters: 10,
            frames_pipelined: 2,
            frames_parallel: 1,
            bits_per_frame,
        }
    }

    fn validate(&self) -> Result<()> {
        if !(self.f_clk_hz.is_finite() && self.f_clk_hz > 0.0) {
            return Err(Error::Config(format!(
                "clock frequency must be positive, got {}",
                self.f_clk_hz
            )));
        }
        if self.cycles_per_iter == 0 || self.max_iters == 0 {
            return Err(Error::Config(
                "cycles_per_iter and max_iters must be positive".into(),
            ));
        }
        if self.frames_pipelined == 0 || self.frames_parallel == 0 || self.bits_per_frame == 0 {
            return Err(Error::Config(
                "frame counts and bits_per_frame must be positive".into(),
            ));
        }
        Ok(())
    }
}

/// Worst-case decoded throughput in bits per second.
pub fn throughput_bps(p: &PerfParams) -> Result<f64> {
    p.validate()?;
    let cycles = p.cycles_per_iter as f64 * p.max_iters as f64;
    Ok(
        p.f_clk_hz * p.frames_pipelined as f64 * p.frames_parallel as f64 * p.bits_per_frame as f64
            / cycles,
    )
}

/// Total frames in flight: pipelined times parallel (at most 2 x 4 = 8).
pub fn frames_in_flight(p: &PerfParams) -> u32 {
    p.frames_pipelined * p.frames_parallel
}

/// One row of the throughput-versus-lifting-size table.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ZThroughput {
    pub z: usize,
    pub mode: PartitionMode,
    pub frames_parallel: u32,
    pub bits_per_frame: u64,
    /// Throughput with multi-frame mode disabled (one frame in the fabric).
    pub single_bps: f64,
    /// Throughput with the mode rule applied.
    pub multi_bps: f64,
}

/// Tabulates throughput across lifting sizes at a fixed clock, with and
/// without the multi-frame sub-network modes.
pub fn throughput_vs_z(
    base: &PerfParams,
    mb: usize,
    bits: BitsConvention,
    z_list: &[usize],
) -> Result<Vec<ZThroughput>> {
    let mut rows = Vec::with_capacity(z_list.len());
    for &z in z_list {
        CodeConfig {
            z,
            mb,
            lifting_set: 0,
        }
        .validate()?;
        let mode = PartitionMode::for_z(z);
        let bits_per_frame = bits.bits_per_frame(z, mb);
        let single = throughput_bps(&PerfParams {
            bits_per_frame,
            frames_parallel: 1,
            ..*base
        })?;
        let multi = throughput_bps(&PerfParams {
            bits_per_frame,
            frames_parallel: mode.sub_networks() as u32,
            ..*base
        })?;
        rows.push(ZThroughput {
            z,
            mode,
            frames_parallel: mode.sub_networks() as u32,
            bits_per_frame,
            single_bps: single,
            multi_bps: multi,
        });
    }
    Ok(rows)
}
