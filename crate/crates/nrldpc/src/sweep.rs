//! Seeded Monte-Carlo BER/FER sweeps and CSV output.
//!
//! Each sweep point runs frames in fixed-size batches of [`BATCH_FRAMES`].
//! The RNG stream of a frame is derived from `(seed, point index, frame
//! index)` and the stopping rules are evaluated only at batch boundaries, so
//! the set of simulated frames — and therefore every counter — is a pure
//! function of the configuration. Worker threads only split a batch between
//! them; results are identical for any worker count.
//!
//! Bit errors are counted on the information positions (the first `22 * Z`
//! codeword bits, punctured ones included: they are information the user
//! transmitted).

use std::io::Write;

use crate::basegraph::{BaseGraph, CodeConfig, ParityMatrix};
use crate::channel::{
    add_noise_with, frame_rng, llr, modulate, quantize_all, ChannelParams, GaussianSource,
};
use crate::codec::{depuncture_llrs, puncture, Encoder};
use crate::decoder::{decode, DecodeParams};
use crate::error::{Error, Result};
use rand::Rng;

/// Frames per deterministic scheduling batch.
pub const BATCH_FRAMES: u64 = 64;

/// Which code rate converts Eb/N0 into noise variance.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EbN0Norm {
    /// Transmitted rate `22 / (20 + mb)`: punctured bits carry no energy
    /// (default).
    Tx,
    /// Codeword rate `22 / (22 + mb)`: as if punctured bits were also
    /// transmitted.
    Info,
}

impl EbN0Norm {
    pub fn rate(self, mb: usize) -> f64 {
        match self {
            EbN0Norm::Tx => 22.0 / (20 + mb) as f64,
            EbN0Norm::Info => 22.0 / (22 + mb) as f64,
        }
    }
}

/// Full description of one BER sweep.
#[derive(Debug, Clone)]
pub struct SweepConfig {
    pub z: usize,
    pub mb: usize,
    pub lifting_set: usize,
    /// Eb/N0 grid in dB; points are simulated and emitted in ascending
    /// order.
    pub ebn0_grid: Vec<f64>,
    /// Stop a point after this many frames.
    pub max_frames: u64,
    /// Stop a point early once it has collected this many frame errors.
    pub max_frame_errors: u64,
    /// Stop a point early once it has collected this many bit errors.
    pub max_bit_errors: u64,
    pub seed: u64,
    pub workers: usize,
    pub decode: DecodeParams,
    pub ebn0_norm: EbN0Norm,
}

impl SweepConfig {
    /// Standard stopping rules: 100,000 frames or 100 frame errors per
    /// point, whichever comes first; one worker; default decoder knobs.
    pub fn new(z: usize, mb: usize, lifting_set: usize, ebn0_grid: Vec<f64>) -> SweepConfig {
        SweepConfig {
            z,
            mb,
            lifting_set,
            ebn0_grid,
            max_frames: 100_000,
            max_frame_errors: 100,
            max_bit_errors: u64::MAX,
            seed: 0,
            workers: 1,
            decode: DecodeParams::default(),
            ebn0_norm: EbN0Norm::Tx,
        }
    }

    pub fn code_config(&self) -> CodeConfig {
        CodeConfig {
            z: self.z,
            mb: self.mb,
            lifting_set: self.lifting_set,
        }
    }

    fn validate(&self) -> Result<()> {
        self.code_config().validate()?;
        if self.ebn0_grid.is_empty() {
            return Err(Error::Config("empty Eb/N0 grid".into()));
        }
        if self.ebn0_grid.iter().any(|e| !e.is_finite()) {
            return Err(Error::Config(
                "Eb/N0 grid contains non-finite values".into(),
            ));
        }
        if self.max_frames == 0 || self.max_frame_errors == 0 || self.max_bit_errors == 0 {
            return Err(Error::Config("stopping rules must be positive".into()));
        }
        if self.workers == 0 {
            return Err(Error::Config("worker count must be positive".into()));
        }
        Ok(())
    }
}

/// Aggregated counters of one sweep point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepPoint {
    pub ebn0_db: f64,
    pub frames: u64,
    pub bit_errors: u64,
    pub frame_errors: u64,
    pub avg_iterations: f64,
    pub ber: f64,
    pub fer: f64,
}

#[derive(Default, Clone, Copy)]
struct Partial {
    frames: u64,
    bit_errors: u64,
    frame_errors: u64,
    iter_sum: u64,
}

impl Partial {
    fn absorb(&mut self, other: Partial) {
        self.frames += other.frames;
        self.bit_errors += other.bit_errors;
        self.frame_errors += other.frame_errors;
        self.iter_sum += other.iter_sum;
    }
}

/// Runs the whole sweep: encode random frames, BPSK-modulate, add seeded
/// noise, quantize, decode, count errors.
pub fn run_sweep(bg: &BaseGraph, cfg: &SweepConfig) -> Result<Vec<SweepPoint>> {
    cfg.validate()?;
    let ccfg = cfg.code_config();
    let h = bg.expand(&ccfg)?;
    let encoder = Encoder::new(&h)?;
    let k = ccfg.lengths().k;
    let rate = cfg.ebn0_norm.rate(cfg.mb);

    let mut grid = cfg.ebn0_grid.clone();
    grid.sort_by(|a, b| a.partial_cmp(b).unwrap());

    let mut points = Vec::with_capacity(grid.len());
    for (point_idx, &ebn0_db) in grid.iter().enumerate() {
        let chan = ChannelParams {
            ebn0_db,
            rate,
            seed: cfg.seed,
        };
        let sigma = chan.noise_sigma();

        let mut totals = Partial::default();
        let mut next_frame = 0u64;
        while next_frame < cfg.max_frames
            && totals.frame_errors < cfg.max_frame_errors
            && totals.bit_errors < cfg.max_bit_errors
        {
            let take = BATCH_FRAMES.min(cfg.max_frames - next_frame);
            let batch = run_batch(
                &encoder,
                &h,
                &chan,
                cfg,
                k,
                sigma,
                point_idx as u64,
                next_frame,
                take,
            );
            totals.absorb(batch);
            next_frame += take;
        }

        let frames = totals.frames as f64;
        points.push(SweepPoint {
            ebn0_db,
            frames: totals.frames,
            bit_errors: totals.bit_errors,
            frame_errors: totals.frame_errors,
            avg_iterations: totals.iter_sum as f64 / frames,
            ber: totals.bit_errors as f64 / (frames * k as f64),
            fer: totals.frame_errors as f64 / frames,
        });
    }
    Ok(points)
}

#[allow(clippy::too_many_arguments)]
fn run_batch(
    encoder: &Encoder,
    h: &ParityMatrix,
    chan: &ChannelParams,
    cfg: &SweepConfig,
    k: usize,
    sigma: f64,
    point_idx: u64,
    first_frame: u64,
    count: u64,
) -> Partial {
    let workers = cfg.workers.min(count as usize).max(1);
    let worker_partial = |w: usize| -> Partial {
        let mut part = Partial::default();
        let mut frame = first_frame + w as u64;
        while frame < first_frame + count {
            part.absorb(simulate_frame(
                encoder, h, chan, cfg, k, sigma, point_idx, frame,
            ));
            frame += workers as u64;
        }
        part
    };

    let mut totals = Partial::default();
    if workers == 1 {
        totals.absorb(worker_partial(0));
    } else {
        std::thread::scope(|scope| {
            let handles: Vec<_> = (0..workers)
                .map(|w| scope.spawn(move || worker_partial(w)))
                .collect();
            for handle in handles {
                totals.absorb(handle.join().expect("sweep worker panicked"));
            }
        });
    }
    totals
}

#[allow(clippy::too_many_arguments)]
fn simulate_frame(
    encoder: &Encoder,
    h: &ParityMatrix,
    chan: &ChannelParams,
    cfg: &SweepConfig,
    k: usize,
    sigma: f64,
    point_idx: u64,
    frame_idx: u64,
) -> Partial {
    let ccfg = cfg.code_config();
    let mut rng = frame_rng(cfg.seed, point_idx, frame_idx);
    let info: Vec<bool> = (0..k).map(|_| rng.random()).collect();
    let cw = encoder
        .encode(&info, h)
        .expect("frame length is fixed by setup");
    let tx = puncture(&cw, &ccfg);
    let symbols = modulate(tx.bits());
    let mut gauss = GaussianSource::from_rng(rng);
    let received = add_noise_with(&symbols, sigma, &mut gauss);
    let soft = llr(&received, chan);
    let quantized = quantize_all(&soft);
    let full = depuncture_llrs(&quantized, &ccfg).expect("lengths are fixed by setup");
    let out = decode(&full, h, &cfg.decode).expect("lengths are fixed by setup");

    let bit_errors = info
        .iter()
        .zip(&out.hard_bits[..k])
        .filter(|(a, b)| a != b)
        .count() as u64;
    Partial {
        frames: 1,
        bit_errors,
        frame_errors: u64::from(bit_errors > 0),
        iter_sum: u64::from(out.iterations_run),
    }
}

/// Formats a float with six significant digits; round-trips through
/// `f64::from_str`.
fn fmt6(x: f64) -> String {
    if x == 0.0 {
        "0".to_string()
    } else {
        format!("{x:.5e}")
    }
}

/// Writes the sweep as CSV: header
/// `rate,z,mb,ebn0_db,frames,bit_errors,frame_errors,avg_iters,ber,fer`,
/// one row per point, floats with six significant digits, rows ordered by
/// Eb/N0.
pub fn emit_csv<W: Write>(cfg: &SweepConfig, points: &[SweepPoint], mut out: W) -> Result<()> {
    writeln!(
        out,
        "rate,z,mb,ebn0_db,frames,bit_errors,frame_errors,avg_iters,ber,fer"
    )?;
    let rate = 22.0 / (20 + cfg.mb) as f64;
    for p in points {
        writeln!(
            out,
            "{},{},{},{},{},{},{},{},{},{}",
            fmt6(rate),
            cfg.z,
            cfg.mb,
            fmt6(p.ebn0_db),
            p.frames,
            p.bit_errors,
            p.frame_errors,
            fmt6(p.avg_iterations),
            fmt6(p.ber),
            fmt6(p.fer),
        )?;
    }
    Ok(())
}
