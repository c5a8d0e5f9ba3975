//! BPSK over AWGN: modulation, noise, LLR computation, 5-bit quantization.
//!
//! Noise is generated with ChaCha12 (a counter-based stream cipher, so
//! identical seeds give identical streams on every platform) and a Box-Muller
//! transform. Independent streams for parallel simulation are derived from
//! `(seed, point index, frame index)`, which makes sweep results independent
//! of the worker count.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;

use crate::qllr::Qllr;

/// AWGN channel operating point.
#[derive(Debug, Clone, Copy)]
pub struct ChannelParams {
    /// Eb/N0 in dB.
    pub ebn0_db: f64,
    /// Code rate used to convert Eb to symbol energy, in `(0, 1]`.
    pub rate: f64,
    /// RNG seed for [`add_noise`].
    pub seed: u64,
}

impl ChannelParams {
    /// Noise variance for unit-energy BPSK:
    /// `sigma^2 = 1 / (2 * rate * 10^(ebn0_db / 10))`.
    pub fn noise_variance(&self) -> f64 {
        1.0 / (2.0 * self.rate * 10f64.powf(self.ebn0_db / 10.0))
    }

    pub fn noise_sigma(&self) -> f64 {
        self.noise_variance().sqrt()
    }
}

/// BPSK mapping: bit 0 -> +1.0, bit 1 -> -1.0.
pub fn modulate(bits: &[bool]) -> Vec<f64> {
    bits.iter().map(|&b| if b { -1.0 } else { 1.0 }).collect()
}

/// Adds white Gaussian noise with the variance implied by `p`, drawing from a
/// fresh stream seeded by `p.seed`.
pub fn add_noise(symbols: &[f64], p: &ChannelParams) -> Vec<f64> {
    let mut gauss = GaussianSource::from_seed(p.seed);
    add_noise_with(symbols, p.noise_sigma(), &mut gauss)
}

/// Adds noise from an existing Gaussian stream (used by the sweep engine to
/// keep one stream per frame).
pub fn add_noise_with(symbols: &[f64], sigma: f64, gauss: &mut GaussianSource) -> Vec<f64> {
    symbols
        .iter()
        .map(|&x| x + sigma * gauss.next_gaussian())
        .collect()
}

/// Exact BPSK-AWGN channel LLRs: `L_i = 2 * y_i / sigma^2`. Positive favors
/// bit 0.
pub fn llr(y: &[f64], p: &ChannelParams) -> Vec<f64> {
    let scale = 2.0 / p.noise_variance();
    y.iter().map(|&v| scale * v).collect()
}

/// Quantizes one LLR to the 5-bit fixed-point format.
pub fn quantize(l: f64) -> Qllr {
    Qllr::from_llr(l)
}

/// Quantizes a whole frame.
pub fn quantize_all(l: &[f64]) -> Vec<Qllr> {
    l.iter().map(|&v| Qllr::from_llr(v)).collect()
}

/// Derives the ChaCha12 stream for one simulated frame from the master seed,
/// the sweep point index, and the frame index.
pub fn frame_rng(seed: u64, point: u64, frame: u64) -> ChaCha12Rng {
    let mut key = [0u8; 32];
    key[0..8].copy_from_slice(&seed.to_le_bytes());
    key[8..16].copy_from_slice(&point.to_le_bytes());
    key[16..24].copy_from_slice(&frame.to_le_bytes());
    key[24..32].copy_from_slice(&0x6e72_6c64_7063_0001u64.to_le_bytes());
    ChaCha12Rng::from_seed(key)
}

/// Standard-normal sampler: ChaCha12 + Box-Muller, generating values in
/// pairs.
pub struct GaussianSource {
    rng: ChaCha12Rng,
    spare: Option<f64>,
}

impl GaussianSource {
    pub fn from_seed(seed: u64) -> GaussianSource {
        GaussianSource::from_rng(frame_rng(seed, 0, 0))
    }

    pub fn from_rng(rng: ChaCha12Rng) -> GaussianSource {
        GaussianSource { rng, spare: None }
    }

    pub fn next_gaussian(&mut self) -> f64 {
        if let Some(v) = self.spare.take() {
            return v;
        }
        // u1 in (0, 1] so the log is finite.
        let u1: f64 = 1.0 - self.rng.random::<f64>();
        let u2: f64 = self.rng.random();
        let r = (-2.0 * u1.ln()).sqrt();
        let theta = 2.0 * std::f64::consts::PI * u2;
        self.spare = Some(r * theta.sin());
        r * theta.cos()
    }
}
