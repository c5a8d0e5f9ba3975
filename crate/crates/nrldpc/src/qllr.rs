//! 5-bit saturating fixed-point log-likelihood ratios.
//!
//! Every message in the decoder (channel LLRs, variable-node totals,
//! check-node messages) is a [`Qllr`]: an integer in `[-15, +15]` with an LSB
//! weight of 0.5, i.e. the representable LLR range is `[-7.5, +7.5]`. The
//! range is symmetric on purpose: `-16` is never produced, so negating a
//! value never overflows and the decoder treats positive and negative
//! messages identically. All arithmetic saturates; nothing ever wraps.

use std::fmt;
use std::ops::Neg;

/// Largest representable magnitude, in LSB units.
pub const QLLR_MAX: i8 = 15;

/// LLR value of one LSB.
pub const QLLR_LSB: f64 = 0.5;

/// A quantized LLR: sign + 4-bit magnitude, LSB = 0.5.
///
/// Positive values favor bit 0. The sign of zero is positive everywhere
/// (hard decisions and check-node sign products both treat 0 as `+`).
#[derive(Clone, Copy, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Qllr(i8);

impl Qllr {
    pub const ZERO: Qllr = Qllr(0);
    pub const MAX: Qllr = Qllr(QLLR_MAX);
    pub const MIN: Qllr = Qllr(-QLLR_MAX);

    /// Builds a value from raw LSB units, saturating to `[-15, +15]`.
    pub fn saturating_from(v: i32) -> Qllr {
        Qllr(v.clamp(-QLLR_MAX as i32, QLLR_MAX as i32) as i8)
    }

    /// Quantizes a real-valued LLR: `clamp(round(llr / 0.5), -15, +15)`,
    /// rounding halves away from zero so that quantization is an odd
    /// function.
    pub fn from_llr(llr: f64) -> Qllr {
        let units = (llr / QLLR_LSB).round();
        Qllr(units.clamp(-(QLLR_MAX as f64), QLLR_MAX as f64) as i8)
    }

    /// Raw value in LSB units, in `[-15, +15]`.
    pub fn value(self) -> i8 {
        self.0
    }

    /// The LLR this value represents (`value * 0.5`).
    pub fn to_llr(self) -> f64 {
        f64::from(self.0) * QLLR_LSB
    }

    /// Magnitude in LSB units, in `[0, 15]`.
    pub fn magnitude(self) -> u8 {
        self.0.unsigned_abs()
    }

    /// True for strictly negative values; zero counts as positive.
    pub fn is_negative(self) -> bool {
        self.0 < 0
    }

    /// `-1` for negative values, `+1` otherwise (sign of zero is `+`).
    pub fn signum(self) -> i8 {
        if self.0 < 0 {
            -1
        } else {
            1
        }
    }

    pub fn saturating_add(self, rhs: Qllr) -> Qllr {
        Qllr::saturating_from(i32::from(self.0) + i32::from(rhs.0))
    }

    pub fn saturating_sub(self, rhs: Qllr) -> Qllr {
        Qllr::saturating_from(i32::from(self.0) - i32::from(rhs.0))
    }

    /// Rebuilds a value from a sign and a magnitude in LSB units.
    pub fn from_sign_mag(negative: bool, mag: u8) -> Qllr {
        let m = mag.min(QLLR_MAX as u8) as i8;
        Qllr(if negative { -m } else { m })
    }
}

impl Neg for Qllr {
    type Output = Qllr;
    fn neg(self) -> Qllr {
        Qllr(-self.0)
    }
}

impl fmt::Debug for Qllr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl fmt::Display for Qllr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}
