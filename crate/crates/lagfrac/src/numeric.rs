//! Value-plus-log-scale arithmetic.
//!
//! Kernel formulas multiply Gamma ratios, powers like `(xy)^{a j}` and Bessel
//! values that individually overflow `f64` long before their product does.
//! `LogVal` carries the sign separately from `ln|v|` so factors can be
//! combined before a single exponentiation.

/// A real number stored as `sign * exp(ln_abs)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LogVal {
    pub ln_abs: f64,
    /// -1.0, 0.0 or 1.0
    pub sign: f64,
}

impl LogVal {
    pub const ZERO: LogVal = LogVal {
        ln_abs: f64::NEG_INFINITY,
        sign: 0.0,
    };

    pub fn from_value(v: f64) -> Self {
        if v == 0.0 {
            Self::ZERO
        } else {
            LogVal {
                ln_abs: v.abs().ln(),
                sign: v.signum(),
            }
        }
    }

    /// Positive value given directly by its natural log.
    pub fn from_ln(ln_abs: f64) -> Self {
        LogVal { ln_abs, sign: 1.0 }
    }

    pub fn value(&self) -> f64 {
        self.sign * self.ln_abs.exp()
    }

    pub fn is_zero(&self) -> bool {
        self.sign == 0.0
    }

    pub fn mul(&self, other: LogVal) -> LogVal {
        if self.is_zero() || other.is_zero() {
            return Self::ZERO;
        }
        LogVal {
            ln_abs: self.ln_abs + other.ln_abs,
            sign: self.sign * other.sign,
        }
    }

    /// Multiplies by `exp(ln_factor)`.
    pub fn scaled(&self, ln_factor: f64) -> LogVal {
        if self.is_zero() {
            return Self::ZERO;
        }
        LogVal {
            ln_abs: self.ln_abs + ln_factor,
            sign: self.sign,
        }
    }

    pub fn div(&self, other: LogVal) -> LogVal {
        LogVal {
            ln_abs: self.ln_abs - other.ln_abs,
            sign: self.sign * other.sign,
        }
    }

    /// Ratio of two positive quantities as a plain f64.
    pub fn ratio(&self, other: LogVal) -> f64 {
        self.div(*&other).value()
    }
}

/// Relative difference |a - b| / max(|a|, |b|), zero-safe.
pub fn rel_diff(a: f64, b: f64) -> f64 {
    let scale = a.abs().max(b.abs());
    if scale == 0.0 {
        0.0
    } else {
        (a - b).abs() / scale
    }
}
