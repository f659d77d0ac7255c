//! Log-domain complex scalars.
//!
//! A [`LogComplex`] stores `log10 |z|` and `arg z` separately, so products
//! over hundreds of knot differences never leave the representable range.

use std::f64::consts::PI;
use std::fmt;
use std::ops::{Add, Div, DivAssign, Mul, MulAssign, Neg, Sub};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest |log10 magnitude| accepted when converting back to `Complex64`.
pub const RANGE_LIMIT: f64 = 300.0;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LogComplex {
    /// log10 of the magnitude; `-inf` encodes zero.
    pub log10mag: f64,
    /// Phase in radians, normalized to (-pi, pi].
    pub phase: f64,
}

fn wrap_phase(p: f64) -> f64 {
    if p > -PI && p <= PI {
        return p;
    }
    let r = (p + PI).rem_euclid(2.0 * PI) - PI;
    if r <= -PI {
        r + 2.0 * PI
    } else {
        r
    }
}

impl LogComplex {
    pub const ONE: LogComplex = LogComplex {
        log10mag: 0.0,
        phase: 0.0,
    };
    pub const ZERO: LogComplex = LogComplex {
        log10mag: f64::NEG_INFINITY,
        phase: 0.0,
    };

    pub fn new(log10mag: f64, phase: f64) -> Self {
        LogComplex {
            log10mag,
            phase: wrap_phase(phase),
        }
    }

    pub fn from_complex(z: Complex64) -> Self {
        if z.re == 0.0 && z.im == 0.0 {
            return Self::ZERO;
        }
        LogComplex {
            log10mag: z.norm().log10(),
            phase: z.arg(),
        }
    }

    pub fn from_real(x: f64) -> Self {
        Self::from_complex(Complex64::new(x, 0.0))
    }

    pub fn is_zero(&self) -> bool {
        self.log10mag == f64::NEG_INFINITY
    }

    /// Converts back to a floating complex number, failing when the magnitude
    /// lies outside 10^(+-300).
    pub fn to_complex(&self) -> Result<Complex64> {
        if self.is_zero() {
            return Ok(Complex64::new(0.0, 0.0));
        }
        if !self.log10mag.is_finite() || self.log10mag.abs() > RANGE_LIMIT {
            return Err(Error::RangeOverflow {
                log10mag: self.log10mag,
            });
        }
        Ok(Complex64::from_polar(10f64.powf(self.log10mag), self.phase))
    }

    /// Natural log of the magnitude.
    pub fn ln_abs(&self) -> f64 {
        self.log10mag * std::f64::consts::LN_10
    }

    pub fn recip(self) -> Self {
        LogComplex::new(-self.log10mag, -self.phase)
    }

    pub fn powi(self, k: i64) -> Self {
        if self.is_zero() {
            return if k == 0 { Self::ONE } else { Self::ZERO };
        }
        LogComplex::new(self.log10mag * k as f64, self.phase * k as f64)
    }

    pub fn conj(self) -> Self {
        LogComplex::new(self.log10mag, -self.phase)
    }

    /// Product of all items; the empty product is one.
    pub fn product<I: IntoIterator<Item = LogComplex>>(it: I) -> Self {
        let mut log10mag = 0.0;
        let mut phase = 0.0;
        for z in it {
            log10mag += z.log10mag;
            phase += z.phase;
        }
        LogComplex::new(log10mag, phase)
    }
}

impl From<Complex64> for LogComplex {
    fn from(z: Complex64) -> Self {
        LogComplex::from_complex(z)
    }
}

impl Add for LogComplex {
    type Output = LogComplex;
    /// Sum, computed relative to the larger operand so neither side has to fit
    /// in a double.
    fn add(self, other: LogComplex) -> LogComplex {
        let (big, small) = if self.log10mag >= other.log10mag {
            (self, other)
        } else {
            (other, self)
        };
        if small.is_zero() {
            return big;
        }
        let ratio = small / big;
        if ratio.log10mag < -RANGE_LIMIT {
            return big;
        }
        let r = Complex64::from_polar(10f64.powf(ratio.log10mag), ratio.phase);
        big * LogComplex::from_complex(Complex64::new(1.0, 0.0) + r)
    }
}

impl Sub for LogComplex {
    type Output = LogComplex;
    fn sub(self, other: LogComplex) -> LogComplex {
        self + -other
    }
}

impl Mul for LogComplex {
    type Output = LogComplex;
    fn mul(self, rhs: LogComplex) -> LogComplex {
        LogComplex::new(self.log10mag + rhs.log10mag, self.phase + rhs.phase)
    }
}

impl MulAssign for LogComplex {
    fn mul_assign(&mut self, rhs: LogComplex) {
        *self = *self * rhs;
    }
}

impl Div for LogComplex {
    type Output = LogComplex;
    fn div(self, rhs: LogComplex) -> LogComplex {
        LogComplex::new(self.log10mag - rhs.log10mag, self.phase - rhs.phase)
    }
}

impl DivAssign for LogComplex {
    fn div_assign(&mut self, rhs: LogComplex) {
        *self = *self / rhs;
    }
}

impl Neg for LogComplex {
    type Output = LogComplex;
    fn neg(self) -> LogComplex {
        LogComplex::new(self.log10mag, self.phase + PI)
    }
}

impl fmt::Display for LogComplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "10^{:.6}·e^(i{:.6})", self.log10mag, self.phase)
    }
}
