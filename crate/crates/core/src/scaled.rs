//! Complex numbers with a decimal exponent.
//!
//! Amplitudes of product-form ansatzes are products of `N` per-site factors,
//! which leave the `f64` range quickly once couplings are large. A
//! [`ScaledComplex`] stores `mantissa * 10^exponent` with `1 <= |mantissa| < 10`
//! (or an exactly zero mantissa), so products never over- or underflow and
//! exact zeros stay exact.

use std::fmt;
use std::iter::{Product, Sum};
use std::ops::{Add, AddAssign, Div, DivAssign, Mul, MulAssign, Neg, Sub, SubAssign};

use num_complex::Complex64 as C64;

const POW10: [f64; 23] = [
    1e0, 1e1, 1e2, 1e3, 1e4, 1e5, 1e6, 1e7, 1e8, 1e9, 1e10, 1e11, 1e12, 1e13, 1e14, 1e15, 1e16,
    1e17, 1e18, 1e19, 1e20, 1e21, 1e22,
];

/// Beyond this exponent gap the smaller addend is below `f64` resolution.
const ADD_CUTOFF: i64 = 40;

/// `m * 10^k` using only exact powers of ten.
fn scale10(mut m: C64, mut k: i64) -> C64 {
    while k > 22 {
        m *= POW10[22];
        k -= 22;
    }
    while k < -22 {
        m /= POW10[22];
        k += 22;
    }
    if k >= 0 {
        m * POW10[k as usize]
    } else {
        m / POW10[(-k) as usize]
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ScaledComplex {
    mantissa: C64,
    exponent: i64,
}

impl ScaledComplex {
    pub const ZERO: Self = Self {
        mantissa: C64::new(0.0, 0.0),
        exponent: 0,
    };
    pub const ONE: Self = Self {
        mantissa: C64::new(1.0, 0.0),
        exponent: 0,
    };

    /// Builds `mantissa * 10^exponent` and renormalises.
    pub fn new(mantissa: C64, exponent: i64) -> Self {
        Self::normalize(mantissa, exponent)
    }

    pub fn mantissa(&self) -> C64 {
        self.mantissa
    }

    pub fn exponent(&self) -> i64 {
        self.exponent
    }

    pub fn is_zero(&self) -> bool {
        self.mantissa.re == 0.0 && self.mantissa.im == 0.0
    }

    pub fn is_finite(&self) -> bool {
        self.mantissa.re.is_finite() && self.mantissa.im.is_finite()
    }

    fn normalize(m: C64, e: i64) -> Self {
        if m.re == 0.0 && m.im == 0.0 {
            return Self::ZERO;
        }
        if !(m.re.is_finite() && m.im.is_finite()) {
            return Self {
                mantissa: m,
                exponent: e,
            };
        }
        let n2 = m.norm_sqr();
        // fast paths for the results of a single multiplication or addition
        if (1.0..100.0).contains(&n2) {
            return Self {
                mantissa: m,
                exponent: e,
            };
        }
        if (100.0..10000.0).contains(&n2) {
            return Self::fixup(m / 10.0, e + 1);
        }
        let k = m.norm().log10().floor() as i64;
        Self::fixup(scale10(m, -k), e + k)
    }

    fn fixup(mut m: C64, mut e: i64) -> Self {
        loop {
            let n2 = m.norm_sqr();
            if n2 >= 100.0 {
                m /= 10.0;
                e += 1;
                // |m| = 10 can round to just below 1; accept it rather than bounce
                if m.norm_sqr() < 1.0 {
                    return Self {
                        mantissa: m,
                        exponent: e,
                    };
                }
            } else if n2 < 1.0 {
                m *= 10.0;
                e -= 1;
            } else {
                return Self {
                    mantissa: m,
                    exponent: e,
                };
            }
        }
    }

    /// `exp(z)` without forming `exp(z.re)` in `f64`.
    pub fn from_ln(z: C64) -> Self {
        if z.re == f64::NEG_INFINITY {
            return Self::ZERO;
        }
        if !z.re.is_finite() || !z.im.is_finite() {
            return Self {
                mantissa: C64::new(f64::NAN, f64::NAN),
                exponent: 0,
            };
        }
        let e = (z.re / std::f64::consts::LN_10).floor();
        let rem = z.re - e * std::f64::consts::LN_10;
        Self::normalize(C64::from_polar(rem.exp(), z.im), e as i64)
    }

    /// Principal natural logarithm; `-inf` real part for zero.
    pub fn ln(&self) -> C64 {
        if self.is_zero() {
            return C64::new(f64::NEG_INFINITY, 0.0);
        }
        C64::new(
            self.mantissa.norm().ln() + self.exponent as f64 * std::f64::consts::LN_10,
            self.mantissa.arg(),
        )
    }

    /// `log10 |z|`; `-inf` for zero.
    pub fn log10_abs(&self) -> f64 {
        if self.is_zero() {
            return f64::NEG_INFINITY;
        }
        self.mantissa.norm().log10() + self.exponent as f64
    }

    /// Converts to a native complex number, saturating to infinity or zero.
    pub fn to_complex(&self) -> C64 {
        if self.is_zero() {
            return C64::new(0.0, 0.0);
        }
        if self.exponent > 310 {
            return self.mantissa * f64::INFINITY;
        }
        if self.exponent < -345 {
            return C64::new(0.0, 0.0);
        }
        scale10(self.mantissa, self.exponent)
    }

    /// Multiplies by `10^k` exactly (only the exponent changes).
    pub fn scale_pow10(self, k: i64) -> Self {
        if self.is_zero() {
            return self;
        }
        Self {
            mantissa: self.mantissa,
            exponent: self.exponent + k,
        }
    }

    pub fn conj(&self) -> Self {
        Self {
            mantissa: self.mantissa.conj(),
            exponent: self.exponent,
        }
    }

    /// `|z|^2` as a scaled real.
    pub fn norm_sqr(&self) -> Self {
        Self::normalize(C64::new(self.mantissa.norm_sqr(), 0.0), 2 * self.exponent)
    }

    pub fn abs(&self) -> Self {
        Self::normalize(C64::new(self.mantissa.norm(), 0.0), self.exponent)
    }

    /// `self / other` returned as a native complex number.
    pub fn ratio(&self, other: &Self) -> C64 {
        (*self / *other).to_complex()
    }

    /// `|a - b| / max(|a|, |b|)`, zero when both are zero.
    pub fn rel_diff(a: &Self, b: &Self) -> f64 {
        if a.is_zero() && b.is_zero() {
            return 0.0;
        }
        let scale = if a.log10_abs() >= b.log10_abs() { a.abs() } else { b.abs() };
        ((*a - *b).abs() / scale).to_complex().re
    }

    pub fn powi(self, mut k: i64) -> Self {
        let mut base = if k < 0 { Self::ONE / self } else { self };
        k = k.abs();
        let mut acc = Self::ONE;
        while k > 0 {
            if k & 1 == 1 {
                acc *= base;
            }
            base *= base;
            k >>= 1;
        }
        acc
    }
}

/// Running product of native factors that renormalises only when needed.
#[derive(Clone, Copy, Debug)]
pub struct ProductAcc {
    acc: C64,
    exponent: i64,
}

const ACC_HI: f64 = 1e100;
const ACC_LO: f64 = 1e-100;

impl ProductAcc {
    pub fn new() -> Self {
        Self {
            acc: C64::new(1.0, 0.0),
            exponent: 0,
        }
    }

    #[inline]
    pub fn mul(&mut self, z: C64) {
        let a = z.norm_sqr();
        if (ACC_LO * ACC_LO..=ACC_HI * ACC_HI).contains(&a) {
            self.acc *= z;
        } else if a == 0.0 {
            self.acc = C64::new(0.0, 0.0);
            return;
        } else {
            let s = ScaledComplex::from(z);
            self.acc *= s.mantissa;
            self.exponent += s.exponent;
        }
        let m = self.acc.norm_sqr();
        if m > ACC_HI * ACC_HI || (m < ACC_LO * ACC_LO && m != 0.0) {
            let s = ScaledComplex::from(self.acc);
            self.acc = s.mantissa;
            self.exponent += s.exponent;
        }
    }

    pub fn mul_scaled(&mut self, s: ScaledComplex) {
        self.mul(s.mantissa);
        if !self.is_zero() {
            self.exponent += s.exponent;
        }
    }

    pub fn is_zero(&self) -> bool {
        self.acc.re == 0.0 && self.acc.im == 0.0
    }

    pub fn finish(self) -> ScaledComplex {
        ScaledComplex::new(self.acc, self.exponent)
    }
}

impl Default for ProductAcc {
    fn default() -> Self {
        Self::new()
    }
}

impl Default for ScaledComplex {
    fn default() -> Self {
        Self::ZERO
    }
}

impl From<C64> for ScaledComplex {
    fn from(z: C64) -> Self {
        Self::normalize(z, 0)
    }
}

impl From<f64> for ScaledComplex {
    fn from(x: f64) -> Self {
        Self::normalize(C64::new(x, 0.0), 0)
    }
}

impl Mul for ScaledComplex {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        if self.is_zero() || rhs.is_zero() {
            return Self::ZERO;
        }
        Self::normalize(self.mantissa * rhs.mantissa, self.exponent + rhs.exponent)
    }
}

impl Mul<C64> for ScaledComplex {
    type Output = Self;
    fn mul(self, rhs: C64) -> Self {
        self * Self::from(rhs)
    }
}

impl MulAssign for ScaledComplex {
    fn mul_assign(&mut self, rhs: Self) {
        *self = *self * rhs;
    }
}

impl MulAssign<C64> for ScaledComplex {
    fn mul_assign(&mut self, rhs: C64) {
        *self = *self * rhs;
    }
}

impl Div for ScaledComplex {
    type Output = Self;
    fn div(self, rhs: Self) -> Self {
        if self.is_zero() && !rhs.is_zero() {
            return Self::ZERO;
        }
        Self::normalize(self.mantissa / rhs.mantissa, self.exponent - rhs.exponent)
    }
}

impl DivAssign for ScaledComplex {
    fn div_assign(&mut self, rhs: Self) {
        *self = *self / rhs;
    }
}

impl Add for ScaledComplex {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        if self.is_zero() {
            return rhs;
        }
        if rhs.is_zero() {
            return self;
        }
        let (big, small) = if self.exponent >= rhs.exponent {
            (self, rhs)
        } else {
            (rhs, self)
        };
        let gap = big.exponent - small.exponent;
        if gap > ADD_CUTOFF {
            return big;
        }
        Self::normalize(big.mantissa + scale10(small.mantissa, -gap), big.exponent)
    }
}

impl AddAssign for ScaledComplex {
    fn add_assign(&mut self, rhs: Self) {
        *self = *self + rhs;
    }
}

impl Neg for ScaledComplex {
    type Output = Self;
    fn neg(self) -> Self {
        Self {
            mantissa: -self.mantissa,
            exponent: self.exponent,
        }
    }
}

impl Sub for ScaledComplex {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        self + (-rhs)
    }
}

impl SubAssign for ScaledComplex {
    fn sub_assign(&mut self, rhs: Self) {
        *self = *self - rhs;
    }
}

impl Sum for ScaledComplex {
    fn sum<I: Iterator<Item = Self>>(iter: I) -> Self {
        iter.fold(Self::ZERO, |a, b| a + b)
    }
}

impl Product for ScaledComplex {
    fn product<I: Iterator<Item = Self>>(iter: I) -> Self {
        iter.fold(Self::ONE, |a, b| a * b)
    }
}

impl fmt::Display for ScaledComplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "({}{:+}i)e{}",
            self.mantissa.re, self.mantissa.im, self.exponent
        )
    }
}
