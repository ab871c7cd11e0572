//! Truncated complex Taylor series about a base point.
//!
//! A [`Jet`] of order `K` stores `c_0, ..., c_K` with
//! `f(z) ≈ Σ c_m (z - base)^m`. Arithmetic is exact up to floating rounding
//! for everything below order `K + 1`, which is how the crate obtains
//! derivatives of composed expressions without finite differences.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::geometry::MobiusMap;

/// Default truncation order.
pub const DEFAULT_ORDER: usize = 8;

/// Relative threshold below which a leading coefficient counts as zero when
/// cancelling a removable singularity.
pub const LEADING_ZERO_RTOL: f64 = 1e-12;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

#[derive(Debug, Clone, PartialEq)]
pub struct Jet {
    base: Complex64,
    coeffs: Vec<Complex64>,
}

impl Jet {
    pub fn new(base: Complex64, coeffs: Vec<Complex64>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::InvalidArgument("a jet needs at least one coefficient".into()));
        }
        if coeffs.iter().chain([&base]).any(|c| !(c.re.is_finite() && c.im.is_finite())) {
            return Err(Error::NonFinite);
        }
        Ok(Self { base, coeffs })
    }

    #[cfg(test)]
    pub(crate) fn from_parts(base: Complex64, coeffs: Vec<Complex64>) -> Self {
        debug_assert!(!coeffs.is_empty());
        Self { base, coeffs }
    }

    pub fn constant(base: Complex64, value: Complex64, order: usize) -> Self {
        let mut coeffs = vec![ZERO; order + 1];
        coeffs[0] = value;
        Self { base, coeffs }
    }

    pub fn zero(base: Complex64, order: usize) -> Self {
        Self::constant(base, ZERO, order)
    }

    /// The jet of the identity map `z` about `base`.
    pub fn variable(base: Complex64, order: usize) -> Self {
        let mut jet = Self::constant(base, base, order);
        if order >= 1 {
            jet.coeffs[1] = ONE;
        }
        jet
    }

    #[inline]
    pub fn base(&self) -> Complex64 {
        self.base
    }

    #[inline]
    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    #[inline]
    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    #[inline]
    pub fn value(&self) -> Complex64 {
        self.coeffs[0]
    }

    /// `c_m`, or zero past the truncation order.
    pub fn coeff(&self, m: usize) -> Complex64 {
        self.coeffs.get(m).copied().unwrap_or(ZERO)
    }

    /// `f^{(m)}(base) = m! c_m`.
    pub fn derivative(&self, m: usize) -> Complex64 {
        let fact: f64 = (1..=m).map(|k| k as f64).product();
        self.coeff(m) * fact
    }

    pub fn truncate(&self, order: usize) -> Jet {
        let mut coeffs = self.coeffs.clone();
        coeffs.resize(order + 1, ZERO);
        Jet { base: self.base, coeffs }
    }

    fn check_compatible(&self, other: &Jet) -> Result<()> {
        if self.base != other.base {
            return Err(Error::BaseMismatch);
        }
        if self.order() != other.order() {
            return Err(Error::OrderMismatch(self.order(), other.order()));
        }
        Ok(())
    }

    pub fn add(&self, other: &Jet) -> Result<Jet> {
        self.check_compatible(other)?;
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a + b).collect();
        Ok(Jet { base: self.base, coeffs })
    }

    pub fn sub(&self, other: &Jet) -> Result<Jet> {
        self.check_compatible(other)?;
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a - b).collect();
        Ok(Jet { base: self.base, coeffs })
    }

    /// Cauchy product truncated to the common order.
    pub fn mul(&self, other: &Jet) -> Result<Jet> {
        self.check_compatible(other)?;
        Ok(self.mul_unchecked(other))
    }

    fn mul_unchecked(&self, other: &Jet) -> Jet {
        let n = self.coeffs.len();
        let mut coeffs = vec![ZERO; n];
        for (m, slot) in coeffs.iter_mut().enumerate() {
            let mut acc = ZERO;
            for i in 0..=m {
                acc += self.coeffs[i] * other.coeffs[m - i];
            }
            *slot = acc;
        }
        Jet { base: self.base, coeffs }
    }

    pub fn scale(&self, k: Complex64) -> Jet {
        Jet { base: self.base, coeffs: self.coeffs.iter().map(|c| c * k).collect() }
    }

    pub fn add_scalar(&self, k: Complex64) -> Jet {
        let mut out = self.clone();
        out.coeffs[0] += k;
        out
    }

    /// Number of leading coefficients that are zero up to the relative
    /// threshold [`LEADING_ZERO_RTOL`].
    pub fn leading_zeros(&self) -> usize {
        let scale = self.coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max);
        let tol = LEADING_ZERO_RTOL * (1.0 + scale);
        self.coeffs.iter().take_while(|c| c.norm() <= tol).count()
    }

    /// Formal series division `num / den`.
    ///
    /// When `den` vanishes to order `v` at the base point, `num` must vanish to
    /// at least the same order; the common factor `(z - base)^v` is cancelled and
    /// the result has order `K - v`.
    pub fn div(num: &Jet, den: &Jet) -> Result<Jet> {
        num.check_compatible(den)?;
        let k = den.order();
        let v = den.leading_zeros();
        if v > k {
            return Err(Error::DivisionByZeroSeries);
        }
        if v > 0 {
            let vn = num.leading_zeros();
            if vn < v {
                return Err(Error::NonRemovableSingularity { numerator: vn, denominator: v });
            }
        }
        let n = &num.coeffs[v..];
        let d = &den.coeffs[v..];
        let mut q = Vec::with_capacity(k - v + 1);
        for m in 0..=(k - v) {
            let mut acc = n[m];
            for i in 0..m {
                acc -= q[i] * d[m - i];
            }
            q.push(acc / d[0]);
        }
        Ok(Jet { base: num.base, coeffs: q })
    }

    /// `1 / self`; the constant term must be nonzero.
    pub fn recip(&self) -> Result<Jet> {
        let one = Jet::constant(self.base, ONE, self.order());
        Jet::div(&one, self)
    }

    /// Re-expand the same truncated polynomial about `new_base`.
    pub fn recenter(&self, new_base: Complex64) -> Jet {
        let delta = new_base - self.base;
        let mut c = self.coeffs.clone();
        let k = c.len() - 1;
        // repeated synthetic division (Taylor shift)
        for i in 0..k {
            for j in (i..k).rev() {
                let next = c[j + 1];
                c[j] += delta * next;
            }
        }
        Jet { base: new_base, coeffs: c }
    }

    /// `outer ∘ inner`, where `outer` is expanded about the value of `inner`.
    ///
    /// The result is based at `inner.base()` with the smaller of the two orders.
    pub fn compose(outer: &Jet, inner: &Jet) -> Result<Jet> {
        let scale = 1.0 + outer.base.norm().max(inner.value().norm());
        if (outer.base - inner.value()).norm() > 1e-12 * scale {
            return Err(Error::BaseMismatch);
        }
        let order = outer.order().min(inner.order());
        let mut shift = inner.truncate(order);
        shift.coeffs[0] = ZERO;
        let mut acc = Jet::constant(inner.base, outer.coeffs[order], order);
        for m in (0..order).rev() {
            acc = acc.mul_unchecked(&shift).add_scalar(outer.coeffs[m]);
        }
        Ok(acc)
    }

    /// `(a u + b) / (c u + d)` applied to this jet.
    pub fn mobius(&self, map: &MobiusMap) -> Result<Jet> {
        let num = self.scale(map.a).add_scalar(map.b);
        let den = self.scale(map.c).add_scalar(map.d);
        if den.value() == ZERO {
            return Err(Error::PoleHit);
        }
        Jet::div(&num, &den)
    }

    /// `[self, w] = (self - w) / (1 - conj(w) self)`.
    pub fn bracket_with(&self, w: Complex64) -> Result<Jet> {
        let num = self.add_scalar(-w);
        let den = self.scale(-w.conj()).add_scalar(ONE);
        Jet::div(&num, &den)
    }

    /// Evaluate the truncated polynomial at `z`.
    pub fn eval(&self, z: Complex64) -> Complex64 {
        let h = z - self.base;
        self.coeffs.iter().rev().fold(ZERO, |acc, c| acc * h + c)
    }

    pub fn max_abs_diff(&self, other: &Jet) -> f64 {
        let n = self.coeffs.len().max(other.coeffs.len());
        (0..n).map(|m| (self.coeff(m) - other.coeff(m)).norm()).fold(0.0, f64::max)
    }
}
