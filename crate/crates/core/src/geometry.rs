//! Points of the unit disk, the pseudo-hyperbolic bracket `[z, w]`, the
//! hyperbolic distance, Möbius maps and the closed disks they produce.

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Absolute tolerance for closed-disk membership tests.
pub const EPS_MEMBERSHIP: f64 = 1e-9;

/// Slack admitted when a point is meant to lie on the closed disk.
const EPS_UNIT: f64 = 1e-12;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// A complex number in the open or closed unit disk.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiskPoint(Complex64);

impl DiskPoint {
    pub const ORIGIN: DiskPoint = DiskPoint(ZERO);

    /// A point of the open disk, `|z| < 1`.
    pub fn interior(z: Complex64) -> Result<Self> {
        check_finite(z)?;
        if z.norm() < 1.0 {
            Ok(Self(z))
        } else {
            Err(Error::OutsideDisk { re: z.re, im: z.im, domain: "open" })
        }
    }

    /// A point of the closed disk, `|z| <= 1` (up to rounding in the last bits).
    pub fn closed(z: Complex64) -> Result<Self> {
        check_finite(z)?;
        if z.norm() <= 1.0 + EPS_UNIT {
            Ok(Self(z))
        } else {
            Err(Error::OutsideDisk { re: z.re, im: z.im, domain: "closed" })
        }
    }

    pub fn new(re: f64, im: f64) -> Result<Self> {
        Self::interior(Complex64::new(re, im))
    }

    pub fn real(x: f64) -> Result<Self> {
        Self::interior(Complex64::new(x, 0.0))
    }

    #[inline]
    pub fn value(self) -> Complex64 {
        self.0
    }

    pub fn is_interior(self) -> bool {
        self.0.norm() < 1.0
    }

    pub fn is_boundary(self) -> bool {
        self.0.norm() >= 1.0 - EPS_UNIT
    }
}

impl From<DiskPoint> for Complex64 {
    fn from(p: DiskPoint) -> Self {
        p.0
    }
}

fn check_finite(z: Complex64) -> Result<()> {
    if z.re.is_finite() && z.im.is_finite() {
        Ok(())
    } else {
        Err(Error::NonFinite)
    }
}

/// `(z - w) / (1 - conj(w) z)` with no argument checks.
#[inline]
pub(crate) fn bracket_raw(z: Complex64, w: Complex64) -> Complex64 {
    (z - w) / (ONE - w.conj() * z)
}

/// The bracket `[z, w] = (z - w) / (1 - conj(w) z)`.
///
/// Both arguments may lie on the closed disk. On the boundary the diagonal is
/// defined as `[z, z] = 0`; two distinct boundary points are rejected.
pub fn bracket(z: DiskPoint, w: DiskPoint) -> Result<Complex64> {
    if z.0 == w.0 {
        return Ok(ZERO);
    }
    if z.is_boundary() && w.is_boundary() {
        return Err(Error::DegenerateBracket);
    }
    let den = ONE - w.0.conj() * z.0;
    if den == ZERO {
        return Err(Error::DegenerateBracket);
    }
    Ok((z.0 - w.0) / den)
}

/// Pseudo-hyperbolic distance `|[z, w]|`.
pub fn pseudo_distance(z: DiskPoint, w: DiskPoint) -> Result<f64> {
    bracket(z, w).map(|b| b.norm())
}

/// Hyperbolic distance `log((1 + |[z,w]|) / (1 - |[z,w]|))` between interior points.
pub fn hyperbolic_distance(z: DiskPoint, w: DiskPoint) -> Result<f64> {
    for p in [z, w] {
        if !p.is_interior() {
            return Err(Error::OutsideDisk { re: p.0.re, im: p.0.im, domain: "open" });
        }
    }
    Ok(distance_from_pseudo(bracket_raw(z.0, w.0).norm()))
}

#[inline]
pub(crate) fn distance_from_pseudo(rho: f64) -> f64 {
    2.0 * rho.atanh()
}

/// `z ↦ (a z + b) / (c z + d)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MobiusMap {
    pub a: Complex64,
    pub b: Complex64,
    pub c: Complex64,
    pub d: Complex64,
}

impl MobiusMap {
    pub fn new(a: Complex64, b: Complex64, c: Complex64, d: Complex64) -> Self {
        Self { a, b, c, d }
    }

    pub fn identity() -> Self {
        Self::new(ONE, ZERO, ZERO, ONE)
    }

    /// The disk automorphism `z ↦ e^{iθ} (z - p) / (1 - conj(p) z)`.
    pub fn automorphism(theta: f64, p: DiskPoint) -> Result<Self> {
        if !p.is_interior() {
            return Err(Error::OutsideDisk { re: p.0.re, im: p.0.im, domain: "open" });
        }
        let rot = Complex64::from_polar(1.0, theta);
        Ok(Self::new(rot, -rot * p.0, -p.0.conj(), ONE))
    }

    /// `x ↦ [x, -p] = (x + p) / (1 + conj(p) x)`, the inverse of `[·, p]`.
    pub fn translation_from_origin(p: DiskPoint) -> Self {
        Self::new(ONE, p.0, p.0.conj(), ONE)
    }

    pub fn determinant(&self) -> Complex64 {
        self.a * self.d - self.b * self.c
    }

    pub fn is_degenerate(&self) -> bool {
        self.determinant() == ZERO
    }

    pub fn apply(&self, z: Complex64) -> Result<Complex64> {
        let den = self.c * z + self.d;
        if den == ZERO {
            if self.is_degenerate() && self.d != ZERO {
                return Ok(self.b / self.d);
            }
            return Err(Error::PoleHit);
        }
        Ok((self.a * z + self.b) / den)
    }

    /// `self ∘ inner`.
    pub fn compose(&self, inner: &MobiusMap) -> MobiusMap {
        MobiusMap::new(
            self.a * inner.a + self.b * inner.c,
            self.a * inner.b + self.b * inner.d,
            self.c * inner.a + self.d * inner.c,
            self.c * inner.b + self.d * inner.d,
        )
    }

    pub fn inverse(&self) -> Result<MobiusMap> {
        if self.is_degenerate() {
            return Err(Error::DegenerateMap);
        }
        Ok(MobiusMap::new(self.d, -self.b, -self.c, self.a))
    }

    /// Image of the closed unit disk.
    pub fn disk_image(&self) -> Result<ClosedDisk> {
        let (cc, dd) = (self.c.norm_sqr(), self.d.norm_sqr());
        if cc >= dd {
            return Err(Error::UnboundedImage);
        }
        let denom = cc - dd;
        let center = (self.a * self.c.conj() - self.b * self.d.conj()) / denom;
        let radius = self.determinant().norm() / (dd - cc);
        Ok(ClosedDisk { center, radius })
    }

    /// Whether the map sends the closed disk into itself.
    pub fn is_self_map(&self) -> bool {
        match self.disk_image() {
            Ok(img) => img.center.norm() + img.radius <= 1.0 + EPS_MEMBERSHIP,
            Err(_) => false,
        }
    }

    /// Whether the map is a conformal automorphism of the disk.
    pub fn is_automorphism(&self) -> bool {
        match self.disk_image() {
            Ok(img) => {
                !self.is_degenerate()
                    && img.center.norm() <= 1e-10
                    && (img.radius - 1.0).abs() <= 1e-10
            }
            Err(_) => false,
        }
    }
}

/// `{w : |w - center| <= radius}`; radius zero is a single point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClosedDisk {
    pub center: Complex64,
    pub radius: f64,
}

impl ClosedDisk {
    pub fn new(center: Complex64, radius: f64) -> Result<Self> {
        check_finite(center)?;
        if radius.is_nan() || radius < 0.0 || !radius.is_finite() {
            return Err(Error::InvalidArgument(format!("disk radius {radius}")));
        }
        Ok(Self { center, radius })
    }

    pub fn point(center: Complex64) -> Self {
        Self { center, radius: 0.0 }
    }

    pub fn unit() -> Self {
        Self { center: ZERO, radius: 1.0 }
    }

    /// `|w - center| - radius`; non-positive inside.
    pub fn excess(&self, w: Complex64) -> f64 {
        (w - self.center).norm() - self.radius
    }

    pub fn contains(&self, w: Complex64) -> bool {
        self.excess(w) <= EPS_MEMBERSHIP
    }

    pub fn boundary_point(&self, theta: f64) -> Complex64 {
        self.center + Complex64::from_polar(self.radius, theta)
    }

    /// Largest modulus attained on the disk.
    pub fn sup_modulus(&self) -> f64 {
        self.center.norm() + self.radius
    }

    /// Smallest modulus attained on the disk.
    pub fn inf_modulus(&self) -> f64 {
        (self.center.norm() - self.radius).max(0.0)
    }
}
