//! Sharpened value bounds built from Schur parameters: value-region disks,
//! modulus chains `T_0 ∘ ... ∘ T_n`, distance chains `R_n`, two-sided modulus
//! bounds and the Dieudonné family of derivative estimates.

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::function::AnalyticFn;
use crate::geometry::{bracket_raw, ClosedDisk, DiskPoint, MobiusMap};
use crate::hdq::EPS_UNIMODULAR;
use crate::jet::Jet;
use crate::peschl::PeschlValues;

/// Radii below this are reported as exactly zero.
pub const RADIUS_CLAMP: f64 = 1e-12;

/// Slack allowed in the Schwarz-Pick consistency check of Dieudonné data.
pub const EPS_CONSISTENCY: f64 = 1e-9;

/// Tolerance for the hypotheses `f(0) = 0` and `f ∉ Aut(D)`.
const EPS_HYPOTHESIS: f64 = 1e-12;

const ONE: Complex64 = Complex64::new(1.0, 0.0);
const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// Two sides of an inequality `lhs <= rhs`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Slack {
    pub lhs: f64,
    pub rhs: f64,
}

impl Slack {
    /// `rhs - lhs`; non-negative when the inequality holds.
    pub fn margin(&self) -> f64 {
        self.rhs - self.lhs
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ValueRegion {
    pub disk: ClosedDisk,
    /// False when the last parameter is unimodular; the value is then only
    /// known to lie in the closed disk, not its interior.
    pub interior_refinement: bool,
}

/// `A_j(x) = (τ_j x + γ_j) / (1 + conj(γ_j) τ_j x)`.
fn a_map(tau: Complex64, gamma: Complex64) -> MobiusMap {
    MobiusMap::new(tau, gamma, gamma.conj() * tau, ONE)
}

/// `T_j(x) = (|τ_j| x + |γ_j|) / (1 + |τ_j γ_j| x)`.
#[inline]
fn t_map(tau: f64, gamma: f64, x: f64) -> f64 {
    (tau * x + gamma) / (1.0 + tau * gamma * x)
}

fn check_lengths(nodes: &[DiskPoint], gammas: &[Complex64]) -> Result<()> {
    if nodes.is_empty() || nodes.len() != gammas.len() {
        return Err(Error::InvalidArgument(format!(
            "need matching non-empty node and parameter lists, got {} and {}",
            nodes.len(),
            gammas.len()
        )));
    }
    Ok(())
}

fn check_strict(gammas: &[Complex64]) -> Result<()> {
    for (index, g) in gammas.iter().enumerate() {
        if g.norm() >= 1.0 - EPS_UNIMODULAR {
            return Err(Error::GammaOutOfRange { index, modulus: g.norm() });
        }
    }
    Ok(())
}

/// The closed disk `(A_0 ∘ ... ∘ A_n)(D̄)` containing every `f(a)` compatible
/// with the parameters `γ_j` at the nodes `z_j`.
///
/// If `a` coincides with a node `z_j` the composition stops there and the
/// region is the single point `(A_0 ∘ ... ∘ A_{j-1})(γ_j)`.
pub fn value_region(nodes: &[DiskPoint], gammas: &[Complex64], a: DiskPoint) -> Result<ValueRegion> {
    check_lengths(nodes, gammas)?;
    let last = gammas.len() - 1;
    check_strict(&gammas[..last])?;
    let last_mod = gammas[last].norm();
    if last_mod > 1.0 + EPS_UNIMODULAR {
        return Err(Error::GammaOutOfRange { index: last, modulus: last_mod });
    }
    let a = a.value();
    let mut acc = MobiusMap::identity();
    for (z, g) in nodes.iter().zip(gammas) {
        let tau = bracket_raw(a, z.value());
        if tau == ZERO {
            let point = acc.apply(*g)?;
            return Ok(ValueRegion { disk: ClosedDisk::point(point), interior_refinement: true });
        }
        acc = acc.compose(&a_map(tau, *g));
    }
    let mut disk = acc.disk_image()?;
    if disk.radius < RADIUS_CLAMP {
        disk.radius = 0.0;
    }
    Ok(ValueRegion { disk, interior_refinement: last_mod < 1.0 - EPS_UNIMODULAR })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundChain {
    /// `T_0(1), (T_0 ∘ T_1)(1), ..., (T_0 ∘ ... ∘ T_n)(1)`.
    pub values: Vec<f64>,
    #[serde(skip)]
    pub nodes_used: Vec<DiskPoint>,
    #[serde(skip)]
    pub gammas_used: Vec<Complex64>,
}

impl BoundChain {
    pub fn last(&self) -> f64 {
        *self.values.last().expect("chains are non-empty")
    }
}

/// Upper bounds for `|f(a)|`, one per prefix of the data, non-increasing.
pub fn modulus_bound_chain(nodes: &[DiskPoint], gammas: &[Complex64], a: DiskPoint) -> Result<BoundChain> {
    check_lengths(nodes, gammas)?;
    check_strict(gammas)?;
    let taus: Vec<f64> = nodes.iter().map(|z| bracket_raw(a.value(), z.value()).norm()).collect();
    let mods: Vec<f64> = gammas.iter().map(|g| g.norm()).collect();
    let values = (0..nodes.len())
        .map(|k| (0..=k).rev().fold(1.0, |x, j| t_map(taus[j], mods[j], x)))
        .collect();
    Ok(BoundChain { values, nodes_used: nodes.to_vec(), gammas_used: gammas.to_vec() })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DistanceChain {
    /// `R_0(1) >= R_1(1) >= ... >= R_n(1) >= 1`.
    pub values: Vec<f64>,
}

impl DistanceChain {
    pub fn last(&self) -> f64 {
        *self.values.last().expect("chains are non-empty")
    }
}

/// Upper bounds for `exp d(f(z), f(z0))` with `R_n = R_0 ∘ T_1 ∘ ... ∘ T_n`,
/// `R_0(x) = (1 + |τ_0| x) / (1 - |τ_0| x)` and `τ_j = [z, z_j]`. The first node
/// must be `z0`.
pub fn distance_bound_chain(
    nodes: &[DiskPoint],
    gammas: &[Complex64],
    z: DiskPoint,
    z0: DiskPoint,
) -> Result<DistanceChain> {
    check_lengths(nodes, gammas)?;
    if nodes[0] != z0 {
        return Err(Error::InvalidArgument("the first node must be z0".into()));
    }
    check_strict(gammas)?;
    let taus: Vec<f64> = nodes.iter().map(|n| bracket_raw(z.value(), n.value()).norm()).collect();
    let mods: Vec<f64> = gammas.iter().map(|g| g.norm()).collect();
    let r0 = |x: f64| (1.0 + taus[0] * x) / (1.0 - taus[0] * x);
    let values = (0..nodes.len())
        .map(|k| r0((1..=k).rev().fold(1.0, |x, j| t_map(taus[j], mods[j], x))))
        .collect();
    Ok(DistanceChain { values })
}

/// `R_1(1)` for a repeated node: `(1 + 2tc_1 + t²) / (1 - t²)`.
pub fn repeated_node_r1(t: f64, c1: f64) -> f64 {
    (1.0 + 2.0 * t * c1 + t * t) / (1.0 - t * t)
}

/// `R_2(1)` for a repeated node, expanded from `R_0 ∘ T_1 ∘ T_2`.
pub fn repeated_node_r2(t: f64, c1: f64, c2: f64) -> f64 {
    let p = c1 * c2;
    let num = 1.0 + t * (c1 + c2 + p) + t * t * (c1 + c2 + p) + t.powi(3);
    let den = 1.0 + t * (c2 - c1 + p) + t * t * (c1 - c2 - p) - t.powi(3);
    num / den
}

/// The first three modulus bounds for nodes at the origin, written as
/// rational functions of `t = |z|` and `c_j = |γ_j|`:
/// `[T_0(1), T_0(T_1(1)), T_0(T_1(T_2(1)))]`.
pub fn origin_chain_closed_forms(c: [f64; 3], t: f64) -> [f64; 3] {
    let [c0, c1, c2] = c;
    let first = (c0 + t) / (1.0 + c0 * t);
    let mid = c1 + c0 * c1;
    let second = (c0 + mid * t + t * t) / (c0 * t * t + mid * t + 1.0);
    let b1 = c1 + c0 * c2 + c0 * c1 * c2;
    let b2 = c0 * c1 + c2 + c1 * c2;
    let third = (c0 + b1 * t + b2 * t * t + t.powi(3)) / (c0 * t.powi(3) + b1 * t * t + b2 * t + 1.0);
    [first, second, third]
}

/// Lower and upper bounds for `|f(z)|` from `γ_0 = f(z_0)`, `τ_0 = [z, z_0]` and,
/// when known, `f_1(z; z_0)`.
///
/// Without `f_1` the worst case `|f_1| = 1` is used and the lower bound is
/// clamped at zero.
pub fn two_sided_modulus_bounds(
    gamma0: Complex64,
    tau0: Complex64,
    f1_at_z: Option<Complex64>,
) -> Result<(f64, f64)> {
    if gamma0.norm() >= 1.0 {
        return Err(Error::GammaOutOfRange { index: 0, modulus: gamma0.norm() });
    }
    if tau0.norm() >= 1.0 {
        return Err(Error::InvalidArgument(format!("|τ_0| = {} is not below 1", tau0.norm())));
    }
    let g = gamma0.norm();
    let (s, lower) = match f1_at_z {
        Some(w) => {
            if w.norm() > 1.0 + EPS_UNIMODULAR {
                return Err(Error::InvalidArgument(format!("|f_1(z)| = {} exceeds 1", w.norm())));
            }
            let s = (tau0 * w).norm();
            (s, (g - s).abs() / (1.0 - s * g))
        }
        None => {
            let s = tau0.norm();
            (s, ((g - s) / (1.0 - s * g)).max(0.0))
        }
    };
    let upper = (g + s) / (1.0 + s * g);
    Ok((lower, upper))
}

/// The disk of derivatives `f'(z)` admissible for `f ∈ H(D)` with `f(z0) = w0`,
/// `f(z) = w`.
pub fn dieudonne_region(z0: DiskPoint, w0: DiskPoint, z: DiskPoint, w: Complex64) -> Result<ClosedDisk> {
    let (z0, w0, z) = (z0.value(), w0.value(), z.value());
    if z == z0 {
        return Err(Error::InvalidArgument("z must differ from z0".into()));
    }
    if !(w0.norm() < 1.0 && w.norm() < 1.0 && z.norm() < 1.0 && z0.norm() < 1.0) {
        return Err(Error::InvalidArgument("all points must lie in the open disk".into()));
    }
    let tau = bracket_raw(z, z0).norm();
    if bracket_raw(w, w0).norm() > tau + EPS_CONSISTENCY {
        return Err(Error::InconsistentData);
    }
    let q0 = 1.0 - w0.norm_sqr();
    let center = (w - w0) / (z - z0) * ((ONE - w0.conj() * w) / q0) * ((1.0 - z0.norm_sqr()) / (ONE - z0.conj() * z));
    let radius = ((ONE - w0.conj() * w).norm_sqr() / q0 * tau - (w - w0).norm_sqr() / q0 / tau)
        / (1.0 - z.norm_sqr());
    Ok(ClosedDisk { center, radius: radius.max(0.0) })
}

fn require_vanishing_at_origin(f: &AnalyticFn) -> Result<Jet> {
    f.require_admissible()?;
    let at0 = f.eval_jet(DiskPoint::ORIGIN, 1)?;
    if at0.value().norm() > EPS_HYPOTHESIS {
        return Err(Error::HypothesisViolated("f(0) must vanish"));
    }
    Ok(at0)
}

fn require_punctured(z: DiskPoint) -> Result<Complex64> {
    let v = z.value();
    if v.norm() == 0.0 || !z.is_interior() {
        return Err(Error::HypothesisViolated("z must satisfy 0 < |z| < 1"));
    }
    Ok(v)
}

/// Second-order Dieudonné inequality for `f(0) = 0`, `f ∉ Aut(D)`:
///
/// ```text
/// |½z²f'' − (zf' − f)/(1 − |z|²) + conj(f)(zf' − f)²/(|z|² − |f|²)| + |z||zf' − f|²/(|z|² − |f|²)
///     <= |z|(|z|² − |f|²)/(1 − |z|²)²
/// ```
pub fn dieudonne_second_order_residual(f: &AnalyticFn, z: DiskPoint) -> Result<Slack> {
    let at0 = require_vanishing_at_origin(f)?;
    if at0.coeff(1).norm() >= 1.0 - EPS_HYPOTHESIS {
        return Err(Error::HypothesisViolated("f must not be a disk automorphism"));
    }
    let zv = require_punctured(z)?;
    let jet = f.eval_jet(z, 2)?;
    let (fz, f1, f2) = (jet.value(), jet.derivative(1), jet.derivative(2));
    let az2 = zv.norm_sqr();
    let gap = az2 - fz.norm_sqr();
    if gap <= 0.0 {
        return Err(Error::HypothesisViolated("|f(z)| must be below |z|"));
    }
    let e = zv * f1 - fz;
    let inner = 0.5 * zv * zv * f2 - e / (1.0 - az2) + fz.conj() * e * e / gap;
    let lhs = inner.norm() + zv.norm() * e.norm_sqr() / gap;
    let rhs = zv.norm() * gap / (1.0 - az2).powi(2);
    Ok(Slack { lhs, rhs })
}

/// The equivalent form `½|D_2 g(z)| + |D_1 g(z)|² <= 1` with `g = f / z`.
pub fn dieudonne_second_order_g_form(f: &AnalyticFn, z: DiskPoint) -> Result<Slack> {
    require_vanishing_at_origin(f)?;
    let zv = require_punctured(z)?;
    let g = Jet::div(&f.eval_jet(z, 3)?, &Jet::variable(zv, 3))?;
    let d = PeschlValues::from_jet(&g)?;
    Ok(Slack { lhs: 0.5 * d.d2.norm() + d.d1.norm_sqr(), rhs: 1.0 })
}

/// Dieudonné refinement with the `f'(0)` term, for `f(0) = 0`:
///
/// ```text
/// |f'(z)(1 − |f'(0)|²) − 2f/z + conj(f'(0))(f/z)² + f'(0)|
///     <= (|z − conj(f'(0)) f|² − |f/z − f'(0)|²) / (1 − |z|²)
/// ```
pub fn dieudonne_fprime0_residual(f: &AnalyticFn, z: DiskPoint) -> Result<Slack> {
    let at0 = require_vanishing_at_origin(f)?;
    let zv = require_punctured(z)?;
    let a = at0.coeff(1);
    let jet = f.eval_jet(z, 1)?;
    let (fz, f1) = (jet.value(), jet.coeff(1));
    let ratio = fz / zv;
    let lhs = (f1 * (1.0 - a.norm_sqr()) - 2.0 * ratio + a.conj() * ratio * ratio + a).norm();
    let rhs = ((zv - a.conj() * fz).norm_sqr() - (ratio - a).norm_sqr()) / (1.0 - zv.norm_sqr());
    Ok(Slack { lhs, rhs })
}

/// The `f'(0) = 0` special case: `|f'(z) − 2f(z)/z| <= (|z|⁴ − |f|²) / (|z|²(1 − |z|²))`.
pub fn dieudonne_fprime0_special(f: &AnalyticFn, z: DiskPoint) -> Result<Slack> {
    let at0 = require_vanishing_at_origin(f)?;
    if at0.coeff(1).norm() > EPS_HYPOTHESIS {
        return Err(Error::HypothesisViolated("f'(0) must vanish"));
    }
    let zv = require_punctured(z)?;
    let jet = f.eval_jet(z, 1)?;
    let (fz, f1) = (jet.value(), jet.coeff(1));
    let az2 = zv.norm_sqr();
    let lhs = (f1 - 2.0 * fz / zv).norm();
    let rhs = (az2 * az2 - fz.norm_sqr()) / (az2 * (1.0 - az2));
    Ok(Slack { lhs, rhs })
}

/// The classical Dieudonné inequality `|z f'(z) − f(z)| <= (|z|² − |f(z)|²)/(1 − |z|²)`
/// for `f(0) = 0`.
pub fn dieudonne_classical(f: &AnalyticFn, z: DiskPoint) -> Result<Slack> {
    require_vanishing_at_origin(f)?;
    let zv = require_punctured(z)?;
    let jet = f.eval_jet(z, 1)?;
    let (fz, f1) = (jet.value(), jet.coeff(1));
    let lhs = (zv * f1 - fz).norm();
    let rhs = (zv.norm_sqr() - fz.norm_sqr()) / (1.0 - zv.norm_sqr());
    Ok(Slack { lhs, rhs })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::function::{random_schur_fn_with, schur_synth, validate_bounded};
    use crate::geometry::{hyperbolic_distance, pseudo_distance};
    use crate::hdq::{gamma_sequence, iterated};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    fn p(re: f64, im: f64) -> DiskPoint {
        DiskPoint::new(re, im).unwrap()
    }

    fn o() -> DiskPoint {
        DiskPoint::ORIGIN
    }

    fn poly(coeffs: &[f64]) -> AnalyticFn {
        let f = AnalyticFn::polynomial(coeffs.iter().map(|&x| c(x)).collect()).unwrap();
        validate_bounded(&f, 1024, 0.999).unwrap().0
    }

    fn power(n: usize) -> AnalyticFn {
        AnalyticFn::blaschke(0.0, &vec![DiskPoint::ORIGIN; n]).unwrap()
    }

    fn disk_close(d: ClosedDisk, center: Complex64, radius: f64, tol: f64) -> bool {
        (d.center - center).norm() <= tol && (d.radius - radius).abs() <= tol
    }

    #[test]
    fn value_region_examples() {
        let r = value_region(&[o()], &[c(0.0)], p(0.5, 0.0)).unwrap();
        assert!(disk_close(r.disk, c(0.0), 0.5, 1e-15));

        let r = value_region(&[o()], &[c(0.5)], p(0.5, 0.0)).unwrap();
        assert!(disk_close(r.disk, c(0.4), 0.4, 1e-15));
        // the segment [0, 0.8] of the two-sided bound spans the disk
        assert!((r.disk.inf_modulus() - 0.0).abs() < 1e-15 && (r.disk.sup_modulus() - 0.8).abs() < 1e-15);

        let r = value_region(&[o(), p(0.5, 0.0)], &[c(0.0), c(0.5)], p(0.5, 0.0)).unwrap();
        assert_eq!(r.disk.radius, 0.0);
        assert!((r.disk.center - c(0.25)).norm() < 1e-15);
    }

    #[test]
    fn value_region_errors_and_flags() {
        assert!(matches!(
            value_region(&[o(), o()], &[c(1.0), c(0.0)], p(0.5, 0.0)),
            Err(Error::GammaOutOfRange { index: 0, .. })
        ));
        let r = value_region(&[o(), o()], &[c(0.2), c(1.0)], p(0.5, 0.0)).unwrap();
        assert!(!r.interior_refinement);
        assert_eq!(r.disk.radius, 0.0);
    }

    /// Maps a disk through a Möbius map using three boundary points.
    fn image_of_disk(m: &MobiusMap, d: ClosedDisk) -> ClosedDisk {
        let pts: Vec<Complex64> = [0.0, 2.0, 4.0]
            .iter()
            .map(|t| m.apply(d.boundary_point(*t)).unwrap())
            .collect();
        let (a, b, cc) = (pts[0], pts[1], pts[2]);
        // circumcenter
        let d_ = 2.0 * (a.re * (b.im - cc.im) + b.re * (cc.im - a.im) + cc.re * (a.im - b.im));
        let ux = (a.norm_sqr() * (b.im - cc.im) + b.norm_sqr() * (cc.im - a.im) + cc.norm_sqr() * (a.im - b.im)) / d_;
        let uy = (a.norm_sqr() * (cc.re - b.re) + b.norm_sqr() * (a.re - cc.re) + cc.norm_sqr() * (b.re - a.re)) / d_;
        let center = Complex64::new(ux, uy);
        ClosedDisk { center, radius: (a - center).norm() }
    }

    #[test]
    fn value_region_matches_iterative_disk_mapping() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..50 {
            let n = rng.gen_range(1..=4);
            let nodes: Vec<DiskPoint> =
                (0..n).map(|_| DiskPoint::interior(crate::function::uniform_in_disk(&mut rng, 0.8)).unwrap()).collect();
            let gammas: Vec<Complex64> = (0..n).map(|_| crate::function::uniform_in_disk(&mut rng, 0.8)).collect();
            let a = DiskPoint::interior(crate::function::uniform_in_disk(&mut rng, 0.8)).unwrap();
            let region = value_region(&nodes, &gammas, a).unwrap().disk;
            let mut disk = ClosedDisk::unit();
            for (z, g) in nodes.iter().zip(&gammas).rev() {
                let tau = bracket_raw(a.value(), z.value());
                disk = image_of_disk(&a_map(tau, *g), disk);
            }
            assert!(disk_close(region, disk.center, disk.radius, 1e-9));
        }
    }

    #[test]
    fn modulus_chain_examples() {
        let ch = modulus_bound_chain(&[o(), o()], &[c(0.5), c(0.5)], p(0.5, 0.0)).unwrap();
        assert!((ch.values[0] - 0.8).abs() < 1e-15 && (ch.values[1] - 0.75).abs() < 1e-15);
        assert!((ch.values[1] - 1.125 / 1.5).abs() < 1e-15);

        let t = 0.3;
        let ch = modulus_bound_chain(&[o(); 4], &[c(0.0); 4], p(t, 0.0)).unwrap();
        for (k, v) in ch.values.iter().enumerate() {
            assert!((v - t.powi(k as i32 + 1)).abs() < 1e-15);
        }

        assert!(matches!(
            modulus_bound_chain(&[o()], &[c(1.0)], p(0.5, 0.0)),
            Err(Error::GammaOutOfRange { .. })
        ));
    }

    #[test]
    fn modulus_chain_matches_origin_closed_forms() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..100 {
            let cs = [rng.gen::<f64>() * 0.99, rng.gen::<f64>() * 0.99, rng.gen::<f64>() * 0.99];
            let t = rng.gen::<f64>() * 0.99;
            let gammas: Vec<Complex64> = cs.iter().map(|&m| Complex64::from_polar(m, rng.gen::<f64>() * 6.0)).collect();
            let ch = modulus_bound_chain(&[o(); 3], &gammas, p(t, 0.0)).unwrap();
            let closed = origin_chain_closed_forms(cs, t);
            for (v, c) in ch.values.iter().zip(closed) {
                assert!((v - c).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn distance_chain_examples() {
        let z = p(0.5, 0.0);
        let ch = distance_bound_chain(&[o()], &[c(0.2)], z, o()).unwrap();
        assert!((ch.values[0] - 3.0).abs() < 1e-15);
        let d = hyperbolic_distance(z, o()).unwrap();
        assert!((ch.values[0] - d.exp()).abs() < 1e-14);

        let ch = distance_bound_chain(&[o(), o()], &[c(0.2), c(0.5)], z, o()).unwrap();
        assert!((ch.values[1] - 7.0 / 3.0).abs() < 1e-14);
        assert!((ch.values[1] - repeated_node_r1(0.5, 0.5)).abs() < 1e-14);

        assert!(distance_bound_chain(&[p(0.1, 0.0)], &[c(0.2)], z, o()).is_err());
    }

    #[test]
    fn repeated_node_closed_forms_match_composition() {
        let mut rng = ChaCha8Rng::seed_from_u64(19);
        for _ in 0..200 {
            let z0 = DiskPoint::interior(crate::function::uniform_in_disk(&mut rng, 0.7)).unwrap();
            let z = DiskPoint::interior(crate::function::uniform_in_disk(&mut rng, 0.7)).unwrap();
            let t = pseudo_distance(z, z0).unwrap();
            let (c1, c2) = (rng.gen::<f64>() * 0.99, rng.gen::<f64>() * 0.99);
            let gammas = [c(0.3), Complex64::from_polar(c1, 1.0), Complex64::from_polar(c2, -2.0)];
            let ch = distance_bound_chain(&[z0; 3], &gammas, z, z0).unwrap();
            assert!((ch.values[1] - repeated_node_r1(t, c1)).abs() < 1e-12 * ch.values[1]);
            assert!((ch.values[2] - repeated_node_r2(t, c1, c2)).abs() < 1e-12 * ch.values[2]);
        }
    }

    #[test]
    fn two_sided_examples() {
        let (lo, hi) = two_sided_modulus_bounds(c(0.5), c(0.5), None).unwrap();
        assert!(lo.abs() < 1e-15 && (hi - 0.8).abs() < 1e-15);

        let tau = Complex64::new(0.1, -0.6);
        let (lo, hi) = two_sided_modulus_bounds(c(0.0), tau, None).unwrap();
        assert_eq!(lo, 0.0);
        assert!((hi - tau.norm()).abs() < 1e-15);

        let (lo, hi) = two_sided_modulus_bounds(c(0.5), c(0.5), Some(c(0.5))).unwrap();
        assert!((hi - 2.0 / 3.0).abs() < 1e-15 && (lo - 2.0 / 7.0).abs() < 1e-15);
    }

    #[test]
    fn two_sided_bounds_hold_for_random_functions() {
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        for _ in 0..200 {
            let f = random_schur_fn_with(&mut rng, 3, 0.9, None).unwrap();
            let z0 = DiskPoint::interior(crate::function::uniform_in_disk(&mut rng, 0.8)).unwrap();
            let z = DiskPoint::interior(crate::function::uniform_in_disk(&mut rng, 0.8)).unwrap();
            let g0 = f.eval(z0.value()).unwrap();
            let tau = bracket_raw(z.value(), z0.value());
            let f1 = iterated(&f, &[z0]).unwrap().eval(z.value()).unwrap();
            let m = f.eval(z.value()).unwrap().norm();
            let (lo, hi) = two_sided_modulus_bounds(g0, tau, Some(f1)).unwrap();
            assert!(lo - 1e-12 <= m && m <= hi + 1e-12);
            let (lo2, hi2) = two_sided_modulus_bounds(g0, tau, None).unwrap();
            assert!(lo2 <= lo + 1e-12 && hi <= hi2 + 1e-12);
        }
    }

    #[test]
    fn dieudonne_region_examples() {
        let r = dieudonne_region(o(), o(), p(0.5, 0.0), c(0.25)).unwrap();
        assert!(disk_close(r, c(0.5), 0.5, 1e-15));
        // f = z² has f'(0.5) = 1 on the boundary
        assert!((r.excess(c(1.0))).abs() < 1e-15);

        let (z0, z) = (p(0.1, 0.2), p(-0.3, 0.4));
        let w0 = p(0.2, -0.1);
        let r = dieudonne_region(z0, w0, z, w0.value()).unwrap();
        assert_eq!(r.center, c(0.0));
        let t = pseudo_distance(z, z0).unwrap();
        let expected = t / (1.0 - z.value().norm_sqr()) * (1.0 - w0.value().norm_sqr());
        assert!((r.radius - expected).abs() < 1e-15);

        let r = dieudonne_region(o(), o(), p(0.3, 0.0), c(0.3)).unwrap();
        assert!(disk_close(r, c(1.0), 0.0, 1e-14));

        assert_eq!(dieudonne_region(o(), o(), p(0.3, 0.0), c(0.5)), Err(Error::InconsistentData));
    }

    #[test]
    fn dieudonne_region_ratio_is_second_quotient() {
        let mut rng = ChaCha8Rng::seed_from_u64(29);
        for _ in 0..100 {
            let f = random_schur_fn_with(&mut rng, 3, 0.9, None).unwrap();
            let z0 = DiskPoint::interior(crate::function::uniform_in_disk(&mut rng, 0.8)).unwrap();
            let z = DiskPoint::interior(crate::function::uniform_in_disk(&mut rng, 0.8)).unwrap();
            let jet = f.eval_jet(z, 1).unwrap();
            let w0 = DiskPoint::interior(f.eval(z0.value()).unwrap()).unwrap();
            let r = dieudonne_region(z0, w0, z, jet.value()).unwrap();
            let ratio = (jet.coeff(1) - r.center).norm() / r.radius;
            let f2 = iterated(&f, &[z0, z]).unwrap().eval(z.value()).unwrap().norm();
            assert!((ratio - f2).abs() < 1e-8, "{ratio} vs {f2}");
        }
    }

    #[test]
    fn second_order_examples() {
        let s = dieudonne_second_order_residual(&power(2), p(0.5, 0.0)).unwrap();
        assert!((s.lhs - 1.0 / 6.0).abs() < 1e-12 && (s.rhs - 1.0 / 6.0).abs() < 1e-12);

        let s = dieudonne_second_order_residual(&poly(&[0.0, 0.0, 0.25]), p(0.5, 0.0)).unwrap();
        assert!(s.margin() > 1e-3);
        assert!(dieudonne_second_order_g_form(&poly(&[0.0, 0.0, 0.25]), p(0.5, 0.0)).unwrap().margin() > 1e-3);

        let f = AnalyticFn::blaschke(0.0, &[o(), p(-0.5, 0.0)]).unwrap();
        let s = dieudonne_second_order_residual(&f, p(0.4, 0.0)).unwrap();
        assert!(s.margin().abs() < 1e-8);
        assert!(dieudonne_second_order_g_form(&f, p(0.4, 0.0)).unwrap().margin().abs() < 1e-8);

        assert!(matches!(
            dieudonne_second_order_residual(&AnalyticFn::identity(), p(0.4, 0.0)),
            Err(Error::HypothesisViolated(_))
        ));
        assert!(matches!(
            dieudonne_second_order_residual(&poly(&[0.1, 0.5]), p(0.4, 0.0)),
            Err(Error::HypothesisViolated(_))
        ));
    }

    #[test]
    fn fprime0_examples() {
        let s = dieudonne_fprime0_residual(&poly(&[0.0, 0.5]), p(0.5, 0.0)).unwrap();
        assert!(s.lhs.abs() < 1e-15 && s.margin() >= 0.0);

        let s = dieudonne_fprime0_residual(&power(3), p(0.5, 0.0)).unwrap();
        assert!((s.lhs - 0.25).abs() < 1e-12 && (s.rhs - 0.25).abs() < 1e-12);
        let s = dieudonne_fprime0_special(&power(3), p(0.5, 0.0)).unwrap();
        assert!((s.lhs - 0.25).abs() < 1e-12 && (s.rhs - 0.25).abs() < 1e-12);

        let s = dieudonne_fprime0_special(&power(2), p(0.5, 0.0)).unwrap();
        assert!(s.lhs.abs() < 1e-15 && s.rhs.abs() < 1e-15);

        assert!(dieudonne_fprime0_special(&poly(&[0.0, 0.5]), p(0.5, 0.0)).is_err());
    }

    #[test]
    fn classical_dieudonne_equality_for_z_squared() {
        let s = dieudonne_classical(&power(2), p(0.5, 0.0)).unwrap();
        assert!((s.lhs - 0.25).abs() < 1e-12 && (s.rhs - 0.25).abs() < 1e-12);
    }

    #[test]
    fn sharpness_with_unimodular_terminal() {
        let mut rng = ChaCha8Rng::seed_from_u64(31);
        for _ in 0..50 {
            let n = rng.gen_range(1..=3);
            let nodes: Vec<DiskPoint> =
                (0..n).map(|_| DiskPoint::interior(crate::function::uniform_in_disk(&mut rng, 0.8)).unwrap()).collect();
            let gammas: Vec<Complex64> = (0..n).map(|_| crate::function::uniform_in_disk(&mut rng, 0.8)).collect();
            let terminal = Complex64::from_polar(1.0, rng.gen::<f64>() * 6.3);
            let f = schur_synth(&nodes, &gammas, terminal).unwrap();
            let a = DiskPoint::interior(crate::function::uniform_in_disk(&mut rng, 0.8)).unwrap();
            let region = value_region(&nodes, &gammas, a).unwrap().disk;
            let v = f.eval(a.value()).unwrap();
            assert!(region.excess(v).abs() < 1e-8);
            let s = gamma_sequence(&f, &nodes).unwrap();
            for (x, y) in s.gammas.iter().zip(&gammas) {
                assert!((x - y).norm() < 1e-9);
            }
        }
    }
}
