//! Peschl's invariant derivatives `D_1f, D_2f, D_3f`, the Schur parameters of
//! a function vanishing at the origin in terms of its Taylor coefficients,
//! and the residuals of the second- and third-order coefficient inequalities.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::function::AnalyticFn;
use crate::geometry::{DiskPoint, MobiusMap};
use crate::jet::Jet;

/// `|f(z)| >= 1 - EPS_UNIMODULAR_VALUE` makes the invariant derivatives undefined.
pub const EPS_UNIMODULAR_VALUE: f64 = 1e-12;

/// Residuals within this band of zero count as equality.
pub const EPS_EQUALITY: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PeschlValues {
    pub d1: Complex64,
    pub d2: Complex64,
    pub d3: Complex64,
}

impl PeschlValues {
    /// Evaluates the closed forms from a jet of order at least 3 about `z`.
    pub fn from_jet(jet: &Jet) -> Result<Self> {
        if jet.order() < 3 {
            return Err(Error::InvalidArgument("Peschl derivatives need a jet of order 3".into()));
        }
        let z = jet.base();
        let w = jet.value();
        let (f1, f2, f3) = (jet.derivative(1), jet.derivative(2), jet.derivative(3));
        let s = 1.0 - z.norm_sqr();
        let q = 1.0 - w.norm_sqr();
        if q <= EPS_UNIMODULAR_VALUE {
            return Err(Error::UnimodularValue);
        }
        let zb = z.conj();
        let wb = w.conj();

        let d1 = s * f1 / q;
        let d2 = s * s / q * (f2 - 2.0 * zb * f1 / s + 2.0 * wb * f1 * f1 / q);
        let d3 = s.powi(3) / q
            * (f3 - 6.0 * zb * f2 / s + 6.0 * wb * f1 * f2 / q + 6.0 * zb * zb * f1 / (s * s)
                - 12.0 * zb * wb * f1 * f1 / (s * q)
                + 6.0 * wb * wb * f1.powi(3) / (q * q));
        Ok(Self { d1, d2, d3 })
    }
}

/// `D_1f(z), D_2f(z), D_3f(z)` from the explicit formulas in `f', f'', f'''`.
pub fn peschl(f: &AnalyticFn, z: DiskPoint) -> Result<PeschlValues> {
    f.require_admissible()?;
    PeschlValues::from_jet(&f.eval_jet(z, 3)?)
}

/// `g(ζ) = [f([ζ, -z0]), f(z0)]`, the function whose Taylor coefficients at
/// the origin are `D_nf(z0) / n!`.
pub fn recentered(f: &AnalyticFn, z0: DiskPoint) -> Result<AnalyticFn> {
    f.require_admissible()?;
    let w0 = f.eval(z0.value())?;
    if w0.norm() >= 1.0 - EPS_UNIMODULAR_VALUE {
        return Err(Error::UnimodularValue);
    }
    let inner = AnalyticFn::pre_automorphism(MobiusMap::translation_from_origin(z0), f.clone())?;
    let post = MobiusMap::new(
        Complex64::new(1.0, 0.0),
        -w0,
        -w0.conj(),
        Complex64::new(1.0, 0.0),
    );
    AnalyticFn::post_mobius(post, inner)
}

/// `D_nf(z0)` as `n! · (n-th Taylor coefficient of g at 0)`; the independent
/// route used to check [`peschl`].
pub fn peschl_recentered(f: &AnalyticFn, z0: DiskPoint, n: usize) -> Result<Complex64> {
    if !(1..=3).contains(&n) {
        return Err(Error::InvalidArgument(format!("Peschl order {n} not in 1..=3")));
    }
    let g = recentered(f, z0)?;
    Ok(g.eval_jet(DiskPoint::ORIGIN, n)?.derivative(n))
}

/// `γ_1..γ_4` of `g(z) = a_1 z + a_2 z² + a_3 z³ + a_4 z⁴ + ...` in closed form.
pub fn gamma_from_taylor(a: [Complex64; 4]) -> Result<[Complex64; 4]> {
    let [a1, a2, a3, a4] = a;
    let k = 1.0 - a1.norm_sqr();
    let den2 = k;
    let den3 = k * k - a2.norm_sqr();
    let den4 = Complex64::new(
        k.powi(3) - k * (a3.norm_sqr() + 2.0 * a2.norm_sqr()) + a2.norm_sqr().powi(2),
        0.0,
    ) - a1 * a2.conj().powi(2) * a3
        - a1.conj() * a2 * a2 * a3.conj();
    for d in [den2.abs(), den3.abs(), den4.norm()] {
        if d <= 1e-12 {
            return Err(Error::DegenerateDenominator);
        }
    }
    let g1 = a1;
    let g2 = a2 / den2;
    let g3 = (a3 * k + a1.conj() * a2 * a2) / den3;
    let g4 = (a4 * den3 + 2.0 * a1.conj() * a2 * a3 * k + a1.conj().powi(2) * a2.powi(3) + a2.conj() * a3 * a3)
        / den4;
    Ok([g1, g2, g3, g4])
}

/// `2(1 - |D_1f|²) - |D_2f|`; non-negative, zero exactly for Blaschke
/// products of degree at most 2.
pub fn yamashita_residual(f: &AnalyticFn, z: DiskPoint) -> Result<f64> {
    let d = peschl(f, z)?;
    Ok(yamashita_from(&d))
}

pub(crate) fn yamashita_from(d: &PeschlValues) -> f64 {
    2.0 * (1.0 - d.d1.norm_sqr()) - d.d2.norm()
}

/// `(1 - |D_1|²)² - |D_3/6 (1 - |D_1|²) + conj(D_1) (D_2/2)²| - |D_2/2|²`;
/// non-negative, zero exactly for Blaschke products of degree at most 3.
pub fn third_order_residual(f: &AnalyticFn, z: DiskPoint) -> Result<f64> {
    let d = peschl(f, z)?;
    Ok(third_order_from(&d))
}

pub(crate) fn third_order_from(d: &PeschlValues) -> f64 {
    let k = 1.0 - d.d1.norm_sqr();
    let half = d.d2 / 2.0;
    k * k - (d.d3 / 6.0 * k + d.d1.conj() * half * half).norm() - half.norm_sqr()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::function::{random_schur_fn, validate_bounded};
    use crate::hdq::schur_classic;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    fn p(re: f64, im: f64) -> DiskPoint {
        DiskPoint::new(re, im).unwrap()
    }

    fn power(n: usize) -> AnalyticFn {
        AnalyticFn::blaschke(0.0, &vec![DiskPoint::ORIGIN; n]).unwrap()
    }

    fn poly(coeffs: &[f64]) -> AnalyticFn {
        let f = AnalyticFn::polynomial(coeffs.iter().map(|&x| c(x)).collect()).unwrap();
        validate_bounded(&f, 1024, 0.999).unwrap().0
    }

    #[test]
    fn peschl_examples() {
        for z in [p(0.0, 0.0), p(0.4, -0.3)] {
            let d = peschl(&AnalyticFn::identity(), z).unwrap();
            assert!((d.d1 - c(1.0)).norm() < 1e-14 && d.d2.norm() < 1e-14);
        }
        let d = peschl(&power(2), DiskPoint::ORIGIN).unwrap();
        assert_eq!((d.d1, d.d2, d.d3), (c(0.0), c(2.0), c(0.0)));
        let d = peschl(&power(3), DiskPoint::ORIGIN).unwrap();
        assert_eq!((d.d1, d.d2, d.d3), (c(0.0), c(0.0), c(6.0)));
    }

    #[test]
    fn unimodular_value_rejected() {
        let u = AnalyticFn::constant(c(1.0)).unwrap();
        assert_eq!(peschl(&u, p(0.1, 0.0)), Err(Error::UnimodularValue));
        assert_eq!(peschl_recentered(&u, p(0.1, 0.0), 1), Err(Error::UnimodularValue));
    }

    #[test]
    fn recentered_examples() {
        assert!((peschl_recentered(&AnalyticFn::identity(), p(0.3, 0.0), 1).unwrap() - c(1.0)).norm() < 1e-14);
        assert!((peschl_recentered(&power(2), DiskPoint::ORIGIN, 2).unwrap() - c(2.0)).norm() < 1e-14);

        let f = poly(&[0.0, 0.5, 0.5]);
        let z0 = p(0.2, 0.0);
        let d = peschl(&f, z0).unwrap();
        for (n, want) in [(1, d.d1), (2, d.d2), (3, d.d3)] {
            let got = peschl_recentered(&f, z0, n).unwrap();
            assert!((got - want).norm() <= 1e-9 * (1.0 + want.norm()), "n = {n}");
        }
    }

    #[test]
    fn gamma_from_taylor_examples() {
        assert_eq!(gamma_from_taylor([c(0.0); 4]).unwrap(), [c(0.0); 4]);
        let g = gamma_from_taylor([c(0.5), c(0.5), c(0.0), c(0.0)]).unwrap();
        assert_eq!(g[0], c(0.5));
        assert!((g[1] - c(2.0 / 3.0)).norm() < 1e-15);
        // z: γ_1 = 1, the γ_2 denominator vanishes
        assert_eq!(
            gamma_from_taylor([c(1.0), c(0.0), c(0.0), c(0.0)]),
            Err(Error::DegenerateDenominator)
        );
    }

    #[test]
    fn gamma_from_taylor_matches_schur_algorithm() {
        for seed in 0..20 {
            let inner = random_schur_fn(seed, 5, 0.85).unwrap();
            // g(0) = 0 via one more synthesis step with γ_0 = 0
            let g = AnalyticFn::schur_synth(DiskPoint::ORIGIN, c(0.0), inner).unwrap();
            let jet = g.eval_jet(DiskPoint::ORIGIN, 4).unwrap();
            let a = [jet.coeff(1), jet.coeff(2), jet.coeff(3), jet.coeff(4)];
            let closed = gamma_from_taylor(a).unwrap();
            let s = schur_classic(&g, 4).unwrap();
            for (j, (c, &want)) in closed.iter().zip(&s.gammas[1..]).enumerate() {
                assert!((c - want).norm() <= 1e-8 * want.norm().max(1e-3), "seed {seed} γ_{}", j + 1);
            }
        }
    }

    #[test]
    fn yamashita_examples() {
        assert!(yamashita_residual(&power(2), DiskPoint::ORIGIN).unwrap().abs() < 1e-15);
        let half = poly(&[0.0, 0.5]);
        assert!((yamashita_residual(&half, DiskPoint::ORIGIN).unwrap() - 1.5).abs() < 1e-15);
        assert!(yamashita_residual(&AnalyticFn::identity(), p(0.3, 0.2)).unwrap().abs() < 1e-12);
    }

    #[test]
    fn third_order_examples() {
        assert!(third_order_residual(&power(3), DiskPoint::ORIGIN).unwrap().abs() < 1e-15);
        assert!(third_order_residual(&power(2), DiskPoint::ORIGIN).unwrap().abs() < 1e-15);
        let half = poly(&[0.0, 0.5]);
        assert!((third_order_residual(&half, DiskPoint::ORIGIN).unwrap() - 0.5625).abs() < 1e-15);
    }

    #[test]
    fn equality_for_low_degree_blaschke_off_origin() {
        let b2 = AnalyticFn::blaschke(0.4, &[p(0.3, 0.1), p(-0.5, 0.2)]).unwrap();
        let b3 = AnalyticFn::blaschke(-1.0, &[p(0.3, 0.1), p(-0.5, 0.2), p(0.0, 0.6)]).unwrap();
        for z in [p(0.1, 0.2), p(-0.4, -0.1)] {
            assert!(yamashita_residual(&b2, z).unwrap().abs() < EPS_EQUALITY);
            assert!(third_order_residual(&b3, z).unwrap().abs() < EPS_EQUALITY);
            assert!(yamashita_residual(&b3, z).unwrap() > EPS_EQUALITY);
        }
    }
}
