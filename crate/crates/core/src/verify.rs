//! Seeded property suite. Every property draws `samples` independent
//! instances, measures a non-negative violation per instance and passes when
//! the largest one stays within its named tolerance.
//!
//! Sample `i` of property `k` uses a ChaCha stream keyed by `(seed, k, i)`,
//! so results do not depend on scheduling.

use std::collections::BTreeMap;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::bounds::{
    dieudonne_region, distance_bound_chain, modulus_bound_chain, value_region,
};
use crate::error::{Error, Result};
use crate::function::{random_schur_fn_with, schur_synth, uniform_in_disk, validate_bounded, AnalyticFn};
use crate::geometry::{bracket_raw, hyperbolic_distance, ClosedDisk, DiskPoint, MobiusMap};
use crate::hdq::{delta, gamma_sequence, iterated, schur_classic};
use crate::jet::Jet;
use crate::par::{map_indices, Execution};
use crate::peschl::{gamma_from_taylor, peschl, peschl_recentered, third_order_from, yamashita_from};
use crate::pick::{feasibility, interpolate, random_data, variability_region, FeasibilityStatus};

pub const DEFAULT_SEED: u64 = 20_240_917;
pub const DEFAULT_SAMPLES: usize = 200;
pub const DEFAULT_JET_ORDER: usize = 8;

const FD_STEP: f64 = 1e-4;
const NODE_SEPARATION: f64 = 0.05;

type Sampler = fn(&mut ChaCha8Rng, &Ctx) -> Result<f64>;

struct Ctx {
    jet_order: usize,
}

pub struct Property {
    pub name: &'static str,
    pub default_tolerance: f64,
    sampler: Sampler,
}

macro_rules! prop {
    ($name:literal, $tol:expr, $f:path) => {
        Property { name: $name, default_tolerance: $tol, sampler: $f }
    };
}

/// All properties, in report order.
pub fn properties() -> &'static [Property] {
    static PROPS: &[Property] = &[
        prop!("geometry.invariance", 1e-12, geometry_invariance),
        prop!("geometry.bracket_round_trip", 1e-12, geometry_round_trip),
        prop!("geometry.disk_image", 1e-10, geometry_disk_image),
        prop!("geometry.triangle", 1e-12, geometry_triangle),
        prop!("jet.finite_difference", 1e-5, jet_finite_difference),
        prop!("jet.ring_axioms", 1e-12, jet_ring_axioms),
        prop!("jet.div_mul", 1e-11, jet_div_mul),
        prop!("function.maximum_principle", 1e-12, function_maximum_principle),
        prop!("function.blaschke_boundary", 1e-9, function_blaschke_boundary),
        prop!("hdq.schwarz_pick", 1e-9, hdq_schwarz_pick),
        prop!("hdq.blaschke_equality", 1e-8, hdq_blaschke_equality),
        prop!("hdq.invariance", 1e-8, hdq_invariance),
        prop!("hdq.chain_rule", 1e-9, hdq_chain_rule),
        prop!("hdq.distance_contraction", 1e-9, hdq_distance_contraction),
        prop!("hdq.node_coincidence", 1e-4, hdq_node_coincidence),
        prop!("peschl.dual_path", 1e-8, peschl_dual_path),
        prop!("peschl.residuals", 1e-9, peschl_residuals),
        prop!("peschl.gamma_closed_form", 1e-8, peschl_gamma_closed_form),
        prop!("bounds.region_soundness", 1e-9, bounds_region_soundness),
        prop!("bounds.region_sharpness", 1e-8, bounds_region_sharpness),
        prop!("bounds.modulus_chain", 1e-9, bounds_modulus_chain),
        prop!("bounds.distance_chain", 1e-9, bounds_distance_chain),
        prop!("bounds.dieudonne_soundness", 1e-9, bounds_dieudonne_soundness),
        prop!("bounds.dieudonne_equality", 1e-8, bounds_dieudonne_equality),
        prop!("bounds.dieudonne_equivalence", 1e-8, bounds_dieudonne_equivalence),
        prop!("pick.interpolant_constraints", 1e-10, pick_interpolant_constraints),
        prop!("pick.interpolant_in_region", 1e-9, pick_interpolant_in_region),
        prop!("pick.permutation_invariance", 1e-8, pick_permutation_invariance),
        prop!("pick.verdict_agreement", 0.0, pick_verdict_agreement),
        prop!("pick.region_exhaustiveness", 0.0, pick_region_exhaustiveness),
    ];
    PROPS
}

pub fn default_tolerances() -> BTreeMap<String, f64> {
    properties().iter().map(|p| (p.name.to_string(), p.default_tolerance)).collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct VerifyConfig {
    pub seed: u64,
    pub samples: usize,
    pub jet_order: usize,
    pub tolerances: BTreeMap<String, f64>,
    pub execution: Execution,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        Self {
            seed: DEFAULT_SEED,
            samples: DEFAULT_SAMPLES,
            jet_order: DEFAULT_JET_ORDER,
            tolerances: default_tolerances(),
            execution: Execution::default(),
        }
    }
}

impl VerifyConfig {
    /// Applies `name=value`; the name `all` sets every tolerance.
    pub fn set_tolerance(&mut self, name: &str, value: f64) -> Result<()> {
        if !(value >= 0.0 && value.is_finite()) {
            return Err(Error::InvalidArgument(format!("tolerance {value} must be finite and non-negative")));
        }
        if name == "all" {
            self.tolerances.values_mut().for_each(|t| *t = value);
            return Ok(());
        }
        match self.tolerances.get_mut(name) {
            Some(t) => {
                *t = value;
                Ok(())
            }
            None => Err(Error::InvalidArgument(format!("unknown tolerance {name}"))),
        }
    }

    fn validate(&self) -> Result<()> {
        if self.samples == 0 {
            return Err(Error::InvalidArgument("samples must be at least 1".into()));
        }
        if !(3..=16).contains(&self.jet_order) {
            return Err(Error::InvalidArgument(format!("jet order {} not in 3..=16", self.jet_order)));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PropertyResult {
    pub name: String,
    pub tolerance: f64,
    pub samples: usize,
    pub max_violation: f64,
    pub worst_sample: usize,
    /// Samples whose violation exceeds the tolerance.
    pub exceedances: usize,
    pub errors: usize,
    pub first_error: Option<String>,
    pub passed: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerifyReport {
    pub seed: u64,
    pub samples: usize,
    pub jet_order: usize,
    pub properties: Vec<PropertyResult>,
    pub passed: bool,
}

impl VerifyReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

fn sample_rng(seed: u64, property: usize, sample: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(((property as u64) << 40) | sample as u64);
    rng
}

fn run_index(index: usize, cfg: &VerifyConfig) -> PropertyResult {
    let prop = &properties()[index];
    let tolerance = cfg.tolerances.get(prop.name).copied().unwrap_or(prop.default_tolerance);
    let ctx = Ctx { jet_order: cfg.jet_order };
    let outcomes = map_indices(cfg.samples, cfg.execution, |i| {
        let mut rng = sample_rng(cfg.seed, index, i);
        (prop.sampler)(&mut rng, &ctx)
    });
    let mut max_violation = 0.0_f64;
    let mut worst_sample = 0;
    let mut errors = 0;
    let mut exceedances = 0;
    let mut first_error = None;
    for (i, o) in outcomes.into_iter().enumerate() {
        if matches!(o, Ok(v) if v > tolerance) {
            exceedances += 1;
        }
        match o {
            Ok(v) if v.is_nan() => {
                errors += 1;
                first_error.get_or_insert_with(|| format!("sample {i}: NaN violation"));
            }
            Ok(v) if v > max_violation => {
                max_violation = v;
                worst_sample = i;
            }
            Ok(_) => {}
            Err(e) => {
                errors += 1;
                first_error.get_or_insert_with(|| format!("sample {i}: {e}"));
            }
        }
    }
    PropertyResult {
        name: prop.name.to_string(),
        tolerance,
        samples: cfg.samples,
        max_violation,
        worst_sample,
        exceedances,
        errors,
        first_error,
        passed: errors == 0 && max_violation <= tolerance,
    }
}

/// Runs one named property.
pub fn run_property(name: &str, cfg: &VerifyConfig) -> Result<PropertyResult> {
    cfg.validate()?;
    let index = properties()
        .iter()
        .position(|p| p.name == name)
        .ok_or_else(|| Error::InvalidArgument(format!("unknown property {name}")))?;
    Ok(run_index(index, cfg))
}

/// Runs the whole suite.
pub fn run(cfg: &VerifyConfig) -> Result<VerifyReport> {
    cfg.validate()?;
    let properties: Vec<PropertyResult> = (0..properties().len()).map(|k| run_index(k, cfg)).collect();
    let passed = properties.iter().all(|p| p.passed);
    Ok(VerifyReport { seed: cfg.seed, samples: cfg.samples, jet_order: cfg.jet_order, properties, passed })
}

// ---------------------------------------------------------------- generators

fn point<R: Rng>(rng: &mut R, radius: f64) -> DiskPoint {
    DiskPoint::interior(uniform_in_disk(rng, radius)).expect("radius below 1")
}

fn automorphism<R: Rng>(rng: &mut R) -> MobiusMap {
    MobiusMap::automorphism(rng.gen::<f64>() * std::f64::consts::TAU, point(rng, 0.8)).expect("interior point")
}

/// A non-Blaschke Schur function with parameters at random nodes.
fn schur_fn<R: Rng>(rng: &mut R) -> Result<AnalyticFn> {
    let depth = rng.gen_range(0..=3);
    let nodes: Vec<DiskPoint> = (0..=depth).map(|_| point(rng, 0.7)).collect();
    random_schur_fn_with(rng, depth, 0.9, Some(&nodes))
}

/// Nodes drawn from a two-point pool, so repeats are common.
fn nodes_with_repeats<R: Rng>(rng: &mut R, n: usize) -> Vec<DiskPoint> {
    let pool = [point(rng, 0.8), point(rng, 0.8)];
    (0..n).map(|_| pool[rng.gen_range(0..2)]).collect()
}

fn blaschke<R: Rng>(rng: &mut R, degree: usize) -> Result<AnalyticFn> {
    let zeros: Vec<DiskPoint> = (0..degree).map(|_| point(rng, 0.8)).collect();
    AnalyticFn::blaschke(rng.gen::<f64>() * std::f64::consts::TAU, &zeros)
}

fn random_tree<R: Rng>(rng: &mut R, depth: usize) -> Result<AnalyticFn> {
    let kind = if depth == 0 { rng.gen_range(0..3) } else { rng.gen_range(0..7) };
    Ok(match kind {
        0 => AnalyticFn::constant(uniform_in_disk(rng, 0.95))?,
        1 => {
            let degree = rng.gen_range(1..=3);
            blaschke(rng, degree)?
        }
        2 => {
            let n = rng.gen_range(1..=4);
            let raw: Vec<Complex64> = (0..n).map(|_| uniform_in_disk(rng, 1.0)).collect();
            let total: f64 = raw.iter().map(|c| c.norm()).sum();
            let scale = 0.95 / total.max(1e-3);
            let f = AnalyticFn::polynomial(raw.into_iter().map(|c| c * scale).collect())?;
            validate_bounded(&f, 256, 0.999)?.0
        }
        3 => AnalyticFn::schur_synth(point(rng, 0.8), uniform_in_disk(rng, 0.9), random_tree(rng, depth - 1)?)?,
        4 => AnalyticFn::product(random_tree(rng, depth - 1)?, random_tree(rng, depth - 1)?),
        5 => AnalyticFn::post_mobius(automorphism(rng), random_tree(rng, depth - 1)?)?,
        _ => AnalyticFn::pre_automorphism(automorphism(rng), random_tree(rng, depth - 1)?)?,
    })
}

fn random_jet<R: Rng>(rng: &mut R, base: Complex64, order: usize) -> Jet {
    Jet::new(base, (0..=order).map(|_| uniform_in_disk(rng, 1.0)).collect()).expect("finite")
}

fn rel(diff: f64, scale: f64) -> f64 {
    diff / scale.max(1.0)
}

fn positive(x: f64) -> f64 {
    x.max(0.0)
}

// ---------------------------------------------------------------- geometry

fn geometry_invariance(rng: &mut ChaCha8Rng, _: &Ctx) -> Result<f64> {
    let t = automorphism(rng);
    let (z, w) = (uniform_in_disk(rng, 0.95), uniform_in_disk(rng, 0.95));
    let lhs = bracket_raw(t.apply(z)?, t.apply(w)?).norm();
    Ok((lhs - bracket_raw(z, w).norm()).abs())
}

fn geometry_round_trip(rng: &mut ChaCha8Rng, _: &Ctx) -> Result<f64> {
    let (z, z0) = (uniform_in_disk(rng, 0.95), uniform_in_disk(rng, 0.95));
    let w = bracket_raw(z, z0);
    Ok((bracket_raw(w, -z0) - z).norm())
}

fn geometry_disk_image(rng: &mut ChaCha8Rng, _: &Ctx) -> Result<f64> {
    let m = loop {
        let m = MobiusMap::new(
            uniform_in_disk(rng, 2.0),
            uniform_in_disk(rng, 2.0),
            uniform_in_disk(rng, 1.0),
            uniform_in_disk(rng, 2.0),
        );
        if m.c.norm() < 0.9 * m.d.norm() && !m.is_degenerate() {
            break m;
        }
    };
    let disk = m.disk_image()?;
    let mut excess = 0.0_f64;
    let mut nearest = f64::INFINITY;
    for k in 0..1000 {
        let x = if k % 4 == 0 {
            Complex64::from_polar(1.0, rng.gen::<f64>() * std::f64::consts::TAU)
        } else {
            uniform_in_disk(rng, 1.0)
        };
        let e = disk.excess(m.apply(x)?);
        excess = excess.max(e);
        nearest = nearest.min(e.abs());
    }
    Ok(excess.max(positive(nearest - 1e-6)))
}

fn geometry_triangle(rng: &mut ChaCha8Rng, _: &Ctx) -> Result<f64> {
    let (x, y, z) = (point(rng, 0.95), point(rng, 0.95), point(rng, 0.95));
    let d = hyperbolic_distance;
    Ok(positive(d(x, z)? - d(x, y)? - d(y, z)?))
}

// ---------------------------------------------------------------- jets

/// `f^{(m)}(z)` from the jet against a Richardson-extrapolated central
/// difference of `f^{(m-1)}` at `z ± h`.
fn jet_finite_difference(rng: &mut ChaCha8Rng, ctx: &Ctx) -> Result<f64> {
    let f = random_tree(rng, 3)?;
    let z = point(rng, 0.7);
    let k = ctx.jet_order;
    let jet = f.eval_jet(z, k)?;
    let deriv_at = |x: Complex64, m: usize| -> Result<Complex64> { Ok(f.jet_at(x, m)?.derivative(m)) };
    let mut worst = 0.0_f64;
    for m in 1..=3.min(k) {
        let central = |h: f64| -> Result<Complex64> {
            let hp = Complex64::new(h, 0.0);
            Ok((deriv_at(z.value() + hp, m - 1)? - deriv_at(z.value() - hp, m - 1)?) / (2.0 * h))
        };
        let estimate = (4.0 * central(FD_STEP / 2.0)? - central(FD_STEP)?) / 3.0;
        let exact = jet.derivative(m);
        worst = worst.max(rel((estimate - exact).norm(), exact.norm()));
    }
    Ok(worst)
}

fn jet_ring_axioms(rng: &mut ChaCha8Rng, ctx: &Ctx) -> Result<f64> {
    let base = uniform_in_disk(rng, 0.9);
    let order = rng.gen_range(0..=ctx.jet_order.min(8));
    let (x, y, z) = (random_jet(rng, base, order), random_jet(rng, base, order), random_jet(rng, base, order));
    let assoc = x.mul(&y)?.mul(&z)?.max_abs_diff(&x.mul(&y.mul(&z)?)?);
    let dist = x.mul(&y.add(&z)?)?.max_abs_diff(&x.mul(&y)?.add(&x.mul(&z)?)?);
    Ok(assoc.max(dist))
}

fn jet_div_mul(rng: &mut ChaCha8Rng, ctx: &Ctx) -> Result<f64> {
    let base = uniform_in_disk(rng, 0.9);
    let order = ctx.jet_order;
    let x = random_jet(rng, base, order);
    let mut y = random_jet(rng, base, order);
    let lead = Complex64::from_polar(0.5 + 0.5 * rng.gen::<f64>(), rng.gen::<f64>() * std::f64::consts::TAU);
    y = y.add_scalar(lead - y.value());
    Ok(Jet::div(&x.mul(&y)?, &y)?.max_abs_diff(&x))
}

// ---------------------------------------------------------------- functions

fn function_maximum_principle(rng: &mut ChaCha8Rng, _: &Ctx) -> Result<f64> {
    let f = random_tree(rng, 3)?;
    let mut worst = 0.0_f64;
    for _ in 0..10 {
        worst = worst.max(positive(f.eval(uniform_in_disk(rng, 0.999))?.norm() - 1.0));
    }
    Ok(worst)
}

fn function_blaschke_boundary(rng: &mut ChaCha8Rng, _: &Ctx) -> Result<f64> {
    let degree = rng.gen_range(1..=5);
    let f = blaschke(rng, degree)?;
    let mut worst = 0.0_f64;
    for _ in 0..10 {
        let w = Complex64::from_polar(1.0, rng.gen::<f64>() * std::f64::consts::TAU);
        worst = worst.max((f.jet_at(w, 0)?.value().norm() - 1.0).abs());
    }
    Ok(worst)
}

// ---------------------------------------------------------------- hdq

fn hdq_schwarz_pick(rng: &mut ChaCha8Rng, _: &Ctx) -> Result<f64> {
    let f = schur_fn(rng)?;
    let j = rng.gen_range(1..=4);
    let nodes = nodes_with_repeats(rng, j);
    let z = uniform_in_disk(rng, 0.95);
    Ok(positive(iterated(&f, &nodes)?.eval(z)?.norm() - 1.0))
}

fn hdq_blaschke_equality(rng: &mut ChaCha8Rng, _: &Ctx) -> Result<f64> {
    let j = rng.gen_range(1..=4);
    let f = blaschke(rng, j)?;
    let nodes = nodes_with_repeats(rng, j);
    let z = uniform_in_disk(rng, 0.95);
    Ok((iterated(&f, &nodes)?.eval(z)?.norm() - 1.0).abs())
}

fn hdq_invariance(rng: &mut ChaCha8Rng, _: &Ctx) -> Result<f64> {
    let f = schur_fn(rng)?;
    let (s, t) = (automorphism(rng), automorphism(rng));
    let g = AnalyticFn::post_mobius(s, AnalyticFn::pre_automorphism(t, f.clone())?)?;
    let j = rng.gen_range(1..=3);
    let nodes = nodes_with_repeats(rng, j);
    let z = uniform_in_disk(rng, 0.9);
    let moved = nodes
        .iter()
        .map(|n| DiskPoint::interior(t.apply(n.value())?))
        .collect::<Result<Vec<_>>>()?;
    let lhs = iterated(&g, &nodes)?.eval(z)?.norm();
    let rhs = iterated(&f, &moved)?.eval(t.apply(z)?)?.norm();
    Ok((lhs - rhs).abs())
}

fn hdq_chain_rule(rng: &mut ChaCha8Rng, _: &Ctx) -> Result<f64> {
    let f = schur_fn(rng)?;
    let t = automorphism(rng);
    let g = AnalyticFn::pre_automorphism(t, AnalyticFn::identity())?;
    let fg = AnalyticFn::pre_automorphism(t, f.clone())?;
    let z0 = point(rng, 0.8);
    let z = uniform_in_disk(rng, 0.8);
    let lhs = delta(&fg, z0)?.eval(z)?;
    let gz0 = DiskPoint::interior(t.apply(z0.value())?)?;
    let rhs = delta(&f, gz0)?.eval(t.apply(z)?)? * delta(&g, z0)?.eval(z)?;
    Ok((lhs - rhs).norm())
}

fn hdq_distance_contraction(rng: &mut ChaCha8Rng, _: &Ctx) -> Result<f64> {
    let f = schur_fn(rng)?;
    let j = rng.gen_range(0..=3);
    let nodes = nodes_with_repeats(rng, j);
    let fj = iterated(&f, &nodes)?;
    let (z, zj) = (point(rng, 0.9), point(rng, 0.9));
    let a = DiskPoint::interior(fj.eval(z.value())?)?;
    let b = DiskPoint::interior(fj.eval(zj.value())?)?;
    Ok(positive(hyperbolic_distance(a, b)? - hyperbolic_distance(z, zj)?))
}

fn hdq_node_coincidence(rng: &mut ChaCha8Rng, _: &Ctx) -> Result<f64> {
    let f = schur_fn(rng)?;
    let z0 = point(rng, 0.7);
    let z1 = DiskPoint::interior(z0.value() + Complex64::new(1e-6, 0.0))?;
    let z = uniform_in_disk(rng, 0.9);
    let near = iterated(&f, &[z0, z1])?.eval(z)?.norm();
    let same = iterated(&f, &[z0, z0])?.eval(z)?.norm();
    Ok((near - same).abs())
}

// ---------------------------------------------------------------- peschl

fn peschl_dual_path(rng: &mut ChaCha8Rng, _: &Ctx) -> Result<f64> {
    let f = schur_fn(rng)?;
    let z = point(rng, 0.8);
    let d = peschl(&f, z)?;
    let mut worst = 0.0_f64;
    for (n, want) in [(1, d.d1), (2, d.d2), (3, d.d3)] {
        worst = worst.max(rel((peschl_recentered(&f, z, n)? - want).norm(), want.norm()));
    }
    Ok(worst)
}

fn peschl_residuals(rng: &mut ChaCha8Rng, _: &Ctx) -> Result<f64> {
    let f = if rng.gen_bool(0.5) { schur_fn(rng)? } else { random_tree(rng, 3)? };
    let z = point(rng, 0.9);
    let d = peschl(&f, z)?;
    Ok(positive(-yamashita_from(&d)).max(positive(-third_order_from(&d))).max(positive(d.d1.norm() - 1.0)))
}

fn peschl_gamma_closed_form(rng: &mut ChaCha8Rng, _: &Ctx) -> Result<f64> {
    let inner = random_schur_fn_with(rng, 5, 0.85, None)?;
    let g = AnalyticFn::schur_synth(DiskPoint::ORIGIN, Complex64::new(0.0, 0.0), inner)?;
    let jet = g.eval_jet(DiskPoint::ORIGIN, 4)?;
    let closed = gamma_from_taylor([jet.coeff(1), jet.coeff(2), jet.coeff(3), jet.coeff(4)])?;
    let s = schur_classic(&g, 4)?;
    let mut worst = 0.0_f64;
    for (c, &want) in closed.iter().zip(&s.gammas[1..]) {
        worst = worst.max((c - want).norm() / want.norm().max(1e-3));
    }
    Ok(worst)
}

// ---------------------------------------------------------------- bounds

fn distinct_nodes<R: Rng>(rng: &mut R, n: usize) -> Vec<DiskPoint> {
    (0..n).map(|_| point(rng, 0.8)).collect()
}

fn bounds_region_soundness(rng: &mut ChaCha8Rng, _: &Ctx) -> Result<f64> {
    let f = schur_fn(rng)?;
    let n = rng.gen_range(1..=4);
    let nodes = if rng.gen_bool(0.5) { distinct_nodes(rng, n) } else { nodes_with_repeats(rng, n) };
    let gammas = gamma_sequence(&f, &nodes)?.gammas;
    let a = point(rng, 0.9);
    let region = value_region(&nodes, &gammas, a)?.disk;
    Ok(positive(region.excess(f.eval(a.value())?)))
}

fn bounds_region_sharpness(rng: &mut ChaCha8Rng, _: &Ctx) -> Result<f64> {
    let n = rng.gen_range(1..=3);
    let nodes = distinct_nodes(rng, n);
    let gammas: Vec<Complex64> = (0..n).map(|_| uniform_in_disk(rng, 0.8)).collect();
    let terminal = Complex64::from_polar(1.0, rng.gen::<f64>() * std::f64::consts::TAU);
    let f = schur_synth(&nodes, &gammas, terminal)?;
    let a = point(rng, 0.9);
    let region = value_region(&nodes, &gammas, a)?.disk;
    Ok(region.excess(f.eval(a.value())?).abs())
}

fn bounds_modulus_chain(rng: &mut ChaCha8Rng, _: &Ctx) -> Result<f64> {
    let f = schur_fn(rng)?;
    let n = rng.gen_range(1..=4);
    let nodes = distinct_nodes(rng, n);
    let gammas = gamma_sequence(&f, &nodes)?.gammas;
    let a = point(rng, 0.9);
    let chain = modulus_bound_chain(&nodes, &gammas, a)?;
    let region = value_region(&nodes, &gammas, a)?.disk;
    let monotone = chain.values.windows(2).map(|w| positive(w[1] - w[0])).fold(0.0, f64::max);
    let realized = positive(f.eval(a.value())?.norm() - chain.last());
    let relaxation = positive(region.sup_modulus() - chain.last());
    Ok(monotone.max(realized).max(relaxation))
}

fn bounds_distance_chain(rng: &mut ChaCha8Rng, _: &Ctx) -> Result<f64> {
    let f = schur_fn(rng)?;
    let z0 = point(rng, 0.8);
    let mut nodes = vec![z0];
    let n = rng.gen_range(0..=3);
    nodes.extend(nodes_with_repeats(rng, n));
    let gammas = gamma_sequence(&f, &nodes)?.gammas;
    let z = point(rng, 0.8);
    let chain = distance_bound_chain(&nodes, &gammas, z, z0)?;
    let a = DiskPoint::interior(f.eval(z.value())?)?;
    let b = DiskPoint::interior(gammas[0])?;
    let realized = hyperbolic_distance(a, b)?.exp();
    let monotone = chain.values.windows(2).map(|w| positive(w[1] - w[0])).fold(0.0, f64::max);
    Ok(rel(positive(realized - chain.last()), chain.last()).max(monotone))
}

fn dieudonne_instance(f: &AnalyticFn, z0: DiskPoint, z: DiskPoint) -> Result<(ClosedDisk, Complex64)> {
    let jet = f.eval_jet(z, 1)?;
    let w0 = DiskPoint::interior(f.eval(z0.value())?)?;
    Ok((dieudonne_region(z0, w0, z, jet.value())?, jet.coeff(1)))
}

fn bounds_dieudonne_soundness(rng: &mut ChaCha8Rng, _: &Ctx) -> Result<f64> {
    let f = schur_fn(rng)?;
    let (z0, z) = (point(rng, 0.8), point(rng, 0.8));
    let (region, derivative) = dieudonne_instance(&f, z0, z)?;
    Ok(positive(region.excess(derivative)))
}

fn bounds_dieudonne_equality(rng: &mut ChaCha8Rng, _: &Ctx) -> Result<f64> {
    let degree = rng.gen_range(1..=2);
    let f = blaschke(rng, degree)?;
    let (z0, z) = (point(rng, 0.8), point(rng, 0.8));
    let (region, derivative) = dieudonne_instance(&f, z0, z)?;
    Ok(region.excess(derivative).abs())
}

/// Arbitrary consistent data `(z0, w0, z, w)` with a derivative candidate `v`
/// inside or outside the region: the disk ratio equals `|f_2(z; z, z0)|`, and
/// `|f_2(z0; z, z)|` falls on the same side of 1.
fn bounds_dieudonne_equivalence(rng: &mut ChaCha8Rng, _: &Ctx) -> Result<f64> {
    let (z0, z) = (point(rng, 0.8), point(rng, 0.8));
    let w0 = point(rng, 0.8).value();
    let tau = bracket_raw(z.value(), z0.value()).norm();
    let w = loop {
        let w = uniform_in_disk(rng, 0.99);
        if bracket_raw(w, w0).norm() < tau {
            break w;
        }
    };
    let region = dieudonne_region(z0, DiskPoint::interior(w0)?, z, w)?;
    if region.radius < 1e-6 {
        return Ok(0.0);
    }
    let v = region.center + uniform_in_disk(rng, 2.0 * region.radius);
    let ratio = (v - region.center).norm() / region.radius;

    let f = Jet::new(z.value(), vec![w, v])?;
    let g = Jet::div(&f.bracket_with(w0)?, &Jet::variable(z.value(), 1).bracket_with(z0.value())?)?;
    let f2_forward = (1.0 - z.value().norm_sqr()) * g.coeff(1).norm() / (1.0 - g.value().norm_sqr());

    let f1_at_z0 = bracket_raw(w0, w) / bracket_raw(z0.value(), z.value());
    let f1_at_z = (1.0 - z.value().norm_sqr()) * v / (1.0 - w.norm_sqr());
    let f2_reverse = (bracket_raw(f1_at_z0, f1_at_z) / bracket_raw(z0.value(), z.value())).norm();

    let identity = rel((ratio - f2_forward).abs(), ratio);
    let decisive = (ratio - 1.0).abs() > 1e-6 && (f2_reverse - 1.0).abs() > 1e-6;
    let sides = if decisive && ((ratio <= 1.0) != (f2_reverse <= 1.0)) { 1.0 } else { 0.0 };
    Ok(identity.max(sides))
}

// ---------------------------------------------------------------- pick

fn separated_query<R: Rng>(rng: &mut R, nodes: &[DiskPoint]) -> DiskPoint {
    loop {
        let z = point(rng, 0.85);
        if nodes.iter().all(|n| bracket_raw(z.value(), n.value()).norm() >= NODE_SEPARATION) {
            return z;
        }
    }
}

fn pick_interpolant_constraints(rng: &mut ChaCha8Rng, _: &Ctx) -> Result<f64> {
    let n = rng.gen_range(1..=5);
    let data = random_data(rng, n, NODE_SEPARATION, false)?;
    let f = interpolate(&data, uniform_in_disk(rng, 0.99))?;
    let mut worst = 0.0_f64;
    for p in data.points() {
        worst = worst.max((f.eval(p.z)? - p.w).norm());
    }
    Ok(worst)
}

fn pick_interpolant_in_region(rng: &mut ChaCha8Rng, _: &Ctx) -> Result<f64> {
    let n = rng.gen_range(1..=5);
    let data = random_data(rng, n, NODE_SEPARATION, false)?;
    let f = interpolate(&data, uniform_in_disk(rng, 0.99))?;
    let z = point(rng, 0.9);
    Ok(positive(variability_region(&data, z)?.excess(f.eval(z.value())?)))
}

fn pick_permutation_invariance(rng: &mut ChaCha8Rng, _: &Ctx) -> Result<f64> {
    let n = rng.gen_range(2..=5);
    let data = random_data(rng, n, NODE_SEPARATION, false)?;
    let z = point(rng, 0.85);
    let mut perm: Vec<usize> = (0..n).collect();
    for i in (1..n).rev() {
        perm.swap(i, rng.gen_range(0..=i));
    }
    let a = variability_region(&data, z)?;
    let b = variability_region(&data.permuted(&perm)?, z)?;
    Ok((a.center - b.center).norm().max((a.radius - b.radius).abs()))
}

fn pick_verdict_agreement(rng: &mut ChaCha8Rng, _: &Ctx) -> Result<f64> {
    let perturb = rng.gen_bool(0.5);
    let n = rng.gen_range(1..=5);
    let data = random_data(rng, n, NODE_SEPARATION, perturb)?;
    match feasibility(&data) {
        Ok(_) => Ok(0.0),
        Err(Error::VerdictDisagreement { .. }) => Ok(1.0),
        Err(e) => Err(e),
    }
}

fn pick_region_exhaustiveness(rng: &mut ChaCha8Rng, _: &Ctx) -> Result<f64> {
    let n = rng.gen_range(1..=4);
    let data = random_data(rng, n, NODE_SEPARATION, false)?;
    let z = separated_query(rng, &data.nodes());
    let region = variability_region(&data, z)?;
    let b = region.boundary_point(rng.gen::<f64>() * std::f64::consts::TAU);
    let extended = data.with_point(z.value(), b)?;
    match feasibility(&extended) {
        Ok(v) if v.status == FeasibilityStatus::BoundaryFeasible => Ok(0.0),
        Ok(_) | Err(Error::VerdictDisagreement { .. }) => Ok(1.0),
        Err(e) => Err(e),
    }
}
