//! Bounded analytic functions on the unit disk as immutable expression trees.
//!
//! Every node kind except [`Node::Polynomial`] is bounded by 1 by
//! construction. Polynomials must pass [`validate_bounded`] before operations
//! that assume `|f| <= 1` will accept them.

use std::sync::Arc;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::geometry::{DiskPoint, MobiusMap};
use crate::hdq::EPS_UNIMODULAR;
use crate::jet::Jet;

/// Below this separation a difference quotient is evaluated through the
/// removable-singularity path (expand at the node, cancel, recenter).
pub const EPS_COINCIDENT: f64 = 1e-8;

/// Sampled maximum modulus allowed for a polynomial to count as bounded.
pub const EPS_BOUNDED: f64 = 1e-9;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

#[derive(Debug, Clone, PartialEq)]
pub enum Node {
    Constant(Complex64),
    Polynomial { coeffs: Vec<Complex64>, validated: bool },
    Blaschke { theta: f64, zeros: Vec<Complex64> },
    /// `map ∘ inner`, with `map` sending the closed disk into itself.
    PostMobius { map: MobiusMap, inner: AnalyticFn },
    /// `inner ∘ map`, with `map` a disk automorphism.
    PreAutomorphism { map: MobiusMap, inner: AnalyticFn },
    Product(AnalyticFn, AnalyticFn),
    /// Hyperbolic difference quotient of `inner` at `node`; `gamma = inner(node)`.
    Delta { inner: AnalyticFn, node: Complex64, gamma: Complex64 },
    /// `([z, node] inner(z) + gamma) / (1 + conj(gamma) [z, node] inner(z))`.
    SchurSynth { node: Complex64, gamma: Complex64, inner: AnalyticFn },
}

/// A shared, immutable element of the closed unit ball of `H^∞(D)`.
#[derive(Debug, Clone, PartialEq)]
pub struct AnalyticFn(Arc<Node>);

impl AnalyticFn {
    fn wrap(node: Node) -> Self {
        Self(Arc::new(node))
    }

    pub fn node(&self) -> &Node {
        &self.0
    }

    pub fn constant(c: Complex64) -> Result<Self> {
        DiskPoint::closed(c)?;
        Ok(Self::wrap(Node::Constant(c)))
    }

    pub fn zero() -> Self {
        Self::wrap(Node::Constant(ZERO))
    }

    /// `f(z) = z`.
    pub fn identity() -> Self {
        Self::wrap(Node::Blaschke { theta: 0.0, zeros: vec![ZERO] })
    }

    /// An unvalidated polynomial `Σ coeffs[k] z^k`.
    pub fn polynomial(coeffs: Vec<Complex64>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::InvalidArgument("empty polynomial".into()));
        }
        if coeffs.iter().any(|c| !(c.re.is_finite() && c.im.is_finite())) {
            return Err(Error::NonFinite);
        }
        Ok(Self::wrap(Node::Polynomial { coeffs, validated: false }))
    }

    pub fn blaschke(theta: f64, zeros: &[DiskPoint]) -> Result<Self> {
        if !theta.is_finite() {
            return Err(Error::NonFinite);
        }
        if zeros.iter().any(|a| !a.is_interior()) {
            return Err(Error::ZeroOutsideDisk);
        }
        let zeros = zeros.iter().map(|a| a.value()).collect();
        Ok(Self::wrap(Node::Blaschke { theta, zeros }))
    }

    pub fn post_mobius(map: MobiusMap, inner: AnalyticFn) -> Result<Self> {
        if !map.is_self_map() {
            return Err(Error::NotSelfMap);
        }
        Ok(Self::wrap(Node::PostMobius { map, inner }))
    }

    pub fn pre_automorphism(map: MobiusMap, inner: AnalyticFn) -> Result<Self> {
        if !map.is_automorphism() {
            return Err(Error::NotAutomorphism);
        }
        Ok(Self::wrap(Node::PreAutomorphism { map, inner }))
    }

    pub fn product(left: AnalyticFn, right: AnalyticFn) -> Self {
        Self::wrap(Node::Product(left, right))
    }

    /// One step of Schur back-substitution: the function whose difference
    /// quotient at `node` is `inner` and whose value at `node` is `gamma`.
    pub fn schur_synth(node: DiskPoint, gamma: Complex64, inner: AnalyticFn) -> Result<Self> {
        if !node.is_interior() {
            return Err(Error::OutsideDisk { re: node.value().re, im: node.value().im, domain: "open" });
        }
        DiskPoint::closed(gamma)?;
        Ok(Self::wrap(Node::SchurSynth { node: node.value(), gamma, inner }))
    }

    pub(crate) fn delta_node(inner: AnalyticFn, node: Complex64, gamma: Complex64) -> Self {
        Self::wrap(Node::Delta { inner, node, gamma })
    }

    /// False when the tree holds a polynomial that has not been validated.
    pub fn is_admissible(&self) -> bool {
        match self.node() {
            Node::Constant(_) | Node::Blaschke { .. } => true,
            Node::Polynomial { validated, .. } => *validated,
            Node::PostMobius { inner, .. }
            | Node::PreAutomorphism { inner, .. }
            | Node::Delta { inner, .. }
            | Node::SchurSynth { inner, .. } => inner.is_admissible(),
            Node::Product(l, r) => l.is_admissible() && r.is_admissible(),
        }
    }

    pub(crate) fn require_admissible(&self) -> Result<()> {
        if self.is_admissible() {
            Ok(())
        } else {
            Err(Error::UnvalidatedPolynomial)
        }
    }

    /// Whether this is a constant of modulus one.
    pub fn is_unimodular_constant(&self) -> bool {
        matches!(self.node(), Node::Constant(c) if c.norm() >= 1.0 - EPS_UNIMODULAR)
    }

    /// Taylor jet of order `order` about the interior point `z`.
    pub fn eval_jet(&self, z: DiskPoint, order: usize) -> Result<Jet> {
        if !z.is_interior() {
            let v = z.value();
            return Err(Error::OutsideDisk { re: v.re, im: v.im, domain: "open" });
        }
        self.jet_at(z.value(), order)
    }

    /// `f(z)` for `|z| < 1`.
    pub fn eval(&self, z: Complex64) -> Result<Complex64> {
        if z.norm() >= 1.0 || z.norm().is_nan() {
            return Err(Error::OutsideDisk { re: z.re, im: z.im, domain: "open" });
        }
        Ok(self.jet_at(z, 0)?.value())
    }

    pub(crate) fn jet_at(&self, z: Complex64, order: usize) -> Result<Jet> {
        match self.node() {
            Node::Constant(c) => Ok(Jet::constant(z, *c, order)),
            Node::Polynomial { coeffs, .. } => {
                let x = Jet::variable(z, order);
                let mut acc = Jet::constant(z, coeffs[coeffs.len() - 1], order);
                for c in coeffs.iter().rev().skip(1) {
                    acc = acc.mul(&x)?.add_scalar(*c);
                }
                Ok(acc)
            }
            Node::Blaschke { theta, zeros } => {
                let x = Jet::variable(z, order);
                let mut acc = Jet::constant(z, Complex64::from_polar(1.0, *theta), order);
                for a in zeros {
                    acc = acc.mul(&x.bracket_with(*a)?)?;
                }
                Ok(acc)
            }
            Node::PostMobius { map, inner } => inner.jet_at(z, order)?.mobius(map),
            Node::PreAutomorphism { map, inner } => {
                let t = Jet::variable(z, order).mobius(map)?;
                let outer = inner.jet_at(t.value(), order)?;
                Jet::compose(&outer, &t)
            }
            Node::Product(l, r) => l.jet_at(z, order)?.mul(&r.jet_at(z, order)?),
            Node::Delta { inner, node, gamma } => delta_jet(inner, *node, *gamma, z, order),
            Node::SchurSynth { node, gamma, inner } => {
                let g = inner.jet_at(z, order)?;
                let t = Jet::variable(z, order).bracket_with(*node)?.mul(&g)?;
                t.mobius(&MobiusMap::new(ONE, *gamma, gamma.conj(), ONE))
            }
        }
    }
}

fn delta_jet(
    inner: &AnalyticFn,
    node: Complex64,
    gamma: Complex64,
    z: Complex64,
    order: usize,
) -> Result<Jet> {
    if gamma.norm() >= 1.0 - EPS_UNIMODULAR {
        // [z, z] = 0 on the boundary: the quotient of a unimodular constant is 0
        return Ok(Jet::zero(z, order));
    }
    if (z - node).norm() < EPS_COINCIDENT {
        let f = inner.jet_at(node, order + 1)?;
        // use the value of this very expansion so the numerator vanishes exactly
        let num = f.bracket_with(f.value())?;
        let den = Jet::variable(node, order + 1).bracket_with(node)?;
        let q = Jet::div(&num, &den)?.truncate(order);
        return Ok(if z == node { q } else { q.recenter(z) });
    }
    let num = inner.jet_at(z, order)?.bracket_with(gamma)?;
    let den = Jet::variable(z, order).bracket_with(node)?;
    Jet::div(&num, &den)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundednessReport {
    pub max_modulus_estimate: f64,
    pub grid_points: usize,
    pub radius_used: f64,
    pub validated: bool,
}

/// Samples `|f|` on `n_samples` equispaced points of `|z| = radius`.
///
/// This is a maximum-principle heuristic, not a proof. When the sampled
/// maximum is at most `1 + 1e-9` the returned tree has every polynomial
/// leaf marked validated; otherwise the tree is returned unchanged.
pub fn validate_bounded(
    f: &AnalyticFn,
    n_samples: usize,
    radius: f64,
) -> Result<(AnalyticFn, BoundednessReport)> {
    if !(radius > 0.0 && radius < 1.0) {
        return Err(Error::InvalidArgument(format!("radius {radius} not in (0, 1)")));
    }
    if n_samples == 0 {
        return Err(Error::InvalidArgument("n_samples must be positive".into()));
    }
    let mut max = 0.0f64;
    for k in 0..n_samples {
        let t = std::f64::consts::TAU * k as f64 / n_samples as f64;
        max = max.max(f.jet_at(Complex64::from_polar(radius, t), 0)?.value().norm());
    }
    let validated = max <= 1.0 + EPS_BOUNDED;
    let report = BoundednessReport {
        max_modulus_estimate: max,
        grid_points: n_samples,
        radius_used: radius,
        validated,
    };
    let tree = if validated { mark_validated(f) } else { f.clone() };
    Ok((tree, report))
}

fn mark_validated(f: &AnalyticFn) -> AnalyticFn {
    let node = match f.node() {
        Node::Polynomial { coeffs, .. } => Node::Polynomial { coeffs: coeffs.clone(), validated: true },
        Node::Constant(_) | Node::Blaschke { .. } => return f.clone(),
        Node::PostMobius { map, inner } => Node::PostMobius { map: *map, inner: mark_validated(inner) },
        Node::PreAutomorphism { map, inner } => {
            Node::PreAutomorphism { map: *map, inner: mark_validated(inner) }
        }
        Node::Product(l, r) => Node::Product(mark_validated(l), mark_validated(r)),
        Node::Delta { inner, node, gamma } => {
            Node::Delta { inner: mark_validated(inner), node: *node, gamma: *gamma }
        }
        Node::SchurSynth { node, gamma, inner } => {
            Node::SchurSynth { node: *node, gamma: *gamma, inner: mark_validated(inner) }
        }
    };
    AnalyticFn::wrap(node)
}

/// Back-substitutes `f_j = [[z, z_j] f_{j+1}, -γ_j]` from `f_{n+1} = terminal`
/// down to `f_0`, which is returned.
pub fn schur_synth(nodes: &[DiskPoint], gammas: &[Complex64], terminal: Complex64) -> Result<AnalyticFn> {
    if nodes.len() != gammas.len() {
        return Err(Error::InvalidArgument(format!(
            "{} nodes but {} Schur parameters",
            nodes.len(),
            gammas.len()
        )));
    }
    let mut f = AnalyticFn::constant(terminal)?;
    for (node, gamma) in nodes.iter().zip(gammas).rev() {
        f = AnalyticFn::schur_synth(*node, *gamma, f)?;
    }
    Ok(f)
}

/// Uniform sample from `|w| <= radius`.
pub fn uniform_in_disk<R: Rng + ?Sized>(rng: &mut R, radius: f64) -> Complex64 {
    let r = radius * rng.gen::<f64>().sqrt();
    Complex64::from_polar(r, std::f64::consts::TAU * rng.gen::<f64>())
}

/// Random Schur-synthesized function with parameters drawn uniformly from
/// `|γ| <= gamma_cap`; `depth + 1` parameters at the given nodes (all zero by
/// default) and a terminal constant drawn from the same disk.
pub fn random_schur_fn_with<R: Rng + ?Sized>(
    rng: &mut R,
    depth: usize,
    gamma_cap: f64,
    nodes: Option<&[DiskPoint]>,
) -> Result<AnalyticFn> {
    if !(gamma_cap > 0.0 && gamma_cap < 1.0) {
        return Err(Error::InvalidArgument(format!("gamma cap {gamma_cap} not in (0, 1)")));
    }
    let nodes: Vec<DiskPoint> = match nodes {
        Some(n) if n.len() != depth + 1 => {
            return Err(Error::InvalidArgument(format!(
                "expected {} nodes, got {}",
                depth + 1,
                n.len()
            )))
        }
        Some(n) => n.to_vec(),
        None => vec![DiskPoint::ORIGIN; depth + 1],
    };
    let gammas: Vec<Complex64> = (0..=depth).map(|_| uniform_in_disk(rng, gamma_cap)).collect();
    let terminal = uniform_in_disk(rng, gamma_cap);
    schur_synth(&nodes, &gammas, terminal)
}

/// Deterministic per seed.
pub fn random_schur_fn(seed: u64, depth: usize, gamma_cap: f64) -> Result<AnalyticFn> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    random_schur_fn_with(&mut rng, depth, gamma_cap, None)
}
