//! Nevanlinna-Pick interpolation: feasibility by two independent routes,
//! Schur parameters read off from data, constructive interpolants and
//! variability regions.

use num_complex::Complex64;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::bounds::value_region;
use crate::error::{Error, Result};
use crate::function::{schur_synth, uniform_in_disk, AnalyticFn};
use crate::geometry::{bracket_raw, pseudo_distance, ClosedDisk, DiskPoint};
use crate::hdq::{SchurSequence, SchurStatus};

/// Relative tolerance on Pick-matrix pivots.
pub const EPS_PSD: f64 = 1e-10;

/// Tolerance of the γ-recursion: `|γ| >= 1 - EPS_RECURSION` is unimodular,
/// `|γ| > 1 + EPS_RECURSION` is infeasible.
pub const EPS_RECURSION: f64 = 1e-8;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DataPoint {
    #[serde(with = "crate::io::cx")]
    pub z: Complex64,
    #[serde(with = "crate::io::cx")]
    pub w: Complex64,
}

/// Interpolation data `f(z_j) = w_j` with distinct interior nodes and
/// `|w_j| <= 1`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InterpolationData {
    points: Vec<DataPoint>,
}

impl InterpolationData {
    pub fn new(points: Vec<DataPoint>) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::InvalidArgument("interpolation data must be non-empty".into()));
        }
        for p in &points {
            DiskPoint::interior(p.z)?;
            DiskPoint::closed(p.w)?;
        }
        for i in 0..points.len() {
            for j in i + 1..points.len() {
                if points[i].z == points[j].z {
                    return Err(Error::RepeatedNode(i, j));
                }
            }
        }
        Ok(Self { points })
    }

    pub fn from_pairs(pairs: &[(Complex64, Complex64)]) -> Result<Self> {
        Self::new(pairs.iter().map(|&(z, w)| DataPoint { z, w }).collect())
    }

    pub fn points(&self) -> &[DataPoint] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn nodes(&self) -> Vec<DiskPoint> {
        self.points.iter().map(|p| DiskPoint::interior(p.z).expect("validated")).collect()
    }

    /// The same data in the order given by `perm`.
    pub fn permuted(&self, perm: &[usize]) -> Result<Self> {
        let mut seen = vec![false; self.len()];
        if perm.len() != self.len() || perm.iter().any(|&i| i >= self.len() || std::mem::replace(&mut seen[i], true)) {
            return Err(Error::InvalidArgument("not a permutation".into()));
        }
        Ok(Self { points: perm.iter().map(|&i| self.points[i]).collect() })
    }

    pub fn with_point(&self, z: Complex64, w: Complex64) -> Result<Self> {
        let mut points = self.points.clone();
        points.push(DataPoint { z, w });
        Self::new(points)
    }
}

/// `Q[h][k] = (1 - w_h conj(w_k)) / (1 - z_h conj(z_k))`.
pub fn pick_matrix(data: &InterpolationData) -> Vec<Vec<Complex64>> {
    let pts = data.points();
    pts.iter()
        .map(|h| {
            pts.iter()
                .map(|k| (1.0 - h.w * k.w.conj()) / (1.0 - h.z * k.z.conj()))
                .collect()
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FeasibilityStatus {
    StrictlyFeasible,
    BoundaryFeasible,
    Infeasible,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FeasibilityVerdict {
    pub status: FeasibilityStatus,
    /// Smallest pivot of the Pick matrix factorization; for a singular or
    /// indefinite remainder, its smallest diagonal entry.
    pub min_pivot: f64,
    pub gammas: Option<SchurSequence>,
}

/// Pivoted `LDL*` factorization with diagonal pivoting. Returns the verdict
/// and the smallest pivot encountered.
pub fn psd_verdict(q: &[Vec<Complex64>]) -> (FeasibilityStatus, f64) {
    let n = q.len();
    let scale = q.iter().flatten().map(|x| x.norm()).fold(0.0, f64::max);
    let eps = EPS_PSD * scale.max(f64::MIN_POSITIVE);
    let mut a: Vec<Vec<Complex64>> = q.to_vec();
    let mut active: Vec<usize> = (0..n).collect();
    let mut min_pivot = f64::INFINITY;
    while !active.is_empty() {
        let (pos, &p) = active
            .iter()
            .enumerate()
            .max_by(|x, y| a[*x.1][*x.1].re.total_cmp(&a[*y.1][*y.1].re))
            .expect("non-empty");
        let pivot = a[p][p].re;
        if pivot <= eps {
            let low = active.iter().map(|&i| a[i][i].re).fold(f64::INFINITY, f64::min);
            min_pivot = min_pivot.min(low);
            let off = active
                .iter()
                .flat_map(|&i| active.iter().filter(move |&&j| j != i).map(move |&j| (i, j)))
                .map(|(i, j)| a[i][j].norm())
                .fold(0.0, f64::max);
            let status = if low < -eps || off > eps {
                FeasibilityStatus::Infeasible
            } else {
                FeasibilityStatus::BoundaryFeasible
            };
            return (status, min_pivot);
        }
        min_pivot = min_pivot.min(pivot);
        active.swap_remove(pos);
        for &i in &active {
            let l = a[i][p] / pivot;
            for &j in &active {
                let upd = l * a[p][j];
                a[i][j] -= upd;
            }
        }
    }
    (FeasibilityStatus::StrictlyFeasible, min_pivot)
}

/// `γ_0 = w_0`, then `f_{j+1}(z_k) = [f_j(z_k), γ_j] / [z_k, z_j]` for `k > j`,
/// consuming the data in the given order.
pub fn gamma_recursion(data: &InterpolationData) -> (FeasibilityStatus, SchurSequence) {
    let pts = data.points();
    let n = pts.len();
    let mut vals: Vec<Complex64> = pts.iter().map(|p| p.w).collect();
    let mut gammas = Vec::with_capacity(n);
    for j in 0..n {
        let g = vals[j];
        gammas.push(g);
        let m = g.norm();
        if m > 1.0 + EPS_RECURSION {
            return (FeasibilityStatus::Infeasible, SchurSequence { gammas, status: SchurStatus::Truncated(j + 1) });
        }
        if m >= 1.0 - EPS_RECURSION {
            // a Blaschke product of degree j is forced: every later value must equal γ_j
            let consistent = vals[j + 1..].iter().all(|v| (v - g).norm() <= EPS_RECURSION);
            gammas.resize(n, ZERO);
            let status = if consistent {
                FeasibilityStatus::BoundaryFeasible
            } else {
                FeasibilityStatus::Infeasible
            };
            return (status, SchurSequence { gammas, status: SchurStatus::UnimodularAt(j) });
        }
        for k in j + 1..n {
            vals[k] = bracket_raw(vals[k], g) / bracket_raw(pts[k].z, pts[j].z);
        }
    }
    (FeasibilityStatus::StrictlyFeasible, SchurSequence { gammas, status: SchurStatus::AllInterior })
}

#[cfg(feature = "parallel")]
fn both<A: Send, B: Send>(a: impl FnOnce() -> A + Send, b: impl FnOnce() -> B + Send) -> (A, B) {
    rayon::join(a, b)
}

#[cfg(not(feature = "parallel"))]
fn both<A, B>(a: impl FnOnce() -> A, b: impl FnOnce() -> B) -> (A, B) {
    (a(), b())
}

/// Feasibility from the Pick matrix, cross-checked against the γ-recursion.
pub fn feasibility(data: &InterpolationData) -> Result<FeasibilityVerdict> {
    let ((pick, min_pivot), (recursion, seq)) = both(|| psd_verdict(&pick_matrix(data)), || gamma_recursion(data));
    if pick != recursion {
        return Err(Error::VerdictDisagreement { pick: format!("{pick:?}"), recursion: format!("{recursion:?}") });
    }
    Ok(FeasibilityVerdict { status: pick, min_pivot, gammas: Some(seq) })
}

/// The parameters that determine the solution set: all of them when strictly
/// feasible, those up to the unimodular one (normalized to modulus one) when
/// on the boundary.
fn effective(nodes: &[DiskPoint], verdict: &FeasibilityVerdict) -> Result<(Vec<DiskPoint>, Vec<Complex64>)> {
    let seq = verdict.gammas.as_ref().ok_or(Error::InfeasibleData)?;
    match (verdict.status, seq.status) {
        (FeasibilityStatus::Infeasible, _) => Err(Error::InfeasibleData),
        (_, SchurStatus::UnimodularAt(m)) => {
            let mut gammas = seq.gammas[..=m].to_vec();
            let norm = gammas[m].norm();
            gammas[m] /= norm;
            Ok((nodes[..=m].to_vec(), gammas))
        }
        _ => Ok((nodes.to_vec(), seq.gammas.clone())),
    }
}

/// The Schur back-substitution with `f_{n+1} ≡ terminal`. A unimodular
/// parameter `γ_m` ends the chain there as the terminal constant.
pub fn construct_interpolant(nodes: &[DiskPoint], gammas: &[Complex64], terminal: Complex64) -> Result<AnalyticFn> {
    if terminal.norm() > 1.0 + EPS_RECURSION {
        return Err(Error::InvalidArgument(format!("terminal modulus {} exceeds 1", terminal.norm())));
    }
    if nodes.len() != gammas.len() {
        return Err(Error::InvalidArgument("nodes and parameters differ in length".into()));
    }
    for (m, g) in gammas.iter().enumerate() {
        if g.norm() > 1.0 + EPS_RECURSION {
            return Err(Error::InfeasibleData);
        }
        if g.norm() >= 1.0 - EPS_RECURSION {
            return schur_synth(&nodes[..m], &gammas[..m], g / g.norm());
        }
    }
    schur_synth(nodes, gammas, terminal.unscale(terminal.norm().max(1.0)))
}

/// An interpolant of feasible data; `terminal` picks one member of the
/// one-parameter family (ignored for boundary data, whose solution is unique).
pub fn interpolate(data: &InterpolationData, terminal: Complex64) -> Result<AnalyticFn> {
    let verdict = feasibility(data)?;
    let (nodes, gammas) = effective(&data.nodes(), &verdict)?;
    construct_interpolant(&nodes, &gammas, terminal)
}

/// The closed disk of values `f(z)` over all interpolants of `data`.
pub fn variability_region(data: &InterpolationData, z: DiskPoint) -> Result<ClosedDisk> {
    let verdict = feasibility(data)?;
    let (nodes, gammas) = effective(&data.nodes(), &verdict)?;
    Ok(value_region(&nodes, &gammas, z)?.disk)
}

/// Random data of `n` points with pairwise pseudo-hyperbolic separation at
/// least `separation`, sampled from a random Schur function; when `perturb`
/// is set one value is replaced by a uniform draw from the closed disk.
pub fn random_data<R: Rng + ?Sized>(
    rng: &mut R,
    n: usize,
    separation: f64,
    perturb: bool,
) -> Result<InterpolationData> {
    let mut zs: Vec<DiskPoint> = Vec::with_capacity(n);
    while zs.len() < n {
        let z = DiskPoint::interior(uniform_in_disk(rng, 0.85))?;
        if zs.iter().all(|o| pseudo_distance(z, *o).is_ok_and(|d| d >= separation)) {
            zs.push(z);
        }
    }
    let f = crate::function::random_schur_fn_with(rng, 3, 0.9, None)?;
    let mut points = zs
        .iter()
        .map(|z| Ok(DataPoint { z: z.value(), w: f.eval(z.value())? }))
        .collect::<Result<Vec<_>>>()?;
    if perturb {
        let k = rng.gen_range(0..n);
        points[k].w = uniform_in_disk(rng, 1.0);
    }
    InterpolationData::new(points)
}
