//! The hyperbolic difference quotient `Δ_{z0} f`, its iterates
//! `f_j(z; z_{j-1}, ..., z_0)` and the generalized Schur parameters
//! `γ_j = f_j(z_j)`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::function::{AnalyticFn, Node};
use crate::geometry::DiskPoint;

/// `|γ| >= 1 - EPS_UNIMODULAR` counts as unimodular.
pub const EPS_UNIMODULAR: f64 = 1e-10;

/// `Δ_{z0} f(z) = [f(z), f(z0)] / [z, z0]`, extended to `z = z0` by the
/// hyperbolic derivative `(1 - |z0|²) f'(z0) / (1 - |f(z0)|²)`.
///
/// When `f(z0)` is unimodular (so `f` is a unimodular constant) the quotient
/// is the zero function; [`is_unimodular_quotient`] reports that case.
pub fn delta(f: &AnalyticFn, z0: DiskPoint) -> Result<AnalyticFn> {
    f.require_admissible()?;
    let node = interior(z0)?;
    let gamma = f.eval(node)?;
    Ok(AnalyticFn::delta_node(f.clone(), node, gamma))
}

/// True for a quotient node whose inner function is a unimodular constant.
pub fn is_unimodular_quotient(f: &AnalyticFn) -> bool {
    matches!(f.node(), Node::Delta { gamma, .. } if gamma.norm() >= 1.0 - EPS_UNIMODULAR)
}

/// `f_j = (Δ_{z_{j-1}} ∘ ... ∘ Δ_{z_0}) f`. Nodes may repeat.
pub fn iterated(f: &AnalyticFn, nodes: &[DiskPoint]) -> Result<AnalyticFn> {
    nodes.iter().try_fold(f.clone(), |acc, z| delta(&acc, *z))
}

fn interior(z: DiskPoint) -> Result<Complex64> {
    if z.is_interior() {
        Ok(z.value())
    } else {
        Err(Error::OutsideDisk { re: z.value().re, im: z.value().im, domain: "open" })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "index", rename_all = "snake_case")]
pub enum SchurStatus {
    /// Every computed parameter lies in the open disk.
    AllInterior,
    /// `|γ_n| = 1`; the function is a Blaschke product of degree `n`.
    UnimodularAt(usize),
    /// The recursion stopped after this many entries because the last one
    /// exceeded modulus one (the input is not bounded by one).
    Truncated(usize),
}

#[derive(Debug, Clone, PartialEq)]
pub struct SchurSequence {
    pub gammas: Vec<Complex64>,
    pub status: SchurStatus,
}

impl SchurSequence {
    /// Modulus of the entry that decided the status: `|γ_n|` for
    /// `UnimodularAt(n)`, the overflowing entry for `Truncated`, and the last
    /// entry otherwise.
    pub fn deciding_modulus(&self) -> f64 {
        let idx = match self.status {
            SchurStatus::UnimodularAt(n) => n,
            SchurStatus::Truncated(len) => len - 1,
            SchurStatus::AllInterior => self.gammas.len() - 1,
        };
        self.gammas[idx].norm()
    }

    pub fn blaschke_degree(&self) -> Option<usize> {
        blaschke_degree_detect(self)
    }
}

/// `γ_j = f_j(z_j)` for `j < nodes.len()`.
///
/// Stops at the first unimodular entry (status `UnimodularAt(n)`), padding the
/// remaining entries with zeros. An entry of modulus above `1 + ε` is
/// reported as is and ends the sequence (`Truncated`).
pub fn gamma_sequence(f: &AnalyticFn, nodes: &[DiskPoint]) -> Result<SchurSequence> {
    if nodes.is_empty() {
        return Err(Error::InvalidArgument("gamma_sequence needs at least one node".into()));
    }
    f.require_admissible()?;
    let mut gammas = Vec::with_capacity(nodes.len());
    let mut fj = f.clone();
    for (j, z) in nodes.iter().enumerate() {
        let node = interior(*z)?;
        let gamma = fj.eval(node)?;
        gammas.push(gamma);
        let m = gamma.norm();
        if m > 1.0 + EPS_UNIMODULAR {
            return Ok(SchurSequence { gammas, status: SchurStatus::Truncated(j + 1) });
        }
        if m >= 1.0 - EPS_UNIMODULAR {
            gammas.resize(nodes.len(), Complex64::new(0.0, 0.0));
            return Ok(SchurSequence { gammas, status: SchurStatus::UnimodularAt(j) });
        }
        fj = AnalyticFn::delta_node(fj, node, gamma);
    }
    Ok(SchurSequence { gammas, status: SchurStatus::AllInterior })
}

/// The classical Schur parameters `γ_0, ..., γ_n` (all nodes at the origin).
pub fn schur_classic(f: &AnalyticFn, n: usize) -> Result<SchurSequence> {
    gamma_sequence(f, &vec![DiskPoint::ORIGIN; n + 1])
}

/// `Some(n)` when the sequence terminated with `|γ_n| = 1`.
pub fn blaschke_degree_detect(s: &SchurSequence) -> Option<usize> {
    match s.status {
        SchurStatus::UnimodularAt(n) => Some(n),
        _ => None,
    }
}
