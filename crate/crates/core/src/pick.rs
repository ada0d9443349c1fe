//! Carathéodory-Pick data: interpolation nodes in the open unit ball of
//! `C^n` with `d x d` target values, the block Pick matrix
//! `[(W_i + W_j*) / (1 - <lambda_i, lambda_j>)]`, and the passage to
//! Schur-class data through the operator Cayley transform.
//!
//! The inner product is `<z, w> = sum_t z_t conj(w_t)` everywhere.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fock::{check_in_ball, inner};
use crate::matcore::{self, CMatrix, Tolerances};

/// Nodes closer than this are rejected as duplicates.
pub const MIN_NODE_SEPARATION: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq)]
pub struct PickProblem {
    n: usize,
    d: usize,
    nodes: Vec<Vec<Complex64>>,
    values: Vec<CMatrix>,
}

impl PickProblem {
    /// Validates and builds a problem. Errors name the offending index.
    pub fn new(n: usize, d: usize, nodes: Vec<Vec<Complex64>>, values: Vec<CMatrix>) -> Result<Self> {
        if n == 0 || d == 0 {
            return Err(Error::Validation("n and dim must be positive".into()));
        }
        if nodes.is_empty() {
            return Err(Error::Validation("at least one node is required".into()));
        }
        if nodes.len() != values.len() {
            return Err(Error::Validation(format!(
                "{} nodes but {} values",
                nodes.len(),
                values.len()
            )));
        }
        for (j, z) in nodes.iter().enumerate() {
            if z.len() != n {
                return Err(Error::Validation(format!(
                    "node {j} has {} coordinates, expected {n}",
                    z.len()
                )));
            }
            if z.iter().any(|c| !c.re.is_finite() || !c.im.is_finite()) {
                return Err(Error::Validation(format!("node {j} is not finite")));
            }
            if let Err(Error::OutsideBall { norm }) = check_in_ball(z) {
                return Err(Error::Validation(format!(
                    "node {j} has norm {norm} and is not inside the open unit ball"
                )));
            }
        }
        for (j, w) in values.iter().enumerate() {
            if w.shape() != (d, d) {
                return Err(Error::Validation(format!(
                    "value {j} is {:?}, expected {d}x{d}",
                    w.shape()
                )));
            }
            if !matcore::is_finite(w) {
                return Err(Error::Validation(format!("value {j} is not finite")));
            }
        }
        for i in 0..nodes.len() {
            for j in i + 1..nodes.len() {
                let dist: f64 = nodes[i]
                    .iter()
                    .zip(&nodes[j])
                    .map(|(a, b)| (a - b).norm_sqr())
                    .sum::<f64>()
                    .sqrt();
                if dist <= MIN_NODE_SEPARATION {
                    return Err(Error::Validation(format!("nodes {i} and {j} coincide")));
                }
            }
        }
        Ok(PickProblem { n, d, nodes, values })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn nodes(&self) -> &[Vec<Complex64>] {
        &self.nodes
    }

    pub fn values(&self) -> &[CMatrix] {
        &self.values
    }

    /// Same nodes with new values.
    pub fn with_values(&self, values: Vec<CMatrix>) -> Result<PickProblem> {
        PickProblem::new(self.n, self.d, self.nodes.clone(), values)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FeasibilityReport {
    pub min_eig: f64,
    pub feasible: bool,
    pub matrix_size: usize,
    /// Set when the minimum eigenvalue sits within `tol_psd` of zero.
    pub boundary: bool,
}

/// Block matrix with entries `(W_i + W_j*) / (1 - <lambda_i, lambda_j>)`,
/// node-major.
pub fn pick_matrix(p: &PickProblem) -> CMatrix {
    block_kernel(p.nodes(), |i, j| &p.values[i] + p.values[j].adjoint(), p.d)
}

fn block_kernel(nodes: &[Vec<Complex64>], numer: impl Fn(usize, usize) -> CMatrix, d: usize) -> CMatrix {
    let k = nodes.len();
    let mut out = CMatrix::zeros(k * d, k * d);
    for i in 0..k {
        for j in 0..k {
            let denom = matcore::ONE - inner(&nodes[i], &nodes[j]);
            let block = numer(i, j).map(|z| z / denom);
            out.view_mut((i * d, j * d), (d, d)).copy_from(&block);
        }
    }
    out
}

pub fn feasibility(p: &PickProblem) -> FeasibilityReport {
    feasibility_with(p, &Tolerances::default())
}

pub fn feasibility_with(p: &PickProblem, tol: &Tolerances) -> FeasibilityReport {
    let pm = pick_matrix(p);
    let min_eig = matcore::herm_min_eig(&pm).expect("Pick matrix is Hermitian by construction");
    FeasibilityReport {
        min_eig,
        feasible: min_eig >= -tol.tol_psd,
        matrix_size: pm.nrows(),
        boundary: min_eig.abs() < tol.tol_psd,
    }
}

/// Cayley-transformed values `w_j = (W_j - I)(W_j + I)^{-1}` and the
/// Schur-side Pick matrix `[(I - w_i w_j*) / (1 - <lambda_i, lambda_j>)]`.
#[derive(Debug, Clone)]
pub struct SchurData {
    pub w: Vec<CMatrix>,
    pub pick: CMatrix,
}

pub fn to_schur_data(p: &PickProblem) -> Result<SchurData> {
    let w = p
        .values
        .iter()
        .enumerate()
        .map(|(j, v)| {
            matcore::cayley_op(v).map_err(|_| Error::SingularShift {
                context: format!("I + W_{j} is numerically singular"),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let id = matcore::identity(p.d);
    let pick = block_kernel(p.nodes(), |i, j| &id - &w[i] * w[j].adjoint(), p.d);
    debug_assert!({
        let delta = block_diag(
            &p.values
                .iter()
                .map(|v| matcore::checked_inverse(&(v + &id), "W + I").unwrap())
                .collect::<Vec<_>>(),
        );
        let congruent = (&delta * pick_matrix(p) * delta.adjoint()).scale(2.0);
        matcore::max_abs_diff(&congruent, &pick)
            <= Tolerances::default().tol_eq * matcore::max_abs(&pick).max(1.0) * 10.0
    });
    Ok(SchurData { w, pick })
}

pub fn block_diag(blocks: &[CMatrix]) -> CMatrix {
    let size: usize = blocks.iter().map(|b| b.nrows()).sum();
    let mut out = CMatrix::zeros(size, size);
    let mut at = 0;
    for b in blocks {
        out.view_mut((at, at), b.shape()).copy_from(b);
        at += b.nrows();
    }
    out
}
