//! Seeded generation of test problems.
//!
//! Feasible problems come from a hidden strictly contractive colligation:
//! its interpolant is sampled at random nodes, so the Pick matrix is
//! positive semidefinite by construction. Infeasible problems start from a
//! feasible one and inflate a single value until the Pick matrix acquires a
//! clearly negative eigenvalue.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::matcore::{self, CMatrix, Tolerances};
use crate::pick::{self, PickProblem};
use crate::realize::{self, Colligation};
use crate::sample;

/// Norm the hidden colligation is scaled to.
pub const HIDDEN_NORM: f64 = 0.95;
/// Radius nodes are drawn from.
pub const NODE_RADIUS: f64 = 0.9;
/// Minimum pairwise node distance enforced while sampling.
pub const NODE_SPACING: f64 = 1e-3;
pub const MAX_ESCALATIONS: usize = 100;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Feasible,
    Infeasible,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GenSpec {
    pub n: usize,
    /// Nodes beyond the first.
    pub k: usize,
    pub d: usize,
    pub seed: u64,
    pub mode: Mode,
    pub state_dim: usize,
}

impl GenSpec {
    pub fn validate(&self) -> Result<()> {
        if self.n == 0 || self.d == 0 || self.state_dim == 0 {
            return Err(Error::Validation("n, dim and state_dim must be at least 1".into()));
        }
        Ok(())
    }
}

/// The hidden colligation behind a feasible problem.
pub fn hidden_colligation(spec: &GenSpec) -> Colligation {
    let (n, d, r) = (spec.n, spec.d, spec.state_dim);
    let mut rng = sample::stream(spec.seed, 0);
    let u = sample::gaussian_matrix(&mut rng, r + d, n * r + d);
    let u = u.scale(HIDDEN_NORM / matcore::op_norm(&u));
    Colligation::new(
        n,
        d,
        r,
        u.view((0, 0), (r, n * r)).into_owned(),
        u.view((0, n * r), (r, d)).into_owned(),
        u.view((r, 0), (d, n * r)).into_owned(),
        u.view((r, n * r), (d, d)).into_owned(),
    )
    .expect("shapes follow from the spec")
}

fn sample_nodes(spec: &GenSpec) -> Vec<Vec<Complex64>> {
    let mut rng = sample::stream(spec.seed, 1);
    let mut nodes: Vec<Vec<Complex64>> = Vec::with_capacity(spec.k + 1);
    while nodes.len() < spec.k + 1 {
        let z = sample::ball_point(&mut rng, spec.n, NODE_RADIUS);
        let far = nodes
            .iter()
            .all(|w| w.iter().zip(&z).map(|(a, b)| (a - b).norm_sqr()).sum::<f64>().sqrt() > NODE_SPACING);
        if far {
            nodes.push(z);
        }
    }
    nodes
}

pub fn generate_problem(spec: &GenSpec) -> Result<PickProblem> {
    spec.validate()?;
    let col = hidden_colligation(spec);
    let nodes = sample_nodes(spec);
    let values = nodes
        .iter()
        .map(|z| realize::herglotz_eval(&col, &realize::scalar_tuple(z)))
        .collect::<Result<Vec<_>>>()?;
    let feasible = PickProblem::new(spec.n, spec.d, nodes, values)?;
    match spec.mode {
        Mode::Feasible => Ok(feasible),
        Mode::Infeasible => inflate(spec, &feasible),
    }
}

/// Perturbs the last value by `t = 2^s (1 + max |W|)`, s = 0, 1, ...: its
/// `(0, 1)` entry when `d >= 2`, otherwise the whole value is scaled by
/// `1 + t` (or shifted by `-t` for a single scalar node).
fn inflate(spec: &GenSpec, base: &PickProblem) -> Result<PickProblem> {
    let threshold = -10.0 * Tolerances::default().tol_psd;
    let j = base.len() - 1;
    let scale = 1.0 + base.values().iter().map(matcore::max_abs).fold(0.0, f64::max);
    for s in 0..MAX_ESCALATIONS {
        let t = 2f64.powi(s as i32) * scale;
        let mut values: Vec<CMatrix> = base.values().to_vec();
        let w = &mut values[j];
        if spec.d >= 2 {
            w[(0, 1)] += Complex64::new(t, 0.0);
        } else if base.len() >= 2 {
            *w *= Complex64::new(1.0 + t, 0.0);
        } else {
            w[(0, 0)] -= Complex64::new(t, 0.0);
        }
        let candidate = base.with_values(values)?;
        if pick::feasibility(&candidate).min_eig < threshold {
            return Ok(candidate);
        }
    }
    Err(Error::GenerationFailed { seed: spec.seed })
}
