//! Automorphisms of the unit ball of `C^n`,
//!
//! ```text
//! psi_a(z) = (a - P_a z - s_a (I - P_a) z) / (1 - <z, a>)
//! ```
//!
//! with `P_a z = <z, a> a / <a, a>` (and `P_0 = 0`) and
//! `s_a = (1 - <a, a>)^{1/2}`. Each `psi_a` is an involution swapping `0`
//! and `a`, and transports Pick data so that any chosen node moves to the
//! origin.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::fock::{check_in_ball, inner, norm_sqr};
use crate::matcore::{self, Tolerances};
use crate::pick::{self, PickProblem};

#[derive(Debug, Clone, PartialEq)]
pub struct Automorphism {
    a: Vec<Complex64>,
    s_a: f64,
}

impl Automorphism {
    pub fn new(a: Vec<Complex64>) -> Result<Self> {
        check_in_ball(&a)?;
        let s_a = (1.0 - norm_sqr(&a)).sqrt();
        Ok(Automorphism { a, s_a })
    }

    pub fn center(&self) -> &[Complex64] {
        &self.a
    }

    pub fn s_a(&self) -> f64 {
        self.s_a
    }

    pub fn psi(&self, z: &[Complex64]) -> Result<Vec<Complex64>> {
        psi(self, z)
    }
}

pub fn psi(aut: &Automorphism, z: &[Complex64]) -> Result<Vec<Complex64>> {
    check_in_ball(z)?;
    if z.len() != aut.a.len() {
        return Err(Error::ShapeMismatch(format!(
            "point has {} coordinates, automorphism acts on C^{}",
            z.len(),
            aut.a.len()
        )));
    }
    let aa = norm_sqr(&aut.a);
    let za = inner(z, &aut.a);
    let denom = matcore::ONE - za;
    let proj_coef = if aa == 0.0 { matcore::ZERO } else { za / aa };
    let out = aut
        .a
        .iter()
        .zip(z)
        .map(|(&ai, &zi)| {
            let pz = proj_coef * ai;
            (ai - pz - (zi - pz) * aut.s_a) / denom
        })
        .collect();
    Ok(out)
}

/// `|LHS - RHS|` of
/// `1 - <psi_a(z), psi_a(w)> = (1 - <a,a>)(1 - <z,w>) / ((1 - <z,a>)(1 - <a,w>))`.
pub fn kernel_identity_residual(aut: &Automorphism, z: &[Complex64], w: &[Complex64]) -> Result<f64> {
    let (pz, pw) = (psi(aut, z)?, psi(aut, w)?);
    let lhs = matcore::ONE - inner(&pz, &pw);
    let a = &aut.a;
    let rhs = (1.0 - norm_sqr(a)) * (matcore::ONE - inner(z, w))
        / ((matcore::ONE - inner(z, a)) * (matcore::ONE - inner(a, w)));
    Ok((lhs - rhs).norm())
}

/// Moves node `base` to the origin: nodes become `psi_a(lambda_j)` with
/// `a = lambda_base`, values are unchanged, and the returned weights are
/// `delta_j = (1 - <lambda_j, a>) / sqrt(1 - <a, a>)`. The transported Pick
/// matrix equals `delta_i conj(delta_j)` times the original blockwise.
pub fn transport(p: &PickProblem, base: usize) -> Result<(PickProblem, Vec<Complex64>)> {
    if base >= p.len() {
        return Err(Error::BadIndex {
            index: base,
            len: p.len(),
        });
    }
    let aut = Automorphism::new(p.nodes()[base].clone())?;
    let nodes = p.nodes().iter().map(|z| psi(&aut, z)).collect::<Result<Vec<_>>>()?;
    let weights: Vec<Complex64> = p
        .nodes()
        .iter()
        .map(|z| (matcore::ONE - inner(z, &aut.a)) / aut.s_a)
        .collect();
    let moved = PickProblem::new(p.n(), p.d(), nodes, p.values().to_vec())?;

    let (before, after) = (pick::pick_matrix(p), pick::pick_matrix(&moved));
    let d = p.d();
    let mut worst = 0.0f64;
    for i in 0..p.len() {
        for j in 0..p.len() {
            let factor = weights[i] * weights[j].conj();
            for r in 0..d {
                for c in 0..d {
                    let want = before[(i * d + r, j * d + c)] * factor;
                    worst = worst.max((after[(i * d + r, j * d + c)] - want).norm());
                }
            }
        }
    }
    let scale = matcore::max_abs(&after).max(1.0);
    if worst > Tolerances::default().tol_eq * scale {
        return Err(Error::VerificationFailed(format!(
            "transported Pick matrix deviates from the weighted original by {worst:e}"
        )));
    }
    Ok((moved, weights))
}
