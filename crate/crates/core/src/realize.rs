//! Realization-based interpolation.
//!
//! A [`Colligation`] `U = [A B; C D]` acting from `C^{n r} (+) C^d` to
//! `C^r (+) C^d` defines the Schur-class transfer function
//!
//! ```text
//! phi(X) = D* (x) I + (B* (x) I)(I - Z_X (A* (x) I))^{-1} Z_X (C* (x) I)
//! ```
//!
//! where `Z_X` sends the `t`-th copy of the state space to the state space,
//! acting by `X_t` on the second tensor factor. The interpolant with
//! positive real part is its inverse Cayley transform
//! `F(X) = (I - phi(X))^{-1}(I + phi(X))`.
//!
//! [`solve`] builds `U` from feasible Pick data: factor the Schur-side Pick
//! matrix as `G* G`, then `U` is the partial isometry carrying the columns
//! `[conj(lambda_j) (x) G_j ; I]` onto `[G_j ; w_j*]`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fock::inner;
use crate::matcore::{self, CMatrix, Tolerances};
use crate::par;
use crate::pick::{self, PickProblem};
use crate::sample;
use crate::series::FreeSeries;
use crate::words::{self, Word};

/// Radius of the ball the verifier samples kernel points from.
pub const VERIFY_RADIUS: f64 = 0.95;

/// Node residual accepted by [`solve`] and [`verify`].
pub const RESIDUAL_TOL: f64 = 1e-8;

#[derive(Debug, Clone, PartialEq)]
pub struct Colligation {
    pub n: usize,
    pub dim: usize,
    /// State dimension.
    pub r: usize,
    /// `r x (n r)`; column block `t` acts on the `t`-th copy of the state.
    pub a: CMatrix,
    /// `r x dim`.
    pub b: CMatrix,
    /// `dim x (n r)`.
    pub c: CMatrix,
    /// `dim x dim`.
    pub d: CMatrix,
}

impl Colligation {
    /// Checks that all blocks have shapes consistent with `(n, dim, r)`.
    pub fn new(n: usize, dim: usize, r: usize, a: CMatrix, b: CMatrix, c: CMatrix, d: CMatrix) -> Result<Self> {
        let expect = [
            ("A", &a, (r, n * r)),
            ("B", &b, (r, dim)),
            ("C", &c, (dim, n * r)),
            ("D", &d, (dim, dim)),
        ];
        for (name, m, shape) in expect {
            if m.shape() != shape {
                return Err(Error::ShapeMismatch(format!(
                    "{name} is {:?}, expected {:?}",
                    m.shape(),
                    shape
                )));
            }
            if !matcore::is_finite(m) {
                return Err(Error::Validation(format!("{name} has non-finite entries")));
            }
        }
        Ok(Colligation { n, dim, r, a, b, c, d })
    }

    /// The full block operator `[A B; C D]`.
    pub fn block(&self) -> CMatrix {
        matcore::vstack(&[
            matcore::hstack(&[self.a.clone(), self.b.clone()]),
            matcore::hstack(&[self.c.clone(), self.d.clone()]),
        ])
    }

    pub fn norm(&self) -> f64 {
        matcore::op_norm(&self.block())
    }

    fn a_block(&self, t: usize) -> CMatrix {
        self.a.columns(t * self.r, self.r).into_owned()
    }

    fn c_block(&self, t: usize) -> CMatrix {
        self.c.columns(t * self.r, self.r).into_owned()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SolveDiagnostics {
    pub pick_min_eig: f64,
    /// `||X*X - Y*Y||_max` of the lurking-isometry data.
    pub iso_defect: f64,
    /// `max_j ||F(lambda_j) - W_j||_max`.
    pub interp_residual: f64,
    pub colligation_norm: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct SolveOptions {
    pub tol: Tolerances,
    /// Accept numerically boundary data: the isometry check is widened by
    /// `tol_psd` and the node residual check by the same amount.
    pub ridge: bool,
}

/// 1x1 matrices `[z_1], ..., [z_n]` for scalar-point evaluation.
pub fn scalar_tuple(z: &[Complex64]) -> Vec<CMatrix> {
    z.iter().map(|&v| CMatrix::from_element(1, 1, v)).collect()
}

pub fn solve(p: &PickProblem, tol: &Tolerances) -> Result<(Colligation, SolveDiagnostics)> {
    solve_with(
        p,
        &SolveOptions {
            tol: *tol,
            ..SolveOptions::default()
        },
    )
}

pub fn solve_with(p: &PickProblem, opts: &SolveOptions) -> Result<(Colligation, SolveDiagnostics)> {
    let tol = &opts.tol;
    tol.validate()?;
    let report = pick::feasibility_with(p, tol);
    if !report.feasible {
        return Err(Error::Infeasible {
            min_eig: report.min_eig,
        });
    }
    let (n, d, count) = (p.n(), p.d(), p.len());
    let schur = pick::to_schur_data(p)?;

    // (1) absorb eigenvalue noise just below zero
    let mut ps = schur.pick;
    let schur_min = matcore::herm_min_eig(&ps)?;
    if schur_min < -tol.tol_psd {
        return Err(Error::Infeasible {
            min_eig: report.min_eig,
        });
    }
    if schur_min < 0.0 {
        ps += matcore::identity(ps.nrows()).scale(-schur_min);
    }

    // (2) P^S = G* G with column blocks G_j
    let g = matcore::gram_factor(&ps, tol)?;
    let r = g.nrows();
    let g_block = |j: usize| g.columns(j * d, d).into_owned();

    // (3) lurking-isometry data
    let mut x = CMatrix::zeros(n * r + d, count * d);
    let mut y = CMatrix::zeros(r + d, count * d);
    for j in 0..count {
        let gj = g_block(j);
        for (t, lam) in p.nodes()[j].iter().enumerate() {
            x.view_mut((t * r, j * d), (r, d))
                .copy_from(&gj.map(|z| z * lam.conj()));
        }
        x.view_mut((n * r, j * d), (d, d)).copy_from(&matcore::identity(d));
        y.view_mut((0, j * d), (r, d)).copy_from(&gj);
        y.view_mut((r, j * d), (d, d)).copy_from(&schur.w[j].adjoint());
    }
    let iso_defect = matcore::max_abs_diff(&(x.adjoint() * &x), &(y.adjoint() * &y));
    let scale = matcore::max_abs(&ps).max(1.0);
    let mut allowed = 10.0 * tol.tol_eq * scale;
    if opts.ridge {
        allowed += 10.0 * (tol.tol_psd + tol.rank_tol) * scale;
    }
    if iso_defect > allowed {
        return Err(Error::IsometryDefect { defect: iso_defect });
    }

    // (4) extension by zero off the range of X
    let mut u = &y * matcore::pinv(&x, tol.rank_tol);
    let u_norm = matcore::op_norm(&u);
    if u_norm > 1.0 + tol.tol_iso {
        return Err(Error::IsometryDefect { defect: u_norm - 1.0 });
    }
    if u_norm > 1.0 {
        u.unscale_mut(u_norm);
    }

    // (5) partition
    let colligation = Colligation::new(
        n,
        d,
        r,
        u.view((0, 0), (r, n * r)).into_owned(),
        u.view((0, n * r), (r, d)).into_owned(),
        u.view((r, 0), (d, n * r)).into_owned(),
        u.view((r, n * r), (d, d)).into_owned(),
    )?;

    // (6) node checks
    let mut schur_residual = 0.0f64;
    let mut interp_residual = 0.0f64;
    for (j, lam) in p.nodes().iter().enumerate() {
        let point = scalar_tuple(lam);
        let phi = transfer_eval(&colligation, &point)?;
        schur_residual = schur_residual.max(matcore::max_abs_diff(&phi, &schur.w[j]));
        let f = herglotz_from_transfer(&phi)?;
        interp_residual = interp_residual.max(matcore::max_abs_diff(&f, &p.values()[j]));
    }
    let residual_allowed = RESIDUAL_TOL + if opts.ridge { tol.tol_psd } else { 0.0 };
    if schur_residual > residual_allowed {
        return Err(Error::ResidualTooLarge {
            residual: schur_residual,
        });
    }
    let diagnostics = SolveDiagnostics {
        pick_min_eig: report.min_eig,
        iso_defect,
        interp_residual,
        colligation_norm: colligation.norm(),
    };
    Ok((colligation, diagnostics))
}

fn check_tuple(c: &Colligation, xs: &[CMatrix]) -> Result<usize> {
    if xs.len() != c.n {
        return Err(Error::ShapeMismatch(format!(
            "colligation has n = {}, tuple has {} entries",
            c.n,
            xs.len()
        )));
    }
    let p = xs[0].nrows();
    if xs.iter().any(|x| x.shape() != (p, p)) {
        return Err(Error::ShapeMismatch("tuple entries must share a square shape".into()));
    }
    let norm = matcore::row_norm(xs);
    if norm.is_nan() || norm >= 1.0 {
        return Err(Error::NotRowContraction { norm });
    }
    Ok(p)
}

/// The Schur-class transfer function `phi(X)`, a `(dim p) x (dim p)` matrix
/// with the coefficient factor first.
pub fn transfer_eval(c: &Colligation, xs: &[CMatrix]) -> Result<CMatrix> {
    let p = check_tuple(c, xs)?;
    let id_p = matcore::identity(p);
    let mut out = matcore::kron(&c.d.adjoint(), &id_p);
    if c.r == 0 {
        return Ok(out);
    }
    let mut za = CMatrix::zeros(c.r * p, c.r * p);
    let mut zc = CMatrix::zeros(c.r * p, c.dim * p);
    for (t, x) in xs.iter().enumerate() {
        za += matcore::kron(&c.a_block(t).adjoint(), x);
        zc += matcore::kron(&c.c_block(t).adjoint(), x);
    }
    let resolvent = matcore::identity(c.r * p) - za;
    let inv = matcore::checked_inverse(&resolvent, "state resolvent").map_err(|_| Error::SingularResolvent)?;
    out += matcore::kron(&c.b.adjoint(), &id_p) * inv * zc;
    Ok(out)
}

fn herglotz_from_transfer(phi: &CMatrix) -> Result<CMatrix> {
    let id = matcore::identity(phi.nrows());
    let inv = matcore::checked_inverse(&(&id - phi), "I - phi(X) is numerically singular")?;
    Ok(inv * (&id + phi))
}

/// `F(X) = (I - phi(X))^{-1}(I + phi(X))`.
pub fn herglotz_eval(c: &Colligation, xs: &[CMatrix]) -> Result<CMatrix> {
    herglotz_from_transfer(&transfer_eval(c, xs)?)
}

/// Taylor coefficients of `phi` up to degree `M`: `c_0 = D*` and
/// `c_{i_1 ... i_k} = B* A_{i_1}* ... A_{i_{k-1}}* C_{i_k}*`, where `A_t`,
/// `C_t` are the `t`-th column blocks.
pub fn free_coefficients(c: &Colligation, degree: usize) -> FreeSeries {
    let n = c.n;
    let mut series = FreeSeries::constant(n, degree, c.d.adjoint());
    if degree == 0 || c.r == 0 {
        return series;
    }
    let a_adj: Vec<CMatrix> = (0..n).map(|t| c.a_block(t).adjoint()).collect();
    let c_adj: Vec<CMatrix> = (0..n).map(|t| c.c_block(t).adjoint()).collect();
    // prefix[index(u)] = B* A_{u_1}* ... A_{u_j}*
    let prefixes = words::fock_dim(n, degree - 1);
    let mut prefix: Vec<CMatrix> = Vec::with_capacity(prefixes);
    prefix.push(c.b.adjoint());
    for idx in 0..prefixes {
        let u = Word::from_index(n, idx);
        if idx > 0 {
            let letters: Vec<usize> = u.letters().collect();
            let (last, head) = letters.split_last().expect("nonempty");
            let parent = Word::from_letters(head).index(n);
            let next = &prefix[parent] * &a_adj[last - 1];
            prefix.push(next);
        }
        for i in 1..=n {
            let coeff = &prefix[idx] * &c_adj[i - 1];
            series
                .set(u.concat(&Word::letter(i)), coeff)
                .expect("word within degree");
        }
    }
    series
}

/// The interpolant's own series `(1 - phi)^{-1}(1 + phi)` up to degree `M`.
pub fn herglotz_series(c: &Colligation, degree: usize) -> Result<FreeSeries> {
    free_coefficients(c, degree).cayley_inv()
}

/// Re-checks a colligation against its problem: contractivity, node
/// residuals, and positivity of the kernel
/// `[(F(z_a) + F(z_b)*) / (1 - <z_a, z_b>)]` over `samples` seeded random
/// points. Sample `a` draws from stream `(seed, a)`.
///
/// `iso_defect` is reported as zero; it belongs to the solve step.
pub fn verify(c: &Colligation, p: &PickProblem, samples: usize, seed: u64) -> Result<SolveDiagnostics> {
    let tol = Tolerances::default();
    let fail = |msg: String| Error::VerificationFailed(msg);
    if (c.n, c.dim) != (p.n(), p.d()) {
        return Err(fail(format!(
            "realization has (n, dim) = ({}, {}), problem has ({}, {})",
            c.n,
            c.dim,
            p.n(),
            p.d()
        )));
    }
    let colligation_norm = c.norm();
    if colligation_norm > 1.0 + tol.tol_iso {
        return Err(fail(format!("colligation norm {colligation_norm} exceeds 1")));
    }
    let mut interp_residual = 0.0f64;
    for (j, (lam, w)) in p.nodes().iter().zip(p.values()).enumerate() {
        let f = herglotz_eval(c, &scalar_tuple(lam)).map_err(|e| fail(format!("node {j}: {e}")))?;
        interp_residual = interp_residual.max(matcore::max_abs_diff(&f, w));
    }
    if interp_residual > RESIDUAL_TOL {
        return Err(fail(format!("interpolation residual {interp_residual:e} at the nodes")));
    }

    let points: Vec<Vec<Complex64>> = par::map_range(samples, |a| {
        sample::ball_point(&mut sample::stream(seed, a as u64), c.n, VERIFY_RADIUS)
    });
    let values = par::map_slice(&points, |z| herglotz_eval(c, &scalar_tuple(z)))
        .into_iter()
        .collect::<Result<Vec<_>>>()
        .map_err(|e| fail(format!("sample evaluation: {e}")))?;
    let d = c.dim;
    let mut kernel = CMatrix::zeros(samples * d, samples * d);
    for a in 0..samples {
        for b in 0..samples {
            let denom = matcore::ONE - inner(&points[a], &points[b]);
            let block = (&values[a] + values[b].adjoint()).map(|z| z / denom);
            kernel.view_mut((a * d, b * d), (d, d)).copy_from(&block);
        }
    }
    let kernel_min = matcore::herm_min_eig(&kernel)?;
    if kernel_min < -tol.tol_psd {
        return Err(fail(format!("sampled kernel minimum eigenvalue {kernel_min:e}")));
    }
    Ok(SolveDiagnostics {
        pick_min_eig: pick::feasibility(p).min_eig,
        iso_defect: 0.0,
        interp_residual,
        colligation_norm,
    })
}
