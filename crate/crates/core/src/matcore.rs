//! Dense complex matrix substrate.
//!
//! Everything here is a pure function on [`CMatrix`] values: Hermitian
//! spectra, operator norms, the clamped Gram factorization used by the
//! interpolation solver, and the operator Cayley transform
//! `T = (A - I)(A + I)^{-1}` together with its inverse
//! `A = (I + T)(I - T)^{-1}`.
//!
//! Invertibility is judged by a condition-number threshold of `1 / tol_eq`
//! rather than by exact singularity.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type CMatrix = DMatrix<Complex64>;
pub type CVector = DVector<Complex64>;

pub const ZERO: Complex64 = Complex64::new(0.0, 0.0);
pub const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Numerical slack used throughout the crate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    /// Eigenvalue slack for positive semidefiniteness.
    pub tol_psd: f64,
    /// Entrywise equality slack.
    pub tol_eq: f64,
    /// Relative singular-value / eigenvalue cutoff for rank decisions.
    pub rank_tol: f64,
    /// Slack on contraction norms.
    pub tol_iso: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            tol_psd: 1e-8,
            tol_eq: 1e-10,
            rank_tol: 1e-10,
            tol_iso: 1e-8,
        }
    }
}

impl Tolerances {
    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("tol_psd", self.tol_psd),
            ("tol_eq", self.tol_eq),
            ("rank_tol", self.rank_tol),
            ("tol_iso", self.tol_iso),
        ] {
            if !(v > 0.0 && v < 1.0) {
                return Err(Error::Validation(format!("{name} = {v} must lie in (0, 1)")));
            }
        }
        Ok(())
    }
}

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

pub fn identity(n: usize) -> CMatrix {
    CMatrix::identity(n, n)
}

/// Largest entry modulus, `0` for empty matrices.
pub fn max_abs(m: &CMatrix) -> f64 {
    m.iter().fold(0.0, |acc, z| acc.max(z.norm()))
}

pub fn max_abs_diff(a: &CMatrix, b: &CMatrix) -> f64 {
    assert_eq!(a.shape(), b.shape(), "shape mismatch in max_abs_diff");
    a.iter().zip(b.iter()).fold(0.0, |acc, (x, y)| acc.max((x - y).norm()))
}

pub fn is_finite(m: &CMatrix) -> bool {
    m.iter().all(|z| z.re.is_finite() && z.im.is_finite())
}

/// `(M + M*) / 2`.
pub fn real_part(m: &CMatrix) -> CMatrix {
    (m + m.adjoint()).scale(0.5)
}

/// Kronecker product with `a` as the outer factor.
pub fn kron(a: &CMatrix, b: &CMatrix) -> CMatrix {
    a.kronecker(b)
}

/// Horizontal concatenation `[X_1 X_2 ... X_n]`.
pub fn hstack(blocks: &[CMatrix]) -> CMatrix {
    let rows = blocks.first().map_or(0, |b| b.nrows());
    let cols: usize = blocks.iter().map(|b| b.ncols()).sum();
    let mut out = CMatrix::zeros(rows, cols);
    let mut at = 0;
    for b in blocks {
        assert_eq!(b.nrows(), rows, "hstack row mismatch");
        out.view_mut((0, at), b.shape()).copy_from(b);
        at += b.ncols();
    }
    out
}

/// Vertical concatenation.
pub fn vstack(blocks: &[CMatrix]) -> CMatrix {
    let cols = blocks.first().map_or(0, |b| b.ncols());
    let rows: usize = blocks.iter().map(|b| b.nrows()).sum();
    let mut out = CMatrix::zeros(rows, cols);
    let mut at = 0;
    for b in blocks {
        assert_eq!(b.ncols(), cols, "vstack column mismatch");
        out.view_mut((at, 0), b.shape()).copy_from(b);
        at += b.nrows();
    }
    out
}

fn require_square(m: &CMatrix) -> Result<()> {
    if m.nrows() != m.ncols() {
        return Err(Error::NonSquare {
            rows: m.nrows(),
            cols: m.ncols(),
        });
    }
    Ok(())
}

/// Symmetrizes a nearly Hermitian matrix, rejecting asymmetry larger than
/// `tol_eq` relative to the entry scale.
fn symmetrized(m: &CMatrix) -> Result<CMatrix> {
    require_square(m)?;
    let adj = m.adjoint();
    let asym = max_abs_diff(m, &adj);
    let scale = max_abs(m).max(1.0);
    if asym > Tolerances::default().tol_eq * scale {
        return Err(Error::NotHermitian { asymmetry: asym });
    }
    Ok((m + adj).scale(0.5))
}

/// Eigen-decomposition of the symmetrized matrix with eigenvalues sorted in
/// ascending order; eigenvectors are the matching columns.
pub fn herm_eigh(m: &CMatrix) -> Result<(Vec<f64>, CMatrix)> {
    let h = symmetrized(m)?;
    let n = h.nrows();
    if n == 0 {
        return Ok((Vec::new(), CMatrix::zeros(0, 0)));
    }
    let eig = h.symmetric_eigen();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| eig.eigenvalues[i].total_cmp(&eig.eigenvalues[j]));
    let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let mut vectors = CMatrix::zeros(n, n);
    for (dst, &src) in order.iter().enumerate() {
        vectors.set_column(dst, &eig.eigenvectors.column(src));
    }
    Ok((values, vectors))
}

/// Hermitian eigenvalues in ascending order.
pub fn herm_eigenvalues(m: &CMatrix) -> Result<Vec<f64>> {
    let h = symmetrized(m)?;
    if h.nrows() == 0 {
        return Ok(Vec::new());
    }
    let mut v: Vec<f64> = h.symmetric_eigenvalues().iter().copied().collect();
    v.sort_by(f64::total_cmp);
    Ok(v)
}

/// Smallest eigenvalue of `(M + M*) / 2`. Empty matrices report `+inf`.
pub fn herm_min_eig(m: &CMatrix) -> Result<f64> {
    Ok(herm_eigenvalues(m)?.first().copied().unwrap_or(f64::INFINITY))
}

/// Singular values in descending order.
pub fn singular_values(m: &CMatrix) -> Vec<f64> {
    if m.is_empty() {
        return Vec::new();
    }
    let mut s: Vec<f64> = m.clone().svd(false, false).singular_values.iter().copied().collect();
    s.sort_by(|a, b| b.total_cmp(a));
    s
}

/// Largest singular value.
pub fn op_norm(m: &CMatrix) -> f64 {
    singular_values(m).first().copied().unwrap_or(0.0)
}

/// Operator norm of the row `[X_1 ... X_n]`, i.e. `||sum X_i X_i*||^{1/2}`.
pub fn row_norm(xs: &[CMatrix]) -> f64 {
    if xs.is_empty() {
        return 0.0;
    }
    op_norm(&hstack(xs))
}

/// Inverse of a square matrix whose condition number stays below
/// `1 / tol_eq`; otherwise `SingularShift` tagged with `context`.
pub fn checked_inverse(m: &CMatrix, context: &str) -> Result<CMatrix> {
    require_square(m)?;
    let singular = || Error::SingularShift {
        context: context.to_string(),
    };
    if m.nrows() == 0 {
        return Ok(m.clone());
    }
    let s = singular_values(m);
    let (smax, smin) = (s[0], s[s.len() - 1]);
    if smax.is_nan() || smax <= 0.0 || smin <= smax * Tolerances::default().tol_eq {
        return Err(singular());
    }
    m.clone().lu().try_inverse().ok_or_else(singular)
}

/// Moore-Penrose pseudoinverse dropping singular values below
/// `rank_tol * sigma_max`.
pub fn pinv(m: &CMatrix, rank_tol: f64) -> CMatrix {
    let (rows, cols) = m.shape();
    if m.is_empty() {
        return CMatrix::zeros(cols, rows);
    }
    let svd = m.clone().svd(true, true);
    let u = svd.u.expect("u requested");
    let v_t = svd.v_t.expect("v_t requested");
    let smax = svd.singular_values.iter().fold(0.0f64, |a, &b| a.max(b));
    let mut out = CMatrix::zeros(cols, rows);
    if smax == 0.0 {
        return out;
    }
    for (k, &s) in svd.singular_values.iter().enumerate() {
        if s > rank_tol * smax {
            let vk = v_t.row(k).adjoint();
            let uk = u.column(k).adjoint();
            out += (vk * uk).scale(1.0 / s);
        }
    }
    out
}

/// Returns `G` (r x N) with `G* G` equal to `P` after clamping its negative
/// eigenvalues to zero, where `r` counts eigenvalues above
/// `rank_tol * lambda_max`.
///
/// The factor is put in a canonical form: upper trapezoidal with a real,
/// nonnegative diagonal (the `R` of a QR factorization). For `P = I` this is
/// exactly `I`.
pub fn gram_factor(p: &CMatrix, tol: &Tolerances) -> Result<CMatrix> {
    let (values, vectors) = herm_eigh(p)?;
    let n = values.len();
    let min_eig = values.first().copied().unwrap_or(0.0);
    if min_eig < -tol.tol_psd {
        return Err(Error::NotPsd { min_eig });
    }
    let lmax = values.last().copied().unwrap_or(0.0).max(0.0);
    let keep: Vec<usize> = (0..n)
        .rev()
        .filter(|&i| lmax > 0.0 && values[i] > tol.rank_tol * lmax)
        .collect();
    let r = keep.len();
    let mut g = CMatrix::zeros(r, n);
    for (row, &i) in keep.iter().enumerate() {
        let scale = values[i].sqrt();
        let v = vectors.column(i);
        for col in 0..n {
            g[(row, col)] = v[col].conj() * scale;
        }
    }
    if r == 0 {
        return Ok(g);
    }
    let mut rmat = g.qr().r();
    for row in 0..rmat.nrows() {
        let pivot = (row..n).map(|col| rmat[(row, col)]).find(|z| z.norm() > 0.0);
        if let Some(z) = pivot {
            let phase = z.conj() / z.norm();
            for col in 0..n {
                rmat[(row, col)] *= phase;
            }
        }
    }
    Ok(rmat)
}

/// Operator Cayley transform `T = (A - I)(A + I)^{-1}`.
pub fn cayley_op(a: &CMatrix) -> Result<CMatrix> {
    require_square(a)?;
    let id = identity(a.nrows());
    let inv = checked_inverse(&(a + &id), "A + I is numerically singular")?;
    let t = (a - &id) * inv;
    debug_assert!(
        herm_min_eig(&(a + a.adjoint())).map_or(true, |e| e < 0.0)
            || op_norm(&t) <= 1.0 + Tolerances::default().tol_iso,
        "Cayley transform of an accretive matrix must be a contraction"
    );
    Ok(t)
}

/// Inverse Cayley transform `A = (I + T)(I - T)^{-1}`.
pub fn cayley_op_inv(t: &CMatrix) -> Result<CMatrix> {
    require_square(t)?;
    let id = identity(t.nrows());
    let inv = checked_inverse(&(&id - t), "I - T is numerically singular")?;
    Ok((&id + t) * inv)
}
