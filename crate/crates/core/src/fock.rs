//! Truncated Fock-space models.
//!
//! The degree-`<= m` truncation of the full Fock space over `C^n` has the
//! orthonormal basis `{e_alpha : |alpha| <= m}`, ordered graded-lex as in
//! [`crate::words`]. On it the left and right creation operators are
//! compressed to `S_i^(m)` and `R_i^(m)`; both are nilpotent of order
//! `m + 1`.
//!
//! Tensor products put the coefficient space first: a series with `d x d`
//! coefficients evaluated at the model is a `(d D) x (d D)` matrix indexed
//! by `(coefficient row) * D + (basis word)`.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::matcore::{self, CMatrix, CVector, Tolerances};
use crate::par;
use crate::series::FreeSeries;
use crate::words::{self, Word};

/// Largest `d * D` the model constructors accept without `force`.
pub const DIM_GUARDRAIL: usize = 20_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Left,
    Right,
}

/// Refuses model sizes beyond [`DIM_GUARDRAIL`] unless `force` is set.
pub fn check_dimension(n: usize, m: usize, d: usize, force: bool) -> Result<usize> {
    let dim = words::fock_dim(n, m) * d;
    if dim > DIM_GUARDRAIL && !force {
        return Err(Error::FockTooLarge {
            dim,
            limit: DIM_GUARDRAIL,
        });
    }
    Ok(dim)
}

/// `S_i^(m)` (left: `e_alpha -> e_{g_i alpha}`) or `R_i^(m)`
/// (right: `e_alpha -> e_{alpha g_i}`), images of length `> m` sent to zero.
pub fn creation(n: usize, m: usize, i: usize, side: Side) -> CMatrix {
    assert!((1..=n).contains(&i), "generator {i} outside 1..={n}");
    let dim = words::fock_dim(n, m);
    let mut out = CMatrix::zeros(dim, dim);
    let letter = Word::letter(i);
    let sources = if m == 0 { 0 } else { words::fock_dim(n, m - 1) };
    for col in 0..sources {
        let w = Word::from_index(n, col);
        let image = match side {
            Side::Left => letter.concat(&w),
            Side::Right => w.concat(&letter),
        };
        out[(image.index(n), col)] = matcore::ONE;
    }
    out
}

/// The tuple `(S_1^(m), ..., S_n^(m))` or its right-handed counterpart.
#[derive(Debug, Clone)]
pub struct ModelTuple {
    pub n: usize,
    pub m: usize,
    pub side: Side,
    pub mats: Vec<CMatrix>,
}

impl ModelTuple {
    pub fn new(n: usize, m: usize, side: Side) -> Self {
        let mats = (1..=n).map(|i| creation(n, m, i, side)).collect();
        ModelTuple { n, m, side, mats }
    }

    pub fn dim(&self) -> usize {
        words::fock_dim(self.n, self.m)
    }

    /// `S_alpha^(m) = S_{i_1} ... S_{i_k}`.
    pub fn word_operator(&self, w: &Word) -> CMatrix {
        w.letters()
            .fold(matcore::identity(self.dim()), |acc, l| acc * &self.mats[l - 1])
    }

    pub fn row_norm(&self) -> f64 {
        matcore::row_norm(&self.mats)
    }
}

/// `f(S^(m)) = sum_{|alpha| <= min(M, m)} A_alpha (x) S_alpha^(m)`.
pub fn eval_at_model(f: &FreeSeries, m: usize) -> Result<CMatrix> {
    eval_at_model_forced(f, m, false)
}

/// [`eval_at_model`] with the dimension guardrail optionally lifted.
pub fn eval_at_model_forced(f: &FreeSeries, m: usize, force: bool) -> Result<CMatrix> {
    let (n, d) = (f.n(), f.d());
    check_dimension(n, m, d, force)?;
    let dim = words::fock_dim(n, m);
    let mut out = CMatrix::zeros(d * dim, d * dim);
    for (alpha, a) in f.terms().filter(|(w, _)| w.len() <= m) {
        // S_alpha e_beta = e_{alpha beta} whenever |alpha beta| <= m
        let room = m - alpha.len();
        for col in 0..words::fock_dim(n, room) {
            let row = alpha.concat(&Word::from_index(n, col)).index(n);
            for r in 0..d {
                for c in 0..d {
                    out[(r * dim + row, c * dim + col)] += a[(r, c)];
                }
            }
        }
    }
    Ok(out)
}

/// Minimum eigenvalue of `Re f(S^(m))` for `m = 0..=levels`.
///
/// A nonnegative battery (within the caller's tolerance) is necessary for
/// `Re f >= 0`; sufficiency needs every level.
pub fn certify_positive(f: &FreeSeries, levels: usize) -> Result<Vec<f64>> {
    certify_positive_forced(f, levels, false)
}

pub fn certify_positive_forced(f: &FreeSeries, levels: usize, force: bool) -> Result<Vec<f64>> {
    check_dimension(f.n(), levels, f.d(), force)?;
    par::map_range(levels + 1, |m| {
        let y = eval_at_model_forced(f, m, force)?;
        matcore::herm_min_eig(&matcore::real_part(&y))
    })
    .into_iter()
    .collect()
}

/// Truncated coherent vector with components `conj(lambda_alpha)`.
#[derive(Debug, Clone)]
pub struct CoherentVector {
    pub lambda: Vec<Complex64>,
    pub m: usize,
    pub vec: CVector,
}

/// Squared Euclidean norm `<z, z>`.
pub fn norm_sqr(z: &[Complex64]) -> f64 {
    z.iter().map(|c| c.norm_sqr()).sum()
}

/// `<z, w> = sum_t z_t conj(w_t)`.
pub fn inner(z: &[Complex64], w: &[Complex64]) -> Complex64 {
    z.iter().zip(w).map(|(a, b)| a * b.conj()).sum()
}

pub fn check_in_ball(z: &[Complex64]) -> Result<()> {
    let norm = norm_sqr(z).sqrt();
    if norm.is_nan() || norm >= 1.0 {
        return Err(Error::OutsideBall { norm });
    }
    Ok(())
}

pub fn coherent(lambda: &[Complex64], m: usize) -> Result<CoherentVector> {
    check_in_ball(lambda)?;
    let n = lambda.len();
    let dim = words::fock_dim(n, m);
    let mut vec = CVector::zeros(dim);
    vec[0] = matcore::ONE;
    for idx in 1..dim {
        let w = Word::from_index(n, idx);
        vec[idx] = w.letters().fold(matcore::ONE, |acc, l| acc * lambda[l - 1].conj());
    }
    Ok(CoherentVector {
        lambda: lambda.to_vec(),
        m,
        vec,
    })
}

/// `C^(m)(Y) = (Y - I)(I + Y)^{-1}` on the `d`-fold amplified model space.
pub fn truncated_cayley(y: &CMatrix, n: usize, m: usize, d: usize) -> Result<CMatrix> {
    let dim = d * words::fock_dim(n, m);
    if y.shape() != (dim, dim) {
        return Err(Error::ShapeMismatch(format!(
            "expected {dim}x{dim}, got {:?}",
            y.shape()
        )));
    }
    let min_eig = matcore::herm_min_eig(&(y + y.adjoint()))?;
    if min_eig < -Tolerances::default().tol_psd {
        return Err(Error::NotPsd { min_eig });
    }
    matcore::cayley_op(y)
}

/// Inverse of [`truncated_cayley`]: `(I + X)(I - X)^{-1}`.
pub fn truncated_cayley_inv(x: &CMatrix) -> Result<CMatrix> {
    matcore::cayley_op_inv(x)
}

/// `(I + A)(I - A)^{-1}` with `A = sum_i R_i^(m)* (x) X_i`, the model
/// factor placed first.
pub fn herglotz_kernel_nc(xs: &[CMatrix], m: usize) -> Result<CMatrix> {
    let norm = matcore::row_norm(xs);
    if norm.is_nan() || norm >= 1.0 {
        return Err(Error::NotRowContraction { norm });
    }
    let n = xs.len();
    let model = ModelTuple::new(n, m, Side::Right);
    let p = xs[0].nrows();
    let dim = model.dim() * p;
    let mut a = CMatrix::zeros(dim, dim);
    for (r, x) in model.mats.iter().zip(xs) {
        a += matcore::kron(&r.adjoint(), x);
    }
    let id = matcore::identity(dim);
    let out = (&id + &a) * matcore::checked_inverse(&(&id - &a), "I - R_X")?;
    debug_assert!(
        matcore::herm_min_eig(&matcore::real_part(&out)).unwrap_or(0.0)
            >= -Tolerances::default().tol_psd * (1.0 + matcore::max_abs(&out))
    );
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matcore::c;

    fn scalar_series(n: usize, degree: usize, terms: &[(&str, f64)]) -> FreeSeries {
        FreeSeries::from_terms(
            n,
            1,
            degree,
            terms
                .iter()
                .map(|&(w, v)| (w.parse().unwrap(), CMatrix::from_element(1, 1, c(v, 0.0)))),
        )
        .unwrap()
    }

    #[test]
    fn creation_examples() {
        let s1 = creation(2, 1, 1, Side::Left);
        let mut expect = CMatrix::zeros(3, 3);
        expect[(1, 0)] = matcore::ONE;
        assert_eq!(s1, expect);

        let s = creation(1, 2, 1, Side::Left);
        let mut shift = CMatrix::zeros(3, 3);
        shift[(1, 0)] = matcore::ONE;
        shift[(2, 1)] = matcore::ONE;
        assert_eq!(s, shift);
        assert_eq!(creation(1, 3, 1, Side::Left), creation(1, 3, 1, Side::Right));
        assert_eq!(creation(2, 0, 2, Side::Left), CMatrix::zeros(1, 1));
    }

    #[test]
    fn left_and_right_differ_for_two_generators() {
        let n = 2;
        let l = creation(n, 2, 1, Side::Left);
        let r = creation(n, 2, 1, Side::Right);
        let g2: Word = "2".parse().unwrap();
        let col = g2.index(n);
        let left_image: Word = "12".parse().unwrap();
        let right_image: Word = "21".parse().unwrap();
        assert_eq!(l[(left_image.index(n), col)], matcore::ONE);
        assert_eq!(r[(right_image.index(n), col)], matcore::ONE);
    }

    #[test]
    fn shift_norm_is_one() {
        for m in 1..4 {
            assert!((matcore::op_norm(&creation(2, m, 1, Side::Left)) - 1.0).abs() < 1e-14);
        }
        assert!(ModelTuple::new(2, 3, Side::Left).row_norm() <= 1.0 + 1e-14);
    }

    #[test]
    fn eval_examples() {
        let f = scalar_series(1, 3, &[("", 1.0), ("1", 1.0)]);
        let y = eval_at_model(&f, 1).unwrap();
        let expect = CMatrix::from_row_slice(2, 2, &[c(1.0, 0.0), c(0.0, 0.0), c(1.0, 0.0), c(1.0, 0.0)]);
        assert_eq!(y, expect);
        let unit = FreeSeries::unit(2, 2, 3);
        assert_eq!(eval_at_model(&unit, 2).unwrap(), matcore::identity(2 * 7));
    }

    #[test]
    fn eval_matches_word_operator_sum() {
        let f = scalar_series(2, 3, &[("", 0.5), ("1", 1.0), ("21", -2.0), ("122", 3.0)]);
        let model = ModelTuple::new(2, 2, Side::Left);
        let mut expect = CMatrix::zeros(7, 7);
        for (w, a) in f.terms() {
            expect += model.word_operator(w) * a[(0, 0)];
        }
        assert!(matcore::max_abs_diff(&eval_at_model(&f, 2).unwrap(), &expect) < 1e-15);
    }

    #[test]
    fn certify_examples() {
        let f = scalar_series(1, 3, &[("", 1.0), ("1", 1.0)]);
        let levels = certify_positive(&f, 1).unwrap();
        assert!((levels[1] - 0.5).abs() < 1e-14);

        let g = scalar_series(1, 3, &[("", 1.0), ("1", 2.0)]);
        let levels = certify_positive(&g, 2).unwrap();
        assert!((levels[2] - (1.0 - 2f64.sqrt())).abs() < 1e-13);
        assert!(levels[2] < 0.0);

        let unit = FreeSeries::unit(2, 1, 2);
        assert!(certify_positive(&unit, 3)
            .unwrap()
            .iter()
            .all(|&e| (e - 1.0).abs() < 1e-14));
    }

    #[test]
    fn guardrail() {
        let f = FreeSeries::unit(3, 2, 2);
        assert!(matches!(eval_at_model(&f, 9), Err(Error::FockTooLarge { .. })));
        assert!(check_dimension(3, 9, 2, true).is_ok());
    }

    #[test]
    fn coherent_examples() {
        let z = coherent(&[c(0.5, 0.0)], 2).unwrap();
        let expect = [1.0, 0.5, 0.25];
        for (got, want) in z.vec.iter().zip(expect) {
            assert!((got - c(want, 0.0)).norm() < 1e-15);
        }
        assert!((z.vec.norm_squared() - 21.0 / 16.0).abs() < 1e-15);
        let far = coherent(&[c(0.5, 0.0)], 40).unwrap();
        assert!((far.vec.norm_squared() - 4.0 / 3.0).abs() < 1e-12);

        let origin = coherent(&[c(0.0, 0.0), c(0.0, 0.0)], 2).unwrap();
        assert_eq!(origin.vec[0], matcore::ONE);
        assert!(origin.vec.iter().skip(1).all(|z| z.norm() == 0.0));

        assert!(matches!(
            coherent(&[c(0.6, 0.0), c(0.8, 0.0)], 1),
            Err(Error::OutsideBall { .. })
        ));
    }

    #[test]
    fn coherent_eigen_relation_and_gram() {
        let n = 2;
        let m = 3;
        let lambda = [c(0.3, -0.2), c(-0.1, 0.4)];
        let mu = [c(-0.25, 0.1), c(0.2, 0.35)];
        let z = coherent(&lambda, m).unwrap();
        let z_prev = coherent(&lambda, m - 1).unwrap();
        let model = ModelTuple::new(n, m, Side::Left);
        let low = words::fock_dim(n, m - 1);
        for (i, s) in model.mats.iter().enumerate() {
            let lhs = s.adjoint() * &z.vec;
            for k in 0..z.vec.len() {
                let want = if k < low {
                    lambda[i].conj() * z_prev.vec[k]
                } else {
                    matcore::ZERO
                };
                assert!((lhs[k] - want).norm() < 1e-15);
            }
        }
        let w = coherent(&mu, m).unwrap();
        let gram = w.vec.dotc(&z.vec); // sum conj(w) z = <z, w>
        let t = inner(&mu, &lambda);
        let expect: Complex64 = (0..=m).map(|k| t.powu(k as u32)).sum();
        assert!((gram - expect).norm() < 1e-14);
    }

    #[test]
    fn truncated_cayley_examples() {
        let id = matcore::identity(3);
        assert!(matcore::max_abs(&truncated_cayley(&id, 2, 1, 1).unwrap()) < 1e-15);
        assert!(truncated_cayley(&(-&id), 2, 1, 1).is_err());
        let f = scalar_series(2, 3, &[("", 1.0), ("1", 0.3), ("2", -0.2)]);
        for m in 0..=3 {
            let y = eval_at_model(&f, m).unwrap();
            let lhs = truncated_cayley(&y, 2, m, 1).unwrap();
            let rhs = eval_at_model(&f.cayley_fwd().unwrap(), m).unwrap();
            assert!(matcore::max_abs_diff(&lhs, &rhs) < 1e-12);
            let back = truncated_cayley_inv(&lhs).unwrap();
            assert!(matcore::max_abs_diff(&back, &y) < 1e-12);
        }
    }

    #[test]
    fn herglotz_kernel_examples() {
        let zero = vec![CMatrix::zeros(2, 2); 2];
        let k = herglotz_kernel_nc(&zero, 2).unwrap();
        assert!(matcore::max_abs_diff(&k, &matcore::identity(14)) < 1e-15);

        let half = vec![CMatrix::from_element(1, 1, c(0.5, 0.0))];
        for m in 0..5 {
            let k = herglotz_kernel_nc(&half, m).unwrap();
            assert!((k[(0, 0)] - matcore::ONE).norm() < 1e-15);
        }
        let big = vec![CMatrix::from_element(1, 1, c(1.0, 0.0))];
        assert!(matches!(
            herglotz_kernel_nc(&big, 2),
            Err(Error::NotRowContraction { .. })
        ));
    }
}
