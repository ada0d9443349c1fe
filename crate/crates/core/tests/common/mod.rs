//! Test-only oracles and random instance builders, kept independent of the
//! production code paths they check.
#![allow(dead_code)]

use herglotz::matcore::{self, CMatrix};
use herglotz::sample::{self, SampleRng};
use herglotz::series::FreeSeries;
use herglotz::words::{self, Word};
use num_complex::Complex64;
use rand::Rng;

/// Random series with every word of length <= degree populated.
pub fn random_series(rng: &mut SampleRng, n: usize, d: usize, degree: usize, constant_shift: f64) -> FreeSeries {
    let terms = words::enumerate(n, degree).into_iter().map(|w| {
        let mut c = sample::gaussian_matrix(rng, d, d).scale(0.5);
        if w.is_empty() {
            c += matcore::identity(d).scale(constant_shift);
        }
        (w, c)
    });
    FreeSeries::from_terms(n, d, degree, terms).unwrap()
}

/// Inverse via the explicit coefficient formula
/// `F_alpha = sum_j sum_{gamma_1...gamma_j = alpha} D_gamma_1 ... D_gamma_j`
/// with `D_alpha = -A_0^{-1} A_alpha`, followed by right multiplication
/// with `A_0^{-1}`.
pub fn invert_by_factorizations(f: &FreeSeries) -> FreeSeries {
    let (n, d, degree) = (f.n(), f.d(), f.degree());
    let a0_inv = f.constant_term().try_inverse().expect("invertible constant term");
    let dcoef = |w: &Word| -(&a0_inv * f.coeff(w));
    let mut terms = vec![(Word::empty(), a0_inv.clone())];
    for alpha in words::enumerate(n, degree).into_iter().skip(1) {
        let mut acc = CMatrix::zeros(d, d);
        for j in 1..=alpha.len() {
            for parts in alpha.factorizations(j).unwrap() {
                acc += parts.iter().fold(matcore::identity(d), |prod, g| prod * dcoef(g));
            }
        }
        terms.push((alpha, acc * &a0_inv));
    }
    FreeSeries::from_terms(n, d, degree, terms).unwrap()
}

/// Brute-force truncated product of one-variable scalar polynomials.
pub fn poly_mul(a: &[Complex64], b: &[Complex64], degree: usize) -> Vec<Complex64> {
    let mut out = vec![Complex64::new(0.0, 0.0); degree + 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            if i + j <= degree {
                out[i + j] += x * y;
            }
        }
    }
    out
}

/// Smallest root of `t^2 - tr t + det` for a 2x2 Hermitian matrix.
pub fn min_eig_2x2(a: f64, b: Complex64, d: f64) -> f64 {
    let tr = a + d;
    let det = a * d - b.norm_sqr();
    (tr - (tr * tr - 4.0 * det).max(0.0).sqrt()) / 2.0
}

/// Jointly nilpotent row contraction: strictly block-lower tuples with
/// `levels` diagonal blocks of size `block`, scaled to row norm `target`.
pub fn nilpotent_row_contraction(
    rng: &mut SampleRng,
    n: usize,
    levels: usize,
    block: usize,
    target: f64,
) -> Vec<CMatrix> {
    let size = levels * block;
    let xs: Vec<CMatrix> = (0..n)
        .map(|_| {
            let mut t = CMatrix::zeros(size, size);
            for bi in 0..levels {
                for bj in 0..bi {
                    let g = sample::gaussian_matrix(rng, block, block);
                    t.view_mut((bi * block, bj * block), (block, block)).copy_from(&g);
                }
            }
            t
        })
        .collect();
    let norm = matcore::row_norm(&xs);
    xs.into_iter().map(|x| x.scale(target / norm)).collect()
}

pub fn uniform(rng: &mut SampleRng, lo: f64, hi: f64) -> f64 {
    lo + (hi - lo) * rng.random::<f64>()
}
