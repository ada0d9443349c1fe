//! Reproducible random sampling.
//!
//! Every random stream is a ChaCha8 generator keyed by `(seed, stream)`: the
//! seed selects the key and the stream index selects ChaCha's stream
//! counter. Loops that run in parallel derive one stream per sample index,
//! so their output does not depend on scheduling.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::matcore::{self, CMatrix};

pub type SampleRng = ChaCha8Rng;

/// Generator for stream `stream` under `seed`.
pub fn stream(seed: u64, stream: u64) -> SampleRng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

pub fn complex_normal<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    Complex64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
}

/// Matrix with i.i.d. standard complex Gaussian entries.
pub fn gaussian_matrix<R: Rng + ?Sized>(rng: &mut R, rows: usize, cols: usize) -> CMatrix {
    CMatrix::from_fn(rows, cols, |_, _| complex_normal(rng))
}

/// Point of `C^n` drawn uniformly from the ball of radius `radius`.
pub fn ball_point<R: Rng + ?Sized>(rng: &mut R, n: usize, radius: f64) -> Vec<Complex64> {
    let v: Vec<Complex64> = (0..n).map(|_| complex_normal(rng)).collect();
    let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    // radius^(1/2n) law for uniform volume in real dimension 2n
    let u: f64 = rng.random();
    let r = radius * u.powf(1.0 / (2 * n) as f64);
    v.into_iter().map(|z| z * (r / norm)).collect()
}

/// Tuple `(X_1, ..., X_n)` of `p x p` matrices scaled to row norm `target`.
pub fn row_contraction<R: Rng + ?Sized>(rng: &mut R, n: usize, p: usize, target: f64) -> Vec<CMatrix> {
    let xs: Vec<CMatrix> = (0..n).map(|_| gaussian_matrix(rng, p, p)).collect();
    let norm = matcore::row_norm(&xs);
    xs.into_iter().map(|x| x.scale(target / norm)).collect()
}

/// A matrix `B + B* + s I + i C` whose real part is positive semidefinite.
pub fn accretive_matrix<R: Rng + ?Sized>(rng: &mut R, d: usize) -> CMatrix {
    let b = gaussian_matrix(rng, d, d);
    let h = &b + b.adjoint();
    let shift = (-matcore::herm_min_eig(&h).expect("hermitian")).max(0.0) + rng.random::<f64>();
    let skew = gaussian_matrix(rng, d, d);
    let skew = (&skew + skew.adjoint()).map(|z| z * Complex64::i());
    h + matcore::identity(d).scale(shift) + skew
}
