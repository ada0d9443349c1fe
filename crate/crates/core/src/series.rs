//! Degree-truncated formal power series in noncommuting indeterminates with
//! `d x d` complex matrix coefficients, `f = sum_alpha A_alpha (x) Z_alpha`.
//!
//! All arithmetic is carried out modulo words longer than the truncation
//! degree `M`, so every identity below holds only up to degree `M`.
//! Coefficients are stored sparsely; an absent word means a zero coefficient.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::matcore::{self, CMatrix};
use crate::words::Word;

#[derive(Debug, Clone, PartialEq)]
pub struct FreeSeries {
    n: usize,
    d: usize,
    degree: usize,
    coeffs: BTreeMap<Word, CMatrix>,
}

impl FreeSeries {
    /// The zero series.
    pub fn zero(n: usize, d: usize, degree: usize) -> Self {
        assert!(n >= 1 && d >= 1, "series need n >= 1 and d >= 1");
        FreeSeries {
            n,
            d,
            degree,
            coeffs: BTreeMap::new(),
        }
    }

    /// The series with constant coefficient `c` and nothing else.
    pub fn constant(n: usize, degree: usize, c: CMatrix) -> Self {
        let mut s = FreeSeries::zero(n, c.nrows(), degree);
        s.set(Word::empty(), c).expect("constant term always fits");
        s
    }

    /// The unit series `I (x) 1`.
    pub fn unit(n: usize, d: usize, degree: usize) -> Self {
        FreeSeries::constant(n, degree, matcore::identity(d))
    }

    /// Builds a series from `(word, coefficient)` pairs, summing repeats.
    pub fn from_terms<I>(n: usize, d: usize, degree: usize, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Word, CMatrix)>,
    {
        let mut s = FreeSeries::zero(n, d, degree);
        for (w, c) in terms {
            s.check_term(&w, &c)?;
            let slot = s.coeffs.entry(w).or_insert_with(|| CMatrix::zeros(d, d));
            *slot += c;
        }
        Ok(s)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn d(&self) -> usize {
        self.d
    }

    /// Truncation degree `M`.
    pub fn degree(&self) -> usize {
        self.degree
    }

    fn check_term(&self, w: &Word, c: &CMatrix) -> Result<()> {
        w.check_alphabet(self.n)?;
        if w.len() > self.degree {
            return Err(Error::Validation(format!(
                "word {w:?} is longer than the truncation degree {}",
                self.degree
            )));
        }
        if c.shape() != (self.d, self.d) {
            return Err(Error::ShapeMismatch(format!(
                "coefficient is {:?}, expected {}x{}",
                c.shape(),
                self.d,
                self.d
            )));
        }
        if !matcore::is_finite(c) {
            return Err(Error::Validation(format!("coefficient of {w:?} is not finite")));
        }
        Ok(())
    }

    /// Replaces the coefficient of `w`.
    pub fn set(&mut self, w: Word, c: CMatrix) -> Result<()> {
        self.check_term(&w, &c)?;
        self.coeffs.insert(w, c);
        Ok(())
    }

    /// Coefficient of `w` (zero when absent).
    pub fn coeff(&self, w: &Word) -> CMatrix {
        self.coeffs
            .get(w)
            .cloned()
            .unwrap_or_else(|| CMatrix::zeros(self.d, self.d))
    }

    pub fn constant_term(&self) -> CMatrix {
        self.coeff(&Word::empty())
    }

    /// Stored terms in graded-lex order.
    pub fn terms(&self) -> impl Iterator<Item = (&Word, &CMatrix)> {
        self.coeffs.iter()
    }

    fn same_shape(&self, other: &FreeSeries) -> Result<()> {
        if (self.n, self.d, self.degree) != (other.n, other.d, other.degree) {
            return Err(Error::ShapeMismatch(format!(
                "(n, d, M) = {:?} vs {:?}",
                (self.n, self.d, self.degree),
                (other.n, other.d, other.degree)
            )));
        }
        Ok(())
    }

    pub fn add(&self, other: &FreeSeries) -> Result<FreeSeries> {
        self.same_shape(other)?;
        let mut out = self.clone();
        for (w, c) in &other.coeffs {
            *out.coeffs
                .entry(w.clone())
                .or_insert_with(|| CMatrix::zeros(self.d, self.d)) += c;
        }
        Ok(out)
    }

    pub fn sub(&self, other: &FreeSeries) -> Result<FreeSeries> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> FreeSeries {
        self.map_coeffs(|c| -c)
    }

    fn map_coeffs(&self, f: impl Fn(&CMatrix) -> CMatrix) -> FreeSeries {
        FreeSeries {
            coeffs: self.coeffs.iter().map(|(w, c)| (w.clone(), f(c))).collect(),
            ..*self
        }
    }

    /// Adds `c (x) 1` to the constant term.
    pub fn shift(&self, c: &CMatrix) -> FreeSeries {
        let mut out = self.clone();
        *out.coeffs
            .entry(Word::empty())
            .or_insert_with(|| CMatrix::zeros(self.d, self.d)) += c;
        out
    }

    /// Cauchy product truncated at degree `M`:
    /// `(fg)_gamma = sum_{alpha beta = gamma} f_alpha g_beta`.
    pub fn mul(&self, other: &FreeSeries) -> Result<FreeSeries> {
        self.same_shape(other)?;
        let mut out = FreeSeries::zero(self.n, self.d, self.degree);
        for (a, fa) in &self.coeffs {
            let budget = self.degree - a.len();
            for (b, gb) in other.coeffs.iter().take_while(|(b, _)| b.len() <= budget) {
                let slot = out
                    .coeffs
                    .entry(a.concat(b))
                    .or_insert_with(|| CMatrix::zeros(self.d, self.d));
                slot.gemm(matcore::ONE, fa, gb, matcore::ONE);
            }
        }
        Ok(out)
    }

    /// Two-sided inverse up to degree `M`.
    ///
    /// Writes `f = (A_0 (x) 1)(1 - g)` with `g` having no constant term and
    /// returns `(1 + g + ... + g^M)(A_0^{-1} (x) 1)`.
    pub fn invert(&self) -> Result<FreeSeries> {
        let a0_inv = matcore::checked_inverse(&self.constant_term(), "constant term")
            .map_err(|_| Error::SingularConstantTerm)?;
        let g = FreeSeries {
            coeffs: self
                .coeffs
                .iter()
                .filter(|(w, _)| !w.is_empty())
                .map(|(w, c)| (w.clone(), -(&a0_inv * c)))
                .collect(),
            ..*self
        };
        let unit = FreeSeries::unit(self.n, self.d, self.degree);
        let mut neumann = unit.clone();
        for _ in 0..self.degree {
            neumann = unit.add(&g.mul(&neumann)?)?;
        }
        Ok(neumann.map_coeffs(|c| c * &a0_inv))
    }

    /// Series Cayley transform `(f - 1)(1 + f)^{-1}`.
    pub fn cayley_fwd(&self) -> Result<FreeSeries> {
        let id = matcore::identity(self.d);
        let minus = self.shift(&-&id);
        let plus_inv = self.shift(&id).invert()?;
        minus.mul(&plus_inv)
    }

    /// Inverse series Cayley transform `(1 - g)^{-1}(g + 1)`.
    pub fn cayley_inv(&self) -> Result<FreeSeries> {
        let id = matcore::identity(self.d);
        let left = self.neg().shift(&id).invert()?;
        left.mul(&self.shift(&id))
    }

    /// `|| sum_{|alpha| = k} A_alpha* A_alpha ||^{1/2}`.
    pub fn level_norm(&self, k: usize) -> f64 {
        let mut acc = CMatrix::zeros(self.d, self.d);
        for c in self.coeffs.iter().filter(|(w, _)| w.len() == k).map(|(_, c)| c) {
            acc.gemm(matcore::ONE, &c.adjoint(), c, matcore::ONE);
        }
        matcore::op_norm(&acc).sqrt()
    }

    /// Finite-degree proxy `1 / max_{1<=k<=M} level_norm(k)^{1/k}` for the
    /// radius of convergence. This is a heuristic, not a bound; a series with
    /// no nonzero positive-degree level reports `+inf`.
    pub fn radius_estimate(&self) -> f64 {
        let growth = (1..=self.degree)
            .map(|k| self.level_norm(k).powf(1.0 / k as f64))
            .fold(0.0f64, f64::max);
        if growth > 0.0 {
            1.0 / growth
        } else {
            f64::INFINITY
        }
    }

    /// Evaluates the truncated series at a matrix tuple:
    /// `sum_{|alpha| <= M} A_alpha (x) X_alpha` with `X_alpha = X_{i_1} ... X_{i_k}`.
    pub fn eval_at(&self, xs: &[CMatrix]) -> Result<CMatrix> {
        if xs.len() != self.n {
            return Err(Error::ShapeMismatch(format!(
                "series has {} indeterminates, tuple has {}",
                self.n,
                xs.len()
            )));
        }
        let p = xs[0].nrows();
        if xs.iter().any(|x| x.shape() != (p, p)) {
            return Err(Error::ShapeMismatch("tuple entries must share a square shape".into()));
        }
        let top = self.coeffs.keys().map(Word::len).max().unwrap_or(0);
        // powers[index(alpha)] = X_alpha, built by right-multiplying prefixes
        let count = crate::words::fock_dim(self.n, top);
        let mut powers: Vec<CMatrix> = Vec::with_capacity(count);
        powers.push(matcore::identity(p));
        for idx in 1..count {
            let w = Word::from_index(self.n, idx);
            let letters: Vec<usize> = w.letters().collect();
            let (last, prefix) = letters.split_last().expect("nonempty word");
            let prefix_idx = Word::from_letters(prefix).index(self.n);
            powers.push(&powers[prefix_idx] * &xs[last - 1]);
        }
        let mut out = CMatrix::zeros(self.d * p, self.d * p);
        for (w, c) in &self.coeffs {
            out += matcore::kron(c, &powers[w.index(self.n)]);
        }
        Ok(out)
    }

    /// Largest entrywise coefficient difference over the union of supports.
    pub fn max_coeff_diff(&self, other: &FreeSeries) -> Result<f64> {
        self.same_shape(other)?;
        let mut worst = 0.0f64;
        for w in self.coeffs.keys().chain(other.coeffs.keys()) {
            worst = worst.max(matcore::max_abs_diff(&self.coeff(w), &other.coeff(w)));
        }
        Ok(worst)
    }
}
