//! JSON file formats.
//!
//! One schema family shared by every command: complex numbers are
//! `[re, im]` pairs, matrices are row-major nests of rows, words are digit
//! strings (`""` for the empty word), and every document carries
//! `"format_version": 1`.
//!
//! ```text
//! problem      { format_version, n, dim, nodes: [[[re,im] x n], ...], values: [matrix, ...] }
//! realization  { format_version, n, dim, r, A, B, C, D, diagnostics? }
//! series       { format_version, n, d, M, coeffs: [{ word, matrix }, ...] }
//! tuple        { format_version, n, p, matrices: [matrix, ...] }
//! certificate  { format_version, n, d, levels: [{ m, min_eig }], tol_psd, certified }
//! ```

use std::path::Path;

use num_complex::Complex64;
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matcore::{self, CMatrix, Tolerances};
use crate::pick::PickProblem;
use crate::realize::{Colligation, SolveDiagnostics};
use crate::series::FreeSeries;
use crate::words::Word;

pub const FORMAT_VERSION: u32 = 1;

pub type JsonComplex = [f64; 2];
pub type JsonMatrix = Vec<Vec<JsonComplex>>;

fn default_version() -> u32 {
    FORMAT_VERSION
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProblemFile {
    #[serde(default = "default_version")]
    pub format_version: u32,
    pub n: usize,
    pub dim: usize,
    pub nodes: Vec<Vec<JsonComplex>>,
    pub values: Vec<JsonMatrix>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RealizationFile {
    #[serde(default = "default_version")]
    pub format_version: u32,
    pub n: usize,
    pub dim: usize,
    pub r: usize,
    #[serde(rename = "A")]
    pub a: JsonMatrix,
    #[serde(rename = "B")]
    pub b: JsonMatrix,
    #[serde(rename = "C")]
    pub c: JsonMatrix,
    #[serde(rename = "D")]
    pub d: JsonMatrix,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub diagnostics: Option<SolveDiagnostics>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SeriesTerm {
    pub word: String,
    pub matrix: JsonMatrix,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SeriesFile {
    #[serde(default = "default_version")]
    pub format_version: u32,
    pub n: usize,
    pub d: usize,
    #[serde(rename = "M")]
    pub degree: usize,
    pub coeffs: Vec<SeriesTerm>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TupleFile {
    #[serde(default = "default_version")]
    pub format_version: u32,
    pub n: usize,
    pub p: usize,
    pub matrices: Vec<JsonMatrix>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LevelEntry {
    pub m: usize,
    pub min_eig: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CertificateFile {
    #[serde(default = "default_version")]
    pub format_version: u32,
    pub n: usize,
    pub d: usize,
    pub levels: Vec<LevelEntry>,
    pub tol_psd: f64,
    pub certified: bool,
}

pub fn complex_to_json(z: Complex64) -> JsonComplex {
    [z.re, z.im]
}

pub fn complex_from_json(z: &JsonComplex) -> Complex64 {
    Complex64::new(z[0], z[1])
}

pub fn matrix_to_json(m: &CMatrix) -> JsonMatrix {
    m.row_iter()
        .map(|row| row.iter().map(|&z| complex_to_json(z)).collect())
        .collect()
}

/// Parses a row-major matrix, requiring `rows x cols` when given.
pub fn matrix_from_json(m: &JsonMatrix, what: &str, shape: Option<(usize, usize)>) -> Result<CMatrix> {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    if let Some(ri) = m.iter().position(|r| r.len() != cols) {
        return Err(Error::Validation(format!(
            "{what}: row {ri} has {} entries, expected {cols}",
            m[ri].len()
        )));
    }
    let out = CMatrix::from_row_iterator(rows, cols, m.iter().flatten().map(complex_from_json));
    if let Some((r, c)) = shape {
        // empty nests carry no column count
        let empty_ok = rows == r && (r == 0 || c == 0) && cols == 0;
        if (rows, cols) != (r, c) && !empty_ok {
            return Err(Error::Validation(format!("{what} is {rows}x{cols}, expected {r}x{c}")));
        }
        if empty_ok {
            return Ok(CMatrix::zeros(r, c));
        }
    }
    if !matcore::is_finite(&out) {
        return Err(Error::Validation(format!("{what} has non-finite entries")));
    }
    Ok(out)
}

fn check_version(v: u32) -> Result<()> {
    if v != FORMAT_VERSION {
        return Err(Error::Validation(format!("unsupported format_version {v}")));
    }
    Ok(())
}

fn parse_json<T: DeserializeOwned>(text: &str) -> Result<T> {
    serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
}

pub fn to_json_string<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("plain data serializes");
    s.push('\n');
    s
}

pub fn read_text(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))
}

pub fn write_text(path: &Path, text: &str) -> Result<()> {
    std::fs::write(path, text).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))
}

// problems

pub fn problem_to_file(p: &PickProblem) -> ProblemFile {
    ProblemFile {
        format_version: FORMAT_VERSION,
        n: p.n(),
        dim: p.d(),
        nodes: p
            .nodes()
            .iter()
            .map(|z| z.iter().map(|&c| complex_to_json(c)).collect())
            .collect(),
        values: p.values().iter().map(matrix_to_json).collect(),
    }
}

pub fn problem_from_file(f: &ProblemFile) -> Result<PickProblem> {
    check_version(f.format_version)?;
    let nodes = f
        .nodes
        .iter()
        .map(|z| z.iter().map(complex_from_json).collect())
        .collect();
    let values = f
        .values
        .iter()
        .enumerate()
        .map(|(j, m)| matrix_from_json(m, &format!("value {j}"), Some((f.dim, f.dim))))
        .collect::<Result<Vec<_>>>()?;
    PickProblem::new(f.n, f.dim, nodes, values)
}

pub fn problem_to_string(p: &PickProblem) -> String {
    to_json_string(&problem_to_file(p))
}

pub fn problem_from_str(text: &str) -> Result<PickProblem> {
    problem_from_file(&parse_json(text)?)
}

pub fn parse_problem(path: &Path) -> Result<PickProblem> {
    problem_from_str(&read_text(path)?)
}

// realizations

pub fn realization_to_file(c: &Colligation, diagnostics: Option<SolveDiagnostics>) -> RealizationFile {
    RealizationFile {
        format_version: FORMAT_VERSION,
        n: c.n,
        dim: c.dim,
        r: c.r,
        a: matrix_to_json(&c.a),
        b: matrix_to_json(&c.b),
        c: matrix_to_json(&c.c),
        d: matrix_to_json(&c.d),
        diagnostics,
    }
}

/// Parses and validates a realization, including the contraction bound
/// `||[A B; C D]|| <= 1 + tol_iso`.
pub fn realization_from_file(f: &RealizationFile) -> Result<Colligation> {
    check_version(f.format_version)?;
    let (n, dim, r) = (f.n, f.dim, f.r);
    if n == 0 || dim == 0 {
        return Err(Error::Validation("n and dim must be positive".into()));
    }
    let col = Colligation::new(
        n,
        dim,
        r,
        matrix_from_json(&f.a, "A", Some((r, n * r)))?,
        matrix_from_json(&f.b, "B", Some((r, dim)))?,
        matrix_from_json(&f.c, "C", Some((dim, n * r)))?,
        matrix_from_json(&f.d, "D", Some((dim, dim)))?,
    )?;
    let norm = col.norm();
    if norm > 1.0 + Tolerances::default().tol_iso {
        return Err(Error::Validation(format!("colligation norm {norm} exceeds 1")));
    }
    Ok(col)
}

pub fn realization_to_string(c: &Colligation, diagnostics: Option<SolveDiagnostics>) -> String {
    to_json_string(&realization_to_file(c, diagnostics))
}

pub fn realization_from_str(text: &str) -> Result<(Colligation, Option<SolveDiagnostics>)> {
    let f: RealizationFile = parse_json(text)?;
    Ok((realization_from_file(&f)?, f.diagnostics))
}

pub fn parse_realization(path: &Path) -> Result<Colligation> {
    Ok(realization_from_str(&read_text(path)?)?.0)
}

// series

pub fn series_to_file(s: &FreeSeries) -> SeriesFile {
    SeriesFile {
        format_version: FORMAT_VERSION,
        n: s.n(),
        d: s.d(),
        degree: s.degree(),
        coeffs: s
            .terms()
            .map(|(w, m)| SeriesTerm {
                word: w.to_string(),
                matrix: matrix_to_json(m),
            })
            .collect(),
    }
}

pub fn series_from_file(f: &SeriesFile) -> Result<FreeSeries> {
    check_version(f.format_version)?;
    if f.n == 0 || f.d == 0 {
        return Err(Error::Validation("n and d must be positive".into()));
    }
    if f.n > 9 {
        return Err(Error::Validation(
            "digit-string words support at most 9 generators".into(),
        ));
    }
    let terms = f
        .coeffs
        .iter()
        .enumerate()
        .map(|(k, t)| {
            let w: Word = t.word.parse()?;
            let m = matrix_from_json(&t.matrix, &format!("coefficient {k} ({:?})", t.word), Some((f.d, f.d)))?;
            Ok((w, m))
        })
        .collect::<Result<Vec<_>>>()?;
    FreeSeries::from_terms(f.n, f.d, f.degree, terms)
}

pub fn series_to_string(s: &FreeSeries) -> String {
    to_json_string(&series_to_file(s))
}

pub fn series_from_str(text: &str) -> Result<FreeSeries> {
    series_from_file(&parse_json(text)?)
}

pub fn parse_series(path: &Path) -> Result<FreeSeries> {
    series_from_str(&read_text(path)?)
}

// matrix tuples

pub fn tuple_from_str(text: &str) -> Result<Vec<CMatrix>> {
    let f: TupleFile = parse_json(text)?;
    check_version(f.format_version)?;
    if f.matrices.len() != f.n || f.n == 0 {
        return Err(Error::Validation(format!(
            "tuple declares n = {} but lists {} matrices",
            f.n,
            f.matrices.len()
        )));
    }
    f.matrices
        .iter()
        .enumerate()
        .map(|(i, m)| matrix_from_json(m, &format!("matrix {i}"), Some((f.p, f.p))))
        .collect()
}

pub fn tuple_to_string(xs: &[CMatrix]) -> String {
    to_json_string(&TupleFile {
        format_version: FORMAT_VERSION,
        n: xs.len(),
        p: xs.first().map_or(0, |x| x.nrows()),
        matrices: xs.iter().map(matrix_to_json).collect(),
    })
}

/// Parses `"re,im;re,im;..."`, one `re,im` pair per coordinate. A bare
/// `"0"` is the origin of `C^n`.
pub fn parse_point(text: &str, n: usize) -> Result<Vec<Complex64>> {
    if text.trim() == "0" {
        return Ok(vec![matcore::ZERO; n]);
    }
    let coords = text
        .split(';')
        .enumerate()
        .map(|(t, pair)| {
            let parts: Vec<&str> = pair.split(',').map(str::trim).collect();
            let num = |s: &str| {
                s.parse::<f64>()
                    .map_err(|_| Error::Parse(format!("coordinate {t}: bad number {s:?}")))
            };
            match parts.as_slice() {
                [re] => Ok(Complex64::new(num(re)?, 0.0)),
                [re, im] => Ok(Complex64::new(num(re)?, num(im)?)),
                _ => Err(Error::Parse(format!("coordinate {t}: expected re,im"))),
            }
        })
        .collect::<Result<Vec<_>>>()?;
    if coords.len() != n {
        return Err(Error::Validation(format!(
            "point has {} coordinates, expected {n}",
            coords.len()
        )));
    }
    Ok(coords)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matcore::c;

    fn sample_problem() -> PickProblem {
        PickProblem::new(
            2,
            2,
            vec![vec![c(0.0, 0.0), c(0.1, -0.2)], vec![c(0.3, 0.0), c(0.0, 0.4)]],
            vec![
                CMatrix::from_row_slice(2, 2, &[c(1.0, 0.0), c(0.2, 0.1), c(0.0, -0.3), c(2.0, 0.5)]),
                matcore::identity(2),
            ],
        )
        .unwrap()
    }

    #[test]
    fn problem_round_trip() {
        let p = sample_problem();
        let text = problem_to_string(&p);
        assert_eq!(problem_from_str(&text).unwrap(), p);
        assert!(text.contains("\"format_version\": 1"));
    }

    #[test]
    fn problem_validation_names_the_node() {
        let text = r#"{"format_version":1,"n":1,"dim":1,"nodes":[[[0,0]],[[1,0]]],"values":[[[[1,0]]],[[[1,0]]]]}"#;
        match problem_from_str(text) {
            Err(Error::Validation(msg)) => assert!(msg.contains("node 1"), "{msg}"),
            other => panic!("unexpected {other:?}"),
        }
        let dup = r#"{"n":1,"dim":1,"nodes":[[[0.5,0]],[[0.5,0]]],"values":[[[[1,0]]],[[[1,0]]]]}"#;
        assert!(matches!(problem_from_str(dup), Err(Error::Validation(_))));
        assert!(matches!(problem_from_str("{"), Err(Error::Parse(_))));
        let ragged = r#"{"n":1,"dim":2,"nodes":[[[0,0]]],"values":[[[[1,0],[0,0]],[[0,0]]]]}"#;
        assert!(matches!(problem_from_str(ragged), Err(Error::Validation(_))));
    }

    #[test]
    fn series_round_trip() {
        let s = FreeSeries::from_terms(
            2,
            1,
            3,
            [
                ("".parse().unwrap(), CMatrix::from_element(1, 1, c(1.0, 0.0))),
                ("21".parse().unwrap(), CMatrix::from_element(1, 1, c(0.0, -2.5))),
            ],
        )
        .unwrap();
        let text = series_to_string(&s);
        assert!(text.contains("\"word\": \"21\""));
        assert_eq!(series_from_str(&text).unwrap(), s);
    }

    #[test]
    fn points() {
        assert_eq!(parse_point("0", 3).unwrap(), vec![matcore::ZERO; 3]);
        assert_eq!(
            parse_point("0.5,0.1;-0.2,0", 2).unwrap(),
            vec![c(0.5, 0.1), c(-0.2, 0.0)]
        );
        assert!(parse_point("0.5,0.1", 2).is_err());
        assert!(parse_point("x,1", 1).is_err());
    }
}
