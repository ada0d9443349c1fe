//! Computable noncommutative function theory at desk scale.
//!
//! * [`words`] - the free semigroup and the graded-lex basis order.
//! * [`series`] - truncated free power series, inversion and the series
//!   Cayley transform.
//! * [`fock`] - truncated creation operators, model evaluation, positivity
//!   batteries, coherent vectors.
//! * [`pick`] - Carathéodory-Pick matrices and feasibility.
//! * [`realize`] - the realization solver and its evaluators.
//! * [`mobius`] - ball automorphisms and node transport.
//! * [`gen`], [`io`] - seeded problem generation and the JSON formats.
//!
//! Data-parallel loops go through [`par`], which uses rayon when the
//! `parallel` feature (on by default) is enabled.

pub mod error;
pub mod fock;
pub mod gen;
pub mod io;
pub mod matcore;
pub mod mobius;
pub mod par;
pub mod pick;
pub mod realize;
pub mod sample;
pub mod series;
pub mod words;

pub use error::{Error, Result};
pub use matcore::{CMatrix, Tolerances};
pub use pick::{FeasibilityReport, PickProblem};
pub use realize::{Colligation, SolveDiagnostics, SolveOptions};
pub use series::FreeSeries;
pub use words::Word;
