//! `herglotz` command-line front end.
//!
//! Exit codes: 0 success or feasible, 1 usage or IO error, 2 infeasible,
//! numeric failure or failed verification.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{ArgGroup, Parser, Subcommand};
use herglotz::gen::{self, GenSpec, Mode};
use herglotz::io::{self, CertificateFile, LevelEntry};
use herglotz::matcore::CMatrix;
use herglotz::{fock, mobius, pick, realize, Error, SolveOptions, Tolerances};

#[derive(Parser)]
#[command(
    name = "herglotz",
    version,
    about = "Noncommutative Carathéodory-Pick interpolation toolkit"
)]
struct Cli {
    /// Worker threads for sampling loops.
    #[arg(long, global = true, default_value_t = 1)]
    jobs: usize,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Report the Pick matrix minimum eigenvalue; exit 2 when infeasible.
    Check {
        problem: PathBuf,
        /// PSD tolerance.
        #[arg(long)]
        tol: Option<f64>,
    },
    /// Build and verify a contractive realization of an interpolant.
    Solve {
        problem: PathBuf,
        #[arg(short = 'o', long = "output")]
        output: PathBuf,
        #[arg(long)]
        rank_tol: Option<f64>,
        /// Accept boundary data whose eigenvalue noise lies within tolerance.
        #[arg(long)]
        ridge: bool,
        /// Sample points for the kernel check.
        #[arg(long, default_value_t = 64)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Evaluate a realization at a scalar point or a matrix tuple.
    #[command(group(ArgGroup::new("at").required(true).args(["point", "tuple"])))]
    Eval {
        realization: PathBuf,
        /// "re,im;re,im;..." or "0" for the origin.
        #[arg(long, allow_hyphen_values = true)]
        point: Option<String>,
        #[arg(long)]
        tuple: Option<PathBuf>,
        /// Print the Schur-class transfer function instead.
        #[arg(long, conflicts_with = "herglotz")]
        schur: bool,
        /// Print the interpolant (default).
        #[arg(long)]
        herglotz: bool,
    },
    /// Write the interpolant's free power series up to a degree.
    Series {
        realization: PathBuf,
        #[arg(long)]
        degree: usize,
        #[arg(short = 'o', long = "output")]
        output: PathBuf,
    },
    /// Minimum eigenvalue of Re f at the truncated models; exit 2 if negative.
    Certify {
        series: PathBuf,
        #[arg(long, default_value_t = 4)]
        levels: usize,
        /// Lift the model dimension guardrail.
        #[arg(long)]
        force: bool,
        /// Also write the JSON certificate.
        #[arg(short = 'o', long = "output")]
        output: Option<PathBuf>,
    },
    /// Series Cayley transform (f - 1)(1 + f)^-1 or its inverse.
    Cayley {
        series: PathBuf,
        #[arg(long)]
        inverse: bool,
        #[arg(short = 'o', long = "output")]
        output: PathBuf,
    },
    /// Move node J to the origin by a ball automorphism.
    Transport {
        problem: PathBuf,
        #[arg(long)]
        base: usize,
        #[arg(short = 'o', long = "output")]
        output: PathBuf,
    },
    /// Generate a random feasible or infeasible problem.
    #[command(group(ArgGroup::new("mode").required(true).args(["feasible", "infeasible"])))]
    Gen {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        dim: usize,
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        feasible: bool,
        #[arg(long)]
        infeasible: bool,
        #[arg(long, default_value_t = 2)]
        state_dim: usize,
        #[arg(short = 'o', long = "output")]
        output: PathBuf,
    },
}

enum Failure {
    Usage(String),
    Lib(Error),
    /// A completed run whose verdict is negative.
    Verdict,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

type Outcome = Result<(), Failure>;

fn tolerances(tol_psd: Option<f64>, rank_tol: Option<f64>) -> Result<Tolerances, Failure> {
    let mut tol = Tolerances::default();
    if let Some(t) = tol_psd {
        tol.tol_psd = t;
    }
    if let Some(r) = rank_tol {
        tol.rank_tol = r;
    }
    tol.validate().map_err(Failure::Lib)?;
    Ok(tol)
}

fn format_matrix(m: &CMatrix) -> String {
    let mut out = String::new();
    for row in m.row_iter() {
        let cells: Vec<String> = row.iter().map(|z| format!("{},{}", z.re, z.im)).collect();
        out.push_str(&cells.join("  "));
        out.push('\n');
    }
    out
}

fn check(problem: &Path, tol: Option<f64>) -> Outcome {
    let tol = tolerances(tol, None)?;
    let p = io::parse_problem(problem)?;
    let report = pick::feasibility_with(&p, &tol);
    println!("nodes: {}  n: {}  dim: {}", p.len(), p.n(), p.d());
    println!("pick matrix size: {}", report.matrix_size);
    println!("min_eig: {:e}", report.min_eig);
    let verdict = match (report.feasible, report.boundary) {
        (true, true) => "feasible (boundary)",
        (true, false) => "feasible",
        (false, _) => "infeasible",
    };
    println!("verdict: {verdict}");
    if report.feasible {
        Ok(())
    } else {
        Err(Failure::Verdict)
    }
}

fn solve(problem: &Path, output: &Path, rank_tol: Option<f64>, ridge: bool, samples: usize, seed: u64) -> Outcome {
    let tol = tolerances(None, rank_tol)?;
    let p = io::parse_problem(problem)?;
    let (col, diag) = realize::solve_with(&p, &SolveOptions { tol, ridge })?;
    let checked = realize::verify(&col, &p, samples, seed)?;
    io::write_text(output, &io::realization_to_string(&col, Some(diag)))?;
    println!("state dimension: {}", col.r);
    println!("pick min_eig: {:e}", diag.pick_min_eig);
    println!("isometry defect: {:e}", diag.iso_defect);
    println!("interpolation residual: {:e}", diag.interp_residual);
    println!("colligation norm: {}", diag.colligation_norm);
    println!(
        "verified with {samples} samples (seed {seed}), residual {:e}",
        checked.interp_residual
    );
    Ok(())
}

fn eval(realization: &Path, point: Option<&str>, tuple: Option<&Path>, schur: bool) -> Outcome {
    let col = io::parse_realization(realization)?;
    let xs = match (point, tuple) {
        (Some(text), _) => {
            let z = io::parse_point(text, col.n)?;
            herglotz::fock::check_in_ball(&z)?;
            realize::scalar_tuple(&z)
        }
        (None, Some(path)) => io::tuple_from_str(&io::read_text(path)?)?,
        (None, None) => return Err(Failure::Usage("one of --point or --tuple is required".into())),
    };
    let value = if schur {
        realize::transfer_eval(&col, &xs)?
    } else {
        realize::herglotz_eval(&col, &xs)?
    };
    print!("{}", format_matrix(&value));
    Ok(())
}

fn series(realization: &Path, degree: usize, output: &Path) -> Outcome {
    let col = io::parse_realization(realization)?;
    let s = realize::herglotz_series(&col, degree)?;
    io::write_text(output, &io::series_to_string(&s))?;
    println!("wrote {} coefficients up to degree {degree}", s.terms().count());
    for k in 0..=degree {
        println!("level {k}: norm {:e}", s.level_norm(k));
    }
    Ok(())
}

fn certify(path: &Path, levels: usize, force: bool, output: Option<&Path>) -> Outcome {
    let s = io::parse_series(path)?;
    let tol = Tolerances::default();
    let minima = fock::certify_positive_forced(&s, levels, force)?;
    let certified = minima.iter().all(|&v| v >= -tol.tol_psd);
    for (m, v) in minima.iter().enumerate() {
        println!("level {m}: min_eig {v:e}");
    }
    println!(
        "certified through level {levels}: {}",
        if certified { "yes" } else { "no" }
    );
    if let Some(out) = output {
        let report = CertificateFile {
            format_version: io::FORMAT_VERSION,
            n: s.n(),
            d: s.d(),
            levels: minima
                .iter()
                .enumerate()
                .map(|(m, &min_eig)| LevelEntry { m, min_eig })
                .collect(),
            tol_psd: tol.tol_psd,
            certified,
        };
        io::write_text(out, &io::to_json_string(&report))?;
    }
    if certified {
        Ok(())
    } else {
        Err(Failure::Verdict)
    }
}

fn cayley(path: &Path, inverse: bool, output: &Path) -> Outcome {
    let s = io::parse_series(path)?;
    let out = if inverse { s.cayley_inv()? } else { s.cayley_fwd()? };
    io::write_text(output, &io::series_to_string(&out))?;
    println!(
        "wrote {} transform of degree {}",
        if inverse { "inverse" } else { "forward" },
        out.degree()
    );
    Ok(())
}

fn transport(problem: &Path, base: usize, output: &Path) -> Outcome {
    let p = io::parse_problem(problem)?;
    let (moved, weights) = mobius::transport(&p, base)?;
    io::write_text(output, &io::problem_to_string(&moved))?;
    println!("moved node {base} to the origin");
    for (j, w) in weights.iter().enumerate() {
        println!("weight {j}: {},{}", w.re, w.im);
    }
    Ok(())
}

#[allow(clippy::too_many_arguments)]
fn generate(n: usize, k: usize, dim: usize, seed: u64, feasible: bool, state_dim: usize, output: &Path) -> Outcome {
    let spec = GenSpec {
        n,
        k,
        d: dim,
        seed,
        mode: if feasible { Mode::Feasible } else { Mode::Infeasible },
        state_dim,
    };
    let p = gen::generate_problem(&spec)?;
    io::write_text(output, &io::problem_to_string(&p))?;
    let report = pick::feasibility(&p);
    println!("wrote {} nodes, pick min_eig {:e}", p.len(), report.min_eig);
    Ok(())
}

fn run(cli: Cli) -> Outcome {
    match cli.command {
        Command::Check { problem, tol } => check(&problem, tol),
        Command::Solve {
            problem,
            output,
            rank_tol,
            ridge,
            samples,
            seed,
        } => solve(&problem, &output, rank_tol, ridge, samples, seed),
        Command::Eval {
            realization,
            point,
            tuple,
            schur,
            herglotz: _,
        } => eval(&realization, point.as_deref(), tuple.as_deref(), schur),
        Command::Series {
            realization,
            degree,
            output,
        } => series(&realization, degree, &output),
        Command::Certify {
            series,
            levels,
            force,
            output,
        } => certify(&series, levels, force, output.as_deref()),
        Command::Cayley {
            series,
            inverse,
            output,
        } => cayley(&series, inverse, &output),
        Command::Transport { problem, base, output } => transport(&problem, base, &output),
        Command::Gen {
            n,
            k,
            dim,
            seed,
            feasible,
            infeasible: _,
            state_dim,
            output,
        } => generate(n, k, dim, seed, feasible, state_dim, &output),
    }
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Parse(_) | Error::Validation(_) | Error::BadIndex { .. } => 1,
        _ => 2,
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    if cli.jobs == 0 {
        eprintln!("error: --jobs must be at least 1");
        return ExitCode::from(1);
    }
    let pool = match rayon::ThreadPoolBuilder::new().num_threads(cli.jobs).build() {
        Ok(pool) => pool,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(1);
        }
    };
    match pool.install(|| run(cli)) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Verdict) => ExitCode::from(2),
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Lib(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
