//! Acceptance gate: one line per criterion, nonzero exit on any failure.

mod common;

use std::process::ExitCode;
use std::time::{Duration, Instant};

use common::{invert_by_factorizations, nilpotent_row_contraction, random_series, uniform};
use herglotz::fock;
use herglotz::gen::{self, GenSpec, Mode};
use herglotz::matcore::{self, c, CMatrix, Tolerances};
use herglotz::mobius::{self, Automorphism};
use herglotz::pick::{self, PickProblem};
use herglotz::realize::{self, Colligation};
use herglotz::sample;
use herglotz::series::FreeSeries;
use herglotz::Error;
use rand::Rng;

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn feasible_spec(seed: u64) -> GenSpec {
    GenSpec {
        n: 1 + seed as usize % 3,
        k: seed as usize % 6,
        d: 1 + (seed as usize / 3) % 3,
        seed,
        mode: Mode::Feasible,
        state_dim: 1 + seed as usize % 3,
    }
}

fn solved_instances() -> Result<Vec<(PickProblem, Colligation)>, String> {
    (0..20)
        .map(|seed| {
            let p = gen::generate_problem(&feasible_spec(seed)).map_err(|e| format!("gen seed {seed}: {e}"))?;
            let (col, _) = realize::solve(&p, &Tolerances::default()).map_err(|e| format!("solve seed {seed}: {e}"))?;
            Ok((p, col))
        })
        .collect()
}

fn cayley_round_trips() -> Outcome {
    let mut rng = sample::stream(1001, 0);
    let mut worst = 0.0f64;
    for trial in 0..100 {
        let a = sample::accretive_matrix(&mut rng, 1 + trial % 4);
        let t = matcore::cayley_op(&a).map_err(|e| e.to_string())?;
        let back = matcore::cayley_op_inv(&t).map_err(|e| e.to_string())?;
        worst = worst.max(matcore::max_abs_diff(&back, &a));
    }
    let op_worst = worst;
    for trial in 0..100 {
        let (n, d, m) = (1 + trial % 3, 1 + (trial / 3) % 4, 1 + trial % 5);
        let f = random_series(&mut rng, n, d, m, 3.0);
        let g = f.cayley_fwd().map_err(|e| e.to_string())?;
        worst = worst.max(g.cayley_inv().map_err(|e| e.to_string())?.max_coeff_diff(&f).unwrap());
        let mut h = random_series(&mut rng, n, d, m, 0.0);
        let h0 = h.constant_term();
        h.set(herglotz::Word::empty(), h0.scale(0.5 / matcore::op_norm(&h0).max(1e-3)))
            .unwrap();
        let round = h.cayley_inv().and_then(|x| x.cayley_fwd()).map_err(|e| e.to_string())?;
        worst = worst.max(round.max_coeff_diff(&h).unwrap());
    }
    ensure(worst <= 1e-9, || format!("max error {worst:e}"))?;
    Ok(format!("operator {op_worst:.1e}, overall {worst:.1e}"))
}

fn inverse_oracle() -> Outcome {
    let mut rng = sample::stream(1002, 0);
    let mut worst = 0.0f64;
    for trial in 0..50 {
        let (n, d, m) = (1 + trial % 2, 1 + (trial / 2) % 2, 1 + trial % 4);
        let f = random_series(&mut rng, n, d, m, 2.0);
        let fast = f.invert().map_err(|e| e.to_string())?;
        worst = worst.max(fast.max_coeff_diff(&invert_by_factorizations(&f)).unwrap());
    }
    ensure(worst <= 1e-11, || format!("max error {worst:e}"))?;
    Ok(format!("max error {worst:.1e}"))
}

fn truncated_cayley_compatibility() -> Outcome {
    let mut worst = 0.0f64;
    for seed in 0..20u64 {
        let spec = GenSpec {
            n: 2,
            d: 1 + seed as usize % 2,
            ..feasible_spec(seed)
        };
        let p = gen::generate_problem(&spec).map_err(|e| e.to_string())?;
        let (col, _) = realize::solve(&p, &Tolerances::default()).map_err(|e| e.to_string())?;
        let g = realize::herglotz_series(&col, 4).map_err(|e| e.to_string())?;
        let gamma = g.cayley_fwd().map_err(|e| e.to_string())?;
        for m in 0..=4 {
            let y = fock::eval_at_model(&g, m).map_err(|e| e.to_string())?;
            let lhs = fock::truncated_cayley(&y, 2, m, spec.d).map_err(|e| format!("seed {seed} m {m}: {e}"))?;
            let rhs = fock::eval_at_model(&gamma, m).map_err(|e| e.to_string())?;
            worst = worst.max(matcore::max_abs_diff(&lhs, &rhs));
        }
    }
    ensure(worst <= 1e-8, || format!("max error {worst:e}"))?;
    Ok(format!("max error {worst:.1e}"))
}

fn forward_feasibility() -> Outcome {
    let mut min_eig = f64::INFINITY;
    let mut residual = 0.0f64;
    for seed in 0..20 {
        let p = gen::generate_problem(&feasible_spec(seed)).map_err(|e| e.to_string())?;
        min_eig = min_eig.min(pick::feasibility(&p).min_eig);
        let (col, _) = realize::solve(&p, &Tolerances::default()).map_err(|e| format!("seed {seed}: {e}"))?;
        for (z, w) in p.nodes().iter().zip(p.values()) {
            let f = realize::herglotz_eval(&col, &realize::scalar_tuple(z)).map_err(|e| e.to_string())?;
            residual = residual.max(matcore::max_abs_diff(&f, w));
        }
    }
    ensure(min_eig >= -1e-8, || format!("Pick min eigenvalue {min_eig:e}"))?;
    ensure(residual <= 1e-8, || format!("residual {residual:e}"))?;
    Ok(format!("min Pick eigenvalue {min_eig:.1e}, residual {residual:.1e}"))
}

fn converse_rejection() -> Outcome {
    for seed in 0..20 {
        let spec = GenSpec {
            mode: Mode::Infeasible,
            ..feasible_spec(seed)
        };
        let p = gen::generate_problem(&spec).map_err(|e| e.to_string())?;
        ensure(!pick::feasibility(&p).feasible, || {
            format!("seed {seed}: check accepted")
        })?;
        match realize::solve(&p, &Tolerances::default()) {
            Err(Error::Infeasible { .. }) => {}
            other => return Err(format!("seed {seed}: solve returned {other:?}")),
        }
    }
    Ok("20/20 rejected".into())
}

fn positive_real_part() -> Outcome {
    let mut worst = f64::INFINITY;
    for (seed, (p, col)) in solved_instances()?.into_iter().enumerate() {
        let mut rng = sample::stream(seed as u64, 600);
        for trial in 0..100 {
            let target = uniform(&mut rng, 0.05, 0.99);
            let xs = sample::row_contraction(&mut rng, col.n, 1 + trial % 4, target);
            let f = realize::herglotz_eval(&col, &xs).map_err(|e| e.to_string())?;
            worst = worst.min(matcore::herm_min_eig(&matcore::real_part(&f)).map_err(|e| e.to_string())?);
        }
        realize::verify(&col, &p, 64, seed as u64).map_err(|e| format!("seed {seed}: {e}"))?;
    }
    ensure(worst >= -1e-8, || format!("min eigenvalue {worst:e}"))?;
    Ok(format!("min eigenvalue of Re F {worst:.1e}, 20 kernels PSD"))
}

fn coefficient_bounds() -> Outcome {
    let mut slack = f64::INFINITY;
    for (seed, (_, col)) in solved_instances()?.into_iter().enumerate() {
        let f = realize::herglotz_series(&col, 4).map_err(|e| e.to_string())?;
        let b0 = f.constant_term();
        let bound = matcore::op_norm(&(&b0 + b0.adjoint()));
        let phi = realize::free_coefficients(&col, 4);
        let c0 = phi.constant_term();
        for k in 1..=4 {
            slack = slack.min(bound - f.level_norm(k));
            if col.dim == 1 {
                slack = slack.min(1.0 - c0[(0, 0)].norm_sqr() - phi.level_norm(k));
            }
        }
        ensure(slack >= -1e-9, || format!("seed {seed}: slack {slack:e}"))?;
    }
    Ok(format!("min slack {slack:.1e}"))
}

fn von_neumann() -> Outcome {
    let mut rng = sample::stream(1008, 0);
    let mut worst = f64::NEG_INFINITY;
    for trial in 0..50 {
        let m = 1 + trial % 3;
        let p: FreeSeries = random_series(&mut rng, 2, 1, m, 0.0);
        let target = uniform(&mut rng, 0.2, 1.0);
        let block = 1 + rng.random_range(0..3);
        let t = nilpotent_row_contraction(&mut rng, 2, m + 1, block, target);
        let lhs = matcore::op_norm(&p.eval_at(&t).map_err(|e| e.to_string())?);
        let rhs = matcore::op_norm(&fock::eval_at_model(&p, m).map_err(|e| e.to_string())?);
        worst = worst.max(lhs - rhs);
    }
    ensure(worst <= 1e-8, || format!("excess {worst:e}"))?;
    Ok(format!("max excess {worst:.1e}"))
}

fn automorphism_suite() -> Outcome {
    let mut rng = sample::stream(1009, 0);
    let mut point_worst = 0.0f64;
    for _ in 0..1000 {
        let n = rng.random_range(1..4);
        let a = sample::ball_point(&mut rng, n, 0.95);
        let z = sample::ball_point(&mut rng, n, 0.95);
        let w = sample::ball_point(&mut rng, n, 0.95);
        let aut = Automorphism::new(a).map_err(|e| e.to_string())?;
        let image = aut.psi(&z).map_err(|e| e.to_string())?;
        ensure(fock::norm_sqr(&image) < 1.0, || "image left the ball".into())?;
        let back = aut.psi(&image).map_err(|e| e.to_string())?;
        for (x, y) in back.iter().zip(&z) {
            point_worst = point_worst.max((x - y).norm());
        }
        point_worst = point_worst.max(mobius::kernel_identity_residual(&aut, &z, &w).map_err(|e| e.to_string())?);
    }
    ensure(point_worst <= 1e-12, || format!("pointwise residual {point_worst:e}"))?;

    let mut congruence = 0.0f64;
    let mut end_to_end = 0.0f64;
    for seed in 0..20u64 {
        let p = gen::generate_problem(&feasible_spec(seed)).map_err(|e| e.to_string())?;
        let base = seed as usize % p.len();
        let (moved, weights) = mobius::transport(&p, base).map_err(|e| e.to_string())?;
        let (before, after) = (pick::pick_matrix(&p), pick::pick_matrix(&moved));
        let d = p.d();
        for (idx, z) in after.iter().enumerate() {
            let (row, col) = (idx % after.nrows(), idx / after.nrows());
            let want = before[(row, col)] * weights[row / d] * weights[col / d].conj();
            congruence = congruence.max((z - want).norm());
        }
        let (col, _) = realize::solve(&moved, &Tolerances::default()).map_err(|e| e.to_string())?;
        let aut = Automorphism::new(p.nodes()[base].clone()).map_err(|e| e.to_string())?;
        for (z, w) in p.nodes().iter().zip(p.values()) {
            let moved_z = aut.psi(z).map_err(|e| e.to_string())?;
            let f = realize::herglotz_eval(&col, &realize::scalar_tuple(&moved_z)).map_err(|e| e.to_string())?;
            end_to_end = end_to_end.max(matcore::max_abs_diff(&f, w));
        }
    }
    ensure(congruence <= 1e-11, || format!("congruence {congruence:e}"))?;
    ensure(end_to_end <= 1e-8, || format!("transported residual {end_to_end:e}"))?;
    Ok(format!(
        "pointwise {point_worst:.1e}, congruence {congruence:.1e}, transported {end_to_end:.1e}"
    ))
}

fn golden_cases() -> Outcome {
    let tol = Tolerances::default();
    let mut worst = 0.0f64;
    let probes = [vec![c(0.3, 0.1), c(-0.2, 0.4)], vec![c(-0.5, 0.0), c(0.1, -0.6)]];
    for (n, d) in [(1, 1), (2, 2), (3, 3)] {
        let p = PickProblem::new(n, d, vec![vec![matcore::ZERO; n]], vec![matcore::identity(d)]).unwrap();
        let (col, _) = realize::solve(&p, &tol).map_err(|e| e.to_string())?;
        worst = worst
            .max(matcore::max_abs(&col.a))
            .max(matcore::max_abs_diff(&col.b, &matcore::identity(d)))
            .max(matcore::max_abs(&col.c))
            .max(matcore::max_abs(&col.d));
        if n == 2 {
            for z in &probes {
                let f = realize::herglotz_eval(&col, &realize::scalar_tuple(z)).map_err(|e| e.to_string())?;
                worst = worst.max(matcore::max_abs_diff(&f, &matcore::identity(d)));
            }
        }
    }
    for w in [c(2.0, -1.5), c(0.5, 3.0), c(1.0, 0.0)] {
        let w0 = (w - 1.0) / (w + 1.0);
        let p = PickProblem::new(2, 1, vec![vec![matcore::ZERO; 2]], vec![CMatrix::from_element(1, 1, w)]).unwrap();
        let (col, _) = realize::solve(&p, &tol).map_err(|e| e.to_string())?;
        worst = worst
            .max((col.d[(0, 0)] - w0.conj()).norm())
            .max((col.b[(0, 0)] - c((1.0 - w0.norm_sqr()).sqrt(), 0.0)).norm())
            .max(matcore::max_abs(&col.a))
            .max(matcore::max_abs(&col.c));
        for z in &probes {
            let f = realize::herglotz_eval(&col, &realize::scalar_tuple(z)).map_err(|e| e.to_string())?;
            worst = worst.max((f[(0, 0)] - w).norm());
        }
    }
    ensure(worst <= 1e-12, || format!("max deviation {worst:e}"))?;
    Ok(format!("max deviation {worst:.1e}"))
}

struct Criterion {
    id: usize,
    name: &'static str,
    budget: Option<Duration>,
    run: fn() -> Outcome,
}

fn main() -> ExitCode {
    let secs = |s| Some(Duration::from_secs(s));
    let criteria = [
        Criterion {
            id: 1,
            name: "Cayley round-trips",
            budget: secs(5),
            run: cayley_round_trips,
        },
        Criterion {
            id: 2,
            name: "inverse oracle equivalence",
            budget: secs(10),
            run: inverse_oracle,
        },
        Criterion {
            id: 3,
            name: "truncated Cayley compatibility",
            budget: secs(30),
            run: truncated_cayley_compatibility,
        },
        Criterion {
            id: 4,
            name: "feasible problems interpolated",
            budget: secs(60),
            run: forward_feasibility,
        },
        Criterion {
            id: 5,
            name: "infeasible problems rejected",
            budget: secs(10),
            run: converse_rejection,
        },
        Criterion {
            id: 6,
            name: "positive real part and kernel",
            budget: secs(120),
            run: positive_real_part,
        },
        Criterion {
            id: 7,
            name: "coefficient and Wiener bounds",
            budget: None,
            run: coefficient_bounds,
        },
        Criterion {
            id: 8,
            name: "constrained von Neumann",
            budget: secs(30),
            run: von_neumann,
        },
        Criterion {
            id: 9,
            name: "automorphism suite",
            budget: secs(20),
            run: automorphism_suite,
        },
        Criterion {
            id: 10,
            name: "golden one-point cases",
            budget: None,
            run: golden_cases,
        },
    ];
    let mut failed = 0;
    for crit in &criteria {
        let start = Instant::now();
        let outcome = (crit.run)();
        let elapsed = start.elapsed();
        let over = crit.budget.is_some_and(|b| elapsed > b);
        let (status, detail) = match (&outcome, over) {
            (Ok(msg), false) => ("PASS", msg.clone()),
            (Ok(msg), true) => ("FAIL", format!("{msg}; over budget {:?}", crit.budget.unwrap())),
            (Err(msg), _) => ("FAIL", msg.clone()),
        };
        if status == "FAIL" {
            failed += 1;
        }
        println!(
            "criterion {:>2} {status} [{:>8.3}s] {}: {detail}",
            crit.id,
            elapsed.as_secs_f64(),
            crit.name
        );
    }
    println!("{}/{} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
