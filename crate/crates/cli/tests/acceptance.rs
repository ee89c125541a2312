//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any criterion fails.

use std::process::{Command, Output};
use std::time::Instant;

use mec_core::oracle::{coupling_oracle_theta, solve_bernoulli_vertex};
use mec_core::{
    binary_entropy, label_params, saturation_rate, simulate, solve_mecbr, solve_mecbrc, CaseLabel,
    KktCase, RateClassProblem, RateProblem, SimConfig,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;
type Check = fn() -> Outcome;

fn hb(t: f64) -> f64 {
    binary_entropy(t).unwrap()
}

fn grid(start: f64, step: f64, n: usize) -> Vec<f64> {
    (0..n).map(|i| start + step * i as f64).collect()
}

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn theorem2_oracle() -> Outcome {
    let start = Instant::now();
    let qs = grid(0.05, 0.05, 10);
    let mut worst: f64 = 0.0;
    let mut points = 0;
    for &qx in &qs {
        for &qy in &qs {
            for r in grid(0.0, 0.1, 11) {
                let closed =
                    solve_mecbr(&RateProblem::new(qx, qy, r).map_err(|e| e.to_string())?).value;
                let vertex = solve_bernoulli_vertex(qx, qy, r, None)
                    .map_err(|e| e.to_string())?
                    .value;
                let d = (closed - vertex).abs();
                ensure(d <= 1e-9, || {
                    format!("({qx}, {qy}, {r}): |{closed} - {vertex}| = {d:e}")
                })?;
                worst = worst.max(d);
                points += 1;
            }
        }
    }
    let secs = start.elapsed().as_secs_f64();
    ensure(points == 1100, || format!("{points} points"))?;
    ensure(secs < 10.0, || format!("took {secs:.2}s"))?;
    Ok(format!("{points} points, max diff {worst:.1e}, {secs:.2}s"))
}

fn theorem3_oracle() -> Outcome {
    let start = Instant::now();
    let qs = grid(0.1, 0.1, 5);
    let (mut feasible, mut infeasible, mut worst) = (0, 0, 0.0f64);
    for &qx in &qs {
        for &qy in &qs {
            for qs1 in [0.01, 0.1, 0.3, 0.49] {
                for r in grid(0.0, 0.2, 6) {
                    for c in [hb(qs1) + 0.01, 0.5, 0.9, 1.5] {
                        let p =
                            RateClassProblem::new(qx, qy, qs1, r, c).map_err(|e| e.to_string())?;
                        let at = || format!("({qx}, {qy}, {qs1}, {r}, {c})");
                        match (
                            solve_mecbrc(&p),
                            solve_bernoulli_vertex(qx, qy, r, Some((qs1, c))),
                        ) {
                            (Ok(a), Ok(b)) => {
                                let d = (a.value - b.value).abs();
                                ensure(d <= 1e-8, || format!("{}: diff {d:e}", at()))?;
                                worst = worst.max(d);
                                feasible += 1;
                            }
                            (Err(a), Err(b)) if a.is_infeasible() && b.is_infeasible() => {
                                infeasible += 1
                            }
                            (a, b) => {
                                return Err(format!(
                                    "{}: verdicts {:?} vs {:?}",
                                    at(),
                                    a.err(),
                                    b.err()
                                ))
                            }
                        }
                    }
                }
            }
        }
    }
    let secs = start.elapsed().as_secs_f64();
    ensure(secs < 60.0, || format!("took {secs:.2}s"))?;
    Ok(format!(
        "{feasible} feasible (max diff {worst:.1e}), {infeasible} infeasible agree, {secs:.2}s"
    ))
}

fn fig3_shape() -> Outcome {
    let rates: Vec<f64> = (0..101)
        .map(|i| if i == 100 { 1.0 } else { i as f64 / 100.0 })
        .collect();
    let values: Vec<f64> = rates
        .iter()
        .map(|&r| solve_mecbr(&RateProblem::new(0.2, 0.3, r).unwrap()).value)
        .collect();
    ensure(values[0] == 0.0, || {
        format!("value at R=0 is {}", values[0])
    })?;
    for w in values.windows(2) {
        ensure(w[1] >= w[0] - 1e-12, || {
            format!("decrease {} -> {}", w[0], w[1])
        })?;
    }
    let sat = saturation_rate(0.2, 0.3);
    let plateau = hb(0.3) - 0.8 * hb(0.125);
    let beyond: Vec<f64> = rates
        .iter()
        .zip(&values)
        .filter(|(r, _)| **r >= sat)
        .map(|(_, v)| *v)
        .collect();
    ensure(!beyond.is_empty(), || "no points beyond saturation".into())?;
    for &v in &beyond {
        ensure((v - beyond[0]).abs() <= 1e-10, || {
            format!("plateau not flat: {v} vs {}", beyond[0])
        })?;
        ensure((v - plateau).abs() <= 1e-10, || {
            format!("plateau {v} vs formula {plateau}")
        })?;
    }
    let (theta, grid_value) =
        coupling_oracle_theta(0.2, 0.3, 100_000).map_err(|e| e.to_string())?;
    let step = 0.2 / 99_999.0;
    ensure((theta - 0.2).abs() <= step, || format!("theta* = {theta}"))?;
    ensure((grid_value - plateau).abs() <= 1e-10, || {
        format!("theta grid {grid_value} vs {plateau}")
    })?;
    Ok(format!(
        "saturation R = {sat:.6}, {} plateau points at {plateau:.12}",
        beyond.len()
    ))
}

fn fig5_shape() -> Outcome {
    let (qx, qy, qs1, c) = (0.3, 0.4, 0.01, 0.4);
    let lp = label_params(&RateClassProblem::new(qx, qy, qs1, 1.0, c).unwrap());
    let crossover = hb(qx) * (lp.hb_m - c) / (lp.hb_m - lp.hb_qs1);
    let rates: Vec<f64> = (0..101)
        .map(|i| if i == 100 { 1.0 } else { i as f64 / 100.0 })
        .collect();
    let results: Vec<_> = rates
        .iter()
        .map(|&r| solve_mecbrc(&RateClassProblem::new(qx, qy, qs1, r, c).unwrap()))
        .collect();
    let mut problems = Vec::new();
    let feasible: Vec<(f64, f64, CaseLabel)> = rates
        .iter()
        .zip(&results)
        .filter_map(|(&r, res)| res.as_ref().ok().map(|s| (r, s.value, s.case_label)))
        .collect();
    for w in feasible.windows(2) {
        if w[1].1 < w[0].1 - 1e-12 {
            problems.push(format!("decrease at R={}", w[1].0));
        }
    }
    let infeasible_small = rates
        .iter()
        .zip(&results)
        .filter(|(&r, res)| r < crossover && res.is_err())
        .count();
    if infeasible_small > 0 {
        problems.push(format!(
            "{infeasible_small} points below the crossover are infeasible, so none is rate-active"
        ));
    }
    let rate_active =
        |l: &CaseLabel| matches!(l, CaseLabel::Kkt(_, k) if k.rate_active() && !k.class_active());
    let class_active = |l: &CaseLabel| matches!(l, CaseLabel::Kkt(_, k) if k.class_active());
    if !feasible
        .iter()
        .filter(|(r, ..)| *r < crossover)
        .all(|(_, _, l)| rate_active(l))
    {
        problems.push("small-R points are not rate-active".into());
    }
    let after: Vec<_> = feasible.iter().filter(|(r, ..)| *r > crossover).collect();
    let not_class = after.iter().filter(|(_, _, l)| !class_active(l)).count();
    if not_class > 0 {
        let labels: std::collections::BTreeSet<String> =
            after.iter().map(|(_, _, l)| l.to_string()).collect();
        problems.push(format!(
            "{not_class}/{} points beyond the crossover are not classification-active ({labels:?})",
            after.len()
        ));
    }
    if let (Some(first), Some(last)) = (after.first(), after.last()) {
        if (last.1 - first.1).abs() > 1e-10 {
            problems.push(format!(
                "value not constant beyond the crossover: {:.6} at R={} to {:.6} at R={}",
                first.1, first.0, last.1, last.0
            ));
        }
    }
    let plateau_from = feasible
        .iter()
        .find(|(_, _, l)| *l == CaseLabel::Kkt(mec_core::Part::I, KktCase::Case4))
        .map(|f| f.0);
    let summary = format!(
        "crossover R = {crossover:.4}; feasible for R >= {:.2}; flat from R = {:?}",
        feasible.first().map_or(f64::NAN, |f| f.0),
        plateau_from
    );
    if problems.is_empty() {
        Ok(summary)
    } else {
        Err(format!("{summary}; {}", problems.join("; ")))
    }
}

fn feasibility() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let (qx, qy, r) = (0.3, 0.4, 10.0);
    for i in 0..1000 {
        let qs1 = rng.gen_range(0.001..0.5);
        let floor = hb(qs1);
        let c = rng.gen_range(0.0..floor - 1e-6);
        let p = RateClassProblem::new(qx, qy, qs1, r, c).map_err(|e| e.to_string())?;
        match solve_mecbrc(&p) {
            Err(e) if e.is_infeasible() => {}
            other => return Err(format!("draw {i}: C = {c} < H_b({qs1}) gave {other:?}")),
        }
        let c = floor + rng.gen_range(0.0..1.0);
        let p = RateClassProblem::new(qx, qy, qs1, r, c).map_err(|e| e.to_string())?;
        solve_mecbrc(&p).map_err(|e| format!("draw {i}: C = {c} >= H_b({qs1}) raised {e}"))?;
    }
    Ok(format!(
        "1000 draws each side at q_X = {qx}, q_Y = {qy}, R = {r}"
    ))
}

fn lemma() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut equalities = 0;
    for i in 0..10_000 {
        let qx: f64 = rng.gen_range(0.001..0.999);
        let qs1: f64 = if i % 100 == 0 {
            0.5
        } else {
            rng.gen_range(0.0..=1.0)
        };
        let lp = label_params(&RateClassProblem {
            q_x: qx,
            q_y: 0.3,
            q_s1: qs1,
            rate: 1.0,
            cclass: 1.0,
        });
        let gap = lp.hb_m - lp.hb_qs1;
        ensure(gap >= -1e-12, || {
            format!("H_b(m) < H_b(q_S1) at ({qx}, {qs1})")
        })?;
        if gap.abs() <= 1e-12 {
            ensure((qs1 - 0.5).abs() < 1e-9, || {
                format!("equality away from 1/2 at ({qx}, {qs1})")
            })?;
            equalities += 1;
        }
    }
    Ok(format!(
        "10000 draws, {equalities} equalities, all at q_S1 = 1/2"
    ))
}

fn reduction() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut worst = 0.0f64;
    for _ in 0..100 {
        let (qx, qy): (f64, f64) = (rng.gen_range(0.01..=0.5), rng.gen_range(0.01..=0.5));
        let (qs1, r): (f64, f64) = (rng.gen_range(0.0..0.5), rng.gen_range(0.0..1.2));
        let p = RateClassProblem::new(qx, qy, qs1, r, 2.0).map_err(|e| e.to_string())?;
        let a = solve_mecbrc(&p).map_err(|e| e.to_string())?.value;
        let b = solve_mecbr(&p.rate_problem()).value;
        let d = (a - b).abs();
        ensure(d <= 1e-10, || {
            format!("({qx}, {qy}, {qs1}, {r}): diff {d:e}")
        })?;
        worst = worst.max(d);
    }
    Ok(format!("100 problems, max diff {worst:.1e}"))
}

fn monte_carlo() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut runs = 0;
    let mut worst_mi = 0.0f64;
    while runs < 20 {
        let (qx, qy) = (rng.gen_range(0.05..=0.5), rng.gen_range(0.05..=0.5));
        let r = rng.gen_range(0.05..1.0);
        let (res, class) = if runs % 2 == 0 {
            (solve_mecbr(&RateProblem::new(qx, qy, r).unwrap()), None)
        } else {
            let qs1 = rng.gen_range(0.01..0.3);
            let c = hb(qs1) + rng.gen_range(0.05..0.6);
            match solve_mecbrc(&RateClassProblem::new(qx, qy, qs1, r, c).unwrap()) {
                Ok(res) => (res, Some((qs1, c))),
                Err(_) => continue,
            }
        };
        let cfg = SimConfig::new(
            qx,
            class.map(|c| c.0),
            res.mixture,
            1_000_000,
            1000 + runs as u64,
        )
        .map_err(|e| e.to_string())?;
        let rep = simulate(&cfg);
        let at = format!("run {runs} ({qx:.3}, {qy:.3}, R={r:.3}, class={class:?})");
        ensure((rep.q_y_hat - qy).abs() < 0.002, || {
            format!("{at}: q_y_hat {}", rep.q_y_hat)
        })?;
        let d = (rep.mi_xy - res.value).abs();
        ensure(d < 0.01, || {
            format!("{at}: I_hat {} vs {}", rep.mi_xy, res.value)
        })?;
        ensure(rep.h_y_given_xu == 0.0, || {
            format!("{at}: H(Y|X,U) = {}", rep.h_y_given_xu)
        })?;
        if let Some((_, c)) = class {
            let h = rep.h_s_given_yu.unwrap();
            ensure(h <= c + 0.01, || format!("{at}: H(S|Y,U) = {h} > C + 0.01"))?;
        }
        worst_mi = worst_mi.max(d);
        runs += 1;
    }
    let secs = start.elapsed().as_secs_f64();
    ensure(secs < 30.0, || format!("took {secs:.2}s"))?;
    Ok(format!(
        "20 mixtures x 1e6 samples, max |I_hat - I| {worst_mi:.4}, {secs:.2}s"
    ))
}

fn mec(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mec"))
        .args(args)
        .output()
        .expect("run mec")
}

fn data_rows(out: &Output) -> Vec<String> {
    String::from_utf8_lossy(&out.stdout)
        .lines()
        .filter(|l| !l.starts_with('#'))
        .map(str::to_string)
        .collect()
}

fn cli_contract() -> Outcome {
    const HEADER: &str = "qx,qy,qs1,rate,cclass,value_bits,p1,p2,p3,p4,case_label,alpha";
    let cases: [(&[&str], i32); 5] = [
        (&["solve", "--qx", "0.2", "--qy", "0.3", "--rate", "0.5"], 0),
        (&["solve", "--qx", "0", "--qy", "0.3", "--rate", "1"], 1),
        (
            &[
                "solve", "--qx", "0.3", "--qy", "0.4", "--rate", "0.5", "--qs1", "0.1", "--cclass",
                "0.1",
            ],
            2,
        ),
        (
            &["oracle", "--qx", "0.2", "--qy", "0.3", "--rate", "0.5"],
            0,
        ),
        (
            &[
                "oracle",
                "--qx",
                "0.2",
                "--qy",
                "0.3",
                "--rate",
                "0.5",
                "--perturb",
                "1e-6",
            ],
            4,
        ),
    ];
    for (args, want) in cases {
        let out = mec(args);
        let got = out.status.code().unwrap_or(-1);
        ensure(got == want, || {
            format!("{args:?}: exit {got}, expected {want}")
        })?;
    }
    let infeasible = mec(cases[2].0);
    ensure(
        String::from_utf8_lossy(&infeasible.stderr).contains("H_b(q_S1)"),
        || "infeasibility message does not name H_b(q_S1)".into(),
    )?;
    let solve = mec(cases[0].0);
    let rows = data_rows(&solve);
    ensure(rows.first().map(String::as_str) == Some(HEADER), || {
        format!("header {:?}", rows.first())
    })?;

    let sweep: &[&str] = &[
        "sweep", "--var", "rate", "--from", "0", "--to", "1", "--steps", "101", "--qx", "0.2",
        "--qy", "0.3",
    ];
    let (a, b) = (mec(sweep), mec(sweep));
    ensure(a.status.success(), || "sweep failed".into())?;
    let rows = data_rows(&a);
    ensure(rows.len() == 102 && rows[0] == HEADER, || {
        format!("sweep gave {} lines", rows.len())
    })?;
    ensure(rows == data_rows(&b), || {
        "sweep rows differ between runs".into()
    })?;
    let sim: &[&str] = &[
        "simulate",
        "--qx",
        "0.2",
        "--qy",
        "0.3",
        "--rate",
        "0.5",
        "--samples",
        "200000",
        "--seed",
        "7",
    ];
    ensure(data_rows(&mec(sim)) == data_rows(&mec(sim)), || {
        "simulate rows differ between runs".into()
    })?;
    Ok("exit codes 0/1/2/4, header, reproducible sweep and simulate rows".into())
}

fn main() {
    let criteria: [(&str, Check); 9] = [
        ("1 oracle equivalence (rate)", theorem2_oracle),
        (
            "2 oracle equivalence (rate + classification)",
            theorem3_oracle,
        ),
        ("3 rate sweep shape", fig3_shape),
        ("4 rate sweep shape with classification", fig5_shape),
        ("5 feasibility", feasibility),
        ("6 label entropy lemma", lemma),
        ("7 constraint reduction", reduction),
        ("8 Monte Carlo verification", monte_carlo),
        ("9 CLI contract", cli_contract),
    ];
    let mut failed = 0;
    for (name, check) in criteria {
        match check() {
            Ok(detail) => println!("PASS criterion {name}: {detail}"),
            Err(detail) => {
                failed += 1;
                println!("FAIL criterion {name}: {detail}");
            }
        }
    }
    println!("{} of 9 criteria passed", 9 - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
