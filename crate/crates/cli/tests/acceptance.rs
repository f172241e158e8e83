//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! nonzero if any criterion fails.

use std::collections::BTreeSet;
use std::path::Path;
use std::process::Command;
use std::sync::Arc;
use std::time::{Duration, Instant};

use bohr_ap::appoly::harmonic_exponential_sum;
use bohr_ap::random::{
    random_freq, random_grid_function, random_grid_spectrum, random_sigma, random_trigpoly, seeded,
};
use bohr_ap::wiener::{self, verify_characterization};
use bohr_ap::{
    bohr_inverse, Basis, Freq, GridFunction, GridSpec, SigmaSet, Subspace, WienerConfig,
};
use rand::Rng;
use serde_json::Value;

const APW: &str = env!("CARGO_BIN_EXE_apw");

type Criterion = (&'static str, fn() -> Outcome);

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        pass,
        detail: detail.into(),
    }
}

fn two_basis() -> Arc<Basis> {
    Arc::new(Basis::from_pairs([("1", 1.0), ("sqrt2", std::f64::consts::SQRT_2)]).unwrap())
}

fn within(elapsed: Duration, limit_secs: f64) -> bool {
    elapsed.as_secs_f64() < limit_secs
}

fn exhaustive_sweep() -> Outcome {
    let grids = [
        (1, 2),
        (1, 3),
        (1, 4),
        (1, 5),
        (1, 6),
        (1, 7),
        (1, 8),
        (2, 2),
    ];
    let start = Instant::now();
    let mut failures = Vec::new();
    let mut subsets = 0;
    for (d, n) in grids {
        let out = Command::new(APW)
            .args([
                "--json",
                "wiener",
                "sweep",
                "--d",
                &d.to_string(),
                "--n",
                &n.to_string(),
            ])
            .output()
            .expect("run apw");
        let report: Value = serde_json::from_slice(&out.stdout).expect("sweep json");
        let total = report["subsets"].as_u64().unwrap();
        let passed = report["passed"].as_u64().unwrap();
        let rows_ok = report["rows"].as_array().unwrap().iter().all(|row| {
            row["invariant"] == true
                && row["recovered"] == true
                && row["unique"] == true
                && row["max_invariance_residual"].as_f64().unwrap() <= 1e-9
        });
        subsets += total;
        if !out.status.success() || passed != total || total != 1 << (n as u64).pow(d) || !rows_ok {
            failures.push(format!("d={d} N={n}: {passed}/{total}"));
        }
    }
    let elapsed = start.elapsed();
    let pass = failures.is_empty() && within(elapsed, 10.0);
    outcome(
        pass,
        format!(
            "{subsets} subsets on 8 grids, failures {failures:?}, {:.2?} (limit 10 s)",
            elapsed
        ),
    )
}

fn soundness() -> Outcome {
    let spec = GridSpec::new(1, 4).unwrap();
    let config = WienerConfig::default();
    let candidates: Vec<SigmaSet> = (0..16u64).map(|m| SigmaSet::from_mask(spec, m)).collect();
    let mut rng = seeded(2);
    let start = Instant::now();
    let (mut accepted, mut false_accept) = (0, 0);
    for _ in 0..100 {
        let rank = rng.random_range(0..=4);
        let vectors: Vec<GridFunction> = (0..rank)
            .map(|_| random_grid_function(&mut rng, spec))
            .collect();
        let space = Subspace::span(spec, &vectors, config.rank_tol).unwrap();
        let report = wiener::analyze_subspace(&space, &config).unwrap();
        if !report.invariant {
            continue;
        }
        accepted += 1;
        let matches = candidates
            .iter()
            .filter(|s| verify_characterization(&space, s).unwrap() <= 1e-9)
            .count();
        let reported_ok = report.characterization_residual.is_some_and(|r| r <= 1e-9);
        if matches != 1 || !reported_ok {
            false_accept += 1;
        }
    }
    let elapsed = start.elapsed();
    outcome(
        false_accept == 0 && within(elapsed, 5.0),
        format!(
            "{accepted} of 100 accepted, {false_accept} false acceptances, {:.2?} (limit 5 s)",
            elapsed
        ),
    )
}

fn convolution_lemma() -> Outcome {
    let basis = two_basis();
    let mut rng = seeded(3);
    let start = Instant::now();
    let mut worst: f64 = 0.0;
    let mut largest = 0;
    for _ in 0..200 {
        let f = random_trigpoly(&mut rng, &basis, 50, 12, 3);
        let g = random_trigpoly(&mut rng, &basis, 50, 12, 3);
        let lhs = bohr_inverse(&f.mul(&g).unwrap());
        let rhs = bohr_inverse(&f).convolve(&bohr_inverse(&g)).unwrap();
        worst = worst.max(lhs.max_distance(&rhs).unwrap());
        largest = largest.max(lhs.len());
    }
    let elapsed = start.elapsed();
    outcome(
        worst <= 1e-10 && within(elapsed, 5.0),
        format!("max discrepancy {worst:.3e} (limit 1e-10), largest product {largest} terms, {:.2?} (limit 5 s)", elapsed),
    )
}

fn intertwining_unitarity() -> Outcome {
    let basis = two_basis();
    let mut rng = seeded(4);
    let mut exact_failures = 0;
    let mut worst: f64 = 0.0;
    for _ in 0..200 {
        let f = random_trigpoly(&mut rng, &basis, 20, 12, 3);
        let g = random_trigpoly(&mut rng, &basis, 20, 12, 3);
        let lambda = random_freq(&mut rng, 2, 12, 5);
        let lhs = bohr_inverse(&f.modulate(&lambda).unwrap());
        let rhs = bohr_inverse(&f).shift(&lambda).unwrap();
        if lhs != rhs {
            exact_failures += 1;
        }
        let ap = f.inner(&g).unwrap();
        let seq = bohr_inverse(&f).inner(&bohr_inverse(&g)).unwrap();
        worst = worst.max((ap - seq).norm());
    }
    outcome(
        exact_failures == 0 && worst <= 1e-12,
        format!("{exact_failures} inexact intertwinings, max |inner difference| {worst:.3e} (limit 1e-12)"),
    )
}

fn mean_value_convergence() -> Outcome {
    let basis = two_basis();
    let mut rng = seeded(5);
    let mut violations = 0;
    let mut worst_ratio: f64 = 0.0;
    for _ in 0..50 {
        let raw = random_trigpoly(&mut rng, &basis, 30, 12, 3);
        let keep: BTreeSet<Freq> = raw
            .spectrum()
            .into_iter()
            .filter(|k| k.is_zero() || k.value(&basis).abs() >= 0.1)
            .collect();
        let f = raw.truncate(&keep);
        let total = f.coeff_l1();
        let exact = f.mean();
        for r in [1e2, 1e3, 1e4] {
            let oracle_bound: f64 = f
                .terms()
                .filter(|(k, _)| !k.is_zero())
                .map(|(k, c)| c.norm() / (k.value(&basis).abs() * r))
                .sum();
            let error = (f.mean_numeric(r) - exact).norm();
            if error > oracle_bound {
                violations += 1;
            }
            if r == 1e4 && total > 0.0 {
                worst_ratio = worst_ratio.max(oracle_bound / total);
            }
        }
    }
    // one-ulp slack at |λ| = 0.1
    let ratio_ok = worst_ratio <= 1e-3 * (1.0 + 4.0 * f64::EPSILON);
    outcome(
        violations == 0 && ratio_ok,
        format!("{violations} bound violations over 150 windows, worst bound/Σ|c| at R=1e4 {worst_ratio:.6e} (limit 1e-3)"),
    )
}

fn corollary() -> Outcome {
    let mut rng = seeded(6);
    let mut worst: f64 = 0.0;
    for _ in 0..100 {
        let d = rng.random_range(1..=2);
        let n = rng.random_range(1..=8);
        let spec = GridSpec::new(d, n).unwrap();
        let sigma = random_sigma(&mut rng, spec);
        let phi = random_grid_spectrum(&mut rng, spec);
        worst = worst.max(wiener::corollary_residual(&sigma, &phi).unwrap());
    }
    outcome(
        worst <= 1e-10,
        format!("max corollary residual {worst:.3e} (limit 1e-10)"),
    )
}

fn divergence_remark() -> Outcome {
    let harmonic: f64 = (1..=1024).map(|k| 1.0 / k as f64).sum();
    let q1024 = harmonic_exponential_sum(1024);
    let q512 = harmonic_exponential_sum(512);
    let at_zero = q1024.eval(0.0);
    let gap = q1024.sub(&q512).unwrap().norm();
    let oracle_gap = (513..=1024)
        .map(|k| 1.0 / (k as f64 * k as f64))
        .sum::<f64>()
        .sqrt();
    let pass = at_zero.re >= 7.0
        && (at_zero.re - harmonic).abs() <= 1e-12
        && at_zero.im.abs() <= 1e-12
        && gap <= 1.0 / 512f64.sqrt()
        && (gap - oracle_gap).abs() <= 1e-12;
    outcome(
        pass,
        format!(
            "q_1024(0) = {:.6} (H_1024 = {harmonic:.6}), |q_1024 - q_512| = {gap:.6} (limit {:.6})",
            at_zero.re,
            1.0 / 512f64.sqrt()
        ),
    )
}

fn haar_properties() -> Outcome {
    let mut grids = Vec::new();
    for d in 1..=4usize {
        for n in 1..=16usize {
            if n.pow(d as u32) <= 16 && (d == 1 || n >= 2) {
                grids.push((d, n));
            }
        }
    }
    let mut failures = Vec::new();
    let mut checked = 0u64;
    for &(d, n) in &grids {
        let spec = GridSpec::new(d, n).unwrap();
        let ones = GridFunction::ones(spec);
        let unit = ones.inner(&ones).unwrap();
        if unit.re != 1.0 || unit.im != 0.0 {
            failures.push(format!("<1,1> = {unit} on d={d} N={n}"));
        }
        let shifts: Vec<Vec<usize>> = (0..spec.size()).map(|f| spec.multi_index(f)).collect();
        for mask in 0..(1u64 << spec.size()) {
            let sigma = SigmaSet::from_mask(spec, mask);
            for by in &shifts {
                checked += 1;
                if sigma.translate(by).measure() != sigma.measure() {
                    failures.push(format!("d={d} N={n} mask={mask:#x} by {by:?}"));
                }
            }
        }
    }
    outcome(
        failures.is_empty(),
        format!(
            "{} grids, {checked} (subset, shift) pairs, failures {failures:?}",
            grids.len()
        ),
    )
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let path = dir.join(name);
    std::fs::write(&path, text).unwrap();
    path.to_str().unwrap().to_owned()
}

fn byte_determinism() -> Outcome {
    let dir = tempfile::tempdir().unwrap();
    let basis = r#"[{"label":"1","value":1.0},{"label":"sqrt2","value":1.4142135623730951}]"#;
    let config = write(
        dir.path(),
        "config.json",
        &format!(r#"{{"basis":{basis},"grid":{{"d":1,"N":6}},"seed":17}}"#),
    );
    let f = write(
        dir.path(),
        "f.json",
        &format!(
            r#"{{"basis":{basis},"terms":[{{"freq":["1/3","0"],"re":0.5,"im":-0.25}},{{"freq":["0","-2/5"],"re":0.1,"im":0.7}},{{"freq":["0","0"],"re":1.0,"im":0.0}}]}}"#
        ),
    );
    let g = write(
        dir.path(),
        "g.json",
        &format!(
            r#"{{"basis":{basis},"kind":"sequence","terms":[{{"freq":["-1/2","1"],"re":0.3,"im":0.3}},{{"freq":["1/3","0"],"re":-0.9,"im":0.0}}]}}"#
        ),
    );
    let basis_poly = write(
        dir.path(),
        "h.json",
        &format!(r#"{{"basis":{basis},"terms":[{{"freq":["1","1"],"re":0.2,"im":0.0}}]}}"#),
    );
    let generated = Command::new(APW)
        .args([
            "--config",
            &config,
            "wiener",
            "generate",
            "--sigma",
            "[[0],[2],[5]]",
        ])
        .output()
        .unwrap();
    let vectors = write(
        dir.path(),
        "v.json",
        std::str::from_utf8(&generated.stdout).unwrap(),
    );
    let commands: Vec<Vec<&str>> = vec![
        vec!["spectrum", &f],
        vec!["--json", "spectrum", &g],
        vec!["mul", &f, &basis_poly],
        vec!["mean", &f, "--R", "100,1000,10000"],
        vec!["--json", "mean", &f],
        vec!["transform", &f],
        vec!["transform", &g],
        vec!["lemma-check", &f, &basis_poly],
        vec!["lemma-check", "--random", "25"],
        vec!["--json", "lemma-check", "--random", "25"],
        vec!["wiener", "analyze", &vectors],
        vec!["--json", "wiener", "analyze", &vectors],
        vec!["wiener", "generate", "--sigma", "[[1],[4]]"],
        vec!["wiener", "sweep", "--n", "4"],
        vec!["--json", "wiener", "sweep", "--d", "2", "--n", "2"],
        vec!["spectrum", "/nonexistent/file.json"],
    ];
    let mut differing = Vec::new();
    for args in &commands {
        let run = || {
            Command::new(APW)
                .arg("--config")
                .arg(&config)
                .args(args)
                .output()
                .unwrap()
        };
        let (a, b) = (run(), run());
        if a.stdout != b.stdout || a.stderr != b.stderr || a.status.code() != b.status.code() {
            differing.push(args.join(" "));
        }
    }
    let out_a = dir.path().join("a.json");
    let out_b = dir.path().join("b.json");
    for out in [&out_a, &out_b] {
        Command::new(APW)
            .args([
                "--config",
                &config,
                "--out",
                out.to_str().unwrap(),
                "lemma-check",
                "--random",
                "10",
            ])
            .output()
            .unwrap();
    }
    if std::fs::read(&out_a).unwrap() != std::fs::read(&out_b).unwrap() {
        differing.push("--out lemma-check --random 10".into());
    }
    outcome(
        differing.is_empty() && generated.status.success(),
        format!(
            "{} command lines run twice, differing {differing:?}",
            commands.len() + 1
        ),
    )
}

fn main() {
    let criteria: [Criterion; 9] = [
        ("exhaustive Wiener sweep", exhaustive_sweep),
        ("soundness on random subspaces", soundness),
        ("convolution lemma", convolution_lemma),
        ("intertwining and unitarity", intertwining_unitarity),
        ("mean-value convergence", mean_value_convergence),
        ("corollary", corollary),
        ("divergence remark", divergence_remark),
        ("Haar properties", haar_properties),
        ("byte-determinism", byte_determinism),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let result = check();
        if !result.pass {
            failed += 1;
        }
        println!(
            "{} [{}] {name}: {}",
            if result.pass { "PASS" } else { "FAIL" },
            i + 1,
            result.detail
        );
    }
    println!(
        "acceptance: {}/{} criteria pass",
        criteria.len() - failed,
        criteria.len()
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
