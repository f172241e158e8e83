use std::fs;
use std::path::Path;
use std::sync::Arc;

use bohr_ap::config::SessionConfig;
use bohr_ap::io::{self, CoeffFile, Sig17};
use bohr_ap::random::{random_trigpoly, seeded};
use bohr_ap::wiener::{self, subspace_from_sigma};
use bohr_ap::{bohr_inverse, bohr_transform, Basis, Error, GridSpec, TrigPoly};
use num_complex::Complex64;
use serde::Serialize;

use crate::{Cli, Command, GridOverride, LemmaArgs, WienerCommand};

/// Largest discrepancy accepted by `lemma-check`.
const LEMMA_THRESHOLD: f64 = 1e-10;

pub struct Failure {
    pub code: u8,
    pub message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Parse(_)
            | Error::InvalidRational(_)
            | Error::InvalidBasis(_)
            | Error::InvalidTolerance(_) => 2,
            Error::IncompatibleBases | Error::SpecMismatch => 3,
            Error::NotInModule { .. }
            | Error::OutsideLattice
            | Error::Aliasing { .. }
            | Error::InvalidGrid(_)
            | Error::NotACharacter(_) => 4,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

fn input_error(message: String) -> Failure {
    Failure { code: 2, message }
}

type Outcome = Result<u8, Failure>;

/// A command result: canonical JSON plus a short human rendering.
struct Report {
    json: String,
    summary: String,
    /// Data-producing commands print their JSON even without `--json`.
    data: bool,
    code: u8,
}

pub fn run(cli: &Cli) -> Outcome {
    let config = load_config(cli)?;
    let report = match &cli.command {
        Command::Spectrum { file } => spectrum(&config, file)?,
        Command::Mul { f, g } => mul(&config, f, g)?,
        Command::Mean { file, r } => mean(&config, file, r)?,
        Command::Transform { file } => transform(&config, file)?,
        Command::LemmaCheck(args) => lemma_check(&config, args)?,
        Command::Wiener(w) => wiener_cmd(&config, w)?,
    };
    emit(cli, &report)?;
    Ok(report.code)
}

fn emit(cli: &Cli, report: &Report) -> Result<(), Failure> {
    if let Some(path) = &cli.out {
        fs::write(path, &report.json)
            .map_err(|e| input_error(format!("cannot write {}: {e}", path.display())))?;
        if cli.json {
            print!("{}", report.json);
        } else if !report.data {
            print!("{}", report.summary);
        }
    } else if cli.json || report.data {
        print!("{}", report.json);
    } else {
        print!("{}", report.summary);
    }
    Ok(())
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path)
        .map_err(|e| input_error(format!("cannot read {}: {e}", path.display())))
}

fn load_config(cli: &Cli) -> Result<SessionConfig, Failure> {
    let path = cli
        .config
        .clone()
        .or_else(|| std::env::var_os("APW_CONFIG").map(Into::into));
    match path {
        Some(p) => SessionConfig::parse(&read(&p)?).map_err(|e| {
            let mut f = Failure::from(e);
            f.message = format!("{}: {}", p.display(), f.message);
            f
        }),
        None => Ok(SessionConfig::default()),
    }
}

fn load_coefficients(config: &SessionConfig, path: &Path) -> Result<CoeffFile, Failure> {
    let file = io::parse_coefficients(&read(path)?).map_err(|e| {
        let mut f = Failure::from(e);
        f.message = format!("{}: {}", path.display(), f.message);
        f
    })?;
    if let Some(basis) = &config.basis {
        if **basis != **file.basis() {
            return Err(Failure {
                code: 3,
                message: format!(
                    "{}: incompatible bases (file basis differs from the session basis)",
                    path.display()
                ),
            });
        }
    }
    Ok(file)
}

fn load_poly(config: &SessionConfig, path: &Path) -> Result<TrigPoly, Failure> {
    match load_coefficients(config, path)? {
        CoeffFile::Poly(p) => Ok(p.pruned(config.tolerances.prune)),
        CoeffFile::Seq(_) => Err(input_error(format!(
            "{}: expected kind \"trigpoly\", found \"sequence\"",
            path.display()
        ))),
    }
}

fn complex_text(c: Complex64) -> String {
    format!("{} {}i", Sig17::render(c.re), Sig17::render(c.im))
}

#[derive(Serialize)]
struct SpectrumLine {
    freq: bohr_ap::Freq,
    value: Sig17,
    re: Sig17,
    im: Sig17,
}

#[derive(Serialize)]
struct SpectrumOut {
    kind: &'static str,
    source: io::CoeffKind,
    spectrum: Vec<SpectrumLine>,
}

fn spectrum(config: &SessionConfig, path: &Path) -> Result<Report, Failure> {
    let file = load_coefficients(config, path)?;
    let basis = file.basis().clone();
    let entries: Vec<(bohr_ap::Freq, Complex64)> = match &file {
        CoeffFile::Poly(p) => p.terms().map(|(k, c)| (k.clone(), *c)).collect(),
        CoeffFile::Seq(s) => s.entries().map(|(k, c)| (k.clone(), *c)).collect(),
    };
    let mut summary = format!("spectrum: {} frequencies\n", entries.len());
    for (k, c) in &entries {
        summary.push_str(&format!(
            "  {k}  ~ {}  coeff {}\n",
            Sig17::render(k.value(&basis)),
            complex_text(*c)
        ));
    }
    let out = SpectrumOut {
        kind: "spectrum",
        source: file.kind(),
        spectrum: entries
            .into_iter()
            .map(|(k, c)| SpectrumLine {
                value: Sig17(k.value(&basis)),
                freq: k,
                re: Sig17(c.re),
                im: Sig17(c.im),
            })
            .collect(),
    };
    Ok(Report {
        json: io::to_canonical_json(&out),
        summary,
        data: false,
        code: 0,
    })
}

fn mul(config: &SessionConfig, f: &Path, g: &Path) -> Result<Report, Failure> {
    let (f, g) = (load_poly(config, f)?, load_poly(config, g)?);
    let product = f.mul(&g)?.pruned(config.tolerances.prune);
    let json = io::trigpoly_to_json(&product);
    Ok(Report {
        summary: json.clone(),
        json,
        data: true,
        code: 0,
    })
}

#[derive(Serialize)]
struct MeanWindow {
    #[serde(rename = "R")]
    r: Sig17,
    re: Sig17,
    im: Sig17,
    error: Sig17,
    bound: Sig17,
}

#[derive(Serialize)]
struct MeanOut {
    kind: &'static str,
    exact: [Sig17; 2],
    numeric: Vec<MeanWindow>,
}

fn mean(config: &SessionConfig, path: &Path, windows: &[f64]) -> Result<Report, Failure> {
    if let Some(r) = windows.iter().find(|r| !(**r > 0.0 && r.is_finite())) {
        return Err(input_error(format!(
            "window half-width R must be positive and finite, got {r}"
        )));
    }
    let f = load_poly(config, path)?;
    let exact = f.mean();
    let mut summary = format!("exact mean: {}\n", complex_text(exact));
    let numeric: Vec<MeanWindow> = windows
        .iter()
        .map(|&r| {
            let m = f.mean_numeric(r);
            let error = (m - exact).norm();
            let bound = f.mean_numeric_bound(r);
            summary.push_str(&format!(
                "  R = {}: {}  |error| {} <= bound {}\n",
                Sig17::render(r),
                complex_text(m),
                Sig17::render(error),
                Sig17::render(bound)
            ));
            MeanWindow {
                r: Sig17(r),
                re: Sig17(m.re),
                im: Sig17(m.im),
                error: Sig17(error),
                bound: Sig17(bound),
            }
        })
        .collect();
    let out = MeanOut {
        kind: "mean",
        exact: [Sig17(exact.re), Sig17(exact.im)],
        numeric,
    };
    Ok(Report {
        json: io::to_canonical_json(&out),
        summary,
        data: false,
        code: 0,
    })
}

fn transform(config: &SessionConfig, path: &Path) -> Result<Report, Failure> {
    let json = match load_coefficients(config, path)? {
        CoeffFile::Seq(s) => io::trigpoly_to_json(&bohr_transform(&s)),
        CoeffFile::Poly(p) => io::sequence_to_json(&bohr_inverse(&p)),
    };
    Ok(Report {
        summary: json.clone(),
        json,
        data: true,
        code: 0,
    })
}

#[derive(Serialize)]
struct LemmaOut {
    kind: &'static str,
    pairs: usize,
    max_discrepancy: Sig17,
    threshold: Sig17,
    pass: bool,
}

/// Seeded random pairs: up to 50 terms each, denominators up to 12.
fn random_pairs(config: &SessionConfig, count: usize) -> Vec<(TrigPoly, TrigPoly)> {
    let basis = config.basis.clone().unwrap_or_else(|| {
        Arc::new(
            Basis::from_pairs([("1", 1.0), ("sqrt2", std::f64::consts::SQRT_2)])
                .expect("valid basis"),
        )
    });
    let mut rng = seeded(config.seed);
    (0..count)
        .map(|_| {
            let f = random_trigpoly(&mut rng, &basis, 50, 12, 4);
            let g = random_trigpoly(&mut rng, &basis, 50, 12, 4);
            (f, g)
        })
        .collect()
}

fn lemma_check(config: &SessionConfig, args: &LemmaArgs) -> Result<Report, Failure> {
    let pairs = match (&args.random, &args.f, &args.g) {
        (Some(count), _, _) => random_pairs(config, *count),
        (None, Some(f), Some(g)) => vec![(load_poly(config, f)?, load_poly(config, g)?)],
        _ => {
            return Err(input_error(
                "lemma-check needs two files or --random".into(),
            ))
        }
    };
    let mut worst: f64 = 0.0;
    for (f, g) in &pairs {
        let lhs = bohr_inverse(&f.mul(g)?);
        let rhs = bohr_inverse(f).convolve(&bohr_inverse(g))?;
        worst = worst.max(lhs.max_distance(&rhs)?);
    }
    let pass = worst <= LEMMA_THRESHOLD;
    let summary = format!(
        "lemma check over {} pair(s): max discrepancy {} ({} threshold {})\n",
        pairs.len(),
        Sig17::render(worst),
        if pass { "within" } else { "EXCEEDS" },
        Sig17::render(LEMMA_THRESHOLD)
    );
    let out = LemmaOut {
        kind: "lemma-check",
        pairs: pairs.len(),
        max_discrepancy: Sig17(worst),
        threshold: Sig17(LEMMA_THRESHOLD),
        pass,
    };
    Ok(Report {
        json: io::to_canonical_json(&out),
        summary,
        data: false,
        code: if pass { 0 } else { 1 },
    })
}

fn resolve_grid(config: &SessionConfig, grid: &GridOverride) -> Result<GridSpec, Failure> {
    let d = grid.d.unwrap_or(config.grid.d());
    let n = grid.n.unwrap_or(config.grid.n());
    Ok(GridSpec::new(d, n)?)
}

fn sigma_text(sigma: &[Vec<usize>]) -> String {
    serde_json::to_string(sigma).expect("plain integers")
}

fn wiener_cmd(config: &SessionConfig, cmd: &WienerCommand) -> Result<Report, Failure> {
    let wc = config.wiener();
    match cmd {
        WienerCommand::Analyze { file } => {
            let parsed = io::parse_grid_vectors(&read(file)?)?;
            let (spec, vectors) = parsed.into_functions(config.grid)?;
            let report = wiener::analyze(spec, &vectors, &wc)?;
            let mut summary = format!(
                "grid: d = {}, N = {}\ninvariant: {} (max residual {})\nindicator deviation: {}\n",
                spec.d(),
                spec.n(),
                report.invariant,
                Sig17::render(report.max_invariance_residual),
                Sig17::render(report.indicator_deviation)
            );
            match (&report.sigma, report.characterization_residual) {
                (Some(sigma), Some(res)) => summary.push_str(&format!(
                    "sigma: {} (measure {})\ncharacterization residual: {}\n",
                    sigma_text(&sigma.multi_indices()),
                    Sig17::render(sigma.measure()),
                    Sig17::render(res)
                )),
                _ => summary.push_str("sigma: none\n"),
            }
            Ok(Report {
                json: io::wiener_report_to_json(&report),
                summary,
                data: false,
                code: 0,
            })
        }
        WienerCommand::Generate { sigma, grid } => {
            let spec = resolve_grid(config, grid)?;
            let sigma = io::parse_sigma(sigma, spec)?;
            let space = subspace_from_sigma(&sigma);
            let json = io::grid_vectors_to_json(spec, space.basis());
            Ok(Report {
                summary: json.clone(),
                json,
                data: true,
                code: 0,
            })
        }
        WienerCommand::Sweep { grid } => {
            let spec = resolve_grid(config, grid)?;
            let rows = wiener::sweep(spec, &wc)?;
            let passed = rows.iter().filter(|r| r.pass).count();
            let mut summary = String::new();
            for row in &rows {
                summary.push_str(&format!(
                    "{} sigma={} residual={}\n",
                    if row.pass { "pass" } else { "FAIL" },
                    sigma_text(&row.sigma.multi_indices()),
                    Sig17::render(row.max_invariance_residual)
                ));
            }
            summary.push_str(&format!(
                "grid d = {}, N = {}: {passed}/{} subsets pass\n",
                spec.d(),
                spec.n(),
                rows.len()
            ));
            let code = if passed == rows.len() { 0 } else { 1 };
            Ok(Report {
                json: io::sweep_to_json(spec, &rows),
                summary,
                data: false,
                code,
            })
        }
    }
}
