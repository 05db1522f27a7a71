//! Experiment runners: orchestrate the library modules and write reports.

use std::fs;
use std::io::Write;
use std::path::Path;

use anyhow::Context;
use serde_json::json;

use shiftlab::autocorr::{acf, log_substitution, theta, DensityProfile};
use shiftlab::bundles;
use shiftlab::hellinger::{kakutani_decide, HellingerConfig};
use shiftlab::measures::InvariantProductMeasure;
use shiftlab::orbits::{empirical_orthogonality_witness, Region};
use shiftlab::orthocheck::{orthogonality_report, OrthoConfig, Summary};
use shiftlab::quad::QuadConfig;
use shiftlab::weights::{classify, WeightsConfig};
use shiftlab::{Error, Status};

use crate::config::ExperimentConfig;

/// Outcome of a runner: the exit code contract is 0 = decided, 1 = error
/// (mapped by main), 2 = nothing decided / nothing produced.
pub enum Outcome {
    Decided,
    Undecided,
}

fn write_json(path: &Path, value: &serde_json::Value) -> anyhow::Result<()> {
    let mut body = serde_json::to_string_pretty(value)?;
    body.push('\n');
    fs::write(path, body).with_context(|| format!("writing {}", path.display()))?;
    println!("wrote {}", path.display());
    Ok(())
}

/// `classify`: the four-way dynamical classification of one spec.
pub fn run_classify(cfg: &ExperimentConfig, out: &Path) -> anyhow::Result<Outcome> {
    let spec = cfg.classify_spec()?;
    let result = classify(spec, cfg.p, cfg.horizon, &WeightsConfig::default())?;
    let all = [
        ("hypercyclic", &result.hypercyclic),
        ("mixing", &result.mixing),
        ("chaotic_fhc", &result.chaotic_fhc),
        (
            "has_nontrivial_invariant_measure",
            &result.has_nontrivial_invariant_measure,
        ),
    ];
    let report = json!({
        "spec": spec,
        "p": cfg.p,
        "horizon": cfg.horizon,
        "verdicts": all
            .iter()
            .map(|(name, v)| json!({"property": name, "status": v.status,
                                     "rule": v.rule, "evidence": v.evidence}))
            .collect::<Vec<_>>(),
    });
    write_json(&out.join("classify.json"), &report)?;
    let undecided_everywhere = all.iter().all(|(_, v)| v.status == Status::Undecided);
    Ok(if undecided_everywhere { Outcome::Undecided } else { Outcome::Decided })
}

/// `compare`: consolidated orthogonality report for a pair, with optional
/// product-measure dichotomy and Monte Carlo witness sections.
pub fn run_compare(cfg: &ExperimentConfig, out: &Path) -> anyhow::Result<Outcome> {
    let (u, v) = cfg.compare_pair()?;
    let ocfg = OrthoConfig {
        d_max: 64,
        m_check: 1000,
        ..OrthoConfig::default()
    };
    let report = orthogonality_report::<f64>(u, v, cfg.p, cfg.window, cfg.horizon, &ocfg)?;

    let mut sections = json!({
        "bundled_example": bundles::match_pair(u, v),
        "pair": [u, v],
        "p": cfg.p,
        "horizon": cfg.horizon,
        "seed": cfg.seed,
        "summary": report.summary,
        "verdicts": report.verdicts,
        "periodic_witness": report.periodic_witness,
    });

    if cfg.module_enabled("kakutani") {
        let horizon = cfg.horizon.min(100_000);
        let m_u = InvariantProductMeasure::new(cfg.marginal_u(), u.clone(), cfg.p, horizon)?;
        let m_v = InvariantProductMeasure::new(cfg.marginal_v(), v.clone(), cfg.p, horizon)?;
        let hcfg = HellingerConfig::default();
        match kakutani_decide(&m_u, &m_v, horizon, &hcfg) {
            Ok(k) => {
                sections["kakutani"] = json!({
                    "verdict": k.verdict,
                    "deficit_sum": k.deficit_sum,
                    "kappa_hat": k.kappa_hat,
                    "certificate": k.deficit_certificate.rule,
                    "marginal_overlap_head": &k.per_n[..k.per_n.len().min(16)],
                });
            }
            Err(e) => sections["kakutani"] = json!({"error": e.to_string()}),
        }
    }

    if cfg.module_enabled("witness") {
        let truncation = cfg.witness.horizon + 16;
        let m_u = InvariantProductMeasure::new(cfg.marginal_u(), u.clone(), cfg.p, truncation)?;
        let m_v = InvariantProductMeasure::new(cfg.marginal_v(), v.clone(), cfg.p, truncation)?;
        let region = Region::Ball {
            center: vec![num_complex_one(cfg.witness.center0)],
            radius: cfg.witness.radius,
        };
        match empirical_orthogonality_witness(
            u,
            v,
            &m_u,
            &m_v,
            &region,
            cfg.mc_samples,
            cfg.witness.horizon,
            cfg.seed,
            cfg.epsilon,
        ) {
            Ok(w) => sections["witness"] = serde_json::to_value(&w)?,
            Err(Error::NoWitnessFound(h)) => {
                sections["witness"] = json!({"no_witness_up_to": h})
            }
            Err(e) => return Err(e.into()),
        }
    }

    write_json(&out.join("compare.json"), &sections)?;
    Ok(if report.summary == Summary::Undecided { Outcome::Undecided } else { Outcome::Decided })
}

fn num_complex_one(re: f64) -> shiftlab::num_complex::Complex<f64> {
    shiftlab::num_complex::Complex::new(re, 0.0)
}

fn profile_of(cfg: &ExperimentConfig) -> anyhow::Result<DensityProfile<f64>> {
    match &cfg.profile {
        Some(m) => Ok(DensityProfile::from_marginal(m)?),
        None => Ok(DensityProfile::uniform(0.0, 1.0)),
    }
}

fn write_csv(path: &Path, header: &str, rows: &[Vec<f64>]) -> anyhow::Result<()> {
    let mut f = fs::File::create(path).with_context(|| format!("creating {}", path.display()))?;
    writeln!(f, "{header}")?;
    for row in rows {
        let line: Vec<String> = row.iter().map(|v| format!("{v}")).collect();
        writeln!(f, "{}", line.join(","))?;
    }
    println!("wrote {}", path.display());
    Ok(())
}

/// `curves`: CSV tables of the autocorrelation, scale-overlap and marginal
/// overlap sequences.
pub fn run_curves(cfg: &ExperimentConfig, out: &Path) -> anyhow::Result<Outcome> {
    let quad = QuadConfig::default();
    let mut produced = false;

    let enabled = |name: &str| cfg.curves.iter().any(|c| c == name);
    if cfg.curves.is_empty() {
        return Ok(Outcome::Undecided);
    }

    if enabled("acf") {
        let f = profile_of(cfg)?;
        let (h_plus, _) = log_substitution(&f);
        let alphas = cfg.alpha_grid.clone().unwrap_or_else(|| {
            (0..=80).map(|i| -2.0 + 0.05 * i as f64).collect()
        });
        let rows: anyhow::Result<Vec<Vec<f64>>> = alphas
            .iter()
            .map(|&a| Ok(vec![a, acf(&h_plus, a, &quad)?]))
            .collect();
        write_csv(&out.join("acf.csv"), "alpha,acf_log_side_plus", &rows?)?;
        produced = true;
    }

    if enabled("theta") {
        let f = profile_of(cfg)?;
        let lambdas = cfg.lambda_grid.clone().unwrap_or_else(|| {
            (1..=40).map(|i| 0.25 * i as f64).collect()
        });
        let rows: anyhow::Result<Vec<Vec<f64>>> = lambdas
            .iter()
            .filter(|l| **l > 0.0)
            .map(|&l| Ok(vec![l, theta(&f, l, &quad)?]))
            .collect();
        write_csv(&out.join("theta.csv"), "lambda,theta", &rows?)?;
        produced = true;
    }

    if enabled("hellinger") {
        let (u, v) = cfg.compare_pair()?;
        let horizon = cfg.horizon.min(100_000);
        let m_u = InvariantProductMeasure::new(cfg.marginal_u(), u.clone(), cfg.p, horizon)?;
        let m_v = InvariantProductMeasure::new(cfg.marginal_v(), v.clone(), cfg.p, horizon)?;
        let k = kakutani_decide(&m_u, &m_v, horizon, &HellingerConfig::default())?;
        let mut partial = 0.0f64;
        let rows: Vec<Vec<f64>> = k
            .per_n
            .iter()
            .enumerate()
            .map(|(n, h)| {
                partial += 1.0 - h;
                vec![n as f64, *h, partial]
            })
            .collect();
        write_csv(
            &out.join("hellinger_per_n.csv"),
            "n,h_n,deficit_partial_sum",
            &rows,
        )?;
        produced = true;
    }

    Ok(if produced { Outcome::Decided } else { Outcome::Undecided })
}

/// `sample`: draw truncated vectors from the invariant product measure of
/// the (first) spec and export them as CSV, one row per vector.
pub fn run_sample(cfg: &ExperimentConfig, out: &Path) -> anyhow::Result<Outcome> {
    let spec = cfg.classify_spec()?;
    let wcfg = WeightsConfig::default();
    let horizon = cfg.horizon.min(100_000);
    let m = InvariantProductMeasure::new(cfg.marginal_u(), spec.clone(), cfg.p, horizon)?;
    let truncation = match cfg.truncation {
        Some(n) => n.min(horizon),
        None => m.default_truncation(1e-12, &wcfg)?,
    };
    let samples = m.sample_many(cfg.count, truncation, cfg.seed)?;

    let complex = spec.field == shiftlab::Field::Complex;
    let header: Vec<String> = (0..=truncation)
        .flat_map(|n| {
            if complex {
                vec![format!("n{n}_re"), format!("n{n}_im")]
            } else {
                vec![format!("n{n}")]
            }
        })
        .collect();
    let rows: Vec<Vec<f64>> = samples
        .iter()
        .map(|x| {
            x.iter()
                .flat_map(|z| if complex { vec![z.re, z.im] } else { vec![z.re] })
                .collect()
        })
        .collect();
    write_csv(&out.join("samples.csv"), &header.join(","), &rows)?;
    Ok(Outcome::Decided)
}
