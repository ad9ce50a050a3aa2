//! `funspace` — command-line front end for the function-space library:
//! rearrangements, weighted Lorentz quasi-norms, doubling classification,
//! moduli of continuity, Besov quasi-norms, uniform-absolute-continuity
//! sweeps, compact-embedding classification, growth envelopes, covering
//! estimates and a deterministic self-test battery.
//!
//! Reports are JSON (CSV for profile/probe tables), embed the originating
//! config and library version, and are byte-identical across runs with the
//! same inputs and seed. Exit codes: 0 success, 2 validation error,
//! 3 resolution/domain error, 4 borderline-inconclusive verdict.

mod selftest;
mod specs;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use funspace_core::{
    besov_quasinorm, classify_embedding, covering_estimate, envelope, envelope_empirical,
    make_family, modulus_profile, rearrangement, uac_check, BoxDomain, Delta2,
    Error, FamilySpec, FunctionNorm, LimitRule, LpSpec, Result, SampledFunction,
};
use serde_json::{json, Value};
use specs::{
    besov_from_json, besov_to_value, exp_value, grid_from_json, lorentz_from_json,
    lorentz_to_value, parse_exp,
};

#[derive(Parser)]
#[command(
    name = "funspace",
    version,
    about = "Function-space quantities and compactness diagnostics on gridded functions"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Non-increasing rearrangement of a grid function (exact step profile)
    Rearrange {
        /// Function JSON file
        #[arg(long)]
        input: PathBuf,
        /// Destination (stdout when omitted)
        #[arg(long)]
        output: Option<PathBuf>,
        /// Emit JSON instead of the default CSV table
        #[arg(long)]
        json: bool,
    },
    /// Weighted Lorentz quasi-norm of a grid function
    Norm {
        #[arg(long)]
        input: PathBuf,
        /// Lorentz spec JSON: {"p", "q", "weight", "omega_measure"}
        #[arg(long)]
        spec: PathBuf,
        #[arg(long)]
        output: Option<PathBuf>,
        /// Per-segment quadrature tolerance override
        #[arg(long)]
        tol_quadrature: Option<f64>,
    },
    /// Doubling classification of the indicator-norm function
    Delta2 {
        #[arg(long)]
        spec: PathBuf,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Modulus of continuity over quarter-octave scales
    Modulus {
        #[arg(long)]
        input: PathBuf,
        /// L_p exponent for the underlying norm (number or "inf")
        #[arg(long, default_value = "1")]
        lp: String,
        #[arg(long)]
        output: Option<PathBuf>,
        /// Emit JSON instead of the default CSV table
        #[arg(long)]
        json: bool,
    },
    /// Besov quasi-norm (L_p part + weighted modulus seminorm)
    BesovNorm {
        #[arg(long)]
        input: PathBuf,
        /// Besov spec JSON: {"s", "p", "q", "n"}
        #[arg(long)]
        spec: PathBuf,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Uniform absolute continuity sweep over a family
    Uac {
        /// Family spec JSON: {"kind", "params"}
        #[arg(long)]
        family: PathBuf,
        /// Grid JSON: {"box", "cells"}
        #[arg(long)]
        grid: PathBuf,
        #[arg(long)]
        spec: PathBuf,
        /// Number of dyadic probes 2^-1 .. 2^-K
        #[arg(long, default_value_t = 6)]
        probes: u32,
        /// Verdict tolerance override (tends-to-zero threshold)
        #[arg(long)]
        tol_verdict: Option<f64>,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Compact-embedding classification (Besov source, Lorentz target)
    Classify {
        #[arg(long)]
        source: PathBuf,
        #[arg(long)]
        target: PathBuf,
        /// Deepest dyadic probe exponent (delta = 2^-4 .. 2^-K)
        #[arg(long, default_value_t = 40)]
        probes: u32,
        #[arg(long)]
        tol_verdict: Option<f64>,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Growth envelope of the unit ball (closed form, optional empirical fit)
    Envelope {
        #[arg(long)]
        source: PathBuf,
        /// Also fit the envelope slope from the spike family
        #[arg(long)]
        empirical: bool,
        /// Grid resolution for the empirical fit
        #[arg(long, default_value_t = 8192)]
        cells: usize,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Greedy epsilon-net covering estimate of a family
    Covering {
        #[arg(long)]
        family: PathBuf,
        #[arg(long)]
        grid: PathBuf,
        /// Lorentz spec JSON for the covering metric (exclusive with --lp)
        #[arg(long)]
        spec: Option<PathBuf>,
        /// L_p exponent for the covering metric (number or "inf")
        #[arg(long)]
        lp: Option<String>,
        #[arg(long)]
        epsilon: f64,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Deterministic self-test battery (exit 0 iff all checks pass)
    Selftest {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        output: Option<PathBuf>,
    },
}

fn main() -> ExitCode {
    if let Ok(threads) = std::env::var("FUNSPACE_THREADS") {
        if let Ok(n) = threads.parse::<usize>() {
            let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
        }
    }
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(match e {
                Error::Resolution(_)
                | Error::Domain(_)
                | Error::Divergent(_)
                | Error::NotApplicable(_) => 3,
                _ => 2,
            })
        }
    }
}

fn read(path: &PathBuf) -> Result<String> {
    Ok(std::fs::read_to_string(path)?)
}

fn emit(output: &Option<PathBuf>, text: &str) -> Result<()> {
    match output {
        Some(path) => {
            std::fs::write(path, text)?;
            println!("wrote {}", path.display());
        }
        None => print!("{text}"),
    }
    Ok(())
}

fn emit_json(output: &Option<PathBuf>, value: &Value) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    emit(output, &text)
}

/// Probe table as JSON rows, rendering infinities as "inf".
fn probe_rows(probes: &[(f64, f64)]) -> Vec<Value> {
    probes
        .iter()
        .map(|&(delta, value)| json!({"delta": delta, "value": exp_value(value)}))
        .collect()
}

fn parse_lp(text: &str) -> Result<f64> {
    let v: Value = match text.parse::<f64>() {
        Ok(x) => json!(x),
        Err(_) => Value::String(text.to_string()),
    };
    parse_exp(&v, "lp")
}

fn verdict_rule(tol_verdict: Option<f64>) -> Result<LimitRule> {
    let mut rule = LimitRule::default();
    if let Some(tol) = tol_verdict {
        if !(1e-14..=1e-1).contains(&tol) {
            return Err(Error::InvalidSpec(format!(
                "verdict tolerance must lie in [1e-14, 1e-1], got {tol}"
            )));
        }
        rule.zero_tol = tol;
    }
    Ok(rule)
}

fn load_family(
    family: &PathBuf,
    grid: &PathBuf,
) -> Result<(FamilySpec, Vec<SampledFunction>)> {
    let fam: FamilySpec = FamilySpec::from_json(&read(family)?)?;
    let (bd, cells) = grid_from_json(&read(grid)?)?;
    let members = make_family(&fam, &bd, &cells)?;
    Ok((fam, members))
}

fn run(command: Command) -> Result<u8> {
    match command {
        Command::Rearrange { input, output, json } => {
            let f = SampledFunction::from_json(&read(&input)?)?;
            let profile = rearrangement(&f);
            if json {
                let report = json!({
                    "version": env!("CARGO_PKG_VERSION"),
                    "config": {"command": "rearrange", "input": input.display().to_string()},
                    "domain": profile.domain(),
                    "breaks": profile.breaks(),
                    "levels": profile.levels(),
                });
                emit_json(&output, &report)?;
            } else {
                emit(&output, &profile.to_csv())?;
            }
            Ok(0)
        }
        Command::Norm {
            input,
            spec,
            output,
            tol_quadrature,
        } => {
            let f = SampledFunction::from_json(&read(&input)?)?;
            let mut lorentz = lorentz_from_json(&read(&spec)?)?;
            if let Some(tol) = tol_quadrature {
                lorentz = lorentz.with_quadrature_tol(tol)?;
            }
            let norm = lorentz.quasinorm(&f)?;
            let report = json!({
                "version": env!("CARGO_PKG_VERSION"),
                "config": {
                    "command": "norm",
                    "input": input.display().to_string(),
                    "tol_quadrature": tol_quadrature,
                },
                "spec": lorentz_to_value(&lorentz),
                "value": norm.value,
                "method": norm.method,
                "est_error": norm.est_error,
            });
            emit_json(&output, &report)?;
            Ok(0)
        }
        Command::Delta2 { spec, output } => {
            let lorentz = lorentz_from_json(&read(&spec)?)?;
            let verdict = lorentz.delta2_classify()?;
            let payload = match &verdict {
                Delta2::Holds { bound, empirical } => json!({
                    "verdict": "holds", "bound": bound, "empirical": empirical,
                }),
                Delta2::Fails { witnesses } => json!({
                    "verdict": "fails",
                    "witnesses": probe_rows(witnesses),
                }),
            };
            let report = json!({
                "version": env!("CARGO_PKG_VERSION"),
                "config": {"command": "delta2"},
                "spec": lorentz_to_value(&lorentz),
                "doubling": payload,
            });
            emit_json(&output, &report)?;
            Ok(0)
        }
        Command::Modulus {
            input,
            lp,
            output,
            json,
        } => {
            let f = SampledFunction::from_json(&read(&input)?)?;
            let p = parse_lp(&lp)?;
            let norm = LpSpec::new(p)?;
            let scales = funspace_core::besov::probe_scales(&f);
            let omegas = modulus_profile(&f, &norm, &scales)?;
            if json {
                let rows: Vec<Value> = scales
                    .iter()
                    .zip(&omegas)
                    .map(|(&t, &om)| json!({"t": t, "omega": om}))
                    .collect();
                let spacing = (0..f.box_domain.dim())
                    .map(|a| f.cell_side(a))
                    .fold(f64::INFINITY, f64::min);
                let report = json!({
                    "version": env!("CARGO_PKG_VERSION"),
                    "config": {"command": "modulus", "lp": exp_value(p)},
                    "lattice_spacing": spacing,
                    "table": rows,
                });
                emit_json(&output, &report)?;
            } else {
                let mut csv = String::from("t,omega\n");
                for (t, om) in scales.iter().zip(&omegas) {
                    csv.push_str(&format!("{t},{om}\n"));
                }
                emit(&output, &csv)?;
            }
            Ok(0)
        }
        Command::BesovNorm { input, spec, output } => {
            let f = SampledFunction::from_json(&read(&input)?)?;
            let besov = besov_from_json(&read(&spec)?)?;
            let b = besov_quasinorm(&f, &besov)?;
            let report = json!({
                "version": env!("CARGO_PKG_VERSION"),
                "config": {"command": "besov-norm", "input": input.display().to_string()},
                "spec": besov_to_value(&besov),
                "value": b.value,
                "lp_part": b.lp_part,
                "seminorm_part": b.seminorm_part,
                "probe_grid_J": b.probe_grid_j,
                "boundary_warning": b.boundary_warning,
                "lattice_spacing": b.lattice_spacing,
            });
            emit_json(&output, &report)?;
            Ok(0)
        }
        Command::Uac {
            family,
            grid,
            spec,
            probes,
            tol_verdict,
            output,
        } => {
            let (fam, members) = load_family(&family, &grid)?;
            let lorentz = lorentz_from_json(&read(&spec)?)?;
            let rule = verdict_rule(tol_verdict)?;
            let deltas: Vec<f64> = (1..=probes.max(2))
                .map(|k| 2f64.powi(-(k as i32)))
                .collect();
            let report = uac_check(&members, &lorentz, &deltas, &rule, &format!("{fam:?}"))?;
            let wrapped = json!({
                "version": env!("CARGO_PKG_VERSION"),
                "config": {
                    "command": "uac",
                    "probes": probes,
                    "tol_verdict": tol_verdict,
                },
                "spec": lorentz_to_value(&lorentz),
                "report": report,
            });
            emit_json(&output, &wrapped)?;
            Ok(0)
        }
        Command::Classify {
            source,
            target,
            probes,
            tol_verdict,
            output,
        } => {
            let src = besov_from_json(&read(&source)?)?;
            let tgt = lorentz_from_json(&read(&target)?)?;
            let rule = verdict_rule(tol_verdict)?;
            let deltas: Vec<f64> = (4..=probes.max(8) as i32)
                .map(|k| 2f64.powi(-k))
                .collect();
            let verdict = classify_embedding(&src, &tgt, &deltas, &rule)?;
            let report = json!({
                "version": env!("CARGO_PKG_VERSION"),
                "config": {
                    "command": "classify",
                    "probes": probes,
                    "tol_verdict": tol_verdict,
                },
                "source": besov_to_value(&src),
                "target": lorentz_to_value(&tgt),
                "case": verdict.case_tag,
                "alpha": verdict.alpha,
                "beta": verdict.beta,
                "symbolic_verdict": verdict.outcome,
                "numeric_verdict": verdict.numeric_verdict,
                "probes": probe_rows(&verdict.probes),
                "slope": verdict.slope,
                "borderline": verdict.borderline,
                "empirical": verdict.empirical,
                "final_verdict": verdict.outcome,
                "certificate_text": verdict.certificate,
            });
            emit_json(&output, &report)?;
            Ok(if verdict.is_inconclusive() { 4 } else { 0 })
        }
        Command::Envelope {
            source,
            empirical,
            cells,
            output,
        } => {
            let src = besov_from_json(&read(&source)?)?;
            let env = envelope(&src);
            let mut report = json!({
                "version": env!("CARGO_PKG_VERSION"),
                "config": {"command": "envelope", "empirical": empirical, "cells": cells},
                "source": besov_to_value(&src),
                "case": env.case_tag,
                "power_exp": env.power_exp,
                "log_exp": env.log_exp,
            });
            if empirical {
                let bd = BoxDomain::interval(0.0, 1.0)?;
                let max_k = ((cells as f64).log2().floor() as i32 - 1).min(12);
                let eps: Vec<f64> = (0..=max_k).map(|k| 2f64.powi(-k)).collect();
                let fit = envelope_empirical(&src, &bd, cells, &eps)?;
                report["empirical"] = json!({
                    "fitted_slope": fit.slope,
                    "intercept": fit.intercept,
                    "probes": probe_rows(&fit.probes),
                });
            }
            emit_json(&output, &report)?;
            Ok(0)
        }
        Command::Covering {
            family,
            grid,
            spec,
            lp,
            epsilon,
            output,
        } => {
            let (fam, members) = load_family(&family, &grid)?;
            let (estimate, metric_label) = match (&spec, &lp) {
                (Some(path), None) => {
                    let lorentz = lorentz_from_json(&read(path)?)?;
                    let label = lorentz.label();
                    (covering_estimate(&members, &lorentz, epsilon)?, label)
                }
                (None, Some(text)) => {
                    let norm = LpSpec::new(parse_lp(text)?)?;
                    let label = norm.label();
                    (covering_estimate(&members, &norm, epsilon)?, label)
                }
                _ => {
                    return Err(Error::InvalidSpec(
                        "covering needs exactly one of --spec or --lp".into(),
                    ))
                }
            };
            let report = json!({
                "version": env!("CARGO_PKG_VERSION"),
                "config": {
                    "command": "covering",
                    "epsilon": epsilon,
                    "family": format!("{fam:?}"),
                    "metric": metric_label,
                },
                "net_size": estimate.net_size,
                "net_indices": estimate.net_indices,
                "covering_radius": estimate.covering_radius,
            });
            emit_json(&output, &report)?;
            Ok(0)
        }
        Command::Selftest { seed, output } => {
            let (report, all_pass) = selftest::run(seed)?;
            emit_json(&output, &report)?;
            Ok(if all_pass { 0 } else { 1 })
        }
    }
}
