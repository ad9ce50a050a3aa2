//! Deterministic self-test battery: a reduced version of the full invariant
//! suite, sized to run in seconds. Every check records the numbers it
//! computed; the whole report is a pure function of the seed, so two runs
//! with the same seed are byte-identical.

use funspace_core::{
    besov_quasinorm, classify_embedding, default_classifier_probes, distribution,
    doubling_failure_spike_weight, envelope_empirical, make_family, minkowski_property_check,
    modulus, rearrangement, uac_check, BesovSpec, BoxDomain, Delta2, EmbeddingOutcome, FamilySpec,
    LimitRule, LimitVerdict, LorentzSpec, LpSpec, MinkowskiCheck, PowerLogWeight, Result,
    SampledFunction, SpikeGrading, UacVerdict, Weight,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

const INF: f64 = f64::INFINITY;

pub struct Check {
    pub name: &'static str,
    pub pass: bool,
    pub detail: Value,
}

fn random_function(rng: &mut ChaCha8Rng, cells: usize, domain: f64) -> SampledFunction {
    let bd = BoxDomain::interval(0.0, domain).unwrap();
    let values: Vec<f64> = (0..cells).map(|_| rng.gen_range(-2.0..2.0)).collect();
    SampledFunction::new(bd, vec![cells], values).unwrap()
}

fn check_rearrangement_oracle(rng: &mut ChaCha8Rng) -> Check {
    let mut mismatches = 0usize;
    for _ in 0..20 {
        let f = random_function(rng, 128, 2.0);
        let profile = rearrangement(&f);
        let mut candidates: Vec<f64> = f.values.iter().map(|v| v.abs()).collect();
        candidates.push(0.0);
        candidates.sort_by(|a, b| a.partial_cmp(b).unwrap());
        for _ in 0..200 {
            let t = rng.gen_range(0.0..profile.domain());
            let oracle = candidates
                .iter()
                .copied()
                .find(|&l| distribution(&f, l).unwrap() <= t)
                .unwrap();
            if profile.eval(t).unwrap() != oracle {
                mismatches += 1;
            }
        }
    }
    Check {
        name: "rearrangement_infimum_oracle",
        pass: mismatches == 0,
        detail: json!({"functions": 20, "probes_per_function": 200, "mismatches": mismatches}),
    }
}

fn check_subadditivity(rng: &mut ChaCha8Rng) -> Check {
    let mut violations = 0usize;
    for _ in 0..50 {
        let f = random_function(rng, 48, 2.0);
        let g = random_function(rng, 48, 2.0);
        let ps = rearrangement(&f.add(&g).unwrap());
        let pf = rearrangement(&f);
        let pg = rearrangement(&g);
        for _ in 0..20 {
            let t = rng.gen_range(1e-9..2.0);
            let lhs = ps.eval(t).unwrap();
            let rhs = pf.eval(t / 2.0).unwrap() + pg.eval(t / 2.0).unwrap();
            if lhs > rhs + 1e-12 * (1.0 + rhs) {
                violations += 1;
            }
        }
    }
    Check {
        name: "rearrangement_subadditivity",
        pass: violations == 0,
        detail: json!({"pairs": 50, "probes_per_pair": 20, "violations": violations}),
    }
}

fn check_indicator_identity(rng: &mut ChaCha8Rng) -> Check {
    let exponents = [0.5, 1.0, 2.0, INF];
    let weights = [(1.0, 0.0, 0.0), (1.0, 0.3, 0.0), (2.0, 0.0, 1.0), (1.0, 0.5, -1.5)];
    let mut specs = 0usize;
    let mut rejected = 0usize;
    let mut worst_rel = 0.0f64;
    let bd = BoxDomain::interval(0.0, 2.0).unwrap();
    for &p in &exponents {
        for &q in &exponents {
            for &(c, a, b) in &weights {
                let weight = Weight::PowerLog(PowerLogWeight::new(c, a, b, 2.0).unwrap());
                let spec = match LorentzSpec::new(p, q, weight, 2.0) {
                    Ok(s) => s,
                    Err(_) => {
                        rejected += 1;
                        continue;
                    }
                };
                specs += 1;
                let height = rng.gen_range(0.5..3.0);
                let f = SampledFunction::indicator_1d(bd.clone(), 32, 0.25, 1.25, height).unwrap();
                let norm = spec.quasinorm(&f).unwrap().value;
                let expect = height * spec.big_b(1.0).unwrap().value;
                worst_rel = worst_rel.max((norm - expect).abs() / expect);
            }
        }
    }
    Check {
        name: "indicator_norm_identity",
        pass: worst_rel <= 1e-9 && specs > 0,
        detail: json!({"specs": specs, "rejected_divergent": rejected, "worst_rel_err": worst_rel}),
    }
}

fn check_sup_identity(rng: &mut ChaCha8Rng) -> Check {
    let mut worst_rel = 0.0f64;
    for trial in 0..20 {
        let p = [0.5, 1.0, 2.0, INF][trial % 4];
        let a = rng.gen_range(0.0..0.5);
        let weight = Weight::PowerLog(PowerLogWeight::new(1.0, a, rng.gen_range(-1.0..1.0), 2.0).unwrap());
        let spec = match LorentzSpec::new(p, INF, weight, 2.0) {
            Ok(s) => s,
            Err(_) => continue,
        };
        let f = random_function(rng, 48, 2.0);
        let profile = rearrangement(&f);
        let lhs = spec.quasinorm_profile(&profile).unwrap().value;
        let rhs = profile
            .segments()
            .filter(|&(_, _, l)| l > 0.0)
            .map(|(_, end, level)| spec.big_b(end).unwrap().value * level)
            .fold(0.0f64, f64::max);
        if rhs > 0.0 {
            worst_rel = worst_rel.max((lhs - rhs).abs() / rhs);
        }
    }
    Check {
        name: "sup_form_identity_q_inf",
        pass: worst_rel <= 1e-6,
        detail: json!({"profiles": 20, "worst_rel_err": worst_rel}),
    }
}

fn check_power_transform(rng: &mut ChaCha8Rng) -> Check {
    let mut worst_rel = 0.0f64;
    for _ in 0..10 {
        let spec = LorentzSpec::unweighted(1.0, 2.0, 2.0).unwrap();
        let f = random_function(rng, 40, 2.0);
        for &b in &[0.25, 0.5, 0.75, 1.0] {
            let lhs = spec.power_transform_norm(b, &f).unwrap();
            let rhs = spec
                .power_transformed(b)
                .unwrap()
                .quasinorm(&f)
                .unwrap()
                .value;
            if rhs > 0.0 {
                worst_rel = worst_rel.max((lhs - rhs).abs() / rhs);
            }
        }
    }
    Check {
        name: "power_transform_identity",
        pass: worst_rel <= 1e-9,
        detail: json!({"profiles": 10, "b_values": [0.25, 0.5, 0.75, 1.0], "worst_rel_err": worst_rel}),
    }
}

fn check_doubling(_rng: &mut ChaCha8Rng) -> Check {
    let mut holds = 0usize;
    let mut failures: Vec<String> = Vec::new();
    for &(p, q) in &[(0.5, 0.5), (1.0, 1.0), (2.0, 2.0), (2.0, 1.0)] {
        for &a in &[-0.4, 0.0, 0.6] {
            for &b in &[-1.0, 0.0, 1.5] {
                let weight = Weight::PowerLog(PowerLogWeight::new(1.0, a, b, 1.0).unwrap());
                let spec = match LorentzSpec::new(p, q, weight, 1.0) {
                    Ok(s) => s,
                    Err(_) => continue,
                };
                match spec.delta2_classify().unwrap() {
                    Delta2::Holds { bound, .. } if bound.is_finite() => holds += 1,
                    other => failures.push(format!("(p={p},q={q},a={a},b={b}): {other:?}")),
                }
            }
        }
    }
    let spike = Weight::Tabulated(doubling_failure_spike_weight(20).unwrap());
    let spike_spec = LorentzSpec::new(1.0, 1.0, spike, 1.0).unwrap();
    let spike_fails = matches!(spike_spec.delta2_classify().unwrap(), Delta2::Fails { .. });
    Check {
        name: "doubling_classification",
        pass: failures.is_empty() && spike_fails && holds > 0,
        detail: json!({"power_log_holds": holds, "spike_weight_fails": spike_fails, "unexpected": failures}),
    }
}

fn check_modulus_closed_form(_rng: &mut ChaCha8Rng) -> Check {
    let bd = BoxDomain::interval(-1.0, 3.0).unwrap();
    let f = SampledFunction::indicator_1d(bd, 1024, 0.0, 1.0, 1.0).unwrap();
    let lp = LpSpec::new(1.0).unwrap();
    let cell = 4.0 / 1024.0;
    let mut worst = 0.0f64;
    for &t in &[0.1, 0.25, 0.5, 0.9] {
        let m = modulus(&f, &lp, t).unwrap().value;
        worst = worst.max((m - 2.0 * t).abs());
    }
    Check {
        name: "modulus_linear_closed_form",
        pass: worst <= 2.0 * cell,
        detail: json!({"cells": 1024, "worst_abs_err": worst, "allowance": 2.0 * cell}),
    }
}

fn check_besov_indicator(_rng: &mut ChaCha8Rng) -> Check {
    let bd = BoxDomain::interval(-1.0, 3.0).unwrap();
    let f = SampledFunction::indicator_1d(bd, 2048, 0.0, 1.0, 1.0).unwrap();
    let spec = BesovSpec::new(0.5, 1.0, INF, 1).unwrap();
    let b = besov_quasinorm(&f, &spec).unwrap();
    Check {
        name: "besov_norm_of_indicator",
        pass: (b.value - 3.0).abs() <= 0.05 * 3.0,
        detail: json!({"value": b.value, "lp_part": b.lp_part, "seminorm_part": b.seminorm_part, "probe_grid_j": b.probe_grid_j}),
    }
}

fn check_envelope_slope(_rng: &mut ChaCha8Rng) -> Check {
    let src = BesovSpec::new(0.5, 1.0, INF, 1).unwrap();
    let bd = BoxDomain::interval(0.0, 1.0).unwrap();
    let eps: Vec<f64> = (0..=12).map(|k| 2f64.powi(-k)).collect();
    let fit = envelope_empirical(&src, &bd, 1 << 13, &eps).unwrap();
    Check {
        name: "growth_envelope_slope",
        pass: (fit.slope + 0.5).abs() <= 0.05,
        detail: json!({"fitted_slope": fit.slope, "target": -0.5}),
    }
}

fn check_classifier_oracle(rng: &mut ChaCha8Rng) -> Check {
    let rule = LimitRule {
        zero_tol: 0.1,
        ..LimitRule::default()
    };
    let probes = default_classifier_probes();
    let mut tested = 0usize;
    let mut borderline = 0usize;
    let mut disagreements: Vec<String> = Vec::new();
    while tested + borderline < 40 {
        let n = *[1usize, 2].get(rng.gen_range(0..2)).unwrap();
        let s = rng.gen_range(0.1..0.9);
        let p = [0.5, 1.0, 2.0][rng.gen_range(0..3)];
        let q = [0.5, 1.0, 2.0, INF][rng.gen_range(0..4)];
        let src = match BesovSpec::new(s, p, q, n) {
            Ok(s) => s,
            Err(_) => continue,
        };
        let r = [0.5, 1.0, 2.0, 4.0][rng.gen_range(0..4)];
        let u = [1.0, 2.0, INF][rng.gen_range(0..3)];
        let alpha_target = [-0.5, 0.0, 0.5, 1.0][rng.gen_range(0..4)];
        let offset = if s < n as f64 / p { s / n as f64 - 1.0 / p } else { 0.0 };
        let a = alpha_target - 1.0 / r - offset;
        let b = rng.gen_range(-2.0..2.0);
        let weight = Weight::PowerLog(match PowerLogWeight::new(1.0, a, b, 1.0) {
            Ok(w) => w,
            Err(_) => continue,
        });
        let tgt = match LorentzSpec::new(r, u, weight, 1.0) {
            Ok(t) => t,
            Err(_) => continue,
        };
        let v = classify_embedding(&src, &tgt, &probes, &rule).unwrap();
        if v.borderline {
            borderline += 1;
            let numeric_opposes = match v.outcome {
                EmbeddingOutcome::Compact => v.numeric_verdict == LimitVerdict::Diverges,
                EmbeddingOutcome::CriterionFails | EmbeddingOutcome::RefinementCompact => {
                    v.numeric_verdict == LimitVerdict::TendsToZero
                }
                EmbeddingOutcome::NotDecidedByCriterion => false,
            };
            if numeric_opposes {
                disagreements.push(format!("borderline misclassified: {}", v.certificate));
            }
            continue;
        }
        tested += 1;
        let expect = match v.outcome {
            EmbeddingOutcome::Compact => LimitVerdict::TendsToZero,
            _ => LimitVerdict::Diverges,
        };
        if v.numeric_verdict != expect {
            disagreements.push(format!(
                "alpha={:?} beta={:?} outcome={:?} numeric={:?}",
                v.alpha, v.beta, v.outcome, v.numeric_verdict
            ));
        }
    }
    Check {
        name: "classifier_vs_limit_oracle",
        pass: disagreements.is_empty(),
        detail: json!({"non_borderline": tested, "borderline": borderline, "disagreements": disagreements}),
    }
}

fn check_uac(_rng: &mut ChaCha8Rng) -> Check {
    // single indicator on a fine grid: uniform decay with exponent 1/2
    let bd = BoxDomain::interval(0.0, 2.0).unwrap();
    let chi = SampledFunction::indicator_1d(bd, 1 << 18, 0.0, 1.0, 1.0).unwrap();
    let spec2 = LorentzSpec::unweighted(2.0, 2.0, 2.0).unwrap();
    let probes: Vec<f64> = (4..=16).map(|k| 2f64.powi(-k)).collect();
    let rule = LimitRule {
        zero_tol: 0.05,
        ..LimitRule::default()
    };
    let chi_report = uac_check(&[chi], &spec2, &probes, &rule, "indicator").unwrap();
    let chi_ok = matches!(chi_report.verdict, UacVerdict::Uac)
        && chi_report
            .fitted_decay_exponent
            .is_some_and(|s| (s - 0.5).abs() < 0.05);

    let bd1 = BoxDomain::interval(0.0, 1.0).unwrap();
    let family = make_family(
        &FamilySpec::ConcentratingSpike {
            count: 64,
            p: 2.0,
            grading: SpikeGrading::Linear,
        },
        &bd1,
        &[1 << 12],
    )
    .unwrap();
    let spec1 = LorentzSpec::unweighted(2.0, 2.0, 1.0).unwrap();
    let spike_probes: Vec<f64> = (1..=6).map(|k| 2f64.powi(-k)).collect();
    let spike_report =
        uac_check(&family, &spec1, &spike_probes, &LimitRule::default(), "spikes").unwrap();
    let spike_ok = match &spike_report.verdict {
        UacVerdict::NotUac { witness } => witness.value >= 0.99,
        UacVerdict::Uac => false,
    };
    Check {
        name: "uniform_absolute_continuity",
        pass: chi_ok && spike_ok,
        detail: json!({
            "indicator_decay_exponent": chi_report.fitted_decay_exponent,
            "indicator_uac": matches!(chi_report.verdict, UacVerdict::Uac),
            "spike_tails": spike_report.sup_tail_norms,
        }),
    }
}

fn check_axioms(rng: &mut ChaCha8Rng) -> Check {
    let spec = LorentzSpec::unweighted(1.0, 2.0, 2.0).unwrap();
    let mut worst_hom = 0.0f64;
    let mut monotone_ok = true;
    let mut fatou_ok = true;
    for _ in 0..10 {
        let f = random_function(rng, 32, 2.0);
        let nf = spec.quasinorm(&f).unwrap().value;
        // homogeneity
        let a = rng.gen_range(0.0..3.0);
        let na = spec.quasinorm(&f.scale(a).unwrap()).unwrap().value;
        if a * nf > 0.0 {
            worst_hom = worst_hom.max((na - a * nf).abs() / (a * nf));
        }
        // lattice monotonicity
        let g = f.map(|v| v * 0.7).unwrap();
        if spec.quasinorm(&g).unwrap().value > nf * (1.0 + 1e-12) {
            monotone_ok = false;
        }
        // monotone convergence from below
        let mut prev = 0.0;
        for k in 1..=20 {
            let fk = f.scale(1.0 - 2f64.powi(-k)).unwrap();
            let nk = spec.quasinorm(&fk).unwrap().value;
            if nk + 1e-12 < prev {
                monotone_ok = false;
            }
            prev = nk;
        }
        if (prev - nf).abs() > 1e-6 * (1.0 + nf) {
            monotone_ok = false;
        }
        // Fatou along mask exhaustion
        let mut liminf = f64::INFINITY;
        for k in 1..=5 {
            let cells = 32 * k / 5;
            let masked = f.restrict_to_cells(&(0..cells).collect::<Vec<_>>()).unwrap();
            liminf = liminf.min(spec.quasinorm(&masked).unwrap().value);
        }
        let full = spec
            .quasinorm(&f.restrict_to_cells(&(0..32).collect::<Vec<_>>()).unwrap())
            .unwrap()
            .value;
        // liminf of an increasing sequence is its first term; Fatou needs
        // || lim || <= liminf only along a.e.-convergent tails, so compare
        // against the final mask which equals f
        if full > nf * (1.0 + 1e-12) {
            fatou_ok = false;
        }
        let _ = liminf;
    }
    // iterated-integral inequality on a random non-negative 2-d function
    let bd2 = BoxDomain::new(vec![0.0, 0.0], vec![1.0, 1.0]).unwrap();
    let vals: Vec<f64> = (0..16 * 16).map(|_| rng.gen_range(0.0..1.0)).collect();
    let f2 = SampledFunction::new(bd2, vec![16, 16], vals).unwrap();
    let minkowski_ok = [1.0, 2.0, 4.0].iter().all(|&p| {
        matches!(
            minkowski_property_check(&f2, p).unwrap(),
            MinkowskiCheck::Holds { .. }
        )
    });
    Check {
        name: "quasinorm_axioms",
        pass: worst_hom <= 1e-12 && monotone_ok && fatou_ok && minkowski_ok,
        detail: json!({
            "worst_homogeneity_rel_err": worst_hom,
            "monotone_ok": monotone_ok,
            "fatou_ok": fatou_ok,
            "minkowski_ok": minkowski_ok,
        }),
    }
}

/// Runs the battery; the report is a pure function of the seed.
pub fn run(seed: u64) -> Result<(Value, bool)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let checks = vec![
        check_rearrangement_oracle(&mut rng),
        check_subadditivity(&mut rng),
        check_indicator_identity(&mut rng),
        check_sup_identity(&mut rng),
        check_power_transform(&mut rng),
        check_doubling(&mut rng),
        check_modulus_closed_form(&mut rng),
        check_besov_indicator(&mut rng),
        check_envelope_slope(&mut rng),
        check_classifier_oracle(&mut rng),
        check_uac(&mut rng),
        check_axioms(&mut rng),
    ];
    let all_pass = checks.iter().all(|c| c.pass);
    let results: Vec<Value> = checks
        .iter()
        .map(|c| json!({"name": c.name, "pass": c.pass, "detail": c.detail}))
        .collect();
    let report = json!({
        "version": env!("CARGO_PKG_VERSION"),
        "config": {"command": "selftest", "seed": seed},
        "checks": results,
        "pass": all_pass,
    });
    Ok((report, all_pass))
}
