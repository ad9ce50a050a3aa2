//! Acceptance suite: one test per criterion, each printing a PASS line with
//! the measured numbers. Oracles are independent of the code paths they
//! check: the rearrangement is tested against direct distribution-function
//! counting, quasi-norm identities against the indicator-norm function,
//! symbolic limit verdicts against dyadic probe tables.

use std::time::Instant;

use funspace_core::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const INF: f64 = f64::INFINITY;

fn random_function(rng: &mut ChaCha8Rng, cells: usize, domain: f64, lo: f64, hi: f64) -> SampledFunction {
    let bd = BoxDomain::interval(0.0, domain).unwrap();
    let values: Vec<f64> = (0..cells).map(|_| rng.gen_range(lo..hi)).collect();
    SampledFunction::new(bd, vec![cells], values).unwrap()
}

/// Criterion 1: rearrangement equals the distribution-function infimum,
/// exactly, on 500 random functions at 1000 probe points each, in < 10 s.
#[test]
fn criterion_01_rearrangement_oracle_equivalence() {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(1001);
    for trial in 0..500 {
        let cells = rng.gen_range(16..=512);
        let f = random_function(&mut rng, cells, 2.0, -5.0, 5.0);
        let profile = rearrangement(&f);
        // oracle: smallest candidate level whose super-level measure is <= t,
        // with the distribution computed by direct counting
        let mut candidates: Vec<f64> = f.values.iter().map(|v| v.abs()).collect();
        candidates.push(0.0);
        candidates.sort_by(|a, b| a.partial_cmp(b).unwrap());
        candidates.dedup();
        let dist_table: Vec<f64> = candidates
            .iter()
            .map(|&l| distribution(&f, l).unwrap())
            .collect();
        for _ in 0..1000 {
            let t = rng.gen_range(0.0..profile.domain());
            // dist_table is non-increasing along ascending candidates
            let idx = dist_table.partition_point(|&d| d > t);
            let oracle = candidates[idx];
            let got = profile.eval(t).unwrap();
            assert_eq!(got, oracle, "trial {trial}, t = {t}");
        }
    }
    let elapsed = start.elapsed().as_secs_f64();
    assert!(elapsed < 10.0, "runtime {elapsed:.2}s exceeds 10s");
    println!("PASS: criterion 1 - rearrangement oracle equivalence (500 functions x 1000 probes, exact, {elapsed:.2}s)");
}

/// Criterion 2: (f+g)*(t) <= f*(t/2) + g*(t/2) with zero violations over
/// 1000 random pairs x 50 probes.
#[test]
fn criterion_02_subadditivity() {
    let mut rng = ChaCha8Rng::seed_from_u64(1002);
    let mut checked = 0usize;
    for _ in 0..1000 {
        let cells = rng.gen_range(16..=128);
        let f = random_function(&mut rng, cells, 2.0, -3.0, 3.0);
        let g = random_function(&mut rng, cells, 2.0, -3.0, 3.0);
        let ps = rearrangement(&f.add(&g).unwrap());
        let pf = rearrangement(&f);
        let pg = rearrangement(&g);
        for _ in 0..50 {
            let t = rng.gen_range(1e-9..2.0);
            let lhs = ps.eval(t).unwrap();
            let rhs = pf.eval(t / 2.0).unwrap() + pg.eval(t / 2.0).unwrap();
            assert!(
                lhs <= rhs + 1e-12 * (1.0 + rhs),
                "violation at t = {t}: {lhs} > {rhs}"
            );
            checked += 1;
        }
    }
    println!("PASS: criterion 2 - subadditivity ({checked} probes, zero violations)");
}

/// Criterion 3: ||c chi_E|| = |c| * B(|E|) to relative 1e-9 over the
/// (p, q) x weight grid; divergent combinations rejected at construction.
#[test]
fn criterion_03_indicator_norm_identity() {
    let mut rng = ChaCha8Rng::seed_from_u64(1003);
    let exponents = [0.5, 1.0, 2.0, INF];
    let weights = [
        (1.0, 0.0, 0.0),
        (2.0, 0.3, 0.0),
        (1.0, 0.0, 1.0),
        (1.0, 0.0, -1.8),
        (0.7, 0.5, -1.5),
        (1.5, -0.2, 2.0),
    ];
    let cells = 64usize;
    let bd = BoxDomain::interval(0.0, 2.0).unwrap();
    let mut tested = 0usize;
    let mut rejected = 0usize;
    let mut worst_rel = 0.0f64;
    for &p in &exponents {
        for &q in &exponents {
            for &(c, a, b) in &weights {
                let weight = Weight::PowerLog(PowerLogWeight::new(c, a, b, 2.0).unwrap());
                let spec = match LorentzSpec::new(p, q, weight, 2.0) {
                    Ok(s) => s,
                    Err(Error::InvalidSpec(_)) => {
                        rejected += 1;
                        continue;
                    }
                    Err(e) => panic!("unexpected error: {e}"),
                };
                // scattered indicator: random subset of cells, random height
                let height = rng.gen_range(0.25..4.0) * if rng.gen_bool(0.5) { -1.0 } else { 1.0 };
                let count = rng.gen_range(1..cells);
                let mut idx: Vec<usize> = (0..cells).collect();
                for i in 0..count {
                    let j = rng.gen_range(i..cells);
                    idx.swap(i, j);
                }
                idx.truncate(count);
                let mut vals = vec![0.0; cells];
                for &i in &idx {
                    vals[i] = height;
                }
                let f = SampledFunction::new(bd.clone(), vec![cells], vals).unwrap();
                let measure = f.measure_of(&idx).unwrap();
                let norm = spec.quasinorm(&f).unwrap().value;
                let expect = height.abs() * spec.big_b(measure).unwrap().value;
                worst_rel = worst_rel.max((norm - expect).abs() / expect);
                tested += 1;
            }
        }
    }
    assert!(rejected > 0, "the grid must contain divergent combinations");
    assert!(
        worst_rel <= 1e-9,
        "worst relative error {worst_rel} exceeds 1e-9"
    );
    println!("PASS: criterion 3 - indicator norm identity ({tested} specs, {rejected} divergent rejected, worst rel {worst_rel:.2e})");
}

/// Criterion 4: at q = inf the quasi-norm equals the prefix-sup form
/// sup_t B(t) f*(t) to relative 1e-6 on 200 random profiles.
#[test]
fn criterion_04_sup_form_identity() {
    let mut rng = ChaCha8Rng::seed_from_u64(1004);
    let mut tested = 0usize;
    let mut worst_rel = 0.0f64;
    while tested < 200 {
        let p = [0.5, 1.0, 2.0, INF][tested % 4];
        let a = rng.gen_range(-0.2..0.6);
        let b = rng.gen_range(-1.5..1.5);
        let weight = Weight::PowerLog(PowerLogWeight::new(1.0, a, b, 2.0).unwrap());
        let spec = match LorentzSpec::new(p, INF, weight, 2.0) {
            Ok(s) => s,
            Err(_) => continue,
        };
        let cells = rng.gen_range(16..=96);
        let f = random_function(&mut rng, cells, 2.0, -2.0, 2.0);
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
        tested += 1;
    }
    assert!(worst_rel <= 1e-6, "worst relative gap {worst_rel}");
    println!("PASS: criterion 4 - sup-form identity at q = inf (200 profiles, worst rel {worst_rel:.2e})");
}

/// Criterion 5: the power transform matches the directly constructed
/// rescaled space to relative 1e-9 on 100 profiles x b grid.
#[test]
fn criterion_05_power_transform_identity() {
    let mut rng = ChaCha8Rng::seed_from_u64(1005);
    let bases = [(1.0, 2.0), (0.5, 1.0), (2.0, 4.0)];
    let mut worst_rel = 0.0f64;
    for trial in 0..100 {
        let (p, q) = bases[trial % bases.len()];
        let spec = LorentzSpec::unweighted(p, q, 2.0).unwrap();
        let cells = rng.gen_range(16..=80);
        let f = random_function(&mut rng, cells, 2.0, 0.0, 3.0);
        for &b in &[0.25, 0.5, 0.75, 1.0] {
            let lhs = spec.power_transform_norm(b, &f).unwrap();
            let direct = LorentzSpec::unweighted(p / b, q / b, 2.0)
                .unwrap()
                .quasinorm(&f)
                .unwrap()
                .value;
            if direct > 0.0 {
                worst_rel = worst_rel.max((lhs - direct).abs() / direct);
            }
        }
    }
    assert!(worst_rel <= 1e-9, "worst relative error {worst_rel}");
    println!("PASS: criterion 5 - power-transform identity (100 profiles x 4 exponents, worst rel {worst_rel:.2e})");
}

/// Criterion 6: the symbolic doubling verdict agrees with the dyadic
/// numeric ratio oracle on the exhaustive (a, b) grid; the spike weight
/// is classified as failing.
#[test]
fn criterion_06_doubling_classification() {
    let pq_pairs = [(0.5, 0.5), (1.0, 1.0), (2.0, 2.0), (2.0, 1.0), (1.0, INF), (INF, INF)];
    let mut valid = 0usize;
    let mut rejected = 0usize;
    for ai in -10..=10i32 {
        let a = ai as f64 * 0.1;
        for bi in -4..=4i32 {
            let b = bi as f64 * 0.5;
            for &(p, q) in &pq_pairs {
                let weight = Weight::PowerLog(PowerLogWeight::new(1.0, a, b, 1.0).unwrap());
                let spec = match LorentzSpec::new(p, q, weight, 1.0) {
                    Ok(s) => s,
                    Err(_) => {
                        rejected += 1;
                        continue;
                    }
                };
                valid += 1;
                // symbolic verdict
                let symbolic_holds = matches!(
                    spec.delta2_classify().unwrap(),
                    Delta2::Holds { empirical: false, .. }
                );
                // dyadic numeric ratio oracle down to 2^-40
                let mut ratios = Vec::new();
                for k in 1..=40 {
                    let t = 2f64.powi(-k) / 2.0;
                    let b1 = spec.big_b(t).unwrap().value;
                    let b2 = spec.big_b(2.0 * t).unwrap().value;
                    ratios.push(b2 / b1);
                }
                let max_ratio = ratios.iter().copied().fold(0.0f64, f64::max);
                let deep_flat = ratios[39] / ratios[19];
                let oracle_holds = max_ratio <= 100.0 && (0.5..=2.0).contains(&deep_flat);
                assert_eq!(
                    symbolic_holds, oracle_holds,
                    "(p={p}, q={q}, a={a}, b={b}): symbolic {symbolic_holds} vs oracle \
                     (max ratio {max_ratio}, deep flatness {deep_flat})"
                );
            }
        }
    }
    // the spike weight fails
    let spike = Weight::Tabulated(doubling_failure_spike_weight(22).unwrap());
    let spec = LorentzSpec::new(1.0, 1.0, spike, 1.0).unwrap();
    let spike_fails = matches!(spec.delta2_classify().unwrap(), Delta2::Fails { .. });
    assert!(spike_fails, "tabulated spike weight must fail doubling");
    println!("PASS: criterion 6 - doubling classification ({valid} finite specs agree with the dyadic oracle, {rejected} divergent rejected, spike weight fails)");
}

/// Criterion 7: the modulus of the unit indicator is 2t within two cells at
/// 2048 cells, and its Besov quasi-norm at (n=1, p=1, q=inf, s=1/2) is 3
/// within 5%.
#[test]
fn criterion_07_modulus_closed_form_and_besov_value() {
    let bd = BoxDomain::interval(-1.0, 3.0).unwrap();
    let cells = 2048usize;
    let f = SampledFunction::indicator_1d(bd, cells, 0.0, 1.0, 1.0).unwrap();
    let lp = LpSpec::new(1.0).unwrap();
    let cell = 4.0 / cells as f64;
    let mut rng = ChaCha8Rng::seed_from_u64(1007);
    let mut worst = 0.0f64;
    for _ in 0..50 {
        let t = rng.gen_range(cell..1.0);
        let m = modulus(&f, &lp, t).unwrap().value;
        worst = worst.max((m - 2.0 * t).abs());
    }
    assert!(
        worst <= 2.0 * cell,
        "modulus deviates by {worst} > 2 cells ({})",
        2.0 * cell
    );
    let spec = BesovSpec::new(0.5, 1.0, INF, 1).unwrap();
    let b = besov_quasinorm(&f, &spec).unwrap();
    assert!(
        (b.value - 3.0).abs() <= 0.05 * 3.0,
        "quasi-norm {} deviates from 3 by more than 5%",
        b.value
    );
    println!("PASS: criterion 7 - modulus closed form (worst |omega - 2t| = {worst:.2e} <= 2 cells) and Besov value {:.4} within 5% of 3", b.value);
}

/// Criterion 8: the empirical growth envelope for (n=1, s=1/2, p=1) fits
/// slope -0.5 +- 0.05 over t in [2^-10, 2^-4], in < 60 s.
#[test]
fn criterion_08_growth_envelope_slope() {
    let start = Instant::now();
    let src = BesovSpec::new(0.5, 1.0, INF, 1).unwrap();
    let bd = BoxDomain::interval(0.0, 1.0).unwrap();
    // spike measures 2^-3 .. 2^-10 put the probe arguments exactly in the
    // window [2^-10, 2^-4]
    let eps: Vec<f64> = (3..=10).map(|k| 2f64.powi(-k)).collect();
    let fit = envelope_empirical(&src, &bd, 1 << 13, &eps).unwrap();
    let elapsed = start.elapsed().as_secs_f64();
    assert!(
        (fit.slope + 0.5).abs() <= 0.05,
        "fitted slope {} outside -0.5 +- 0.05",
        fit.slope
    );
    assert!(elapsed < 60.0, "runtime {elapsed:.2}s exceeds 60s");
    println!(
        "PASS: criterion 8 - growth envelope slope {:.4} within -0.5 +- 0.05 ({elapsed:.2}s)",
        fit.slope
    );
}

/// Criterion 9: on 200 sampled tuples spanning all three cases, the
/// symbolic classifier matches the numeric limit oracle in every
/// non-borderline tuple; borderline tuples are never contradicted.
#[test]
fn criterion_09_classifier_oracle_agreement() {
    let mut rng = ChaCha8Rng::seed_from_u64(1009);
    let rule = LimitRule {
        zero_tol: 0.1,
        ..LimitRule::default()
    };
    let probes = default_classifier_probes();
    let mut non_borderline = 0usize;
    let mut borderline = 0usize;
    let mut case_counts = [0usize; 3];
    while non_borderline + borderline < 200 {
        // draw a source spanning the three cases
        let n = [1usize, 2][rng.gen_range(0..2)];
        let (s, p) = match rng.gen_range(0..3) {
            0 => {
                // below the critical line
                let p = [1.0, 2.0][rng.gen_range(0..2)];
                (rng.gen_range(0.05..0.95f64).min(n as f64 / p - 0.05), p)
            }
            1 => {
                // exactly on it
                let p = [2.0, 4.0][rng.gen_range(0..2)];
                (n as f64 / p, p)
            }
            _ => {
                // above it
                let p = [2.0, 4.0][rng.gen_range(0..2)];
                (rng.gen_range((n as f64 / p + 0.05).min(0.9)..0.99), p)
            }
        };
        if !(0.0..1.0).contains(&s) || s <= 0.0 {
            continue;
        }
        let q = [0.5, 1.0, 1.5, 2.0, INF][rng.gen_range(0..5)];
        let src = match BesovSpec::new(s, p, q, n) {
            Ok(spec) => spec,
            Err(_) => continue,
        };
        let r = [0.5, 1.0, 2.0, 4.0][rng.gen_range(0..4)];
        let u = [0.5, 1.0, 2.0, INF][rng.gen_range(0..4)];
        // aim the effective exponent at strongly negative, zero, or
        // strongly positive; the numeric oracle is competent exactly there
        let alpha_target = [-1.0, -0.5, 0.0, 0.5, 1.0][rng.gen_range(0..5)];
        let offset = if s < n as f64 / p { s / n as f64 - 1.0 / p } else { 0.0 };
        let a = alpha_target - 1.0 / r - offset;
        let b = (rng.gen_range(-4i32..=4) as f64) * 0.5;
        let weight = match PowerLogWeight::new(1.0, a, b, 1.0) {
            Ok(w) => Weight::PowerLog(w),
            Err(_) => continue,
        };
        let tgt = match LorentzSpec::new(r, u, weight, 1.0) {
            Ok(t) => t,
            Err(_) => continue,
        };
        let v = classify_embedding(&src, &tgt, &probes, &rule).unwrap();
        case_counts[match v.case_tag {
            CaseTag::I => 0,
            CaseTag::II => 1,
            CaseTag::III => 2,
        }] += 1;
        if v.borderline {
            borderline += 1;
            // never misclassified: the numeric verdict may be inconclusive
            // but must not contradict the symbolic call
            let contradicts = match v.outcome {
                EmbeddingOutcome::Compact => v.numeric_verdict == LimitVerdict::Diverges,
                EmbeddingOutcome::RefinementCompact | EmbeddingOutcome::CriterionFails => {
                    v.numeric_verdict == LimitVerdict::TendsToZero
                }
                EmbeddingOutcome::NotDecidedByCriterion => false,
            };
            assert!(!contradicts, "borderline tuple contradicted: {}", v.certificate);
        } else {
            non_borderline += 1;
            let expect = match v.outcome {
                EmbeddingOutcome::Compact => LimitVerdict::TendsToZero,
                _ => LimitVerdict::Diverges,
            };
            assert_eq!(
                v.numeric_verdict, expect,
                "disagreement at alpha={:?}, beta={:?}, u={}: {}",
                v.alpha, v.beta, v.target_u, v.certificate
            );
        }
    }
    assert!(case_counts.iter().all(|&c| c >= 20), "case coverage {case_counts:?}");
    println!("PASS: criterion 9 - classifier/oracle agreement ({non_borderline} non-borderline matched, {borderline} borderline uncontradicted, cases {case_counts:?})");
}

/// Criterion 10: uniform-decay witnesses and covering behaviour.
#[test]
fn criterion_10_uac_witnesses_and_covering() {
    // (a) single indicator in L_2 over [0,2]: uniform decay with exponent 1/2
    let bd2 = BoxDomain::interval(0.0, 2.0).unwrap();
    let chi = SampledFunction::indicator_1d(bd2, 1 << 22, 0.0, 1.0, 1.0).unwrap();
    let l2 = LorentzSpec::unweighted(2.0, 2.0, 2.0).unwrap();
    let probes: Vec<f64> = (4..=20).map(|k| 2f64.powi(-k)).collect();
    let report = uac_check(&[chi], &l2, &probes, &LimitRule::default(), "indicator").unwrap();
    assert!(matches!(report.verdict, UacVerdict::Uac), "{:?}", report.sup_tail_norms);
    let slope = report.fitted_decay_exponent.unwrap();
    assert!((slope - 0.5).abs() <= 0.05, "decay exponent {slope}");
    drop(report);

    // (b) concentrating spikes: no uniform decay, witness tail >= 0.99
    let bd1 = BoxDomain::interval(0.0, 1.0).unwrap();
    let spikes = make_family(
        &FamilySpec::ConcentratingSpike {
            count: 64,
            p: 2.0,
            grading: SpikeGrading::Linear,
        },
        &bd1,
        &[1 << 12],
    )
    .unwrap();
    let l2_unit = LorentzSpec::unweighted(2.0, 2.0, 1.0).unwrap();
    let spike_probes: Vec<f64> = (1..=6).map(|k| 2f64.powi(-k)).collect();
    let spike_report =
        uac_check(&spikes, &l2_unit, &spike_probes, &LimitRule::default(), "spikes").unwrap();
    match &spike_report.verdict {
        UacVerdict::NotUac { witness } => assert!(witness.value >= 0.99),
        UacVerdict::Uac => panic!("spike family must fail"),
    }
    assert!(spike_report.sup_tail_norms.iter().all(|&v| v >= 0.99));

    // (c) geometrically graded spikes stay quasi-norm-separated: the net at
    // radius 1/2 keeps at least half the family
    let ratio = 2f64.powf(17.0 / 63.0);
    let sep_spikes = make_family(
        &FamilySpec::ConcentratingSpike {
            count: 64,
            p: 0.5,
            grading: SpikeGrading::Geometric { ratio },
        },
        &bd1,
        &[1 << 17],
    )
    .unwrap();
    let l_half = LpSpec::new(0.5).unwrap();
    let net = covering_estimate(&sep_spikes, &l_half, 0.5).unwrap();
    assert!(net.net_size >= 32, "net size {} < 32", net.net_size);
    drop(sep_spikes);

    // (d) a unit-ball bump sample saturates: doubling the family grows the
    // net by less than 10%
    let src = BesovSpec::new(0.5, 2.0, 2.0, 1).unwrap();
    let ambient = BoxDomain::interval(-1.0, 2.0).unwrap();
    let sample = besov_ball_sample(&src, 128, 1010, &ambient, 768).unwrap();
    let omega = BoxDomain::interval(0.0, 1.0).unwrap();
    let restricted: Vec<SampledFunction> =
        sample.iter().map(|f| f.restrict(&omega).unwrap()).collect();
    let l2_omega = LpSpec::new(2.0).unwrap();
    let net64 = covering_estimate(&restricted[..64], &l2_omega, 0.15)
        .unwrap()
        .net_size;
    let net128 = covering_estimate(&restricted, &l2_omega, 0.15).unwrap().net_size;
    assert!(
        (net128 as f64 - net64 as f64) < 0.1 * net64 as f64,
        "net grew {net64} -> {net128}"
    );
    println!("PASS: criterion 10 - uniform decay (exponent {slope:.3}), spike witness >= 0.99, separated net {} >= 32, bump nets {net64} -> {net128}", net.net_size);
}

/// Criterion 11: the axiom battery.
#[test]
fn criterion_11_axiom_battery() {
    let mut rng = ChaCha8Rng::seed_from_u64(1011);
    let spec = LorentzSpec::unweighted(1.0, 2.0, 2.0).unwrap();

    // (P1) homogeneity, exact to floating point
    let mut worst_hom = 0.0f64;
    for _ in 0..50 {
        let f = random_function(&mut rng, 48, 2.0, -2.0, 2.0);
        let a = rng.gen_range(0.0..4.0);
        let nf = spec.quasinorm(&f).unwrap().value;
        let na = spec.quasinorm(&f.scale(a).unwrap()).unwrap().value;
        if a * nf > 0.0 {
            worst_hom = worst_hom.max((na - a * nf).abs() / (a * nf));
        }
    }
    assert!(worst_hom <= 1e-12, "homogeneity error {worst_hom}");

    // (P2) lattice monotonicity, exact: shrink each cell independently
    for _ in 0..100 {
        let f = random_function(&mut rng, 48, 2.0, -2.0, 2.0);
        let mask = random_function(&mut rng, 48, 2.0, 0.0, 1.0);
        let g = f.zip(&mask, |v, m| v * m).unwrap();
        let nf = spec.quasinorm(&f).unwrap().value;
        let ng = spec.quasinorm(&g).unwrap().value;
        assert!(ng <= nf * (1.0 + 1e-12), "monotonicity: {ng} > {nf}");
    }

    // (P3) monotone norm convergence to 1e-6
    for _ in 0..50 {
        let f = random_function(&mut rng, 32, 2.0, -2.0, 2.0);
        let nf = spec.quasinorm(&f).unwrap().value;
        let mut prev = 0.0;
        for k in 1..=21 {
            let nk = spec.quasinorm(&f.scale(1.0 - 2f64.powi(-k)).unwrap()).unwrap().value;
            assert!(nk + 1e-12 >= prev, "norms must be non-decreasing");
            prev = nk;
        }
        assert!(
            (prev - nf).abs() <= 1e-6 * (1.0 + nf),
            "monotone limit off by {}",
            (prev - nf).abs()
        );
    }

    // Fatou inequality on 100 constructed a.e.-convergent sequences
    for trial in 0..100 {
        let f = random_function(&mut rng, 48, 2.0, -2.0, 2.0);
        let nf = spec.quasinorm(&f).unwrap().value;
        let tail_min = if trial % 2 == 0 {
            // masks exhausting the box; the final mask recovers f exactly
            let mut v = f64::INFINITY;
            for k in 1..=6 {
                let cells = (48 * k / 6).min(48);
                let masked = f.restrict_to_cells(&(0..cells).collect::<Vec<_>>()).unwrap();
                v = spec.quasinorm(&masked).unwrap().value;
            }
            v
        } else {
            let mut v = f64::INFINITY;
            for k in 14..=20 {
                let fk = f.scale(1.0 - 2f64.powi(-k)).unwrap();
                v = v.min(spec.quasinorm(&fk).unwrap().value);
            }
            v
        };
        assert!(
            nf <= tail_min + 1e-4 * (1.0 + nf),
            "Fatou violated: {nf} > liminf {tail_min}"
        );
    }

    // iterated-integral inequality for p in {1, 2, 4} on 100 random
    // two-variable functions
    let bd2 = BoxDomain::new(vec![0.0, 0.0], vec![1.0, 1.0]).unwrap();
    for _ in 0..100 {
        let vals: Vec<f64> = (0..16 * 16).map(|_| rng.gen_range(0.0..2.0)).collect();
        let f2 = SampledFunction::new(bd2.clone(), vec![16, 16], vals).unwrap();
        for &p in &[1.0, 2.0, 4.0] {
            assert!(
                matches!(
                    minkowski_property_check(&f2, p).unwrap(),
                    MinkowskiCheck::Holds { .. }
                ),
                "iterated-integral inequality failed at p = {p}"
            );
        }
    }
    println!("PASS: criterion 11 - axiom battery (homogeneity {worst_hom:.2e}, monotonicity, monotone limits, Fatou x100, iterated integrals x300)");
}
