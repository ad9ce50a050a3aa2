//! Compactness machinery: uniform absolute-continuity diagnostics, the three
//! classical precompactness conditions (boundedness, vanishing tails,
//! equicontinuity), greedy covering estimates, growth envelopes, and the
//! compact-embedding classifier for Besov sources into weighted Lorentz
//! targets.
//!
//! Numeric limits go through the documented finite-probe rule of
//! [`crate::fit::LimitRule`]; symbolic verdicts are exact on the power-log
//! weight family. The classifier reports that its criterion fails, never
//! that an embedding is non-compact: the conditions it checks are
//! sufficient, not necessary.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::besov::{besov_quasinorm, difference_by_cells, lattice_shifts, BesovSpec};
use crate::error::{Error, Result};
use crate::fit::{fit_loglog, LimitRule, LimitVerdict};
use crate::lorentz::{reciprocal, sup_power_log, FunctionNorm, LorentzSpec};
use crate::measure::{BoxDomain, MeasurableSetSeq, SampledFunction};
use crate::quad::power_log_integral;
use crate::rearrange::rearrangement;
use crate::weight::Weight;

/// Exponents within this distance of a case boundary are snapped onto it.
const CASE_SNAP: f64 = 1e-12;

/// Numeric borderline band for the classifier's leading exponent.
pub const BORDERLINE_ALPHA: f64 = 0.01;

// ---------------------------------------------------------------------------
// Uniform absolute continuity
// ---------------------------------------------------------------------------

/// Witness of a failed uniform-decay check.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct UacWitness {
    pub probe: f64,
    pub member: usize,
    pub value: f64,
}

/// Verdict of the uniform absolute-continuity diagnostic.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum UacVerdict {
    Uac,
    NotUac { witness: UacWitness },
}

/// Report of the head-truncated quasi-norm sweep over a family.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct UacReport {
    pub family_id: String,
    pub delta_probes: Vec<f64>,
    pub sup_tail_norms: Vec<f64>,
    pub verdict: UacVerdict,
    pub fitted_decay_exponent: Option<f64>,
}

/// Evaluates `sup over the family of the (0, delta)-truncated quasi-norm`
/// along decreasing probes. The family is uniformly absolutely continuous
/// (verdict `Uac`) when the sup sequence passes the tends-to-zero rule;
/// otherwise the largest offender at the finest probe is returned as witness.
///
/// Probes below the coarsest cell measure of the family are rejected: the
/// truncation would pretend to resolve mass the grid cannot represent.
pub fn uac_check(
    family: &[SampledFunction],
    spec: &LorentzSpec,
    probes: &[f64],
    rule: &LimitRule,
    family_id: &str,
) -> Result<UacReport> {
    if probes.is_empty() || probes.windows(2).any(|w| w[1] >= w[0]) {
        return Err(Error::Domain("need strictly decreasing probes".into()));
    }
    let coarsest = family
        .iter()
        .map(|f| f.cell_measure())
        .fold(0.0f64, f64::max);
    let finest = *probes.last().unwrap();
    if !family.is_empty() && finest < coarsest * (1.0 - 1e-12) {
        return Err(Error::Resolution(format!(
            "finest probe {finest} is below the coarsest cell measure {coarsest}"
        )));
    }
    let profiles: Vec<_> = family.iter().map(rearrangement).collect();
    let mut sup_tail_norms = Vec::with_capacity(probes.len());
    let mut arg_sup = Vec::with_capacity(probes.len());
    for &delta in probes {
        let per_member: Vec<f64> = profiles
            .par_iter()
            .map(|p| spec.truncated_quasinorm(p, delta).map(|v| v.value))
            .collect::<Result<Vec<_>>>()?;
        let (best_idx, best) = per_member
            .iter()
            .enumerate()
            .fold((0usize, 0.0f64), |acc, (i, &v)| {
                if v > acc.1 {
                    (i, v)
                } else {
                    acc
                }
            });
        sup_tail_norms.push(best);
        arg_sup.push(best_idx);
    }
    let pairs: Vec<(f64, f64)> = probes.iter().copied().zip(sup_tail_norms.iter().copied()).collect();
    let (limit, slope) = rule.classify(&pairs);
    let verdict = if limit == LimitVerdict::TendsToZero {
        UacVerdict::Uac
    } else {
        let last = probes.len() - 1;
        UacVerdict::NotUac {
            witness: UacWitness {
                probe: probes[last],
                member: arg_sup[last],
                value: sup_tail_norms[last],
            },
        }
    };
    Ok(UacReport {
        family_id: family_id.to_string(),
        delta_probes: probes.to_vec(),
        sup_tail_norms,
        verdict,
        fitted_decay_exponent: slope,
    })
}

/// Verdict of the single-function absolute-continuity check.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AcVerdict {
    Ac,
    NotAc,
}

/// Verifies `||f chi_{E_n}|| decreasing to 0` along a nested set sequence
/// shrinking to the empty set.
pub fn ac_single_check(
    f: &SampledFunction,
    spec: &LorentzSpec,
    shrinking: &MeasurableSetSeq,
    zero_tol: f64,
) -> Result<AcVerdict> {
    if !shrinking.is_nested() {
        return Err(Error::InvalidSequence(
            "absolute-continuity check needs a nested shrinking sequence".into(),
        ));
    }
    let mut values = Vec::with_capacity(shrinking.len());
    for set in shrinking.sets() {
        let masked = f.restrict_to_cells(set)?;
        values.push(spec.quasinorm(&masked)?.value);
    }
    let monotone = values.windows(2).all(|w| w[1] <= w[0] * (1.0 + 1e-9) + 1e-300);
    let vanishes = values.last().is_some_and(|&v| v <= zero_tol);
    Ok(if monotone && vanishes {
        AcVerdict::Ac
    } else {
        AcVerdict::NotAc
    })
}

// ---------------------------------------------------------------------------
// Precompactness conditions over an ambient box
// ---------------------------------------------------------------------------

/// Outcome of the vanishing-tail condition.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum TailCheck {
    Pass { sup_outside: f64 },
    Fail { witness: usize, value: f64 },
}

/// Checks `sup over the family of || u chi_(box \ G) || < eps`: all mass must
/// live inside the window `G`. Cells are attributed by their centers.
pub fn tail_condition_check<N: FunctionNorm>(
    family: &[SampledFunction],
    norm: &N,
    window: &BoxDomain,
    eps: f64,
) -> Result<TailCheck> {
    let mut worst = 0.0f64;
    let mut witness = 0usize;
    for (idx, u) in family.iter().enumerate() {
        if !u.box_domain.contains(window) {
            return Err(Error::Domain(
                "window box must sit inside the ambient box of every member".into(),
            ));
        }
        let outside = mask_outside(u, window)?;
        let v = norm.norm_fn(&outside)?;
        if v > worst {
            worst = v;
            witness = idx;
        }
    }
    if worst < eps {
        Ok(TailCheck::Pass { sup_outside: worst })
    } else {
        Ok(TailCheck::Fail {
            witness,
            value: worst,
        })
    }
}

fn mask_outside(u: &SampledFunction, window: &BoxDomain) -> Result<SampledFunction> {
    let dim = u.box_domain.dim();
    let values: Vec<f64> = (0..u.cell_count())
        .map(|flat| {
            let x = u.cell_center(flat);
            let inside = (0..dim).all(|a| x[a] >= window.lower[a] && x[a] <= window.upper[a]);
            if inside {
                0.0
            } else {
                u.values[flat]
            }
        })
        .collect();
    SampledFunction::new(u.box_domain.clone(), u.cells_per_axis.clone(), values)
}

/// Outcome of the uniform-smoothness (translation equicontinuity) condition.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum EquicontinuityCheck {
    Pass { sup_difference: f64 },
    Fail { member: usize, shift: Vec<f64>, value: f64 },
}

/// Checks `sup over members and lattice shifts |h| < delta of
/// || u(.+h) - u || < eps`.
pub fn equicontinuity_check<N: FunctionNorm>(
    family: &[SampledFunction],
    norm: &N,
    delta: f64,
    eps: f64,
) -> Result<EquicontinuityCheck> {
    if !(delta > 0.0) {
        return Err(Error::Domain(format!("shift bound must be positive, got {delta}")));
    }
    let mut worst = 0.0f64;
    let mut witness: Option<(usize, Vec<f64>)> = None;
    let mut any_shift = false;
    for (idx, u) in family.iter().enumerate() {
        let shifts: Vec<_> = lattice_shifts(u, delta)
            .into_iter()
            .filter(|&(_, len)| len < delta * (1.0 - 1e-12))
            .collect();
        if shifts.is_empty() {
            continue;
        }
        any_shift = true;
        let evaluated: Vec<(f64, Vec<i64>)> = shifts
            .par_iter()
            .map(|(k, _)| {
                norm.norm_fn(&difference_by_cells(u, k))
                    .map(|v| (v, k.clone()))
            })
            .collect::<Result<Vec<_>>>()?;
        for (v, k) in evaluated {
            if v > worst {
                worst = v;
                let h: Vec<f64> = k
                    .iter()
                    .enumerate()
                    .map(|(a, &kk)| kk as f64 * u.cell_side(a))
                    .collect();
                witness = Some((idx, h));
            }
        }
    }
    if !family.is_empty() && !any_shift {
        return Err(Error::Resolution(format!(
            "no lattice shift fits strictly below delta = {delta}; the grids are too coarse"
        )));
    }
    match witness {
        Some((member, shift)) if worst >= eps => Ok(EquicontinuityCheck::Fail {
            member,
            shift,
            value: worst,
        }),
        _ => Ok(EquicontinuityCheck::Pass {
            sup_difference: worst,
        }),
    }
}

// ---------------------------------------------------------------------------
// Greedy covering estimate
// ---------------------------------------------------------------------------

/// Greedy (farthest-point-first) covering of a finite family at radius `eps`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CoveringEstimate {
    pub net_size: usize,
    pub net_indices: Vec<usize>,
    /// Largest distance from a member to the net when the loop stopped.
    pub covering_radius: f64,
}

/// Builds an `eps`-net greedily: repeatedly adds the member farthest from
/// the current net until every member is within `eps` of some center. The
/// result is an upper bound on the covering number; growth of `net_size`
/// with family size witnesses non-compactness, saturation is precompactness
/// evidence.
pub fn covering_estimate<N: FunctionNorm>(
    family: &[SampledFunction],
    norm: &N,
    eps: f64,
) -> Result<CoveringEstimate> {
    if !(eps > 0.0) {
        return Err(Error::Domain(format!("covering radius must be positive, got {eps}")));
    }
    if family.is_empty() {
        return Ok(CoveringEstimate {
            net_size: 0,
            net_indices: Vec::new(),
            covering_radius: 0.0,
        });
    }
    let mut net = vec![0usize];
    let mut dist: Vec<f64> = family
        .par_iter()
        .map(|f| norm.norm_fn(&f.sub(&family[0])?))
        .collect::<Result<Vec<_>>>()?;
    loop {
        let (far_idx, far) = dist
            .iter()
            .enumerate()
            .fold((0usize, 0.0f64), |acc, (i, &d)| if d > acc.1 { (i, d) } else { acc });
        if far <= eps {
            return Ok(CoveringEstimate {
                net_size: net.len(),
                net_indices: net,
                covering_radius: far,
            });
        }
        net.push(far_idx);
        let new_dist: Vec<f64> = family
            .par_iter()
            .map(|f| norm.norm_fn(&f.sub(&family[far_idx])?))
            .collect::<Result<Vec<_>>>()?;
        for (d, nd) in dist.iter_mut().zip(new_dist) {
            *d = d.min(nd);
        }
    }
}

// ---------------------------------------------------------------------------
// Growth envelopes
// ---------------------------------------------------------------------------

/// Case selector for envelopes and the embedding classifier.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum CaseTag {
    /// `s < n/p`: polynomial blow-up of the envelope.
    I,
    /// `s = n/p` with `q > 1`: logarithmic blow-up.
    II,
    /// Remaining parameters: bounded envelope.
    III,
}

/// Selects the case from the source parameters, snapping float fuzz onto the
/// boundaries; the second component reports whether snapping happened.
pub fn select_case(src: &BesovSpec) -> (CaseTag, bool) {
    let n_over_p = src.n as f64 * reciprocal(src.p);
    let mut d = src.s - n_over_p;
    let mut snapped = false;
    if d.abs() <= CASE_SNAP * (1.0 + n_over_p) {
        d = 0.0;
        snapped = d != src.s - n_over_p;
    }
    let mut q_gt_one = src.q > 1.0;
    if (src.q - 1.0).abs() <= CASE_SNAP {
        q_gt_one = false;
        snapped = true;
    }
    let tag = if d < 0.0 {
        CaseTag::I
    } else if d == 0.0 && q_gt_one {
        CaseTag::II
    } else {
        CaseTag::III
    };
    (tag, snapped)
}

/// Closed-form growth envelope `t -> t^power * |log t|^log_power` near 0.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct EnvelopeFunction {
    pub case_tag: CaseTag,
    pub power_exp: f64,
    pub log_exp: f64,
}

impl EnvelopeFunction {
    pub fn eval(&self, t: f64) -> f64 {
        t.powf(self.power_exp) * (1.0 / t).ln().abs().powf(self.log_exp)
    }
}

/// The sharp asymptotic order of `sup { f*(t) : ||f|| <= 1 }` as `t -> 0+`:
/// `t^(s/n - 1/p)` below the critical line, `|log t|^(1/q')` on it for
/// `q > 1`, bounded otherwise.
pub fn envelope(src: &BesovSpec) -> EnvelopeFunction {
    let (case_tag, _) = select_case(src);
    match case_tag {
        CaseTag::I => EnvelopeFunction {
            case_tag,
            power_exp: src.s / src.n as f64 - reciprocal(src.p),
            log_exp: 0.0,
        },
        CaseTag::II => EnvelopeFunction {
            case_tag,
            power_exp: 0.0,
            log_exp: 1.0 / src.q_conjugate(),
        },
        CaseTag::III => EnvelopeFunction {
            case_tag,
            power_exp: 0.0,
            log_exp: 0.0,
        },
    }
}

/// Empirical envelope fit from the normalized spike family.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct EnvelopeFit {
    pub slope: f64,
    pub intercept: f64,
    pub probes: Vec<(f64, f64)>,
}

/// Builds spikes of support measure `eps` and height `eps^(s/n - 1/p)` (the
/// normalization that keeps their quasi-norm bounded), takes the supremum of
/// the rearrangements at log-spaced arguments and fits the log-log slope.
/// Only the exponent is fitted; the equivalence constant is not estimated.
pub fn envelope_empirical(
    src: &BesovSpec,
    box_domain: &BoxDomain,
    cells: usize,
    epsilons: &[f64],
) -> Result<EnvelopeFit> {
    if epsilons.len() < 4 {
        return Err(Error::Fit(format!(
            "need at least 4 spike measures to fit a slope, got {}",
            epsilons.len()
        )));
    }
    if box_domain.dim() != 1 {
        return Err(Error::Domain(
            "the spike realization grid is one-dimensional (only the profile matters)".into(),
        ));
    }
    let cell = box_domain.side(0) / cells as f64;
    let exponent = src.s / src.n as f64 - reciprocal(src.p);
    let mut members = Vec::with_capacity(epsilons.len());
    for &eps in epsilons {
        if eps < cell * (1.0 - 1e-9) {
            return Err(Error::Resolution(format!(
                "spike measure {eps} is below one cell ({cell})"
            )));
        }
        let width_cells = ((eps / cell).round() as usize).clamp(1, cells);
        let measure = width_cells as f64 * cell;
        let mut vals = vec![0.0; cells];
        vals[..width_cells].fill(measure.powf(exponent));
        let f = SampledFunction::new(box_domain.clone(), vec![cells], vals)?;
        members.push(rearrangement(&f));
    }
    // probe strictly inside the spike supports
    let mut probes = Vec::new();
    for &eps in &epsilons[1..] {
        let t = eps * 0.999;
        let sup = members
            .iter()
            .map(|p| p.eval(t).unwrap_or(0.0))
            .fold(0.0f64, f64::max);
        if sup > 0.0 {
            probes.push((t, sup));
        }
    }
    let xs: Vec<f64> = probes.iter().map(|&(t, _)| t).collect();
    let ys: Vec<f64> = probes.iter().map(|&(_, v)| v).collect();
    let line = fit_loglog(&xs, &ys)?;
    Ok(EnvelopeFit {
        slope: line.slope,
        intercept: line.intercept,
        probes,
    })
}

// ---------------------------------------------------------------------------
// Embedding classifier
// ---------------------------------------------------------------------------

/// Final classifier outcome. `CriterionFails` means the sufficient condition
/// does not hold; it never claims non-compactness.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EmbeddingOutcome {
    Compact,
    /// The head criterion is not zero, but the sharpened endpoint condition
    /// (`1/r = 1/p - s/n`, `q <= u`, vanishing weight) applies.
    RefinementCompact,
    CriterionFails,
    NotDecidedByCriterion,
}

/// Full classifier certificate: case, effective exponents, symbolic verdict,
/// numeric evidence and the final outcome.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct EmbeddingVerdict {
    pub case_tag: CaseTag,
    pub source: BesovSpec,
    pub target_r: f64,
    pub target_u: f64,
    /// Leading power of the effective integrand (None for tabulated weights).
    pub alpha: Option<f64>,
    /// Total log power of the effective integrand (None for tabulated weights).
    pub beta: Option<f64>,
    pub numeric_verdict: LimitVerdict,
    pub probes: Vec<(f64, f64)>,
    pub slope: Option<f64>,
    /// Within the numeric borderline band of the decision boundary.
    pub borderline: bool,
    /// Verdict rests on numeric probes only (tabulated weight).
    pub empirical: bool,
    pub outcome: EmbeddingOutcome,
    pub certificate: String,
}

impl EmbeddingVerdict {
    /// Does the numeric probe verdict agree with what the symbolic outcome
    /// predicts for the head norm? (`RefinementCompact` and `CriterionFails`
    /// both predict a non-vanishing head.) Borderline parameters whose
    /// numerics do not corroborate are the genuinely inconclusive reports.
    pub fn numeric_corroborates(&self) -> bool {
        match self.outcome {
            EmbeddingOutcome::Compact => self.numeric_verdict == LimitVerdict::TendsToZero,
            EmbeddingOutcome::RefinementCompact | EmbeddingOutcome::CriterionFails => {
                self.numeric_verdict == LimitVerdict::Diverges
            }
            EmbeddingOutcome::NotDecidedByCriterion => false,
        }
    }

    /// True when scripts should treat the report as inconclusive: either the
    /// criterion itself could not decide, or the parameters sit in the
    /// borderline band and the probes do not confirm the symbolic call.
    pub fn is_inconclusive(&self) -> bool {
        self.outcome == EmbeddingOutcome::NotDecidedByCriterion
            || (self.borderline && !self.numeric_corroborates())
    }
}

/// Head norm `|| t^(alpha - 1/u) * (1+log(t_ref/t))^beta ||_{u;(0,delta)}`
/// of the effective integrand; infinite values signal a divergent criterion.
pub fn head_norm(alpha: f64, beta: f64, u: f64, t_ref: f64, delta: f64) -> f64 {
    if u.is_infinite() {
        return sup_power_log(alpha, beta, t_ref, 0.0, delta);
    }
    match power_log_integral(alpha * u - 1.0, beta * u, t_ref, 0.0, delta, 1e-12) {
        Ok(v) => v.value.powf(1.0 / u),
        Err(_) => f64::INFINITY,
    }
}

/// Default probe sequence for the classifier: `delta = 2^-k`, k = 4..=40.
pub fn default_classifier_probes() -> Vec<f64> {
    (4..=40).map(|k| 2f64.powi(-k)).collect()
}

/// Decides the sufficient compactness conditions for the embedding of the
/// Besov source into the weighted Lorentz target on a bounded domain.
///
/// The case is selected from `(s, n/p, q)`; the condition asks that the
/// `(0, delta)`-truncated `u`-norm of `t^(1/r - 1/u + offset) * (extra log) *
/// w(t)` vanish as `delta -> 0`. On the power-log family the limit is
/// decided exactly from the effective exponents `alpha` (power) and `beta`
/// (log): zero iff `alpha > 0`, or `alpha = 0` with `beta*u < -1` (finite
/// `u`) resp. `beta < 0` (`u = inf`). Numeric head-norm probes are attached
/// as evidence; parameters inside the borderline band are flagged and the
/// CLI maps them to a distinct exit code.
pub fn classify_embedding(
    src: &BesovSpec,
    tgt: &LorentzSpec,
    probes: &[f64],
    rule: &LimitRule,
) -> Result<EmbeddingVerdict> {
    let (case_tag, _snapped) = select_case(src);
    let inv_r = reciprocal(tgt.p());
    let u = tgt.q();
    let offset = match case_tag {
        CaseTag::I => src.s / src.n as f64 - reciprocal(src.p),
        CaseTag::II | CaseTag::III => 0.0,
    };
    let extra_log = match case_tag {
        CaseTag::II => 1.0 / src.q_conjugate(),
        _ => 0.0,
    };

    match tgt.weight() {
        Weight::PowerLog(w) => {
            let mut alpha = inv_r + w.a + offset;
            if alpha.abs() <= CASE_SNAP {
                alpha = 0.0;
            }
            let beta = w.b + extra_log;
            let zero_limit = if u.is_infinite() {
                alpha > 0.0 || (alpha == 0.0 && beta < 0.0)
            } else {
                alpha > 0.0 || (alpha == 0.0 && beta * u < -1.0)
            };
            // numeric evidence on the same effective integrand
            let t_ref = w.t_ref();
            let table: Vec<(f64, f64)> = probes
                .iter()
                .map(|&d| (d, w.c * head_norm(alpha, beta, u, t_ref, d)))
                .collect();
            let (numeric_verdict, slope) = rule.classify(&table);
            // finite probes cannot certify limits this close to the boundary
            let borderline = alpha.abs() <= BORDERLINE_ALPHA;
            let refinement = case_tag == CaseTag::I
                && (inv_r - (reciprocal(src.p) - src.s / src.n as f64)).abs() <= CASE_SNAP
                && src.q <= u
                && w.vanishes_at_zero();
            let outcome = if zero_limit {
                EmbeddingOutcome::Compact
            } else if refinement {
                EmbeddingOutcome::RefinementCompact
            } else {
                EmbeddingOutcome::CriterionFails
            };
            let certificate = format!(
                "case {:?}: effective integrand t^({alpha}) * (1+log({t_ref}/t))^({beta}) in the \
                 {u}-norm head; symbolic limit {} zero{}; numeric verdict {:?}{}",
                case_tag,
                if zero_limit { "is" } else { "is not" },
                if refinement {
                    "; endpoint refinement applies (matching exponents, q <= u, vanishing weight)"
                } else {
                    ""
                },
                numeric_verdict,
                if borderline { "; borderline band" } else { "" },
            );
            Ok(EmbeddingVerdict {
                case_tag,
                source: *src,
                target_r: tgt.p(),
                target_u: u,
                alpha: Some(alpha),
                beta: Some(beta),
                numeric_verdict,
                probes: table,
                slope,
                borderline,
                empirical: false,
                outcome,
                certificate,
            })
        }
        Weight::Tabulated(w) => {
            let alpha_base = inv_r + offset;
            let table: Vec<(f64, f64)> = probes
                .iter()
                .map(|&d| (d, tabulated_head_norm(alpha_base, extra_log, u, w, d)))
                .collect();
            let (numeric_verdict, slope) = rule.classify(&table);
            let outcome = match numeric_verdict {
                LimitVerdict::TendsToZero => EmbeddingOutcome::Compact,
                LimitVerdict::Diverges => EmbeddingOutcome::CriterionFails,
                LimitVerdict::Inconclusive => EmbeddingOutcome::NotDecidedByCriterion,
            };
            let certificate = format!(
                "case {case_tag:?}: tabulated weight, numeric-only verdict {numeric_verdict:?} \
                 (empirical)"
            );
            Ok(EmbeddingVerdict {
                case_tag,
                source: *src,
                target_r: tgt.p(),
                target_u: u,
                alpha: None,
                beta: None,
                numeric_verdict,
                probes: table,
                slope,
                borderline: false,
                empirical: true,
                outcome,
                certificate,
            })
        }
    }
}

fn tabulated_head_norm(
    alpha: f64,
    extra_log: f64,
    u: f64,
    w: &crate::weight::TabulatedWeight,
    delta: f64,
) -> f64 {
    if u.is_infinite() {
        let mut best = 0.0f64;
        for (lo, hi, wv) in w.pieces(delta) {
            let sup = sup_power_log(alpha, extra_log, 1.0f64.max(delta), lo, hi) * wv;
            if sup.is_infinite() {
                return f64::INFINITY;
            }
            best = best.max(sup);
        }
        return best;
    }
    let mut acc = 0.0;
    for (lo, hi, wv) in w.pieces(delta) {
        match power_log_integral(
            alpha * u - 1.0,
            extra_log * u,
            1.0f64.max(delta),
            lo,
            hi,
            1e-12,
        ) {
            Ok(piece) => acc += wv.powf(u) * piece.value,
            Err(_) => return f64::INFINITY,
        }
    }
    acc.powf(1.0 / u)
}

// ---------------------------------------------------------------------------
// Lipschitz cutoff (for the multiplier property test only)
// ---------------------------------------------------------------------------

/// Piecewise-linear cutoff: 1 on `core`, 0 at sup-distance `margin` from it,
/// linear in between; sampled at cell centers of the given grid. Used by the
/// multiplier property test, never by verdict logic.
pub fn lipschitz_cutoff(
    core: &BoxDomain,
    margin: f64,
    box_domain: &BoxDomain,
    cells_per_axis: &[usize],
) -> Result<SampledFunction> {
    if !(margin > 0.0) {
        return Err(Error::Domain(format!("cutoff margin must be positive, got {margin}")));
    }
    let proto = SampledFunction::zeros(box_domain.clone(), cells_per_axis.to_vec())?;
    let dim = box_domain.dim();
    let values: Vec<f64> = (0..proto.cell_count())
        .map(|flat| {
            let x = proto.cell_center(flat);
            let mut dist = 0.0f64;
            for a in 0..dim {
                let below = core.lower[a] - x[a];
                let above = x[a] - core.upper[a];
                dist = dist.max(below.max(above).max(0.0));
            }
            (1.0 - dist / margin).max(0.0)
        })
        .collect();
    SampledFunction::new(box_domain.clone(), cells_per_axis.to_vec(), values)
}

/// Seeded sample of smooth bumps normalized to Besov quasi-norm 1: the desk
/// realization of a unit-ball subset for covering and uniform-continuity
/// experiments.
pub fn besov_ball_sample(
    spec: &BesovSpec,
    count: usize,
    seed: u64,
    box_domain: &BoxDomain,
    cells: usize,
) -> Result<Vec<SampledFunction>> {
    use rand::{Rng, SeedableRng};
    if box_domain.dim() != 1 {
        return Err(Error::Domain("bump sample is generated on a 1-d grid".into()));
    }
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let cell = box_domain.side(0) / cells as f64;
    let mut out = Vec::with_capacity(count);
    for _ in 0..count {
        let width = rng.gen_range(0.2..0.8);
        let center = rng.gen_range(0.15..0.85);
        let height = rng.gen_range(0.5..1.5);
        let vals: Vec<f64> = (0..cells)
            .map(|i| {
                let x = box_domain.lower[0] + (i as f64 + 0.5) * cell;
                height * (1.0 - (x - center).abs() / (width / 2.0)).max(0.0)
            })
            .collect();
        let f = SampledFunction::new(box_domain.clone(), vec![cells], vals)?;
        let norm = besov_quasinorm(&f, spec)?.value;
        if norm > 0.0 {
            out.push(f.scale(1.0 / norm)?);
        }
    }
    Ok(out)
}
