//! Function-space quantities on gridded functions: non-increasing
//! rearrangements, weighted Lorentz-type quasi-norms, Besov quasi-norms via
//! first differences, and the compactness diagnostics built on top of them
//! (uniform absolute continuity, translation equicontinuity, covering
//! estimates, growth envelopes and a compact-embedding classifier).
//!
//! # Model
//!
//! Functions are real-valued and piecewise constant on uniform grids over
//! bounded boxes, so rearrangements and all integrals over the box are exact
//! cell arithmetic. Rearrangements are kept as exact step functions; the
//! only numerical error in a quasi-norm is the per-segment quadrature of
//! power-log integrands, which has closed forms in the common cases and
//! adaptive Gauss-Kronrod (on a log-substituted axis) otherwise.
//!
//! Weights live in the power-log family `c * t^a * (1 + log(t_ref/t))^b`,
//! on which finiteness, doubling and vanishing questions are decidable from
//! the exponents; tabulated step weights are the escape hatch for
//! counterexamples and produce verdicts flagged as empirical.
//!
//! Numeric limit claims ("this head norm vanishes", "this family has no
//! uniform decay") go through one documented finite-probe rule
//! ([`fit::LimitRule`]): eventual monotonicity plus a threshold plus a
//! fitted log-log slope, with an explicit inconclusive outcome instead of a
//! guess.
//!
//! Everything is immutable after construction and deterministic; randomized
//! estimators take explicit seeds. Families, probes and shift lattices are
//! evaluated in parallel where that cannot change results.

pub mod besov;
pub mod compact;
pub mod error;
pub mod fit;
pub mod lorentz;
pub mod measure;
pub mod quad;
pub mod rearrange;
pub mod weight;

pub use besov::{
    besov_quasinorm, besov_quasinorm_with, difference, make_family, modulus, modulus_profile,
    y_assumption_check, BesovNorm, BesovSpec, FamilySpec, Modulus, PowerY, SpikeGrading,
    YAssumption, YQuasiNorm,
};
pub use compact::{
    ac_single_check, besov_ball_sample, classify_embedding, covering_estimate,
    default_classifier_probes, envelope, envelope_empirical, equicontinuity_check,
    lipschitz_cutoff, tail_condition_check, uac_check, AcVerdict, CaseTag, CoveringEstimate,
    EmbeddingOutcome, EmbeddingVerdict, EnvelopeFit, EnvelopeFunction, EquicontinuityCheck,
    TailCheck, UacReport, UacVerdict, UacWitness,
};
pub use error::{Error, Result};
pub use fit::{fit_line, fit_loglog, LimitRule, LimitVerdict, LineFit};
pub use lorentz::{
    big_b_of, minkowski_property_check, BConvexity, BigB, Delta2, FunctionNorm, LorentzSpec,
    LpSpec, MinkowskiCheck, NormValue, QuasiNormConstants,
};
pub use measure::{dist_in_measure, BoxDomain, MeasurableSetSeq, SampledFunction};
pub use quad::{adaptive_gk, power_log_integral, Method, QuadValue};
pub use rearrange::{distribution, maximal, rearrangement, DecreasingProfile};
pub use weight::{
    doubling_failure_spike_weight, PowerLogWeight, TabulatedWeight, Weight, WeightSpec,
};
