//! Three-valued verdicts.
//!
//! Asymptotic conditions (limsup infinite, series convergent, ...) are not
//! decidable from a finite horizon. Every decision in this crate is therefore
//! three-valued: `Established` and `Refuted` require either a symbolic rule or
//! an explicit certified threshold crossing, and `Undecided` records the
//! horizon that was insufficient.

use serde::{Deserialize, Serialize};

/// Outcome of a single decision rule.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Status {
    Established,
    Refuted,
    Undecided,
}

impl Status {
    pub fn established(self) -> bool {
        self == Status::Established
    }

    pub fn refuted(self) -> bool {
        self == Status::Refuted
    }
}

/// The decision rule a verdict cites. Named by what the rule decides.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Rule {
    /// Certified linear structure of the cumulative log-moduli.
    SymbolicLinearGrowth,
    /// Cumulative log-moduli crossed the configured threshold.
    LogProductThreshold,
    /// Geometric domination of the series terms (ratio or root form).
    GeometricDomination,
    /// Dyadic block sums decay geometrically.
    BlockDecay,
    /// Series terms stay bounded away from zero.
    TermsDoNotVanish,
    /// Implied by a stronger established property of the same spec.
    ImpliedByStronger,
    /// Orbit-based summability certificate (bounded orbit hitting a
    /// positive-density time set with non-vanishing first coordinate).
    OrbitCertificate,
    /// Product-ratio band boundedness (similarity of shifts).
    SimilarityBand,
    /// Product-ratio divergence (one-sided escape of the log-ratio).
    RatioDivergence,
    /// Product-ratio oscillation growing without bound on both sides.
    RatioOscillation,
    /// Windowed product-ratio divergence over all tested window lengths.
    WindowDivergence,
    /// Same-operator scalar multiples: moduli comparison.
    ScalarPairModulus,
    /// Weights bounded below plus non-similarity.
    BoundedBelowDichotomy,
    /// Shared periodic point witness.
    PeriodicWitness,
    /// Scale-symmetrized common invariant measure for equal moduli.
    PhaseSymmetrization,
    /// Equivalent invariant scale-family (Gaussian) product measures.
    GaussianEquivalence,
    /// Product-measure dichotomy from the marginal overlap series.
    KakutaniProduct,
    /// Eventually constant product ratio with discrete marginals.
    DiscreteRatioConstancy,
    /// Square-summability of the log-translate sequence.
    TranslateSquareSummability,
    /// Monte Carlo joint-pullback witness.
    EmpiricalPullback,
    /// Tail-probability series certifies unit mass on l1.
    TailSeriesSummable,
    /// Certified limit of the product ratio plus density match.
    LimitScale,
    /// Overlap-series criterion for density profiles (quadratic or linear).
    OverlapSeriesCriterion,
    /// Empirical visit-density estimate.
    VisitDensity,
    /// Sampling-based invariance check.
    SampleInvariance,
}

/// A three-valued decision with the rule applied and its numeric evidence.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Verdict {
    pub status: Status,
    pub rule: Rule,
    /// Free-form numeric payload: window values, witnesses, horizons.
    pub evidence: serde_json::Value,
}

impl Verdict {
    pub fn new(status: Status, rule: Rule, evidence: serde_json::Value) -> Self {
        Verdict { status, rule, evidence }
    }

    pub fn established(rule: Rule, evidence: serde_json::Value) -> Self {
        Self::new(Status::Established, rule, evidence)
    }

    pub fn refuted(rule: Rule, evidence: serde_json::Value) -> Self {
        Self::new(Status::Refuted, rule, evidence)
    }

    pub fn undecided(rule: Rule, evidence: serde_json::Value) -> Self {
        Self::new(Status::Undecided, rule, evidence)
    }
}
