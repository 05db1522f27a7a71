//! Canonical weight-sequence pairs used by the test suite and shipped as
//! bundled experiment configs. Each pair exercises a different decision path:
//!
//! * `scaled-2-3` — scalar multiples of the unweighted shift; orthogonal.
//! * `prefix-cycle` — constant 2 against a one-entry prefix of 3; the pair
//!   shares a period-two point, hence is not orthogonal (and is similar).
//! * `sparse-swap` — base weight 2 with reciprocal exceptions at swapped
//!   positions inside length-five blocks anchored at geometric positions;
//!   shares a period-five point while the product ratio oscillates
//!   unboundedly, so the pair is non-orthogonal yet not similar.
//! * `telescope-drift` — constant 2 against a telescoping perturbation with
//!   harmonically decaying drift; no shared periodic point, but the pair
//!   admits equivalent invariant Gaussian product measures.
//! * `prefix-discrete` — constant 2 against prefix [1, 4]; the product ratio
//!   is eventually constant, giving equivalent discrete product measures.

use crate::weights::{EpsilonSeq, ExceptionGen, FamilyValue, WeightSpec};

/// `u_n = 2`, `v_n = 3`.
pub fn scaled_2_3() -> (WeightSpec, WeightSpec) {
    (WeightSpec::constant(2.0), WeightSpec::constant(3.0))
}

/// `u_n = 2`; `v_1 = 3`, `v_n = 2` afterwards.
pub fn prefix_cycle() -> (WeightSpec, WeightSpec) {
    (
        WeightSpec::constant(2.0),
        WeightSpec::prefix_then_constant(vec![3.0], 2.0),
    )
}

/// Swapped sparse exceptions with value `1/k` inside blocks at `5 r^k`:
/// `u` is exceptional at offsets {1, 4}, `v` at offsets {2, 3}.
pub fn sparse_swap(ratio: u64) -> (WeightSpec, WeightSpec) {
    let family = |offsets: Vec<u64>| ExceptionGen::Formula {
        coeff: 5,
        ratio,
        offsets,
        value: FamilyValue::OneOverK,
    };
    (
        WeightSpec::sparse(2.0, family(vec![1, 4])),
        WeightSpec::sparse(2.0, family(vec![2, 3])),
    )
}

/// `u_n = 2`, `v_n = 2 (1 + eps_n) / (1 + eps_{n-1})` with `eps_n = n^{-power}`.
pub fn telescope_drift(power: f64) -> (WeightSpec, WeightSpec) {
    (
        WeightSpec::constant(2.0),
        WeightSpec::ratio_telescope(2.0, EpsilonSeq::InversePower { power }),
    )
}

/// `u_n = 2`; `v_1 = 1`, `v_2 = 4`, `v_n = 2` afterwards.
pub fn prefix_discrete() -> (WeightSpec, WeightSpec) {
    (
        WeightSpec::constant(2.0),
        WeightSpec::prefix_then_constant(vec![1.0, 4.0], 2.0),
    )
}

/// All bundled pairs with their names.
pub fn all() -> Vec<(&'static str, WeightSpec, WeightSpec)> {
    let add = |name, (u, v): (WeightSpec, WeightSpec)| (name, u, v);
    vec![
        add("scaled-2-3", scaled_2_3()),
        add("prefix-cycle", prefix_cycle()),
        add("sparse-swap", sparse_swap(4)),
        add("telescope-drift", telescope_drift(1.0)),
        add("prefix-discrete", prefix_discrete()),
    ]
}

/// Name of the bundle structurally matching the pair, if any.
pub fn match_pair(u: &WeightSpec, v: &WeightSpec) -> Option<&'static str> {
    all()
        .into_iter()
        .find(|(_, bu, bv)| bu == u && bv == v)
        .map(|(name, _, _)| name)
}
