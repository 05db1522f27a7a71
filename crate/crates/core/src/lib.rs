//! Measure-theoretic comparison of weighted backward shifts on `l_p`.
//!
//! The backward shift with weight sequence `w = (w_n)` sends `e_n` to
//! `w_n e_{n-1}` (and `e_0` to zero). This crate decides, constructs, and
//! empirically verifies the relationships between two such operators:
//!
//! * [`weights`] — symbolic weight sequences, cumulative log-products, and
//!   the summability criteria that control chaos and the existence of
//!   non-trivial invariant measures;
//! * [`orthocheck`] — similarity and orthogonality tests built on the product
//!   ratio `u_1..u_n / v_1..v_n`, including shared-periodic-point witnesses;
//! * [`measures`] — invariant product measures `mu_0 x mu_1 x ...` with
//!   marginals pushed forward by the reciprocal products, sampling, and
//!   support tests;
//! * [`hellinger`] — marginal overlap integrals and the product-measure
//!   dichotomy (equivalent or mutually singular), with Gaussian closed forms;
//! * [`autocorr`] — the overlap transform of density profiles, its log-scale
//!   substitution, and the one-sided derivative formulas behind the
//!   equivalence criteria for non-Gaussian marginals;
//! * [`orbits`] — orbit simulation, visit densities, and Monte Carlo
//!   orthogonality witnesses.
//!
//! The numeric core is generic over the scalar type through [`real::Real`]
//! (`f32` or `f64`); the aliases at the crate root fix `f64`, which is what
//! the shipped tolerances assume. Exact checks (telescoping identities,
//! eventually-constant ratios) run on arbitrary-precision rationals whenever
//! the weight spec evaluates rationally, independent of the float type.

pub mod autocorr;
pub mod bundles;
pub mod cert;
pub mod error;
pub mod hellinger;
pub mod measures;
pub mod orbits;
pub mod orthocheck;
pub mod quad;
pub mod real;
pub mod rngutil;
pub mod scalar;
pub mod special;
pub mod stats;
pub mod verdict;
pub mod weights;

pub use error::{Error, Result};
pub use scalar::SpecScalar;
pub use verdict::{Rule, Status, Verdict};
pub use weights::{Field, WeightSpec};

pub use num_complex;

/// `f64` instantiations of the generic core types.
pub type LogSeries = weights::LogProductSeries<f64>;
pub type Summability = weights::SummabilityVerdict<f64>;
pub type FixedPoint = weights::FixedPointVector<f64>;
pub type Marginal = measures::MarginalMeasure<f64>;
pub type ProductMeasure = measures::InvariantProductMeasure<f64>;
pub type Profile = autocorr::DensityProfile<f64>;
pub type Report = orthocheck::OrthogonalityReport;
