//! Laws and unimodular measures of finite graphs, and local weak limits of
//! graph sequences, in exact arithmetic.
//!
//! The numeric core is generic over [`Scalar`]; the aliases at the crate
//! root fix it to arbitrary-precision rationals, which is what every
//! verdict in this crate assumes.

pub mod canonical;
pub mod families;
pub mod graph;
pub mod limits;
pub mod linalg;
pub mod measures;
pub mod quotient;
pub mod scalar;

pub use canonical::{
    agreement_radius, automorphism_orbits, canonical_birooted, canonical_rooted, rho,
    stabilizer_orbit_count, BirootedClass, CanonError, RootedClass, Symmetry,
};
pub use graph::{
    ball, component, delete_subgraph, disjoint_union, r_neighborhood, BirootedGraph, Graph,
    GraphError, GraphJson, RootedGraph, DEFAULT_DELTA,
};
pub use limits::{
    average_degree, ball_agreement_radius, ball_distribution, convergence_report, integrate_limit,
    limit_ball_distribution, negligence_delta, tv_distance, LimitError, RayKind, RootedOracle,
};
pub use measures::{
    check_unimodular_criterion, check_unimodular_definitional, integrate, law,
    law_of_disjoint_union, solve_unimodular, LocalFunction, LocalRule, MeasureError, Verdict,
    Witness,
};
pub use quotient::{
    decide_judicial, quotient_of_finite, validate_consistency, LabeledQuotient, Quotient,
    QuotientError, QuotientJson, RayQuotient,
};
pub use scalar::Scalar;

/// Exact rationals with arbitrary-precision integers.
pub type Rational = num_rational::BigRational;

pub type Measure = measures::SustainedMeasure<Rational>;
pub type Solution = measures::UnimodularSolution<Rational>;
pub type Distribution = limits::BallDistribution<Rational>;
pub type Limit = limits::LimitMeasure<Rational>;
pub type Judiciality = quotient::JudicialityVerdict<Rational>;
pub type QuotientMasses = quotient::QuotientMeasure<Rational>;
