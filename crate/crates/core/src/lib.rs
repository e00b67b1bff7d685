//! Exact-arithmetic toolkit for affine subtransitivity of point
//! configurations.
//!
//! Given d+2 points whose first d+1 form an affine basis, a finite group of
//! rational orthogonal matrices, and a tuple (g_1, ..., g_{d+1}) of its
//! elements, the crate decides exactly whether some nonconstant affine map f
//! satisfies f(x_k) = g_k f(x_0) for all k. On top of the decision it
//! provides witness search across whole tuple spaces, a per-tuple genericity
//! certificate evaluated at the point (1/(2d), ..., 1/(2d)), and a
//! deterministic Monte Carlo harness that measures how rarely random
//! spherical configurations admit witnesses.
//!
//! Every decision reduces to rank computations over arbitrary-precision
//! rationals; no floating point is used anywhere.

pub mod decide;
pub mod error;
pub mod experiments;
pub mod geometry;
pub mod groups;
pub mod linalg;
pub mod rational;
pub mod simplex;

pub use decide::{
    build_system, certify_generic, decide, decide_configuration, oracle_decide, search_tuples,
    verify_witness, AffineWitness, ConfigurationDecision, ConfigurationWitness, DecisionOutcome,
    SearchOptions, SubtransDecision, SubtransInstance, TupleWitness,
};
pub use error::{Error, Result};
pub use experiments::{
    certify_group, check_configuration, run_montecarlo, verify_report, CertifyOutcome,
    CheckOutcome, ExperimentPlan, ExperimentReport, InjectedTrialSource, ReportVerification,
    SphereTrialSource, TrialSource, TupleModeSpec,
};
pub use geometry::{
    affinely_independent, configuration_from_json, configuration_to_json, convex_position,
    inverse_stereographic, phi, sample_configuration, sample_sphere_point, AlphaCoordinates,
    PhiOutcome, PointConfiguration,
};
pub use groups::{
    builtin_group, close_group, enumerate_tuples, fixed_subspace, group_from_spec,
    parse_group_spec, ElementTuple, FiniteMatrixGroup, GroupElement, GroupSpec, TupleMode,
    DEFAULT_CLOSURE_CAP, DEFAULT_TUPLE_CAP,
};
pub use linalg::{RationalMatrix, Subspace};
pub use rational::{format_rational, parse_rational, Rational};
