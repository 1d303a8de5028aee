//! Exact solver and tensor-level certifier for m-quasi-Einstein
//! left-invariant metrics on compact simple Lie groups and their duals.
//!
//! The crate is organised as
//! - [`lie`]: structure constants, Killing forms, block metrics, dualization;
//! - [`catalog`]: embedding cases `k ⊂ g` and their matrix realizations;
//! - [`curvature`]: connections, Ricci tensors and the modified tensor `Ric_X^m`;
//! - [`solver`]: exact solutions of the quasi-Einstein systems;
//! - [`verifier`]: numeric certificates on explicit algebras;
//! - [`report`]: deterministic JSON/CSV reports.

pub mod catalog;
pub mod curvature;
pub mod error;
pub mod exact;
pub mod lie;
pub mod report;
pub mod solver;
pub mod verifier;

pub use catalog::{list_cases, realize, CaseParams, EmbeddingCase, Family, Realization};
pub use error::{Error, Result};
pub use exact::{parse_rational, Rational, Surd};
pub use lie::{
    build_metric, direct_sum, dualize, Gram, LieAlgebraData, MetricSpec, ReductiveDecomposition,
    Signature,
};
pub use report::{emit_report, full_report, to_deterministic_json, ReportDocument, ReportEntry};
pub use solver::{solve_case, Branch, Discrepancy, QEMParams, SolutionReport};
pub use verifier::{certify_case, certify_dual, structural_checks, Certificate, StructuralReport};
