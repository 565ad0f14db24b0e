//! Membership-weight analysis for concept pairs and their conjunctions or
//! disjunctions.
//!
//! Given observed weights `mu_a`, `mu_b` and `mu_comb` for an exemplar judged
//! against two concepts and their combination, this crate answers two
//! questions:
//!
//! * can the triple be carried by a single classical probability measure on
//!   the four Boolean atoms of the two events ([`classicality`]), and
//! * if not, which parameters of a two-sector state-space model (a direct sum
//!   of a 3-dimensional single-concept space and its tensor square) reproduce
//!   the observed combination weight ([`fock`]).
//!
//! The [`hilbert`] module builds the state vectors and projectors explicitly
//! and recomputes the model value as a projector expectation, serving as an
//! independent check on the closed forms. [`simulation`] draws synthetic
//! yes/no judgments from the model, and [`dataset`] handles CSV ingestion and
//! deterministic JSON reports.

pub mod classicality;
pub mod dataset;
pub mod fock;
pub mod hilbert;
pub mod simulation;

pub use classicality::{
    classify, conjunction_diagnostics, disjunction_diagnostics, kolmogorov_oracle,
    AtomDecomposition, ClassificationFlag, ClassicalityReport, CombinationKind, DomainError,
    MembershipRecord,
};
pub use dataset::{
    analyze, parse_csv, parse_csv_with_source, write_report, AnalysisOptions, AnalysisReport,
    Dataset, DatasetError,
};
pub use fock::{
    dominance_report, eval, eval_conjunction, eval_disjunction, fit_params, fit_theta,
    interference_magnitude, interference_term, representable_interval, DominanceLabel, FitError,
    FitStrategy, InterferenceTerm, ModelParams, ModelValue, ModelVariant,
};
pub use hilbert::{
    build_concept_vectors, build_fock_state, build_projector, expectation, ComplexMatrix,
    ComplexVec, ConceptVectorPair, FockState, HilbertError, ProjectorSpec,
};
pub use simulation::{
    convergence_sweep, simulate, SimulationConfig, SimulationError, SimulationResult,
};
