//! Verification on top of the lower layers: the symbolic identities of the
//! reduction calculus, invariant-subspace search and intertwiners on windowed
//! modules, and the simplicity classifier.

mod classify;
mod identities;
mod intertwine;
mod subspace;

pub use classify::{
    classify_simplicity, match_rab_parameter, simplicity_criterion, Classification, RabMatch,
    Verdict, Witness,
};
pub use identities::{
    crosscheck_lemma42_in_rabc, crosscheck_lemma42_residual, lemma_4_2_constant,
    lemma_4_2_residual, lemma_4_3_reduction, prop44_negative_control, prop44_residuals,
    verify_k_action, verify_k_commutator, verify_lemma_4_2, verify_lemma_4_3,
    verify_prop44_constraints, IdentityCheck,
};
pub use intertwine::{compose, find_intertwiners, IntertwinerSpace, LinearMap};
pub use subspace::{close, find_invariant_subspaces, SubspaceSearch, Subspace};

use thiserror::Error;

use crate::modules::ModuleError;
use crate::rewrite::RewriteError;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AnalysisError {
    #[error("incompatible windows: {0}")]
    IncompatibleWindows(String),
    #[error("classification needs the full module, got {0}")]
    NotFullModule(String),
    #[error(transparent)]
    Module(#[from] ModuleError),
    #[error(transparent)]
    Rewrite(#[from] RewriteError),
}
