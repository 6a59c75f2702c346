//! The relation catalog, certified rewriting and equivalence search.

pub mod catalog;
pub mod certificate;
pub mod normalize;
pub mod search;

pub use catalog::{catalog, instantiate, Direction, RuleFilter, RuleId, RuleInstance, RuleParams};
pub use certificate::{
    apply_step, replay_certificate, CsbCache, CsbEvidence, ReplayFailure, ReplayReport, RewriteCertificate, RewriteError,
    RewriteStep, Strictness,
};
pub use normalize::{normalize_csb2, normalize_csb2_certified, NormalizeError};
pub use search::{
    equiv_search, equiv_search_open, equiv_search_with_cache, search_fewer_strands, SearchConfig, SearchOutcome,
};
