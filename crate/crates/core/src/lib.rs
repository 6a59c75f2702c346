//! Symbolic workbench for the surface singular braid monoid: words and their
//! closures, the relation catalog with certified rewriting, marker
//! resolutions into classical diagrams, and classification of small cases.

pub mod classify;
pub mod rewrite;
pub mod surface;
pub mod tangle;
pub mod word;
