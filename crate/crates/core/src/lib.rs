//! Contrast-set generation for NLI data through MRS rewriting.
//!
//! Sentences are parsed into Minimal Recursion Semantics by an external
//! grammar processor, rewritten per linguistic phenomenon, regenerated and
//! reranked, then paired with inferred labels. Predictions on the resulting
//! contrast sets are scored for accuracy and consistency.

pub mod eval;
pub mod mrs;
pub mod pipeline;
pub mod realization;
pub mod transform;
