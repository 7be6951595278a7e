//! Finite-model engine for partial entrenchment relations over a small
//! propositional vocabulary, the maxiconsistent inference they induce, the
//! translations between the two, and mechanical law checkers.
//!
//! Formulas are identified with their truth tables ([`TruthMask`]); every
//! notion here is invariant under logical equivalence, so all checks run
//! pointwise over the finite Lindenbaum algebra.

pub mod audit;
pub mod bridge;
pub mod entrenchment;
pub mod error;
pub mod fixtures;
pub mod format;
pub mod formula;
pub mod inference;
pub mod relation;
pub mod verdict;

pub use bridge::{InferenceService, MaxiconsistentInference, Provenance};
pub use entrenchment::{closure_meet, EntrenchmentOracle, GeneratorBase, StructuralProperty};
pub use error::{Error, Result};
pub use formula::{Algebra, Formula, TruthMask, Vocabulary};
pub use inference::{infer, InferenceResult};
pub use relation::Relation;
pub use verdict::{Mode, Verdict, Witness};
