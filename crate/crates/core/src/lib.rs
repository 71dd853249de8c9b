//! Tools for Discourse Representation Structures in clausal form.
//!
//! * [`clause`] and [`corpus`] read and write the clause file format.
//! * [`referee`] checks well-formedness and rebuilds the box structure.
//! * [`counter`] scores a system DRS against gold with an F-score over
//!   clauses under the best variable mapping.
//! * [`eval`] runs corpus-level scoring and the finer analyses built on it.
//! * [`baselines`] holds two non-neural predictors.
//! * [`render`] draws box notation.

pub mod baselines;
pub mod clause;
pub mod corpus;
pub mod counter;
pub mod eval;
pub mod fixtures;
pub mod referee;
pub mod render;
pub mod senses;

pub use clause::{parse_clause, Clause, ClauseError, OperatorTag, PartOfSpeech, Synset, Term, Variable};
pub use corpus::{parse_document, read_corpus, ClausalForm};
pub use referee::{validate, ValidationReport};
pub use senses::{normalize_senses, SynsetMap};
pub use counter::{match_score, micro_average, MatchConfig, MatchResult};
pub use eval::{score_corpus, CorpusScore};
pub use baselines::{sim_spar_predict, spar_predict, spar_select, EmbeddingTable};
pub use render::{render_boxes, render_form, BoxStyle, RenderOptions};

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    pub mod introduction {}
    #[doc = include_str!("../../../book/src/format.md")]
    pub mod format {}
    #[doc = include_str!("../../../book/src/validation.md")]
    pub mod validation {}
    #[doc = include_str!("../../../book/src/scoring.md")]
    pub mod scoring {}
    #[doc = include_str!("../../../book/src/evaluation.md")]
    pub mod evaluation {}
    #[doc = include_str!("../../../book/src/significance.md")]
    pub mod significance {}
    #[doc = include_str!("../../../book/src/baselines.md")]
    pub mod baselines {}
    #[doc = include_str!("../../../book/src/rendering.md")]
    pub mod rendering {}
    #[doc = include_str!("../../../book/src/cli.md")]
    pub mod cli {}
}
