//! Translate restricted natural-language navigation commands into a
//! deduplicated, probability-ranked set of Signal Temporal Logic candidates.
//!
//! The pipeline has three stages:
//!
//! 1. [`parser`]: tokenize and CKY-parse against a CCG [`lexicon`], keeping
//!    every complete derivation up to an n-best cap so attachment ambiguity
//!    survives.
//! 2. [`semantics`]: compose each derivation's lexical lambda templates and
//!    beta-reduce them into an intermediate meaning term.
//! 3. [`pipeline`]: convert meanings into [`stl::Formula`]s, drop the
//!    ill-formed ones, canonicalize, and aggregate derivation scores into
//!    normalized probabilities.
//!
//! [`corpus`] loads sentence corpora and candidate-set expectations.
//! [`trajectory`] grounds atomic propositions in 2-D boxes and evaluates the
//! quantitative robustness of each candidate on a discrete-time trajectory.

pub mod corpus;
pub mod lexicon;
pub mod parser;
pub mod pipeline;
pub mod semantics;
pub mod stl;
pub mod trajectory;

pub use lexicon::{default_lexicon, load_lexicon, Category, LexEntry, Lexicon};
pub use parser::{parse_nbest, tokenize, Derivation, Token};
pub use pipeline::{translate, Candidate, CandidateSet, TranslateError};
pub use semantics::{beta_reduce, compose, Term};
pub use stl::{canonicalize, extent, robustness, Formula, Interval};
pub use trajectory::{evaluate_candidates, RegionMap, RobustnessReport, Trajectory};

/// Default number of derivations retained per sentence.
pub const DEFAULT_N_BEST: usize = 40;
