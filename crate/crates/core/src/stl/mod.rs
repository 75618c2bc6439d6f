//! Signal Temporal Logic: formula trees, canonical form, temporal extent,
//! the canonical text rendering and its reader, and quantitative robustness.

#[cfg(test)]
pub(crate) mod arbitrary;
mod canon;
mod formula;
mod reader;
mod robustness;

pub use canon::canonicalize;
pub use formula::{extent, Formula, Interval, IntervalError};
pub use reader::{parse_formula, FormulaParseError};
pub use robustness::{robustness, robustness_on, PropositionTable, RobustnessError, Signal};
