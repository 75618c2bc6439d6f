//! Lambda-term meanings: the template language, capture-avoiding beta
//! reduction, and composition of templates along a derivation.

mod reduce;
mod term;

pub use reduce::{beta_reduce, reduce_with, substitute, BudgetExceeded, Strategy, STEP_BUDGET};
pub use term::{parse_term, TemplateParseError, Term};

use crate::parser::{Derivation, ParseTree};

/// Meaning of a derivation.
///
/// Leaves contribute their lexical template; forward application applies the
/// left meaning to the right, backward application the right to the left.
/// The result is beta-normal but may still be incomplete as STL (an interval
/// abstraction nobody applied, say); conversion decides that.
pub fn compose(derivation: &Derivation) -> Result<Term, BudgetExceeded> {
    compose_with(derivation, Strategy::Normal)
}

pub fn compose_with(derivation: &Derivation, strategy: Strategy) -> Result<Term, BudgetExceeded> {
    reduce_with(&assemble(&derivation.tree), strategy)
}

/// The unreduced application tree of a derivation.
pub fn assemble(tree: &ParseTree) -> Term {
    match tree {
        ParseTree::Leaf { entry, .. } => entry.template.clone(),
        ParseTree::Node { rule, left, right, .. } => {
            let (l, r) = (assemble(left), assemble(right));
            if rule.is_forward() {
                Term::app(l, r)
            } else {
                Term::app(r, l)
            }
        }
    }
}
