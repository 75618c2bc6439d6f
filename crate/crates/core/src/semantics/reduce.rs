use std::collections::BTreeSet;

use super::Term;

/// Contraction budget for one reduction.
pub const STEP_BUDGET: usize = 10_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Strategy {
    /// Leftmost-outermost redex first.
    Normal,
    /// Leftmost-innermost redex first.
    Applicative,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("ill-typed template: no beta-normal form within {budget} steps")]
pub struct BudgetExceeded {
    pub budget: usize,
}

/// Normal-order, capture-avoiding reduction to beta-normal form.
pub fn beta_reduce(term: &Term) -> Result<Term, BudgetExceeded> {
    reduce_with(term, Strategy::Normal)
}

pub fn reduce_with(term: &Term, strategy: Strategy) -> Result<Term, BudgetExceeded> {
    let mut current = term.clone();
    for _ in 0..STEP_BUDGET {
        let next = match strategy {
            Strategy::Normal => step_normal(&current),
            Strategy::Applicative => step_applicative(&current),
        };
        match next {
            Some(t) => current = t,
            None => return Ok(current),
        }
    }
    Err(BudgetExceeded { budget: STEP_BUDGET })
}

fn step_normal(term: &Term) -> Option<Term> {
    match term {
        Term::App(f, a) => {
            if let Term::Lam(x, body) = f.as_ref() {
                return Some(substitute(body, x, a));
            }
            if let Some(f2) = step_normal(f) {
                return Some(Term::App(Box::new(f2), a.clone()));
            }
            step_normal(a).map(|a2| Term::App(f.clone(), Box::new(a2)))
        }
        _ => step_first_child(term, step_normal),
    }
}

fn step_applicative(term: &Term) -> Option<Term> {
    match term {
        Term::App(f, a) => {
            if let Some(f2) = step_applicative(f) {
                return Some(Term::App(Box::new(f2), a.clone()));
            }
            if let Some(a2) = step_applicative(a) {
                return Some(Term::App(f.clone(), Box::new(a2)));
            }
            match f.as_ref() {
                Term::Lam(x, body) => Some(substitute(body, x, a)),
                _ => None,
            }
        }
        _ => step_first_child(term, step_applicative),
    }
}

/// Steps the leftmost child that can step; `App` is handled by the caller.
fn step_first_child(term: &Term, step: fn(&Term) -> Option<Term>) -> Option<Term> {
    match term {
        Term::Var(_) | Term::Atom(_) | Term::Int(_) => None,
        Term::Lam(x, b) => step(b).map(|b2| Term::Lam(x.clone(), Box::new(b2))),
        Term::App(..) => unreachable!(),
        _ => {
            let (name, args) = term.constructor().unwrap();
            let mut stepped = false;
            let args: Vec<Term> = args
                .into_iter()
                .map(|c| {
                    if stepped {
                        return c.clone();
                    }
                    match step(c) {
                        Some(c2) => {
                            stepped = true;
                            c2
                        }
                        None => c.clone(),
                    }
                })
                .collect();
            stepped.then(|| Term::build(name, args).unwrap())
        }
    }
}

/// `body[var := value]`, renaming binders that would capture a free
/// variable of `value`.
pub fn substitute(body: &Term, var: &str, value: &Term) -> Term {
    let value_fv = value.free_vars();
    subst(body, var, value, &value_fv)
}

fn subst(term: &Term, var: &str, value: &Term, value_fv: &BTreeSet<String>) -> Term {
    match term {
        Term::Var(x) if x == var => value.clone(),
        Term::Lam(x, _) if x == var => term.clone(),
        Term::Lam(x, b) => {
            if value_fv.contains(x) && b.free_vars().contains(var) {
                let mut avoid = b.free_vars();
                avoid.extend(value_fv.iter().cloned());
                avoid.insert(var.to_string());
                let fresh = fresh_name(x, &avoid);
                let renamed = subst(b, x, &Term::Var(fresh.clone()), &BTreeSet::from([fresh.clone()]));
                Term::Lam(fresh, Box::new(subst(&renamed, var, value, value_fv)))
            } else {
                Term::Lam(x.clone(), Box::new(subst(b, var, value, value_fv)))
            }
        }
        _ => term.map_children(|c| subst(c, var, value, value_fv)),
    }
}

fn fresh_name(base: &str, avoid: &BTreeSet<String>) -> String {
    let stem = base.trim_end_matches(|c: char| c.is_ascii_digit());
    (1..)
        .map(|n| format!("{stem}{n}"))
        .find(|candidate| !avoid.contains(candidate))
        .unwrap()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::semantics::parse_term;

    fn t(src: &str) -> Term {
        parse_term(src).unwrap()
    }

    #[test]
    fn within_applies_interval_to_reach() {
        let term = t("(lam p. p(I(0, 10)))(lam i. F(i, phi_B))");
        assert_eq!(beta_reduce(&term).unwrap(), t("F(I(0, 10), phi_B)"));
    }

    #[test]
    fn identity() {
        assert_eq!(beta_reduce(&t("(lam x. x)(phi_A)")).unwrap(), t("phi_A"));
    }

    #[test]
    fn while_template_puts_left_argument_first() {
        let term = t("(lam q. lam p. AND(p, q))(phi_M)(phi_N)");
        assert_eq!(beta_reduce(&term).unwrap(), t("AND(phi_N, phi_M)"));
    }

    #[test]
    fn substitution_avoids_capture() {
        // (lam x. lam y. x) y  must not become  lam y. y
        let term = Term::app(t("lam x. lam y. x"), Term::var("y"));
        let reduced = beta_reduce(&term).unwrap();
        match &reduced {
            Term::Lam(binder, body) => {
                assert_ne!(binder, "y");
                assert_eq!(**body, Term::var("y"));
            }
            other => panic!("expected lambda, got {other}"),
        }
        assert!(reduced.alpha_eq(&t("lam z. y")));
    }

    #[test]
    fn shadowed_binder_is_untouched() {
        let term = t("(lam x. lam x. x)(phi_A)");
        assert!(beta_reduce(&term).unwrap().alpha_eq(&t("lam z. z")));
    }

    #[test]
    fn stuck_constructor_application_stays() {
        let term = t("(lam p. p(I(0, 5)))(F(I(0, 10), phi_B))");
        let reduced = beta_reduce(&term).unwrap();
        assert_eq!(reduced, t("F(I(0, 10), phi_B)(I(0, 5))"));
        assert!(reduced.has_lambda_residue());
    }

    #[test]
    fn omega_exhausts_budget() {
        let omega = t("(lam x. x(x))(lam x. x(x))");
        assert_eq!(beta_reduce(&omega), Err(BudgetExceeded { budget: STEP_BUDGET }));
    }

    #[test]
    fn normal_order_finds_form_applicative_misses() {
        let term = t("(lam x. phi_A)((lam x. x(x))(lam x. x(x)))");
        assert_eq!(beta_reduce(&term).unwrap(), t("phi_A"));
        assert!(reduce_with(&term, Strategy::Applicative).is_err());
    }

    #[test]
    fn strategies_agree_on_terminating_terms() {
        let term = t("(lam q. lam p. lam i. OR(p(i), q(i)))(lam i. F(i, phi_C))(lam i. F(i, phi_B))(I(0, 10))");
        let a = beta_reduce(&term).unwrap();
        let b = reduce_with(&term, Strategy::Applicative).unwrap();
        assert!(a.alpha_eq(&b));
        assert_eq!(a, t("OR(F(I(0, 10), phi_B), F(I(0, 10), phi_C))"));
    }
}
