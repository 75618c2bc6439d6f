//! Meaning-to-STL conversion, canonicalization, and score aggregation.

use serde::Serialize;
use thiserror::Error;

use crate::lexicon::Lexicon;
use crate::parser::{parse_nbest, tokenize, Derivation, ParseError, Token};
use crate::semantics::{beta_reduce, compose, BudgetExceeded, Term};
use crate::stl::{canonicalize, extent, Formula, Interval};

/// Why a meaning could not become an STL formula.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("ill-formed: {0}")]
pub struct IllFormed(pub String);

fn ill<T>(reason: impl Into<String>) -> Result<T, IllFormed> {
    Err(IllFormed(reason.into()))
}

/// Converts a beta-normal meaning into STL.
///
/// `SEQ(p, q)` needs `p` to be an eventuality `F_I chi`; `q` is conjoined at
/// the tail of `chi` (inside its single eventuality conjunct, recursively).
/// `EXTG(guard, anchor)` applies `guard` to `[0, extent(anchor)]`. Leftover
/// abstractions or applications make the meaning ill-formed.
///
/// Disjoined eventualities with one shared interval are factored,
/// `F_I x | F_I y` becoming `F_I(x | y)`. The two have identical robustness.
pub fn to_stl(meaning: &Term) -> Result<Formula, IllFormed> {
    match meaning {
        Term::Atom(name) => Ok(Formula::atom(name.as_str())),
        Term::Not(x) => Ok(Formula::not(to_stl(x)?)),
        Term::And(a, b) => Ok(Formula::And(vec![to_stl(a)?, to_stl(b)?])),
        Term::Or(a, b) => Ok(factor_deadlines(vec![to_stl(a)?, to_stl(b)?])),
        Term::Eventually(i, x) => Ok(Formula::eventually(interval(i)?, to_stl(x)?)),
        Term::Always(i, x) => Ok(Formula::always(interval(i)?, to_stl(x)?)),
        Term::Seq(p, q) => match to_stl(p)? {
            Formula::Eventually(i, chi) => Ok(Formula::eventually(i, insert_tail(*chi, to_stl(q)?))),
            other => ill(format!("sequence must start with an eventuality, found `{other}`")),
        },
        Term::ExtG(guard, anchor) => {
            let anchor = to_stl(anchor)?;
            let window = Interval::upto(extent(&anchor));
            if let Term::Atom(name) = guard.as_ref() {
                return Ok(Formula::always(window, Formula::not(Formula::atom(name.as_str()))));
            }
            let applied = Term::app((**guard).clone(), Term::interval(window.lo(), window.hi()));
            let reduced = beta_reduce(&applied).map_err(|e| IllFormed(e.to_string()))?;
            to_stl(&reduced)
        }
        Term::Var(v) => ill(format!("free variable `{v}`")),
        Term::Lam(..) => ill(format!("unapplied abstraction `{meaning}`")),
        Term::App(..) => ill(format!("stuck application `{meaning}`")),
        Term::Int(_) | Term::Interval(..) => ill(format!("`{meaning}` is not a formula")),
    }
}

fn interval(term: &Term) -> Result<Interval, IllFormed> {
    match term {
        Term::Interval(lo, hi) => match (lo.as_ref(), hi.as_ref()) {
            (Term::Int(lo), Term::Int(hi)) => Interval::new(*lo, *hi).map_err(|e| IllFormed(e.to_string())),
            _ => ill(format!("interval bounds are not literals in `{term}`")),
        },
        other => ill(format!("expected an interval, found `{other}`")),
    }
}

fn insert_tail(chi: Formula, tail: Formula) -> Formula {
    let mut conjuncts = flatten_and(chi);
    let pending: Vec<usize> = conjuncts
        .iter()
        .enumerate()
        .filter(|(_, c)| matches!(c, Formula::Eventually(..)))
        .map(|(k, _)| k)
        .collect();
    if let [k] = pending[..] {
        let Formula::Eventually(i, inner) = conjuncts.remove(k) else { unreachable!() };
        conjuncts.insert(k, Formula::eventually(i, insert_tail(*inner, tail)));
    } else {
        conjuncts.push(tail);
    }
    Formula::and(conjuncts)
}

fn flatten_and(f: Formula) -> Vec<Formula> {
    match f {
        Formula::And(cs) => cs.into_iter().flat_map(flatten_and).collect(),
        other => vec![other],
    }
}

fn flatten_or(f: Formula) -> Vec<Formula> {
    match f {
        Formula::Or(cs) => cs.into_iter().flat_map(flatten_or).collect(),
        other => vec![other],
    }
}

fn factor_deadlines(disjuncts: Vec<Formula>) -> Formula {
    let flat: Vec<Formula> = disjuncts.into_iter().flat_map(flatten_or).collect();
    let mut groups: Vec<(Option<Interval>, Vec<Formula>)> = Vec::new();
    for d in flat {
        match d {
            Formula::Eventually(i, body) => match groups.iter_mut().find(|(k, _)| *k == Some(i)) {
                Some((_, bodies)) => bodies.push(*body),
                None => groups.push((Some(i), vec![*body])),
            },
            other => groups.push((None, vec![other])),
        }
    }
    let out = groups
        .into_iter()
        .map(|(key, mut bodies)| match key {
            Some(i) => Formula::eventually(i, Formula::or(bodies)),
            None => bodies.pop().unwrap(),
        })
        .collect();
    Formula::or(out)
}

/// A formula-level candidate.
#[derive(Debug, Clone, PartialEq)]
pub struct Candidate {
    /// Canonical form.
    pub formula: Formula,
    /// Aggregated support: sum of `exp(score)` over merged derivations.
    pub score: f64,
    pub probability: f64,
    pub support_count: usize,
    /// Ranks (0-based) of the merged derivations in the n-best list.
    pub derivation_ids: Vec<usize>,
}

/// Deduplicated candidates, most probable first.
#[derive(Debug, Clone, PartialEq)]
pub struct CandidateSet {
    pub sentence: String,
    pub candidates: Vec<Candidate>,
    pub n_derivations: usize,
    pub discarded_count: usize,
}

/// One derivation's contribution to aggregation.
#[derive(Debug, Clone, PartialEq)]
pub struct Reading {
    pub formula: Formula,
    pub score: f64,
    pub derivation: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TranslateError {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error("all {derivations} derivations were ill-formed; no STL candidate remains")]
    NothingWellFormed { derivations: usize },
}

/// Groups readings by canonical formula, sums `exp(score)` per group, and
/// normalizes the sums into probabilities.
pub fn aggregate(readings: &[Reading]) -> Result<Vec<Candidate>, TranslateError> {
    if readings.is_empty() {
        return Err(TranslateError::NothingWellFormed { derivations: 0 });
    }
    let mut groups: Vec<(String, Candidate)> = Vec::new();
    // Probabilities are computed relative to the best score so that very
    // negative log-scores do not all underflow to zero.
    let top = readings.iter().map(|r| r.score).fold(f64::NEG_INFINITY, f64::max);
    let mut relative: Vec<f64> = Vec::new();
    for r in readings {
        let formula = canonicalize(&r.formula);
        let key = formula.to_string();
        let k = match groups.iter().position(|(k, _)| *k == key) {
            Some(k) => k,
            None => {
                groups.push((
                    key,
                    Candidate { formula, score: 0.0, probability: 0.0, support_count: 0, derivation_ids: vec![] },
                ));
                relative.push(0.0);
                groups.len() - 1
            }
        };
        let c = &mut groups[k].1;
        c.score += r.score.exp();
        c.support_count += 1;
        c.derivation_ids.push(r.derivation);
        relative[k] += (r.score - top).exp();
    }
    let total: f64 = relative.iter().sum();
    let mut out: Vec<(String, Candidate)> = groups
        .into_iter()
        .zip(relative)
        .map(|((k, mut c), rel)| {
            c.probability = rel / total;
            (k, c)
        })
        .collect();
    out.sort_by(|a, b| b.1.probability.total_cmp(&a.1.probability).then_with(|| a.0.cmp(&b.0)));
    Ok(out.into_iter().map(|(_, c)| c).collect())
}

/// Everything the pipeline computed for one derivation.
#[derive(Debug, Clone)]
pub struct AnalyzedDerivation {
    pub derivation: Derivation,
    pub meaning: Result<Term, BudgetExceeded>,
    /// Canonical formula, or why there is none.
    pub formula: Result<Formula, IllFormed>,
}

/// Intermediate results of a translation, for inspection.
#[derive(Debug, Clone)]
pub struct Analysis {
    pub sentence: String,
    pub tokens: Vec<Token>,
    pub derivations: Vec<AnalyzedDerivation>,
}

impl Analysis {
    pub fn candidate_set(&self) -> Result<CandidateSet, TranslateError> {
        let readings: Vec<Reading> = self
            .derivations
            .iter()
            .enumerate()
            .filter_map(|(k, a)| {
                a.formula.as_ref().ok().map(|f| Reading {
                    formula: f.clone(),
                    score: a.derivation.score,
                    derivation: k,
                })
            })
            .collect();
        if readings.is_empty() {
            return Err(TranslateError::NothingWellFormed { derivations: self.derivations.len() });
        }
        Ok(CandidateSet {
            sentence: self.sentence.clone(),
            candidates: aggregate(&readings)?,
            n_derivations: self.derivations.len(),
            discarded_count: self.derivations.len() - readings.len(),
        })
    }
}

/// Parses, composes, and converts each of the top `n` derivations.
pub fn analyze(sentence: &str, lexicon: &Lexicon, n: usize) -> Result<Analysis, TranslateError> {
    let tokens = tokenize(sentence)?;
    let derivations = parse_nbest(&tokens, lexicon, n)?
        .into_iter()
        .map(|derivation| {
            let meaning = compose(&derivation);
            let formula = match &meaning {
                Ok(m) => to_stl(m).map(|f| canonicalize(&f)),
                Err(e) => Err(IllFormed(e.to_string())),
            };
            AnalyzedDerivation { derivation, meaning, formula }
        })
        .collect();
    Ok(Analysis { sentence: sentence.to_string(), tokens, derivations })
}

/// The full pipeline: tokenize, parse n-best, compose, convert (discarding
/// ill-formed meanings), canonicalize, aggregate.
pub fn translate(sentence: &str, lexicon: &Lexicon, n: usize) -> Result<CandidateSet, TranslateError> {
    analyze(sentence, lexicon, n)?.candidate_set()
}

/// Serializable view of a [`CandidateSet`].
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Summary {
    pub sentence: String,
    pub n_derivations: usize,
    pub n_discarded: usize,
    pub candidates: Vec<CandidateSummary>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CandidateSummary {
    pub formula: String,
    pub score: f64,
    pub probability: f64,
    pub support_count: usize,
}

impl CandidateSet {
    pub fn summary(&self) -> Summary {
        Summary {
            sentence: self.sentence.clone(),
            n_derivations: self.n_derivations,
            n_discarded: self.discarded_count,
            candidates: self
                .candidates
                .iter()
                .map(|c| CandidateSummary {
                    formula: c.formula.to_string(),
                    score: c.score,
                    probability: c.probability,
                    support_count: c.support_count,
                })
                .collect(),
        }
    }

    pub fn formulas(&self) -> Vec<String> {
        self.candidates.iter().map(|c| c.formula.to_string()).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lexicon::default_lexicon;
    use crate::semantics::parse_term;
    use crate::stl::parse_formula;

    fn t(src: &str) -> Term {
        parse_term(src).unwrap()
    }

    fn f(src: &str) -> Formula {
        parse_formula(src).unwrap()
    }

    #[test]
    fn sequence_nests_second_task() {
        let m = t("SEQ(F(I(0, 10), phi_B), F(I(0, 15), phi_C))");
        assert_eq!(to_stl(&m).unwrap(), f("F[0,10](phi_B & F[0,15] phi_C)"));
    }

    #[test]
    fn sequence_is_associative_after_conversion() {
        let left = t("SEQ(SEQ(F(I(0, 10), phi_B), F(I(0, 15), phi_C)), F(I(0, 5), phi_D))");
        let right = t("SEQ(F(I(0, 10), phi_B), SEQ(F(I(0, 15), phi_C), F(I(0, 5), phi_D)))");
        let want = f("F[0,10](phi_B & F[0,15](phi_C & F[0,5] phi_D))");
        assert_eq!(to_stl(&left).unwrap(), want);
        assert_eq!(to_stl(&right).unwrap(), want);
    }

    #[test]
    fn sequence_needs_an_eventuality_first() {
        let m = t("SEQ(AND(F(I(0, 10), phi_B), phi_A), F(I(0, 5), phi_C))");
        assert!(to_stl(&m).is_err());
    }

    #[test]
    fn residual_abstraction_is_ill_formed() {
        assert!(to_stl(&t("lam i. F(i, phi_B)")).is_err());
        assert!(to_stl(&t("F(I(0, 10), phi_B)(I(0, 5))")).is_err());
        assert!(to_stl(&t("I(0, 3)")).is_err());
        assert!(to_stl(&t("F(I(5, 3), phi_B)")).is_err());
    }

    #[test]
    fn extent_guard_spans_anchor() {
        let anchor = "SEQ(F(I(0, 10), phi_B), F(I(0, 15), phi_C))";
        let m = t(&format!("AND({anchor}, EXTG(lam i. G(i, NOT(phi_A)), {anchor}))"));
        assert_eq!(
            canonicalize(&to_stl(&m).unwrap()),
            canonicalize(&f("(F[0,10](phi_B & F[0,15] phi_C) & G[0,25] !phi_A)"))
        );
        let bare = t("EXTG(phi_A, F(I(0, 7), phi_B))");
        assert_eq!(to_stl(&bare).unwrap(), f("G[0,7] !phi_A"));
    }

    #[test]
    fn shared_deadline_disjunction_is_factored() {
        let m = t("OR(F(I(0, 10), phi_B), F(I(0, 10), phi_C))");
        assert_eq!(to_stl(&m).unwrap(), f("F[0,10](phi_B | phi_C)"));
        let different = t("OR(F(I(0, 10), phi_B), F(I(0, 15), phi_C))");
        assert_eq!(to_stl(&different).unwrap(), f("(F[0,10] phi_B | F[0,15] phi_C)"));
        let mixed = t("OR(F(I(0, 10), phi_B), AND(F(I(0, 10), phi_C), phi_A))");
        assert_eq!(to_stl(&mixed).unwrap(), f("(F[0,10] phi_B | (F[0,10] phi_C & phi_A))"));
    }

    fn reading(src: &str, score: f64, derivation: usize) -> Reading {
        Reading { formula: f(src), score, derivation }
    }

    #[test]
    fn aggregation_sums_support() {
        let cs = aggregate(&[
            reading("phi_A", 0.0, 0),
            reading("phi_B", 0.0, 1),
            reading("phi_A", 0.0, 2),
        ])
        .unwrap();
        assert_eq!(cs.len(), 2);
        assert_eq!(cs[0].formula, f("phi_A"));
        assert!((cs[0].probability - 2.0 / 3.0).abs() < 1e-15);
        assert!((cs[1].probability - 1.0 / 3.0).abs() < 1e-15);
        assert_eq!(cs[0].support_count, 2);
        assert_eq!(cs[0].derivation_ids, vec![0, 2]);
        assert_eq!(cs[0].score, 2.0);
    }

    #[test]
    fn aggregation_merges_canonical_equals() {
        let cs = aggregate(&[reading("(phi_B | phi_C)", -1.0, 0), reading("(phi_C | phi_B)", -1.0, 1)]).unwrap();
        assert_eq!(cs.len(), 1);
        assert_eq!(cs[0].probability, 1.0);
    }

    #[test]
    fn aggregation_of_nothing_fails() {
        assert!(aggregate(&[]).is_err());
    }

    #[test]
    fn extra_support_raises_probability() {
        let base = vec![reading("phi_A", -0.3, 0), reading("phi_B", 0.0, 1), reading("phi_C", -1.0, 2)];
        let before = aggregate(&base).unwrap();
        let mut more = base.clone();
        more.push(reading("phi_A", -2.0, 3));
        let after = aggregate(&more).unwrap();
        let p = |cs: &[Candidate], name: &str| {
            cs.iter().find(|c| c.formula == f(name)).unwrap().probability
        };
        assert!(p(&after, "phi_A") > p(&before, "phi_A"));
        assert!(p(&after, "phi_B") < p(&before, "phi_B"));
        assert!(p(&after, "phi_C") < p(&before, "phi_C"));
    }

    #[test]
    fn translates_simple_reach() {
        let set = translate("Reach B within 10 seconds.", &default_lexicon(), 40).unwrap();
        assert_eq!(set.formulas(), vec!["F[0,10] phi_B"]);
        assert_eq!(set.candidates[0].probability, 1.0);
        assert_eq!(set.n_derivations, 1);
        assert_eq!(set.discarded_count, 0);
    }

    #[test]
    fn untimed_command_has_no_well_formed_reading() {
        let err = translate("reach b", &default_lexicon(), 40).unwrap_err();
        assert_eq!(err, TranslateError::NothingWellFormed { derivations: 1 });
    }

    #[test]
    fn summary_has_schema_fields() {
        let set = translate("Reach B within 10 seconds.", &default_lexicon(), 40).unwrap();
        let json = serde_json::to_value(set.summary()).unwrap();
        assert_eq!(json["n_derivations"], 1);
        assert_eq!(json["n_discarded"], 0);
        assert_eq!(json["candidates"][0]["formula"], "F[0,10] phi_B");
        assert_eq!(json["candidates"][0]["support_count"], 1);
        assert_eq!(json["candidates"][0]["probability"], 1.0);
    }
}
