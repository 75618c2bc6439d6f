//! Shared test support: a table-driven robustness oracle and random
//! formula/signal generators.
#![allow(dead_code, clippy::needless_range_loop)]

pub mod s8;

use std::collections::HashMap;

use ambistl_core::stl::{Formula, Interval, PropositionTable};
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub const ATOMS: [&str; 3] = ["p", "q", "r"];

/// Robustness of `f` at every time step, filled bottom-up by direct nested
/// loops over the quantitative semantics. `None` marks a step where some
/// window needed by the formula falls entirely past the last sample.
pub fn oracle_table(f: &Formula, margins: &HashMap<String, Vec<f64>>, len: usize) -> Vec<Option<f64>> {
    let last = len - 1;
    let mut out = vec![None; len];
    match f {
        Formula::True => out.iter_mut().for_each(|v| *v = Some(f64::INFINITY)),
        Formula::Atom(name) => {
            let series = &margins[name];
            for t in 0..len {
                out[t] = Some(series[t]);
            }
        }
        Formula::Not(c) => {
            let inner = oracle_table(c, margins, len);
            for t in 0..len {
                out[t] = inner[t].map(|v| -v);
            }
        }
        Formula::And(cs) | Formula::Or(cs) => {
            let is_and = matches!(f, Formula::And(_));
            let tables: Vec<_> = cs.iter().map(|c| oracle_table(c, margins, len)).collect();
            for t in 0..len {
                let mut acc = if is_and { f64::INFINITY } else { f64::NEG_INFINITY };
                let mut ok = true;
                for table in &tables {
                    match table[t] {
                        Some(v) if is_and => acc = acc.min(v),
                        Some(v) => acc = acc.max(v),
                        None => ok = false,
                    }
                }
                out[t] = ok.then_some(acc);
            }
        }
        Formula::Eventually(i, c) | Formula::Always(i, c) => {
            let is_f = matches!(f, Formula::Eventually(..));
            let inner = oracle_table(c, margins, len);
            for t in 0..len {
                let lo = t + i.lo() as usize;
                if lo > last {
                    continue;
                }
                let hi = (t + i.hi() as usize).min(last);
                let mut acc = if is_f { f64::NEG_INFINITY } else { f64::INFINITY };
                let mut ok = true;
                for t1 in lo..=hi {
                    match inner[t1] {
                        Some(v) if is_f => acc = acc.max(v),
                        Some(v) => acc = acc.min(v),
                        None => ok = false,
                    }
                }
                out[t] = ok.then_some(acc);
            }
        }
        Formula::Until(i, l, r) => {
            let left = oracle_table(l, margins, len);
            let right = oracle_table(r, margins, len);
            for t in 0..len {
                let lo = t + i.lo() as usize;
                if lo > last {
                    continue;
                }
                let hi = (t + i.hi() as usize).min(last);
                let mut best = f64::NEG_INFINITY;
                let mut ok = true;
                for t1 in lo..=hi {
                    let mut guard = f64::INFINITY;
                    for t2 in t..=t1 {
                        match left[t2] {
                            Some(v) => guard = guard.min(v),
                            None => ok = false,
                        }
                    }
                    match right[t1] {
                        Some(v) => best = best.max(v.min(guard)),
                        None => ok = false,
                    }
                }
                out[t] = ok.then_some(best);
            }
        }
    }
    out
}

pub fn random_interval(rng: &mut ChaCha8Rng) -> Interval {
    let lo = rng.gen_range(0..=3);
    Interval::new(lo, lo + rng.gen_range(0..=3)).unwrap()
}

/// A random formula over [`ATOMS`] using every operator of the grammar, with
/// `Formula::depth` at most `depth` (an atom has depth 1).
pub fn random_formula(rng: &mut ChaCha8Rng, depth: usize) -> Formula {
    if depth <= 1 || rng.gen_bool(0.2) {
        return if rng.gen_bool(0.1) {
            Formula::True
        } else {
            Formula::atom(*ATOMS.choose(rng).unwrap())
        };
    }
    let sub = |rng: &mut ChaCha8Rng| random_formula(rng, depth - 1);
    match rng.gen_range(0..6) {
        0 => Formula::Not(Box::new(sub(rng))),
        1 => Formula::And((0..rng.gen_range(2..=3)).map(|_| sub(rng)).collect()),
        2 => Formula::Or((0..rng.gen_range(2..=3)).map(|_| sub(rng)).collect()),
        3 => Formula::Eventually(random_interval(rng), Box::new(sub(rng))),
        4 => Formula::Always(random_interval(rng), Box::new(sub(rng))),
        _ => Formula::Until(random_interval(rng), Box::new(sub(rng)), Box::new(sub(rng))),
    }
}

/// Random margins for every atom, `len` samples each.
pub fn random_margins(rng: &mut ChaCha8Rng, len: usize) -> HashMap<String, Vec<f64>> {
    ATOMS
        .iter()
        .map(|a| (a.to_string(), (0..len).map(|_| rng.gen_range(-5.0..5.0)).collect()))
        .collect()
}

pub fn table(margins: &HashMap<String, Vec<f64>>) -> PropositionTable {
    PropositionTable::new(margins.iter().map(|(k, v)| (k.clone(), v.clone())))
}

pub fn close(a: f64, b: f64, tol: f64) -> bool {
    a == b || (a - b).abs() <= tol
}

/// Reference readings for S8-S12, in hand-written operand order and rank
/// order, most probable first.
pub const AMBIGUOUS_READINGS: [(&str, &[&str]); 5] = [
    ("S8", &["(F[0,10] phi_B | (F[0,10] phi_C & G[0,10] !phi_A))", "(F[0,10](phi_B | phi_C) & G[0,10] !phi_A)"]),
    ("S9", &["(F[0,10] phi_B | (F[0,15] phi_C & G[0,15] !phi_A))", "((F[0,10] phi_B | F[0,15] phi_C) & G[0,15] !phi_A)"]),
    (
        "S10",
        &["F[0,10](phi_B & F[0,15] phi_C & G[0,15] !phi_A)", "(F[0,10](phi_B & F[0,15] phi_C) & G[0,25] !phi_A)"],
    ),
    (
        "S11",
        &[
            "F[0,10](phi_B & F[0,15](phi_C & F[0,5] phi_D & G[0,5] !phi_A))",
            "F[0,10](phi_B & F[0,15](phi_C & F[0,5] phi_D) & G[0,20] !phi_A)",
            "(F[0,10](phi_B & F[0,15](phi_C & F[0,5] phi_D)) & G[0,30] !phi_A)",
        ],
    ),
    (
        "S12",
        &[
            "F[0,10](phi_B & ((F[0,15] phi_C | F[0,5] phi_D) & G[0,15] !phi_A))",
            "F[0,10](phi_B & (F[0,15] phi_C | (F[0,5] phi_D & G[0,5] !phi_A)))",
            "(F[0,10](phi_B & (F[0,15] phi_C | F[0,5] phi_D)) & G[0,25] !phi_A)",
            "(F[0,10](phi_B & F[0,15] phi_C) | (F[0,5] phi_D & G[0,5] !phi_A))",
            "((F[0,10](phi_B & F[0,15] phi_C) | F[0,5] phi_D) & G[0,25] !phi_A)",
        ],
    ),
];

/// Canonical rendering of a hand-written formula.
pub fn canon(text: &str) -> String {
    ambistl_core::canonicalize(&ambistl_core::stl::parse_formula(text).unwrap()).to_string()
}

pub fn sentence(id: &str) -> String {
    ambistl_core::corpus::bundled_corpus().into_iter().find(|s| s.id == id).unwrap().text
}
