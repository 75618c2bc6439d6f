//! Random formula generation shared by the property tests.

use proptest::prelude::*;

use super::{Formula, Interval};

pub fn arb_interval() -> impl Strategy<Value = Interval> {
    (0u32..4, 0u32..4).prop_map(|(lo, len)| Interval::new(lo, lo + len).unwrap())
}

pub fn arb_formula(depth: u32) -> impl Strategy<Value = Formula> {
    let leaf = prop_oneof![
        1 => Just(Formula::True),
        6 => prop::sample::select(vec!["A", "B", "C", "D"]).prop_map(Formula::atom),
    ];
    leaf.prop_recursive(depth, 32, 4, |inner| {
        prop_oneof![
            inner.clone().prop_map(Formula::not),
            prop::collection::vec(inner.clone(), 2..4).prop_map(Formula::And),
            prop::collection::vec(inner.clone(), 2..4).prop_map(Formula::Or),
            (arb_interval(), inner.clone()).prop_map(|(i, f)| Formula::eventually(i, f)),
            (arb_interval(), inner.clone()).prop_map(|(i, f)| Formula::always(i, f)),
            (arb_interval(), inner.clone(), inner).prop_map(|(i, l, r)| Formula::until(i, l, r)),
        ]
    })
}

/// Deterministically shuffles the children of every `And`/`Or` node.
pub fn permute_connectives(f: &Formula, seed: u64) -> Formula {
    let mut state = seed | 1;
    permute(f, &mut state)
}

fn next(state: &mut u64) -> u64 {
    // xorshift64
    *state ^= *state << 13;
    *state ^= *state >> 7;
    *state ^= *state << 17;
    *state
}

fn shuffle(mut xs: Vec<Formula>, state: &mut u64) -> Vec<Formula> {
    for i in (1..xs.len()).rev() {
        let j = (next(state) % (i as u64 + 1)) as usize;
        xs.swap(i, j);
    }
    xs
}

fn permute(f: &Formula, state: &mut u64) -> Formula {
    match f {
        Formula::True | Formula::Atom(_) => f.clone(),
        Formula::Not(c) => Formula::not(permute(c, state)),
        Formula::And(cs) => {
            let cs = cs.iter().map(|c| permute(c, state)).collect();
            Formula::And(shuffle(cs, state))
        }
        Formula::Or(cs) => {
            let cs = cs.iter().map(|c| permute(c, state)).collect();
            Formula::Or(shuffle(cs, state))
        }
        Formula::Eventually(i, c) => Formula::eventually(*i, permute(c, state)),
        Formula::Always(i, c) => Formula::always(*i, permute(c, state)),
        Formula::Until(i, l, r) => Formula::until(*i, permute(l, state), permute(r, state)),
    }
}
