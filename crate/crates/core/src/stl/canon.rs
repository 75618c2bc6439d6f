use super::Formula;

/// Normal form used for deduplication.
///
/// Eliminates double negation, flattens nested `And`/`Or`, sorts connective
/// children by their canonical rendering and drops duplicate siblings. No
/// rewrite crosses a temporal operator, so `F(b | c)` and `F b | F c` stay
/// distinct.
pub fn canonicalize(formula: &Formula) -> Formula {
    match formula {
        Formula::True | Formula::Atom(_) => formula.clone(),
        Formula::Not(inner) => match canonicalize(inner) {
            Formula::Not(x) => *x,
            other => Formula::not(other),
        },
        Formula::And(cs) => {
            let children = normalize_children(cs, |f| match f {
                Formula::And(xs) => Some(xs),
                _ => None,
            });
            Formula::and(children)
        }
        Formula::Or(cs) => {
            let children = normalize_children(cs, |f| match f {
                Formula::Or(xs) => Some(xs),
                _ => None,
            });
            Formula::or(children)
        }
        Formula::Eventually(i, c) => Formula::eventually(*i, canonicalize(c)),
        Formula::Always(i, c) => Formula::always(*i, canonicalize(c)),
        Formula::Until(i, l, r) => Formula::until(*i, canonicalize(l), canonicalize(r)),
    }
}

fn normalize_children(
    children: &[Formula],
    same_kind: impl Fn(Formula) -> Option<Vec<Formula>>,
) -> Vec<Formula> {
    let mut flat = Vec::with_capacity(children.len());
    for c in children {
        let c = canonicalize(c);
        // Canonical children are already flat, so one level suffices.
        match same_kind(c.clone()) {
            Some(xs) => flat.extend(xs),
            None => flat.push(c),
        }
    }
    let mut keyed: Vec<(String, Formula)> = flat.into_iter().map(|f| (f.to_string(), f)).collect();
    keyed.sort_by(|a, b| a.0.cmp(&b.0));
    keyed.dedup_by(|a, b| a.0 == b.0);
    keyed.into_iter().map(|(_, f)| f).collect()
}
