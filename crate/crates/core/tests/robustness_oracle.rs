mod common;

use ambistl_core::stl::{robustness_on, Formula};
use common::{close, oracle_table, random_formula, random_margins, table};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[test]
fn recursive_evaluator_matches_nested_loops() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut defined = 0;
    for _ in 0..400 {
        let f = random_formula(&mut rng, 4);
        let len = rng.gen_range(1..=10);
        let margins = random_margins(&mut rng, len);
        let signal = table(&margins);
        let want = oracle_table(&f, &margins, len);
        for (t, expected) in want.iter().enumerate() {
            let got = robustness_on(&f, &signal, t).ok();
            match (got, expected) {
                (Some(g), Some(e)) => {
                    assert!(close(g, *e, 1e-12), "{f} at t={t}: {g} vs {e}");
                    defined += 1;
                }
                (None, None) => {}
                _ => panic!("{f} at t={t}: evaluator {got:?}, oracle {expected:?}"),
            }
        }
    }
    assert!(defined > 500, "too few defined values compared: {defined}");
}

#[test]
fn hand_computed_until() {
    let margins = [("p".to_string(), vec![3.0, 1.0, -2.0, 4.0]), ("q".to_string(), vec![-1.0, 0.5, 2.0, 6.0])]
        .into_iter()
        .collect();
    let f = Formula::until(ambistl_core::Interval::new(1, 3).unwrap(), Formula::atom("p"), Formula::atom("q"));
    // t1=1: min(0.5, min(3,1)) = 0.5; t1=2: min(2, -2) = -2; t1=3: min(6, -2) = -2.
    assert_eq!(oracle_table(&f, &margins, 4)[0], Some(0.5));
    assert_eq!(robustness_on(&f, &table(&margins), 0).unwrap(), 0.5);
}
