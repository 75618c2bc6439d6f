use std::collections::HashMap;

use thiserror::Error;

use super::{Formula, Interval};
use crate::trajectory::{region_margin, RegionMap, Trajectory};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum RobustnessError {
    #[error("unknown atom `phi_{0}`: no region grounds it")]
    UnknownAtom(String),
    #[error("evaluation time {t} is past the trajectory end T={last}")]
    TimeOutOfRange { t: usize, last: usize },
    #[error("window t+{interval} at t={t} lies entirely past the trajectory end T={last}")]
    WindowBeyondTrajectory { t: usize, interval: Interval, last: usize },
}

/// Per-step truth margins of the atomic propositions: `h(x_t)` for each atom.
pub trait Signal {
    /// Index of the last sample, `T`.
    fn last(&self) -> usize;

    fn margin(&self, atom: &str, t: usize) -> Result<f64, RobustnessError>;
}

/// Atom margins given directly as sequences, all of length `T + 1`.
#[derive(Debug, Clone, Default)]
pub struct PropositionTable {
    margins: HashMap<String, Vec<f64>>,
    len: usize,
}

impl PropositionTable {
    /// # Panics
    /// If the sequences are empty or differ in length.
    pub fn new<I, S>(entries: I) -> Self
    where
        I: IntoIterator<Item = (S, Vec<f64>)>,
        S: Into<String>,
    {
        let margins: HashMap<String, Vec<f64>> =
            entries.into_iter().map(|(k, v)| (k.into(), v)).collect();
        let len = margins.values().next().map_or(0, Vec::len);
        assert!(len > 0, "proposition table needs at least one sample");
        assert!(margins.values().all(|v| v.len() == len), "ragged proposition table");
        PropositionTable { margins, len }
    }
}

impl Signal for PropositionTable {
    fn last(&self) -> usize {
        self.len - 1
    }

    fn margin(&self, atom: &str, t: usize) -> Result<f64, RobustnessError> {
        self.margins
            .get(atom)
            .map(|v| v[t])
            .ok_or_else(|| RobustnessError::UnknownAtom(atom.to_string()))
    }
}

struct Grounded<'a> {
    trajectory: &'a Trajectory,
    regions: &'a RegionMap,
}

impl Signal for Grounded<'_> {
    fn last(&self) -> usize {
        self.trajectory.last()
    }

    fn margin(&self, atom: &str, t: usize) -> Result<f64, RobustnessError> {
        let region =
            self.regions.get(atom).ok_or_else(|| RobustnessError::UnknownAtom(atom.to_string()))?;
        Ok(region_margin(region, self.trajectory.states()[t]))
    }
}

/// Robustness of `formula` on trajectory `x` at time `t`, with atoms grounded
/// by `regions`.
pub fn robustness(
    formula: &Formula,
    x: &Trajectory,
    regions: &RegionMap,
    t: usize,
) -> Result<f64, RobustnessError> {
    robustness_on(formula, &Grounded { trajectory: x, regions }, t)
}

/// Robustness against any atom signal.
///
/// Windows `t + I` are clipped to `[0, T]`; a window with no sample left after
/// clipping is an error. `true` has robustness `+inf`.
pub fn robustness_on<S: Signal + ?Sized>(
    formula: &Formula,
    signal: &S,
    t: usize,
) -> Result<f64, RobustnessError> {
    let last = signal.last();
    if t > last {
        return Err(RobustnessError::TimeOutOfRange { t, last });
    }
    eval(formula, signal, t)
}

fn window<S: Signal + ?Sized>(
    signal: &S,
    interval: Interval,
    t: usize,
) -> Result<std::ops::RangeInclusive<usize>, RobustnessError> {
    let last = signal.last();
    let start = t + interval.lo() as usize;
    if start > last {
        return Err(RobustnessError::WindowBeyondTrajectory { t, interval, last });
    }
    let end = (t + interval.hi() as usize).min(last);
    Ok(start..=end)
}

fn eval<S: Signal + ?Sized>(formula: &Formula, signal: &S, t: usize) -> Result<f64, RobustnessError> {
    match formula {
        Formula::True => Ok(f64::INFINITY),
        Formula::Atom(name) => signal.margin(name, t),
        Formula::Not(c) => Ok(-eval(c, signal, t)?),
        Formula::And(cs) => cs.iter().try_fold(f64::INFINITY, |acc, c| Ok(acc.min(eval(c, signal, t)?))),
        Formula::Or(cs) => {
            cs.iter().try_fold(f64::NEG_INFINITY, |acc, c| Ok(acc.max(eval(c, signal, t)?)))
        }
        Formula::Eventually(i, c) => window(signal, *i, t)?
            .try_fold(f64::NEG_INFINITY, |acc, t1| Ok(acc.max(eval(c, signal, t1)?))),
        Formula::Always(i, c) => window(signal, *i, t)?
            .try_fold(f64::INFINITY, |acc, t1| Ok(acc.min(eval(c, signal, t1)?))),
        Formula::Until(i, l, r) => {
            let win = window(signal, *i, t)?;
            // Running min of the left operand over [t, t1].
            let mut left_min = f64::INFINITY;
            let mut best = f64::NEG_INFINITY;
            for t2 in t..*win.start() {
                left_min = left_min.min(eval(l, signal, t2)?);
            }
            for t1 in win {
                left_min = left_min.min(eval(l, signal, t1)?);
                best = best.max(eval(r, signal, t1)?.min(left_min));
            }
            Ok(best)
        }
    }
}
