//! Inputs shared by the benchmarks.

use ambistl_core::trajectory::{Point, Region};
use ambistl_core::{RegionMap, Trajectory};

/// Four unit boxes `a`..`d` spaced along the x axis.
pub fn regions() -> RegionMap {
    let mut map = RegionMap::new();
    for (k, name) in ["a", "b", "c", "d"].into_iter().enumerate() {
        let x = 2.0 * k as f64;
        map.insert(name, Region::new(x, 0.0, x + 1.0, 1.0).expect("valid box")).expect("unique name");
    }
    map
}

/// A deterministic sweep across the boxes with a small vertical wobble.
pub fn sweep(len: usize) -> Trajectory {
    let states = (0..len)
        .map(|t| {
            let s = t as f64 / len.max(2) as f64;
            Point::new(8.0 * s, 0.5 + 0.7 * (t as f64 * 0.9).sin())
        })
        .collect();
    Trajectory::new(states).expect("non-empty")
}
