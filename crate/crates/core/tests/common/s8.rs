//! The S8 discriminating scenario: the robot cuts through A on its way into B.

use ambistl_core::trajectory::{load_regions, load_trajectory};
use ambistl_core::{RegionMap, Trajectory};

pub const REGIONS: &str = "a: 1 0 2 1\nb: 4 0 5 1\nc: 0 5 1 6\n";

/// x = 0, 1.5 (inside A), 3, then inside B from t = 3 through t = 10.
pub fn trajectory_csv() -> String {
    let mut csv = String::from("t,x,y\n0,0,0.5\n1,1.5,0.5\n2,3,0.5\n");
    for t in 3..=10 {
        csv.push_str(&format!("{t},4.5,0.5\n"));
    }
    csv
}

pub fn scenario() -> (Trajectory, RegionMap) {
    (load_trajectory(&trajectory_csv()).unwrap(), load_regions(REGIONS).unwrap())
}
