//! Beyond exhaustive sizes: the balanced-function bound on reproducible
//! random samples at n = 8.

use boolinfo::channel::NoiseParameter;
use boolinfo::search::{verify_theorem1_on, FunctionClass, Scope, SearchOptions};

fn main() {
    let class = FunctionClass::new(8, Scope::RandomBalanced { samples: 2000, seed: 42 }, false).unwrap();
    let grid: Vec<NoiseParameter> = [0.25, 0.35, 0.45]
        .into_iter()
        .map(|a| NoiseParameter::new(a).unwrap())
        .collect();
    let report = verify_theorem1_on(class, &grid, &SearchOptions::default()).unwrap();
    println!("{} checks, {} violations", report.checked_count, report.violation_count);
    for (p, s) in report.points.iter().zip(&report.stats) {
        println!("alpha {}: best sampled MI {:.6}, slack {:.3e}", p.alpha.alpha(), s.max_value, s.min_margin);
    }
}
