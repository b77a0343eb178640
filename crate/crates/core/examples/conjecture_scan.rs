//! Exhaustive check of `I(f(X);Y) ≤ 1 - h(α)` over every function on three
//! variables, listing who attains the maximum.

use boolinfo::search::{default_alpha_grid, verify_conjecture, FunctionClass, SearchOptions};

fn main() {
    let class = FunctionClass::all(3).unwrap();
    let report = verify_conjecture(class, &default_alpha_grid(), &SearchOptions::default()).unwrap();
    println!(
        "{} functions x {} alphas: {} violations",
        class.size(),
        report.points.len(),
        report.violation_count
    );
    for (point, stats) in report.points.iter().zip(&report.stats) {
        let shown: Vec<&str> = stats.maximizers.iter().take(6).map(String::as_str).collect();
        println!(
            "alpha {:<6} max {:.9}  slack {:+.1e}  {} maximizers: {}{}",
            point.alpha.alpha(),
            stats.max_value,
            stats.min_margin,
            stats.maximizers.len(),
            shown.join(" "),
            if stats.maximizers.len() > 6 { " ..." } else { "" }
        );
    }
}
