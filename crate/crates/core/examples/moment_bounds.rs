//! Even posterior moments against `(2k-1)^k (1-2α)^{2k}` and the
//! moment-based mutual-information bound for every balanced function on
//! four variables.

use boolinfo::bounds::{general_t_bound, moment_bound};
use boolinfo::channel::{mi_upper_from_moments, moment_report, NoiseParameter};
use boolinfo::search::{linear_grid, moment_points, verify_moment_points, FunctionClass, SearchOptions};

fn main() {
    let grid = linear_grid(0.0, 0.5, 11).unwrap();
    let points = moment_points(&grid, &[1, 2, 3]);
    let report = verify_moment_points(FunctionClass::balanced(4).unwrap(), &points, &SearchOptions::default()).unwrap();
    println!("{} checks, {} violations", report.checked_count, report.violation_count);
    for (p, s) in report.points.iter().zip(&report.stats) {
        let k = p.k.unwrap();
        println!(
            "k={k} alpha={:<5} max M_{} = {:.6}  bound {:.6}",
            p.alpha.alpha(),
            2 * k,
            s.max_value,
            moment_bound(p.alpha.alpha(), k).unwrap()
        );
    }

    let f = boolinfo::hypercube::named_family(&boolinfo::Family::Majority, 3).unwrap();
    let alpha = NoiseParameter::new(0.4).unwrap();
    let r = moment_report(&f, alpha, 3);
    println!("\nmajority(3) at alpha 0.4: I = {:.6} bits", r.mi_bits);
    for t in 1..=3 {
        println!(
            "  t={t}: exact-moment bound {:.6}, worst-case bound {:.6}",
            mi_upper_from_moments(&r, t, true).unwrap(),
            general_t_bound(0.4, t).unwrap()
        );
    }
}
