//! `‖T_ρ g‖_q ≤ ‖g‖_2` at `ρ = 1/√(q-1)`, on random real tables and on the
//! dictator.

use boolinfo::channel::hypercontractive_check;
use boolinfo::hypercube::{named_family, Family};
use boolinfo::search::verify_hypercontractivity;

fn main() {
    let report = verify_hypercontractivity(&[2, 3, 4, 6], &[3.0, 4.0, 6.0], 2000, 1).unwrap();
    println!(
        "{} random checks, {} violations, tightest slack {:.3e}",
        report.checked_count, report.violation_count, report.min_margin
    );
    let d = named_family(&Family::Dictator(1), 3).unwrap().to_real();
    for q in [3.0f64, 4.0, 6.0, 10.0] {
        let rho = (1.0 / (q - 1.0)).sqrt();
        let c = hypercontractive_check(&d, rho, 2.0, q).unwrap();
        println!("dictator q={q}: ||T g||_q = {:.6} <= ||g||_2 = {:.6}", c.lhs, c.rhs);
    }
}
