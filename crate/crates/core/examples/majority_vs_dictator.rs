//! The dictator has the largest second posterior moment, yet for large k
//! majority's peak deviation makes `max|d|^{2k}` dominate.

use boolinfo::channel::NoiseParameter;
use boolinfo::search::moment_crossover_experiment;

fn main() {
    let alpha = NoiseParameter::new(0.25).unwrap();
    for n in [3, 5, 7] {
        let t = moment_crossover_experiment(n, alpha, &[1, 2, 4, 8, 16, 32, 64]).unwrap();
        println!(
            "n={n}: max|d| majority {:.4}, dictator {:.4}",
            t.majority_max_deviation, t.dictator_max_deviation
        );
        for r in &t.rows {
            println!(
                "  k={:<3} M_2k maj/dict = {:.4e}  peak ratio^2k = {:.3e}",
                r.k,
                r.moment_ratio.unwrap(),
                r.max_deviation_ratio.unwrap()
            );
        }
    }
}
