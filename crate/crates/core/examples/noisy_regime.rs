//! Near α = ½ dictators are strictly optimal among balanced functions: every
//! other balanced function falls short of `1 - h(α)`, and the analytic
//! non-dictator bound sits below `(log₂e/2)(1-2α)²`.

use boolinfo::bounds::{corollary_threshold, nondictator_mi_bound};
use boolinfo::channel::log2_e;
use boolinfo::search::{corollary_grid, verify_corollary, SearchOptions};

fn main() {
    for n in [3, 4] {
        let grid = corollary_grid(n, 11);
        let report = verify_corollary(n, &grid, false, &SearchOptions::default()).unwrap();
        println!(
            "n={n}: alpha in [{}, 0.5), verified {}, smallest non-dictator gap {:.3e}",
            0.5 - corollary_threshold(n),
            report.is_verified(),
            report.min_margin()
        );
        for alpha in grid.iter().step_by(5) {
            let rho = alpha.rho();
            println!(
                "  alpha {:.6}: non-dictator bound {:.3e} < {:.3e}",
                alpha.alpha(),
                nondictator_mi_bound(alpha.alpha(), n).unwrap(),
                log2_e() / 2.0 * rho * rho
            );
        }
    }
}
