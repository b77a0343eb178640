//! CSV data for comparing the conjectured curve `1 - h(α)`, the quadratic
//! bound `(1 - 2α)²` and the balanced-function bound, plus higher-order
//! variants. Pipe it into any plotting tool.
//!
//! ```text
//! cargo run --example bound_curves > curves.csv
//! ```

use boolinfo::cli::{cmd_sweep, SweepColumn, SweepConfig, Format};
use boolinfo::search::linear_grid;

fn main() {
    let config = SweepConfig {
        grid: linear_grid(0.0, 0.5, 101).unwrap(),
        columns: vec![
            SweepColumn::Conjectured,
            SweepColumn::Quadratic,
            SweepColumn::Theorem1,
            SweepColumn::GeneralT(3),
            SweepColumn::GeneralT(4),
        ],
        format: Format::Csv,
    };
    print!("{}", cmd_sweep(&config).unwrap().output);
}
