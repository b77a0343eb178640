//! A long scan written to an append-only checkpoint file. Re-running the
//! same scan picks up after the last complete block, so an interrupted
//! `--large` run loses at most one block of work.
//!
//! ```text
//! cargo run --release --example checkpointed_scan -- /tmp/scan.jsonl
//! ```

use std::path::PathBuf;
use std::time::Instant;

use boolinfo::search::{default_theorem1_grid, verify_theorem1, SearchOptions};

fn main() {
    let path = std::env::args()
        .nth(1)
        .map(PathBuf::from)
        .unwrap_or_else(|| std::env::temp_dir().join("boolinfo-theorem1-n4.jsonl"));
    let options = SearchOptions {
        checkpoint: Some(path.clone()),
        block_size: 2048,
        ..SearchOptions::default()
    };
    for attempt in 1..=2 {
        let start = Instant::now();
        let report = verify_theorem1(4, &default_theorem1_grid(), false, &options).unwrap();
        println!(
            "run {attempt}: {} checks, {} violations, {:.2?}",
            report.checked_count,
            report.violation_count,
            start.elapsed()
        );
    }
    println!("checkpoint: {}", path.display());
}
