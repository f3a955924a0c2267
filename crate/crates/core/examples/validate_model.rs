//! Runs the self-check suite and prints a table.

use egg_sim::validation::{run_all, Listings};

fn main() {
    let reports = run_all(&Listings::default());
    for r in &reports {
        println!(
            "{:<22} {:<4} err {:>9.2e} tol {:>7.0e} {:>6.2} s  {}",
            r.name,
            if r.passed { "ok" } else { "FAIL" },
            r.max_error,
            r.tolerance,
            r.seconds,
            r.detail
        );
    }
    if reports.iter().any(|r| !r.passed) {
        std::process::exit(1);
    }
}
