//! Full acceptance run: one line per criterion, nonzero exit if any fails.
//! Runs without the libtest harness so the lines are always printed.

use std::process::ExitCode;
use std::time::Instant;

use redistwalk::acceptance::{run_criterion, Config, CRITERIA};

fn main() -> ExitCode {
    let config = Config::default();
    let mut failed = Vec::new();
    for (id, _) in CRITERIA {
        let start = Instant::now();
        let c = run_criterion(&config, id);
        println!("{} [{:.1}s]", c.line(), start.elapsed().as_secs_f64());
        if !c.pass {
            for v in c.checks.iter().filter(|v| !v.pass) {
                println!("    failed: {} (margin {:.3e})", v.check, v.margin);
            }
            failed.push(id);
        }
    }
    if failed.is_empty() {
        println!("acceptance: all {} criteria pass", CRITERIA.len());
        ExitCode::SUCCESS
    } else {
        println!("acceptance: failed criteria {failed:?}");
        ExitCode::FAILURE
    }
}
