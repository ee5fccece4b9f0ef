//! Full-scale acceptance sweep: one PASS/FAIL line per criterion. Runs without
//! the libtest harness so the lines always reach stdout.

use std::process::ExitCode;

use twistlab::acceptance::{run_suite, SuiteConfig};

fn main() -> ExitCode {
    let reports = run_suite(&SuiteConfig::full());
    for r in &reports {
        println!("{r}");
    }
    let failed: Vec<u8> = reports.iter().filter(|r| !r.passed()).map(|r| r.id).collect();
    if failed.is_empty() {
        println!("acceptance: {} of {} criteria pass", reports.len(), reports.len());
        ExitCode::SUCCESS
    } else {
        println!("acceptance: failing criteria {failed:?}");
        ExitCode::FAILURE
    }
}
