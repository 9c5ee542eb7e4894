//! The fast self-check suite, as run by `supershift selfcheck`.

use supershift::cli::checks::{run, Level};

fn main() {
    let reports = run(Level::Fast, None, |r| println!("{}", r.line()));
    let failed = reports.iter().filter(|r| !r.passed).count();
    println!("{} checks, {failed} failed", reports.len());
}
