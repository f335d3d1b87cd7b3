//! Runs every acceptance criterion and prints one line each; exits non-zero
//! if any fails.

use std::process::ExitCode;

use wentzell::verify::{run, CRITERIA};

fn main() -> ExitCode {
    let results: Vec<_> = CRITERIA
        .iter()
        .map(|c| {
            let r = run(c.0);
            println!("{r}");
            r
        })
        .collect();
    let failed: Vec<u8> = results.iter().filter(|r| !r.pass).map(|r| r.id).collect();
    println!("{} of {} criteria passed", results.len() - failed.len(), results.len());
    if failed.is_empty() {
        ExitCode::SUCCESS
    } else {
        println!("failed: {failed:?}");
        ExitCode::FAILURE
    }
}
