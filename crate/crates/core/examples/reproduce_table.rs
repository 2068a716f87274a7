//! Headline checks and a randomized oracle sweep, as one table.

use wbell::report::{reproduce, verify_oracle, ReproduceOptions};

fn main() -> wbell::Result<()> {
    let table = reproduce(&ReproduceOptions::default())?;
    print!("{table}");
    let oracle = verify_oracle(300, 0)?;
    println!(
        "oracle sweep: {} trials, max deviation {:.2e}",
        oracle.trials, oracle.max_deviation
    );
    if !table.all_passed() || !oracle.passed() {
        std::process::exit(1);
    }
    Ok(())
}
