//! Run every gallery fixture against its pinned manifest. An empty diff
//! means the fixture reproduces its expected behavior exactly.
//!
//! ```bash
//! cargo run --example gallery_tour
//! ```

use std::time::Instant;

fn main() -> nds::Result<()> {
    let mut failures = 0usize;
    for name in nds::gallery::list_fixtures() {
        let fix = nds::gallery::fixture(name)?;
        let started = Instant::now();
        let diffs = nds::gallery::run_fixture(name)?;
        let elapsed = started.elapsed();
        if diffs.is_empty() {
            println!(
                "PASS {name} ({} checks, {:.3}s)",
                fix.manifest.len(),
                elapsed.as_secs_f64()
            );
        } else {
            failures += diffs.len();
            println!("FAIL {name} ({:.3}s)", elapsed.as_secs_f64());
            for d in diffs {
                println!("  {}:", d.label);
                println!("    expected {}", d.expected);
                println!("    actual   {}", d.actual);
            }
        }
        println!("     {}", fix.summary);
    }
    if failures > 0 {
        std::process::exit(2);
    }
    Ok(())
}
