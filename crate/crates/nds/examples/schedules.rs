//! Schedule rules: periodic words, triangular filler patterns, growing
//! blocks, explicit prefixes, and structural family analysis.
//!
//! ```bash
//! cargo run --example schedules
//! ```

use nds::gallery;
use nds::schedule::family_analysis;

fn main() -> nds::Result<()> {
    for name in [
        "nonsurjective-transitive",
        "triangular-3pt",
        "shift-growing-blocks",
        "minimal2-blocks",
    ] {
        let fix = gallery::fixture(name)?;
        let schedule = &fix.system.schedule;
        let prefix: Vec<&str> = (1..=16).map(|n| schedule.name_at(n)).collect();
        println!("{name}:");
        println!("  first maps: {}", prefix.join(", "));
        match schedule.detect_period(64) {
            Some(k) => println!("  periodic with least period {k}"),
            None => println!("  no period up to 64"),
        }
        let fa = family_analysis(schedule)?;
        println!(
            "  generators {:?}, commutative {:?}, all surjective {}, all feeble open {}",
            fa.generator_names, fa.commutative, fa.all_surjective, fa.all_feeble_open
        );
        if let Some((a, b, w)) = &fa.commutative_witness {
            println!(
                "  non-commuting pair: {a}, {b} at {}",
                w.as_ref().map_or("(no point)".into(), |p| p.to_string())
            );
        }
        println!();
    }

    // re-basing a schedule rotates periodic words
    let fix = gallery::fixture("nonsurjective-transitive")?;
    let shifted = fix.system.schedule.shifted_to(2);
    let word: Vec<&str> = (1..=6).map(|n| shifted.name_at(n)).collect();
    println!(
        "nonsurjective-transitive re-based at 2: {}",
        word.join(", ")
    );
    Ok(())
}
