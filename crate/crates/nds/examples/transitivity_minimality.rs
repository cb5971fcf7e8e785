//! Transitivity, weak mixing, mixing, and both minimality notions, with
//! the fixtures that separate them.
//!
//! ```bash
//! cargo run --example transitivity_minimality
//! ```

use nds::detectors::transitivity::variant_report;
use nds::detectors::{
    run_property, transitivity_run, CheckParams, PropertySpec, TransitivityVariant,
};
use nds::gallery;
use nds::scalar::rat;

fn main() -> nds::Result<()> {
    // one run, three verdicts: the mixing chain on the three-map cycle
    let fix = gallery::fixture("nonsurjective-transitive")?;
    let params = CheckParams {
        scale: rat(1, 8),
        horizon: 60,
        ..CheckParams::default()
    };
    let run = transitivity_run(&fix.system, &params)?;
    for variant in [
        TransitivityVariant::Transitive,
        TransitivityVariant::WeaklyMixing,
        TransitivityVariant::Mixing,
    ] {
        let r = variant_report(&fix.system, &run, variant);
        println!("{}: {} {}", fix.name, r.property, r.label());
    }

    // minimality in both senses on the triangular three-state system
    let fix = gallery::fixture("triangular-3pt")?;
    let m1 = run_property(&fix.system, PropertySpec::MinimalM1, &fix.defaults)?;
    let m2 = run_property(&fix.system, PropertySpec::MinimalM2, &fix.defaults)?;
    println!("\n{}:", fix.name);
    println!("  minimal_m1 (exhaustive): {}", m1.label());
    println!("  minimal_m2 (orbit density): {}", m2.label());

    // the block family separates the two notions: density fails with a
    // concrete witness, while the invariant-subset search stays open
    let fix = gallery::fixture("minimal2-blocks")?;
    let m2 = run_property(&fix.system, PropertySpec::MinimalM2, &fix.defaults)?;
    let m1 = run_property(&fix.system, PropertySpec::MinimalM1, &fix.defaults)?;
    println!("\n{}:", fix.name);
    println!("  minimal_m2: {}", m2.label());
    for w in m2.witnesses.iter().take(1) {
        println!("    witness: {w}");
    }
    println!("  minimal_m1: {}", m1.label());
    for line in m1.evidence.iter().take(1) {
        println!("    {line}");
    }

    // a squared cycle fails transitivity with a concrete pair
    let fix = gallery::fixture("k-transfer-counterexample")?;
    let t = run_property(&fix.system, PropertySpec::Transitive, &fix.defaults)?;
    println!(
        "\n{} (the sequence itself): transitive {}",
        fix.name,
        t.label()
    );
    Ok(())
}
