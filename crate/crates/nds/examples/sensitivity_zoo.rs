//! The sensitivity family side by side: base, cofinite, syndetic, thick,
//! thickly syndetic, ergodic and multi variants, all derived from one
//! per-cell hit-set run.
//!
//! ```bash
//! cargo run --example sensitivity_zoo
//! ```

use nds::detectors::sensitivity::variant_report;
use nds::detectors::{sensitivity_run, SensitivityVariant};
use nds::gallery::{self, doubling};
use nds::scalar::rat;
use nds::schedule::Schedule;
use nds::space::SpaceSpec;
use nds::window::System;

fn show(
    sys: &System,
    label: &str,
    delta: nds::scalar::Rat,
    scale: nds::scalar::Rat,
    horizon: u64,
) -> nds::Result<()> {
    println!(
        "{label} (delta {}, scale {}, T={horizon}):",
        nds::scalar::fmt_rat(&delta),
        nds::scalar::fmt_rat(&scale)
    );
    let run = sensitivity_run(sys, &delta, &scale, horizon)?;
    let theta = rat(1, 100);
    for variant in [
        SensitivityVariant::Base,
        SensitivityVariant::Cofinite,
        SensitivityVariant::Syndetic,
        SensitivityVariant::Thick,
        SensitivityVariant::ThicklySyndetic,
        SensitivityVariant::Ergodic,
        SensitivityVariant::Multi(2),
    ] {
        let report = variant_report(sys, &run, variant, &theta);
        println!("  {:32} {}", report.property, report.label());
    }
    println!();
    Ok(())
}

fn main() -> nds::Result<()> {
    // the doubling map: everything holds
    let doubling_sys = System::new(
        SpaceSpec::UnitInterval,
        Schedule::constant("double", doubling()),
    )?;
    show(&doubling_sys, "doubling map", rat(1, 4), rat(1, 8), 40)?;

    // rotations: nothing holds, every hit set is empty
    let rot = gallery::fixture("circle-alternating")?;
    show(
        &rot.system,
        "alternating rotations",
        rat(1, 10),
        rat(1, 8),
        60,
    )?;

    // growing blocks: sensitive, but the stronger variants fail by trend
    let blocks = gallery::fixture("shift-growing-blocks")?;
    show(
        &blocks.system,
        "growing shift blocks",
        rat(1, 2),
        rat(1, 1),
        300,
    )?;
    Ok(())
}
