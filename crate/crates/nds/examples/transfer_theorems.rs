//! The reduction harness: compare a periodic sequence against its compiled
//! period map g = f_k ∘ ... ∘ f_1, and against its shifted tails, recording
//! which implications are claimed and whether the evidence is consistent.
//!
//! ```bash
//! cargo run --example transfer_theorems
//! ```

use nds::detectors::{CheckParams, PropertySpec};
use nds::gallery::{self, doubling};
use nds::reduce::{compile_period_map, shift_compare, theorem_registry, transfer_compare};
use nds::scalar::rat;
use nds::schedule::Schedule;
use nds::space::SpaceSpec;
use nds::window::System;

fn show(case: &nds::reduce::TransferCase) {
    println!(
        "{} [{}]: sequence {}, reduced {}, consistency {}",
        case.property,
        case.comparison,
        case.nds_report.label(),
        case.reduced_report.label(),
        case.consistency.label()
    );
    for h in &case.hypotheses {
        println!("  hypothesis {}: {} ({})", h.name, h.holds, h.detail);
    }
    for n in &case.notes {
        println!("  note: {n}");
    }
}

fn main() -> nds::Result<()> {
    // cofinite sensitivity transfers both ways for the doubled doubling map
    let sys = System::new(
        SpaceSpec::UnitInterval,
        Schedule::cycle(vec![
            ("double_a".into(), doubling()),
            ("double_b".into(), doubling()),
        ])?,
    )?;
    let params = CheckParams {
        delta: rat(1, 4),
        scale: rat(1, 8),
        horizon: 30,
        ..CheckParams::default()
    };
    let (k, g) = compile_period_map(&sys.schedule)?;
    println!("compiled period map (k={k}): {g:?}\n");
    show(&transfer_compare(
        &sys,
        PropertySpec::CofinitelySensitive,
        &params,
    )?);

    // the periodic counterexample: the sequence is transitive, its
    // reduction is not, and no theorem claims that direction
    println!();
    let fix = gallery::fixture("k-transfer-counterexample")?;
    show(&transfer_compare(
        &fix.system,
        PropertySpec::Transitive,
        &fix.defaults,
    )?);

    // shifted sequences: the forward hypotheses fail for the three-map
    // cycle (a non-surjective member), so disagreement is not a violation
    println!();
    let fix = gallery::fixture("nonsurjective-transitive")?;
    show(&shift_compare(
        &fix.system,
        2,
        PropertySpec::Sensitive,
        &params,
    )?);

    // the registry records one statement with no runnable fixture
    println!("\ntheorem registry:");
    for entry in theorem_registry() {
        println!(
            "  {} {}",
            entry.tag,
            if entry.needs_fixture {
                "(needs fixture)"
            } else {
                ""
            }
        );
    }
    Ok(())
}
