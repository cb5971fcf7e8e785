//! Hitting sets N(U, V), sensitivity hit sets N(U, delta), and the set
//! classifiers that grade them: syndetic, thick, cofinite, thickly
//! syndetic, upper density.
//!
//! ```bash
//! cargo run --example hitting_sets
//! ```

use nds::gallery;
use nds::hitting::{classify, hitting_set, sensitivity_hits, ClassKind};
use nds::interval::IntervalComp;
use nds::region::{Cylinder, RegionSet};
use nds::scalar::rat;

fn main() -> nds::Result<()> {
    // the doubling map pushes any small interval across the space
    let fix = gallery::fixture("nonsurjective-transitive")?;
    let u = RegionSet::Intervals(vec![IntervalComp::open(rat(0, 1), rat(1, 8))]);
    let v = RegionSet::Intervals(vec![IntervalComp::try_new(
        rat(7, 8),
        rat(1, 1),
        true,
        false,
    )
    .unwrap()]);
    let hits = hitting_set(&fix.system, &u, &v, 30)?;
    println!("N((0,1/8), (7/8,1]) up to 30: {:?}", hits.members());
    let c = classify(&hits, &ClassKind::Cofinite)?;
    println!("  cofinite? {:?} ({})", c.verdict, c.detail);

    // sensitivity hit sets of the growing-blocks schedule have growing gaps
    let fix = gallery::fixture("shift-growing-blocks")?;
    let u = RegionSet::Cylinders(vec![Cylinder::from_pairs(&[(0, 1)])]);
    let hits = sensitivity_hits(&fix.system, &u, &rat(1, 2), 300)?;
    println!("\ngrowing blocks, width-1 cylinder, delta 1/2:");
    println!("  {} hit times in [1, 300]", hits.len());
    for kind in [
        ClassKind::Syndetic,
        ClassKind::Thick,
        ClassKind::Cofinite,
        ClassKind::ThicklySyndetic(3),
        ClassKind::UpperDensity(rat(1, 2)),
    ] {
        let c = classify(&hits, &kind)?;
        print!("  {}: {:?}", kind.name(), c.verdict);
        if let Some(t) = &c.trend {
            print!(
                " ({} {} at T={} vs {} at T={})",
                t.what, t.sub_value, t.sub_horizon, t.full_value, t.full_horizon
            );
        }
        if let Some(d) = &c.density {
            print!(" (density {})", nds::scalar::fmt_rat(d));
        }
        println!();
    }

    // a finite hitting set: the isolated state is reachable exactly once
    let fix = gallery::fixture("finite-hitting-isolated")?;
    let u = RegionSet::Indices([0usize].into_iter().collect());
    let v = RegionSet::Indices([4usize].into_iter().collect());
    let hits = hitting_set(&fix.system, &u, &v, 20)?;
    println!(
        "\nisolated-state fixture: N({{0}}, {{4}}) = {:?}",
        hits.members()
    );
    Ok(())
}
