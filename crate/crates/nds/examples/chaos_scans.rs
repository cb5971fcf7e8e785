//! Scrambled-pair scans, Kato's chaos, and pointwise checks: recurrence,
//! almost periodicity, exact periodicity, equicontinuity.
//!
//! ```bash
//! cargo run --example chaos_scans
//! ```

use nds::detectors::{
    almost_periodic, check_kato, equicontinuity_at, li_yorke_scan, periodic_point, recurrent_point,
    run_property, CheckParams, PropertySpec,
};
use nds::gallery::{self, doubling, half_map};
use nds::point::Point;
use nds::scalar::rat;
use nds::schedule::Schedule;
use nds::space::SpaceSpec;
use nds::window::System;

fn main() -> nds::Result<()> {
    let doubling_sys = System::new(
        SpaceSpec::UnitInterval,
        Schedule::constant("double", doubling()),
    )?;
    let params = CheckParams {
        delta: rat(1, 4),
        epsilon: rat(1, 16),
        eta: rat(1, 32),
        scale: rat(1, 8),
        horizon: 40,
        pair_budget: 200,
        ..CheckParams::default()
    };

    // scrambled pairs: close in the tail, far somewhere
    let ly = li_yorke_scan(&doubling_sys, &params)?;
    println!("doubling map li_yorke: {}", ly.label());
    for w in ly.witnesses.iter().take(2) {
        println!("  {w}");
    }

    // sensitive and accessible together
    let kato = check_kato(&doubling_sys, &params)?;
    println!("doubling map kato: {}", kato.label());

    // rotations have rigid pairs only
    let rot = gallery::fixture("circle-alternating")?;
    let ly = li_yorke_scan(&rot.system, &params)?;
    println!("\nalternating rotations li_yorke: {}", ly.label());
    for w in ly.witnesses.iter().take(1) {
        println!("  {w}");
    }

    // pointwise checks on the alternating rotation: every point returns on
    // the even beat, exactly
    let x = Point::circle(rat(1, 3), 0);
    let rec = recurrent_point(&rot.system, &x, &rat(1, 4), 100)?;
    let ap = almost_periodic(&rot.system, &x, &rat(1, 4), 100)?;
    let per = periodic_point(&rot.system, &x, 2, 100, false)?;
    println!("\npoint 1/3 on the circle:");
    println!("  recurrent: {}", rec.label());
    println!("  almost_periodic: {}", ap.label());
    println!("  2-periodic: {}", per.label());

    // the triangular system: recurrent but the return gaps grow
    let tri = gallery::fixture("triangular-3pt")?;
    let x = Point::Finite(0);
    let ap = almost_periodic(&tri.system, &x, &rat(1, 2), 300)?;
    println!("\ntriangular state 1 almost_periodic: {}", ap.label());
    for w in ap.witnesses.iter().take(1) {
        println!("  {w}");
    }

    // equicontinuity: a contraction admits a uniform delta, the doubling
    // map does not
    let half_sys = System::new(
        SpaceSpec::UnitInterval,
        Schedule::constant("half", half_map()),
    )?;
    let grid = [rat(1, 4), rat(1, 8), rat(1, 16)];
    let eq = equicontinuity_at(
        &half_sys,
        &Point::Interval(rat(1, 3)),
        &[rat(1, 4)],
        &grid,
        50,
    )?;
    println!("\nhalf map equicontinuous at 1/3: {}", eq.label());
    let eq = equicontinuity_at(
        &doubling_sys,
        &Point::Interval(rat(1, 3)),
        &[rat(1, 8)],
        &grid,
        40,
    )?;
    println!("doubling map equicontinuous at 1/3: {}", eq.label());

    // Li-Yorke sensitivity anchors the scan at every cover cell
    let lys = run_property(&doubling_sys, PropertySpec::LiYorkeSensitive, &params)?;
    println!("\ndoubling map li_yorke_sensitive: {}", lys.label());
    Ok(())
}
