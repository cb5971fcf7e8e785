//! Window compositions f_i^n as single exact maps: flattening, identity
//! detection, commutation, inversion and structural flags.
//!
//! ```bash
//! cargo run --example window_algebra
//! ```

use nds::gallery::{clamped_double, doubling, half_map};
use nds::maps::{commutes, MapSpec};
use nds::point::Point;
use nds::scalar::rat;
use nds::schedule::Schedule;
use nds::window::compile_window;

fn main() -> nds::Result<()> {
    let schedule = Schedule::cycle(vec![
        ("half".into(), half_map()),
        ("clamp2x".into(), clamped_double()),
        ("double".into(), doubling()),
    ])?;

    // the first two maps cancel exactly, including at the endpoint
    let w2 = compile_window(&schedule, 1, 2, 1000)?;
    println!("f_1^2 flattens to: {w2:?}");
    println!("  identity? {}", w2.is_identity_map(1000)?);

    // three steps compose to the doubling map; six to its square
    for n in [3u64, 6] {
        let w = compile_window(&schedule, 1, n, 1000)?;
        if let MapSpec::Pl(pl) = &w {
            println!(
                "f_1^{n} is piecewise linear with {} pieces: {pl}",
                pl.piece_count()
            );
        }
    }

    // structural flags of the generators
    for (name, map) in schedule.generators() {
        let flags = map.analyze()?;
        println!(
            "{name}: continuous={} surjective={} injective={} feeble_open={} isometry={}",
            flags.continuous, flags.surjective, flags.injective, flags.feeble_open, flags.isometry
        );
    }

    // commutation is decided exactly for piecewise maps, with a witness
    let c = commutes(&half_map(), &doubling(), &[])?;
    println!(
        "half and double commute? {} (witness {:?})",
        c.commutes,
        c.witness.map(|p| p.to_string())
    );

    // alternating rotations cancel at every even window length
    let rotations = Schedule::cycle(vec![
        ("rot".into(), MapSpec::rotation(1)),
        (
            "rot_back".into(),
            MapSpec::Inverse(Box::new(MapSpec::rotation(1))),
        ),
    ])?;
    let w = compile_window(&rotations, 1, 100, 1000)?;
    println!("rotation window of length 100: {w:?}");

    // inversion produces a concrete map; double inversion normalizes
    let inv = doubling().invert();
    println!("doubling invertible? {}", inv.is_ok());
    let three_cycle = MapSpec::Finite(nds::maps::FiniteMap::new(vec![1, 2, 0])?);
    let inv = three_cycle.invert()?;
    println!("inverse of the 3-cycle: {inv:?}");
    println!(
        "round trip of state 2: {}",
        inv.eval(&three_cycle.eval(&Point::Finite(2))?)?
    );

    // window evaluation is exact on any rational
    let w9 = compile_window(&schedule, 1, 9, 100_000)?;
    println!("f_1^9(1/7) = {}", w9.eval(&Point::Interval(rat(1, 7)))?);
    Ok(())
}
