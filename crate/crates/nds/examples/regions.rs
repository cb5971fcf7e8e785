//! Exact region algebra: balls, forward images, preimages, diameters and
//! intersection tests on all four space kinds.
//!
//! ```bash
//! cargo run --example regions
//! ```

use nds::gallery::doubling;
use nds::interval::IntervalComp;
use nds::maps::MapSpec;
use nds::point::Point;
use nds::region::{CircleRegion, Cylinder, RegionSet};
use nds::scalar::rat;
use nds::seq::SeqPoint;
use nds::space::SpaceSpec;

fn main() -> nds::Result<()> {
    // interval: the doubling map splits and merges components exactly
    let u = RegionSet::Intervals(vec![IntervalComp::closed(rat(1, 4), rat(1, 2))]);
    let img = u.image(&doubling())?;
    println!("doubling image of [1/4, 1/2]: {img}");
    let pre = img.preimage(&doubling())?;
    println!("preimage of that image:      {pre}");

    // balls are open regions; diameters are exact suprema
    let ball = SpaceSpec::UnitInterval.ball(&Point::Interval(rat(1, 2)), &rat(1, 8))?;
    println!(
        "ball(1/2, 1/8) = {ball}, diameter {}",
        ball.diam(&SpaceSpec::UnitInterval)?
    );

    // circle arcs rotate symbolically: endpoints stay rational while the
    // frame records the irrational angle, so intersection stays decidable
    let arc = RegionSet::Arcs(CircleRegion::from_comps(vec![IntervalComp::half_open(
        rat(0, 1),
        rat(1, 8),
    )]));
    let rotated = arc.image(&MapSpec::rotation(1))?;
    println!("\nrotated arc: {rotated}");
    let near = RegionSet::Arcs(CircleRegion::from_comps(vec![IntervalComp::half_open(
        rat(5, 8),
        rat(3, 4),
    )]));
    println!("meets [5/8, 3/4)? {}", rotated.intersects(&near)?);
    println!(
        "meets [0, 1/2)?   {}",
        rotated.intersects(&arc.image(&MapSpec::Identity)?)?
    );

    // cylinders reindex under the shift; diameters come from the metric
    let cyl = RegionSet::Cylinders(vec![Cylinder::from_pairs(&[(0, 1)])]);
    let shifted = cyl.image(&MapSpec::Shift { power: 1 })?;
    println!("\ncylinder {cyl} shifts to {shifted}");
    println!(
        "diameters: {} -> {}",
        cyl.diam(&SpaceSpec::Shift)?,
        shifted.diam(&SpaceSpec::Shift)?
    );
    let x = Point::Seq(SeqPoint::periodic("10")?);
    println!("contains (10)*? {}", shifted.contains(&x)?);

    // shift balls are cylinders: radius 1/2 pins the window |i| <= 1
    let ball = SpaceSpec::Shift.ball(&x, &rat(1, 2))?;
    println!("ball((10)*, 1/2) = {ball}");
    Ok(())
}
