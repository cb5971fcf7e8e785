//! Exact orbit iteration: apply the map sequence step by step and watch
//! where points go.
//!
//! ```bash
//! cargo run --example orbits
//! ```

use nds::gallery;
use nds::point::Point;
use nds::scalar::rat;

fn main() -> nds::Result<()> {
    // a three-state cycle applied at triangular positions 1, 3, 6, 10, ...
    // with identity filler in between
    let fix = gallery::fixture("triangular-3pt")?;
    println!("schedule prefix:");
    let names: Vec<&str> = (1..=12).map(|n| fix.system.schedule.name_at(n)).collect();
    println!("  {}", names.join(", "));

    let orbit = fix.system.orbit(&Point::Finite(0), 12)?;
    println!("orbit of state 1:");
    for (n, p) in orbit.iter().enumerate() {
        if let Point::Finite(i) = p {
            print!(
                "{}{}",
                if n == 0 { "  " } else { " -> " },
                fix.system.space.label_of(*i)
            );
        }
    }
    println!();

    // the block family on [0,1] whose five-map blocks cancel pairwise:
    // the orbit of 1 visits exactly two points, forever
    let fix = gallery::fixture("minimal2-blocks")?;
    let orbit = fix.system.orbit(&Point::Interval(rat(1, 1)), 100)?;
    let mut seen: Vec<String> = Vec::new();
    for p in &orbit {
        let s = p.to_string();
        if !seen.contains(&s) {
            seen.push(s);
        }
    }
    println!("\ndistinct orbit points of 1 under the block family (100 steps): {seen:?}");

    // exact rationals never drift: the thousandth image is still exact
    let fix = gallery::fixture("nonsurjective-transitive")?;
    let orbit = fix.system.orbit(&Point::Interval(rat(1, 3)), 1000)?;
    println!(
        "\nthousandth image of 1/3 under the three-map cycle: {}",
        orbit.last().unwrap()
    );
    Ok(())
}
