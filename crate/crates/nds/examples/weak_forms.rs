//! Weak-form properties: witnessed by generator words at distinct schedule
//! indices rather than by initial windows. The alternating shift separates
//! the weak notions from the strong ones.
//!
//! ```bash
//! cargo run --example weak_forms
//! ```

use nds::detectors::{run_property, weak_scan, PropertySpec, WeakKind};
use nds::gallery;

fn main() -> nds::Result<()> {
    let fix = gallery::fixture("weak-but-not")?;
    println!("{}\n", fix.summary);

    // the strong check fails: windows are only the shift or the identity,
    // and neither spreads a width-3 cylinder past 1/2
    let strong = run_property(&fix.system, PropertySpec::Sensitive, &fix.defaults)?;
    println!("sensitive: {}", strong.label());
    for w in strong.witnesses.iter().take(1) {
        println!("  {w}");
    }

    // the weak scan finds a short word of shifts at distinct odd indices
    let weak = weak_scan(&fix.system, WeakKind::Sensitive, &fix.defaults)?;
    println!("\nweak_sensitive: {}", weak.label());
    for w in &weak.witnesses {
        println!("  {w}");
    }

    let weak_t = weak_scan(&fix.system, WeakKind::Transitive, &fix.defaults)?;
    println!("\nweak_transitive: {}", weak_t.label());
    for w in &weak_t.witnesses {
        println!("  {w}");
    }
    Ok(())
}
