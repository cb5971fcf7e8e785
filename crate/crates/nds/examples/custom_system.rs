//! Define a system as a JSON document, load it, and run checks — the same
//! path the command line uses.
//!
//! ```bash
//! cargo run --example custom_system
//! ```

use nds::detectors::{run_property, PropertySpec};
use nds::document::{report_to_json, SystemDocument};

const DOCUMENT: &str = r#"{
  "schema_version": 1,
  "space": { "kind": "unit_interval" },
  "generators": {
    "tent": {
      "kind": "pl",
      "breakpoints": ["0", "1/2", "1"],
      "pieces": [
        { "slope": "2", "intercept": "0" },
        { "slope": "-2", "intercept": "2" }
      ]
    },
    "id": { "kind": "identity" }
  },
  "schedule": { "kind": "periodic", "word": ["tent", "id"] },
  "defaults": { "T": 60, "delta": "1/4", "scale": "1/8" }
}"#;

fn main() -> nds::Result<()> {
    let doc = SystemDocument::parse(DOCUMENT)?;
    println!("document hash: {}", doc.hash());
    let (sys, params) = doc.instantiate()?;

    for (name, map) in sys.schedule.generators() {
        let flags = map.analyze()?;
        println!(
            "{name}: continuous={} surjective={} feeble_open={}",
            flags.continuous, flags.surjective, flags.feeble_open
        );
    }

    for prop in [
        PropertySpec::Sensitive,
        PropertySpec::CofinitelySensitive,
        PropertySpec::Transitive,
        PropertySpec::Mixing,
        PropertySpec::LiYorke,
    ] {
        let report = run_property(&sys, prop, &params)?;
        println!("{:24} {}", report.property, report.label());
    }

    // reports serialize to JSON for downstream tooling
    let report = run_property(&sys, PropertySpec::Sensitive, &params)?;
    println!(
        "\n{}",
        serde_json::to_string_pretty(&report_to_json(&report)).unwrap()
    );
    Ok(())
}
