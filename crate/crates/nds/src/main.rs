//! Batch front end: load a system document (or a named gallery fixture),
//! run checks, and emit reports as JSON or CSV.
//!
//! Exit codes: 0 for Holds/pass, 2 for Fails, 3 for Inconclusive, 1 for
//! usage or IO errors.

use std::io::Read;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use nds::detectors::points::separation_curve;
use nds::detectors::{
    almost_periodic, equicontinuity_at, periodic_point, recurrent_point, run_property, CheckParams,
    PropertySpec,
};
use nds::document::{
    class_verdict_to_json, parse_point, parse_region_any, report_to_json, sample_from_json,
    sample_to_json, system_schema, transfer_to_json, SystemDocument,
};
use nds::error::NdsError;
use nds::gallery;
use nds::hitting::{classify, hitting_set, sensitivity_hits, ClassKind};
use nds::report::Verdict;
use nds::scalar::parse_rat;
use nds::window::System;

#[derive(Parser)]
#[command(
    name = "nds",
    about = "Exact experiments with non-autonomous discrete dynamical systems",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct SystemArg {
    /// Path to a system JSON document, or the name of a gallery fixture.
    #[arg(long)]
    system: String,
}

impl SystemArg {
    fn load(&self) -> Result<(System, CheckParams, String), NdsError> {
        if gallery::FIXTURE_NAMES.contains(&self.system.as_str()) {
            let fix = gallery::fixture(&self.system)?;
            let doc = fix.document();
            let hash = doc.hash();
            return Ok((fix.system, fix.defaults, hash));
        }
        let text = std::fs::read_to_string(&self.system)
            .map_err(|e| NdsError::Parse(format!("cannot read {}: {e}", self.system)))?;
        let doc = SystemDocument::parse(&text)?;
        let hash = doc.hash();
        let (sys, params) = doc.instantiate()?;
        Ok((sys, params, hash))
    }
}

#[derive(Args, Clone, Default)]
struct ParamArgs {
    /// Sensitivity constant, as a rational "p/q".
    #[arg(long)]
    delta: Option<String>,
    /// Approach threshold, as a rational "p/q".
    #[arg(long)]
    epsilon: Option<String>,
    /// Proximality threshold for scrambled-pair scans.
    #[arg(long)]
    eta: Option<String>,
    /// Density bar for ergodic sensitivity.
    #[arg(long)]
    theta: Option<String>,
    /// Cover scale w (cells have diameter at most w/2).
    #[arg(long, alias = "cover")]
    scale: Option<String>,
    /// Horizon T.
    #[arg(long)]
    horizon: Option<u64>,
    /// Word length bound for weak scans.
    #[arg(long = "word-length")]
    word_length: Option<u64>,
    /// Subset size for multi sensitivity.
    #[arg(long)]
    m: Option<u64>,
    /// Pair budget for scrambled-pair scans.
    #[arg(long)]
    pairs: Option<u64>,
}

impl ParamArgs {
    fn apply(&self, mut params: CheckParams) -> Result<CheckParams, NdsError> {
        if let Some(s) = &self.delta {
            params.delta = parse_rat(s)?;
        }
        if let Some(s) = &self.epsilon {
            params.epsilon = parse_rat(s)?;
        }
        if let Some(s) = &self.eta {
            params.eta = parse_rat(s)?;
        }
        if let Some(s) = &self.theta {
            params.theta = parse_rat(s)?;
        }
        if let Some(s) = &self.scale {
            params.scale = parse_rat(s)?;
        }
        if let Some(t) = self.horizon {
            params.horizon = t;
        }
        if let Some(l) = self.word_length {
            params.word_len = l;
        }
        if let Some(m) = self.m {
            params.multi_m = m;
        }
        if let Some(p) = self.pairs {
            params.pair_budget = p;
        }
        Ok(params)
    }
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate the n-step window at a point and print the image.
    Eval {
        #[command(flatten)]
        system: SystemArg,
        #[arg(long)]
        point: String,
        #[arg(long)]
        n: u64,
    },
    /// Stream the orbit of a point as CSV rows n,point.
    Orbit {
        #[command(flatten)]
        system: SystemArg,
        #[arg(long)]
        point: String,
        #[arg(long)]
        horizon: u64,
    },
    /// Print a hitting set N(U,V) (with --v) or sensitivity hit set N(U,delta).
    Hits {
        #[command(flatten)]
        system: SystemArg,
        /// Source region literal.
        #[arg(long)]
        u: String,
        /// Target region literal (omit to use --delta instead).
        #[arg(long)]
        v: Option<String>,
        #[arg(long)]
        delta: Option<String>,
        #[arg(long)]
        horizon: u64,
    },
    /// Classify an index sample against a set class.
    Classify {
        /// syndetic | thick | cofinite | thickly_syndetic | upper_density
        #[arg(long)]
        kind: String,
        /// Run length for thickly_syndetic.
        #[arg(long)]
        k: Option<u64>,
        /// Density bar for upper_density, as "p/q".
        #[arg(long)]
        theta: Option<String>,
        /// Sample JSON {"T": n, "members": [...]}; reads stdin when omitted.
        #[arg(long)]
        sample: Option<String>,
    },
    /// Run a property detector and print the report as JSON.
    Check {
        #[command(flatten)]
        system: SystemArg,
        /// Property name; point properties (recurrent, almost_periodic,
        /// periodic, equicontinuous) require --point.
        #[arg(long)]
        property: String,
        #[command(flatten)]
        params: ParamArgs,
        /// Point literal for point properties.
        #[arg(long)]
        point: Option<String>,
        /// Period for the periodic point check.
        #[arg(long)]
        k: Option<u64>,
        /// Write per-cell separation curves (cell,n,diam) as CSV.
        #[arg(long = "emit-curve")]
        emit_curve: Option<String>,
    },
    /// Compare the sequence against its periodic reduction or a shifted tail.
    Compare {
        #[command(flatten)]
        system: SystemArg,
        /// period | shift
        #[arg(long)]
        mode: String,
        /// Start index for shift mode (n >= 2).
        #[arg(long)]
        n: Option<u64>,
        #[arg(long)]
        property: String,
        #[command(flatten)]
        params: ParamArgs,
    },
    /// Gallery fixtures: list, run NAME, export NAME.
    Example {
        #[command(subcommand)]
        action: ExampleAction,
    },
    /// Print the system document JSON schema.
    Schema,
}

#[derive(Subcommand)]
enum ExampleAction {
    List,
    Run { name: String },
    Export { name: String },
}

fn verdict_exit(v: Verdict) -> ExitCode {
    ExitCode::from(v.exit_code() as u8)
}

fn run(cli: Cli) -> Result<ExitCode, NdsError> {
    match cli.command {
        Command::Eval { system, point, n } => {
            let (sys, _, _) = system.load()?;
            let p = parse_point(&sys.space, &point)?;
            let orbit = sys.orbit(&p, n)?;
            let q = orbit.last().unwrap();
            let shown = match q {
                nds::point::Point::Finite(i) => sys.space.label_of(*i),
                other => other.to_string(),
            };
            println!("{shown}");
            Ok(ExitCode::SUCCESS)
        }
        Command::Orbit {
            system,
            point,
            horizon,
        } => {
            let (sys, _, _) = system.load()?;
            let p = parse_point(&sys.space, &point)?;
            let orbit = sys.orbit(&p, horizon)?;
            println!("n,point");
            for (n, q) in orbit.iter().enumerate().skip(1) {
                let shown = match q {
                    nds::point::Point::Finite(i) => sys.space.label_of(*i),
                    other => other.to_string(),
                };
                println!("{n},{shown}");
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Hits {
            system,
            u,
            v,
            delta,
            horizon,
        } => {
            let (sys, params, _) = system.load()?;
            let u = parse_region_any(&sys.space, &u)?;
            let sample = match (v, delta) {
                (Some(v), None) => {
                    let v = parse_region_any(&sys.space, &v)?;
                    hitting_set(&sys, &u, &v, horizon)?
                }
                (None, d) => {
                    let delta = match d {
                        Some(s) => parse_rat(&s)?,
                        None => params.delta.clone(),
                    };
                    sensitivity_hits(&sys, &u, &delta, horizon)?
                }
                (Some(_), Some(_)) => {
                    return Err(NdsError::BadParameter(
                        "give either --v or --delta, not both".into(),
                    ))
                }
            };
            println!("{}", sample_to_json(&sample));
            Ok(ExitCode::SUCCESS)
        }
        Command::Classify {
            kind,
            k,
            theta,
            sample,
        } => {
            let text = match sample {
                Some(s) => s,
                None => {
                    let mut buf = String::new();
                    std::io::stdin()
                        .read_to_string(&mut buf)
                        .map_err(|e| NdsError::Parse(format!("stdin: {e}")))?;
                    buf
                }
            };
            let value: serde_json::Value =
                serde_json::from_str(&text).map_err(|e| NdsError::Parse(format!("sample: {e}")))?;
            let sample = sample_from_json(&value)?;
            let kind = match kind.as_str() {
                "syndetic" => ClassKind::Syndetic,
                "thick" => ClassKind::Thick,
                "cofinite" => ClassKind::Cofinite,
                "thickly_syndetic" => ClassKind::ThicklySyndetic(k.unwrap_or(2)),
                "upper_density" => ClassKind::UpperDensity(match theta {
                    Some(t) => parse_rat(&t)?,
                    None => nds::scalar::rat(1, 100),
                }),
                other => {
                    return Err(NdsError::BadParameter(format!(
                        "unknown class kind {other:?}"
                    )))
                }
            };
            let c = classify(&sample, &kind)?;
            println!(
                "{}",
                serde_json::to_string_pretty(&class_verdict_to_json(&c)).unwrap()
            );
            Ok(verdict_exit(c.verdict))
        }
        Command::Check {
            system,
            property,
            params,
            point,
            k,
            emit_curve,
        } => {
            let (sys, defaults, hash) = system.load()?;
            let merged = params.apply(defaults)?;
            let report = match property.as_str() {
                "recurrent" | "almost_periodic" | "periodic" | "equicontinuous" => {
                    let p = point.ok_or_else(|| {
                        NdsError::BadParameter(format!("--point is required for {property}"))
                    })?;
                    let p = parse_point(&sys.space, &p)?;
                    match property.as_str() {
                        "recurrent" => recurrent_point(&sys, &p, &merged.epsilon, merged.horizon)?,
                        "almost_periodic" => {
                            almost_periodic(&sys, &p, &merged.epsilon, merged.horizon)?
                        }
                        "periodic" => {
                            periodic_point(&sys, &p, k.unwrap_or(1), merged.horizon, false)?
                        }
                        _ => {
                            let eps_list = vec![merged.epsilon.clone()];
                            let grid = delta_grid(&merged);
                            equicontinuity_at(&sys, &p, &eps_list, &grid, merged.horizon)?
                        }
                    }
                }
                name => run_property(&sys, PropertySpec::parse(name)?, &merged)?,
            };
            if let Some(path) = emit_curve {
                emit_curves(&sys, &merged, &path)?;
            }
            let mut json = report_to_json(&report);
            json["document_hash"] = serde_json::Value::String(hash);
            println!("{}", serde_json::to_string_pretty(&json).unwrap());
            Ok(verdict_exit(report.verdict))
        }
        Command::Compare {
            system,
            mode,
            n,
            property,
            params,
        } => {
            let (sys, defaults, hash) = system.load()?;
            let merged = params.apply(defaults)?;
            let prop = PropertySpec::parse(&property)?;
            let case = match mode.as_str() {
                "period" => nds::reduce::transfer_compare(&sys, prop, &merged)?,
                "shift" => nds::reduce::shift_compare(&sys, n.unwrap_or(2), prop, &merged)?,
                other => {
                    return Err(NdsError::BadParameter(format!(
                        "unknown compare mode {other:?} (period | shift)"
                    )))
                }
            };
            let mut json = transfer_to_json(&case);
            json["document_hash"] = serde_json::Value::String(hash);
            println!("{}", serde_json::to_string_pretty(&json).unwrap());
            Ok(match case.consistency {
                nds::reduce::Consistency::Consistent => ExitCode::SUCCESS,
                nds::reduce::Consistency::Violation => ExitCode::from(2),
                nds::reduce::Consistency::NotApplicable => ExitCode::from(3),
            })
        }
        Command::Example { action } => match action {
            ExampleAction::List => {
                for name in gallery::list_fixtures() {
                    let fix = gallery::fixture(name)?;
                    println!("{name}: {}", fix.summary);
                }
                Ok(ExitCode::SUCCESS)
            }
            ExampleAction::Run { name } => {
                let diffs = gallery::run_fixture(&name)?;
                if diffs.is_empty() {
                    println!("{name}: all manifest entries reproduce");
                    Ok(ExitCode::SUCCESS)
                } else {
                    for d in &diffs {
                        println!("{name}: {}", d.label);
                        println!("  expected: {}", d.expected);
                        println!("  actual:   {}", d.actual);
                    }
                    Ok(ExitCode::from(2))
                }
            }
            ExampleAction::Export { name } => {
                let fix = gallery::fixture(&name)?;
                println!(
                    "{}",
                    serde_json::to_string_pretty(&fix.document().to_json()).unwrap()
                );
                Ok(ExitCode::SUCCESS)
            }
        },
        Command::Schema => {
            println!(
                "{}",
                serde_json::to_string_pretty(&system_schema()).unwrap()
            );
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn delta_grid(params: &CheckParams) -> Vec<nds::scalar::Rat> {
    let mut grid = Vec::new();
    let mut d = params.epsilon.clone();
    for _ in 0..6 {
        grid.push(d.clone());
        d /= nds::scalar::rat(2, 1);
    }
    grid
}

fn emit_curves(sys: &System, params: &CheckParams, path: &str) -> Result<(), NdsError> {
    use std::io::Write;
    let cover = nds::cover::build_cover(&sys.space, &params.scale)?;
    let mut out = String::from("cell,n,diam,diam_decimal\n");
    for cell in &cover.cells {
        let curve = separation_curve(sys, &cell.region, params.horizon)?;
        for (n, d) in curve {
            out.push_str(&format!("\"{}\",{n},{d},{:.6}\n", cell.id, d.to_f64()));
        }
    }
    let mut f = std::fs::File::create(path)
        .map_err(|e| NdsError::Parse(format!("cannot write {path}: {e}")))?;
    f.write_all(out.as_bytes())
        .map_err(|e| NdsError::Parse(format!("cannot write {path}: {e}")))?;
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            // help and version requests are not usage errors
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0u8,
                _ => 1u8,
            };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
