//! The fixture gallery: reference systems packaged with pinned expected
//! behavior. Each fixture is a small constructive system whose dynamics
//! separate notions that coincide for autonomous systems; the manifests are
//! the crate's regression core.
//!
//! Provenance marks whether an expected value is pinned from the source
//! construction (`Pinned`) or recomputed at build time by an independent
//! enumeration (`Derived`).

use num_bigint::BigInt;

use crate::detectors::{
    almost_periodic, minimal_char_union, periodic_point, run_property, CheckParams, PropertySpec,
};
use crate::document::{DefaultsDoc, SystemDocument};
use crate::error::{NdsError, Result};
use crate::hitting::{classify, hitting_set, sensitivity_hits, ClassKind};
use crate::maps::{Affine, FiniteMap, MapSpec, PLMap};
use crate::point::Point;
use crate::reduce::{transfer_compare, Consistency};
use crate::region::{Cylinder, RegionSet};
use crate::report::Verdict;
use crate::scalar::{fmt_rat, pow2, rat, Rat};
use crate::schedule::{family_analysis, Schedule, ScheduleRule};
use crate::space::SpaceSpec;
use crate::window::{compile_window, System};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Provenance {
    Pinned,
    Derived,
}

/// One manifest check: an operation to run and the outcome it must produce.
#[derive(Debug, Clone)]
pub struct ManifestEntry {
    pub label: &'static str,
    pub provenance: Provenance,
    pub check: Check,
    pub expected: Outcome,
}

#[derive(Debug, Clone)]
pub enum Check {
    /// analyze(generator).flag
    AnalyzeFlag {
        generator: &'static str,
        flag: &'static str,
    },
    /// run_property with overrides applied to the fixture defaults
    Property {
        prop: PropertySpec,
        overrides: ParamOverrides,
    },
    /// compile_window(1, 2k) is the zero rotation for all k <= upto
    WindowsAreZeroRotation { upto: u64 },
    /// every listed point is exactly k-periodic
    PointsPeriodic {
        points: Vec<Point>,
        k: u64,
        horizon: u64,
    },
    /// almost periodicity of a point at eps
    AlmostPeriodic {
        point: Point,
        eps: Rat,
        horizon: u64,
    },
    /// the eps-return gap at the large horizon strictly exceeds the gap at
    /// the small horizon
    ReturnGapGrows {
        point: Point,
        eps: Rat,
        small: u64,
        large: u64,
    },
    /// the orbit of a point as a set of display strings
    OrbitSet { point: Point, horizon: u64 },
    /// the orbit of a point as a label sequence (finite spaces)
    OrbitStates { point: Point, horizon: u64 },
    /// N(U, V) as an explicit member list
    HittingSet {
        u: RegionSet,
        v: RegionSet,
        horizon: u64,
    },
    /// N(U, delta) equals the times with nonzero net shift count, checked
    /// against an independent simulation of the schedule rule
    SensitivityHitsAreNetShiftTimes {
        u: RegionSet,
        delta: Rat,
        horizon: u64,
    },
    /// classify(N(U, V), kind).verdict
    HittingClassify {
        u: RegionSet,
        v: RegionSet,
        horizon: u64,
        kind: ClassKind,
    },
    /// transfer_compare consistency plus both verdicts
    Transfer {
        prop: PropertySpec,
        overrides: ParamOverrides,
    },
    /// family analysis surjectivity flag
    FamilyAllSurjective,
    /// preimage-cover characterization agrees with M2 on this fixture
    PreimageCover { overrides: ParamOverrides },
}

/// Sparse parameter overrides on top of the fixture defaults.
#[derive(Debug, Clone, Default)]
pub struct ParamOverrides {
    pub delta: Option<Rat>,
    pub epsilon: Option<Rat>,
    pub eta: Option<Rat>,
    pub scale: Option<Rat>,
    pub horizon: Option<u64>,
    pub word_len: Option<u64>,
}

impl ParamOverrides {
    fn apply(&self, base: &CheckParams) -> CheckParams {
        let mut p = base.clone();
        if let Some(v) = &self.delta {
            p.delta = v.clone();
        }
        if let Some(v) = &self.epsilon {
            p.epsilon = v.clone();
        }
        if let Some(v) = &self.eta {
            p.eta = v.clone();
        }
        if let Some(v) = &self.scale {
            p.scale = v.clone();
        }
        if let Some(v) = self.horizon {
            p.horizon = v;
        }
        if let Some(v) = self.word_len {
            p.word_len = v;
        }
        p
    }
}

/// Comparable, printable outcome of a manifest check.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Outcome {
    VerdictIs(Verdict),
    Flag(bool),
    Times(Vec<u64>),
    PointSet(Vec<String>),
    States(Vec<String>),
    TransferOutcome {
        consistency: &'static str,
        nds: Verdict,
        reduced: Verdict,
    },
}

impl std::fmt::Display for Outcome {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Outcome::VerdictIs(v) => write!(f, "{v:?}"),
            Outcome::Flag(b) => write!(f, "{b}"),
            Outcome::Times(ts) => {
                if ts.len() > 12 {
                    write!(f, "{:?}... ({} members)", &ts[..12], ts.len())
                } else {
                    write!(f, "{ts:?}")
                }
            }
            Outcome::PointSet(ps) => write!(f, "{{{}}}", ps.join(", ")),
            Outcome::States(ss) => write!(f, "{}", ss.join(",")),
            Outcome::TransferOutcome {
                consistency,
                nds,
                reduced,
            } => write!(f, "{consistency} (sequence {nds:?}, reduced {reduced:?})"),
        }
    }
}

pub struct Fixture {
    pub name: &'static str,
    pub summary: &'static str,
    pub system: System,
    pub defaults: CheckParams,
    pub manifest: Vec<ManifestEntry>,
}

impl Fixture {
    pub fn document(&self) -> SystemDocument {
        SystemDocument::from_system(
            &self.system,
            DefaultsDoc {
                horizon: Some(self.defaults.horizon),
                scale: Some(fmt_rat(&self.defaults.scale)),
                delta: Some(fmt_rat(&self.defaults.delta)),
                epsilon: Some(fmt_rat(&self.defaults.epsilon)),
                eta: Some(fmt_rat(&self.defaults.eta)),
                theta: Some(fmt_rat(&self.defaults.theta)),
                word_len: Some(self.defaults.word_len),
                pairs: Some(self.defaults.pair_budget),
                multi_m: Some(self.defaults.multi_m),
            },
        )
    }
}

#[derive(Debug, Clone)]
pub struct EntryDiff {
    pub label: &'static str,
    pub expected: String,
    pub actual: String,
}

pub const FIXTURE_NAMES: [&str; 8] = [
    "nonsurjective-transitive",
    "finite-hitting-isolated",
    "circle-alternating",
    "triangular-3pt",
    "minimal2-blocks",
    "shift-growing-blocks",
    "k-transfer-counterexample",
    "weak-but-not",
];

pub fn list_fixtures() -> Vec<&'static str> {
    FIXTURE_NAMES.to_vec()
}

// ---- the generator maps -------------------------------------------------

pub fn half_map() -> MapSpec {
    MapSpec::Pl(PLMap::single(rat(1, 2), rat(0, 1)).unwrap())
}

/// 2x on [0,1/2), then the constant 1: continuous, surjective, undoes the
/// half map from the left.
pub fn clamped_double() -> MapSpec {
    MapSpec::Pl(
        PLMap::new(
            vec![rat(0, 1), rat(1, 2), rat(1, 1)],
            vec![
                Affine::new(rat(2, 1), rat(0, 1)),
                Affine::constant(rat(1, 1)),
            ],
        )
        .unwrap(),
    )
}

/// Doubling with wrap: 2x on [0,1/2), 2x-1 on [1/2,1].
pub fn doubling() -> MapSpec {
    MapSpec::Pl(
        PLMap::new(
            vec![rat(0, 1), rat(1, 2), rat(1, 1)],
            vec![
                Affine::new(rat(2, 1), rat(0, 1)),
                Affine::new(rat(2, 1), rat(-1, 1)),
            ],
        )
        .unwrap(),
    )
}

/// Block map: x + 2^-(k+2) on [0,1/2), then the affine ramp onto [1/2+2^-(k+2), 1].
fn block_raise(k: u32) -> MapSpec {
    let q = pow2(-(k as i32 + 2)); // 2^-(k+2)
    let two_q = pow2(-(k as i32 + 1));
    MapSpec::Pl(
        PLMap::new(
            vec![rat(0, 1), rat(1, 2), rat(1, 1)],
            vec![
                Affine::new(rat(1, 1), q),
                Affine::new(Rat::from_integer(BigInt::from(1)) - &two_q, two_q),
            ],
        )
        .unwrap(),
    )
}

/// Inverse ramp of `block_raise`: collapses [0, 2^-(k+2)] to 0, slides the
/// middle down, and expands the top band back onto [1/2, 1].
fn block_lower(k: u32) -> MapSpec {
    let q = pow2(-(k as i32 + 2));
    let two_q = pow2(-(k as i32 + 1));
    let one = Rat::from_integer(BigInt::from(1));
    let mid_hi = rat(1, 2) + &q;
    let slope = &one / (&one - &two_q);
    let intercept = -&two_q / (&one - &two_q);
    MapSpec::Pl(
        PLMap::new(
            vec![rat(0, 1), q.clone(), mid_hi, rat(1, 1)],
            vec![
                Affine::constant(rat(0, 1)),
                Affine::new(rat(1, 1), -q),
                Affine::new(slope, intercept),
            ],
        )
        .unwrap(),
    )
}

fn cycle3() -> MapSpec {
    MapSpec::Finite(FiniteMap::new(vec![1, 2, 0]).unwrap())
}

fn cycle4() -> FiniteMap {
    FiniteMap::new(vec![1, 2, 3, 0]).unwrap()
}

fn shift_map() -> MapSpec {
    MapSpec::Shift { power: 1 }
}

fn width1_cylinder(bit: u8) -> RegionSet {
    RegionSet::Cylinders(vec![Cylinder::from_pairs(&[(0, bit)])])
}

// ---- fixture constructions ----------------------------------------------

fn build_nonsurjective_transitive() -> Result<Fixture> {
    let system = System::new(
        SpaceSpec::UnitInterval,
        Schedule::cycle(vec![
            ("half".into(), half_map()),
            ("clamp2x".into(), clamped_double()),
            ("double".into(), doubling()),
        ])?,
    )?;
    let defaults = CheckParams {
        delta: rat(1, 4),
        scale: rat(1, 8),
        horizon: 60,
        ..CheckParams::default()
    };
    let manifest = vec![
        ManifestEntry {
            label: "half map is not surjective",
            provenance: Provenance::Pinned,
            check: Check::AnalyzeFlag {
                generator: "half",
                flag: "surjective",
            },
            expected: Outcome::Flag(false),
        },
        ManifestEntry {
            label: "family has a non-surjective member",
            provenance: Provenance::Derived,
            check: Check::FamilyAllSurjective,
            expected: Outcome::Flag(false),
        },
        ManifestEntry {
            label: "transitive at scale 1/8 within T=30",
            provenance: Provenance::Pinned,
            check: Check::Property {
                prop: PropertySpec::Transitive,
                overrides: ParamOverrides {
                    horizon: Some(30),
                    ..Default::default()
                },
            },
            expected: Outcome::VerdictIs(Verdict::Holds),
        },
        ManifestEntry {
            label: "sensitive at delta 1/4",
            provenance: Provenance::Derived,
            check: Check::Property {
                prop: PropertySpec::Sensitive,
                overrides: ParamOverrides::default(),
            },
            expected: Outcome::VerdictIs(Verdict::Holds),
        },
    ];
    Ok(Fixture {
        name: "nonsurjective-transitive",
        summary: "three-map cycle on [0,1]: a contraction undone by a clamped doubling, then a wrapping doubling; transitive although infinitely many sequence members are not surjective",
        system,
        defaults,
        manifest,
    })
}

fn build_finite_hitting_isolated() -> Result<Fixture> {
    // augmented space: the 4-cycle plus an isolated extra state 4; first map
    // sends everything to 4, second everything to 0, then the cycle runs
    let mut ext_cycle = cycle4().table;
    ext_cycle.push(4); // the extra state stays put under the cycle extension
    let system = System::new(
        SpaceSpec::finite_discrete(5),
        Schedule::new(
            vec![
                (
                    "const_iso".into(),
                    MapSpec::Finite(FiniteMap::new(vec![4; 5])?),
                ),
                (
                    "const_zero".into(),
                    MapSpec::Finite(FiniteMap::new(vec![0; 5])?),
                ),
                ("cycle".into(), MapSpec::Finite(FiniteMap::new(ext_cycle)?)),
            ],
            ScheduleRule::Explicit {
                prefix: vec![0, 1],
                tail: vec![2],
            },
        )?,
    )?;
    let defaults = CheckParams {
        horizon: 20,
        ..CheckParams::default()
    };
    let u: RegionSet = RegionSet::Indices([0usize].into_iter().collect());
    let iso: RegionSet = RegionSet::Indices([4usize].into_iter().collect());
    let manifest = vec![
        ManifestEntry {
            label: "hitting times of the isolated state are exactly {1}",
            provenance: Provenance::Pinned,
            check: Check::HittingSet {
                u: u.clone(),
                v: iso.clone(),
                horizon: 20,
            },
            expected: Outcome::Times(vec![1]),
        },
        ManifestEntry {
            label: "that hitting set is not cofinite",
            provenance: Provenance::Derived,
            check: Check::HittingClassify {
                u,
                v: iso,
                horizon: 20,
                kind: ClassKind::Cofinite,
            },
            expected: Outcome::VerdictIs(Verdict::Fails),
        },
        ManifestEntry {
            label: "the sequence is transitive despite the finite hitting set",
            provenance: Provenance::Pinned,
            check: Check::Property {
                prop: PropertySpec::Transitive,
                overrides: ParamOverrides::default(),
            },
            expected: Outcome::VerdictIs(Verdict::Holds),
        },
    ];
    Ok(Fixture {
        name: "finite-hitting-isolated",
        summary: "augmented finite space with an isolated state: two constant maps feed a transitive cycle, so a hitting set is finite while the sequence stays transitive",
        system,
        defaults,
        manifest,
    })
}

fn build_circle_alternating() -> Result<Fixture> {
    let system = System::new(
        SpaceSpec::Circle,
        Schedule::cycle(vec![
            ("rot".into(), MapSpec::rotation(1)),
            (
                "rot_back".into(),
                MapSpec::Inverse(Box::new(MapSpec::rotation(1))),
            ),
        ])?,
    )?;
    let defaults = CheckParams {
        delta: rat(1, 10),
        scale: rat(1, 8),
        horizon: 100,
        ..CheckParams::default()
    };
    let sample_points = vec![
        Point::circle(rat(0, 1), 0),
        Point::circle(rat(1, 3), 0),
        Point::circle(rat(5, 8), 0),
        Point::circle(rat(2, 7), 3),
        Point::circle(rat(9, 11), -2),
    ];
    let manifest = vec![
        ManifestEntry {
            label: "even windows compile to the zero rotation",
            provenance: Provenance::Pinned,
            check: Check::WindowsAreZeroRotation { upto: 50 },
            expected: Outcome::Flag(true),
        },
        ManifestEntry {
            label: "every sampled point is exactly 2-periodic",
            provenance: Provenance::Pinned,
            check: Check::PointsPeriodic {
                points: sample_points.clone(),
                k: 2,
                horizon: 100,
            },
            expected: Outcome::VerdictIs(Verdict::Holds),
        },
        ManifestEntry {
            label: "sampled points are almost periodic",
            provenance: Provenance::Pinned,
            check: Check::AlmostPeriodic {
                point: Point::circle(rat(0, 1), 0),
                eps: rat(1, 4),
                horizon: 100,
            },
            expected: Outcome::VerdictIs(Verdict::Holds),
        },
        ManifestEntry {
            label: "not sensitive at delta 1/10",
            provenance: Provenance::Derived,
            check: Check::Property {
                prop: PropertySpec::Sensitive,
                overrides: ParamOverrides::default(),
            },
            expected: Outcome::VerdictIs(Verdict::Fails),
        },
        ManifestEntry {
            label: "two-point orbits are not dense",
            provenance: Provenance::Pinned,
            check: Check::Property {
                prop: PropertySpec::MinimalM2,
                overrides: ParamOverrides {
                    horizon: Some(50),
                    ..Default::default()
                },
            },
            expected: Outcome::VerdictIs(Verdict::Fails),
        },
    ];
    Ok(Fixture {
        name: "circle-alternating",
        summary: "irrational rotation alternated with its inverse: every point is 2-periodic and almost periodic, yet no orbit is dense and no sensitivity at any scale",
        system,
        defaults,
        manifest,
    })
}

fn build_triangular_3pt() -> Result<Fixture> {
    let system = System::new(
        SpaceSpec::finite_labeled(&["1", "2", "3"]),
        Schedule::new(
            vec![("f".into(), cycle3()), ("id".into(), MapSpec::Identity)],
            ScheduleRule::Triangular { base: 0, filler: 1 },
        )?,
    )?;
    let defaults = CheckParams {
        horizon: 30,
        ..CheckParams::default()
    };
    let manifest = vec![
        ManifestEntry {
            label: "no proper invariant subset (exhaustive over 7 subsets)",
            provenance: Provenance::Pinned,
            check: Check::Property {
                prop: PropertySpec::MinimalM1,
                overrides: ParamOverrides::default(),
            },
            expected: Outcome::VerdictIs(Verdict::Holds),
        },
        ManifestEntry {
            label: "every orbit is dense at T=30",
            provenance: Provenance::Pinned,
            check: Check::Property {
                prop: PropertySpec::MinimalM2,
                overrides: ParamOverrides::default(),
            },
            expected: Outcome::VerdictIs(Verdict::Holds),
        },
        ManifestEntry {
            label: "preimage unions cover the space (density characterization)",
            provenance: Provenance::Derived,
            check: Check::PreimageCover {
                overrides: ParamOverrides::default(),
            },
            expected: Outcome::VerdictIs(Verdict::Holds),
        },
        ManifestEntry {
            label: "state 1 is not almost periodic (gaps grow)",
            provenance: Provenance::Pinned,
            check: Check::AlmostPeriodic {
                point: Point::Finite(0),
                eps: rat(1, 2),
                horizon: 300,
            },
            expected: Outcome::VerdictIs(Verdict::Fails),
        },
        ManifestEntry {
            label: "return gap at T=300 exceeds the gap at T=60",
            provenance: Provenance::Derived,
            check: Check::ReturnGapGrows {
                point: Point::Finite(0),
                eps: rat(1, 2),
                small: 60,
                large: 300,
            },
            expected: Outcome::Flag(true),
        },
        ManifestEntry {
            label: "orbit of state 1 over ten steps",
            provenance: Provenance::Derived,
            check: Check::OrbitStates {
                point: Point::Finite(0),
                horizon: 10,
            },
            expected: Outcome::States(
                ["2", "2", "3", "3", "3", "1", "1", "1", "1", "2"]
                    .iter()
                    .map(|s| s.to_string())
                    .collect(),
            ),
        },
    ];
    Ok(Fixture {
        name: "triangular-3pt",
        summary: "three-state cycle applied at triangular positions with identity filler: minimal in both senses, yet return gaps grow without bound",
        system,
        defaults,
        manifest,
    })
}

fn build_minimal2_blocks() -> Result<Fixture> {
    // five-map blocks: id, the half map, its clamped-double inverse, then a
    // k-dependent raise/lower pair that also cancels; the raise amount
    // shrinks as 2^-(k+2)
    let blocks: u32 = 32;
    let mut generators: Vec<(String, MapSpec)> = vec![
        ("id".into(), MapSpec::Identity),
        ("half".into(), half_map()),
        ("clamp2x".into(), clamped_double()),
    ];
    let mut prefix: Vec<usize> = Vec::with_capacity(5 * blocks as usize);
    for k in 0..blocks {
        let raise_idx = generators.len();
        generators.push((format!("raise{k}"), block_raise(k)));
        let lower_idx = generators.len();
        generators.push((format!("lower{k}"), block_lower(k)));
        prefix.extend_from_slice(&[0, 1, 2, raise_idx, lower_idx]);
    }
    let system = System::new(
        SpaceSpec::UnitInterval,
        Schedule::new(
            generators,
            ScheduleRule::Explicit {
                prefix,
                tail: vec![0, 1, 2, 0, 0],
            },
        )?,
    )?;
    let defaults = CheckParams {
        scale: rat(1, 8),
        horizon: 50,
        ..CheckParams::default()
    };
    let manifest = vec![
        ManifestEntry {
            label: "orbit of 1 is exactly {1/2, 1} at T=100",
            provenance: Provenance::Pinned,
            check: Check::OrbitSet {
                point: Point::Interval(rat(1, 1)),
                horizon: 100,
            },
            expected: Outcome::PointSet(vec!["1".into(), "1/2".into()]),
        },
        ManifestEntry {
            label: "orbits are not dense at scale 1/8",
            provenance: Provenance::Pinned,
            check: Check::Property {
                prop: PropertySpec::MinimalM2,
                overrides: ParamOverrides::default(),
            },
            expected: Outcome::VerdictIs(Verdict::Fails),
        },
        ManifestEntry {
            label: "no finite certificate for the invariant-subset search",
            provenance: Provenance::Pinned,
            check: Check::Property {
                prop: PropertySpec::MinimalM1,
                overrides: ParamOverrides::default(),
            },
            expected: Outcome::VerdictIs(Verdict::Inconclusive),
        },
    ];
    Ok(Fixture {
        name: "minimal2-blocks",
        summary: "five-map block family on [0,1] whose pairs cancel exactly: the orbit of 1 is the two-point set {1/2, 1}, separating the two minimality notions",
        system,
        defaults,
        manifest,
    })
}

fn build_shift_growing_blocks() -> Result<Fixture> {
    let system = System::new(
        SpaceSpec::Shift,
        Schedule::new(
            vec![
                ("shift".into(), shift_map()),
                ("shift_back".into(), MapSpec::Inverse(Box::new(shift_map()))),
                ("id".into(), MapSpec::Identity),
            ],
            ScheduleRule::GrowingBlocks {
                generator: 0,
                inverse: 1,
                filler: 2,
            },
        )?,
    )?;
    let defaults = CheckParams {
        delta: rat(1, 2),
        scale: rat(1, 1),
        horizon: 300,
        ..CheckParams::default()
    };
    let manifest = vec![
        ManifestEntry {
            label: "hit set of a width-1 cylinder equals the nonzero net-shift times",
            provenance: Provenance::Derived,
            check: Check::SensitivityHitsAreNetShiftTimes {
                u: width1_cylinder(1),
                delta: rat(1, 2),
                horizon: 300,
            },
            expected: Outcome::Flag(true),
        },
        ManifestEntry {
            label: "not syndetically sensitive (gaps grow)",
            provenance: Provenance::Pinned,
            check: Check::Property {
                prop: PropertySpec::SyndeticallySensitive,
                overrides: ParamOverrides::default(),
            },
            expected: Outcome::VerdictIs(Verdict::Fails),
        },
        ManifestEntry {
            label: "not thickly syndetically sensitive",
            provenance: Provenance::Pinned,
            check: Check::Property {
                prop: PropertySpec::ThicklySyndeticallySensitive,
                overrides: ParamOverrides::default(),
            },
            expected: Outcome::VerdictIs(Verdict::Fails),
        },
    ];
    Ok(Fixture {
        name: "shift-growing-blocks",
        summary: "shift and its inverse in growing blocks with identity filler: transitive-flavored dynamics whose sensitivity hit sets have ever-growing gaps",
        system,
        defaults,
        manifest,
    })
}

fn build_k_transfer_counterexample() -> Result<Fixture> {
    let h = cycle4();
    let h3 = MapSpec::Finite(FiniteMap::new(vec![3, 0, 1, 2])?);
    let system = System::new(
        SpaceSpec::finite_discrete(4),
        Schedule::cycle(vec![
            ("h3".into(), h3),
            (
                "h_inv".into(),
                MapSpec::Inverse(Box::new(MapSpec::Finite(h))),
            ),
        ])?,
    )?;
    let defaults = CheckParams {
        horizon: 20,
        ..CheckParams::default()
    };
    let u: RegionSet = RegionSet::Indices([0usize].into_iter().collect());
    let v: RegionSet = RegionSet::Indices([1usize].into_iter().collect());
    let manifest = vec![
        ManifestEntry {
            label: "state 1 is reached from state 0 at time 3",
            provenance: Provenance::Derived,
            check: Check::HittingSet { u, v, horizon: 10 },
            expected: Outcome::Times(vec![3, 7]),
        },
        ManifestEntry {
            label: "sequence transitive, compiled period map not",
            provenance: Provenance::Pinned,
            check: Check::Transfer {
                prop: PropertySpec::Transitive,
                overrides: ParamOverrides::default(),
            },
            expected: Outcome::TransferOutcome {
                consistency: "NotApplicable",
                nds: Verdict::Holds,
                reduced: Verdict::Fails,
            },
        },
    ];
    Ok(Fixture {
        name: "k-transfer-counterexample",
        summary: "alternating h^3 and the inverse of the 4-cycle h: the sequence walks the whole cycle but the compiled 2-periodic reduction h^2 splits it in half",
        system,
        defaults,
        manifest,
    })
}

fn build_weak_but_not() -> Result<Fixture> {
    let system = System::new(
        SpaceSpec::Shift,
        Schedule::cycle(vec![
            ("shift".into(), shift_map()),
            ("shift_back".into(), MapSpec::Inverse(Box::new(shift_map()))),
        ])?,
    )?;
    let defaults = CheckParams {
        delta: rat(1, 2),
        scale: rat(1, 2),
        horizon: 100,
        word_len: 8,
        ..CheckParams::default()
    };
    let manifest = vec![
        ManifestEntry {
            label: "weakly sensitive at delta 1/2 with words up to length 8",
            provenance: Provenance::Pinned,
            check: Check::Property {
                prop: PropertySpec::WeakSensitive,
                overrides: ParamOverrides::default(),
            },
            expected: Outcome::VerdictIs(Verdict::Holds),
        },
        ManifestEntry {
            label: "not sensitive at the same delta",
            provenance: Provenance::Pinned,
            check: Check::Property {
                prop: PropertySpec::Sensitive,
                overrides: ParamOverrides::default(),
            },
            expected: Outcome::VerdictIs(Verdict::Fails),
        },
        ManifestEntry {
            label: "weakly transitive with words up to length 8",
            provenance: Provenance::Derived,
            check: Check::Property {
                prop: PropertySpec::WeakTransitive,
                overrides: ParamOverrides::default(),
            },
            expected: Outcome::VerdictIs(Verdict::Holds),
        },
    ];
    Ok(Fixture {
        name: "weak-but-not",
        summary: "shift alternated with its inverse: windows never separate points, but words over distinct indices do, splitting the weak notions from the strong ones",
        system,
        defaults,
        manifest,
    })
}

pub fn fixture(name: &str) -> Result<Fixture> {
    match name {
        "nonsurjective-transitive" => build_nonsurjective_transitive(),
        "finite-hitting-isolated" => build_finite_hitting_isolated(),
        "circle-alternating" => build_circle_alternating(),
        "triangular-3pt" => build_triangular_3pt(),
        "minimal2-blocks" => build_minimal2_blocks(),
        "shift-growing-blocks" => build_shift_growing_blocks(),
        "k-transfer-counterexample" => build_k_transfer_counterexample(),
        "weak-but-not" => build_weak_but_not(),
        other => Err(NdsError::UnknownFixture(other.to_string())),
    }
}

/// Independent oracle for the growing-blocks rule: net shift count after n
/// steps, computed directly from the block layout.
pub fn net_shift_count(schedule: &Schedule, horizon: u64) -> Vec<i64> {
    let mut out = Vec::with_capacity(horizon as usize + 1);
    out.push(0);
    let mut c = 0i64;
    for n in 1..=horizon {
        match schedule.name_at(n) {
            "shift" => c += 1,
            "shift_back" => c -= 1,
            _ => {}
        }
        out.push(c);
    }
    out
}

fn run_check(fix: &Fixture, check: &Check) -> Result<Outcome> {
    let sys = &fix.system;
    Ok(match check {
        Check::AnalyzeFlag { generator, flag } => {
            let map = sys
                .schedule
                .generators()
                .iter()
                .find(|(n, _)| n == generator)
                .ok_or_else(|| NdsError::UnknownFixture(format!("generator {generator}")))?;
            let flags = map.1.analyze()?;
            Outcome::Flag(match *flag {
                "surjective" => flags.surjective,
                "injective" => flags.injective,
                "continuous" => flags.continuous,
                "feeble_open" => flags.feeble_open,
                "isometry" => flags.isometry,
                other => return Err(NdsError::BadParameter(format!("unknown flag {other}"))),
            })
        }
        Check::Property { prop, overrides } => {
            let params = overrides.apply(&fix.defaults);
            Outcome::VerdictIs(run_property(sys, *prop, &params)?.verdict)
        }
        Check::WindowsAreZeroRotation { upto } => {
            let mut ok = true;
            for k in 1..=*upto {
                let w = compile_window(&sys.schedule, 1, 2 * k, 10_000)?;
                if w != (MapSpec::Rotation {
                    steps: 0,
                    offset: rat(0, 1),
                }) {
                    ok = false;
                    break;
                }
            }
            Outcome::Flag(ok)
        }
        Check::PointsPeriodic { points, k, horizon } => {
            let mut verdict = Verdict::Holds;
            for p in points {
                let r = periodic_point(sys, p, *k, *horizon, false)?;
                verdict = verdict.join(r.verdict);
            }
            Outcome::VerdictIs(verdict)
        }
        Check::AlmostPeriodic {
            point,
            eps,
            horizon,
        } => Outcome::VerdictIs(almost_periodic(sys, point, eps, *horizon)?.verdict),
        Check::ReturnGapGrows {
            point,
            eps,
            small,
            large,
        } => {
            let small_sample = crate::detectors::points::return_times(sys, point, eps, *small)?;
            let large_sample = crate::detectors::points::return_times(sys, point, eps, *large)?;
            Outcome::Flag(large_sample.max_gap() > small_sample.max_gap())
        }
        Check::OrbitSet { point, horizon } => {
            let orbit = sys.orbit(point, *horizon)?;
            let mut seen: Vec<Point> = Vec::new();
            for p in orbit {
                if !seen.contains(&p) {
                    seen.push(p);
                }
            }
            let mut names: Vec<String> = seen.iter().map(|p| p.to_string()).collect();
            names.sort();
            Outcome::PointSet(names)
        }
        Check::OrbitStates { point, horizon } => {
            let orbit = sys.orbit(point, *horizon)?;
            Outcome::States(
                orbit
                    .iter()
                    .skip(1)
                    .map(|p| match p {
                        Point::Finite(i) => sys.space.label_of(*i),
                        other => other.to_string(),
                    })
                    .collect(),
            )
        }
        Check::HittingSet { u, v, horizon } => {
            Outcome::Times(hitting_set(sys, u, v, *horizon)?.members().to_vec())
        }
        Check::SensitivityHitsAreNetShiftTimes { u, delta, horizon } => {
            let hits = sensitivity_hits(sys, u, delta, *horizon)?;
            let counts = net_shift_count(&sys.schedule, *horizon);
            let expected: Vec<u64> = (1..=*horizon)
                .filter(|&n| counts[n as usize] != 0)
                .collect();
            Outcome::Flag(hits.members() == expected.as_slice())
        }
        Check::HittingClassify {
            u,
            v,
            horizon,
            kind,
        } => {
            let hits = hitting_set(sys, u, v, *horizon)?;
            Outcome::VerdictIs(classify(&hits, kind)?.verdict)
        }
        Check::Transfer { prop, overrides } => {
            let params = overrides.apply(&fix.defaults);
            let case = transfer_compare(sys, *prop, &params)?;
            Outcome::TransferOutcome {
                consistency: match case.consistency {
                    Consistency::Consistent => "Consistent",
                    Consistency::Violation => "Violation",
                    Consistency::NotApplicable => "NotApplicable",
                },
                nds: case.nds_report.verdict,
                reduced: case.reduced_report.verdict,
            }
        }
        Check::FamilyAllSurjective => Outcome::Flag(family_analysis(&sys.schedule)?.all_surjective),
        Check::PreimageCover { overrides } => {
            let params = overrides.apply(&fix.defaults);
            Outcome::VerdictIs(minimal_char_union(sys, &params)?.verdict)
        }
    })
}

/// Run every manifest entry; the diff is empty exactly when the fixture
/// reproduces its pinned behavior.
pub fn run_fixture(name: &str) -> Result<Vec<EntryDiff>> {
    let fix = fixture(name)?;
    let mut diffs = Vec::new();
    for entry in &fix.manifest {
        let actual = run_check(&fix, &entry.check)?;
        if actual != entry.expected {
            diffs.push(EntryDiff {
                label: entry.label,
                expected: entry.expected.to_string(),
                actual: actual.to_string(),
            });
        }
    }
    Ok(diffs)
}
