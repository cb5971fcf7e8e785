//! Three-valued property detectors.
//!
//! "For any nonempty open set" is instantiated as "for every cell of the
//! chosen cover"; Holds verdicts are scale-stamped evidence, Fails verdicts
//! carry witnesses that replay from the primitives. Finer covers and longer
//! horizons strictly strengthen evidence.

pub mod chaos;
pub mod minimality;
pub mod points;
pub mod sensitivity;
pub mod transitivity;
pub mod weak;

pub use chaos::{li_yorke_scan, li_yorke_sensitive};
pub use minimality::{minimal_char_union, minimality_m1, minimality_m2};
pub use points::{almost_periodic, equicontinuity_at, periodic_point, recurrent_point};
pub use sensitivity::{
    check_sensitive, check_sensitivity_variant, sensitivity_run, SensitivityRun, SensitivityVariant,
};
pub use transitivity::{
    check_accessible, check_transitivity_variant, transitivity_run, TransitivityRun,
    TransitivityVariant,
};
pub use weak::{weak_scan, WeakKind};

use crate::error::{NdsError, Result};
use crate::maps::MapSpec;
use crate::point::Point;
use crate::region::RegionSet;
use crate::report::{Mode, PropertyReport, Verdict};
use crate::scalar::{fmt_rat, Rat};
use crate::window::System;

/// Parameter bundle shared by the named property checks.
#[derive(Debug, Clone)]
pub struct CheckParams {
    pub delta: Rat,
    pub epsilon: Rat,
    pub eta: Rat,
    pub theta: Rat,
    pub scale: Rat,
    pub horizon: u64,
    pub multi_m: u64,
    pub word_len: u64,
    pub pair_budget: u64,
}

impl Default for CheckParams {
    fn default() -> Self {
        use crate::scalar::rat;
        CheckParams {
            delta: rat(1, 4),
            epsilon: rat(1, 16),
            eta: rat(1, 32),
            theta: rat(1, 100),
            scale: rat(1, 8),
            horizon: 100,
            multi_m: 2,
            word_len: 8,
            pair_budget: 200,
        }
    }
}

/// A property selectable by name (command line, transfer harness).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PropertySpec {
    Sensitive,
    CofinitelySensitive,
    SyndeticallySensitive,
    ThicklySensitive,
    ThicklySyndeticallySensitive,
    ErgodicallySensitive,
    MultiSensitive,
    Transitive,
    WeaklyMixing,
    Mixing,
    Accessible,
    Kato,
    LiYorke,
    LiYorkeSensitive,
    MinimalM1,
    MinimalM2,
    WeakSensitive,
    WeakTransitive,
    WeakLiYorke,
}

impl PropertySpec {
    pub fn parse(name: &str) -> Result<PropertySpec> {
        use PropertySpec::*;
        Ok(match name {
            "sensitive" => Sensitive,
            "cofinitely_sensitive" => CofinitelySensitive,
            "syndetically_sensitive" => SyndeticallySensitive,
            "thickly_sensitive" => ThicklySensitive,
            "thickly_syndetically_sensitive" => ThicklySyndeticallySensitive,
            "ergodically_sensitive" => ErgodicallySensitive,
            "multi_sensitive" => MultiSensitive,
            "transitive" => Transitive,
            "weakly_mixing" => WeaklyMixing,
            "mixing" => Mixing,
            "accessible" => Accessible,
            "kato" => Kato,
            "li_yorke" => LiYorke,
            "li_yorke_sensitive" => LiYorkeSensitive,
            "minimal_m1" => MinimalM1,
            "minimal_m2" => MinimalM2,
            "weak_sensitive" => WeakSensitive,
            "weak_transitive" => WeakTransitive,
            "weak_li_yorke" => WeakLiYorke,
            other => {
                return Err(NdsError::BadParameter(format!(
                    "unknown property {other:?}"
                )))
            }
        })
    }

    pub fn name(&self) -> &'static str {
        use PropertySpec::*;
        match self {
            Sensitive => "sensitive",
            CofinitelySensitive => "cofinitely_sensitive",
            SyndeticallySensitive => "syndetically_sensitive",
            ThicklySensitive => "thickly_sensitive",
            ThicklySyndeticallySensitive => "thickly_syndetically_sensitive",
            ErgodicallySensitive => "ergodically_sensitive",
            MultiSensitive => "multi_sensitive",
            Transitive => "transitive",
            WeaklyMixing => "weakly_mixing",
            Mixing => "mixing",
            Accessible => "accessible",
            Kato => "kato",
            LiYorke => "li_yorke",
            LiYorkeSensitive => "li_yorke_sensitive",
            MinimalM1 => "minimal_m1",
            MinimalM2 => "minimal_m2",
            WeakSensitive => "weak_sensitive",
            WeakTransitive => "weak_transitive",
            WeakLiYorke => "weak_li_yorke",
        }
    }
}

/// Run a named property check with the given parameters.
pub fn run_property(
    sys: &System,
    prop: PropertySpec,
    params: &CheckParams,
) -> Result<PropertyReport> {
    use PropertySpec::*;
    match prop {
        Sensitive => check_sensitivity_variant(sys, SensitivityVariant::Base, params),
        CofinitelySensitive => check_sensitivity_variant(sys, SensitivityVariant::Cofinite, params),
        SyndeticallySensitive => {
            check_sensitivity_variant(sys, SensitivityVariant::Syndetic, params)
        }
        ThicklySensitive => check_sensitivity_variant(sys, SensitivityVariant::Thick, params),
        ThicklySyndeticallySensitive => {
            check_sensitivity_variant(sys, SensitivityVariant::ThicklySyndetic, params)
        }
        ErgodicallySensitive => check_sensitivity_variant(sys, SensitivityVariant::Ergodic, params),
        MultiSensitive => {
            check_sensitivity_variant(sys, SensitivityVariant::Multi(params.multi_m), params)
        }
        Transitive => check_transitivity_variant(sys, TransitivityVariant::Transitive, params),
        WeaklyMixing => check_transitivity_variant(sys, TransitivityVariant::WeaklyMixing, params),
        Mixing => check_transitivity_variant(sys, TransitivityVariant::Mixing, params),
        Accessible => check_accessible(sys, params),
        Kato => check_kato(sys, params),
        LiYorke => li_yorke_scan(sys, params),
        LiYorkeSensitive => li_yorke_sensitive(sys, params),
        MinimalM1 => minimality_m1(sys, params),
        MinimalM2 => minimality_m2(sys, params),
        WeakSensitive => weak_scan(sys, WeakKind::Sensitive, params),
        WeakTransitive => weak_scan(sys, WeakKind::Transitive, params),
        WeakLiYorke => weak_scan(sys, WeakKind::LiYorke, params),
    }
}

/// Sensitive and accessible, with verdict join.
pub fn check_kato(sys: &System, params: &CheckParams) -> Result<PropertyReport> {
    let s = check_sensitivity_variant(sys, SensitivityVariant::Base, params)?;
    let a = check_accessible(sys, params)?;
    let mut report = PropertyReport::new("kato", sys.provenance_hash())
        .param("delta", fmt_rat(&params.delta))
        .param("epsilon", fmt_rat(&params.epsilon))
        .param("scale", fmt_rat(&params.scale))
        .param("T", params.horizon);
    report.verdict = s.verdict.join(a.verdict);
    report.mode = s.mode.weakest(a.mode);
    report.evidence.push(format!("sensitive: {}", s.label()));
    report.evidence.push(format!("accessible: {}", a.label()));
    report.witnesses.extend(s.witnesses);
    report.witnesses.extend(a.witnesses);
    Ok(report)
}

/// Exact common fixed points of every generator the schedule uses.
pub fn fixed_points(sys: &System) -> Result<Vec<Point>> {
    let gens = sys.schedule.generators();
    let used = sys.schedule.used_generator_indices();
    match sys.space {
        crate::space::SpaceSpec::Shift => {
            // fixed points of a power of the shift are the periodic
            // sequences of dividing period
            let mut powers: Vec<u64> = Vec::new();
            for &i in &used {
                match gens[i].1.flatten(crate::maps::DEFAULT_PIECE_BUDGET)? {
                    MapSpec::Identity => {}
                    MapSpec::Shift { power } => {
                        if power != 0 {
                            powers.push(power.unsigned_abs());
                        }
                    }
                    _ => {
                        return Err(NdsError::Unsupported(
                            "fixed points on the shift space need shift generators".into(),
                        ))
                    }
                }
            }
            let g = powers.into_iter().fold(0u64, gcd);
            if g == 0 {
                return Err(NdsError::Unsupported(
                    "every point is fixed (identity schedule)".into(),
                ));
            }
            if g > 8 {
                return Err(NdsError::Unsupported(format!(
                    "periodic-point enumeration bound exceeded (period {g})"
                )));
            }
            Ok(crate::seq::SeqPoint::enumerate_periodic(g as u32)
                .into_iter()
                .map(Point::Seq)
                .collect())
        }
        _ => {
            let mut region: Option<RegionSet> = None;
            for &i in &used {
                let r = fixed_region(&gens[i].1, &sys.space)?;
                region = Some(match region {
                    None => r,
                    Some(acc) => intersect_regions(&acc, &r)?,
                });
            }
            let region = region.ok_or_else(|| NdsError::Unsupported("empty schedule".into()))?;
            region_points(&region)
        }
    }
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Fixed-point set of one map as a region (non-shift spaces).
fn fixed_region(map: &MapSpec, space: &crate::space::SpaceSpec) -> Result<RegionSet> {
    use num_traits::Zero;
    match map.flatten(crate::maps::DEFAULT_PIECE_BUDGET)? {
        MapSpec::Identity => Ok(RegionSet::full(space)),
        MapSpec::Pl(pl) => Ok(RegionSet::Intervals(pl.fixed_components())),
        MapSpec::Finite(t) => Ok(RegionSet::Indices(
            (0..t.size()).filter(|&i| t.apply(i) == i).collect(),
        )),
        MapSpec::Rotation { steps, offset } => {
            if steps == 0 && offset.is_zero() {
                Ok(RegionSet::full(space))
            } else {
                Ok(RegionSet::Arcs(crate::region::CircleRegion::from_comps(
                    vec![],
                )))
            }
        }
        _ => Err(NdsError::Unsupported(
            "fixed-point region for this map kind".into(),
        )),
    }
}

fn intersect_regions(a: &RegionSet, b: &RegionSet) -> Result<RegionSet> {
    match (a, b) {
        (RegionSet::Intervals(xs), RegionSet::Intervals(ys)) => {
            let mut out = Vec::new();
            for x in xs {
                for y in ys {
                    if let Some(c) = x.intersect(y) {
                        out.push(c);
                    }
                }
            }
            Ok(RegionSet::intervals(out))
        }
        (RegionSet::Indices(xs), RegionSet::Indices(ys)) => {
            Ok(RegionSet::Indices(xs.intersection(ys).copied().collect()))
        }
        (RegionSet::Arcs(x), RegionSet::Arcs(y)) => {
            if x.comps.is_empty() || y.comps.is_empty() {
                return Ok(RegionSet::Arcs(crate::region::CircleRegion::from_comps(
                    vec![],
                )));
            }
            if x.steps == y.steps && x.offset == y.offset {
                let mut out = Vec::new();
                for cx in &x.comps {
                    for cy in &y.comps {
                        if let Some(c) = cx.intersect(cy) {
                            out.push(c);
                        }
                    }
                }
                Ok(RegionSet::Arcs(crate::region::CircleRegion {
                    comps: crate::interval::canonicalize(out),
                    steps: x.steps,
                    offset: x.offset.clone(),
                }))
            } else {
                Err(NdsError::Unsupported(
                    "intersection of circle regions in different frames".into(),
                ))
            }
        }
        _ => Err(NdsError::SpaceMismatch("region intersection".into())),
    }
}

/// Enumerate the points of a region that is a finite point set.
fn region_points(region: &RegionSet) -> Result<Vec<Point>> {
    match region {
        RegionSet::Intervals(comps) => {
            let mut out = Vec::new();
            for c in comps {
                if c.is_point() {
                    out.push(Point::Interval(c.lo.clone()));
                } else {
                    return Err(NdsError::Unsupported(
                        "infinitely many fixed points (interval component)".into(),
                    ));
                }
            }
            Ok(out)
        }
        RegionSet::Indices(set) => Ok(set.iter().map(|&i| Point::Finite(i)).collect()),
        RegionSet::Arcs(a) => {
            let mut out = Vec::new();
            for c in &a.comps {
                if c.is_point() {
                    out.push(Point::circle(&c.lo + &a.offset, a.steps));
                } else {
                    return Err(NdsError::Unsupported(
                        "infinitely many fixed points (arc component)".into(),
                    ));
                }
            }
            Ok(out)
        }
        RegionSet::Cylinders(_) => Err(NdsError::Unsupported(
            "cylinder regions are never finite point sets".into(),
        )),
    }
}

/// Replay helper: a verdict ordering violation between a stronger and a
/// weaker property on the same run (stronger Holds while weaker Fails).
pub fn implication_violated(stronger: &PropertyReport, weaker: &PropertyReport) -> bool {
    stronger.verdict == Verdict::Holds
        && weaker.verdict == Verdict::Fails
        && stronger.mode.is_exactish()
        && weaker.mode.is_exactish()
}

/// Shared helper: format a hit-set summary line for evidence lists.
pub(crate) fn summarize_sample(label: &str, sample: &crate::hitting::IndexSample) -> String {
    let members = sample.members();
    let shown: Vec<String> = members.iter().take(8).map(|n| n.to_string()).collect();
    let ellipsis = if members.len() > 8 { ", ..." } else { "" };
    format!(
        "{label}: {} hits {{{}{}}} (T={})",
        members.len(),
        shown.join(", "),
        ellipsis,
        sample.horizon()
    )
}

/// Shared helper: evidence/sampled mode propagation for reports built from
/// exact region computations.
pub(crate) fn evidence_report(
    sys: &System,
    property: &str,
    params: &[(&str, String)],
) -> PropertyReport {
    let mut r = PropertyReport::new(property, sys.provenance_hash());
    for (k, v) in params {
        r = r.param(k, v);
    }
    r.mode = Mode::Evidence;
    r
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::maps::{FiniteMap, PLMap};
    use crate::scalar::rat;
    use crate::schedule::Schedule;
    use crate::space::SpaceSpec;

    fn pl(m: PLMap) -> MapSpec {
        MapSpec::Pl(m)
    }

    #[test]
    fn fixed_points_of_the_doubling_family() {
        use crate::maps::Affine;
        let doubling = pl(PLMap::new(
            vec![rat(0, 1), rat(1, 2), rat(1, 1)],
            vec![
                Affine::new(rat(2, 1), rat(0, 1)),
                Affine::new(rat(2, 1), rat(-1, 1)),
            ],
        )
        .unwrap());
        let sys = System::new(
            SpaceSpec::UnitInterval,
            Schedule::constant("double", doubling.clone()),
        )
        .unwrap();
        // 2x = x at 0; 2x - 1 = x at 1
        assert_eq!(
            fixed_points(&sys).unwrap(),
            vec![Point::Interval(rat(0, 1)), Point::Interval(rat(1, 1))]
        );

        // adding the half map and its clamped inverse cuts the set to {0}
        let half = pl(PLMap::single(rat(1, 2), rat(0, 1)).unwrap());
        let clamp = pl(PLMap::new(
            vec![rat(0, 1), rat(1, 2), rat(1, 1)],
            vec![
                Affine::new(rat(2, 1), rat(0, 1)),
                Affine::constant(rat(1, 1)),
            ],
        )
        .unwrap());
        let sys = System::new(
            SpaceSpec::UnitInterval,
            Schedule::cycle(vec![
                ("half".into(), half),
                ("clamp2x".into(), clamp),
                ("double".into(), doubling),
            ])
            .unwrap(),
        )
        .unwrap();
        assert_eq!(
            fixed_points(&sys).unwrap(),
            vec![Point::Interval(rat(0, 1))]
        );
    }

    #[test]
    fn irrational_rotation_has_no_fixed_points() {
        let sys = System::new(
            SpaceSpec::Circle,
            Schedule::constant("rot", MapSpec::rotation(1)),
        )
        .unwrap();
        assert!(fixed_points(&sys).unwrap().is_empty());
    }

    #[test]
    fn shift_fixed_points_enumerate_periodic_sequences() {
        let sys = System::new(
            SpaceSpec::Shift,
            Schedule::constant("s", MapSpec::Shift { power: 1 }),
        )
        .unwrap();
        // fixed points of the shift itself are the two constant sequences
        assert_eq!(fixed_points(&sys).unwrap().len(), 2);
        let sys = System::new(
            SpaceSpec::Shift,
            Schedule::constant("s2", MapSpec::Shift { power: 2 }),
        )
        .unwrap();
        assert_eq!(fixed_points(&sys).unwrap().len(), 4);
        // beyond the enumeration bound the op refuses rather than truncates
        let sys = System::new(
            SpaceSpec::Shift,
            Schedule::constant("s16", MapSpec::Shift { power: 16 }),
        )
        .unwrap();
        assert!(matches!(fixed_points(&sys), Err(NdsError::Unsupported(_))));
    }

    #[test]
    fn identity_pieces_make_fixed_sets_infinite() {
        let sys = System::new(
            SpaceSpec::UnitInterval,
            Schedule::constant("id", MapSpec::Identity),
        )
        .unwrap();
        assert!(matches!(fixed_points(&sys), Err(NdsError::Unsupported(_))));
        // a finite space identity is fine: every state is fixed
        let sys = System::new(
            SpaceSpec::finite_discrete(3),
            Schedule::cycle(vec![
                (
                    "f".into(),
                    MapSpec::Finite(FiniteMap::new(vec![1, 2, 0]).unwrap()),
                ),
                ("id".into(), MapSpec::Identity),
            ])
            .unwrap(),
        )
        .unwrap();
        assert!(fixed_points(&sys).unwrap().is_empty()); // the cycle has none
    }
}
