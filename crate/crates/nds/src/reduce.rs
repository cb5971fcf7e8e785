//! Periodic reduction g = f_k ∘ ... ∘ f_1, sequence shifts f_{n,∞}, and the
//! paired-verdict harness that checks detector outcomes against the
//! reduction theorems at evidence level.
//!
//! Each comparison records which implication directions are claimed for the
//! property, whether the hypotheses hold for this system, and whether the
//! observed verdict pair is consistent. A converse that is not claimed (or
//! whose hypotheses fail) yields NotApplicable, never Violation.

use crate::detectors::{run_property, CheckParams, PropertySpec};
use crate::error::{NdsError, Result};
use crate::maps::MapSpec;
use crate::report::{PropertyReport, Verdict};
use crate::schedule::Schedule;
use crate::window::{compile_window, System};

/// Exact compiled period map of a periodic schedule.
pub fn compile_period_map(schedule: &Schedule) -> Result<(u64, MapSpec)> {
    let k = schedule.detect_period(64).ok_or(NdsError::NotPeriodic)?;
    let g = compile_window(schedule, 1, k, crate::maps::DEFAULT_PIECE_BUDGET)?;
    Ok((k, g))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Consistency {
    Consistent,
    Violation,
    NotApplicable,
}

impl Consistency {
    pub fn label(&self) -> &'static str {
        match self {
            Consistency::Consistent => "Consistent",
            Consistency::Violation => "Violation",
            Consistency::NotApplicable => "NotApplicable",
        }
    }
}

#[derive(Debug, Clone)]
pub struct Hypothesis {
    pub name: String,
    pub holds: bool,
    pub detail: String,
}

/// One paired run: the sequence system against its reduced or shifted
/// counterpart.
#[derive(Debug, Clone)]
pub struct TransferCase {
    pub property: String,
    pub comparison: &'static str,
    pub theorem: &'static str,
    pub nds_report: PropertyReport,
    pub reduced_report: PropertyReport,
    pub hypotheses: Vec<Hypothesis>,
    pub consistency: Consistency,
    pub notes: Vec<String>,
}

/// Implication directions claimed for a property by the reduction theorems.
struct Claims {
    /// reduced system property implies sequence property
    reduced_implies_nds: Option<&'static str>,
    /// sequence property implies reduced property
    nds_implies_reduced: Option<&'static str>,
    theorem: &'static str,
}

fn period_claims(prop: PropertySpec) -> Claims {
    use PropertySpec::*;
    match prop {
        LiYorkeSensitive => Claims {
            reduced_implies_nds: Some("unconditional"),
            nds_implies_reduced: Some("uniform_continuity"),
            theorem: "li_yorke_sensitivity_reduction",
        },
        CofinitelySensitive => Claims {
            reduced_implies_nds: Some("uniform_continuity"),
            nds_implies_reduced: Some("unconditional"),
            theorem: "cofinite_sensitivity_reduction",
        },
        SyndeticallySensitive | ErgodicallySensitive => Claims {
            reduced_implies_nds: Some("unconditional"),
            nds_implies_reduced: Some("uniform_continuity"),
            theorem: "syndetic_ergodic_sensitivity_reduction",
        },
        Transitive => Claims {
            reduced_implies_nds: Some("unconditional"),
            nds_implies_reduced: None,
            theorem: "transitivity_reduction_forward_only",
        },
        _ => Claims {
            reduced_implies_nds: None,
            nds_implies_reduced: None,
            theorem: "none",
        },
    }
}

/// Uniform continuity surrogate: every built-in map kind (piecewise linear
/// with finite slopes, rotation, finite table, shift) is uniformly
/// continuous; the hypothesis is recorded rather than assumed silently.
fn uniformly_continuous(_map: &MapSpec) -> bool {
    true
}

fn space_has_isolated_points(space: &crate::space::SpaceSpec) -> bool {
    matches!(space, crate::space::SpaceSpec::Finite { .. })
}

/// Run the detector on the sequence system and on the compiled autonomous
/// system, and judge consistency against the claimed directions.
pub fn transfer_compare(
    sys: &System,
    prop: PropertySpec,
    params: &CheckParams,
) -> Result<TransferCase> {
    let (k, g) = compile_period_map(&sys.schedule)?;
    let reduced = System::new(sys.space.clone(), Schedule::constant("g", g))?;
    let nds_report = run_property(sys, prop, params)?;
    let reduced_report = run_property(&reduced, prop, params)?;
    let claims = period_claims(prop);
    let mut hypotheses = vec![Hypothesis {
        name: "k_periodic".into(),
        holds: true,
        detail: format!("period {k}"),
    }];
    let uc = sys
        .schedule
        .used_generator_indices()
        .iter()
        .all(|&i| uniformly_continuous(&sys.schedule.generators()[i].1));
    hypotheses.push(Hypothesis {
        name: "uniform_continuity".into(),
        holds: uc,
        detail: "all built-in map kinds are uniformly continuous".into(),
    });
    let mut case = TransferCase {
        property: prop.name().into(),
        comparison: "period",
        theorem: claims.theorem,
        nds_report,
        reduced_report,
        hypotheses,
        consistency: Consistency::Consistent,
        notes: Vec::new(),
    };
    judge(&mut case, &claims);
    Ok(case)
}

/// The schedule re-based to start at index n.
pub fn shifted_system(sys: &System, start: u64) -> Result<System> {
    if start < 2 {
        return Err(NdsError::BadParameter(
            "sequence shifts start at n >= 2".into(),
        ));
    }
    Ok(sys.shifted(start))
}

/// Compare a property on f_{1,∞} and on the shifted sequence f_{n,∞}.
pub fn shift_compare(
    sys: &System,
    start: u64,
    prop: PropertySpec,
    params: &CheckParams,
) -> Result<TransferCase> {
    let shifted = shifted_system(sys, start)?;
    let nds_report = run_property(sys, prop, params)?;
    let reduced_report = run_property(&shifted, prop, params)?;

    let gens = sys.schedule.generators();
    let used = sys.schedule.used_generator_indices();
    let mut non_surjective = Vec::new();
    let mut non_feeble = Vec::new();
    for &i in &used {
        let flags = gens[i].1.analyze()?;
        if !flags.surjective {
            non_surjective.push(gens[i].0.clone());
        }
        if !flags.feeble_open {
            non_feeble.push(gens[i].0.clone());
        }
    }
    let isolated = space_has_isolated_points(&sys.space);
    let forward_ok = non_surjective.is_empty() && !isolated;
    let converse_ok = forward_ok && non_feeble.is_empty();
    let hypotheses = vec![
        Hypothesis {
            name: "all_surjective".into(),
            holds: non_surjective.is_empty(),
            detail: if non_surjective.is_empty() {
                "every generator is surjective".into()
            } else {
                format!("not surjective: {}", non_surjective.join(", "))
            },
        },
        Hypothesis {
            name: "no_isolated_points".into(),
            holds: !isolated,
            detail: format!("space kind {}", sys.space.kind()),
        },
        Hypothesis {
            name: "feeble_open".into(),
            holds: non_feeble.is_empty(),
            detail: if non_feeble.is_empty() {
                "every generator is feeble open".into()
            } else {
                format!("not feeble open: {}", non_feeble.join(", "))
            },
        },
    ];
    let sensitivity_family = matches!(
        prop,
        PropertySpec::Sensitive
            | PropertySpec::MultiSensitive
            | PropertySpec::SyndeticallySensitive
            | PropertySpec::CofinitelySensitive
            | PropertySpec::ErgodicallySensitive
    );
    let claims = if sensitivity_family {
        Claims {
            // here "reduced" is the shifted sequence: f_1 sensitive implies
            // f_n sensitive under the forward hypotheses
            nds_implies_reduced: if forward_ok {
                Some("surjective_no_isolated_points")
            } else {
                None
            },
            reduced_implies_nds: if converse_ok {
                Some("feeble_open")
            } else {
                None
            },
            theorem: "sequence_shift_sensitivity",
        }
    } else {
        Claims {
            reduced_implies_nds: None,
            nds_implies_reduced: None,
            theorem: "none",
        }
    };
    let mut case = TransferCase {
        property: prop.name().into(),
        comparison: "shift",
        theorem: claims.theorem,
        nds_report,
        reduced_report,
        hypotheses,
        consistency: Consistency::Consistent,
        notes: Vec::new(),
    };
    if sensitivity_family {
        if !forward_ok {
            case.notes.push(format!(
                "forward direction NotApplicable: hypotheses unmet ({})",
                failed_names(&case.hypotheses, &["all_surjective", "no_isolated_points"])
            ));
        }
        if !converse_ok {
            case.notes.push(format!(
                "converse direction NotApplicable: hypotheses unmet ({})",
                failed_names(
                    &case.hypotheses,
                    &["all_surjective", "no_isolated_points", "feeble_open"]
                )
            ));
        }
    }
    judge(&mut case, &claims);
    Ok(case)
}

fn failed_names(hyps: &[Hypothesis], relevant: &[&str]) -> String {
    let failed: Vec<String> = hyps
        .iter()
        .filter(|h| relevant.contains(&h.name.as_str()) && !h.holds)
        .map(|h| format!("{}: {}", h.name, h.detail))
        .collect();
    if failed.is_empty() {
        "none".into()
    } else {
        failed.join("; ")
    }
}

fn judge(case: &mut TransferCase, claims: &Claims) {
    let a = &case.nds_report;
    let b = &case.reduced_report;
    if a.verdict == Verdict::Inconclusive || b.verdict == Verdict::Inconclusive {
        case.consistency = Consistency::NotApplicable;
        case.notes.push("a side is inconclusive".into());
        return;
    }
    if a.verdict == b.verdict {
        case.consistency = Consistency::Consistent;
        return;
    }
    // disagreement: which claimed implication does the pattern test?
    let (claim, direction) = if b.verdict == Verdict::Holds {
        (
            claims.reduced_implies_nds,
            "reduced side holds, sequence side fails",
        )
    } else {
        (
            claims.nds_implies_reduced,
            "sequence side holds, reduced side fails",
        )
    };
    match claim {
        Some(cond) => {
            if a.mode.is_exactish() && b.mode.is_exactish() {
                case.consistency = Consistency::Violation;
                case.notes.push(format!(
                    "claimed implication ({cond}) contradicted: {direction}"
                ));
            } else {
                case.consistency = Consistency::NotApplicable;
                case.notes
                    .push(format!("{direction}, but a side is sampled evidence"));
            }
        }
        None => {
            case.consistency = Consistency::NotApplicable;
            case.notes.push(format!(
                "{direction}; that direction is not claimed for this property"
            ));
        }
    }
}

/// The reduction statements the harness knows about, with fixture status.
pub struct TheoremEntry {
    pub tag: &'static str,
    pub statement: &'static str,
    pub needs_fixture: bool,
}

pub fn theorem_registry() -> Vec<TheoremEntry> {
    vec![
        TheoremEntry {
            tag: "li_yorke_sensitivity_reduction",
            statement: "for k-periodic systems, Li-Yorke sensitivity of the reduced map transfers to the sequence; converse under uniform continuity",
            needs_fixture: false,
        },
        TheoremEntry {
            tag: "cofinite_sensitivity_reduction",
            statement: "for k-periodic systems, cofinite sensitivity of the sequence transfers to the reduced map; converse under uniform continuity",
            needs_fixture: false,
        },
        TheoremEntry {
            tag: "syndetic_ergodic_sensitivity_reduction",
            statement: "for k-periodic systems, syndetic (ergodic) sensitivity of the reduced map transfers to the sequence; converse under uniform continuity",
            needs_fixture: false,
        },
        TheoremEntry {
            tag: "transitivity_reduction_forward_only",
            statement: "transitivity of the reduced map transfers to the sequence; the converse fails (periodic counterexample)",
            needs_fixture: false,
        },
        TheoremEntry {
            tag: "sequence_shift_sensitivity",
            statement: "with surjective generators on a space without isolated points, sensitivity variants transfer to shifted sequences; converse under feeble openness",
            needs_fixture: false,
        },
        TheoremEntry {
            tag: "transitive_nonrecurrent_sensitivity",
            statement: "surjective, compact, commutative, k-periodic, transitive systems with a nonrecurrent point are sensitive",
            // no built-in system satisfies all hypotheses nontrivially
            needs_fixture: true,
        },
    ]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::maps::{Affine, FiniteMap, PLMap};
    use crate::scalar::rat;
    use crate::space::SpaceSpec;

    fn doubling() -> MapSpec {
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

    #[test]
    fn period_map_of_doubled_doubling() {
        let s =
            Schedule::cycle(vec![("d1".into(), doubling()), ("d2".into(), doubling())]).unwrap();
        let (k, g) = compile_period_map(&s).unwrap();
        // both entries are the same map, so the least period is 1 and the
        // compiled window is the map itself
        assert_eq!(k, 1);
        assert!(crate::maps::maps_equal(&g, &doubling()).unwrap());
    }

    #[test]
    fn cofinite_sensitivity_transfers_consistently() {
        let sys = System::new(
            SpaceSpec::UnitInterval,
            Schedule::cycle(vec![("d1".into(), doubling()), ("d2".into(), doubling())]).unwrap(),
        )
        .unwrap();
        let params = CheckParams {
            delta: rat(1, 4),
            scale: rat(1, 8),
            horizon: 30,
            ..CheckParams::default()
        };
        let case = transfer_compare(&sys, PropertySpec::CofinitelySensitive, &params).unwrap();
        assert_eq!(case.consistency, Consistency::Consistent);
        assert_eq!(case.nds_report.verdict, Verdict::Holds);
        assert_eq!(case.reduced_report.verdict, Verdict::Holds);
    }

    #[test]
    fn transitive_converse_failure_is_not_a_violation() {
        // h^3, h^-1 on the 4-cycle: the sequence is transitive, the
        // compiled period map h^2 is not. The inverse is kept in wrapped
        // form so the rule is genuinely 2-periodic as written.
        let h = FiniteMap::new(vec![1, 2, 3, 0]).unwrap();
        let h3 = MapSpec::Finite(FiniteMap::new(vec![3, 0, 1, 2]).unwrap());
        let h_inv = MapSpec::Inverse(Box::new(MapSpec::Finite(h)));
        let sys = System::new(
            SpaceSpec::finite_discrete(4),
            Schedule::cycle(vec![("h3".into(), h3), ("h_inv".into(), h_inv)]).unwrap(),
        )
        .unwrap();
        let params = CheckParams {
            horizon: 20,
            ..CheckParams::default()
        };
        let case = transfer_compare(&sys, PropertySpec::Transitive, &params).unwrap();
        assert_eq!(case.nds_report.verdict, Verdict::Holds);
        assert_eq!(case.reduced_report.verdict, Verdict::Fails);
        assert_eq!(case.consistency, Consistency::NotApplicable);
    }

    #[test]
    fn isometry_pair_is_consistently_insensitive() {
        let sys = System::new(
            SpaceSpec::Circle,
            Schedule::cycle(vec![
                ("rot".into(), MapSpec::rotation(1)),
                ("rot_back".into(), MapSpec::rotation(-1)),
            ])
            .unwrap(),
        )
        .unwrap();
        let params = CheckParams {
            delta: rat(1, 10),
            scale: rat(1, 8),
            horizon: 50,
            ..CheckParams::default()
        };
        let case = transfer_compare(&sys, PropertySpec::Sensitive, &params).unwrap();
        assert_eq!(case.consistency, Consistency::Consistent);
        assert_eq!(case.nds_report.verdict, Verdict::Fails);
        assert_eq!(case.reduced_report.verdict, Verdict::Fails);
    }

    #[test]
    fn shifted_single_generator_schedule_is_unchanged() {
        let sys = System::new(
            SpaceSpec::UnitInterval,
            Schedule::constant("double", doubling()),
        )
        .unwrap();
        let params = CheckParams {
            delta: rat(1, 4),
            scale: rat(1, 8),
            horizon: 30,
            ..CheckParams::default()
        };
        let case = shift_compare(&sys, 2, PropertySpec::Sensitive, &params).unwrap();
        assert_eq!(case.consistency, Consistency::Consistent);
        assert_eq!(case.nds_report.verdict, Verdict::Holds);
        assert_eq!(case.reduced_report.verdict, Verdict::Holds);
    }

    #[test]
    fn registry_marks_the_fixtureless_theorem() {
        let reg = theorem_registry();
        let entry = reg
            .iter()
            .find(|e| e.tag == "transitive_nonrecurrent_sensitivity")
            .unwrap();
        assert!(entry.needs_fixture);
        assert_eq!(reg.iter().filter(|e| e.needs_fixture).count(), 1);
    }
}
