//! Sensitivity detectors: the base notion and its cofinite / syndetic /
//! thick / thickly-syndetic / ergodic / multi strengthenings.
//!
//! All variants share one run: the per-cell sensitivity hit sets
//! N(cell, δ) over the cover. The base notion asks every hit set to be
//! nonempty; each stronger variant pipes the same hit sets through the
//! matching set classifier.

use super::{evidence_report, summarize_sample, CheckParams};
use crate::cover::{build_cover, CoverSpec};
use crate::error::{NdsError, Result};
use crate::hitting::{classify, sensitivity_hits, ClassKind, IndexSample};
use crate::report::{PropertyReport, Verdict, Witness};
use crate::scalar::{fmt_rat, Rat};
use crate::window::System;
use num_traits::Signed;

/// Per-cell hit sets at one (δ, scale, T).
#[derive(Debug, Clone)]
pub struct SensitivityRun {
    pub cover: CoverSpec,
    pub delta: Rat,
    pub horizon: u64,
    pub per_cell: Vec<IndexSample>,
}

pub fn sensitivity_run(
    sys: &System,
    delta: &Rat,
    scale: &Rat,
    horizon: u64,
) -> Result<SensitivityRun> {
    if !delta.is_positive() {
        return Err(NdsError::BadParameter(
            "sensitivity constant must be positive".into(),
        ));
    }
    let cover = build_cover(&sys.space, scale)?;
    let mut per_cell = Vec::with_capacity(cover.cells.len());
    for cell in &cover.cells {
        per_cell.push(sensitivity_hits(sys, &cell.region, delta, horizon)?);
    }
    Ok(SensitivityRun {
        cover,
        delta: delta.clone(),
        horizon,
        per_cell,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SensitivityVariant {
    Base,
    Cofinite,
    Syndetic,
    Thick,
    ThicklySyndetic,
    Ergodic,
    Multi(u64),
}

impl SensitivityVariant {
    pub fn property_name(&self) -> String {
        match self {
            SensitivityVariant::Base => "sensitive".into(),
            SensitivityVariant::Cofinite => "cofinitely_sensitive".into(),
            SensitivityVariant::Syndetic => "syndetically_sensitive".into(),
            SensitivityVariant::Thick => "thickly_sensitive".into(),
            SensitivityVariant::ThicklySyndetic => "thickly_syndetically_sensitive".into(),
            SensitivityVariant::Ergodic => "ergodically_sensitive".into(),
            SensitivityVariant::Multi(m) => format!("multi_sensitive({m})"),
        }
    }
}

pub fn check_sensitive(sys: &System, params: &CheckParams) -> Result<PropertyReport> {
    check_sensitivity_variant(sys, SensitivityVariant::Base, params)
}

pub fn check_sensitivity_variant(
    sys: &System,
    variant: SensitivityVariant,
    params: &CheckParams,
) -> Result<PropertyReport> {
    if let SensitivityVariant::Multi(m) = variant {
        if m < 1 {
            return Err(NdsError::BadParameter("multi order must be >= 1".into()));
        }
    }
    let run = sensitivity_run(sys, &params.delta, &params.scale, params.horizon)?;
    Ok(variant_report(sys, &run, variant, &params.theta))
}

/// Derive a variant verdict from an existing run (used both by the checks
/// and by the implication-chain replay).
pub fn variant_report(
    sys: &System,
    run: &SensitivityRun,
    variant: SensitivityVariant,
    theta: &Rat,
) -> PropertyReport {
    let mut report = evidence_report(
        sys,
        &variant.property_name(),
        &[
            ("delta", fmt_rat(&run.delta)),
            ("scale", fmt_rat(&run.cover.scale)),
            ("T", run.horizon.to_string()),
            ("cells", run.cover.cells.len().to_string()),
        ],
    );
    match variant {
        SensitivityVariant::Base => {
            let mut all_hit = true;
            for (cell, hits) in run.cover.cells.iter().zip(&run.per_cell) {
                report.evidence.push(summarize_sample(&cell.id, hits));
                if hits.is_empty() {
                    all_hit = false;
                    report.witnesses.push(Witness::EmptyHitSet {
                        cell_id: cell.id.clone(),
                        cell: cell.region.clone(),
                    });
                }
            }
            report.verdict = if all_hit {
                Verdict::Holds
            } else {
                Verdict::Fails
            };
        }
        SensitivityVariant::Multi(m) => {
            let cells = run.cover.cells.len();
            let m = (m as usize).min(cells);
            let mut all_ok = true;
            let mut counted = 0usize;
            for combo in combinations(cells, m) {
                counted += 1;
                let common = intersect_samples(&combo, &run.per_cell);
                if common.is_empty() {
                    all_ok = false;
                    let ids: Vec<String> = combo
                        .iter()
                        .map(|&i| run.cover.cells[i].id.clone())
                        .collect();
                    report.witnesses.push(Witness::Note(format!(
                        "cells {{{}}} have no common hitting time",
                        ids.join(", ")
                    )));
                    if report.witnesses.len() >= 4 {
                        break;
                    }
                }
            }
            report
                .evidence
                .push(format!("checked {counted} subsets of size {m}"));
            report.verdict = if all_ok {
                Verdict::Holds
            } else {
                Verdict::Fails
            };
        }
        SensitivityVariant::Cofinite
        | SensitivityVariant::Syndetic
        | SensitivityVariant::Thick
        | SensitivityVariant::Ergodic => {
            let kind = match variant {
                SensitivityVariant::Cofinite => ClassKind::Cofinite,
                SensitivityVariant::Syndetic => ClassKind::Syndetic,
                SensitivityVariant::Thick => ClassKind::Thick,
                _ => ClassKind::UpperDensity(theta.clone()),
            };
            if matches!(variant, SensitivityVariant::Ergodic) {
                report = report.param("theta", fmt_rat(theta));
            }
            report.verdict = classify_all_cells(run, &kind, &mut report);
        }
        SensitivityVariant::ThicklySyndetic => {
            // the definition quantifies over every run length; test a ladder
            let mut ks = vec![1u64, 2, 4, 8];
            ks.retain(|&k| k <= run.horizon / 4 && k >= 1);
            if ks.is_empty() {
                ks.push(1);
            }
            report = report.param(
                "k_ladder",
                ks.iter()
                    .map(|k| k.to_string())
                    .collect::<Vec<_>>()
                    .join(","),
            );
            let mut verdict = Verdict::Holds;
            for &k in &ks {
                let v = classify_all_cells(run, &ClassKind::ThicklySyndetic(k), &mut report);
                verdict = match (verdict, v) {
                    (_, Verdict::Fails) | (Verdict::Fails, _) => Verdict::Fails,
                    (Verdict::Inconclusive, _) | (_, Verdict::Inconclusive) => {
                        Verdict::Inconclusive
                    }
                    _ => Verdict::Holds,
                };
                if verdict == Verdict::Fails {
                    break;
                }
            }
            report.verdict = verdict;
        }
    }
    report
}

fn classify_all_cells(
    run: &SensitivityRun,
    kind: &ClassKind,
    report: &mut PropertyReport,
) -> Verdict {
    let mut verdict = Verdict::Holds;
    for (cell, hits) in run.cover.cells.iter().zip(&run.per_cell) {
        match classify(hits, kind) {
            Ok(c) => {
                report.evidence.push(format!(
                    "{}: {} {:?} ({})",
                    cell.id,
                    kind.name(),
                    c.verdict,
                    c.detail
                ));
                match c.verdict {
                    Verdict::Holds => {}
                    Verdict::Fails => {
                        verdict = Verdict::Fails;
                        if let Some(t) = &c.trend {
                            report.witnesses.push(Witness::Trend {
                                what: t.what,
                                sub_horizon: t.sub_horizon,
                                sub_value: t.sub_value,
                                full_horizon: t.full_horizon,
                                full_value: t.full_value,
                            });
                        }
                        report.witnesses.push(Witness::EmptyHitSet {
                            cell_id: cell.id.clone(),
                            cell: cell.region.clone(),
                        });
                        return verdict;
                    }
                    Verdict::Inconclusive => {
                        if verdict == Verdict::Holds {
                            verdict = Verdict::Inconclusive;
                        }
                    }
                }
            }
            Err(_) => {
                verdict = Verdict::Inconclusive;
            }
        }
    }
    verdict
}

fn intersect_samples(indices: &[usize], samples: &[IndexSample]) -> Vec<u64> {
    if indices.is_empty() {
        return Vec::new();
    }
    let mut acc: Vec<u64> = samples[indices[0]].members().to_vec();
    for &i in &indices[1..] {
        let other = samples[i].members();
        acc.retain(|n| other.binary_search(n).is_ok());
        if acc.is_empty() {
            break;
        }
    }
    acc
}

/// All m-element subsets of 0..n in lexicographic order.
fn combinations(n: usize, m: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur: Vec<usize> = (0..m).collect();
    if m == 0 || m > n {
        return out;
    }
    loop {
        out.push(cur.clone());
        // advance
        let mut i = m;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if cur[i] + (m - i) < n {
                cur[i] += 1;
                for j in i + 1..m {
                    cur[j] = cur[j - 1] + 1;
                }
                break;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::maps::{Affine, MapSpec, PLMap};
    use crate::scalar::rat;
    use crate::schedule::Schedule;
    use crate::space::SpaceSpec;
    use crate::window::System;

    fn doubling_system() -> System {
        let doubling = MapSpec::Pl(
            PLMap::new(
                vec![rat(0, 1), rat(1, 2), rat(1, 1)],
                vec![
                    Affine::new(rat(2, 1), rat(0, 1)),
                    Affine::new(rat(2, 1), rat(-1, 1)),
                ],
            )
            .unwrap(),
        );
        System::new(
            SpaceSpec::UnitInterval,
            Schedule::constant("double", doubling),
        )
        .unwrap()
    }

    fn rotation_system() -> System {
        System::new(
            SpaceSpec::Circle,
            Schedule::constant("rot", MapSpec::rotation(1)),
        )
        .unwrap()
    }

    #[test]
    fn doubling_is_cofinitely_sensitive() {
        let sys = doubling_system();
        let params = CheckParams {
            delta: rat(1, 4),
            scale: rat(1, 8),
            horizon: 30,
            ..CheckParams::default()
        };
        let r = check_sensitivity_variant(&sys, SensitivityVariant::Cofinite, &params).unwrap();
        assert_eq!(r.verdict, Verdict::Holds);
        // every cell's hit set contains [3, 30]
        let run = sensitivity_run(&sys, &params.delta, &params.scale, params.horizon).unwrap();
        for hits in &run.per_cell {
            for n in 3..=30 {
                assert!(hits.contains(n));
            }
        }
    }

    #[test]
    fn rotation_is_never_sensitive() {
        let sys = rotation_system();
        let params = CheckParams {
            delta: rat(1, 10),
            scale: rat(1, 8),
            horizon: 100,
            ..CheckParams::default()
        };
        let r = check_sensitive(&sys, &params).unwrap();
        assert_eq!(r.verdict, Verdict::Fails);
        assert!(matches!(r.witnesses[0], Witness::EmptyHitSet { .. }));
        // all hit sets are empty, at several delta values
        for delta in [rat(1, 10), rat(1, 4), rat(1, 2)] {
            let run = sensitivity_run(&sys, &delta, &rat(1, 8), 100).unwrap();
            assert!(run.per_cell.iter().all(|h| h.is_empty()));
        }
    }

    #[test]
    fn multi_one_equals_base() {
        let sys = doubling_system();
        let params = CheckParams {
            delta: rat(1, 4),
            scale: rat(1, 4),
            horizon: 20,
            ..CheckParams::default()
        };
        let base = check_sensitivity_variant(&sys, SensitivityVariant::Base, &params).unwrap();
        let multi1 =
            check_sensitivity_variant(&sys, SensitivityVariant::Multi(1), &params).unwrap();
        assert_eq!(base.verdict, multi1.verdict);
    }

    #[test]
    fn combinations_enumerate() {
        assert_eq!(combinations(4, 2).len(), 6);
        assert_eq!(combinations(3, 3), vec![vec![0, 1, 2]]);
        assert!(combinations(2, 3).is_empty());
    }
}
