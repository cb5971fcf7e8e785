//! Transitivity family (transitive / weakly mixing / mixing) and the
//! accessibility search.
//!
//! One run computes the hitting sets N(U, V) for every ordered cell pair by
//! streaming the image of each source cell once. Weak mixing asks for a
//! common time across every pair of pairs; mixing pipes every pair through
//! the cofinite classifier.

use super::{evidence_report, CheckParams};
use crate::cover::{build_cover, CoverSpec};
use crate::error::Result;
use crate::hitting::{classify, ClassKind, IndexSample};
use crate::point::Point;
use crate::report::{Mode, PropertyReport, Verdict, Witness};
use crate::scalar::{fmt_rat, Scalar};
use crate::window::System;

#[derive(Debug, Clone)]
pub struct TransitivityRun {
    pub cover: CoverSpec,
    pub horizon: u64,
    /// `pair_hits[u][v]` = N(cell_u, cell_v) over 1..=T.
    pub pair_hits: Vec<Vec<IndexSample>>,
}

pub fn transitivity_run(sys: &System, params: &CheckParams) -> Result<TransitivityRun> {
    let cover = build_cover(&sys.space, &params.scale)?;
    let horizon = params.horizon;
    let n = cover.cells.len();
    let mut pair_hits: Vec<Vec<IndexSample>> = Vec::with_capacity(n);
    for u in &cover.cells {
        let images = sys.window_images(&u.region, horizon)?;
        let mut row = Vec::with_capacity(n);
        for v in &cover.cells {
            let mut members = Vec::new();
            for (t, img) in images.iter().enumerate().skip(1) {
                if img.intersects(&v.region)? {
                    members.push(t as u64);
                }
            }
            row.push(IndexSample::new(horizon, members)?);
        }
        pair_hits.push(row);
    }
    Ok(TransitivityRun {
        cover,
        horizon,
        pair_hits,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TransitivityVariant {
    Transitive,
    WeaklyMixing,
    Mixing,
}

impl TransitivityVariant {
    pub fn property_name(&self) -> &'static str {
        match self {
            TransitivityVariant::Transitive => "transitive",
            TransitivityVariant::WeaklyMixing => "weakly_mixing",
            TransitivityVariant::Mixing => "mixing",
        }
    }
}

pub fn check_transitivity_variant(
    sys: &System,
    variant: TransitivityVariant,
    params: &CheckParams,
) -> Result<PropertyReport> {
    let run = transitivity_run(sys, params)?;
    Ok(variant_report(sys, &run, variant))
}

pub fn variant_report(
    sys: &System,
    run: &TransitivityRun,
    variant: TransitivityVariant,
) -> PropertyReport {
    let mut report = evidence_report(
        sys,
        variant.property_name(),
        &[
            ("scale", fmt_rat(&run.cover.scale)),
            ("T", run.horizon.to_string()),
            ("cells", run.cover.cells.len().to_string()),
        ],
    );
    let n = run.cover.cells.len();
    match variant {
        TransitivityVariant::Transitive => {
            let mut ok = true;
            let mut first_hits: Vec<u64> = Vec::new();
            for u in 0..n {
                for v in 0..n {
                    let hits = &run.pair_hits[u][v];
                    match hits.members().first() {
                        Some(&t) => first_hits.push(t),
                        None => {
                            ok = false;
                            report.witnesses.push(Witness::CellPairNoHit {
                                u_id: run.cover.cells[u].id.clone(),
                                v_id: run.cover.cells[v].id.clone(),
                                u: run.cover.cells[u].region.clone(),
                                v: run.cover.cells[v].region.clone(),
                            });
                            if report.witnesses.len() >= 4 {
                                report.verdict = Verdict::Fails;
                                return report;
                            }
                        }
                    }
                }
            }
            if ok {
                let worst = first_hits.iter().max().copied().unwrap_or(0);
                report.evidence.push(format!(
                    "all {} ordered pairs hit; latest first hit n={worst}",
                    n * n
                ));
                for u in 0..n {
                    let firsts: Vec<String> = (0..n)
                        .map(|v| {
                            run.pair_hits[u][v]
                                .members()
                                .first()
                                .map_or("-".into(), |t| t.to_string())
                        })
                        .collect();
                    report.evidence.push(format!(
                        "{}: first hits per target [{}]",
                        run.cover.cells[u].id,
                        firsts.join(", ")
                    ));
                }
            }
            report.verdict = if ok { Verdict::Holds } else { Verdict::Fails };
        }
        TransitivityVariant::WeaklyMixing => {
            let mut ok = true;
            'outer: for u1 in 0..n {
                for v1 in 0..n {
                    let a = run.pair_hits[u1][v1].members();
                    for u2 in 0..n {
                        for v2 in 0..n {
                            let b = run.pair_hits[u2][v2].members();
                            if !has_common(a, b) {
                                ok = false;
                                report.witnesses.push(Witness::Note(format!(
                                    "pairs ({}, {}) and ({}, {}) share no hitting time",
                                    run.cover.cells[u1].id,
                                    run.cover.cells[v1].id,
                                    run.cover.cells[u2].id,
                                    run.cover.cells[v2].id,
                                )));
                                break 'outer;
                            }
                        }
                    }
                }
            }
            if ok {
                report.evidence.push(format!(
                    "all {} pair combinations share hitting times",
                    (n * n) * (n * n)
                ));
            }
            report.verdict = if ok { Verdict::Holds } else { Verdict::Fails };
        }
        TransitivityVariant::Mixing => {
            let mut verdict = Verdict::Holds;
            let mut worst_tail = 0u64;
            'pairs: for u in 0..n {
                for v in 0..n {
                    let hits = &run.pair_hits[u][v];
                    match classify(hits, &ClassKind::Cofinite) {
                        Ok(c) => match c.verdict {
                            Verdict::Holds => {
                                worst_tail = worst_tail.max(c.tail_start.unwrap_or(0));
                            }
                            Verdict::Fails => {
                                verdict = Verdict::Fails;
                                report.witnesses.push(Witness::CellPairNoHit {
                                    u_id: run.cover.cells[u].id.clone(),
                                    v_id: run.cover.cells[v].id.clone(),
                                    u: run.cover.cells[u].region.clone(),
                                    v: run.cover.cells[v].region.clone(),
                                });
                                if let Some(t) = c.trend {
                                    report.witnesses.push(Witness::Trend {
                                        what: t.what,
                                        sub_horizon: t.sub_horizon,
                                        sub_value: t.sub_value,
                                        full_horizon: t.full_horizon,
                                        full_value: t.full_value,
                                    });
                                }
                                break 'pairs;
                            }
                            Verdict::Inconclusive => {
                                if verdict == Verdict::Holds {
                                    verdict = Verdict::Inconclusive;
                                }
                            }
                        },
                        Err(_) => verdict = Verdict::Inconclusive,
                    }
                }
            }
            if verdict == Verdict::Holds {
                report.evidence.push(format!(
                    "every pair's hit set is a tail; latest tail start {worst_tail}"
                ));
                for u in 0..n {
                    let tails: Vec<String> = (0..n)
                        .map(|v| {
                            run.pair_hits[u][v]
                                .tail_start()
                                .map_or("-".into(), |t| t.to_string())
                        })
                        .collect();
                    report.evidence.push(format!(
                        "{}: tail starts per target [{}]",
                        run.cover.cells[u].id,
                        tails.join(", ")
                    ));
                }
            }
            report.verdict = verdict;
        }
    }
    report
}

fn has_common(a: &[u64], b: &[u64]) -> bool {
    let (mut i, mut j) = (0usize, 0usize);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Equal => return true,
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
        }
    }
    false
}

/// Accessibility: for every ordered cell pair, some probe points are
/// brought within epsilon at a common time n <= T.
pub fn check_accessible(sys: &System, params: &CheckParams) -> Result<PropertyReport> {
    let cover = build_cover(&sys.space, &params.scale)?;
    let mut report = evidence_report(
        sys,
        "accessible",
        &[
            ("epsilon", fmt_rat(&params.epsilon)),
            ("scale", fmt_rat(&params.scale)),
            ("T", params.horizon.to_string()),
        ],
    );
    report.mode = Mode::Sampled;
    // orbit of every probe point, computed once
    let mut orbits: Vec<Vec<Vec<Point>>> = Vec::with_capacity(cover.cells.len());
    for cell in &cover.cells {
        let mut per_cell = Vec::with_capacity(cell.probes.len());
        for p in &cell.probes {
            per_cell.push(sys.orbit(p, params.horizon)?);
        }
        orbits.push(per_cell);
    }
    let mut ok = true;
    let mut witnessed = 0u64;
    'pairs: for (ui, u) in cover.cells.iter().enumerate() {
        for (vi, v) in cover.cells.iter().enumerate() {
            let mut best: Option<Scalar> = None;
            let mut found = false;
            'probes: for ox in &orbits[ui] {
                for oy in &orbits[vi] {
                    for n in 1..=params.horizon as usize {
                        let d = sys.space.distance(&ox[n], &oy[n])?;
                        if d.cmp_rat(&params.epsilon) == std::cmp::Ordering::Less {
                            found = true;
                            witnessed += 1;
                            break 'probes;
                        }
                        best = Some(match best {
                            None => d,
                            Some(b) => {
                                if d.cmp_scalar(&b) == std::cmp::Ordering::Less {
                                    d
                                } else {
                                    b
                                }
                            }
                        });
                    }
                }
            }
            if !found {
                ok = false;
                report.witnesses.push(Witness::NoApproach {
                    u_id: u.id.clone(),
                    v_id: v.id.clone(),
                    best: best.unwrap_or(Scalar::zero()),
                });
                if report.witnesses.len() >= 4 {
                    break 'pairs;
                }
            }
        }
    }
    report
        .evidence
        .push(format!("{witnessed} cell pairs witnessed within epsilon"));
    report.verdict = if ok { Verdict::Holds } else { Verdict::Fails };
    Ok(report)
}
