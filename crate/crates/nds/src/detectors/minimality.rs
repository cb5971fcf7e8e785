//! Minimality in both senses: no proper closed invariant subset (M1), and
//! density of every orbit (M2).
//!
//! M1 is decided exactly on finite spaces by exhausting the nonempty proper
//! subsets. Elsewhere a seed-closure search grows candidate invariant
//! regions from cover cells; finding a stable proper region refutes M1,
//! and exhausting the budget without one is reported as Inconclusive, never
//! as a proof.

use std::collections::BTreeSet;

use super::{evidence_report, CheckParams};
use crate::cover::build_cover;
use crate::error::{NdsError, Result};
use crate::maps::MapSpec;
use crate::region::RegionSet;
use crate::report::{Mode, PropertyReport, Verdict, Witness};
use crate::scalar::fmt_rat;
use crate::space::SpaceSpec;
use crate::window::System;

/// Distinct generator maps the schedule can apply.
fn used_maps(sys: &System) -> Vec<(String, MapSpec)> {
    let gens = sys.schedule.generators();
    sys.schedule
        .used_generator_indices()
        .into_iter()
        .map(|i| gens[i].clone())
        .collect()
}

pub fn minimality_m1(sys: &System, params: &CheckParams) -> Result<PropertyReport> {
    match &sys.space {
        SpaceSpec::Finite { size, .. } => minimality_m1_finite(sys, *size),
        _ => minimality_m1_seed_closure(sys, params),
    }
}

/// Exhaustive search over all nonempty subsets of a finite space.
fn minimality_m1_finite(sys: &System, size: usize) -> Result<PropertyReport> {
    if size > 20 {
        return Err(NdsError::Unsupported(format!(
            "exhaustive invariant-subset search over 2^{size} subsets"
        )));
    }
    let mut report = evidence_report(
        sys,
        "minimal_m1",
        &[("subsets", ((1u64 << size) - 1).to_string())],
    );
    report.mode = Mode::Exact;
    let maps = used_maps(sys);
    let mut invariant_proper: Option<BTreeSet<usize>> = None;
    let mut checked = 0u64;
    for mask in 1u64..(1 << size) {
        checked += 1;
        let subset: BTreeSet<usize> = (0..size).filter(|i| (mask >> i) & 1 == 1).collect();
        if subset.len() == size {
            continue; // the whole space is always invariant
        }
        let region = RegionSet::Indices(subset.clone());
        let mut invariant = true;
        for (_, map) in &maps {
            let img = region.image(map)?;
            if !img.subset_of(&region)? {
                invariant = false;
                break;
            }
        }
        if invariant {
            invariant_proper = Some(subset);
            break;
        }
    }
    report
        .evidence
        .push(format!("checked {checked} nonempty subsets exhaustively"));
    match invariant_proper {
        Some(subset) => {
            report.verdict = Verdict::Fails;
            report.witnesses.push(Witness::InvariantRegion {
                region: RegionSet::Indices(subset),
            });
        }
        None => report.verdict = Verdict::Holds,
    }
    Ok(report)
}

/// Grow candidate invariant regions from cover cells until stable, full, or
/// out of budget.
fn minimality_m1_seed_closure(sys: &System, params: &CheckParams) -> Result<PropertyReport> {
    let cover = build_cover(&sys.space, &params.scale)?;
    let mut report = evidence_report(
        sys,
        "minimal_m1",
        &[
            ("scale", fmt_rat(&params.scale)),
            ("seeds", cover.cells.len().to_string()),
        ],
    );
    let maps = used_maps(sys);
    let step_budget = 40u32;
    let mut stable_count = 0u32;
    for cell in &cover.cells {
        let mut region = cell.region.clone();
        let mut stable = false;
        for _ in 0..step_budget {
            let mut next = region.clone();
            for (_, map) in &maps {
                let img = match region.image(map) {
                    Ok(i) => i,
                    Err(NdsError::Unsupported(_)) => {
                        report.verdict = Verdict::Inconclusive;
                        report
                            .evidence
                            .push("closure not representable for this space; giving up".into());
                        return Ok(report);
                    }
                    Err(e) => return Err(e),
                };
                next = match next.union(&img) {
                    Ok(u) => u,
                    Err(NdsError::Unsupported(_)) => {
                        report.verdict = Verdict::Inconclusive;
                        report.evidence.push(
                            "region union not representable for this space; giving up".into(),
                        );
                        return Ok(report);
                    }
                    Err(e) => return Err(e),
                };
            }
            if next.subset_of(&region)? {
                stable = true;
                break;
            }
            region = next;
            if region.is_full(&sys.space) {
                break;
            }
        }
        if stable && !region.is_full(&sys.space) {
            report.verdict = Verdict::Fails;
            report.witnesses.push(Witness::InvariantRegion { region });
            report.evidence.push(format!(
                "seed {} closed into a proper invariant region",
                cell.id
            ));
            return Ok(report);
        }
        if stable {
            stable_count += 1;
        }
    }
    report.verdict = Verdict::Inconclusive;
    report.evidence.push(format!(
        "no proper stable region found from {} seeds ({} closures reached the full space or the step budget; M1 cannot be certified from finite evidence)",
        cover.cells.len(),
        cover.cells.len() as u32 - stable_count,
    ));
    Ok(report)
}

/// M2: the orbit of every cell center meets every cell.
pub fn minimality_m2(sys: &System, params: &CheckParams) -> Result<PropertyReport> {
    let cover = build_cover(&sys.space, &params.scale)?;
    let mut report = evidence_report(
        sys,
        "minimal_m2",
        &[
            ("scale", fmt_rat(&params.scale)),
            ("T", params.horizon.to_string()),
            ("cells", cover.cells.len().to_string()),
        ],
    );
    report.mode = Mode::Sampled;
    let mut all_dense = true;
    'outer: for cell in &cover.cells {
        let orbit = sys.orbit(&cell.center, params.horizon)?;
        for target in &cover.cells {
            let mut hit = false;
            for p in &orbit {
                if target.region.contains(p)? {
                    hit = true;
                    break;
                }
            }
            if !hit {
                all_dense = false;
                report.witnesses.push(Witness::OrbitMiss {
                    start: cell.center.clone(),
                    cell_id: target.id.clone(),
                    cell: target.region.clone(),
                });
                if report.witnesses.len() >= 4 {
                    break 'outer;
                }
            }
        }
    }
    if all_dense {
        report.evidence.push(format!(
            "every center orbit meets all {} cells within T={}",
            cover.cells.len(),
            params.horizon
        ));
    }
    report.verdict = if all_dense {
        Verdict::Holds
    } else {
        Verdict::Fails
    };
    Ok(report)
}

/// The preimage-covering characterization of M2: for every cell U there is
/// an n with the union of preimages f_1^{-k}(U), k = 0..n, covering the
/// space.
pub fn minimal_char_union(sys: &System, params: &CheckParams) -> Result<PropertyReport> {
    let cover = build_cover(&sys.space, &params.scale)?;
    let mut report = evidence_report(
        sys,
        "minimal_preimage_cover",
        &[
            ("scale", fmt_rat(&params.scale)),
            ("T", params.horizon.to_string()),
        ],
    );
    let mut all_cover = true;
    for cell in &cover.cells {
        let mut union = cell.region.clone();
        let mut reached: Option<u64> = if union.is_full(&sys.space) {
            Some(0)
        } else {
            None
        };
        let mut k = 0u64;
        while reached.is_none() && k < params.horizon {
            k += 1;
            // f_1^{-k}(U) = f_1^{-1}(f_2^{-1}(... f_k^{-1}(U)))
            let mut pullback = cell.region.clone();
            for i in (1..=k).rev() {
                pullback = pullback.preimage(sys.schedule.map_at(i))?;
            }
            union = union.union(&pullback)?;
            if union.is_full(&sys.space) {
                reached = Some(k);
            }
        }
        match reached {
            Some(n) => report
                .evidence
                .push(format!("{}: preimages cover the space by k={n}", cell.id)),
            None => {
                all_cover = false;
                report.witnesses.push(Witness::Note(format!(
                    "preimages of {} never cover the space up to k={}",
                    cell.id, params.horizon
                )));
            }
        }
    }
    report.verdict = if all_cover {
        Verdict::Holds
    } else {
        Verdict::Fails
    };
    Ok(report)
}
