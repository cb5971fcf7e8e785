//! Scrambled-pair scans: Li-Yorke chaos evidence and Li-Yorke sensitivity.
//!
//! A pair witnesses scrambling at horizon T when its orbit distances dip
//! below eta somewhere in the tail window [T/2, T] and exceed delta
//! somewhere in [1, T]. Holds reports witness counts; it is evidence of
//! scrambled pairs, never a claim about uncountable scrambled sets.

use super::{evidence_report, CheckParams};
use crate::cover::{build_cover, region_probes};
use crate::error::{NdsError, Result};
use crate::point::Point;
use crate::report::{Mode, PropertyReport, Verdict, Witness};
use crate::sampling::Sampler;
use crate::scalar::{fmt_rat, Scalar};
use crate::seq::SeqPoint;
use crate::space::SpaceSpec;
use crate::window::System;
use num_traits::Signed;

/// Deterministic point sample for a space.
pub fn sample_points(space: &SpaceSpec, count: u64, sampler: &mut Sampler) -> Vec<Point> {
    let mut out = Vec::with_capacity(count as usize);
    for _ in 0..count {
        out.push(match space {
            SpaceSpec::UnitInterval => Point::Interval(sampler.unit_rat_mixed()),
            SpaceSpec::Circle => {
                let steps = if sampler.below(4) == 0 {
                    sampler.below(7) as i64 - 3
                } else {
                    0
                };
                Point::circle(sampler.unit_rat_mixed(), steps)
            }
            SpaceSpec::Finite { size, .. } => Point::Finite(sampler.below(*size as u64) as usize),
            SpaceSpec::Shift => {
                let period = 1 + sampler.below(4) as u32;
                let word: String = (0..period)
                    .map(|_| if sampler.bool() { '1' } else { '0' })
                    .collect();
                let mut p = SeqPoint::periodic(&word).expect("valid word");
                if sampler.below(3) == 0 {
                    let insert: Vec<u8> = (0..3).map(|_| sampler.bool() as u8).collect();
                    p = SeqPoint::new(
                        p.left_word().bytes().map(|b| b - b'0').collect(),
                        insert,
                        p.right_word().bytes().map(|b| b - b'0').collect(),
                        sampler.below(5) as i64 - 2,
                    )
                    .expect("valid words");
                }
                Point::Seq(p)
            }
        });
    }
    out
}

struct PairScan {
    max_overall: Scalar,
    max_time: u64,
    min_tail: Scalar,
    min_time: u64,
}

fn scan_pair(sys: &System, x: &Point, y: &Point, horizon: u64) -> Result<PairScan> {
    let ox = sys.orbit(x, horizon)?;
    let oy = sys.orbit(y, horizon)?;
    let tail_from = (horizon / 2).max(1);
    let mut max_overall = Scalar::zero();
    let mut max_time = 0;
    let mut min_tail: Option<(Scalar, u64)> = None;
    for n in 1..=horizon {
        let d = sys.space.distance(&ox[n as usize], &oy[n as usize])?;
        if d.cmp_scalar(&max_overall) == std::cmp::Ordering::Greater {
            max_overall = d.clone();
            max_time = n;
        }
        if n >= tail_from {
            min_tail = Some(match min_tail {
                None => (d, n),
                Some((m, t)) => {
                    if d.cmp_scalar(&m) == std::cmp::Ordering::Less {
                        (d, n)
                    } else {
                        (m, t)
                    }
                }
            });
        }
    }
    let (min_tail, min_time) = min_tail.unwrap_or((Scalar::zero(), horizon));
    Ok(PairScan {
        max_overall,
        max_time,
        min_tail,
        min_time,
    })
}

/// Scan sampled pairs for Li-Yorke witnesses.
pub fn li_yorke_scan(sys: &System, params: &CheckParams) -> Result<PropertyReport> {
    if !params.eta.is_positive() || !params.delta.is_positive() {
        return Err(NdsError::BadParameter(
            "eta and delta must be positive".into(),
        ));
    }
    if params.pair_budget < 1 {
        return Err(NdsError::BadParameter("pair budget must be >= 1".into()));
    }
    let mut report = evidence_report(
        sys,
        "li_yorke",
        &[
            ("pairs", params.pair_budget.to_string()),
            ("T", params.horizon.to_string()),
            ("eta", fmt_rat(&params.eta)),
            ("delta", fmt_rat(&params.delta)),
        ],
    );
    report.mode = Mode::Sampled;
    let mut sampler = Sampler::new(0x11a5_c0de);
    let points = sample_points(&sys.space, 2 * params.pair_budget, &mut sampler);
    let mut witnesses = 0u64;
    let mut sample_rigid: Option<Witness> = None;
    for pair in points.chunks(2) {
        let (x, y) = (&pair[0], &pair[1]);
        if x == y {
            continue;
        }
        let scan = scan_pair(sys, x, y, params.horizon)?;
        let proximal = scan.min_tail.cmp_rat(&params.eta) == std::cmp::Ordering::Less;
        let distal = scan.max_overall.cmp_rat(&params.delta) == std::cmp::Ordering::Greater;
        if proximal && distal {
            witnesses += 1;
            if report.witnesses.len() < 3 {
                report.witnesses.push(Witness::ScrambledPair {
                    x: x.clone(),
                    y: y.clone(),
                    far_time: scan.max_time,
                    far: scan.max_overall.clone(),
                    close_time: scan.min_time,
                    close: scan.min_tail.clone(),
                });
            }
        } else if sample_rigid.is_none() {
            sample_rigid = Some(Witness::RigidPair {
                x: x.clone(),
                y: y.clone(),
                min_tail: scan.min_tail.clone(),
                max_overall: scan.max_overall.clone(),
            });
        }
    }
    report.evidence.push(format!(
        "{witnesses} scrambled pairs among {}",
        params.pair_budget
    ));
    if witnesses > 0 {
        report.verdict = Verdict::Holds;
    } else {
        report.verdict = Verdict::Fails;
        if let Some(w) = sample_rigid {
            report.witnesses.push(w);
        }
    }
    Ok(report)
}

/// Li-Yorke sensitivity: at every cover cell center x, some y within
/// epsilon is proximal in the tail yet separated beyond delta.
pub fn li_yorke_sensitive(sys: &System, params: &CheckParams) -> Result<PropertyReport> {
    if !params.epsilon.is_positive() || !params.delta.is_positive() {
        return Err(NdsError::BadParameter(
            "epsilon and delta must be positive".into(),
        ));
    }
    let cover = build_cover(&sys.space, &params.scale)?;
    let mut report = evidence_report(
        sys,
        "li_yorke_sensitive",
        &[
            ("delta", fmt_rat(&params.delta)),
            ("epsilon", fmt_rat(&params.epsilon)),
            ("eta", fmt_rat(&params.eta)),
            ("scale", fmt_rat(&params.scale)),
            ("T", params.horizon.to_string()),
        ],
    );
    report.mode = Mode::Sampled;
    let mut all_ok = true;
    for cell in &cover.cells {
        let x = &cell.center;
        let ball = sys.space.ball(x, &params.epsilon)?;
        let mut found = false;
        let mut best: Option<Witness> = None;
        for y in region_probes(&sys.space, &ball) {
            if &y == x {
                continue;
            }
            let scan = scan_pair(sys, x, &y, params.horizon)?;
            let proximal = scan.min_tail.cmp_rat(&params.eta) == std::cmp::Ordering::Less;
            let distal = scan.max_overall.cmp_rat(&params.delta) == std::cmp::Ordering::Greater;
            if proximal && distal {
                found = true;
                break;
            }
            if best.is_none() {
                best = Some(Witness::RigidPair {
                    x: x.clone(),
                    y: y.clone(),
                    min_tail: scan.min_tail,
                    max_overall: scan.max_overall,
                });
            }
        }
        if !found {
            all_ok = false;
            report
                .evidence
                .push(format!("{}: no scrambled partner found", cell.id));
            if let Some(w) = best {
                report.witnesses.push(w);
            }
            if report.witnesses.len() >= 4 {
                break;
            }
        }
    }
    report.verdict = if all_ok {
        Verdict::Holds
    } else {
        Verdict::Fails
    };
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::maps::{Affine, MapSpec, PLMap};
    use crate::scalar::rat;
    use crate::schedule::Schedule;

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

    #[test]
    fn doubling_has_scrambled_pairs() {
        let sys = doubling_system();
        let params = CheckParams {
            pair_budget: 200,
            horizon: 40,
            eta: rat(1, 32),
            delta: rat(1, 4),
            ..CheckParams::default()
        };
        let r = li_yorke_scan(&sys, &params).unwrap();
        assert_eq!(r.verdict, Verdict::Holds);
        assert!(matches!(r.witnesses[0], Witness::ScrambledPair { .. }));
    }

    #[test]
    fn rotations_have_rigid_pairs_only() {
        let sys = System::new(
            SpaceSpec::Circle,
            Schedule::constant("rot", MapSpec::rotation(1)),
        )
        .unwrap();
        let params = CheckParams {
            pair_budget: 60,
            horizon: 30,
            eta: rat(1, 32),
            delta: rat(1, 4),
            ..CheckParams::default()
        };
        let r = li_yorke_scan(&sys, &params).unwrap();
        assert_eq!(r.verdict, Verdict::Fails);
        // identity: distances constant
        let id_sys = System::new(
            SpaceSpec::UnitInterval,
            Schedule::constant("id", MapSpec::Identity),
        )
        .unwrap();
        let r = li_yorke_scan(&id_sys, &params).unwrap();
        assert_eq!(r.verdict, Verdict::Fails);
        assert!(matches!(r.witnesses[0], Witness::RigidPair { .. }));
    }

    #[test]
    fn doubling_is_li_yorke_sensitive_on_cells() {
        let sys = doubling_system();
        let params = CheckParams {
            delta: rat(1, 4),
            epsilon: rat(1, 8),
            eta: rat(1, 32),
            scale: rat(1, 4),
            horizon: 40,
            ..CheckParams::default()
        };
        let r = li_yorke_sensitive(&sys, &params).unwrap();
        assert_eq!(r.verdict, Verdict::Holds);
    }
}
