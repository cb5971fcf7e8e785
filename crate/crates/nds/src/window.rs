//! Window compositions `f_i^n = f_{i+n-1} ∘ ... ∘ f_i`, orbit iteration,
//! and iterated exact images.
//!
//! `compile_window` produces a single map equal pointwise to the window.
//! Piecewise windows flatten exactly up to a piece budget and fall back to
//! an unflattened (still pointwise-exact) composite beyond it; region work
//! never needs flattening because images are applied map by map.

use std::collections::HashMap;

use crate::error::{NdsError, Result};
use crate::maps::{compose_flat, MapSpec, DEFAULT_PIECE_BUDGET};
use crate::point::Point;
use crate::region::RegionSet;
use crate::report::fnv1a64;
use crate::schedule::Schedule;
use crate::space::SpaceSpec;

/// A space together with the schedule acting on it.
#[derive(Debug, Clone)]
pub struct System {
    pub space: SpaceSpec,
    pub schedule: Schedule,
}

impl System {
    pub fn new(space: SpaceSpec, schedule: Schedule) -> Result<System> {
        for (name, map) in schedule.generators() {
            if let Some(kind) = map.space_kind()? {
                if kind != space.kind() {
                    return Err(NdsError::SpaceMismatch(format!(
                        "generator {name} acts on a {kind} space, system space is {}",
                        space.kind()
                    )));
                }
            }
        }
        Ok(System { space, schedule })
    }

    /// Hash tag for reports; covers the space and the schedule rule.
    pub fn provenance_hash(&self) -> String {
        fnv1a64(format!("{:?}|{:?}", self.space, self.schedule).as_bytes())
    }

    /// Orbit x, f_1^1(x), ..., f_1^T(x); element n is the n-step image.
    pub fn orbit(&self, x: &Point, horizon: u64) -> Result<Vec<Point>> {
        self.space.check_point(x)?;
        let mut out = Vec::with_capacity(horizon as usize + 1);
        out.push(x.clone());
        let mut cur = x.clone();
        for n in 1..=horizon {
            cur = self.schedule.map_at(n).eval(&cur)?;
            out.push(cur.clone());
        }
        Ok(out)
    }

    /// Images U, f_1^1(U), ..., f_1^T(U) computed map by map, exactly.
    pub fn window_images(&self, region: &RegionSet, horizon: u64) -> Result<Vec<RegionSet>> {
        let mut out = Vec::with_capacity(horizon as usize + 1);
        out.push(region.clone());
        let mut cur = region.clone();
        for n in 1..=horizon {
            cur = cur.image(self.schedule.map_at(n))?.canonical();
            out.push(cur.clone());
        }
        Ok(out)
    }

    /// The system with the schedule re-based to start at index n.
    pub fn shifted(&self, start: u64) -> System {
        System {
            space: self.space.clone(),
            schedule: self.schedule.shifted_to(start),
        }
    }
}

/// Exact compilation of the window f_i^n as a single map.
///
/// n = 0 yields the identity. The result is pointwise equal to applying the
/// window maps in order; a piecewise window whose exact flattening exceeds
/// the piece budget is returned as a composite instead.
pub fn compile_window(
    schedule: &Schedule,
    start: u64,
    len: u64,
    piece_budget: usize,
) -> Result<MapSpec> {
    if start < 1 {
        return Err(NdsError::BadParameter("window start must be >= 1".into()));
    }
    if len == 0 {
        return Ok(MapSpec::Identity);
    }
    let mut acc = schedule.map_at(start).flatten(piece_budget)?;
    let mut pending: Vec<MapSpec> = Vec::new();
    for k in 1..len {
        let next = schedule.map_at(start + k).flatten(piece_budget)?;
        if pending.is_empty() {
            match compose_flat(&next, &acc, piece_budget) {
                Ok(m) => acc = m,
                Err(NdsError::Flatten(_)) => pending.push(next),
                Err(e) => return Err(e),
            }
        } else {
            pending.push(next);
        }
    }
    if pending.is_empty() {
        Ok(acc)
    } else {
        // pointwise-exact fallback: [last, ..., first]
        let mut list: Vec<MapSpec> = pending;
        list.reverse();
        list.push(acc);
        Ok(MapSpec::Composite(list))
    }
}

/// Window compiler with memoization keyed by (start mod period, length)
/// for periodic schedules and by (start, length) otherwise.
pub struct WindowCache<'a> {
    schedule: &'a Schedule,
    period: Option<u64>,
    piece_budget: usize,
    memo: HashMap<(u64, u64), MapSpec>,
}

impl<'a> WindowCache<'a> {
    pub fn new(schedule: &'a Schedule) -> WindowCache<'a> {
        WindowCache {
            schedule,
            period: schedule.detect_period(64),
            piece_budget: DEFAULT_PIECE_BUDGET,
            memo: HashMap::new(),
        }
    }

    pub fn compile(&mut self, start: u64, len: u64) -> Result<MapSpec> {
        let key_start = match self.period {
            Some(k) => (start - 1) % k + 1,
            None => start,
        };
        if let Some(m) = self.memo.get(&(key_start, len)) {
            return Ok(m.clone());
        }
        let m = compile_window(self.schedule, key_start, len, self.piece_budget)?;
        self.memo.insert((key_start, len), m.clone());
        Ok(m)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::maps::{Affine, PLMap};
    use crate::sampling::Sampler;
    use crate::scalar::rat;
    use crate::schedule::ScheduleRule;

    fn half() -> MapSpec {
        MapSpec::Pl(PLMap::single(rat(1, 2), rat(0, 1)).unwrap())
    }
    fn clamped_double() -> MapSpec {
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

    fn proposition_schedule() -> Schedule {
        Schedule::cycle(vec![
            ("half".into(), half()),
            ("clamp2x".into(), clamped_double()),
            ("double".into(), doubling()),
        ])
        .unwrap()
    }

    #[test]
    fn zero_length_window_is_identity() {
        let s = proposition_schedule();
        assert_eq!(compile_window(&s, 1, 0, 1000).unwrap(), MapSpec::Identity);
    }

    #[test]
    fn first_two_maps_cancel() {
        // clamp2x after half is the identity on [0,1]
        let s = proposition_schedule();
        let w = compile_window(&s, 1, 2, 1000).unwrap();
        assert!(w.is_identity_map(1000).unwrap());
    }

    #[test]
    fn alternating_rotations_cancel_at_even_lengths() {
        let s = Schedule::cycle(vec![
            ("rot".into(), MapSpec::rotation(1)),
            ("rot_back".into(), MapSpec::rotation(-1)),
        ])
        .unwrap();
        for k in 1..=50 {
            let w = compile_window(&s, 1, 2 * k, 1000).unwrap();
            assert_eq!(
                w,
                MapSpec::Rotation {
                    steps: 0,
                    offset: rat(0, 1)
                },
                "window length {}",
                2 * k
            );
        }
    }

    #[test]
    fn flattened_windows_match_sequential_evaluation() {
        let s = proposition_schedule();
        let mut sampler = Sampler::new(42);
        for len in 0..=7u64 {
            for start in 1..=3u64 {
                let w = compile_window(&s, start, len, 100_000).unwrap();
                for _ in 0..40 {
                    let x = Point::Interval(sampler.unit_rat_mixed());
                    let mut seq = x.clone();
                    for k in 0..len {
                        seq = s.map_at(start + k).eval(&seq).unwrap();
                    }
                    assert_eq!(w.eval(&x).unwrap(), seq, "start={start} len={len}");
                }
            }
        }
    }

    #[test]
    fn cocycle_identity_on_random_points() {
        let s = proposition_schedule();
        let mut cache = WindowCache::new(&s);
        let mut sampler = Sampler::new(7);
        for _ in 0..200 {
            let i = 1 + sampler.below(5);
            let m = sampler.below(5);
            let n = sampler.below(5);
            let x = Point::Interval(sampler.unit_rat_mixed());
            let whole = cache.compile(i, m + n).unwrap().eval(&x).unwrap();
            let first = cache.compile(i, m).unwrap().eval(&x).unwrap();
            let second = cache.compile(i + m, n).unwrap().eval(&first).unwrap();
            assert_eq!(whole, second);
        }
    }

    #[test]
    fn budget_fallback_is_pointwise_exact() {
        let s = Schedule::constant("double", doubling());
        // budget too small to flatten 2^6 pieces
        let w = compile_window(&s, 1, 6, 8).unwrap();
        assert!(matches!(w, MapSpec::Composite(_)));
        let flat = compile_window(&s, 1, 6, 100_000).unwrap();
        let mut sampler = Sampler::new(3);
        for _ in 0..100 {
            let x = Point::Interval(sampler.unit_rat_mixed());
            assert_eq!(w.eval(&x).unwrap(), flat.eval(&x).unwrap());
        }
    }

    #[test]
    fn heterogeneous_window_is_rejected() {
        let s = Schedule::cycle(vec![
            ("rot".into(), MapSpec::rotation(1)),
            ("double".into(), doubling()),
        ])
        .unwrap();
        let err = compile_window(&s, 1, 2, 1000).unwrap_err();
        assert!(matches!(err, NdsError::HeterogeneousWindow(_)));
    }

    #[test]
    fn growing_blocks_windows_are_net_shifts() {
        let s = Schedule::new(
            vec![
                ("s".into(), MapSpec::Shift { power: 1 }),
                ("si".into(), MapSpec::Shift { power: -1 }),
                ("id".into(), MapSpec::Identity),
            ],
            ScheduleRule::GrowingBlocks {
                generator: 0,
                inverse: 1,
                filler: 2,
            },
        )
        .unwrap();
        // net shift count after each block is zero
        let w = compile_window(&s, 1, 4, 1000).unwrap();
        assert!(w.is_identity_map(1000).unwrap());
        let w = compile_window(&s, 1, 16, 1000).unwrap();
        assert!(w.is_identity_map(1000).unwrap());
        // inside the first half of block 2 the count is positive
        let w = compile_window(&s, 1, 9, 1000).unwrap();
        assert_eq!(w, MapSpec::Shift { power: 2 });
    }
}
