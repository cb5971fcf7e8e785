//! Property tests for the exact algebra: region soundness, the Galois pair
//! between image and preimage, inversion, classifier structure, and witness
//! replay for failing verdicts.

use proptest::prelude::*;

use nds::detectors::sensitivity::variant_report;
use nds::detectors::{
    implication_violated, run_property, CheckParams, PropertySpec, SensitivityVariant,
};
use nds::gallery;
use nds::hitting::{classify, hitting_set, sensitivity_hits, ClassKind, IndexSample};
use nds::interval::{canonicalize, IntervalComp};
use nds::maps::{Affine, FiniteMap, MapSpec, PLMap};
use nds::point::Point;
use nds::region::RegionSet;
use nds::report::{Verdict, Witness};
use nds::scalar::{rat, Rat};
use nds::schedule::Schedule;
use nds::space::SpaceSpec;
use nds::window::System;

/// Dyadic rational in [0, 1] with denominator 2^6.
fn dyadic() -> impl Strategy<Value = Rat> {
    (0i64..=64).prop_map(|k| rat(k, 64))
}

/// A valid piecewise-linear self-map of [0,1], built from endpoint values so
/// the range constraint holds by construction.
fn arb_plmap() -> impl Strategy<Value = PLMap> {
    (1usize..=3, proptest::collection::vec(1i64..=63, 0..=2))
        .prop_flat_map(|(pieces, cuts)| {
            let mut bps: Vec<i64> = cuts;
            bps.sort_unstable();
            bps.dedup();
            bps.truncate(pieces - 1);
            let piece_count = bps.len() + 1;
            (
                Just(bps),
                proptest::collection::vec((0i64..=64, 0i64..=64), piece_count),
            )
        })
        .prop_map(|(cuts, endpoint_values)| {
            let mut breakpoints = vec![rat(0, 1)];
            breakpoints.extend(cuts.iter().map(|&c| rat(c, 64)));
            breakpoints.push(rat(1, 1));
            let mut affines = Vec::with_capacity(endpoint_values.len());
            for (i, (ylo, yhi)) in endpoint_values.iter().enumerate() {
                let u = &breakpoints[i];
                let v = &breakpoints[i + 1];
                let ylo = rat(*ylo, 64);
                let yhi = rat(*yhi, 64);
                let slope = (&yhi - &ylo) / (v - u);
                let intercept = &ylo - &slope * u;
                affines.push(Affine::new(slope, intercept));
            }
            PLMap::new(breakpoints, affines).expect("endpoint construction stays in range")
        })
}

fn arb_component() -> impl Strategy<Value = IntervalComp> {
    (dyadic(), dyadic(), any::<bool>(), any::<bool>()).prop_filter_map(
        "nonempty component",
        |(a, b, lo_open, hi_open)| {
            let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
            IntervalComp::try_new(lo, hi, lo_open, hi_open)
        },
    )
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn canonicalization_is_idempotent(comps in proptest::collection::vec(arb_component(), 0..6)) {
        let once = canonicalize(comps);
        let twice = canonicalize(once.clone());
        prop_assert_eq!(once, twice);
    }

    #[test]
    fn image_distributes_over_union(
        map in arb_plmap(),
        a in proptest::collection::vec(arb_component(), 1..4),
        b in proptest::collection::vec(arb_component(), 1..4),
    ) {
        let m = MapSpec::Pl(map);
        let ra = RegionSet::intervals(a.clone());
        let rb = RegionSet::intervals(b.clone());
        let union = ra.union(&rb).unwrap();
        let image_of_union = union.image(&m).unwrap().canonical();
        let union_of_images = ra
            .image(&m)
            .unwrap()
            .union(&rb.image(&m).unwrap())
            .unwrap()
            .canonical();
        prop_assert_eq!(image_of_union, union_of_images);
    }

    #[test]
    fn membership_soundness_under_images(
        map in arb_plmap(),
        comps in proptest::collection::vec(arb_component(), 1..4),
        x in dyadic(),
    ) {
        let m = MapSpec::Pl(map);
        let region = RegionSet::intervals(comps);
        let p = Point::Interval(x);
        if region.contains(&p).unwrap() {
            let image = region.image(&m).unwrap();
            let fx = m.eval(&p).unwrap();
            prop_assert!(image.contains(&fx).unwrap());
        }
    }

    #[test]
    fn galois_pair_for_piecewise_maps(
        map in arb_plmap(),
        comps in proptest::collection::vec(arb_component(), 1..4),
        x in dyadic(),
    ) {
        let m = MapSpec::Pl(map);
        let v = RegionSet::intervals(comps);
        let pre = v.preimage(&m).unwrap();
        let p = Point::Interval(x);
        let fx = m.eval(&p).unwrap();
        prop_assert_eq!(pre.contains(&p).unwrap(), v.contains(&fx).unwrap());
    }

    #[test]
    fn flattening_is_pointwise_faithful(
        outer in arb_plmap(),
        inner in arb_plmap(),
        x in dyadic(),
    ) {
        // decreasing pieces may hit an unrepresentable discontinuity; the
        // error case is allowed, but a successful flattening must agree
        // with sequential evaluation everywhere
        if let Ok(flat) = outer.compose(&inner, 100_000) {
            prop_assert_eq!(flat.eval(&x), outer.eval(&inner.eval(&x)));
            // breakpoints of every participant are covered as well
            for bp in flat
                .breakpoints()
                .iter()
                .chain(inner.breakpoints())
                .chain(outer.breakpoints())
            {
                prop_assert_eq!(flat.eval(bp), outer.eval(&inner.eval(bp)));
            }
        }
    }

    #[test]
    fn permutations_invert_exactly(perm in proptest::sample::subsequence((0..6usize).collect::<Vec<_>>(), 6)) {
        // subsequence of all six elements is the identity; shuffle via index arithmetic
        let mut table = perm;
        table.reverse();
        let map = FiniteMap::new(table).unwrap();
        if map.is_injective() {
            let inv = map.invert().unwrap();
            prop_assert!(map.after(&inv).unwrap().is_identity());
            prop_assert!(inv.after(&map).unwrap().is_identity());
        }
    }

    #[test]
    fn ball_diameter_bound(x in dyadic(), eps_num in 1i64..=32) {
        let eps = rat(eps_num, 64);
        for space in [SpaceSpec::UnitInterval, SpaceSpec::Circle] {
            let p = match space {
                SpaceSpec::UnitInterval => Point::Interval(x.clone()),
                _ => Point::circle(x.clone(), 0),
            };
            let ball = space.ball(&p, &eps).unwrap();
            let diam = ball.diam(&space).unwrap();
            let bound = &eps + &eps;
            prop_assert!(diam.cmp_rat(&bound) != std::cmp::Ordering::Greater);
        }
    }

    #[test]
    fn sample_prefix_monotonicity(
        members in proptest::collection::btree_set(1u64..=120, 0..40),
        cut in 1u64..=120,
    ) {
        let sample = IndexSample::new(120, members.into_iter().collect()).unwrap();
        let truncated = sample.truncated(cut);
        prop_assert!(truncated.members().iter().all(|&n| n <= cut && sample.contains(n)));
        prop_assert_eq!(
            truncated.len(),
            sample.members().iter().filter(|&&n| n <= cut).count()
        );
    }

    #[test]
    fn upper_density_matches_count(members in proptest::collection::btree_set(1u64..=100, 0..60)) {
        let count = members.len() as i64;
        let sample = IndexSample::new(100, members.into_iter().collect()).unwrap();
        let verdict = classify(&sample, &ClassKind::UpperDensity(rat(count, 100))).unwrap();
        if count > 0 {
            prop_assert_eq!(verdict.verdict, Verdict::Holds);
        }
        let above = classify(&sample, &ClassKind::UpperDensity(rat(count + 1, 100))).unwrap();
        prop_assert_eq!(above.verdict, Verdict::Fails);
    }
}

#[test]
fn shift_ball_matches_brute_force_over_periodic_points() {
    // enumerate all sequences of period 4 and compare the cylinder ball
    // against the raw metric inequality
    let space = SpaceSpec::Shift;
    let points = nds::seq::SeqPoint::enumerate_periodic(4);
    let x = Point::Seq(points[5].clone());
    for eps in [rat(1, 1), rat(1, 2), rat(1, 4), rat(1, 8)] {
        let ball = space.ball(&x, &eps).unwrap();
        for q in &points {
            let p = Point::Seq(q.clone());
            let inside = space.distance(&x, &p).unwrap().cmp_rat(&eps) == std::cmp::Ordering::Less;
            assert_eq!(ball.contains(&p).unwrap(), inside, "eps {eps}, point {p}");
        }
    }
}

#[test]
fn isometries_preserve_sampled_distances() {
    let rot = MapSpec::rotation(3);
    let space = SpaceSpec::Circle;
    let mut sampler = nds::sampling::Sampler::new(5);
    for _ in 0..100 {
        let x = Point::circle(sampler.unit_rat_mixed(), sampler.below(5) as i64 - 2);
        let y = Point::circle(sampler.unit_rat_mixed(), sampler.below(5) as i64 - 2);
        let before = space.distance(&x, &y).unwrap();
        let after = space
            .distance(&rot.eval(&x).unwrap(), &rot.eval(&y).unwrap())
            .unwrap();
        assert_eq!(before, after);
    }
}

#[test]
fn sensitivity_variant_chain_replays_without_violation() {
    // on one shared run per fixture, a stronger variant holding while a
    // weaker one fails would be an ordering violation
    for name in gallery::FIXTURE_NAMES {
        let fix = gallery::fixture(name).unwrap();
        let run = nds::detectors::sensitivity_run(
            &fix.system,
            &fix.defaults.delta,
            &fix.defaults.scale,
            fix.defaults.horizon.min(60),
        )
        .unwrap();
        let theta = &fix.defaults.theta;
        let base = variant_report(&fix.system, &run, SensitivityVariant::Base, theta);
        let cofinite = variant_report(&fix.system, &run, SensitivityVariant::Cofinite, theta);
        let syndetic = variant_report(&fix.system, &run, SensitivityVariant::Syndetic, theta);
        let thick = variant_report(&fix.system, &run, SensitivityVariant::Thick, theta);
        let thickly_syndetic = variant_report(
            &fix.system,
            &run,
            SensitivityVariant::ThicklySyndetic,
            theta,
        );
        for (stronger, weaker) in [
            (&cofinite, &thickly_syndetic),
            (&thickly_syndetic, &syndetic),
            (&thickly_syndetic, &thick),
            (&syndetic, &base),
            (&thick, &base),
            (&cofinite, &base),
        ] {
            assert!(
                !implication_violated(stronger, weaker),
                "{name}: {} holds but {} fails",
                stronger.property,
                weaker.property
            );
        }
    }
}

#[test]
fn failing_witnesses_replay_from_primitives() {
    // a FailsWitness report must re-verify from its stored witness
    let rot_fix = gallery::fixture("circle-alternating").unwrap();
    let report = run_property(&rot_fix.system, PropertySpec::Sensitive, &rot_fix.defaults).unwrap();
    assert_eq!(report.verdict, Verdict::Fails);
    let mut replayed = 0;
    for w in &report.witnesses {
        if let Witness::EmptyHitSet { cell, .. } = w {
            let hits = sensitivity_hits(
                &rot_fix.system,
                cell,
                &rot_fix.defaults.delta,
                rot_fix.defaults.horizon,
            )
            .unwrap();
            assert!(hits.is_empty());
            replayed += 1;
        }
    }
    assert!(replayed > 0);

    // transitivity failure on the squared 4-cycle replays as an empty
    // hitting set
    let h2 = MapSpec::Finite(FiniteMap::new(vec![2, 3, 0, 1]).unwrap());
    let sys = System::new(SpaceSpec::finite_discrete(4), Schedule::constant("h2", h2)).unwrap();
    let params = CheckParams {
        horizon: 20,
        ..CheckParams::default()
    };
    let report = run_property(&sys, PropertySpec::Transitive, &params).unwrap();
    assert_eq!(report.verdict, Verdict::Fails);
    let mut replayed = 0;
    for w in &report.witnesses {
        if let Witness::CellPairNoHit { u, v, .. } = w {
            let hits = hitting_set(&sys, u, v, params.horizon).unwrap();
            assert!(hits.is_empty());
            replayed += 1;
        }
    }
    assert!(replayed > 0);

    // an orbit-miss witness replays by walking the orbit
    let m2 = run_property(
        &rot_fix.system,
        PropertySpec::MinimalM2,
        &CheckParams {
            horizon: 50,
            ..rot_fix.defaults.clone()
        },
    )
    .unwrap();
    assert_eq!(m2.verdict, Verdict::Fails);
    let mut replayed = 0;
    for w in &m2.witnesses {
        if let Witness::OrbitMiss { start, cell, .. } = w {
            let orbit = rot_fix.system.orbit(start, 50).unwrap();
            for p in &orbit {
                assert!(!cell.contains(p).unwrap());
            }
            replayed += 1;
        }
    }
    assert!(replayed > 0);
}

#[test]
fn inverse_of_inverse_normalizes() {
    let rot = MapSpec::rotation(2);
    assert_eq!(rot.invert().unwrap().invert().unwrap(), rot);
    let shift = MapSpec::Shift { power: -3 };
    assert_eq!(shift.invert().unwrap().invert().unwrap(), shift);
    let wrapped = MapSpec::Inverse(Box::new(MapSpec::rotation(1)));
    // evaluating the wrapped inverse equals evaluating the negated rotation
    let p = Point::circle(rat(1, 3), 2);
    assert_eq!(
        wrapped.eval(&p).unwrap(),
        MapSpec::rotation(-1).eval(&p).unwrap()
    );
}

#[test]
fn invertible_maps_round_trip_points() {
    let mut sampler = nds::sampling::Sampler::new(77);
    let cases: Vec<(MapSpec, SpaceSpec)> = vec![
        (MapSpec::rotation(1), SpaceSpec::Circle),
        (MapSpec::Shift { power: 2 }, SpaceSpec::Shift),
        (
            MapSpec::Finite(FiniteMap::new(vec![2, 0, 3, 1]).unwrap()),
            SpaceSpec::finite_discrete(4),
        ),
        (
            MapSpec::Pl(PLMap::single(rat(-1, 1), rat(1, 1)).unwrap()),
            SpaceSpec::UnitInterval,
        ),
    ];
    for (map, space) in cases {
        let inv = map.invert().unwrap();
        for _ in 0..40 {
            let x = match &space {
                SpaceSpec::UnitInterval => Point::Interval(sampler.unit_rat_mixed()),
                SpaceSpec::Circle => Point::circle(sampler.unit_rat_mixed(), 1),
                SpaceSpec::Finite { size, .. } => {
                    Point::Finite(sampler.below(*size as u64) as usize)
                }
                SpaceSpec::Shift => Point::Seq(nds::seq::SeqPoint::periodic("0110").unwrap()),
            };
            let round = inv.eval(&map.eval(&x).unwrap()).unwrap();
            assert_eq!(round, x, "{map:?}");
        }
    }
}

#[test]
fn gallery_never_yields_a_reduction_violation() {
    // regression guard: on every periodic fixture and every property with a
    // claimed transfer direction, the paired verdicts are never contradictory
    let props = [
        PropertySpec::Sensitive,
        PropertySpec::CofinitelySensitive,
        PropertySpec::SyndeticallySensitive,
        PropertySpec::ErgodicallySensitive,
        PropertySpec::Transitive,
        PropertySpec::LiYorkeSensitive,
    ];
    for name in gallery::FIXTURE_NAMES {
        let fix = gallery::fixture(name).unwrap();
        if fix.system.schedule.detect_period(16).is_none() {
            continue;
        }
        let params = CheckParams {
            horizon: fix.defaults.horizon.min(40),
            pair_budget: 40,
            ..fix.defaults.clone()
        };
        for prop in props {
            let case = nds::reduce::transfer_compare(&fix.system, prop, &params).unwrap();
            assert_ne!(
                case.consistency,
                nds::reduce::Consistency::Violation,
                "{name} / {} must not contradict a claimed implication",
                prop.name()
            );
            let shifted = nds::reduce::shift_compare(&fix.system, 2, prop, &params).unwrap();
            assert_ne!(
                shifted.consistency,
                nds::reduce::Consistency::Violation,
                "{name} / {} (shift) must not contradict a claimed implication",
                prop.name()
            );
        }
    }
}

#[test]
fn periodic_windows_factor_through_the_period_map() {
    // for a periodic schedule, the window of length k*n equals the n-fold
    // composition of the window of length k, pointwise
    let fix = gallery::fixture("nonsurjective-transitive").unwrap();
    let schedule = &fix.system.schedule;
    let k = schedule.detect_period(16).unwrap();
    let mut sampler = nds::sampling::Sampler::new(31);
    for n in 1..=4u64 {
        let long = nds::window::compile_window(schedule, 1, k * n, 100_000).unwrap();
        let step = nds::window::compile_window(schedule, 1, k, 100_000).unwrap();
        for _ in 0..60 {
            let x = Point::Interval(sampler.unit_rat_mixed());
            let mut folded = x.clone();
            for _ in 0..n {
                folded = step.eval(&folded).unwrap();
            }
            assert_eq!(long.eval(&x).unwrap(), folded, "k={k}, n={n}");
        }
    }
}

#[test]
fn compiled_period_map_matches_sequential_evaluation() {
    let fix = gallery::fixture("k-transfer-counterexample").unwrap();
    let (k, g) = nds::reduce::compile_period_map(&fix.system.schedule).unwrap();
    for start in 0..4usize {
        let x = Point::Finite(start);
        let mut seq = x.clone();
        for i in 1..=k {
            seq = fix.system.schedule.map_at(i).eval(&seq).unwrap();
        }
        assert_eq!(g.eval(&x).unwrap(), seq);
    }
}

#[test]
fn triangular_orbit_matches_the_closed_form() {
    // independent oracle: the state after n steps is (number of triangular
    // numbers <= n) mod 3, counting directly
    let fix = gallery::fixture("triangular-3pt").unwrap();
    let orbit = fix.system.orbit(&Point::Finite(0), 300).unwrap();
    for n in 0..=300u64 {
        let count = (1u64..).take_while(|j| j * (j + 1) / 2 <= n).count();
        assert_eq!(orbit[n as usize], Point::Finite(count % 3), "at n={n}");
    }
}

#[test]
fn gallery_isometries_preserve_distances_on_samples() {
    // every generator flagged as an isometry must preserve the metric on
    // sampled pairs, exactly
    let mut sampler = nds::sampling::Sampler::new(0x150);
    for name in gallery::FIXTURE_NAMES {
        let fix = gallery::fixture(name).unwrap();
        for (gen_name, map) in fix.system.schedule.generators() {
            if !map.analyze().unwrap().isometry {
                continue;
            }
            for _ in 0..50 {
                let x = sample_space_point(&fix.system.space, &mut sampler);
                let y = sample_space_point(&fix.system.space, &mut sampler);
                let before = fix.system.space.distance(&x, &y).unwrap();
                let after = fix
                    .system
                    .space
                    .distance(&map.eval(&x).unwrap(), &map.eval(&y).unwrap())
                    .unwrap();
                assert_eq!(before, after, "{name}/{gen_name} at ({x}, {y})");
            }
        }
    }
}

fn sample_space_point(space: &SpaceSpec, sampler: &mut nds::sampling::Sampler) -> Point {
    match space {
        SpaceSpec::UnitInterval => Point::Interval(sampler.unit_rat_mixed()),
        SpaceSpec::Circle => Point::circle(sampler.unit_rat_mixed(), sampler.below(7) as i64 - 3),
        SpaceSpec::Finite { size, .. } => Point::Finite(sampler.below(*size as u64) as usize),
        SpaceSpec::Shift => {
            let period = 1 + sampler.below(4) as u32;
            let word: String = (0..period)
                .map(|_| if sampler.bool() { '1' } else { '0' })
                .collect();
            Point::Seq(nds::seq::SeqPoint::periodic(&word).unwrap())
        }
    }
}

#[test]
fn membership_soundness_on_every_fixture_space() {
    // exhaustive over cover cells, generators, and sampled points: a point
    // in a region lands in the region's image under each generator
    let mut sampler = nds::sampling::Sampler::new(0x50de);
    for name in gallery::FIXTURE_NAMES {
        let fix = gallery::fixture(name).unwrap();
        let cover = nds::cover::build_cover(&fix.system.space, &rat(1, 2)).unwrap();
        let points: Vec<Point> = (0..40)
            .map(|_| sample_space_point(&fix.system.space, &mut sampler))
            .collect();
        for cell in &cover.cells {
            for (gen_name, map) in fix.system.schedule.generators().iter().take(6) {
                let image = cell.region.image(map).unwrap();
                for p in points.iter().chain(std::iter::once(&cell.center)) {
                    if cell.region.contains(p).unwrap() {
                        let fp = map.eval(p).unwrap();
                        assert!(
                            image.contains(&fp).unwrap(),
                            "{name}/{gen_name}: {p} in {} but image misses {fp}",
                            cell.id
                        );
                    }
                }
            }
        }
    }
}

#[test]
fn alternating_shift_is_weakly_li_yorke() {
    // mixed-tail probes give pairs that approach under net-negative words
    // and separate under net-positive ones
    let fix = gallery::fixture("weak-but-not").unwrap();
    let r = nds::detectors::weak_scan(
        &fix.system,
        nds::detectors::WeakKind::LiYorke,
        &fix.defaults,
    )
    .unwrap();
    assert_eq!(r.verdict, Verdict::Holds);
    // while the identity schedule is not: distances never change
    let id_sys = nds::window::System::new(
        SpaceSpec::Shift,
        Schedule::constant("id", MapSpec::Identity),
    )
    .unwrap();
    let r = nds::detectors::weak_scan(
        &id_sys,
        nds::detectors::WeakKind::LiYorke,
        &fix.defaults,
    )
    .unwrap();
    assert_eq!(r.verdict, Verdict::Fails);
}

#[test]
fn preimage_pins() {
    // preimage of a singleton under the 3-cycle is the predecessor state
    let cycle = MapSpec::Finite(FiniteMap::new(vec![1, 2, 0]).unwrap());
    let target = RegionSet::Indices([0usize].into_iter().collect());
    assert_eq!(
        target.preimage(&cycle).unwrap(),
        RegionSet::Indices([2usize].into_iter().collect())
    );
    // preimage of the full space is the full space, for every map kind
    for (map, space) in [
        (gallery::doubling(), SpaceSpec::UnitInterval),
        (gallery::half_map(), SpaceSpec::UnitInterval),
        (MapSpec::rotation(1), SpaceSpec::Circle),
        (MapSpec::Shift { power: 2 }, SpaceSpec::Shift),
        (cycle, SpaceSpec::finite_discrete(3)),
    ] {
        let full = RegionSet::full(&space);
        assert!(full.preimage(&map).unwrap().is_full(&space), "{map:?}");
    }
}

#[test]
fn three_map_cycle_period_map_equals_the_doubling_map() {
    // the contraction and its clamped inverse cancel, leaving the doubling
    // map as the compiled period map
    let fix = gallery::fixture("nonsurjective-transitive").unwrap();
    let (k, g) = nds::reduce::compile_period_map(&fix.system.schedule).unwrap();
    assert_eq!(k, 3);
    assert!(nds::maps::maps_equal(&g, &gallery::doubling()).unwrap());
}
