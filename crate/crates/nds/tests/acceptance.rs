//! Acceptance suite: one test per criterion, each printing a PASS/FAIL line.
//! Run with `cargo test --test acceptance -- --nocapture` to see the lines.
//!
//! Every tolerance here is exact: rational arithmetic end to end, with
//! trend-based verdicts compared at the stated pairs of horizons.

use std::time::Instant;

use nds::detectors::points::return_times;
use nds::detectors::sensitivity::variant_report as sensitivity_variant_report;
use nds::detectors::transitivity::variant_report as transitivity_variant_report;
use nds::detectors::{
    check_kato, implication_violated, run_property, sensitivity_run, transitivity_run, CheckParams,
    PropertySpec, SensitivityVariant, TransitivityVariant,
};
use nds::gallery::{self, net_shift_count};
use nds::hitting::{classify, hitting_set, sensitivity_hits, ClassKind, IndexSample};
use nds::maps::MapSpec;
use nds::point::Point;
use nds::reduce::{compile_period_map, shift_compare, transfer_compare, Consistency};
use nds::region::RegionSet;
use nds::report::{Mode, Verdict, Witness};
use nds::sampling::Sampler;
use nds::scalar::rat;
use nds::schedule::Schedule;
use nds::seq::SeqPoint;
use nds::space::SpaceSpec;
use nds::window::{compile_window, System};

fn pass(criterion: &str, started: Instant) {
    println!("PASS {criterion} ({:.3}s)", started.elapsed().as_secs_f64());
}

fn fixture(name: &str) -> gallery::Fixture {
    gallery::fixture(name).expect("fixture builds")
}

/// Deterministic per-space point sample used by the invariant suites.
fn sample_point(space: &SpaceSpec, sampler: &mut Sampler) -> Point {
    match space {
        SpaceSpec::UnitInterval => Point::Interval(sampler.unit_rat_mixed()),
        SpaceSpec::Circle => Point::circle(sampler.unit_rat_mixed(), sampler.below(7) as i64 - 3),
        SpaceSpec::Finite { size, .. } => Point::Finite(sampler.below(*size as u64) as usize),
        SpaceSpec::Shift => {
            let period = 1 + sampler.below(4) as u32;
            let word: String = (0..period)
                .map(|_| if sampler.bool() { '1' } else { '0' })
                .collect();
            Point::Seq(SeqPoint::periodic(&word).unwrap())
        }
    }
}

#[test]
fn criterion_01_exact_orbit_pin() {
    let t = Instant::now();
    let fix = fixture("minimal2-blocks");
    // the orbit set of the point 1 is {1/2, 1}, exactly, over 100 steps
    let orbit = fix
        .system
        .orbit(&Point::Interval(rat(1, 1)), 100)
        .expect("orbit");
    let expected = [Point::Interval(rat(1, 2)), Point::Interval(rat(1, 1))];
    for (n, p) in orbit.iter().enumerate() {
        assert!(
            expected.contains(p),
            "orbit point at step {n} is {p}, outside {{1/2, 1}}"
        );
    }
    assert!(orbit.contains(&expected[0]) && orbit.contains(&expected[1]));
    // density fails with a concrete missed cell at scale 1/8
    let params = CheckParams {
        scale: rat(1, 8),
        horizon: 50,
        ..CheckParams::default()
    };
    let m2 = run_property(&fix.system, PropertySpec::MinimalM2, &params).unwrap();
    assert_eq!(m2.verdict, Verdict::Fails);
    assert!(m2
        .witnesses
        .iter()
        .any(|w| matches!(w, Witness::OrbitMiss { .. })));
    pass("criterion 1: exact orbit pin on minimal2-blocks", t);
}

#[test]
fn criterion_02_identity_window_pin() {
    let t = Instant::now();
    let fix = fixture("circle-alternating");
    let zero_rotation = MapSpec::Rotation {
        steps: 0,
        offset: rat(0, 1),
    };
    for k in 1..=50u64 {
        let w = compile_window(&fix.system.schedule, 1, 2 * k, 10_000).unwrap();
        assert_eq!(w, zero_rotation, "window of length {}", 2 * k);
    }
    // sampled points, rational and symbolic, are exactly 2-periodic
    let mut sampler = Sampler::new(21);
    for _ in 0..25 {
        let p = sample_point(&fix.system.space, &mut sampler);
        let r = nds::detectors::periodic_point(&fix.system, &p, 2, 100, false).unwrap();
        assert_eq!(r.verdict, Verdict::Holds, "point {p}");
    }
    let params = CheckParams {
        delta: rat(1, 10),
        scale: rat(1, 8),
        horizon: 100,
        ..CheckParams::default()
    };
    let sens = run_property(&fix.system, PropertySpec::Sensitive, &params).unwrap();
    assert_eq!(sens.verdict, Verdict::Fails);
    pass("criterion 2: identity windows on circle-alternating", t);
}

#[test]
fn criterion_03_triangular_divergence() {
    let t = Instant::now();
    let fix = fixture("triangular-3pt");
    let m1 = run_property(&fix.system, PropertySpec::MinimalM1, &fix.defaults).unwrap();
    assert_eq!(m1.verdict, Verdict::Holds);
    assert_eq!(m1.mode, Mode::Exact);
    let m2 = run_property(&fix.system, PropertySpec::MinimalM2, &fix.defaults).unwrap();
    assert_eq!(m2.verdict, Verdict::Holds);
    // return gaps grow: gap at T=300 strictly exceeds gap at T=60
    let x = Point::Finite(0);
    let eps = rat(1, 2);
    let small = return_times(&fix.system, &x, &eps, 60).unwrap();
    let large = return_times(&fix.system, &x, &eps, 300).unwrap();
    assert!(
        large.max_gap() > small.max_gap(),
        "gap {} at T=300 should exceed gap {} at T=60",
        large.max_gap(),
        small.max_gap()
    );
    let ap = nds::detectors::almost_periodic(&fix.system, &x, &eps, 300).unwrap();
    assert_eq!(ap.verdict, Verdict::Fails);
    pass("criterion 3: triangular minimal-but-not-almost-periodic", t);
}

#[test]
fn criterion_04_nonsurjective_transitivity() {
    let t = Instant::now();
    let fix = fixture("nonsurjective-transitive");
    let half = &fix
        .system
        .schedule
        .generators()
        .iter()
        .find(|(n, _)| n == "half")
        .unwrap()
        .1;
    assert!(!half.analyze().unwrap().surjective);
    // transitive at scale 1/8, every ordered pair hit by some n <= 30
    let params = CheckParams {
        scale: rat(1, 8),
        horizon: 60,
        ..CheckParams::default()
    };
    let run = transitivity_run(&fix.system, &params).unwrap();
    for row in &run.pair_hits {
        for hits in row {
            let first = hits.members().first().copied();
            assert!(
                matches!(first, Some(n) if n <= 30),
                "a pair is first hit at {first:?}, beyond 30"
            );
        }
    }
    let report = transitivity_variant_report(&fix.system, &run, TransitivityVariant::Transitive);
    assert_eq!(report.verdict, Verdict::Holds);
    pass("criterion 4: transitivity with non-surjective members", t);
}

#[test]
fn criterion_05_shift_counterexample() {
    let t = Instant::now();
    let fix = fixture("shift-growing-blocks");
    let delta = rat(1, 2);
    // the hit set of each width-1 cylinder equals the nonzero net-shift
    // times, computed independently from the block rule
    let counts = net_shift_count(&fix.system.schedule, 300);
    let expected: Vec<u64> = (1..=300).filter(|&n| counts[n as usize] != 0).collect();
    for bit in [0u8, 1] {
        let u = RegionSet::Cylinders(vec![nds::region::Cylinder::from_pairs(&[(0, bit)])]);
        let hits = sensitivity_hits(&fix.system, &u, &delta, 300).unwrap();
        assert_eq!(hits.members(), expected.as_slice(), "cylinder bit {bit}");
        // both classifiers fail by trend: gap at 300 exceeds gap at 75
        let syn = classify(&hits, &ClassKind::Syndetic).unwrap();
        assert_eq!(syn.verdict, Verdict::Fails);
        let trend = syn.trend.expect("trend recorded");
        assert_eq!(trend.sub_horizon, 75);
        assert!(trend.full_value > trend.sub_value);
        let thick_syn = classify(&hits, &ClassKind::ThicklySyndetic(2)).unwrap();
        assert_eq!(thick_syn.verdict, Verdict::Fails);
    }
    // and the detector-level verdicts agree
    let syn = run_property(
        &fix.system,
        PropertySpec::SyndeticallySensitive,
        &fix.defaults,
    )
    .unwrap();
    assert_eq!(syn.verdict, Verdict::Fails);
    let tsyn = run_property(
        &fix.system,
        PropertySpec::ThicklySyndeticallySensitive,
        &fix.defaults,
    )
    .unwrap();
    assert_eq!(tsyn.verdict, Verdict::Fails);
    pass("criterion 5: growing-blocks shift counterexample", t);
}

#[test]
fn criterion_06_transfer_consistency() {
    let t = Instant::now();
    // doubled doubling map: cofinite sensitivity transfers consistently
    let sys = System::new(
        SpaceSpec::UnitInterval,
        Schedule::cycle(vec![
            ("double_a".into(), gallery::doubling()),
            ("double_b".into(), gallery::doubling()),
        ])
        .unwrap(),
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
    // both hit sets contain [6, 30] on every cell
    let run = sensitivity_run(&sys, &params.delta, &params.scale, 30).unwrap();
    let (k, g) = compile_period_map(&sys.schedule).unwrap();
    let reduced = System::new(sys.space.clone(), Schedule::constant("g", g)).unwrap();
    let reduced_run = sensitivity_run(&reduced, &params.delta, &params.scale, 30).unwrap();
    assert!(k >= 1);
    for hits in run.per_cell.iter().chain(reduced_run.per_cell.iter()) {
        for n in 6..=30u64 {
            assert!(hits.contains(n), "hit sets must contain [6,30]");
        }
    }
    // shifted-sequence comparison records the converse as not applicable
    // because the clamped doubling map is not feeble open
    let fix = fixture("nonsurjective-transitive");
    let case = shift_compare(&fix.system, 2, PropertySpec::Sensitive, &params).unwrap();
    let feeble = case
        .hypotheses
        .iter()
        .find(|h| h.name == "feeble_open")
        .unwrap();
    assert!(!feeble.holds);
    assert!(feeble.detail.contains("clamp2x"));
    assert!(case
        .notes
        .iter()
        .any(|n| n.contains("converse") && n.contains("feeble_open")));
    assert_ne!(case.consistency, Consistency::Violation);
    pass("criterion 6: reduction-theorem consistency harness", t);
}

#[test]
fn criterion_07_converse_failure_pin() {
    let t = Instant::now();
    let fix = fixture("k-transfer-counterexample");
    let params = CheckParams {
        horizon: 20,
        ..CheckParams::default()
    };
    let case = transfer_compare(&fix.system, PropertySpec::Transitive, &params).unwrap();
    assert_eq!(case.nds_report.verdict, Verdict::Holds);
    assert_eq!(case.reduced_report.verdict, Verdict::Fails);
    assert_eq!(case.consistency, Consistency::NotApplicable);
    // the reduced system misses the concrete pair ({0}, {1})
    let (k, g) = compile_period_map(&fix.system.schedule).unwrap();
    assert_eq!(k, 2);
    let reduced = System::new(fix.system.space.clone(), Schedule::constant("g", g)).unwrap();
    let u: RegionSet = RegionSet::Indices([0usize].into_iter().collect());
    let v: RegionSet = RegionSet::Indices([1usize].into_iter().collect());
    let hits = hitting_set(&reduced, &u, &v, 20).unwrap();
    assert!(hits.is_empty(), "h^2 never moves 0 to 1");
    let nds_hits = hitting_set(&fix.system, &u, &v, 20).unwrap();
    assert!(!nds_hits.is_empty());
    pass("criterion 7: periodic-reduction converse failure", t);
}

#[test]
fn criterion_08a_window_cocycle_identity() {
    let t = Instant::now();
    for name in gallery::FIXTURE_NAMES {
        let fix = fixture(name);
        let schedule = &fix.system.schedule;
        let mut sampler = Sampler::new(0xc0c1c1e);
        let triples: Vec<(u64, u64, u64)> = (0..6)
            .map(|_| (1 + sampler.below(6), sampler.below(5), sampler.below(5)))
            .collect();
        let mut compiled = Vec::new();
        for &(i, m, n) in &triples {
            compiled.push((
                compile_window(schedule, i, m + n, 100_000).unwrap(),
                compile_window(schedule, i, m, 100_000).unwrap(),
                compile_window(schedule, i + m, n, 100_000).unwrap(),
            ));
        }
        for _ in 0..1000 {
            let x = sample_point(&fix.system.space, &mut sampler);
            for (whole, first, second) in &compiled {
                let a = whole.eval(&x).unwrap();
                let b = second.eval(&first.eval(&x).unwrap()).unwrap();
                assert_eq!(a, b, "cocycle identity on {name} at {x}");
            }
        }
    }
    pass(
        "criterion 8a: window cocycle identity (1000 points/fixture)",
        t,
    );
}

#[test]
fn criterion_08b_classifier_algebra() {
    let t = Instant::now();
    let mut sampler = Sampler::new(0xa15e);
    for round in 0..500 {
        let horizon = 40 + sampler.below(160);
        let tail_start = 1 + sampler.below(horizon / 4);
        let mut members: Vec<u64> = (tail_start..=horizon).collect();
        for _ in 0..sampler.below(horizon / 4) {
            members.push(1 + sampler.below(tail_start));
        }
        let sample = IndexSample::new(horizon, members).unwrap();
        let syn = classify(&sample, &ClassKind::Syndetic).unwrap();
        assert_eq!(syn.verdict, Verdict::Holds, "round {round}");
        assert!(syn.max_gap.unwrap() <= tail_start, "round {round}");
        let thick = classify(&sample, &ClassKind::Thick).unwrap();
        assert_eq!(thick.verdict, Verdict::Holds, "round {round}");
        assert!(thick.longest_run.unwrap() >= horizon - tail_start);
        let cof = classify(&sample, &ClassKind::Cofinite).unwrap();
        assert_eq!(cof.verdict, Verdict::Holds, "round {round}");
        assert!(cof.tail_start.unwrap() <= tail_start);
        for k in [1u64, 2, 4, 8] {
            if k <= horizon - tail_start {
                let ts = classify(&sample, &ClassKind::ThicklySyndetic(k)).unwrap();
                assert_eq!(ts.verdict, Verdict::Holds, "round {round}, k={k}");
            }
        }
        let density = classify(&sample, &ClassKind::UpperDensity(rat(1, 2))).unwrap();
        assert_eq!(density.verdict, Verdict::Holds, "round {round}");
    }
    pass("criterion 8b: classifier algebra on 500 planted tails", t);
}

#[test]
fn criterion_08c_isometry_vacuity() {
    let t = Instant::now();
    // rotations preserve arc diameters exactly: no hit at any delta at or
    // above the cell diameter
    let rot = fixture("circle-alternating");
    for gen in rot.system.schedule.generators() {
        assert!(gen.1.analyze().unwrap().isometry);
    }
    for delta in [rat(1, 8), rat(1, 4), rat(1, 2)] {
        let run = sensitivity_run(&rot.system, &delta, &rat(1, 8), 100).unwrap();
        assert!(
            run.per_cell.iter().all(IndexSample::is_empty),
            "rotation hit sets must be empty at delta {delta}"
        );
    }
    // the shift doubles the metric at most once per step; with cells of
    // diameter 1/4 and deltas at or above 1/2 the alternating schedule
    // never spreads a cell past delta
    let alt = fixture("weak-but-not");
    for delta in [rat(1, 2), rat(3, 4), rat(1, 1)] {
        let run = sensitivity_run(&alt.system, &delta, &rat(1, 2), 100).unwrap();
        assert!(
            run.per_cell.iter().all(IndexSample::is_empty),
            "alternating shift hit sets must be empty at delta {delta}"
        );
    }
    pass("criterion 8c: isometry vacuity at three deltas", t);
}

#[test]
fn criterion_08d_periodic_subsampling_identity() {
    let t = Instant::now();
    let horizon = 60u64;
    for name in gallery::FIXTURE_NAMES {
        let fix = fixture(name);
        let Some(k) = fix.system.schedule.detect_period(16) else {
            continue;
        };
        let (k2, g) = compile_period_map(&fix.system.schedule).unwrap();
        assert_eq!(k, k2);
        let reduced = System::new(fix.system.space.clone(), Schedule::constant("g", g)).unwrap();
        let cover = nds::cover::build_cover(&fix.system.space, &rat(1, 2)).unwrap();
        let delta = &fix.defaults.delta;
        for cell in cover.cells.iter().take(4) {
            let full = sensitivity_hits(&fix.system, &cell.region, delta, horizon).unwrap();
            let sub = sensitivity_hits(&reduced, &cell.region, delta, horizon / k).unwrap();
            let expected: Vec<u64> = (1..=horizon / k)
                .filter(|&n| full.contains(k * n))
                .collect();
            assert_eq!(
                sub.members(),
                expected.as_slice(),
                "subsampling identity on {name}, cell {}",
                cell.id
            );
        }
    }
    pass(
        "criterion 8d: N_g(U,d) = {n : kn in N_f(U,d)} on periodic fixtures",
        t,
    );
}

#[test]
fn criterion_08e_multi_one_equals_sensitive() {
    let t = Instant::now();
    for name in gallery::FIXTURE_NAMES {
        let fix = fixture(name);
        let run = sensitivity_run(
            &fix.system,
            &fix.defaults.delta,
            &fix.defaults.scale,
            fix.defaults.horizon.min(60),
        )
        .unwrap();
        let base = sensitivity_variant_report(
            &fix.system,
            &run,
            SensitivityVariant::Base,
            &fix.defaults.theta,
        );
        let multi1 = sensitivity_variant_report(
            &fix.system,
            &run,
            SensitivityVariant::Multi(1),
            &fix.defaults.theta,
        );
        assert_eq!(base.verdict, multi1.verdict, "multi(1) on {name}");
    }
    pass(
        "criterion 8e: multi(1) coincides with sensitive on all fixtures",
        t,
    );
}

#[test]
fn criterion_09_kato_and_implication_chain() {
    let t = Instant::now();
    let sys = System::new(
        SpaceSpec::UnitInterval,
        Schedule::constant("double", gallery::doubling()),
    )
    .unwrap();
    let params = CheckParams {
        delta: rat(1, 4),
        epsilon: rat(1, 16),
        scale: rat(1, 8),
        horizon: 30,
        ..CheckParams::default()
    };
    let kato = check_kato(&sys, &params).unwrap();
    assert_eq!(kato.verdict, Verdict::Holds);
    // replay the transitivity chain on one shared run: mixing implies
    // weakly mixing implies transitive, with no ordering violation
    let run = transitivity_run(
        &sys,
        &CheckParams {
            horizon: 40,
            ..params.clone()
        },
    )
    .unwrap();
    let mixing = transitivity_variant_report(&sys, &run, TransitivityVariant::Mixing);
    let weakly = transitivity_variant_report(&sys, &run, TransitivityVariant::WeaklyMixing);
    let transitive = transitivity_variant_report(&sys, &run, TransitivityVariant::Transitive);
    assert_eq!(mixing.verdict, Verdict::Holds);
    assert!(!implication_violated(&mixing, &weakly));
    assert!(!implication_violated(&weakly, &transitive));
    assert_eq!(weakly.verdict, Verdict::Holds);
    assert_eq!(transitive.verdict, Verdict::Holds);
    pass("criterion 9: Kato evidence and the mixing chain", t);
}

#[test]
fn criterion_10_weak_vs_strong_separation() {
    let t = Instant::now();
    let fix = fixture("weak-but-not");
    let weak = run_property(&fix.system, PropertySpec::WeakSensitive, &fix.defaults).unwrap();
    assert_eq!(weak.verdict, Verdict::Holds);
    assert!(weak
        .witnesses
        .iter()
        .any(|w| matches!(w, Witness::Word { .. })));
    let strong = run_property(&fix.system, PropertySpec::Sensitive, &fix.defaults).unwrap();
    assert_eq!(strong.verdict, Verdict::Fails);
    pass("criterion 10: weakly sensitive but not sensitive", t);
}
