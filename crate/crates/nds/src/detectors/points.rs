//! Pointwise checks: recurrence, almost periodicity, exact k-periodicity,
//! and equicontinuity at a point.

use super::evidence_report;
use crate::cover::region_probes;
use crate::error::{NdsError, Result};
use crate::hitting::{classify, ClassKind, IndexSample};
use crate::point::Point;
use crate::report::{Mode, PropertyReport, Verdict, Witness};
use crate::scalar::{fmt_rat, Rat, Scalar};
use crate::window::System;
use num_traits::Signed;

/// Times n <= T with d(f_1^n(x), x) < eps.
pub fn return_times(sys: &System, x: &Point, eps: &Rat, horizon: u64) -> Result<IndexSample> {
    if !eps.is_positive() {
        return Err(NdsError::BadParameter("epsilon must be positive".into()));
    }
    let orbit = sys.orbit(x, horizon)?;
    let mut members = Vec::new();
    for (n, p) in orbit.iter().enumerate().skip(1) {
        if sys.space.distance(p, x)?.cmp_rat(eps) == std::cmp::Ordering::Less {
            members.push(n as u64);
        }
    }
    IndexSample::new(horizon, members)
}

pub fn recurrent_point(sys: &System, x: &Point, eps: &Rat, horizon: u64) -> Result<PropertyReport> {
    let returns = return_times(sys, x, eps, horizon)?;
    let mut report = evidence_report(
        sys,
        "recurrent",
        &[
            ("point", x.to_string()),
            ("epsilon", fmt_rat(eps)),
            ("T", horizon.to_string()),
        ],
    );
    report
        .evidence
        .push(super::summarize_sample("returns", &returns));
    report.verdict = if returns.is_empty() {
        report.witnesses.push(Witness::Note(format!(
            "no return within {} of {x} up to T={horizon}",
            fmt_rat(eps)
        )));
        Verdict::Fails
    } else {
        Verdict::Holds
    };
    Ok(report)
}

/// Almost periodicity: the eps-return set must look syndetic.
pub fn almost_periodic(sys: &System, x: &Point, eps: &Rat, horizon: u64) -> Result<PropertyReport> {
    let returns = return_times(sys, x, eps, horizon)?;
    let class = classify(&returns, &ClassKind::Syndetic)?;
    let mut report = evidence_report(
        sys,
        "almost_periodic",
        &[
            ("point", x.to_string()),
            ("epsilon", fmt_rat(eps)),
            ("T", horizon.to_string()),
        ],
    );
    report
        .evidence
        .push(super::summarize_sample("returns", &returns));
    report.evidence.push(format!("syndetic: {}", class.detail));
    report.verdict = class.verdict;
    if let Some(t) = class.trend {
        report.witnesses.push(Witness::Trend {
            what: t.what,
            sub_horizon: t.sub_horizon,
            sub_value: t.sub_value,
            full_horizon: t.full_horizon,
            full_value: t.full_value,
        });
    }
    if let Some(g) = class.max_gap {
        report = report.param("max_gap", g);
    }
    Ok(report)
}

/// Exact k-periodicity of a point: f_1^{kn}(x) = x for all kn <= T.
///
/// With `all_window_starts` set, the stronger reading f_i^{kn}(x) = x is
/// checked for every start i with i + kn - 1 <= T as well.
pub fn periodic_point(
    sys: &System,
    x: &Point,
    k: u64,
    horizon: u64,
    all_window_starts: bool,
) -> Result<PropertyReport> {
    if k < 1 {
        return Err(NdsError::BadParameter("period must be >= 1".into()));
    }
    let mut report = evidence_report(
        sys,
        "periodic",
        &[
            ("point", x.to_string()),
            ("k", k.to_string()),
            ("T", horizon.to_string()),
        ],
    );
    let orbit = sys.orbit(x, horizon)?;
    let mut checked = 0u64;
    for n in 1..=(horizon / k) {
        checked += 1;
        if &orbit[(k * n) as usize] != x {
            report.verdict = Verdict::Fails;
            report.mode = Mode::Exact;
            report.witnesses.push(Witness::Note(format!(
                "f_1^{}({x}) = {} differs from {x}",
                k * n,
                orbit[(k * n) as usize]
            )));
            return Ok(report);
        }
    }
    if all_window_starts {
        for start in 2..=horizon {
            let mut cur = x.clone();
            let mut steps = 0u64;
            while start + steps <= horizon {
                cur = sys.schedule.map_at(start + steps).eval(&cur)?;
                steps += 1;
                if steps.is_multiple_of(k) {
                    checked += 1;
                    if &cur != x {
                        report.verdict = Verdict::Fails;
                        report.mode = Mode::Exact;
                        report.witnesses.push(Witness::Note(format!(
                            "f_{start}^{steps}({x}) = {cur} differs from {x}"
                        )));
                        return Ok(report);
                    }
                }
            }
        }
    }
    report
        .evidence
        .push(format!("{checked} window multiples verified exactly"));
    report.verdict = Verdict::Holds;
    Ok(report)
}

/// Equicontinuity at x: for each eps in the list, search the delta grid for
/// a radius whose ball probes stay within eps under every window n <= T
/// (n = 0 included).
pub fn equicontinuity_at(
    sys: &System,
    x: &Point,
    eps_list: &[Rat],
    delta_grid: &[Rat],
    horizon: u64,
) -> Result<PropertyReport> {
    if eps_list.is_empty() || delta_grid.is_empty() {
        return Err(NdsError::BadParameter(
            "equicontinuity needs nonempty eps list and delta grid".into(),
        ));
    }
    let mut report = evidence_report(
        sys,
        "equicontinuous_at",
        &[("point", x.to_string()), ("T", horizon.to_string())],
    );
    report.mode = Mode::Sampled;
    let x_orbit = sys.orbit(x, horizon)?;
    let mut all_ok = true;
    for eps in eps_list {
        let mut winner: Option<Rat> = None;
        let mut last_break: Option<Witness> = None;
        for delta in delta_grid {
            let ball = sys.space.ball(x, delta)?;
            let probes = region_probes(&sys.space, &ball);
            let mut ok = true;
            'probe: for y in &probes {
                let y_orbit = sys.orbit(y, horizon)?;
                for n in 0..=horizon as usize {
                    let d = sys.space.distance(&x_orbit[n], &y_orbit[n])?;
                    if d.cmp_rat(eps) != std::cmp::Ordering::Less {
                        ok = false;
                        last_break = Some(Witness::EquicontinuityBreak {
                            y: y.clone(),
                            time: n as u64,
                            distance: d,
                        });
                        break 'probe;
                    }
                }
            }
            if ok {
                winner = Some(delta.clone());
                break;
            }
        }
        match winner {
            Some(delta) => report.evidence.push(format!(
                "eps {}: delta {} keeps {} probes within bounds",
                fmt_rat(eps),
                fmt_rat(&delta),
                region_probes(&sys.space, &sys.space.ball(x, &delta)?).len()
            )),
            None => {
                all_ok = false;
                report
                    .evidence
                    .push(format!("eps {}: no grid delta worked", fmt_rat(eps)));
                if let Some(w) = last_break.take() {
                    report.witnesses.push(w);
                }
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

/// The separation curve max over probe pairs of d at each n, used by the
/// command line CSV output.
pub fn separation_curve(
    sys: &System,
    region: &crate::region::RegionSet,
    horizon: u64,
) -> Result<Vec<(u64, Scalar)>> {
    let images = sys.window_images(region, horizon)?;
    let mut out = Vec::with_capacity(images.len());
    for (n, img) in images.iter().enumerate() {
        out.push((n as u64, img.diam(&sys.space)?));
    }
    Ok(out)
}
