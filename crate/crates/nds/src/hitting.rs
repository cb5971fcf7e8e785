//! Hitting sets N(U, V), sensitivity hit sets N(U, δ), and finite-horizon
//! classifiers for syndetic / thick / cofinite / thickly syndetic /
//! upper-density structure.
//!
//! Times range over n >= 1. Classifier Fails verdicts for the asymptotic
//! classes are trend-based: the parameter is compared at the full horizon
//! and at the quarter horizon, and growth is reported as evidence, never as
//! proof. Holds verdicts carry the finite-horizon witness parameter.

use num_traits::Zero;

use crate::error::{NdsError, Result};
use crate::region::RegionSet;
use crate::report::Verdict;
use crate::scalar::{fmt_rat, Rat};
use crate::window::System;

/// A subset of {1, ..., T} with its horizon.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IndexSample {
    horizon: u64,
    members: Vec<u64>,
}

impl IndexSample {
    pub fn new(horizon: u64, mut members: Vec<u64>) -> Result<IndexSample> {
        members.sort_unstable();
        members.dedup();
        if members.iter().any(|&n| n < 1 || n > horizon) {
            return Err(NdsError::BadParameter(format!(
                "sample members must lie in 1..={horizon}"
            )));
        }
        Ok(IndexSample { horizon, members })
    }

    pub fn from_pred(horizon: u64, mut pred: impl FnMut(u64) -> bool) -> IndexSample {
        IndexSample {
            horizon,
            members: (1..=horizon).filter(|&n| pred(n)).collect(),
        }
    }

    pub fn horizon(&self) -> u64 {
        self.horizon
    }

    pub fn members(&self) -> &[u64] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, n: u64) -> bool {
        self.members.binary_search(&n).is_ok()
    }

    /// Restriction to a smaller horizon.
    pub fn truncated(&self, horizon: u64) -> IndexSample {
        IndexSample {
            horizon,
            members: self
                .members
                .iter()
                .copied()
                .take_while(|&n| n <= horizon)
                .collect(),
        }
    }

    /// Largest gap: leading gap from 0, internal gaps, trailing gap to T+1.
    pub fn max_gap(&self) -> u64 {
        if self.members.is_empty() {
            return self.horizon + 1;
        }
        let mut best = self.members[0];
        for w in self.members.windows(2) {
            best = best.max(w[1] - w[0]);
        }
        best.max(self.horizon + 1 - self.members.last().unwrap())
    }

    /// Length of the longest run of consecutive members.
    pub fn longest_run(&self) -> u64 {
        let mut best = 0u64;
        let mut cur = 0u64;
        let mut prev: Option<u64> = None;
        for &n in &self.members {
            cur = match prev {
                Some(p) if n == p + 1 => cur + 1,
                _ => 1,
            };
            best = best.max(cur);
            prev = Some(n);
        }
        best
    }

    /// Least N with [N, T] contained in the sample, if T is a member.
    pub fn tail_start(&self) -> Option<u64> {
        if *self.members.last()? != self.horizon {
            return None;
        }
        let mut start = self.horizon;
        for w in self.members.windows(2).rev() {
            if w[1] == w[0] + 1 {
                start = w[0];
            } else {
                break;
            }
        }
        Some(start)
    }

    /// Largest non-member in [1, T]; 0 when the sample is all of [1, T].
    pub fn largest_hole(&self) -> u64 {
        let mut expected = self.horizon;
        for &n in self.members.iter().rev() {
            if n == expected {
                expected -= 1;
            } else {
                break;
            }
        }
        expected
    }

    /// Exact density |members| / T.
    pub fn density(&self) -> Rat {
        Rat::new(
            (self.members.len() as i64).into(),
            (self.horizon as i64).into(),
        )
    }

    /// Starting points of runs of length k inside the sample, at horizon
    /// T - k + 1.
    pub fn run_starts(&self, k: u64) -> Result<IndexSample> {
        if k < 1 {
            return Err(NdsError::BadParameter("run length must be >= 1".into()));
        }
        if self.horizon < k {
            return Err(NdsError::EmptyHorizon);
        }
        let horizon = self.horizon - k + 1;
        let mut starts = Vec::new();
        let mut run_start: Option<u64> = None;
        let mut prev: Option<u64> = None;
        for &n in &self.members {
            match prev {
                Some(p) if n == p + 1 => {}
                _ => run_start = Some(n),
            }
            prev = Some(n);
            let rs = run_start.unwrap();
            if n + 1 >= k && rs <= n + 1 - k {
                let s = n + 1 - k;
                if s <= horizon {
                    starts.push(s);
                }
            }
        }
        IndexSample::new(horizon, starts)
    }
}

/// The set classes a sample can be tested against.
#[derive(Debug, Clone, PartialEq)]
pub enum ClassKind {
    Syndetic,
    Thick,
    Cofinite,
    ThicklySyndetic(u64),
    UpperDensity(Rat),
}

impl ClassKind {
    pub fn name(&self) -> String {
        match self {
            ClassKind::Syndetic => "syndetic".into(),
            ClassKind::Thick => "thick".into(),
            ClassKind::Cofinite => "cofinite".into(),
            ClassKind::ThicklySyndetic(k) => format!("thickly_syndetic({k})"),
            ClassKind::UpperDensity(t) => format!("upper_density({})", fmt_rat(t)),
        }
    }
}

/// Growth of a parameter between the quarter horizon and the full horizon.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Trend {
    pub what: &'static str,
    pub sub_horizon: u64,
    pub sub_value: u64,
    pub full_horizon: u64,
    pub full_value: u64,
}

/// Classifier outcome with the parameters that justify it.
#[derive(Debug, Clone)]
pub struct ClassVerdict {
    pub kind: ClassKind,
    pub verdict: Verdict,
    pub max_gap: Option<u64>,
    pub longest_run: Option<u64>,
    pub tail_start: Option<u64>,
    pub density: Option<Rat>,
    pub trend: Option<Trend>,
    pub detail: String,
}

/// Classify a finite-horizon sample against a set class.
pub fn classify(sample: &IndexSample, kind: &ClassKind) -> Result<ClassVerdict> {
    let horizon = sample.horizon();
    if horizon == 0 {
        return Err(NdsError::EmptyHorizon);
    }
    let sub_horizon = (horizon / 4).max(1);
    let sub = sample.truncated(sub_horizon);
    let mut out = ClassVerdict {
        kind: kind.clone(),
        verdict: Verdict::Inconclusive,
        max_gap: None,
        longest_run: None,
        tail_start: None,
        density: None,
        trend: None,
        detail: String::new(),
    };
    match kind {
        ClassKind::Syndetic => {
            let gap = sample.max_gap();
            out.max_gap = Some(gap);
            if sample.is_empty() {
                out.verdict = Verdict::Fails;
                out.detail = format!("no members up to T={horizon}");
                out.trend = Some(Trend {
                    what: "max gap",
                    sub_horizon,
                    sub_value: sub.max_gap(),
                    full_horizon: horizon,
                    full_value: gap,
                });
            } else if !sub.is_empty() && gap > sub.max_gap() {
                out.verdict = Verdict::Fails;
                out.trend = Some(Trend {
                    what: "max gap",
                    sub_horizon,
                    sub_value: sub.max_gap(),
                    full_horizon: horizon,
                    full_value: gap,
                });
                out.detail = "gaps keep growing".into();
            } else if sample.len() as u64 >= horizon.div_ceil(2 * gap) {
                out.verdict = Verdict::Holds;
                out.detail = format!("bounded gaps at scale {gap}");
            } else {
                out.detail = "sample too sparse to witness bounded gaps".into();
            }
        }
        ClassKind::Thick => {
            let run = sample.longest_run();
            let sub_run = sub.longest_run();
            out.longest_run = Some(run);
            if sample.is_empty() {
                out.verdict = Verdict::Fails;
                out.detail = format!("no members up to T={horizon}");
            } else if run > sub_run {
                out.verdict = Verdict::Holds;
                out.detail = "runs keep growing".into();
                out.trend = Some(Trend {
                    what: "longest run",
                    sub_horizon,
                    sub_value: sub_run,
                    full_horizon: horizon,
                    full_value: run,
                });
            } else {
                out.verdict = Verdict::Fails;
                out.detail = "longest run stagnant between horizons".into();
                out.trend = Some(Trend {
                    what: "longest run",
                    sub_horizon,
                    sub_value: sub_run,
                    full_horizon: horizon,
                    full_value: run,
                });
            }
        }
        ClassKind::Cofinite => {
            let hole = sample.largest_hole();
            let sub_hole = sub.largest_hole();
            out.tail_start = sample.tail_start();
            if sample.is_empty() {
                out.verdict = Verdict::Fails;
                out.detail = format!("no members up to T={horizon}");
            } else if hole > sub_hole {
                out.verdict = Verdict::Fails;
                out.trend = Some(Trend {
                    what: "largest hole",
                    sub_horizon,
                    sub_value: sub_hole,
                    full_horizon: horizon,
                    full_value: hole,
                });
                out.detail = "holes keep appearing".into();
            } else if let Some(n) = sample.tail_start() {
                if n <= horizon / 2 {
                    out.verdict = Verdict::Holds;
                    out.detail = format!("members cover [{n}, {horizon}]");
                } else {
                    out.detail = "tail too short to witness cofiniteness".into();
                }
            } else {
                out.detail = "horizon endpoint missing".into();
            }
        }
        ClassKind::ThicklySyndetic(k) => {
            if *k < 1 {
                return Err(NdsError::BadParameter("run length must be >= 1".into()));
            }
            let starts = sample.run_starts(*k)?;
            let inner = classify(&starts, &ClassKind::Syndetic)?;
            out.verdict = inner.verdict;
            out.max_gap = inner.max_gap;
            out.longest_run = Some(sample.longest_run());
            out.trend = inner.trend;
            out.detail = format!("{k}-run starts: {}", inner.detail);
        }
        ClassKind::UpperDensity(theta) => {
            let d = sample.density();
            out.density = Some(d.clone());
            if d >= *theta {
                out.verdict = Verdict::Holds;
                out.detail = format!("density {}", fmt_rat(&d));
            } else {
                out.verdict = Verdict::Fails;
                out.detail = format!("density {} below threshold {}", fmt_rat(&d), fmt_rat(theta));
            }
        }
    }
    Ok(out)
}

/// N(U, V): times n in [1, T] at which the window image of U meets V.
pub fn hitting_set(
    sys: &System,
    u: &RegionSet,
    v: &RegionSet,
    horizon: u64,
) -> Result<IndexSample> {
    if u.is_empty() || v.is_empty() {
        return Err(NdsError::BadParameter(
            "hitting set requires nonempty regions".into(),
        ));
    }
    let images = sys.window_images(u, horizon)?;
    let mut members = Vec::new();
    for (n, img) in images.iter().enumerate().skip(1) {
        if img.intersects(v)? {
            members.push(n as u64);
        }
    }
    IndexSample::new(horizon, members)
}

/// N(U, δ): times n in [1, T] at which the window image of U has diameter
/// strictly greater than δ.
pub fn sensitivity_hits(
    sys: &System,
    u: &RegionSet,
    delta: &Rat,
    horizon: u64,
) -> Result<IndexSample> {
    if delta < &Rat::zero() {
        return Err(NdsError::BadParameter(
            "sensitivity constant must be nonnegative".into(),
        ));
    }
    let images = sys.window_images(u, horizon)?;
    let mut members = Vec::new();
    for (n, img) in images.iter().enumerate().skip(1) {
        if img.diam(&sys.space)?.cmp_rat(delta) == std::cmp::Ordering::Greater {
            members.push(n as u64);
        }
    }
    IndexSample::new(horizon, members)
}
