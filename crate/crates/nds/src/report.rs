//! Three-valued verdicts with witnesses and provenance.

use std::fmt;

use crate::point::Point;
use crate::region::RegionSet;
use crate::scalar::Scalar;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Holds,
    Fails,
    Inconclusive,
}

impl Verdict {
    /// Conjunction with Inconclusive as the middle value.
    pub fn join(self, other: Verdict) -> Verdict {
        use Verdict::*;
        match (self, other) {
            (Fails, _) | (_, Fails) => Fails,
            (Holds, Holds) => Holds,
            _ => Inconclusive,
        }
    }

    pub fn exit_code(self) -> i32 {
        match self {
            Verdict::Holds => 0,
            Verdict::Fails => 2,
            Verdict::Inconclusive => 3,
        }
    }
}

/// How the verdict was established.
///
/// `Exact` verdicts are exhaustive over the whole space (finite-space
/// searches, classifier algebra). `Evidence` verdicts instantiate the
/// quantifiers over a finite cover and horizon but every computation along
/// the way is exact. `Sampled` verdicts additionally rely on sampled points.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Exact,
    Evidence,
    Sampled,
}

impl Mode {
    pub fn weakest(self, other: Mode) -> Mode {
        use Mode::*;
        match (self, other) {
            (Sampled, _) | (_, Sampled) => Sampled,
            (Evidence, _) | (_, Evidence) => Evidence,
            _ => Exact,
        }
    }

    pub fn is_exactish(self) -> bool {
        !matches!(self, Mode::Sampled)
    }
}

/// The composite display name used in reports and the command line.
pub fn verdict_label(verdict: Verdict, mode: Mode) -> &'static str {
    match (verdict, mode) {
        (Verdict::Holds, Mode::Exact) => "Holds",
        (Verdict::Holds, _) => "HoldsEvidence",
        (Verdict::Fails, Mode::Exact) => "Fails",
        (Verdict::Fails, _) => "FailsWitness",
        (Verdict::Inconclusive, _) => "Inconclusive",
    }
}

/// Concrete, replayable facts attached to a report.
#[derive(Debug, Clone)]
pub enum Witness {
    /// A cover cell whose sensitivity hit set is empty at the horizon.
    EmptyHitSet {
        cell_id: String,
        cell: RegionSet,
    },
    /// An ordered cell pair never hit within the horizon.
    CellPairNoHit {
        u_id: String,
        v_id: String,
        u: RegionSet,
        v: RegionSet,
    },
    /// An orbit that misses a cell.
    OrbitMiss {
        start: Point,
        cell_id: String,
        cell: RegionSet,
    },
    /// A pair brought close and pushed apart (scrambling evidence).
    ScrambledPair {
        x: Point,
        y: Point,
        far_time: u64,
        far: Scalar,
        close_time: u64,
        close: Scalar,
    },
    /// A pair whose orbit distances never enter the required range.
    RigidPair {
        x: Point,
        y: Point,
        min_tail: Scalar,
        max_overall: Scalar,
    },
    /// Two cells whose candidate points never approach within epsilon.
    NoApproach {
        u_id: String,
        v_id: String,
        best: Scalar,
    },
    /// Growth of a classifier parameter between two horizons.
    Trend {
        what: &'static str,
        sub_horizon: u64,
        sub_value: u64,
        full_horizon: u64,
        full_value: u64,
    },
    /// A proper nonempty region closed under every generator.
    InvariantRegion {
        region: RegionSet,
    },
    /// A composition word over the generators, with the schedule indices used.
    Word {
        letters: Vec<String>,
        indices: Vec<u64>,
    },
    /// A ball point separated beyond epsilon at some time.
    EquicontinuityBreak {
        y: Point,
        time: u64,
        distance: Scalar,
    },
    Note(String),
}

impl fmt::Display for Witness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Witness::EmptyHitSet { cell_id, .. } => {
                write!(f, "cell {cell_id} has an empty hit set")
            }
            Witness::CellPairNoHit { u_id, v_id, .. } => {
                write!(f, "pair ({u_id}, {v_id}) is never hit")
            }
            Witness::OrbitMiss { start, cell_id, .. } => {
                write!(f, "orbit of {start} misses cell {cell_id}")
            }
            Witness::ScrambledPair {
                x,
                y,
                far_time,
                far,
                close_time,
                close,
            } => write!(
                f,
                "pair ({x}, {y}) separated to {far} at n={far_time}, approached to {close} at n={close_time}"
            ),
            Witness::RigidPair {
                x,
                y,
                min_tail,
                max_overall,
            } => write!(
                f,
                "pair ({x}, {y}) stays within [{min_tail}, {max_overall}]"
            ),
            Witness::NoApproach { u_id, v_id, best } => {
                write!(f, "cells {u_id}, {v_id} never approach (best {best})")
            }
            Witness::Trend {
                what,
                sub_horizon,
                sub_value,
                full_horizon,
                full_value,
            } => write!(
                f,
                "{what} grows: {sub_value} at T={sub_horizon} vs {full_value} at T={full_horizon}"
            ),
            Witness::InvariantRegion { region } => {
                write!(f, "proper invariant region {region}")
            }
            Witness::Word { letters, indices } => {
                write!(f, "word {} at indices {:?}", letters.join("*"), indices)
            }
            Witness::EquicontinuityBreak { y, time, distance } => {
                write!(f, "point {y} separates to {distance} at n={time}")
            }
            Witness::Note(s) => write!(f, "{s}"),
        }
    }
}

/// Outcome of one property check: verdict, parameters, witnesses, and
/// provenance sufficient to replay the run.
#[derive(Debug, Clone)]
pub struct PropertyReport {
    pub property: String,
    pub params: Vec<(String, String)>,
    pub verdict: Verdict,
    pub mode: Mode,
    pub witnesses: Vec<Witness>,
    /// Quantifier instantiations checked, one line each.
    pub evidence: Vec<String>,
    pub schedule_hash: String,
}

impl PropertyReport {
    pub fn new(property: impl Into<String>, schedule_hash: String) -> PropertyReport {
        PropertyReport {
            property: property.into(),
            params: Vec::new(),
            verdict: Verdict::Inconclusive,
            mode: Mode::Evidence,
            witnesses: Vec::new(),
            evidence: Vec::new(),
            schedule_hash,
        }
    }

    pub fn param(mut self, key: &str, value: impl fmt::Display) -> PropertyReport {
        self.params.push((key.to_string(), value.to_string()));
        self
    }

    pub fn label(&self) -> &'static str {
        verdict_label(self.verdict, self.mode)
    }
}

impl fmt::Display for PropertyReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.property, self.label())?;
        if !self.params.is_empty() {
            let ps: Vec<String> = self
                .params
                .iter()
                .map(|(k, v)| format!("{k}={v}"))
                .collect();
            write!(f, " [{}]", ps.join(", "))?;
        }
        for w in &self.witnesses {
            write!(f, "\n  witness: {w}")?;
        }
        Ok(())
    }
}

/// FNV-1a 64-bit content hash, hex encoded. Non-cryptographic; used to tag
/// reports with the schedule and document they came from.
pub fn fnv1a64(bytes: &[u8]) -> String {
    let mut h: u64 = 0xcbf29ce484222325;
    for b in bytes {
        h ^= *b as u64;
        h = h.wrapping_mul(0x100000001b3);
    }
    format!("{h:016x}")
}
