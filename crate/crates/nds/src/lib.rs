//! Exact desk-scale experiments with non-autonomous discrete dynamical
//! systems: a sequence of self-maps `f_1, f_2, ...` applied in order, with
//! the n-step action `f_1^n = f_n ∘ ... ∘ f_1`.
//!
//! The crate represents four space kinds exactly — the unit interval, the
//! circle with a fixed irrational rotation angle, finite state sets, and the
//! two-sided binary shift — and computes orbits, window compositions,
//! hitting sets `N(U, V)`, sensitivity hit sets `N(U, δ)`, and
//! evidence-based verdicts for sensitivity, transitivity, minimality and
//! chaos notions over finite covers and horizons. Every verdict is either
//! exact, or scale-stamped evidence whose witnesses replay from primitives.
//!
//! Start with the runnable examples (`cargo run --example gallery_tour`) or
//! the `gallery` module, which packages the crate's reference systems with
//! pinned expected behavior.

pub mod cover;
pub mod detectors;
pub mod document;
pub mod error;
pub mod gallery;
pub mod hitting;
pub mod interval;
pub mod maps;
pub mod point;
pub mod reduce;
pub mod region;
pub mod report;
pub mod sampling;
pub mod scalar;
pub mod schedule;
pub mod seq;
pub mod space;
pub mod window;

pub use error::{NdsError, Result};
pub use maps::{Affine, FiniteMap, MapSpec, PLMap};
pub use point::{Point, SpaceKind};
pub use region::RegionSet;
pub use report::{Mode, PropertyReport, Verdict};
pub use scalar::{parse_rat, Rat, Scalar};
pub use schedule::{Schedule, ScheduleRule};
pub use seq::SeqPoint;
pub use space::SpaceSpec;
pub use window::System;
