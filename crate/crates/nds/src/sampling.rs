//! Deterministic sampling used by scan-style detectors and the test suites.
//!
//! Verdicts must be byte-identical across runs, so the crate carries its own
//! tiny splitmix64 generator instead of an OS-seeded RNG.

use crate::scalar::{rat_int, Rat};
use num_bigint::BigInt;

#[derive(Debug, Clone)]
pub struct Sampler {
    state: u64,
}

impl Sampler {
    pub fn new(seed: u64) -> Self {
        Sampler { state: seed }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9e3779b97f4a7c15);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
        z ^ (z >> 31)
    }

    /// Uniform in 0..bound (bound > 0).
    pub fn below(&mut self, bound: u64) -> u64 {
        self.next_u64() % bound
    }

    /// Random rational p/2^20 in [0, 1].
    pub fn unit_rat(&mut self) -> Rat {
        let den: u64 = 1 << 20;
        let p = self.below(den + 1);
        Rat::new(BigInt::from(p), BigInt::from(den))
    }

    /// Random rational in [0, 1] with a modest odd denominator mixed in,
    /// so samples are not all dyadic.
    pub fn unit_rat_mixed(&mut self) -> Rat {
        if self.below(4) == 0 {
            let den = 3 + 2 * self.below(40);
            let num = self.below(den + 1);
            Rat::new(BigInt::from(num), BigInt::from(den))
        } else {
            self.unit_rat()
        }
    }

    pub fn bool(&mut self) -> bool {
        self.next_u64() & 1 == 1
    }

    pub fn rat_in(&mut self, lo: &Rat, hi: &Rat) -> Rat {
        let t = self.unit_rat();
        lo + (hi - lo) * t
    }

    pub fn int_rat(&mut self, lo: i64, hi: i64) -> Rat {
        rat_int(lo + self.below((hi - lo + 1) as u64) as i64)
    }
}
