//! Two-sided binary sequences with eventually periodic tails.
//!
//! A point of the full shift is stored as a left-periodic pattern, a finite
//! center word, and a right-periodic pattern. Both patterns are anchored at
//! absolute position 0 (the value of the left pattern at position `i` is
//! `left[i mod |left|]`), which makes shifting a rotation of the pattern
//! words. Equality and first-difference search are decided exactly from a
//! finite window whose length is bounded by the representation spans and the
//! lcm of the tail periods.

use num_integer::Integer;
use serde::{Deserialize, Serialize};
use std::fmt;

use crate::error::{NdsError, Result};

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SeqPoint {
    left: Vec<u8>,
    center: Vec<u8>,
    right: Vec<u8>,
    center_start: i64,
}

fn word_from_str(s: &str) -> Result<Vec<u8>> {
    let mut out = Vec::with_capacity(s.len());
    for ch in s.chars() {
        match ch {
            '0' => out.push(0),
            '1' => out.push(1),
            _ => return Err(NdsError::Parse(format!("bad bit {ch:?} in word {s:?}"))),
        }
    }
    Ok(out)
}

fn word_to_str(w: &[u8]) -> String {
    w.iter().map(|b| if *b == 0 { '0' } else { '1' }).collect()
}

/// Smallest p dividing len with w[i] == w[i mod p] for all i.
fn primitive_period(w: &[u8]) -> usize {
    let n = w.len();
    for p in 1..=n {
        if n.is_multiple_of(p) && (p..n).all(|i| w[i] == w[i % p]) {
            return p;
        }
    }
    n
}

fn index_mod(i: i64, len: usize) -> usize {
    (i.rem_euclid(len as i64)) as usize
}

impl SeqPoint {
    /// Build from pattern words; canonicalizes the representation.
    pub fn new(left: Vec<u8>, center: Vec<u8>, right: Vec<u8>, center_start: i64) -> Result<Self> {
        if left.is_empty() || right.is_empty() {
            return Err(NdsError::Parse(
                "periodic tail words must be nonempty".into(),
            ));
        }
        if left
            .iter()
            .chain(center.iter())
            .chain(right.iter())
            .any(|b| *b > 1)
        {
            return Err(NdsError::Parse("sequence bits must be 0 or 1".into()));
        }
        let mut p = SeqPoint {
            left,
            center,
            right,
            center_start,
        };
        p.canonicalize();
        Ok(p)
    }

    pub fn from_words(left: &str, center: &str, right: &str, center_start: i64) -> Result<Self> {
        SeqPoint::new(
            word_from_str(left)?,
            word_from_str(center)?,
            word_from_str(right)?,
            center_start,
        )
    }

    /// The fully periodic sequence whose value at i is word[i mod len].
    pub fn periodic(word: &str) -> Result<Self> {
        let w = word_from_str(word)?;
        SeqPoint::new(w.clone(), Vec::new(), w, 0)
    }

    pub fn constant(bit: u8) -> Self {
        SeqPoint::new(vec![bit], Vec::new(), vec![bit], 0).expect("constant word is valid")
    }

    pub fn left_word(&self) -> String {
        word_to_str(&self.left)
    }
    pub fn center_word(&self) -> String {
        word_to_str(&self.center)
    }
    pub fn right_word(&self) -> String {
        word_to_str(&self.right)
    }
    pub fn center_start(&self) -> i64 {
        self.center_start
    }

    /// Bit at absolute position i.
    pub fn at(&self, i: i64) -> u8 {
        let c_end = self.center_start + self.center.len() as i64;
        if i < self.center_start {
            self.left[index_mod(i, self.left.len())]
        } else if i < c_end {
            self.center[(i - self.center_start) as usize]
        } else {
            self.right[index_mod(i, self.right.len())]
        }
    }

    fn canonicalize(&mut self) {
        // 1. primitive tail periods (anchored at 0, so truncation preserves values)
        let lp = primitive_period(&self.left);
        self.left.truncate(lp);
        let rp = primitive_period(&self.right);
        self.right.truncate(rp);
        // 2. absorb center bits matched by the tail patterns
        while !self.center.is_empty()
            && self.center[0] == self.left[index_mod(self.center_start, self.left.len())]
        {
            self.center.remove(0);
            self.center_start += 1;
        }
        while !self.center.is_empty() {
            let last_pos = self.center_start + self.center.len() as i64 - 1;
            if *self.center.last().unwrap() == self.right[index_mod(last_pos, self.right.len())] {
                self.center.pop();
            } else {
                break;
            }
        }
        // 3. with an empty center, either merge identical patterns or slide the
        //    splice point right until the patterns disagree
        if self.center.is_empty() {
            if self.left == self.right {
                self.center_start = 0;
                return;
            }
            let lcm = self.left.len().lcm(&self.right.len());
            for _ in 0..lcm {
                let i = self.center_start;
                if self.left[index_mod(i, self.left.len())]
                    == self.right[index_mod(i, self.right.len())]
                {
                    self.center_start += 1;
                } else {
                    break;
                }
            }
        }
    }

    /// The shifted sequence y with y(i) = self(i + s).
    pub fn shifted(&self, s: i64) -> SeqPoint {
        let rotate = |w: &[u8]| -> Vec<u8> {
            let n = w.len();
            (0..n).map(|j| w[index_mod(j as i64 + s, n)]).collect()
        };
        let mut p = SeqPoint {
            left: rotate(&self.left),
            center: self.center.clone(),
            right: rotate(&self.right),
            center_start: self.center_start - s,
        };
        p.canonicalize();
        p
    }

    /// Window such that agreement on |i| <= window implies equality.
    pub fn compare_window(&self, other: &SeqPoint) -> i64 {
        let span = |p: &SeqPoint| -> (i64, i64) {
            (p.center_start, p.center_start + p.center.len() as i64)
        };
        let (a_lo, a_hi) = span(self);
        let (b_lo, b_hi) = span(other);
        let lo = a_lo.min(b_lo) - self.left.len().lcm(&other.left.len()) as i64;
        let hi = a_hi.max(b_hi) + self.right.len().lcm(&other.right.len()) as i64;
        lo.abs().max(hi.abs()) + 1
    }

    /// Index of the first difference in the |i|-order, or None if equal.
    pub fn first_difference(&self, other: &SeqPoint) -> Option<i64> {
        let w = self.compare_window(other);
        for k in 0..=w {
            if self.at(k) != other.at(k) {
                return Some(k);
            }
            if k > 0 && self.at(-k) != other.at(-k) {
                return Some(-k);
            }
        }
        None
    }

    pub fn seq_eq(&self, other: &SeqPoint) -> bool {
        self.first_difference(other).is_none()
    }

    /// All periodic sequences of (not necessarily primitive) period p,
    /// deduplicated as functions.
    pub fn enumerate_periodic(p: u32) -> Vec<SeqPoint> {
        let mut out: Vec<SeqPoint> = Vec::new();
        for mask in 0u64..(1u64 << p) {
            let word: Vec<u8> = (0..p).map(|i| ((mask >> i) & 1) as u8).collect();
            let cand = SeqPoint::new(word.clone(), Vec::new(), word, 0).unwrap();
            if !out.iter().any(|q| q.seq_eq(&cand)) {
                out.push(cand);
            }
        }
        out
    }
}

impl PartialEq for SeqPoint {
    fn eq(&self, other: &Self) -> bool {
        self.seq_eq(other)
    }
}
impl Eq for SeqPoint {}

impl fmt::Display for SeqPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "({})*[{}@{}]({})*",
            word_to_str(&self.left),
            word_to_str(&self.center),
            self.center_start,
            word_to_str(&self.right),
        )
    }
}
