//! Deterministic generation of the map sequence `f_1, f_2, ...` from a
//! finite set of named generators and a rule assigning a generator to every
//! index, plus structural analysis of the resulting family.
//!
//! Index n = 1 is the first applied map. An offset supports re-basing the
//! sequence at a later start index.

use crate::error::{NdsError, Result};
use crate::maps::{commutes, MapSpec};
use crate::point::Point;
use crate::report::Verdict;

/// How indices map to generators.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ScheduleRule {
    /// Repeat the index word forever.
    Periodic { word: Vec<usize> },
    /// base, filler, base, filler^2, base, filler^3, ...  The j-th base map
    /// sits at position j(j+1)/2.
    Triangular { base: usize, filler: usize },
    /// Block family: for n = 1, 2, ..., first n groups of (generator
    /// followed by n fillers), then n groups of (inverse followed by n
    /// fillers).
    GrowingBlocks {
        generator: usize,
        inverse: usize,
        filler: usize,
    },
    /// Explicit prefix, then a periodic tail.
    Explicit {
        prefix: Vec<usize>,
        tail: Vec<usize>,
    },
}

/// A deterministic rule n -> generator producing the sequence.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Schedule {
    generators: Vec<(String, MapSpec)>,
    rule: ScheduleRule,
    /// Rebase: map_at(n) reads the underlying rule at n + offset.
    offset: u64,
}

impl Schedule {
    pub fn new(generators: Vec<(String, MapSpec)>, rule: ScheduleRule) -> Result<Schedule> {
        if generators.is_empty() {
            return Err(NdsError::Parse(
                "schedule needs at least one generator".into(),
            ));
        }
        let n = generators.len();
        let check = |i: &usize| -> Result<()> {
            if *i >= n {
                Err(NdsError::Parse(format!(
                    "generator index {i} out of range (have {n})"
                )))
            } else {
                Ok(())
            }
        };
        match &rule {
            ScheduleRule::Periodic { word } => {
                if word.is_empty() {
                    return Err(NdsError::Parse("periodic word must be nonempty".into()));
                }
                word.iter().try_for_each(check)?;
            }
            ScheduleRule::Triangular { base, filler } => {
                check(base)?;
                check(filler)?;
            }
            ScheduleRule::GrowingBlocks {
                generator,
                inverse,
                filler,
            } => {
                check(generator)?;
                check(inverse)?;
                check(filler)?;
            }
            ScheduleRule::Explicit { prefix, tail } => {
                if tail.is_empty() {
                    return Err(NdsError::Parse("explicit tail must be nonempty".into()));
                }
                prefix.iter().try_for_each(check)?;
                tail.iter().try_for_each(check)?;
            }
        }
        Ok(Schedule {
            generators,
            rule,
            offset: 0,
        })
    }

    /// Single generator repeated forever.
    pub fn constant(name: &str, map: MapSpec) -> Schedule {
        Schedule::new(
            vec![(name.to_string(), map)],
            ScheduleRule::Periodic { word: vec![0] },
        )
        .expect("constant schedule is valid")
    }

    /// Periodic schedule over the named generators, cycling in list order.
    pub fn cycle(generators: Vec<(String, MapSpec)>) -> Result<Schedule> {
        let word = (0..generators.len()).collect();
        Schedule::new(generators, ScheduleRule::Periodic { word })
    }

    pub fn generators(&self) -> &[(String, MapSpec)] {
        &self.generators
    }

    pub fn rule(&self) -> &ScheduleRule {
        &self.rule
    }

    pub fn offset(&self) -> u64 {
        self.offset
    }

    /// The schedule re-based to start at index `start >= 1` of this one.
    pub fn shifted_to(&self, start: u64) -> Schedule {
        Schedule {
            generators: self.generators.clone(),
            rule: self.rule.clone(),
            offset: self.offset + start.saturating_sub(1),
        }
    }

    /// Generator index used at position n >= 1.
    pub fn index_at(&self, n: u64) -> usize {
        assert!(n >= 1, "schedule positions start at 1");
        let n = n + self.offset;
        match &self.rule {
            ScheduleRule::Periodic { word } => word[((n - 1) % word.len() as u64) as usize],
            ScheduleRule::Triangular { base, filler } => {
                if is_triangular(n) {
                    *base
                } else {
                    *filler
                }
            }
            ScheduleRule::GrowingBlocks {
                generator,
                inverse,
                filler,
            } => growing_blocks_index(n, *generator, *inverse, *filler),
            ScheduleRule::Explicit { prefix, tail } => {
                let idx = (n - 1) as usize;
                if idx < prefix.len() {
                    prefix[idx]
                } else {
                    tail[(idx - prefix.len()) % tail.len()]
                }
            }
        }
    }

    /// The n-th map of the sequence (n >= 1). Pure and reproducible.
    pub fn map_at(&self, n: u64) -> &MapSpec {
        &self.generators[self.index_at(n)].1
    }

    pub fn name_at(&self, n: u64) -> &str {
        &self.generators[self.index_at(n)].0
    }

    /// Least k <= bound with map_at(n + k) == map_at(n) for all n, decided
    /// from the rule. Triangular and growing-block rules are aperiodic
    /// unless degenerate.
    pub fn detect_period(&self, bound: u64) -> Option<u64> {
        if bound == 0 {
            return None;
        }
        // indices whose maps are pointwise equal collapse to one class
        let classes = self.generator_classes();
        match &self.rule {
            ScheduleRule::Periodic { word } => {
                let w: Vec<usize> = word.iter().map(|i| classes[*i]).collect();
                let len = w.len() as u64;
                // account for the offset rotation
                let rot = (self.offset % len) as usize;
                let rotated: Vec<usize> = (0..w.len()).map(|i| w[(i + rot) % w.len()]).collect();
                for k in 1..=len.min(bound) {
                    if word_shift_invariant(&rotated, k as usize) {
                        return Some(k);
                    }
                }
                None
            }
            ScheduleRule::Explicit { prefix, tail } => {
                let tail_classes: Vec<usize> = tail.iter().map(|i| classes[*i]).collect();
                let t = tail.len() as u64;
                'k: for k in 1..=bound {
                    // the tail must be invariant under shifting by k mod t
                    if !word_shift_invariant(&tail_classes, (k % t) as usize) {
                        continue;
                    }
                    // the prefix region must agree with itself shifted by k
                    let horizon = prefix.len() as u64 + t + k;
                    for n in 1..=horizon {
                        if classes[self.index_at(n)] != classes[self.index_at(n + k)] {
                            continue 'k;
                        }
                    }
                    return Some(k);
                }
                None
            }
            ScheduleRule::Triangular { base, filler } => {
                if classes[*base] == classes[*filler] {
                    Some(1)
                } else {
                    None
                }
            }
            ScheduleRule::GrowingBlocks {
                generator,
                inverse,
                filler,
            } => {
                if classes[*generator] == classes[*inverse] && classes[*inverse] == classes[*filler]
                {
                    Some(1)
                } else {
                    None
                }
            }
        }
    }

    /// Equivalence classes of generators under structural equality. Two
    /// entries written differently (say a table and the inverse of another
    /// table) stay distinct even if they agree pointwise; the period is a
    /// property of the rule as written.
    fn generator_classes(&self) -> Vec<usize> {
        let n = self.generators.len();
        let mut class: Vec<usize> = (0..n).collect();
        for i in 0..n {
            for j in 0..i {
                if self.generators[i].1 == self.generators[j].1 {
                    class[i] = class[j];
                    break;
                }
            }
        }
        class
    }

    /// The set of distinct generators actually reachable by the rule.
    pub fn used_generator_indices(&self) -> Vec<usize> {
        let mut used: Vec<usize> = match &self.rule {
            ScheduleRule::Periodic { word } => word.clone(),
            ScheduleRule::Triangular { base, filler } => vec![*base, *filler],
            ScheduleRule::GrowingBlocks {
                generator,
                inverse,
                filler,
            } => vec![*generator, *inverse, *filler],
            ScheduleRule::Explicit { prefix, tail } => {
                let mut v = prefix.clone();
                v.extend(tail.iter().copied());
                v
            }
        };
        used.sort_unstable();
        used.dedup();
        used
    }

    /// Number of positions in 1..=horizon using the given generator index.
    pub fn occurrences_within(&self, index: usize, horizon: u64) -> u64 {
        (1..=horizon).filter(|&n| self.index_at(n) == index).count() as u64
    }
}

fn is_triangular(n: u64) -> bool {
    // n = j(j+1)/2 for some j >= 1
    let mut j = 1u64;
    loop {
        let t = j * (j + 1) / 2;
        if t == n {
            return true;
        }
        if t > n {
            return false;
        }
        j += 1;
    }
}

/// Position of n inside the growing block family.
fn growing_blocks_index(n: u64, generator: usize, inverse: usize, filler: usize) -> usize {
    // block b has length 2 b (b+1); cumulative length (2/3) b (b+1) (b+2)
    let mut b = 1u64;
    let mut start = 1u64;
    loop {
        let len = 2 * b * (b + 1);
        if n < start + len {
            let pos = n - start; // 0-based within the block
            let half = b * (b + 1);
            let (lead, pos_in_half) = if pos < half {
                (generator, pos)
            } else {
                (inverse, pos - half)
            };
            let within_group = pos_in_half % (b + 1);
            return if within_group == 0 { lead } else { filler };
        }
        start += len;
        b += 1;
    }
}

fn word_shift_invariant(word: &[usize], k: usize) -> bool {
    let len = word.len();
    (0..len).all(|i| word[i] == word[(i + k) % len])
}

/// Structural facts about the generating family.
#[derive(Debug, Clone)]
pub struct FamilyAnalysis {
    pub finitely_generated: bool,
    pub generator_names: Vec<String>,
    pub commutative: Verdict,
    pub commutative_exact: bool,
    pub commutative_witness: Option<(String, String, Option<Point>)>,
    pub all_surjective: bool,
    pub non_surjective: Vec<String>,
    pub all_feeble_open: bool,
    pub non_feeble_open: Vec<String>,
    pub all_isometries: bool,
}

/// Pairwise commutation and per-generator flags over the used family.
pub fn family_analysis(s: &Schedule) -> Result<FamilyAnalysis> {
    let used = s.used_generator_indices();
    let gens = s.generators();
    let mut commutative = Verdict::Holds;
    let mut commutative_exact = true;
    let mut witness = None;
    'pairs: for (ai, &i) in used.iter().enumerate() {
        for &j in used.iter().skip(ai + 1) {
            let c = commutes(&gens[i].1, &gens[j].1, &[])?;
            commutative_exact &= c.exact;
            if !c.commutes {
                commutative = Verdict::Fails;
                witness = Some((gens[i].0.clone(), gens[j].0.clone(), c.witness));
                break 'pairs;
            }
        }
    }
    let mut non_surjective = Vec::new();
    let mut non_feeble = Vec::new();
    let mut all_isometries = true;
    for &i in &used {
        let flags = gens[i].1.analyze()?;
        if !flags.surjective {
            non_surjective.push(gens[i].0.clone());
        }
        if !flags.feeble_open {
            non_feeble.push(gens[i].0.clone());
        }
        all_isometries &= flags.isometry;
    }
    Ok(FamilyAnalysis {
        finitely_generated: true,
        generator_names: used.iter().map(|&i| gens[i].0.clone()).collect(),
        commutative,
        commutative_exact,
        commutative_witness: witness,
        all_surjective: non_surjective.is_empty(),
        non_surjective,
        all_feeble_open: non_feeble.is_empty(),
        non_feeble_open: non_feeble.clone(),
        all_isometries,
    })
}
