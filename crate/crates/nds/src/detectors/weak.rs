//! Weak-form scans: properties witnessed by compositions of generators at
//! finitely many distinct schedule indices, in any order, rather than by
//! initial windows.
//!
//! The search walks words over the used generators in breadth-first order
//! (shortest witness first), keeping per-cell images incrementally. A word
//! is admissible when every generator occurs in the schedule at least as
//! often as the word uses it, within the horizon; the reported witness
//! assigns each letter the smallest unused index of its generator.

use std::collections::VecDeque;

use super::{evidence_report, CheckParams};
use crate::cover::build_cover;
use crate::error::{NdsError, Result};
use crate::region::RegionSet;
use crate::report::{Mode, PropertyReport, Verdict, Witness};
use crate::scalar::fmt_rat;
use crate::window::System;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WeakKind {
    Sensitive,
    Transitive,
    LiYorke,
}

impl WeakKind {
    fn property_name(&self) -> &'static str {
        match self {
            WeakKind::Sensitive => "weak_sensitive",
            WeakKind::Transitive => "weak_transitive",
            WeakKind::LiYorke => "weak_li_yorke",
        }
    }
}

/// Assign schedule indices to the letters of a word: for each letter, the
/// smallest unused index carrying that generator. None if the horizon does
/// not offer enough occurrences.
fn assign_indices(sys: &System, word: &[usize], horizon: u64) -> Option<Vec<u64>> {
    let mut used: Vec<u64> = Vec::with_capacity(word.len());
    for &gen in word {
        let mut found = None;
        for n in 1..=horizon {
            if sys.schedule.index_at(n) == gen && !used.contains(&n) {
                found = Some(n);
                break;
            }
        }
        used.push(found?);
    }
    Some(used)
}

pub fn weak_scan(sys: &System, kind: WeakKind, params: &CheckParams) -> Result<PropertyReport> {
    if params.word_len < 1 {
        return Err(NdsError::BadParameter("word length must be >= 1".into()));
    }
    let cover = build_cover(&sys.space, &params.scale)?;
    let gens = sys.schedule.generators();
    let used_idx = sys.schedule.used_generator_indices();
    let mut report = evidence_report(
        sys,
        kind.property_name(),
        &[
            ("L", params.word_len.to_string()),
            ("scale", fmt_rat(&params.scale)),
            ("T", params.horizon.to_string()),
        ],
    );
    match kind {
        WeakKind::Sensitive | WeakKind::Transitive => {
            report = report.param("delta", fmt_rat(&params.delta));
            // BFS over words; state = per-cell images of the word so far
            let init: Vec<RegionSet> = cover.cells.iter().map(|c| c.region.clone()).collect();
            let mut queue: VecDeque<(Vec<usize>, Vec<RegionSet>)> = VecDeque::new();
            queue.push_back((Vec::new(), init));
            let mut words_checked = 0u64;
            while let Some((word, images)) = queue.pop_front() {
                if !word.is_empty() {
                    words_checked += 1;
                    let satisfied = match kind {
                        WeakKind::Sensitive => {
                            let mut ok = true;
                            for img in &images {
                                if img.diam(&sys.space)?.cmp_rat(&params.delta)
                                    != std::cmp::Ordering::Greater
                                {
                                    ok = false;
                                    break;
                                }
                            }
                            ok
                        }
                        WeakKind::Transitive => {
                            let mut ok = true;
                            'pairs: for img in &images {
                                for v in &cover.cells {
                                    if !img.intersects(&v.region)? {
                                        ok = false;
                                        break 'pairs;
                                    }
                                }
                            }
                            ok
                        }
                        WeakKind::LiYorke => unreachable!(),
                    };
                    if satisfied {
                        if let Some(indices) = assign_indices(sys, &word, params.horizon) {
                            report.verdict = Verdict::Holds;
                            report.evidence.push(format!(
                                "{words_checked} words searched up to length {}",
                                params.word_len
                            ));
                            report.witnesses.push(Witness::Word {
                                letters: word.iter().map(|&g| gens[g].0.clone()).collect(),
                                indices,
                            });
                            return Ok(report);
                        }
                    }
                }
                if (word.len() as u64) < params.word_len {
                    for &g in &used_idx {
                        let mut next_word = word.clone();
                        next_word.push(g);
                        let mut next_images = Vec::with_capacity(images.len());
                        let mut ok = true;
                        for img in &images {
                            match img.image(&gens[g].1) {
                                Ok(i) => next_images.push(i.canonical()),
                                Err(_) => {
                                    ok = false;
                                    break;
                                }
                            }
                        }
                        if ok {
                            queue.push_back((next_word, next_images));
                        }
                    }
                }
            }
            report.verdict = Verdict::Fails;
            report.evidence.push(format!(
                "{words_checked} words searched, none witnesses the property on every cell"
            ));
            report.witnesses.push(Witness::Note(
                "no generator word witnesses the property at this length bound".into(),
            ));
        }
        WeakKind::LiYorke => {
            report = report
                .param("delta", fmt_rat(&params.delta))
                .param("eta", fmt_rat(&params.eta));
            report.mode = Mode::Sampled;
            // per cell: probe pairs; a pair qualifies when some word brings
            // it under eta and some word separates it beyond delta
            let words = enumerate_words(&used_idx, params.word_len);
            let mut all_ok = true;
            for cell in &cover.cells {
                let probes = &cell.probes;
                let mut cell_ok = false;
                'pair: for i in 0..probes.len() {
                    for j in (i + 1)..probes.len() {
                        if probes[i] == probes[j] {
                            continue;
                        }
                        let mut close = false;
                        let mut far = false;
                        for word in &words {
                            if assign_indices(sys, word, params.horizon).is_none() {
                                continue;
                            }
                            let (mut x, mut y) = (probes[i].clone(), probes[j].clone());
                            for &g in word {
                                x = gens[g].1.eval(&x)?;
                                y = gens[g].1.eval(&y)?;
                            }
                            let d = sys.space.distance(&x, &y)?;
                            if d.cmp_rat(&params.eta) == std::cmp::Ordering::Less {
                                close = true;
                            }
                            if d.cmp_rat(&params.delta) == std::cmp::Ordering::Greater {
                                far = true;
                            }
                            if close && far {
                                cell_ok = true;
                                break 'pair;
                            }
                        }
                    }
                }
                if !cell_ok {
                    all_ok = false;
                    report
                        .evidence
                        .push(format!("{}: no scrambled pair under any word", cell.id));
                }
            }
            report.verdict = if all_ok {
                Verdict::Holds
            } else {
                Verdict::Fails
            };
        }
    }
    Ok(report)
}

fn enumerate_words(gens: &[usize], max_len: u64) -> Vec<Vec<usize>> {
    let mut out: Vec<Vec<usize>> = Vec::new();
    let mut frontier: Vec<Vec<usize>> = vec![Vec::new()];
    for _ in 0..max_len {
        let mut next = Vec::new();
        for w in &frontier {
            for &g in gens {
                let mut v = w.clone();
                v.push(g);
                next.push(v.clone());
                out.push(v);
            }
        }
        frontier = next;
    }
    out
}
