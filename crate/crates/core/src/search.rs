//! Depth-first enumeration of candidate curves with prefix pruning.
//!
//! A candidate curve is built one vertex at a time. For every input curve we
//! keep the set of columns at which a partial traversal of the prefix may
//! currently sit (a bitset). Appending a vertex advances each set by one
//! diagonal/vertical step followed by horizontal closure inside the admissible
//! cells of the new row. A prefix whose set becomes empty for some curve can
//! never be completed and its subtree is skipped; states that failed to
//! complete with `r` more vertices are memoised.
//!
//! Ordered and restricted constraints are applied incrementally: a vertex
//! taken from column `k` of curve `P` forbids leaving the previous row of `P`
//! at a column `>= k`, and for the restricted variant the new row must pass
//! through `k` itself.

use std::collections::HashSet;

use crate::error::{Error, Result};
use crate::geometry::{CurveSet, Point, Threshold};
use crate::middle::Variant;

/// Default cap on the number of candidate extensions one search may examine.
pub const DEFAULT_MAX_CANDIDATES: u64 = 10_000_000;

#[derive(Debug, Clone)]
pub(crate) struct Candidate {
    pub point: Point,
    /// `(curve position, 0-based vertex index)` of the source vertex.
    pub source: Option<(usize, usize)>,
}

struct Layout {
    offsets: Vec<usize>,
    words: Vec<usize>,
    last_bit: Vec<usize>,
    total: usize,
}

impl Layout {
    fn new(lens: impl Iterator<Item = usize>) -> Self {
        let (mut offsets, mut words, mut last_bit) = (Vec::new(), Vec::new(), Vec::new());
        let mut total = 0;
        for len in lens {
            let w = len.div_ceil(64);
            offsets.push(total);
            words.push(w);
            last_bit.push(len - 1);
            total += w;
        }
        Layout {
            offsets,
            words,
            last_bit,
            total,
        }
    }

    fn range(&self, curve: usize) -> std::ops::Range<usize> {
        self.offsets[curve]..self.offsets[curve] + self.words[curve]
    }
}

fn has_bit(words: &[u64], bit: usize) -> bool {
    words[bit / 64] >> (bit % 64) & 1 == 1
}

/// Bits of `entry` plus every bit reachable from one of them by moving up
/// through a contiguous run of `allowed`.
fn fill(entry: &mut [u64], allowed: &[u64]) {
    let mut carry = 0u64;
    for (e, &a) in entry.iter_mut().zip(allowed) {
        let x = *e & a;
        let (s1, c1) = a.overflowing_add(x);
        let (sum, c2) = s1.overflowing_add(carry);
        carry = (c1 || c2) as u64;
        *e = ((sum ^ a) & a) | x;
    }
}

pub(crate) struct SearchSpace<'a> {
    curves: &'a CurveSet,
    candidates: Vec<Candidate>,
    admissible: Vec<u64>,
    layout: Layout,
    variant: Variant,
    /// Candidates admissible at the first vertex of every curve.
    starters: Vec<usize>,
    /// Candidates admissible at the last vertex of every curve.
    finishers: Vec<usize>,
}

pub(crate) struct Search<'s, 'a> {
    space: &'s SearchSpace<'a>,
    failed: HashSet<(Vec<u64>, usize, usize)>,
    examined: u64,
    limit: u64,
    advice: &'static str,
}

impl<'a> SearchSpace<'a> {
    pub fn new(
        curves: &'a CurveSet,
        candidates: Vec<Candidate>,
        threshold: &Threshold,
        variant: Variant,
    ) -> Self {
        let layout = Layout::new(curves.iter().map(|c| c.len()));
        let mut admissible = vec![0u64; candidates.len() * layout.total];
        for (ci, cand) in candidates.iter().enumerate() {
            let row = &mut admissible[ci * layout.total..(ci + 1) * layout.total];
            for (pi, curve) in curves.iter().enumerate() {
                let off = layout.offsets[pi];
                for (k, v) in curve.vertices().iter().enumerate() {
                    if threshold.admits(&cand.point, v) {
                        row[off + k / 64] |= 1 << (k % 64);
                    }
                }
            }
        }
        let at_every = |bits: &dyn Fn(usize) -> usize| -> Vec<usize> {
            (0..candidates.len())
                .filter(|&ci| {
                    let row = &admissible[ci * layout.total..(ci + 1) * layout.total];
                    (0..curves.len()).all(|c| has_bit(&row[layout.range(c)], bits(c)))
                })
                .collect()
        };
        let starters = at_every(&|_| 0);
        let finishers = at_every(&|c| layout.last_bit[c]);
        SearchSpace {
            curves,
            candidates,
            admissible,
            layout,
            variant,
            starters,
            finishers,
        }
    }

    pub fn candidates(&self) -> &[Candidate] {
        &self.candidates
    }

    /// State after appending candidate `cand` to the prefix whose state is
    /// `prev` (`None` for the empty prefix). Returns false if some curve has
    /// no reachable column left.
    fn step(&self, prev: Option<&[u64]>, cand: usize, out: &mut Vec<u64>) -> bool {
        let total = self.layout.total;
        let allowed_row = &self.admissible[cand * total..(cand + 1) * total];
        let source = self.candidates[cand].source;
        out.clear();
        out.resize(total, 0);
        for curve in 0..self.curves.len() {
            let range = self.layout.range(curve);
            let allowed = &allowed_row[range.clone()];
            let entry = &mut out[range.clone()];
            let own = match (self.variant, source) {
                (Variant::Unordered, _) | (_, None) => None,
                (_, Some((c, k))) => (c == curve).then_some(k),
            };
            match prev {
                None => entry[0] = allowed[0] & 1,
                Some(prev) => {
                    let prev = &prev[range.clone()];
                    let mut carry = 0u64;
                    for (w, (&r, &a)) in prev.iter().zip(allowed).enumerate() {
                        // Ordered: the previous row must be left before column k.
                        let r = match own {
                            Some(k) if w * 64 >= k => 0,
                            Some(k) if (w + 1) * 64 > k => r & ((1u64 << (k % 64)) - 1),
                            _ => r,
                        };
                        entry[w] = (r | (r << 1) | carry) & a;
                        carry = r >> 63;
                    }
                }
            }
            fill(entry, allowed);
            if let (Variant::Restricted, Some(k)) = (self.variant, own) {
                let passes = has_bit(entry, k);
                entry.iter_mut().for_each(|w| *w = 0);
                if !passes {
                    return false;
                }
                entry[k / 64] = 1 << (k % 64);
                fill(entry, allowed);
            }
            if entry.iter().all(|&w| w == 0) {
                return false;
            }
        }
        true
    }

    fn accepts(&self, state: &[u64]) -> bool {
        (0..self.curves.len())
            .all(|c| has_bit(&state[self.layout.range(c)], self.layout.last_bit[c]))
    }

    pub fn search(&self, limit: u64, advice: &'static str) -> Search<'_, 'a> {
        Search {
            space: self,
            failed: HashSet::new(),
            examined: 0,
            limit,
            advice,
        }
    }
}

impl Search<'_, '_> {
    fn tick(&mut self) -> Result<()> {
        self.examined += 1;
        if self.examined > self.limit {
            return Err(Error::ResourceLimit {
                limit: self.limit,
                advice: self.advice,
            });
        }
        Ok(())
    }

    /// First accepted candidate sequence of exactly `len` vertices, in
    /// lexicographic candidate order. Consecutive repeats are skipped.
    pub fn first_of_length(&mut self, len: usize) -> Result<Option<Vec<usize>>> {
        self.first_where(len, &|_, _| true)
    }

    /// Like [`Search::first_of_length`], admitting candidate `c` at position
    /// `i` only if `filter(i, c)`. The failure memo assumes the filter depends
    /// on the position only through the number of remaining vertices, so a
    /// position-dependent filter needs a fresh `Search`.
    pub fn first_where(
        &mut self,
        len: usize,
        filter: &dyn Fn(usize, usize) -> bool,
    ) -> Result<Option<Vec<usize>>> {
        let mut path = Vec::with_capacity(len);
        let mut state = Vec::new();
        let space = self.space;
        let firsts = if len == 1 {
            &space.finishers
        } else {
            &space.starters
        };
        for &first in firsts {
            if !filter(0, first) {
                continue;
            }
            self.tick()?;
            if self.space.step(None, first, &mut state) {
                path.push(first);
                if self.extend(&state, len, &mut path, filter)? {
                    return Ok(Some(path));
                }
                path.pop();
            }
        }
        Ok(None)
    }

    /// First accepted sequence of length `1..=max_len`, shortest first.
    pub fn first_up_to(&mut self, max_len: usize) -> Result<Option<Vec<usize>>> {
        for len in 1..=max_len {
            if let Some(found) = self.first_of_length(len)? {
                return Ok(Some(found));
            }
        }
        Ok(None)
    }

    fn extend(
        &mut self,
        state: &[u64],
        len: usize,
        path: &mut Vec<usize>,
        filter: &dyn Fn(usize, usize) -> bool,
    ) -> Result<bool> {
        let remaining = len - path.len();
        if remaining == 0 {
            return Ok(self.space.accepts(state));
        }
        let last = *path.last().expect("non-empty prefix");
        let key = (state.to_vec(), remaining, last);
        if self.failed.contains(&key) {
            return Ok(false);
        }
        let mut next = Vec::new();
        let space = self.space;
        let last_step = remaining == 1;
        let count = if last_step {
            space.finishers.len()
        } else {
            space.candidates.len()
        };
        for idx in 0..count {
            let cand = if last_step { space.finishers[idx] } else { idx };
            if cand == last || !filter(path.len(), cand) {
                continue;
            }
            self.tick()?;
            if self.space.step(Some(state), cand, &mut next) {
                path.push(cand);
                if self.extend(&next, len, path, filter)? {
                    return Ok(true);
                }
                path.pop();
            }
        }
        self.failed.insert(key);
        Ok(false)
    }
}
