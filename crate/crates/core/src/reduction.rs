//! Reduction from Shortest Common Supersequence over `{A, B}` to the middle
//! curve problem at distance 1, with the constructive and decoding
//! directions and a brute-force SCS oracle.
//!
//! Every sequence becomes a one-dimensional curve built from seven integer
//! points. Letters map to gadgets `(-2, -3, -2)` / `(2, 3, 2)` separated by
//! buffers of `-1, 1, 0`; two guard curves `A^a` and `B^b` force a middle
//! curve at distance 1 to contain exactly `a` letter-A and `b` letter-B runs.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::frechet::discrete_frechet;
use crate::geometry::{Curve, CurveSet, Point, Threshold};
use crate::middle::{verify_with, BruteForce, ProvenancedCurve, Variant, VertexRef};
use crate::search::{Candidate, SearchSpace};

/// The seven gadget coordinates.
pub mod points {
    pub const P_NEG3: f64 = -3.0;
    pub const P_3: f64 = 3.0;
    pub const P_NEG1: f64 = -1.0;
    pub const P_1: f64 = 1.0;
    pub const P_0: f64 = 0.0;
    pub const P_2: f64 = 2.0;
    pub const P_NEG2: f64 = -2.0;
}

use points::*;

/// Distance at which every reduction instance is posed.
pub const REDUCTION_DELTA: f64 = 1.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Letter {
    A,
    B,
}

impl Letter {
    pub fn parse(c: char) -> Result<Self> {
        match c {
            'A' => Ok(Letter::A),
            'B' => Ok(Letter::B),
            other => Err(Error::InvalidCharacter(other)),
        }
    }

    pub fn as_char(self) -> char {
        match self {
            Letter::A => 'A',
            Letter::B => 'B',
        }
    }
}

fn parse_letters(s: &str) -> Result<Vec<Letter>> {
    s.chars().map(Letter::parse).collect()
}

/// A set of non-empty sequences over `{A, B}` and a length bound `t`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScsInstance {
    sequences: Vec<String>,
    t: usize,
}

impl ScsInstance {
    pub fn new<S: Into<String>>(sequences: impl IntoIterator<Item = S>, t: usize) -> Result<Self> {
        let sequences: Vec<String> = sequences.into_iter().map(Into::into).collect();
        if sequences.is_empty() {
            return Err(Error::InvalidArgument(
                "SCS instance needs at least one sequence".into(),
            ));
        }
        for s in &sequences {
            if s.is_empty() {
                return Err(Error::InvalidArgument(
                    "SCS sequences must be non-empty".into(),
                ));
            }
            parse_letters(s)?;
        }
        Ok(ScsInstance { sequences, t })
    }

    pub fn sequences(&self) -> &[String] {
        &self.sequences
    }

    pub fn t(&self) -> usize {
        self.t
    }
}

fn push_pair(out: &mut Vec<f64>, first: f64, second: f64, times: usize) {
    for _ in 0..times {
        out.push(first);
        out.push(second);
    }
}

fn letter_values(letter: Letter, t: usize) -> Vec<f64> {
    let mut v = Vec::with_capacity(4 * t + 5);
    v.push(P_0);
    match letter {
        Letter::A => {
            push_pair(&mut v, P_NEG1, P_1, t);
            v.extend([P_NEG2, P_NEG3, P_NEG2]);
            push_pair(&mut v, P_1, P_NEG1, t);
        }
        Letter::B => {
            push_pair(&mut v, P_1, P_NEG1, t);
            v.extend([P_2, P_3, P_2]);
            push_pair(&mut v, P_NEG1, P_1, t);
        }
    }
    v.push(P_0);
    v
}

/// The curve encoding `s`: per-letter gadgets concatenated verbatim, so the
/// closing `0` of one letter is followed by the opening `0` of the next.
///
/// `t = 0` is accepted and yields buffers without the `±1` pairs.
pub fn encode_sequence(s: &str, t: usize) -> Result<Curve> {
    let letters = parse_letters(s)?;
    let values: Vec<f64> = letters.iter().flat_map(|&l| letter_values(l, t)).collect();
    Curve::from_scalars(s, &values)
}

/// Guard curves `A^a = 1 (-3 1)^a` and `B^b = -1 (3 -1)^b`.
pub fn build_guard_curves(a: usize, b: usize) -> (Curve, Curve) {
    let mut av = vec![P_1];
    push_pair(&mut av, P_NEG3, P_1, a);
    let mut bv = vec![P_NEG1];
    push_pair(&mut bv, P_3, P_NEG1, b);
    (
        Curve::from_scalars(format!("A^{a}"), &av).expect("non-empty guard"),
        Curve::from_scalars(format!("B^{b}"), &bv).expect("non-empty guard"),
    )
}

/// All `(a, b)` with `a + b = t`, by increasing `a`.
pub fn enumerate_it(t: usize) -> Vec<(usize, usize)> {
    (0..=t).map(|a| (a, t - a)).collect()
}

/// The middle-curve instance `(G ∪ {A^a, B^b}, 1)` for one split `(a, b)`.
#[derive(Debug, Clone, PartialEq)]
pub struct ReductionInstance {
    g: Vec<Curve>,
    a_curve: Curve,
    b_curve: Curve,
    a: usize,
    b: usize,
    curves: CurveSet,
}

impl ReductionInstance {
    pub fn new(scs: &ScsInstance, a: usize, b: usize) -> Result<Self> {
        if a + b != scs.t() {
            return Err(Error::InvalidArgument(format!(
                "split ({a}, {b}) does not sum to t = {}",
                scs.t()
            )));
        }
        let g = scs
            .sequences()
            .iter()
            .enumerate()
            .map(|(i, s)| Ok(encode_sequence(s, scs.t())?.with_id(format!("S{}", i + 1))))
            .collect::<Result<Vec<_>>>()?;
        let (a_curve, b_curve) = build_guard_curves(a, b);
        let mut all = g.clone();
        all.push(a_curve.clone());
        all.push(b_curve.clone());
        Ok(ReductionInstance {
            g,
            a_curve,
            b_curve,
            a,
            b,
            curves: CurveSet::new(all)?,
        })
    }

    /// Encoded sequences, ids `S1..Sn`.
    pub fn g(&self) -> &[Curve] {
        &self.g
    }

    pub fn a_curve(&self) -> &Curve {
        &self.a_curve
    }

    pub fn b_curve(&self) -> &Curve {
        &self.b_curve
    }

    pub fn split(&self) -> (usize, usize) {
        (self.a, self.b)
    }

    pub fn delta(&self) -> f64 {
        REDUCTION_DELTA
    }

    /// `G` followed by `A^a` and `B^b`.
    pub fn curve_set(&self) -> &CurveSet {
        &self.curves
    }
}

/// Middle curve `0, x_1, 0, x_2, 0, …, x_t, 0` with `x_j = -2` for an `A`
/// and `2` for a `B`.
pub fn supersequence_values(sstar: &str) -> Result<Vec<f64>> {
    let letters = parse_letters(sstar)?;
    let mut v = vec![P_0];
    for l in letters {
        v.push(match l {
            Letter::A => P_NEG2,
            Letter::B => P_2,
        });
        v.push(P_0);
    }
    Ok(v)
}

/// Builds the middle curve representing `sstar` with provenance in `G`.
///
/// Each vertex takes its reference from a vertex of `G` at the same
/// coordinate. References are chosen by depth-first search in (curve order,
/// index) order, keeping only prefixes that can still be completed to a
/// restricted middle curve, so the result is the lexicographically first
/// valid assignment. Fails if the letter counts of `sstar` differ from the
/// instance's split, or if no assignment makes the curve restricted (this
/// happens when some letter of `sstar` is not needed by any input sequence).
pub fn supersequence_to_middle(
    sstar: &str,
    instance: &ReductionInstance,
) -> Result<ProvenancedCurve> {
    let letters = parse_letters(sstar)?;
    let a = letters.iter().filter(|&&l| l == Letter::A).count();
    let b = letters.len() - a;
    if (a, b) != instance.split() {
        return Err(Error::Precondition(format!(
            "`{sstar}` has {a} A and {b} B, instance expects {:?}",
            instance.split()
        )));
    }
    let values = supersequence_values(sstar)?;
    let ps = instance.curve_set();
    let threshold = Threshold::new(REDUCTION_DELTA)?;

    let mut candidates = Vec::new();
    for (ci, curve) in instance.g().iter().enumerate() {
        for (k, v) in curve.vertices().iter().enumerate() {
            let x = v.coords()[0];
            if x == P_0 || x == P_2 || x == P_NEG2 {
                candidates.push(Candidate {
                    point: v.clone(),
                    source: Some((ci, k)),
                });
            }
        }
    }
    let space = SearchSpace::new(ps, candidates, &threshold, Variant::Restricted);
    let targets: Vec<Point> = values.iter().map(|&x| Point::scalar(x)).collect();
    let filter = |pos: usize, cand: usize| space.candidates()[cand].point == targets[pos];
    let found = space
        .search(u64::MAX, "")
        .first_where(values.len(), &filter)?
        .ok_or_else(|| {
            Error::Precondition(format!(
                "no restricted provenance exists for `{sstar}`; some letter is not used by any sequence"
            ))
        })?;
    let refs = found
        .iter()
        .map(|&c| {
            let (ci, k) = space.candidates()[c]
                .source
                .expect("G vertices carry provenance");
            VertexRef::new(ps.curves()[ci].id(), k + 1)
        })
        .collect();
    let m = ProvenancedCurve::resolve(refs, ps)?;
    if !verify_with(&m, ps, &threshold, Variant::Restricted)? {
        return Err(Error::Internal(format!(
            "middle curve for `{sstar}` fails restricted verification"
        )));
    }
    Ok(m)
}

/// Reads a sequence off a middle curve of `A^a` and `B^b` at distance 1.
///
/// The witness matchings of `A^a` and `B^b` against `m` partition the
/// vertices of `m`; vertices matched to a `-3` of `A^a` form A-subsets, those
/// matched to a `3` of `B^b` form B-subsets. Letters are emitted in order of
/// the subsets along `m`.
pub fn decode_middle_to_sequence(m: &Curve, a: usize, b: usize) -> Result<String> {
    if m.dim() != 1 {
        return Err(Error::DimensionMismatch {
            expected: 1,
            found: m.dim(),
        });
    }
    let (a_curve, b_curve) = build_guard_curves(a, b);
    let a_owner = letter_owners(&a_curve, m)?;
    let b_owner = letter_owners(&b_curve, m)?;

    let mut out = String::new();
    let mut current: Option<(Letter, usize)> = None;
    for (x, (oa, ob)) in a_owner.iter().zip(&b_owner).enumerate() {
        let subset = match (oa, ob) {
            (Some(_), Some(_)) => {
                return Err(Error::Internal(format!(
                    "vertex {} of the middle curve lies in both an A-subset and a B-subset",
                    x + 1
                )))
            }
            (Some(i), None) => Some((Letter::A, *i)),
            (None, Some(j)) => Some((Letter::B, *j)),
            (None, None) => None,
        };
        if let Some(s) = subset {
            if current != Some(s) {
                out.push(s.0.as_char());
                current = Some(s);
            }
        }
    }
    if out.len() != a + b {
        return Err(Error::Internal(format!(
            "decoded {} letters, expected a + b = {}",
            out.len(),
            a + b
        )));
    }
    Ok(out)
}

/// For each vertex of `m`: `Some(i)` if the witness matches it to the
/// peak vertex `i` (1-based, even) of `guard`.
fn letter_owners(guard: &Curve, m: &Curve) -> Result<Vec<Option<usize>>> {
    let r = discrete_frechet(guard, m)?;
    if r.squared > REDUCTION_DELTA * REDUCTION_DELTA {
        return Err(Error::Precondition(format!(
            "d_DF({}, M) = {} exceeds 1",
            guard.id(),
            r.value
        )));
    }
    let mut owner: Vec<Option<usize>> = vec![None; m.len()];
    let mut partner: Vec<Option<usize>> = vec![None; m.len()];
    for &(gi, mi) in r.witness.pairs() {
        match partner[mi - 1] {
            Some(prev) if prev != gi => {
                return Err(Error::Internal(format!(
                    "vertex {mi} of the middle curve is matched to two vertices of {}",
                    guard.id()
                )))
            }
            _ => partner[mi - 1] = Some(gi),
        }
        if gi % 2 == 0 {
            owner[mi - 1] = Some(gi);
        }
    }
    Ok(owner)
}

/// A shortest common supersequence, lexicographically smallest among the
/// shortest (`A < B`).
pub fn shortest_common_supersequence(sequences: &[String]) -> Result<String> {
    let seqs: Vec<Vec<Letter>> = sequences
        .iter()
        .map(|s| parse_letters(s))
        .collect::<Result<_>>()?;
    let mut memo: HashMap<Vec<usize>, usize> = HashMap::new();

    fn advance(seqs: &[Vec<Letter>], pos: &[usize], l: Letter) -> Option<Vec<usize>> {
        let mut moved = false;
        let next = pos
            .iter()
            .zip(seqs)
            .map(|(&p, s)| {
                if s.get(p) == Some(&l) {
                    moved = true;
                    p + 1
                } else {
                    p
                }
            })
            .collect();
        moved.then_some(next)
    }

    fn remaining(
        seqs: &[Vec<Letter>],
        pos: Vec<usize>,
        memo: &mut HashMap<Vec<usize>, usize>,
    ) -> usize {
        if let Some(&r) = memo.get(&pos) {
            return r;
        }
        let r = [Letter::A, Letter::B]
            .into_iter()
            .filter_map(|l| advance(seqs, &pos, l))
            .map(|next| 1 + remaining(seqs, next, memo))
            .min()
            .unwrap_or(0);
        memo.insert(pos, r);
        r
    }

    let mut pos = vec![0; seqs.len()];
    let mut left = remaining(&seqs, pos.clone(), &mut memo);
    let mut out = String::with_capacity(left);
    while left > 0 {
        let (letter, next) = [Letter::A, Letter::B]
            .into_iter()
            .filter_map(|l| advance(&seqs, &pos, l).map(|n| (l, n)))
            .find(|(_, n)| remaining(&seqs, n.clone(), &mut memo) + 1 == left)
            .expect("an optimal continuation exists");
        out.push(letter.as_char());
        pos = next;
        left -= 1;
    }
    Ok(out)
}

/// `(length of SCS <= t, witness)`; the witness is the lexicographically
/// smallest shortest common supersequence when feasible.
pub fn scs_brute_force(inst: &ScsInstance) -> (bool, Option<String>) {
    let s = shortest_common_supersequence(inst.sequences()).expect("validated instance");
    if s.len() <= inst.t() {
        (true, Some(s))
    } else {
        (false, None)
    }
}

/// Both sides of the reduction for one SCS instance.
#[derive(Debug, Clone, PartialEq)]
pub struct EquivalenceReport {
    pub scs: bool,
    pub scs_witness: Option<String>,
    pub middle: bool,
    /// First split of `I_t` admitting a middle curve, with its witness.
    pub split: Option<(usize, usize)>,
    pub witness: Option<ProvenancedCurve>,
}

/// `(scs answer, middle-curve answer)` for `variant`, with the middle-curve
/// side decided by brute force over every split `(a, b)` of `t` at
/// complexity `2t + 1`.
pub fn reduction_equivalence(inst: &ScsInstance, variant: Variant) -> Result<(bool, bool)> {
    let r = reduction_equivalence_with(inst, variant, &BruteForce::default())?;
    Ok((r.scs, r.middle))
}

pub fn reduction_equivalence_with(
    inst: &ScsInstance,
    variant: Variant,
    solver: &BruteForce,
) -> Result<EquivalenceReport> {
    let (scs, scs_witness) = scs_brute_force(inst);
    let ell = 2 * inst.t() + 1;
    for (a, b) in enumerate_it(inst.t()) {
        let ri = ReductionInstance::new(inst, a, b)?;
        let outcome = solver.solve(ri.curve_set(), REDUCTION_DELTA, ell, variant)?;
        if outcome.feasible {
            return Ok(EquivalenceReport {
                scs,
                scs_witness,
                middle: true,
                split: Some((a, b)),
                witness: outcome.witness,
            });
        }
    }
    Ok(EquivalenceReport {
        scs,
        scs_witness,
        middle: false,
        split: None,
        witness: None,
    })
}
