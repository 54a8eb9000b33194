//! Middle curves: provenance-tagged candidate curves, verification of the
//! unordered, ordered and restricted variants, and the exact brute-force
//! solver for the parameterised problem.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::frechet::{constrained_decision_with, discrete_decision_with, discrete_frechet};
use crate::geometry::{squared_distance, Curve, CurveSet, Threshold};
use crate::search::{Candidate, SearchSpace, DEFAULT_MAX_CANDIDATES};

/// Origin of a middle-curve vertex: a curve id and a 1-based vertex index.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct VertexRef {
    pub curve_id: String,
    pub index: usize,
}

impl VertexRef {
    pub fn new(curve_id: impl Into<String>, index: usize) -> Self {
        VertexRef {
            curve_id: curve_id.into(),
            index,
        }
    }
}

impl fmt::Display for VertexRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}[{}]", self.curve_id, self.index)
    }
}

/// A candidate middle curve whose vertices carry their origin.
#[derive(Debug, Clone, PartialEq)]
pub struct ProvenancedCurve {
    refs: Vec<VertexRef>,
    curve: Curve,
}

impl ProvenancedCurve {
    /// Resolves `refs` against `ps`; fails on an unknown curve or index.
    pub fn resolve(refs: Vec<VertexRef>, ps: &CurveSet) -> Result<Self> {
        let vertices = refs
            .iter()
            .map(|r| lookup(r, ps).cloned())
            .collect::<Result<Vec<_>>>()?;
        if vertices.is_empty() {
            return Err(Error::InvalidArgument(
                "middle curve has no vertices".into(),
            ));
        }
        let curve = Curve::new("M", vertices)?;
        Ok(ProvenancedCurve { refs, curve })
    }

    pub fn refs(&self) -> &[VertexRef] {
        &self.refs
    }

    pub fn curve(&self) -> &Curve {
        &self.curve
    }

    pub fn len(&self) -> usize {
        self.refs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.refs.is_empty()
    }
}

fn lookup<'a>(r: &VertexRef, ps: &'a CurveSet) -> Result<&'a crate::geometry::Point> {
    ps.get(&r.curve_id)?
        .vertex(r.index)
        .ok_or_else(|| Error::InvalidIndex {
            curve: r.curve_id.clone(),
            index: r.index,
        })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Variant {
    Unordered,
    Ordered,
    Restricted,
}

impl Variant {
    pub const ALL: [Variant; 3] = [Variant::Unordered, Variant::Ordered, Variant::Restricted];

    pub fn as_str(self) -> &'static str {
        match self {
            Variant::Unordered => "unordered",
            Variant::Ordered => "ordered",
            Variant::Restricted => "restricted",
        }
    }
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Variant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "unordered" => Ok(Variant::Unordered),
            "ordered" => Ok(Variant::Ordered),
            "restricted" => Ok(Variant::Restricted),
            other => Err(Error::InvalidArgument(format!(
                "unknown variant `{other}` (expected unordered, ordered or restricted)"
            ))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolveOutcome {
    pub feasible: bool,
    pub witness: Option<ProvenancedCurve>,
    /// Realised `max_P d_DF(witness, P)` for a decision, or the optimal
    /// radius for an optimisation.
    pub radius: Option<f64>,
}

impl SolveOutcome {
    fn infeasible() -> Self {
        SolveOutcome {
            feasible: false,
            witness: None,
            radius: None,
        }
    }
}

/// Decides whether `m` is a middle curve of the given variant at distance
/// `delta` to every curve of `ps`.
///
/// The ordered condition is checked per input curve with the strict bound
/// `k < k'`: if position `i` of `m` is matched to column `k` of `P` and some
/// later position has provenance `(P, k')`, then `k < k'`. The restricted
/// variant additionally forces every vertex taken from `P` to be matched to
/// itself. The matching may be chosen independently for each curve.
pub fn verify(m: &ProvenancedCurve, ps: &CurveSet, delta: f64, variant: Variant) -> Result<bool> {
    let threshold = Threshold::new(delta)?;
    verify_with(m, ps, &threshold, variant)
}

pub(crate) fn verify_with(
    m: &ProvenancedCurve,
    ps: &CurveSet,
    threshold: &Threshold,
    variant: Variant,
) -> Result<bool> {
    for (r, v) in m.refs.iter().zip(m.curve.vertices()) {
        if lookup(r, ps)? != v {
            return Err(Error::InvalidArgument(format!(
                "vertex {r} does not match the curve set it is checked against"
            )));
        }
    }
    if m.curve.dim() != ps.dim() {
        return Err(Error::DimensionMismatch {
            expected: ps.dim(),
            found: m.curve.dim(),
        });
    }
    for p in ps {
        let ok = match variant {
            Variant::Unordered => discrete_decision_with(&m.curve, p, threshold),
            Variant::Ordered => {
                constrained_decision_with(&m.curve, p, threshold, &[], &ordered_caps(m, p.id()))?
            }
            Variant::Restricted => {
                let forced: Vec<(usize, usize)> = m
                    .refs
                    .iter()
                    .enumerate()
                    .filter(|(_, r)| r.curve_id == p.id())
                    .map(|(i, r)| (i + 1, r.index))
                    .collect();
                constrained_decision_with(
                    &m.curve,
                    p,
                    threshold,
                    &forced,
                    &ordered_caps(m, p.id()),
                )?
            }
        };
        if !ok {
            return Ok(false);
        }
    }
    Ok(true)
}

/// `caps[i] = min { k' : some position after i has provenance (id, k') }`.
fn ordered_caps(m: &ProvenancedCurve, id: &str) -> Vec<Option<usize>> {
    let mut caps = vec![None; m.len()];
    let mut running: Option<usize> = None;
    for i in (0..m.len()).rev() {
        caps[i] = running;
        let r = &m.refs[i];
        if r.curve_id == id {
            running = Some(running.map_or(r.index, |c| c.min(r.index)));
        }
    }
    caps
}

/// `max_P d_DF(curve, P)`.
pub fn max_discrete_frechet(curve: &Curve, ps: &CurveSet) -> Result<f64> {
    let mut worst = 0.0f64;
    for p in ps {
        worst = worst.max(discrete_frechet(curve, p)?.squared);
    }
    Ok(worst.sqrt())
}

/// Exhaustive solver over all vertex tuples of length `1..=ell`.
///
/// Candidates are enumerated by length, then lexicographically by (curve
/// order, vertex index); the first one that verifies is returned. For the
/// unordered variant vertices at the same location are merged first
/// (keeping the earliest reference). Tuples that repeat a vertex
/// consecutively are skipped; such a repeat never makes a candidate
/// feasible.
#[derive(Debug, Clone, Copy)]
pub struct BruteForce {
    pub max_candidates: u64,
}

impl Default for BruteForce {
    fn default() -> Self {
        BruteForce {
            max_candidates: DEFAULT_MAX_CANDIDATES,
        }
    }
}

const SOLVE_ADVICE: &str = "use a smaller ell or raise the candidate limit";

impl BruteForce {
    pub fn new(max_candidates: u64) -> Self {
        BruteForce { max_candidates }
    }

    pub fn solve(
        &self,
        ps: &CurveSet,
        delta: f64,
        ell: usize,
        variant: Variant,
    ) -> Result<SolveOutcome> {
        let threshold = Threshold::new(delta)?;
        self.solve_with(ps, &threshold, ell, variant)
    }

    fn solve_with(
        &self,
        ps: &CurveSet,
        threshold: &Threshold,
        ell: usize,
        variant: Variant,
    ) -> Result<SolveOutcome> {
        if ell == 0 {
            return Err(Error::InvalidArgument("ell must be at least 1".into()));
        }
        let space = SearchSpace::new(ps, universe(ps, variant), threshold, variant);
        let Some(found) = space
            .search(self.max_candidates, SOLVE_ADVICE)
            .first_up_to(ell)?
        else {
            return Ok(SolveOutcome::infeasible());
        };
        let refs = found
            .iter()
            .map(|&c| {
                let (curve, k) = space.candidates()[c]
                    .source
                    .expect("input vertices carry provenance");
                VertexRef::new(ps.curves()[curve].id(), k + 1)
            })
            .collect();
        let witness = ProvenancedCurve::resolve(refs, ps)?;
        if !verify_with(&witness, ps, threshold, variant)? {
            return Err(Error::Internal(format!(
                "search accepted a {variant} candidate that fails verification"
            )));
        }
        let radius = max_discrete_frechet(witness.curve(), ps)?;
        Ok(SolveOutcome {
            feasible: true,
            witness: Some(witness),
            radius: Some(radius),
        })
    }

    /// Smallest radius at which a middle curve of complexity `<= ell`
    /// exists, found by binary search over the squared pairwise vertex
    /// distances (the optimum is always one of them).
    pub fn optimize(&self, ps: &CurveSet, ell: usize, variant: Variant) -> Result<SolveOutcome> {
        if ell == 0 {
            return Err(Error::InvalidArgument("ell must be at least 1".into()));
        }
        let radii = pairwise_squared_distances(ps)?;
        let (mut lo, mut hi) = (0usize, radii.len() - 1);
        let mut best = self.solve_with(ps, &Threshold::from_squared(radii[hi])?, ell, variant)?;
        if !best.feasible {
            return Err(Error::Internal(
                "no middle curve at the largest pairwise distance".into(),
            ));
        }
        while lo < hi {
            let mid = (lo + hi) / 2;
            let outcome =
                self.solve_with(ps, &Threshold::from_squared(radii[mid])?, ell, variant)?;
            if outcome.feasible {
                hi = mid;
                best = outcome;
            } else {
                lo = mid + 1;
            }
        }
        best.radius = Some(radii[hi].sqrt());
        Ok(best)
    }
}

pub fn brute_force_solve(
    ps: &CurveSet,
    delta: f64,
    ell: usize,
    variant: Variant,
) -> Result<SolveOutcome> {
    BruteForce::default().solve(ps, delta, ell, variant)
}

pub fn brute_force_optimize(ps: &CurveSet, ell: usize, variant: Variant) -> Result<SolveOutcome> {
    BruteForce::default().optimize(ps, ell, variant)
}

/// Input vertices in (curve order, index) order, merged by location for the
/// unordered variant.
fn universe(ps: &CurveSet, variant: Variant) -> Vec<Candidate> {
    let mut out: Vec<Candidate> = Vec::with_capacity(ps.vertex_count());
    for (ci, curve) in ps.iter().enumerate() {
        for (k, v) in curve.vertices().iter().enumerate() {
            if variant == Variant::Unordered && out.iter().any(|c| &c.point == v) {
                continue;
            }
            out.push(Candidate {
                point: v.clone(),
                source: Some((ci, k)),
            });
        }
    }
    out
}

/// Sorted distinct squared distances between all pairs of input vertices,
/// including zero.
pub(crate) fn pairwise_squared_distances(ps: &CurveSet) -> Result<Vec<f64>> {
    let all: Vec<_> = ps.iter().flat_map(|c| c.vertices()).collect();
    let mut out = vec![0.0];
    for (i, a) in all.iter().enumerate() {
        for b in &all[i + 1..] {
            out.push(squared_distance(a, b)?);
        }
    }
    out.sort_by(f64::total_cmp);
    out.dedup();
    Ok(out)
}
