//! Grid-based `(1, ℓ)`-center approximation and the ball construction that
//! turns a center curve into a middle curve at most twice as far away.

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::geometry::{squared_distance, Curve, CurveSet, Point, Threshold};
use crate::middle::{
    max_discrete_frechet, pairwise_squared_distances, ProvenancedCurve, Variant, VertexRef,
};
use crate::search::{Candidate, SearchSpace, DEFAULT_MAX_CANDIDATES};

const APPROX_ADVICE: &str = "use a larger eps or a smaller ell";

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ApproxParams {
    pub ell: usize,
    pub eps: f64,
}

impl ApproxParams {
    pub fn new(ell: usize, eps: f64) -> Result<Self> {
        let p = ApproxParams { ell, eps };
        p.validate()?;
        Ok(p)
    }

    fn validate(&self) -> Result<()> {
        if self.ell == 0 {
            return Err(Error::InvalidArgument("ell must be at least 1".into()));
        }
        if !(self.eps > 0.0 && self.eps.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "eps must be positive, got {}",
                self.eps
            )));
        }
        Ok(())
    }
}

/// A center curve and its realized radius `max_P d_DF(center, P)`.
#[derive(Debug, Clone, PartialEq)]
pub struct CenterResult {
    pub center: Curve,
    pub radius: f64,
}

impl CenterResult {
    /// Wraps `center`, computing its radius against `ps`.
    pub fn evaluate(center: Curve, ps: &CurveSet) -> Result<Self> {
        let radius = max_discrete_frechet(&center, ps)?;
        Ok(CenterResult { center, radius })
    }
}

/// Everything `middle_approx` computes along the way.
#[derive(Debug, Clone, PartialEq)]
pub struct ApproxReport {
    pub center: CenterResult,
    pub middle: ProvenancedCurve,
    /// `max_P d_DF(middle, P)`.
    pub radius: f64,
}

/// Grid search for an approximate `(1, ℓ)`-center.
///
/// Trial radii are zero and all pairwise vertex distances and their halves.
/// For a trial radius `r > 0` the candidate vertices are the points of the
/// grid of spacing `eps·r/√d` (anchored at the origin) lying within
/// `(1+eps)·r` of some input vertex; at `r = 0` they are the input vertices.
/// A trial succeeds if some curve of at most `ℓ` candidates has radius at
/// most `(1 + eps/2)·r`, which always happens once `r` reaches the optimum.
/// The smallest successful trial radius is found by binary search and then
/// lowered geometrically by the factor `(1+eps)/(1+eps/2)` until a trial
/// fails, so the best center found is within `(1+eps)` of the optimum.
#[derive(Debug, Clone, Copy)]
pub struct GridApprox {
    /// Cap on grid size and on examined extensions per trial.
    pub max_candidates: u64,
}

impl Default for GridApprox {
    fn default() -> Self {
        GridApprox {
            max_candidates: DEFAULT_MAX_CANDIDATES,
        }
    }
}

impl GridApprox {
    pub fn new(max_candidates: u64) -> Self {
        GridApprox { max_candidates }
    }

    pub fn center(&self, ps: &CurveSet, ell: usize, eps: f64) -> Result<CenterResult> {
        ApproxParams::new(ell, eps)?;
        let radii: Vec<f64> = {
            let mut r: Vec<f64> = pairwise_squared_distances(ps)?
                .into_iter()
                .flat_map(|sq| [sq.sqrt(), sq.sqrt() / 2.0])
                .collect();
            r.sort_by(f64::total_cmp);
            r.dedup();
            r
        };

        let mut hi = radii.len() as i64 - 1;
        let mut best = self
            .trial(ps, ell, eps, radii[hi as usize])?
            .ok_or_else(|| Error::Internal("largest trial radius admits no center".into()))?;
        let mut lo: i64 = -1;
        while hi - lo > 1 {
            let mid = (lo + hi) / 2;
            match self.trial(ps, ell, eps, radii[mid as usize])? {
                Some(c) => {
                    hi = mid;
                    best = c;
                }
                None => lo = mid,
            }
        }

        if lo >= 0 {
            let floor = radii[lo as usize];
            let ratio = (1.0 + eps) / (1.0 + eps / 2.0);
            let mut r = radii[hi as usize];
            loop {
                r /= ratio;
                if r <= floor {
                    break;
                }
                match self.trial(ps, ell, eps, r)? {
                    Some(c) => {
                        if c.radius < best.radius {
                            best = c;
                        }
                    }
                    None => break,
                }
            }
        }
        Ok(best)
    }

    /// Center with radius at most `(1 + eps/2)·r`, if the grid for `r` has one.
    fn trial(&self, ps: &CurveSet, ell: usize, eps: f64, r: f64) -> Result<Option<CenterResult>> {
        let points = if r == 0.0 {
            distinct_vertices(ps)
        } else {
            self.grid(ps, r, eps)?
        };
        let candidates: Vec<Candidate> = points
            .into_iter()
            .map(|point| Candidate {
                point,
                source: None,
            })
            .collect();
        let threshold = Threshold::new((1.0 + eps / 2.0) * r)?;
        let space = SearchSpace::new(ps, candidates, &threshold, Variant::Unordered);
        let found = space
            .search(self.max_candidates, APPROX_ADVICE)
            .first_up_to(ell)?;
        found
            .map(|idx| {
                let vertices = idx
                    .iter()
                    .map(|&i| space.candidates()[i].point.clone())
                    .collect();
                CenterResult::evaluate(Curve::new("C", vertices)?, ps)
            })
            .transpose()
    }

    fn grid(&self, ps: &CurveSet, r: f64, eps: f64) -> Result<Vec<Point>> {
        let d = ps.dim();
        let spacing = eps * r / (d as f64).sqrt();
        let reach = (1.0 + eps) * r;
        let per_axis = (2.0 * reach / spacing).floor() + 1.0;
        let per_ball = per_axis.powi(d as i32);
        if per_ball * ps.vertex_count() as f64 > self.max_candidates as f64 {
            return Err(Error::ResourceLimit {
                limit: self.max_candidates,
                advice: APPROX_ADVICE,
            });
        }
        let mut cells: BTreeSet<Vec<i64>> = BTreeSet::new();
        for v in ps.iter().flat_map(|c| c.vertices()) {
            let lo: Vec<i64> = v
                .coords()
                .iter()
                .map(|x| ((x - reach) / spacing).ceil() as i64)
                .collect();
            let hi: Vec<i64> = v
                .coords()
                .iter()
                .map(|x| ((x + reach) / spacing).floor() as i64)
                .collect();
            let mut k = lo.clone();
            'cells: loop {
                let sq: f64 = k
                    .iter()
                    .zip(v.coords())
                    .map(|(&ki, x)| (ki as f64 * spacing - x).powi(2))
                    .sum();
                if sq <= reach * reach {
                    cells.insert(k.clone());
                }
                for axis in 0..d {
                    if k[axis] < hi[axis] {
                        k[axis] += 1;
                        continue 'cells;
                    }
                    k[axis] = lo[axis];
                }
                break;
            }
        }
        cells
            .into_iter()
            .map(|k| Point::new(k.into_iter().map(|ki| ki as f64 * spacing).collect()))
            .collect()
    }

    /// `center` with `eps / 2`, then [`build_middle_from_center`].
    pub fn middle(&self, ps: &CurveSet, params: ApproxParams) -> Result<ApproxReport> {
        params.validate()?;
        let center = self.center(ps, params.ell, params.eps / 2.0)?;
        let middle = build_middle_from_center(&center, ps)?;
        let radius = max_discrete_frechet(middle.curve(), ps)?;
        Ok(ApproxReport {
            center,
            middle,
            radius,
        })
    }
}

fn distinct_vertices(ps: &CurveSet) -> Vec<Point> {
    let mut out: Vec<Point> = Vec::new();
    for v in ps.iter().flat_map(|c| c.vertices()) {
        if !out.contains(v) {
            out.push(v.clone());
        }
    }
    out
}

/// Replaces every vertex of the center by the input vertex nearest to it
/// (ties by curve order, then index), which must lie within `c.radius`.
pub fn build_middle_from_center(c: &CenterResult, ps: &CurveSet) -> Result<ProvenancedCurve> {
    let mut refs = Vec::with_capacity(c.center.len());
    for (j, x) in c.center.vertices().iter().enumerate() {
        let mut nearest: Option<(f64, &str, usize)> = None;
        for curve in ps {
            for (k, v) in curve.vertices().iter().enumerate() {
                let sq = squared_distance(x, v)?;
                if nearest.is_none_or(|(best, _, _)| sq < best) {
                    nearest = Some((sq, curve.id(), k + 1));
                }
            }
        }
        let (sq, id, k) = nearest.expect("curve sets are non-empty");
        if sq.sqrt() > c.radius {
            return Err(Error::EmptyBall { vertex: j + 1 });
        }
        refs.push(VertexRef::new(id, k));
    }
    let m = ProvenancedCurve::resolve(refs, ps)?;
    let realized = max_discrete_frechet(m.curve(), ps)?;
    if realized > 2.0 * c.radius {
        return Err(Error::Internal(format!(
            "middle curve radius {realized} exceeds twice the center radius {}",
            c.radius
        )));
    }
    Ok(m)
}

pub fn center_grid_approx(ps: &CurveSet, ell: usize, eps: f64) -> Result<CenterResult> {
    GridApprox::default().center(ps, ell, eps)
}

/// Middle curve within `(2 + eps)` of the optimal unordered middle curve.
pub fn middle_approx(ps: &CurveSet, params: ApproxParams) -> Result<ProvenancedCurve> {
    GridApprox::default().middle(ps, params).map(|r| r.middle)
}
