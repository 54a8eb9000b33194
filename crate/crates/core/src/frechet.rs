//! Discrete Fréchet distance (value, decision, witness traversal), a
//! constrained variant of the discrete decision, and the continuous Fréchet
//! decision on the free-space diagram.

use crate::error::{Error, Result};
use crate::geometry::{squared_distance, Curve, Point, Threshold};

/// Slack applied to free-space interval endpoints, in curve-parameter units.
pub const FREE_SPACE_EPS: f64 = 1e-9;

/// A monotone walk through the index grid of two curves. Indices are 1-based.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Traversal {
    pairs: Vec<(usize, usize)>,
}

impl Traversal {
    pub fn new(pairs: Vec<(usize, usize)>) -> Self {
        Traversal { pairs }
    }

    pub fn pairs(&self) -> &[(usize, usize)] {
        &self.pairs
    }

    /// Checks the start/end and step conditions against curve lengths.
    pub fn is_valid_for(&self, first_len: usize, second_len: usize) -> bool {
        let (Some(&start), Some(&end)) = (self.pairs.first(), self.pairs.last()) else {
            return false;
        };
        start == (1, 1)
            && end == (first_len, second_len)
            && self.pairs.windows(2).all(|w| {
                let ((i, j), (k, l)) = (w[0], w[1]);
                k >= i && l >= j && matches!((k - i, l - j), (1, 0) | (0, 1) | (1, 1))
            })
    }
}

impl std::fmt::Display for Traversal {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        for (n, (i, j)) in self.pairs.iter().enumerate() {
            if n > 0 {
                write!(f, " ")?;
            }
            write!(f, "({i},{j})")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FrechetResult {
    pub value: f64,
    pub squared: f64,
    pub witness: Traversal,
}

fn same_dim(p: &Curve, q: &Curve) -> Result<()> {
    if p.dim() != q.dim() {
        return Err(Error::DimensionMismatch {
            expected: p.dim(),
            found: q.dim(),
        });
    }
    Ok(())
}

/// Discrete Fréchet distance by the `O(|p|·|q|)` dynamic program on squared
/// distances, with a witness traversal.
///
/// Backtracking prefers the diagonal predecessor, then the one that advances
/// along `p`, then the one that advances along `q`.
pub fn discrete_frechet(p: &Curve, q: &Curve) -> Result<FrechetResult> {
    same_dim(p, q)?;
    let (m, n) = (p.len(), q.len());
    let mut dp = vec![0.0f64; m * n];
    let at = |i: usize, j: usize| i * n + j;
    for i in 0..m {
        for j in 0..n {
            let d = squared_distance(&p.vertices()[i], &q.vertices()[j])?;
            let best = match (i, j) {
                (0, 0) => d,
                (0, _) => dp[at(0, j - 1)],
                (_, 0) => dp[at(i - 1, 0)],
                _ => dp[at(i - 1, j - 1)]
                    .min(dp[at(i - 1, j)])
                    .min(dp[at(i, j - 1)]),
            };
            dp[at(i, j)] = d.max(best);
        }
    }

    let mut pairs = Vec::with_capacity(m + n);
    let (mut i, mut j) = (m - 1, n - 1);
    pairs.push((i + 1, j + 1));
    while (i, j) != (0, 0) {
        (i, j) = match (i, j) {
            (0, _) => (0, j - 1),
            (_, 0) => (i - 1, 0),
            _ => {
                let diag = dp[at(i - 1, j - 1)];
                let up = dp[at(i - 1, j)];
                let left = dp[at(i, j - 1)];
                if diag <= up && diag <= left {
                    (i - 1, j - 1)
                } else if up <= left {
                    (i - 1, j)
                } else {
                    (i, j - 1)
                }
            }
        };
        pairs.push((i + 1, j + 1));
    }
    pairs.reverse();

    let squared = dp[at(m - 1, n - 1)];
    Ok(FrechetResult {
        value: squared.sqrt(),
        squared,
        witness: Traversal::new(pairs),
    })
}

/// True iff some traversal keeps every matched pair within `delta`.
pub fn discrete_frechet_decision(p: &Curve, q: &Curve, delta: f64) -> Result<bool> {
    same_dim(p, q)?;
    let threshold = Threshold::new(delta)?;
    Ok(discrete_decision_with(p, q, &threshold))
}

pub(crate) fn discrete_decision_with(p: &Curve, q: &Curve, threshold: &Threshold) -> bool {
    let n = q.len();
    let mut prev = vec![false; n];
    let mut row = vec![false; n];
    for (i, a) in p.vertices().iter().enumerate() {
        for (j, b) in q.vertices().iter().enumerate() {
            let from = if i == 0 && j == 0 {
                true
            } else {
                (i > 0 && prev[j]) || (j > 0 && row[j - 1]) || (i > 0 && j > 0 && prev[j - 1])
            };
            row[j] = from && threshold.admits(a, b);
        }
        std::mem::swap(&mut prev, &mut row);
        if !prev.iter().any(|&r| r) {
            return false;
        }
    }
    prev[n - 1]
}

/// Discrete decision with extra constraints on the traversal.
///
/// `forced` lists 1-based cells `(i, j)` that must lie on the traversal; their
/// `i` must be strictly increasing. `column_caps[i - 1] = Some(c)` admits only
/// cells `(i, j)` with `j < c`; `None` leaves row `i` unconstrained. Forced
/// cells that decrease in `j` can never lie on one monotone walk, so the
/// answer is `false` in that case.
pub fn constrained_discrete_decision(
    p: &Curve,
    q: &Curve,
    delta: f64,
    forced: &[(usize, usize)],
    column_caps: &[Option<usize>],
) -> Result<bool> {
    same_dim(p, q)?;
    let threshold = Threshold::new(delta)?;
    constrained_decision_with(p, q, &threshold, forced, column_caps)
}

pub(crate) fn constrained_decision_with(
    p: &Curve,
    q: &Curve,
    threshold: &Threshold,
    forced: &[(usize, usize)],
    column_caps: &[Option<usize>],
) -> Result<bool> {
    let (m, n) = (p.len(), q.len());
    if column_caps.len() != m {
        return Err(Error::InvalidArgument(format!(
            "expected {m} column caps, got {}",
            column_caps.len()
        )));
    }
    if let Some(c) = column_caps.iter().flatten().find(|&&c| c == 0 || c > n) {
        return Err(Error::InvalidArgument(format!(
            "column cap {c} outside 1..={n}"
        )));
    }
    for &(i, j) in forced {
        if i == 0 || i > m || j == 0 || j > n {
            return Err(Error::InvalidArgument(format!(
                "forced cell ({i},{j}) outside the {m}x{n} grid"
            )));
        }
    }
    if forced.windows(2).any(|w| w[1].0 <= w[0].0) {
        return Err(Error::InvalidArgument(
            "forced cells must have strictly increasing first index".into(),
        ));
    }
    if forced.windows(2).any(|w| w[1].1 < w[0].1) {
        return Ok(false);
    }

    let allowed = |i: usize, j: usize| {
        column_caps[i].is_none_or(|c| j + 1 < c)
            && threshold.admits(&p.vertices()[i], &q.vertices()[j])
    };

    let mut waypoints = Vec::with_capacity(forced.len() + 2);
    waypoints.push((0, 0));
    waypoints.extend(forced.iter().map(|&(i, j)| (i - 1, j - 1)));
    waypoints.push((m - 1, n - 1));

    for w in waypoints.windows(2) {
        let ((si, sj), (ei, ej)) = (w[0], w[1]);
        if !allowed(si, sj) {
            return Ok(false);
        }
        // Reachability inside the rectangle spanned by the two waypoints.
        let width = ej - sj + 1;
        let mut prev = vec![false; width];
        let mut row = vec![false; width];
        for i in si..=ei {
            for (c, j) in (sj..=ej).enumerate() {
                let from = if (i, j) == (si, sj) {
                    true
                } else {
                    (i > si && prev[c]) || (c > 0 && row[c - 1]) || (i > si && c > 0 && prev[c - 1])
                };
                row[c] = from && allowed(i, j);
            }
            std::mem::swap(&mut prev, &mut row);
        }
        if !prev[width - 1] {
            return Ok(false);
        }
    }
    Ok(true)
}

type Interval = Option<(f64, f64)>;

struct FreeSpace {
    delta_sq: f64,
    slack: f64,
}

impl FreeSpace {
    fn new(delta_sq: f64) -> Self {
        FreeSpace {
            delta_sq,
            slack: FREE_SPACE_EPS * (1.0 + delta_sq),
        }
    }

    fn near(&self, a: &Point, b: &Point) -> bool {
        let d2: f64 = dot_diff(a.coords(), b.coords(), a.coords(), b.coords());
        d2 <= self.delta_sq + self.slack
    }

    /// Parameters `t ∈ [0, 1]` with `|start + t·(end - start) - centre| <= delta`.
    fn interval(&self, centre: &Point, start: &Point, end: &Point) -> Interval {
        let (c, a, b) = (centre.coords(), start.coords(), end.coords());
        let len_sq = dot_diff(b, a, b, a);
        let w_sq = dot_diff(a, c, a, c);
        if len_sq == 0.0 {
            return (w_sq <= self.delta_sq + self.slack).then_some((0.0, 1.0));
        }
        let vw = dot_diff(b, a, a, c);
        let t0 = -vw / len_sq;
        let line_sq = w_sq - vw * vw / len_sq;
        let h_sq = self.delta_sq - line_sq;
        if h_sq < -self.slack {
            return None;
        }
        let half = (h_sq.max(0.0) / len_sq).sqrt();
        let lo = (t0 - half - FREE_SPACE_EPS).max(0.0);
        let hi = (t0 + half + FREE_SPACE_EPS).min(1.0);
        (lo <= hi).then_some((lo, hi))
    }
}

fn dot_diff(a: &[f64], b: &[f64], c: &[f64], d: &[f64]) -> f64 {
    (0..a.len()).map(|k| (a[k] - b[k]) * (c[k] - d[k])).sum()
}

/// Continuous Fréchet decision: is `d_F(p, q) <= delta`?
///
/// Builds the free intervals on every cell boundary of the free-space
/// diagram and propagates monotone reachability from the lower-left corner.
/// A single-vertex curve is a point traversed by the constant map.
pub fn continuous_frechet_decision(p: &Curve, q: &Curve, delta: f64) -> Result<bool> {
    same_dim(p, q)?;
    let threshold = Threshold::new(delta)?;
    let fs = FreeSpace::new(threshold.squared());
    let (pv, qv) = (p.vertices(), q.vertices());
    let (m, n) = (pv.len(), qv.len());

    if m == 1 || n == 1 {
        // Balls are convex, so a point is within delta of a polygonal curve
        // iff it is within delta of every vertex.
        return Ok(pv.iter().all(|a| qv.iter().all(|b| fs.near(a, b))));
    }
    if !fs.near(&pv[0], &qv[0]) || !fs.near(&pv[m - 1], &qv[n - 1]) {
        return Ok(false);
    }

    // left[i][j]: vertical boundary at p-vertex i over q-segment j.
    // bottom[i][j]: horizontal boundary at q-vertex j over p-segment i.
    let left_free: Vec<Vec<Interval>> = (0..m)
        .map(|i| {
            (0..n - 1)
                .map(|j| fs.interval(&pv[i], &qv[j], &qv[j + 1]))
                .collect()
        })
        .collect();
    let bottom_free: Vec<Vec<Interval>> = (0..m - 1)
        .map(|i| {
            (0..n)
                .map(|j| fs.interval(&qv[j], &pv[i], &pv[i + 1]))
                .collect()
        })
        .collect();

    let mut left: Vec<Vec<Interval>> = vec![vec![None; n - 1]; m];
    let mut bottom: Vec<Vec<Interval>> = vec![vec![None; n]; m - 1];

    let mut open = true;
    for j in 0..n - 1 {
        left[0][j] = match left_free[0][j] {
            Some((lo, hi)) if open && lo == 0.0 => Some((lo, hi)),
            _ => None,
        };
        open = matches!(left[0][j], Some((_, hi)) if hi >= 1.0);
    }
    open = true;
    for i in 0..m - 1 {
        bottom[i][0] = match bottom_free[i][0] {
            Some((lo, hi)) if open && lo == 0.0 => Some((lo, hi)),
            _ => None,
        };
        open = matches!(bottom[i][0], Some((_, hi)) if hi >= 1.0);
    }

    for i in 0..m - 1 {
        for j in 0..n - 1 {
            let (l, b) = (left[i][j], bottom[i][j]);
            bottom[i][j + 1] = match (l, b, bottom_free[i][j + 1]) {
                (_, _, None) => None,
                (Some(_), _, free) => free,
                (None, Some((from, _)), Some((lo, hi))) => {
                    let lo = lo.max(from);
                    (lo <= hi).then_some((lo, hi))
                }
                (None, None, _) => None,
            };
            left[i + 1][j] = match (b, l, left_free[i + 1][j]) {
                (_, _, None) => None,
                (Some(_), _, free) => free,
                (None, Some((from, _)), Some((lo, hi))) => {
                    let lo = lo.max(from);
                    (lo <= hi).then_some((lo, hi))
                }
                (None, None, _) => None,
            };
        }
    }

    let reaches_top = |iv: Interval| matches!(iv, Some((_, hi)) if hi >= 1.0);
    Ok(reaches_top(left[m - 1][n - 2]) || reaches_top(bottom[m - 2][n - 1]))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(values: &[f64]) -> Curve {
        Curve::from_scalars("c", values).unwrap()
    }

    fn c2(points: &[(f64, f64)]) -> Curve {
        Curve::new(
            "c",
            points
                .iter()
                .map(|&(x, y)| Point::new(vec![x, y]).unwrap())
                .collect(),
        )
        .unwrap()
    }

    /// Minimum over every traversal of the maximum pair distance, by explicit
    /// enumeration of all monotone walks.
    fn brute_force_value(p: &Curve, q: &Curve) -> f64 {
        fn walk(p: &Curve, q: &Curve, i: usize, j: usize, worst: f64, best: &mut f64) {
            let d = squared_distance(&p.vertices()[i], &q.vertices()[j]).unwrap();
            let worst = worst.max(d);
            if (i, j) == (p.len() - 1, q.len() - 1) {
                *best = best.min(worst);
                return;
            }
            if i + 1 < p.len() {
                walk(p, q, i + 1, j, worst, best);
            }
            if j + 1 < q.len() {
                walk(p, q, i, j + 1, worst, best);
            }
            if i + 1 < p.len() && j + 1 < q.len() {
                walk(p, q, i + 1, j + 1, worst, best);
            }
        }
        let mut best = f64::INFINITY;
        walk(p, q, 0, 0, 0.0, &mut best);
        best.sqrt()
    }

    #[test]
    fn discrete_value_examples() {
        assert_eq!(discrete_frechet(&c(&[0.0]), &c(&[5.0])).unwrap().value, 5.0);
        assert_eq!(
            discrete_frechet(&c(&[0.0, 2.0]), &c(&[0.0, 2.0]))
                .unwrap()
                .value,
            0.0
        );
        let r = discrete_frechet(&c(&[0.0, 2.0]), &c(&[0.0, 4.0])).unwrap();
        assert_eq!(r.value, brute_force_value(&c(&[0.0, 2.0]), &c(&[0.0, 4.0])));
        assert_eq!(r.value, 2.0);
        assert_eq!(r.witness.pairs(), &[(1, 1), (2, 2)]);
    }

    #[test]
    fn witness_tie_break_prefers_diagonal() {
        // Every cell is at distance 0, so every predecessor ties.
        let r = discrete_frechet(&c(&[1.0, 1.0, 1.0]), &c(&[1.0, 1.0])).unwrap();
        assert_eq!(r.witness.pairs(), &[(1, 1), (2, 1), (3, 2)]);
        assert!(r.witness.is_valid_for(3, 2));
    }

    #[test]
    fn decision_examples() {
        let (p, q) = (c(&[0.0, 2.0]), c(&[0.0, 4.0]));
        assert!(discrete_frechet_decision(&p, &q, 2.0).unwrap());
        assert!(!discrete_frechet_decision(&p, &q, 1.9).unwrap());
        let r = c(&[3.0, -1.0, 4.0, 1.5]);
        assert!(discrete_frechet_decision(&r, &r, 0.0).unwrap());
    }

    #[test]
    fn dimension_mismatch() {
        let p = c(&[0.0]);
        let q = c2(&[(0.0, 0.0)]);
        assert!(discrete_frechet(&p, &q).is_err());
        assert!(discrete_frechet_decision(&p, &q, 1.0).is_err());
        assert!(continuous_frechet_decision(&p, &q, 1.0).is_err());
    }

    #[test]
    fn continuous_examples() {
        assert!(continuous_frechet_decision(&c(&[0.0, 2.0]), &c(&[1.0]), 1.0).unwrap());
        assert!(!continuous_frechet_decision(&c(&[0.0, 2.0]), &c(&[1.0]), 0.99).unwrap());
        let p = c(&[0.0, 3.0, -2.0, 5.0]);
        assert!(continuous_frechet_decision(&p, &p, 0.0).unwrap());
        assert!(continuous_frechet_decision(&c(&[0.0, 2.0]), &c(&[0.0, 4.0]), 2.0).unwrap());
    }

    #[test]
    fn continuous_is_below_discrete_on_subdivided_segment() {
        // Same segment, different sampling: continuous distance 0, discrete 1.
        let p = c(&[0.0, 2.0]);
        let q = c(&[0.0, 1.0, 2.0]);
        assert_eq!(discrete_frechet(&p, &q).unwrap().value, 1.0);
        assert!(continuous_frechet_decision(&p, &q, 0.0).unwrap());
    }

    #[test]
    fn continuous_detects_backtracking() {
        // q runs out to 4 and back to 2; p goes straight. d_F = 1 (2 vs the
        // turn at 4 when p sits at 3).
        let p = c(&[0.0, 3.0]);
        let q = c(&[0.0, 4.0, 2.0, 3.0]);
        assert!(continuous_frechet_decision(&p, &q, 1.0).unwrap());
        assert!(!continuous_frechet_decision(&p, &q, 0.9).unwrap());
    }

    #[test]
    fn continuous_two_dimensional_square_corner() {
        // Diagonal shortcut vs. going around the corner of the unit square:
        // the corner (1,0) is at distance 1/sqrt(2) from the diagonal midpoint.
        let p = c2(&[(0.0, 0.0), (1.0, 1.0)]);
        let q = c2(&[(0.0, 0.0), (1.0, 0.0), (1.0, 1.0)]);
        let h = std::f64::consts::FRAC_1_SQRT_2;
        assert!(continuous_frechet_decision(&p, &q, h + 1e-12).unwrap());
        assert!(!continuous_frechet_decision(&p, &q, h - 1e-6).unwrap());
    }

    #[test]
    fn constrained_examples() {
        let (p, q) = (c(&[0.0, 2.0]), c(&[0.0, 4.0]));
        for delta in [1.0, 2.0, 3.0] {
            assert_eq!(
                constrained_discrete_decision(&p, &q, delta, &[], &[None, None]).unwrap(),
                discrete_frechet_decision(&p, &q, delta).unwrap()
            );
        }
        let (p, q) = (c(&[1.0, 0.0]), c(&[0.0, 1.0]));
        assert!(
            !constrained_discrete_decision(&p, &q, 1.0, &[(1, 2), (2, 1)], &[None, None]).unwrap()
        );
        let p = c(&[0.0, 1.0]);
        assert!(
            constrained_discrete_decision(&p, &p, 0.0, &[(1, 1), (2, 2)], &[None, None]).unwrap()
        );
    }

    #[test]
    fn constrained_caps_and_forced_cells() {
        let p = c(&[0.0, 0.0, 0.0]);
        let q = c(&[0.0, 0.0, 0.0]);
        // Row 1 may only use column 1; row 2 only columns < 3.
        assert!(
            constrained_discrete_decision(&p, &q, 0.0, &[], &[Some(2), Some(3), None]).unwrap()
        );
        // Forcing (2,3) contradicts the cap on row 2.
        assert!(
            !constrained_discrete_decision(&p, &q, 0.0, &[(2, 3)], &[Some(2), Some(3), None])
                .unwrap()
        );
        // A diagonal step may not skip a forced cell.
        let q = c(&[0.0, 0.0]);
        assert!(constrained_discrete_decision(&p, &q, 0.0, &[(2, 1)], &[None; 3]).unwrap());
        assert!(
            !constrained_discrete_decision(&p, &q, 0.0, &[(1, 2), (2, 1)], &[None; 3]).unwrap()
        );
    }

    #[test]
    fn constrained_rejects_malformed_input() {
        let p = c(&[0.0, 1.0]);
        assert!(constrained_discrete_decision(&p, &p, 1.0, &[], &[None]).is_err());
        assert!(constrained_discrete_decision(&p, &p, 1.0, &[], &[Some(0), None]).is_err());
        assert!(constrained_discrete_decision(&p, &p, 1.0, &[], &[Some(3), None]).is_err());
        assert!(constrained_discrete_decision(&p, &p, 1.0, &[(3, 1)], &[None, None]).is_err());
        assert!(
            constrained_discrete_decision(&p, &p, 1.0, &[(1, 1), (1, 2)], &[None, None]).is_err()
        );
    }

    #[test]
    fn traversal_validity() {
        assert!(Traversal::new(vec![(1, 1), (2, 2), (2, 3)]).is_valid_for(2, 3));
        assert!(!Traversal::new(vec![(1, 1), (2, 3)]).is_valid_for(2, 3));
        assert!(!Traversal::new(vec![(1, 1), (2, 2)]).is_valid_for(2, 3));
        assert!(!Traversal::new(vec![(1, 2), (2, 3)]).is_valid_for(2, 3));
        assert!(!Traversal::new(vec![]).is_valid_for(1, 1));
    }
}
