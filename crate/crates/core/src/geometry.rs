//! Points, curves and curve sets, plus the distance primitives every other
//! module builds on.
//!
//! Threshold tests never take square roots: a pair of points is within
//! `delta` iff the squared distance is at most `delta²`. When both points and
//! the threshold are integral the comparison runs in `i128` arithmetic, so
//! boundary cases such as `|0 - (-1)| = 1` at `delta = 1` are decided exactly.

use std::collections::HashSet;
use std::fmt;

use crate::error::{Error, Result};

/// Largest magnitude for which every integer is representable in an `f64`.
const MAX_EXACT: f64 = 9_007_199_254_740_992.0;

fn as_exact_int(x: f64) -> Option<i128> {
    (x.fract() == 0.0 && x.abs() <= MAX_EXACT).then_some(x as i128)
}

/// A point in `R^d`.
#[derive(Debug, Clone, PartialEq)]
pub struct Point {
    coords: Vec<f64>,
}

impl Point {
    pub fn new(coords: Vec<f64>) -> Result<Self> {
        if coords.is_empty() {
            return Err(Error::ZeroDimension);
        }
        if let Some(bad) = coords.iter().find(|c| !c.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "non-finite coordinate {bad}"
            )));
        }
        Ok(Point { coords })
    }

    /// One-dimensional point. Panics on a non-finite value.
    pub fn scalar(x: f64) -> Self {
        Point::new(vec![x]).expect("finite scalar coordinate")
    }

    pub fn coords(&self) -> &[f64] {
        &self.coords
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    /// True if every coordinate is an integer that `f64` represents exactly.
    pub fn is_integral(&self) -> bool {
        self.coords.iter().all(|&c| as_exact_int(c).is_some())
    }

    fn exact_squared_distance(&self, other: &Point) -> Option<i128> {
        let mut sum = 0i128;
        for (&a, &b) in self.coords.iter().zip(&other.coords) {
            let diff = as_exact_int(a)? - as_exact_int(b)?;
            sum += diff * diff;
        }
        Some(sum)
    }

    fn float_squared_distance(&self, other: &Point) -> f64 {
        self.coords
            .iter()
            .zip(&other.coords)
            .map(|(a, b)| (a - b) * (a - b))
            .sum()
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let [x] = self.coords[..] {
            return write!(f, "{x}");
        }
        write!(f, "(")?;
        for (i, c) in self.coords.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

fn check_dims(a: &Point, b: &Point) -> Result<()> {
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch {
            expected: a.dim(),
            found: b.dim(),
        });
    }
    Ok(())
}

/// `Σ (a_i - b_i)²`.
pub fn squared_distance(a: &Point, b: &Point) -> Result<f64> {
    check_dims(a, b)?;
    Ok(match a.exact_squared_distance(b) {
        Some(exact) => exact as f64,
        None => a.float_squared_distance(b),
    })
}

pub fn distance(a: &Point, b: &Point) -> Result<f64> {
    squared_distance(a, b).map(f64::sqrt)
}

/// True iff `|a - b| <= delta`.
pub fn within(a: &Point, b: &Point, delta: f64) -> Result<bool> {
    check_dims(a, b)?;
    Ok(Threshold::new(delta)?.admits(a, b))
}

/// A distance bound stored as its square.
///
/// `exact` holds `delta²` as an integer when it is one; pairs of integral
/// points are then compared without rounding. A `delta` that is the rounded
/// square root of an integer `k` is taken to mean `sqrt(k)`, so a distance
/// printed by this crate can be passed back as a threshold.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Threshold {
    squared: f64,
    exact: Option<i128>,
    /// Set when built from `delta`: float distances rounding to it pass.
    rounded: Option<f64>,
}

impl Threshold {
    pub fn new(delta: f64) -> Result<Self> {
        if delta.is_nan() || delta < 0.0 {
            return Err(Error::InvalidArgument(format!(
                "distance threshold must be non-negative, got {delta}"
            )));
        }
        if let Some(d) = as_exact_int(delta) {
            if let Some(sq) = d.checked_mul(d) {
                return Ok(Threshold {
                    squared: delta * delta,
                    exact: Some(sq),
                    rounded: Some(delta),
                });
            }
        }
        let k = (delta * delta).round();
        if k <= MAX_EXACT && k.sqrt() == delta {
            return Ok(Threshold {
                squared: k,
                exact: Some(k as i128),
                rounded: Some(delta),
            });
        }
        Ok(Threshold {
            squared: delta * delta,
            exact: None,
            rounded: Some(delta),
        })
    }

    /// Threshold given directly by `delta²`; avoids a lossy square root when
    /// the bound comes from a squared pairwise distance.
    pub fn from_squared(squared: f64) -> Result<Self> {
        if squared.is_nan() || squared < 0.0 {
            return Err(Error::InvalidArgument(format!(
                "squared threshold must be non-negative, got {squared}"
            )));
        }
        Ok(Threshold {
            squared,
            exact: as_exact_int(squared),
            rounded: None,
        })
    }

    pub fn squared(&self) -> f64 {
        self.squared
    }

    pub fn delta(&self) -> f64 {
        self.squared.sqrt()
    }

    /// `|a - b| <= delta`. Dimensions are assumed to agree.
    pub fn admits(&self, a: &Point, b: &Point) -> bool {
        if let Some(bound) = self.exact {
            if let Some(d2) = a.exact_squared_distance(b) {
                return d2 <= bound;
            }
        }
        let d2 = a.float_squared_distance(b);
        d2 <= self.squared || self.rounded.is_some_and(|delta| d2.sqrt() <= delta)
    }
}

/// A polygonal curve: a non-empty vertex sequence of uniform dimension.
///
/// Consecutive duplicate vertices are kept as given.
#[derive(Debug, Clone, PartialEq)]
pub struct Curve {
    id: String,
    vertices: Vec<Point>,
}

impl Curve {
    pub fn new(id: impl Into<String>, vertices: Vec<Point>) -> Result<Self> {
        let id = id.into();
        let Some(first) = vertices.first() else {
            return Err(Error::EmptyCurve(id));
        };
        let d = first.dim();
        if let Some(v) = vertices.iter().find(|v| v.dim() != d) {
            return Err(Error::DimensionMismatch {
                expected: d,
                found: v.dim(),
            });
        }
        Ok(Curve { id, vertices })
    }

    /// One-dimensional curve from scalar values.
    pub fn from_scalars(id: impl Into<String>, values: &[f64]) -> Result<Self> {
        let vertices = values
            .iter()
            .map(|&x| Point::new(vec![x]))
            .collect::<Result<Vec<_>>>()?;
        Curve::new(id, vertices)
    }

    pub fn id(&self) -> &str {
        &self.id
    }

    pub fn vertices(&self) -> &[Point] {
        &self.vertices
    }

    /// Vertex at a 1-based index.
    pub fn vertex(&self, index: usize) -> Option<&Point> {
        index.checked_sub(1).and_then(|i| self.vertices.get(i))
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    /// Always false; curves have at least one vertex.
    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.vertices[0].dim()
    }

    pub fn is_integral(&self) -> bool {
        self.vertices.iter().all(Point::is_integral)
    }

    pub fn with_id(mut self, id: impl Into<String>) -> Self {
        self.id = id.into();
        self
    }

    /// First coordinate of every vertex.
    pub fn scalars(&self) -> Vec<f64> {
        self.vertices.iter().map(|p| p.coords[0]).collect()
    }
}

/// An ordered, non-empty collection of curves with unique ids and a common
/// dimension.
#[derive(Debug, Clone, PartialEq)]
pub struct CurveSet {
    curves: Vec<Curve>,
}

impl CurveSet {
    pub fn new(curves: Vec<Curve>) -> Result<Self> {
        let Some(first) = curves.first() else {
            return Err(Error::EmptyCurveSet);
        };
        let d = first.dim();
        let mut seen = HashSet::new();
        for c in &curves {
            if c.dim() != d {
                return Err(Error::DimensionMismatch {
                    expected: d,
                    found: c.dim(),
                });
            }
            if !seen.insert(c.id()) {
                return Err(Error::DuplicateId(c.id().to_string()));
            }
        }
        Ok(CurveSet { curves })
    }

    pub fn curves(&self) -> &[Curve] {
        &self.curves
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Curve> {
        self.curves.iter()
    }

    pub fn len(&self) -> usize {
        self.curves.len()
    }

    pub fn is_empty(&self) -> bool {
        self.curves.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.curves[0].dim()
    }

    pub fn position(&self, id: &str) -> Option<usize> {
        self.curves.iter().position(|c| c.id() == id)
    }

    pub fn get(&self, id: &str) -> Result<&Curve> {
        self.curves
            .iter()
            .find(|c| c.id() == id)
            .ok_or_else(|| Error::UnknownCurve(id.to_string()))
    }

    pub fn is_integral(&self) -> bool {
        self.curves.iter().all(Curve::is_integral)
    }

    /// Total number of vertices over all curves.
    pub fn vertex_count(&self) -> usize {
        self.curves.iter().map(Curve::len).sum()
    }

    pub fn into_curves(self) -> Vec<Curve> {
        self.curves
    }
}

impl<'a> IntoIterator for &'a CurveSet {
    type Item = &'a Curve;
    type IntoIter = std::slice::Iter<'a, Curve>;

    fn into_iter(self) -> Self::IntoIter {
        self.curves.iter()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn p(c: &[f64]) -> Point {
        Point::new(c.to_vec()).unwrap()
    }

    #[test]
    fn squared_distance_examples() {
        assert_eq!(squared_distance(&p(&[0.0]), &p(&[0.0])).unwrap(), 0.0);
        assert_eq!(squared_distance(&p(&[0.0]), &p(&[-3.0])).unwrap(), 9.0);
        assert_eq!(
            squared_distance(&p(&[1.0, 2.0]), &p(&[4.0, 6.0])).unwrap(),
            25.0
        );
    }

    #[test]
    fn within_examples() {
        assert!(within(&p(&[0.0]), &p(&[-1.0]), 1.0).unwrap());
        assert!(!within(&p(&[0.0]), &p(&[-2.0]), 1.0).unwrap());
        assert!(within(&p(&[0.0]), &p(&[0.0]), 0.0).unwrap());
    }

    #[test]
    fn dimension_mismatch_is_an_error() {
        assert!(matches!(
            squared_distance(&p(&[0.0]), &p(&[0.0, 1.0])),
            Err(Error::DimensionMismatch { .. })
        ));
        assert!(within(&p(&[0.0]), &p(&[0.0, 1.0]), 1.0).is_err());
    }

    #[test]
    fn negative_threshold_rejected() {
        assert!(Threshold::new(-1.0).is_err());
        assert!(Threshold::new(f64::NAN).is_err());
    }

    #[test]
    fn exact_comparison_beyond_f64_precision() {
        // 2^53 + 1 is not representable; 2^52 offsets are, and their squares
        // overflow the exact f64 range.
        let big = 4_503_599_627_370_496.0; // 2^52
        let a = p(&[big]);
        let b = p(&[-big]);
        let t = Threshold::new(2.0 * big).unwrap();
        assert!(t.admits(&a, &b));
        let t = Threshold::new(2.0 * big - 1.0).unwrap();
        assert!(!t.admits(&a, &b));
    }

    #[test]
    fn curve_validation() {
        assert!(matches!(Curve::new("x", vec![]), Err(Error::EmptyCurve(_))));
        assert!(Curve::new("x", vec![p(&[0.0]), p(&[0.0, 1.0])]).is_err());
        let c = Curve::from_scalars("c", &[0.0, 0.0, 1.0]).unwrap();
        assert_eq!(c.len(), 3);
        assert_eq!(c.vertex(1), Some(&p(&[0.0])));
        assert_eq!(c.vertex(0), None);
        assert_eq!(c.vertex(4), None);
    }

    #[test]
    fn curve_set_validation() {
        let a = Curve::from_scalars("a", &[0.0]).unwrap();
        let b = Curve::new("b", vec![p(&[0.0, 0.0])]).unwrap();
        assert!(matches!(CurveSet::new(vec![]), Err(Error::EmptyCurveSet)));
        assert!(matches!(
            CurveSet::new(vec![a.clone(), a.clone()]),
            Err(Error::DuplicateId(_))
        ));
        assert!(CurveSet::new(vec![a.clone(), b]).is_err());
        let set = CurveSet::new(vec![a]).unwrap();
        assert!(set.get("a").is_ok());
        assert!(matches!(set.get("z"), Err(Error::UnknownCurve(_))));
    }

    proptest! {
        #[test]
        fn within_is_symmetric(a in prop::collection::vec(-50.0f64..50.0, 2),
                               b in prop::collection::vec(-50.0f64..50.0, 2),
                               delta in 0.0f64..100.0) {
            let (a, b) = (p(&a), p(&b));
            prop_assert_eq!(within(&a, &b, delta).unwrap(), within(&b, &a, delta).unwrap());
        }

        #[test]
        fn within_is_monotone(a in -50i32..50, b in -50i32..50, d1 in 0u32..120, extra in 0u32..50) {
            let (a, b) = (p(&[a as f64]), p(&[b as f64]));
            if within(&a, &b, d1 as f64).unwrap() {
                prop_assert!(within(&a, &b, (d1 + extra) as f64).unwrap());
            }
        }

        #[test]
        fn integer_boundaries_are_exact(a in -1_000_000i64..1_000_000,
                                        b in -1_000_000i64..1_000_000,
                                        slack in -2i64..=2) {
            // Rational reference: |a - b| <= delta over the integers.
            let gap = (a - b).abs();
            let delta = (gap + slack).max(0);
            let expected = gap <= delta;
            prop_assert_eq!(
                within(&p(&[a as f64]), &p(&[b as f64]), delta as f64).unwrap(),
                expected
            );
        }
    }
}
