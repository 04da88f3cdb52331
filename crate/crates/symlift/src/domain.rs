//! Sample domains, points, and the canonical forms of m-tuples.
//!
//! Two kinds of domain are supported: exact symbolic labels (compared for
//! equality only, discrete metric) and d-dimensional euclidean points.
//! Points carry a total order so that every canonical form below is
//! deterministic.

use std::cmp::Ordering;
use std::fmt;

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PointDomain {
    Labels,
    Euclidean { dim: usize },
}

impl PointDomain {
    /// Checks one point against the domain.
    pub fn admits(&self, p: &Point) -> bool {
        match (self, p) {
            (PointDomain::Labels, Point::Label(_)) => true,
            (PointDomain::Euclidean { dim }, Point::Coords(c)) => c.len() == *dim,
            _ => false,
        }
    }
}

/// A single point. A tuple never mixes labels with coordinates.
/// Coordinates are always finite; -0.0 is normalized to 0.0 at construction
/// so that order-equality and zero distance coincide.
#[derive(Clone, Debug)]
pub enum Point {
    Label(String),
    Coords(Vec<f64>),
}

impl Point {
    pub fn label(s: impl Into<String>) -> Point {
        Point::Label(s.into())
    }

    /// Builds a coordinate point, normalizing -0.0 and rejecting non-finite
    /// entries.
    pub fn coords(v: Vec<f64>) -> Result<Point> {
        if v.is_empty() {
            return Err(Error::InvalidInput("empty coordinate vector".into()));
        }
        let mut out = Vec::with_capacity(v.len());
        for x in v {
            if !x.is_finite() {
                return Err(Error::InvalidInput(format!("non-finite coordinate {x}")));
            }
            out.push(if x == 0.0 { 0.0 } else { x });
        }
        Ok(Point::Coords(out))
    }

    /// 1-dimensional helper used throughout the tests.
    pub fn scalar(x: f64) -> Point {
        Point::coords(vec![x]).expect("finite scalar")
    }

    pub fn as_coords(&self) -> Option<&[f64]> {
        match self {
            Point::Coords(c) => Some(c),
            Point::Label(_) => None,
        }
    }
}

fn cmp_points(a: &Point, b: &Point) -> Ordering {
    match (a, b) {
        (Point::Label(x), Point::Label(y)) => x.cmp(y),
        (Point::Coords(x), Point::Coords(y)) => x
            .len()
            .cmp(&y.len())
            .then_with(|| {
                for (u, v) in x.iter().zip(y.iter()) {
                    let c = u.total_cmp(v);
                    if c != Ordering::Equal {
                        return c;
                    }
                }
                Ordering::Equal
            }),
        (Point::Label(_), Point::Coords(_)) => Ordering::Less,
        (Point::Coords(_), Point::Label(_)) => Ordering::Greater,
    }
}

impl PartialEq for Point {
    fn eq(&self, other: &Self) -> bool {
        cmp_points(self, other) == Ordering::Equal
    }
}
impl Eq for Point {}
impl PartialOrd for Point {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Point {
    fn cmp(&self, other: &Self) -> Ordering {
        cmp_points(self, other)
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Point::Label(s) => write!(f, "{s}"),
            Point::Coords(c) => {
                write!(f, "(")?;
                for (i, x) in c.iter().enumerate() {
                    if i > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "{x}")?;
                }
                write!(f, ")")
            }
        }
    }
}

/// Metric: discrete 0/1 on labels, euclidean on coordinates.
/// Mixing kinds (or dimensions) is a caller bug; tuples are validated at
/// construction.
pub fn distance(a: &Point, b: &Point) -> f64 {
    match (a, b) {
        (Point::Label(x), Point::Label(y)) => {
            if x == y {
                0.0
            } else {
                1.0
            }
        }
        (Point::Coords(x), Point::Coords(y)) => {
            assert_eq!(x.len(), y.len(), "points of different dimension");
            // hypot chain: no intermediate under/overflow, so the result is
            // 0 exactly when every coordinate pair is equal.
            x.iter()
                .zip(y.iter())
                .fold(0.0f64, |acc, (u, v)| acc.hypot(u - v))
        }
        _ => panic!("label and coordinate points never share a tuple"),
    }
}

/// An ordered m-tuple over one domain kind. m >= 1 and all entries share
/// the same kind and dimension.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MTuple {
    points: Vec<Point>,
}

impl MTuple {
    pub fn new(points: Vec<Point>) -> Result<MTuple> {
        if points.is_empty() {
            return Err(Error::InvalidInput("tuple must have m >= 1".into()));
        }
        let same = match &points[0] {
            Point::Label(_) => points.iter().all(|p| matches!(p, Point::Label(_))),
            Point::Coords(c0) => {
                let d = c0.len();
                points
                    .iter()
                    .all(|p| matches!(p, Point::Coords(c) if c.len() == d))
            }
        };
        if !same {
            return Err(Error::InvalidInput(
                "tuple mixes point kinds or dimensions".into(),
            ));
        }
        Ok(MTuple { points })
    }

    pub fn m(&self) -> usize {
        self.points.len()
    }

    pub fn points(&self) -> &[Point] {
        &self.points
    }

    pub fn get(&self, i: usize) -> &Point {
        &self.points[i]
    }

    pub fn is_labels(&self) -> bool {
        matches!(self.points[0], Point::Label(_))
    }

    /// Applies a position map: out[i] = self[sigma[i]].
    pub fn permute(&self, sigma: &[usize]) -> Result<MTuple> {
        if !is_permutation(sigma, self.m()) {
            return Err(Error::InvalidInput(format!(
                "{sigma:?} is not a permutation of 0..{}",
                self.m()
            )));
        }
        Ok(MTuple {
            points: sigma.iter().map(|&j| self.points[j].clone()).collect(),
        })
    }
}

impl fmt::Display for MTuple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, p) in self.points.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            write!(f, "{p}")?;
        }
        write!(f, "]")
    }
}

/// A point of the symmetric quotient: the multiset of tuple entries,
/// stored sorted ascending.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct SPClass {
    points: Vec<Point>,
}

impl SPClass {
    pub fn points(&self) -> &[Point] {
        &self.points
    }

    pub fn m(&self) -> usize {
        self.points.len()
    }

    pub fn as_tuple(&self) -> MTuple {
        MTuple {
            points: self.points.clone(),
        }
    }
}

/// A point of the support quotient: the set of distinct tuple entries,
/// stored sorted strictly ascending. 1 <= |support| <= m.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct FClass {
    points: Vec<Point>,
}

impl FClass {
    pub fn points(&self) -> &[Point] {
        &self.points
    }

    pub fn support_size(&self) -> usize {
        self.points.len()
    }
}

/// Multiset canonical form: entries sorted ascending under the point order.
pub fn sp_canonical(t: &MTuple) -> SPClass {
    let mut points = t.points.clone();
    points.sort();
    SPClass { points }
}

/// Support canonical form: sorted list of distinct entries.
pub fn f_canonical(t: &MTuple) -> FClass {
    let mut points = t.points.clone();
    points.sort();
    points.dedup();
    FClass { points }
}

/// Builds an SPClass directly from points (sorts them).
pub fn sp_class(points: Vec<Point>) -> Result<SPClass> {
    Ok(sp_canonical(&MTuple::new(points)?))
}

/// Builds an FClass directly from points; exact duplicates are rejected.
pub fn f_class(points: Vec<Point>) -> Result<FClass> {
    let t = MTuple::new(points)?;
    let mut sorted = t.points.clone();
    sorted.sort();
    for w in sorted.windows(2) {
        if w[0] == w[1] {
            return Err(Error::InvalidInput(
                "support set contains duplicate points".into(),
            ));
        }
    }
    Ok(FClass { points: sorted })
}

pub fn is_permutation(sigma: &[usize], m: usize) -> bool {
    if sigma.len() != m {
        return false;
    }
    let mut seen = vec![false; m];
    for &j in sigma {
        if j >= m || seen[j] {
            return false;
        }
        seen[j] = true;
    }
    true
}

/// Inverts a position map.
pub fn invert_permutation(sigma: &[usize]) -> Vec<usize> {
    let mut inv = vec![0; sigma.len()];
    for (i, &j) in sigma.iter().enumerate() {
        inv[j] = i;
    }
    inv
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(x: f64) -> Point {
        Point::scalar(x)
    }

    #[test]
    fn point_order_is_total_and_metric_compatible() {
        let a = s(-1.0);
        let b = s(0.0);
        let c = s(0.5);
        assert!(a < b && b < c);
        assert_eq!(distance(&a, &b), 1.0);
        assert_eq!(distance(&b, &b), 0.0);
        // -0.0 normalizes so order-equality matches zero distance.
        let z = Point::coords(vec![-0.0]).unwrap();
        assert_eq!(z, s(0.0));
        assert_eq!(distance(&z, &s(0.0)), 0.0);
    }

    #[test]
    fn label_metric_is_discrete() {
        let a = Point::label("a");
        let b = Point::label("b");
        assert_eq!(distance(&a, &a), 0.0);
        assert_eq!(distance(&a, &b), 1.0);
        assert!(a < b);
    }

    #[test]
    fn tuple_rejects_mixed_kinds() {
        assert!(MTuple::new(vec![Point::label("a"), s(1.0)]).is_err());
        assert!(MTuple::new(vec![]).is_err());
        let p2 = Point::coords(vec![0.0, 1.0]).unwrap();
        assert!(MTuple::new(vec![s(0.0), p2]).is_err());
    }

    #[test]
    fn sp_canonical_sorts_multiset() {
        let t = MTuple::new(vec![s(0.5), s(-1.0), s(0.5)]).unwrap();
        let c = sp_canonical(&t);
        assert_eq!(c.points(), &[s(-1.0), s(0.5), s(0.5)]);
        // order-insensitive
        let u = MTuple::new(vec![s(0.5), s(0.5), s(-1.0)]).unwrap();
        assert_eq!(sp_canonical(&u), c);
    }

    #[test]
    fn f_canonical_collects_support() {
        let t = MTuple::new(vec![
            Point::label("b"),
            Point::label("a"),
            Point::label("b"),
        ])
        .unwrap();
        let c = f_canonical(&t);
        assert_eq!(c.points(), &[Point::label("a"), Point::label("b")]);
        assert_eq!(c.support_size(), 2);
    }

    #[test]
    fn f_class_rejects_duplicates() {
        assert!(f_class(vec![s(0.0), s(0.0)]).is_err());
        assert!(f_class(vec![s(0.0), s(1.0)]).is_ok());
    }

    #[test]
    fn permute_applies_position_map() {
        let t = MTuple::new(vec![s(10.0), s(20.0), s(30.0)]).unwrap();
        let u = t.permute(&[1, 2, 0]).unwrap();
        assert_eq!(u.points(), &[s(20.0), s(30.0), s(10.0)]);
        assert!(t.permute(&[0, 0, 1]).is_err());
        let inv = invert_permutation(&[1, 2, 0]);
        assert_eq!(u.permute(&inv).unwrap(), t);
    }

    #[test]
    fn coords_reject_non_finite() {
        assert!(Point::coords(vec![f64::NAN]).is_err());
        assert!(Point::coords(vec![f64::INFINITY]).is_err());
    }
}
