//! Points, balls, the two distance functions to a ball, their projections
//! and subdifferentials.
//!
//! For a ball `B(c; r)` the distance function is `D(x) = max(|x - c| - r, 0)`
//! and the farthest distance function is `M(x) = |x - c| + r`. Everything
//! else in the crate is built from these two and their subgradients.

use std::fmt;
use std::ops::{Add, Index, Mul, Sub};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Relative tolerance used to decide that a point sits on a ball's center.
pub const COINCIDENCE_TOL: f64 = 1e-12;

/// A point (or vector) of `R^n`.
#[derive(Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Point {
    coords: Vec<f64>,
}

impl Point {
    pub fn new(coords: Vec<f64>) -> Result<Self> {
        if coords.is_empty() {
            return Err(Error::DimensionMismatch {
                expected: 1,
                found: 0,
            });
        }
        if coords.iter().any(|c| !c.is_finite()) {
            return Err(Error::NonFinite);
        }
        Ok(Self { coords })
    }

    /// Unchecked constructor for coordinates produced by arithmetic on finite points.
    pub(crate) fn from_vec(coords: Vec<f64>) -> Self {
        debug_assert!(!coords.is_empty());
        Self { coords }
    }

    pub fn xy(x: f64, y: f64) -> Self {
        Self { coords: vec![x, y] }
    }

    pub fn zeros(dim: usize) -> Self {
        Self {
            coords: vec![0.0; dim],
        }
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[f64] {
        &self.coords
    }

    pub fn into_coords(self) -> Vec<f64> {
        self.coords
    }

    pub fn norm(&self) -> f64 {
        norm(&self.coords)
    }

    pub fn dot(&self, other: &Point) -> f64 {
        dot(&self.coords, &other.coords)
    }

    pub fn dist(&self, other: &Point) -> f64 {
        dist(&self.coords, &other.coords)
    }

    /// `self + t * dir`
    pub fn offset(&self, dir: &Point, t: f64) -> Point {
        Point::from_vec(
            self.coords
                .iter()
                .zip(&dir.coords)
                .map(|(a, d)| a + t * d)
                .collect(),
        )
    }

    /// Convex combination `(1 - t) self + t other`.
    pub fn lerp(&self, other: &Point, t: f64) -> Point {
        Point::from_vec(
            self.coords
                .iter()
                .zip(&other.coords)
                .map(|(a, b)| a + t * (b - a))
                .collect(),
        )
    }

    pub fn midpoint(&self, other: &Point) -> Point {
        self.lerp(other, 0.5)
    }

    /// Unit vector along `self`, or `None` for the zero vector.
    pub fn normalized(&self) -> Option<Point> {
        let n = self.norm();
        (n > 0.0).then(|| self * (1.0 / n))
    }

    pub(crate) fn check_dim(&self, dim: usize) -> Result<()> {
        if self.dim() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: self.dim(),
            });
        }
        Ok(())
    }
}

impl fmt::Debug for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.coords)
    }
}

impl Index<usize> for Point {
    type Output = f64;
    fn index(&self, i: usize) -> &f64 {
        &self.coords[i]
    }
}

impl Sub for &Point {
    type Output = Point;
    fn sub(self, rhs: &Point) -> Point {
        debug_assert_eq!(self.dim(), rhs.dim());
        Point::from_vec(
            self.coords
                .iter()
                .zip(&rhs.coords)
                .map(|(a, b)| a - b)
                .collect(),
        )
    }
}

impl Add for &Point {
    type Output = Point;
    fn add(self, rhs: &Point) -> Point {
        debug_assert_eq!(self.dim(), rhs.dim());
        Point::from_vec(
            self.coords
                .iter()
                .zip(&rhs.coords)
                .map(|(a, b)| a + b)
                .collect(),
        )
    }
}

impl Mul<f64> for &Point {
    type Output = Point;
    fn mul(self, t: f64) -> Point {
        Point::from_vec(self.coords.iter().map(|a| a * t).collect())
    }
}

impl Mul<f64> for Point {
    type Output = Point;
    fn mul(mut self, t: f64) -> Point {
        self.coords.iter_mut().for_each(|a| *a *= t);
        self
    }
}

pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub(crate) fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

pub(crate) fn dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y) * (x - y))
        .sum::<f64>()
        .sqrt()
}

/// A closed Euclidean ball `B(center; radius)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Ball {
    pub center: Point,
    pub radius: f64,
}

impl Ball {
    pub fn new(center: Point, radius: f64) -> Result<Self> {
        if !radius.is_finite() || radius < 0.0 {
            return Err(Error::InvalidRadius(radius));
        }
        Ok(Self { center, radius })
    }

    /// Planar ball; panics on a negative radius.
    pub fn disk(x: f64, y: f64, radius: f64) -> Self {
        Self::new(Point::xy(x, y), radius).expect("valid disk")
    }

    pub fn dim(&self) -> usize {
        self.center.dim()
    }

    /// `D(x; B)` on raw coordinates.
    pub(crate) fn dist_raw(&self, x: &[f64]) -> f64 {
        (dist(x, self.center.coords()) - self.radius).max(0.0)
    }

    /// `M(x; B)` on raw coordinates.
    pub(crate) fn farthest_raw(&self, x: &[f64]) -> f64 {
        dist(x, self.center.coords()) + self.radius
    }

    /// Whether `x` is within `coincidence_scale` of the center.
    pub fn is_center(&self, x: &Point) -> bool {
        x.dist(&self.center) <= COINCIDENCE_TOL * (1.0 + self.center.norm())
    }

    pub fn contains(&self, x: &Point, tol: f64) -> bool {
        x.dist(&self.center) <= self.radius + tol
    }

    /// `|x - c| - r`, negative inside the ball.
    pub fn signed_gap(&self, x: &Point) -> f64 {
        x.dist(&self.center) - self.radius
    }
}

fn check_pair(x: &Point, b: &Ball) -> Result<()> {
    x.check_dim(b.dim())
}

/// Distance from `x` to the ball: `max(|x - c| - r, 0)`.
pub fn dist_to_ball(x: &Point, b: &Ball) -> Result<f64> {
    check_pair(x, b)?;
    Ok(b.dist_raw(x.coords()))
}

/// Farthest distance from `x` to the ball: `|x - c| + r`.
pub fn farthest_dist(x: &Point, b: &Ball) -> Result<f64> {
    check_pair(x, b)?;
    Ok(b.farthest_raw(x.coords()))
}

/// Nearest point of the ball to `x`.
pub fn nearest_projection(x: &Point, b: &Ball) -> Result<Point> {
    check_pair(x, b)?;
    let d = x.dist(&b.center);
    if d <= b.radius {
        return Ok(x.clone());
    }
    let dir = x - &b.center;
    Ok(b.center.offset(&dir, b.radius / d))
}

/// Result of a farthest projection.
#[derive(Debug, Clone, PartialEq)]
pub enum Projection {
    Unique(Point),
    /// `x` is the center: every boundary point is farthest.
    WholeSphere,
}

impl Projection {
    pub fn point(&self) -> Option<&Point> {
        match self {
            Projection::Unique(p) => Some(p),
            Projection::WholeSphere => None,
        }
    }

    pub fn into_point(self) -> Option<Point> {
        match self {
            Projection::Unique(p) => Some(p),
            Projection::WholeSphere => None,
        }
    }
}

/// Farthest point of the ball from `x`: `c - r (x - c)/|x - c|`.
pub fn farthest_projection(x: &Point, b: &Ball) -> Result<Projection> {
    check_pair(x, b)?;
    if b.is_center(x) {
        return Ok(Projection::WholeSphere);
    }
    let dir = x - &b.center;
    let d = dir.norm();
    Ok(Projection::Unique(b.center.offset(&dir, -b.radius / d)))
}

/// A subdifferential of `D(.; B)` or `M(.; B)` at a point.
#[derive(Debug, Clone, PartialEq)]
pub enum SubdiffSet {
    Singleton(Point),
    /// `{ t (x - c)/r : t in [0, 1] }` at a boundary point `x` of `ball`.
    NormalCap {
        ball: Ball,
        base: Point,
    },
    /// The closed unit ball of the given dimension.
    UnitBall {
        dim: usize,
    },
}

impl SubdiffSet {
    /// Outward unit normal of a normal cap.
    pub fn cap_normal(&self) -> Option<Point> {
        match self {
            SubdiffSet::NormalCap { ball, base } => (base - &ball.center).normalized(),
            _ => None,
        }
    }

    /// Membership test for a candidate subgradient.
    pub fn contains(&self, v: &Point, tol: f64) -> bool {
        match self {
            SubdiffSet::Singleton(g) => g.dist(v) <= tol,
            SubdiffSet::UnitBall { .. } => v.norm() <= 1.0 + tol,
            SubdiffSet::NormalCap { .. } => {
                let n = self
                    .cap_normal()
                    .expect("cap of a ball with positive radius");
                let t = v.dot(&n).clamp(0.0, 1.0);
                (&n * t).dist(v) <= tol
            }
        }
    }

    /// Finitely many points whose convex hull is the set, when one exists.
    pub fn hull_generators(&self) -> Option<Vec<Point>> {
        match self {
            SubdiffSet::Singleton(g) => Some(vec![g.clone()]),
            SubdiffSet::NormalCap { base, .. } => {
                let n = self.cap_normal()?;
                Some(vec![Point::zeros(base.dim()), n])
            }
            SubdiffSet::UnitBall { .. } => None,
        }
    }
}

/// Subdifferential of the distance function `D(.; B)` at `x`.
pub fn subdiff_dist(x: &Point, b: &Ball) -> Result<SubdiffSet> {
    check_pair(x, b)?;
    let d = x.dist(&b.center);
    let on_boundary_tol = COINCIDENCE_TOL * (1.0 + b.radius + b.center.norm());
    if d > b.radius + on_boundary_tol {
        let g = (x - &b.center) * (1.0 / d);
        return Ok(SubdiffSet::Singleton(g));
    }
    if d < b.radius - on_boundary_tol {
        return Ok(SubdiffSet::Singleton(Point::zeros(x.dim())));
    }
    if b.radius <= on_boundary_tol {
        // boundary of a degenerate ball is its center; N = R^n there
        return Ok(SubdiffSet::UnitBall { dim: x.dim() });
    }
    Ok(SubdiffSet::NormalCap {
        ball: b.clone(),
        base: x.clone(),
    })
}

/// Subdifferential of the farthest distance function `M(.; B)` at `x`.
pub fn subdiff_farthest(x: &Point, b: &Ball) -> Result<SubdiffSet> {
    check_pair(x, b)?;
    if b.is_center(x) {
        return Ok(SubdiffSet::UnitBall { dim: x.dim() });
    }
    let dir = x - &b.center;
    let d = dir.norm();
    Ok(SubdiffSet::Singleton(dir * (1.0 / d)))
}

/// Angle at `vertex` between the rays towards `p` and `q`, in degrees.
pub fn angle_at(vertex: &Point, p: &Point, q: &Point) -> Result<f64> {
    p.check_dim(vertex.dim())?;
    q.check_dim(vertex.dim())?;
    let u = p - vertex;
    let v = q - vertex;
    let (nu, nv) = (u.norm(), v.norm());
    let scale = COINCIDENCE_TOL * (1.0 + vertex.norm());
    if nu <= scale || nv <= scale {
        return Err(Error::DegenerateAngle);
    }
    let c = (u.dot(&v) / (nu * nv)).clamp(-1.0, 1.0);
    Ok(c.acos().to_degrees())
}

/// Slack applied to the strict angle comparisons against 90 and 120 degrees.
pub const ANGLE_SLACK_DEG: f64 = 1e-9;

/// `angle > threshold` with the standard slack; ties count as "not greater".
pub fn angle_exceeds(angle: f64, threshold: f64) -> bool {
    angle > threshold + ANGLE_SLACK_DEG
}
