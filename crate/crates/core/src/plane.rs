//! Planar helpers shared by the exact constructions: a `Copy` vector type,
//! circle/circle and segment/disk intersections, and extreme points of an
//! intersection of disks.

use std::ops::{Add, Mul, Neg, Sub};

use crate::error::{Error, Result};
use crate::geom::{Ball, Point};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Vec2 {
    pub x: f64,
    pub y: f64,
}

impl Vec2 {
    pub const fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    pub fn dot(self, o: Vec2) -> f64 {
        self.x * o.x + self.y * o.y
    }

    pub fn cross(self, o: Vec2) -> f64 {
        self.x * o.y - self.y * o.x
    }

    pub fn norm(self) -> f64 {
        self.x.hypot(self.y)
    }

    pub fn dist(self, o: Vec2) -> f64 {
        (self - o).norm()
    }

    pub fn unit(self) -> Option<Vec2> {
        let n = self.norm();
        (n > 0.0).then(|| self * (1.0 / n))
    }

    pub fn perp(self) -> Vec2 {
        Vec2::new(-self.y, self.x)
    }

    pub fn lerp(self, o: Vec2, t: f64) -> Vec2 {
        self + (o - self) * t
    }

    pub fn mid(self, o: Vec2) -> Vec2 {
        self.lerp(o, 0.5)
    }

    pub fn from_angle(theta: f64) -> Vec2 {
        Vec2::new(theta.cos(), theta.sin())
    }

    pub fn to_point(self) -> Point {
        Point::xy(self.x, self.y)
    }

    pub fn from_point(p: &Point) -> Result<Vec2> {
        p.check_dim(2)?;
        Ok(Vec2::new(p[0], p[1]))
    }
}

impl Add for Vec2 {
    type Output = Vec2;
    fn add(self, o: Vec2) -> Vec2 {
        Vec2::new(self.x + o.x, self.y + o.y)
    }
}

impl Sub for Vec2 {
    type Output = Vec2;
    fn sub(self, o: Vec2) -> Vec2 {
        Vec2::new(self.x - o.x, self.y - o.y)
    }
}

impl Mul<f64> for Vec2 {
    type Output = Vec2;
    fn mul(self, t: f64) -> Vec2 {
        Vec2::new(self.x * t, self.y * t)
    }
}

impl Neg for Vec2 {
    type Output = Vec2;
    fn neg(self) -> Vec2 {
        Vec2::new(-self.x, -self.y)
    }
}

/// A closed disk.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Disk {
    pub c: Vec2,
    pub r: f64,
}

impl Disk {
    pub const fn new(c: Vec2, r: f64) -> Self {
        Self { c, r }
    }

    pub fn from_ball(b: &Ball) -> Result<Disk> {
        Ok(Disk::new(Vec2::from_point(&b.center)?, b.radius))
    }

    pub fn to_ball(self) -> Ball {
        Ball::new(self.c.to_point(), self.r).expect("nonnegative radius")
    }

    /// `D(x)`
    pub fn dist(&self, x: Vec2) -> f64 {
        (x.dist(self.c) - self.r).max(0.0)
    }

    /// `M(x)`
    pub fn farthest(&self, x: Vec2) -> f64 {
        x.dist(self.c) + self.r
    }

    pub fn contains(&self, x: Vec2, tol: f64) -> bool {
        x.dist(self.c) <= self.r + tol
    }

    pub fn strictly_contains_point(&self, x: Vec2, tol: f64) -> bool {
        x.dist(self.c) < self.r - tol
    }

    /// Nearest point of the disk to `x`.
    pub fn nearest(&self, x: Vec2) -> Vec2 {
        let d = x.dist(self.c);
        if d <= self.r {
            x
        } else {
            self.c + (x - self.c) * (self.r / d)
        }
    }

    /// Farthest point of the disk from `x`; `None` when `x` is the center.
    pub fn farthest_point(&self, x: Vec2) -> Option<Vec2> {
        let d = x.dist(self.c);
        if d <= crate::geom::COINCIDENCE_TOL * (1.0 + self.c.norm()) {
            return None;
        }
        Some(self.c - (x - self.c) * (self.r / d))
    }

    /// Boundary point in direction `dir` (unit).
    pub fn boundary_towards(&self, dir: Vec2) -> Vec2 {
        self.c + dir * self.r
    }
}

/// Tolerance for tangency and containment predicates between two disks,
/// scaled by the center distance.
pub fn pair_tol(a: &Disk, b: &Disk) -> f64 {
    1e-9 * (1.0 + a.c.dist(b.c))
}

/// `a` contains `b`, possibly tangentially.
pub fn contains_disk(a: &Disk, b: &Disk) -> bool {
    a.c.dist(b.c) + b.r <= a.r + pair_tol(a, b)
}

/// `a` contains `b` with no common boundary point.
pub fn strictly_contains_disk(a: &Disk, b: &Disk) -> bool {
    a.c.dist(b.c) < a.r - b.r - pair_tol(a, b)
}

pub fn disks_intersect(a: &Disk, b: &Disk) -> bool {
    a.c.dist(b.c) <= a.r + b.r + pair_tol(a, b)
}

/// Intersection points of the two boundary circles (0, 1 or 2 points).
pub fn circle_intersections(a: &Disk, b: &Disk) -> Vec<Vec2> {
    let d = a.c.dist(b.c);
    let tol = pair_tol(a, b);
    if d <= tol {
        return Vec::new();
    }
    if d > a.r + b.r + tol || d < (a.r - b.r).abs() - tol {
        return Vec::new();
    }
    let u = (b.c - a.c) * (1.0 / d);
    let along = (d * d + a.r * a.r - b.r * b.r) / (2.0 * d);
    let h2 = a.r * a.r - along * along;
    let base = a.c + u * along;
    if h2 <= (tol * (1.0 + a.r)).powi(2) {
        return vec![base];
    }
    let h = h2.sqrt();
    vec![base + u.perp() * h, base - u.perp() * h]
}

/// Parameter interval `[t0, t1]` of `p + t (q - p)`, `t in [0, 1]`, lying in the disk.
pub fn segment_disk_interval(p: Vec2, q: Vec2, disk: &Disk) -> Option<(f64, f64)> {
    let d = q - p;
    let a = d.dot(d);
    if a == 0.0 {
        return disk.contains(p, 0.0).then_some((0.0, 1.0));
    }
    // foot of the perpendicular from the center; the half chord from
    // (r - h)(r + h) avoids the cancellation of the textbook discriminant
    let tf = (disk.c - p).dot(d) / a;
    let h = (p + d * tf).dist(disk.c);
    if h > disk.r {
        return None;
    }
    let half = ((disk.r - h) * (disk.r + h)).sqrt() / a.sqrt();
    let t0 = (tf - half).max(0.0);
    let t1 = (tf + half).min(1.0);
    (t0 <= t1).then_some((t0, t1))
}

/// How far the line through `p` and `q` reaches into the disk: `r` minus
/// the distance from the center to the line.
pub fn line_depth(p: Vec2, q: Vec2, disk: &Disk) -> f64 {
    let d = q - p;
    let a = d.dot(d);
    let tf = (disk.c - p).dot(d) / a;
    disk.r - (p + d * tf).dist(disk.c)
}

/// Extreme point of `∩ disks` in direction `dir`, or `None` if the
/// intersection is empty (up to `tol`).
///
/// The maximizer of a linear function over an intersection of disks is
/// either the extreme point of one disk or a crossing of two boundary circles,
/// so it suffices to test those candidates for membership.
pub fn intersection_extreme(disks: &[Disk], dir: Vec2, tol: f64) -> Option<Vec2> {
    let mut candidates: Vec<Vec2> = disks.iter().map(|d| d.c + dir * d.r).collect();
    for i in 0..disks.len() {
        for j in (i + 1)..disks.len() {
            candidates.extend(circle_intersections(&disks[i], &disks[j]));
        }
    }
    candidates
        .into_iter()
        .filter(|p| disks.iter().all(|d| d.contains(*p, tol * (1.0 + d.r))))
        .max_by(|a, b| a.dot(dir).total_cmp(&b.dot(dir)))
}

/// Summary of `∩ disks`.
#[derive(Debug, Clone, PartialEq)]
pub enum DiskIntersection {
    Empty,
    /// Exactly one point (up to tolerance).
    Point(Vec2),
    /// More than one point; two far-apart witnesses.
    Fat(Vec2, Vec2),
}

pub fn classify_intersection(disks: &[Disk], tol: f64) -> DiskIntersection {
    let dirs: Vec<Vec2> = (0..8)
        .map(|k| Vec2::from_angle(k as f64 * std::f64::consts::FRAC_PI_4))
        .collect();
    let extremes: Vec<Vec2> = dirs
        .iter()
        .filter_map(|&d| intersection_extreme(disks, d, tol))
        .collect();
    if extremes.is_empty() {
        return DiskIntersection::Empty;
    }
    let mut best = (extremes[0], extremes[0], 0.0);
    for (i, a) in extremes.iter().enumerate() {
        for b in &extremes[i + 1..] {
            let d = a.dist(*b);
            if d > best.2 {
                best = (*a, *b, d);
            }
        }
    }
    let scale = 1.0 + disks.iter().map(|d| d.c.norm() + d.r).fold(0.0, f64::max);
    if best.2 <= 1e-7 * scale {
        DiskIntersection::Point(best.0.mid(best.1))
    } else {
        DiskIntersection::Fat(best.0, best.1)
    }
}

pub fn disks_from_balls(balls: &[Ball]) -> Result<Vec<Disk>> {
    balls.iter().map(Disk::from_ball).collect()
}

pub(crate) fn require_planar(balls: &[&Ball]) -> Result<()> {
    if balls.iter().all(|b| b.dim() == 2) {
        Ok(())
    } else {
        Err(Error::Unsupported("planar (2-D) balls".into()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn disk(x: f64, y: f64, r: f64) -> Disk {
        Disk::new(Vec2::new(x, y), r)
    }

    #[test]
    fn circle_crossings() {
        let pts = circle_intersections(&disk(0.0, 0.0, 1.0), &disk(1.0, 0.0, 1.0));
        assert_eq!(pts.len(), 2);
        for p in pts {
            assert!((p.x - 0.5).abs() < 1e-12);
            assert!((p.y.abs() - 0.75f64.sqrt()).abs() < 1e-12);
        }
        let pts = circle_intersections(&disk(-1.0, 0.0, 1.0), &disk(1.0, 0.0, 1.0));
        assert_eq!(pts.len(), 1);
        assert!(pts[0].norm() < 1e-9);
        assert!(circle_intersections(&disk(0.0, 0.0, 1.0), &disk(5.0, 0.0, 1.0)).is_empty());
        assert!(circle_intersections(&disk(0.0, 0.0, 3.0), &disk(0.5, 0.0, 1.0)).is_empty());
    }

    #[test]
    fn segment_interval() {
        let (t0, t1) = segment_disk_interval(
            Vec2::new(-3.0, 0.0),
            Vec2::new(3.0, 0.0),
            &disk(0.0, 0.0, 1.0),
        )
        .unwrap();
        assert!((t0 - 1.0 / 3.0).abs() < 1e-12 && (t1 - 2.0 / 3.0).abs() < 1e-12);
        assert!(segment_disk_interval(
            Vec2::new(-3.0, 2.0),
            Vec2::new(3.0, 2.0),
            &disk(0.0, 0.0, 1.0)
        )
        .is_none());
    }

    #[test]
    fn intersection_classes() {
        let fat = [disk(0.0, 0.0, 2.0), disk(1.0, 0.0, 2.0)];
        assert!(matches!(
            classify_intersection(&fat, 1e-12),
            DiskIntersection::Fat(..)
        ));
        let tangent = [disk(-1.0, 0.0, 1.0), disk(1.0, 0.0, 1.0)];
        match classify_intersection(&tangent, 1e-12) {
            DiskIntersection::Point(p) => assert!(p.norm() < 1e-9),
            other => panic!("expected a single point, got {other:?}"),
        }
        let apart = [disk(-2.0, 0.0, 1.0), disk(2.0, 0.0, 1.0)];
        assert_eq!(
            classify_intersection(&apart, 1e-12),
            DiskIntersection::Empty
        );
        let triple_empty = [
            disk(0.0, 0.0, 1.0),
            disk(1.5, 0.0, 1.0),
            disk(0.75, 1.4, 0.3),
        ];
        assert_eq!(
            classify_intersection(&triple_empty, 1e-12),
            DiskIntersection::Empty
        );
    }

    #[test]
    fn containment_predicates() {
        assert!(strictly_contains_disk(
            &disk(0.0, 0.0, 5.0),
            &disk(1.0, 0.0, 1.0)
        ));
        assert!(contains_disk(&disk(0.0, 0.0, 2.0), &disk(1.0, 0.0, 1.0)));
        assert!(!strictly_contains_disk(
            &disk(0.0, 0.0, 2.0),
            &disk(1.0, 0.0, 1.0)
        ));
        assert!(disks_intersect(&disk(0.0, 0.0, 1.0), &disk(2.0, 0.0, 1.0)));
        assert!(!disks_intersect(&disk(0.0, 0.0, 1.0), &disk(2.1, 0.0, 1.0)));
    }
}
