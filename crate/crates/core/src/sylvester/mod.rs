//! The generalized Sylvester problem: find the smallest ball that encloses
//! every ball of one family and meets every ball of another.
//!
//! With `Ω_i = B(a_i; r_i)` to enclose and `Θ_j = B(b_j; s_j)` to intersect,
//! the optimal center minimizes
//!
//! ```text
//! G(x) = max( max_i M(x; Ω_i), max_j D(x; Θ_j) )
//! ```
//!
//! and the optimal radius is the minimum value. `G` is convex and
//! 1-Lipschitz; a point is optimal iff the origin lies in the convex hull of
//! the subdifferentials of the active terms.

mod reduce;
mod solve;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geom::{dist, farthest_projection, nearest_projection, Ball, Point, Projection};
use crate::hull::min_norm_in_hull;
use crate::plane::{classify_intersection, disks_from_balls, DiskIntersection};
use crate::threeball::ConstructionTrace;

pub use reduce::{caratheodory_reduce, Reduction};
pub use solve::solve_subgradient;

/// Relative tolerance for membership in the active index sets.
pub const DEFAULT_ACTIVE_TOL: f64 = 1e-7;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SylvesterProblem {
    pub enclose: Vec<Ball>,
    pub intersect: Vec<Ball>,
    dim: usize,
}

impl SylvesterProblem {
    pub fn new(enclose: Vec<Ball>, intersect: Vec<Ball>) -> Result<Self> {
        let dim = enclose
            .first()
            .or(intersect.first())
            .ok_or(Error::EmptyProblem)?
            .dim();
        for b in enclose.iter().chain(&intersect) {
            b.center.check_dim(dim)?;
        }
        Ok(Self {
            enclose,
            intersect,
            dim,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.enclose.len() + self.intersect.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub(crate) fn value_raw(&self, x: &[f64]) -> f64 {
        let m = self
            .enclose
            .iter()
            .map(|b| b.farthest_raw(x))
            .fold(f64::NEG_INFINITY, f64::max);
        self.intersect
            .iter()
            .map(|b| b.dist_raw(x))
            .fold(m, f64::max)
    }

    /// Subproblem on the given index subsets.
    pub fn subproblem(&self, enclose: &[usize], intersect: &[usize]) -> Result<Self> {
        Self::new(
            enclose.iter().map(|&i| self.enclose[i].clone()).collect(),
            intersect
                .iter()
                .map(|&j| self.intersect[j].clone())
                .collect(),
        )
    }

    fn max_radius(&self) -> f64 {
        self.enclose
            .iter()
            .chain(&self.intersect)
            .map(|b| b.radius)
            .fold(0.0, f64::max)
    }
}

/// `G(x)`.
pub fn objective(x: &Point, p: &SylvesterProblem) -> Result<f64> {
    x.check_dim(p.dim())?;
    Ok(p.value_raw(x.coords()))
}

/// Index sets `K(x)` (enclose) and `L(x)` (intersect) of the terms attaining the max.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ActiveSets {
    pub enclose: Vec<usize>,
    pub intersect: Vec<usize>,
}

impl ActiveSets {
    pub fn len(&self) -> usize {
        self.enclose.len() + self.intersect.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// Terms whose value is within `tol (1 + G(x))` of `G(x)`.
pub fn active_sets(x: &Point, p: &SylvesterProblem, tol: f64) -> ActiveSets {
    let g = p.value_raw(x.coords());
    let cut = g - tol * (1.0 + g.abs());
    ActiveSets {
        enclose: (0..p.enclose.len())
            .filter(|&i| p.enclose[i].farthest_raw(x.coords()) >= cut)
            .collect(),
        intersect: (0..p.intersect.len())
            .filter(|&j| p.intersect[j].dist_raw(x.coords()) >= cut)
            .collect(),
    }
}

/// Which optimality condition a certificate checked.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "kind")]
pub enum CertificateCase {
    /// The candidate ball coincides with enclosed ball `index`, which
    /// therefore contains the others and meets every intersect ball.
    CoincidentBall { index: usize },
    /// `G(x) = 0`: `x` lies in every ball to intersect.
    ZeroRadius,
    /// Origin tested against the hull of the unit vectors `(x - p_i)/r`, `(x - q_j)/r`.
    Hull,
}

/// Which term a certificate generator comes from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Term {
    Enclose(usize),
    Intersect(usize),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CertificateReport {
    pub case: CertificateCase,
    pub active: ActiveSets,
    pub terms: Vec<Term>,
    pub generators: Vec<Point>,
    /// `λ_i` for enclose terms then `μ_j` for intersect terms, matching `terms`.
    pub coefficients: Vec<f64>,
    pub residual: f64,
    pub tolerance: f64,
}

impl CertificateReport {
    pub fn passed(&self) -> bool {
        self.residual <= self.tolerance
    }
}

/// Optimality check at `x` with the default active-set tolerance.
pub fn check_optimality(x: &Point, p: &SylvesterProblem, tol: f64) -> CertificateReport {
    check_optimality_with(x, p, tol, DEFAULT_ACTIVE_TOL)
}

pub fn check_optimality_with(
    x: &Point,
    p: &SylvesterProblem,
    tol: f64,
    active_tol: f64,
) -> CertificateReport {
    let r = p.value_raw(x.coords());
    let active = active_sets(x, p, active_tol);
    let done = |case, active| CertificateReport {
        case,
        active,
        terms: Vec::new(),
        generators: Vec::new(),
        coefficients: Vec::new(),
        residual: 0.0,
        tolerance: tol,
    };

    if r <= 1e-12 * (1.0 + x.norm()) {
        return done(CertificateCase::ZeroRadius, active);
    }

    let mut terms = Vec::new();
    let mut generators = Vec::new();
    for &i in &active.enclose {
        match farthest_projection(x, &p.enclose[i]).expect("dimension checked") {
            Projection::WholeSphere => {
                return done(CertificateCase::CoincidentBall { index: i }, active);
            }
            Projection::Unique(pi) => {
                terms.push(Term::Enclose(i));
                generators.push((x - &pi) * (1.0 / r));
            }
        }
    }
    for &j in &active.intersect {
        let qj = nearest_projection(x, &p.intersect[j]).expect("dimension checked");
        terms.push(Term::Intersect(j));
        generators.push((x - &qj) * (1.0 / r));
    }

    let hull = min_norm_in_hull(&generators).expect("active set is nonempty");
    CertificateReport {
        case: CertificateCase::Hull,
        active,
        terms,
        generators,
        coefficients: hull.coefficients,
        residual: hull.min_norm,
        tolerance: tol,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    ExactConstruction,
    Subgradient,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SylvesterSolution {
    pub center: Point,
    pub radius: f64,
    pub active: ActiveSets,
    pub certificate: CertificateReport,
    pub method: Method,
    pub trace: Option<ConstructionTrace>,
    pub converged: bool,
    pub iterations: usize,
    /// Fallback signals and warnings raised while solving.
    pub notes: Vec<String>,
}

impl SylvesterSolution {
    pub(crate) fn certified(
        p: &SylvesterProblem,
        center: Point,
        method: Method,
        trace: Option<ConstructionTrace>,
        tol: f64,
    ) -> Self {
        let certificate = check_optimality(&center, p, tol);
        let radius = p.value_raw(center.coords());
        Self {
            active: certificate.active.clone(),
            converged: certificate.passed(),
            center,
            radius,
            certificate,
            method,
            trace,
            iterations: 0,
            notes: Vec::new(),
        }
    }
}

/// Outcome of the uniqueness test.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "verdict", content = "witness")]
pub enum Uniqueness {
    Unique,
    NonUnique(String),
    /// No constructive test is available; treat as possibly non-unique.
    Unknown(String),
}

/// Uniqueness of the optimal center: unique iff something must be enclosed,
/// or the balls to intersect share at most one point.
pub fn uniqueness_test(p: &SylvesterProblem) -> Uniqueness {
    if !p.enclose.is_empty() {
        return Uniqueness::Unique;
    }
    let balls = &p.intersect;
    match p.dim() {
        1 => {
            let lo = balls
                .iter()
                .map(|b| b.center[0] - b.radius)
                .fold(f64::NEG_INFINITY, f64::max);
            let hi = balls
                .iter()
                .map(|b| b.center[0] + b.radius)
                .fold(f64::INFINITY, f64::min);
            if hi - lo > 1e-9 * (1.0 + lo.abs()) {
                Uniqueness::NonUnique(format!("interval [{lo}, {hi}]"))
            } else {
                Uniqueness::Unique
            }
        }
        2 => {
            let disks = disks_from_balls(balls).expect("planar");
            match classify_intersection(&disks, 1e-12) {
                DiskIntersection::Fat(a, b) => Uniqueness::NonUnique(format!(
                    "common points ({}, {}) and ({}, {})",
                    a.x, a.y, b.x, b.y
                )),
                _ => Uniqueness::Unique,
            }
        }
        _ => match balls.as_slice() {
            [b] => {
                if b.radius > 0.0 {
                    Uniqueness::NonUnique("the ball itself".into())
                } else {
                    Uniqueness::Unique
                }
            }
            [a, b] => {
                let d = a.center.dist(&b.center);
                let tol = 1e-9 * (1.0 + d);
                let fat = d < a.radius + b.radius - tol && a.radius.min(b.radius) > tol;
                if fat {
                    Uniqueness::NonUnique("lens of the two balls".into())
                } else {
                    Uniqueness::Unique
                }
            }
            _ => Uniqueness::Unknown(
                "intersection of three or more balls in dimension > 2 is not tested".into(),
            ),
        },
    }
}

/// Feasibility residuals `max_i (|c - a_i| + r_i - r)` and `max_j (|c - b_j| - s_j - r)`.
pub fn feasibility_residual(p: &SylvesterProblem, center: &Point, radius: f64) -> f64 {
    let c = center.coords();
    let e = p
        .enclose
        .iter()
        .map(|b| dist(c, b.center.coords()) + b.radius - radius);
    let i = p
        .intersect
        .iter()
        .map(|b| dist(c, b.center.coords()) - b.radius - radius);
    e.chain(i).fold(f64::NEG_INFINITY, f64::max)
}
