//! The generalized Fermat-Torricelli problem for three balls: minimize
//!
//! ```text
//! H(x) = D(x; Θ_1) + D(x; Θ_2) + D(x; Θ_3)
//! ```
//!
//! over the plane. A term `‖x - a‖ + r` from a ball to enclose is the
//! distance to the singleton `{a}` plus the constant `r`, so mixed families
//! reduce to this form.
//!
//! The solution set is a nonempty compact convex set: the common part of the
//! three balls when it is nonempty, otherwise a single point or a segment on
//! a chord `[b_i, b_j]` through the third ball.

mod certificate;
mod classical;
mod solve;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geom::{Ball, Point};
use crate::subgradient::ConvexObjective;

pub use certificate::{ft_active_set, ft_certificate, FtCase, FtCertificate, FT_TOL};
pub use classical::classical_ft_point;
pub use solve::{
    ft_uniqueness_test, solve_ball_sum, solve_ft, solve_ft_subgradient, BallSumSolution,
    FtSolution, FtSolutionKind, FtUniqueness,
};

/// Three balls with pairwise distinct centers.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FtProblem {
    pub balls: Vec<Ball>,
    /// Sum of the radii of folded enclose terms; `original = H + constant`.
    pub constant: f64,
    /// Which of the balls came from enclose terms.
    pub from_enclose: Vec<bool>,
}

impl FtProblem {
    pub fn new(balls: Vec<Ball>) -> Result<Self> {
        let n = balls.len();
        Self::with_origin(balls, 0.0, vec![false; n])
    }

    fn with_origin(balls: Vec<Ball>, constant: f64, from_enclose: Vec<bool>) -> Result<Self> {
        if balls.len() != 3 {
            return Err(Error::WrongCount(balls.len()));
        }
        let dim = balls[0].dim();
        for b in &balls {
            b.center.check_dim(dim)?;
        }
        for i in 0..3 {
            for j in (i + 1)..3 {
                let d = balls[i].center.dist(&balls[j].center);
                if d <= 1e-12 * (1.0 + balls[i].center.norm()) {
                    return Err(Error::CoincidentCenters(i, j));
                }
            }
        }
        Ok(Self {
            balls,
            constant,
            from_enclose,
        })
    }

    pub fn dim(&self) -> usize {
        self.balls[0].dim()
    }

    pub(crate) fn value_raw(&self, x: &[f64]) -> f64 {
        self.balls.iter().map(|b| b.dist_raw(x)).sum()
    }

    /// Value of the unreduced objective.
    pub fn original_value(&self, x: &Point) -> Result<f64> {
        Ok(ft_objective(x, self)? + self.constant)
    }
}

/// `H(x)`.
pub fn ft_objective(x: &Point, p: &FtProblem) -> Result<f64> {
    x.check_dim(p.dim())?;
    Ok(p.value_raw(x.coords()))
}

/// Folds enclose terms into radius-0 balls, recording their radii as a constant.
pub fn reduce_to_ft2(enclose: &[Ball], intersect: &[Ball]) -> Result<FtProblem> {
    let n = enclose.len() + intersect.len();
    if n != 3 {
        return Err(Error::WrongCount(n));
    }
    let balls = enclose
        .iter()
        .map(|b| Ball::new(b.center.clone(), 0.0))
        .chain(intersect.iter().map(|b| Ok(b.clone())))
        .collect::<Result<Vec<_>>>()?;
    let constant = enclose.iter().map(|b| b.radius).sum();
    let from_enclose = (0..n).map(|i| i < enclose.len()).collect();
    FtProblem::with_origin(balls, constant, from_enclose)
}

/// Sum of distances to any number of balls; solved only by subgradient descent.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BallDistanceSum {
    pub balls: Vec<Ball>,
    pub constant: f64,
}

impl BallDistanceSum {
    pub fn new(enclose: &[Ball], intersect: &[Ball]) -> Result<Self> {
        let first = enclose
            .first()
            .or(intersect.first())
            .ok_or(Error::EmptyProblem)?;
        let dim = first.dim();
        let balls: Vec<Ball> = enclose
            .iter()
            .map(|b| Ball::new(b.center.clone(), 0.0))
            .chain(intersect.iter().map(|b| Ok(b.clone())))
            .collect::<Result<_>>()?;
        for b in &balls {
            b.center.check_dim(dim)?;
        }
        Ok(Self {
            balls,
            constant: enclose.iter().map(|b| b.radius).sum(),
        })
    }
}

fn sum_subgradient(balls: &[Ball], x: &mut [f64], g: &mut [f64]) {
    g.iter_mut().for_each(|v| *v = 0.0);
    for b in balls {
        let c = b.center.coords();
        let d = crate::geom::dist(x, c);
        if d > b.radius && d > 0.0 {
            for ((gi, xi), ci) in g.iter_mut().zip(x.iter()).zip(c) {
                *gi += (xi - ci) / d;
            }
        }
    }
}

fn sum_start(balls: &[Ball]) -> (Vec<f64>, f64) {
    let max_r = balls.iter().map(|b| b.radius).fold(0.0, f64::max);
    crate::subgradient::centroid_scale(
        balls.iter().map(|b| b.center.coords()),
        balls[0].dim(),
        max_r,
    )
}

impl ConvexObjective for FtProblem {
    fn dim(&self) -> usize {
        FtProblem::dim(self)
    }

    fn value(&self, x: &[f64]) -> f64 {
        self.value_raw(x)
    }

    fn subgradient(&self, x: &mut [f64], g: &mut [f64]) {
        sum_subgradient(&self.balls, x, g)
    }

    fn start_and_scale(&self) -> (Vec<f64>, f64) {
        sum_start(&self.balls)
    }
}

impl ConvexObjective for BallDistanceSum {
    fn dim(&self) -> usize {
        self.balls[0].dim()
    }

    fn value(&self, x: &[f64]) -> f64 {
        self.balls.iter().map(|b| b.dist_raw(x)).sum()
    }

    fn subgradient(&self, x: &mut [f64], g: &mut [f64]) {
        sum_subgradient(&self.balls, x, g)
    }

    fn start_and_scale(&self) -> (Vec<f64>, f64) {
        sum_start(&self.balls)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn segment_instance() -> FtProblem {
        FtProblem::new(vec![
            Ball::disk(-3.0, 0.0, 1.0),
            Ball::disk(3.0, 0.0, 1.0),
            Ball::disk(0.0, 0.0, 1.0),
        ])
        .unwrap()
    }

    #[test]
    fn objective_examples() {
        let p = segment_instance();
        assert_eq!(ft_objective(&Point::xy(0.0, 0.0), &p).unwrap(), 4.0);
        for t in [-1.0, -0.5, 0.0, 0.3, 1.0] {
            assert!((ft_objective(&Point::xy(t, 0.0), &p).unwrap() - 4.0).abs() < 1e-15);
        }
        let q = FtProblem::new(vec![
            Ball::disk(0.0, 0.5, 1.0),
            Ball::disk(0.5, 0.0, 1.0),
            Ball::disk(-0.5, 0.0, 1.0),
        ])
        .unwrap();
        assert_eq!(ft_objective(&Point::xy(0.0, 0.0), &q).unwrap(), 0.0);
    }

    #[test]
    fn reduction_example() {
        let p = reduce_to_ft2(
            &[Ball::disk(0.0, 0.0, 2.0)],
            &[Ball::disk(3.0, 0.0, 1.0), Ball::disk(0.0, 3.0, 1.0)],
        )
        .unwrap();
        assert_eq!(p.balls[0], Ball::disk(0.0, 0.0, 0.0));
        assert_eq!(p.constant, 2.0);
        assert_eq!(p.from_enclose, vec![true, false, false]);
        let q = reduce_to_ft2(&[], &segment_instance().balls).unwrap();
        assert_eq!(q.balls, segment_instance().balls);
        assert_eq!(q.constant, 0.0);
    }

    #[test]
    fn rejects_bad_families() {
        assert!(matches!(
            FtProblem::new(vec![Ball::disk(0.0, 0.0, 1.0); 2]),
            Err(Error::WrongCount(2))
        ));
        assert!(matches!(
            FtProblem::new(vec![
                Ball::disk(0.0, 0.0, 1.0),
                Ball::disk(0.0, 0.0, 2.0),
                Ball::disk(1.0, 0.0, 1.0)
            ]),
            Err(Error::CoincidentCenters(0, 1))
        ));
    }
}
