use crate::geom::{Point, COINCIDENCE_TOL};
use crate::subgradient::{centroid_scale, minimize, ConvexObjective, SubgradientConfig};

use super::{check_optimality, Method, SylvesterProblem, SylvesterSolution};

impl ConvexObjective for SylvesterProblem {
    fn dim(&self) -> usize {
        self.dim
    }

    fn value(&self, x: &[f64]) -> f64 {
        self.value_raw(x)
    }

    fn subgradient(&self, x: &mut [f64], g: &mut [f64]) {
        // largest term wins; ties go to the lowest index, enclose first
        let mut best: Option<(f64, &[f64], bool)> = None;
        for b in &self.enclose {
            let v = b.farthest_raw(x);
            if best.is_none_or(|(bv, _, _)| v > bv) {
                best = Some((v, b.center.coords(), true));
            }
        }
        for b in &self.intersect {
            let v = b.dist_raw(x);
            if best.is_none_or(|(bv, _, _)| v > bv) {
                best = Some((v, b.center.coords(), false));
            }
        }
        let (value, center, is_enclose) = best.expect("nonempty problem");
        if !is_enclose && value == 0.0 {
            // inside every ball to intersect
            g.iter_mut().for_each(|v| *v = 0.0);
            return;
        }
        let scale = COINCIDENCE_TOL * (1.0 + crate::geom::norm(center));
        if crate::geom::dist(x, center) <= scale {
            x[0] += 1e-9;
        }
        let d = crate::geom::dist(x, center);
        for ((gi, xi), ci) in g.iter_mut().zip(x.iter()).zip(center) {
            *gi = (xi - ci) / d;
        }
    }

    fn start_and_scale(&self) -> (Vec<f64>, f64) {
        centroid_scale(
            self.enclose
                .iter()
                .chain(&self.intersect)
                .map(|b| b.center.coords()),
            self.dim,
            self.max_radius(),
        )
    }
}

/// Subgradient descent on `G` with the diminishing step
/// `step_scale R0 / sqrt(k+1)` and best-iterate tracking.
///
/// The returned solution is flagged `converged` only when the certificate
/// residual at the best iterate fell below `cfg.tol`.
pub fn solve_subgradient(p: &SylvesterProblem, cfg: &SubgradientConfig) -> SylvesterSolution {
    let run = minimize(p, cfg, |x| {
        check_optimality(&Point::from_vec(x.to_vec()), p, cfg.tol).residual
    });
    let center = Point::from_vec(run.best);
    let mut sol = SylvesterSolution::certified(p, center, Method::Subgradient, None, cfg.tol);
    sol.converged = run.converged || sol.certificate.passed();
    sol.iterations = run.iterations;
    if !sol.converged {
        sol.notes.push(format!(
            "subgradient stopped after {} iterations without a certificate (residual {:.3e})",
            run.iterations, sol.certificate.residual
        ));
    }
    sol
}
