//! Plain subgradient descent with a diminishing step and best-iterate
//! tracking, shared by the Sylvester and Fermat-Torricelli objectives.

use serde::{Deserialize, Serialize};

/// A convex, Lipschitz objective on `R^n` with an explicit subgradient oracle.
pub trait ConvexObjective {
    fn dim(&self) -> usize;

    fn value(&self, x: &[f64]) -> f64;

    /// Writes one subgradient at `x` into `g`. May nudge `x` off a
    /// nondifferentiable degeneracy first.
    fn subgradient(&self, x: &mut [f64], g: &mut [f64]);

    /// Starting point and the scale `R0` used by the step rule.
    fn start_and_scale(&self) -> (Vec<f64>, f64);
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SubgradientConfig {
    pub max_iter: usize,
    pub step_scale: f64,
    /// The iteration budget is split into this many epochs; each restarts
    /// from the best iterate with the step scale multiplied by `shrink`.
    pub epochs: usize,
    pub shrink: f64,
    /// Certificate residual below which the run stops early.
    pub tol: f64,
}

impl Default for SubgradientConfig {
    fn default() -> Self {
        Self {
            max_iter: 50_000,
            step_scale: 1.0,
            epochs: 20,
            shrink: 0.5,
            tol: 1e-8,
        }
    }
}

/// Outcome of a run. `best_history` samples the best-so-far value every
/// `HISTORY_STRIDE` iterations.
#[derive(Debug, Clone, PartialEq)]
pub struct Descent {
    pub best: Vec<f64>,
    pub best_value: f64,
    pub iterations: usize,
    pub converged: bool,
    pub best_history: Vec<f64>,
}

pub const HISTORY_STRIDE: usize = 100;
const CERTIFY_STRIDE: usize = 250;

/// Runs `x_{k+1} = x_k - (step_scale R0 s^e / sqrt(k+1)) g_k`, where `e`
/// counts epochs, `s = shrink`, and `k` restarts at zero in each epoch from
/// the best iterate so far. One epoch gives the plain diminishing step.
///
/// `certify` returns the certificate residual at a point; it is consulted
/// at the best iterate every few hundred iterations after an improvement.
pub fn minimize<F>(f: &impl ConvexObjective, cfg: &SubgradientConfig, mut certify: F) -> Descent
where
    F: FnMut(&[f64]) -> f64,
{
    let (mut x, r0) = f.start_and_scale();
    let n = f.dim();
    let mut g = vec![0.0; n];
    let mut best = x.clone();
    let mut best_value = f.value(&x);
    let mut history = vec![best_value];
    let mut improved = true;
    let mut converged = false;
    let mut iterations = 0;

    if certify(&best) < cfg.tol {
        return Descent {
            best,
            best_value,
            iterations,
            converged: true,
            best_history: history,
        };
    }

    let epochs = cfg.epochs.max(1);
    let epoch_len = cfg.max_iter.div_ceil(epochs).max(1);
    let mut scale = cfg.step_scale * r0;
    let mut k = 0usize;
    while iterations < cfg.max_iter {
        if k == epoch_len {
            k = 0;
            scale *= cfg.shrink;
            x.copy_from_slice(&best);
        }
        iterations += 1;
        f.subgradient(&mut x, &mut g);
        let gn = g.iter().map(|v| v * v).sum::<f64>().sqrt();
        if gn == 0.0 {
            // zero subgradient: x is a minimizer
            let v = f.value(&x);
            if v <= best_value {
                best.copy_from_slice(&x);
                best_value = v;
            }
            converged = true;
            break;
        }
        let step = scale / ((k + 1) as f64).sqrt();
        k += 1;
        for (xi, gi) in x.iter_mut().zip(&g) {
            *xi -= step * gi;
        }
        let v = f.value(&x);
        if v < best_value {
            best_value = v;
            best.copy_from_slice(&x);
            improved = true;
        }
        if iterations % HISTORY_STRIDE == 0 {
            history.push(best_value);
        }
        if improved && iterations % CERTIFY_STRIDE == 0 {
            improved = false;
            if certify(&best) < cfg.tol {
                converged = true;
                break;
            }
        }
    }
    history.push(best_value);

    Descent {
        best,
        best_value,
        iterations,
        converged,
        best_history: history,
    }
}

/// Centroid of the given centers and `R0 = 2 rho + max radius`, where `rho`
/// bounds the distance from the centroid to every center.
pub(crate) fn centroid_scale<'a>(
    centers: impl Iterator<Item = &'a [f64]> + Clone,
    dim: usize,
    max_radius: f64,
) -> (Vec<f64>, f64) {
    let mut c = vec![0.0; dim];
    let mut count = 0usize;
    for p in centers.clone() {
        for (a, b) in c.iter_mut().zip(p) {
            *a += b;
        }
        count += 1;
    }
    c.iter_mut().for_each(|a| *a /= count.max(1) as f64);
    let rho = centers
        .map(|p| crate::geom::dist(p, &c))
        .fold(0.0_f64, f64::max);
    let r0 = (2.0 * rho + max_radius).max(1e-6);
    (c, r0)
}

#[cfg(test)]
mod tests {
    use super::*;

    /// |x - 3| + |y + 1|
    struct Taxicab;

    impl ConvexObjective for Taxicab {
        fn dim(&self) -> usize {
            2
        }
        fn value(&self, x: &[f64]) -> f64 {
            (x[0] - 3.0).abs() + (x[1] + 1.0).abs()
        }
        fn subgradient(&self, x: &mut [f64], g: &mut [f64]) {
            g[0] = (x[0] - 3.0).signum();
            g[1] = (x[1] + 1.0).signum();
        }
        fn start_and_scale(&self) -> (Vec<f64>, f64) {
            (vec![0.0, 0.0], 1.0)
        }
    }

    #[test]
    fn reaches_taxicab_minimum() {
        let d = minimize(&Taxicab, &SubgradientConfig::default(), |_| f64::INFINITY);
        assert!(d.best_value < 1e-2, "{}", d.best_value);
        assert!(d.best_history.windows(2).all(|w| w[1] <= w[0]));
    }
}
