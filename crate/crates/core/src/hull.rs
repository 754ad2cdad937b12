//! Minimum-norm point of a convex hull.
//!
//! Optimality certificates reduce to deciding whether the origin lies in the
//! convex hull of finitely many subgradients. The residual reported here is
//! the norm of the hull's minimum-norm point; it is zero exactly when the
//! origin is in the hull.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geom::{dot, Point};

const CONVERGENCE_TOL: f64 = 1e-12;
const MAX_MAJOR: usize = 1000;

/// Minimum-norm element of `co{generators}` with exhibiting coefficients.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HullCertificate {
    pub generators: Vec<Point>,
    pub coefficients: Vec<f64>,
    pub point: Point,
    pub min_norm: f64,
}

impl HullCertificate {
    /// Whether the origin belongs to the hull up to `tol`.
    pub fn contains_origin(&self, tol: f64) -> bool {
        self.min_norm <= tol
    }

    /// Indices of generators carrying positive weight.
    pub fn support(&self) -> Vec<usize> {
        self.coefficients
            .iter()
            .enumerate()
            .filter(|(_, &c)| c > 0.0)
            .map(|(i, _)| i)
            .collect()
    }
}

/// Minimum-norm point of the convex hull of `vectors`.
///
/// Up to three generators are handled by enumerating every face of the
/// simplex; larger lists go through Wolfe's corral iteration.
pub fn min_norm_in_hull(vectors: &[Point]) -> Result<HullCertificate> {
    let first = vectors.first().ok_or(Error::EmptyHull)?;
    let dim = first.dim();
    for v in vectors {
        v.check_dim(dim)?;
    }
    let coefficients = if vectors.len() <= 3 {
        enumerate_faces(vectors)
    } else {
        wolfe(vectors)
    };
    Ok(certificate(vectors, coefficients))
}

fn certificate(vectors: &[Point], mut coefficients: Vec<f64>) -> HullCertificate {
    for c in coefficients.iter_mut() {
        if *c < 0.0 {
            *c = 0.0;
        }
    }
    let total: f64 = coefficients.iter().sum();
    for c in coefficients.iter_mut() {
        *c /= total;
    }
    let point = combine(vectors, &coefficients);
    HullCertificate {
        generators: vectors.to_vec(),
        min_norm: point.norm(),
        coefficients,
        point,
    }
}

fn combine(vectors: &[Point], coefficients: &[f64]) -> Point {
    let mut acc = vec![0.0; vectors[0].dim()];
    for (v, &c) in vectors.iter().zip(coefficients) {
        if c != 0.0 {
            for (a, x) in acc.iter_mut().zip(v.coords()) {
                *a += c * x;
            }
        }
    }
    Point::from_vec(acc)
}

/// Exact search over all faces of a simplex with at most three vertices.
fn enumerate_faces(vectors: &[Point]) -> Vec<f64> {
    let k = vectors.len();
    let mut best: Option<(f64, Vec<f64>)> = None;
    for mask in 1u32..(1 << k) {
        let idx: Vec<usize> = (0..k).filter(|i| mask & (1 << i) != 0).collect();
        let Some(alpha) = affine_minimizer(vectors, &idx) else {
            continue;
        };
        if alpha.iter().any(|&a| a < -1e-14) {
            continue;
        }
        let mut coeffs = vec![0.0; k];
        for (&i, &a) in idx.iter().zip(&alpha) {
            coeffs[i] = a.max(0.0);
        }
        let n = combine(vectors, &coeffs).norm();
        if best.as_ref().is_none_or(|(bn, _)| n < *bn) {
            best = Some((n, coeffs));
        }
    }
    best.map(|(_, c)| c)
        .expect("vertices always yield a candidate")
}

/// Minimum-norm point of the affine hull of `vectors[idx]`, as barycentric
/// coefficients. `None` when the points are affinely dependent.
fn affine_minimizer(vectors: &[Point], idx: &[usize]) -> Option<Vec<f64>> {
    let m = idx.len();
    if m == 1 {
        return Some(vec![1.0]);
    }
    // Bordered Gram system [G 1; 1^T 0] [alpha; mu] = [0; 1].
    let size = m + 1;
    let mut a = vec![vec![0.0; size + 1]; size];
    let scale = idx
        .iter()
        .map(|&i| vectors[i].norm())
        .fold(0.0_f64, f64::max)
        .max(1e-300);
    for r in 0..m {
        for c in 0..m {
            a[r][c] = dot(vectors[idx[r]].coords(), vectors[idx[c]].coords()) / (scale * scale);
        }
        a[r][m] = 1.0;
        a[m][r] = 1.0;
    }
    a[m][size] = 1.0;
    let sol = solve_dense(a)?;
    Some(sol[..m].to_vec())
}

/// Gaussian elimination with partial pivoting on an augmented matrix.
fn solve_dense(mut a: Vec<Vec<f64>>) -> Option<Vec<f64>> {
    let n = a.len();
    let magnitude = a
        .iter()
        .flat_map(|r| r[..n].iter())
        .fold(0.0_f64, |m, v| m.max(v.abs()));
    for col in 0..n {
        let piv = (col..n).max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs()))?;
        if a[piv][col].abs() <= 1e-13 * magnitude.max(1.0) {
            return None;
        }
        a.swap(col, piv);
        let pivot = a[col].clone();
        for (r, row) in a.iter_mut().enumerate() {
            let f = row[col] / pivot[col];
            if r != col && f != 0.0 {
                for (x, p) in row[col..].iter_mut().zip(&pivot[col..]) {
                    *x -= f * p;
                }
            }
        }
    }
    Some((0..n).map(|i| a[i][n] / a[i][i]).collect())
}

/// Wolfe's minimum-norm-point algorithm.
fn wolfe(vectors: &[Point]) -> Vec<f64> {
    let k = vectors.len();
    let scale = vectors.iter().map(Point::norm).fold(0.0_f64, f64::max);
    let start = (0..k)
        .min_by(|&i, &j| vectors[i].norm().total_cmp(&vectors[j].norm()))
        .expect("nonempty");
    let mut corral: Vec<usize> = vec![start];
    let mut lambda: Vec<f64> = vec![1.0];
    let mut x = vectors[start].clone();

    for _ in 0..MAX_MAJOR {
        let xx = x.dot(&x);
        let (j, xpj) = (0..k)
            .map(|i| (i, x.dot(&vectors[i])))
            .min_by(|a, b| a.1.total_cmp(&b.1))
            .expect("nonempty");
        if xx - xpj <= CONVERGENCE_TOL * scale * scale || corral.contains(&j) {
            break;
        }
        corral.push(j);
        lambda.push(0.0);

        loop {
            let Some(alpha) = affine_minimizer(vectors, &corral) else {
                // dependent corral: drop the newest point and stop
                corral.pop();
                lambda.pop();
                break;
            };
            if alpha.iter().all(|&a| a > CONVERGENCE_TOL) {
                lambda = alpha;
                break;
            }
            let theta = lambda
                .iter()
                .zip(&alpha)
                .filter(|(_, &a)| a <= CONVERGENCE_TOL)
                .map(|(&l, &a)| if l - a > 0.0 { l / (l - a) } else { 0.0 })
                .fold(1.0_f64, f64::min);
            for (l, a) in lambda.iter_mut().zip(&alpha) {
                *l += theta * (a - *l);
            }
            let keep: Vec<bool> = lambda.iter().map(|&l| l > CONVERGENCE_TOL).collect();
            let mut i = 0;
            corral.retain(|_| {
                i += 1;
                keep[i - 1]
            });
            lambda.retain(|&l| l > CONVERGENCE_TOL);
            if corral.is_empty() {
                corral.push(j);
                lambda = vec![1.0];
                break;
            }
        }
        let mut coeffs = vec![0.0; k];
        for (&i, &l) in corral.iter().zip(&lambda) {
            coeffs[i] = l;
        }
        let total: f64 = coeffs.iter().sum();
        coeffs.iter_mut().for_each(|c| *c /= total);
        x = combine(vectors, &coeffs);
    }

    let mut coeffs = vec![0.0; k];
    for (&i, &l) in corral.iter().zip(&lambda) {
        coeffs[i] = l;
    }
    coeffs
}
