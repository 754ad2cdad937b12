//! Balls tangent to three given disks with a prescribed tangency pattern.
//!
//! A ball `B(x; r)` is internally tangent to `B(c; ρ)` (contains it, touching
//! once) when `|x - c| = r - ρ`, and externally tangent when `|x - c| = r + ρ`.
//! Writing `σ = -1` for internal and `+1` for external, all three conditions
//! read `|x - c_k| = r + σ_k ρ_k`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geom::Ball;
use crate::plane::{require_planar, Disk, Vec2};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Tangency {
    /// The tangent ball contains the given ball.
    Internal,
    /// The tangent ball touches the given ball from outside.
    External,
}

impl Tangency {
    pub fn sign(self) -> f64 {
        match self {
            Tangency::Internal => -1.0,
            Tangency::External => 1.0,
        }
    }
}

pub type TangencySpec = [Tangency; 3];

const FEASIBILITY_TOL: f64 = 1e-9;

/// The tangent ball with the smallest feasible radius.
pub fn apollonius_ball(balls: &[Ball], spec: &TangencySpec) -> Result<Ball> {
    let disks = check(balls)?;
    let cands = apollonius_candidates(&disks, spec)?;
    cands
        .into_iter()
        .next()
        .map(|d| d.to_ball())
        .ok_or(Error::NoTangentBall)
}

fn check(balls: &[Ball]) -> Result<[Disk; 3]> {
    if balls.len() != 3 {
        return Err(Error::WrongCount(balls.len()));
    }
    require_planar(&balls.iter().collect::<Vec<_>>())?;
    let d: Vec<Disk> = balls.iter().map(Disk::from_ball).collect::<Result<_>>()?;
    Ok([d[0], d[1], d[2]])
}

/// All feasible tangent balls, sorted by radius.
pub(crate) fn apollonius_candidates(disks: &[Disk; 3], spec: &TangencySpec) -> Result<Vec<Disk>> {
    for i in 0..3 {
        for j in (i + 1)..3 {
            if disks[i].c.dist(disks[j].c) <= 1e-12 * (1.0 + disks[i].c.norm()) {
                return Err(Error::CoincidentCenters(i, j));
            }
        }
    }
    let offsets: [f64; 3] = std::array::from_fn(|k| spec[k].sign() * disks[k].r);
    let origin = disks[0].c;
    let c: [Vec2; 3] = std::array::from_fn(|k| disks[k].c - origin);
    let scale = c[1].norm().max(c[2].norm());

    let raw = if c[1].cross(c[2]).abs() > 1e-12 * c[1].norm() * c[2].norm() {
        general_position(&c, &offsets)
    } else {
        collinear(&c, &offsets)?
    };

    let tol = FEASIBILITY_TOL * (1.0 + scale);
    let mut out: Vec<Disk> = raw
        .into_iter()
        .filter_map(|(x, r)| polish(&c, &offsets, x, r))
        .filter(|&(_, r)| r >= -tol && offsets.iter().all(|o| r + o >= -tol))
        .map(|(x, r)| Disk::new(x + origin, r.max(0.0)))
        .collect();
    out.sort_by(|a, b| a.r.total_cmp(&b.r));
    out.dedup_by(|a, b| (a.r - b.r).abs() <= tol && a.c.dist(b.c) <= tol);
    Ok(out)
}

/// Centers in general position: subtracting the first squared equation from
/// the others gives `x` affine in `r`; the first equation is then a quadratic in `r`.
fn general_position(c: &[Vec2; 3], o: &[f64; 3]) -> Vec<(Vec2, f64)> {
    // c_k . x + (o_k - o_1) r = (|c_k|^2 - o_k^2 + o_1^2) / 2
    let h = |k: usize| (c[k].dot(c[k]) - o[k] * o[k] + o[0] * o[0]) / 2.0;
    let det = c[1].cross(c[2]);
    let solve = |b1: f64, b2: f64| {
        Vec2::new(
            (b1 * c[2].y - b2 * c[1].y) / det,
            (c[1].x * b2 - c[2].x * b1) / det,
        )
    };
    let p = solve(h(1), h(2));
    let q = solve(-(o[1] - o[0]), -(o[2] - o[0]));
    // |p + q r|^2 = (r + o_1)^2
    let a = q.dot(q) - 1.0;
    let b = 2.0 * (p.dot(q) - o[0]);
    let cc = p.dot(p) - o[0] * o[0];
    quadratic_roots(a, b, cc)
        .into_iter()
        .map(|r| (p + q * r, r))
        .collect()
}

/// Collinear centers: work in a frame whose first axis is the common line.
fn collinear(c: &[Vec2; 3], o: &[f64; 3]) -> Result<Vec<(Vec2, f64)>> {
    let far = if c[1].norm() >= c[2].norm() {
        c[1]
    } else {
        c[2]
    };
    let u = far.unit().ok_or(Error::RankDeficient)?;
    let t = [0.0, c[1].dot(u), c[2].dot(u)];
    // t_k X + (o_k - o_1) r = (t_k^2 - o_k^2 + o_1^2) / 2, k = 2, 3
    let (a11, a12, b1) = (
        t[1],
        o[1] - o[0],
        (t[1] * t[1] - o[1] * o[1] + o[0] * o[0]) / 2.0,
    );
    let (a21, a22, b2) = (
        t[2],
        o[2] - o[0],
        (t[2] * t[2] - o[2] * o[2] + o[0] * o[0]) / 2.0,
    );
    let det = a11 * a22 - a12 * a21;
    if det.abs() <= 1e-12 * (a11.abs() + a21.abs()) * (1.0 + a12.abs() + a22.abs()) {
        return Err(Error::RankDeficient);
    }
    let along = (b1 * a22 - b2 * a12) / det;
    let r = (a11 * b2 - a21 * b1) / det;
    let y2 = (r + o[0]).powi(2) - along * along;
    if y2 < -1e-12 * (1.0 + along * along) {
        return Ok(Vec::new());
    }
    let y = y2.max(0.0).sqrt();
    let n = u.perp();
    let base = u * along;
    Ok(vec![(base + n * y, r), (base - n * y, r)])
}

fn quadratic_roots(a: f64, b: f64, c: f64) -> Vec<f64> {
    let scale = a.abs().max(b.abs()).max(c.abs());
    if scale == 0.0 {
        return Vec::new();
    }
    if a.abs() <= 1e-14 * scale {
        return if b != 0.0 { vec![-c / b] } else { Vec::new() };
    }
    let disc = b * b - 4.0 * a * c;
    if disc < -1e-14 * b * b.max(1.0) {
        return Vec::new();
    }
    let s = disc.max(0.0).sqrt();
    // numerically stable pair
    let qq = -0.5 * (b + b.signum() * s);
    if qq == 0.0 {
        return vec![0.0];
    }
    vec![qq / a, c / qq]
}

/// Newton refinement of `|x - c_k| - (r + o_k) = 0`.
fn polish(c: &[Vec2; 3], o: &[f64; 3], mut x: Vec2, mut r: f64) -> Option<(Vec2, f64)> {
    for _ in 0..8 {
        let mut jac = [[0.0; 3]; 3];
        let mut f = [0.0; 3];
        for k in 0..3 {
            let d = x - c[k];
            let n = d.norm();
            if n == 0.0 {
                return Some((x, r));
            }
            f[k] = n - (r + o[k]);
            jac[k] = [d.x / n, d.y / n, -1.0];
        }
        let Some(step) = solve3(jac, f) else {
            break;
        };
        x = x - Vec2::new(step[0], step[1]);
        r -= step[2];
        if step.iter().map(|s| s.abs()).fold(0.0, f64::max) < 1e-16 * (1.0 + r.abs()) {
            break;
        }
    }
    // a clamped near-negative discriminant yields a root with no tangent ball nearby
    let residual = (0..3)
        .map(|k| ((x - c[k]).norm() - (r + o[k])).abs())
        .fold(0.0, f64::max);
    let scale = c.iter().map(|v| v.norm()).fold(r.abs(), f64::max);
    (x.x.is_finite()
        && x.y.is_finite()
        && r.is_finite()
        && residual <= FEASIBILITY_TOL * (1.0 + scale))
        .then_some((x, r))
}

fn solve3(m: [[f64; 3]; 3], b: [f64; 3]) -> Option<[f64; 3]> {
    let det = |m: &[[f64; 3]; 3]| {
        m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
            - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
            + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
    };
    let d = det(&m);
    if d.abs() < 1e-14 {
        return None;
    }
    let mut out = [0.0; 3];
    for (col, slot) in out.iter_mut().enumerate() {
        let mut mm = m;
        for row in 0..3 {
            mm[row][col] = b[row];
        }
        *slot = det(&mm) / d;
    }
    Some(out)
}

/// `max_k | |x - c_k| - (r + σ_k ρ_k) |`
pub fn tangency_residual(ball: &Ball, balls: &[Ball], spec: &TangencySpec) -> f64 {
    balls
        .iter()
        .zip(spec)
        .map(|(b, s)| (ball.center.dist(&b.center) - (ball.radius + s.sign() * b.radius)).abs())
        .fold(0.0, f64::max)
}
