use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::geom::{dist, dot, Point};

use super::FtProblem;

/// Default tolerance for membership and for the certificate gap.
pub const FT_TOL: f64 = 1e-9;

/// How `x` sits in ball `i`.
#[derive(Debug, Clone, PartialEq)]
enum Membership {
    Outside,
    Interior,
    /// On the boundary, with the outward unit normal.
    Boundary(Vec<f64>),
    /// At the center of a radius-0 ball: every direction is normal.
    Center,
}

fn membership(x: &[f64], p: &FtProblem, i: usize, tol: f64) -> Membership {
    let b = &p.balls[i];
    let c = b.center.coords();
    let d = dist(x, c);
    let slack = tol * (1.0 + b.radius);
    if b.radius <= slack {
        return if d <= slack {
            Membership::Center
        } else {
            Membership::Outside
        };
    }
    if d > b.radius + slack {
        Membership::Outside
    } else if d < b.radius - slack {
        Membership::Interior
    } else {
        Membership::Boundary(x.iter().zip(c).map(|(a, b)| (a - b) / d).collect())
    }
}

/// `A(x)`: indices of the balls containing `x`, up to `FT_TOL`.
pub fn ft_active_set(x: &Point, p: &FtProblem) -> Result<Vec<usize>> {
    x.check_dim(p.dim())?;
    Ok((0..3)
        .filter(|&i| membership(x.coords(), p, i, FT_TOL) != Membership::Outside)
        .collect())
}

/// Which optimality condition was checked, with its witnesses.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "kind")]
pub enum FtCase {
    /// `x` lies in all three balls, so `H(x) = 0`.
    InsideAll,
    /// No ball contains `x`: `e_1 + e_2 + e_3 = 0`.
    Stationary,
    /// Only ball `index` contains `x`: `-(e_j + e_k)` is a normal of length at most 1.
    OneBall { index: usize, inner_product: f64 },
    /// Balls `indices` contain `x`: `-e_k = s n_i + t n_j` with `s, t ∈ [0, 1]`,
    /// `n` the outward unit normals (zero at interior points).
    TwoBalls { indices: [usize; 2], s: f64, t: f64 },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FtCertificate {
    pub active: Vec<usize>,
    /// `e_i = (x - b_i)/‖x - b_i‖` for every ball not containing `x`.
    pub unit_vectors: Vec<(usize, Point)>,
    pub case: FtCase,
    /// Distance from `-Σ e_i` to the sum of the truncated normal cones.
    pub gap: f64,
    pub tolerance: f64,
}

impl FtCertificate {
    pub fn passed(&self) -> bool {
        self.gap <= self.tolerance
    }
}

/// Checks `-Σ_{i∉A} e_i ∈ Σ_{i∈A} (N(x; Θ_i) ∩ B)` at `x`.
pub fn ft_certificate(x: &Point, p: &FtProblem, tol: f64) -> Result<FtCertificate> {
    x.check_dim(p.dim())?;
    let xs = x.coords();
    let n = xs.len();
    let members: Vec<Membership> = (0..3).map(|i| membership(xs, p, i, FT_TOL)).collect();
    let active: Vec<usize> = (0..3)
        .filter(|&i| members[i] != Membership::Outside)
        .collect();

    let unit_vectors: Vec<(usize, Point)> = (0..3)
        .filter(|&i| members[i] == Membership::Outside)
        .map(|i| {
            let c = p.balls[i].center.coords();
            let d = dist(xs, c);
            (
                i,
                Point::from_vec(xs.iter().zip(c).map(|(a, b)| (a - b) / d).collect()),
            )
        })
        .collect();
    let mut target = vec![0.0; n];
    for (_, e) in &unit_vectors {
        for (t, v) in target.iter_mut().zip(e.coords()) {
            *t -= v;
        }
    }

    let mut normals = Vec::new();
    let mut free_balls = 0usize;
    for &i in &active {
        match &members[i] {
            Membership::Boundary(nv) => normals.push(Some(nv.clone())),
            Membership::Center => {
                free_balls += 1;
                normals.push(None);
            }
            _ => normals.push(None),
        }
    }
    let segs: Vec<&Vec<f64>> = normals.iter().flatten().collect();
    let (dist_z, lambdas) = box_distance(&target, &segs);
    let gap = if active.len() == 3 {
        0.0
    } else {
        (dist_z - free_balls as f64).max(0.0)
    };

    let mut lam_iter = lambdas.into_iter();
    let coef: Vec<f64> = normals
        .iter()
        .map(|nv| {
            if nv.is_some() {
                lam_iter.next().unwrap_or(0.0)
            } else {
                0.0
            }
        })
        .collect();
    let case = match active.len() {
        0 => FtCase::Stationary,
        1 => {
            let inner = match unit_vectors.as_slice() {
                [(_, a), (_, b)] => a.dot(b),
                _ => f64::NAN,
            };
            FtCase::OneBall {
                index: active[0],
                inner_product: inner,
            }
        }
        2 => FtCase::TwoBalls {
            indices: [active[0], active[1]],
            s: coef[0],
            t: coef[1],
        },
        _ => FtCase::InsideAll,
    };
    Ok(FtCertificate {
        active,
        unit_vectors,
        case,
        gap,
        tolerance: tol,
    })
}

/// `min ‖target - Σ λ_a n_a‖` over `λ ∈ [0, 1]^m` for `m ≤ 2` unit vectors.
fn box_distance(target: &[f64], normals: &[&Vec<f64>]) -> (f64, Vec<f64>) {
    let resid = |l: &[f64]| -> f64 {
        let mut r = target.to_vec();
        for (n, &lam) in normals.iter().zip(l) {
            for (ri, ni) in r.iter_mut().zip(n.iter()) {
                *ri -= lam * ni;
            }
        }
        dot(&r, &r).sqrt()
    };
    match normals {
        [] => (dot(target, target).sqrt(), Vec::new()),
        [a] => {
            let l = dot(target, a).clamp(0.0, 1.0);
            (resid(&[l]), vec![l])
        }
        [a, b] => {
            let mut cands: Vec<[f64; 2]> = Vec::new();
            let ab = dot(a, b);
            let (ta, tb) = (dot(target, a), dot(target, b));
            let det = 1.0 - ab * ab;
            if det > 1e-14 {
                let l1 = (ta - ab * tb) / det;
                let l2 = (tb - ab * ta) / det;
                if (0.0..=1.0).contains(&l1) && (0.0..=1.0).contains(&l2) {
                    cands.push([l1, l2]);
                }
            }
            for fixed in [0.0, 1.0] {
                cands.push([fixed, (tb - fixed * ab).clamp(0.0, 1.0)]);
                cands.push([(ta - fixed * ab).clamp(0.0, 1.0), fixed]);
            }
            cands
                .into_iter()
                .map(|l| (resid(&l), l.to_vec()))
                .min_by(|x, y| x.0.total_cmp(&y.0))
                .expect("candidates")
        }
        _ => unreachable!("at most two boundary normals below three active balls"),
    }
}
