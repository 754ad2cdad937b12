use crate::error::{Error, Result};
use crate::geom::Ball;
use crate::plane::{
    classify_intersection, contains_disk, disks_from_balls, disks_intersect, require_planar, Disk,
    DiskIntersection, Vec2,
};
use crate::subgradient::SubgradientConfig;
use crate::sylvester::{solve_subgradient, Method, SylvesterProblem, SylvesterSolution};

use super::models::{
    solve_model_i, solve_model_ii, solve_model_iii, solve_model_iv, EXACT_CERT_TOL,
};

/// Solves any problem: planar ones exactly, others by subgradient descent.
pub fn solve_sylvester(p: &SylvesterProblem, cfg: &SubgradientConfig) -> SylvesterSolution {
    if p.dim() == 2 {
        if let Ok(s) = solve_exact_planar(p) {
            return s;
        }
    }
    solve_subgradient(p, cfg)
}

/// Center of the optimal ball for a family of at most two planar balls.
fn pair_center(p: &SylvesterProblem) -> Result<Vec2> {
    let e = disks_from_balls(&p.enclose)?;
    let i = disks_from_balls(&p.intersect)?;
    Ok(match (e.as_slice(), i.as_slice()) {
        ([a], []) => a.c,
        ([], [b]) => b.c,
        ([a, b], []) => {
            if contains_disk(a, b) {
                a.c
            } else if contains_disk(b, a) {
                b.c
            } else {
                let x1 = a
                    .farthest_point(b.c)
                    .ok_or(Error::CoincidentCenters(0, 1))?;
                let x2 = b
                    .farthest_point(a.c)
                    .ok_or(Error::CoincidentCenters(0, 1))?;
                x1.mid(x2)
            }
        }
        ([a], [b]) => {
            if disks_intersect(a, b) {
                a.c
            } else {
                let u = a
                    .farthest_point(b.c)
                    .ok_or(Error::CoincidentCenters(0, 1))?;
                u.mid(b.nearest(a.c))
            }
        }
        ([], [a, b]) => {
            if disks_intersect(a, b) {
                // the point of `a` nearest to b's center lies in `b`
                a.nearest(b.c)
            } else {
                a.nearest(b.c).mid(b.nearest(a.c))
            }
        }
        _ => return Err(Error::Unsupported("at most two balls".into())),
    })
}

/// Exact solution for one or two planar balls.
pub fn solve_pair(p: &SylvesterProblem) -> Result<SylvesterSolution> {
    let c = pair_center(p)?;
    Ok(SylvesterSolution::certified(
        p,
        c.to_point(),
        Method::ExactConstruction,
        None,
        EXACT_CERT_TOL,
    ))
}

/// Exact solution for three planar balls via the matching model.
pub fn solve_three(p: &SylvesterProblem) -> Result<SylvesterSolution> {
    let all: Vec<&Ball> = p.enclose.iter().chain(&p.intersect).collect();
    let [a, b, c] = all.as_slice() else {
        return Err(Error::WrongCount(all.len()));
    };
    match p.enclose.len() {
        3 => solve_model_i(a, b, c),
        2 => solve_model_ii(a, b, c),
        1 => solve_model_iii(a, b, c),
        _ => solve_model_iv(a, b, c),
    }
}

/// Exact solution for any number of planar balls.
///
/// The optimum is attained by a subfamily of at most three balls, so every
/// such subfamily is solved exactly; among candidates feasible for the whole
/// family, the one with the largest radius is optimal.
pub fn solve_exact_planar(p: &SylvesterProblem) -> Result<SylvesterSolution> {
    require_planar(&p.enclose.iter().chain(&p.intersect).collect::<Vec<_>>())?;
    match p.len() {
        0 => return Err(Error::EmptyProblem),
        1 | 2 => return solve_pair(p),
        3 => return solve_three(p),
        _ => {}
    }

    if p.enclose.is_empty() {
        let disks: Vec<Disk> = disks_from_balls(&p.intersect)?;
        let x = match classify_intersection(&disks, 1e-12) {
            DiskIntersection::Empty => None,
            DiskIntersection::Point(x) => Some(x),
            DiskIntersection::Fat(a, b) => Some(a.mid(b)),
        };
        if let Some(x) = x {
            return Ok(SylvesterSolution::certified(
                p,
                x.to_point(),
                Method::ExactConstruction,
                None,
                EXACT_CERT_TOL,
            ));
        }
    }

    let terms: Vec<(bool, usize)> = (0..p.enclose.len())
        .map(|i| (true, i))
        .chain((0..p.intersect.len()).map(|j| (false, j)))
        .collect();
    let mut best: Option<SylvesterSolution> = None;
    let mut consider = |subset: &[(bool, usize)]| -> Result<()> {
        let enc: Vec<usize> = subset.iter().filter(|t| t.0).map(|t| t.1).collect();
        let int: Vec<usize> = subset.iter().filter(|t| !t.0).map(|t| t.1).collect();
        let sub = p.subproblem(&enc, &int)?;
        let s = if sub.len() == 3 {
            solve_three(&sub)?
        } else {
            solve_pair(&sub)?
        };
        let full = p.value_raw(s.center.coords());
        if full <= s.radius + 1e-9 * (1.0 + s.radius)
            && best.as_ref().is_none_or(|b| s.radius > b.radius)
        {
            best = Some(s);
        }
        Ok(())
    };
    let n = terms.len();
    for a in 0..n {
        consider(&[terms[a]])?;
        for b in (a + 1)..n {
            consider(&[terms[a], terms[b]])?;
            for c in (b + 1)..n {
                consider(&[terms[a], terms[b], terms[c]])?;
            }
        }
    }

    let sol =
        best.map(|s| SylvesterSolution::certified(p, s.center, s.method, s.trace, EXACT_CERT_TOL));
    match sol {
        Some(s) if s.certificate.passed() => Ok(s),
        other => {
            let mut s = solve_subgradient(p, &SubgradientConfig::default());
            s.notes.insert(
                0,
                match other {
                    Some(o) => format!(
                        "fallback-to-subgradient: subfamily candidate residual {:.3e}",
                        o.certificate.residual
                    ),
                    None => "fallback-to-subgradient: no feasible subfamily candidate".into(),
                },
            );
            Ok(s)
        }
    }
}
