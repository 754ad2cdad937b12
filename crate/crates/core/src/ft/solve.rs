use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::geom::{Ball, Point};
use crate::plane::{
    circle_intersections, classify_intersection, disks_from_balls, line_depth,
    segment_disk_interval, Disk, DiskIntersection, Vec2,
};
use crate::subgradient::{minimize, SubgradientConfig};
use crate::sylvester::Method;

use super::certificate::{ft_certificate, FtCertificate, FT_TOL};
use super::classical::classical_ft_point;
use super::{BallDistanceSum, FtProblem};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "kind")]
pub enum FtSolutionKind {
    Point {
        point: Point,
    },
    Segment {
        start: Point,
        end: Point,
    },
    /// The common part of the listed balls; `H = 0` there.
    Region {
        balls: Vec<Ball>,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FtSolution {
    pub kind: FtSolutionKind,
    /// `H*`.
    pub value: f64,
    /// `H* + constant`, the value of the unreduced objective.
    pub original_value: f64,
    /// A solution point: the point itself, the segment midpoint, or a point of the region.
    pub representative: Point,
    pub certificate: FtCertificate,
    pub method: Method,
    pub case_label: String,
    pub converged: bool,
    pub iterations: usize,
    pub notes: Vec<String>,
}

#[derive(Debug, Clone)]
struct Candidate {
    kind: FtSolutionKind,
    rep: Vec2,
    label: String,
}

impl Candidate {
    fn point(x: Vec2, label: String) -> Self {
        Self {
            kind: FtSolutionKind::Point {
                point: x.to_point(),
            },
            rep: x,
            label,
        }
    }
}

const ARC_SAMPLES: usize = 720;

/// A chord reaching less than this (relative) depth into a ball only touches
/// it; rounding alone produces depths near 1e-16 on tangent chords.
const GRAZE_TOL: f64 = 1e-9;

fn grazes(p: Vec2, q: Vec2, disk: &Disk) -> bool {
    line_depth(p, q, disk) <= GRAZE_TOL * (1.0 + disk.r)
}

/// Solves the three-ball problem exactly in the plane.
///
/// Every construction candidate is checked with [`ft_certificate`]; the
/// certified candidate with the smallest value wins, a segment beating a
/// point of equal value. Other dimensions and uncertified cases use
/// subgradient descent.
pub fn solve_ft(p: &FtProblem) -> FtSolution {
    if p.dim() != 2 {
        return solve_ft_subgradient(p, &SubgradientConfig::default());
    }
    let d = disks_from_balls(&p.balls).expect("planar");

    match classify_intersection(&d, 1e-12) {
        DiskIntersection::Empty => {}
        DiskIntersection::Point(x) => {
            let c = Candidate::point(x, "step 1: the three balls share one point".into());
            if let Some(s) = finish(p, c) {
                return s;
            }
        }
        DiskIntersection::Fat(a, b) => {
            let c = Candidate {
                kind: FtSolutionKind::Region {
                    balls: p.balls.clone(),
                },
                rep: a.mid(b),
                label: "step 1: common part of the three balls".into(),
            };
            if let Some(s) = finish(p, c) {
                return s;
            }
        }
    }

    let cands = candidates(&d);
    let mut best: Option<(FtSolution, bool)> = None;
    for c in cands {
        let is_segment = matches!(c.kind, FtSolutionKind::Segment { .. });
        let Some(s) = finish(p, c) else {
            continue;
        };
        let better = match &best {
            None => true,
            Some((b, b_seg)) => {
                let tie = 1e-12 * (1.0 + b.value);
                s.value < b.value - tie || (s.value <= b.value + tie && is_segment && !b_seg)
            }
        };
        if better {
            best = Some((s, is_segment));
        }
    }
    match best {
        Some((s, _)) => s,
        None => {
            let mut s = solve_ft_subgradient(p, &SubgradientConfig::default());
            s.notes.insert(
                0,
                "fallback-to-subgradient: no construction candidate certified".into(),
            );
            s
        }
    }
}

fn finish(p: &FtProblem, c: Candidate) -> Option<FtSolution> {
    let rep = c.rep.to_point();
    let cert = ft_certificate(&rep, p, FT_TOL).ok()?;
    if !cert.passed() {
        return None;
    }
    let value = p.value_raw(rep.coords());
    Some(FtSolution {
        kind: c.kind,
        value,
        original_value: value + p.constant,
        representative: rep,
        certificate: cert,
        method: Method::ExactConstruction,
        case_label: c.label,
        converged: true,
        iterations: 0,
        notes: Vec::new(),
    })
}

fn candidates(d: &[Disk]) -> Vec<Candidate> {
    let mut out = Vec::new();
    let outside = |x: Vec2, k: usize| d[k].c.dist(x) > d[k].r + FT_TOL * (1.0 + d[k].r);

    // boundary crossing of [b_i, b_k] with bd Θ_i lying in Θ_j
    for i in 0..3 {
        for k in 0..3 {
            if k == i {
                continue;
            }
            let j = 3 - i - k;
            let len = d[i].c.dist(d[k].c);
            if len <= d[i].r + d[k].r {
                continue;
            }
            let x = d[i].c + (d[k].c - d[i].c) * (d[i].r / len);
            if d[j].contains(x, FT_TOL * (1.0 + d[j].r)) {
                out.push(Candidate::point(
                    x,
                    format!(
                        "step 2: [b{0},b{1}] leaves ball {0} inside ball {2}",
                        i + 1,
                        k + 1,
                        j + 1
                    ),
                ));
            }
        }
    }

    // crossings of two boundary circles outside the third ball
    for i in 0..3 {
        for j in (i + 1)..3 {
            let k = 3 - i - j;
            if d[i].r == 0.0 || d[j].r == 0.0 {
                continue;
            }
            for x in circle_intersections(&d[i], &d[j]) {
                if outside(x, k) {
                    out.push(Candidate::point(
                        x,
                        format!("step 3: circles {} and {} cross", i + 1, j + 1),
                    ));
                }
            }
        }
    }

    for i in 0..3 {
        let (j, k) = ((i + 1) % 3, (i + 2) % 3);
        // chord [b_j, b_k] through Θ_i, outside Θ_j and Θ_k
        let len = d[j].c.dist(d[k].c);
        if let Some((t0, t1)) = segment_disk_interval(d[j].c, d[k].c, &d[i]) {
            let lo = t0.max(d[j].r / len);
            let hi = t1.min(1.0 - d[k].r / len);
            if lo <= hi + 1e-15 {
                let a = d[j].c.lerp(d[k].c, lo);
                let b = d[j].c.lerp(d[k].c, hi.max(lo));
                let label = format!("step 4: [b{},b{}] crosses ball {}", j + 1, k + 1, i + 1);
                if (hi - lo) * len > 1e-12 * (1.0 + len) && !grazes(d[j].c, d[k].c, &d[i]) {
                    out.push(Candidate {
                        kind: FtSolutionKind::Segment {
                            start: a.to_point(),
                            end: b.to_point(),
                        },
                        rep: a.mid(b),
                        label,
                    });
                } else {
                    out.push(Candidate::point(a.mid(b), label));
                }
            }
        }

        if d[i].r == 0.0 {
            out.push(Candidate::point(
                d[i].c,
                format!("step 4: center of point ball {}", i + 1),
            ));
            continue;
        }
        for x in equal_angle_points(d, i, j, k) {
            if outside(x, j) && outside(x, k) {
                out.push(Candidate::point(
                    x,
                    format!(
                        "step 4: equal-angle point on the boundary of ball {}",
                        i + 1
                    ),
                ));
            }
        }
    }

    let b: Vec<Point> = d.iter().map(|di| di.c.to_point()).collect();
    if let Ok(x) = classical_ft_point(&b[0], &b[1], &b[2]) {
        out.push(Candidate::point(
            Vec2::new(x[0], x[1]),
            "classical point of the centers".into(),
        ));
    }
    out
}

/// Points `x` on the circle of ball `i` where the bisector of the angle
/// `b_j x b_k` is the inward normal, i.e. `e_j + e_k` points towards `b_i`.
fn equal_angle_points(d: &[Disk], i: usize, j: usize, k: usize) -> Vec<Vec2> {
    let at = |theta: f64| {
        let n = Vec2::from_angle(theta);
        let x = d[i].c + n * d[i].r;
        let (ej, ek) = ((x - d[j].c).unit()?, (x - d[k].c).unit()?);
        let s = ej + ek;
        Some((n.cross(s), n.dot(s), x))
    };
    let step = std::f64::consts::TAU / ARC_SAMPLES as f64;
    let mut roots = Vec::new();
    let mut prev = at(0.0).map(|v| (0.0, v.0));
    for m in 1..=ARC_SAMPLES {
        let theta = m as f64 * step;
        let cur = at(theta).map(|v| (theta, v.0));
        if let (Some((ta, fa)), Some((tb, fb))) = (prev, cur) {
            if fa == 0.0 || fa.signum() != fb.signum() {
                let (mut lo, mut hi, mut flo) = (ta, tb, fa);
                for _ in 0..80 {
                    let mid = 0.5 * (lo + hi);
                    let Some((fm, _, _)) = at(mid) else { break };
                    if fm == 0.0 {
                        lo = mid;
                        hi = mid;
                        break;
                    }
                    if fm.signum() == flo.signum() {
                        lo = mid;
                        flo = fm;
                    } else {
                        hi = mid;
                    }
                }
                if let Some((_, dot, x)) = at(0.5 * (lo + hi)) {
                    if dot < 0.0 {
                        roots.push(x);
                    }
                }
            }
        }
        prev = cur;
    }
    roots
}

/// Subgradient descent on `H`, certified at the best iterate.
pub fn solve_ft_subgradient(p: &FtProblem, cfg: &SubgradientConfig) -> FtSolution {
    let run = minimize(p, cfg, |x| {
        ft_certificate(&Point::from_vec(x.to_vec()), p, cfg.tol)
            .map(|c| c.gap)
            .unwrap_or(f64::INFINITY)
    });
    let rep = Point::from_vec(run.best);
    let cert = ft_certificate(&rep, p, cfg.tol).expect("dimension checked");
    let converged = run.converged || cert.passed();
    let mut notes = Vec::new();
    if !converged {
        notes.push(format!(
            "subgradient stopped after {} iterations without a certificate (gap {:.3e})",
            run.iterations, cert.gap
        ));
    }
    FtSolution {
        kind: FtSolutionKind::Point { point: rep.clone() },
        value: run.best_value,
        original_value: run.best_value + p.constant,
        representative: rep,
        certificate: cert,
        method: Method::Subgradient,
        case_label: "subgradient".into(),
        converged,
        iterations: run.iterations,
        notes,
    }
}

/// Best iterate of subgradient descent on a sum of ball distances.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BallSumSolution {
    pub point: Point,
    pub value: f64,
    pub iterations: usize,
}

pub fn solve_ball_sum(q: &BallDistanceSum, cfg: &SubgradientConfig) -> BallSumSolution {
    let run = minimize(q, cfg, |_| f64::INFINITY);
    BallSumSolution {
        point: Point::from_vec(run.best),
        value: run.best_value + q.constant,
        iterations: run.iterations,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "verdict", content = "witness")]
pub enum FtUniqueness {
    Unique,
    NonUnique(FtSolutionKind),
}

/// More than one solution iff the three balls share more than one point, or
/// (when they share none) some chord `[b_i, b_j]` runs through the interior
/// of the third ball outside the other two.
///
/// The chord part is exact: the open interval of chord parameters inside
/// the third ball is intersected with the open interval outside `Θ_i`, `Θ_j`.
/// A chord that only touches the third ball leaves the solution unique.
pub fn ft_uniqueness_test(p: &FtProblem) -> Result<FtUniqueness> {
    let d = disks_from_balls(&p.balls)?;
    crate::plane::require_planar(&p.balls.iter().collect::<Vec<_>>())?;
    match classify_intersection(&d, 1e-12) {
        DiskIntersection::Fat(..) => {
            return Ok(FtUniqueness::NonUnique(FtSolutionKind::Region {
                balls: p.balls.clone(),
            }))
        }
        DiskIntersection::Point(_) => return Ok(FtUniqueness::Unique),
        DiskIntersection::Empty => {}
    }
    for k in 0..3 {
        let (i, j) = ((k + 1) % 3, (k + 2) % 3);
        let len = d[i].c.dist(d[j].c);
        let Some((t0, t1)) = segment_disk_interval(d[i].c, d[j].c, &d[k]) else {
            continue;
        };
        if grazes(d[i].c, d[j].c, &d[k]) {
            continue;
        }
        let lo = t0.max(d[i].r / len);
        let hi = t1.min(1.0 - d[j].r / len);
        if (hi - lo) * len > 1e-9 {
            return Ok(FtUniqueness::NonUnique(FtSolutionKind::Segment {
                start: d[i].c.lerp(d[j].c, lo).to_point(),
                end: d[i].c.lerp(d[j].c, hi).to_point(),
            }));
        }
    }
    Ok(FtUniqueness::Unique)
}
