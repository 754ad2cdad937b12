use crate::error::Result;
use crate::geom::{angle_at, angle_exceeds, Ball};
use crate::plane::{contains_disk, disks_intersect, require_planar, Disk, DiskIntersection, Vec2};
use crate::subgradient::SubgradientConfig;
use crate::sylvester::{solve_subgradient, Method, SylvesterProblem, SylvesterSolution};

use super::apollonius::apollonius_candidates;
use super::{ConstructionTrace, Model};

/// Residual bound for accepting a constructed candidate.
pub(crate) const EXACT_CERT_TOL: f64 = 1e-8;

/// Shared step bookkeeping: candidates are accepted only when certified.
struct Run {
    p: SylvesterProblem,
    model: Model,
    notes: Vec<String>,
}

impl Run {
    fn new(model: Model, balls: [&Ball; 3]) -> Result<(Self, [Disk; 3])> {
        require_planar(&balls)?;
        let k = model.enclose_count();
        let p = SylvesterProblem::new(
            balls[..k].iter().map(|&b| b.clone()).collect(),
            balls[k..].iter().map(|&b| b.clone()).collect(),
        )?;
        let d = [
            Disk::from_ball(balls[0])?,
            Disk::from_ball(balls[1])?,
            Disk::from_ball(balls[2])?,
        ];
        Ok((
            Self {
                p,
                model,
                notes: Vec::new(),
            },
            d,
        ))
    }

    fn attempt(
        &mut self,
        center: Vec2,
        step: u8,
        label: String,
        points: &[(String, Vec2)],
    ) -> Option<SylvesterSolution> {
        let trace = ConstructionTrace {
            model: self.model,
            step_fired: step,
            case_label: label,
            aux_points: points
                .iter()
                .map(|(n, v)| (n.clone(), v.to_point()))
                .collect(),
        };
        let sol = SylvesterSolution::certified(
            &self.p,
            center.to_point(),
            Method::ExactConstruction,
            Some(trace),
            EXACT_CERT_TOL,
        );
        if sol.certificate.passed() {
            let mut sol = sol;
            sol.notes.append(&mut self.notes);
            Some(sol)
        } else {
            let t = sol.trace.as_ref().expect("trace set");
            self.notes.push(format!(
                "step {} ({}) rejected by certificate, residual {:.3e}",
                t.step_fired, t.case_label, sol.certificate.residual
            ));
            None
        }
    }

    fn apollonius(&mut self, step: u8, d: &[Disk; 3]) -> Option<SylvesterSolution> {
        match apollonius_candidates(d, &self.model.tangency()) {
            Ok(cands) => {
                for c in cands {
                    let label = format!("step {step}: tangent ball");
                    let pts = [("center".to_string(), c.c)];
                    if let Some(s) = self.attempt(c.c, step, label, &pts) {
                        return Some(s);
                    }
                }
                None
            }
            Err(e) => {
                self.notes.push(format!("tangent ball unavailable: {e}"));
                None
            }
        }
    }

    fn fallback(mut self) -> SylvesterSolution {
        let mut sol = solve_subgradient(&self.p, &SubgradientConfig::default());
        self.notes
            .push("fallback-to-subgradient: no construction step certified".into());
        self.notes.append(&mut sol.notes);
        sol.notes = self.notes;
        sol
    }
}

/// Angle `p v q` strictly above 90 degrees; degenerate angles fail.
fn obtuse(vertex: Vec2, p: Vec2, q: Vec2) -> bool {
    angle_at(&vertex.to_point(), &p.to_point(), &q.to_point())
        .map(|a| angle_exceeds(a, 90.0))
        .unwrap_or(false)
}

fn name(prefix: &str, i: usize) -> String {
    format!("{prefix}{}", i + 1)
}

/// Smallest ball containing three balls.
pub fn solve_model_i(o1: &Ball, o2: &Ball, o3: &Ball) -> Result<SylvesterSolution> {
    let (mut run, d) = Run::new(Model::I, [o1, o2, o3])?;

    for i in 0..3 {
        let (j, k) = ((i + 1) % 3, (i + 2) % 3);
        if contains_disk(&d[i], &d[j]) && contains_disk(&d[i], &d[k]) {
            let label = format!("step 1: ball {} contains the others", i + 1);
            if let Some(s) = run.attempt(d[i].c, 1, label, &[(name("a", i), d[i].c)]) {
                return Ok(s);
            }
        }
    }

    // u_i = P(a_j; Ω_k), v_i = P(a_k; Ω_j), (i, j, k) cyclic
    for i in 0..3 {
        let (j, k) = ((i + 1) % 3, (i + 2) % 3);
        let (Some(u), Some(v)) = (d[k].farthest_point(d[j].c), d[j].farthest_point(d[k].c)) else {
            continue;
        };
        let w = u.mid(v);
        let Some(t) = d[i].farthest_point(w) else {
            continue;
        };
        if obtuse(t, u, v) {
            let label = format!("step 2: angle u{0} t{0} v{0} is obtuse", i + 1);
            let pts = [
                (name("u", i), u),
                (name("v", i), v),
                (name("w", i), w),
                (name("t", i), t),
            ];
            if let Some(s) = run.attempt(w, 2, label, &pts) {
                return Ok(s);
            }
        }
    }

    Ok(run.apollonius(3, &d).unwrap_or_else(|| run.fallback()))
}

/// Smallest ball containing `o1`, `o2` and meeting `t1`.
pub fn solve_model_ii(o1: &Ball, o2: &Ball, t1: &Ball) -> Result<SylvesterSolution> {
    let (mut run, d) = Run::new(Model::II, [o1, o2, t1])?;
    let theta = d[2];

    for i in 0..2 {
        let j = 1 - i;
        if contains_disk(&d[i], &d[j]) && disks_intersect(&d[i], &theta) {
            let label = format!(
                "step 1: ball {} contains the other and meets the third",
                i + 1
            );
            if let Some(s) = run.attempt(d[i].c, 1, label, &[(name("a", i), d[i].c)]) {
                return Ok(s);
            }
        }
    }

    // u_i = P(b_1; Ω_i), v_i = Π(a_i; Θ_1), t_i = P(w_i; Ω_j)
    for i in 0..2 {
        let j = 1 - i;
        let Some(u) = d[i].farthest_point(theta.c) else {
            continue;
        };
        let v = theta.nearest(d[i].c);
        let w = u.mid(v);
        let Some(t) = d[j].farthest_point(w) else {
            continue;
        };
        if obtuse(t, u, v) {
            let label = format!("step 2: angle u{0} t{0} v{0} is obtuse", i + 1);
            let pts = [
                (name("u", i), u),
                (name("v", i), v),
                (name("w", i), w),
                (name("t", i), t),
            ];
            if let Some(s) = run.attempt(w, 2, label, &pts) {
                return Ok(s);
            }
        }
    }

    // x_1 = P(a_2; Ω_1), x_2 = P(a_1; Ω_2), z = Π(y; Θ_1)
    if let (Some(x1), Some(x2)) = (d[0].farthest_point(d[1].c), d[1].farthest_point(d[0].c)) {
        let y = x1.mid(x2);
        let z = theta.nearest(y);
        if obtuse(z, x1, x2) {
            let pts = [
                ("x1".to_string(), x1),
                ("x2".to_string(), x2),
                ("y".to_string(), y),
                ("z".to_string(), z),
            ];
            if let Some(s) = run.attempt(y, 3, "step 3: angle x1 z x2 is obtuse".into(), &pts) {
                return Ok(s);
            }
        }
    }

    Ok(run.apollonius(4, &d).unwrap_or_else(|| run.fallback()))
}

/// Smallest ball containing `o1` and meeting `t1`, `t2`.
pub fn solve_model_iii(o1: &Ball, t1: &Ball, t2: &Ball) -> Result<SylvesterSolution> {
    let (mut run, d) = Run::new(Model::III, [o1, t1, t2])?;
    let omega = d[0];
    let theta = [d[1], d[2]];

    if disks_intersect(&omega, &theta[0]) && disks_intersect(&omega, &theta[1]) {
        let pts = [("a1".to_string(), omega.c)];
        if let Some(s) = run.attempt(omega.c, 1, "step 1: ball 1 meets both others".into(), &pts) {
            return Ok(s);
        }
    }

    // c_i = P(b_i; Ω_1), d_i = Π(a_1; Θ_i), f_i = Π(e_i; Θ_j)
    for i in 0..2 {
        let j = 1 - i;
        let Some(c) = omega.farthest_point(theta[i].c) else {
            continue;
        };
        let dd = theta[i].nearest(omega.c);
        let e = c.mid(dd);
        let f = theta[j].nearest(e);
        if obtuse(f, c, dd) {
            let label = format!("step 2: angle c{0} f{0} d{0} is obtuse", i + 1);
            let pts = [
                (name("c", i), c),
                (name("d", i), dd),
                (name("e", i), e),
                (name("f", i), f),
            ];
            if let Some(s) = run.attempt(e, 2, label, &pts) {
                return Ok(s);
            }
        }
    }

    // y_1 = Π(b_2; Θ_1), y_2 = Π(b_1; Θ_2), t = P(z; Ω_1)
    let y1 = theta[0].nearest(theta[1].c);
    let y2 = theta[1].nearest(theta[0].c);
    let z = y1.mid(y2);
    if let Some(t) = omega.farthest_point(z) {
        if obtuse(t, y1, y2) {
            let pts = [
                ("y1".to_string(), y1),
                ("y2".to_string(), y2),
                ("z".to_string(), z),
                ("t".to_string(), t),
            ];
            if let Some(s) = run.attempt(z, 3, "step 3: angle y1 t y2 is obtuse".into(), &pts) {
                return Ok(s);
            }
        }
    }

    Ok(run.apollonius(4, &d).unwrap_or_else(|| run.fallback()))
}

/// Smallest ball meeting three balls.
pub fn solve_model_iv(t1: &Ball, t2: &Ball, t3: &Ball) -> Result<SylvesterSolution> {
    let (mut run, d) = Run::new(Model::IV, [t1, t2, t3])?;

    match crate::plane::classify_intersection(&d, 1e-12) {
        DiskIntersection::Empty => {}
        DiskIntersection::Point(x) => {
            let pts = [("common".to_string(), x)];
            if let Some(s) = run.attempt(x, 0, "common point of all three (unique)".into(), &pts) {
                return Ok(s);
            }
        }
        DiskIntersection::Fat(a, b) => {
            let x = a.mid(b);
            let pts = [("common".to_string(), x)];
            let label = "common point of all three (non-unique)".to_string();
            if let Some(s) = run.attempt(x, 0, label, &pts) {
                return Ok(s);
            }
        }
    }

    // u_j on bd Θ_k, v_j on bd Θ_l along [b_k, b_l], (j, k, l) cyclic
    for j in 0..3 {
        let (k, l) = ((j + 1) % 3, (j + 2) % 3);
        let len = d[k].c.dist(d[l].c);
        if len <= d[k].r + d[l].r + crate::plane::pair_tol(&d[k], &d[l]) {
            continue;
        }
        let dir = (d[l].c - d[k].c) * (1.0 / len);
        let u = d[k].c + dir * d[k].r;
        let v = d[l].c - dir * d[l].r;
        let m = u.mid(v);
        let x = d[j].nearest(m);
        if obtuse(x, u, v) {
            let label = format!("step 1: angle u{0} x{0} v{0} is obtuse", j + 1);
            let pts = [
                (name("u", j), u),
                (name("v", j), v),
                (name("m", j), m),
                (name("x", j), x),
            ];
            if let Some(s) = run.attempt(m, 1, label, &pts) {
                return Ok(s);
            }
        }
    }

    Ok(run.apollonius(2, &d).unwrap_or_else(|| run.fallback()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::Point;

    fn at(s: &SylvesterSolution, x: f64, y: f64, r: f64) {
        assert!(
            s.center.dist(&Point::xy(x, y)) < 1e-12,
            "center {:?} notes {:?}",
            s.center,
            s.notes
        );
        assert!((s.radius - r).abs() < 1e-12, "radius {}", s.radius);
        assert_eq!(s.method, Method::ExactConstruction);
        assert!(s.certificate.passed());
    }

    fn step(s: &SylvesterSolution) -> u8 {
        s.trace.as_ref().unwrap().step_fired
    }

    fn tri(radius_of_centers: f64) -> [Ball; 3] {
        [90.0_f64, 210.0, 330.0].map(|deg| {
            let t = deg.to_radians();
            Ball::disk(
                radius_of_centers * t.cos(),
                radius_of_centers * t.sin(),
                1.0,
            )
        })
    }

    #[test]
    fn model_i_examples() {
        let s = solve_model_i(
            &Ball::disk(0.0, 0.0, 5.0),
            &Ball::disk(1.0, 0.0, 1.0),
            &Ball::disk(0.0, 1.0, 1.0),
        )
        .unwrap();
        at(&s, 0.0, 0.0, 5.0);
        assert_eq!(step(&s), 1);

        let s = solve_model_i(
            &Ball::disk(-2.0, 0.0, 1.0),
            &Ball::disk(2.0, 0.0, 1.0),
            &Ball::disk(0.0, 0.5, 1.0),
        )
        .unwrap();
        at(&s, 0.0, 0.0, 3.0);
        assert_eq!(step(&s), 2);
        let pts = &s.trace.as_ref().unwrap().aux_points;
        assert!(pts["u3"].dist(&Point::xy(3.0, 0.0)) < 1e-12);
        assert!(pts["v3"].dist(&Point::xy(-3.0, 0.0)) < 1e-12);
        assert!(pts["t3"].dist(&Point::xy(0.0, 1.5)) < 1e-12);

        let [a, b, c] = tri(2.0);
        let s = solve_model_i(&a, &b, &c).unwrap();
        at(&s, 0.0, 0.0, 3.0);
        assert_eq!(step(&s), 3);
    }

    #[test]
    fn model_ii_examples() {
        let s = solve_model_ii(
            &Ball::disk(-2.0, 0.0, 1.0),
            &Ball::disk(2.0, 0.0, 1.0),
            &Ball::disk(0.0, 0.0, 1.0),
        )
        .unwrap();
        at(&s, 0.0, 0.0, 3.0);
        assert_eq!(step(&s), 3);

        let s = solve_model_ii(
            &Ball::disk(0.0, 0.0, 3.0),
            &Ball::disk(1.0, 0.0, 1.0),
            &Ball::disk(2.0, 0.0, 1.0),
        )
        .unwrap();
        at(&s, 0.0, 0.0, 3.0);
        assert_eq!(step(&s), 1);

        let balls = [
            Ball::disk(0.0, 0.0, 1.0),
            Ball::disk(1.0, 0.0, 1.0),
            Ball::disk(10.0, 0.0, 1.0),
        ];
        let s = solve_model_ii(&balls[0], &balls[1], &balls[2]).unwrap();
        assert_eq!(step(&s), 2);
        at(&s, 4.0, 0.0, 5.0);
        let p = SylvesterProblem::new(balls[..2].to_vec(), balls[2..].to_vec()).unwrap();
        let g = solve_subgradient(&p, &SubgradientConfig::default());
        assert!((g.radius - s.radius).abs() < 1e-6);
    }

    #[test]
    fn model_iii_examples() {
        let s = solve_model_iii(
            &Ball::disk(0.0, 0.5, 1.0),
            &Ball::disk(4.0, 0.0, 1.0),
            &Ball::disk(-4.0, 0.0, 1.0),
        )
        .unwrap();
        at(&s, 0.0, 0.0, 3.0);
        assert_eq!(step(&s), 3);

        let s = solve_model_iii(
            &Ball::disk(0.0, 0.0, 2.0),
            &Ball::disk(1.0, 0.0, 1.0),
            &Ball::disk(0.0, 1.0, 1.0),
        )
        .unwrap();
        at(&s, 0.0, 0.0, 2.0);
        assert_eq!(step(&s), 1);

        let balls = [
            Ball::disk(0.0, 0.0, 1.0),
            Ball::disk(5.0, 0.0, 1.0),
            Ball::disk(0.5, 0.0, 1.0),
        ];
        let s = solve_model_iii(&balls[0], &balls[1], &balls[2]).unwrap();
        assert_eq!(step(&s), 2);
        assert!(s.trace.as_ref().unwrap().aux_points.contains_key("e1"));
        let p = SylvesterProblem::new(balls[..1].to_vec(), balls[1..].to_vec()).unwrap();
        let g = solve_subgradient(&p, &SubgradientConfig::default());
        assert!((g.radius - s.radius).abs() < 1e-6);
    }

    #[test]
    fn model_iv_examples() {
        let s = solve_model_iv(
            &Ball::disk(0.0, 0.5, 1.0),
            &Ball::disk(-2.0, 0.0, 1.0),
            &Ball::disk(2.0, 0.0, 1.0),
        )
        .unwrap();
        at(&s, 0.0, 0.0, 1.0);
        assert_eq!(step(&s), 1);

        let [a, b, c] = tri(3.0);
        let s = solve_model_iv(&a, &b, &c).unwrap();
        assert!(s.center.norm() < 1e-12);
        assert!((s.radius - 2.0).abs() < 1e-12);
        assert_eq!(step(&s), 2);

        let u = Ball::disk(0.0, 0.0, 1.0);
        let s = solve_model_iv(&u, &u, &u).unwrap();
        assert_eq!(s.radius, 0.0);
        assert!(s.trace.unwrap().case_label.contains("non-unique"));
    }

    #[test]
    fn apollonius_matches_model_ii() {
        let balls = [
            Ball::disk(-2.0, 0.0, 1.0),
            Ball::disk(2.0, 0.0, 1.0),
            Ball::disk(0.0, 6.0, 1.0),
        ];
        let t = super::super::apollonius_ball(&balls, &Model::II.tangency()).unwrap();
        let s = solve_model_ii(&balls[0], &balls[1], &balls[2]).unwrap();
        assert_eq!(step(&s), 4);
        at(&s, 0.0, 1.5, 3.5);
        assert!((s.radius - t.radius).abs() < 1e-12);
        assert!(s.center.dist(&t.center) < 1e-12);

        // with the third ball closer, the middle step beats the tangent ball
        let near = [
            balls[0].clone(),
            balls[1].clone(),
            Ball::disk(0.0, 3.0, 1.0),
        ];
        let t = super::super::apollonius_ball(&near, &Model::II.tangency()).unwrap();
        let s = solve_model_ii(&near[0], &near[1], &near[2]).unwrap();
        assert_eq!(step(&s), 3);
        assert!((t.radius - 3.5).abs() < 1e-12 && (s.radius - 3.0).abs() < 1e-12);
    }

    #[test]
    fn planar_input_required() {
        let b = Ball::new(Point::new(vec![0.0, 0.0, 0.0]).unwrap(), 1.0).unwrap();
        assert!(solve_model_i(&b, &b, &b).is_err());
    }
}
