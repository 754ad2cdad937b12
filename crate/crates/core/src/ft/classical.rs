use crate::error::{Error, Result};
use crate::geom::{angle_at, Point, ANGLE_SLACK_DEG};
use crate::plane::Vec2;

/// Minimizer of `Σ ‖x - b_i‖` over the plane.
///
/// A vertex whose angle is at least 120 degrees is the answer; otherwise it
/// is the interior point seeing each side under 120 degrees. Collinear
/// points give the middle one.
pub fn classical_ft_point(b1: &Point, b2: &Point, b3: &Point) -> Result<Point> {
    let b = [
        Vec2::from_point(b1)?,
        Vec2::from_point(b2)?,
        Vec2::from_point(b3)?,
    ];
    for i in 0..3 {
        for j in (i + 1)..3 {
            if b[i].dist(b[j]) <= 1e-12 * (1.0 + b[i].norm()) {
                return Err(Error::CoincidentCenters(i, j));
            }
        }
    }
    let scale = b[0].dist(b[1]).max(b[1].dist(b[2])).max(b[0].dist(b[2]));
    if (b[1] - b[0]).cross(b[2] - b[0]).abs() <= 1e-12 * scale * scale {
        let dir = (b[1] - b[0])
            .unit()
            .or((b[2] - b[0]).unit())
            .expect("distinct");
        let mut order = [0usize, 1, 2];
        order.sort_by(|&i, &j| b[i].dot(dir).total_cmp(&b[j].dot(dir)));
        return Ok(b[order[1]].to_point());
    }
    let pts = [b1, b2, b3];
    for i in 0..3 {
        let (j, k) = ((i + 1) % 3, (i + 2) % 3);
        if angle_at(pts[i], pts[j], pts[k])? >= 120.0 - ANGLE_SLACK_DEG {
            return Ok(pts[i].clone());
        }
    }
    Ok(torricelli(&b).to_point())
}

/// Interior Torricelli point: the line from a vertex to the apex of the
/// equilateral triangle erected outward on the opposite side passes through it.
fn torricelli(b: &[Vec2; 3]) -> Vec2 {
    let apex = |i: usize| {
        let (j, k) = ((i + 1) % 3, (i + 2) % 3);
        let side = b[k] - b[j];
        let mid = b[j].mid(b[k]);
        let h = side.perp() * (3f64.sqrt() / 2.0);
        // outward: away from b_i
        if (mid + h - b[i]).norm() > (mid - h - b[i]).norm() {
            mid + h
        } else {
            mid - h
        }
    };
    let (p0, d0) = (b[0], apex(0) - b[0]);
    let (p1, d1) = (b[1], apex(1) - b[1]);
    let t = (p1 - p0).cross(d1) / d0.cross(d1);
    let mut x = p0 + d0 * t;
    // Newton on ∇ Σ‖x - b_i‖ = Σ e_i
    for _ in 0..5 {
        let mut g = Vec2::new(0.0, 0.0);
        let (mut hxx, mut hxy, mut hyy) = (0.0, 0.0, 0.0);
        for bi in b {
            let d = x - *bi;
            let n = d.norm();
            let e = d * (1.0 / n);
            g = g + e;
            hxx += (1.0 - e.x * e.x) / n;
            hxy += -e.x * e.y / n;
            hyy += (1.0 - e.y * e.y) / n;
        }
        let det = hxx * hyy - hxy * hxy;
        if det <= 0.0 {
            break;
        }
        let step = Vec2::new((hyy * g.x - hxy * g.y) / det, (hxx * g.y - hxy * g.x) / det);
        x = x - step;
        if step.norm() < 1e-16 * (1.0 + x.norm()) {
            break;
        }
    }
    x
}
