use std::fmt::Write;

use crate::error::{Error, Result};
use crate::geom::{Ball, Point};
use crate::oracle::{ft_grid, sylvester_grid};

use super::run::{ResultFile, SolutionRecord};
use super::{ProblemFile, ProblemKind};

const ENCLOSE_COLOR: &str = "#1f4e99";
const INTERSECT_COLOR: &str = "#2a7f3f";
const SOLUTION_COLOR: &str = "#c0392b";
const AUX_COLOR: &str = "#555555";
const WIDTH_PX: f64 = 640.0;

/// Fixed-precision number with trailing zeros removed, so output is byte-stable.
fn num(v: f64) -> String {
    let s = format!("{v:.6}");
    let s = s.trim_end_matches('0').trim_end_matches('.');
    if s == "-0" {
        "0".into()
    } else {
        s.into()
    }
}

/// Axis-aligned box in problem coordinates.
#[derive(Debug, Clone, Copy)]
struct Frame {
    lo: [f64; 2],
    hi: [f64; 2],
}

impl Frame {
    fn include_ball(&mut self, c: &[f64], r: f64) {
        for ((lo, hi), ck) in self.lo.iter_mut().zip(&mut self.hi).zip(c) {
            *lo = lo.min(ck - r);
            *hi = hi.max(ck + r);
        }
    }

    fn span(&self) -> f64 {
        (self.hi[0] - self.lo[0]).max(self.hi[1] - self.lo[1])
    }
}

struct Canvas {
    out: String,
    stroke: f64,
}

impl Canvas {
    fn circle(&mut self, c: &[f64], r: f64, color: &str, dashed: bool) {
        let dash = if dashed {
            format!(
                " stroke-dasharray=\"{} {}\"",
                num(4.0 * self.stroke),
                num(3.0 * self.stroke)
            )
        } else {
            String::new()
        };
        let _ = writeln!(
            self.out,
            "  <circle cx=\"{}\" cy=\"{}\" r=\"{}\" fill=\"none\" stroke=\"{color}\" stroke-width=\"{}\"{dash}/>",
            num(c[0]),
            num(-c[1]),
            num(r),
            num(self.stroke)
        );
    }

    /// A cross marking a solution point.
    fn cross(&mut self, c: &[f64], color: &str) {
        let h = 4.0 * self.stroke;
        let (x, y) = (c[0], -c[1]);
        let _ = writeln!(
            self.out,
            "  <path d=\"M {} {} L {} {} M {} {} L {} {}\" stroke=\"{color}\" stroke-width=\"{}\"/>",
            num(x - h),
            num(y - h),
            num(x + h),
            num(y + h),
            num(x - h),
            num(y + h),
            num(x + h),
            num(y - h),
            num(self.stroke)
        );
    }

    fn line(&mut self, a: &[f64], b: &[f64], color: &str) {
        let _ = writeln!(
            self.out,
            "  <line x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"{color}\" stroke-width=\"{}\"/>",
            num(a[0]),
            num(-a[1]),
            num(b[0]),
            num(-b[1]),
            num(2.0 * self.stroke)
        );
    }

    fn labeled_point(&mut self, name: &str, c: &[f64]) {
        let h = 1.5 * self.stroke;
        let _ = writeln!(
            self.out,
            "  <rect x=\"{}\" y=\"{}\" width=\"{}\" height=\"{}\" fill=\"{AUX_COLOR}\"/>",
            num(c[0] - h),
            num(-c[1] - h),
            num(2.0 * h),
            num(2.0 * h)
        );
        let _ = writeln!(
            self.out,
            "  <text x=\"{}\" y=\"{}\" font-family=\"sans-serif\" font-size=\"{}\" fill=\"{AUX_COLOR}\">{}</text>",
            num(c[0] + 2.0 * h),
            num(-c[1] - 2.0 * h),
            num(12.0 * self.stroke),
            escape(name)
        );
    }

    /// Fills the common part of `balls` with nested clip paths.
    fn region(&mut self, balls: &[Ball]) {
        let Some((last, rest)) = balls.split_last() else {
            return;
        };
        self.out.push_str("  <defs>\n");
        for (i, b) in rest.iter().enumerate() {
            let parent = if i == 0 {
                String::new()
            } else {
                format!(" clip-path=\"url(#region{})\"", i - 1)
            };
            let c = b.center.coords();
            let _ = writeln!(
                self.out,
                "    <clipPath id=\"region{i}\"{parent}><circle cx=\"{}\" cy=\"{}\" r=\"{}\"/></clipPath>",
                num(c[0]),
                num(-c[1]),
                num(b.radius)
            );
        }
        self.out.push_str("  </defs>\n");
        let c = last.center.coords();
        let clip = if rest.is_empty() {
            String::new()
        } else {
            format!(" clip-path=\"url(#region{})\"", rest.len() - 1)
        };
        let _ = writeln!(
            self.out,
            "  <circle cx=\"{}\" cy=\"{}\" r=\"{}\" fill=\"{SOLUTION_COLOR}\" fill-opacity=\"0.35\" stroke=\"none\"{clip}/>",
            num(c[0]),
            num(-c[1]),
            num(last.radius)
        );
    }
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
}

/// SVG 1.1 figure of a planar problem and its solution.
///
/// Enclose balls are solid, intersect balls dashed; the solution ball is
/// drawn when its radius is positive, a solution point as a cross, a
/// segment as a line and a region filled. Auxiliary construction points
/// are labeled squares. The view box is the oracle's search box, grown to
/// contain the solution ball. The y axis points up.
pub fn emit_svg(problem: &ProblemFile, result: &ResultFile) -> Result<String> {
    if problem.dimension != 2 {
        return Err(Error::Unsupported(format!(
            "plotting needs a planar problem, got dimension {}",
            problem.dimension
        )));
    }
    let enclose = problem.enclose_balls()?;
    let intersect = problem.intersect_balls()?;
    let grid = match problem.kind {
        ProblemKind::Sylvester => sylvester_grid(&problem.sylvester()?),
        ProblemKind::FermatTorricelli => ft_grid(&problem.ft()?),
    };
    let mut frame = Frame {
        lo: [grid.lower[0], grid.lower[1]],
        hi: [grid.upper[0], grid.upper[1]],
    };
    if let SolutionRecord::Ball { center, radius } = &result.solution {
        check_planar(center)?;
        frame.include_ball(center.coords(), *radius);
    }
    let margin = 0.02 * frame.span();
    frame.include_ball(&[frame.lo[0], frame.lo[1]], margin);
    frame.include_ball(&[frame.hi[0], frame.hi[1]], margin);

    let (w, h) = (frame.hi[0] - frame.lo[0], frame.hi[1] - frame.lo[1]);
    let mut canvas = Canvas {
        out: String::new(),
        stroke: 0.002 * frame.span(),
    };
    let _ = writeln!(canvas.out, "<?xml version=\"1.0\" encoding=\"UTF-8\"?>");
    let _ = writeln!(
        canvas.out,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"{}\" height=\"{}\" viewBox=\"{} {} {} {}\">",
        num(WIDTH_PX),
        num(WIDTH_PX * h / w),
        num(frame.lo[0]),
        num(-frame.hi[1]),
        num(w),
        num(h)
    );

    if let SolutionRecord::Region { balls } = &result.solution {
        canvas.region(balls);
    }
    for b in &enclose {
        canvas.circle(b.center.coords(), b.radius, ENCLOSE_COLOR, false);
    }
    for b in &intersect {
        canvas.circle(b.center.coords(), b.radius, INTERSECT_COLOR, true);
    }
    match &result.solution {
        SolutionRecord::Ball { center, radius } => {
            if *radius > 0.0 {
                canvas.circle(center.coords(), *radius, SOLUTION_COLOR, false);
            }
            canvas.cross(center.coords(), SOLUTION_COLOR);
        }
        SolutionRecord::Point { point } => {
            check_planar(point)?;
            canvas.cross(point.coords(), SOLUTION_COLOR);
        }
        SolutionRecord::Segment { start, end } => {
            check_planar(start)?;
            check_planar(end)?;
            canvas.line(start.coords(), end.coords(), SOLUTION_COLOR);
        }
        SolutionRecord::Region { .. } => {}
    }
    if let Some(t) = &result.trace {
        for (name, p) in &t.aux_points {
            check_planar(p)?;
            canvas.labeled_point(name, p.coords());
        }
    }
    canvas.out.push_str("</svg>\n");
    Ok(canvas.out)
}

fn check_planar(p: &Point) -> Result<()> {
    if p.dim() == 2 {
        Ok(())
    } else {
        Err(Error::DimensionMismatch {
            expected: 2,
            found: p.dim(),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::io::{parse_problem, run_solve, SolverOptions};

    fn figure(text: &str) -> String {
        let p = parse_problem(text).unwrap();
        let r = run_solve(&p, &SolverOptions::default()).unwrap();
        emit_svg(&p, &r).unwrap()
    }

    #[test]
    fn model_i_symmetric_has_four_circles() {
        let s = figure(
            r#"{"kind":"sylvester","dimension":2,"intersect":[],"enclose":[
                {"center":[0,1],"radius":0.5},{"center":[-0.8660254037844386,-0.5],"radius":0.5},
                {"center":[0.8660254037844386,-0.5],"radius":0.5}]}"#,
        );
        assert_eq!(s.matches("<circle").count(), 4);
        assert_eq!(s.matches("<line").count(), 0);
    }

    #[test]
    fn ft_segment_has_three_circles_and_a_line() {
        let s = figure(
            r#"{"kind":"fermat-torricelli","dimension":2,"enclose":[],
                "intersect":[{"center":[-3,0],"radius":1},{"center":[3,0],"radius":1},{"center":[0,0],"radius":1}]}"#,
        );
        assert_eq!(s.matches("<circle").count(), 3);
        assert_eq!(s.matches("<line").count(), 1);
        assert_eq!(s.matches("stroke-dasharray").count(), 3);
    }

    #[test]
    fn rejects_non_planar() {
        let p = parse_problem(
            r#"{"kind":"sylvester","dimension":3,"enclose":[{"center":[0,0,0],"radius":1}]}"#,
        )
        .unwrap();
        let r = run_solve(&p, &SolverOptions::default()).unwrap();
        assert!(emit_svg(&p, &r).is_err());
    }

    #[test]
    fn number_format() {
        assert_eq!(num(1.0), "1");
        assert_eq!(num(-0.0000001), "0");
        assert_eq!(num(2.5), "2.5");
        assert_eq!(num(-1.2345678), "-1.234568");
    }
}
