use std::collections::BTreeMap;
use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::ft::{
    ft_certificate, ft_uniqueness_test, solve_ft, solve_ft_subgradient, FtProblem, FtSolution,
    FtSolutionKind, FtUniqueness, FT_TOL,
};
use crate::geom::{Ball, Point};
use crate::oracle::{ft_oracle, sylvester_oracle, OracleResult};
use crate::sylvester::{
    check_optimality, solve_subgradient, uniqueness_test, ActiveSets, CertificateCase, Method,
    SylvesterProblem, SylvesterSolution, Uniqueness,
};
use crate::threeball::{solve_sylvester, ConstructionTrace, Model};

use super::{ProblemFile, ProblemKind, SolverOptions};

/// Certificate tolerance for exact constructions.
const EXACT_TOL: f64 = 1e-8;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "kind")]
pub enum SolutionRecord {
    Ball {
        center: Point,
        radius: f64,
    },
    Point {
        point: Point,
    },
    Segment {
        start: Point,
        end: Point,
    },
    /// The common part of the listed balls.
    Region {
        balls: Vec<Ball>,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CertificateSummary {
    pub case: String,
    pub residual: f64,
    pub tolerance: f64,
    pub passed: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TraceRecord {
    pub model: Model,
    pub step: u8,
    pub aux_points: BTreeMap<String, Point>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum UniquenessFlag {
    Unique,
    NonUnique,
    Unknown,
}

/// Everything `solve` reports. Ball indices refer to the problem file lists.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResultFile {
    pub kind: ProblemKind,
    pub solution: SolutionRecord,
    /// Optimal value of the original objective.
    pub value: f64,
    /// A solution point; the ball center for Sylvester problems.
    pub representative: Point,
    pub active: ActiveSets,
    pub certificate: CertificateSummary,
    pub method: Method,
    pub case_label: String,
    pub uniqueness: UniquenessFlag,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub trace: Option<TraceRecord>,
    pub converged: bool,
    pub iterations: usize,
    pub notes: Vec<String>,
    pub timing_ms: f64,
}

/// Solves a validated problem. `overrides` take precedence over the file's options.
///
/// Planar Sylvester problems use the exact constructions, planar
/// Fermat-Torricelli problems the exact construction, everything else
/// subgradient descent. Fallbacks are listed in `notes`.
pub fn run_solve(problem: &ProblemFile, overrides: &SolverOptions) -> Result<ResultFile> {
    let start = Instant::now();
    let cfg = problem.options().overridden_by(overrides).config();
    let mut result = match problem.kind {
        ProblemKind::Sylvester => {
            let p = problem.sylvester()?;
            let s = if p.dim() == 2 {
                solve_sylvester(&p, &cfg)
            } else {
                solve_subgradient(&p, &cfg)
            };
            sylvester_result(&p, s)
        }
        ProblemKind::FermatTorricelli => {
            let p = problem.ft()?;
            let s = if p.dim() == 2 {
                solve_ft(&p)
            } else {
                solve_ft_subgradient(&p, &cfg)
            };
            ft_result(problem, &p, s)?
        }
    };
    result.timing_ms = start.elapsed().as_secs_f64() * 1e3;
    Ok(result)
}

fn case_name(c: &CertificateCase) -> String {
    match c {
        CertificateCase::CoincidentBall { index } => format!("coincident-ball {index}"),
        CertificateCase::ZeroRadius => "zero-radius".into(),
        CertificateCase::Hull => "hull".into(),
    }
}

fn sylvester_result(p: &SylvesterProblem, s: SylvesterSolution) -> ResultFile {
    let uniqueness = match uniqueness_test(p) {
        Uniqueness::Unique => UniquenessFlag::Unique,
        Uniqueness::NonUnique(_) => UniquenessFlag::NonUnique,
        Uniqueness::Unknown(_) => UniquenessFlag::Unknown,
    };
    let case_label = match (&s.trace, s.method) {
        (Some(t), _) => t.case_label.clone(),
        (None, Method::ExactConstruction) => "exact".into(),
        (None, Method::Subgradient) => "subgradient".into(),
    };
    ResultFile {
        kind: ProblemKind::Sylvester,
        solution: SolutionRecord::Ball {
            center: s.center.clone(),
            radius: s.radius,
        },
        value: s.radius,
        representative: s.center,
        active: s.active,
        certificate: CertificateSummary {
            case: case_name(&s.certificate.case),
            residual: s.certificate.residual,
            tolerance: s.certificate.tolerance,
            passed: s.certificate.passed(),
        },
        method: s.method,
        case_label,
        uniqueness,
        trace: s.trace.map(|t: ConstructionTrace| TraceRecord {
            model: t.model,
            step: t.step_fired,
            aux_points: t.aux_points,
        }),
        converged: s.converged,
        iterations: s.iterations,
        notes: s.notes,
        timing_ms: 0.0,
    }
}

fn ft_result(file: &ProblemFile, p: &FtProblem, s: FtSolution) -> Result<ResultFile> {
    let uniqueness = if p.dim() == 2 {
        match ft_uniqueness_test(p)? {
            FtUniqueness::Unique => UniquenessFlag::Unique,
            FtUniqueness::NonUnique(_) => UniquenessFlag::NonUnique,
        }
    } else {
        UniquenessFlag::Unknown
    };
    let ne = file.enclose.len();
    let active = ActiveSets {
        enclose: s
            .certificate
            .active
            .iter()
            .copied()
            .filter(|&i| i < ne)
            .collect(),
        intersect: s
            .certificate
            .active
            .iter()
            .filter(|&&i| i >= ne)
            .map(|i| i - ne)
            .collect(),
    };
    let solution = match s.kind {
        FtSolutionKind::Point { point } => SolutionRecord::Point { point },
        FtSolutionKind::Segment { start, end } => SolutionRecord::Segment { start, end },
        FtSolutionKind::Region { balls } => SolutionRecord::Region { balls },
    };
    let case = serde_json::to_value(&s.certificate.case)
        .ok()
        .and_then(|v| v.get("kind").and_then(|k| k.as_str()).map(str::to_owned))
        .unwrap_or_default();
    Ok(ResultFile {
        kind: ProblemKind::FermatTorricelli,
        solution,
        value: s.original_value,
        representative: s.representative,
        active,
        certificate: CertificateSummary {
            case,
            residual: s.certificate.gap,
            tolerance: s.certificate.tolerance,
            passed: s.certificate.passed(),
        },
        method: s.method,
        case_label: s.case_label,
        uniqueness,
        trace: None,
        converged: s.converged,
        iterations: s.iterations,
        notes: s.notes,
        timing_ms: 0.0,
    })
}

/// Brute-force minimum of the original objective.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OracleReport {
    pub kind: ProblemKind,
    pub point: Point,
    pub value: f64,
    /// Final grid step, or the pattern-search step for `weak` results.
    pub resolution: f64,
    /// Bound on `|value - min|` for grid results: 3 Lipschitz constants times the step.
    pub tolerance: f64,
    pub weak: bool,
    pub evaluations: usize,
}

pub fn run_oracle(problem: &ProblemFile) -> Result<OracleReport> {
    let (r, constant, lipschitz): (OracleResult, f64, f64) = match problem.kind {
        ProblemKind::Sylvester => (sylvester_oracle(&problem.sylvester()?), 0.0, 1.0),
        ProblemKind::FermatTorricelli => {
            let p = problem.ft()?;
            (ft_oracle(&p), p.constant, 3.0)
        }
    };
    let n = problem.dimension as f64;
    Ok(OracleReport {
        kind: problem.kind,
        point: r.best,
        value: r.value + constant,
        resolution: r.resolution,
        tolerance: 3.0 * lipschitz * n.sqrt() * r.resolution,
        weak: r.weak,
        evaluations: r.evaluations,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub checks: Vec<Check>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        !self.checks.is_empty() && self.checks.iter().all(|c| c.passed)
    }

    fn push(&mut self, name: &str, passed: bool, detail: String) {
        self.checks.push(Check {
            name: name.into(),
            passed,
            detail,
        });
    }
}

fn close(a: f64, b: f64) -> bool {
    (a - b).abs() <= 1e-9 * (1.0 + a.abs().max(b.abs()))
}

/// Re-checks a result against its problem without trusting anything but the numbers.
///
/// Exact results must pass the optimality certificate at their point;
/// subgradient results must match the brute-force oracle.
pub fn verify(problem: &ProblemFile, result: &ResultFile) -> Result<VerifyReport> {
    let mut report = VerifyReport::default();
    report.push(
        "kind",
        result.kind == problem.kind,
        format!("{:?} against {:?}", result.kind, problem.kind),
    );
    if result.kind != problem.kind {
        return Ok(report);
    }
    match problem.kind {
        ProblemKind::Sylvester => verify_sylvester(problem, result, &mut report)?,
        ProblemKind::FermatTorricelli => verify_ft(problem, result, &mut report)?,
    }
    Ok(report)
}

fn oracle_check(problem: &ProblemFile, value: f64, report: &mut VerifyReport) -> Result<()> {
    let o = run_oracle(problem)?;
    let passed = if o.weak {
        value <= o.value + 1e-6 * (1.0 + o.value.abs())
    } else {
        (value - o.value).abs() <= o.tolerance
    };
    report.push(
        "oracle",
        passed,
        format!(
            "value {value} against oracle {} (tolerance {})",
            o.value, o.tolerance
        ),
    );
    Ok(())
}

fn verify_sylvester(
    problem: &ProblemFile,
    result: &ResultFile,
    report: &mut VerifyReport,
) -> Result<()> {
    let p = problem.sylvester()?;
    let SolutionRecord::Ball { center, radius } = &result.solution else {
        report.push("solution", false, "expected a ball".into());
        return Ok(());
    };
    if center.dim() != p.dim() {
        report.push(
            "dimension",
            false,
            format!("center has {} coordinates", center.dim()),
        );
        return Ok(());
    }
    let g = p.value_raw(center.coords());
    report.push(
        "radius",
        close(g, *radius),
        format!("objective at center {g}, radius {radius}"),
    );
    report.push(
        "value",
        close(result.value, *radius),
        format!("value {}, radius {radius}", result.value),
    );
    match result.method {
        Method::ExactConstruction => {
            let c = check_optimality(center, &p, EXACT_TOL);
            report.push(
                "certificate",
                c.passed(),
                format!("{} residual {:e}", case_name(&c.case), c.residual),
            );
        }
        Method::Subgradient => oracle_check(problem, *radius, report)?,
    }
    Ok(())
}

fn verify_ft(problem: &ProblemFile, result: &ResultFile, report: &mut VerifyReport) -> Result<()> {
    let p = problem.ft()?;
    let points: Vec<&Point> = match &result.solution {
        SolutionRecord::Point { point } => vec![point],
        SolutionRecord::Segment { start, end } => vec![start, end],
        SolutionRecord::Region { balls } => {
            report.push(
                "region",
                balls == &p.balls,
                "region balls equal the problem balls".into(),
            );
            vec![&result.representative]
        }
        SolutionRecord::Ball { .. } => {
            report.push(
                "solution",
                false,
                "a ball is not a Fermat-Torricelli solution".into(),
            );
            return Ok(());
        }
    };
    let mut all = points.clone();
    all.push(&result.representative);
    if all.iter().any(|x| x.dim() != p.dim()) {
        report.push(
            "dimension",
            false,
            "solution coordinates do not match the problem".into(),
        );
        return Ok(());
    }
    for (k, x) in all.iter().enumerate() {
        let h = p.value_raw(x.coords()) + p.constant;
        report.push(
            &format!("value[{k}]"),
            close(h, result.value),
            format!("objective {h}, reported {}", result.value),
        );
    }
    if let SolutionRecord::Segment { start, end } = &result.solution {
        let on =
            start.dist(&result.representative) + result.representative.dist(end) - start.dist(end);
        report.push(
            "representative",
            on.abs() <= 1e-9 * (1.0 + start.dist(end)),
            "representative lies on the segment".into(),
        );
    }
    match result.method {
        Method::ExactConstruction => {
            for (k, x) in all.iter().enumerate() {
                let c = ft_certificate(x, &p, FT_TOL)?;
                report.push(
                    &format!("certificate[{k}]"),
                    c.passed(),
                    format!("gap {:e}", c.gap),
                );
            }
        }
        Method::Subgradient => oracle_check(problem, result.value, report)?,
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::io::parse_problem;

    fn solve(text: &str) -> (ProblemFile, ResultFile) {
        let p = parse_problem(text).unwrap();
        let r = run_solve(&p, &SolverOptions::default()).unwrap();
        (p, r)
    }

    #[test]
    fn model_ii_file() {
        let (p, r) = solve(
            r#"{"kind":"sylvester","dimension":2,
                "enclose":[{"center":[-2,0],"radius":1},{"center":[2,0],"radius":1}],
                "intersect":[{"center":[0,3],"radius":1}]}"#,
        );
        let SolutionRecord::Ball { center, radius } = &r.solution else {
            panic!()
        };
        assert!(center.norm() < 1e-12 && (radius - 3.0).abs() < 1e-12);
        assert!(r.case_label.starts_with("step 3"), "{}", r.case_label);
        assert!(r.certificate.residual <= 1e-8);
        assert_eq!(r.method, Method::ExactConstruction);
        assert!(verify(&p, &r).unwrap().passed());
    }

    #[test]
    fn ft_segment_file() {
        let (p, r) = solve(
            r#"{"kind":"fermat-torricelli","dimension":2,"enclose":[],
                "intersect":[{"center":[-3,0],"radius":1},{"center":[3,0],"radius":1},{"center":[0,0],"radius":1}]}"#,
        );
        let SolutionRecord::Segment { start, end } = &r.solution else {
            panic!("{r:?}")
        };
        assert!(start.dist(&Point::xy(-1.0, 0.0)) < 1e-12);
        assert!(end.dist(&Point::xy(1.0, 0.0)) < 1e-12);
        assert!((r.value - 4.0).abs() < 1e-12);
        assert_eq!(r.uniqueness, UniquenessFlag::NonUnique);
        assert!(verify(&p, &r).unwrap().passed());
    }

    #[test]
    fn general_four_dimensional_file() {
        let (p, r) = solve(
            r#"{"kind":"sylvester","dimension":4,
                "enclose":[{"center":[1,0,0,0],"radius":0.5},{"center":[-1,0,0,1],"radius":1}],
                "intersect":[{"center":[0,4,0,0],"radius":1},{"center":[0,0,-3,0],"radius":0.5}]}"#,
        );
        assert_eq!(r.method, Method::Subgradient);
        assert!(r.iterations > 0);
        assert!(verify(&p, &r).unwrap().passed());
    }

    #[test]
    fn corrupted_radius_fails() {
        let (p, mut r) = solve(
            r#"{"kind":"sylvester","dimension":2,
                "enclose":[{"center":[-1,0],"radius":1},{"center":[1,0],"radius":1}],"intersect":[]}"#,
        );
        assert!(verify(&p, &r).unwrap().passed());
        if let SolutionRecord::Ball { radius, .. } = &mut r.solution {
            *radius += 1e-3;
        }
        r.value += 1e-3;
        assert!(!verify(&p, &r).unwrap().passed());
    }
}
