//! Problem and result files, the solve/verify drivers and SVG figures.
//!
//! A problem file is one JSON document:
//!
//! ```json
//! {"kind": "sylvester", "dimension": 2,
//!  "enclose": [{"center": [-1, 0], "radius": 1}],
//!  "intersect": [{"center": [0, 3], "radius": 1}],
//!  "options": {"tol": 1e-8, "max_iter": 50000}}
//! ```
//!
//! `kind` is `sylvester` or `fermat-torricelli`; `options` may be omitted.

mod run;
mod svg;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ft::{reduce_to_ft2, FtProblem};
use crate::geom::{Ball, Point};
use crate::oracle::Instance;
use crate::subgradient::SubgradientConfig;
use crate::sylvester::SylvesterProblem;

pub use run::{
    run_oracle, run_solve, verify, CertificateSummary, Check, OracleReport, ResultFile,
    SolutionRecord, TraceRecord, UniquenessFlag, VerifyReport,
};
pub use svg::emit_svg;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ProblemKind {
    Sylvester,
    FermatTorricelli,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BallRecord {
    pub center: Vec<f64>,
    pub radius: f64,
}

impl From<&Ball> for BallRecord {
    fn from(b: &Ball) -> Self {
        Self {
            center: b.center.coords().to_vec(),
            radius: b.radius,
        }
    }
}

/// Overrides for the iterative solver; unset fields keep the defaults.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SolverOptions {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tol: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_iter: Option<usize>,
}

impl SolverOptions {
    /// `self` with every field set in `other` replaced.
    pub fn overridden_by(&self, other: &SolverOptions) -> SolverOptions {
        SolverOptions {
            tol: other.tol.or(self.tol),
            max_iter: other.max_iter.or(self.max_iter),
        }
    }

    pub fn config(&self) -> SubgradientConfig {
        let mut cfg = SubgradientConfig::default();
        if let Some(t) = self.tol {
            cfg.tol = t;
        }
        if let Some(m) = self.max_iter {
            cfg.max_iter = m;
        }
        cfg
    }
}

/// A validated problem file. Balls keep their file order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemFile {
    pub kind: ProblemKind,
    pub dimension: usize,
    #[serde(default)]
    pub enclose: Vec<BallRecord>,
    #[serde(default)]
    pub intersect: Vec<BallRecord>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub options: Option<SolverOptions>,
}

fn schema(path: impl Into<String>, message: impl Into<String>) -> Error {
    Error::Schema {
        path: path.into(),
        message: message.into(),
    }
}

impl ProblemFile {
    pub fn from_instance(kind: ProblemKind, inst: &Instance) -> Self {
        let dimension = inst
            .enclose
            .first()
            .or(inst.intersect.first())
            .map_or(0, Ball::dim);
        Self {
            kind,
            dimension,
            enclose: inst.enclose.iter().map(BallRecord::from).collect(),
            intersect: inst.intersect.iter().map(BallRecord::from).collect(),
            options: None,
        }
    }

    pub fn enclose_balls(&self) -> Result<Vec<Ball>> {
        to_balls(&self.enclose)
    }

    pub fn intersect_balls(&self) -> Result<Vec<Ball>> {
        to_balls(&self.intersect)
    }

    pub fn sylvester(&self) -> Result<SylvesterProblem> {
        SylvesterProblem::new(self.enclose_balls()?, self.intersect_balls()?)
    }

    /// The three-ball problem with enclose terms folded into radius-0 balls.
    pub fn ft(&self) -> Result<FtProblem> {
        reduce_to_ft2(&self.enclose_balls()?, &self.intersect_balls()?)
    }

    pub fn options(&self) -> SolverOptions {
        self.options.clone().unwrap_or_default()
    }

    /// File path of ball `i` in the order enclose then intersect.
    pub fn ball_path(&self, i: usize) -> String {
        if i < self.enclose.len() {
            format!("enclose[{i}]")
        } else {
            format!("intersect[{}]", i - self.enclose.len())
        }
    }

    /// Checks the invariants serde cannot express.
    pub fn validate(&self) -> Result<()> {
        if self.dimension == 0 {
            return Err(schema("dimension", "must be at least 1"));
        }
        if self.enclose.is_empty() && self.intersect.is_empty() {
            return Err(schema("enclose", "the problem has no balls"));
        }
        for (list, balls) in [("enclose", &self.enclose), ("intersect", &self.intersect)] {
            for (i, b) in balls.iter().enumerate() {
                if b.center.len() != self.dimension {
                    return Err(schema(
                        format!("{list}[{i}].center"),
                        format!(
                            "expected {} coordinates, found {}",
                            self.dimension,
                            b.center.len()
                        ),
                    ));
                }
                if let Some(k) = b.center.iter().position(|c| !c.is_finite()) {
                    return Err(schema(format!("{list}[{i}].center[{k}]"), "not finite"));
                }
                if !b.radius.is_finite() || b.radius < 0.0 {
                    return Err(schema(
                        format!("{list}[{i}].radius"),
                        format!("must be a nonnegative number, got {}", b.radius),
                    ));
                }
            }
        }
        if let Some(o) = &self.options {
            if o.tol.is_some_and(|t| !(t.is_finite() && t > 0.0)) {
                return Err(schema("options.tol", "must be positive"));
            }
            if o.max_iter == Some(0) {
                return Err(schema("options.max_iter", "must be positive"));
            }
        }
        if self.kind == ProblemKind::FermatTorricelli {
            let n = self.enclose.len() + self.intersect.len();
            if n != 3 {
                return Err(schema(
                    "intersect",
                    format!("a Fermat-Torricelli problem has exactly three balls, found {n}"),
                ));
            }
            match self.ft() {
                Err(Error::CoincidentCenters(i, j)) => {
                    return Err(schema(
                        format!("{}.center", self.ball_path(j)),
                        format!(
                            "coincides with the center of {}; the three centers must be distinct",
                            self.ball_path(i)
                        ),
                    ))
                }
                Err(e) => return Err(e),
                Ok(_) => {}
            }
        }
        Ok(())
    }

    /// Canonical JSON text: pretty-printed, numbers in shortest round-trip form.
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("problem files serialize")
    }
}

fn to_balls(list: &[BallRecord]) -> Result<Vec<Ball>> {
    list.iter()
        .map(|b| Ball::new(Point::new(b.center.clone())?, b.radius))
        .collect()
}

/// Parses and validates a problem file. Errors carry the path of the offending field.
pub fn parse_problem(text: &str) -> Result<ProblemFile> {
    let p: ProblemFile = from_json(text)?;
    p.validate()?;
    Ok(p)
}

/// Deserializes any file type, reporting the failing field path.
pub fn from_json<T: serde::de::DeserializeOwned>(text: &str) -> Result<T> {
    let de = &mut serde_json::Deserializer::from_str(text);
    let value = serde_path_to_error::deserialize(de).map_err(|e| {
        let path = e.path().to_string();
        let inner = e.into_inner();
        if inner.is_syntax() || inner.is_eof() || inner.is_io() {
            Error::Parse(inner.to_string())
        } else {
            let path = if path == "." {
                "(document)".to_string()
            } else {
                path
            };
            schema(path, inner.to_string())
        }
    })?;
    Ok(value)
}

#[cfg(test)]
mod tests {
    use super::*;

    const PAIR: &str = r#"{"kind":"sylvester","dimension":2,"enclose":[{"center":[-1,0],"radius":1},{"center":[1,0],"radius":1}],"intersect":[]}"#;

    fn path_of(e: Error) -> String {
        match e {
            Error::Schema { path, .. } => path,
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn parses_pair() {
        let p = parse_problem(PAIR).unwrap();
        assert_eq!(p.kind, ProblemKind::Sylvester);
        assert_eq!((p.enclose.len(), p.intersect.len()), (2, 0));
        assert_eq!(parse_problem(&p.to_json()).unwrap(), p);
    }

    #[test]
    fn negative_radius_path() {
        let text = PAIR.replacen("\"radius\":1", "\"radius\":-1", 1);
        assert_eq!(
            path_of(parse_problem(&text).unwrap_err()),
            "enclose[0].radius"
        );
    }

    #[test]
    fn missing_field_and_dimension_paths() {
        let text = PAIR.replacen(",\"radius\":1", "", 1);
        let e = parse_problem(&text).unwrap_err();
        assert!(e.to_string().contains("radius"), "{e}");
        let text = PAIR.replacen("[1,0]", "[1,0,0]", 1);
        assert_eq!(
            path_of(parse_problem(&text).unwrap_err()),
            "enclose[1].center"
        );
        let text = PAIR.replacen("\"sylvester\"", "\"steiner\"", 1);
        assert_eq!(path_of(parse_problem(&text).unwrap_err()), "kind");
        assert!(matches!(parse_problem("{"), Err(Error::Parse(_))));
    }

    #[test]
    fn ft_requires_distinct_centers() {
        let text = r#"{"kind":"fermat-torricelli","dimension":2,"enclose":[],
            "intersect":[{"center":[0,0],"radius":1},{"center":[0,0],"radius":2},{"center":[3,0],"radius":1}]}"#;
        let e = parse_problem(text).unwrap_err();
        assert!(e.to_string().contains("distinct"), "{e}");
        assert_eq!(path_of(e), "intersect[1].center");
    }

    #[test]
    fn round_trip_keeps_full_precision() {
        let text = r#"{"kind":"sylvester","dimension":1,"enclose":[{"center":[0.1],"radius":2.220446049250313e-16}],"intersect":[{"center":[-123456.78901234567],"radius":0.30000000000000004}]}"#;
        let p = parse_problem(text).unwrap();
        assert_eq!(p.intersect[0].radius, 0.1 + 0.2);
        assert_eq!(parse_problem(&p.to_json()).unwrap(), p);
        assert_eq!(serde_json::to_string(&p).unwrap(), text);
    }
}
