use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

use super::{check_optimality, CertificateCase, SylvesterProblem, SylvesterSolution, Term};

/// A subfamily of at most `n + 1` balls sharing the full problem's solution.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Reduction {
    pub enclose: Vec<usize>,
    pub intersect: Vec<usize>,
    /// The subproblem's certificate passed at the same center with the same radius.
    pub verified: bool,
}

impl Reduction {
    pub fn len(&self) -> usize {
        self.enclose.len() + self.intersect.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

const SAME_VALUE_TOL: f64 = 1e-8;
const CERT_TOL: f64 = 1e-7;

/// Picks the balls carrying weight in the optimality certificate.
///
/// Requires something to enclose and every enclosed radius positive. When the
/// optimal ball coincides with one of the given balls, that ball plus one
/// more is returned. Falls back to the full active set if the chosen
/// subfamily does not reproduce the solution.
pub fn caratheodory_reduce(p: &SylvesterProblem, sol: &SylvesterSolution) -> Result<Reduction> {
    if p.enclose.is_empty() {
        return Err(Error::Hypothesis(
            "reduction needs at least one ball to enclose".into(),
        ));
    }
    if let Some(i) = p.enclose.iter().position(|b| b.radius <= 0.0) {
        return Err(Error::Hypothesis(format!(
            "enclosed ball {i} has zero radius"
        )));
    }
    let cert = check_optimality(&sol.center, p, CERT_TOL);
    let (mut enclose, mut intersect) = match cert.case {
        CertificateCase::CoincidentBall { index } => {
            let second = cert
                .active
                .enclose
                .iter()
                .map(|&i| Term::Enclose(i))
                .chain(cert.active.intersect.iter().map(|&j| Term::Intersect(j)))
                .find(|t| *t != Term::Enclose(index))
                .or_else(|| {
                    (0..p.enclose.len())
                        .find(|&i| i != index)
                        .map(Term::Enclose)
                        .or((!p.intersect.is_empty()).then_some(Term::Intersect(0)))
                });
            let mut e = vec![index];
            let mut j = Vec::new();
            match second {
                Some(Term::Enclose(i)) => e.push(i),
                Some(Term::Intersect(k)) => j.push(k),
                None => {}
            }
            (e, j)
        }
        CertificateCase::ZeroRadius => (cert.active.enclose.clone(), cert.active.intersect.clone()),
        CertificateCase::Hull => {
            let mut e = Vec::new();
            let mut j = Vec::new();
            for (t, &c) in cert.terms.iter().zip(&cert.coefficients) {
                if c > 1e-12 {
                    match *t {
                        Term::Enclose(i) => e.push(i),
                        Term::Intersect(k) => j.push(k),
                    }
                }
            }
            (e, j)
        }
    };
    enclose.sort_unstable();
    intersect.sort_unstable();

    if reproduces(p, sol, &enclose, &intersect) {
        return Ok(Reduction {
            enclose,
            intersect,
            verified: true,
        });
    }
    let enclose = cert.active.enclose.clone();
    let intersect = cert.active.intersect.clone();
    let verified = reproduces(p, sol, &enclose, &intersect);
    Ok(Reduction {
        enclose,
        intersect,
        verified,
    })
}

fn reproduces(
    p: &SylvesterProblem,
    sol: &SylvesterSolution,
    enclose: &[usize],
    intersect: &[usize],
) -> bool {
    let Ok(sub) = p.subproblem(enclose, intersect) else {
        return false;
    };
    let r_sub = sub.value_raw(sol.center.coords());
    (r_sub - sol.radius).abs() <= SAME_VALUE_TOL * (1.0 + sol.radius)
        && check_optimality(&sol.center, &sub, CERT_TOL).passed()
}
