//! Exact planar constructions for three balls, one per sign pattern:
//!
//! | model | enclose | intersect |
//! |-------|---------|-----------|
//! | I     | 3       | 0         |
//! | II    | 2       | 1         |
//! | III   | 1       | 2         |
//! | IV    | 0       | 3         |
//!
//! Each procedure runs its steps in order and returns the first candidate
//! whose optimality certificate passes. If none does, it falls back to the
//! subgradient method and says so in the solution notes.

mod apollonius;
mod exact;
mod models;

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::geom::Point;

pub use apollonius::{apollonius_ball, tangency_residual, Tangency, TangencySpec};
pub use exact::{solve_exact_planar, solve_pair, solve_sylvester, solve_three};
pub use models::{solve_model_i, solve_model_ii, solve_model_iii, solve_model_iv};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Model {
    I,
    II,
    III,
    IV,
}

impl Model {
    /// Model for `enclose` balls to cover and `3 - enclose` to meet.
    pub fn for_counts(enclose: usize, intersect: usize) -> Option<Model> {
        match (enclose, intersect) {
            (3, 0) => Some(Model::I),
            (2, 1) => Some(Model::II),
            (1, 2) => Some(Model::III),
            (0, 3) => Some(Model::IV),
            _ => None,
        }
    }

    pub fn enclose_count(self) -> usize {
        match self {
            Model::I => 3,
            Model::II => 2,
            Model::III => 1,
            Model::IV => 0,
        }
    }

    /// Tangency pattern of the final Apollonius step.
    pub fn tangency(self) -> TangencySpec {
        let k = self.enclose_count();
        std::array::from_fn(|i| {
            if i < k {
                Tangency::Internal
            } else {
                Tangency::External
            }
        })
    }
}

/// Which step of a construction produced the answer, with its auxiliary points.
///
/// Point names follow the constructions: `u1`, `v1`, `w1`, `t1` for the
/// first angle test of Model I, `x1`, `x2`, `y`, `z` for Model II's
/// middle step, and so on. Indices are 1-based.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConstructionTrace {
    pub model: Model,
    pub step_fired: u8,
    pub case_label: String,
    pub aux_points: BTreeMap<String, Point>,
}
