//! Browser bindings: solve a problem file, draw it, or generate one.
//!
//! Each export is a thin wrapper over a plain function so the logic runs
//! and is tested natively.

use apollonia::io::{emit_svg, parse_problem, run_solve, ProblemFile, ProblemKind, SolverOptions};
use apollonia::oracle::{random_instance, InstanceKind};
use apollonia::threeball::Model;
use wasm_bindgen::prelude::*;

/// Result file (JSON) for a problem file.
pub fn solve_problem(problem: &str) -> Result<String, String> {
    let p = parse_problem(problem).map_err(|e| e.to_string())?;
    let r = run_solve(&p, &SolverOptions::default()).map_err(|e| e.to_string())?;
    serde_json::to_string_pretty(&r).map_err(|e| e.to_string())
}

/// SVG figure of a planar problem with its solution.
pub fn plot_problem(problem: &str) -> Result<String, String> {
    let p = parse_problem(problem).map_err(|e| e.to_string())?;
    let r = run_solve(&p, &SolverOptions::default()).map_err(|e| e.to_string())?;
    emit_svg(&p, &r).map_err(|e| e.to_string())
}

/// Seeded planar problem file of the named family.
pub fn generate_problem(family: &str, seed: u64) -> Result<String, String> {
    let (kind, inst) = match family {
        "model-i" => (
            ProblemKind::Sylvester,
            InstanceKind::Model { model: Model::I },
        ),
        "model-ii" => (
            ProblemKind::Sylvester,
            InstanceKind::Model { model: Model::II },
        ),
        "model-iii" => (
            ProblemKind::Sylvester,
            InstanceKind::Model { model: Model::III },
        ),
        "model-iv" => (
            ProblemKind::Sylvester,
            InstanceKind::Model { model: Model::IV },
        ),
        "ft" => (ProblemKind::FermatTorricelli, InstanceKind::Ft),
        other => return Err(format!("unknown family {other:?}")),
    };
    Ok(ProblemFile::from_instance(kind, &random_instance(seed, inst)).to_json())
}

#[wasm_bindgen]
pub fn solve(problem: &str) -> Result<String, JsValue> {
    solve_problem(problem).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn plot(problem: &str) -> Result<String, JsValue> {
    plot_problem(problem).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn generate(family: &str, seed: u32) -> Result<String, JsValue> {
    generate_problem(family, u64::from(seed)).map_err(|e| JsValue::from_str(&e))
}
