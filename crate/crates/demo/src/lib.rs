//! wasm-bindgen bindings for the static page in `www/`. Every export returns a
//! JSON string; failures come back as `{"error": "..."}` so the page never
//! has to catch exceptions.

use serde::Serialize;
use wasm_bindgen::prelude::wasm_bindgen;

use riem_alpha::alpha::{alpha_certify, constants, AlphaCertificate};
use riem_alpha::calculus::GammaOptions;
use riem_alpha::manifold::{exp_map, random_tangent_of_norm, seeded_rng};
use riem_alpha::newton::{newton_sequence, NewtonOptions};
use riem_alpha::problems::{catalog_list, from_id, Problem};
use riem_alpha::Point;

fn to_json<T: Serialize>(value: &T) -> String {
    serde_json::to_string(value).unwrap_or_else(|e| error_json(&e.to_string()))
}

fn error_json(message: &str) -> String {
    serde_json::json!({ "error": message }).to_string()
}

fn parse_coords(text: &str) -> Result<Vec<f64>, String> {
    text.split(|c: char| c == ',' || c.is_whitespace())
        .filter(|t| !t.is_empty())
        .map(|t| t.parse::<f64>().map_err(|_| format!("`{t}` is not a number")))
        .collect()
}

fn problem_and_point(problem: &str, coords: &str) -> Result<(Problem, Point), String> {
    let p = from_id(problem.trim()).map_err(|e| e.to_string())?;
    let x = parse_coords(coords)?;
    let z = p.manifold().project_point(x).map_err(|e| e.to_string())?;
    Ok((p, z))
}

/// Catalog entries for the problem picker.
#[wasm_bindgen]
pub fn problems() -> String {
    to_json(&catalog_list())
}

/// A point at distance `offset` from the problem's first known zero, as JSON
/// coordinates; the manifold's base point when no zero is known.
#[wasm_bindgen(js_name = suggestedStart)]
pub fn suggested_start(problem: &str, offset: f64) -> String {
    let p = match from_id(problem.trim()) {
        Ok(p) => p,
        Err(e) => return error_json(&e.to_string()),
    };
    let z = match p.known_zeros().first() {
        Some(zeta) => exp_map(zeta, &random_tangent_of_norm(zeta, offset, &mut seeded_rng(0))),
        None => p.manifold().base_point(),
    };
    to_json(&z.to_vec())
}

#[wasm_bindgen(js_name = theoryConstants)]
pub fn theory_constants() -> String {
    to_json(constants())
}

#[derive(Serialize)]
struct Certified<'a> {
    problem: &'a str,
    certificate: AlphaCertificate,
}

/// Alpha-test at `coords`, projected onto the problem's manifold first.
#[wasm_bindgen]
pub fn certify(problem: &str, coords: &str, directions: usize) -> String {
    match problem_and_point(problem, coords) {
        Ok((p, z)) => {
            let opts = GammaOptions {
                n_dirs: directions.max(1),
                ..GammaOptions::default()
            };
            to_json(&Certified {
                problem,
                certificate: alpha_certify(&p, &z, &opts),
            })
        }
        Err(e) => error_json(&e),
    }
}

#[derive(Serialize)]
struct Run {
    termination: String,
    points: Vec<Vec<f64>>,
    #[serde(with = "riem_alpha::serde_f64::vec")]
    betas: Vec<f64>,
    /// Distance of each iterate to the nearest known zero, when one is known.
    distances: Option<Vec<f64>>,
}

/// Newton iterates from `coords`.
#[wasm_bindgen]
pub fn newton(problem: &str, coords: &str, max_iter: usize) -> String {
    let (p, z) = match problem_and_point(problem, coords) {
        Ok(v) => v,
        Err(e) => return error_json(&e),
    };
    let opts = NewtonOptions {
        max_iter,
        ..NewtonOptions::default()
    };
    let mut trace = newton_sequence(&p, &z, &opts);
    if let Some((root, _)) = p.nearest_zero(trace.last()) {
        trace = trace.with_root(&root.clone());
    }
    to_json(&Run {
        termination: format!("{:?}", trace.termination),
        points: trace.points.iter().map(|q| q.to_vec()).collect(),
        betas: trace.betas,
        distances: trace.distances_to_root,
    })
}
