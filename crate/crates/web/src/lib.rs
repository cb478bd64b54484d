//! WebAssembly bindings for the browser demo. Each export takes plain
//! values and returns a JSON string; errors become JS exceptions.

use motsteen_core::bockstein::{beta_report, bidegree_range, block_homology};
use motsteen_core::{beta, parse_element, Algebra, Ambient, Bidegree, Block, Prime, Scheme, SchemeId};
use serde::Serialize;
use wasm_bindgen::prelude::*;

fn scheme(name: &str, p: u32) -> Result<Scheme, String> {
    let p = Prime::new(p).map_err(|e| e.to_string())?;
    let id: SchemeId = name.parse().map_err(|e: motsteen_core::AlgebraError| e.to_string())?;
    Scheme::new(id, p).map_err(|e| e.to_string())
}

fn to_json<T: Serialize>(v: &T) -> Result<String, String> {
    serde_json::to_string(v).map_err(|e| e.to_string())
}

#[derive(Serialize)]
struct ChartCell {
    d: i64,
    w: i64,
    dim: usize,
    rank: usize,
    homology: usize,
}

/// Bockstein table of the MZ form for d ≤ `dmax`, |w| ≤ `wmax`.
pub fn chart_json(scheme_name: &str, p: u32, dmax: i64, wmax: i64) -> Result<String, String> {
    if !(0..=60).contains(&dmax) || !(0..=6).contains(&wmax) {
        return Err("bounds out of range: 0 <= dmax <= 60, 0 <= wmax <= 6".into());
    }
    let alg = Algebra::mz(scheme(scheme_name, p)?);
    let report = beta_report(&alg, &bidegree_range(dmax, wmax)).map_err(|e| e.to_string())?;
    let cells: Vec<ChartCell> = report
        .rows
        .iter()
        .map(|r| ChartCell { d: r.bidegree.d, w: r.bidegree.w, dim: r.dim, rank: r.rank, homology: r.homology })
        .collect();
    to_json(&cells)
}

#[derive(Serialize)]
struct Evaluation {
    normal_form: String,
    /// Absent for zero and for inhomogeneous elements.
    bidegree: Option<Bidegree>,
    beta: String,
    terms: usize,
}

/// Normal form, bidegree and Bockstein of an expression.
pub fn evaluate_json(scheme_name: &str, p: u32, dual: bool, expr: &str) -> Result<String, String> {
    let ambient = if dual { Ambient::Dual } else { Ambient::Mz };
    let alg = Algebra::new(scheme(scheme_name, p)?, ambient);
    let x = parse_element(&alg, expr).map_err(|e| e.to_string())?;
    let bx = beta(&alg, &x).map_err(|e| e.to_string())?;
    let bidegree = x.bidegree().ok().flatten();
    to_json(&Evaluation { normal_form: x.to_string(), bidegree, beta: bx.to_string(), terms: x.len() })
}

#[derive(Serialize)]
struct BlockResult {
    block: Vec<u32>,
    chain_ranks: Vec<usize>,
    homology: Vec<usize>,
}

/// Chain group sizes and homology of the block complex with multi-index `m`.
pub fn block_json(p: u32, m: &[u32]) -> Result<String, String> {
    if m.len() > 6 || m.iter().any(|&x| x > 6) {
        return Err("block out of range: at most 6 entries, each <= 6".into());
    }
    let p = Prime::new(p).map_err(|e| e.to_string())?;
    let b = Block::new(m.to_vec());
    let complex = b.complex(p);
    to_json(&BlockResult {
        block: b.m.clone(),
        chain_ranks: complex.chains.iter().map(Vec::len).collect(),
        homology: block_homology(&b, p),
    })
}

#[wasm_bindgen]
pub fn chart(scheme: &str, p: u32, dmax: i32, wmax: i32) -> Result<String, JsError> {
    chart_json(scheme, p, dmax.into(), wmax.into()).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn evaluate(scheme: &str, p: u32, dual: bool, expr: &str) -> Result<String, JsError> {
    evaluate_json(scheme, p, dual, expr).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn block(p: u32, m: Vec<u32>) -> Result<String, JsError> {
    block_json(p, &m).map_err(|e| JsError::new(&e))
}
