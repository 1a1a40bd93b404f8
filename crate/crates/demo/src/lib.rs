//! WebAssembly bindings for the browser page in `www/`. Every export returns
//! a JSON string; errors surface as JS exceptions.

use apmagic::ap::kappa_of;
use apmagic::grid::{chain_decompose, generate_from_chain, verify, Grid};
use apmagic::kappa::{kappa_roots_quadratic, AlphaFraction};
use apmagic::search::{find_square_ap_triples, near_misses, pairs_for_sum};
use apmagic::Ratio;
use serde::Serialize;
use wasm_bindgen::prelude::*;

#[derive(Serialize)]
struct GridView {
    order: usize,
    cells: Vec<u64>,
    report: apmagic::VerifyReport,
    chain: Option<apmagic::grid::ChainDecomposition>,
}

fn grid_view(grid: &Grid) -> GridView {
    GridView {
        order: grid.order(),
        cells: grid.cells().to_vec(),
        report: verify(grid),
        chain: chain_decompose(grid).ok(),
    }
}

fn to_json(value: &impl Serialize) -> String {
    serde_json::to_string(value).expect("plain data serializes")
}

pub fn verify_text(text: &str, roots: bool) -> Result<String, String> {
    let grid = Grid::parse(text, roots).map_err(|e| e.to_string())?;
    Ok(to_json(&grid_view(&grid)))
}

pub fn chain_text(x23: u64, d1: i64, d2: i64) -> Result<String, String> {
    let grid = generate_from_chain(x23, d1.into(), d2.into()).map_err(|e| e.to_string())?;
    Ok(to_json(&grid_view(&grid)))
}

#[derive(Serialize)]
struct TripleView {
    a: u64,
    b: u64,
    c: u64,
    offsets: [u64; 3],
    kappa: Ratio,
}

#[derive(Serialize)]
struct SumView {
    d: u64,
    triples: Vec<TripleView>,
    /// Semi-magic grids from the first three triples, when there are three.
    near_misses: Vec<GridView>,
}

pub fn triples_text(d: u64) -> String {
    let roots = find_square_ap_triples(d);
    let triples = roots
        .iter()
        .zip(pairs_for_sum(d))
        .map(|(t, p)| TripleView {
            a: t.a,
            b: t.b,
            c: t.c,
            offsets: [p.p1(), p.p2(), p.p3()],
            kappa: kappa_of(&p),
        })
        .collect();
    let near = match roots.as_slice() {
        [a, b, c, ..] => near_misses(*a, *b, *c).iter().map(|m| grid_view(&m.grid)).collect(),
        _ => Vec::new(),
    };
    to_json(&SumView {
        d,
        triples,
        near_misses: near,
    })
}

pub fn kappa_text(alpha: &str) -> Result<String, String> {
    let ratio: Ratio = alpha
        .trim()
        .parse()
        .map_err(|e: apmagic::ratio::RatioError| e.to_string())?;
    let alpha = AlphaFraction::try_from(ratio).map_err(|e| e.to_string())?;
    let roots = kappa_roots_quadratic(&alpha);
    #[derive(Serialize)]
    struct KappaView<'a> {
        alpha: &'a AlphaFraction,
        discriminant: String,
        roots: &'a [apmagic::kappa::KappaRoot],
    }
    Ok(to_json(&KappaView {
        alpha: &alpha,
        discriminant: alpha.discriminant().to_string(),
        roots: &roots,
    }))
}

#[wasm_bindgen(js_name = verifyGrid)]
pub fn verify_grid(text: &str, roots: bool) -> Result<String, JsError> {
    verify_text(text, roots).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen(js_name = chainGrid)]
pub fn chain_grid(x23: u64, d1: i64, d2: i64) -> Result<String, JsError> {
    chain_text(x23, d1, d2).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen(js_name = triplesForSum)]
pub fn triples_for_sum(d: u64) -> String {
    triples_text(d)
}

#[wasm_bindgen(js_name = kappaRoots)]
pub fn kappa_roots(alpha: &str) -> Result<String, JsError> {
    kappa_text(alpha).map_err(|e| JsError::new(&e))
}
