//! Browser bindings: a square bitmap in, a bitmap or label map out.
//!
//! Bitmaps are row-major bytes, non-zero for a set pixel. The side must be a
//! power of two between 2 and 256.

use regtree::integral::convex_hull;
use regtree::topo::{self, LabelMethod, MorphOp};
use regtree::tree::{build_from_grid, rasterize, rasterize_values, Grid};
use regtree::{Metric, NodeRef, SpaceSpec, Store};
use wasm_bindgen::prelude::*;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("side {0} is not a power of two in 2..=256")]
    BadSide(u32),
    #[error("expected {expected} pixels, got {found}")]
    BadLength { expected: usize, found: usize },
    #[error("unknown operation {0:?}")]
    UnknownOp(String),
    #[error(transparent)]
    Core(#[from] regtree::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

pub const MAX_SIDE: u32 = 256;

fn load(store: &mut Store, pixels: &[u8], side: u32) -> Result<(NodeRef, SpaceSpec)> {
    if !side.is_power_of_two() || !(2..=MAX_SIDE).contains(&side) {
        return Err(Error::BadSide(side));
    }
    let n = (side * side) as usize;
    if pixels.len() != n {
        return Err(Error::BadLength { expected: n, found: pixels.len() });
    }
    let grid = Grid { k: 2, side: side as usize, cells: pixels.iter().map(|&p| p != 0).collect() };
    Ok(build_from_grid(store, &grid)?)
}

fn unload(store: &Store, tree: NodeRef, space: &SpaceSpec) -> Result<Vec<u8>> {
    Ok(rasterize(store, tree, space, space.r())?.cells.into_iter().map(u8::from).collect())
}

fn metric(d1: bool) -> Metric {
    if d1 {
        Metric::D1
    } else {
        Metric::DInf
    }
}

/// `op` is one of erode, dilate, open, close, boundary or median.
pub fn morphology_bitmap(pixels: &[u8], side: u32, op: &str, d1: bool) -> Result<Vec<u8>> {
    let mut s = Store::new();
    let (t, sp) = load(&mut s, pixels, side)?;
    let (m, p) = (metric(d1), sp.r());
    let out = match op {
        "erode" => topo::morphology(&mut s, t, &sp, m, MorphOp::Erode, p)?,
        "dilate" => topo::morphology(&mut s, t, &sp, m, MorphOp::Dilate, p)?,
        "open" => topo::morphology(&mut s, t, &sp, m, MorphOp::Open, p)?,
        "close" => topo::morphology(&mut s, t, &sp, m, MorphOp::Close, p)?,
        "boundary" => topo::boundary(&mut s, t, &sp, m, p)?,
        "median" => topo::median_filter(&mut s, t, &sp, m, p)?,
        _ => return Err(Error::UnknownOp(op.to_string())),
    };
    unload(&s, out, &sp)
}

pub fn hull_bitmap(pixels: &[u8], side: u32) -> Result<Vec<u8>> {
    let mut s = Store::new();
    let (t, sp) = load(&mut s, pixels, side)?;
    let h = convex_hull(&mut s, t, &sp, sp.r())?;
    unload(&s, h, &sp)
}

/// Component label per pixel, 0 for the background and 1.. otherwise.
pub fn label_bitmap(pixels: &[u8], side: u32, d1: bool) -> Result<Vec<u32>> {
    let mut s = Store::new();
    let (t, sp) = load(&mut s, pixels, side)?;
    let lab = topo::components(&mut s, t, &sp, metric(d1), sp.r(), LabelMethod::Bucket)?;
    let vals = rasterize_values(&s, lab.tree, &sp, sp.r())?;
    Ok(vals.cells.into_iter().map(|v| v.map_or(0, |x| x as u32)).collect())
}

fn js(e: Error) -> JsError {
    JsError::new(&e.to_string())
}

#[wasm_bindgen]
pub fn morphology(pixels: &[u8], side: u32, op: &str, d1: bool) -> std::result::Result<Vec<u8>, JsError> {
    morphology_bitmap(pixels, side, op, d1).map_err(js)
}

#[wasm_bindgen]
pub fn hull(pixels: &[u8], side: u32) -> std::result::Result<Vec<u8>, JsError> {
    hull_bitmap(pixels, side).map_err(js)
}

#[wasm_bindgen]
pub fn labels(pixels: &[u8], side: u32, d1: bool) -> std::result::Result<Vec<u32>, JsError> {
    label_bitmap(pixels, side, d1).map_err(js)
}
