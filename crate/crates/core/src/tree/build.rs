//! Construction helpers: point insertion, precision assertion, dense grids.

use std::collections::{BTreeMap, HashMap};

use super::space::{cell_code, Block, Coords, SpaceSpec, MAX_DIM};
use super::store::{NodeRef, Store};
use super::traverse::for_each_leaf;
use crate::error::{Error, Result};

/// Map real coordinates in `[0,1]` to a cell: `floor(v * 2^r)`, with 1.0
/// clamped into the last cell.
pub fn quantize(space: &SpaceSpec, coords: &[f64]) -> Result<Coords> {
    check_len(space, coords.len())?;
    let n = space.cells_per_axis();
    let mut c = [0u32; MAX_DIM];
    for (a, &v) in coords.iter().enumerate() {
        if !(0.0..=1.0).contains(&v) {
            return Err(Error::CoordOutOfRange { axis: a, value: v });
        }
        c[a] = ((v * n as f64).floor() as u64).min(n - 1) as u32;
    }
    Ok(c)
}

fn check_len(space: &SpaceSpec, len: usize) -> Result<()> {
    if len != space.dim() {
        return Err(Error::DimensionMismatch { expected: space.dim(), found: len });
    }
    Ok(())
}

/// Add the cell with integer coordinates `cell` (precision `r`).
///
/// `value` makes the new leaf a pyramid leaf; re-adding a cell overwrites it.
pub fn add_cell(
    store: &mut Store,
    tree: NodeRef,
    space: &SpaceSpec,
    cell: &[u32],
    value: Option<f64>,
) -> Result<NodeRef> {
    check_len(space, cell.len())?;
    for (a, &c) in cell.iter().enumerate() {
        if u64::from(c) >= space.cells_per_axis() {
            return Err(Error::CoordOutOfRange { axis: a, value: f64::from(c) });
        }
    }
    let leaf = match value {
        Some(v) => store.valued(v),
        None => NodeRef::BLACK,
    };
    let code = cell_code(space, space.r(), cell);
    Ok(insert_leaf(store, tree, space.depth(), 0, code, leaf))
}

/// Add a point given by real coordinates in the unit frame.
pub fn add_point(
    store: &mut Store,
    tree: NodeRef,
    space: &SpaceSpec,
    coords: &[f64],
    value: Option<f64>,
) -> Result<NodeRef> {
    let c = quantize(space, coords)?;
    add_cell(store, tree, space, &c[..space.dim()], value)
}

/// Replace the node addressed by the `depth`-bit path `code` with `leaf`.
pub(crate) fn insert_leaf(store: &mut Store, n: NodeRef, depth: u32, level: u32, code: u64, leaf: NodeRef) -> NodeRef {
    if level == depth {
        return leaf;
    }
    if n == leaf && store.is_terminal(n) {
        return n;
    }
    let (l, r) = store.split(n);
    if (code >> (depth - 1 - level)) & 1 == 0 {
        let nl = insert_leaf(store, l, depth, level + 1, code, leaf);
        store.join(nl, r)
    } else {
        let nr = insert_leaf(store, r, depth, level + 1, code, leaf);
        store.join(l, nr)
    }
}

/// Cut a tree at precision `p`: nodes reached at depth `k*p` become their
/// upper hull (black, or valued with the subtree maximum).
pub fn assert_at(store: &mut Store, root: NodeRef, space: &SpaceSpec, precision: u32) -> Result<NodeRef> {
    let depth = space.depth_at(precision)?;
    let mut memo = HashMap::new();
    Ok(cut(store, root, depth, &mut memo))
}

pub(crate) fn cut(
    store: &mut Store,
    n: NodeRef,
    remaining: u32,
    memo: &mut HashMap<(NodeRef, u32), NodeRef>,
) -> NodeRef {
    if store.is_terminal(n) {
        return n;
    }
    if remaining == 0 {
        return store.hull(n);
    }
    if let Some(&m) = memo.get(&(n, remaining)) {
        return m;
    }
    let (l, r) = store.split(n);
    let nl = cut(store, l, remaining - 1, memo);
    let nr = cut(store, r, remaining - 1, memo);
    let m = store.join(nl, nr);
    memo.insert((n, remaining), m);
    m
}

/// Build a tree of depth `k*p` from a per-cell leaf function.
pub fn build_cells(
    store: &mut Store,
    space: &SpaceSpec,
    precision: u32,
    mut f: impl FnMut(&Coords) -> NodeRef,
) -> Result<NodeRef> {
    let depth = space.depth_at(precision)?;
    fn rec(
        store: &mut Store,
        space: &SpaceSpec,
        b: Block,
        depth: u32,
        p: u32,
        f: &mut dyn FnMut(&Coords) -> NodeRef,
    ) -> NodeRef {
        if b.level == depth {
            return f(&b.cell_at(space, p));
        }
        let (bl, br) = b.children(space);
        let l = rec(store, space, bl, depth, p, f);
        let r = rec(store, space, br, depth, p, f);
        store.join(l, r)
    }
    Ok(rec(store, space, Block::root(), depth, precision, &mut f))
}

/// Dense k-dimensional array indexed with axis 0 varying fastest.
#[derive(Clone, Debug, PartialEq)]
pub struct Grid<T> {
    pub k: usize,
    pub side: usize,
    pub cells: Vec<T>,
}

/// Largest grid `rasterize` agrees to allocate, as a power of two.
pub const MAX_GRID_BITS: u32 = 24;

impl<T: Clone> Grid<T> {
    pub fn new(k: usize, side: usize, fill: T) -> Self {
        Grid { k, side, cells: vec![fill; side.pow(k as u32)] }
    }

    pub fn index(&self, c: &[u32]) -> usize {
        let mut i = 0usize;
        for a in (0..self.k).rev() {
            i = i * self.side + c[a] as usize;
        }
        i
    }

    pub fn coords(&self, mut i: usize) -> Coords {
        let mut c = [0u32; MAX_DIM];
        for v in c.iter_mut().take(self.k) {
            *v = (i % self.side) as u32;
            i /= self.side;
        }
        c
    }

    pub fn get(&self, c: &[u32]) -> &T {
        &self.cells[self.index(c)]
    }

    pub fn set(&mut self, c: &[u32], v: T) {
        let i = self.index(c);
        self.cells[i] = v;
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }
}

fn grid_guard(space: &SpaceSpec, precision: u32) -> Result<u32> {
    let bits = space.depth_at(precision)?;
    if bits > MAX_GRID_BITS {
        return Err(Error::GridTooLarge(bits));
    }
    Ok(bits)
}

/// Dense occupancy grid at precision `p`.
pub fn rasterize(store: &Store, root: NodeRef, space: &SpaceSpec, precision: u32) -> Result<Grid<bool>> {
    Ok(rasterize_values(store, root, space, precision)?.map(|v| v.is_some()))
}

/// Dense grid of leaf values at precision `p`; unvalued black cells hold NaN.
pub fn rasterize_values(store: &Store, root: NodeRef, space: &SpaceSpec, precision: u32) -> Result<Grid<Option<f64>>> {
    let depth = grid_guard(space, precision)?;
    let side = 1usize << precision;
    let mut g = Grid::new(space.dim(), side, None);
    let shift = space.r() - precision;
    let k = space.dim();
    for_each_leaf(store, root, space, depth, |n, b| {
        if !store.has_black(n) {
            return;
        }
        let v = store.value(n).unwrap_or(f64::NAN);
        let mut lo = [0u32; MAX_DIM];
        let mut ext = [0u32; MAX_DIM];
        for a in 0..k {
            lo[a] = b.lo[a] >> shift;
            ext[a] = (space.extent(b.level, a) >> shift).max(1);
        }
        for_box(k, &lo, &ext, |c| g.set(c, Some(v)));
    });
    Ok(g)
}

impl<T> Grid<T> {
    pub fn map<U>(self, f: impl Fn(T) -> U) -> Grid<U> {
        Grid { k: self.k, side: self.side, cells: self.cells.into_iter().map(f).collect() }
    }
}

/// Call `f` on every integer point of the box `lo .. lo+ext`.
pub fn for_box(k: usize, lo: &Coords, ext: &Coords, mut f: impl FnMut(&[u32])) {
    let mut c = *lo;
    loop {
        f(&c[..k]);
        let mut a = 0;
        loop {
            if a == k {
                return;
            }
            c[a] += 1;
            if c[a] < lo[a] + ext[a] {
                break;
            }
            c[a] = lo[a];
            a += 1;
        }
    }
}

/// Build a tree in space `(grid.k, p)` from an occupancy grid of side `2^p`.
pub fn build_from_grid(store: &mut Store, grid: &Grid<bool>) -> Result<(NodeRef, SpaceSpec)> {
    let p = grid.side.trailing_zeros();
    let space = SpaceSpec::new(grid.k as u32, p)?;
    let root = build_cells(store, &space, p, |c| if *grid.get(c) { NodeRef::BLACK } else { NodeRef::WHITE })?;
    Ok((root, space))
}

/// Build a pyramid from a grid of optional values.
pub fn build_from_values(store: &mut Store, grid: &Grid<Option<f64>>) -> Result<(NodeRef, SpaceSpec)> {
    let p = grid.side.trailing_zeros();
    let space = SpaceSpec::new(grid.k as u32, p)?;
    let mut leaves = Vec::with_capacity(grid.len());
    for v in &grid.cells {
        leaves.push(match v {
            Some(x) => store.valued(*x),
            None => NodeRef::WHITE,
        });
    }
    let root = build_cells(store, &space, p, |c| leaves[grid.index(c)])?;
    Ok((root, space))
}

/// Rewrite cells at precision `p`: `changes` maps cell codes to new leaves.
///
/// Subtrees containing no change are shared unchanged.
pub fn apply_cells(
    store: &mut Store,
    root: NodeRef,
    space: &SpaceSpec,
    precision: u32,
    changes: &BTreeMap<u64, NodeRef>,
) -> Result<NodeRef> {
    let depth = space.depth_at(precision)?;
    fn rec(
        store: &mut Store,
        n: NodeRef,
        level: u32,
        code: u64,
        depth: u32,
        changes: &BTreeMap<u64, NodeRef>,
    ) -> NodeRef {
        let shift = depth - level;
        let lo = code << shift;
        let hi = (code + 1) << shift;
        if changes.range(lo..hi).next().is_none() {
            return n;
        }
        if level == depth {
            return changes[&code];
        }
        let (l, r) = store.split(n);
        let nl = rec(store, l, level + 1, code << 1, depth, changes);
        let nr = rec(store, r, level + 1, (code << 1) | 1, depth, changes);
        store.join(nl, nr)
    }
    let cut_root = assert_at(store, root, space, precision)?;
    Ok(rec(store, cut_root, 0, 0, depth, changes))
}

/// Number of cells at precision `p` covered by black leaves.
pub fn mass(store: &Store, root: NodeRef, space: &SpaceSpec, precision: u32) -> Result<u128> {
    let depth = space.depth_at(precision)?;
    let mut total = 0u128;
    for_each_leaf(store, root, space, depth, |n, b| {
        if store.has_black(n) {
            total += 1u128 << (depth - b.level);
        }
    });
    Ok(total)
}

/// Coordinates (precision `p`) of every black cell, in path order.
pub fn black_cells(store: &Store, root: NodeRef, space: &SpaceSpec, precision: u32) -> Result<Vec<Coords>> {
    let depth = space.depth_at(precision)?;
    let mut out = Vec::new();
    for_each_leaf(store, root, space, depth, |n, b| {
        if !store.has_black(n) {
            return;
        }
        let first = b.code << (depth - b.level);
        let count = 1u64 << (depth - b.level);
        for code in first..first + count {
            out.push(super::space::code_cell(space, precision, code));
        }
    });
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn add_forced_path() {
        let mut s = Store::new();
        let sp = SpaceSpec::new(2, 1).unwrap();
        let t = add_cell(&mut s, NodeRef::WHITE, &sp, &[0, 0], None).unwrap();
        let (l, r) = s.children(t).unwrap();
        assert_eq!(r, NodeRef::WHITE);
        assert_eq!(s.children(l), Some((NodeRef::BLACK, NodeRef::WHITE)));
    }

    #[test]
    fn full_set_merges_to_black() {
        let mut s = Store::new();
        let sp = SpaceSpec::new(2, 1).unwrap();
        let mut t = NodeRef::WHITE;
        for c in [[0, 0], [1, 0], [0, 1], [1, 1]] {
            t = add_cell(&mut s, t, &sp, &c, None).unwrap();
        }
        assert_eq!(t, NodeRef::BLACK);
    }

    #[test]
    fn real_coordinates_quantize() {
        let mut s = Store::new();
        let sp = SpaceSpec::new(2, 8).unwrap();
        let a = add_point(&mut s, NodeRef::WHITE, &sp, &[0.25, 0.75], None).unwrap();
        let b = add_cell(&mut s, NodeRef::WHITE, &sp, &[64, 192], None).unwrap();
        assert_eq!(a, b);
        let c = add_point(&mut s, NodeRef::WHITE, &sp, &[1.0, 1.0], None).unwrap();
        let d = add_cell(&mut s, NodeRef::WHITE, &sp, &[255, 255], None).unwrap();
        assert_eq!(c, d);
        assert!(add_cell(&mut s, NodeRef::WHITE, &sp, &[256, 0], None).is_err());
        assert!(add_point(&mut s, NodeRef::WHITE, &sp, &[-0.1, 0.0], None).is_err());
    }

    #[test]
    fn pyramid_readd_overwrites() {
        let mut s = Store::new();
        let sp = SpaceSpec::new(1, 2).unwrap();
        let t = add_cell(&mut s, NodeRef::WHITE, &sp, &[1], Some(0.5)).unwrap();
        let t = add_cell(&mut s, t, &sp, &[1], Some(0.25)).unwrap();
        let expect = add_cell(&mut s, NodeRef::WHITE, &sp, &[1], Some(0.25)).unwrap();
        assert_eq!(t, expect);
    }

    #[test]
    fn upper_hull_assertion() {
        let mut s = Store::new();
        let sp = SpaceSpec::new(1, 2).unwrap();
        let t = add_cell(&mut s, NodeRef::WHITE, &sp, &[1], None).unwrap();
        let a = assert_at(&mut s, t, &sp, 1).unwrap();
        assert_eq!(s.children(a), Some((NodeRef::BLACK, NodeRef::WHITE)));
    }

    #[test]
    fn raster_round_trip() {
        let mut s = Store::new();
        let sp = SpaceSpec::new(2, 1).unwrap();
        let g = rasterize(&s, NodeRef::BLACK, &sp, 1).unwrap();
        assert!(g.cells.iter().all(|&b| b));
        let g = rasterize(&s, NodeRef::WHITE, &sp, 1).unwrap();
        assert!(g.cells.iter().all(|&b| !b));
        let sp = SpaceSpec::new(2, 3).unwrap();
        let t = add_cell(&mut s, NodeRef::WHITE, &sp, &[5, 2], None).unwrap();
        let g = rasterize(&s, t, &sp, 3).unwrap();
        assert!(*g.get(&[5, 2]));
        assert_eq!(g.cells.iter().filter(|&&b| b).count(), 1);
        let (t2, sp2) = build_from_grid(&mut s, &g).unwrap();
        assert_eq!((t2, sp2), (t, sp));
    }

    #[test]
    fn grid_guard_rejects_large() {
        let s = Store::new();
        let sp = SpaceSpec::new(3, 9).unwrap();
        assert_eq!(rasterize(&s, NodeRef::BLACK, &sp, 9), Err(Error::GridTooLarge(27)));
    }

    #[test]
    fn apply_cells_recolours() {
        let mut s = Store::new();
        let sp = SpaceSpec::new(2, 2).unwrap();
        let mut ch = BTreeMap::new();
        ch.insert(cell_code(&sp, 2, &[1, 1]), NodeRef::WHITE);
        let t = apply_cells(&mut s, NodeRef::BLACK, &sp, 2, &ch).unwrap();
        assert_eq!(mass(&s, t, &sp, 2).unwrap(), 15);
        let g = rasterize(&s, t, &sp, 2).unwrap();
        assert!(!*g.get(&[1, 1]));
    }
}
