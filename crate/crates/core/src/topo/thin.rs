//! Thinning to a median set, and intrinsic dimension.

use std::collections::{BTreeMap, HashMap};

use super::adjacency::{search, Policy};
use super::morph::border_cells;
use crate::error::{Error, Result};
use crate::tree::{apply_cells, assert_at, cell_code, for_each_leaf, Coords, Metric, NodeRef, SpaceSpec, Store};

const LEFT: u32 = 1;
const RIGHT: u32 = 2;

/// Per-cell contacts with the background: two bits per axis, `LEFT` when the
/// lower neighbour is background and `RIGHT` for the upper one. Unlike the
/// morphological operators, thinning sees the outside of the hypercube as
/// background, so that a set lying along a face thins like any other.
fn background_marks(
    store: &mut Store,
    tree: NodeRef,
    space: &SpaceSpec,
    precision: u32,
) -> Result<(NodeRef, HashMap<u64, u32>)> {
    let k = space.dim();
    let c = contrast_marks(store, tree, space, precision)?;
    let (set, mut marks, border) = c;
    let max = (1u64 << precision) - 1;
    for cell in border {
        let code = cell_code(space, precision, &cell[..k]);
        let m = marks.entry(code).or_insert(0);
        for (a, &x) in cell[..k].iter().enumerate() {
            if x == 0 {
                *m |= LEFT << (2 * a);
            }
            if u64::from(x) == max {
                *m |= RIGHT << (2 * a);
            }
        }
    }
    Ok((set, marks))
}

type Marks = (NodeRef, HashMap<u64, u32>, Vec<Coords>);

fn contrast_marks(store: &mut Store, tree: NodeRef, space: &SpaceSpec, precision: u32) -> Result<Marks> {
    let depth = space.depth_at(precision)?;
    let cut = assert_at(store, tree, space, precision)?;
    let set = store.support(cut);
    let k = space.dim();
    let mut marks = HashMap::new();
    search(store, set, space, depth, Metric::D1, Policy::Contrast, |h| {
        let axis = h.face_axis(k).expect("d1 contacts cross one face");
        if h.a_black {
            *marks.entry(h.a.code).or_insert(0) |= RIGHT << (2 * axis);
        } else {
            *marks.entry(h.b.code).or_insert(0) |= LEFT << (2 * axis);
        }
    });
    let border = border_cells(store, set, space, precision)?;
    Ok((set, marks, border))
}

fn connex(m: u32, k: usize) -> usize {
    (0..k).filter(|a| (m >> (2 * a)) & 3 == 3).count()
}

fn phase(
    store: &mut Store,
    tree: NodeRef,
    space: &SpaceSpec,
    cnxdeg: usize,
    side: u32,
    precision: u32,
) -> Result<(NodeRef, usize)> {
    let k = space.dim();
    let (set, marks) = background_marks(store, tree, space, precision)?;
    let mut changes = BTreeMap::new();
    for (&code, &m) in &marks {
        let front = (0..k).any(|a| (m >> (2 * a)) & side != 0);
        if front && connex(m, k) < cnxdeg {
            changes.insert(code, NodeRef::WHITE);
        }
    }
    let n = changes.len();
    Ok((apply_cells(store, set, space, precision, &changes)?, n))
}

fn check_target(space: &SpaceSpec, target_dim: u32) -> Result<usize> {
    if target_dim >= space.k() {
        return Err(Error::TargetDimension { target: target_dim, k: space.k() });
    }
    Ok((space.k() - target_dim) as usize)
}

/// One thinning pass: remove weakly connected cells facing the background on
/// the lower side, then (with contacts recomputed) on the upper side.
///
/// A cell is weakly connected when fewer than `k - target_dim` axes have
/// background on both sides of it. Returns the thinned set and the number of
/// removed cells.
pub fn thin_step(
    store: &mut Store,
    tree: NodeRef,
    space: &SpaceSpec,
    target_dim: u32,
    precision: u32,
) -> Result<(NodeRef, usize)> {
    let cnxdeg = check_target(space, target_dim)?;
    let (t, left) = phase(store, tree, space, cnxdeg, LEFT, precision)?;
    let (t, right) = phase(store, t, space, cnxdeg, RIGHT, precision)?;
    Ok((t, left + right))
}

/// Thin until nothing more is removed.
pub fn median_set(
    store: &mut Store,
    tree: NodeRef,
    space: &SpaceSpec,
    target_dim: u32,
    precision: u32,
) -> Result<NodeRef> {
    Ok(median_set_counted(store, tree, space, target_dim, precision)?.0)
}

/// [`median_set`] also reporting the number of thinning passes that removed
/// something.
pub fn median_set_counted(
    store: &mut Store,
    tree: NodeRef,
    space: &SpaceSpec,
    target_dim: u32,
    precision: u32,
) -> Result<(NodeRef, usize)> {
    check_target(space, target_dim)?;
    let mut t = tree;
    let mut passes = 0;
    loop {
        let (next, removed) = thin_step(store, t, space, target_dim, precision)?;
        t = next;
        if removed == 0 {
            return Ok((t, passes));
        }
        passes += 1;
    }
}

/// Largest number of axes along which some black cell has a black neighbour.
pub fn intrinsic_dimension(store: &mut Store, tree: NodeRef, space: &SpaceSpec, precision: u32) -> Result<u32> {
    let depth = space.depth_at(precision)?;
    let k = space.dim();
    let cut = assert_at(store, tree, space, precision)?;
    let set = store.support(cut);
    let shift = space.r() - precision;
    let mut thick = false;
    for_each_leaf(store, set, space, depth, |n, b| {
        if store.has_black(n) && (0..k).all(|a| space.extent(b.level, a) >> shift >= 2) {
            thick = true;
        }
    });
    if thick {
        return Ok(space.k());
    }
    let mut axes: HashMap<u64, u32> = HashMap::new();
    search(store, set, space, depth, Metric::D1, Policy::Cells, |h| {
        let a = h.face_axis(k).expect("d1 contacts cross one face");
        *axes.entry(h.a.code).or_insert(0) |= 1 << a;
        *axes.entry(h.b.code).or_insert(0) |= 1 << a;
    });
    Ok(axes.values().map(|m| m.count_ones()).max().unwrap_or(0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tree::{build_from_grid, rasterize, Grid};

    fn build(s: &mut Store, side: usize, cells: impl IntoIterator<Item = [u32; 2]>) -> (NodeRef, SpaceSpec) {
        let mut g = Grid::new(2, side, false);
        for c in cells {
            g.set(&c, true);
        }
        build_from_grid(s, &g).unwrap()
    }

    #[test]
    fn line_is_its_own_median_set() {
        let mut s = Store::new();
        let (t, sp) = build(&mut s, 8, (1..7).map(|x| [x, 3]));
        let (m, passes) = median_set_counted(&mut s, t, &sp, 1, 3).unwrap();
        assert_eq!(m, t);
        assert_eq!(passes, 0);
    }

    #[test]
    fn block_thins_to_center() {
        let mut s = Store::new();
        let (t, sp) = build(&mut s, 8, (1..4).flat_map(|x| (1..4).map(move |y| [x, y])));
        let m = median_set(&mut s, t, &sp, 1, 3).unwrap();
        let g = rasterize(&s, m, &sp, 3).unwrap();
        assert_eq!(g.cells.iter().filter(|&&b| b).count(), 1);
        assert!(*g.get(&[2, 2]));
    }

    #[test]
    fn white_has_no_passes() {
        let mut s = Store::new();
        let sp = SpaceSpec::new(2, 3).unwrap();
        assert_eq!(median_set_counted(&mut s, NodeRef::WHITE, &sp, 0, 3).unwrap(), (NodeRef::WHITE, 0));
        assert!(median_set(&mut s, NodeRef::WHITE, &sp, 2, 3).is_err());
    }

    #[test]
    fn dimensions() {
        let mut s = Store::new();
        let (p, sp) = build(&mut s, 8, [[3, 3]]);
        assert_eq!(intrinsic_dimension(&mut s, p, &sp, 3).unwrap(), 0);
        let (l, sp) = build(&mut s, 8, (0..8).map(|x| [x, 3]));
        assert_eq!(intrinsic_dimension(&mut s, l, &sp, 3).unwrap(), 1);
        let (b, sp) = build(&mut s, 8, (1..4).flat_map(|x| (1..4).map(move |y| [x, y])));
        assert_eq!(intrinsic_dimension(&mut s, b, &sp, 3).unwrap(), 2);
        assert_eq!(intrinsic_dimension(&mut s, NodeRef::WHITE, &sp, 3).unwrap(), 0);
    }
}
