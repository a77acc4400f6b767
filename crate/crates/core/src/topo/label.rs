//! Connected components, segment forests and radiometric classification.

use std::collections::{BTreeSet, HashMap};

use super::adjacency::{leaf_pairs, search_across, Policy};
use crate::error::{Error, Result};
use crate::tree::{assert_at, for_each_leaf, Block, Metric, Node, NodeRef, SpaceSpec, Store};

/// Labeling strategy.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LabelMethod {
    /// Union-find over the explicit list of leaf adjacencies.
    Bucket,
    /// Bottom-up merging across each split plane, keeping minimal labels.
    Growing,
}

/// A labeled pyramid: each black leaf carries its component number.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Labeling {
    pub tree: NodeRef,
    /// Labels run from 1 to `count`.
    pub count: usize,
}

struct Leaves {
    blocks: Vec<Block>,
    index: HashMap<(u32, u64), usize>,
}

fn black_leaves(store: &Store, set: NodeRef, space: &SpaceSpec, depth: u32) -> Leaves {
    let mut blocks = Vec::new();
    for_each_leaf(store, set, space, depth, |n, b| {
        if store.has_black(n) {
            blocks.push(*b);
        }
    });
    let index = blocks.iter().enumerate().map(|(i, b)| ((b.level, b.code), i)).collect();
    Leaves { blocks, index }
}

fn find(parent: &mut [usize], mut i: usize) -> usize {
    while parent[i] != i {
        parent[i] = parent[parent[i]];
        i = parent[i];
    }
    i
}

fn bucket(store: &Store, set: NodeRef, space: &SpaceSpec, depth: u32, metric: Metric, leaves: &Leaves) -> Vec<usize> {
    let mut parent: Vec<usize> = (0..leaves.blocks.len()).collect();
    for (a, b) in leaf_pairs(store, set, space, depth, metric) {
        let ra = find(&mut parent, leaves.index[&a]);
        let rb = find(&mut parent, leaves.index[&b]);
        if ra != rb {
            parent[ra.max(rb)] = ra.min(rb);
        }
    }
    (0..parent.len()).map(|i| find(&mut parent, i)).collect()
}

struct Grower<'a> {
    store: &'a Store,
    space: &'a SpaceSpec,
    depth: u32,
    metric: Metric,
    leaves: &'a Leaves,
    labels: Vec<usize>,
    next: usize,
}

impl Grower<'_> {
    /// Label the subtree, returning its range of black-leaf indices.
    fn grow(&mut self, n: NodeRef, b: Block) -> (usize, usize) {
        let start = self.next;
        if self.store.is_terminal(n) || b.level >= self.depth {
            if self.store.has_black(n) {
                self.next += 1;
            }
            return (start, self.next);
        }
        let (l, r) = self.store.split(n);
        let (bl, br) = b.children(self.space);
        self.grow(l, bl);
        self.grow(r, br);
        let end = self.next;
        // Merge classes touching across the split plane, keeping the minimum.
        let mut link: HashMap<usize, usize> = HashMap::new();
        fn root(link: &mut HashMap<usize, usize>, mut x: usize) -> usize {
            while let Some(&p) = link.get(&x) {
                if p == x {
                    break;
                }
                x = p;
            }
            x
        }
        let (labels, index) = (&self.labels, &self.leaves.index);
        let mut pairs = Vec::new();
        search_across(self.store, n, b, self.space, self.depth, self.metric, Policy::Leaves, |h| {
            pairs.push((labels[index[&(h.a.level, h.a.code)]], labels[index[&(h.b.level, h.b.code)]]));
        });
        for (x, y) in pairs {
            let (rx, ry) = (root(&mut link, x), root(&mut link, y));
            if rx != ry {
                link.insert(rx.max(ry), rx.min(ry));
            }
        }
        if !link.is_empty() {
            for i in start..end {
                let l = self.labels[i];
                if link.contains_key(&l) {
                    self.labels[i] = root(&mut link, l);
                }
            }
        }
        (start, end)
    }
}

fn growing(store: &Store, set: NodeRef, space: &SpaceSpec, depth: u32, metric: Metric, leaves: &Leaves) -> Vec<usize> {
    let labels = (0..leaves.blocks.len()).collect();
    let mut g = Grower { store, space, depth, metric, leaves, labels, next: 0 };
    g.grow(set, Block::root());
    g.labels
}

/// Label the metric-connected components of the support at `precision`.
///
/// Labels are renumbered 1..n in order of first appearance along the tree.
pub fn components(
    store: &mut Store,
    tree: NodeRef,
    space: &SpaceSpec,
    metric: Metric,
    precision: u32,
    method: LabelMethod,
) -> Result<Labeling> {
    let depth = space.depth_at(precision)?;
    let cut = assert_at(store, tree, space, precision)?;
    let set = store.support(cut);
    let leaves = black_leaves(store, set, space, depth);
    let raw = match method {
        LabelMethod::Bucket => bucket(store, set, space, depth, metric, &leaves),
        LabelMethod::Growing => growing(store, set, space, depth, metric, &leaves),
    };
    let mut renumber = HashMap::new();
    let labels: Vec<f64> = raw
        .iter()
        .map(|&l| {
            let next = renumber.len() + 1;
            *renumber.entry(l).or_insert(next) as f64
        })
        .collect();
    let count = renumber.len();
    let mut it = labels.into_iter();
    let tree = relabel(store, set, 0, depth, &mut it);
    Ok(Labeling { tree, count })
}

/// Replace black leaves, in preorder, by values drawn from `values`.
fn relabel(store: &mut Store, n: NodeRef, level: u32, depth: u32, values: &mut impl Iterator<Item = f64>) -> NodeRef {
    if store.is_terminal(n) || level >= depth {
        if store.has_black(n) {
            let v = values.next().expect("one label per black leaf");
            return store.valued(v);
        }
        return NodeRef::WHITE;
    }
    let (l, r) = store.split(n);
    let nl = relabel(store, l, level + 1, depth, values);
    let nr = relabel(store, r, level + 1, depth, values);
    store.join(nl, nr)
}

fn labels_of(store: &Store, n: NodeRef) -> BTreeSet<u64> {
    let mut out = BTreeSet::new();
    let mut stack = vec![n];
    let mut seen = std::collections::HashSet::new();
    while let Some(m) = stack.pop() {
        if !seen.insert(m) {
            continue;
        }
        match store.node(m) {
            Node::Valued(v) => {
                out.insert(v.to_bits());
            }
            Node::Internal { left, right, .. } => {
                stack.push(left);
                stack.push(right);
            }
            _ => {}
        }
    }
    out
}

/// One unlabeled tree per component, in increasing label order.
///
/// An unlabeled non-empty tree is returned as a single component.
pub fn segment_forest(store: &mut Store, labeled: NodeRef) -> Vec<NodeRef> {
    if labeled == NodeRef::WHITE {
        return Vec::new();
    }
    if !store.is_valued(labeled) {
        return vec![labeled];
    }
    let mut labels: Vec<f64> = labels_of(store, labeled).into_iter().map(f64::from_bits).collect();
    labels.sort_by(f64::total_cmp);
    labels
        .into_iter()
        .map(|l| {
            let mut memo = HashMap::new();
            store.map_leaves(labeled, &mut memo, &mut |s, leaf| match s.value(leaf) {
                Some(v) if v == l => NodeRef::BLACK,
                _ => NodeRef::WHITE,
            })
        })
        .collect()
}

/// Component `index` of a forest; index 0 is the lowest label.
pub fn extract_component(forest: &[NodeRef], index: usize) -> Result<NodeRef> {
    forest.get(index).copied().ok_or(Error::IndexOutOfRange { index, len: forest.len() })
}

/// Thematic classification of a multi-band image.
///
/// Each band is a pyramid with values in `[0, 1]` over a common support. The
/// response vectors are collected into a radiometric tree over an `m`-space
/// of precision `response_r`; its metric components are the themes, and each
/// support cell is labeled with the theme of its response vector.
pub fn classify(
    store: &mut Store,
    bands: &[NodeRef],
    space: &SpaceSpec,
    metric: Metric,
    response_r: u32,
) -> Result<Labeling> {
    let Some(&first) = bands.first() else {
        return Err(Error::EmptyPyramid);
    };
    let support = store.support(first);
    for &b in &bands[1..] {
        if store.support(b) != support {
            return Err(Error::SupportMismatch);
        }
    }
    let rspace = SpaceSpec::new(bands.len() as u32, response_r)?;
    let mut radio = NodeRef::WHITE;
    let mut seen = BTreeSet::new();
    let mut cells = Vec::new();
    visit_responses(store, bands.to_vec(), 0, space.depth(), &mut |v| cells.push(v.to_vec()));
    for v in cells {
        let c = crate::tree::quantize(&rspace, &v.iter().map(|x| x.clamp(0.0, 1.0)).collect::<Vec<_>>())?;
        if seen.insert(c) {
            radio = crate::tree::add_cell(store, radio, &rspace, &c[..rspace.dim()], None)?;
        }
    }
    let themes = components(store, radio, &rspace, metric, response_r, LabelMethod::Bucket)?;
    let tree = paint_themes(store, bands.to_vec(), 0, space.depth(), &rspace, themes.tree)?;
    Ok(Labeling { tree, count: themes.count })
}

/// Call `f` with the response vector of every black region where all bands
/// are terminal.
fn visit_responses(store: &Store, nodes: Vec<NodeRef>, level: u32, depth: u32, f: &mut dyn FnMut(&[f64])) {
    if nodes[0] == NodeRef::WHITE {
        return;
    }
    if level >= depth || nodes.iter().all(|&n| store.is_terminal(n)) {
        let v: Vec<f64> = nodes.iter().map(|&n| store.value(n).unwrap_or(1.0)).collect();
        f(&v);
        return;
    }
    let (l, r): (Vec<_>, Vec<_>) = nodes.iter().map(|&n| store.split(n)).unzip();
    visit_responses(store, l, level + 1, depth, f);
    visit_responses(store, r, level + 1, depth, f);
}

fn theme_of(store: &Store, themes: NodeRef, rspace: &SpaceSpec, v: &[f64]) -> Result<f64> {
    let c = crate::tree::quantize(rspace, &v.iter().map(|x| x.clamp(0.0, 1.0)).collect::<Vec<_>>())?;
    let code = crate::tree::cell_code(rspace, rspace.r(), &c[..rspace.dim()]);
    let depth = rspace.depth();
    let mut n = themes;
    for level in 0..depth {
        if store.is_terminal(n) {
            break;
        }
        let (l, r) = store.split(n);
        n = if (code >> (depth - 1 - level)) & 1 == 0 { l } else { r };
    }
    Ok(store.value(n).expect("every response cell is labeled"))
}

fn paint_themes(
    store: &mut Store,
    nodes: Vec<NodeRef>,
    level: u32,
    depth: u32,
    rspace: &SpaceSpec,
    themes: NodeRef,
) -> Result<NodeRef> {
    if nodes[0] == NodeRef::WHITE {
        return Ok(NodeRef::WHITE);
    }
    if level >= depth || nodes.iter().all(|&n| store.is_terminal(n)) {
        let v: Vec<f64> = nodes.iter().map(|&n| store.value(n).unwrap_or(1.0)).collect();
        let t = theme_of(store, themes, rspace, &v)?;
        return Ok(store.valued(t));
    }
    let (l, r): (Vec<_>, Vec<_>) = nodes.iter().map(|&n| store.split(n)).unzip();
    let nl = paint_themes(store, l, level + 1, depth, rspace, themes)?;
    let nr = paint_themes(store, r, level + 1, depth, rspace, themes)?;
    Ok(store.join(nl, nr))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::setops;
    use crate::tree::{build_from_grid, build_from_values, mass, Grid};

    fn build(s: &mut Store, cells: &[[u32; 2]]) -> (NodeRef, SpaceSpec) {
        let mut g = Grid::new(2, 8, false);
        for c in cells {
            g.set(c, true);
        }
        build_from_grid(s, &g).unwrap()
    }

    #[test]
    fn diagonal_pair_depends_on_metric() {
        let mut s = Store::new();
        let (t, sp) = build(&mut s, &[[2, 2], [3, 3]]);
        for m in [LabelMethod::Bucket, LabelMethod::Growing] {
            assert_eq!(components(&mut s, t, &sp, Metric::DInf, 3, m).unwrap().count, 1);
            assert_eq!(components(&mut s, t, &sp, Metric::D1, 3, m).unwrap().count, 2);
        }
    }

    #[test]
    fn forest_partitions_support() {
        let mut s = Store::new();
        let (t, sp) = build(&mut s, &[[0, 0], [1, 0], [5, 5], [7, 1], [7, 2]]);
        let lab = components(&mut s, t, &sp, Metric::D1, 3, LabelMethod::Growing).unwrap();
        assert_eq!(lab.count, 3);
        let forest = segment_forest(&mut s, lab.tree);
        assert_eq!(forest.len(), 3);
        let mut u = NodeRef::WHITE;
        let mut total = 0;
        for &f in &forest {
            total += mass(&s, f, &sp, 3).unwrap();
            u = setops::union(&mut s, u, f, &sp);
        }
        assert_eq!(u, t);
        assert_eq!(total, 5);
        assert!(extract_component(&forest, 3).is_err());
    }

    #[test]
    fn classify_two_themes() {
        let mut s = Store::new();
        let mut g = Grid::new(2, 4, None);
        for i in 0..16 {
            let c = g.coords(i);
            g.cells[i] = Some(if (c[0] + c[1]) % 2 == 0 { 0.1 } else { 0.9 });
        }
        let (band, sp) = build_from_values(&mut s, &g).unwrap();
        let lab = classify(&mut s, &[band], &sp, Metric::D1, 4).unwrap();
        assert_eq!(lab.count, 2);
        let constant = s.valued(0.5);
        assert_eq!(classify(&mut s, &[constant], &sp, Metric::D1, 4).unwrap().count, 1);
        assert_eq!(classify(&mut s, &[band, NodeRef::BLACK], &sp, Metric::D1, 4).unwrap().count, 2);
        let other = s.valued(0.5);
        let half = s.join(other, NodeRef::WHITE);
        assert_eq!(classify(&mut s, &[band, half], &sp, Metric::D1, 4), Err(Error::SupportMismatch));
    }
}
