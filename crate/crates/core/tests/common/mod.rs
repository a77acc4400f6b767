//! Dense-grid oracles shared by the integration tests.
#![allow(dead_code)]

use std::collections::HashMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use regtree::attributes::{eigen_frame, eigen_tree, moments};
use regtree::setops::exclude;
use regtree::tree::{build_from_grid, mass};
use regtree::tree::{Coords, Grid, MAX_DIM};
use regtree::Metric;
use regtree::Store;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// A random set: a few boxes plus salt noise, so that both large leaves and
/// isolated cells occur.
pub fn random_grid(rng: &mut ChaCha8Rng, k: usize, side: usize) -> Grid<bool> {
    let mut g = Grid::new(k, side, false);
    let boxes = rng.gen_range(0..4);
    for _ in 0..boxes {
        let mut lo = [0u32; MAX_DIM];
        let mut ext = [0u32; MAX_DIM];
        for a in 0..k {
            lo[a] = rng.gen_range(0..side as u32);
            ext[a] = rng.gen_range(1..=(side as u32 - lo[a]));
        }
        regtree::tree::for_box(k, &lo, &ext, |c| g.set(c, true));
    }
    let noise: f64 = rng.gen_range(0.0..0.3);
    for i in 0..g.len() {
        if rng.gen_bool(noise) {
            let v = !g.cells[i];
            g.cells[i] = v;
        }
    }
    g
}

/// In-grid neighbours of `c` and the number of neighbours outside the grid.
pub fn neighbours(k: usize, side: usize, c: &[u32], metric: Metric) -> (Vec<Coords>, u32) {
    let mut inside = Vec::new();
    let mut outside = 0;
    let total = 3usize.pow(k as u32);
    for m in 0..total {
        let mut d = [0i64; MAX_DIM];
        let mut x = m;
        let mut nonzero = 0;
        for v in d.iter_mut().take(k) {
            *v = (x % 3) as i64 - 1;
            x /= 3;
            if *v != 0 {
                nonzero += 1;
            }
        }
        if nonzero == 0 || (metric == Metric::D1 && nonzero != 1) {
            continue;
        }
        let mut n = [0u32; MAX_DIM];
        let mut ok = true;
        for a in 0..k {
            let v = c[a] as i64 + d[a];
            if v < 0 || v >= side as i64 {
                ok = false;
            } else {
                n[a] = v as u32;
            }
        }
        if ok {
            inside.push(n);
        } else {
            outside += 1;
        }
    }
    (inside, outside)
}

fn each_cell(g: &Grid<bool>) -> impl Iterator<Item = (usize, Coords)> + '_ {
    (0..g.len()).map(move |i| (i, g.coords(i)))
}

pub fn boundary(g: &Grid<bool>, metric: Metric) -> Grid<bool> {
    let mut out = Grid::new(g.k, g.side, false);
    for (i, c) in each_cell(g) {
        if g.cells[i] {
            let (ns, _) = neighbours(g.k, g.side, &c[..g.k], metric);
            out.cells[i] = ns.iter().any(|n| !*g.get(&n[..g.k]));
        }
    }
    out
}

pub fn erode(g: &Grid<bool>, metric: Metric) -> Grid<bool> {
    let b = boundary(g, metric);
    Grid { k: g.k, side: g.side, cells: g.cells.iter().zip(&b.cells).map(|(&s, &b)| s && !b).collect() }
}

pub fn dilate(g: &Grid<bool>, metric: Metric) -> Grid<bool> {
    let mut out = g.clone();
    for (i, c) in each_cell(g) {
        if !g.cells[i] {
            let (ns, _) = neighbours(g.k, g.side, &c[..g.k], metric);
            out.cells[i] = ns.iter().any(|n| *g.get(&n[..g.k]));
        }
    }
    out
}

pub fn median(g: &Grid<bool>, metric: Metric) -> Grid<bool> {
    let mut out = g.clone();
    for (i, c) in each_cell(g) {
        let (ns, _) = neighbours(g.k, g.side, &c[..g.k], metric);
        let total = ns.len() as u32;
        let black = ns.iter().filter(|n| *g.get(&n[..g.k])).count() as u32;
        let white = total - black;
        if g.cells[i] && 2 * white > total {
            out.cells[i] = false;
        }
        if !g.cells[i] && 2 * black > total {
            out.cells[i] = true;
        }
    }
    out
}

/// Flood-fill component labels, numbered in grid order.
pub fn flood_labels(g: &Grid<bool>, metric: Metric) -> Vec<Option<usize>> {
    let mut labels = vec![None; g.len()];
    let mut next = 0;
    for start in 0..g.len() {
        if !g.cells[start] || labels[start].is_some() {
            continue;
        }
        labels[start] = Some(next);
        let mut stack = vec![start];
        while let Some(i) = stack.pop() {
            let c = g.coords(i);
            for n in neighbours(g.k, g.side, &c[..g.k], metric).0 {
                let j = g.index(&n[..g.k]);
                if g.cells[j] && labels[j].is_none() {
                    labels[j] = Some(next);
                    stack.push(j);
                }
            }
        }
        next += 1;
    }
    labels
}

/// True when the two labelings induce the same partition of the same cells.
pub fn same_partition(oracle: &[Option<usize>], found: &[Option<f64>]) -> bool {
    let mut fwd: HashMap<usize, u64> = HashMap::new();
    let mut back: HashMap<u64, usize> = HashMap::new();
    for (o, f) in oracle.iter().zip(found) {
        match (o, f) {
            (None, None) => {}
            (Some(o), Some(f)) => {
                let fb = f.to_bits();
                if *fwd.entry(*o).or_insert(fb) != fb || *back.entry(fb).or_insert(*o) != *o {
                    return false;
                }
            }
            _ => return false,
        }
    }
    true
}

pub fn count(g: &Grid<bool>) -> usize {
    g.cells.iter().filter(|&&b| b).count()
}

pub fn subset(a: &Grid<bool>, b: &Grid<bool>) -> bool {
    a.cells.iter().zip(&b.cells).all(|(&x, &y)| !x || y)
}

/// Column scan: a cell is in the hypograph when some cell at or above it on
/// the same line along `axis` is black.
pub fn scan(g: &Grid<bool>, axis: usize, hypo: bool) -> Grid<bool> {
    let mut out = Grid::new(g.k, g.side, false);
    for i in 0..g.len() {
        let c = g.coords(i);
        let mut d = c;
        out.cells[i] = (0..g.side as u32).any(|t| {
            d[axis] = t;
            (if hypo { t >= c[axis] } else { t <= c[axis] }) && *g.get(&d[..g.k])
        });
    }
    out
}

/// Moment with exponents `e`, summed cell by cell.
pub fn brute(g: &Grid<bool>, e: &[u8]) -> f64 {
    let mut total = 0.0;
    for i in 0..g.len() {
        if g.cells[i] {
            let c = g.coords(i);
            total += e.iter().enumerate().map(|(a, &n)| f64::from(c[a]).powi(i32::from(n))).product::<f64>();
        }
    }
    total
}

/// A few random boxes kept near the middle so that a quarter turn stays
/// inside the space.
pub fn blob(rng: &mut ChaCha8Rng, side: u32) -> Grid<bool> {
    let mut g = Grid::new(2, side as usize, false);
    let (lo_min, lo_max) = (side / 4, side / 2);
    for _ in 0..3 {
        let lo = [rng.gen_range(lo_min..lo_max), rng.gen_range(lo_min..lo_max), 0, 0, 0, 0, 0, 0];
        let mut ext = [0u32; MAX_DIM];
        ext[0] = rng.gen_range(2..=(3 * side / 4 - lo[0]));
        ext[1] = rng.gen_range(2..=(3 * side / 4 - lo[1]));
        regtree::tree::for_box(2, &lo, &ext, |c| g.set(c, true));
    }
    g
}

pub fn quarter_turn(g: &Grid<bool>) -> Grid<bool> {
    let n = g.side as u32;
    let mut out = Grid::new(2, g.side, false);
    for i in 0..g.len() {
        if g.cells[i] {
            let c = g.coords(i);
            out.set(&[n - 1 - c[1], c[0]], true);
        }
    }
    out
}

pub type Pt = (i64, i64);

pub fn turn(o: Pt, a: Pt, b: Pt) -> i128 {
    ((a.0 - o.0) as i128) * ((b.1 - o.1) as i128) - ((a.1 - o.1) as i128) * ((b.0 - o.0) as i128)
}

/// Gift wrapping over the leftmost and rightmost black cell of every row,
/// in doubled coordinates.
pub fn jarvis(g: &Grid<bool>) -> Vec<Pt> {
    let mut pts = Vec::new();
    for y in 0..g.side as u32 {
        let xs: Vec<u32> = (0..g.side as u32).filter(|&x| *g.get(&[x, y])).collect();
        if let (Some(&a), Some(&b)) = (xs.first(), xs.last()) {
            pts.push((2 * a as i64 + 1, 2 * y as i64 + 1));
            pts.push((2 * b as i64 + 1, 2 * y as i64 + 1));
        }
    }
    pts.sort_unstable();
    pts.dedup();
    if pts.len() < 3 {
        return pts;
    }
    let start = pts[0];
    let mut hull = vec![start];
    let mut cur = start;
    loop {
        let mut next = pts[0];
        for &p in &pts {
            if next == cur {
                next = p;
                continue;
            }
            let t = turn(cur, next, p);
            let far = |q: Pt| (q.0 - cur.0).pow(2) + (q.1 - cur.1).pow(2);
            if t < 0 || (t == 0 && far(p) > far(next)) {
                next = p;
            }
        }
        if next == start {
            break;
        }
        hull.push(next);
        cur = next;
    }
    hull
}

pub fn inside(h: &[Pt], p: Pt) -> bool {
    match h.len() {
        0 => false,
        1 => h[0] == p,
        n => (0..n).all(|i| {
            let (a, b) = (h[i], h[(i + 1) % n]);
            let t = turn(a, b, p);
            if n == 2 {
                t == 0 && p.0 >= a.0.min(b.0) && p.0 <= a.0.max(b.0) && p.1 >= a.1.min(b.1) && p.1 <= a.1.max(b.1)
            } else {
                t >= 0
            }
        }),
    }
}

pub fn brute_hull(g: &Grid<bool>) -> Grid<bool> {
    let h = jarvis(g);
    let mut out = Grid::new(2, g.side, false);
    for i in 0..g.len() {
        let c = g.coords(i);
        out.cells[i] = inside(&h, (2 * c[0] as i64 + 1, 2 * c[1] as i64 + 1));
    }
    out
}

/// XOR mass between the eigen trees of `g` and its quarter turn, relative to
/// the first; `None` for degenerate frames.
pub fn eigen_xor_ratio(g: &Grid<bool>, normalize: bool) -> Option<f64> {
    let rot = quarter_turn(g);
    let mut s = Store::new();
    let (a, sp) = build_from_grid(&mut s, g).unwrap();
    let (b, _) = build_from_grid(&mut s, &rot).unwrap();
    let r = sp.r();
    let fa = eigen_frame(&moments(&s, a, &sp, r).unwrap()).unwrap();
    let fb = eigen_frame(&moments(&s, b, &sp, r).unwrap()).unwrap();
    if fa.degenerate || fb.degenerate {
        return None;
    }
    let ea = eigen_tree(&mut s, a, &sp, &fa, r, r, normalize).unwrap();
    let eb = eigen_tree(&mut s, b, &sp, &fb, r, r, normalize).unwrap();
    let x = exclude(&mut s, ea, eb, &sp);
    let base = mass(&s, ea, &sp, r).unwrap();
    Some(mass(&s, x, &sp, r).unwrap() as f64 / base as f64)
}
