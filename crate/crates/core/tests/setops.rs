mod common;

use common::*;
use rand::Rng;
use regtree::setops::{self, boolean, il_add, il_boolean, il_create, slice_extract, slice_insert, BoolOp};
use regtree::tree::{build_from_grid, rasterize, Grid};
use regtree::{NodeRef, SpaceSpec, Store};

const BINARY: [BoolOp; 4] = [BoolOp::Union, BoolOp::Intersect, BoolOp::Exclude, BoolOp::Diff];

fn apply(op: BoolOp, a: bool, b: bool) -> bool {
    match op {
        BoolOp::Assert => a,
        BoolOp::Not => !a,
        BoolOp::Union => a || b,
        BoolOp::Intersect => a && b,
        BoolOp::Exclude => a != b,
        BoolOp::Diff => a && !b,
    }
}

fn grid_op(op: BoolOp, a: &Grid<bool>, b: &Grid<bool>) -> Grid<bool> {
    let mut g = a.clone();
    for (i, c) in g.cells.iter_mut().enumerate() {
        *c = apply(op, a.cells[i], b.cells[i]);
    }
    g
}

#[test]
fn boolean_ops_match_grid_oracle() {
    let mut rng = rng(11);
    for case in 0..200 {
        let k = 1 + case % 3;
        let r = rng.gen_range(1..=if k == 3 { 3 } else { 4 });
        let ga = random_grid(&mut rng, k, 1 << r);
        let gb = random_grid(&mut rng, k, 1 << r);
        let mut s = Store::new();
        let (a, sp) = build_from_grid(&mut s, &ga).unwrap();
        let (b, _) = build_from_grid(&mut s, &gb).unwrap();
        let p = r as u32;
        for op in [BoolOp::Assert, BoolOp::Not] {
            let t = boolean(&mut s, op, a, None, &sp, p).unwrap();
            assert_eq!(rasterize(&s, t, &sp, p).unwrap(), grid_op(op, &ga, &ga), "{op:?} case {case}");
        }
        for op in BINARY {
            let t = boolean(&mut s, op, a, Some(b), &sp, p).unwrap();
            assert_eq!(rasterize(&s, t, &sp, p).unwrap(), grid_op(op, &ga, &gb), "{op:?} case {case}");
        }
    }
}

#[test]
fn de_morgan_and_involution() {
    let mut rng = rng(12);
    for case in 0..200 {
        let k = 1 + case % 3;
        let r = rng.gen_range(1..=3);
        let mut s = Store::new();
        let (a, sp) = build_from_grid(&mut s, &random_grid(&mut rng, k, 1 << r)).unwrap();
        let (b, _) = build_from_grid(&mut s, &random_grid(&mut rng, k, 1 << r)).unwrap();
        let not = |s: &mut Store, t| setops::complement(s, t, &sp);
        let na = not(&mut s, a);
        assert_eq!(not(&mut s, na), a, "involution case {case}");
        let nb = not(&mut s, b);
        let u = setops::union(&mut s, a, b, &sp);
        let lhs = not(&mut s, u);
        assert_eq!(lhs, setops::intersect(&mut s, na, nb, &sp), "De Morgan union case {case}");
        let i = setops::intersect(&mut s, a, b, &sp);
        let lhs = not(&mut s, i);
        assert_eq!(lhs, setops::union(&mut s, na, nb, &sp), "De Morgan intersection case {case}");
    }
}

#[test]
fn slices_match_grid_sections() {
    let mut rng = rng(13);
    for case in 0..60 {
        let r = rng.gen_range(1..=3);
        let side = 1usize << r;
        let g = random_grid(&mut rng, 3, side);
        let mut s = Store::new();
        let (t, sp) = build_from_grid(&mut s, &g).unwrap();
        let axis = case % 3;
        let idx = rng.gen_range(0..side as u32);
        let (slice, sub) = slice_extract(&mut s, t, &sp, &[(axis, idx)]).unwrap();
        assert_eq!((sub.k(), sub.r()), (2, r as u32));
        let got = rasterize(&s, slice, &sub, sub.r()).unwrap();
        let mut want = Grid::new(2, side, false);
        for u in 0..side as u32 {
            for v in 0..side as u32 {
                let mut c = [u, v];
                let mut full = vec![0u32; 3];
                let mut rest = c.iter_mut();
                for (a, f) in full.iter_mut().enumerate() {
                    *f = if a == axis { idx } else { *rest.next().unwrap() };
                }
                want.set(&[u, v], *g.get(&full));
            }
        }
        assert_eq!(got, want, "case {case}");
        // Putting the section back changes nothing.
        assert_eq!(slice_insert(&mut s, t, &sp, slice, &[(axis, idx)]).unwrap(), t);
    }
}

#[test]
fn inductive_union_places_points_in_common_frame() {
    let mut rng = rng(14);
    for case in 0..50 {
        let pts: Vec<[f64; 2]> = (0..6).map(|_| [rng.gen_range(0..16) as f64, rng.gen_range(0..16) as f64]).collect();
        let mut s = Store::new();
        let space = SpaceSpec::new(2, 6).unwrap();
        let (mut a, mut fa) = il_create(&pts[0]).unwrap();
        for p in &pts[1..3] {
            (a, fa) = il_add(&mut s, a, &fa, p, &space).unwrap();
        }
        let (mut b, mut fb) = il_create(&pts[3]).unwrap();
        for p in &pts[4..] {
            (b, fb) = il_add(&mut s, b, &fb, p, &space).unwrap();
        }
        let (u, fu) = il_boolean(&mut s, BoolOp::Union, a, &fa, b, &fb, &space, 6).unwrap();
        let side = fu.side().to_f64();
        let min = fu.minspc();
        assert!(side > 0.0 && side.log2().fract() == 0.0, "case {case}");
        for (a, m) in min.iter().enumerate() {
            assert_eq!(m.rem_euclid(side), 0.0, "corner aligned on axis {a}, case {case}");
        }
        // Every point lies in a black cell of the union, nothing else does.
        let cells = regtree::tree::black_cells(&s, u, &space, 6).unwrap();
        let unit = side / 64.0;
        let mut want: Vec<[u32; 2]> = pts
            .iter()
            .map(|p| [((p[0] - min[0]) / unit).floor() as u32, ((p[1] - min[1]) / unit).floor() as u32])
            .collect();
        want.sort_unstable();
        want.dedup();
        let mut got: Vec<[u32; 2]> = cells.iter().map(|c| [c[0], c[1]]).collect();
        got.sort_unstable();
        assert_eq!(got, want, "case {case}");
        assert_ne!(u, NodeRef::WHITE);
    }
}
