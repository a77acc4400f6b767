mod common;

use common::*;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use regtree::tree::{
    build_from_grid, build_from_values, decode, encode, from_kdt, mass, rasterize, rasterize_values, to_kdt, Grid, Node,
};
use regtree::{NodeRef, SpaceSpec, Store};

fn random_values(rng: &mut ChaCha8Rng, k: usize, side: usize) -> Grid<Option<f64>> {
    let mut g = Grid::new(k, side, None);
    let density = rng.gen_range(0.0..1.0);
    let palette: Vec<f64> = (0..rng.gen_range(1..4)).map(|_| rng.gen_range(-4.0..4.0)).collect();
    for c in g.cells.iter_mut() {
        if rng.gen_bool(density) {
            *c = Some(palette[rng.gen_range(0..palette.len())]);
        }
    }
    g
}

fn counts(code: &[u8]) -> (usize, usize) {
    let grey = code.iter().filter(|&&c| c == b'2').count();
    (grey, code.len() - grey)
}

#[test]
fn capacities_for_eight_bits() {
    let caps: Vec<u128> = (1..=4).map(|k| SpaceSpec::new(k, 8).unwrap().capacity()).collect();
    assert_eq!(caps, [256, 65_536, 16_777_216, 4_294_967_296]);
    let s = SpaceSpec::new(2, 9).unwrap();
    assert_eq!(s.cells_per_axis(), 512);
    assert_eq!(s.capacity(), 512 * 512);
}

#[test]
fn codes_round_trip() {
    let mut rng = rng(21);
    for case in 0..1000 {
        let k = 1 + case % 3;
        let r = rng.gen_range(1..=if k == 3 { 3 } else { 4 });
        let mut s = Store::new();
        let (t, sp) = if case % 2 == 0 {
            build_from_grid(&mut s, &random_grid(&mut rng, k, 1 << r)).unwrap()
        } else {
            build_from_values(&mut s, &random_values(&mut rng, k, 1 << r)).unwrap()
        };
        let tc = encode(&s, t, &sp).unwrap();
        let (grey, leaves) = counts(&tc.code);
        assert_eq!(leaves, grey + 1, "case {case}");
        assert_eq!(tc.valued, case % 2 == 1 && t != NodeRef::WHITE);
        let mut fresh = Store::new();
        let back = decode(&mut fresh, &tc).unwrap();
        assert_eq!(encode(&fresh, back, &sp).unwrap(), tc, "case {case}");
        assert_eq!(decode(&mut s, &tc).unwrap(), t, "case {case}");
        let text = decode(&mut s, &from_kdt(&to_kdt(&tc)).unwrap()).unwrap();
        assert_eq!(text, t, "kdt case {case}");
    }
}

#[test]
fn grids_round_trip() {
    let mut rng = rng(22);
    for case in 0..200 {
        let k = 1 + case % 3;
        let r = rng.gen_range(1..=3);
        let mut s = Store::new();
        let g = random_grid(&mut rng, k, 1 << r);
        let (t, sp) = build_from_grid(&mut s, &g).unwrap();
        assert_eq!(rasterize(&s, t, &sp, r as u32).unwrap(), g);
        assert_eq!(mass(&s, t, &sp, r as u32).unwrap(), count(&g) as u128);
        let v = random_values(&mut rng, k, 1 << r);
        let (p, sp) = build_from_values(&mut s, &v).unwrap();
        assert_eq!(rasterize_values(&s, p, &sp, r as u32).unwrap(), v, "case {case}");
    }
}

/// Internal pyramid values are the maxima of their sons, and no internal
/// node has two equal leaf sons.
#[test]
fn built_trees_are_normalised() {
    fn check(s: &Store, n: NodeRef) -> Option<f64> {
        match s.node(n) {
            Node::White => None,
            Node::Black => None,
            Node::Valued(v) => Some(v),
            Node::Internal { left, right, value, .. } => {
                assert!(!(s.is_terminal(left) && left == right), "iso-coloured sons");
                let (a, b) = (check(s, left), check(s, right));
                let want = match (a, b) {
                    (Some(x), Some(y)) => Some(x.max(y)),
                    (x, None) | (None, x) => x,
                };
                assert_eq!(value, want);
                value
            }
        }
    }
    let mut rng = rng(23);
    for case in 0..200 {
        let k = 1 + case % 3;
        let mut s = Store::new();
        let (p, _) = build_from_values(&mut s, &random_values(&mut rng, k, 8)).unwrap();
        check(&s, p);
        let (t, _) = build_from_grid(&mut s, &random_grid(&mut rng, k, 8)).unwrap();
        check(&s, t);
    }
}
