mod common;

use common::*;
use regtree::integral::{convex_hull, epigraph, fill, hypograph};
use regtree::topo;
use regtree::tree::{build_from_grid, rasterize, Grid};
use regtree::{Metric, Store};

#[test]
fn graphs_match_column_scan() {
    let mut rng = rng(31);
    for case in 0..120 {
        let k = 1 + case % 3;
        let side = [16, 16, 8][k - 1];
        let g = random_grid(&mut rng, k, side);
        let mut s = Store::new();
        let (t, sp) = build_from_grid(&mut s, &g).unwrap();
        for axis in 0..k {
            let h = hypograph(&mut s, t, &sp, axis).unwrap();
            assert_eq!(rasterize(&s, h, &sp, sp.r()).unwrap(), scan(&g, axis, true), "case {case} axis {axis}");
            let e = epigraph(&mut s, t, &sp, axis).unwrap();
            assert_eq!(rasterize(&s, e, &sp, sp.r()).unwrap(), scan(&g, axis, false), "case {case} axis {axis}");
            assert!(s.is_normalized(h) && s.is_normalized(e));
        }
    }
}

#[test]
fn fill_of_boundary_covers_border_free_sets() {
    let mut rng = rng(37);
    for _ in 0..60 {
        let mut g = random_grid(&mut rng, 2, 16);
        for i in 0..g.len() {
            let c = g.coords(i);
            if c[..2].iter().any(|&x| x == 0 || x == 15) {
                g.cells[i] = false;
            }
        }
        let mut s = Store::new();
        let (t, sp) = build_from_grid(&mut s, &g).unwrap();
        let b = topo::boundary(&mut s, t, &sp, Metric::D1, 4).unwrap();
        let f = fill(&mut s, b, &sp, 4).unwrap();
        let f = rasterize(&s, f, &sp, 4).unwrap();
        assert!(subset(&g, &f));
    }
}

#[test]
fn hull_matches_brute_force() {
    let mut rng = rng(41);
    for case in 0..150 {
        let side = 1 << (1 + case % 5);
        let g = random_grid(&mut rng, 2, side);
        let mut s = Store::new();
        let (t, sp) = build_from_grid(&mut s, &g).unwrap();
        let h = convex_hull(&mut s, t, &sp, sp.r()).unwrap();
        let hg = rasterize(&s, h, &sp, sp.r()).unwrap();
        assert_eq!(hg, brute_hull(&g), "case {case}");
        assert!(subset(&g, &hg));
        assert_eq!(convex_hull(&mut s, h, &sp, sp.r()).unwrap(), h);
    }
}

#[test]
fn hull_of_sparse_points() {
    let mut rng = rng(43);
    use rand::Rng;
    for case in 0..100 {
        let mut g = Grid::new(2, 32, false);
        for _ in 0..rng.gen_range(1..6) {
            g.set(&[rng.gen_range(0..32), rng.gen_range(0..32)], true);
        }
        let mut s = Store::new();
        let (t, sp) = build_from_grid(&mut s, &g).unwrap();
        let h = convex_hull(&mut s, t, &sp, 5).unwrap();
        assert_eq!(rasterize(&s, h, &sp, 5).unwrap(), brute_hull(&g), "case {case}");
    }
}
