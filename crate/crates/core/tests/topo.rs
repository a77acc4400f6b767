mod common;

use common::*;
use regtree::topo::{self, LabelMethod, MorphOp};
use regtree::tree::{build_from_grid, rasterize, rasterize_values, Grid};
use regtree::{Metric, NodeRef, Store};

const METRICS: [Metric; 2] = [Metric::D1, Metric::DInf];

#[test]
fn morphology_matches_grid_oracles() {
    let mut rng = rng(7);
    for case in 0..200 {
        let k = 2 + case % 2;
        let r = if k == 2 { 1 + case % 4 } else { 1 + case % 3 };
        let g = random_grid(&mut rng, k, 1 << r);
        let mut s = Store::new();
        let (t, sp) = build_from_grid(&mut s, &g).unwrap();
        let p = r as u32;
        for m in METRICS {
            let ras = |s: &Store, n| rasterize(s, n, &sp, p).unwrap();
            let b = topo::boundary(&mut s, t, &sp, m, p).unwrap();
            assert_eq!(ras(&s, b), boundary(&g, m), "boundary case {case} {m:?}");
            let e = topo::morphology(&mut s, t, &sp, m, MorphOp::Erode, p).unwrap();
            assert_eq!(ras(&s, e), erode(&g, m), "erode case {case}");
            let d = topo::morphology(&mut s, t, &sp, m, MorphOp::Dilate, p).unwrap();
            assert_eq!(ras(&s, d), dilate(&g, m), "dilate case {case}");
            let o = topo::morphology(&mut s, t, &sp, m, MorphOp::Open, p).unwrap();
            assert_eq!(ras(&s, o), dilate(&erode(&g, m), m), "open case {case}");
            let c = topo::morphology(&mut s, t, &sp, m, MorphOp::Close, p).unwrap();
            assert_eq!(ras(&s, c), erode(&dilate(&g, m), m), "close case {case}");
            let md = topo::median_filter(&mut s, t, &sp, m, p).unwrap();
            assert_eq!(ras(&s, md), median(&g, m), "median case {case}");
            for n in [b, e, d, o, c, md] {
                assert!(s.is_normalized(n));
            }
        }
    }
}

#[test]
fn ordering_chain() {
    let mut rng = rng(11);
    for _ in 0..100 {
        let g = random_grid(&mut rng, 2, 16);
        let mut s = Store::new();
        let (t, sp) = build_from_grid(&mut s, &g).unwrap();
        for m in METRICS {
            let mut ras = |op| {
                let n = topo::morphology(&mut s, t, &sp, m, op, 4).unwrap();
                rasterize(&s, n, &sp, 4).unwrap()
            };
            let (e, o, c, d) = (ras(MorphOp::Erode), ras(MorphOp::Open), ras(MorphOp::Close), ras(MorphOp::Dilate));
            assert!(subset(&e, &o) && subset(&o, &g) && subset(&g, &c) && subset(&c, &d));
            let md = topo::median_filter(&mut s, t, &sp, m, 4).unwrap();
            let md = rasterize(&s, md, &sp, 4).unwrap();
            assert!(subset(&e, &md) && subset(&md, &d));
        }
    }
}

#[test]
fn erosion_dilation_duality_on_border_free_sets() {
    let mut rng = rng(13);
    for _ in 0..50 {
        let mut g = random_grid(&mut rng, 2, 16);
        for i in 0..g.len() {
            let c = g.coords(i);
            if c[..2].iter().any(|&x| x == 0 || x == 15) {
                g.cells[i] = false;
            }
        }
        let mut s = Store::new();
        let (t, sp) = build_from_grid(&mut s, &g).unwrap();
        let not = regtree::setops::complement(&mut s, t, &sp);
        for m in METRICS {
            let e = topo::morphology(&mut s, t, &sp, m, MorphOp::Erode, 4).unwrap();
            let dn = topo::morphology(&mut s, not, &sp, m, MorphOp::Dilate, 4).unwrap();
            let e = rasterize(&s, e, &sp, 4).unwrap();
            let dn = rasterize(&s, dn, &sp, 4).unwrap();
            for i in 0..g.len() {
                let c = g.coords(i);
                if c[..2].iter().all(|&x| x > 0 && x < 15) {
                    assert_eq!(e.cells[i], !dn.cells[i]);
                }
            }
        }
    }
}

#[test]
fn components_match_flood_fill() {
    let mut rng = rng(17);
    for case in 0..100 {
        let k = 2 + case % 2;
        let r = if k == 2 { 1 + case % 4 } else { 1 + case % 3 };
        let g = random_grid(&mut rng, k, 1 << r);
        let mut s = Store::new();
        let (t, sp) = build_from_grid(&mut s, &g).unwrap();
        for m in METRICS {
            let oracle = flood_labels(&g, m);
            let n = oracle.iter().flatten().max().map_or(0, |x| x + 1);
            for method in [LabelMethod::Bucket, LabelMethod::Growing] {
                let lab = topo::components(&mut s, t, &sp, m, r as u32, method).unwrap();
                assert_eq!(lab.count, n, "case {case} {m:?} {method:?}");
                let vals = rasterize_values(&s, lab.tree, &sp, r as u32).unwrap();
                assert!(same_partition(&oracle, &vals.cells), "case {case} {m:?} {method:?}");
                let mut seen: Vec<f64> = vals.cells.iter().flatten().copied().collect();
                seen.sort_by(f64::total_cmp);
                seen.dedup();
                assert_eq!(seen, (1..=n).map(|x| x as f64).collect::<Vec<_>>());
            }
        }
    }
}

#[test]
fn forest_masses_sum_to_total() {
    let mut rng = rng(19);
    for _ in 0..30 {
        let g = random_grid(&mut rng, 2, 16);
        let mut s = Store::new();
        let (t, sp) = build_from_grid(&mut s, &g).unwrap();
        let lab = topo::components(&mut s, t, &sp, Metric::D1, 4, LabelMethod::Bucket).unwrap();
        let forest = topo::segment_forest(&mut s, lab.tree);
        assert_eq!(forest.len(), lab.count);
        let total: u128 = forest.iter().map(|&f| regtree::tree::mass(&s, f, &sp, 4).unwrap()).sum();
        assert_eq!(total as usize, count(&g));
    }
}

#[test]
fn adjacency_counts_match_grid() {
    let mut rng = rng(23);
    for case in 0..60 {
        let k = 2 + case % 2;
        let side = if k == 2 { 8 } else { 4 };
        let g = random_grid(&mut rng, k, side);
        let mut s = Store::new();
        let (t, sp) = build_from_grid(&mut s, &g).unwrap();
        for m in METRICS {
            let mut pairs = 0;
            for i in 0..g.len() {
                if g.cells[i] {
                    let c = g.coords(i);
                    pairs += neighbours(k, side, &c[..k], m).0.iter().filter(|n| *g.get(&n[..k])).count();
                }
            }
            let recs = topo::adjacencies(&s, t, &sp, m, sp.r()).unwrap();
            assert_eq!(recs.len(), pairs / 2);
            let mut dedup = recs.clone();
            dedup.dedup();
            assert_eq!(dedup.len(), recs.len());
        }
    }
}

#[test]
fn intrinsic_dimension_bounds() {
    let mut rng = rng(29);
    for _ in 0..60 {
        let g = random_grid(&mut rng, 2, 8);
        let mut s = Store::new();
        let (t, sp) = build_from_grid(&mut s, &g).unwrap();
        let d = topo::intrinsic_dimension(&mut s, t, &sp, 3).unwrap();
        assert!(d <= 2);
        let interior = (0..g.len()).any(|i| {
            let c = g.coords(i);
            let (ns, out) = neighbours(2, 8, &c[..2], Metric::D1);
            g.cells[i] && out == 0 && ns.iter().all(|n| *g.get(&n[..2]))
        });
        if interior {
            assert_eq!(d, 2);
        }
    }
}

#[test]
fn median_set_of_block_golden() {
    // Hand-executed two-phase thinning of a 3x3 block: the first phase strips
    // the lower column and row, the second the remaining upper cells.
    let mut s = Store::new();
    let mut g = Grid::new(2, 8, false);
    for x in 2..5 {
        for y in 2..5 {
            g.set(&[x, y], true);
        }
    }
    let (t, sp) = build_from_grid(&mut s, &g).unwrap();
    let (once, removed) = topo::thin_step(&mut s, t, &sp, 1, 3).unwrap();
    assert_eq!(removed, 8);
    let m = topo::median_set(&mut s, t, &sp, 1, 3).unwrap();
    assert_eq!(m, once);
    let r = rasterize(&s, m, &sp, 3).unwrap();
    assert_eq!(count(&r), 1);
    assert!(*r.get(&[3, 3]));
    assert_eq!(topo::median_set(&mut s, NodeRef::WHITE, &sp, 0, 3).unwrap(), NodeRef::WHITE);
}
