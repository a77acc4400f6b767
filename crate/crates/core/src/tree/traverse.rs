//! The recursive traversal skeleton shared by most algorithms.

use super::space::{Block, SpaceSpec};
use super::store::{NodeRef, Store};

/// Hooks called by [`traverse`].
pub trait Visitor {
    /// Descending visit of a node that will be split.
    fn pre(&mut self, _store: &Store, _node: NodeRef, _block: &Block) {}
    /// A leaf, or the upper hull of a node reached at the depth limit.
    fn terminal(&mut self, store: &Store, node: NodeRef, block: &Block);
    /// Ascending visit after both sons.
    fn post(&mut self, _store: &Store, _node: NodeRef, _block: &Block) {}
}

/// Depth-first visit down to `depth_limit`.
///
/// An internal node reached at the limit is handed to `terminal` as is; use
/// [`Store::hull`] to read it as a leaf.
pub fn traverse<V: Visitor>(store: &Store, root: NodeRef, space: &SpaceSpec, depth_limit: u32, v: &mut V) {
    fn rec<V: Visitor>(store: &Store, n: NodeRef, b: Block, space: &SpaceSpec, limit: u32, v: &mut V) {
        if store.is_terminal(n) || b.level >= limit {
            v.terminal(store, n, &b);
            return;
        }
        v.pre(store, n, &b);
        let (l, r) = store.split(n);
        let (bl, br) = b.children(space);
        rec(store, l, bl, space, limit, v);
        rec(store, r, br, space, limit, v);
        v.post(store, n, &b);
    }
    rec(store, root, Block::root(), space, depth_limit, v);
}

/// Hooks called by [`compare_traverse`].
pub trait PairVisitor {
    fn pre(&mut self, _store: &Store, _a: NodeRef, _b: NodeRef, _block: &Block) {}
    /// Called where the two nodes are iso-coloured leaves, identical subtrees,
    /// or where the depth limit is reached.
    fn terminal(&mut self, store: &Store, a: NodeRef, b: NodeRef, block: &Block);
    fn post(&mut self, _store: &Store, _a: NodeRef, _b: NodeRef, _block: &Block) {}
}

/// Parallel descent of two trees over the same space.
///
/// Descent stops where both nodes are terminal, where they are the same
/// subtree, or at the depth limit. A terminal node facing an internal one is
/// virtually split into two copies of itself.
pub fn compare_traverse<V: PairVisitor>(
    store: &Store,
    a: NodeRef,
    b: NodeRef,
    space: &SpaceSpec,
    depth_limit: u32,
    v: &mut V,
) {
    fn rec<V: PairVisitor>(
        store: &Store,
        a: NodeRef,
        b: NodeRef,
        blk: Block,
        space: &SpaceSpec,
        limit: u32,
        v: &mut V,
    ) {
        let both_terminal = store.is_terminal(a) && store.is_terminal(b);
        if both_terminal || a == b || blk.level >= limit {
            v.terminal(store, a, b, &blk);
            return;
        }
        v.pre(store, a, b, &blk);
        let (al, ar) = store.split(a);
        let (bl, br) = store.split(b);
        let (kl, kr) = blk.children(space);
        rec(store, al, bl, kl, space, limit, v);
        rec(store, ar, br, kr, space, limit, v);
        v.post(store, a, b, &blk);
    }
    rec(store, a, b, Block::root(), space, depth_limit, v);
}

/// Visit every leaf (or depth-limit node) with its block.
pub fn for_each_leaf(
    store: &Store,
    root: NodeRef,
    space: &SpaceSpec,
    depth_limit: u32,
    mut f: impl FnMut(NodeRef, &Block),
) {
    struct F<'a, G: FnMut(NodeRef, &Block)>(&'a mut G);
    impl<G: FnMut(NodeRef, &Block)> Visitor for F<'_, G> {
        fn terminal(&mut self, _s: &Store, n: NodeRef, b: &Block) {
            (self.0)(n, b)
        }
    }
    traverse(store, root, space, depth_limit, &mut F(&mut f));
}

#[cfg(test)]
mod tests {
    use super::*;

    #[derive(Default)]
    struct Count {
        pre: usize,
        term: usize,
        post: usize,
    }
    impl Visitor for Count {
        fn pre(&mut self, _: &Store, _: NodeRef, _: &Block) {
            self.pre += 1;
        }
        fn terminal(&mut self, _: &Store, _: NodeRef, _: &Block) {
            self.term += 1;
        }
        fn post(&mut self, _: &Store, _: NodeRef, _: &Block) {
            self.post += 1;
        }
    }
    impl PairVisitor for Count {
        fn terminal(&mut self, _: &Store, _: NodeRef, _: NodeRef, _: &Block) {
            self.term += 1;
        }
    }

    #[test]
    fn black_root_single_visit() {
        let s = Store::new();
        let sp = SpaceSpec::new(2, 2).unwrap();
        let mut c = Count::default();
        traverse(&s, NodeRef::BLACK, &sp, 0, &mut c);
        assert_eq!((c.pre, c.term, c.post), (0, 1, 0));
    }

    #[test]
    fn full_depth_two_tree() {
        let mut s = Store::new();
        let sp = SpaceSpec::new(1, 2).unwrap();
        let a = s.internal(NodeRef::BLACK, NodeRef::WHITE);
        let b = s.internal(NodeRef::WHITE, NodeRef::BLACK);
        let root = s.internal(a, b);
        let mut c = Count::default();
        traverse(&s, root, &sp, 2, &mut c);
        assert_eq!((c.pre, c.term, c.post), (3, 4, 3));
    }

    #[test]
    fn compare_stops_on_identical_and_iso() {
        let mut s = Store::new();
        let sp = SpaceSpec::new(1, 2).unwrap();
        let a = s.internal(NodeRef::BLACK, NodeRef::WHITE);
        let mut c = Count::default();
        compare_traverse(&s, a, a, &sp, 2, &mut c);
        assert_eq!(c.term, 1);
        let mut c = Count::default();
        compare_traverse(&s, NodeRef::BLACK, NodeRef::WHITE, &sp, 2, &mut c);
        assert_eq!(c.term, 1);
    }

    #[test]
    fn compare_visits_only_differing_branch() {
        let mut s = Store::new();
        let sp = SpaceSpec::new(1, 2).unwrap();
        let l = s.internal(NodeRef::BLACK, NodeRef::WHITE);
        let r1 = s.internal(NodeRef::WHITE, NodeRef::BLACK);
        let r2 = s.internal(NodeRef::BLACK, NodeRef::BLACK);
        let t1 = s.internal(l, r1);
        let t2 = s.internal(l, r2);
        let mut c = Count::default();
        compare_traverse(&s, t1, t2, &sp, 2, &mut c);
        // left pair identical: one visit; right pair split into two leaf pairs
        assert_eq!(c.term, 3);
    }
}
