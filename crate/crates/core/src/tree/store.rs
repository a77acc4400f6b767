use std::collections::HashMap;

use crate::error::{Error, Result};

/// Handle to a node in a [`Store`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct NodeRef(u32);

impl NodeRef {
    pub const WHITE: NodeRef = NodeRef(0);
    pub const BLACK: NodeRef = NodeRef(1);

    pub fn index(self) -> usize {
        self.0 as usize
    }
}

/// Leaf colour.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Color {
    White,
    Black,
}

/// Node contents.
///
/// `Valued` is a black pyramid leaf. Internal nodes cache the maximum value of
/// their valued leaves and whether any black leaf lies below them.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Node {
    White,
    Black,
    Valued(f64),
    Internal { left: NodeRef, right: NodeRef, value: Option<f64>, black: bool },
}

#[derive(Clone, Copy, PartialEq, Eq, Hash)]
enum Key {
    Valued(u64),
    Internal(NodeRef, NodeRef),
}

/// Append-only, hash-consed node arena.
///
/// Structurally equal subtrees share one handle, so after normalisation two
/// trees denote the same set exactly when their roots are equal.
#[derive(Debug, Clone)]
pub struct Store {
    nodes: Vec<Node>,
    intern: HashMap<Key, NodeRef>,
}

impl Default for Store {
    fn default() -> Self {
        Self::new()
    }
}

impl std::fmt::Debug for Key {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Key::Valued(b) => write!(f, "V({})", f64::from_bits(*b)),
            Key::Internal(l, r) => write!(f, "I({},{})", l.0, r.0),
        }
    }
}

impl Store {
    pub fn new() -> Self {
        Store { nodes: vec![Node::White, Node::Black], intern: HashMap::new() }
    }

    /// Number of nodes allocated so far, sentinels included.
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn node(&self, n: NodeRef) -> Node {
        self.nodes[n.index()]
    }

    /// The canonical sentinel for a colour.
    pub fn leaf(&self, color: Color) -> NodeRef {
        match color {
            Color::White => NodeRef::WHITE,
            Color::Black => NodeRef::BLACK,
        }
    }

    /// A black pyramid leaf carrying `value`.
    pub fn valued(&mut self, value: f64) -> NodeRef {
        assert!(!value.is_nan(), "pyramid values must not be NaN");
        let value = if value == 0.0 { 0.0 } else { value };
        let key = Key::Valued(value.to_bits());
        if let Some(&n) = self.intern.get(&key) {
            return n;
        }
        self.push(key, Node::Valued(value))
    }

    /// Internal node without normalisation.
    pub fn internal(&mut self, left: NodeRef, right: NodeRef) -> NodeRef {
        let key = Key::Internal(left, right);
        if let Some(&n) = self.intern.get(&key) {
            return n;
        }
        let value = match (self.value(left), self.value(right)) {
            (Some(a), Some(b)) => Some(a.max(b)),
            (a, b) => a.or(b),
        };
        let black = self.has_black(left) || self.has_black(right);
        self.push(key, Node::Internal { left, right, value, black })
    }

    /// Union of two sibling subtrees, merging iso-coloured leaves.
    pub fn join(&mut self, left: NodeRef, right: NodeRef) -> NodeRef {
        if left == right && self.is_terminal(left) {
            left
        } else {
            self.internal(left, right)
        }
    }

    fn push(&mut self, key: Key, node: Node) -> NodeRef {
        let n = NodeRef(u32::try_from(self.nodes.len()).expect("node arena exhausted"));
        self.nodes.push(node);
        self.intern.insert(key, n);
        n
    }

    pub fn is_terminal(&self, n: NodeRef) -> bool {
        !matches!(self.nodes[n.index()], Node::Internal { .. })
    }

    pub fn is_white(&self, n: NodeRef) -> bool {
        n == NodeRef::WHITE
    }

    /// True for a black or valued leaf.
    pub fn is_black_leaf(&self, n: NodeRef) -> bool {
        matches!(self.nodes[n.index()], Node::Black | Node::Valued(_))
    }

    /// True if some black leaf lies in the subtree.
    pub fn has_black(&self, n: NodeRef) -> bool {
        match self.nodes[n.index()] {
            Node::White => false,
            Node::Black | Node::Valued(_) => true,
            Node::Internal { black, .. } => black,
        }
    }

    /// Functional value: leaf value or maximum over the subtree.
    pub fn value(&self, n: NodeRef) -> Option<f64> {
        match self.nodes[n.index()] {
            Node::Valued(v) => Some(v),
            Node::Internal { value, .. } => value,
            _ => None,
        }
    }

    pub fn children(&self, n: NodeRef) -> Option<(NodeRef, NodeRef)> {
        match self.nodes[n.index()] {
            Node::Internal { left, right, .. } => Some((left, right)),
            _ => None,
        }
    }

    /// Children, with a terminal node standing for both of its virtual sons.
    pub fn split(&self, n: NodeRef) -> (NodeRef, NodeRef) {
        self.children(n).unwrap_or((n, n))
    }

    /// Replace a terminal node by an internal node with two copies of it.
    pub fn fission(&mut self, n: NodeRef) -> Result<NodeRef> {
        if !self.is_terminal(n) {
            return Err(Error::FissionOfInternal);
        }
        Ok(self.internal(n, n))
    }

    /// Inverse of fission: collapse an internal node with identical leaf sons.
    pub fn merge(&mut self, n: NodeRef) -> NodeRef {
        match self.children(n) {
            Some((l, r)) => self.join(l, r),
            None => n,
        }
    }

    /// Upper hull of a subtree seen as a single leaf.
    pub fn hull(&mut self, n: NodeRef) -> NodeRef {
        match self.nodes[n.index()] {
            Node::Internal { value: Some(v), .. } => self.valued(v),
            Node::Internal { black: true, .. } => NodeRef::BLACK,
            Node::Internal { .. } => NodeRef::WHITE,
            _ => n,
        }
    }

    /// True if the subtree carries functional values.
    pub fn is_valued(&self, n: NodeRef) -> bool {
        self.value(n).is_some()
    }

    /// Rebuild bottom-up with [`Store::join`], removing unmerged leaf pairs.
    pub fn normalize(&mut self, n: NodeRef) -> NodeRef {
        let mut memo = HashMap::new();
        self.normalize_memo(n, &mut memo)
    }

    fn normalize_memo(&mut self, n: NodeRef, memo: &mut HashMap<NodeRef, NodeRef>) -> NodeRef {
        let Some((l, r)) = self.children(n) else { return n };
        if let Some(&m) = memo.get(&n) {
            return m;
        }
        let nl = self.normalize_memo(l, memo);
        let nr = self.normalize_memo(r, memo);
        let m = self.join(nl, nr);
        memo.insert(n, m);
        m
    }

    /// True if no internal node has two identical terminal sons.
    pub fn is_normalized(&self, n: NodeRef) -> bool {
        let mut stack = vec![n];
        let mut seen = std::collections::HashSet::new();
        while let Some(m) = stack.pop() {
            if let Some((l, r)) = self.children(m) {
                if !seen.insert(m) {
                    continue;
                }
                if l == r && self.is_terminal(l) {
                    return false;
                }
                stack.push(l);
                stack.push(r);
            }
        }
        true
    }

    /// Number of nodes in the subtree, counting shared subtrees once per use.
    pub fn tree_size(&self, n: NodeRef) -> usize {
        match self.children(n) {
            Some((l, r)) => 1 + self.tree_size(l) + self.tree_size(r),
            None => 1,
        }
    }

    /// Drop the values of a pyramid, keeping its support.
    pub fn support(&mut self, n: NodeRef) -> NodeRef {
        let mut memo = HashMap::new();
        self.map_leaves(n, &mut memo, &mut |_, leaf| if leaf == NodeRef::WHITE { leaf } else { NodeRef::BLACK })
    }

    /// Rebuild a tree replacing each leaf through `f`, normalising on return.
    pub fn map_leaves(
        &mut self,
        n: NodeRef,
        memo: &mut HashMap<NodeRef, NodeRef>,
        f: &mut dyn FnMut(&mut Store, NodeRef) -> NodeRef,
    ) -> NodeRef {
        if let Some(&m) = memo.get(&n) {
            return m;
        }
        let m = match self.children(n) {
            Some((l, r)) => {
                let nl = self.map_leaves(l, memo, f);
                let nr = self.map_leaves(r, memo, f);
                self.join(nl, nr)
            }
            None => f(self, n),
        };
        memo.insert(n, m);
        m
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sentinels_are_canonical() {
        let s = Store::new();
        assert_eq!(s.leaf(Color::White), NodeRef::WHITE);
        assert_eq!(s.leaf(Color::Black), NodeRef::BLACK);
        assert!(s.is_terminal(NodeRef::BLACK));
    }

    #[test]
    fn fission_and_merge() {
        let mut s = Store::new();
        let f = s.fission(NodeRef::BLACK).unwrap();
        assert_eq!(s.children(f), Some((NodeRef::BLACK, NodeRef::BLACK)));
        assert_eq!(s.merge(f), NodeRef::BLACK);
        assert_eq!(s.fission(f), Err(Error::FissionOfInternal));
        let w = s.fission(NodeRef::WHITE).unwrap();
        assert_eq!(s.children(w), Some((NodeRef::WHITE, NodeRef::WHITE)));
    }

    #[test]
    fn join_merges_iso_coloured_leaves() {
        let mut s = Store::new();
        assert_eq!(s.join(NodeRef::WHITE, NodeRef::WHITE), NodeRef::WHITE);
        assert_eq!(s.join(NodeRef::BLACK, NodeRef::BLACK), NodeRef::BLACK);
        let bw = s.join(NodeRef::BLACK, NodeRef::WHITE);
        assert_eq!(s.children(bw), Some((NodeRef::BLACK, NodeRef::WHITE)));
    }

    #[test]
    fn pyramid_internal_value_is_max() {
        let mut s = Store::new();
        let a = s.valued(1.0);
        let b = s.valued(2.0);
        let n = s.join(a, b);
        assert_eq!(s.value(n), Some(2.0));
        let c = s.valued(2.0);
        assert_eq!(s.join(b, c), b);
        let w = s.join(NodeRef::WHITE, a);
        assert_eq!(s.value(w), Some(1.0));
    }

    #[test]
    fn hash_consing_shares_structure() {
        let mut s = Store::new();
        let a = s.join(NodeRef::BLACK, NodeRef::WHITE);
        let b = s.join(NodeRef::BLACK, NodeRef::WHITE);
        assert_eq!(a, b);
    }
}
