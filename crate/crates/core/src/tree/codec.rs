//! Preorder 0/1/2 tree codes and the `.kdt` text archive.

use std::fmt::Write as _;
use std::path::Path;

use super::space::SpaceSpec;
use super::store::{Node, NodeRef, Store};
use crate::error::{Error, Result};

/// Serialised tree: header, preorder code, and black-leaf values for pyramids.
#[derive(Clone, Debug, PartialEq)]
pub struct TreeCode {
    pub space: SpaceSpec,
    pub valued: bool,
    /// Preorder over `0` (white), `1` (black), `2` (grey).
    pub code: Vec<u8>,
    pub values: Vec<f64>,
}

impl TreeCode {
    pub fn code_str(&self) -> &str {
        std::str::from_utf8(&self.code).expect("tree codes are ASCII")
    }
}

/// Encode depth-first, left son first.
pub fn encode(store: &Store, root: NodeRef, space: &SpaceSpec) -> Result<TreeCode> {
    let valued = store.is_valued(root);
    let mut code = Vec::new();
    let mut values = Vec::new();
    let mut stack = vec![root];
    while let Some(n) = stack.pop() {
        match store.node(n) {
            Node::White => code.push(b'0'),
            Node::Black => {
                if valued {
                    return Err(Error::MalformedCode("unvalued black leaf in a pyramid".into()));
                }
                code.push(b'1');
            }
            Node::Valued(v) => {
                code.push(b'1');
                values.push(v);
            }
            Node::Internal { left, right, .. } => {
                code.push(b'2');
                stack.push(right);
                stack.push(left);
            }
        }
    }
    Ok(TreeCode { space: *space, valued, code, values })
}

/// Rebuild a tree from its code. Nodes are created as written, without
/// merging, so `decode(encode(t)) == t` for any tree.
pub fn decode(store: &mut Store, tc: &TreeCode) -> Result<NodeRef> {
    let depth = tc.space.depth();
    let mut pos = 0usize;
    let mut vals = tc.values.iter();
    fn rec<'a>(
        store: &mut Store,
        tc: &TreeCode,
        pos: &mut usize,
        vals: &mut impl Iterator<Item = &'a f64>,
        level: u32,
        depth: u32,
    ) -> Result<NodeRef> {
        let Some(&c) = tc.code.get(*pos) else {
            return Err(Error::MalformedCode(format!("truncated at symbol {}", *pos)));
        };
        *pos += 1;
        match c {
            b'0' => Ok(NodeRef::WHITE),
            b'1' if tc.valued => match vals.next() {
                Some(&v) => Ok(store.valued(v)),
                None => Err(Error::MalformedCode("missing leaf value".into())),
            },
            b'1' => Ok(NodeRef::BLACK),
            b'2' => {
                if level >= depth {
                    return Err(Error::MalformedCode(format!("grey node below depth {depth}")));
                }
                let l = rec(store, tc, pos, vals, level + 1, depth)?;
                let r = rec(store, tc, pos, vals, level + 1, depth)?;
                Ok(store.internal(l, r))
            }
            other => Err(Error::MalformedCode(format!("unexpected symbol {:?}", other as char))),
        }
    }
    let root = rec(store, tc, &mut pos, &mut vals, 0, depth)?;
    if pos != tc.code.len() {
        return Err(Error::MalformedCode(format!("{} trailing symbols", tc.code.len() - pos)));
    }
    if vals.next().is_some() {
        return Err(Error::MalformedCode("surplus leaf values".into()));
    }
    Ok(root)
}

/// Render the `.kdt` text form.
pub fn to_kdt(tc: &TreeCode) -> String {
    let mut s = format!("KDT1 k={} r={} valued={}\n", tc.space.k(), tc.space.r(), u8::from(tc.valued));
    s.push_str(tc.code_str());
    s.push('\n');
    if tc.valued {
        for (i, v) in tc.values.iter().enumerate() {
            if i > 0 {
                s.push(' ');
            }
            write!(s, "{v}").expect("writing to a String");
        }
        s.push('\n');
    }
    s
}

/// Parse the `.kdt` text form.
pub fn from_kdt(text: &str) -> Result<TreeCode> {
    let mut lines = text.split('\n');
    let header = lines.next().unwrap_or_default();
    let bad = |m: &str| Error::MalformedCode(m.to_string());
    let mut parts = header.split(' ');
    if parts.next() != Some("KDT1") {
        return Err(bad("missing KDT1 header"));
    }
    let mut field = |name: &str| -> Result<u32> {
        let p = parts.next().ok_or_else(|| bad("short header"))?;
        p.strip_prefix(name).and_then(|v| v.parse().ok()).ok_or_else(|| bad(&format!("bad header field {p:?}")))
    };
    let k = field("k=")?;
    let r = field("r=")?;
    let valued = match field("valued=")? {
        0 => false,
        1 => true,
        _ => return Err(bad("valued flag must be 0 or 1")),
    };
    let space = SpaceSpec::new(k, r)?;
    let code = lines.next().ok_or_else(|| bad("missing code line"))?.as_bytes().to_vec();
    let mut values = Vec::new();
    if valued {
        let line = lines.next().ok_or_else(|| bad("missing value line"))?;
        if !line.is_empty() {
            for t in line.split(' ') {
                let v: f64 = t.parse().map_err(|_| bad(&format!("bad value {t:?}")))?;
                if v.is_nan() {
                    return Err(bad("NaN value"));
                }
                values.push(v);
            }
        }
    }
    Ok(TreeCode { space, valued, code, values })
}

pub fn write_kdt_file(path: &Path, store: &Store, root: NodeRef, space: &SpaceSpec) -> std::io::Result<()> {
    let tc = encode(store, root, space).map_err(|e| std::io::Error::new(std::io::ErrorKind::InvalidData, e))?;
    std::fs::write(path, to_kdt(&tc))
}

pub fn read_kdt_file(path: &Path, store: &mut Store) -> std::io::Result<(NodeRef, SpaceSpec)> {
    let text = std::fs::read_to_string(path)?;
    let inv = |e: Error| std::io::Error::new(std::io::ErrorKind::InvalidData, e);
    let tc = from_kdt(&text).map_err(inv)?;
    let root = decode(store, &tc).map_err(inv)?;
    Ok((root, tc.space))
}
