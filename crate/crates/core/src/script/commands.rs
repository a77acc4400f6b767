//! Library operations behind the implemented command names.
//!
//! Argument conventions: `k` is checked against the operand's dimension,
//! `p` is a precision, axes are numbered from 0 and colors are BLANC/NOIR
//! (or 0/1). Vectors and matrices are variables built by KDIRVC, KDMTTR and
//! the like.

use super::interp::{Call, Flow, Res, Session};
use super::value::{Handle, List, MomentStage, Moments, Value};
use super::ScriptError;
use crate::attributes::{center_moments, eigen_frame, eigen_transform, eigen_tree, moments, normalized_moments};
use crate::geom::{
    hidden_part_removal, polytope_tree, project, propagation_area, segment_intersects, shape_tree, transform_tree,
    tree_symmetry, tree_translate, Elementary, HomMatrix, Polytope, Segment, Shape, Transform, ViewSense,
};
use crate::integral::{convex_hull, epigraph, fill, hypograph};
use crate::pyramid::{colorize, pyramid_extend, pyramid_median_filter, pyramid_to_tree, scale, stats, tree_to_pyramid};
use crate::setops::{boolean, il_add, il_boolean, il_create, slice_extract, slice_insert, BoolOp};
use crate::topo::{
    adjacencies, boundary, classify, components, intrinsic_dimension, median_filter, median_set, morphology,
    segment_forest, space_closure, thin_step, LabelMethod, MorphOp,
};
use crate::tree::{add_cell, add_point, assert_at, cell_code, quantize, Metric, Node, NodeRef, SpaceSpec};

fn metric_of(name: &str) -> Metric {
    if name.starts_with("KD0") {
        Metric::DInf
    } else {
        Metric::D1
    }
}

fn bool_op(name: &str) -> Option<BoolOp> {
    Some(match name {
        "KDASS" => BoolOp::Assert,
        "KDNOT" => BoolOp::Not,
        "KDUNIO" | "KDUNIL" => BoolOp::Union,
        "KDINTR" | "KDINIL" | "KDCLAL" => BoolOp::Intersect,
        "KDEXCL" | "KDEXIL" => BoolOp::Exclude,
        "KDDIFF" | "KDDFIL" => BoolOp::Diff,
        _ => return None,
    })
}

fn morph_op(name: &str) -> Option<MorphOp> {
    Some(match &name[3..] {
        "ERO" => MorphOp::Erode,
        "DIL" => MorphOp::Dilate,
        "OPE" => MorphOp::Open,
        "CLO" => MorphOp::Close,
        _ => return None,
    })
}

/// Space shared by two operands. A single terminal node means the same set
/// at any precision, so it takes the other operand's space.
fn unify(c: &Call, a: &Handle, b: &Handle, store: &crate::Store) -> Res<SpaceSpec> {
    if a.space == b.space {
        return Ok(a.space);
    }
    if a.space.k() == b.space.k() {
        if store.is_terminal(a.root) {
            return Ok(b.space);
        }
        if store.is_terminal(b.root) {
            return Ok(a.space);
        }
    }
    Err(c.bad(1, format!("space k={} r={} differs from k={} r={}", b.space.k(), b.space.r(), a.space.k(), a.space.r())))
}

impl Session {
    fn axis(&self, c: &Call, i: usize, space: &SpaceSpec) -> Res<usize> {
        let a = self.uint(c, i)? as usize;
        if a >= space.dim() {
            return Err(c.bad(i, format!("axis {a} out of range for k={}", space.k())));
        }
        Ok(a)
    }

    /// Tree argument `i` with the precision at `pi`. A terminal tree stands
    /// for the same set at any precision, so its space is widened to fit.
    fn sized(&self, c: &Call, i: usize, pi: usize) -> Res<(Handle, u32)> {
        let mut h = self.handle(c, i)?;
        let p = self.uint(c, pi)?;
        if self.store.is_terminal(h.root) && p > h.space.r() {
            h.space = h.space.with_r(p)?;
        }
        Ok((h, p))
    }

    fn moments_arg(&self, c: &Call, i: usize) -> Res<Moments> {
        match self.lookup(c, i, "list")? {
            Value::List(List::Moments(m)) => Ok(m.clone()),
            other => Err(ScriptError::TypeMismatch {
                variable: c.word(i)?.to_string(),
                expected: "moment list",
                found: other.kind().to_string(),
            }),
        }
    }

    /// Vectors given as variables in `from..to`.
    fn points(&self, c: &Call, from: usize, to: usize) -> Res<Vec<Vec<f64>>> {
        (from..to).map(|i| self.reals(c, i)).collect()
    }

    fn limit(&self, c: &Call, i: usize) -> Res<(NodeRef, crate::setops::InductiveFrame, SpaceSpec)> {
        match self.lookup(c, i, "limit tree")? {
            Value::Limit { root, frame, space } => Ok((*root, frame.clone(), *space)),
            other => Err(ScriptError::TypeMismatch {
                variable: c.word(i)?.to_string(),
                expected: "limit tree",
                found: other.kind().to_string(),
            }),
        }
    }

    fn give_matrix(&mut self, c: &Call, k: usize, e: Elementary) -> Res<Flow> {
        let m = HomMatrix::elementary(k, &e)?;
        self.give(c, Value::Matrix(m), false)
    }

    pub(super) fn operation(&mut self, c: &Call) -> Res<Flow> {
        let name = c.name;
        if let Some(op) = bool_op(name).filter(|_| !name.ends_with("IL") && name != "KDCLAL") {
            let binary = op.arity() == 2;
            c.arity(if binary { 4 } else { 3 })?;
            let n = if binary { 2 } else { 1 };
            let (a, p) = self.sized(c, 0, n + 1)?;
            let (b, space) = if binary {
                let (b, _) = self.sized(c, 1, n + 1)?;
                (Some(b.root), unify(c, &a, &b, &self.store)?)
            } else {
                (None, a.space)
            };
            self.dim(c, n, &space)?;
            let r = boolean(&mut self.store, op, a.root, b, &space, p)?;
            return self.give_tree(c, r, space, true);
        }
        if name.starts_with("KD1") || name.starts_with("KD0") {
            if let Some(op) = morph_op(name) {
                c.arity(3)?;
                let (t, p) = self.sized(c, 0, 2)?;
                self.dim(c, 1, &t.space)?;
                let r = morphology(&mut self.store, t.root, &t.space, metric_of(name), op, p)?;
                return self.give_tree(c, r, t.space, true);
            }
        }
        match name {
            // ---- vectors and matrices
            "KDIRVC" | "KDICVC" => {
                c.arity_between(1, usize::MAX)?;
                let n = self.uint(c, 0)? as usize;
                c.arity(n + 1)?;
                let v = if name == "KDIRVC" {
                    List::Reals((1..=n).map(|i| self.real(c, i)).collect::<Res<_>>()?)
                } else {
                    List::Ints((1..=n).map(|i| self.int(c, i)).collect::<Res<_>>()?)
                };
                self.give(c, Value::List(v), false)
            }
            "KDCIVR" => {
                c.arity(2)?;
                let n = self.uint(c, 0)? as usize;
                let x = self.real(c, 1)?;
                self.give(c, Value::List(List::Reals(vec![x; n])), false)
            }
            "KDCMCI" => {
                c.arity_between(1, usize::MAX)?;
                let k = self.uint(c, 0)? as usize;
                c.arity(1 + (k + 1) * (k + 1))?;
                let rows: Vec<Vec<f64>> = (0..=k)
                    .map(|i| (0..=k).map(|j| self.real(c, 1 + i * (k + 1) + j)).collect::<Res<_>>())
                    .collect::<Res<_>>()?;
                self.give(c, Value::Matrix(HomMatrix::from_rows(&rows)?), false)
            }
            "KDMTAN" | "KDMTTR" | "KDMTPR" => {
                c.arity(2)?;
                let k = self.uint(c, 0)? as usize;
                let v = self.reals(c, 1)?;
                let e = match name {
                    "KDMTAN" => Elementary::Homothety(v),
                    "KDMTTR" => Elementary::Translation(v),
                    _ => Elementary::Perspective(v),
                };
                self.give_matrix(c, k, e)
            }
            "KDMTRT" => {
                c.arity(4)?;
                let k = self.uint(c, 0)? as usize;
                let (i, j) = (self.uint(c, 1)? as usize, self.uint(c, 2)? as usize);
                let angle = self.real(c, 3)?;
                self.give_matrix(c, k, Elementary::Rotation { i, j, angle })
            }
            "KDMTIV" | "KDMTOP" | "KDMTTP" => {
                c.arity(1)?;
                let m = self.matrix(c, 0)?;
                let r = match name {
                    "KDMTIV" => m.inverse()?,
                    "KDMTOP" => m.contrary(),
                    _ => m.transpose(),
                };
                self.give(c, Value::Matrix(r), false)
            }
            "KDCMTH" => {
                c.arity(2)?;
                let r = self.matrix(c, 0)?.concat(&self.matrix(c, 1)?)?;
                self.give(c, Value::Matrix(r), false)
            }

            // ---- nodes
            "KDCRBT" | "KDCRPY" => {
                let (black, k, value) = if name == "KDCRBT" {
                    c.arity(2)?;
                    (self.color(c, 0)?, self.uint(c, 1)?, None)
                } else {
                    c.arity(3)?;
                    (self.color(c, 1)?, self.uint(c, 2)?, Some(self.real(c, 0)?))
                };
                let space = SpaceSpec::new(k, 1)?;
                let root = match (black, value) {
                    (false, _) => NodeRef::WHITE,
                    (true, None) => NodeRef::BLACK,
                    (true, Some(v)) => self.store.valued(v),
                };
                let v = if name == "KDCRPY" {
                    Value::Pyramid(Handle { root, space })
                } else {
                    Value::Tree(Handle { root, space })
                };
                self.give(c, v, false)
            }
            "KDTERM" | "KDWHIT" | "KDBLAC" => {
                c.arity(1)?;
                let t = self.handle(c, 0)?;
                let b = match name {
                    "KDTERM" => self.store.is_terminal(t.root),
                    "KDWHIT" => t.root == NodeRef::WHITE,
                    _ => t.root == NodeRef::BLACK,
                };
                self.give(c, Value::Bool(b), false)
            }
            "KDISOC" => {
                c.arity(2)?;
                let (a, b) = (self.handle(c, 0)?, self.handle(c, 1)?);
                let s = &self.store;
                let iso = s.is_terminal(a.root) && s.is_terminal(b.root) && s.is_white(a.root) == s.is_white(b.root);
                self.give(c, Value::Bool(iso), false)
            }
            "KDRCOL" => {
                c.arity(1)?;
                let t = self.handle(c, 0)?;
                let color = match self.store.node(t.root) {
                    Node::White => 0,
                    Node::Black | Node::Valued(_) => 1,
                    Node::Internal { .. } => 2,
                };
                self.give(c, Value::Int(color), false)
            }
            "KDWCOL" => {
                c.arity(2)?;
                let t = self.handle(c, 0)?;
                if !self.store.is_terminal(t.root) {
                    return Err(c.bad(0, "root is not terminal"));
                }
                let root = if self.color(c, 1)? { NodeRef::BLACK } else { NodeRef::WHITE };
                self.give_tree(c, root, t.space, true)
            }
            "KDRFCT" => {
                c.arity(1)?;
                let t = self.pyramid(c, 0)?;
                let v = self.store.value(t.root).ok_or_else(|| c.bad(0, "no functional value at the root"))?;
                self.give(c, Value::Real(v), false)
            }
            "KDWFCT" => {
                c.arity(2)?;
                let t = self.handle(c, 0)?;
                if !self.store.is_black_leaf(t.root) && !matches!(self.store.node(t.root), Node::Valued(_)) {
                    return Err(c.bad(0, "root is not a black leaf"));
                }
                let v = self.real(c, 1)?;
                let root = self.store.valued(v);
                self.give_tree(c, root, t.space, true)
            }
            "KDFIBT" | "KDMERG" => {
                c.arity(1)?;
                let t = self.handle(c, 0)?;
                let root = if name == "KDFIBT" { self.store.fission(t.root)? } else { self.store.merge(t.root) };
                self.give_tree(c, root, t.space, true)
            }
            "KDUNBT" => {
                c.arity(2)?;
                let (a, b) = (self.handle(c, 0)?, self.handle(c, 1)?);
                let space = unify(c, &a, &b, &self.store)?;
                let root = self.store.join(a.root, b.root);
                self.give_tree(c, root, space, false)
            }
            "KDDVBT" => {
                c.arity(1)?;
                let t = self.handle(c, 0)?;
                let root = self.store.support(t.root);
                self.give_tree(c, root, t.space, true)
            }

            // ---- construction and slices
            "KDAIVT" | "KDARVT" => {
                c.arity(3)?;
                let t = self.handle(c, 0)?;
                let v = self.reals(c, 1)?;
                self.dim(c, 2, &t.space)?;
                let root = if name == "KDAIVT" {
                    let cell: Vec<u32> = v.iter().map(|&x| x as u32).collect();
                    if v.iter().any(|&x| x < 0.0 || x.fract() != 0.0) {
                        return Err(c.bad(1, "cell indices must be non-negative integers"));
                    }
                    add_cell(&mut self.store, t.root, &t.space, &cell, None)?
                } else {
                    add_point(&mut self.store, t.root, &t.space, &v, None)?
                };
                self.give_tree(c, root, t.space, true)
            }
            "KDARVP" => {
                c.arity(4)?;
                let t = self.handle(c, 0)?;
                let v = self.reals(c, 1)?;
                let value = self.real(c, 2)?;
                self.dim(c, 3, &t.space)?;
                let root = add_point(&mut self.store, t.root, &t.space, &v, Some(value))?;
                self.give_tree(c, root, t.space, true)
            }
            "KDEXSL" => {
                c.arity(4)?;
                let t = self.handle(c, 0)?;
                let axis = self.axis(c, 1, &t.space)?;
                let index = self.uint(c, 2)?;
                self.dim(c, 3, &t.space)?;
                let (root, space) = slice_extract(&mut self.store, t.root, &t.space, &[(axis, index)])?;
                self.give_tree(c, root, space, false)
            }
            "KDINSL" => {
                c.arity(5)?;
                let t = self.handle(c, 0)?;
                let s = self.handle(c, 1)?;
                let axis = self.axis(c, 2, &t.space)?;
                let index = self.uint(c, 3)?;
                self.dim(c, 4, &t.space)?;
                let root = slice_insert(&mut self.store, t.root, &t.space, s.root, &[(axis, index)])?;
                self.give_tree(c, root, t.space, true)
            }

            // ---- inductive limit
            "KDCTIL" => {
                c.arity(2)?;
                let v = self.reals(c, 0)?;
                let r = self.uint(c, 1)?;
                let (root, frame) = il_create(&v)?;
                let space = SpaceSpec::new(v.len() as u32, r)?;
                self.give(c, Value::Limit { root, frame, space }, false)
            }
            "KDAVIL" => {
                c.arity(2)?;
                let (t, f, space) = self.limit(c, 0)?;
                let v = self.reals(c, 1)?;
                let (root, frame) = il_add(&mut self.store, t, &f, &v, &space)?;
                self.give(c, Value::Limit { root, frame, space }, true)
            }
            "KDUNIL" | "KDINIL" | "KDEXIL" | "KDDFIL" => {
                c.arity(3)?;
                let (t1, f1, space) = self.limit(c, 0)?;
                let (t2, f2, s2) = self.limit(c, 1)?;
                if s2 != space {
                    return Err(c.bad(1, "limit trees of different spaces"));
                }
                let p = self.uint(c, 2)?;
                let op = bool_op(name).expect("inductive-limit operator");
                let (root, frame) = il_boolean(&mut self.store, op, t1, &f1, t2, &f2, &space, p)?;
                self.give(c, Value::Limit { root, frame, space }, true)
            }

            // ---- geometry
            "KDTHOM" => {
                c.arity(5)?;
                let t = self.handle(c, 0)?;
                let m = self.matrix(c, 1)?;
                self.dim(c, 2, &t.space)?;
                let (pi, po) = (self.uint(c, 3)?, self.uint(c, 4)?);
                let tr = Transform { inverse: m.inverse()?, direct: m };
                let root = transform_tree(&mut self.store, t.root, &t.space, &tr, pi, po)?;
                self.give_tree(c, root, t.space, true)
            }
            "KDTRAN" => {
                c.arity(5)?;
                let t = self.handle(c, 0)?;
                let v = self.reals(c, 1)?;
                self.dim(c, 2, &t.space)?;
                let (pi, po) = (self.uint(c, 3)?, self.uint(c, 4)?);
                let root = tree_translate(&mut self.store, t.root, &t.space, &v, pi, po)?;
                self.give_tree(c, root, t.space, true)
            }
            "KDSYMT" | "KDPLVI" => {
                c.arity(3)?;
                let t = self.handle(c, 0)?;
                let axis = self.axis(c, 1, &t.space)?;
                self.dim(c, 2, &t.space)?;
                let (root, space) = if name == "KDSYMT" {
                    (tree_symmetry(&mut self.store, t.root, &t.space, axis)?, t.space)
                } else {
                    project(&mut self.store, t.root, &t.space, axis)?
                };
                self.give_tree(c, root, space, name == "KDSYMT")
            }
            "KDRHPD" => {
                c.arity(4)?;
                let t = self.handle(c, 0)?;
                let axis = self.axis(c, 1, &t.space)?;
                let sense = if self.int(c, 2)? == 0 { ViewSense::Increasing } else { ViewSense::Decreasing };
                self.dim(c, 3, &t.space)?;
                let root = hidden_part_removal(&mut self.store, t.root, &t.space, axis, sense)?;
                self.give_tree(c, root, t.space, true)
            }
            "KDITST" => {
                c.arity(5)?;
                let t = self.handle(c, 0)?;
                let (a, b) = (self.reals(c, 1)?, self.reals(c, 2)?);
                self.dim(c, 3, &t.space)?;
                let p = self.uint(c, 4)?;
                let hit = segment_intersects(&self.store, t.root, &t.space, &Segment::new(&a, &b), p)?;
                self.give(c, Value::Bool(hit), false)
            }
            "KDBRLI" | "KDCPOL" | "KDSPBT" | "KDCOBT" => {
                c.arity_between(3, usize::MAX)?;
                let n = c.args.len();
                let k = self.uint(c, n - 2)?;
                let p = self.uint(c, n - 1)?;
                let space = SpaceSpec::new(k, p)?;
                let shape = match name {
                    "KDBRLI" => Shape::BrokenLine(self.points(c, 0, n - 2)?),
                    "KDCPOL" => Shape::Polygon(self.points(c, 0, n - 2)?),
                    "KDSPBT" => {
                        c.arity(4)?;
                        Shape::Sphere { center: self.reals(c, 0)?, radius: self.real(c, 1)? }
                    }
                    _ => {
                        c.arity(6)?;
                        Shape::Cone {
                            apex: self.reals(c, 0)?,
                            axis: self.reals(c, 1)?,
                            angle: self.real(c, 2)?,
                            range: self.real(c, 3)?,
                        }
                    }
                };
                let root = shape_tree(&mut self.store, &shape, &space, p)?;
                self.give_tree(c, root, space, false)
            }
            "KDPESP" => {
                c.arity(1)?;
                let k = self.uint(c, 0)? as usize;
                SpaceSpec::new(k as u32, 1)?;
                self.give(c, Value::Polytope(Polytope::unit_hypercube(k)), false)
            }
            "KDTRHP" => {
                c.arity(2)?;
                let poly = match self.lookup(c, 0, "polytope")? {
                    Value::Polytope(p) => p.clone(),
                    other => {
                        return Err(ScriptError::TypeMismatch {
                            variable: c.word(0)?.into(),
                            expected: "polytope",
                            found: other.kind().into(),
                        })
                    }
                };
                let m = self.matrix(c, 1)?;
                let out = poly.transform(&m, &m.inverse()?)?;
                self.give(c, Value::Polytope(out), true)
            }
            "KDPOLT" => {
                c.arity(3)?;
                let poly = match self.lookup(c, 0, "polytope")? {
                    Value::Polytope(p) => p.clone(),
                    other => {
                        return Err(ScriptError::TypeMismatch {
                            variable: c.word(0)?.into(),
                            expected: "polytope",
                            found: other.kind().into(),
                        })
                    }
                };
                let space = SpaceSpec::new(self.uint(c, 1)?, self.uint(c, 2)?)?;
                let root = polytope_tree(&mut self.store, &poly, &space, space.r())?;
                self.give_tree(c, root, space, false)
            }
            "KDPTTM" => {
                c.arity(5)?;
                let t = self.handle(c, 0)?;
                let e = self.reals(c, 1)?;
                let range = self.real(c, 2)?;
                self.dim(c, 3, &t.space)?;
                let p = self.uint(c, 4)?;
                let root = propagation_area(&mut self.store, t.root, &t.space, &e, range, p)?;
                self.give_tree(c, root, t.space, false)
            }

            // ---- integral
            "KDHYPG" | "KDEPIG" => {
                c.arity(3)?;
                let t = self.handle(c, 0)?;
                let axis = self.axis(c, 1, &t.space)?;
                self.dim(c, 2, &t.space)?;
                let root = if name == "KDHYPG" {
                    hypograph(&mut self.store, t.root, &t.space, axis)?
                } else {
                    epigraph(&mut self.store, t.root, &t.space, axis)?
                };
                self.give_tree(c, root, t.space, true)
            }
            "KDFILL" | "KDCVXH" | "KDSCLO" | "KD1BND" | "KD0BND" | "KD1MDF" | "KD0MDF" => {
                c.arity(3)?;
                let (t, p) = self.sized(c, 0, 2)?;
                self.dim(c, 1, &t.space)?;
                let (s, sp) = (&mut self.store, &t.space);
                let root = match name {
                    "KDFILL" => fill(s, t.root, sp, p)?,
                    "KDCVXH" => convex_hull(s, t.root, sp, p)?,
                    "KDSCLO" => space_closure(s, t.root, sp, p)?,
                    "KD1BND" | "KD0BND" => boundary(s, t.root, sp, metric_of(name), p)?,
                    _ => median_filter(s, t.root, sp, metric_of(name), p)?,
                };
                self.give_tree(c, root, t.space, true)
            }

            // ---- topology
            "KD1ANR" | "KD0ANR" => {
                c.arity(3)?;
                let (t, p) = self.sized(c, 0, 2)?;
                self.dim(c, 1, &t.space)?;
                let metric = metric_of(name);
                let n = adjacencies(&self.store, t.root, &t.space, metric, p)?.len();
                self.analysed.insert(c.word(0)?.to_string(), metric);
                Ok(Flow::Continue(format!("{n} adjacency records")))
            }
            "KDTHIN" | "KDMEDS" => {
                c.arity(4)?;
                let (t, p) = self.sized(c, 0, 3)?;
                let target = self.uint(c, 1)?;
                self.dim(c, 2, &t.space)?;
                let root = if name == "KDTHIN" {
                    thin_step(&mut self.store, t.root, &t.space, target, p)?.0
                } else {
                    median_set(&mut self.store, t.root, &t.space, target, p)?
                };
                self.give_tree(c, root, t.space, true)
            }
            "KDIDIM" => {
                c.arity(3)?;
                let (t, p) = self.sized(c, 0, 2)?;
                self.dim(c, 1, &t.space)?;
                let d = intrinsic_dimension(&mut self.store, t.root, &t.space, p)?;
                self.give(c, Value::Int(i64::from(d)), false)
            }
            "KDLBCC" | "KD1LAB" | "KD0LAB" => {
                c.arity_between(1, 3)?;
                let t = self.handle(c, 0)?;
                let (metric, p, method) = if name == "KDLBCC" {
                    c.arity(1)?;
                    let m = self.analysed.get(c.word(0)?).copied().unwrap_or(Metric::D1);
                    (m, t.space.r(), LabelMethod::Bucket)
                } else {
                    c.arity(3)?;
                    self.dim(c, 1, &t.space)?;
                    (metric_of(name), self.uint(c, 2)?, LabelMethod::Growing)
                };
                let lab = components(&mut self.store, t.root, &t.space, metric, p, method)?;
                let v = Value::Pyramid(Handle { root: lab.tree, space: t.space });
                let flow = self.give(c, v, false)?;
                Ok(match flow {
                    Flow::Continue(m) => Flow::Continue(format!("labels={} {m}", lab.count)),
                    stop => stop,
                })
            }
            "KD1CLA" | "KD0CLA" => {
                c.arity_between(3, usize::MAX)?;
                let n = c.args.len() - 2;
                let bands: Vec<Handle> = (0..n).map(|i| self.pyramid(c, i)).collect::<Res<_>>()?;
                let space = bands[0].space;
                self.dim(c, n, &space)?;
                let rr = self.uint(c, n + 1)?;
                let roots: Vec<NodeRef> = bands.iter().map(|b| b.root).collect();
                let lab = classify(&mut self.store, &roots, &space, metric_of(name), rr)?;
                let v = Value::Pyramid(Handle { root: lab.tree, space });
                let flow = self.give(c, v, false)?;
                Ok(match flow {
                    Flow::Continue(m) => Flow::Continue(format!("themes={} {m}", lab.count)),
                    stop => stop,
                })
            }
            "KDBSGT" => {
                c.arity(2)?;
                let lab = self.handle(c, 0)?;
                let t = self.handle(c, 1)?;
                if t.space != lab.space {
                    return Err(c.bad(1, "labeled tree and tree differ in space"));
                }
                let trees = segment_forest(&mut self.store, lab.root);
                let n = trees.len();
                self.vars.set(c.word(0)?, Value::List(List::Forest { trees, space: lab.space }));
                Ok(Flow::Continue(format!("{} = forest of {n} segment trees", c.word(0)?)))
            }
            "KDEXSG" => {
                c.arity(2)?;
                let var = c.word(0)?.to_string();
                let (root, space) = match self.vars.get_mut(&var) {
                    Some(Value::List(List::Forest { trees, space })) => {
                        if trees.is_empty() {
                            return Err(ScriptError::Core(crate::Error::IndexOutOfRange { index: 0, len: 0 }));
                        }
                        (trees.remove(0), *space)
                    }
                    Some(other) => {
                        return Err(ScriptError::TypeMismatch {
                            variable: var,
                            expected: "forest",
                            found: other.kind().into(),
                        })
                    }
                    None => {
                        return Err(ScriptError::TypeMismatch {
                            variable: var,
                            expected: "forest",
                            found: "unbound".into(),
                        })
                    }
                };
                self.dim(c, 1, &space)?;
                self.give_tree(c, root, space, false)
            }
            "KDLLCC" => {
                c.arity(1)?;
                let lab = self.handle(c, 0)?;
                let forest = segment_forest(&mut self.store, lab.root);
                let first = crate::topo::extract_component(&forest, 0)?;
                self.give_tree(c, first, lab.space, false)
            }

            // ---- attributes
            "KDMOMG" => {
                c.arity(3)?;
                let (t, p) = self.sized(c, 0, 2)?;
                self.dim(c, 1, &t.space)?;
                let raw = moments(&self.store, t.root, &t.space, p)?;
                let m = Moments { view: raw.clone(), raw, stage: MomentStage::Raw, precision: p };
                self.give(c, Value::List(List::Moments(m)), false)
            }
            "KDCTRM" | "KDNRMG" => {
                c.arity(2)?;
                let mut m = self.moments_arg(c, 0)?;
                if self.uint(c, 1)? as usize != m.raw.k() {
                    return Err(c.bad(1, "dimension does not match the moment list"));
                }
                if name == "KDCTRM" {
                    m.view = center_moments(&m.raw)?;
                    m.stage = MomentStage::Centered;
                } else {
                    m.view = normalized_moments(&m.raw)?;
                    m.stage = MomentStage::Normalized;
                }
                self.give(c, Value::List(List::Moments(m)), true)
            }
            "KDNRMR" => {
                c.arity(4)?;
                let m = self.moments_arg(c, 0)?;
                let (fname, mname) = (c.word(1)?.to_string(), c.word(2)?.to_string());
                if self.uint(c, 3)? as usize != m.raw.k() {
                    return Err(c.bad(3, "dimension does not match the moment list"));
                }
                let frame = eigen_frame(&m.raw)?;
                let t = eigen_transform(&frame, m.precision, true)?;
                let msg = format!("{fname} = {}, {mname} = matrix", self.describe(&Value::Frame(frame.clone())));
                self.vars.set(&fname, Value::Frame(frame));
                self.vars.set(&mname, Value::Matrix(t.direct));
                Ok(Flow::Continue(msg))
            }
            "KDAPRR" => {
                c.arity(6)?;
                let t = self.handle(c, 0)?;
                match self.lookup(c, 1, "frame")? {
                    Value::Frame(f) if f.xg.len() == t.space.dim() => {}
                    Value::Frame(_) => return Err(c.bad(1, "frame dimension differs from the tree's")),
                    other => {
                        return Err(ScriptError::TypeMismatch {
                            variable: c.word(1)?.into(),
                            expected: "frame",
                            found: other.kind().into(),
                        })
                    }
                }
                let m = self.matrix(c, 2)?;
                self.dim(c, 3, &t.space)?;
                let (pi, po) = (self.uint(c, 4)?, self.uint(c, 5)?);
                let tr = Transform { inverse: m.inverse()?, direct: m };
                let root = transform_tree(&mut self.store, t.root, &t.space, &tr, pi, po)?;
                self.give_tree(c, root, t.space, true)
            }
            "KDEIGT" => {
                c.arity(3)?;
                let (t, p) = self.sized(c, 0, 2)?;
                self.dim(c, 1, &t.space)?;
                let frame = eigen_frame(&moments(&self.store, t.root, &t.space, p)?)?;
                let root = eigen_tree(&mut self.store, t.root, &t.space, &frame, p, p, true)?;
                self.give_tree(c, root, t.space, true)
            }
            "KDCOLT" => {
                c.arity(4)?;
                let (t, p) = self.sized(c, 0, 3)?;
                let color = self.real(c, 1)?;
                self.dim(c, 2, &t.space)?;
                let cut = assert_at(&mut self.store, t.root, &t.space, p)?;
                let root = colorize(&mut self.store, cut, color)?;
                self.give_tree(c, root, t.space, true)
            }

            // ---- pyramids
            "KDBTPY" => {
                c.arity(3)?;
                let t = self.handle(c, 0)?;
                let axis = self.axis(c, 1, &t.space)?;
                self.dim(c, 2, &t.space)?;
                let (root, space) = tree_to_pyramid(&mut self.store, t.root, &t.space, axis)?;
                self.give(c, Value::Pyramid(Handle { root, space }), false)
            }
            "KDPYBT" => {
                c.arity(2)?;
                let t = self.pyramid(c, 0)?;
                self.dim(c, 1, &t.space)?;
                let (root, space) = pyramid_to_tree(&mut self.store, t.root, &t.space)?;
                self.give(c, Value::Tree(Handle { root, space }), false)
            }
            "KDSUPY" => {
                c.arity(3)?;
                let (t, p) = self.sized(c, 0, 2)?;
                self.dim(c, 1, &t.space)?;
                let cut = assert_at(&mut self.store, t.root, &t.space, p)?;
                let root = self.store.support(cut);
                self.give(c, Value::Tree(Handle { root, space: t.space }), false)
            }
            "KDMIPY" | "KDMAPY" | "KDCTDP" => {
                c.arity(1)?;
                let t = self.pyramid(c, 0)?;
                let st = stats(&self.store, t.root)?;
                let v = match name {
                    "KDMIPY" => Value::Real(st.fmin),
                    "KDMAPY" => Value::Real(st.fmax),
                    _ => Value::List(List::Reals(vec![st.center, st.dispersion])),
                };
                self.give(c, v, false)
            }
            "KDSCAL" => {
                c.arity(3)?;
                let t = self.pyramid(c, 0)?;
                let (center, dispersion) = (self.real(c, 1)?, self.real(c, 2)?);
                let root = scale(&mut self.store, t.root, center, dispersion)?;
                self.give_tree(c, root, t.space, true)
            }
            "KD1MFP" | "KD0MFP" | "KD1EXT" | "KD0EXT" => {
                c.arity(2)?;
                let t = self.pyramid(c, 0)?;
                self.dim(c, 1, &t.space)?;
                let metric = metric_of(name);
                let (root, note) = if name.ends_with("MFP") {
                    (pyramid_median_filter(&mut self.store, t.root, &t.space, metric)?, String::new())
                } else {
                    let (r, steps) = pyramid_extend(&mut self.store, t.root, &t.space, metric)?;
                    (r, format!(" after {steps} steps"))
                };
                match self.give_tree(c, root, t.space, true)? {
                    Flow::Continue(m) => Ok(Flow::Continue(format!("{m}{note}"))),
                    stop => Ok(stop),
                }
            }
            "KDIMPY" => {
                c.arity(1)?;
                self.execute(&super::Command {
                    name: "KDRDPY".into(),
                    args: c.args.to_vec(),
                    result: c.result.map(str::to_string),
                })
            }
            "KDCLAL" => {
                c.arity(4)?;
                let alt = self.handle(c, 0)?;
                let plan = self.handle(c, 1)?;
                let space = unify(c, &alt, &plan, &self.store)?;
                self.dim(c, 2, &space)?;
                let p = self.uint(c, 3)?;
                let root = boolean(&mut self.store, BoolOp::Intersect, alt.root, Some(plan.root), &space, p)?;
                self.give_tree(c, root, space, true)
            }
            "KDDETZ" => {
                c.arity(2)?;
                let t = self.handle(c, 0)?;
                let v = self.reals(c, 1)?;
                if v.len() != t.space.dim() {
                    return Err(c.bad(1, format!("expected {} coordinates", t.space.k())));
                }
                let cell = quantize(&t.space, &v)?;
                let depth = t.space.depth();
                let code = cell_code(&t.space, t.space.r(), &cell[..t.space.dim()]);
                let mut n = t.root;
                for level in 0..depth {
                    if self.store.is_terminal(n) {
                        break;
                    }
                    let (l, r) = self.store.split(n);
                    n = if (code >> (depth - 1 - level)) & 1 == 0 { l } else { r };
                }
                let value = match self.store.node(n) {
                    Node::Valued(x) => x,
                    Node::Black => 1.0,
                    _ => return Err(c.bad(1, "point lies outside the support")),
                };
                self.give(c, Value::Real(value), false)
            }
            other => Err(ScriptError::UnknownCommand(other.to_string())),
        }
    }
}
