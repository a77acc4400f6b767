//! Interpreter values and the variable table.

use std::collections::BTreeMap;

use crate::attributes::{EigenFrame, MomentList};
use crate::geom::{HomMatrix, Polytope};
use crate::setops::InductiveFrame;
use crate::tree::{NodeRef, SpaceSpec};

/// A tree or pyramid root with the space it lives in.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Handle {
    pub root: NodeRef,
    pub space: SpaceSpec,
}

/// Which transformation a moment list has been through.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MomentStage {
    Raw,
    Centered,
    Normalized,
}

/// A moment list as shown to the script, with the raw moments it came from.
#[derive(Clone, Debug, PartialEq)]
pub struct Moments {
    pub raw: MomentList,
    pub view: MomentList,
    pub stage: MomentStage,
    pub precision: u32,
}

#[derive(Clone, Debug, PartialEq)]
pub enum List {
    Reals(Vec<f64>),
    Ints(Vec<i64>),
    Moments(Moments),
    /// Segment trees still to be extracted, lowest label first.
    Forest {
        trees: Vec<NodeRef>,
        space: SpaceSpec,
    },
}

impl List {
    pub fn len(&self) -> usize {
        match self {
            List::Reals(v) => v.len(),
            List::Ints(v) => v.len(),
            List::Moments(m) => m.view.len(),
            List::Forest { trees, .. } => trees.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Numeric content as reals, for vectors.
    pub fn reals(&self) -> Option<Vec<f64>> {
        match self {
            List::Reals(v) => Some(v.clone()),
            List::Ints(v) => Some(v.iter().map(|&i| i as f64).collect()),
            _ => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Value {
    Int(i64),
    Real(f64),
    Bool(bool),
    Tree(Handle),
    Pyramid(Handle),
    List(List),
    Matrix(HomMatrix),
    Frame(EigenFrame),
    Polytope(Polytope),
    /// A tree in inductive limit: black cells over a frame that grows with
    /// its content.
    Limit {
        root: NodeRef,
        frame: InductiveFrame,
        space: SpaceSpec,
    },
}

impl Value {
    pub fn kind(&self) -> &'static str {
        match self {
            Value::Int(_) => "integer",
            Value::Real(_) => "real",
            Value::Bool(_) => "boolean",
            Value::Tree(_) => "tree",
            Value::Pyramid(_) => "pyramid",
            Value::List(_) => "list",
            Value::Matrix(_) => "matrix",
            Value::Frame(_) => "frame",
            Value::Polytope(_) => "polytope",
            Value::Limit { .. } => "limit tree",
        }
    }
}

/// Named values. Removing a binding drops the value; tree nodes stay in the
/// store, which is shared by the whole session.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct VarTable {
    vars: BTreeMap<String, Value>,
}

impl VarTable {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn get(&self, name: &str) -> Option<&Value> {
        self.vars.get(name)
    }

    pub fn get_mut(&mut self, name: &str) -> Option<&mut Value> {
        self.vars.get_mut(name)
    }

    /// Bind `name`, returning the previous value.
    pub fn set(&mut self, name: &str, v: Value) -> Option<Value> {
        self.vars.insert(name.to_string(), v)
    }

    pub fn remove(&mut self, name: &str) -> Option<Value> {
        self.vars.remove(name)
    }

    pub fn contains(&self, name: &str) -> bool {
        self.vars.contains_key(name)
    }

    pub fn len(&self) -> usize {
        self.vars.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vars.is_empty()
    }

    /// Names in sorted order.
    pub fn iter(&self) -> impl Iterator<Item = (&str, &Value)> {
        self.vars.iter().map(|(k, v)| (k.as_str(), v))
    }
}
