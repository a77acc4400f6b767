//! Sequential execution of parsed commands.
//!
//! A command without `= result` that transforms a structure replaces the
//! variable named by its first argument. Queries without a result are only
//! reported.

use std::collections::{BTreeMap, HashMap};
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use super::images::{snapshot, tree_from_pbm, tree_to_pbm, Pbm};
use super::parser::{Arg, Command, Statement};
use super::registry::{self, Class};
use super::value::{Handle, List, MomentStage, Value, VarTable};
use super::ScriptError;
use crate::geom::{project, HomMatrix};
use crate::pyramid::{pyramid_from_pgm, pyramid_to_pgm, Pgm};
use crate::tree::{decode, encode, from_kdt, mass, to_kdt, Metric, NodeRef, SpaceSpec, Store};

pub(super) type Res<T> = std::result::Result<T, ScriptError>;

/// What to do after a command.
#[derive(Clone, Debug, PartialEq)]
pub enum Flow {
    Continue(String),
    Stop(String),
}

/// One executed command.
#[derive(Clone, Debug, PartialEq)]
pub struct Entry {
    pub line: usize,
    pub command: String,
    pub outcome: Result<String, ScriptError>,
    /// Files written, relative to the output directory.
    pub files: Vec<String>,
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct Report {
    pub entries: Vec<Entry>,
    /// Set when KDSTOP or KDEND ended the run.
    pub stopped: bool,
}

impl Report {
    pub fn errors(&self) -> usize {
        self.entries.iter().filter(|e| e.outcome.is_err()).count()
    }

    pub fn first_error(&self) -> Option<&Entry> {
        self.entries.iter().find(|e| e.outcome.is_err())
    }

    pub fn files(&self) -> impl Iterator<Item = &str> {
        self.entries.iter().flat_map(|e| e.files.iter().map(String::as_str))
    }

    /// One line per command: `line N: COMMAND -> ok: message` or `-> error: ...`.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for e in &self.entries {
            let _ = match &e.outcome {
                Ok(m) => writeln!(out, "line {}: {} -> ok: {}", e.line, e.command, m),
                Err(err) => writeln!(out, "line {}: {} -> error: {}", e.line, e.command, err),
            };
            for f in &e.files {
                let _ = writeln!(out, "    wrote {f}");
            }
        }
        out
    }
}

#[derive(Clone, Debug, Default)]
struct Window {
    title: String,
    layers: Vec<(NodeRef, SpaceSpec, u32)>,
}

/// A command with its canonical name.
pub(super) struct Call<'a> {
    pub name: &'static str,
    pub args: &'a [Arg],
    pub result: Option<&'a str>,
}

impl Call<'_> {
    pub fn arity(&self, n: usize) -> Res<()> {
        self.arity_between(n, n)
    }

    pub fn arity_between(&self, min: usize, max: usize) -> Res<()> {
        let found = self.args.len();
        if found < min || found > max {
            let expected = if min == max {
                min.to_string()
            } else if max == usize::MAX {
                format!("at least {min}")
            } else {
                format!("{min} to {max}")
            };
            return Err(ScriptError::ArityMismatch { command: self.name.to_string(), expected, found });
        }
        Ok(())
    }

    pub fn bad(&self, index: usize, reason: impl Into<String>) -> ScriptError {
        ScriptError::BadArgument { command: self.name.to_string(), index, reason: reason.into() }
    }

    /// Argument `i`; a missing one is an arity error.
    pub fn arg(&self, i: usize) -> Res<&Arg> {
        self.args.get(i).ok_or_else(|| ScriptError::ArityMismatch {
            command: self.name.to_string(),
            expected: format!("at least {}", i + 1),
            found: self.args.len(),
        })
    }

    /// A bare word argument.
    pub fn word(&self, i: usize) -> Res<&str> {
        match self.arg(i)? {
            Arg::Ident(s) => Ok(s),
            other => Err(self.bad(i, format!("expected a name, found {other}"))),
        }
    }
}

fn mismatch(variable: &str, expected: &'static str, found: &str) -> ScriptError {
    ScriptError::TypeMismatch { variable: variable.to_string(), expected, found: found.to_string() }
}

/// Interpreter state: one store, one variable table, display windows.
pub struct Session {
    pub store: Store,
    pub vars: VarTable,
    out_dir: Option<PathBuf>,
    input_dirs: Vec<PathBuf>,
    windows: BTreeMap<i64, Window>,
    current: Option<i64>,
    /// Metric of the last adjacency analysis run on each variable.
    pub(super) analysed: HashMap<String, Metric>,
    written: Vec<String>,
}

impl Default for Session {
    fn default() -> Self {
        Self::new(None)
    }
}

impl Session {
    /// A session writing files under `out_dir`; without one, displays are
    /// only logged and file writes fail.
    pub fn new(out_dir: Option<PathBuf>) -> Self {
        Session {
            store: Store::new(),
            vars: VarTable::new(),
            out_dir,
            input_dirs: Vec::new(),
            windows: BTreeMap::new(),
            current: None,
            analysed: HashMap::new(),
            written: Vec::new(),
        }
    }

    /// Directories searched, in order, by read commands. The output
    /// directory is searched last.
    pub fn add_input_dir(&mut self, dir: impl Into<PathBuf>) {
        self.input_dirs.push(dir.into());
    }

    pub fn run(&mut self, statements: &[Statement], keep_going: bool) -> Report {
        let mut report = Report::default();
        for st in statements {
            let outcome = self.execute(&st.command);
            let files = std::mem::take(&mut self.written);
            let (outcome, stop) = match outcome {
                Ok(Flow::Continue(m)) => (Ok(m), false),
                Ok(Flow::Stop(m)) => (Ok(m), true),
                Err(e) => (Err(e), !keep_going),
            };
            let failed = outcome.is_err();
            report.entries.push(Entry { line: st.line, command: st.command.to_string(), outcome, files });
            if stop {
                report.stopped = !failed;
                break;
            }
        }
        report
    }

    pub fn execute(&mut self, cmd: &Command) -> Res<Flow> {
        let name = match registry::classify(&cmd.name) {
            None => return Err(ScriptError::UnknownCommand(cmd.name.clone())),
            Some(Class::OutOfScope(reason)) => return Err(ScriptError::OutOfScope { name: cmd.name.clone(), reason }),
            Some(_) => registry::canonical(&cmd.name).expect("classified names have a canonical form"),
        };
        let c = Call { name, args: &cmd.args, result: cmd.result.as_deref() };
        if registry::DISPLAY.contains(&name) {
            return self.display(&c);
        }
        match name {
            "KDEND" | "KDSTOP" => {
                c.arity(0)?;
                Ok(Flow::Stop("end".into()))
            }
            "KDPAUS" => {
                c.arity_between(0, 1)?;
                Ok(Flow::Continue("pause skipped".into()))
            }
            _ => {
                if let Some(flow) = self.variables(&c)? {
                    return Ok(flow);
                }
                if let Some(flow) = self.files(&c)? {
                    return Ok(flow);
                }
                self.operation(&c)
            }
        }
    }

    // ---- argument access

    pub(super) fn lookup(&self, c: &Call, i: usize, expected: &'static str) -> Res<&Value> {
        match c.arg(i)? {
            Arg::Ident(n) => self.vars.get(n).ok_or_else(|| mismatch(n, expected, "unbound")),
            lit => Err(mismatch(&lit.to_string(), expected, "a literal")),
        }
    }

    pub(super) fn int(&self, c: &Call, i: usize) -> Res<i64> {
        match c.arg(i)? {
            Arg::Int(v) => Ok(*v),
            Arg::Real(_) => Err(mismatch(&c.arg(i)?.to_string(), "integer", "real")),
            Arg::Ident(n) => match self.lookup(c, i, "integer")? {
                Value::Int(v) => Ok(*v),
                other => Err(mismatch(n, "integer", other.kind())),
            },
        }
    }

    pub(super) fn uint(&self, c: &Call, i: usize) -> Res<u32> {
        let v = self.int(c, i)?;
        u32::try_from(v).map_err(|_| c.bad(i, format!("{v} is not a non-negative integer")))
    }

    pub(super) fn real(&self, c: &Call, i: usize) -> Res<f64> {
        match c.arg(i)? {
            Arg::Int(v) => Ok(*v as f64),
            Arg::Real(v) => Ok(*v),
            Arg::Ident(n) => match self.lookup(c, i, "real")? {
                Value::Int(v) => Ok(*v as f64),
                Value::Real(v) => Ok(*v),
                other => Err(mismatch(n, "real", other.kind())),
            },
        }
    }

    /// A tree or a pyramid.
    pub(super) fn handle(&self, c: &Call, i: usize) -> Res<Handle> {
        match self.lookup(c, i, "tree")? {
            Value::Tree(h) | Value::Pyramid(h) => Ok(*h),
            other => Err(mismatch(c.word(i)?, "tree", other.kind())),
        }
    }

    pub(super) fn pyramid(&self, c: &Call, i: usize) -> Res<Handle> {
        match self.lookup(c, i, "pyramid")? {
            Value::Pyramid(h) => Ok(*h),
            other => Err(mismatch(c.word(i)?, "pyramid", other.kind())),
        }
    }

    pub(super) fn reals(&self, c: &Call, i: usize) -> Res<Vec<f64>> {
        match self.lookup(c, i, "list")? {
            Value::List(l) => l.reals().ok_or_else(|| c.bad(i, "expected a numeric vector")),
            other => Err(mismatch(c.word(i)?, "list", other.kind())),
        }
    }

    pub(super) fn matrix(&self, c: &Call, i: usize) -> Res<HomMatrix> {
        match self.lookup(c, i, "matrix")? {
            Value::Matrix(m) => Ok(m.clone()),
            other => Err(mismatch(c.word(i)?, "matrix", other.kind())),
        }
    }

    /// Check a dimension argument against a space.
    pub(super) fn dim(&self, c: &Call, i: usize, space: &SpaceSpec) -> Res<()> {
        let k = self.uint(c, i)?;
        if k != space.k() {
            return Err(c.bad(i, format!("dimension {k} does not match the structure's {}", space.k())));
        }
        Ok(())
    }

    /// Black or white from BLANC/WHITE/0 or NOIR/BLACK/1.
    pub(super) fn color(&self, c: &Call, i: usize) -> Res<bool> {
        match c.arg(i)? {
            Arg::Ident(w) if matches!(w.as_str(), "BLANC" | "WHITE") => Ok(false),
            Arg::Ident(w) if matches!(w.as_str(), "NOIR" | "BLACK") => Ok(true),
            _ => match self.int(c, i)? {
                0 => Ok(false),
                1 => Ok(true),
                v => Err(c.bad(i, format!("color {v} is neither 0 nor 1"))),
            },
        }
    }

    // ---- results

    pub(super) fn tree_value(&self, h: Handle) -> Value {
        if self.store.is_valued(h.root) {
            Value::Pyramid(h)
        } else {
            Value::Tree(h)
        }
    }

    /// Bind `v` to the result name, or to the first argument when `in_place`,
    /// or just report it.
    pub(super) fn give(&mut self, c: &Call, v: Value, in_place: bool) -> Res<Flow> {
        let msg = self.describe(&v);
        let target = match (c.result, in_place, c.args.first()) {
            (Some(r), _, _) => Some(r.to_string()),
            (None, true, Some(Arg::Ident(n))) => Some(n.clone()),
            _ => None,
        };
        match target {
            Some(t) => {
                self.vars.set(&t, v);
                Ok(Flow::Continue(format!("{t} = {msg}")))
            }
            None => Ok(Flow::Continue(msg)),
        }
    }

    pub(super) fn give_tree(&mut self, c: &Call, root: NodeRef, space: SpaceSpec, in_place: bool) -> Res<Flow> {
        let v = self.tree_value(Handle { root, space });
        self.give(c, v, in_place)
    }

    pub fn describe(&self, v: &Value) -> String {
        let reals = |v: &[f64]| v.iter().map(|x| format!("{x}")).collect::<Vec<_>>().join(" ");
        match v {
            Value::Int(i) => i.to_string(),
            Value::Real(x) => format!("{x}"),
            Value::Bool(b) => b.to_string(),
            Value::Tree(h) | Value::Pyramid(h) => {
                let cells = mass(&self.store, h.root, &h.space, h.space.r())
                    .map(|m| m.to_string())
                    .unwrap_or_else(|_| "?".into());
                format!(
                    "{} k={} r={} cells={} nodes={}",
                    v.kind(),
                    h.space.k(),
                    h.space.r(),
                    cells,
                    self.store.tree_size(h.root)
                )
            }
            Value::List(List::Reals(x)) => format!("vector [{}]", reals(x)),
            Value::List(List::Ints(x)) => {
                format!("vector [{}]", x.iter().map(i64::to_string).collect::<Vec<_>>().join(" "))
            }
            Value::List(List::Moments(m)) => {
                let stage = match m.stage {
                    MomentStage::Raw => "moments",
                    MomentStage::Centered => "centered moments",
                    MomentStage::Normalized => "normalized moments",
                };
                format!("{stage} ({} entries, mass {})", m.view.len(), m.raw.mass())
            }
            Value::List(List::Forest { trees, .. }) => format!("forest of {} segment trees", trees.len()),
            Value::Matrix(m) => format!("matrix {0}x{0}", m.k() + 1),
            Value::Frame(f) => format!("frame mass={} center=[{}] lambda=[{}]", f.mass, reals(&f.xg), reals(&f.lambda)),
            Value::Polytope(p) => format!("polytope with {} vertices", p.points().map(|v| v.len()).unwrap_or(0)),
            Value::Limit { frame, space, .. } => {
                format!(
                    "limit tree k={} r={} min=[{}] side={}",
                    space.k(),
                    space.r(),
                    reals(&frame.minspc()),
                    frame.side().to_f64()
                )
            }
        }
    }

    // ---- variables and structures

    fn variables(&mut self, c: &Call) -> Res<Option<Flow>> {
        let flow = match c.name {
            "KDINVR" | "KDMDVR" => {
                c.arity(4)?;
                let name = c.word(0)?.to_string();
                if c.name == "KDMDVR" && !self.vars.contains(&name) {
                    return Err(mismatch(&name, "a bound variable", "unbound"));
                }
                if self.int(c, 2)? != 0 {
                    return Err(c.bad(2, "only scalar variables (rank 0) are supported"));
                }
                let v = match c.word(1)? {
                    "MQINTG" => Value::Int(self.int(c, 3)?),
                    "MQREEL" => Value::Real(self.real(c, 3)?),
                    "MQLOGI" | "MQBOOL" => Value::Bool(match &c.args[3] {
                        Arg::Ident(w) if matches!(w.as_str(), "TRUE" | "VRAI") => true,
                        Arg::Ident(w) if matches!(w.as_str(), "FALSE" | "FAUX") => false,
                        _ => self.int(c, 3)? != 0,
                    }),
                    tag => return Err(c.bad(1, format!("unknown type tag {tag}"))),
                };
                let msg = format!("{name} = {}", self.describe(&v));
                self.vars.set(&name, v);
                Flow::Continue(msg)
            }
            "KDSUVR" | "KDDEDS" | "KDDEBT" => {
                c.arity(1)?;
                let name = c.word(0)?;
                if c.name == "KDDEBT" {
                    self.handle(c, 0)?;
                }
                self.vars.remove(name).ok_or_else(|| mismatch(name, "a bound variable", "unbound"))?;
                self.analysed.remove(name);
                Flow::Continue(format!("{name} deleted"))
            }
            "KDCPVR" | "KDCPST" => {
                c.arity_between(1, 2)?;
                let v = self.lookup(c, 0, "a bound variable")?.clone();
                let to = match (c.result, c.args.get(1)) {
                    (Some(r), _) => r.to_string(),
                    (None, Some(_)) => c.word(1)?.to_string(),
                    (None, None) => return Err(c.bad(0, "no destination")),
                };
                let msg = format!("{to} = {}", self.describe(&v));
                self.vars.set(&to, v);
                Flow::Continue(msg)
            }
            "KDRNVR" => {
                c.arity(2)?;
                let (from, to) = (c.word(0)?, c.word(1)?);
                let v = self.vars.remove(from).ok_or_else(|| mismatch(from, "a bound variable", "unbound"))?;
                self.vars.set(to, v);
                if let Some(m) = self.analysed.remove(from) {
                    self.analysed.insert(to.to_string(), m);
                }
                Flow::Continue(format!("{from} renamed {to}"))
            }
            "KDEXVR" => {
                c.arity(1)?;
                let b = self.vars.contains(c.word(0)?);
                return self.give(c, Value::Bool(b), false).map(Some);
            }
            "KDLSVR" | "KDLSST" | "KDPRLS" => {
                c.arity(1)?;
                let v = self.lookup(c, 0, "a bound variable")?;
                let mut msg = format!("{}: {}", c.word(0)?, self.describe(v));
                if let Value::List(List::Moments(m)) = v {
                    let entries: Vec<String> = m
                        .view
                        .iter()
                        .map(|(e, x)| format!("{}={x}", e.iter().map(u8::to_string).collect::<String>()))
                        .collect();
                    msg = format!("{msg}: {}", entries.join(" "));
                }
                Flow::Continue(msg)
            }
            "KDPRVR" => {
                c.arity(0)?;
                let all: Vec<String> = self.vars.iter().map(|(n, v)| format!("{n}:{}", v.kind())).collect();
                Flow::Continue(all.join(" "))
            }
            "KDTVAR" | "KDTBIN" | "KDTBTR" | "KDTBNV" | "KDTBTV" | "KDTPYR" | "KDTLIS" => {
                c.arity(1)?;
                let v = self.lookup(c, 0, "a bound variable")?;
                let b = match c.name {
                    "KDTVAR" => matches!(v, Value::Int(_) | Value::Real(_) | Value::Bool(_)),
                    "KDTBIN" | "KDTBTR" => matches!(v, Value::Tree(_) | Value::Pyramid(_)),
                    "KDTBNV" => matches!(v, Value::Tree(_)),
                    "KDTBTV" | "KDTPYR" => matches!(v, Value::Pyramid(_)),
                    _ => matches!(v, Value::List(_)),
                };
                return self.give(c, Value::Bool(b), false).map(Some);
            }
            "KDLGST" => {
                c.arity(1)?;
                let n = match self.lookup(c, 0, "a bound variable")? {
                    Value::Tree(h) | Value::Pyramid(h) => self.store.tree_size(h.root),
                    Value::List(l) => l.len(),
                    Value::Matrix(m) => m.k() + 1,
                    _ => 1,
                };
                return self.give(c, Value::Int(n as i64), false).map(Some);
            }
            "KDPRBT" | "KDPRPY" => {
                c.arity(1)?;
                let h = if c.name == "KDPRPY" { self.pyramid(c, 0)? } else { self.handle(c, 0)? };
                let code = encode(&self.store, h.root, &h.space)?;
                Flow::Continue(format!("code {}", abbreviate(code.code_str())))
            }
            _ => return Ok(None),
        };
        Ok(Some(flow))
    }

    // ---- files

    fn find_input(&self, name: &str, exts: &[&str]) -> Res<PathBuf> {
        for dir in self.input_dirs.iter().chain(self.out_dir.as_ref()) {
            let plain = dir.join(name);
            if plain.is_file() {
                return Ok(plain);
            }
            for ext in exts {
                let p = dir.join(format!("{name}.{ext}"));
                if p.is_file() {
                    return Ok(p);
                }
            }
        }
        Err(ScriptError::FileNotFound(name.to_string()))
    }

    fn read_bytes(path: &Path) -> Res<Vec<u8>> {
        std::fs::read(path).map_err(|e| ScriptError::Io { path: path.display().to_string(), reason: e.to_string() })
    }

    /// Write under the output directory and remember the file for the report.
    pub(super) fn write_output(&mut self, file: &str, bytes: &[u8]) -> Res<()> {
        let Some(dir) = &self.out_dir else {
            return Err(ScriptError::Io { path: file.to_string(), reason: "no output directory".into() });
        };
        let io = |e: std::io::Error| ScriptError::Io { path: file.to_string(), reason: e.to_string() };
        std::fs::create_dir_all(dir).map_err(io)?;
        std::fs::write(dir.join(file), bytes).map_err(io)?;
        self.written.push(file.to_string());
        Ok(())
    }

    fn read_structure(&mut self, path: &Path) -> Res<Handle> {
        let bytes = Self::read_bytes(path)?;
        let ext = path.extension().and_then(|e| e.to_str()).unwrap_or("");
        let (root, space) = match ext {
            "pbm" => tree_from_pbm(&mut self.store, &Pbm::parse(&bytes)?)?,
            "pgm" => pyramid_from_pgm(&mut self.store, &Pgm::parse(&bytes)?)?,
            _ => {
                let text = String::from_utf8_lossy(&bytes);
                let tc = from_kdt(&text)?;
                (decode(&mut self.store, &tc)?, tc.space)
            }
        };
        Ok(Handle { root, space })
    }

    fn files(&mut self, c: &Call) -> Res<Option<Flow>> {
        let flow = match c.name {
            "KDRDBT" | "KDRDPY" => {
                c.arity(1)?;
                let exts: &[&str] = if c.name == "KDRDBT" { &["kdt", "pbm"] } else { &["kdt", "pgm"] };
                let path = self.find_input(c.word(0)?, exts)?;
                let h = self.read_structure(&path)?;
                if c.name == "KDRDPY" && !self.store.is_valued(h.root) && h.root != NodeRef::WHITE {
                    return Err(mismatch(c.word(0)?, "pyramid", "tree"));
                }
                let v = self.tree_value(h);
                return self.give(c, v, false).map(Some);
            }
            "KDWRBT" | "KDWRPY" => {
                c.arity_between(2, 3)?;
                let h = if c.name == "KDWRPY" { self.pyramid(c, 0)? } else { self.handle(c, 0)? };
                let name = c.word(1)?;
                let format = if c.args.len() == 3 { c.word(2)?.to_ascii_uppercase() } else { "KDT".into() };
                let (file, bytes) = match (c.name, format.as_str()) {
                    (_, "KDT") => (format!("{name}.kdt"), to_kdt(&encode(&self.store, h.root, &h.space)?).into_bytes()),
                    ("KDWRBT", "PBM") => (format!("{name}.pbm"), tree_to_pbm(&self.store, h.root, &h.space)?.to_p4()),
                    ("KDWRPY", "PGM") => {
                        let side = 1usize << h.space.r();
                        (format!("{name}.pgm"), pyramid_to_pgm(&self.store, h.root, &h.space, side, side, 255)?.to_p5())
                    }
                    _ => return Err(c.bad(2, format!("unsupported format {format}"))),
                };
                self.write_output(&file, &bytes)?;
                Flow::Continue(format!("{} written", file))
            }
            "KDLSCN" | "KDRPYC" => {
                c.arity(1)?;
                let path = self.find_input(c.word(0)?, &["kdt"])?;
                let text = String::from_utf8_lossy(&Self::read_bytes(&path)?).into_owned();
                let tc = from_kdt(&text)?;
                if c.name == "KDRPYC" && !tc.valued {
                    return Err(mismatch(c.word(0)?, "pyramid", "tree"));
                }
                Flow::Continue(format!("k={} r={} code {}", tc.space.k(), tc.space.r(), abbreviate(tc.code_str())))
            }
            "KDEXFL" => {
                c.arity(1)?;
                let b = self.find_input(c.word(0)?, &["kdt", "pbm", "pgm"]).is_ok();
                return self.give(c, Value::Bool(b), false).map(Some);
            }
            _ => return Ok(None),
        };
        Ok(Some(flow))
    }

    // ---- display

    fn window(&mut self) -> (i64, &mut Window) {
        let id = match self.current {
            Some(id) => id,
            None => {
                let id = self.windows.keys().next_back().map_or(0, |k| k + 1);
                self.current = Some(id);
                id
            }
        };
        (id, self.windows.entry(id).or_default())
    }

    fn display(&mut self, c: &Call) -> Res<Flow> {
        let msg = match c.name {
            "KDINGR" => {
                self.current = None;
                let (id, _) = self.window();
                format!("window {id}")
            }
            "KDNWGR" => {
                c.arity(1)?;
                let id = self.int(c, 0)?;
                self.current = Some(id);
                self.windows.entry(id).or_default();
                format!("window {id}")
            }
            "KDMSGR" => {
                c.arity(1)?;
                let title = c.word(0)?.to_string();
                let (id, w) = self.window();
                w.title = title.clone();
                format!("window {id} titled {title}")
            }
            "KDERGR" => {
                let (id, w) = self.window();
                w.layers.clear();
                format!("window {id} erased")
            }
            "KDDSGR" | "KDCLGR" => match self.current.take() {
                Some(id) => {
                    self.windows.remove(&id);
                    format!("window {id} closed")
                }
                None => "no window".into(),
            },
            "KDQTGR" | "KDOTGR" | "KDPYGR" => {
                c.arity_between(1, 2)?;
                let mut h = self.handle(c, 0)?;
                let p = if c.args.len() == 2 { self.uint(c, 1)? } else { h.space.r() };
                h.space.depth_at(p)?;
                while h.space.k() > 2 {
                    let axis = h.space.dim() - 1;
                    let (root, space) = project(&mut self.store, h.root, &h.space, axis)?;
                    h = Handle { root, space };
                }
                if h.space.k() < 2 {
                    return Ok(Flow::Continue(format!("{}-space structure not drawn", h.space.k())));
                }
                let (id, w) = self.window();
                w.layers.push((h.root, h.space, p));
                let title = if w.title.is_empty() { "untitled".to_string() } else { sanitize(&w.title) };
                let layers = w.layers.clone();
                let file = format!("w{id}_{title}.pgm");
                if self.out_dir.is_none() {
                    return Ok(Flow::Continue(format!("window {id}: {} layer(s)", layers.len())));
                }
                let img = snapshot(&self.store, &layers)?;
                self.write_output(&file, &img.to_p5())?;
                format!("window {id}: {} layer(s)", layers.len())
            }
            other => format!("{other} ignored"),
        };
        Ok(Flow::Continue(msg))
    }
}

fn abbreviate(code: &str) -> String {
    const MAX: usize = 120;
    if code.len() <= MAX {
        code.to_string()
    } else {
        format!("{}... ({} symbols)", &code[..MAX], code.len())
    }
}

fn sanitize(title: &str) -> String {
    title.chars().map(|ch| if ch.is_ascii_alphanumeric() || ch == '_' || ch == '-' { ch } else { '_' }).collect()
}
