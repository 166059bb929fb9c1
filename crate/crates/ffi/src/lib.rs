//! C ABI for the `pbpo` rewriting engine.
//!
//! Objects cross the boundary as opaque handles that the caller frees with
//! the matching `*_free` function. Every fallible call returns a
//! [`PbpoStatus`]; on failure [`pbpo_last_error_message`] describes the
//! error for the calling thread. Strings returned through out-parameters
//! are owned by the caller and released with [`pbpo_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;
use std::sync::Arc;

use pbpo::bdd::{build_decision_tree, oracle_reduce, reduce_bdd, TruthTable};
use pbpo::dot::emit_graph_dot;
use pbpo::graph::{is_isomorphic, LabeledGraph};
use pbpo::io::Workspace;
use pbpo::matching::find_matches;
use pbpo::rewrite::{normalize, pbpo_step, NormalizeStatus, PbpoRule as Rule};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PbpoStatus {
    Ok = 0,
    NullArgument = 1,
    InvalidUtf8 = 2,
    Parse = 3,
    Validation = 4,
    NotFound = 5,
    OutOfRange = 6,
    Rewrite = 7,
    Internal = 8,
}

/// A loaded interchange workspace.
pub struct PbpoWorkspace(Workspace);

/// A labeled graph.
pub struct PbpoGraph(Arc<LabeledGraph>);

/// A validated rewrite rule.
pub struct PbpoRule(Rule);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let msg = msg.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(msg).ok());
}

struct Error(PbpoStatus, String);

impl Error {
    fn new(status: PbpoStatus, msg: impl std::fmt::Display) -> Self {
        Error(status, msg.to_string())
    }
}

fn guard(f: impl FnOnce() -> Result<(), Error>) -> PbpoStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            LAST_ERROR.with(|e| *e.borrow_mut() = None);
            PbpoStatus::Ok
        }
        Ok(Err(Error(status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("internal error: panic inside pbpo");
            PbpoStatus::Internal
        }
    }
}

/// # Safety
/// `p` must be null or a valid NUL-terminated string.
unsafe fn string<'a>(p: *const c_char, what: &str) -> Result<&'a str, Error> {
    if p.is_null() {
        return Err(Error::new(PbpoStatus::NullArgument, format!("{what} is null")));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| Error::new(PbpoStatus::InvalidUtf8, format!("{what} is not UTF-8")))
}

/// # Safety
/// `p` must be null or point to a live value of type `T`.
unsafe fn borrow<'a, T>(p: *const T, what: &str) -> Result<&'a T, Error> {
    p.as_ref()
        .ok_or_else(|| Error::new(PbpoStatus::NullArgument, format!("{what} is null")))
}

fn out_ptr<T>(p: *mut T, what: &str) -> Result<(), Error> {
    if p.is_null() {
        Err(Error::new(PbpoStatus::NullArgument, format!("{what} is null")))
    } else {
        Ok(())
    }
}

fn owned_string(s: String) -> Result<*mut c_char, Error> {
    CString::new(s)
        .map(CString::into_raw)
        .map_err(|_| Error::new(PbpoStatus::Internal, "output contains a NUL byte"))
}

fn boxed_graph(g: Arc<LabeledGraph>) -> *mut PbpoGraph {
    Box::into_raw(Box::new(PbpoGraph(g)))
}

/// Message for the last failed call on this thread, or null. The pointer
/// stays valid until the next call into this library on the same thread.
#[no_mangle]
pub extern "C" fn pbpo_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// # Safety
/// `s` must be null or a string returned by this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn pbpo_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Parses a workspace document.
///
/// # Safety
/// `json` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn pbpo_workspace_load_json(json: *const c_char, out: *mut *mut PbpoWorkspace) -> PbpoStatus {
    guard(|| {
        let text = string(json, "json")?;
        out_ptr(out, "out")?;
        let ws = Workspace::from_json(text, "<memory>").map_err(|e| Error::new(PbpoStatus::Parse, e))?;
        *out = Box::into_raw(Box::new(PbpoWorkspace(ws)));
        Ok(())
    })
}

/// Loads a workspace file.
///
/// # Safety
/// `path` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn pbpo_workspace_load_file(path: *const c_char, out: *mut *mut PbpoWorkspace) -> PbpoStatus {
    guard(|| {
        let path = string(path, "path")?;
        out_ptr(out, "out")?;
        let ws = pbpo::io::parse_workspace(&[path]).map_err(|e| Error::new(PbpoStatus::Parse, e))?;
        *out = Box::into_raw(Box::new(PbpoWorkspace(ws)));
        Ok(())
    })
}

/// # Safety
/// `ws` must be null or a workspace from this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn pbpo_workspace_free(ws: *mut PbpoWorkspace) {
    if !ws.is_null() {
        drop(Box::from_raw(ws));
    }
}

/// Copies out the named graph.
///
/// # Safety
/// `ws` must be a live workspace, `name` a NUL-terminated string, `out` writable.
#[no_mangle]
pub unsafe extern "C" fn pbpo_workspace_graph(
    ws: *const PbpoWorkspace,
    name: *const c_char,
    out: *mut *mut PbpoGraph,
) -> PbpoStatus {
    guard(|| {
        let ws = borrow(ws, "workspace")?;
        let name = string(name, "name")?;
        out_ptr(out, "out")?;
        let g = ws.0.graphs.get(name).ok_or_else(|| Error::new(PbpoStatus::NotFound, format!("no graph `{name}`")))?;
        *out = boxed_graph(g.clone());
        Ok(())
    })
}

/// Copies out the named rule.
///
/// # Safety
/// `ws` must be a live workspace, `name` a NUL-terminated string, `out` writable.
#[no_mangle]
pub unsafe extern "C" fn pbpo_workspace_rule(
    ws: *const PbpoWorkspace,
    name: *const c_char,
    out: *mut *mut PbpoRule,
) -> PbpoStatus {
    guard(|| {
        let ws = borrow(ws, "workspace")?;
        let name = string(name, "name")?;
        out_ptr(out, "out")?;
        let r = ws.0.rules.get(name).ok_or_else(|| Error::new(PbpoStatus::NotFound, format!("no rule `{name}`")))?;
        *out = Box::into_raw(Box::new(PbpoRule(r.clone())));
        Ok(())
    })
}

/// # Safety
/// `g` must be null or a graph from this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn pbpo_graph_free(g: *mut PbpoGraph) {
    if !g.is_null() {
        drop(Box::from_raw(g));
    }
}

/// # Safety
/// `r` must be null or a rule from this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn pbpo_rule_free(r: *mut PbpoRule) {
    if !r.is_null() {
        drop(Box::from_raw(r));
    }
}

/// Number of nodes, or 0 for a null graph.
///
/// # Safety
/// `g` must be null or a live graph.
#[no_mangle]
pub unsafe extern "C" fn pbpo_graph_node_count(g: *const PbpoGraph) -> usize {
    g.as_ref().map_or(0, |g| g.0.node_count())
}

/// Number of edges, or 0 for a null graph.
///
/// # Safety
/// `g` must be null or a live graph.
#[no_mangle]
pub unsafe extern "C" fn pbpo_graph_edge_count(g: *const PbpoGraph) -> usize {
    g.as_ref().map_or(0, |g| g.0.edge_count())
}

/// Serializes `g` as a workspace document holding one graph named `name`.
///
/// # Safety
/// `g` must be a live graph, `name` a NUL-terminated string, `out` writable.
#[no_mangle]
pub unsafe extern "C" fn pbpo_graph_to_json(g: *const PbpoGraph, name: *const c_char, out: *mut *mut c_char) -> PbpoStatus {
    guard(|| {
        let g = borrow(g, "graph")?;
        let name = string(name, "name")?;
        out_ptr(out, "out")?;
        *out = owned_string(Workspace::with_graph(name, g.0.clone()).to_json())?;
        Ok(())
    })
}

/// Renders `g` as a Graphviz digraph.
///
/// # Safety
/// `g` must be a live graph, `name` a NUL-terminated string, `out` writable.
#[no_mangle]
pub unsafe extern "C" fn pbpo_graph_to_dot(g: *const PbpoGraph, name: *const c_char, out: *mut *mut c_char) -> PbpoStatus {
    guard(|| {
        let g = borrow(g, "graph")?;
        let name = string(name, "name")?;
        out_ptr(out, "out")?;
        *out = owned_string(emit_graph_dot(&g.0, name))?;
        Ok(())
    })
}

/// Writes whether `a` and `b` are isomorphic.
///
/// # Safety
/// `a`, `b` must be live graphs and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn pbpo_graph_is_isomorphic(a: *const PbpoGraph, b: *const PbpoGraph, out: *mut bool) -> PbpoStatus {
    guard(|| {
        let (a, b) = (borrow(a, "a")?, borrow(b, "b")?);
        out_ptr(out, "out")?;
        *out = is_isomorphic(&a.0, &b.0).is_some();
        Ok(())
    })
}

unsafe fn truth_table(table: *const c_char, vars: *const c_char) -> Result<TruthTable, Error> {
    let table = string(table, "table")?;
    let vars = string(vars, "vars")?;
    TruthTable::parse(table, vars).map_err(|e| Error::new(PbpoStatus::Validation, e))
}

/// The complete decision tree of a truth table such as `"0001"` over `"p,q"`.
///
/// # Safety
/// `table` and `vars` must be NUL-terminated strings; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn pbpo_bdd_build(table: *const c_char, vars: *const c_char, out: *mut *mut PbpoGraph) -> PbpoStatus {
    guard(|| {
        let t = truth_table(table, vars)?;
        out_ptr(out, "out")?;
        let b = build_decision_tree(&t).map_err(|e| Error::new(PbpoStatus::Validation, e))?;
        *out = boxed_graph(b.graph().clone());
        Ok(())
    })
}

/// Builds the decision tree and reduces it by rewriting. `steps` may be null.
///
/// # Safety
/// `table` and `vars` must be NUL-terminated strings; `out` writable; `steps`
/// null or writable.
#[no_mangle]
pub unsafe extern "C" fn pbpo_bdd_reduce(
    table: *const c_char,
    vars: *const c_char,
    out: *mut *mut PbpoGraph,
    steps: *mut usize,
) -> PbpoStatus {
    guard(|| {
        let t = truth_table(table, vars)?;
        out_ptr(out, "out")?;
        let tree = build_decision_tree(&t).map_err(|e| Error::new(PbpoStatus::Validation, e))?;
        let red = reduce_bdd(&tree).map_err(|e| Error::new(PbpoStatus::Rewrite, e))?;
        if !steps.is_null() {
            *steps = red.traces.len();
        }
        *out = boxed_graph(red.bdd.graph().clone());
        Ok(())
    })
}

/// The reduced diagram built directly with a unique table.
///
/// # Safety
/// `table` and `vars` must be NUL-terminated strings; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn pbpo_bdd_oracle(table: *const c_char, vars: *const c_char, out: *mut *mut PbpoGraph) -> PbpoStatus {
    guard(|| {
        let t = truth_table(table, vars)?;
        out_ptr(out, "out")?;
        let b = oracle_reduce(&t).map_err(|e| Error::new(PbpoStatus::Validation, e))?;
        *out = boxed_graph(b.graph().clone());
        Ok(())
    })
}

/// Number of strong matches of `rule` in `g`.
///
/// # Safety
/// `rule` and `g` must be live handles; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn pbpo_match_count(rule: *const PbpoRule, g: *const PbpoGraph, out: *mut usize) -> PbpoStatus {
    guard(|| {
        let (rule, g) = (borrow(rule, "rule")?, borrow(g, "graph")?);
        out_ptr(out, "out")?;
        *out = find_matches(&rule.0, &g.0).map_err(|e| Error::new(PbpoStatus::Rewrite, e))?.len();
        Ok(())
    })
}

/// Applies `rule` at match number `index` (in enumeration order).
///
/// # Safety
/// `rule` and `g` must be live handles; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn pbpo_apply(
    rule: *const PbpoRule,
    g: *const PbpoGraph,
    index: usize,
    out: *mut *mut PbpoGraph,
) -> PbpoStatus {
    guard(|| {
        let (rule, g) = (borrow(rule, "rule")?, borrow(g, "graph")?);
        out_ptr(out, "out")?;
        let matches = find_matches(&rule.0, &g.0).map_err(|e| Error::new(PbpoStatus::Rewrite, e))?;
        let m = matches.get(index).ok_or_else(|| {
            Error::new(
                PbpoStatus::OutOfRange,
                format!("match index {index} out of range ({} matches)", matches.len()),
            )
        })?;
        let trace = pbpo_step(&rule.0, m, 1).map_err(|e| Error::new(PbpoStatus::Rewrite, e))?;
        *out = boxed_graph(trace.result().clone());
        Ok(())
    })
}

/// Rewrites with the first applicable rule at its first match until no
/// rule applies or `max_steps` steps were taken. `steps` and `fixpoint` may
/// be null.
///
/// # Safety
/// `rules` must point to `count` live rule handles; `g` must be live; `out`
/// writable; `steps` and `fixpoint` null or writable.
#[no_mangle]
pub unsafe extern "C" fn pbpo_normalize(
    rules: *const *const PbpoRule,
    count: usize,
    g: *const PbpoGraph,
    max_steps: usize,
    out: *mut *mut PbpoGraph,
    steps: *mut usize,
    fixpoint: *mut bool,
) -> PbpoStatus {
    guard(|| {
        let g = borrow(g, "graph")?;
        out_ptr(out, "out")?;
        if rules.is_null() && count > 0 {
            return Err(Error::new(PbpoStatus::NullArgument, "rules is null"));
        }
        let mut rs = Vec::with_capacity(count);
        for i in 0..count {
            rs.push(borrow(*rules.add(i), "rule")?.0.clone());
        }
        let res = normalize(&g.0, &rs, max_steps).map_err(|e| Error::new(PbpoStatus::Rewrite, e))?;
        if !steps.is_null() {
            *steps = res.traces.len();
        }
        if !fixpoint.is_null() {
            *fixpoint = res.status == NormalizeStatus::Fixpoint;
        }
        *out = boxed_graph(res.graph);
        Ok(())
    })
}
