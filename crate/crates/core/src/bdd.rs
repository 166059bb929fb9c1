//! Binary decision diagrams as labeled graphs, and their reduction by PBPO+
//! rewriting.
//!
//! Internal nodes are labeled by variables, leaves by `0` or `1`, and every
//! internal node has one `0`-edge and one `1`-edge. Three rule schemas reduce
//! a diagram: merging equal leaves, merging two nodes of the same variable
//! with the same children, and removing a node whose two edges share a
//! target. [`oracle_reduce`] builds the canonical reduced diagram directly
//! and serves as an independent check.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use crate::graph::{validate_graph, EdgeId, GraphError, GraphMorphism, LabeledGraph, NodeId};
use crate::lattice::{
    Label, Lattice, LatticeError, BDD_BOOL_CLASS, BDD_BOTTOM, BDD_ONE, BDD_TOP, BDD_VAR_CLASS, BDD_ZERO,
};
use crate::rewrite::{complete_rule, normalize, FreshEdge, NormalizeStatus, PbpoRule, RSpec, RewriteError, RewriteTrace};

/// Largest number of variables a truth table may have.
pub const MAX_VARS: usize = 16;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum BddError {
    #[error("too many variables: {0} (at most {MAX_VARS})")]
    TooManyVariables(usize),
    #[error("bad truth table: {0}")]
    BadTable(String),
    #[error("invalid BDD: {0}")]
    InvalidBdd(BddReport),
    #[error("not a BDD lattice: missing element `{0}`")]
    BadLattice(String),
    #[error("`{0}` is not a variable of the lattice")]
    UnknownVariable(String),
    #[error("assignment does not cover variable `{0}`")]
    Unassigned(String),
    #[error("reduction stopped before reaching a fixpoint")]
    NoFixpoint,
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Rewrite(#[from] RewriteError),
}

/// A Boolean function given by its outputs.
///
/// Output `i` belongs to the assignment whose bits spell `i` in binary, the
/// first variable being the most significant bit.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TruthTable {
    vars: Vec<String>,
    outputs: Vec<bool>,
}

impl TruthTable {
    pub fn new(vars: Vec<String>, outputs: Vec<bool>) -> Result<Self, BddError> {
        if vars.len() > MAX_VARS {
            return Err(BddError::TooManyVariables(vars.len()));
        }
        if outputs.len() != 1 << vars.len() {
            return Err(BddError::BadTable(format!(
                "{} variables need {} outputs, got {}",
                vars.len(),
                1usize << vars.len(),
                outputs.len()
            )));
        }
        // reject names the lattice would refuse
        Lattice::bdd(&vars)?;
        Ok(TruthTable { vars, outputs })
    }

    /// Parses a bitstring such as `0001` and a comma-separated variable list.
    pub fn parse(table: &str, vars: &str) -> Result<Self, BddError> {
        let vars: Vec<String> = if vars.trim().is_empty() {
            Vec::new()
        } else {
            vars.split(',').map(|v| v.trim().to_string()).collect()
        };
        let outputs = table
            .trim()
            .chars()
            .map(|c| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                other => Err(BddError::BadTable(format!("unexpected character `{other}`"))),
            })
            .collect::<Result<Vec<_>, _>>()?;
        TruthTable::new(vars, outputs)
    }

    /// Table of `f` over `vars`; `f` receives the assignment index.
    pub fn from_fn(vars: &[&str], f: impl Fn(usize) -> bool) -> Result<Self, BddError> {
        let n = vars.len();
        if n > MAX_VARS {
            return Err(BddError::TooManyVariables(n));
        }
        TruthTable::new(vars.iter().map(|v| v.to_string()).collect(), (0..1usize << n).map(f).collect())
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn outputs(&self) -> &[bool] {
        &self.outputs
    }

    pub fn get(&self, index: usize) -> bool {
        self.outputs[index]
    }

    /// The assignment with the given index.
    pub fn assignment(&self, index: usize) -> BTreeMap<String, bool> {
        let n = self.vars.len();
        self.vars
            .iter()
            .enumerate()
            .map(|(i, v)| (v.clone(), index >> (n - 1 - i) & 1 == 1))
            .collect()
    }

    pub fn bitstring(&self) -> String {
        self.outputs.iter().map(|b| if *b { '1' } else { '0' }).collect()
    }
}

/// A rooted diagram that passed [`validate_bdd`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Bdd {
    graph: Arc<LabeledGraph>,
    root: NodeId,
    vars: Vec<String>,
}

impl Bdd {
    /// Validates `graph` and locates its root.
    pub fn new(graph: Arc<LabeledGraph>, vars: Vec<String>) -> Result<Self, BddError> {
        let report = validate_bdd(&graph, None);
        if !report.is_ok() {
            return Err(BddError::InvalidBdd(report));
        }
        let root = root_of(&graph).expect("validated").clone();
        for l in graph.nodes().map(|(_, l)| l) {
            let name = graph.label_name(l);
            if is_variable(graph.lattice(), l) && !vars.iter().any(|v| v == name) {
                return Err(BddError::UnknownVariable(name.to_string()));
            }
        }
        Ok(Bdd { graph, root, vars })
    }

    /// Like [`Bdd::new`], reading the variable order off the lattice.
    pub fn from_graph(graph: Arc<LabeledGraph>) -> Result<Self, BddError> {
        let vars = lattice_vars(graph.lattice());
        Bdd::new(graph, vars)
    }

    pub fn graph(&self) -> &Arc<LabeledGraph> {
        &self.graph
    }

    pub fn root(&self) -> &NodeId {
        &self.root
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn node_count(&self) -> usize {
        self.graph.node_count()
    }
}

/// A node's label and, for inner nodes, the signature ids of its children.
type Signature = (Label, Option<(usize, usize)>);

fn root_of(g: &LabeledGraph) -> Option<&NodeId> {
    let mut has_in: BTreeSet<&NodeId> = BTreeSet::new();
    for (_, e) in g.edges() {
        has_in.insert(&e.tgt);
    }
    let mut roots = g.node_ids().filter(|n| !has_in.contains(n));
    let root = roots.next()?;
    roots.next().is_none().then_some(root)
}

fn is_variable(lat: &Lattice, l: Label) -> bool {
    let (Ok(var), Ok(bot)) = (lat.label(BDD_VAR_CLASS), lat.label(BDD_BOTTOM)) else {
        return false;
    };
    l != var && l != bot && lat.le(l, var)
}

/// Variables of a BDD lattice, in element order.
pub fn lattice_vars(lat: &Lattice) -> Vec<String> {
    lat.labels().filter(|l| is_variable(lat, *l)).map(|l| lat.name_of(l).to_string()).collect()
}

fn check_bdd_lattice(lat: &Lattice) -> Result<(), BddError> {
    for name in [BDD_ZERO, BDD_ONE, BDD_VAR_CLASS, BDD_BOOL_CLASS, BDD_TOP, BDD_BOTTOM] {
        if lat.label(name).is_err() {
            return Err(BddError::BadLattice(name.to_string()));
        }
    }
    Ok(())
}

fn node_id(path: &[bool]) -> String {
    let mut s = String::from("n");
    s.extend(path.iter().map(|b| if *b { '1' } else { '0' }));
    s
}

/// The complete decision tree of `t`: `2^(n+1) - 1` nodes, or one leaf when
/// `t` has no variables.
///
/// Node ids spell the path from the root (`n`, `n0`, `n01`, ...); the edge
/// into node `n<bits>` is `e<bits>`.
pub fn build_decision_tree(t: &TruthTable) -> Result<Bdd, BddError> {
    let n = t.vars.len();
    let lat = Arc::new(Lattice::bdd(&t.vars)?);
    let mut g = LabeledGraph::new(lat.clone());
    let zero = lat.label(BDD_ZERO)?;
    let one = lat.label(BDD_ONE)?;
    let mut path = Vec::with_capacity(n);
    fn go(
        g: &mut LabeledGraph,
        t: &TruthTable,
        path: &mut Vec<bool>,
        labels: (Label, Label),
        var_labels: &[Label],
    ) -> Result<(), BddError> {
        let depth = path.len();
        let id = node_id(path);
        if depth == t.vars.len() {
            let index = path.iter().fold(0usize, |acc, b| acc << 1 | *b as usize);
            g.add_node(id, if t.outputs[index] { labels.1 } else { labels.0 })?;
            return Ok(());
        }
        g.add_node(id.clone(), var_labels[depth])?;
        for bit in [false, true] {
            path.push(bit);
            go(g, t, path, labels, var_labels)?;
            let child = node_id(path);
            g.add_edge(format!("e{}", &child[1..]), id.clone(), child, if bit { labels.1 } else { labels.0 })?;
            path.pop();
        }
        Ok(())
    }
    let var_labels = t.vars.iter().map(|v| lat.label(v)).collect::<Result<Vec<_>, _>>()?;
    go(&mut g, t, &mut path, (zero, one), &var_labels)?;
    Ok(Bdd {
        graph: Arc::new(g),
        root: NodeId::new("n"),
        vars: t.vars.clone(),
    })
}

/// Follows the `0`-edge at a node whose variable is false and the `1`-edge
/// otherwise, returning the leaf reached.
pub fn evaluate(b: &Bdd, assignment: &BTreeMap<String, bool>) -> Result<bool, BddError> {
    let g = &b.graph;
    let invalid = |msg: String| {
        BddError::InvalidBdd(BddReport {
            violations: vec![BddViolation::Structure(msg)],
        })
    };
    let mut at = b.root.clone();
    for _ in 0..=g.node_count() {
        let label = g.node_label(at.as_str()).ok_or_else(|| invalid(format!("missing node `{at}`")))?;
        match g.label_name(label) {
            BDD_ZERO => return Ok(false),
            BDD_ONE => return Ok(true),
            var => {
                let value = *assignment.get(var).ok_or_else(|| BddError::Unassigned(var.to_string()))?;
                let want = if value { BDD_ONE } else { BDD_ZERO };
                let next = g
                    .out_edges(at.as_str())
                    .find(|(_, e)| g.label_name(e.label) == want)
                    .map(|(_, e)| e.tgt.clone())
                    .ok_or_else(|| invalid(format!("node `{at}` has no {want}-edge")))?;
                at = next;
            }
        }
    }
    Err(invalid("cycle reached from the root".into()))
}

/// Evaluates `b` on every assignment of its variables, in table order.
pub fn truth_table(b: &Bdd) -> Result<TruthTable, BddError> {
    let vars: Vec<&str> = b.vars.iter().map(String::as_str).collect();
    let template = TruthTable::from_fn(&vars, |_| false)?;
    let outputs = (0..template.outputs.len())
        .map(|i| evaluate(b, &template.assignment(i)))
        .collect::<Result<Vec<_>, _>>()?;
    TruthTable::new(b.vars.clone(), outputs)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum BddViolation {
    NotABddLattice(String),
    Graph(String),
    NoRoot,
    MultipleRoots(Vec<NodeId>),
    RootMismatch { hint: NodeId },
    BadLeafLabel(NodeId),
    BadInternalLabel(NodeId),
    BadEdgeLabel(EdgeId),
    BadOutDegree(NodeId),
    Cyclic,
    RepeatedVariable { node: NodeId, variable: String },
    Structure(String),
}

impl fmt::Display for BddViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BddViolation::NotABddLattice(e) => write!(f, "lattice lacks `{e}`"),
            BddViolation::Graph(e) => write!(f, "{e}"),
            BddViolation::NoRoot => write!(f, "no root"),
            BddViolation::MultipleRoots(r) => {
                let r: Vec<&str> = r.iter().map(|n| n.as_str()).collect();
                write!(f, "several roots: {}", r.join(", "))
            }
            BddViolation::RootMismatch { hint } => write!(f, "`{hint}` is not the root"),
            BddViolation::BadLeafLabel(n) => write!(f, "leaf `{n}` is not labeled 0 or 1"),
            BddViolation::BadInternalLabel(n) => write!(f, "internal node `{n}` is not labeled by a variable"),
            BddViolation::BadEdgeLabel(e) => write!(f, "edge `{e}` is not labeled 0 or 1"),
            BddViolation::BadOutDegree(n) => write!(f, "node `{n}` needs exactly one 0-edge and one 1-edge"),
            BddViolation::Cyclic => write!(f, "graph has a cycle"),
            BddViolation::RepeatedVariable { node, variable } => {
                write!(f, "variable `{variable}` repeats below node `{node}`")
            }
            BddViolation::Structure(s) => write!(f, "{s}"),
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct BddReport {
    pub violations: Vec<BddViolation>,
}

impl BddReport {
    pub fn is_ok(&self) -> bool {
        self.violations.is_empty()
    }
}

impl fmt::Display for BddReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.violations.is_empty() {
            return write!(f, "ok");
        }
        let parts: Vec<String> = self.violations.iter().map(|v| v.to_string()).collect();
        write!(f, "{}", parts.join("; "))
    }
}

/// Checks the diagram conditions: one root, leaves labeled `0`/`1`,
/// internal nodes labeled by variables with one `0`-edge and one `1`-edge,
/// acyclicity, and no variable repeated along a path.
pub fn validate_bdd(g: &LabeledGraph, root_hint: Option<&str>) -> BddReport {
    let mut v = Vec::new();
    if let Err(BddError::BadLattice(e)) = check_bdd_lattice(g.lattice()) {
        v.push(BddViolation::NotABddLattice(e));
        return BddReport { violations: v };
    }
    let gr = validate_graph(g);
    if !gr.is_ok() {
        v.push(BddViolation::Graph(gr.to_string()));
        return BddReport { violations: v };
    }
    let lat = g.lattice();
    let mut has_in: BTreeSet<&NodeId> = BTreeSet::new();
    for (id, e) in g.edges() {
        has_in.insert(&e.tgt);
        let name = g.label_name(e.label);
        if name != BDD_ZERO && name != BDD_ONE {
            v.push(BddViolation::BadEdgeLabel(id.clone()));
        }
    }
    let roots: Vec<NodeId> = g.node_ids().filter(|n| !has_in.contains(n)).cloned().collect();
    match roots.len() {
        0 => v.push(BddViolation::NoRoot),
        1 => {
            if let Some(h) = root_hint {
                if roots[0].as_str() != h {
                    v.push(BddViolation::RootMismatch { hint: NodeId::new(h) });
                }
            }
        }
        _ => v.push(BddViolation::MultipleRoots(roots)),
    }
    for (n, l) in g.nodes() {
        let outs: Vec<&str> = g.out_edges(n.as_str()).map(|(_, e)| g.label_name(e.label)).collect();
        let name = g.label_name(l);
        if outs.is_empty() {
            if name != BDD_ZERO && name != BDD_ONE {
                v.push(BddViolation::BadLeafLabel(n.clone()));
            }
        } else {
            if !is_variable(lat, l) {
                v.push(BddViolation::BadInternalLabel(n.clone()));
            }
            let zeros = outs.iter().filter(|o| **o == BDD_ZERO).count();
            let ones = outs.iter().filter(|o| **o == BDD_ONE).count();
            if outs.len() != 2 || zeros != 1 || ones != 1 {
                v.push(BddViolation::BadOutDegree(n.clone()));
            }
        }
    }
    // variables occurring strictly below each node, by memoized DFS
    let order = match topological_order(g) {
        Some(o) => o,
        None => {
            v.push(BddViolation::Cyclic);
            return BddReport { violations: v };
        }
    };
    let mut below: HashMap<&NodeId, BTreeSet<Label>> = HashMap::new();
    for n in order.iter().rev() {
        let mut set = BTreeSet::new();
        for (_, e) in g.out_edges(n.as_str()) {
            set.extend(below[&&e.tgt].iter().copied());
            let cl = g.node_label(e.tgt.as_str()).expect("validated graph");
            if is_variable(lat, cl) {
                set.insert(cl);
            }
        }
        let l = g.node_label(n.as_str()).expect("node");
        if is_variable(lat, l) && set.contains(&l) {
            v.push(BddViolation::RepeatedVariable {
                node: (*n).clone(),
                variable: g.label_name(l).to_string(),
            });
        }
        below.insert(n, set);
    }
    BddReport { violations: v }
}

/// Nodes in an order where every edge points forward, or `None` on a cycle.
fn topological_order(g: &LabeledGraph) -> Option<Vec<&NodeId>> {
    let mut indeg: BTreeMap<&NodeId, usize> = g.node_ids().map(|n| (n, 0)).collect();
    for (_, e) in g.edges() {
        *indeg.get_mut(&e.tgt)? += 1;
    }
    let mut ready: Vec<&NodeId> = indeg.iter().filter(|(_, d)| **d == 0).map(|(n, _)| *n).collect();
    let mut out = Vec::with_capacity(indeg.len());
    while let Some(n) = ready.pop() {
        out.push(n);
        for (_, e) in g.out_edges(n.as_str()) {
            let d = indeg.get_mut(&e.tgt)?;
            *d -= 1;
            if *d == 0 {
                let (k, _) = indeg.get_key_value(&e.tgt)?;
                ready.push(*k);
            }
        }
    }
    (out.len() == indeg.len()).then_some(out)
}

/// Why a diagram is not reduced.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Redundancy {
    /// Distinct nodes rooting isomorphic subgraphs.
    Isomorphic(NodeId, NodeId),
    /// A node whose two edges share a target.
    Vacuous(NodeId),
}

/// `Ok(())` when `b` is reduced, otherwise a witness.
pub fn is_reduced(b: &Bdd) -> Result<(), Redundancy> {
    let g = &b.graph;
    let children = |n: &NodeId| -> Option<(NodeId, NodeId)> {
        let mut lo = None;
        let mut hi = None;
        for (_, e) in g.out_edges(n.as_str()) {
            if g.label_name(e.label) == BDD_ONE {
                hi = Some(e.tgt.clone());
            } else {
                lo = Some(e.tgt.clone());
            }
        }
        Some((lo?, hi?))
    };
    for n in g.node_ids() {
        if let Some((lo, hi)) = children(n) {
            if lo == hi {
                return Err(Redundancy::Vacuous(n.clone()));
            }
        }
    }
    let order = topological_order(g).expect("validated BDD is acyclic");
    // signature ids and heights, bottom-up
    let mut sig_of: HashMap<NodeId, usize> = HashMap::new();
    let mut height: HashMap<NodeId, usize> = HashMap::new();
    let mut table: HashMap<Signature, Vec<NodeId>> = HashMap::new();
    for n in order.iter().rev() {
        let label = g.node_label(n.as_str()).expect("node");
        let key = match children(n) {
            None => {
                height.insert((*n).clone(), 0);
                (label, None)
            }
            Some((lo, hi)) => {
                height.insert((*n).clone(), 1 + height[&lo].max(height[&hi]));
                (label, Some((sig_of[&lo], sig_of[&hi])))
            }
        };
        let next = table.len();
        let entry = table.entry(key).or_default();
        let id = if let Some(first) = entry.first() { sig_of[first] } else { next };
        entry.push((*n).clone());
        sig_of.insert((*n).clone(), id);
    }
    let witness = table
        .values()
        .filter(|nodes| nodes.len() > 1)
        .map(|nodes| {
            let mut nodes = nodes.clone();
            nodes.sort();
            (height[&nodes[0]], nodes[0].clone(), nodes[1].clone())
        })
        .min();
    match witness {
        Some((_, a, b)) => Err(Redundancy::Isomorphic(a, b)),
        None => Ok(()),
    }
}

fn graph(
    lat: &Arc<Lattice>,
    nodes: &[(&str, &str)],
    edges: &[(&str, &str, &str, &str)],
) -> Result<Arc<LabeledGraph>, BddError> {
    Ok(Arc::new(LabeledGraph::from_names(lat.clone(), nodes, edges)?))
}

/// The id-preserving inclusion of `dom` into `cod`.
fn inclusion(dom: &Arc<LabeledGraph>, cod: &Arc<LabeledGraph>) -> Result<GraphMorphism, BddError> {
    Ok(GraphMorphism::new(
        dom.clone(),
        cod.clone(),
        dom.node_ids().map(|n| (n.clone(), n.clone())).collect(),
        dom.edge_ids().map(|e| (e.clone(), e.clone())).collect(),
    )?)
}

/// Merges two leaves carrying the same truth value.
pub fn leaf_rule(value: bool, lat: &Arc<Lattice>) -> Result<PbpoRule, BddError> {
    check_bdd_lattice(lat)?;
    let b = if value { BDD_ONE } else { BDD_ZERO };
    let l = graph(lat, &[("u", b), ("v", b)], &[])?;
    let lp = graph(
        lat,
        &[("u", b), ("v", b), ("c", BDD_TOP)],
        &[
            ("cc", "c", "c", BDD_BOOL_CLASS),
            ("cu", "c", "u", BDD_BOOL_CLASS),
            ("cv", "c", "v", BDD_BOOL_CLASS),
        ],
    )?;
    let spec = RSpec {
        merge_nodes: vec![vec!["u".into(), "v".into()]],
        ..Default::default()
    };
    Ok(complete_rule(&inclusion(&l, &lp)?, &GraphMorphism::identity(lp), &spec)?)
}

/// Merges two nodes of variable `var` that have the same `0`-child and the
/// same `1`-child.
pub fn merge_iso_rule(var: &str, lat: &Arc<Lattice>) -> Result<PbpoRule, BddError> {
    check_bdd_lattice(lat)?;
    let vl = lat.label(var).map_err(|_| BddError::UnknownVariable(var.to_string()))?;
    if !is_variable(lat, vl) {
        return Err(BddError::UnknownVariable(var.to_string()));
    }
    let pattern = [
        ("xz", "x", "z", BDD_ZERO),
        ("xu", "x", "u", BDD_ONE),
        ("yz", "y", "z", BDD_ZERO),
        ("yu", "y", "u", BDD_ONE),
    ];
    let l = graph(
        lat,
        &[("x", var), ("y", var), ("z", BDD_BOTTOM), ("u", BDD_BOTTOM)],
        &pattern,
    )?;
    let context_nodes = [("x", var), ("y", var), ("z", BDD_TOP), ("u", BDD_TOP), ("c", BDD_TOP)];
    let context_edges = [
        ("cc", "c", "c", BDD_BOOL_CLASS),
        ("cx", "c", "x", BDD_BOOL_CLASS),
        ("cy", "c", "y", BDD_BOOL_CLASS),
        ("cz", "c", "z", BDD_BOOL_CLASS),
        ("cu", "c", "u", BDD_BOOL_CLASS),
        ("zc", "z", "c", BDD_BOOL_CLASS),
        ("uc", "u", "c", BDD_BOOL_CLASS),
        ("zu", "z", "u", BDD_BOOL_CLASS),
        ("uz", "u", "z", BDD_BOOL_CLASS),
    ];
    let all_edges: Vec<_> = pattern.iter().chain(context_edges.iter()).copied().collect();
    let lp = graph(lat, &context_nodes, &all_edges)?;
    let kp = graph(lat, &context_nodes, &context_edges)?;
    let spec = RSpec {
        merge_nodes: vec![vec!["x".into(), "y".into()]],
        add_edges: vec![
            FreshEdge {
                id: "xz".into(),
                src: "x".into(),
                tgt: "z".into(),
                label: Some(BDD_ZERO.into()),
            },
            FreshEdge {
                id: "xu".into(),
                src: "x".into(),
                tgt: "u".into(),
                label: Some(BDD_ONE.into()),
            },
        ],
        ..Default::default()
    };
    Ok(complete_rule(&inclusion(&l, &lp)?, &inclusion(&kp, &lp)?, &spec)?)
}

/// Removes a node whose `0`- and `1`-edge share a target, redirecting its
/// incoming edges to that target.
pub fn elim_vacuous_rule(lat: &Arc<Lattice>) -> Result<PbpoRule, BddError> {
    check_bdd_lattice(lat)?;
    let l = graph(
        lat,
        &[("x", BDD_BOTTOM), ("y", BDD_BOTTOM)],
        &[("x0", "x", "y", BDD_ZERO), ("x1", "x", "y", BDD_ONE)],
    )?;
    let context_edges = [
        ("cc", "c", "c", BDD_BOOL_CLASS),
        ("cx", "c", "x", BDD_BOOL_CLASS),
        ("cy", "c", "y", BDD_BOOL_CLASS),
        ("yc", "y", "c", BDD_BOOL_CLASS),
    ];
    let mut lp_edges = vec![("x0", "x", "y", BDD_ZERO), ("x1", "x", "y", BDD_ONE)];
    lp_edges.extend(context_edges);
    let lp = graph(lat, &[("x", BDD_VAR_CLASS), ("y", BDD_TOP), ("c", BDD_TOP)], &lp_edges)?;
    // the bottom label on x erases the variable once pulled back
    let kp = graph(lat, &[("x", BDD_BOTTOM), ("y", BDD_TOP), ("c", BDD_TOP)], &context_edges)?;
    let spec = RSpec {
        merge_nodes: vec![vec!["y".into(), "x".into()]],
        ..Default::default()
    };
    Ok(complete_rule(&inclusion(&l, &lp)?, &inclusion(&kp, &lp)?, &spec)?)
}

/// `LEAF_0`, `LEAF_1`, one `MERGE_ISO` per variable, `ELIM_VACUOUS`.
pub fn bdd_rules(lat: &Arc<Lattice>) -> Result<Vec<PbpoRule>, BddError> {
    let mut rules = vec![leaf_rule(false, lat)?, leaf_rule(true, lat)?];
    for v in lattice_vars(lat) {
        rules.push(merge_iso_rule(&v, lat)?);
    }
    rules.push(elim_vacuous_rule(lat)?);
    Ok(rules)
}

#[derive(Debug, Clone)]
pub struct Reduction {
    pub bdd: Bdd,
    pub traces: Vec<RewriteTrace>,
}

/// Applies the reduction rules until none matches.
pub fn reduce_bdd(b: &Bdd) -> Result<Reduction, BddError> {
    let report = validate_bdd(&b.graph, Some(b.root.as_str()));
    if !report.is_ok() {
        return Err(BddError::InvalidBdd(report));
    }
    let rules = bdd_rules(b.graph.lattice())?;
    // every step removes a node
    let out = normalize(&b.graph, &rules, b.graph.node_count())?;
    if out.status != NormalizeStatus::Fixpoint {
        return Err(BddError::NoFixpoint);
    }
    Ok(Reduction {
        bdd: Bdd::new(out.graph, b.vars.clone())?,
        traces: out.traces,
    })
}

/// The canonical reduced diagram of `t`, built bottom-up with a unique table.
///
/// Leaves are `t0`/`t1`, internal nodes `v<k>` in creation order, and the
/// edges of node `a` are `a.0` and `a.1`.
pub fn oracle_reduce(t: &TruthTable) -> Result<Bdd, BddError> {
    enum Node {
        Leaf(bool),
        Inner(usize, usize, usize),
    }
    struct Builder {
        nodes: Vec<Node>,
        unique: HashMap<(usize, usize, usize), usize>,
    }
    impl Builder {
        fn mk(&mut self, var: usize, lo: usize, hi: usize) -> usize {
            if lo == hi {
                return lo;
            }
            if let Some(&id) = self.unique.get(&(var, lo, hi)) {
                return id;
            }
            self.nodes.push(Node::Inner(var, lo, hi));
            let id = self.nodes.len() - 1;
            self.unique.insert((var, lo, hi), id);
            id
        }
        fn build(&mut self, t: &TruthTable, var: usize, offset: usize) -> usize {
            if var == t.vars.len() {
                return t.outputs[offset] as usize;
            }
            let half = 1 << (t.vars.len() - var - 1);
            let lo = self.build(t, var + 1, offset);
            let hi = self.build(t, var + 1, offset + half);
            self.mk(var, lo, hi)
        }
    }
    let mut b = Builder {
        nodes: vec![Node::Leaf(false), Node::Leaf(true)],
        unique: HashMap::new(),
    };
    let root = b.build(t, 0, 0);

    let lat = Arc::new(Lattice::bdd(&t.vars)?);
    let name = |i: usize| if i < 2 { format!("t{i}") } else { format!("v{}", i - 2) };
    // keep only what the root reaches
    let mut reach = BTreeSet::new();
    let mut stack = vec![root];
    while let Some(i) = stack.pop() {
        if reach.insert(i) {
            if let Node::Inner(_, lo, hi) = b.nodes[i] {
                stack.extend([lo, hi]);
            }
        }
    }
    let mut g = LabeledGraph::new(lat.clone());
    for &i in &reach {
        let label = match b.nodes[i] {
            Node::Leaf(v) => lat.label(if v { BDD_ONE } else { BDD_ZERO })?,
            Node::Inner(var, _, _) => lat.label(&t.vars[var])?,
        };
        g.add_node(name(i), label)?;
    }
    for &i in &reach {
        if let Node::Inner(_, lo, hi) = b.nodes[i] {
            g.add_edge(format!("{}.0", name(i)), name(i), name(lo), lat.label(BDD_ZERO)?)?;
            g.add_edge(format!("{}.1", name(i)), name(i), name(hi), lat.label(BDD_ONE)?)?;
        }
    }
    Ok(Bdd {
        graph: Arc::new(g),
        root: NodeId::new(name(root)),
        vars: t.vars.clone(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::is_isomorphic;
    use crate::matching::find_matches;
    use crate::rewrite::pbpo_step;

    fn and() -> TruthTable {
        TruthTable::parse("0001", "p,q").unwrap()
    }

    fn assign(pairs: &[(&str, bool)]) -> BTreeMap<String, bool> {
        pairs.iter().map(|(k, v)| (k.to_string(), *v)).collect()
    }

    #[test]
    fn truth_table_parsing() {
        assert!(matches!(TruthTable::parse("001", "p,q"), Err(BddError::BadTable(_))));
        assert!(matches!(TruthTable::parse("0x01", "p,q"), Err(BddError::BadTable(_))));
        assert!(TruthTable::parse("0", "").is_ok());
        let vars: Vec<String> = (0..17).map(|i| format!("x{i}")).collect();
        assert_eq!(
            TruthTable::parse("0", &vars.join(",")).unwrap_err(),
            BddError::TooManyVariables(17)
        );
        assert_eq!(and().assignment(2), assign(&[("p", true), ("q", false)]));
    }

    #[test]
    fn decision_tree_sizes() {
        let tree = build_decision_tree(&and()).unwrap();
        assert_eq!(tree.node_count(), 7);
        assert_eq!(tree.root().as_str(), "n");
        let g = tree.graph();
        assert_eq!(g.label_name(g.node_label("n").unwrap()), "p");
        assert_eq!(g.label_name(g.node_label("n0").unwrap()), "q");
        assert_eq!(g.label_name(g.node_label("n11").unwrap()), "1");
        let leaves: Vec<&str> = ["n00", "n01", "n10", "n11"]
            .iter()
            .map(|n| g.label_name(g.node_label(n).unwrap()))
            .collect();
        assert_eq!(leaves, ["0", "0", "0", "1"]);

        let constant = build_decision_tree(&TruthTable::parse("0", "").unwrap()).unwrap();
        assert_eq!(constant.node_count(), 1);
        let single = build_decision_tree(&TruthTable::parse("01", "p").unwrap()).unwrap();
        assert_eq!(single.node_count(), 3);
    }

    #[test]
    fn evaluate_conjunction() {
        let tree = build_decision_tree(&and()).unwrap();
        assert!(evaluate(&tree, &assign(&[("p", true), ("q", true)])).unwrap());
        assert!(!evaluate(&tree, &assign(&[("p", true), ("q", false)])).unwrap());
        assert_eq!(
            evaluate(&tree, &assign(&[("p", true)])).unwrap_err(),
            BddError::Unassigned("q".into())
        );
        assert_eq!(truth_table(&tree).unwrap(), and());
    }

    #[test]
    fn validation_and_reducedness() {
        let tree = build_decision_tree(&and()).unwrap();
        assert!(validate_bdd(tree.graph(), Some("n")).is_ok());
        assert!(matches!(is_reduced(&tree), Err(Redundancy::Isomorphic(_, _))));
        let reduced = oracle_reduce(&and()).unwrap();
        assert_eq!(reduced.node_count(), 4);
        assert_eq!(is_reduced(&reduced), Ok(()));

        let lat = Arc::new(Lattice::bdd(&["p"]).unwrap());
        let vac = graph(&lat, &[("a", "p"), ("b", "1")], &[("0", "a", "b", "0"), ("1", "a", "b", "1")]).unwrap();
        let vac = Bdd::from_graph(vac).unwrap();
        assert_eq!(is_reduced(&vac), Err(Redundancy::Vacuous("a".into())));
    }

    #[test]
    fn validation_catches_each_condition() {
        let lat = Arc::new(Lattice::bdd(&["p", "q"]).unwrap());
        let has = |g: Arc<LabeledGraph>, pred: fn(&BddViolation) -> bool| validate_bdd(&g, None).violations.iter().any(pred);
        let two_roots = graph(&lat, &[("a", "0"), ("b", "1")], &[]).unwrap();
        assert!(has(two_roots, |v| matches!(v, BddViolation::MultipleRoots(_))));
        let bad_leaf = graph(&lat, &[("a", "p")], &[]).unwrap();
        assert!(has(bad_leaf, |v| matches!(v, BddViolation::BadLeafLabel(_))));
        let one_edge = graph(&lat, &[("a", "p"), ("b", "0")], &[("e", "a", "b", "0")]).unwrap();
        assert!(has(one_edge, |v| matches!(v, BddViolation::BadOutDegree(_))));
        let bool_edge = graph(
            &lat,
            &[("a", "p"), ("b", "0"), ("c", "1")],
            &[("e", "a", "b", "Bool"), ("f", "a", "c", "1")],
        )
        .unwrap();
        assert!(has(bool_edge, |v| matches!(v, BddViolation::BadEdgeLabel(_))));
        let repeated = graph(
            &lat,
            &[("a", "p"), ("b", "p"), ("z", "0"), ("o", "1")],
            &[
                ("a0", "a", "b", "0"),
                ("a1", "a", "o", "1"),
                ("b0", "b", "z", "0"),
                ("b1", "b", "o", "1"),
            ],
        )
        .unwrap();
        assert!(has(repeated, |v| matches!(v, BddViolation::RepeatedVariable { .. })));
        let cyclic = graph(
            &lat,
            &[("r", "q"), ("a", "p"), ("b", "q"), ("o", "1")],
            &[
                ("r0", "r", "a", "0"),
                ("r1", "r", "o", "1"),
                ("a0", "a", "b", "0"),
                ("a1", "a", "o", "1"),
                ("b0", "b", "a", "0"),
                ("b1", "b", "o", "1"),
            ],
        )
        .unwrap();
        assert!(has(cyclic, |v| matches!(v, BddViolation::Cyclic)));
    }

    #[test]
    fn rule_shapes() {
        let lat = Arc::new(Lattice::bdd(&["p", "q"]).unwrap());
        let leaf = leaf_rule(false, &lat).unwrap();
        assert_eq!(leaf.lhs().node_count(), 2);
        assert_eq!((leaf.context().node_count(), leaf.context().edge_count()), (3, 3));
        assert_eq!(leaf.rhs().node_count(), 1);
        assert!(is_isomorphic(leaf.interface(), leaf.lhs()).is_some());

        let merge = merge_iso_rule("q", &lat).unwrap();
        assert_eq!((merge.lhs().node_count(), merge.lhs().edge_count()), (4, 4));
        assert_eq!((merge.interface().node_count(), merge.interface().edge_count()), (4, 0));
        assert_eq!((merge.rhs().node_count(), merge.rhs().edge_count()), (3, 2));
        assert_eq!(merge_iso_rule("r", &lat).unwrap_err(), BddError::UnknownVariable("r".into()));
        assert_eq!(merge_iso_rule("Var", &lat).unwrap_err(), BddError::UnknownVariable("Var".into()));

        let elim = elim_vacuous_rule(&lat).unwrap();
        assert_eq!((elim.interface().node_count(), elim.interface().edge_count()), (2, 0));
        assert_eq!(elim.rhs().node_count(), 1);
        assert_eq!(elim.rhs().node_ids().next().unwrap().as_str(), "y");

        assert_eq!(bdd_rules(&lat).unwrap().len(), 5);
        let unit = Arc::new(Lattice::unit());
        assert!(matches!(leaf_rule(true, &unit), Err(BddError::BadLattice(_))));
    }

    #[test]
    fn leaf_rule_redirects_parent_edges() {
        let lat = Arc::new(Lattice::bdd(&["p"]).unwrap());
        let g = graph(
            &lat,
            &[("a", "p"), ("l", "0"), ("r", "0")],
            &[("a0", "a", "l", "0"), ("a1", "a", "r", "1")],
        )
        .unwrap();
        let rule = leaf_rule(false, &lat).unwrap();
        let matches = find_matches(&rule, &g).unwrap();
        assert_eq!(matches.len(), 2);
        let trace = pbpo_step(&rule, &matches[0], 1).unwrap();
        trace.verify().unwrap();
        let out = trace.result();
        assert_eq!(out.node_count(), 2);
        let targets: BTreeSet<&NodeId> = out.edges().map(|(_, e)| &e.tgt).collect();
        assert_eq!(targets.len(), 1);

        let one_leaf = graph(&lat, &[("l", "0")], &[]).unwrap();
        assert!(find_matches(&rule, &one_leaf).unwrap().is_empty());
    }

    #[test]
    fn leaf_rule_counts_ordered_pairs() {
        let tree = build_decision_tree(&and()).unwrap();
        let lat = tree.graph().lattice().clone();
        assert_eq!(find_matches(&leaf_rule(false, &lat).unwrap(), tree.graph()).unwrap().len(), 6);
        assert!(find_matches(&leaf_rule(true, &lat).unwrap(), tree.graph()).unwrap().is_empty());
    }

    #[test]
    fn merge_iso_step() {
        let lat = Arc::new(Lattice::bdd(&["p", "q"]).unwrap());
        // p with both children q-nodes sharing leaves
        let g = graph(
            &lat,
            &[("r", "p"), ("a", "q"), ("b", "q"), ("z", "0"), ("o", "1")],
            &[
                ("r0", "r", "a", "0"),
                ("r1", "r", "b", "1"),
                ("a0", "a", "z", "0"),
                ("a1", "a", "o", "1"),
                ("b0", "b", "z", "0"),
                ("b1", "b", "o", "1"),
            ],
        )
        .unwrap();
        let rule = merge_iso_rule("q", &lat).unwrap();
        let matches = find_matches(&rule, &g).unwrap();
        assert_eq!(matches.len(), 2);
        let trace = pbpo_step(&rule, &matches[0], 1).unwrap();
        trace.verify().unwrap();
        let out = trace.result();
        assert_eq!(out.node_count(), 4);
        let indeg = |n: &str| out.in_edges(n).count();
        assert_eq!((indeg("z"), indeg("o")), (1, 1));
        assert!(validate_bdd(out, None).is_ok());

        // distinct 0-children
        let h = graph(
            &lat,
            &[("r", "p"), ("a", "q"), ("b", "q"), ("z", "0"), ("o", "1")],
            &[
                ("r0", "r", "a", "0"),
                ("r1", "r", "b", "1"),
                ("a0", "a", "z", "0"),
                ("a1", "a", "o", "1"),
                ("b0", "b", "o", "0"),
                ("b1", "b", "z", "1"),
            ],
        )
        .unwrap();
        assert!(find_matches(&rule, &h).unwrap().is_empty());
    }

    #[test]
    fn elim_vacuous_root_and_mid_graph() {
        let lat = Arc::new(Lattice::bdd(&["p", "q"]).unwrap());
        let rule = elim_vacuous_rule(&lat).unwrap();
        let root = graph(&lat, &[("x", "p"), ("y", "1")], &[("0", "x", "y", "0"), ("1", "x", "y", "1")]).unwrap();
        let m = find_matches(&rule, &root).unwrap();
        assert_eq!(m.len(), 1);
        let trace = pbpo_step(&rule, &m[0], 1).unwrap();
        trace.verify().unwrap();
        let out = trace.result();
        assert_eq!(out.node_count(), 1);
        assert_eq!(out.edge_count(), 0);
        let (_, l) = out.nodes().next().unwrap();
        assert_eq!(out.label_name(l), "1");

        let mid = graph(
            &lat,
            &[("r", "p"), ("x", "q"), ("z", "0"), ("o", "1")],
            &[
                ("r0", "r", "x", "0"),
                ("r1", "r", "z", "1"),
                ("x0", "x", "o", "0"),
                ("x1", "x", "o", "1"),
            ],
        )
        .unwrap();
        let m = find_matches(&rule, &mid).unwrap();
        assert_eq!(m.len(), 1);
        let trace = pbpo_step(&rule, &m[0], 1).unwrap();
        trace.verify().unwrap();
        let out = trace.result();
        assert_eq!(out.node_count(), 3);
        let r0 = out.edge("r0").unwrap();
        assert_eq!(out.label_name(out.node_label(r0.tgt.as_str()).unwrap()), "1");
        assert!(validate_bdd(out, Some("r")).is_ok());

        let split = graph(
            &lat,
            &[("x", "p"), ("z", "0"), ("o", "1")],
            &[("0", "x", "z", "0"), ("1", "x", "o", "1")],
        )
        .unwrap();
        assert!(find_matches(&rule, &split).unwrap().is_empty());
    }

    #[test]
    fn reduce_conjunction() {
        let tree = build_decision_tree(&and()).unwrap();
        let red = reduce_bdd(&tree).unwrap();
        assert_eq!(red.traces.len(), 3);
        assert_eq!(red.bdd.node_count(), 4);
        assert!(is_isomorphic(red.bdd.graph(), oracle_reduce(&and()).unwrap().graph()).is_some());
        assert_eq!(truth_table(&red.bdd).unwrap(), and());

        let again = reduce_bdd(&red.bdd).unwrap();
        assert!(again.traces.is_empty());

        let zero = build_decision_tree(&TruthTable::parse("0000", "p,q").unwrap()).unwrap();
        let red = reduce_bdd(&zero).unwrap();
        assert_eq!((red.traces.len(), red.bdd.node_count()), (6, 1));
    }

    #[test]
    fn oracle_sizes() {
        assert_eq!(oracle_reduce(&and()).unwrap().node_count(), 4);
        assert_eq!(oracle_reduce(&TruthTable::parse("0110", "p,q").unwrap()).unwrap().node_count(), 5);
        assert_eq!(oracle_reduce(&TruthTable::parse("1111", "p,q").unwrap()).unwrap().node_count(), 1);
    }
}
