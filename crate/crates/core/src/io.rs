//! JSON interchange format.
//!
//! A file holds five optional sections, each a map from names to objects:
//!
//! ```json
//! {
//!   "lattices":  { "diamond": { "elements": [...], "order": [["a", "b"]], "top": "t", "bottom": "b" } },
//!   "graphs":    { "G": { "lattice": "bdd:p,q", "nodes": [{"id": "n", "label": "p"}],
//!                         "edges": [{"id": "e", "src": "n", "tgt": "m", "label": "0"}] } },
//!   "morphisms": { "m": { "dom": "L", "cod": "G", "nodeMap": {"a": "n"} } },
//!   "rules":     { "r": { "L": "L", "K": "K", "R": "R", "Lp": "Lp", "Kp": "Kp",
//!                         "l": {"nodeMap": {}}, "r": ..., "tL": ..., "tK": ..., "lp": ... } },
//!   "squares":   { "s": { "kind": "pullback", "p1": "m1", "p2": "m2", "f": "f", "g": "g" } }
//! }
//! ```
//!
//! Wherever an object is referenced it may be given by name or inline.
//! Omitted labels default to the lattice top. A morphism's `edgeMap` may be
//! left out when every edge has exactly one possible image. A rule may
//! instead be given as `{L, Lp, Kp, tL, lp, rSpec}`, from which `K`, `l`,
//! `t_K` and `R` are computed; `Kp` and `lp` default to `Lp` and the identity.

use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use serde_json::Value;
use thiserror::Error;

use crate::graph::{validate_graph, validate_morphism, EdgeId, GraphMorphism, LabeledGraph, NodeId};
use crate::lattice::{builtin_lattice, validate_lattice, Lattice, LatticeSpec};
use crate::limits::{PullbackSquare, PushoutSquare};
use crate::rewrite::{complete_rule, validate_rule, PbpoRule, RSpec, RewriteTrace};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum IoError {
    #[error("{path}: {message}")]
    Read { path: String, message: String },
    #[error("{source_name}:{line}:{column}: {message}")]
    Parse {
        source_name: String,
        line: usize,
        column: usize,
        message: String,
    },
    #[error("{context}: {message}")]
    Field { context: String, message: String },
    #[error("{context}: unknown {kind} `{name}`")]
    Dangling {
        context: String,
        kind: &'static str,
        name: String,
    },
    #[error("{kind} `{name}` is defined more than once")]
    Duplicate { kind: &'static str, name: String },
    #[error("{context}: {message}")]
    Invalid { context: String, message: String },
}

fn invalid(context: &str, message: impl fmt::Display) -> IoError {
    IoError::Invalid {
        context: context.to_string(),
        message: message.to_string(),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NodeRecord {
    pub id: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EdgeRecord {
    pub id: String,
    pub src: String,
    pub tgt: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum LatticeRef {
    Name(String),
    Inline(LatticeSpec),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GraphRecord {
    pub lattice: LatticeRef,
    #[serde(default)]
    pub nodes: Vec<NodeRecord>,
    #[serde(default)]
    pub edges: Vec<EdgeRecord>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum GraphRef {
    Name(String),
    Inline(GraphRecord),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "camelCase")]
pub struct MapRecord {
    #[serde(default)]
    pub node_map: BTreeMap<String, String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub edge_map: Option<BTreeMap<String, String>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "camelCase")]
pub struct MorphismRecord {
    pub dom: GraphRef,
    pub cod: GraphRef,
    #[serde(default)]
    pub node_map: BTreeMap<String, String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub edge_map: Option<BTreeMap<String, String>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
#[allow(clippy::large_enum_variant)]
pub enum MorphismRef {
    Name(String),
    Inline(MorphismRecord),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FullRuleRecord {
    #[serde(rename = "L")]
    pub lhs: GraphRef,
    #[serde(rename = "K")]
    pub interface: GraphRef,
    #[serde(rename = "R")]
    pub rhs: GraphRef,
    #[serde(rename = "Lp")]
    pub context: GraphRef,
    #[serde(rename = "Kp")]
    pub context_interface: GraphRef,
    pub l: MapRecord,
    pub r: MapRecord,
    #[serde(rename = "tL")]
    pub t_l: MapRecord,
    #[serde(rename = "tK")]
    pub t_k: MapRecord,
    pub lp: MapRecord,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ReducedRuleRecord {
    #[serde(rename = "L")]
    pub lhs: GraphRef,
    #[serde(rename = "Lp")]
    pub context: GraphRef,
    #[serde(rename = "Kp", default, skip_serializing_if = "Option::is_none")]
    pub context_interface: Option<GraphRef>,
    #[serde(rename = "tL")]
    pub t_l: MapRecord,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lp: Option<MapRecord>,
    #[serde(rename = "rSpec", default)]
    pub r_spec: RSpec,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(untagged)]
#[allow(clippy::large_enum_variant)]
pub enum RuleRecord {
    Full(FullRuleRecord),
    Reduced(ReducedRuleRecord),
}

impl<'de> Deserialize<'de> for RuleRecord {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        use serde::de::Error;
        let v = Value::deserialize(d)?;
        let full = v.get("K").is_some() || v.get("R").is_some();
        if full {
            serde_json::from_value(v).map(RuleRecord::Full).map_err(D::Error::custom)
        } else {
            serde_json::from_value(v).map(RuleRecord::Reduced).map_err(D::Error::custom)
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum SquareRecord {
    /// `p1: P -> B`, `p2: P -> C`, `f: B -> D`, `g: C -> D`
    Pullback {
        p1: MorphismRef,
        p2: MorphismRef,
        f: MorphismRef,
        g: MorphismRef,
    },
    /// `f: A -> B`, `g: A -> C`, `q1: B -> Q`, `q2: C -> Q`
    Pushout {
        f: MorphismRef,
        g: MorphismRef,
        q1: MorphismRef,
        q2: MorphismRef,
    },
}

/// One interchange file as written on disk.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WorkspaceFile {
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub lattices: BTreeMap<String, LatticeSpec>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub graphs: BTreeMap<String, GraphRecord>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub morphisms: BTreeMap<String, MorphismRecord>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub rules: BTreeMap<String, RuleRecord>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub squares: BTreeMap<String, SquareRecord>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Square {
    Pullback(PullbackSquare),
    Pushout(PushoutSquare),
}

/// Validated objects loaded from one or more files.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Workspace {
    pub lattices: BTreeMap<String, Arc<Lattice>>,
    pub graphs: BTreeMap<String, Arc<LabeledGraph>>,
    pub morphisms: BTreeMap<String, GraphMorphism>,
    pub rules: BTreeMap<String, PbpoRule>,
    pub squares: BTreeMap<String, Square>,
}

/// Parses one file's text; `source_name` only appears in diagnostics.
pub fn parse_file(text: &str, source_name: &str) -> Result<WorkspaceFile, IoError> {
    serde_json::from_str(text).map_err(|e| IoError::Parse {
        source_name: source_name.to_string(),
        line: e.line(),
        column: e.column(),
        message: e.to_string().split(" at line ").next().unwrap_or_default().to_string(),
    })
}

/// Loads and resolves every file in `paths` as one workspace.
pub fn parse_workspace<P: AsRef<Path>>(paths: &[P]) -> Result<Workspace, IoError> {
    let mut files = Vec::new();
    for p in paths {
        let p = p.as_ref();
        let text = std::fs::read_to_string(p).map_err(|e| IoError::Read {
            path: p.display().to_string(),
            message: e.to_string(),
        })?;
        files.push(parse_file(&text, &p.display().to_string())?);
    }
    Workspace::from_files(files)
}

fn merge_into<T>(
    dst: &mut BTreeMap<String, T>,
    src: BTreeMap<String, T>,
    kind: &'static str,
) -> Result<(), IoError> {
    for (k, v) in src {
        if dst.contains_key(&k) {
            return Err(IoError::Duplicate { kind, name: k });
        }
        dst.insert(k, v);
    }
    Ok(())
}

struct Resolver<'a> {
    lattices: BTreeMap<String, Arc<Lattice>>,
    builtins: BTreeMap<String, Arc<Lattice>>,
    file: &'a WorkspaceFile,
    graphs: BTreeMap<String, Arc<LabeledGraph>>,
    morphisms: BTreeMap<String, GraphMorphism>,
}

impl Resolver<'_> {
    fn lattice(&mut self, context: &str, r: &LatticeRef) -> Result<Arc<Lattice>, IoError> {
        match r {
            LatticeRef::Name(name) => {
                if let Some(l) = self.lattices.get(name).or_else(|| self.builtins.get(name)) {
                    return Ok(l.clone());
                }
                match builtin_lattice(name) {
                    Some(Ok(l)) => {
                        let l = Arc::new(l);
                        self.builtins.insert(name.clone(), l.clone());
                        Ok(l)
                    }
                    Some(Err(e)) => Err(invalid(context, e)),
                    None => Err(IoError::Dangling {
                        context: context.to_string(),
                        kind: "lattice",
                        name: name.clone(),
                    }),
                }
            }
            LatticeRef::Inline(spec) => {
                // named after where it was declared, so that it survives a round trip
                let l = build_lattice(context, context, spec)?;
                self.lattices.insert(context.to_string(), l.clone());
                Ok(l)
            }
        }
    }

    fn graph_record(&mut self, context: &str, rec: &GraphRecord) -> Result<Arc<LabeledGraph>, IoError> {
        let lat = self.lattice(&format!("{context}.lattice"), &rec.lattice)?;
        let mut g = LabeledGraph::new(lat.clone());
        let label = |ctx: &str, l: &Option<String>| match l {
            None => Ok(lat.top()),
            Some(name) => lat.label(name).map_err(|e| invalid(ctx, e)),
        };
        for (i, n) in rec.nodes.iter().enumerate() {
            let ctx = format!("{context}.nodes[{i}]");
            g.add_node(n.id.as_str(), label(&ctx, &n.label)?).map_err(|e| invalid(&ctx, e))?;
        }
        for (i, e) in rec.edges.iter().enumerate() {
            let ctx = format!("{context}.edges[{i}]");
            g.add_edge(e.id.as_str(), e.src.as_str(), e.tgt.as_str(), label(&ctx, &e.label)?)
                .map_err(|err| invalid(&ctx, err))?;
        }
        let report = validate_graph(&g);
        if !report.is_ok() {
            return Err(invalid(context, report));
        }
        Ok(Arc::new(g))
    }

    fn graph(&mut self, context: &str, r: &GraphRef) -> Result<Arc<LabeledGraph>, IoError> {
        match r {
            GraphRef::Inline(rec) => self.graph_record(context, rec),
            GraphRef::Name(name) => {
                if let Some(g) = self.graphs.get(name) {
                    return Ok(g.clone());
                }
                let Some(rec) = self.file.graphs.get(name) else {
                    return Err(IoError::Dangling {
                        context: context.to_string(),
                        kind: "graph",
                        name: name.clone(),
                    });
                };
                let g = self.graph_record(&format!("graphs.{name}"), rec)?;
                self.graphs.insert(name.clone(), g.clone());
                Ok(g)
            }
        }
    }

    fn maps(
        &self,
        context: &str,
        dom: Arc<LabeledGraph>,
        cod: Arc<LabeledGraph>,
        node_map: &BTreeMap<String, String>,
        edge_map: &Option<BTreeMap<String, String>>,
    ) -> Result<GraphMorphism, IoError> {
        let nodes: BTreeMap<NodeId, NodeId> = node_map.iter().map(|(a, b)| (a.as_str().into(), b.as_str().into())).collect();
        let f = match edge_map {
            Some(edges) => {
                let edges: BTreeMap<EdgeId, EdgeId> = edges.iter().map(|(a, b)| (a.as_str().into(), b.as_str().into())).collect();
                let f = GraphMorphism::new_unchecked(dom, cod, nodes, edges);
                let report = validate_morphism(&f);
                if !report.is_ok() {
                    return Err(invalid(context, report));
                }
                f
            }
            None => GraphMorphism::with_induced_edges(dom, cod, nodes, BTreeMap::new())
                .map_err(|e| invalid(context, e))?,
        };
        Ok(f)
    }

    fn morphism_record(&mut self, context: &str, rec: &MorphismRecord) -> Result<GraphMorphism, IoError> {
        let dom = self.graph(&format!("{context}.dom"), &rec.dom)?;
        let cod = self.graph(&format!("{context}.cod"), &rec.cod)?;
        self.maps(context, dom, cod, &rec.node_map, &rec.edge_map)
    }

    fn morphism(&mut self, context: &str, r: &MorphismRef) -> Result<GraphMorphism, IoError> {
        match r {
            MorphismRef::Inline(rec) => self.morphism_record(context, rec),
            MorphismRef::Name(name) => {
                if let Some(m) = self.morphisms.get(name) {
                    return Ok(m.clone());
                }
                let Some(rec) = self.file.morphisms.get(name) else {
                    return Err(IoError::Dangling {
                        context: context.to_string(),
                        kind: "morphism",
                        name: name.clone(),
                    });
                };
                let m = self.morphism_record(&format!("morphisms.{name}"), rec)?;
                self.morphisms.insert(name.clone(), m.clone());
                Ok(m)
            }
        }
    }

    fn rule(&mut self, context: &str, rec: &RuleRecord) -> Result<PbpoRule, IoError> {
        match rec {
            RuleRecord::Full(r) => {
                let l_g = self.graph(&format!("{context}.L"), &r.lhs)?;
                let k_g = self.graph(&format!("{context}.K"), &r.interface)?;
                let r_g = self.graph(&format!("{context}.R"), &r.rhs)?;
                let lp_g = self.graph(&format!("{context}.Lp"), &r.context)?;
                let kp_g = self.graph(&format!("{context}.Kp"), &r.context_interface)?;
                let m = |s: &Self, name: &str, rec: &MapRecord, dom: &Arc<LabeledGraph>, cod: &Arc<LabeledGraph>| {
                    s.maps(&format!("{context}.{name}"), dom.clone(), cod.clone(), &rec.node_map, &rec.edge_map)
                };
                let l = m(self, "l", &r.l, &k_g, &l_g)?;
                let rr = m(self, "r", &r.r, &k_g, &r_g)?;
                let t_l = m(self, "tL", &r.t_l, &l_g, &lp_g)?;
                let t_k = m(self, "tK", &r.t_k, &k_g, &kp_g)?;
                let lp = m(self, "lp", &r.lp, &kp_g, &lp_g)?;
                let rule = PbpoRule::from_parts_unchecked(l, rr, t_l, t_k, lp);
                let report = validate_rule(&rule);
                if !report.is_ok() {
                    return Err(invalid(context, report));
                }
                Ok(rule)
            }
            RuleRecord::Reduced(r) => {
                let l_g = self.graph(&format!("{context}.L"), &r.lhs)?;
                let lp_g = self.graph(&format!("{context}.Lp"), &r.context)?;
                let t_l = self.maps(&format!("{context}.tL"), l_g, lp_g.clone(), &r.t_l.node_map, &r.t_l.edge_map)?;
                let lp = match (&r.context_interface, &r.lp) {
                    (None, None) => GraphMorphism::identity(lp_g),
                    (Some(kp), Some(lp)) => {
                        let kp_g = self.graph(&format!("{context}.Kp"), kp)?;
                        self.maps(&format!("{context}.lp"), kp_g, lp_g, &lp.node_map, &lp.edge_map)?
                    }
                    _ => {
                        return Err(IoError::Field {
                            context: context.to_string(),
                            message: "`Kp` and `lp` must be given together".into(),
                        })
                    }
                };
                complete_rule(&t_l, &lp, &r.r_spec).map_err(|e| invalid(context, e))
            }
        }
    }
}

fn build_lattice(context: &str, name: &str, spec: &LatticeSpec) -> Result<Arc<Lattice>, IoError> {
    let report = validate_lattice(spec);
    if !report.is_ok() {
        return Err(invalid(context, report));
    }
    Lattice::new(name, spec).map(Arc::new).map_err(|e| invalid(context, e))
}

impl Workspace {
    /// Resolves references across `files` and validates every object.
    pub fn from_files(files: Vec<WorkspaceFile>) -> Result<Workspace, IoError> {
        let mut all = WorkspaceFile::default();
        for f in files {
            merge_into(&mut all.lattices, f.lattices, "lattice")?;
            merge_into(&mut all.graphs, f.graphs, "graph")?;
            merge_into(&mut all.morphisms, f.morphisms, "morphism")?;
            merge_into(&mut all.rules, f.rules, "rule")?;
            merge_into(&mut all.squares, f.squares, "square")?;
        }
        let mut lattices = BTreeMap::new();
        for (name, spec) in &all.lattices {
            lattices.insert(name.clone(), build_lattice(&format!("lattices.{name}"), name, spec)?);
        }
        let mut res = Resolver {
            lattices,
            builtins: BTreeMap::new(),
            file: &all,
            graphs: BTreeMap::new(),
            morphisms: BTreeMap::new(),
        };
        for name in all.graphs.keys() {
            res.graph(&format!("graphs.{name}"), &GraphRef::Name(name.clone()))?;
        }
        for name in all.morphisms.keys() {
            res.morphism(&format!("morphisms.{name}"), &MorphismRef::Name(name.clone()))?;
        }
        let mut rules = BTreeMap::new();
        for (name, rec) in &all.rules {
            rules.insert(name.clone(), res.rule(&format!("rules.{name}"), rec)?);
        }
        let mut squares = BTreeMap::new();
        for (name, rec) in &all.squares {
            let ctx = format!("squares.{name}");
            let sq = match rec {
                SquareRecord::Pullback { p1, p2, f, g } => Square::Pullback(PullbackSquare {
                    corner_left: res.morphism(&format!("{ctx}.p1"), p1)?,
                    corner_right: res.morphism(&format!("{ctx}.p2"), p2)?,
                    left: res.morphism(&format!("{ctx}.f"), f)?,
                    right: res.morphism(&format!("{ctx}.g"), g)?,
                }),
                SquareRecord::Pushout { f, g, q1, q2 } => Square::Pushout(PushoutSquare {
                    left: res.morphism(&format!("{ctx}.f"), f)?,
                    right: res.morphism(&format!("{ctx}.g"), g)?,
                    cocone_left: res.morphism(&format!("{ctx}.q1"), q1)?,
                    cocone_right: res.morphism(&format!("{ctx}.q2"), q2)?,
                }),
            };
            squares.insert(name.clone(), sq);
        }
        Ok(Workspace {
            lattices: res.lattices,
            graphs: res.graphs,
            morphisms: res.morphisms,
            rules,
            squares,
        })
    }

    /// Parses a single document.
    pub fn from_json(text: &str, source_name: &str) -> Result<Workspace, IoError> {
        Workspace::from_files(vec![parse_file(text, source_name)?])
    }

    /// The on-disk form. Rules are written in full form with inline graphs;
    /// morphisms and squares refer to graphs and morphisms by name where the
    /// workspace has an equal one.
    pub fn to_file(&self) -> WorkspaceFile {
        let mut w = Writer {
            ws: self,
            lattices: self.lattices.iter().map(|(k, v)| (k.clone(), v.to_spec())).collect(),
        };
        let graphs = self.graphs.iter().map(|(k, g)| (k.clone(), w.graph_record(g))).collect();
        let morphisms = self
            .morphisms
            .iter()
            .map(|(k, m)| (k.clone(), w.morphism_record(m)))
            .collect();
        let rules = self
            .rules
            .iter()
            .map(|(k, r)| {
                let rec = FullRuleRecord {
                    lhs: GraphRef::Inline(w.graph_record(r.lhs())),
                    interface: GraphRef::Inline(w.graph_record(r.interface())),
                    rhs: GraphRef::Inline(w.graph_record(r.rhs())),
                    context: GraphRef::Inline(w.graph_record(r.context())),
                    context_interface: GraphRef::Inline(w.graph_record(r.context_interface())),
                    l: map_record(r.l()),
                    r: map_record(r.r()),
                    t_l: map_record(r.t_l()),
                    t_k: map_record(r.t_k()),
                    lp: map_record(r.l_prime()),
                };
                (k.clone(), RuleRecord::Full(rec))
            })
            .collect();
        let squares = self
            .squares
            .iter()
            .map(|(k, s)| {
                let rec = match s {
                    Square::Pullback(sq) => SquareRecord::Pullback {
                        p1: w.morphism_ref(&sq.corner_left),
                        p2: w.morphism_ref(&sq.corner_right),
                        f: w.morphism_ref(&sq.left),
                        g: w.morphism_ref(&sq.right),
                    },
                    Square::Pushout(sq) => SquareRecord::Pushout {
                        f: w.morphism_ref(&sq.left),
                        g: w.morphism_ref(&sq.right),
                        q1: w.morphism_ref(&sq.cocone_left),
                        q2: w.morphism_ref(&sq.cocone_right),
                    },
                };
                (k.clone(), rec)
            })
            .collect();
        WorkspaceFile {
            lattices: w.lattices,
            graphs,
            morphisms,
            rules,
            squares,
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(&self.to_file()).expect("serializable");
        s.push('\n');
        s
    }

    /// A workspace holding a single graph.
    pub fn with_graph(name: &str, g: Arc<LabeledGraph>) -> Workspace {
        let mut ws = Workspace::default();
        ws.graphs.insert(name.to_string(), g);
        ws
    }
}

/// Every object and morphism of a rewrite step, named as in the step
/// diagram (`Lp`, `Kp` for the primed graphs; `GL`, `GK`, `GR` for the host
/// side).
pub fn trace_workspace(t: &RewriteTrace) -> Workspace {
    let mut ws = Workspace::default();
    let r = &t.rule;
    for (name, g) in [
        ("L", r.lhs()),
        ("K", r.interface()),
        ("R", r.rhs()),
        ("Lp", r.context()),
        ("Kp", r.context_interface()),
        ("GL", t.host()),
        ("GK", t.interface_host()),
        ("GR", t.result()),
    ] {
        ws.graphs.insert(name.to_string(), g.clone());
    }
    for (name, f) in [
        ("m", &t.m),
        ("alpha", &t.alpha),
        ("gL", &t.g_l),
        ("u'", &t.u_prime),
        ("u", &t.u),
        ("gR", &t.g_r),
        ("w", &t.w),
    ] {
        ws.morphisms.insert(name.to_string(), f.clone());
    }
    ws.rules.insert("rule".to_string(), r.clone());
    ws
}

struct Writer<'a> {
    ws: &'a Workspace,
    lattices: BTreeMap<String, LatticeSpec>,
}

fn map_record(f: &GraphMorphism) -> MapRecord {
    MapRecord {
        node_map: f.node_map().iter().map(|(a, b)| (a.to_string(), b.to_string())).collect(),
        edge_map: Some(f.edge_map().iter().map(|(a, b)| (a.to_string(), b.to_string())).collect()),
    }
}

impl Writer<'_> {
    fn lattice_ref(&mut self, lat: &Lattice) -> LatticeRef {
        let name = lat.name().to_string();
        let builtin = matches!(builtin_lattice(&name), Some(Ok(b)) if b == *lat);
        if !builtin && !self.lattices.contains_key(&name) {
            self.lattices.insert(name.clone(), lat.to_spec());
        }
        LatticeRef::Name(name)
    }

    fn graph_record(&mut self, g: &LabeledGraph) -> GraphRecord {
        GraphRecord {
            lattice: self.lattice_ref(g.lattice()),
            nodes: g
                .nodes()
                .map(|(n, l)| NodeRecord {
                    id: n.to_string(),
                    label: Some(g.label_name(l).to_string()),
                })
                .collect(),
            edges: g
                .edges()
                .map(|(id, e)| EdgeRecord {
                    id: id.to_string(),
                    src: e.src.to_string(),
                    tgt: e.tgt.to_string(),
                    label: Some(g.label_name(e.label).to_string()),
                })
                .collect(),
        }
    }

    fn graph_ref(&mut self, g: &Arc<LabeledGraph>) -> GraphRef {
        match self.ws.graphs.iter().find(|(_, h)| ***h == **g) {
            Some((name, _)) => GraphRef::Name(name.clone()),
            None => GraphRef::Inline(self.graph_record(g)),
        }
    }

    fn morphism_record(&mut self, f: &GraphMorphism) -> MorphismRecord {
        let m = map_record(f);
        MorphismRecord {
            dom: self.graph_ref(f.dom()),
            cod: self.graph_ref(f.cod()),
            node_map: m.node_map,
            edge_map: m.edge_map,
        }
    }

    fn morphism_ref(&mut self, f: &GraphMorphism) -> MorphismRef {
        match self.ws.morphisms.iter().find(|(_, h)| *h == f) {
            Some((name, _)) => MorphismRef::Name(name.clone()),
            None => MorphismRef::Inline(self.morphism_record(f)),
        }
    }
}
