//! Lattice-labeled directed multigraphs and their morphisms.
//!
//! Morphisms are graph homomorphisms whose labels never decrease: for every
//! node or edge `x`, `label(x) <= label(f(x))`. Pullbacks therefore label
//! pairs by meets and pushouts label classes by joins.

use std::borrow::Borrow;
use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use crate::lattice::{Label, Lattice, LatticeError};
use crate::search::{HomProblem, LabelMode};

macro_rules! id_type {
    ($name:ident) => {
        #[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
        pub struct $name(String);

        impl $name {
            pub fn new(s: impl Into<String>) -> Self {
                $name(s.into())
            }

            pub fn as_str(&self) -> &str {
                &self.0
            }
        }

        impl fmt::Display for $name {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str(&self.0)
            }
        }

        impl From<&str> for $name {
            fn from(s: &str) -> Self {
                $name(s.to_string())
            }
        }

        impl From<String> for $name {
            fn from(s: String) -> Self {
                $name(s)
            }
        }

        impl From<&$name> for $name {
            fn from(s: &$name) -> Self {
                s.clone()
            }
        }

        impl Borrow<str> for $name {
            fn borrow(&self) -> &str {
                &self.0
            }
        }
    };
}

id_type!(NodeId);
id_type!(EdgeId);

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("duplicate node `{0}`")]
    DuplicateNode(NodeId),
    #[error("duplicate edge `{0}`")]
    DuplicateEdge(EdgeId),
    #[error("edge `{0}` has unknown endpoint `{1}`")]
    DanglingEndpoint(EdgeId, NodeId),
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error("graphs are labeled over different lattices (`{0}` vs `{1}`)")]
    LatticeMismatch(String, String),
    #[error("invalid graph: {0}")]
    InvalidGraph(GraphReport),
    #[error("invalid morphism: {0}")]
    InvalidMorphism(MorphismReport),
    #[error("codomain of the first morphism is not the domain of the second")]
    DomainMismatch,
    #[error("edge map for `{0}` is ambiguous; give it explicitly")]
    AmbiguousEdge(EdgeId),
    #[error("no edge can receive `{0}`")]
    NoEdgeImage(EdgeId),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Edge {
    pub src: NodeId,
    pub tgt: NodeId,
    pub label: Label,
}

#[derive(Clone)]
pub struct LabeledGraph {
    lattice: Arc<Lattice>,
    nodes: BTreeMap<NodeId, Label>,
    edges: BTreeMap<EdgeId, Edge>,
}

pub(crate) fn same_lattice(a: &Arc<Lattice>, b: &Arc<Lattice>) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

impl PartialEq for LabeledGraph {
    fn eq(&self, other: &Self) -> bool {
        same_lattice(&self.lattice, &other.lattice)
            && self.nodes == other.nodes
            && self.edges == other.edges
    }
}

impl Eq for LabeledGraph {}

impl fmt::Debug for LabeledGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let lat = &self.lattice;
        let name = |l: Label| {
            if lat.contains(l) {
                lat.name_of(l).to_string()
            } else {
                format!("#{}", l.index())
            }
        };
        write!(f, "Graph[{}] {{", lat.name())?;
        for (n, l) in &self.nodes {
            write!(f, " {n}:{}", name(*l))?;
        }
        write!(f, " |")?;
        for (e, edge) in &self.edges {
            write!(f, " {e}:{}->{}:{}", edge.src, edge.tgt, name(edge.label))?;
        }
        write!(f, " }}")
    }
}

impl LabeledGraph {
    pub fn new(lattice: Arc<Lattice>) -> Self {
        LabeledGraph {
            lattice,
            nodes: BTreeMap::new(),
            edges: BTreeMap::new(),
        }
    }

    /// Builds a graph without any checks; see [`validate_graph`].
    pub fn from_parts_unchecked(
        lattice: Arc<Lattice>,
        nodes: BTreeMap<NodeId, Label>,
        edges: BTreeMap<EdgeId, Edge>,
    ) -> Self {
        LabeledGraph { lattice, nodes, edges }
    }

    /// Builds a graph from label names. Handy for fixtures.
    pub fn from_names(
        lattice: Arc<Lattice>,
        nodes: &[(&str, &str)],
        edges: &[(&str, &str, &str, &str)],
    ) -> Result<Self, GraphError> {
        let mut g = LabeledGraph::new(lattice);
        for (id, label) in nodes {
            let l = g.lattice.label(label)?;
            g.add_node(*id, l)?;
        }
        for (id, s, t, label) in edges {
            let l = g.lattice.label(label)?;
            g.add_edge(*id, *s, *t, l)?;
        }
        Ok(g)
    }

    pub fn add_node(&mut self, id: impl Into<NodeId>, label: Label) -> Result<(), GraphError> {
        let id = id.into();
        if !self.lattice.contains(label) {
            return Err(LatticeError::ForeignLabel(label.index(), self.lattice.name().into()).into());
        }
        if self.nodes.contains_key(&id) {
            return Err(GraphError::DuplicateNode(id));
        }
        self.nodes.insert(id, label);
        Ok(())
    }

    pub fn add_edge(
        &mut self,
        id: impl Into<EdgeId>,
        src: impl Into<NodeId>,
        tgt: impl Into<NodeId>,
        label: Label,
    ) -> Result<(), GraphError> {
        let (id, src, tgt) = (id.into(), src.into(), tgt.into());
        if !self.lattice.contains(label) {
            return Err(LatticeError::ForeignLabel(label.index(), self.lattice.name().into()).into());
        }
        if self.edges.contains_key(&id) {
            return Err(GraphError::DuplicateEdge(id));
        }
        for end in [&src, &tgt] {
            if !self.nodes.contains_key(end) {
                return Err(GraphError::DanglingEndpoint(id, end.clone()));
            }
        }
        self.edges.insert(id, Edge { src, tgt, label });
        Ok(())
    }

    pub fn lattice(&self) -> &Arc<Lattice> {
        &self.lattice
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty() && self.edges.is_empty()
    }

    pub fn nodes(&self) -> impl Iterator<Item = (&NodeId, Label)> + '_ {
        self.nodes.iter().map(|(n, l)| (n, *l))
    }

    pub fn edges(&self) -> impl Iterator<Item = (&EdgeId, &Edge)> + '_ {
        self.edges.iter()
    }

    pub fn node_ids(&self) -> impl Iterator<Item = &NodeId> + '_ {
        self.nodes.keys()
    }

    pub fn edge_ids(&self) -> impl Iterator<Item = &EdgeId> + '_ {
        self.edges.keys()
    }

    pub fn has_node(&self, id: &str) -> bool {
        self.nodes.contains_key(id)
    }

    pub fn has_edge(&self, id: &str) -> bool {
        self.edges.contains_key(id)
    }

    pub fn node_label(&self, id: &str) -> Option<Label> {
        self.nodes.get(id).copied()
    }

    pub fn edge(&self, id: &str) -> Option<&Edge> {
        self.edges.get(id)
    }

    pub fn out_edges<'a>(&'a self, n: &'a str) -> impl Iterator<Item = (&'a EdgeId, &'a Edge)> + 'a {
        self.edges.iter().filter(move |(_, e)| e.src.as_str() == n)
    }

    pub fn in_edges<'a>(&'a self, n: &'a str) -> impl Iterator<Item = (&'a EdgeId, &'a Edge)> + 'a {
        self.edges.iter().filter(move |(_, e)| e.tgt.as_str() == n)
    }

    /// Name of a label in this graph's lattice.
    pub fn label_name(&self, l: Label) -> &str {
        self.lattice.name_of(l)
    }

    /// A copy with ids renamed; ids missing from the maps are kept.
    pub fn renamed(
        &self,
        node_names: &BTreeMap<NodeId, NodeId>,
        edge_names: &BTreeMap<EdgeId, EdgeId>,
    ) -> LabeledGraph {
        let rn = |n: &NodeId| node_names.get(n).cloned().unwrap_or_else(|| n.clone());
        let re = |e: &EdgeId| edge_names.get(e).cloned().unwrap_or_else(|| e.clone());
        LabeledGraph {
            lattice: self.lattice.clone(),
            nodes: self.nodes.iter().map(|(n, l)| (rn(n), *l)).collect(),
            edges: self
                .edges
                .iter()
                .map(|(e, edge)| {
                    (
                        re(e),
                        Edge {
                            src: rn(&edge.src),
                            tgt: rn(&edge.tgt),
                            label: edge.label,
                        },
                    )
                })
                .collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GraphViolation {
    DanglingSource(EdgeId, NodeId),
    DanglingTarget(EdgeId, NodeId),
    ForeignNodeLabel(NodeId),
    ForeignEdgeLabel(EdgeId),
}

impl fmt::Display for GraphViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GraphViolation::DanglingSource(e, n) => write!(f, "edge `{e}` has missing source `{n}`"),
            GraphViolation::DanglingTarget(e, n) => write!(f, "edge `{e}` has missing target `{n}`"),
            GraphViolation::ForeignNodeLabel(n) => write!(f, "node `{n}` has a label outside the lattice"),
            GraphViolation::ForeignEdgeLabel(e) => write!(f, "edge `{e}` has a label outside the lattice"),
        }
    }
}

macro_rules! report_type {
    ($name:ident, $violation:ty) => {
        #[derive(Debug, Clone, Default, PartialEq, Eq)]
        pub struct $name {
            pub violations: Vec<$violation>,
        }

        impl $name {
            pub fn is_ok(&self) -> bool {
                self.violations.is_empty()
            }
        }

        impl fmt::Display for $name {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                if self.violations.is_empty() {
                    return write!(f, "ok");
                }
                let parts: Vec<String> = self.violations.iter().map(|v| v.to_string()).collect();
                write!(f, "{}", parts.join("; "))
            }
        }
    };
}

report_type!(GraphReport, GraphViolation);

pub fn validate_graph(g: &LabeledGraph) -> GraphReport {
    let mut violations = Vec::new();
    for (n, l) in &g.nodes {
        if !g.lattice.contains(*l) {
            violations.push(GraphViolation::ForeignNodeLabel(n.clone()));
        }
    }
    for (e, edge) in &g.edges {
        if !g.nodes.contains_key(&edge.src) {
            violations.push(GraphViolation::DanglingSource(e.clone(), edge.src.clone()));
        }
        if !g.nodes.contains_key(&edge.tgt) {
            violations.push(GraphViolation::DanglingTarget(e.clone(), edge.tgt.clone()));
        }
        if !g.lattice.contains(edge.label) {
            violations.push(GraphViolation::ForeignEdgeLabel(e.clone()));
        }
    }
    GraphReport { violations }
}

/// A structure- and label-preserving map between two graphs.
#[derive(Clone)]
pub struct GraphMorphism {
    dom: Arc<LabeledGraph>,
    cod: Arc<LabeledGraph>,
    nodes: BTreeMap<NodeId, NodeId>,
    edges: BTreeMap<EdgeId, EdgeId>,
}

impl PartialEq for GraphMorphism {
    fn eq(&self, other: &Self) -> bool {
        self.nodes == other.nodes
            && self.edges == other.edges
            && same_graph(&self.dom, &other.dom)
            && same_graph(&self.cod, &other.cod)
    }
}

impl Eq for GraphMorphism {}

impl fmt::Debug for GraphMorphism {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Morphism {{")?;
        for (a, b) in &self.nodes {
            write!(f, " {a}->{b}")?;
        }
        write!(f, " |")?;
        for (a, b) in &self.edges {
            write!(f, " {a}->{b}")?;
        }
        write!(f, " }}")
    }
}

pub(crate) fn same_graph(a: &Arc<LabeledGraph>, b: &Arc<LabeledGraph>) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MorphismViolation {
    LatticeMismatch,
    UnmappedNode(NodeId),
    UnmappedEdge(EdgeId),
    UnknownDomainNode(NodeId),
    UnknownDomainEdge(EdgeId),
    MissingNodeImage(NodeId, NodeId),
    MissingEdgeImage(EdgeId, EdgeId),
    SourceSquare(EdgeId),
    TargetSquare(EdgeId),
    NodeLabel(NodeId),
    EdgeLabel(EdgeId),
}

impl fmt::Display for MorphismViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use MorphismViolation::*;
        match self {
            LatticeMismatch => write!(f, "domain and codomain use different lattices"),
            UnmappedNode(n) => write!(f, "node `{n}` is not mapped"),
            UnmappedEdge(e) => write!(f, "edge `{e}` is not mapped"),
            UnknownDomainNode(n) => write!(f, "map mentions unknown node `{n}`"),
            UnknownDomainEdge(e) => write!(f, "map mentions unknown edge `{e}`"),
            MissingNodeImage(n, m) => write!(f, "node `{n}` maps to missing node `{m}`"),
            MissingEdgeImage(e, m) => write!(f, "edge `{e}` maps to missing edge `{m}`"),
            SourceSquare(e) => write!(f, "source of edge `{e}` does not commute"),
            TargetSquare(e) => write!(f, "target of edge `{e}` does not commute"),
            NodeLabel(n) => write!(f, "label of node `{n}` decreases"),
            EdgeLabel(e) => write!(f, "label of edge `{e}` decreases"),
        }
    }
}

report_type!(MorphismReport, MorphismViolation);

pub fn validate_morphism(f: &GraphMorphism) -> MorphismReport {
    use MorphismViolation::*;
    let mut v = Vec::new();
    let (dom, cod) = (&*f.dom, &*f.cod);
    if !same_lattice(&dom.lattice, &cod.lattice) {
        v.push(LatticeMismatch);
        return MorphismReport { violations: v };
    }
    let lat = &dom.lattice;
    for n in f.nodes.keys() {
        if !dom.nodes.contains_key(n) {
            v.push(UnknownDomainNode(n.clone()));
        }
    }
    for e in f.edges.keys() {
        if !dom.edges.contains_key(e) {
            v.push(UnknownDomainEdge(e.clone()));
        }
    }
    for (n, l) in &dom.nodes {
        match f.nodes.get(n) {
            None => v.push(UnmappedNode(n.clone())),
            Some(m) => match cod.nodes.get(m) {
                None => v.push(MissingNodeImage(n.clone(), m.clone())),
                Some(cl) => {
                    if !(lat.contains(*l) && lat.contains(*cl) && lat.le(*l, *cl)) {
                        v.push(NodeLabel(n.clone()));
                    }
                }
            },
        }
    }
    for (e, edge) in &dom.edges {
        match f.edges.get(e) {
            None => v.push(UnmappedEdge(e.clone())),
            Some(m) => match cod.edges.get(m) {
                None => v.push(MissingEdgeImage(e.clone(), m.clone())),
                Some(ce) => {
                    if f.nodes.get(&edge.src) != Some(&ce.src) {
                        v.push(SourceSquare(e.clone()));
                    }
                    if f.nodes.get(&edge.tgt) != Some(&ce.tgt) {
                        v.push(TargetSquare(e.clone()));
                    }
                    if !(lat.contains(edge.label) && lat.contains(ce.label) && lat.le(edge.label, ce.label)) {
                        v.push(EdgeLabel(e.clone()));
                    }
                }
            },
        }
    }
    MorphismReport { violations: v }
}

impl GraphMorphism {
    pub fn new(
        dom: Arc<LabeledGraph>,
        cod: Arc<LabeledGraph>,
        nodes: BTreeMap<NodeId, NodeId>,
        edges: BTreeMap<EdgeId, EdgeId>,
    ) -> Result<Self, GraphError> {
        let f = GraphMorphism { dom, cod, nodes, edges };
        let report = validate_morphism(&f);
        if report.is_ok() {
            Ok(f)
        } else {
            Err(GraphError::InvalidMorphism(report))
        }
    }

    pub fn new_unchecked(
        dom: Arc<LabeledGraph>,
        cod: Arc<LabeledGraph>,
        nodes: BTreeMap<NodeId, NodeId>,
        edges: BTreeMap<EdgeId, EdgeId>,
    ) -> Self {
        GraphMorphism { dom, cod, nodes, edges }
    }

    /// Builds a morphism from a node map, inducing the edge map.
    ///
    /// Each domain edge must have exactly one candidate image (matching
    /// endpoints, non-decreasing label) unless it is listed in `edges`.
    pub fn with_induced_edges(
        dom: Arc<LabeledGraph>,
        cod: Arc<LabeledGraph>,
        nodes: BTreeMap<NodeId, NodeId>,
        mut edges: BTreeMap<EdgeId, EdgeId>,
    ) -> Result<Self, GraphError> {
        let lat = dom.lattice.clone();
        for (e, edge) in &dom.edges {
            if edges.contains_key(e) {
                continue;
            }
            let (Some(s), Some(t)) = (nodes.get(&edge.src), nodes.get(&edge.tgt)) else {
                return Err(GraphError::NoEdgeImage(e.clone()));
            };
            let mut candidates = cod
                .edges
                .iter()
                .filter(|(_, ce)| &ce.src == s && &ce.tgt == t && lat.le(edge.label, ce.label));
            match (candidates.next(), candidates.next()) {
                (Some((c, _)), None) => {
                    edges.insert(e.clone(), c.clone());
                }
                (None, _) => return Err(GraphError::NoEdgeImage(e.clone())),
                (Some(_), Some(_)) => return Err(GraphError::AmbiguousEdge(e.clone())),
            }
        }
        GraphMorphism::new(dom, cod, nodes, edges)
    }

    pub fn identity(g: Arc<LabeledGraph>) -> Self {
        let nodes = g.nodes.keys().map(|n| (n.clone(), n.clone())).collect();
        let edges = g.edges.keys().map(|e| (e.clone(), e.clone())).collect();
        GraphMorphism {
            dom: g.clone(),
            cod: g,
            nodes,
            edges,
        }
    }

    pub fn dom(&self) -> &Arc<LabeledGraph> {
        &self.dom
    }

    pub fn cod(&self) -> &Arc<LabeledGraph> {
        &self.cod
    }

    pub fn node_map(&self) -> &BTreeMap<NodeId, NodeId> {
        &self.nodes
    }

    pub fn edge_map(&self) -> &BTreeMap<EdgeId, EdgeId> {
        &self.edges
    }

    /// Image of a domain node. Panics if `n` is not in the domain.
    pub fn node(&self, n: &str) -> &NodeId {
        self.nodes
            .get(n)
            .unwrap_or_else(|| panic!("node `{n}` is not in the domain"))
    }

    /// Image of a domain edge. Panics if `e` is not in the domain.
    pub fn edge(&self, e: &str) -> &EdgeId {
        self.edges
            .get(e)
            .unwrap_or_else(|| panic!("edge `{e}` is not in the domain"))
    }

    pub fn is_injective(&self) -> bool {
        fn injective<K, V: Ord>(m: &BTreeMap<K, V>) -> bool {
            let mut seen = std::collections::BTreeSet::new();
            m.values().all(|v| seen.insert(v))
        }
        injective(&self.nodes) && injective(&self.edges)
    }

    pub fn is_surjective(&self) -> bool {
        let nodes: std::collections::BTreeSet<&NodeId> = self.nodes.values().collect();
        let edges: std::collections::BTreeSet<&EdgeId> = self.edges.values().collect();
        nodes.len() == self.cod.node_count() && edges.len() == self.cod.edge_count()
    }

    /// An isomorphism: bijective with identical labels on both sides.
    pub fn is_isomorphism(&self) -> bool {
        self.is_injective()
            && self.is_surjective()
            && self
                .nodes
                .iter()
                .all(|(a, b)| self.dom.nodes.get(a) == self.cod.nodes.get(b))
            && self
                .edges
                .iter()
                .all(|(a, b)| self.dom.edges[a].label == self.cod.edges[b].label)
    }

    /// Inverse of an isomorphism.
    pub fn inverse(&self) -> Option<GraphMorphism> {
        if !self.is_isomorphism() {
            return None;
        }
        Some(GraphMorphism {
            dom: self.cod.clone(),
            cod: self.dom.clone(),
            nodes: self.nodes.iter().map(|(a, b)| (b.clone(), a.clone())).collect(),
            edges: self.edges.iter().map(|(a, b)| (b.clone(), a.clone())).collect(),
        })
    }

    /// `other ∘ self`: first `self`, then `other`.
    pub fn then(&self, other: &GraphMorphism) -> Result<GraphMorphism, GraphError> {
        if !same_graph(&self.cod, &other.dom) {
            return Err(GraphError::DomainMismatch);
        }
        Ok(self.then_unchecked(other))
    }

    pub(crate) fn then_unchecked(&self, other: &GraphMorphism) -> GraphMorphism {
        GraphMorphism {
            dom: self.dom.clone(),
            cod: other.cod.clone(),
            nodes: self
                .nodes
                .iter()
                .map(|(a, b)| (a.clone(), other.nodes[b].clone()))
                .collect(),
            edges: self
                .edges
                .iter()
                .map(|(a, b)| (a.clone(), other.edges[b].clone()))
                .collect(),
        }
    }

    /// Same maps, with the codomain replaced by an equal graph.
    pub(crate) fn with_cod(&self, cod: Arc<LabeledGraph>) -> GraphMorphism {
        GraphMorphism { cod, ..self.clone() }
    }

    pub(crate) fn with_dom(&self, dom: Arc<LabeledGraph>) -> GraphMorphism {
        GraphMorphism { dom, ..self.clone() }
    }

    /// True when both maps agree pointwise (domains and codomains assumed equal).
    pub fn agrees_with(&self, other: &GraphMorphism) -> bool {
        self.nodes == other.nodes && self.edges == other.edges
    }
}

/// `g ∘ f`. Fails with [`GraphError::DomainMismatch`] unless `cod(f) = dom(g)`.
pub fn compose(f: &GraphMorphism, g: &GraphMorphism) -> Result<GraphMorphism, GraphError> {
    f.then(g)
}

pub fn identity(g: &Arc<LabeledGraph>) -> GraphMorphism {
    GraphMorphism::identity(g.clone())
}

/// Result of [`disjoint_union`]: the sum graph and its two injections.
#[derive(Debug, Clone)]
pub struct DisjointUnion {
    pub graph: Arc<LabeledGraph>,
    pub left: GraphMorphism,
    pub right: GraphMorphism,
}

/// Tagged union: ids of `g` become `0.<id>`, ids of `h` become `1.<id>`.
pub fn disjoint_union(g: &Arc<LabeledGraph>, h: &Arc<LabeledGraph>) -> Result<DisjointUnion, GraphError> {
    if !same_lattice(&g.lattice, &h.lattice) {
        return Err(GraphError::LatticeMismatch(
            g.lattice.name().into(),
            h.lattice.name().into(),
        ));
    }
    let mut nodes = BTreeMap::new();
    let mut edges = BTreeMap::new();
    let mut maps = Vec::new();
    for (tag, part) in [(0, g), (1, h)] {
        let nm: BTreeMap<NodeId, NodeId> = part
            .nodes
            .keys()
            .map(|n| (n.clone(), NodeId(format!("{tag}.{n}"))))
            .collect();
        let em: BTreeMap<EdgeId, EdgeId> = part
            .edges
            .keys()
            .map(|e| (e.clone(), EdgeId(format!("{tag}.{e}"))))
            .collect();
        for (n, l) in &part.nodes {
            nodes.insert(nm[n].clone(), *l);
        }
        for (e, edge) in &part.edges {
            edges.insert(
                em[e].clone(),
                Edge {
                    src: nm[&edge.src].clone(),
                    tgt: nm[&edge.tgt].clone(),
                    label: edge.label,
                },
            );
        }
        maps.push((nm, em));
    }
    let graph = Arc::new(LabeledGraph {
        lattice: g.lattice.clone(),
        nodes,
        edges,
    });
    let (rn, re) = maps.pop().expect("two parts");
    let (ln, le) = maps.pop().expect("two parts");
    Ok(DisjointUnion {
        left: GraphMorphism::new_unchecked(g.clone(), graph.clone(), ln, le),
        right: GraphMorphism::new_unchecked(h.clone(), graph.clone(), rn, re),
        graph,
    })
}

/// Finds an isomorphism `g -> h` if one exists.
///
/// Exhaustive backtracking with label and degree pruning; meant for graphs
/// of a few dozen nodes.
pub fn is_isomorphic(g: &Arc<LabeledGraph>, h: &Arc<LabeledGraph>) -> Option<GraphMorphism> {
    if !same_lattice(&g.lattice, &h.lattice)
        || g.node_count() != h.node_count()
        || g.edge_count() != h.edge_count()
    {
        return None;
    }
    let mut found = None;
    HomProblem::new(g, h)
        .bijective()
        .labels(LabelMode::Equal)
        .run(|nodes, edges| {
            found = Some(GraphMorphism::new_unchecked(
                g.clone(),
                h.clone(),
                nodes.clone(),
                edges.clone(),
            ));
            std::ops::ControlFlow::Break(())
        });
    found
}
