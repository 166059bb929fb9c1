//! Pushouts, pullbacks and preimages of lattice-labeled graphs.
//!
//! Pullback objects are fibered products computed separately on nodes and
//! edges; a pair `(x, y)` gets the id `x|y` and the meet of the two labels.
//! Pushout objects are `B ⊎ C` quotiented by the equivalence generated by
//! `f(a) ~ g(a)`; each class is named after a representative and labeled
//! with the join of its members.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::ops::ControlFlow;
use std::sync::Arc;

use thiserror::Error;

use crate::graph::{
    same_graph, validate_morphism, Edge, EdgeId, GraphMorphism, LabeledGraph, NodeId,
};
use crate::search::HomProblem;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LimitError {
    #[error("invalid span: {0}")]
    InvalidSpan(String),
    #[error("invalid cospan: {0}")]
    InvalidCospan(String),
    #[error("morphism is not injective")]
    NotInjective,
    #[error("square does not commute")]
    NonCommuting,
    #[error("malformed square: {0}")]
    MalformedSquare(String),
}

/// Two morphisms with a shared domain: `B <- A -> C`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Span {
    pub left: GraphMorphism,
    pub right: GraphMorphism,
}

/// Two morphisms with a shared codomain: `B -> D <- C`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cospan {
    pub left: GraphMorphism,
    pub right: GraphMorphism,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Side {
    Left,
    Right,
}

/// Where each element of a constructed object came from: the pair
/// (pullback) or the equivalence class (pushout) it stands for.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct TraceNaming {
    pub nodes: BTreeMap<NodeId, Vec<(Side, NodeId)>>,
    pub edges: BTreeMap<EdgeId, Vec<(Side, EdgeId)>>,
}

/// A (co)limit object together with the two legs that close the square.
#[derive(Debug, Clone)]
pub struct LimitResult {
    pub object: Arc<LabeledGraph>,
    pub left: GraphMorphism,
    pub right: GraphMorphism,
    pub naming: TraceNaming,
}

fn render(id: &str) -> String {
    if id.contains(['|', '(', ')']) {
        format!("({id})")
    } else {
        id.to_string()
    }
}

/// Canonical id of a pullback pair.
pub fn pair_name(x: &str, y: &str) -> String {
    format!("{}|{}", render(x), render(y))
}

fn check_valid(f: &GraphMorphism, what: &str) -> Result<(), String> {
    let r = validate_morphism(f);
    if r.is_ok() {
        Ok(())
    } else {
        Err(format!("{what}: {r}"))
    }
}

/// Fibered product of `B -f-> D <-g- C`; legs are the two projections.
pub fn pullback(c: &Cospan) -> Result<LimitResult, LimitError> {
    check_valid(&c.left, "left leg").map_err(LimitError::InvalidCospan)?;
    check_valid(&c.right, "right leg").map_err(LimitError::InvalidCospan)?;
    if !same_graph(c.left.cod(), c.right.cod()) {
        return Err(LimitError::InvalidCospan("legs have different codomains".into()));
    }
    Ok(pullback_unchecked(&c.left, &c.right))
}

pub(crate) fn pullback_unchecked(f: &GraphMorphism, g: &GraphMorphism) -> LimitResult {
    let (b, c) = (f.dom(), g.dom());
    let lat = b.lattice().clone();

    let mut c_nodes_by_image: HashMap<&NodeId, Vec<&NodeId>> = HashMap::new();
    for (y, fy) in g.node_map() {
        c_nodes_by_image.entry(fy).or_default().push(y);
    }
    let mut c_edges_by_image: HashMap<&EdgeId, Vec<&EdgeId>> = HashMap::new();
    for (y, gy) in g.edge_map() {
        c_edges_by_image.entry(gy).or_default().push(y);
    }

    let mut nodes = BTreeMap::new();
    let mut edges = BTreeMap::new();
    let mut naming = TraceNaming::default();
    let (mut left_n, mut right_n) = (BTreeMap::new(), BTreeMap::new());
    let (mut left_e, mut right_e) = (BTreeMap::new(), BTreeMap::new());

    for (x, fx) in f.node_map() {
        for y in c_nodes_by_image.get(fx).into_iter().flatten() {
            let id = NodeId::new(pair_name(x.as_str(), y.as_str()));
            let label = lat.meet_pair(b.node_label(x.as_str()).unwrap(), c.node_label(y.as_str()).unwrap());
            nodes.insert(id.clone(), label);
            left_n.insert(id.clone(), x.clone());
            right_n.insert(id.clone(), (*y).clone());
            naming
                .nodes
                .insert(id, vec![(Side::Left, x.clone()), (Side::Right, (*y).clone())]);
        }
    }
    for (x, fx) in f.edge_map() {
        for y in c_edges_by_image.get(fx).into_iter().flatten() {
            let (ex, ey) = (b.edge(x.as_str()).unwrap(), c.edge(y.as_str()).unwrap());
            let id = EdgeId::new(pair_name(x.as_str(), y.as_str()));
            edges.insert(
                id.clone(),
                Edge {
                    src: NodeId::new(pair_name(ex.src.as_str(), ey.src.as_str())),
                    tgt: NodeId::new(pair_name(ex.tgt.as_str(), ey.tgt.as_str())),
                    label: lat.meet_pair(ex.label, ey.label),
                },
            );
            left_e.insert(id.clone(), x.clone());
            right_e.insert(id.clone(), (*y).clone());
            naming
                .edges
                .insert(id, vec![(Side::Left, x.clone()), (Side::Right, (*y).clone())]);
        }
    }
    let object = Arc::new(LabeledGraph::from_parts_unchecked(lat, nodes, edges));
    LimitResult {
        left: GraphMorphism::new_unchecked(object.clone(), b.clone(), left_n, left_e),
        right: GraphMorphism::new_unchecked(object.clone(), c.clone(), right_n, right_e),
        object,
        naming,
    }
}

pub(crate) struct UnionFind {
    parent: Vec<usize>,
    rank: Vec<u8>,
}

impl UnionFind {
    pub fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n).collect(),
            rank: vec![0; n],
        }
    }

    pub fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    pub fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return;
        }
        match self.rank[ra].cmp(&self.rank[rb]) {
            std::cmp::Ordering::Less => self.parent[ra] = rb,
            std::cmp::Ordering::Greater => self.parent[rb] = ra,
            std::cmp::Ordering::Equal => {
                self.parent[rb] = ra;
                self.rank[ra] += 1;
            }
        }
    }
}

/// Gluing of `B <-f- A -g-> C`.
///
/// A class containing elements of `B` is named after its smallest `B` id;
/// a class made only of `C` elements is named `fresh_prefix` followed by its
/// smallest `C` id. Clashes are resolved by appending `'`.
pub fn pushout(s: &Span) -> Result<LimitResult, LimitError> {
    pushout_named(s, "")
}

pub fn pushout_named(s: &Span, fresh_prefix: &str) -> Result<LimitResult, LimitError> {
    check_valid(&s.left, "left leg").map_err(LimitError::InvalidSpan)?;
    check_valid(&s.right, "right leg").map_err(LimitError::InvalidSpan)?;
    if !same_graph(s.left.dom(), s.right.dom()) {
        return Err(LimitError::InvalidSpan("legs have different domains".into()));
    }
    Ok(pushout_unchecked(&s.left, &s.right, fresh_prefix))
}

struct Classes<K> {
    /// element -> class index, left elements first
    of: Vec<usize>,
    members: Vec<Vec<(Side, K)>>,
    names: Vec<String>,
}

fn quotient<K: Clone + Ord + std::hash::Hash + fmt::Display>(
    left: &[K],
    right: &[K],
    glue: impl Iterator<Item = (K, K)>,
    fresh_prefix: &str,
) -> Classes<K> {
    let li: HashMap<&K, usize> = left.iter().enumerate().map(|(i, k)| (k, i)).collect();
    let ri: HashMap<&K, usize> = right.iter().enumerate().map(|(i, k)| (k, left.len() + i)).collect();
    let mut uf = UnionFind::new(left.len() + right.len());
    for (a, b) in glue {
        uf.union(li[&a], ri[&b]);
    }
    let mut class_of_root: BTreeMap<usize, usize> = BTreeMap::new();
    let mut of = vec![0; left.len() + right.len()];
    let mut members: Vec<Vec<(Side, K)>> = Vec::new();
    for i in 0..(left.len() + right.len()) {
        let root = uf.find(i);
        let next = class_of_root.len();
        let c = *class_of_root.entry(root).or_insert(next);
        if c == members.len() {
            members.push(Vec::new());
        }
        of[i] = c;
        if i < left.len() {
            members[c].push((Side::Left, left[i].clone()));
        } else {
            members[c].push((Side::Right, right[i - left.len()].clone()));
        }
    }
    let mut taken = std::collections::BTreeSet::new();
    let mut names = Vec::with_capacity(members.len());
    // Left-named classes first so that fresh names yield to them.
    let mut order: Vec<usize> = (0..members.len()).collect();
    order.sort_by_key(|&c| members[c][0].0);
    let mut by_class = vec![String::new(); members.len()];
    for c in order {
        let first = &members[c][0];
        let mut name = match first.0 {
            Side::Left => first.1.to_string(),
            Side::Right => format!("{fresh_prefix}{}", first.1),
        };
        while !taken.insert(name.clone()) {
            name.push('\'');
        }
        by_class[c] = name;
    }
    names.extend(by_class);
    Classes { of, members, names }
}

pub(crate) fn pushout_unchecked(f: &GraphMorphism, g: &GraphMorphism, fresh_prefix: &str) -> LimitResult {
    let (b, c) = (f.cod(), g.cod());
    let lat = b.lattice().clone();
    let a = f.dom();

    let b_nodes: Vec<NodeId> = b.node_ids().cloned().collect();
    let c_nodes: Vec<NodeId> = c.node_ids().cloned().collect();
    let nclasses = quotient(
        &b_nodes,
        &c_nodes,
        a.node_ids().map(|x| (f.node(x.as_str()).clone(), g.node(x.as_str()).clone())),
        fresh_prefix,
    );
    let b_edges: Vec<EdgeId> = b.edge_ids().cloned().collect();
    let c_edges: Vec<EdgeId> = c.edge_ids().cloned().collect();
    let eclasses = quotient(
        &b_edges,
        &c_edges,
        a.edge_ids().map(|x| (f.edge(x.as_str()).clone(), g.edge(x.as_str()).clone())),
        fresh_prefix,
    );

    let b_node_idx: HashMap<&NodeId, usize> = b_nodes.iter().enumerate().map(|(i, n)| (n, i)).collect();
    let c_node_idx: HashMap<&NodeId, usize> =
        c_nodes.iter().enumerate().map(|(i, n)| (n, b_nodes.len() + i)).collect();
    let node_class = |side: Side, n: &NodeId| -> &String {
        let i = match side {
            Side::Left => b_node_idx[n],
            Side::Right => c_node_idx[n],
        };
        &nclasses.names[nclasses.of[i]]
    };

    let mut nodes = BTreeMap::new();
    let mut naming = TraceNaming::default();
    for (ci, ms) in nclasses.members.iter().enumerate() {
        let labels = ms.iter().map(|(side, n)| match side {
            Side::Left => b.node_label(n.as_str()).unwrap(),
            Side::Right => c.node_label(n.as_str()).unwrap(),
        });
        let label = lat.join(labels).expect("labels of a valid graph");
        let id = NodeId::new(nclasses.names[ci].clone());
        nodes.insert(id.clone(), label);
        naming.nodes.insert(id, ms.clone());
    }
    let mut edges = BTreeMap::new();
    for (ci, ms) in eclasses.members.iter().enumerate() {
        let (side, first) = &ms[0];
        let e = match side {
            Side::Left => b.edge(first.as_str()).unwrap(),
            Side::Right => c.edge(first.as_str()).unwrap(),
        };
        let labels = ms.iter().map(|(side, x)| match side {
            Side::Left => b.edge(x.as_str()).unwrap().label,
            Side::Right => c.edge(x.as_str()).unwrap().label,
        });
        let id = EdgeId::new(eclasses.names[ci].clone());
        edges.insert(
            id.clone(),
            Edge {
                src: NodeId::new(node_class(*side, &e.src).clone()),
                tgt: NodeId::new(node_class(*side, &e.tgt).clone()),
                label: lat.join(labels).expect("labels of a valid graph"),
            },
        );
        naming.edges.insert(id, ms.clone());
    }
    let object = Arc::new(LabeledGraph::from_parts_unchecked(lat, nodes, edges));

    let leg = |side: Side, graph: &Arc<LabeledGraph>, offset_n: usize, offset_e: usize| {
        let nm: BTreeMap<NodeId, NodeId> = graph
            .node_ids()
            .enumerate()
            .map(|(i, n)| (n.clone(), NodeId::new(nclasses.names[nclasses.of[offset_n + i]].clone())))
            .collect();
        let em: BTreeMap<EdgeId, EdgeId> = graph
            .edge_ids()
            .enumerate()
            .map(|(i, e)| (e.clone(), EdgeId::new(eclasses.names[eclasses.of[offset_e + i]].clone())))
            .collect();
        let _ = side;
        GraphMorphism::new_unchecked(graph.clone(), object.clone(), nm, em)
    };
    let left = leg(Side::Left, b, 0, 0);
    let right = leg(Side::Right, c, b_nodes.len(), b_edges.len());
    LimitResult {
        object,
        left,
        right,
        naming,
    }
}

/// The part of `dom(f)` that `f` sends onto the image of an injective `t`.
#[derive(Debug, Clone)]
pub struct Preimage {
    /// Elements keep their `dom(f)` ids; labels are the pullback meets.
    pub graph: Arc<LabeledGraph>,
    /// Into `dom(f)`.
    pub inclusion: GraphMorphism,
    /// Into `dom(t)`.
    pub projection: GraphMorphism,
}

/// Preimage of `t(dom t)` under `f`, computed as the pullback of `(t, f)`.
pub fn preimage(t: &GraphMorphism, f: &GraphMorphism) -> Result<Preimage, LimitError> {
    if !t.is_injective() {
        return Err(LimitError::NotInjective);
    }
    let pb = pullback(&Cospan {
        left: t.clone(),
        right: f.clone(),
    })?;
    // t injective, so the right projection is injective and its ids are unique
    let node_names: BTreeMap<NodeId, NodeId> = pb.right.node_map().clone();
    let edge_names: BTreeMap<EdgeId, EdgeId> = pb.right.edge_map().clone();
    let graph = Arc::new(pb.object.renamed(&node_names, &edge_names));
    let rename_dom = |m: &GraphMorphism| {
        GraphMorphism::new_unchecked(
            graph.clone(),
            m.cod().clone(),
            m.node_map().iter().map(|(k, v)| (node_names[k].clone(), v.clone())).collect(),
            m.edge_map().iter().map(|(k, v)| (edge_names[k].clone(), v.clone())).collect(),
        )
    };
    Ok(Preimage {
        inclusion: rename_dom(&pb.right),
        projection: rename_dom(&pb.left),
        graph,
    })
}

/// A candidate pullback square
///
/// ```text
///   P --corner_right--> C
///   |                   |
/// corner_left         right
///   v                   v
///   B ------left------> D
/// ```
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PullbackSquare {
    pub corner_left: GraphMorphism,
    pub corner_right: GraphMorphism,
    pub left: GraphMorphism,
    pub right: GraphMorphism,
}

/// A candidate pushout square
///
/// ```text
///   A ------right-----> C
///   |                   |
///  left           cocone_right
///   v                   v
///   B --cocone_left---> Q
/// ```
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PushoutSquare {
    pub left: GraphMorphism,
    pub right: GraphMorphism,
    pub cocone_left: GraphMorphism,
    pub cocone_right: GraphMorphism,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Verification {
    /// Compare against the canonical construction through the induced map.
    #[default]
    Canonical,
    /// Enumerate every cone over the canonical object and the given corner
    /// and count mediating morphisms.
    Exhaustive,
}

fn shape(ok: bool, msg: &str) -> Result<(), LimitError> {
    if ok {
        Ok(())
    } else {
        Err(LimitError::MalformedSquare(msg.into()))
    }
}

fn check_pullback_shape(sq: &PullbackSquare) -> Result<(), LimitError> {
    for (m, what) in [
        (&sq.corner_left, "corner_left"),
        (&sq.corner_right, "corner_right"),
        (&sq.left, "left"),
        (&sq.right, "right"),
    ] {
        check_valid(m, what).map_err(LimitError::MalformedSquare)?;
    }
    shape(same_graph(sq.corner_left.dom(), sq.corner_right.dom()), "corner legs differ in domain")?;
    shape(same_graph(sq.corner_left.cod(), sq.left.dom()), "corner_left does not meet left")?;
    shape(same_graph(sq.corner_right.cod(), sq.right.dom()), "corner_right does not meet right")?;
    shape(same_graph(sq.left.cod(), sq.right.cod()), "cospan legs differ in codomain")?;
    let a = sq.corner_left.then_unchecked(&sq.left);
    let b = sq.corner_right.then_unchecked(&sq.right);
    if a.agrees_with(&b) {
        Ok(())
    } else {
        Err(LimitError::NonCommuting)
    }
}

/// Whether the square is a pullback.
///
/// The induced map from the corner into the canonical fibered product must
/// be an isomorphism; that map is the only candidate compatible with both
/// legs.
pub fn is_pullback_square(sq: &PullbackSquare) -> Result<bool, LimitError> {
    is_pullback_square_with(sq, Verification::Canonical)
}

pub fn is_pullback_square_with(sq: &PullbackSquare, mode: Verification) -> Result<bool, LimitError> {
    check_pullback_shape(sq)?;
    let canon = pullback_unchecked(&sq.left, &sq.right);
    match mode {
        Verification::Canonical => Ok(pullback_mediator_is_iso(sq, &canon)),
        Verification::Exhaustive => {
            let candidates = [canon.object.clone(), sq.corner_left.dom().clone()];
            Ok(pullback_universal_check(sq, &candidates)?.holds())
        }
    }
}

fn pullback_mediator_is_iso(sq: &PullbackSquare, canon: &LimitResult) -> bool {
    let p = sq.corner_left.dom();
    let pc = &canon.object;
    if p.node_count() != pc.node_count() || p.edge_count() != pc.edge_count() {
        return false;
    }
    let mut seen_n = std::collections::BTreeSet::new();
    for (x, l) in p.nodes() {
        let id = pair_name(sq.corner_left.node(x.as_str()).as_str(), sq.corner_right.node(x.as_str()).as_str());
        match pc.node_label(&id) {
            Some(cl) if cl == l && seen_n.insert(id.clone()) => {}
            _ => return false,
        }
    }
    let mut seen_e = std::collections::BTreeSet::new();
    for (x, e) in p.edges() {
        let id = pair_name(sq.corner_left.edge(x.as_str()).as_str(), sq.corner_right.edge(x.as_str()).as_str());
        match pc.edge(&id) {
            Some(ce) if ce.label == e.label && seen_e.insert(id.clone()) => {}
            _ => return false,
        }
    }
    true
}

fn check_pushout_shape(sq: &PushoutSquare) -> Result<(), LimitError> {
    for (m, what) in [
        (&sq.left, "left"),
        (&sq.right, "right"),
        (&sq.cocone_left, "cocone_left"),
        (&sq.cocone_right, "cocone_right"),
    ] {
        check_valid(m, what).map_err(LimitError::MalformedSquare)?;
    }
    shape(same_graph(sq.left.dom(), sq.right.dom()), "span legs differ in domain")?;
    shape(same_graph(sq.left.cod(), sq.cocone_left.dom()), "left does not meet cocone_left")?;
    shape(same_graph(sq.right.cod(), sq.cocone_right.dom()), "right does not meet cocone_right")?;
    shape(same_graph(sq.cocone_left.cod(), sq.cocone_right.cod()), "cocone legs differ in codomain")?;
    let a = sq.left.then_unchecked(&sq.cocone_left);
    let b = sq.right.then_unchecked(&sq.cocone_right);
    if a.agrees_with(&b) {
        Ok(())
    } else {
        Err(LimitError::NonCommuting)
    }
}

pub fn is_pushout_square(sq: &PushoutSquare) -> Result<bool, LimitError> {
    is_pushout_square_with(sq, Verification::Canonical)
}

pub fn is_pushout_square_with(sq: &PushoutSquare, mode: Verification) -> Result<bool, LimitError> {
    check_pushout_shape(sq)?;
    let canon = pushout_unchecked(&sq.left, &sq.right, "");
    match mode {
        Verification::Canonical => Ok(pushout_mediator_is_iso(sq, &canon)),
        Verification::Exhaustive => {
            let candidates = [canon.object.clone(), sq.cocone_left.cod().clone()];
            Ok(pushout_universal_check(sq, &candidates)?.holds())
        }
    }
}

fn pushout_mediator_is_iso(sq: &PushoutSquare, canon: &LimitResult) -> bool {
    let q = sq.cocone_left.cod();
    let pc = &canon.object;
    if q.node_count() != pc.node_count() || q.edge_count() != pc.edge_count() {
        return false;
    }
    let mut seen_n = std::collections::BTreeSet::new();
    for (id, ms) in &canon.naming.nodes {
        let (side, x) = &ms[0];
        let image = match side {
            Side::Left => sq.cocone_left.node(x.as_str()),
            Side::Right => sq.cocone_right.node(x.as_str()),
        };
        if q.node_label(image.as_str()) != pc.node_label(id.as_str()) || !seen_n.insert(image.clone()) {
            return false;
        }
    }
    let mut seen_e = std::collections::BTreeSet::new();
    for (id, ms) in &canon.naming.edges {
        let (side, x) = &ms[0];
        let image = match side {
            Side::Left => sq.cocone_left.edge(x.as_str()),
            Side::Right => sq.cocone_right.edge(x.as_str()),
        };
        let (Some(qe), Some(pe)) = (q.edge(image.as_str()), pc.edge(id.as_str())) else {
            return false;
        };
        if qe.label != pe.label || !seen_e.insert(image.clone()) {
            return false;
        }
    }
    true
}

/// Outcome of an exhaustive universal-property check.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct UniversalReport {
    /// Competing (co)cones examined.
    pub cones: usize,
    /// Cones with no mediating morphism.
    pub missing: usize,
    /// Cones with more than one mediating morphism.
    pub ambiguous: usize,
}

impl UniversalReport {
    pub fn holds(&self) -> bool {
        self.missing == 0 && self.ambiguous == 0
    }
}

type MapKey = (BTreeMap<NodeId, NodeId>, BTreeMap<EdgeId, EdgeId>);

pub(crate) fn all_homs(dom: &LabeledGraph, cod: &LabeledGraph) -> Vec<MapKey> {
    let mut out = Vec::new();
    HomProblem::new(dom, cod).run(|n, e| {
        out.push((n.clone(), e.clone()));
        ControlFlow::Continue(())
    });
    out
}

fn compose_maps(first: &MapKey, second: &GraphMorphism) -> MapKey {
    (
        first.0.iter().map(|(k, v)| (k.clone(), second.node(v.as_str()).clone())).collect(),
        first.1.iter().map(|(k, v)| (k.clone(), second.edge(v.as_str()).clone())).collect(),
    )
}

fn then_maps(first: &GraphMorphism, second: &MapKey) -> MapKey {
    (
        first.node_map().iter().map(|(k, v)| (k.clone(), second.0[v].clone())).collect(),
        first.edge_map().iter().map(|(k, v)| (k.clone(), second.1[v].clone())).collect(),
    )
}

/// Checks the pullback universal property against every cone whose apex is
/// one of `candidates`: each commuting pair `Q -> B`, `Q -> C` must factor
/// through the corner by exactly one morphism.
pub fn pullback_universal_check(
    sq: &PullbackSquare,
    candidates: &[Arc<LabeledGraph>],
) -> Result<UniversalReport, LimitError> {
    check_pullback_shape(sq)?;
    let p = sq.corner_left.dom();
    let (b, c) = (sq.left.dom(), sq.right.dom());
    let mut report = UniversalReport::default();
    for q in candidates {
        let to_b = all_homs(q, b);
        let to_c = all_homs(q, c);
        let mut mediators: HashMap<(MapKey, MapKey), usize> = HashMap::new();
        for x in all_homs(q, p) {
            let key = (compose_maps(&x, &sq.corner_left), compose_maps(&x, &sq.corner_right));
            *mediators.entry(key).or_default() += 1;
        }
        for hb in &to_b {
            let via_b = compose_maps(hb, &sq.left);
            for hc in &to_c {
                if compose_maps(hc, &sq.right) != via_b {
                    continue;
                }
                report.cones += 1;
                match mediators.get(&(hb.clone(), hc.clone())).copied().unwrap_or(0) {
                    0 => report.missing += 1,
                    1 => {}
                    _ => report.ambiguous += 1,
                }
            }
        }
    }
    Ok(report)
}

/// Dual of [`pullback_universal_check`] for cocones into each candidate.
pub fn pushout_universal_check(
    sq: &PushoutSquare,
    candidates: &[Arc<LabeledGraph>],
) -> Result<UniversalReport, LimitError> {
    check_pushout_shape(sq)?;
    let q0 = sq.cocone_left.cod();
    let (b, c) = (sq.left.cod(), sq.right.cod());
    let mut report = UniversalReport::default();
    for q in candidates {
        let from_b = all_homs(b, q);
        let from_c = all_homs(c, q);
        let mut mediators: HashMap<(MapKey, MapKey), usize> = HashMap::new();
        for x in all_homs(q0, q) {
            let key = (then_maps(&sq.cocone_left, &x), then_maps(&sq.cocone_right, &x));
            *mediators.entry(key).or_default() += 1;
        }
        for hb in &from_b {
            let via_b = then_maps(&sq.left, hb);
            for hc in &from_c {
                if then_maps(&sq.right, hc) != via_b {
                    continue;
                }
                report.cones += 1;
                match mediators.get(&(hb.clone(), hc.clone())).copied().unwrap_or(0) {
                    0 => report.missing += 1,
                    1 => {}
                    _ => report.ambiguous += 1,
                }
            }
        }
    }
    Ok(report)
}

impl LimitResult {
    /// The square formed by a pullback result and its cospan.
    pub fn pullback_square(&self, c: &Cospan) -> PullbackSquare {
        PullbackSquare {
            corner_left: self.left.clone(),
            corner_right: self.right.clone(),
            left: c.left.clone(),
            right: c.right.clone(),
        }
    }

    /// The square formed by a pushout result and its span.
    pub fn pushout_square(&self, s: &Span) -> PushoutSquare {
        PushoutSquare {
            left: s.left.clone(),
            right: s.right.clone(),
            cocone_left: self.left.clone(),
            cocone_right: self.right.clone(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{identity, is_isomorphic};
    use crate::lattice::Lattice;

    fn unit() -> Arc<Lattice> {
        Arc::new(Lattice::unit())
    }

    fn g(lat: &Arc<Lattice>, nodes: &[(&str, &str)], edges: &[(&str, &str, &str, &str)]) -> Arc<LabeledGraph> {
        Arc::new(LabeledGraph::from_names(lat.clone(), nodes, edges).unwrap())
    }

    fn hom(dom: &Arc<LabeledGraph>, cod: &Arc<LabeledGraph>, nodes: &[(&str, &str)]) -> GraphMorphism {
        GraphMorphism::with_induced_edges(
            dom.clone(),
            cod.clone(),
            nodes.iter().map(|(a, b)| (NodeId::from(*a), NodeId::from(*b))).collect(),
            BTreeMap::new(),
        )
        .unwrap()
    }

    #[test]
    fn pushout_of_identities() {
        let lat = unit();
        let a = g(&lat, &[("a", "*"), ("b", "*")], &[("e", "a", "b", "*")]);
        let s = Span {
            left: identity(&a),
            right: identity(&a),
        };
        let po = pushout(&s).unwrap();
        assert_eq!(*po.object, *a);
        assert!(po.left.is_isomorphism());
        assert!(is_pushout_square(&po.pushout_square(&s)).unwrap());
    }

    #[test]
    fn pushout_over_empty_is_disjoint_union() {
        let lat = unit();
        let empty = g(&lat, &[], &[]);
        let b = g(&lat, &[("a", "*")], &[("l", "a", "a", "*")]);
        let c = g(&lat, &[("a", "*"), ("c", "*")], &[]);
        let po = pushout(&Span {
            left: hom(&empty, &b, &[]),
            right: hom(&empty, &c, &[]),
        })
        .unwrap();
        assert_eq!(po.object.node_count(), 3);
        assert_eq!(po.object.edge_count(), 1);
        // the C copy of `a` gets a primed name
        assert!(po.object.has_node("a'"));
    }

    #[test]
    fn pushout_labels_are_joins() {
        let lat = Arc::new(Lattice::bdd(&["x1", "x2"]).unwrap());
        let bot = g(&lat, &[("n", "bot")], &[]);
        let x1 = g(&lat, &[("n", "x1")], &[]);
        let po = pushout(&Span {
            left: hom(&bot, &bot, &[("n", "n")]),
            right: hom(&bot, &x1, &[("n", "n")]),
        })
        .unwrap();
        assert_eq!(po.object.node_count(), 1);
        assert_eq!(po.object.label_name(po.object.node_label("n").unwrap()), "x1");
    }

    #[test]
    fn pushout_glues_loop_and_new_edge() {
        let lat = unit();
        let l = g(&lat, &[("a", "*")], &[]);
        let host = g(&lat, &[("a", "*")], &[("loop", "a", "a", "*")]);
        let r = g(&lat, &[("a", "*"), ("c", "*")], &[("ac", "a", "c", "*")]);
        let s = Span {
            left: hom(&l, &host, &[("a", "a")]),
            right: hom(&l, &r, &[("a", "a")]),
        };
        let po = pushout(&s).unwrap();
        let expected = g(
            &lat,
            &[("a", "*"), ("c", "*")],
            &[("loop", "a", "a", "*"), ("ac", "a", "c", "*")],
        );
        assert!(is_isomorphic(&po.object, &expected).is_some());
        let report = pushout_universal_check(&po.pushout_square(&s), &[expected.clone(), host.clone()]).unwrap();
        assert!(report.holds() && report.cones > 0, "{report:?}");
    }

    #[test]
    fn pullback_of_identities() {
        let lat = unit();
        let a = g(&lat, &[("a", "*"), ("b", "*")], &[("e", "a", "b", "*")]);
        let c = Cospan {
            left: identity(&a),
            right: identity(&a),
        };
        let pb = pullback(&c).unwrap();
        assert!(is_isomorphic(&pb.object, &a).is_some());
        assert!(pb.object.has_node("a|a"));
        assert!(is_pullback_square(&pb.pullback_square(&c)).unwrap());
    }

    #[test]
    fn pullback_over_terminal_is_product() {
        let lat = unit();
        let one = g(&lat, &[("t", "*")], &[("l", "t", "t", "*")]);
        let a = g(&lat, &[("a", "*"), ("b", "*")], &[("e", "a", "b", "*")]);
        let b = g(&lat, &[("x", "*"), ("y", "*"), ("z", "*")], &[("f", "x", "y", "*"), ("h", "y", "z", "*")]);
        let pb = pullback(&Cospan {
            left: hom(&a, &one, &[("a", "t"), ("b", "t")]),
            right: hom(&b, &one, &[("x", "t"), ("y", "t"), ("z", "t")]),
        })
        .unwrap();
        assert_eq!(pb.object.node_count(), 6);
        assert_eq!(pb.object.edge_count(), 2);
    }

    #[test]
    fn pullback_labels_are_meets() {
        let lat = Arc::new(Lattice::bdd(&["x1", "x2"]).unwrap());
        let x2 = g(&lat, &[("n", "x2")], &[]);
        let var = g(&lat, &[("n", "Var")], &[]);
        let bot = g(&lat, &[("n", "bot")], &[]);
        let pb = pullback(&Cospan {
            left: hom(&x2, &var, &[("n", "n")]),
            right: hom(&bot, &var, &[("n", "n")]),
        })
        .unwrap();
        assert_eq!(pb.object.label_name(pb.object.node_label("n|n").unwrap()), "bot");
    }

    #[test]
    fn pulling_back_a_double_loop_duplicates_edges() {
        let lat = unit();
        let one = g(&lat, &[("t", "*")], &[("l", "t", "t", "*")]);
        let two = g(&lat, &[("t", "*")], &[("l1", "t", "t", "*"), ("l2", "t", "t", "*")]);
        let host = g(
            &lat,
            &[("a", "*"), ("b", "*"), ("c", "*")],
            &[("e1", "a", "b", "*"), ("e2", "b", "c", "*"), ("e3", "c", "c", "*")],
        );
        let pb = pullback(&Cospan {
            left: hom(&host, &one, &[("a", "t"), ("b", "t"), ("c", "t")]),
            right: GraphMorphism::new(
                two.clone(),
                one.clone(),
                [("t".into(), "t".into())].into_iter().collect(),
                [("l1".into(), "l".into()), ("l2".into(), "l".into())].into_iter().collect(),
            )
            .unwrap(),
        })
        .unwrap();
        assert_eq!(pb.object.node_count(), 3);
        assert_eq!(pb.object.edge_count(), 6);
    }

    #[test]
    fn preimage_selects_fiber() {
        let lat = unit();
        let x = g(&lat, &[("s", "*"), ("o", "*")], &[("so", "s", "o", "*"), ("ss", "s", "s", "*")]);
        let sel = g(&lat, &[("s", "*")], &[("ss", "s", "s", "*")]);
        let t = hom(&sel, &x, &[("s", "s")]);
        let y = g(
            &lat,
            &[("a", "*"), ("b", "*"), ("c", "*")],
            &[("ab", "a", "b", "*"), ("bc", "b", "c", "*"), ("ac", "a", "c", "*")],
        );
        let f = GraphMorphism::new(
            y.clone(),
            x.clone(),
            [("a", "s"), ("b", "s"), ("c", "o")].iter().map(|(a, b)| (NodeId::from(*a), NodeId::from(*b))).collect(),
            [("ab", "ss"), ("bc", "so"), ("ac", "so")]
                .iter()
                .map(|(a, b)| (EdgeId::from(*a), EdgeId::from(*b)))
                .collect(),
        )
        .unwrap();
        let pre = preimage(&t, &f).unwrap();
        let expected = g(&lat, &[("a", "*"), ("b", "*")], &[("ab", "a", "b", "*")]);
        assert_eq!(*pre.graph, *expected);
        assert!(pre.inclusion.is_injective());

        let iso_pre = preimage(&identity(&y), &identity(&y)).unwrap();
        assert!(is_isomorphic(&iso_pre.graph, &y).is_some());

        let not_inj = hom(&y, &sel, &[("a", "s"), ("b", "s"), ("c", "s")]);
        assert!(!not_inj.edge_map().is_empty());
        assert_eq!(preimage(&not_inj, &identity(&sel)).unwrap_err(), LimitError::NotInjective);
    }

    #[test]
    fn collapsed_square_commutes_but_is_not_a_pullback() {
        // G has two nodes both sent onto the single pattern node.
        let lat = unit();
        let l = g(&lat, &[("p", "*")], &[]);
        let lp = g(&lat, &[("p", "*"), ("c", "*")], &[]);
        let host = g(&lat, &[("x", "*"), ("y", "*")], &[]);
        let t_l = hom(&l, &lp, &[("p", "p")]);
        let alpha = hom(&host, &lp, &[("x", "p"), ("y", "p")]);
        let m = hom(&l, &host, &[("p", "x")]);
        let sq = PullbackSquare {
            corner_left: identity(&l),
            corner_right: m,
            left: t_l,
            right: alpha,
        };
        assert_eq!(is_pullback_square(&sq), Ok(false));
        assert_eq!(is_pullback_square_with(&sq, Verification::Exhaustive), Ok(false));
    }

    #[test]
    fn non_commuting_square_is_an_error() {
        let lat = unit();
        let a = g(&lat, &[("a", "*"), ("b", "*")], &[]);
        let swap = hom(&a, &a, &[("a", "b"), ("b", "a")]);
        let sq = PullbackSquare {
            corner_left: identity(&a),
            corner_right: identity(&a),
            left: identity(&a),
            right: swap,
        };
        assert_eq!(is_pullback_square(&sq), Err(LimitError::NonCommuting));
    }

    #[test]
    fn pushout_candidate_with_free_node_fails() {
        let lat = unit();
        let l = g(&lat, &[("a", "*")], &[]);
        let host = g(&lat, &[("a", "*"), ("b", "*")], &[("e", "a", "b", "*")]);
        let r = g(&lat, &[("a", "*")], &[("l", "a", "a", "*")]);
        let s = Span {
            left: hom(&l, &host, &[("a", "a")]),
            right: hom(&l, &r, &[("a", "a")]),
        };
        let po = pushout(&s).unwrap();
        // add a free node g to the real pushout
        let mut bigger = (*po.object).clone();
        bigger.add_node("g", lat.top()).unwrap();
        let bigger = Arc::new(bigger);
        let sq = PushoutSquare {
            left: s.left.clone(),
            right: s.right.clone(),
            cocone_left: po.left.with_cod(bigger.clone()),
            cocone_right: po.right.with_cod(bigger.clone()),
        };
        assert_eq!(is_pushout_square(&sq), Ok(false));
        let report = pushout_universal_check(&sq, &[po.object.clone(), bigger]).unwrap();
        assert!(report.ambiguous > 0, "{report:?}");
        assert!(is_pushout_square(&po.pushout_square(&s)).unwrap());
    }
}
