//! Backtracking homomorphism search shared by enumeration, isomorphism
//! testing, and match finding.
//!
//! Nodes are assigned first, most-constrained-first; once every node has an
//! image, each edge independently picks a compatible edge between the images
//! of its endpoints (so parallel edges are handled individually).

use std::collections::{BTreeMap, HashMap};
use std::ops::ControlFlow;

use crate::graph::{same_lattice, EdgeId, LabeledGraph, NodeId};
use crate::lattice::Label;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum LabelMode {
    /// `label(x) <= label(f(x))`
    Leq,
    /// `label(x) == label(f(x))`
    Equal,
}

type NodePred<'a> = Box<dyn Fn(&NodeId, &NodeId) -> bool + 'a>;
type EdgePred<'a> = Box<dyn Fn(&EdgeId, &EdgeId) -> bool + 'a>;

pub(crate) struct HomProblem<'a> {
    dom: &'a LabeledGraph,
    cod: &'a LabeledGraph,
    injective: bool,
    bijective: bool,
    labels: LabelMode,
    fixed_nodes: BTreeMap<NodeId, NodeId>,
    fixed_edges: BTreeMap<EdgeId, EdgeId>,
    node_ok: Option<NodePred<'a>>,
    edge_ok: Option<EdgePred<'a>>,
}

impl<'a> HomProblem<'a> {
    pub fn new(dom: &'a LabeledGraph, cod: &'a LabeledGraph) -> Self {
        HomProblem {
            dom,
            cod,
            injective: false,
            bijective: false,
            labels: LabelMode::Leq,
            fixed_nodes: BTreeMap::new(),
            fixed_edges: BTreeMap::new(),
            node_ok: None,
            edge_ok: None,
        }
    }

    pub fn injective(mut self, yes: bool) -> Self {
        self.injective = yes;
        self
    }

    pub fn bijective(mut self) -> Self {
        self.injective = true;
        self.bijective = true;
        self
    }

    pub fn labels(mut self, mode: LabelMode) -> Self {
        self.labels = mode;
        self
    }

    pub fn fixed(mut self, nodes: BTreeMap<NodeId, NodeId>, edges: BTreeMap<EdgeId, EdgeId>) -> Self {
        self.fixed_nodes = nodes;
        self.fixed_edges = edges;
        self
    }

    /// Extra filter applied to domain nodes without a fixed image.
    pub fn node_filter(mut self, f: impl Fn(&NodeId, &NodeId) -> bool + 'a) -> Self {
        self.node_ok = Some(Box::new(f));
        self
    }

    /// Extra filter applied to domain edges without a fixed image.
    pub fn edge_filter(mut self, f: impl Fn(&EdgeId, &EdgeId) -> bool + 'a) -> Self {
        self.edge_ok = Some(Box::new(f));
        self
    }

    /// Calls `visit` with every solution until it breaks.
    pub fn run<F>(self, mut visit: F)
    where
        F: FnMut(&BTreeMap<NodeId, NodeId>, &BTreeMap<EdgeId, EdgeId>) -> ControlFlow<()>,
    {
        if !same_lattice(self.dom.lattice(), self.cod.lattice()) {
            return;
        }
        if let Some(state) = Search::prepare(&self) {
            let mut state = state;
            let _ = state.assign_nodes(0, &mut visit);
        }
    }
}

struct DomEdge {
    src: usize,
    tgt: usize,
    label: Label,
}

struct Search<'p, 'a> {
    p: &'p HomProblem<'a>,
    dom_nodes: Vec<&'a NodeId>,
    cod_nodes: Vec<&'a NodeId>,
    dom_edges: Vec<(&'a EdgeId, DomEdge)>,
    cod_edges: Vec<(&'a EdgeId, usize, usize, Label)>,
    /// cod edges by (src, tgt)
    cod_between: HashMap<(usize, usize), Vec<usize>>,
    node_cands: Vec<Vec<usize>>,
    /// dom edges incident to each dom node
    incident: Vec<Vec<usize>>,
    order: Vec<usize>,
    assign: Vec<Option<usize>>,
    used_nodes: Vec<bool>,
    edge_assign: Vec<usize>,
    used_edges: Vec<bool>,
}

impl<'p, 'a> Search<'p, 'a> {
    fn prepare(p: &'p HomProblem<'a>) -> Option<Self> {
        let lat = p.dom.lattice().clone();
        let compat = |a: Label, b: Label| match p.labels {
            LabelMode::Leq => lat.le(a, b),
            LabelMode::Equal => a == b,
        };
        let dom_nodes: Vec<&NodeId> = p.dom.node_ids().collect();
        let cod_nodes: Vec<&NodeId> = p.cod.node_ids().collect();
        if p.injective && dom_nodes.len() > cod_nodes.len() {
            return None;
        }
        if p.bijective && (dom_nodes.len() != cod_nodes.len() || p.dom.edge_count() != p.cod.edge_count()) {
            return None;
        }
        let dom_idx: HashMap<&NodeId, usize> = dom_nodes.iter().enumerate().map(|(i, n)| (*n, i)).collect();
        let cod_idx: HashMap<&NodeId, usize> = cod_nodes.iter().enumerate().map(|(i, n)| (*n, i)).collect();
        let dom_edges: Vec<(&EdgeId, DomEdge)> = p
            .dom
            .edges()
            .map(|(id, e)| {
                (
                    id,
                    DomEdge {
                        src: dom_idx[&e.src],
                        tgt: dom_idx[&e.tgt],
                        label: e.label,
                    },
                )
            })
            .collect();
        let cod_edges: Vec<(&EdgeId, usize, usize, Label)> = p
            .cod
            .edges()
            .map(|(id, e)| (id, cod_idx[&e.src], cod_idx[&e.tgt], e.label))
            .collect();
        let mut cod_between: HashMap<(usize, usize), Vec<usize>> = HashMap::new();
        for (i, (_, s, t, _)) in cod_edges.iter().enumerate() {
            cod_between.entry((*s, *t)).or_default().push(i);
        }

        let degree = |n: usize, edges: &mut dyn Iterator<Item = (usize, usize)>| {
            let (mut out, mut inn) = (0usize, 0usize);
            for (s, t) in edges {
                if s == n {
                    out += 1;
                }
                if t == n {
                    inn += 1;
                }
            }
            (out, inn)
        };
        let cod_deg: Vec<(usize, usize)> = (0..cod_nodes.len())
            .map(|c| degree(c, &mut cod_edges.iter().map(|e| (e.1, e.2))))
            .collect();

        let mut node_cands = Vec::with_capacity(dom_nodes.len());
        let mut incident = vec![Vec::new(); dom_nodes.len()];
        for (i, (_, e)) in dom_edges.iter().enumerate() {
            incident[e.src].push(i);
            if e.tgt != e.src {
                incident[e.tgt].push(i);
            }
        }
        for (d, dn) in dom_nodes.iter().enumerate() {
            let dl = p.dom.node_label(dn.as_str()).expect("node");
            let dd = degree(d, &mut dom_edges.iter().map(|(_, e)| (e.src, e.tgt)));
            let cands: Vec<usize> = if let Some(fixed) = p.fixed_nodes.get(*dn) {
                match cod_idx.get(fixed) {
                    Some(&c) if compat(dl, p.cod.node_label(fixed.as_str()).expect("node")) => vec![c],
                    _ => return None,
                }
            } else {
                (0..cod_nodes.len())
                    .filter(|&c| {
                        let cl = p.cod.node_label(cod_nodes[c].as_str()).expect("node");
                        if !compat(dl, cl) {
                            return false;
                        }
                        if p.bijective && cod_deg[c] != dd {
                            return false;
                        }
                        if p.injective && (cod_deg[c].0 < dd.0 || cod_deg[c].1 < dd.1) {
                            return false;
                        }
                        p.node_ok.as_ref().is_none_or(|f| f(dn, cod_nodes[c]))
                    })
                    .collect()
            };
            if cands.is_empty() {
                return None;
            }
            node_cands.push(cands);
        }
        let mut order: Vec<usize> = (0..dom_nodes.len()).collect();
        order.sort_by_key(|&d| (node_cands[d].len(), d));
        let n_dom = dom_nodes.len();
        let n_cod = cod_nodes.len();
        let n_dom_e = dom_edges.len();
        let n_cod_e = cod_edges.len();
        Some(Search {
            p,
            dom_nodes,
            cod_nodes,
            dom_edges,
            cod_edges,
            cod_between,
            node_cands,
            incident,
            order,
            assign: vec![None; n_dom],
            used_nodes: vec![false; n_cod],
            edge_assign: vec![0; n_dom_e],
            used_edges: vec![false; n_cod_e],
        })
    }

    fn edge_compat(&self, de: usize, ce: usize) -> bool {
        let (did, d) = &self.dom_edges[de];
        let (cid, _, _, cl) = &self.cod_edges[ce];
        let ok = match self.p.labels {
            LabelMode::Leq => self.p.dom.lattice().le(d.label, *cl),
            LabelMode::Equal => d.label == *cl,
        };
        if !ok {
            return false;
        }
        match self.p.fixed_edges.get(*did) {
            Some(f) => f == *cid,
            None => self.p.edge_ok.as_ref().is_none_or(|f| f(did, cid)),
        }
    }

    /// Compatible cod edges for dom edge `de` under the current node assignment.
    fn edge_candidates(&self, de: usize) -> Vec<usize> {
        let d = &self.dom_edges[de].1;
        let (Some(s), Some(t)) = (self.assign[d.src], self.assign[d.tgt]) else {
            return Vec::new();
        };
        self.cod_between
            .get(&(s, t))
            .map(|v| v.iter().copied().filter(|&ce| self.edge_compat(de, ce)).collect())
            .unwrap_or_default()
    }

    fn node_consistent(&self, d: usize) -> bool {
        // every edge between assigned nodes needs enough compatible images
        let mut by_pair: HashMap<(usize, usize), usize> = HashMap::new();
        for &de in &self.incident[d] {
            let e = &self.dom_edges[de].1;
            if self.assign[e.src].is_none() || self.assign[e.tgt].is_none() {
                continue;
            }
            let cands = self.edge_candidates(de);
            if cands.is_empty() {
                return false;
            }
            if self.p.injective {
                *by_pair.entry((e.src, e.tgt)).or_default() += 1;
                let (s, t) = (self.assign[e.src].unwrap(), self.assign[e.tgt].unwrap());
                let avail = self.cod_between.get(&(s, t)).map_or(0, |v| v.len());
                if by_pair[&(e.src, e.tgt)] > avail {
                    return false;
                }
            }
        }
        true
    }

    fn assign_nodes<F>(&mut self, k: usize, visit: &mut F) -> ControlFlow<()>
    where
        F: FnMut(&BTreeMap<NodeId, NodeId>, &BTreeMap<EdgeId, EdgeId>) -> ControlFlow<()>,
    {
        if k == self.order.len() {
            let cands: Vec<Vec<usize>> = (0..self.dom_edges.len()).map(|de| self.edge_candidates(de)).collect();
            let node_map: BTreeMap<NodeId, NodeId> = self
                .dom_nodes
                .iter()
                .enumerate()
                .map(|(d, n)| ((*n).clone(), self.cod_nodes[self.assign[d].unwrap()].clone()))
                .collect();
            return self.assign_edges(0, &cands, &node_map, visit);
        }
        let d = self.order[k];
        for i in 0..self.node_cands[d].len() {
            let c = self.node_cands[d][i];
            if self.p.injective && self.used_nodes[c] {
                continue;
            }
            self.assign[d] = Some(c);
            if self.node_consistent(d) {
                self.used_nodes[c] = true;
                let flow = self.assign_nodes(k + 1, visit);
                self.used_nodes[c] = false;
                if flow.is_break() {
                    self.assign[d] = None;
                    return flow;
                }
            }
            self.assign[d] = None;
        }
        ControlFlow::Continue(())
    }

    fn assign_edges<F>(
        &mut self,
        de: usize,
        cands: &[Vec<usize>],
        node_map: &BTreeMap<NodeId, NodeId>,
        visit: &mut F,
    ) -> ControlFlow<()>
    where
        F: FnMut(&BTreeMap<NodeId, NodeId>, &BTreeMap<EdgeId, EdgeId>) -> ControlFlow<()>,
    {
        if de == self.dom_edges.len() {
            let edge_map: BTreeMap<EdgeId, EdgeId> = self
                .dom_edges
                .iter()
                .enumerate()
                .map(|(i, (id, _))| ((*id).clone(), self.cod_edges[self.edge_assign[i]].0.clone()))
                .collect();
            return visit(node_map, &edge_map);
        }
        for &ce in &cands[de] {
            if self.p.injective && self.used_edges[ce] {
                continue;
            }
            self.edge_assign[de] = ce;
            self.used_edges[ce] = true;
            let flow = self.assign_edges(de + 1, cands, node_map, visit);
            self.used_edges[ce] = false;
            flow?;
        }
        ControlFlow::Continue(())
    }
}
