//! Seeded generators shared by the integration tests.
#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use pbpo::graph::{EdgeId, GraphMorphism, LabeledGraph, NodeId};
use pbpo::lattice::{Label, Lattice, LatticeSpec};
use pbpo::limits::{preimage, Cospan, Span};
use pbpo::rewrite::{complete_rule, FreshEdge, FreshNode, PbpoRule, RSpec};
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub use rand::SeedableRng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn unit() -> Arc<Lattice> {
    Arc::new(Lattice::unit())
}

/// `bot < a, b < top`
pub fn diamond() -> Arc<Lattice> {
    let spec = LatticeSpec {
        elements: ["bot", "a", "b", "top"].map(String::from).to_vec(),
        order: [("bot", "a"), ("bot", "b"), ("a", "top"), ("b", "top")]
            .map(|(x, y)| [x.to_string(), y.to_string()])
            .to_vec(),
        top: Some("top".into()),
        bottom: Some("bot".into()),
    };
    Arc::new(Lattice::new("diamond", &spec).unwrap())
}

pub fn labels(lat: &Lattice) -> Vec<Label> {
    lat.labels().collect()
}

pub fn random_label(rng: &mut ChaCha8Rng, lat: &Lattice) -> Label {
    *labels(lat).choose(rng).unwrap()
}

pub fn label_below(rng: &mut ChaCha8Rng, lat: &Lattice, upper: Label) -> Label {
    let below: Vec<Label> = lat.labels().filter(|&l| lat.leq(l, upper).unwrap()).collect();
    *below.choose(rng).unwrap()
}

pub fn label_above(rng: &mut ChaCha8Rng, lat: &Lattice, lower: Label) -> Label {
    let above: Vec<Label> = lat.labels().filter(|&l| lat.leq(lower, l).unwrap()).collect();
    *above.choose(rng).unwrap()
}

pub fn random_graph(
    rng: &mut ChaCha8Rng,
    lat: &Arc<Lattice>,
    nodes: std::ops::RangeInclusive<usize>,
    max_edges: usize,
    prefix: &str,
) -> LabeledGraph {
    let mut g = LabeledGraph::new(lat.clone());
    let n = rng.gen_range(nodes);
    for i in 0..n {
        g.add_node(format!("{prefix}{i}"), random_label(rng, lat)).unwrap();
    }
    if n > 0 {
        for i in 0..rng.gen_range(0..=max_edges) {
            let s = rng.gen_range(0..n);
            let t = rng.gen_range(0..n);
            g.add_edge(format!("{prefix}e{i}"), format!("{prefix}{s}"), format!("{prefix}{t}"), random_label(rng, lat))
                .unwrap();
        }
    }
    g
}

/// A morphism `a -> B` with `B` grown around the image of `a`: nodes may be
/// identified, edges reused, labels raised, and extra elements added.
pub fn random_morphism_out(
    rng: &mut ChaCha8Rng,
    a: &Arc<LabeledGraph>,
    max_nodes: usize,
    max_edges: usize,
    injective: bool,
    prefix: &str,
) -> GraphMorphism {
    let lat = a.lattice().clone();
    let a_nodes: Vec<(&NodeId, Label)> = a.nodes().collect();
    let min = if injective { a_nodes.len() } else { a_nodes.len().min(1) };
    let k = rng.gen_range(min..=max_nodes.max(min));
    let mut slots: Vec<usize> = (0..k).collect();
    slots.shuffle(rng);
    let mut node_map = BTreeMap::new();
    let mut b_labels: Vec<Option<Label>> = vec![None; k];
    for (i, (n, l)) in a_nodes.iter().enumerate() {
        let j = if injective { slots[i] } else { rng.gen_range(0..k) };
        node_map.insert((*n).clone(), NodeId::from(format!("{prefix}{j}")));
        b_labels[j] = Some(match b_labels[j] {
            Some(old) => lat.join([old, *l]).unwrap(),
            None => *l,
        });
    }
    let mut b = LabeledGraph::new(lat.clone());
    for (j, l) in b_labels.iter().enumerate() {
        let l = match l {
            Some(l) if rng.gen_bool(0.7) => *l,
            Some(l) => label_above(rng, &lat, *l),
            None => random_label(rng, &lat),
        };
        b.add_node(format!("{prefix}{j}"), l).unwrap();
    }
    let mut b_edges: Vec<(NodeId, NodeId, Label)> = Vec::new();
    let mut edge_map = BTreeMap::new();
    for (e, edge) in a.edges() {
        let (s, t) = (node_map[&edge.src].clone(), node_map[&edge.tgt].clone());
        let reuse: Vec<usize> = (0..b_edges.len())
            .filter(|&i| b_edges[i].0 == s && b_edges[i].1 == t)
            .collect();
        let idx = if !injective && !reuse.is_empty() && rng.gen_bool(0.5) {
            let i = *reuse.choose(rng).unwrap();
            b_edges[i].2 = lat.join([b_edges[i].2, edge.label]).unwrap();
            i
        } else {
            b_edges.push((s, t, edge.label));
            b_edges.len() - 1
        };
        edge_map.insert(e.clone(), EdgeId::from(format!("{prefix}e{idx}")));
    }
    for l in b_edges.iter_mut() {
        if rng.gen_bool(0.3) {
            l.2 = label_above(rng, &lat, l.2);
        }
    }
    while b_edges.len() < max_edges && k > 0 && rng.gen_bool(0.5) {
        let s = NodeId::from(format!("{prefix}{}", rng.gen_range(0..k)));
        let t = NodeId::from(format!("{prefix}{}", rng.gen_range(0..k)));
        b_edges.push((s, t, random_label(rng, &lat)));
    }
    for (i, (s, t, l)) in b_edges.into_iter().enumerate() {
        b.add_edge(format!("{prefix}e{i}"), s, t, l).unwrap();
    }
    GraphMorphism::new(a.clone(), Arc::new(b), node_map, edge_map).unwrap()
}

/// A morphism `B -> d` with a fresh random `B`.
pub fn random_morphism_into(
    rng: &mut ChaCha8Rng,
    d: &Arc<LabeledGraph>,
    max_nodes: usize,
    max_edges: usize,
    prefix: &str,
) -> GraphMorphism {
    let lat = d.lattice().clone();
    let d_nodes: Vec<(&NodeId, Label)> = d.nodes().collect();
    let mut b = LabeledGraph::new(lat.clone());
    let mut node_map = BTreeMap::new();
    let mut over: BTreeMap<NodeId, Vec<NodeId>> = BTreeMap::new();
    if !d_nodes.is_empty() {
        for i in 0..rng.gen_range(0..=max_nodes) {
            let (dn, dl) = d_nodes.choose(rng).unwrap();
            let id = NodeId::from(format!("{prefix}{i}"));
            b.add_node(id.clone(), label_below(rng, &lat, *dl)).unwrap();
            node_map.insert(id.clone(), (*dn).clone());
            over.entry((*dn).clone()).or_default().push(id);
        }
    }
    let d_edges: Vec<_> = d.edges().collect();
    let mut edge_map = BTreeMap::new();
    if !d_edges.is_empty() {
        let mut i = 0;
        for _ in 0..rng.gen_range(0..=max_edges) {
            let (de, edge) = d_edges.choose(rng).unwrap();
            let (Some(ss), Some(ts)) = (over.get(&edge.src), over.get(&edge.tgt)) else {
                continue;
            };
            let id = EdgeId::from(format!("{prefix}e{i}"));
            i += 1;
            let (s, t) = (ss.choose(rng).unwrap().clone(), ts.choose(rng).unwrap().clone());
            b.add_edge(id.clone(), s, t, label_below(rng, &lat, edge.label)).unwrap();
            edge_map.insert(id, (*de).clone());
        }
    }
    GraphMorphism::new(Arc::new(b), d.clone(), node_map, edge_map).unwrap()
}

/// Span over graphs with at most 4 nodes and 6 edges.
pub fn random_span(rng: &mut ChaCha8Rng, lat: &Arc<Lattice>) -> Span {
    let a = Arc::new(random_graph(rng, lat, 0..=3, 3, "a"));
    Span {
        left: random_morphism_out(rng, &a, 4, 6, false, "b"),
        right: random_morphism_out(rng, &a, 4, 6, false, "c"),
    }
}

/// Cospan over graphs with at most 4 nodes and 6 edges.
pub fn random_cospan(rng: &mut ChaCha8Rng, lat: &Arc<Lattice>) -> Cospan {
    let d = Arc::new(random_graph(rng, lat, 1..=3, 4, "d"));
    Cospan {
        left: random_morphism_into(rng, &d, 4, 6, "b"),
        right: random_morphism_into(rng, &d, 4, 6, "c"),
    }
}

/// Renames every element of `g` through a random permutation of its ids,
/// returning the copy and the isomorphism `g -> copy`.
pub fn permuted(rng: &mut ChaCha8Rng, g: &Arc<LabeledGraph>, prefix: &str) -> GraphMorphism {
    let mut nodes: Vec<NodeId> = g.node_ids().cloned().collect();
    let mut edges: Vec<EdgeId> = g.edge_ids().cloned().collect();
    nodes.shuffle(rng);
    edges.shuffle(rng);
    let node_names: BTreeMap<NodeId, NodeId> = nodes
        .into_iter()
        .enumerate()
        .map(|(i, n)| (n, NodeId::from(format!("{prefix}{i}"))))
        .collect();
    let edge_names: BTreeMap<EdgeId, EdgeId> = edges
        .into_iter()
        .enumerate()
        .map(|(i, e)| (e, EdgeId::from(format!("{prefix}e{i}"))))
        .collect();
    let copy = Arc::new(g.renamed(&node_names, &edge_names));
    GraphMorphism::new(g.clone(), copy, node_names, edge_names).unwrap()
}

/// A host typed over `L'` by `alpha`. Pattern elements get `pattern_copies`
/// copies each, context elements 0 to 2.
pub fn typed_host(
    rng: &mut ChaCha8Rng,
    t_l: &GraphMorphism,
    pattern_copies: &mut dyn FnMut(&mut ChaCha8Rng) -> usize,
) -> GraphMorphism {
    let lp = t_l.cod();
    let lat = lp.lattice().clone();
    let node_floor: BTreeMap<&NodeId, _> =
        t_l.node_map().iter().map(|(x, y)| (y, t_l.dom().node_label(x.as_str()).unwrap())).collect();
    let edge_floor: BTreeMap<_, _> =
        t_l.edge_map().iter().map(|(x, y)| (y, t_l.dom().edge(x.as_str()).unwrap().label)).collect();
    let mut g = LabeledGraph::new(lat.clone());
    let mut copies: BTreeMap<NodeId, Vec<NodeId>> = BTreeMap::new();
    let mut node_map = BTreeMap::new();
    let mut edge_map = BTreeMap::new();
    let in_range = |rng: &mut ChaCha8Rng, lo, hi| {
        let ok: Vec<_> = lat.labels().filter(|&l| lat.leq(lo, l).unwrap() && lat.leq(l, hi).unwrap()).collect();
        *ok.choose(rng).unwrap()
    };
    for (n, l) in lp.nodes() {
        let k = if node_floor.contains_key(n) { pattern_copies(rng) } else { rng.gen_range(0..=2) };
        for i in 0..k {
            let id = NodeId::from(format!("{n}#{i}"));
            let label = match node_floor.get(n) {
                Some(&lo) => in_range(rng, lo, l),
                None => label_below(rng, &lat, l),
            };
            g.add_node(id.clone(), label).unwrap();
            node_map.insert(id.clone(), n.clone());
            copies.entry(n.clone()).or_default().push(id);
        }
    }
    for (e, edge) in lp.edges() {
        let (Some(ss), Some(ts)) = (copies.get(&edge.src), copies.get(&edge.tgt)) else {
            continue;
        };
        let k = if edge_floor.contains_key(e) { pattern_copies(rng) } else { rng.gen_range(0..=2) };
        for i in 0..k {
            let id = EdgeId::from(format!("{e}#{i}"));
            let (s, t) = if edge_floor.contains_key(e) && ss.len() == 1 && ts.len() == 1 {
                (ss[0].clone(), ts[0].clone())
            } else {
                (ss.choose(rng).unwrap().clone(), ts.choose(rng).unwrap().clone())
            };
            let label = match edge_floor.get(e) {
                Some(&lo) => in_range(rng, lo, edge.label),
                None => label_below(rng, &lat, edge.label),
            };
            g.add_edge(id.clone(), s, t, label).unwrap();
            edge_map.insert(id, e.clone());
        }
    }
    GraphMorphism::new(Arc::new(g), lp.clone(), node_map, edge_map).unwrap()
}

pub fn random_typing(rng: &mut ChaCha8Rng, lat: &Arc<Lattice>) -> GraphMorphism {
    let l = Arc::new(random_graph(rng, lat, 1..=3, 2, "p"));
    random_morphism_out(rng, &l, 4, 5, true, "t")
}

pub fn random_rule(rng: &mut ChaCha8Rng, lat: &Arc<Lattice>) -> PbpoRule {
    loop {
        let t_l = random_typing(rng, lat);
        let l_prime = random_morphism_into(rng, t_l.cod(), 5, 5, "k");
        let Ok(pre) = preimage(&t_l, &l_prime) else {
            continue;
        };
        let k_nodes: Vec<String> = pre.graph.node_ids().map(|n| n.to_string()).collect();
        let mut spec = RSpec::default();
        if k_nodes.len() >= 2 && rng.gen_bool(0.5) {
            spec.merge_nodes.push(k_nodes.choose_multiple(rng, 2).cloned().collect());
        }
        let merged: BTreeSet<&String> = spec.merge_nodes.iter().flat_map(|c| c.iter().skip(1)).collect();
        let mut r_nodes: Vec<String> = k_nodes.iter().filter(|n| !merged.contains(n)).cloned().collect();
        if rng.gen_bool(0.5) {
            spec.add_nodes.push(FreshNode {
                id: "fresh".into(),
                label: Some(lat.name_of(random_label(rng, lat)).into()),
            });
            r_nodes.push("fresh".into());
        }
        if !r_nodes.is_empty() && rng.gen_bool(0.5) {
            spec.add_edges.push(FreshEdge {
                id: "fresh.e".into(),
                src: r_nodes.choose(rng).unwrap().clone(),
                tgt: r_nodes.choose(rng).unwrap().clone(),
                label: None,
            });
        }
        if let Ok(rule) = complete_rule(&t_l, &l_prime, &spec) {
            return rule;
        }
    }
}

/// Whether `g` (edges read as undirected) has a proper 2-coloring.
pub fn is_bipartite(g: &LabeledGraph) -> bool {
    let mut color: BTreeMap<&NodeId, bool> = BTreeMap::new();
    for start in g.node_ids() {
        if color.contains_key(start) {
            continue;
        }
        color.insert(start, false);
        let mut stack = vec![start];
        while let Some(n) = stack.pop() {
            let c = color[n];
            let next = g
                .out_edges(n.as_str())
                .map(|(_, e)| &e.tgt)
                .chain(g.in_edges(n.as_str()).map(|(_, e)| &e.src));
            for m in next {
                match color.get(m) {
                    Some(&cm) if cm == c => return false,
                    Some(_) => {}
                    None => {
                        color.insert(m, !c);
                        stack.push(m);
                    }
                }
            }
        }
    }
    true
}
