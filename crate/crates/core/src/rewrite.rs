//! Rewrite steps: the pushout-only and pullback-only toy engines and full
//! PBPO+ steps, plus rule validation, rule completion and a normalizer.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{
    same_graph, same_lattice, validate_morphism, EdgeId, GraphError, GraphMorphism, LabeledGraph, NodeId,
};
use crate::limits::{
    is_pullback_square, is_pushout_square, pair_name, preimage, pullback, pullback_unchecked, pushout,
    pushout_unchecked, Cospan, LimitError, PullbackSquare, PushoutSquare, Side, Span,
};
use crate::matching::{check_strong_match, find_matches, Match, MatchError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RewriteError {
    #[error("match is not injective")]
    NotInjective,
    #[error("adherence does not target the rule's type graph")]
    TypingMismatch,
    #[error("invalid rule: {0}")]
    InvalidRule(RuleReport),
    #[error("adherence does not establish a strong match")]
    StrongMatchFailure,
    #[error("no interface morphism u with t_K = u' . u: {0}")]
    InternalMediatorFailure(String),
    #[error("ill-formed rhs spec: {0}")]
    RSpecIllFormed(String),
    #[error(transparent)]
    Limit(#[from] LimitError),
    #[error(transparent)]
    Match(#[from] MatchError),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

/// A pushout-only rule `rho: L -> R`.
#[derive(Debug, Clone)]
pub struct ToyPoRule {
    pub rho: GraphMorphism,
}

/// A pullback-only rule `rho: R' -> L'`, read as `L' <- R'`.
#[derive(Debug, Clone)]
pub struct ToyPbRule {
    pub rho: GraphMorphism,
}

/// Result of a toy step: the rewritten graph and the two legs into or out of it.
#[derive(Debug, Clone)]
pub struct ToyStep {
    pub result: Arc<LabeledGraph>,
    /// pushout: `G -> H`; pullback: `H -> G`
    pub host_leg: GraphMorphism,
    /// pushout: `R -> H`; pullback: `H -> R'`
    pub rule_leg: GraphMorphism,
}

/// Glues `R` into `G` along an injective match `m: L -> G`.
pub fn toypo_step(rule: &ToyPoRule, m: &GraphMorphism) -> Result<ToyStep, RewriteError> {
    if !m.is_injective() {
        return Err(RewriteError::NotInjective);
    }
    let po = pushout(&Span {
        left: m.clone(),
        right: rule.rho.clone(),
    })?;
    Ok(ToyStep {
        result: po.object,
        host_leg: po.left,
        rule_leg: po.right,
    })
}

/// Pulls the typed host `alpha: G -> L'` back along `rho: R' -> L'`.
pub fn toypb_step(rule: &ToyPbRule, alpha: &GraphMorphism) -> Result<ToyStep, RewriteError> {
    if !same_graph(alpha.cod(), rule.rho.cod()) {
        return Err(RewriteError::TypingMismatch);
    }
    let pb = pullback(&Cospan {
        left: alpha.clone(),
        right: rule.rho.clone(),
    })?;
    Ok(ToyStep {
        result: pb.object,
        host_leg: pb.left,
        rule_leg: pb.right,
    })
}

/// A PBPO+ rule
///
/// ```text
///  L <-l-- K --r--> R
///  |       |
/// t_L     t_K
///  v       v
///  L' <-l'- K'
/// ```
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PbpoRule {
    l: GraphMorphism,
    r: GraphMorphism,
    t_l: GraphMorphism,
    t_k: GraphMorphism,
    l_prime: GraphMorphism,
}

impl PbpoRule {
    pub fn new(
        l: GraphMorphism,
        r: GraphMorphism,
        t_l: GraphMorphism,
        t_k: GraphMorphism,
        l_prime: GraphMorphism,
    ) -> Result<Self, RewriteError> {
        let rule = PbpoRule::from_parts_unchecked(l, r, t_l, t_k, l_prime);
        let report = validate_rule(&rule);
        if report.is_ok() {
            Ok(rule)
        } else {
            Err(RewriteError::InvalidRule(report))
        }
    }

    pub fn from_parts_unchecked(
        l: GraphMorphism,
        r: GraphMorphism,
        t_l: GraphMorphism,
        t_k: GraphMorphism,
        l_prime: GraphMorphism,
    ) -> Self {
        PbpoRule { l, r, t_l, t_k, l_prime }
    }

    pub fn l(&self) -> &GraphMorphism {
        &self.l
    }
    pub fn r(&self) -> &GraphMorphism {
        &self.r
    }
    pub fn t_l(&self) -> &GraphMorphism {
        &self.t_l
    }
    pub fn t_k(&self) -> &GraphMorphism {
        &self.t_k
    }
    pub fn l_prime(&self) -> &GraphMorphism {
        &self.l_prime
    }

    /// `L`
    pub fn lhs(&self) -> &Arc<LabeledGraph> {
        self.t_l.dom()
    }
    /// `K`
    pub fn interface(&self) -> &Arc<LabeledGraph> {
        self.l.dom()
    }
    /// `R`
    pub fn rhs(&self) -> &Arc<LabeledGraph> {
        self.r.cod()
    }
    /// `L'`
    pub fn context(&self) -> &Arc<LabeledGraph> {
        self.t_l.cod()
    }
    /// `K'`
    pub fn context_interface(&self) -> &Arc<LabeledGraph> {
        self.l_prime.dom()
    }

    /// The rule's left square as a pullback-square candidate.
    pub fn left_square(&self) -> PullbackSquare {
        PullbackSquare {
            corner_left: self.l.clone(),
            corner_right: self.t_k.clone(),
            left: self.t_l.clone(),
            right: self.l_prime.clone(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RuleViolation {
    InvalidMorphism(&'static str, String),
    Shape(&'static str),
    LatticeMismatch,
    NonInjectiveTyping,
    LeftSquareNotCommuting,
    LeftSquareNotPullback,
}

impl fmt::Display for RuleViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RuleViolation::InvalidMorphism(m, r) => write!(f, "morphism {m} is invalid: {r}"),
            RuleViolation::Shape(s) => write!(f, "{s}"),
            RuleViolation::LatticeMismatch => write!(f, "rule graphs use different lattices"),
            RuleViolation::NonInjectiveTyping => write!(f, "t_L is not injective"),
            RuleViolation::LeftSquareNotCommuting => write!(f, "left square does not commute"),
            RuleViolation::LeftSquareNotPullback => {
                write!(f, "left square is not a pullback (K is not the preimage of t_L under l')")
            }
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct RuleReport {
    pub violations: Vec<RuleViolation>,
}

impl RuleReport {
    pub fn is_ok(&self) -> bool {
        self.violations.is_empty()
    }
}

impl fmt::Display for RuleReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.violations.is_empty() {
            return write!(f, "ok");
        }
        let parts: Vec<String> = self.violations.iter().map(|v| v.to_string()).collect();
        write!(f, "{}", parts.join("; "))
    }
}

pub fn validate_rule(rule: &PbpoRule) -> RuleReport {
    let mut v = Vec::new();
    for (name, m) in [
        ("l", &rule.l),
        ("r", &rule.r),
        ("t_L", &rule.t_l),
        ("t_K", &rule.t_k),
        ("l'", &rule.l_prime),
    ] {
        let r = validate_morphism(m);
        if !r.is_ok() {
            v.push(RuleViolation::InvalidMorphism(name, r.to_string()));
        }
    }
    let graphs = [rule.lhs(), rule.interface(), rule.rhs(), rule.context(), rule.context_interface()];
    if graphs.iter().any(|g| !same_lattice(g.lattice(), graphs[0].lattice())) {
        v.push(RuleViolation::LatticeMismatch);
    }
    let checks = [
        (same_graph(rule.l.cod(), rule.t_l.dom()), "l and t_L disagree on L"),
        (same_graph(rule.r.dom(), rule.l.dom()), "l and r disagree on K"),
        (same_graph(rule.t_k.dom(), rule.l.dom()), "l and t_K disagree on K"),
        (same_graph(rule.t_k.cod(), rule.l_prime.dom()), "t_K and l' disagree on K'"),
        (same_graph(rule.l_prime.cod(), rule.t_l.cod()), "l' and t_L disagree on L'"),
    ];
    for (ok, msg) in checks {
        if !ok {
            v.push(RuleViolation::Shape(msg));
        }
    }
    if !v.is_empty() {
        return RuleReport { violations: v };
    }
    if !rule.t_l.is_injective() {
        v.push(RuleViolation::NonInjectiveTyping);
    }
    match is_pullback_square(&rule.left_square()) {
        Ok(true) => {}
        Ok(false) => v.push(RuleViolation::LeftSquareNotPullback),
        Err(LimitError::NonCommuting) => v.push(RuleViolation::LeftSquareNotCommuting),
        Err(e) => v.push(RuleViolation::InvalidMorphism("left square", e.to_string())),
    }
    RuleReport { violations: v }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FreshNode {
    pub id: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FreshEdge {
    pub id: String,
    pub src: String,
    pub tgt: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
}

/// How to build `R` from the computed interface `K`.
///
/// Merge classes name `K` elements; each class becomes one `R` element named
/// after its first member. Elements of `K` not in any class survive as is.
/// Fresh elements and relabelings refer to `R` ids. Unlabeled fresh elements
/// get top. Relabeling may only raise a label.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct RSpec {
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub merge_nodes: Vec<Vec<String>>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub merge_edges: Vec<Vec<String>>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub add_nodes: Vec<FreshNode>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub add_edges: Vec<FreshEdge>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub relabel_nodes: BTreeMap<String, String>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub relabel_edges: BTreeMap<String, String>,
}

fn classes<'a>(
    ids: impl Iterator<Item = &'a str>,
    merges: &[Vec<String>],
    what: &str,
) -> Result<BTreeMap<String, String>, RewriteError> {
    let ids: BTreeSet<&str> = ids.collect();
    let mut rep: BTreeMap<String, String> = ids.iter().map(|i| (i.to_string(), i.to_string())).collect();
    let mut seen = BTreeSet::new();
    for class in merges {
        let Some(first) = class.first() else {
            return Err(RewriteError::RSpecIllFormed(format!("empty {what} merge class")));
        };
        for member in class {
            if !ids.contains(member.as_str()) {
                return Err(RewriteError::RSpecIllFormed(format!("unknown {what} `{member}` in K")));
            }
            if !seen.insert(member.clone()) {
                return Err(RewriteError::RSpecIllFormed(format!("{what} `{member}` merged twice")));
            }
            rep.insert(member.clone(), first.clone());
        }
    }
    Ok(rep)
}

/// Builds `R` and `r: K -> R` from an [`RSpec`].
pub fn build_rhs(k: &Arc<LabeledGraph>, spec: &RSpec) -> Result<GraphMorphism, RewriteError> {
    let lat = k.lattice().clone();
    let ill = |m: String| RewriteError::RSpecIllFormed(m);
    let label = |name: &Option<String>| -> Result<crate::lattice::Label, RewriteError> {
        match name {
            None => Ok(lat.top()),
            Some(n) => lat.label(n).map_err(|e| ill(e.to_string())),
        }
    };
    let node_rep = classes(k.node_ids().map(|n| n.as_str()), &spec.merge_nodes, "node")?;
    let edge_rep = classes(k.edge_ids().map(|e| e.as_str()), &spec.merge_edges, "edge")?;

    let mut r = LabeledGraph::new(lat.clone());
    let mut node_members: BTreeMap<&String, Vec<crate::lattice::Label>> = BTreeMap::new();
    for (n, l) in k.nodes() {
        node_members.entry(&node_rep[n.as_str()]).or_default().push(l);
    }
    let mut r_node_labels = BTreeMap::new();
    for (id, labels) in &node_members {
        let base = lat.join(labels.iter().copied()).expect("K labels");
        let l = match spec.relabel_nodes.get(*id) {
            None => base,
            Some(name) => {
                let new = lat.label(name).map_err(|e| ill(e.to_string()))?;
                if !lat.le(base, new) {
                    return Err(ill(format!("relabeling node `{id}` to `{name}` would lower its label")));
                }
                new
            }
        };
        r_node_labels.insert((*id).clone(), l);
    }
    for (id, l) in &r_node_labels {
        r.add_node(id.as_str(), *l)?;
    }
    for fresh in &spec.add_nodes {
        r.add_node(fresh.id.as_str(), label(&fresh.label)?)
            .map_err(|e| ill(e.to_string()))?;
    }

    let mut edge_members: BTreeMap<&String, Vec<&crate::graph::Edge>> = BTreeMap::new();
    for (e, edge) in k.edges() {
        edge_members.entry(&edge_rep[e.as_str()]).or_default().push(edge);
    }
    for (id, members) in &edge_members {
        let src = &node_rep[members[0].src.as_str()];
        let tgt = &node_rep[members[0].tgt.as_str()];
        if members
            .iter()
            .any(|m| &node_rep[m.src.as_str()] != src || &node_rep[m.tgt.as_str()] != tgt)
        {
            return Err(ill(format!("merged edges in `{id}` have different endpoints")));
        }
        let base = lat.join(members.iter().map(|m| m.label)).expect("K labels");
        let l = match spec.relabel_edges.get(*id) {
            None => base,
            Some(name) => {
                let new = lat.label(name).map_err(|e| ill(e.to_string()))?;
                if !lat.le(base, new) {
                    return Err(ill(format!("relabeling edge `{id}` to `{name}` would lower its label")));
                }
                new
            }
        };
        r.add_edge(id.as_str(), src.as_str(), tgt.as_str(), l)?;
    }
    for fresh in &spec.add_edges {
        r.add_edge(fresh.id.as_str(), fresh.src.as_str(), fresh.tgt.as_str(), label(&fresh.label)?)
            .map_err(|e| ill(e.to_string()))?;
    }
    for id in spec.relabel_nodes.keys() {
        if !node_members.contains_key(id) {
            return Err(ill(format!("relabel of unknown node `{id}`")));
        }
    }
    for id in spec.relabel_edges.keys() {
        if !edge_members.contains_key(id) {
            return Err(ill(format!("relabel of unknown edge `{id}`")));
        }
    }
    let r = Arc::new(r);
    Ok(GraphMorphism::new(
        k.clone(),
        r,
        node_rep.into_iter().map(|(a, b)| (a.into(), b.into())).collect(),
        edge_rep.into_iter().map(|(a, b)| (a.into(), b.into())).collect(),
    )?)
}

/// Completes a rule from its pattern typing, `l'`, and a recipe for `R`.
///
/// `K` is the preimage of `t_L(L)` under `l'` (keeping `K'` ids), with the
/// induced `l` and `t_K`.
pub fn complete_rule(t_l: &GraphMorphism, l_prime: &GraphMorphism, r_spec: &RSpec) -> Result<PbpoRule, RewriteError> {
    let pre = preimage(t_l, l_prime)?;
    let r = build_rhs(&pre.graph, r_spec)?;
    PbpoRule::new(pre.projection, r, t_l.clone(), pre.inclusion, l_prime.clone())
}

/// Every object and morphism of one PBPO+ step.
///
/// ```text
///                    K ---r---> R
///                    |u         |w
///  L --m--> G_L <-g_L- G_K -g_R-> G_R
///  ||        |alpha    |u'
///  L -t_L--> L' <-l'-- K'
/// ```
#[derive(Debug, Clone)]
pub struct RewriteTrace {
    pub rule: PbpoRule,
    pub m: GraphMorphism,
    pub alpha: GraphMorphism,
    pub g_l: GraphMorphism,
    pub u_prime: GraphMorphism,
    pub u: GraphMorphism,
    pub g_r: GraphMorphism,
    pub w: GraphMorphism,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TraceError {
    #[error("{0} is not a pullback")]
    NotPullback(&'static str),
    #[error("{0} is not a pushout")]
    NotPushout(&'static str),
    #[error("t_K != u' . u")]
    InterfaceMismatch,
    #[error("g_L . u != m . l")]
    LeftInterfaceSquare,
    #[error("u is not injective")]
    NonInjectiveInterface,
    #[error("{0}: {1}")]
    Limit(&'static str, LimitError),
}

impl RewriteTrace {
    pub fn host(&self) -> &Arc<LabeledGraph> {
        self.alpha.dom()
    }

    pub fn interface_host(&self) -> &Arc<LabeledGraph> {
        self.g_l.dom()
    }

    pub fn result(&self) -> &Arc<LabeledGraph> {
        self.w.cod()
    }

    pub fn match_square(&self) -> PullbackSquare {
        PullbackSquare {
            corner_left: GraphMorphism::identity(self.rule.lhs().clone()),
            corner_right: self.m.clone(),
            left: self.rule.t_l().clone(),
            right: self.alpha.clone(),
        }
    }

    pub fn middle_square(&self) -> PullbackSquare {
        PullbackSquare {
            corner_left: self.g_l.clone(),
            corner_right: self.u_prime.clone(),
            left: self.alpha.clone(),
            right: self.rule.l_prime().clone(),
        }
    }

    pub fn right_square(&self) -> PushoutSquare {
        PushoutSquare {
            left: self.u.clone(),
            right: self.rule.r().clone(),
            cocone_left: self.g_r.clone(),
            cocone_right: self.w.clone(),
        }
    }

    /// Re-checks every square of the step.
    pub fn verify(&self) -> Result<(), TraceError> {
        let pb = |sq: &PullbackSquare, name| match is_pullback_square(sq) {
            Ok(true) => Ok(()),
            Ok(false) => Err(TraceError::NotPullback(name)),
            Err(e) => Err(TraceError::Limit(name, e)),
        };
        pb(&self.match_square(), "match square")?;
        pb(&self.middle_square(), "middle square")?;
        match is_pushout_square(&self.right_square()) {
            Ok(true) => {}
            Ok(false) => return Err(TraceError::NotPushout("right square")),
            Err(e) => return Err(TraceError::Limit("right square", e)),
        }
        let via_u = self.u.then_unchecked(&self.u_prime);
        if !via_u.agrees_with(self.rule.t_k()) {
            return Err(TraceError::InterfaceMismatch);
        }
        let a = self.u.then_unchecked(&self.g_l);
        let b = self.rule.l().then_unchecked(&self.m);
        if !a.agrees_with(&b) {
            return Err(TraceError::LeftInterfaceSquare);
        }
        if self.rule.t_l().is_injective() && !self.u.is_injective() {
            return Err(TraceError::NonInjectiveInterface);
        }
        Ok(())
    }
}

/// Performs one PBPO+ step.
///
/// `G_K` is the pullback of `(alpha, l')`; `u` comes from pulling `m` back
/// along `g_L` and is checked against `t_K = u' . u`; `G_R` is the pushout
/// of `(u, r)`. Elements created by `R` are named `s<step>.<id>`; other
/// result elements take back their host ids where that is unambiguous.
pub fn pbpo_step(rule: &PbpoRule, mt: &Match, step: usize) -> Result<RewriteTrace, RewriteError> {
    let report = validate_rule(rule);
    if !report.is_ok() {
        return Err(RewriteError::InvalidRule(report));
    }
    if !same_graph(mt.t_l.dom(), rule.t_l().dom())
        || !same_graph(mt.t_l.cod(), rule.t_l().cod())
        || !mt.t_l.agrees_with(rule.t_l())
    {
        return Err(RewriteError::StrongMatchFailure);
    }
    match check_strong_match(rule.t_l(), &mt.alpha)? {
        Some(found) if found.m.agrees_with(&mt.m) => {}
        _ => return Err(RewriteError::StrongMatchFailure),
    }
    let m = &mt.m;
    let alpha = &mt.alpha;

    // (1) G_K as the pullback of alpha and l'
    let mid = pullback_unchecked(alpha, rule.l_prime());
    let g_l = mid.left;
    let u_prime = mid.right;
    let g_k = mid.object;

    // (2) u: pull m back along g_L and identify the result with K
    let u = interface_morphism(rule, m, &g_l, &g_k)?;
    if !u.then_unchecked(&u_prime).agrees_with(rule.t_k()) {
        return Err(RewriteError::InternalMediatorFailure("t_K != u' . u".into()));
    }
    if rule.t_l().is_injective() && !u.is_injective() {
        return Err(RewriteError::InternalMediatorFailure("u is not injective".into()));
    }

    // (3) G_R as the pushout of u and r
    let po = pushout_unchecked(&u, rule.r(), &format!("s{step}."));
    let (g_r, w) = restore_host_names(&po, &g_l);

    Ok(RewriteTrace {
        rule: rule.clone(),
        m: m.clone(),
        alpha: alpha.clone(),
        g_l,
        u_prime,
        u,
        g_r,
        w,
    })
}

fn interface_morphism(
    rule: &PbpoRule,
    m: &GraphMorphism,
    g_l: &GraphMorphism,
    g_k: &Arc<LabeledGraph>,
) -> Result<GraphMorphism, RewriteError> {
    let k = rule.interface();
    let fail = |s: String| RewriteError::InternalMediatorFailure(s);
    let pb = pullback_unchecked(m, g_l);
    // K -> pullback object, via (l(k), (m(l(k)), t_K(k)))
    let mut to_pb_nodes = BTreeMap::new();
    for (x, label) in k.nodes() {
        let lx = rule.l().node(x.as_str());
        let id = pair_name(lx.as_str(), &pair_name(m.node(lx.as_str()).as_str(), rule.t_k().node(x.as_str()).as_str()));
        if pb.object.node_label(&id) != Some(label) {
            return Err(fail(format!("interface node `{x}` has no matching pullback element")));
        }
        to_pb_nodes.insert(x.clone(), NodeId::new(id));
    }
    let mut to_pb_edges = BTreeMap::new();
    for (x, edge) in k.edges() {
        let lx = rule.l().edge(x.as_str());
        let id = pair_name(lx.as_str(), &pair_name(m.edge(lx.as_str()).as_str(), rule.t_k().edge(x.as_str()).as_str()));
        if pb.object.edge(&id).map(|e| e.label) != Some(edge.label) {
            return Err(fail(format!("interface edge `{x}` has no matching pullback element")));
        }
        to_pb_edges.insert(x.clone(), EdgeId::new(id));
    }
    let distinct_n: BTreeSet<&NodeId> = to_pb_nodes.values().collect();
    let distinct_e: BTreeSet<&EdgeId> = to_pb_edges.values().collect();
    if distinct_n.len() != pb.object.node_count() || distinct_e.len() != pb.object.edge_count() {
        return Err(fail("pulling m back along g_L does not recover K".into()));
    }
    let to_pb = GraphMorphism::new_unchecked(k.clone(), pb.object.clone(), to_pb_nodes, to_pb_edges);
    Ok(to_pb.then_unchecked(&pb.right).with_cod(g_k.clone()))
}

/// Renames pushout elements that came from `G_K` back to their host id when
/// no other element claims the same id.
fn restore_host_names(
    po: &crate::limits::LimitResult,
    g_l: &GraphMorphism,
) -> (GraphMorphism, GraphMorphism) {
    fn proposals<K: Ord + Clone + From<String> + AsRef<str>>(
        naming: &BTreeMap<K, Vec<(Side, K)>>,
        host_of: impl Fn(&K) -> K,
    ) -> BTreeMap<K, K> {
        let mut proposed: BTreeMap<K, K> = BTreeMap::new();
        for (id, members) in naming {
            if let (Side::Left, first) = &members[0] {
                proposed.insert(id.clone(), host_of(first));
            }
        }
        loop {
            let mut count: BTreeMap<&K, usize> = BTreeMap::new();
            for v in proposed.values() {
                *count.entry(v).or_default() += 1;
            }
            let kept: BTreeSet<&K> = naming.keys().filter(|k| !proposed.contains_key(*k)).collect();
            let clash: Vec<K> = proposed
                .iter()
                .filter(|(k, v)| (count[v] > 1 || kept.contains(v)) && *k != *v)
                .map(|(k, _)| k.clone())
                .collect();
            if clash.is_empty() {
                break;
            }
            for k in clash {
                proposed.remove(&k);
            }
        }
        proposed
    }
    let node_names = proposals(&po.naming.nodes, |n: &NodeId| g_l.node(n.as_str()).clone());
    let edge_names = proposals(&po.naming.edges, |e: &EdgeId| g_l.edge(e.as_str()).clone());
    let renamed = Arc::new(po.object.renamed(&node_names, &edge_names));
    let recod = |f: &GraphMorphism| {
        GraphMorphism::new_unchecked(
            f.dom().clone(),
            renamed.clone(),
            f.node_map()
                .iter()
                .map(|(k, v)| (k.clone(), node_names.get(v).cloned().unwrap_or_else(|| v.clone())))
                .collect(),
            f.edge_map()
                .iter()
                .map(|(k, v)| (k.clone(), edge_names.get(v).cloned().unwrap_or_else(|| v.clone())))
                .collect(),
        )
    };
    (recod(&po.left), recod(&po.right))
}

impl AsRef<str> for NodeId {
    fn as_ref(&self) -> &str {
        self.as_str()
    }
}

impl AsRef<str> for EdgeId {
    fn as_ref(&self) -> &str {
        self.as_str()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NormalizeStatus {
    /// No rule matches the final graph.
    Fixpoint,
    /// Stopped after `max_steps` with a rule still applicable.
    StepLimit,
}

#[derive(Debug, Clone)]
pub struct Normalization {
    pub graph: Arc<LabeledGraph>,
    pub traces: Vec<RewriteTrace>,
    pub status: NormalizeStatus,
}

fn first_applicable(rules: &[PbpoRule], g: &Arc<LabeledGraph>) -> Result<Option<(usize, Match)>, RewriteError> {
    for (i, rule) in rules.iter().enumerate() {
        if let Some(first) = find_matches(rule, g)?.into_iter().next() {
            return Ok(Some((i, first)));
        }
    }
    Ok(None)
}

/// Applies the first applicable rule at its first match until none applies
/// or `max_steps` steps have been taken.
pub fn normalize(g: &Arc<LabeledGraph>, rules: &[PbpoRule], max_steps: usize) -> Result<Normalization, RewriteError> {
    for rule in rules {
        let report = validate_rule(rule);
        if !report.is_ok() {
            return Err(RewriteError::InvalidRule(report));
        }
    }
    let mut current = g.clone();
    let mut traces = Vec::new();
    loop {
        let Some((i, mt)) = first_applicable(rules, &current)? else {
            return Ok(Normalization {
                graph: current,
                traces,
                status: NormalizeStatus::Fixpoint,
            });
        };
        if traces.len() == max_steps {
            return Ok(Normalization {
                graph: current,
                traces,
                status: NormalizeStatus::StepLimit,
            });
        }
        let trace = pbpo_step(&rules[i], &mt, traces.len() + 1)?;
        current = trace.result().clone();
        traces.push(trace);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{identity, is_isomorphic};
    use crate::lattice::Lattice;

    fn g(lat: &Arc<crate::lattice::Lattice>, nodes: &[(&str, &str)], edges: &[(&str, &str, &str, &str)]) -> Arc<LabeledGraph> {
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

    fn unit() -> Arc<Lattice> {
        Arc::new(Lattice::unit())
    }

    /// identify a and b (edge becomes a loop), add isolated c
    fn merge_and_add(lat: &Arc<Lattice>) -> (Arc<LabeledGraph>, ToyPoRule) {
        let l = g(lat, &[("a", "*"), ("b", "*")], &[("e", "a", "b", "*")]);
        let r = g(lat, &[("ab", "*"), ("c", "*")], &[("e", "ab", "ab", "*")]);
        let rho = hom(&l, &r, &[("a", "ab"), ("b", "ab")]);
        (l, ToyPoRule { rho })
    }

    #[test]
    fn toypo_identity_rule() {
        let lat = unit();
        let l = g(&lat, &[("a", "*")], &[]);
        let host = g(&lat, &[("x", "*"), ("y", "*")], &[("e", "x", "y", "*")]);
        let step = toypo_step(&ToyPoRule { rho: identity(&l) }, &hom(&l, &host, &[("a", "x")])).unwrap();
        assert!(is_isomorphic(&step.result, &host).is_some());
    }

    #[test]
    fn toypo_merge_and_add() {
        let lat = unit();
        let (l, rule) = merge_and_add(&lat);
        let step = toypo_step(&rule, &identity(&l)).unwrap();
        assert!(is_isomorphic(&step.result, rule.rho.cod()).is_some());

        let host = g(
            &lat,
            &[("a", "*"), ("b", "*"), ("d", "*")],
            &[("e", "a", "b", "*"), ("da", "d", "a", "*")],
        );
        let step = toypo_step(&rule, &hom(&l, &host, &[("a", "a"), ("b", "b")])).unwrap();
        let expected = g(
            &lat,
            &[("ab", "*"), ("c", "*"), ("d", "*")],
            &[("loop", "ab", "ab", "*"), ("dab", "d", "ab", "*")],
        );
        assert!(is_isomorphic(&step.result, &expected).is_some());
    }

    #[test]
    fn toypo_rejects_non_injective_match() {
        let lat = unit();
        let (l, rule) = merge_and_add(&lat);
        let host = g(&lat, &[("x", "*")], &[("l", "x", "x", "*")]);
        let m = hom(&l, &host, &[("a", "x"), ("b", "x")]);
        assert_eq!(toypo_step(&rule, &m).unwrap_err(), RewriteError::NotInjective);
    }

    fn loop_graphs(lat: &Arc<Lattice>) -> (Arc<LabeledGraph>, Arc<LabeledGraph>, Arc<LabeledGraph>) {
        let one = g(lat, &[("t", "*")], &[("l", "t", "t", "*")]);
        let two = g(lat, &[("t", "*")], &[("l1", "t", "t", "*"), ("l2", "t", "t", "*")]);
        let none = g(lat, &[("t", "*")], &[]);
        (one, two, none)
    }

    fn triangle(lat: &Arc<Lattice>) -> Arc<LabeledGraph> {
        g(
            lat,
            &[("a", "*"), ("b", "*"), ("c", "*")],
            &[("ab", "a", "b", "*"), ("bc", "b", "c", "*"), ("ca", "c", "a", "*")],
        )
    }

    #[test]
    fn toypb_duplication_and_deletion() {
        let lat = unit();
        let (one, two, none) = loop_graphs(&lat);
        let host = triangle(&lat);
        let alpha = hom(&host, &one, &[("a", "t"), ("b", "t"), ("c", "t")]);
        let dup = GraphMorphism::new(
            two.clone(),
            one.clone(),
            [("t".into(), "t".into())].into_iter().collect(),
            [("l1".into(), "l".into()), ("l2".into(), "l".into())].into_iter().collect(),
        )
        .unwrap();
        let step = toypb_step(&ToyPbRule { rho: dup }, &alpha).unwrap();
        assert_eq!((step.result.node_count(), step.result.edge_count()), (3, 6));

        let del = hom(&none, &one, &[("t", "t")]);
        let step = toypb_step(&ToyPbRule { rho: del }, &alpha).unwrap();
        assert_eq!((step.result.node_count(), step.result.edge_count()), (3, 0));

        let step = toypb_step(&ToyPbRule { rho: identity(&one) }, &alpha).unwrap();
        assert!(is_isomorphic(&step.result, &host).is_some());

        let wrong = hom(&none, &none, &[("t", "t")]);
        assert_eq!(
            toypb_step(&ToyPbRule { rho: wrong }, &alpha).unwrap_err(),
            RewriteError::TypingMismatch
        );
    }

    /// L = {a}; L' = {a, c} with loops on both and edges both ways; K' = {c + loop}
    fn deletion_rule(lat: &Arc<Lattice>) -> PbpoRule {
        let l = g(lat, &[("a", "*")], &[]);
        let lp = g(
            lat,
            &[("a", "*"), ("c", "*")],
            &[("aa", "a", "a", "*"), ("cc", "c", "c", "*"), ("ac", "a", "c", "*"), ("ca", "c", "a", "*")],
        );
        let kp = g(lat, &[("c", "*")], &[("cc", "c", "c", "*")]);
        complete_rule(&hom(&l, &lp, &[("a", "a")]), &hom(&kp, &lp, &[("c", "c")]), &RSpec::default()).unwrap()
    }

    #[test]
    fn complete_rule_node_deletion() {
        let lat = unit();
        let rule = deletion_rule(&lat);
        assert!(rule.interface().is_empty());
        assert!(rule.rhs().is_empty());
        assert!(validate_rule(&rule).is_ok());
    }

    #[test]
    fn pbpo_deletes_node_and_incident_edge() {
        let lat = unit();
        let rule = deletion_rule(&lat);
        let host = g(&lat, &[("x", "*"), ("y", "*")], &[("xy", "x", "y", "*")]);
        let matches = find_matches(&rule, &host).unwrap();
        // x can be the pattern node (y is context); y cannot (no c -> ... wait c->a exists)
        let mt = matches.iter().find(|m| m.m.node("a").as_str() == "x").unwrap();
        let trace = pbpo_step(&rule, mt, 1).unwrap();
        trace.verify().unwrap();
        let expected = g(&lat, &[("y", "*")], &[]);
        assert_eq!(**trace.result(), *expected);
    }

    #[test]
    fn identity_rule_preserves_host() {
        let lat = unit();
        let l = g(&lat, &[("a", "*")], &[]);
        let lp = g(
            &lat,
            &[("a", "*"), ("c", "*")],
            &[("cc", "c", "c", "*"), ("ac", "a", "c", "*"), ("ca", "c", "a", "*")],
        );
        let rule = complete_rule(&hom(&l, &lp, &[("a", "a")]), &identity(&lp), &RSpec::default()).unwrap();
        assert!(is_isomorphic(rule.interface(), &l).is_some());
        let host = triangle(&lat);
        for mt in find_matches(&rule, &host).unwrap() {
            let trace = pbpo_step(&rule, &mt, 1).unwrap();
            trace.verify().unwrap();
            assert_eq!(**trace.result(), *host);
        }
    }

    #[test]
    fn validate_rule_flags_bad_interfaces() {
        let lat = unit();
        let good = deletion_rule(&lat);
        // K with an extra node not in the preimage
        let l = good.lhs().clone();
        let lp = good.context().clone();
        let kp_full = lp.clone();
        let k_small = g(&lat, &[], &[]);
        let bad = PbpoRule::from_parts_unchecked(
            hom(&k_small, &l, &[]),
            identity(&k_small),
            hom(&l, &lp, &[("a", "a")]),
            hom(&k_small, &kp_full, &[]),
            identity(&lp),
        );
        let report = validate_rule(&bad);
        assert_eq!(report.violations, vec![RuleViolation::LeftSquareNotPullback]);

        let two = g(&lat, &[("a", "*"), ("b", "*")], &[]);
        let one = g(&lat, &[("t", "*")], &[]);
        let squash = hom(&two, &one, &[("a", "t"), ("b", "t")]);
        let pre = preimage(&identity(&one), &identity(&one)).unwrap();
        let _ = pre;
        let non_inj = PbpoRule::from_parts_unchecked(
            identity(&two),
            identity(&two),
            squash.clone(),
            squash.clone(),
            identity(&one),
        );
        let report = validate_rule(&non_inj);
        assert!(report.violations.contains(&RuleViolation::NonInjectiveTyping));
    }

    #[test]
    fn rspec_errors() {
        let lat = unit();
        let k = g(&lat, &[("a", "*"), ("b", "*")], &[("e", "a", "b", "*"), ("f", "b", "a", "*")]);
        let bad = |spec: RSpec| matches!(build_rhs(&k, &spec), Err(RewriteError::RSpecIllFormed(_)));
        assert!(bad(RSpec {
            merge_nodes: vec![vec!["a".into(), "zz".into()]],
            ..Default::default()
        }));
        assert!(bad(RSpec {
            merge_edges: vec![vec!["e".into(), "f".into()]],
            ..Default::default()
        }));
        assert!(bad(RSpec {
            add_edges: vec![FreshEdge {
                id: "g".into(),
                src: "a".into(),
                tgt: "nowhere".into(),
                label: None
            }],
            ..Default::default()
        }));
        let ok = build_rhs(
            &k,
            &RSpec {
                merge_nodes: vec![vec!["a".into(), "b".into()]],
                merge_edges: vec![vec!["e".into(), "f".into()]],
                ..Default::default()
            },
        )
        .unwrap();
        assert_eq!((ok.cod().node_count(), ok.cod().edge_count()), (1, 1));
    }

    #[test]
    fn normalize_without_matches_is_a_fixpoint() {
        let lat = unit();
        let rule = deletion_rule(&lat);
        let empty = g(&lat, &[], &[]);
        let out = normalize(&empty, &[rule], 10).unwrap();
        assert_eq!(out.status, NormalizeStatus::Fixpoint);
        assert!(out.traces.is_empty());
    }

    #[test]
    fn normalize_respects_step_limit() {
        let lat = unit();
        let rule = deletion_rule(&lat);
        let host = g(&lat, &[("x", "*"), ("y", "*"), ("z", "*")], &[]);
        let out = normalize(&host, std::slice::from_ref(&rule), 1).unwrap();
        assert_eq!(out.status, NormalizeStatus::StepLimit);
        assert_eq!(out.traces.len(), 1);
        let out = normalize(&host, &[rule], 10).unwrap();
        assert_eq!(out.status, NormalizeStatus::Fixpoint);
        assert_eq!(out.traces.len(), 3);
        assert!(out.graph.is_empty());
    }
}
