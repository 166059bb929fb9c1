//! Homomorphism enumeration and strong matches.
//!
//! A strong match is an adherence `alpha: G -> L'` whose pullback against the
//! context typing `t_L: L -> L'` is `L` itself: exactly one copy of the
//! pattern sits over `t_L(L)` and everything else in `G` is typed by the
//! context part of `L'`.

use std::collections::{BTreeMap, BTreeSet};
use std::ops::ControlFlow;
use std::sync::Arc;

use thiserror::Error;

use crate::graph::{same_graph, EdgeId, GraphMorphism, LabeledGraph, NodeId};
use crate::limits::{pullback_unchecked, PullbackSquare};
use crate::rewrite::{validate_rule, PbpoRule};
use crate::search::HomProblem;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MatchError {
    #[error("adherence and typing have different codomains")]
    TypingMismatch,
    #[error("context typing is not injective")]
    NonInjectiveTyping,
    #[error("invalid rule: {0}")]
    InvalidRule(String),
    #[error("host graph uses lattice `{0}`, rule uses `{1}`")]
    LatticeMismatch(String, String),
}

/// A strong match `(m, alpha)` for a context typing `t_L`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Match {
    /// `L -> G`
    pub m: GraphMorphism,
    /// `G -> L'`
    pub alpha: GraphMorphism,
    /// `L -> L'`
    pub t_l: GraphMorphism,
}

impl Match {
    /// The strong-match square: `L = L`, `m`, `alpha`, `t_L`.
    pub fn square(&self) -> PullbackSquare {
        PullbackSquare {
            corner_left: GraphMorphism::identity(self.t_l.dom().clone()),
            corner_right: self.m.clone(),
            left: self.t_l.clone(),
            right: self.alpha.clone(),
        }
    }
}

/// Every morphism `g -> h`, sorted by node map then edge map.
pub fn enumerate_homomorphisms(
    g: &Arc<LabeledGraph>,
    h: &Arc<LabeledGraph>,
    injective: bool,
) -> Vec<GraphMorphism> {
    let mut out = Vec::new();
    HomProblem::new(g, h).injective(injective).run(|n, e| {
        out.push((n.clone(), e.clone()));
        ControlFlow::Continue(())
    });
    out.sort();
    out.into_iter()
        .map(|(n, e)| GraphMorphism::new_unchecked(g.clone(), h.clone(), n, e))
        .collect()
}

/// Number of morphisms `g -> h` without materializing them.
pub fn count_homomorphisms(g: &LabeledGraph, h: &LabeledGraph, injective: bool) -> usize {
    let mut count = 0;
    HomProblem::new(g, h).injective(injective).run(|_, _| {
        count += 1;
        ControlFlow::Continue(())
    });
    count
}

/// Checks that `alpha` establishes a strong match for `t_l`.
///
/// Returns the match with its induced `m` when the pullback of
/// `(t_l, alpha)` projects isomorphically onto `L`.
pub fn check_strong_match(t_l: &GraphMorphism, alpha: &GraphMorphism) -> Result<Option<Match>, MatchError> {
    if !same_graph(t_l.cod(), alpha.cod()) {
        return Err(MatchError::TypingMismatch);
    }
    if !t_l.is_injective() {
        return Err(MatchError::NonInjectiveTyping);
    }
    let pb = pullback_unchecked(t_l, alpha);
    let Some(inv) = pb.left.inverse() else {
        return Ok(None);
    };
    let inv = inv.with_cod(pb.object.clone());
    let m = inv.then_unchecked(&pb.right);
    let m = m.with_dom(t_l.dom().clone());
    debug_assert!(m.is_injective());
    Ok(Some(Match {
        m,
        alpha: alpha.clone(),
        t_l: t_l.clone(),
    }))
}

/// All strong matches of `rule` in `g`, sorted by `(m, alpha)`.
///
/// Rather than filtering every adherence `g -> L'`, the search first places
/// the pattern injectively and then types the rest of `g` by the part of
/// `L'` outside `t_L(L)`; every strong match has this shape. Each candidate
/// still goes through [`check_strong_match`].
pub fn find_matches(rule: &PbpoRule, g: &Arc<LabeledGraph>) -> Result<Vec<Match>, MatchError> {
    let report = validate_rule(rule);
    if !report.is_ok() {
        return Err(MatchError::InvalidRule(report.to_string()));
    }
    let t_l = rule.t_l();
    let l = t_l.dom();
    let lp = t_l.cod();
    if !crate::graph::same_lattice(g.lattice(), lp.lattice()) {
        return Err(MatchError::LatticeMismatch(
            g.lattice().name().into(),
            lp.lattice().name().into(),
        ));
    }
    let pattern_nodes: BTreeSet<&NodeId> = t_l.node_map().values().collect();
    let pattern_edges: BTreeSet<&EdgeId> = t_l.edge_map().values().collect();

    let mut placements = Vec::new();
    HomProblem::new(l, g).injective(true).run(|n, e| {
        placements.push((n.clone(), e.clone()));
        ControlFlow::Continue(())
    });

    let mut out = Vec::new();
    for (mn, me) in placements {
        let fixed_nodes: BTreeMap<NodeId, NodeId> =
            mn.iter().map(|(x, gx)| (gx.clone(), t_l.node(x.as_str()).clone())).collect();
        let fixed_edges: BTreeMap<EdgeId, EdgeId> =
            me.iter().map(|(x, gx)| (gx.clone(), t_l.edge(x.as_str()).clone())).collect();
        let mut alphas = Vec::new();
        HomProblem::new(g, lp)
            .fixed(fixed_nodes, fixed_edges)
            .node_filter(|_, target| !pattern_nodes.contains(target))
            .edge_filter(|_, target| !pattern_edges.contains(target))
            .run(|n, e| {
                alphas.push(GraphMorphism::new_unchecked(g.clone(), lp.clone(), n.clone(), e.clone()));
                ControlFlow::Continue(())
            });
        for alpha in alphas {
            if let Some(found) = check_strong_match(t_l, &alpha)? {
                debug_assert_eq!(found.m.node_map(), &mn);
                out.push(found);
            }
        }
    }
    out.sort_by(|a, b| {
        (a.m.node_map(), a.m.edge_map(), a.alpha.node_map(), a.alpha.edge_map()).cmp(&(
            b.m.node_map(),
            b.m.edge_map(),
            b.alpha.node_map(),
            b.alpha.edge_map(),
        ))
    });
    Ok(out)
}
