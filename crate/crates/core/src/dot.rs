//! Graphviz output for graphs and rewrite traces.
//!
//! Edges labeled `0` are drawn dashed, following the usual BDD convention.

use std::fmt::Write;

use crate::graph::{GraphMorphism, LabeledGraph};
use crate::lattice::BDD_ZERO;
use crate::rewrite::RewriteTrace;

fn quote(s: &str) -> String {
    let mut out = String::with_capacity(s.len() + 2);
    out.push('"');
    for c in s.chars() {
        match c {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            c => out.push(c),
        }
    }
    out.push('"');
    out
}

fn write_body(out: &mut String, g: &LabeledGraph, prefix: &str, indent: &str) {
    for (n, l) in g.nodes() {
        let _ = writeln!(
            out,
            "{indent}{} [label={}];",
            quote(&format!("{prefix}{n}")),
            quote(&format!("{n} : {}", g.label_name(l)))
        );
    }
    for (id, e) in g.edges() {
        let label = g.label_name(e.label);
        let style = if label == BDD_ZERO { ", style=dashed" } else { "" };
        let _ = writeln!(
            out,
            "{indent}{} -> {} [label={}{style}];",
            quote(&format!("{prefix}{}", e.src)),
            quote(&format!("{prefix}{}", e.tgt)),
            quote(&format!("{id} : {label}")),
        );
    }
}

/// A `digraph` with one statement per node and edge.
pub fn emit_graph_dot(g: &LabeledGraph, name: &str) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "digraph {} {{", quote(name));
    write_body(&mut out, g, "", "  ");
    out.push_str("}\n");
    out
}

/// One cluster per object of the step, with each morphism's node map drawn
/// as dotted arrows between clusters.
pub fn emit_trace_dot(t: &RewriteTrace) -> String {
    let rule = &t.rule;
    let objects: [(&str, &LabeledGraph); 8] = [
        ("L", rule.lhs()),
        ("K", rule.interface()),
        ("R", rule.rhs()),
        ("Lp", rule.context()),
        ("Kp", rule.context_interface()),
        ("GL", t.host()),
        ("GK", t.interface_host()),
        ("GR", t.result()),
    ];
    let arrows: [(&str, &GraphMorphism, &str, &str); 12] = [
        ("l", rule.l(), "K", "L"),
        ("r", rule.r(), "K", "R"),
        ("tL", rule.t_l(), "L", "Lp"),
        ("tK", rule.t_k(), "K", "Kp"),
        ("lp", rule.l_prime(), "Kp", "Lp"),
        ("m", &t.m, "L", "GL"),
        ("alpha", &t.alpha, "GL", "Lp"),
        ("gL", &t.g_l, "GK", "GL"),
        ("u'", &t.u_prime, "GK", "Kp"),
        ("u", &t.u, "K", "GK"),
        ("gR", &t.g_r, "GK", "GR"),
        ("w", &t.w, "R", "GR"),
    ];
    let mut out = String::new();
    out.push_str("digraph \"trace\" {\n  compound=true;\n");
    for (name, g) in objects {
        let _ = writeln!(out, "  subgraph {} {{", quote(&format!("cluster_{name}")));
        let _ = writeln!(out, "    label={};", quote(name));
        write_body(&mut out, g, &format!("{name}/"), "    ");
        out.push_str("  }\n");
    }
    for (name, f, dom, cod) in arrows {
        for (x, y) in f.node_map() {
            let _ = writeln!(
                out,
                "  {} -> {} [label={}, style=dotted, color=gray];",
                quote(&format!("{dom}/{x}")),
                quote(&format!("{cod}/{y}")),
                quote(name)
            );
        }
    }
    out.push_str("}\n");
    out
}
