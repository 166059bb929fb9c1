use std::path::PathBuf;

use pbpo::{build_decision_tree, find_matches, parse_workspace, pbpo_step, validate_rule, TruthTable};

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(name)
}

#[test]
fn fixture_rules_are_well_formed() {
    for file in ["relabel.json", "deletion.json"] {
        let ws = parse_workspace(&[fixture(file)]).unwrap();
        for (name, rule) in &ws.rules {
            let report = validate_rule(rule);
            assert!(report.is_ok(), "{file}#{name}: {report:?}");
        }
    }
}

#[test]
fn reduced_and_full_forms_agree() {
    let ws = parse_workspace(&[fixture("relabel.json")]).unwrap();
    let host = ws.graphs["G_x2"].clone();
    let a = find_matches(&ws.rules["left"], &host).unwrap();
    let b = find_matches(&ws.rules["left_full"], &host).unwrap();
    assert_eq!(a.len(), 1);
    assert_eq!(b.len(), 1);
    let ra = pbpo_step(&ws.rules["left"], &a[0], 1).unwrap();
    let rb = pbpo_step(&ws.rules["left_full"], &b[0], 1).unwrap();
    assert!(pbpo::is_isomorphic(ra.result(), rb.result()).is_some());
    assert_eq!(ra.result().node_label("n").map(|l| ra.result().lattice().name_of(l)), Some("x1"));
}

#[test]
fn deletion_drops_the_node_and_its_edges() {
    let ws = parse_workspace(&[fixture("deletion.json")]).unwrap();
    let host = ws.graphs["G"].clone();
    let ms = find_matches(&ws.rules["delete"], &host).unwrap();
    assert_eq!(ms.len(), 1);
    let out = pbpo_step(&ws.rules["delete"], &ms[0], 1).unwrap();
    let g = out.result();
    assert_eq!(g.node_count(), 1);
    assert_eq!(g.edge_count(), 0);
    assert!(g.node_label("y").is_some());
}

#[test]
fn leaf_rule_matches_every_zero_leaf() {
    let t = TruthTable::parse("0001", "p,q").unwrap();
    let tree = build_decision_tree(&t).unwrap();
    let rules = pbpo::bdd::bdd_rules(tree.graph().lattice()).unwrap();
    assert_eq!(rules.len(), 5);
    // three 0-leaves, matched as ordered pairs of distinct leaves
    assert_eq!(find_matches(&rules[0], tree.graph()).unwrap().len(), 6);
    assert!(find_matches(&rules[1], tree.graph()).unwrap().is_empty());
}
