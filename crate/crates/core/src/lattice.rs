//! Finite complete lattices of labels.
//!
//! A [`Lattice`] is an explicit element set with a reflexive-transitive order
//! relation. Lattices are only ever built from a [`LatticeSpec`] that passed
//! [`validate_lattice`], so every subset has a join and a meet and the lookup
//! functions below never have to report a missing bound.

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Size up to which [`validate_lattice`] checks bounds for every subset.
/// Larger lattices are checked on all pairs and on the full element set.
pub const FULL_POWERSET_LIMIT: usize = 12;

/// Reserved element names of the BDD lattice.
pub const BDD_VAR_CLASS: &str = "Var";
pub const BDD_BOOL_CLASS: &str = "Bool";
pub const BDD_TOP: &str = "top";
pub const BDD_BOTTOM: &str = "bot";
pub const BDD_ZERO: &str = "0";
pub const BDD_ONE: &str = "1";

/// Name and sole element of the one-point lattice used for unlabeled graphs.
pub const UNIT_LATTICE: &str = "unit";
pub const UNIT_ELEMENT: &str = "*";

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LatticeError {
    #[error("unknown label `{0}`")]
    UnknownLabel(String),
    #[error("label index {0} is not an element of lattice `{1}`")]
    ForeignLabel(usize, String),
    #[error("duplicate variable `{0}`")]
    DuplicateVariable(String),
    #[error("variable name `{0}` is reserved")]
    ReservedName(String),
    #[error("not a lattice: {0}")]
    Invalid(LatticeReport),
}

/// An element of some [`Lattice`], as an index into its element list.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Label(pub(crate) u32);

impl Label {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

/// Raw lattice description: the interchange record.
///
/// `order` lists pairs `[a, b]` meaning `a <= b`; the reflexive-transitive
/// closure is taken on load. Omitted `top`/`bottom` are inferred.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LatticeSpec {
    pub elements: Vec<String>,
    #[serde(default)]
    pub order: Vec<[String; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub top: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bottom: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LatticeViolation {
    DuplicateElement(String),
    UnknownElement(String),
    NotAntisymmetric(String, String),
    MissingSupremum(Vec<String>),
    MissingInfimum(Vec<String>),
    TopNotGreatest(String),
    BottomNotLeast(String),
    Empty,
}

impl fmt::Display for LatticeViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LatticeViolation::DuplicateElement(e) => write!(f, "duplicate element `{e}`"),
            LatticeViolation::UnknownElement(e) => write!(f, "order mentions unknown element `{e}`"),
            LatticeViolation::NotAntisymmetric(a, b) => {
                write!(f, "antisymmetry fails: `{a}` <= `{b}` and `{b}` <= `{a}`")
            }
            LatticeViolation::MissingSupremum(s) => write!(f, "no supremum for {{{}}}", s.join(", ")),
            LatticeViolation::MissingInfimum(s) => write!(f, "no infimum for {{{}}}", s.join(", ")),
            LatticeViolation::TopNotGreatest(t) => write!(f, "designated top `{t}` is not greatest"),
            LatticeViolation::BottomNotLeast(b) => write!(f, "designated bottom `{b}` is not least"),
            LatticeViolation::Empty => write!(f, "a complete lattice has at least one element"),
        }
    }
}

/// Every axiom violation found by [`validate_lattice`].
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct LatticeReport {
    pub violations: Vec<LatticeViolation>,
}

impl LatticeReport {
    pub fn is_ok(&self) -> bool {
        self.violations.is_empty()
    }
}

impl fmt::Display for LatticeReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.violations.is_empty() {
            return write!(f, "ok");
        }
        let parts: Vec<String> = self.violations.iter().map(|v| v.to_string()).collect();
        write!(f, "{}", parts.join("; "))
    }
}

/// Order closure over indexed elements, shared by validation and construction.
struct Poset {
    n: usize,
    leq: Vec<bool>,
}

impl Poset {
    fn le(&self, a: usize, b: usize) -> bool {
        self.leq[a * self.n + b]
    }

    fn upper_bounds<'a>(&'a self, set: &'a [usize]) -> impl Iterator<Item = usize> + 'a {
        (0..self.n).filter(move |&u| set.iter().all(|&s| self.le(s, u)))
    }

    fn lower_bounds<'a>(&'a self, set: &'a [usize]) -> impl Iterator<Item = usize> + 'a {
        (0..self.n).filter(move |&u| set.iter().all(|&s| self.le(u, s)))
    }

    /// Least element of `candidates`, if any.
    fn least(&self, candidates: &[usize]) -> Option<usize> {
        candidates
            .iter()
            .copied()
            .find(|&c| candidates.iter().all(|&d| self.le(c, d)))
    }

    fn greatest(&self, candidates: &[usize]) -> Option<usize> {
        candidates
            .iter()
            .copied()
            .find(|&c| candidates.iter().all(|&d| self.le(d, c)))
    }

    fn sup(&self, set: &[usize]) -> Option<usize> {
        let ub: Vec<usize> = self.upper_bounds(set).collect();
        self.least(&ub)
    }

    fn inf(&self, set: &[usize]) -> Option<usize> {
        let lb: Vec<usize> = self.lower_bounds(set).collect();
        self.greatest(&lb)
    }
}

fn closure(spec: &LatticeSpec, violations: &mut Vec<LatticeViolation>) -> (Poset, HashMap<String, usize>) {
    let mut index = HashMap::new();
    for (i, e) in spec.elements.iter().enumerate() {
        if index.insert(e.clone(), i).is_some() {
            violations.push(LatticeViolation::DuplicateElement(e.clone()));
        }
    }
    let n = spec.elements.len();
    let mut leq = vec![false; n * n];
    for i in 0..n {
        leq[i * n + i] = true;
    }
    for [a, b] in &spec.order {
        match (index.get(a), index.get(b)) {
            (Some(&i), Some(&j)) => leq[i * n + j] = true,
            (None, _) => violations.push(LatticeViolation::UnknownElement(a.clone())),
            (_, None) => violations.push(LatticeViolation::UnknownElement(b.clone())),
        }
    }
    // Warshall
    for k in 0..n {
        for i in 0..n {
            if leq[i * n + k] {
                for j in 0..n {
                    if leq[k * n + j] {
                        leq[i * n + j] = true;
                    }
                }
            }
        }
    }
    (Poset { n, leq }, index)
}

fn names(spec: &LatticeSpec, set: &[usize]) -> Vec<String> {
    set.iter().map(|&i| spec.elements[i].clone()).collect()
}

/// Brute-force check of the complete-lattice axioms.
///
/// Reflexivity and transitivity hold by construction (closure is applied),
/// so the report covers antisymmetry, the designated bounds, and existence of
/// suprema and infima: over every subset when the lattice has at most
/// [`FULL_POWERSET_LIMIT`] elements, otherwise over all pairs plus the empty
/// and full sets (pairwise bounds imply all finite bounds).
pub fn validate_lattice(spec: &LatticeSpec) -> LatticeReport {
    let mut violations = Vec::new();
    if spec.elements.is_empty() {
        violations.push(LatticeViolation::Empty);
        return LatticeReport { violations };
    }
    let (poset, index) = closure(spec, &mut violations);
    let n = poset.n;
    for a in 0..n {
        for b in (a + 1)..n {
            if poset.le(a, b) && poset.le(b, a) {
                violations.push(LatticeViolation::NotAntisymmetric(
                    spec.elements[a].clone(),
                    spec.elements[b].clone(),
                ));
            }
        }
    }

    let check = |set: &[usize], violations: &mut Vec<LatticeViolation>| {
        if poset.sup(set).is_none() {
            violations.push(LatticeViolation::MissingSupremum(names(spec, set)));
        }
        if poset.inf(set).is_none() {
            violations.push(LatticeViolation::MissingInfimum(names(spec, set)));
        }
    };
    if n <= FULL_POWERSET_LIMIT {
        for mask in 0u32..(1u32 << n) {
            let set: Vec<usize> = (0..n).filter(|i| mask & (1 << i) != 0).collect();
            check(&set, &mut violations);
        }
    } else {
        check(&[], &mut violations);
        check(&(0..n).collect::<Vec<_>>(), &mut violations);
        for a in 0..n {
            for b in (a + 1)..n {
                check(&[a, b], &mut violations);
            }
        }
    }

    if let Some(t) = &spec.top {
        match index.get(t) {
            Some(&ti) if (0..n).all(|x| poset.le(x, ti)) => {}
            Some(_) => violations.push(LatticeViolation::TopNotGreatest(t.clone())),
            None => violations.push(LatticeViolation::UnknownElement(t.clone())),
        }
    }
    if let Some(b) = &spec.bottom {
        match index.get(b) {
            Some(&bi) if (0..n).all(|x| poset.le(bi, x)) => {}
            Some(_) => violations.push(LatticeViolation::BottomNotLeast(b.clone())),
            None => violations.push(LatticeViolation::UnknownElement(b.clone())),
        }
    }
    LatticeReport { violations }
}

/// A validated finite complete lattice.
#[derive(Clone)]
pub struct Lattice {
    name: String,
    elements: Vec<String>,
    index: HashMap<String, usize>,
    leq: Vec<bool>,
    join2: Vec<u32>,
    meet2: Vec<u32>,
    top: Label,
    bottom: Label,
}

impl PartialEq for Lattice {
    fn eq(&self, other: &Self) -> bool {
        self.name == other.name && self.elements == other.elements && self.leq == other.leq
    }
}

impl Eq for Lattice {}

impl fmt::Debug for Lattice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Lattice")
            .field("name", &self.name)
            .field("elements", &self.elements)
            .finish()
    }
}

impl Lattice {
    pub fn new(name: impl Into<String>, spec: &LatticeSpec) -> Result<Self, LatticeError> {
        let report = validate_lattice(spec);
        if !report.is_ok() {
            return Err(LatticeError::Invalid(report));
        }
        let mut scratch = Vec::new();
        let (poset, index) = closure(spec, &mut scratch);
        let n = poset.n;
        let mut join2 = vec![0u32; n * n];
        let mut meet2 = vec![0u32; n * n];
        for a in 0..n {
            for b in 0..n {
                // Validation guarantees both bounds exist.
                join2[a * n + b] = poset.sup(&[a, b]).expect("validated") as u32;
                meet2[a * n + b] = poset.inf(&[a, b]).expect("validated") as u32;
            }
        }
        let all: Vec<usize> = (0..n).collect();
        let top = poset.sup(&all).expect("validated");
        let bottom = poset.inf(&all).expect("validated");
        Ok(Lattice {
            name: name.into(),
            elements: spec.elements.clone(),
            index,
            leq: poset.leq,
            join2,
            meet2,
            top: Label(top as u32),
            bottom: Label(bottom as u32),
        })
    }

    /// The one-point lattice: unlabeled graphs are graphs over this lattice.
    pub fn unit() -> Self {
        let spec = LatticeSpec {
            elements: vec![UNIT_ELEMENT.to_string()],
            order: vec![],
            top: None,
            bottom: None,
        };
        Lattice::new(UNIT_LATTICE, &spec).expect("one-point lattice")
    }

    /// The binary decision diagram lattice over `vars`.
    ///
    /// Each variable sits below the class element `Var`, the truth values
    /// `0` and `1` below `Bool`, both classes below `top`, and `bot` below
    /// everything. The two families are otherwise incomparable.
    pub fn bdd<S: AsRef<str>>(vars: &[S]) -> Result<Self, LatticeError> {
        let reserved = [BDD_VAR_CLASS, BDD_BOOL_CLASS, BDD_TOP, BDD_BOTTOM, BDD_ZERO, BDD_ONE];
        let mut seen = BTreeSet::new();
        for v in vars {
            let v = v.as_ref();
            if reserved.contains(&v) || v.is_empty() || v.contains(',') {
                return Err(LatticeError::ReservedName(v.to_string()));
            }
            if !seen.insert(v) {
                return Err(LatticeError::DuplicateVariable(v.to_string()));
            }
        }
        let mut elements: Vec<String> = vars.iter().map(|v| v.as_ref().to_string()).collect();
        let mut order = Vec::new();
        for v in vars {
            order.push([BDD_BOTTOM.to_string(), v.as_ref().to_string()]);
            order.push([v.as_ref().to_string(), BDD_VAR_CLASS.to_string()]);
        }
        for b in [BDD_ZERO, BDD_ONE] {
            order.push([BDD_BOTTOM.to_string(), b.to_string()]);
            order.push([b.to_string(), BDD_BOOL_CLASS.to_string()]);
        }
        order.push([BDD_BOTTOM.to_string(), BDD_VAR_CLASS.to_string()]);
        order.push([BDD_VAR_CLASS.to_string(), BDD_TOP.to_string()]);
        order.push([BDD_BOOL_CLASS.to_string(), BDD_TOP.to_string()]);
        elements.extend(
            [BDD_ZERO, BDD_ONE, BDD_VAR_CLASS, BDD_BOOL_CLASS, BDD_TOP, BDD_BOTTOM]
                .iter()
                .map(|s| s.to_string()),
        );
        let spec = LatticeSpec {
            elements,
            order,
            top: Some(BDD_TOP.to_string()),
            bottom: Some(BDD_BOTTOM.to_string()),
        };
        let names: Vec<&str> = vars.iter().map(|v| v.as_ref()).collect();
        Lattice::new(bdd_lattice_name(&names), &spec)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn top(&self) -> Label {
        self.top
    }

    pub fn bottom(&self) -> Label {
        self.bottom
    }

    pub fn labels(&self) -> impl Iterator<Item = Label> + '_ {
        (0..self.elements.len()).map(|i| Label(i as u32))
    }

    pub fn label(&self, name: &str) -> Result<Label, LatticeError> {
        self.index
            .get(name)
            .map(|&i| Label(i as u32))
            .ok_or_else(|| LatticeError::UnknownLabel(name.to_string()))
    }

    pub fn contains(&self, l: Label) -> bool {
        l.index() < self.elements.len()
    }

    fn check(&self, l: Label) -> Result<(), LatticeError> {
        if self.contains(l) {
            Ok(())
        } else {
            Err(LatticeError::ForeignLabel(l.index(), self.name.clone()))
        }
    }

    /// Name of `l`. Panics on a label of another lattice.
    pub fn name_of(&self, l: Label) -> &str {
        &self.elements[l.index()]
    }

    pub fn leq(&self, a: Label, b: Label) -> Result<bool, LatticeError> {
        self.check(a)?;
        self.check(b)?;
        Ok(self.le(a, b))
    }

    /// Least upper bound of `set` (bottom for the empty set).
    pub fn join<I: IntoIterator<Item = Label>>(&self, set: I) -> Result<Label, LatticeError> {
        let mut acc = self.bottom;
        for l in set {
            self.check(l)?;
            acc = self.join_pair(acc, l);
        }
        Ok(acc)
    }

    /// Greatest lower bound of `set` (top for the empty set).
    pub fn meet<I: IntoIterator<Item = Label>>(&self, set: I) -> Result<Label, LatticeError> {
        let mut acc = self.top;
        for l in set {
            self.check(l)?;
            acc = self.meet_pair(acc, l);
        }
        Ok(acc)
    }

    pub(crate) fn le(&self, a: Label, b: Label) -> bool {
        self.leq[a.index() * self.elements.len() + b.index()]
    }

    pub(crate) fn join_pair(&self, a: Label, b: Label) -> Label {
        Label(self.join2[a.index() * self.elements.len() + b.index()])
    }

    pub(crate) fn meet_pair(&self, a: Label, b: Label) -> Label {
        Label(self.meet2[a.index() * self.elements.len() + b.index()])
    }

    /// The interchange record: elements plus the covering pairs of the order.
    pub fn to_spec(&self) -> LatticeSpec {
        let n = self.elements.len();
        let mut order = Vec::new();
        for a in 0..n {
            for b in 0..n {
                if a == b || !self.leq[a * n + b] {
                    continue;
                }
                let covered = (0..n).any(|c| {
                    c != a && c != b && self.leq[a * n + c] && self.leq[c * n + b]
                });
                if !covered {
                    order.push([self.elements[a].clone(), self.elements[b].clone()]);
                }
            }
        }
        LatticeSpec {
            elements: self.elements.clone(),
            order,
            top: Some(self.name_of(self.top).to_string()),
            bottom: Some(self.name_of(self.bottom).to_string()),
        }
    }
}

/// Canonical name of the BDD lattice over `vars`, e.g. `bdd:p,q`.
pub fn bdd_lattice_name(vars: &[&str]) -> String {
    format!("bdd:{}", vars.join(","))
}

/// Resolves the built-in lattice names `unit` and `bdd:<v1>,<v2>,...`.
pub fn builtin_lattice(name: &str) -> Option<Result<Lattice, LatticeError>> {
    if name == UNIT_LATTICE {
        return Some(Ok(Lattice::unit()));
    }
    let vars = name.strip_prefix("bdd:")?;
    let vars: Vec<&str> = if vars.trim().is_empty() {
        Vec::new()
    } else {
        vars.split(',').map(str::trim).collect()
    };
    Some(Lattice::bdd(&vars))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pq() -> Lattice {
        Lattice::bdd(&["p", "q"]).unwrap()
    }

    #[test]
    fn bdd_lattice_has_eight_elements_for_two_vars() {
        assert_eq!(pq().len(), 8);
        assert_eq!(Lattice::bdd(&["x1", "x2", "x3"]).unwrap().len(), 9);
    }

    #[test]
    fn bdd_order() {
        let lat = pq();
        let l = |s| lat.label(s).unwrap();
        assert!(lat.leq(l("p"), l("Var")).unwrap());
        assert!(lat.leq(l("bot"), l("top")).unwrap());
        assert!(!lat.leq(l("p"), l("Bool")).unwrap());
        assert!(!lat.leq(l("p"), l("q")).unwrap());
        assert!(lat.leq(l("0"), l("Bool")).unwrap());
        assert_eq!(lat.top(), l("top"));
        assert_eq!(lat.bottom(), l("bot"));
    }

    #[test]
    fn bdd_joins_and_meets() {
        let lat = Lattice::bdd(&["x1", "x2"]).unwrap();
        let l = |s| lat.label(s).unwrap();
        assert_eq!(lat.join([l("bot"), l("x1")]).unwrap(), l("x1"));
        assert_eq!(lat.meet([l("x2"), l("bot")]).unwrap(), l("bot"));
        for y in lat.labels() {
            assert_eq!(lat.meet([y, l("top")]).unwrap(), y);
        }
        assert_eq!(lat.join([l("x1"), l("x2")]).unwrap(), l("Var"));
        assert_eq!(lat.meet([l("x1"), l("x2")]).unwrap(), l("bot"));
        assert_eq!(lat.join([l("x1"), l("0")]).unwrap(), l("top"));
        assert_eq!(lat.join([]).unwrap(), l("bot"));
        assert_eq!(lat.meet([]).unwrap(), l("top"));
    }

    #[test]
    fn unknown_labels_are_rejected() {
        let lat = pq();
        assert!(matches!(lat.label("r"), Err(LatticeError::UnknownLabel(_))));
        let foreign = Label(40);
        assert!(matches!(lat.leq(foreign, lat.top()), Err(LatticeError::ForeignLabel(..))));
        assert!(lat.join([foreign]).is_err());
    }

    #[test]
    fn duplicate_and_reserved_variables() {
        assert_eq!(
            Lattice::bdd(&["p", "p"]).unwrap_err(),
            LatticeError::DuplicateVariable("p".into())
        );
        assert!(matches!(Lattice::bdd(&["Bool"]), Err(LatticeError::ReservedName(_))));
        let constant = Lattice::bdd::<&str>(&[]).unwrap();
        assert_eq!(constant.len(), 6);
        assert_eq!(builtin_lattice(constant.name()).unwrap().unwrap(), constant);
    }

    #[test]
    fn validate_reports_missing_supremum() {
        let spec = LatticeSpec {
            elements: vec!["a".into(), "b".into()],
            order: vec![],
            top: None,
            bottom: None,
        };
        let report = validate_lattice(&spec);
        assert!(report
            .violations
            .contains(&LatticeViolation::MissingSupremum(vec!["a".into(), "b".into()])));
        assert!(Lattice::new("bad", &spec).is_err());
    }

    #[test]
    fn validate_single_element_and_bdd() {
        let one = LatticeSpec {
            elements: vec!["a".into()],
            order: vec![],
            top: Some("a".into()),
            bottom: Some("a".into()),
        };
        assert!(validate_lattice(&one).is_ok());
        assert!(validate_lattice(&pq().to_spec()).is_ok());
    }

    #[test]
    fn validate_catches_cycles_and_bad_designations() {
        let spec = LatticeSpec {
            elements: vec!["a".into(), "b".into()],
            order: vec![["a".into(), "b".into()], ["b".into(), "a".into()]],
            top: None,
            bottom: None,
        };
        let r = validate_lattice(&spec);
        assert!(r.violations.contains(&LatticeViolation::NotAntisymmetric("a".into(), "b".into())));

        let spec = LatticeSpec {
            elements: vec!["a".into(), "b".into()],
            order: vec![["a".into(), "b".into()]],
            top: Some("a".into()),
            bottom: Some("c".into()),
        };
        let r = validate_lattice(&spec);
        assert!(r.violations.contains(&LatticeViolation::TopNotGreatest("a".into())));
        assert!(r.violations.contains(&LatticeViolation::UnknownElement("c".into())));
    }

    #[test]
    fn spec_round_trip_preserves_order() {
        let lat = Lattice::bdd(&["a", "b", "c"]).unwrap();
        let again = Lattice::new(lat.name(), &lat.to_spec()).unwrap();
        assert_eq!(lat, again);
    }

    #[test]
    fn builtin_names() {
        assert_eq!(builtin_lattice("unit").unwrap().unwrap().len(), 1);
        assert_eq!(builtin_lattice("bdd:p,q").unwrap().unwrap(), pq());
        assert!(builtin_lattice("diamond").is_none());
    }

    #[test]
    fn lattice_laws_exhaustive_on_bdd_lattices() {
        for n in 1..=4 {
            let vars: Vec<String> = (1..=n).map(|i| format!("x{i}")).collect();
            let lat = Lattice::bdd(&vars).unwrap();
            let all: Vec<Label> = lat.labels().collect();
            for &a in &all {
                assert_eq!(lat.join([a, a]).unwrap(), a);
                assert_eq!(lat.meet([a, a]).unwrap(), a);
                for &b in &all {
                    let j = lat.join([a, b]).unwrap();
                    let m = lat.meet([a, b]).unwrap();
                    assert!(lat.le(a, j) && lat.le(m, a));
                    assert_eq!(j, lat.join([b, a]).unwrap());
                    assert_eq!(m, lat.meet([b, a]).unwrap());
                    assert_eq!(lat.join([a, m]).unwrap(), a);
                    assert_eq!(lat.meet([a, j]).unwrap(), a);
                    // least upper and greatest lower bound by scanning
                    for &u in &all {
                        if lat.le(a, u) && lat.le(b, u) {
                            assert!(lat.le(j, u));
                        }
                        if lat.le(u, a) && lat.le(u, b) {
                            assert!(lat.le(u, m));
                        }
                    }
                    for &c in &all {
                        let left = lat.join([lat.join([a, b]).unwrap(), c]).unwrap();
                        let right = lat.join([a, lat.join([b, c]).unwrap()]).unwrap();
                        assert_eq!(left, right);
                        assert_eq!(left, lat.join([a, b, c]).unwrap());
                        let left = lat.meet([lat.meet([a, b]).unwrap(), c]).unwrap();
                        let right = lat.meet([a, lat.meet([b, c]).unwrap()]).unwrap();
                        assert_eq!(left, right);
                    }
                }
            }
        }
    }
}
