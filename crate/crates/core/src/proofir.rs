//! Proof certificates for the ordinary system and the cyclic system, their
//! JSON form, and check reports.
//!
//! ```json
//! { "system": "prhl" | "cprhl",
//!   "root": "n0",
//!   "nodes": { "n0": { "rule": "Cons",
//!                      "triple": { "pre": "...", "prog": "...", "post": "..." },
//!                      "children": ["n1"],
//!                      "fresh": "x_p1" } },
//!   "backlinks": { "n7": "n2" } }
//! ```

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use serde::de::{self, Deserializer, MapAccess, Visitor};
use serde::ser::{SerializeMap, Serializer};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::lang::{parse_assertion, parse_program, print_assertion, print_program, LangError, Triple, Var};
use crate::sem::{Bounds, UnknownReason, Verdict};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum PrhlRule {
    Axiom,
    Assign,
    Seq,
    Cons,
    Or,
    While,
}

impl PrhlRule {
    pub fn arity(self) -> usize {
        match self {
            PrhlRule::Axiom | PrhlRule::Assign => 0,
            PrhlRule::Cons | PrhlRule::While => 1,
            PrhlRule::Seq | PrhlRule::Or => 2,
        }
    }

    fn parse(s: &str) -> Option<Self> {
        Some(match s {
            "Axiom" => PrhlRule::Axiom,
            "Assign" => PrhlRule::Assign,
            "Seq" => PrhlRule::Seq,
            "Cons" => PrhlRule::Cons,
            "Or" => PrhlRule::Or,
            "While" => PrhlRule::While,
            _ => return None,
        })
    }
}

impl fmt::Display for PrhlRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum CyclicRule {
    Axiom,
    Cons,
    AssignSubst,
    AssignFresh,
    Or,
    While,
    OpenLeaf,
}

impl CyclicRule {
    pub fn arity(self) -> usize {
        match self {
            CyclicRule::Axiom | CyclicRule::OpenLeaf => 0,
            CyclicRule::Cons | CyclicRule::AssignSubst | CyclicRule::AssignFresh => 1,
            CyclicRule::Or | CyclicRule::While => 2,
        }
    }

    fn parse(s: &str) -> Option<Self> {
        Some(match s {
            "Axiom" => CyclicRule::Axiom,
            "Cons" => CyclicRule::Cons,
            "AssignSubst" => CyclicRule::AssignSubst,
            "AssignFresh" => CyclicRule::AssignFresh,
            "Or" => CyclicRule::Or,
            "While" => CyclicRule::While,
            "OpenLeaf" => CyclicRule::OpenLeaf,
            _ => return None,
        })
    }
}

impl fmt::Display for CyclicRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

/// A node of an ordinary derivation tree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrhlNode {
    pub id: String,
    pub triple: Triple,
    pub rule: PrhlRule,
    pub children: Vec<PrhlNode>,
}

impl PrhlNode {
    pub fn new(rule: PrhlRule, triple: Triple, children: Vec<PrhlNode>) -> Self {
        PrhlNode { id: String::new(), triple, rule, children }
    }

    /// Assigns ids `n0, n1, ...` in preorder.
    pub fn renumber(&mut self) {
        fn go(n: &mut PrhlNode, next: &mut usize) {
            n.id = format!("n{next}");
            *next += 1;
            for c in &mut n.children {
                go(c, next);
            }
        }
        go(self, &mut 0);
    }

    /// Nodes in preorder.
    pub fn preorder(&self) -> Vec<&PrhlNode> {
        let mut out = vec![self];
        let mut i = 0;
        while i < out.len() {
            let n = out[i];
            // children go right after their parent, in order
            let mut kids: Vec<&PrhlNode> = n.children.iter().collect();
            let tail = out.split_off(i + 1);
            out.append(&mut kids);
            out.extend(tail);
            i += 1;
        }
        out
    }

    pub fn size(&self) -> usize {
        1 + self.children.iter().map(PrhlNode::size).sum::<usize>()
    }

    pub fn has_rule(&self, rule: PrhlRule) -> bool {
        self.rule == rule || self.children.iter().any(|c| c.has_rule(rule))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CyclicNode {
    pub id: String,
    pub triple: Triple,
    pub rule: CyclicRule,
    pub children: Vec<String>,
    /// The fresh variable of an `AssignFresh` step.
    pub fresh: Option<Var>,
}

/// A finite derivation tree plus back-links from open leaves to companions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CyclicPreProof {
    nodes: Vec<CyclicNode>,
    index: HashMap<String, usize>,
    pub root: String,
    pub backlinks: BTreeMap<String, String>,
}

impl CyclicPreProof {
    /// Builds and validates a pre-proof. Nodes keep the given order.
    pub fn new(
        nodes: Vec<CyclicNode>,
        root: impl Into<String>,
        backlinks: BTreeMap<String, String>,
    ) -> Result<Self, ProofError> {
        let mut index = HashMap::new();
        for (i, n) in nodes.iter().enumerate() {
            if index.insert(n.id.clone(), i).is_some() {
                return Err(ProofError::DuplicateId(n.id.clone()));
            }
        }
        let p = CyclicPreProof { nodes, index, root: root.into(), backlinks };
        p.validate()?;
        Ok(p)
    }

    fn validate(&self) -> Result<(), ProofError> {
        if !self.index.contains_key(&self.root) {
            return Err(ProofError::Dangling { id: self.root.clone(), context: "root".into() });
        }
        let mut parent: HashMap<&str, &str> = HashMap::new();
        for n in &self.nodes {
            for c in &n.children {
                if !self.index.contains_key(c) {
                    return Err(ProofError::Dangling { id: c.clone(), context: format!("child of {}", n.id) });
                }
                if c == &self.root {
                    return Err(ProofError::NotATree(format!("root {} appears as a child of {}", c, n.id)));
                }
                if let Some(p) = parent.insert(c, &n.id) {
                    return Err(ProofError::NotATree(format!("{c} has two parents, {p} and {}", n.id)));
                }
            }
        }
        // every node reachable from the root; with unique parents this rules out cycles
        let mut seen = vec![false; self.nodes.len()];
        let mut stack = vec![self.index[&self.root]];
        while let Some(i) = stack.pop() {
            if std::mem::replace(&mut seen[i], true) {
                continue;
            }
            stack.extend(self.nodes[i].children.iter().map(|c| self.index[c]));
        }
        if let Some(i) = seen.iter().position(|s| !s) {
            return Err(ProofError::NotATree(format!("{} is not reachable from the root", self.nodes[i].id)));
        }
        for (leaf, comp) in &self.backlinks {
            let l = self.get(leaf).ok_or_else(|| ProofError::Dangling { id: leaf.clone(), context: "back-link source".into() })?;
            let c = self.get(comp).ok_or_else(|| ProofError::Dangling { id: comp.clone(), context: format!("companion of {leaf}") })?;
            if l.rule != CyclicRule::OpenLeaf || !l.children.is_empty() {
                return Err(ProofError::BacklinkSource(leaf.clone()));
            }
            if c.children.is_empty() {
                return Err(ProofError::CompanionNotInner { leaf: leaf.clone(), companion: comp.clone() });
            }
        }
        Ok(())
    }

    pub fn nodes(&self) -> &[CyclicNode] {
        &self.nodes
    }

    pub fn get(&self, id: &str) -> Option<&CyclicNode> {
        self.index.get(id).map(|&i| &self.nodes[i])
    }

    pub fn node(&self, id: &str) -> &CyclicNode {
        self.get(id).unwrap_or_else(|| panic!("unknown node id {id}"))
    }

    pub fn root_node(&self) -> &CyclicNode {
        self.node(&self.root)
    }

    /// Position of a node in document order.
    pub fn position(&self, id: &str) -> Option<usize> {
        self.index.get(id).copied()
    }

    /// Open leaves without a back-link.
    pub fn proper_open_leaves(&self) -> Vec<String> {
        self.nodes
            .iter()
            .filter(|n| n.rule == CyclicRule::OpenLeaf && !self.backlinks.contains_key(&n.id))
            .map(|n| n.id.clone())
            .collect()
    }
}

/// The finite graph whose paths are the paths of the pre-proof: parent→child
/// edges plus leaf→companion edges.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProofGraph {
    pub nodes: Vec<String>,
    pub edges: Vec<(String, String)>,
}

impl ProofGraph {
    pub fn successors<'a>(&'a self, id: &'a str) -> impl Iterator<Item = &'a String> + 'a {
        self.edges.iter().filter(move |(a, _)| a == id).map(|(_, b)| b)
    }

    /// Whether some cycle exists.
    pub fn has_cycle(&self) -> bool {
        let idx: HashMap<&str, usize> = self.nodes.iter().enumerate().map(|(i, n)| (n.as_str(), i)).collect();
        let mut adj = vec![Vec::new(); self.nodes.len()];
        for (a, b) in &self.edges {
            adj[idx[a.as_str()]].push(idx[b.as_str()]);
        }
        crate::checker::find_cycle_scc(&adj, &vec![true; self.nodes.len()]).is_some()
    }
}

pub fn proof_graph(c: &CyclicPreProof) -> ProofGraph {
    let nodes = c.nodes.iter().map(|n| n.id.clone()).collect();
    let mut edges: Vec<(String, String)> =
        c.nodes.iter().flat_map(|n| n.children.iter().map(move |ch| (n.id.clone(), ch.clone()))).collect();
    edges.extend(c.backlinks.iter().map(|(l, comp)| (l.clone(), comp.clone())));
    ProofGraph { nodes, edges }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ProofError {
    #[error("malformed certificate: {0}")]
    Malformed(String),
    #[error("dangling id `{id}` ({context})")]
    Dangling { id: String, context: String },
    #[error("duplicate node id `{0}`")]
    DuplicateId(String),
    #[error("companion must be inner node: back-link {leaf} -> {companion}")]
    CompanionNotInner { leaf: String, companion: String },
    #[error("back-link source `{0}` must be an OpenLeaf")]
    BacklinkSource(String),
    #[error("node table must form a tree: {0}")]
    NotATree(String),
    #[error("node `{node}`, field `{field}`: {error}")]
    Syntax { node: String, field: &'static str, error: LangError },
    #[error("unknown rule `{rule}` at node `{node}`")]
    UnknownRule { node: String, rule: String },
    #[error("expected a {expected} certificate, found `{found}`")]
    WrongSystem { expected: &'static str, found: String },
}

// ---- JSON ----

#[derive(Debug, Clone, Serialize, Deserialize)]
struct RawTriple {
    pre: String,
    prog: String,
    post: String,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawNode {
    rule: String,
    triple: RawTriple,
    #[serde(default)]
    children: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    fresh: Option<String>,
}

/// A JSON object kept in document order, rejecting repeated keys.
#[derive(Debug, Clone)]
struct Ordered<T>(Vec<(String, T)>);

impl<'de, T: Deserialize<'de>> Deserialize<'de> for Ordered<T> {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        struct V<T>(std::marker::PhantomData<T>);
        impl<'de, T: Deserialize<'de>> Visitor<'de> for V<T> {
            type Value = Ordered<T>;
            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                f.write_str("an object")
            }
            fn visit_map<A: MapAccess<'de>>(self, mut map: A) -> Result<Self::Value, A::Error> {
                let mut out: Vec<(String, T)> = Vec::new();
                while let Some((k, v)) = map.next_entry::<String, T>()? {
                    if out.iter().any(|(seen, _)| *seen == k) {
                        return Err(de::Error::custom(format!("duplicate node id `{k}`")));
                    }
                    out.push((k, v));
                }
                Ok(Ordered(out))
            }
        }
        d.deserialize_map(V(std::marker::PhantomData))
    }
}

impl<T: Serialize> Serialize for Ordered<T> {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut m = s.serialize_map(Some(self.0.len()))?;
        for (k, v) in &self.0 {
            m.serialize_entry(k, v)?;
        }
        m.end()
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawDoc {
    system: String,
    root: String,
    nodes: Ordered<RawNode>,
    #[serde(default)]
    backlinks: Ordered<String>,
}

impl Default for Ordered<String> {
    fn default() -> Self {
        Ordered(Vec::new())
    }
}

fn raw_triple(t: &Triple) -> RawTriple {
    RawTriple { pre: print_assertion(&t.pre), prog: print_program(&t.prog), post: print_assertion(&t.post) }
}

fn parse_raw_triple(id: &str, t: &RawTriple) -> Result<Triple, ProofError> {
    let err = |field| move |error| ProofError::Syntax { node: id.to_string(), field, error };
    Ok(Triple::new(
        parse_assertion(&t.pre).map_err(err("pre"))?,
        parse_program(&t.prog).map_err(err("prog"))?,
        parse_assertion(&t.post).map_err(err("post"))?,
    ))
}

fn parse_doc(text: &str) -> Result<RawDoc, ProofError> {
    serde_json::from_str(text).map_err(|e| {
        let msg = e.to_string();
        match msg.strip_prefix("duplicate node id `") {
            Some(rest) => ProofError::DuplicateId(rest.split('`').next().unwrap_or_default().to_string()),
            None => ProofError::Malformed(msg),
        }
    })
}

fn render(doc: &RawDoc) -> String {
    let mut s = serde_json::to_string_pretty(doc).expect("certificate serializes");
    s.push('\n');
    s
}

/// Either kind of certificate.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Certificate {
    Prhl(PrhlNode),
    Cprhl(CyclicPreProof),
}

impl Certificate {
    pub fn system(&self) -> &'static str {
        match self {
            Certificate::Prhl(_) => "prhl",
            Certificate::Cprhl(_) => "cprhl",
        }
    }

    pub fn root_triple(&self) -> &Triple {
        match self {
            Certificate::Prhl(p) => &p.triple,
            Certificate::Cprhl(c) => &c.root_node().triple,
        }
    }

    pub fn to_json(&self) -> String {
        match self {
            Certificate::Prhl(p) => serialize_prhl(p),
            Certificate::Cprhl(c) => serialize_cprhl(c),
        }
    }
}

/// Parses a certificate of either system, detected from `"system"`.
pub fn parse_certificate(text: &str) -> Result<Certificate, ProofError> {
    let doc = parse_doc(text)?;
    match doc.system.as_str() {
        "prhl" => prhl_from_doc(doc).map(Certificate::Prhl),
        "cprhl" => cprhl_from_doc(doc).map(Certificate::Cprhl),
        other => Err(ProofError::Malformed(format!("unknown system `{other}`"))),
    }
}

pub fn serialize_prhl(p: &PrhlNode) -> String {
    let mut nodes = Vec::new();
    for n in p.preorder() {
        let raw = RawNode {
            rule: n.rule.to_string(),
            triple: raw_triple(&n.triple),
            children: n.children.iter().map(|c| c.id.clone()).collect(),
            fresh: None,
        };
        nodes.push((n.id.clone(), raw));
    }
    render(&RawDoc { system: "prhl".into(), root: p.id.clone(), nodes: Ordered(nodes), backlinks: Ordered(Vec::new()) })
}

pub fn parse_prhl(text: &str) -> Result<PrhlNode, ProofError> {
    match parse_certificate(text)? {
        Certificate::Prhl(p) => Ok(p),
        Certificate::Cprhl(_) => Err(ProofError::WrongSystem { expected: "prhl", found: "cprhl".into() }),
    }
}

fn prhl_from_doc(doc: RawDoc) -> Result<PrhlNode, ProofError> {
    if let Some((leaf, _)) = doc.backlinks.0.first() {
        return Err(ProofError::Malformed(format!("ordinary proofs have no back-links (found one from {leaf})")));
    }
    // reuse the tree validation of the cyclic form
    let mut flat = Vec::new();
    for (id, raw) in &doc.nodes.0 {
        let rule = PrhlRule::parse(&raw.rule).ok_or_else(|| ProofError::UnknownRule { node: id.clone(), rule: raw.rule.clone() })?;
        if raw.fresh.is_some() {
            return Err(ProofError::Malformed(format!("node {id}: `fresh` only applies to AssignFresh")));
        }
        flat.push((id.clone(), rule, parse_raw_triple(id, &raw.triple)?, raw.children.clone()));
    }
    let shape: Vec<CyclicNode> = flat
        .iter()
        .map(|(id, _, t, ch)| CyclicNode { id: id.clone(), triple: t.clone(), rule: CyclicRule::Cons, children: ch.clone(), fresh: None })
        .collect();
    CyclicPreProof::new(shape, doc.root.clone(), BTreeMap::new())?;
    let by_id: HashMap<&str, usize> = flat.iter().enumerate().map(|(i, f)| (f.0.as_str(), i)).collect();
    fn build(i: usize, flat: &[(String, PrhlRule, Triple, Vec<String>)], by_id: &HashMap<&str, usize>) -> PrhlNode {
        let (id, rule, triple, children) = &flat[i];
        PrhlNode {
            id: id.clone(),
            triple: triple.clone(),
            rule: *rule,
            children: children.iter().map(|c| build(by_id[c.as_str()], flat, by_id)).collect(),
        }
    }
    Ok(build(by_id[doc.root.as_str()], &flat, &by_id))
}

pub fn serialize_cprhl(c: &CyclicPreProof) -> String {
    let nodes = c
        .nodes
        .iter()
        .map(|n| {
            (
                n.id.clone(),
                RawNode { rule: n.rule.to_string(), triple: raw_triple(&n.triple), children: n.children.clone(), fresh: n.fresh.clone() },
            )
        })
        .collect();
    let backlinks = c.backlinks.iter().map(|(a, b)| (a.clone(), b.clone())).collect();
    render(&RawDoc { system: "cprhl".into(), root: c.root.clone(), nodes: Ordered(nodes), backlinks: Ordered(backlinks) })
}

pub fn parse_cprhl(text: &str) -> Result<CyclicPreProof, ProofError> {
    match parse_certificate(text)? {
        Certificate::Cprhl(c) => Ok(c),
        Certificate::Prhl(_) => Err(ProofError::WrongSystem { expected: "cprhl", found: "prhl".into() }),
    }
}

fn cprhl_from_doc(doc: RawDoc) -> Result<CyclicPreProof, ProofError> {
    let mut nodes = Vec::new();
    for (id, raw) in &doc.nodes.0 {
        let rule = CyclicRule::parse(&raw.rule).ok_or_else(|| ProofError::UnknownRule { node: id.clone(), rule: raw.rule.clone() })?;
        nodes.push(CyclicNode {
            id: id.clone(),
            triple: parse_raw_triple(id, &raw.triple)?,
            rule,
            children: raw.children.clone(),
            fresh: raw.fresh.clone(),
        });
    }
    let mut backlinks = BTreeMap::new();
    for (leaf, comp) in doc.backlinks.0 {
        if backlinks.insert(leaf.clone(), comp).is_some() {
            return Err(ProofError::DuplicateId(leaf));
        }
    }
    CyclicPreProof::new(nodes, doc.root, backlinks)
}

// ---- reports ----

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "kebab-case")]
pub enum NodeStatus {
    Ok,
    RuleMismatch { detail: String },
    /// A consequence side condition `lhs ⊨ rhs` that is not certainly valid.
    SideCondition { lhs: String, rhs: String, verdict: Verdict },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct NodeReport {
    pub id: String,
    pub rule: String,
    pub statuses: Vec<NodeStatus>,
}

impl NodeReport {
    pub fn is_ok(&self) -> bool {
        self.statuses.iter().all(|s| matches!(s, NodeStatus::Ok))
    }

    pub fn is_failed(&self) -> bool {
        self.statuses.iter().any(|s| match s {
            NodeStatus::Ok => false,
            NodeStatus::RuleMismatch { .. } => true,
            NodeStatus::SideCondition { verdict, .. } => !matches!(verdict, Verdict::Unknown(_)),
        })
    }

    pub fn bounded_reasons(&self) -> Vec<UnknownReason> {
        self.statuses
            .iter()
            .filter_map(|s| match s {
                NodeStatus::SideCondition { verdict: Verdict::Unknown(r), .. } => Some(*r),
                _ => None,
            })
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "status", content = "nodes", rename_all = "kebab-case")]
pub enum GlobalStatus {
    Ok,
    ConsCycle(Vec<String>),
    OpenLeaves(Vec<String>),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Outcome {
    Accept,
    AcceptBounded,
    Reject,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CheckReport {
    pub system: String,
    pub outcome: Outcome,
    pub nodes: Vec<NodeReport>,
    pub global: GlobalStatus,
    pub bounds: Bounds,
}

impl CheckReport {
    pub fn new(system: &str, nodes: Vec<NodeReport>, global: GlobalStatus, bounds: Bounds) -> Self {
        let failed = nodes.iter().any(NodeReport::is_failed) || global != GlobalStatus::Ok;
        let bounded = nodes.iter().any(|n| !n.bounded_reasons().is_empty());
        let outcome = if failed {
            Outcome::Reject
        } else if bounded {
            Outcome::AcceptBounded
        } else {
            Outcome::Accept
        };
        CheckReport { system: system.to_string(), outcome, nodes, global, bounds }
    }

    pub fn accepted(&self) -> bool {
        self.outcome != Outcome::Reject
    }

    /// Accepted with every side condition certain.
    pub fn accepted_exactly(&self) -> bool {
        self.outcome == Outcome::Accept
    }

    pub fn node(&self, id: &str) -> Option<&NodeReport> {
        self.nodes.iter().find(|n| n.id == id)
    }

    pub fn failed_nodes(&self) -> Vec<&NodeReport> {
        self.nodes.iter().filter(|n| n.is_failed()).collect()
    }

    pub fn bounded_nodes(&self) -> Vec<&NodeReport> {
        self.nodes.iter().filter(|n| !n.bounded_reasons().is_empty()).collect()
    }

    /// Human-readable rendering; the first line is the outcome.
    pub fn render_text(&self) -> String {
        let mut out = String::new();
        match self.outcome {
            Outcome::Reject => out.push_str("REJECT\n"),
            _ => {
                let bounded = self.bounded_nodes();
                if bounded.is_empty() {
                    out.push_str("ACCEPT (bounded: none)\n");
                } else {
                    let mut groups: BTreeMap<&str, Vec<&str>> = BTreeMap::new();
                    for n in &bounded {
                        for r in n.bounded_reasons() {
                            let label = match r {
                                UnknownReason::QuantifierBounded => "quantifier",
                                UnknownReason::StepBudgetExhausted => "step budget",
                            };
                            let ids = groups.entry(label).or_default();
                            if !ids.contains(&n.id.as_str()) {
                                ids.push(&n.id);
                            }
                        }
                    }
                    let parts: Vec<String> = groups
                        .iter()
                        .map(|(label, ids)| {
                            let noun = if ids.len() == 1 { "node" } else { "nodes" };
                            format!("{label} at {noun} {}", ids.join(", "))
                        })
                        .collect();
                    out.push_str(&format!("ACCEPT (bounded: {})\n", parts.join("; ")));
                }
            }
        }
        for n in &self.nodes {
            for s in &n.statuses {
                match s {
                    NodeStatus::Ok => {}
                    NodeStatus::RuleMismatch { detail } => {
                        out.push_str(&format!("  node {} ({}): rule mismatch: {}\n", n.id, n.rule, detail));
                    }
                    NodeStatus::SideCondition { lhs, rhs, verdict } => {
                        let (lhs, rhs) = (abbreviate(lhs), abbreviate(rhs));
                        out.push_str(&format!("  node {} ({}): side condition {} |= {} is {}\n", n.id, n.rule, lhs, rhs, verdict));
                    }
                }
            }
        }
        match &self.global {
            GlobalStatus::Ok => {}
            GlobalStatus::ConsCycle(ids) => out.push_str(&format!("  global: cycle of Cons nodes only: {}\n", ids.join(", "))),
            GlobalStatus::OpenLeaves(ids) => out.push_str(&format!("  global: open leaves without back-link: {}\n", ids.join(", "))),
        }
        out.push_str(&format!("  bounds: {}\n", self.bounds));
        out
    }

    pub fn render_machine(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }
}

/// Long formulas are cut in the text report; the machine form keeps them whole.
fn abbreviate(s: &str) -> String {
    const MAX: usize = 100;
    match s.char_indices().nth(MAX) {
        Some((cut, _)) => format!("{} ...", &s[..cut]),
        None => s.to_string(),
    }
}
