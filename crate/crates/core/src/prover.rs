//! Proof construction by weakest pre-conditions, and the translation of
//! ordinary proofs into cyclic ones.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::assertsem::{EntailmentOracle, EntailmentQuery};
use crate::lang::{subst, Assertion, Prog, Triple};
use crate::proofir::{CyclicNode, CyclicPreProof, CyclicRule, PrhlNode, PrhlRule};
use crate::sem::{check_triple, Bounds, Logic, Verdict};
use crate::wpcalc::{wpr, LoopMode, WpError};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProveRequest {
    pub triple: Triple,
    pub loop_mode: LoopMode,
    pub bounds: Bounds,
}

impl ProveRequest {
    pub fn new(triple: Triple, loop_mode: LoopMode, bounds: Bounds) -> Self {
        ProveRequest { triple, loop_mode, bounds }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ProveError {
    /// The triple is refuted, or a side condition is invalid or undecided.
    #[error("proof search failed: {0}")]
    Failure(Verdict),
    #[error(transparent)]
    Wp(#[from] WpError),
}

/// Builds the derivation of `{P} C {Q}` that follows the structure of `C`,
/// without deciding any side condition. Every axiom and assignment leaf sits
/// under a consequence step; the target pre-condition is pushed into the
/// first command of a sequence and into both branches of a choice.
pub fn build_prhl(t: &Triple, mode: LoopMode) -> Result<PrhlNode, WpError> {
    let mut root = gen(&t.prog.normalize(), &t.post, Some(&t.pre), mode)?;
    root.renumber();
    Ok(root)
}

fn cons(pre: &Assertion, premise: PrhlNode) -> PrhlNode {
    let t = Triple::new(pre.clone(), premise.triple.prog.clone(), premise.triple.post.clone());
    PrhlNode::new(PrhlRule::Cons, t, vec![premise])
}

fn gen(c: &Prog, q: &Assertion, target: Option<&Assertion>, mode: LoopMode) -> Result<PrhlNode, WpError> {
    Ok(match c {
        Prog::Empty | Prog::Assign(..) => {
            let (rule, w) = match c {
                Prog::Assign(x, e) => (PrhlRule::Assign, subst(q, &[(x.clone(), e.clone())])),
                _ => (PrhlRule::Axiom, q.clone()),
            };
            let leaf = PrhlNode::new(rule, Triple::new(w.clone(), c.clone(), q.clone()), vec![]);
            cons(target.unwrap_or(&w), leaf)
        }
        Prog::Seq(c1, c2) => {
            let second = gen(c2, q, None, mode)?;
            let mid = second.triple.pre.clone();
            let first = gen(c1, &mid, target, mode)?;
            let t = Triple::new(first.triple.pre.clone(), c.clone(), q.clone());
            PrhlNode::new(PrhlRule::Seq, t, vec![first, second])
        }
        Prog::Choice(c0, c1) => {
            let pre = match target {
                Some(p) => p.clone(),
                None => wpr(c, q, mode)?,
            };
            let left = gen(c0, q, Some(&pre), mode)?;
            let right = gen(c1, q, Some(&pre), mode)?;
            PrhlNode::new(PrhlRule::Or, Triple::new(pre, c.clone(), q.clone()), vec![left, right])
        }
        Prog::While { cond, invariant, body } => {
            let inv = match (mode, invariant) {
                (LoopMode::Invariant, Some(a)) => a.clone(),
                _ => wpr(c, q, mode)?,
            };
            let b = Assertion::from_bool(cond);
            let body_pre = Assertion::implies(b.clone(), inv.clone());
            let premise = gen(body, &inv, Some(&body_pre), mode)?;
            let exit = Assertion::implies(Assertion::not(b), inv.clone());
            let w = PrhlNode::new(PrhlRule::While, Triple::new(inv.clone(), c.clone(), exit), vec![premise]);
            let top = Triple::new(target.cloned().unwrap_or(inv), c.clone(), q.clone());
            PrhlNode::new(PrhlRule::Cons, top, vec![w])
        }
    })
}

/// Checks the triple against the bounded semantics, builds the derivation,
/// and discharges every consequence step through the oracle. In β mode an
/// undecided side condition is tolerated and left for the checker to report.
pub fn prove_prhl(r: &ProveRequest, oracle: &dyn EntailmentOracle) -> Result<PrhlNode, ProveError> {
    let t = &r.triple;
    let v = check_triple(Logic::PartialReverse, &t.pre, &t.prog, &t.post, &r.bounds);
    if v.is_invalid() {
        return Err(ProveError::Failure(v));
    }
    let proof = build_prhl(t, r.loop_mode)?;
    for n in proof.preorder() {
        if n.rule != PrhlRule::Cons {
            continue;
        }
        let c = &n.children[0].triple;
        for (lhs, rhs) in [(&c.pre, &n.triple.pre), (&n.triple.post, &c.post)] {
            if lhs.alpha_eq(rhs) {
                continue;
            }
            match oracle.decide(&EntailmentQuery::new(lhs.clone(), rhs.clone(), r.bounds)) {
                Verdict::Valid => {}
                Verdict::Unknown(_) if r.loop_mode == LoopMode::Beta => {}
                other => return Err(ProveError::Failure(other)),
            }
        }
    }
    Ok(proof)
}

// ---- cyclic translation ----

enum Tree {
    Node { triple: Triple, rule: CyclicRule, children: Vec<Tree> },
    Leaf { triple: Triple, linked: bool },
}

impl Tree {
    fn map_open_leaves(self, f: &mut dyn FnMut(Triple) -> Tree) -> Tree {
        match self {
            Tree::Leaf { triple, linked: false } => f(triple),
            Tree::Node { triple, rule, children } => {
                Tree::Node { triple, rule, children: children.into_iter().map(|c| c.map_open_leaves(f)).collect() }
            }
            leaf => leaf,
        }
    }

    fn link_matching(&mut self, label: &Triple) {
        match self {
            Tree::Leaf { triple, linked } => {
                if !*linked && triple.same_label(label) {
                    *linked = true;
                }
            }
            Tree::Node { children, .. } => children.iter_mut().for_each(|c| c.link_matching(label)),
        }
    }
}

fn seq(c: &Prog, cont: &Prog) -> Prog {
    Prog::seq(c.clone(), cont.clone()).normalize()
}

/// A pre-proof of `{P} C;cont {r}` whose open leaves read `{Q} cont {r}`.
fn translate(p: &PrhlNode, cont: &Prog, r: &Assertion) -> Tree {
    let t = &p.triple;
    let label = Triple::new(t.pre.clone(), seq(&t.prog, cont), r.clone());
    let open = |pre: &Assertion| Tree::Leaf { triple: Triple::new(pre.clone(), cont.clone(), r.clone()), linked: false };
    match p.rule {
        PrhlRule::Axiom => open(&t.pre),
        PrhlRule::Assign => Tree::Node { triple: label, rule: CyclicRule::AssignSubst, children: vec![open(&t.post)] },
        PrhlRule::Seq => {
            let (c0, c1) = (&p.children[0], &p.children[1]);
            let rest = seq(&c1.triple.prog, cont);
            translate(c0, &rest, r).map_open_leaves(&mut |_| translate(c1, cont, r))
        }
        PrhlRule::Cons => {
            let inner = translate(&p.children[0], cont, r);
            let post = t.post.clone();
            let inner = inner.map_open_leaves(&mut |leaf| Tree::Node {
                triple: leaf,
                rule: CyclicRule::Cons,
                children: vec![open(&post)],
            });
            Tree::Node { triple: label, rule: CyclicRule::Cons, children: vec![inner] }
        }
        PrhlRule::Or => Tree::Node {
            triple: label,
            rule: CyclicRule::Or,
            children: p.children.iter().map(|c| translate(c, cont, r)).collect(),
        },
        PrhlRule::While => {
            let around = seq(&t.prog, cont);
            let mut body = translate(&p.children[0], &around, r);
            body.link_matching(&label);
            Tree::Node { triple: label, rule: CyclicRule::While, children: vec![open(&t.post), body] }
        }
    }
}

/// Translates an ordinary proof of `{P} C {Q}` into a cyclic pre-proof of
/// `{P} C;cont {r}` whose proper open leaves read `{Q} cont {r}`. Each
/// recurring loop leaf is back-linked to its nearest loop ancestor with the
/// same label. With `cont = skip` and `r ≡ Q` the leaves are closed by axioms.
pub fn transform_to_cyclic(p: &PrhlNode, cont: &Prog, r: &Assertion) -> CyclicPreProof {
    let cont = cont.normalize();
    let close = cont.is_empty() && r.alpha_eq(&p.triple.post);
    let tree = translate(p, &cont, r);

    let mut nodes: Vec<CyclicNode> = Vec::new();
    let mut backlinks = BTreeMap::new();
    fn flatten(
        t: Tree,
        ancestors: &mut Vec<usize>,
        nodes: &mut Vec<CyclicNode>,
        backlinks: &mut BTreeMap<String, String>,
        close: bool,
    ) {
        let id = format!("n{}", nodes.len());
        match t {
            Tree::Leaf { triple, linked } => {
                let mut rule = CyclicRule::OpenLeaf;
                if linked {
                    let comp = ancestors
                        .iter()
                        .rev()
                        .find(|&&a| nodes[a].rule == CyclicRule::While && nodes[a].triple.same_label(&triple))
                        .expect("a loop leaf sits below its loop");
                    backlinks.insert(id.clone(), nodes[*comp].id.clone());
                } else if close && triple.prog.is_empty() && triple.pre.alpha_eq(&triple.post) {
                    rule = CyclicRule::Axiom;
                }
                nodes.push(CyclicNode { id, triple, rule, children: vec![], fresh: None });
            }
            Tree::Node { triple, rule, children } => {
                let me = nodes.len();
                nodes.push(CyclicNode { id, triple, rule, children: vec![], fresh: None });
                ancestors.push(me);
                for c in children {
                    let child_id = format!("n{}", nodes.len());
                    nodes[me].children.push(child_id);
                    flatten(c, ancestors, nodes, backlinks, close);
                }
                ancestors.pop();
            }
        }
    }
    flatten(tree, &mut Vec::new(), &mut nodes, &mut backlinks, close);
    CyclicPreProof::new(nodes, "n0", backlinks).expect("translation yields a well-formed pre-proof")
}
