//! Rule-by-rule checking of ordinary and cyclic certificates, and the global
//! condition on cyclic pre-proofs.

use std::collections::BTreeSet;

use crate::assertsem::{EntailmentOracle, EntailmentQuery};
use crate::lang::{decompose_head, print_assertion, subst, Assertion, Expr, Prog, Triple, Var};
use crate::proofir::{
    proof_graph, CheckReport, CyclicNode, CyclicPreProof, CyclicRule, GlobalStatus, NodeReport, NodeStatus, PrhlNode,
    PrhlRule,
};
use crate::sem::{Bounds, Verdict};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct CheckOptions {
    pub bounds: Bounds,
    /// Also accept the fresh-assignment premise written `x' = E[x:=x'] ∧ P[x:=x']`.
    pub accept_literal_fresh_assign: bool,
}

impl CheckOptions {
    pub fn new(bounds: Bounds) -> Self {
        CheckOptions { bounds, accept_literal_fresh_assign: false }
    }
}

/// Collects the statuses of one node.
struct Local<'a> {
    oracle: &'a dyn EntailmentOracle,
    bounds: Bounds,
    statuses: Vec<NodeStatus>,
}

impl<'a> Local<'a> {
    fn new(oracle: &'a dyn EntailmentOracle, bounds: Bounds) -> Self {
        Local { oracle, bounds, statuses: Vec::new() }
    }

    fn mismatch(&mut self, detail: impl Into<String>) {
        self.statuses.push(NodeStatus::RuleMismatch { detail: detail.into() });
    }

    fn same_assertion(&mut self, what: &str, found: &Assertion, expected: &Assertion) {
        if !found.alpha_eq(expected) {
            self.mismatch(format!("{what} is `{}`, expected `{}`", print_assertion(found), print_assertion(expected)));
        }
    }

    fn same_prog(&mut self, what: &str, found: &Prog, expected: &Prog) {
        if !found.same_program(expected) {
            self.mismatch(format!("{what} is `{found}`, expected `{expected}`"));
        }
    }

    fn entails(&mut self, lhs: &Assertion, rhs: &Assertion) {
        let verdict = self.oracle.decide(&EntailmentQuery::new(lhs.clone(), rhs.clone(), self.bounds));
        if !verdict.is_valid() {
            self.statuses.push(NodeStatus::SideCondition { lhs: print_assertion(lhs), rhs: print_assertion(rhs), verdict });
        }
    }

    fn arity(&mut self, found: usize, expected: usize) -> bool {
        if found != expected {
            self.mismatch(format!("{found} premises, the rule has {expected}"));
            return false;
        }
        true
    }

    fn finish(self, id: &str, rule: impl ToString) -> NodeReport {
        let statuses = if self.statuses.is_empty() { vec![NodeStatus::Ok] } else { self.statuses };
        NodeReport { id: id.to_string(), rule: rule.to_string(), statuses }
    }
}

fn neg(b: &crate::lang::BoolExpr) -> Assertion {
    Assertion::not(Assertion::from_bool(b))
}

fn pos(b: &crate::lang::BoolExpr) -> Assertion {
    Assertion::from_bool(b)
}

// ---- ordinary proofs ----

/// Checks every node of an ordinary derivation. Leaves must be axioms or
/// assignments; consequence side conditions go to the oracle.
pub fn check_prhl(p: &PrhlNode, oracle: &dyn EntailmentOracle, opts: &CheckOptions) -> CheckReport {
    let nodes = p.preorder().into_iter().map(|n| check_prhl_node(n, oracle, opts)).collect();
    CheckReport::new("prhl", nodes, GlobalStatus::Ok, opts.bounds)
}

fn check_prhl_node(n: &PrhlNode, oracle: &dyn EntailmentOracle, opts: &CheckOptions) -> NodeReport {
    let mut l = Local::new(oracle, opts.bounds);
    let t = &n.triple;
    let prog = t.prog.normalize();
    if l.arity(n.children.len(), n.rule.arity()) {
        let kid = |i: usize| &n.children[i].triple;
        match n.rule {
            PrhlRule::Axiom => {
                if !prog.is_empty() {
                    l.mismatch(format!("program is `{prog}`, expected skip"));
                }
                l.same_assertion("post", &t.post, &t.pre);
            }
            PrhlRule::Assign => match &prog {
                Prog::Assign(x, e) => {
                    let want = subst(&t.post, &[(x.clone(), e.clone())]);
                    l.same_assertion("pre", &t.pre, &want);
                }
                other => l.mismatch(format!("program is `{other}`, expected an assignment")),
            },
            PrhlRule::Seq => {
                let (a, b) = (kid(0), kid(1));
                let mut joined = a.prog.normalize().items();
                joined.extend(b.prog.normalize().items());
                l.same_prog("program of the premises", &Prog::from_items(joined), &prog);
                l.same_assertion("pre of the first premise", &a.pre, &t.pre);
                l.same_assertion("pre of the second premise", &b.pre, &a.post);
                l.same_assertion("post of the second premise", &b.post, &t.post);
            }
            PrhlRule::Cons => {
                let c = kid(0);
                l.same_prog("program of the premise", &c.prog, &prog);
                l.entails(&c.pre, &t.pre);
                l.entails(&t.post, &c.post);
            }
            PrhlRule::Or => match &prog {
                Prog::Choice(c0, c1) => {
                    for (i, branch) in [c0, c1].into_iter().enumerate() {
                        let c = kid(i);
                        l.same_prog(&format!("program of premise {i}"), &c.prog, branch);
                        l.same_assertion(&format!("pre of premise {i}"), &c.pre, &t.pre);
                        l.same_assertion(&format!("post of premise {i}"), &c.post, &t.post);
                    }
                }
                other => l.mismatch(format!("program is `{other}`, expected a choice")),
            },
            PrhlRule::While => match &prog {
                Prog::While { cond, body, .. } => {
                    let inv = &t.pre;
                    let c = kid(0);
                    l.same_assertion("post", &t.post, &Assertion::implies(neg(cond), inv.clone()));
                    l.same_prog("program of the premise", &c.prog, body);
                    l.same_assertion("pre of the premise", &c.pre, &Assertion::implies(pos(cond), inv.clone()));
                    l.same_assertion("post of the premise", &c.post, inv);
                }
                other => l.mismatch(format!("program is `{other}`, expected a loop")),
            },
        }
    }
    l.finish(&n.id, n.rule)
}

// ---- cyclic proofs ----

/// Checks every node against its cyclic rule, every back-link label, and the
/// global condition.
pub fn check_cprhl(c: &CyclicPreProof, oracle: &dyn EntailmentOracle, opts: &CheckOptions) -> CheckReport {
    let nodes = c.nodes().iter().map(|n| check_cprhl_node(c, n, oracle, opts)).collect();
    let open = c.proper_open_leaves();
    let global = match global_soundness(c) {
        GlobalStatus::Ok if !open.is_empty() => GlobalStatus::OpenLeaves(open),
        g => g,
    };
    CheckReport::new("cprhl", nodes, global, opts.bounds)
}

/// Checks one node of a cyclic pre-proof in isolation.
pub fn check_cprhl_node(c: &CyclicPreProof, n: &CyclicNode, oracle: &dyn EntailmentOracle, opts: &CheckOptions) -> NodeReport {
    let mut l = Local::new(oracle, opts.bounds);
    let kids: Vec<&Triple> = n.children.iter().map(|id| &c.node(id).triple).collect();
    if n.fresh.is_some() && n.rule != CyclicRule::AssignFresh {
        l.mismatch("only AssignFresh names a fresh variable");
    }
    if l.arity(kids.len(), n.rule.arity()) {
        check_cyclic_rule(&mut l, n.rule, &n.triple, &kids, n.fresh.as_deref(), opts);
    }
    if let Some(comp) = c.backlinks.get(&n.id) {
        let target = &c.node(comp).triple;
        if !target.same_label(&n.triple) {
            l.mismatch(format!("companion {comp} is labelled {target}, the leaf {}", n.triple));
        }
    }
    l.finish(&n.id, n.rule)
}

fn check_cyclic_rule(l: &mut Local, rule: CyclicRule, t: &Triple, kids: &[&Triple], fresh: Option<&str>, opts: &CheckOptions) {
    let prog = t.prog.normalize();
    let head = if prog.is_empty() { None } else { decompose_head(&prog).ok() };
    match rule {
        CyclicRule::OpenLeaf => {}
        CyclicRule::Axiom => {
            if !prog.is_empty() {
                l.mismatch(format!("program is `{prog}`, expected skip"));
            }
            l.same_assertion("post", &t.post, &t.pre);
        }
        CyclicRule::Cons => {
            let c = kids[0];
            l.same_prog("program of the premise", &c.prog, &prog);
            l.entails(&c.pre, &t.pre);
            l.entails(&t.post, &c.post);
        }
        CyclicRule::AssignSubst => match head {
            Some((Prog::Assign(x, e), rest)) => {
                let c = kids[0];
                l.same_prog("program of the premise", &c.prog, &rest);
                l.same_assertion("post of the premise", &c.post, &t.post);
                l.same_assertion("pre", &t.pre, &subst(&c.pre, &[(x, e)]));
            }
            _ => l.mismatch(format!("program is `{prog}`, expected an assignment first")),
        },
        CyclicRule::AssignFresh => match (head, fresh) {
            (Some((Prog::Assign(x, e), rest)), Some(x1)) => {
                let c = kids[0];
                l.same_prog("program of the premise", &c.prog, &rest);
                l.same_assertion("post of the premise", &c.post, &t.post);
                let mut taken: BTreeSet<Var> = t.pre.all_vars();
                taken.extend(t.post.all_vars());
                taken.extend(e.vars());
                taken.extend(prog.vars());
                taken.insert(x.clone());
                if taken.contains(x1) {
                    l.mismatch(format!("`{x1}` is not fresh"));
                }
                let renamed = [(x.clone(), Expr::var(x1))];
                let old_e = crate::lang::subst_expr(&e, &renamed);
                let old_p = subst(&t.pre, &renamed);
                let want = Assertion::and(Assertion::eq(Expr::var(&x), old_e.clone()), old_p.clone());
                let literal = Assertion::and(Assertion::eq(Expr::var(x1), old_e), old_p);
                if !(c.pre.alpha_eq(&want) || opts.accept_literal_fresh_assign && c.pre.alpha_eq(&literal)) {
                    l.same_assertion("pre of the premise", &c.pre, &want);
                }
            }
            (Some((Prog::Assign(..), _)), None) => l.mismatch("AssignFresh without a fresh variable"),
            _ => l.mismatch(format!("program is `{prog}`, expected an assignment first")),
        },
        CyclicRule::Or => match head {
            Some((Prog::Choice(c0, c1), rest)) => {
                for (i, branch) in [*c0, *c1].into_iter().enumerate() {
                    let c = kids[i];
                    let want = Prog::seq(branch, rest.clone());
                    l.same_prog(&format!("program of premise {i}"), &c.prog, &want);
                    l.same_assertion(&format!("pre of premise {i}"), &c.pre, &t.pre);
                    l.same_assertion(&format!("post of premise {i}"), &c.post, &t.post);
                }
            }
            _ => l.mismatch(format!("program is `{prog}`, expected a choice first")),
        },
        CyclicRule::While => match head {
            Some((lp @ Prog::While { .. }, rest)) => {
                let Prog::While { cond, body, .. } = &lp else { unreachable!() };
                let (exit, iter) = (kids[0], kids[1]);
                l.same_prog("program of the exit premise", &exit.prog, &rest);
                l.same_assertion("pre of the exit premise", &exit.pre, &Assertion::implies(neg(cond), t.pre.clone()));
                l.same_assertion("post of the exit premise", &exit.post, &t.post);
                let again = Prog::seq((**body).clone(), Prog::seq(lp.clone(), rest.clone()));
                l.same_prog("program of the iteration premise", &iter.prog, &again);
                l.same_assertion("pre of the iteration premise", &iter.pre, &Assertion::implies(pos(cond), t.pre.clone()));
                l.same_assertion("post of the iteration premise", &iter.post, &t.post);
            }
            _ => l.mismatch(format!("program is `{prog}`, expected a loop first")),
        },
    }
}

// ---- global condition ----

/// Rejects pre-proofs with a cycle that applies only the consequence rule.
/// Back-linked leaves only forward to their companion, so they count as
/// transparent. The reported nodes are in document order.
pub fn global_soundness(c: &CyclicPreProof) -> GlobalStatus {
    let (adj, mask) = cons_subgraph(c);
    match find_cycle_scc(&adj, &mask) {
        Some(scc) => GlobalStatus::ConsCycle(scc.into_iter().map(|i| c.nodes()[i].id.clone()).collect()),
        None => GlobalStatus::Ok,
    }
}

fn cons_subgraph(c: &CyclicPreProof) -> (Vec<Vec<usize>>, Vec<bool>) {
    let g = proof_graph(c);
    let mut adj = vec![Vec::new(); c.nodes().len()];
    for (a, b) in &g.edges {
        adj[c.position(a).expect("known id")].push(c.position(b).expect("known id"));
    }
    let mask = c
        .nodes()
        .iter()
        .map(|n| n.rule == CyclicRule::Cons || (n.rule == CyclicRule::OpenLeaf && c.backlinks.contains_key(&n.id)))
        .collect();
    (adj, mask)
}

/// Tarjan's algorithm on the subgraph induced by `mask`. Returns the
/// strongly connected component that contains a cycle and has the smallest
/// member, with members sorted.
pub(crate) fn find_cycle_scc(adj: &[Vec<usize>], mask: &[bool]) -> Option<Vec<usize>> {
    struct T<'a> {
        adj: &'a [Vec<usize>],
        mask: &'a [bool],
        index: Vec<Option<usize>>,
        low: Vec<usize>,
        on_stack: Vec<bool>,
        stack: Vec<usize>,
        next: usize,
        best: Option<Vec<usize>>,
    }
    impl T<'_> {
        fn visit(&mut self, v: usize) {
            self.index[v] = Some(self.next);
            self.low[v] = self.next;
            self.next += 1;
            self.stack.push(v);
            self.on_stack[v] = true;
            for &w in &self.adj[v] {
                if !self.mask[w] {
                    continue;
                }
                match self.index[w] {
                    None => {
                        self.visit(w);
                        self.low[v] = self.low[v].min(self.low[w]);
                    }
                    Some(iw) if self.on_stack[w] => self.low[v] = self.low[v].min(iw),
                    Some(_) => {}
                }
            }
            if Some(self.low[v]) == self.index[v] {
                let mut comp = Vec::new();
                loop {
                    let w = self.stack.pop().expect("tarjan stack");
                    self.on_stack[w] = false;
                    comp.push(w);
                    if w == v {
                        break;
                    }
                }
                let cyclic = comp.len() > 1 || self.adj[v].contains(&v);
                if cyclic {
                    comp.sort_unstable();
                    if self.best.as_ref().map_or(true, |b| comp[0] < b[0]) {
                        self.best = Some(comp);
                    }
                }
            }
        }
    }
    let n = adj.len();
    let mut t = T {
        adj,
        mask,
        index: vec![None; n],
        low: vec![0; n],
        on_stack: vec![false; n],
        stack: Vec::new(),
        next: 0,
        best: None,
    };
    for v in 0..n {
        if mask[v] && t.index[v].is_none() {
            t.visit(v);
        }
    }
    t.best
}

/// Reference decision of the global condition: walks every path from the
/// root up to depth `3·|nodes|` and rejects when some path stays on
/// consequence steps (and back-link jumps) for more than `|nodes|` nodes.
pub fn global_soundness_reference(c: &CyclicPreProof) -> bool {
    let (adj, mask) = cons_subgraph(c);
    let n = adj.len();
    let depth = 3 * n;
    let root = c.position(&c.root).expect("root id");
    // frontier[v] = longest current all-Cons run ending at v, over paths of the current length
    let mut frontier: Vec<Option<usize>> = vec![None; n];
    frontier[root] = Some(usize::from(mask[root]));
    for _ in 0..depth {
        let mut next: Vec<Option<usize>> = vec![None; n];
        for v in 0..n {
            let Some(run) = frontier[v] else { continue };
            if run > n {
                return false;
            }
            for &w in &adj[v] {
                let r = if mask[w] && mask[v] { run + 1 } else { usize::from(mask[w]) };
                next[w] = Some(next[w].map_or(r, |old: usize| old.max(r)));
            }
        }
        frontier = next;
    }
    frontier.iter().all(|r| r.map_or(true, |r| r <= n))
}

/// Convenience: an `Invalid` side condition anywhere in the report.
pub fn first_invalid_side_condition(r: &CheckReport) -> Option<(&str, &Verdict)> {
    r.nodes.iter().find_map(|n| {
        n.statuses.iter().find_map(|s| match s {
            NodeStatus::SideCondition { verdict, .. } if verdict.is_invalid() => Some((n.id.as_str(), verdict)),
            _ => None,
        })
    })
}
