//! Shared generators and reference semantics for the integration tests.
#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};
use std::path::PathBuf;

use prhl::assertsem::assert_holds;
use prhl::lang::{Assertion, BinOp, BoolExpr, Expr, Nat, Prog, Triple};
use prhl::proofir::{CyclicNode, CyclicPreProof, CyclicRule};
use prhl::sem::{enumerate_states, run, Bounds, State};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub mod harness;

pub fn corpus(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("corpus").join(name)
}

pub fn read_corpus(name: &str) -> String {
    std::fs::read_to_string(corpus(name)).unwrap_or_else(|e| panic!("{name}: {e}"))
}

/// Random syntax over a fixed variable set with small constants.
pub struct Gen {
    pub rng: ChaCha8Rng,
    pub vars: Vec<String>,
    pub cmax: Nat,
}

impl Gen {
    pub fn new(seed: u64, vars: &[&str], cmax: Nat) -> Self {
        Gen { rng: ChaCha8Rng::seed_from_u64(seed), vars: vars.iter().map(|s| s.to_string()).collect(), cmax }
    }

    pub fn var(&mut self) -> String {
        self.vars.choose(&mut self.rng).expect("at least one variable").clone()
    }

    pub fn constant(&mut self) -> Nat {
        self.rng.gen_range(0..=self.cmax)
    }

    pub fn atom(&mut self) -> Expr {
        if self.rng.gen_bool(0.6) {
            Expr::var(self.var())
        } else {
            Expr::Const(self.constant())
        }
    }

    /// Expressions with `+`, `-` and, rarely, `*`, `/` and `%`.
    pub fn expr(&mut self, depth: usize) -> Expr {
        if depth == 0 || self.rng.gen_bool(0.45) {
            return self.atom();
        }
        let op = match self.rng.gen_range(0..10) {
            0..=4 => BinOp::Add,
            5..=7 => BinOp::Sub,
            8 => BinOp::Mul,
            _ => *[BinOp::Div, BinOp::Mod].choose(&mut self.rng).unwrap(),
        };
        Expr::bin(op, self.expr(depth - 1), self.expr(depth - 1))
    }

    /// Expressions built from `+` and `-` only, with at most one operator.
    pub fn small_expr(&mut self) -> Expr {
        match self.rng.gen_range(0..3) {
            0 => self.atom(),
            1 => Expr::add(Expr::var(self.var()), self.atom()),
            _ => Expr::sub(Expr::var(self.var()), self.atom()),
        }
    }

    pub fn comparison(&mut self) -> BoolExpr {
        let (l, r) = (self.small_expr(), self.small_expr());
        match self.rng.gen_range(0..3) {
            0 => BoolExpr::eq(l, r),
            1 => BoolExpr::le(l, r),
            _ => BoolExpr::lt(l, r),
        }
    }

    pub fn guard(&mut self) -> BoolExpr {
        match self.rng.gen_range(0..6) {
            0 => BoolExpr::not(self.comparison()),
            1 => BoolExpr::and(self.comparison(), self.comparison()),
            _ => self.comparison(),
        }
    }

    pub fn qf_assertion(&mut self, depth: usize) -> Assertion {
        if depth == 0 || self.rng.gen_bool(0.35) {
            return Assertion::from_bool(&self.comparison());
        }
        match self.rng.gen_range(0..4) {
            0 => Assertion::not(self.qf_assertion(depth - 1)),
            1 => Assertion::and(self.qf_assertion(depth - 1), self.qf_assertion(depth - 1)),
            2 => Assertion::or(self.qf_assertion(depth - 1), self.qf_assertion(depth - 1)),
            _ => Assertion::implies(self.qf_assertion(depth - 1), self.qf_assertion(depth - 1)),
        }
    }

    /// Assertions whose quantifiers may bind the generator's own variables,
    /// which makes capture during substitution likely.
    pub fn assertion(&mut self, depth: usize) -> Assertion {
        if depth == 0 || self.rng.gen_bool(0.3) {
            return Assertion::from_bool(&self.comparison());
        }
        match self.rng.gen_range(0..6) {
            0 => Assertion::not(self.assertion(depth - 1)),
            1 => Assertion::and(self.assertion(depth - 1), self.assertion(depth - 1)),
            2 => Assertion::or(self.assertion(depth - 1), self.assertion(depth - 1)),
            3 => Assertion::implies(self.assertion(depth - 1), self.assertion(depth - 1)),
            4 => Assertion::exists(self.var(), self.assertion(depth - 1)),
            _ => Assertion::forall(self.var(), self.assertion(depth - 1)),
        }
    }

    pub fn assign(&mut self) -> Prog {
        Prog::assign(self.var(), self.small_expr())
    }

    /// Programs without loops.
    pub fn loop_free(&mut self, depth: usize) -> Prog {
        if depth == 0 {
            return if self.rng.gen_bool(0.9) { self.assign() } else { Prog::Empty };
        }
        match self.rng.gen_range(0..5) {
            0 | 1 => Prog::seq(self.loop_free(depth - 1), self.loop_free(depth - 1)),
            2 => Prog::choice(self.loop_free(depth - 1), self.loop_free(depth - 1)),
            _ => self.assign(),
        }
    }

    /// Programs of the given depth; loops carry `invariant` when one is supplied.
    pub fn program(&mut self, depth: usize, invariant: &mut dyn FnMut(&mut Self) -> Option<Assertion>) -> Prog {
        if depth == 0 {
            return if self.rng.gen_bool(0.9) { self.assign() } else { Prog::Empty };
        }
        match self.rng.gen_range(0..7) {
            0 | 1 => Prog::seq(self.program(depth - 1, invariant), self.program(depth - 1, invariant)),
            2 => Prog::choice(self.program(depth - 1, invariant), self.program(depth - 1, invariant)),
            3 | 4 => {
                let inv = invariant(self);
                let (cond, body) = if self.rng.gen_bool(0.5) {
                    // a counting loop
                    let v = self.var();
                    let bound = self.constant();
                    let body = Prog::seq(self.program(depth - 1, invariant), Prog::assign(&v, Expr::add(Expr::var(&v), Expr::Const(1))));
                    (BoolExpr::lt(Expr::var(&v), Expr::Const(bound)), body)
                } else {
                    (self.guard(), self.program(depth - 1, invariant))
                };
                match inv {
                    Some(a) => Prog::annotated_while(cond, a, body),
                    None => Prog::while_loop(cond, body),
                }
            }
            _ => self.assign(),
        }
    }
}

// ---- independent big-step semantics ----

pub type Env = BTreeMap<String, Nat>;

fn get(s: &Env, v: &str) -> Nat {
    s.get(v).copied().unwrap_or(0)
}

pub fn ref_expr(e: &Expr, s: &Env) -> Nat {
    match e {
        Expr::Var(v) => get(s, v),
        Expr::Const(n) => *n,
        Expr::Bin(op, l, r) => {
            let (a, b) = (ref_expr(l, s), ref_expr(r, s));
            match op {
                BinOp::Add => a.checked_add(b).unwrap_or(Nat::MAX),
                BinOp::Sub => if a > b { a - b } else { 0 },
                BinOp::Mul => a.checked_mul(b).unwrap_or(Nat::MAX),
                BinOp::Div => if b == 0 { 0 } else { a / b },
                BinOp::Mod => if b == 0 { a } else { a % b },
            }
        }
    }
}

pub fn ref_bool(b: &BoolExpr, s: &Env) -> bool {
    match b {
        BoolExpr::Eq(l, r) => ref_expr(l, s) == ref_expr(r, s),
        BoolExpr::Le(l, r) => ref_expr(l, s) <= ref_expr(r, s),
        BoolExpr::Not(x) => !ref_bool(x, s),
        BoolExpr::And(l, r) => ref_bool(l, s) && ref_bool(r, s),
        BoolExpr::Or(l, r) => ref_bool(l, s) || ref_bool(r, s),
    }
}

/// Final environments of `p` from `s`, or `None` once more than `fuel` loop
/// iterations would be needed along some branch.
pub fn big_step(p: &Prog, s: &Env, fuel: usize) -> Option<BTreeSet<Env>> {
    match p {
        Prog::Empty => Some(BTreeSet::from([s.clone()])),
        Prog::Assign(x, e) => {
            let mut t = s.clone();
            t.insert(x.clone(), ref_expr(e, s));
            Some(BTreeSet::from([t]))
        }
        Prog::Seq(a, b) => {
            let mut out = BTreeSet::new();
            for mid in big_step(a, s, fuel)? {
                out.extend(big_step(b, &mid, fuel)?);
            }
            Some(out)
        }
        Prog::Choice(a, b) => {
            let mut out = big_step(a, s, fuel)?;
            out.extend(big_step(b, s, fuel)?);
            Some(out)
        }
        Prog::While { cond, body, .. } => {
            let mut out = BTreeSet::new();
            let mut frontier = BTreeSet::from([s.clone()]);
            let mut seen = BTreeSet::new();
            for _ in 0..=fuel {
                let mut next = BTreeSet::new();
                for t in frontier {
                    if !seen.insert(t.clone()) {
                        continue;
                    }
                    if seen.len() > 512 {
                        return None;
                    }
                    if ref_bool(cond, &t) {
                        next.extend(big_step(body, &t, fuel)?);
                    } else {
                        out.insert(t);
                    }
                }
                if next.is_empty() {
                    return Some(out);
                }
                frontier = next;
            }
            None
        }
    }
}

pub fn env_of(s: &State) -> Env {
    s.support().filter(|(_, v)| **v != 0).map(|(k, v)| (k.clone(), *v)).collect()
}

pub fn state_of(e: &Env) -> State {
    State::from_pairs(e.iter().map(|(k, v)| (k.as_str(), *v)))
}

/// Length of the shortest violation of the partial reverse triple: a run
/// from a state outside `pre` to a final state inside `post`, over initial
/// states on the triple's variables with values in `0..=domain_max`.
/// Runs are explored breadth first, so a cut run never hides a shorter
/// witness; `Err(())` only when no witness was found and some run was cut.
pub fn shortest_violation(t: &Triple, vars: &BTreeSet<String>, b: &Bounds) -> Result<Option<usize>, ()> {
    let mut all = t.relevant_vars();
    all.extend(vars.iter().cloned());
    let order: Vec<String> = all.into_iter().collect();
    let mut best: Option<usize> = None;
    let mut cut = false;
    for s in enumerate_states(&order, b.domain_max) {
        if assert_holds(&s, &t.pre, b.quant_bound) {
            continue;
        }
        let r = run(&t.prog, &s, b);
        cut |= r.truncated;
        for (f, steps) in r.finals {
            if assert_holds(&f, &t.post, b.quant_bound) {
                best = Some(best.map_or(steps, |x: usize| x.min(steps)));
            }
        }
    }
    if best.is_none() && cut {
        return Err(());
    }
    Ok(best)
}

/// Whether every run from a state over `vars` with values in
/// `0..=domain_max` keeps all values within that range. `false` as well when
/// exploration needs more than `step_bound` levels.
pub fn closed_under(p: &Prog, vars: &[String], domain_max: Nat, step_bound: usize) -> bool {
    use prhl::sem::{step, Config};
    for s in enumerate_states(vars, domain_max) {
        let mut seen = std::collections::HashSet::new();
        let mut frontier = vec![Config::new(p.normalize(), s)];
        let mut levels = 0;
        while !frontier.is_empty() {
            if levels > step_bound {
                return false;
            }
            let mut next = Vec::new();
            for c in frontier {
                if c.state.support().any(|(_, v)| *v > domain_max) {
                    return false;
                }
                if seen.insert(c.clone()) {
                    next.extend(step(&c));
                }
            }
            frontier = next;
            levels += 1;
        }
    }
    true
}

// ---- random pre-proof shapes ----

/// A random tree of cyclic rules with random back-links from open leaves to
/// inner nodes. Labels are all the same; only the shape matters.
pub fn random_preproof(rng: &mut ChaCha8Rng, max_nodes: usize) -> CyclicPreProof {
    let label = Triple::new(Assertion::tt(), Prog::Empty, Assertion::tt());
    let mut rules: Vec<CyclicRule> = Vec::new();
    let mut children: Vec<Vec<usize>> = Vec::new();
    let mut pending = vec![0usize];
    rules.push(CyclicRule::OpenLeaf);
    children.push(Vec::new());
    while let Some(v) = pending.pop() {
        let budget_left = rules.len() < max_nodes;
        let rule = if !budget_left {
            *[CyclicRule::OpenLeaf, CyclicRule::Axiom].choose(rng).unwrap()
        } else {
            *[
                CyclicRule::Cons,
                CyclicRule::Cons,
                CyclicRule::Cons,
                CyclicRule::While,
                CyclicRule::Or,
                CyclicRule::AssignSubst,
                CyclicRule::OpenLeaf,
                CyclicRule::OpenLeaf,
                CyclicRule::Axiom,
            ]
            .choose(rng)
            .unwrap()
        };
        let rule = if v == 0 && rule.arity() == 0 { CyclicRule::Cons } else { rule };
        rules[v] = rule;
        for _ in 0..rule.arity() {
            let id = rules.len();
            rules.push(CyclicRule::OpenLeaf);
            children.push(Vec::new());
            children[v].push(id);
            pending.push(id);
        }
    }
    let inner: Vec<usize> = (0..rules.len()).filter(|&i| rules[i].arity() > 0).collect();
    let mut backlinks = BTreeMap::new();
    for i in 0..rules.len() {
        if rules[i] == CyclicRule::OpenLeaf && rng.gen_bool(0.8) {
            let target = *inner.choose(rng).unwrap();
            backlinks.insert(format!("n{i}"), format!("n{target}"));
        }
    }
    let nodes = (0..rules.len())
        .map(|i| CyclicNode {
            id: format!("n{i}"),
            triple: label.clone(),
            rule: rules[i],
            children: children[i].iter().map(|c| format!("n{c}")).collect(),
            fresh: None,
        })
        .collect();
    CyclicPreProof::new(nodes, "n0", backlinks).expect("generated shape is well formed")
}
