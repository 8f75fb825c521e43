//! Program states, the small-step relation, bounded execution and the
//! semantic validity oracle for triples.

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};
use std::fmt;

use serde::{Serialize, Serializer};

use crate::assertsem::{eval_assertion, Eval};
use crate::lang::{Assertion, BoolExpr, Expr, Nat, Prog, Var};

/// A total map from variables to naturals; unmapped variables are 0.
/// Zero values are never stored, so derived equality is extensional.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct State(BTreeMap<Var, Nat>);

impl State {
    pub fn new() -> Self {
        State::default()
    }

    pub fn from_pairs<'a>(pairs: impl IntoIterator<Item = (&'a str, Nat)>) -> Self {
        let mut s = State::new();
        for (v, n) in pairs {
            s.set(v, n);
        }
        s
    }

    pub fn get(&self, v: &str) -> Nat {
        self.0.get(v).copied().unwrap_or(0)
    }

    pub fn set(&mut self, v: &str, n: Nat) {
        if n == 0 {
            self.0.remove(v);
        } else {
            self.0.insert(v.to_string(), n);
        }
    }

    pub fn with(&self, v: &str, n: Nat) -> Self {
        let mut s = self.clone();
        s.set(v, n);
        s
    }

    /// Variables with a non-zero value.
    pub fn support(&self) -> impl Iterator<Item = (&Var, &Nat)> {
        self.0.iter()
    }

    /// Values over `vars`, in order: the lexicographic search key.
    pub fn key(&self, vars: &[Var]) -> Vec<Nat> {
        vars.iter().map(|v| self.get(v)).collect()
    }

    /// Renders `{x:10, i:5}` listing every variable of `vars` (zeros included)
    /// followed by any other non-zero variable.
    pub fn render(&self, vars: &[Var]) -> String {
        let mut parts: Vec<String> = vars.iter().map(|v| format!("{}:{}", pretty(v), self.get(v))).collect();
        for (v, n) in &self.0 {
            if !vars.contains(v) {
                parts.push(format!("{}:{}", pretty(v), n));
            }
        }
        format!("{{{}}}", parts.join(", "))
    }

    /// Map over `vars` with zeros spelled out.
    pub fn dense(&self, vars: &[Var]) -> BTreeMap<Var, Nat> {
        let mut m: BTreeMap<Var, Nat> = vars.iter().map(|v| (v.clone(), self.get(v))).collect();
        m.extend(self.0.iter().map(|(k, v)| (k.clone(), *v)));
        m
    }
}

fn pretty(v: &str) -> String {
    crate::lang::print_expr_with(&Expr::var(v), crate::lang::NameStyle::Primes)
}

impl fmt::Display for State {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render(&[]))
    }
}

impl Serialize for State {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.0.serialize(s)
    }
}

/// Finitization of the unbounded semantics.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Bounds {
    /// Initial states range over `0..=domain_max` for each relevant variable.
    pub domain_max: Nat,
    /// Maximum number of small steps along any branch.
    pub step_bound: usize,
    /// Quantifiers range over `0..=quant_bound`.
    pub quant_bound: Nat,
}

impl Default for Bounds {
    fn default() -> Self {
        Bounds { domain_max: 8, step_bound: 10_000, quant_bound: 16 }
    }
}

impl Bounds {
    pub fn new(domain_max: Nat, step_bound: usize, quant_bound: Nat) -> Self {
        Bounds { domain_max, step_bound, quant_bound }
    }
}

impl fmt::Display for Bounds {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "domain_max={} step_bound={} quant_bound={}", self.domain_max, self.step_bound, self.quant_bound)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum UnknownReason {
    StepBudgetExhausted,
    QuantifierBounded,
}

impl fmt::Display for UnknownReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            UnknownReason::StepBudgetExhausted => "step budget exhausted",
            UnknownReason::QuantifierBounded => "quantifier bounded",
        })
    }
}

/// A concrete counterexample. `vars` lists the variables it is rendered over.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Witness {
    State { vars: Vec<Var>, state: State },
    Pair { vars: Vec<Var>, initial: State, final_state: State },
}

impl Witness {
    pub fn state(&self) -> &State {
        match self {
            Witness::State { state, .. } => state,
            Witness::Pair { initial, .. } => initial,
        }
    }
}

impl fmt::Display for Witness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Witness::State { vars, state } => f.write_str(&state.render(vars)),
            Witness::Pair { vars, initial, final_state } => {
                write!(f, "σ={} σ'={}", initial.render(vars), final_state.render(vars))
            }
        }
    }
}

impl Serialize for Witness {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        #[serde(untagged)]
        enum Repr {
            State { state: BTreeMap<Var, Nat> },
            Pair { initial: BTreeMap<Var, Nat>, #[serde(rename = "final")] final_state: BTreeMap<Var, Nat> },
        }
        match self {
            Witness::State { vars, state } => Repr::State { state: state.dense(vars) },
            Witness::Pair { vars, initial, final_state } => {
                Repr::Pair { initial: initial.dense(vars), final_state: final_state.dense(vars) }
            }
        }
        .serialize(s)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", content = "detail", rename_all = "kebab-case")]
pub enum Verdict {
    Valid,
    Invalid(Witness),
    Unknown(UnknownReason),
}

impl Verdict {
    pub fn is_valid(&self) -> bool {
        matches!(self, Verdict::Valid)
    }

    pub fn is_invalid(&self) -> bool {
        matches!(self, Verdict::Invalid(_))
    }

    pub fn witness(&self) -> Option<&Witness> {
        match self {
            Verdict::Invalid(w) => Some(w),
            _ => None,
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verdict::Valid => f.write_str("valid"),
            Verdict::Invalid(w) => write!(f, "invalid, witness {w}"),
            Verdict::Unknown(r) => write!(f, "unknown ({r})"),
        }
    }
}

pub fn eval_expr(e: &Expr, s: &State) -> Nat {
    match e {
        Expr::Var(v) => s.get(v),
        Expr::Const(n) => *n,
        Expr::Bin(op, l, r) => op.apply(eval_expr(l, s), eval_expr(r, s)),
    }
}

pub fn eval_bool(b: &BoolExpr, s: &State) -> bool {
    match b {
        BoolExpr::Eq(l, r) => eval_expr(l, s) == eval_expr(r, s),
        BoolExpr::Le(l, r) => eval_expr(l, s) <= eval_expr(r, s),
        BoolExpr::Not(x) => !eval_bool(x, s),
        BoolExpr::And(l, r) => eval_bool(l, s) && eval_bool(r, s),
        BoolExpr::Or(l, r) => eval_bool(l, s) || eval_bool(r, s),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Config {
    pub prog: Prog,
    pub state: State,
}

impl Config {
    pub fn new(prog: Prog, state: State) -> Self {
        Config { prog, state }
    }
}

/// All one-step successors of a configuration.
pub fn step(c: &Config) -> Vec<Config> {
    let mut out = match &c.prog {
        Prog::Empty => Vec::new(),
        Prog::Assign(x, e) => vec![Config::new(Prog::Empty, c.state.with(x, eval_expr(e, &c.state)))],
        Prog::Seq(first, rest) => step(&Config::new((**first).clone(), c.state.clone()))
            .into_iter()
            .map(|k| Config::new(Prog::seq(k.prog, (**rest).clone()), k.state))
            .collect(),
        Prog::While { cond, body, .. } => {
            if eval_bool(cond, &c.state) {
                vec![Config::new(Prog::seq((**body).clone(), c.prog.clone()), c.state.clone())]
            } else {
                vec![Config::new(Prog::Empty, c.state.clone())]
            }
        }
        Prog::Choice(a, b) => {
            vec![Config::new((**a).clone(), c.state.clone()), Config::new((**b).clone(), c.state.clone())]
        }
    };
    out.dedup();
    out
}

/// Final states with the length of their shortest execution.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RunResult {
    pub finals: BTreeMap<State, usize>,
    /// Some branch was still running when the step budget ran out.
    pub truncated: bool,
}

impl RunResult {
    pub fn final_states(&self) -> BTreeSet<State> {
        self.finals.keys().cloned().collect()
    }
}

/// Breadth-first enumeration of every `⟨p, s⟩ →* ⟨ε, s'⟩` within the step
/// budget. Configurations are merged only within one level, so a cycle keeps
/// consuming budget and is reported as truncation.
pub fn run(p: &Prog, s: &State, b: &Bounds) -> RunResult {
    let mut finals = BTreeMap::new();
    let mut level: HashSet<Config> = HashSet::new();
    level.insert(Config::new(p.normalize(), s.clone()));
    let mut steps = 0usize;
    loop {
        let mut next = HashSet::new();
        for c in level {
            if c.prog.is_empty() {
                finals.entry(c.state).or_insert(steps);
            } else {
                next.extend(step(&c));
            }
        }
        if next.is_empty() {
            return RunResult { finals, truncated: false };
        }
        if steps == b.step_bound {
            return RunResult { finals, truncated: true };
        }
        steps += 1;
        level = next;
    }
}

/// The set of reachable final states and whether some branch was cut.
pub fn run_all(p: &Prog, s: &State, b: &Bounds) -> (BTreeSet<State>, bool) {
    let r = run(p, s, b);
    (r.final_states(), r.truncated)
}

/// Every state over `vars` with values in `0..=domain_max`, in lexicographic
/// order (last variable fastest).
pub fn enumerate_states(vars: &[Var], domain_max: Nat) -> impl Iterator<Item = State> + '_ {
    let total = (domain_max + 1).checked_pow(vars.len() as u32).expect("state space too large");
    (0..total).map(move |mut idx| {
        let mut s = State::new();
        for v in vars.iter().rev() {
            s.set(v, idx % (domain_max + 1));
            idx /= domain_max + 1;
        }
        s
    })
}

/// Something a state can satisfy: an explicit set or an assertion under a
/// quantifier bound.
pub trait StatePredicate {
    fn test(&self, s: &State) -> Eval;
}

impl StatePredicate for BTreeSet<State> {
    fn test(&self, s: &State) -> Eval {
        Eval::exact(self.contains(s))
    }
}

/// An assertion evaluated with a fixed quantifier bound.
pub struct AssertionPredicate<'a> {
    pub assertion: &'a Assertion,
    pub quant_bound: Nat,
}

impl StatePredicate for AssertionPredicate<'_> {
    fn test(&self, s: &State) -> Eval {
        eval_assertion(self.assertion, s, self.quant_bound)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TransformerKind {
    /// Weakest pre-condition: some run ends in the predicate.
    Wpr,
    /// Weakest liberal pre-condition: every run ends in the predicate.
    Wlp,
    /// Strongest post-condition: reachable from some predicate state.
    Sp,
    /// Strongest liberal post-condition: only reachable from predicate states.
    Slp,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TransformerResult {
    pub states: BTreeSet<State>,
    pub truncated: bool,
    /// Some predicate test depended on a bounded quantifier.
    pub inexact: bool,
}

/// One of the four predicate transformers over the space of states on
/// `vars ∪ vars(p)` with values in `0..=domain_max`. Post-transformers
/// range over that space together with every final state reached from it.
pub fn transformer_set(
    kind: TransformerKind,
    p: &Prog,
    pred: &dyn StatePredicate,
    vars: &BTreeSet<Var>,
    b: &Bounds,
) -> TransformerResult {
    let mut all: BTreeSet<Var> = vars.clone();
    all.extend(p.vars());
    let order: Vec<Var> = all.into_iter().collect();
    let mut truncated = false;
    let mut inexact = false;
    let test = |s: &State, inexact: &mut bool| {
        let e = pred.test(s);
        *inexact |= !e.exact;
        e.value
    };
    let mut out = BTreeSet::new();
    match kind {
        TransformerKind::Wpr | TransformerKind::Wlp => {
            for s in enumerate_states(&order, b.domain_max) {
                let r = run(p, &s, b);
                truncated |= r.truncated;
                let mut hits = r.finals.keys().map(|f| test(f, &mut inexact));
                let member = if kind == TransformerKind::Wpr { hits.any(|h| h) } else { hits.all(|h| h) };
                if member {
                    out.insert(s);
                }
            }
        }
        TransformerKind::Sp | TransformerKind::Slp => {
            let mut preds: BTreeMap<State, Vec<bool>> = BTreeMap::new();
            for s in enumerate_states(&order, b.domain_max) {
                let r = run(p, &s, b);
                truncated |= r.truncated;
                let holds = test(&s, &mut inexact);
                preds.entry(s.clone()).or_default();
                for f in r.finals.into_keys() {
                    preds.entry(f).or_default().push(holds);
                }
            }
            for (s, sources) in preds {
                let member = if kind == TransformerKind::Sp {
                    sources.iter().any(|h| *h)
                } else {
                    sources.iter().all(|h| *h)
                };
                if member {
                    out.insert(s);
                }
            }
        }
    }
    TransformerResult { states: out, truncated, inexact }
}

/// The four triple semantics.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Logic {
    /// `wpr(C,Q) ⇒ P`.
    PartialReverse,
    /// `P ⇒ wlp(C,Q)`.
    PartialHoare,
    /// `P ⇒ wpr(C,Q)` with the existential weakest pre-condition.
    TotalHoare,
    /// `Q ⇒ sp(P,C)`.
    Incorrectness,
}

impl std::str::FromStr for Logic {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Ok(match s {
            "partial-reverse" | "prhl" => Logic::PartialReverse,
            "partial-hoare" | "hoare" => Logic::PartialHoare,
            "total-hoare" => Logic::TotalHoare,
            "incorrectness" | "il" => Logic::Incorrectness,
            other => return Err(format!("unknown logic `{other}`")),
        })
    }
}

struct Candidate {
    steps: usize,
    key: (Vec<Nat>, Vec<Nat>),
    witness: Witness,
}

/// Decides a triple by enumerating initial states over
/// `FV(P) ∪ vars(C) ∪ FV(Q)`. Among all violations the one with the shortest
/// execution is reported, ties broken lexicographically.
pub fn check_triple(logic: Logic, pre: &Assertion, prog: &Prog, post: &Assertion, b: &Bounds) -> Verdict {
    let mut vars = pre.free_vars();
    vars.extend(prog.vars());
    vars.extend(post.free_vars());
    let order: Vec<Var> = vars.into_iter().collect();
    let qb = b.quant_bound;
    let mut truncated = false;
    let mut inexact = false;
    let mut best: Option<Candidate> = None;
    let consider = |c: Candidate, best: &mut Option<Candidate>| {
        let better = match best {
            None => true,
            Some(cur) => (c.steps, &c.key) < (cur.steps, &cur.key),
        };
        if better {
            *best = Some(c);
        }
    };
    // sp-based logics need the reverse reachability relation
    let mut reached_from: HashMap<State, Vec<(State, usize)>> = HashMap::new();
    let mut space = Vec::new();
    for s in enumerate_states(&order, b.domain_max) {
        let r = run(prog, &s, b);
        truncated |= r.truncated;
        let p_s = eval_assertion(pre, &s, qb);
        match logic {
            Logic::PartialReverse | Logic::PartialHoare => {
                if p_s.exact && p_s.value == (logic == Logic::PartialReverse) {
                    continue;
                }
                for (f, steps) in &r.finals {
                    let q_f = eval_assertion(post, f, qb);
                    let violated =
                        if logic == Logic::PartialReverse { q_f.and(p_s.not()) } else { p_s.and(q_f.not()) };
                    if !violated.exact {
                        inexact = true;
                    } else if violated.value {
                        let key = (s.key(&order), f.key(&order));
                        let witness = Witness::Pair { vars: order.clone(), initial: s.clone(), final_state: f.clone() };
                        consider(Candidate { steps: *steps, key, witness }, &mut best);
                    }
                }
            }
            Logic::TotalHoare => {
                if !p_s.value && p_s.exact {
                    continue;
                }
                let mut some_q = false;
                let mut exact = p_s.exact;
                for f in r.finals.keys() {
                    let q_f = eval_assertion(post, f, qb);
                    exact &= q_f.exact;
                    if q_f.value && q_f.exact {
                        some_q = true;
                        break;
                    }
                    some_q |= q_f.value;
                }
                if p_s.value && !some_q {
                    if exact && !r.truncated {
                        let key = (s.key(&order), Vec::new());
                        let witness = Witness::State { vars: order.clone(), state: s.clone() };
                        consider(Candidate { steps: 0, key, witness }, &mut best);
                    } else {
                        inexact |= !exact;
                    }
                } else if !exact {
                    inexact = true;
                }
            }
            Logic::Incorrectness => {
                if p_s.value {
                    inexact |= !p_s.exact;
                    for (f, steps) in r.finals {
                        reached_from.entry(f).or_default().push((s.clone(), steps));
                    }
                } else if !p_s.exact {
                    inexact = true;
                }
                space.push(s);
            }
        }
    }
    if logic == Logic::Incorrectness {
        // σ' ⊨ Q must be reachable from some P-state
        let mut targets: BTreeSet<State> = space.into_iter().collect();
        targets.extend(reached_from.keys().cloned());
        for f in targets {
            let q_f = eval_assertion(post, &f, qb);
            if !q_f.value {
                inexact |= !q_f.exact;
                continue;
            }
            if !reached_from.contains_key(&f) {
                if q_f.exact {
                    let key = (f.key(&order), Vec::new());
                    consider(Candidate { steps: 0, key, witness: Witness::State { vars: order.clone(), state: f } }, &mut best);
                } else {
                    inexact = true;
                }
            }
        }
        // a missing predecessor may lie beyond the budget
        if best.is_some() && truncated {
            return Verdict::Unknown(UnknownReason::StepBudgetExhausted);
        }
    }
    if let Some(c) = best {
        return Verdict::Invalid(c.witness);
    }
    if inexact {
        Verdict::Unknown(UnknownReason::QuantifierBounded)
    } else if truncated {
        Verdict::Unknown(UnknownReason::StepBudgetExhausted)
    } else {
        Verdict::Valid
    }
}
