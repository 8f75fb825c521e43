//! Bounded evaluation of assertions and the entailment oracle used for
//! consequence side conditions.
//!
//! Quantifiers range over `0..=quant_bound`. Every result carries an
//! `exact` flag: it is set when the bounded answer provably coincides with the
//! answer over all naturals. That happens when a witness (for `∃`) or a
//! counterexample (for `∀`) was found, or when the body is quantifier-free,
//! the bound variable occurs only under `+` and `*`, and the bound lies past
//! the last point where any atom can change its truth value.

use std::collections::BTreeSet;

use crate::lang::{Assertion, BinOp, BoolExpr, Expr, Nat, Var};
use crate::sem::{enumerate_states, eval_bool, eval_expr, Bounds, State, UnknownReason, Verdict, Witness};

/// Upper limit on atom evaluations for one assertion, or for all the states
/// of one entailment query. Past it, evaluation reports a bounded result.
pub const EVAL_BUDGET: u64 = 4_000_000;

/// A truth value and whether it is certain beyond the quantifier bound.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Eval {
    pub value: bool,
    pub exact: bool,
}

impl Eval {
    pub fn exact(value: bool) -> Self {
        Eval { value, exact: true }
    }

    pub fn bounded(value: bool) -> Self {
        Eval { value, exact: false }
    }

    pub fn not(self) -> Self {
        Eval { value: !self.value, exact: self.exact }
    }

    pub fn and(self, other: Eval) -> Self {
        let value = self.value && other.value;
        // a certain `false` on either side settles the conjunction
        let exact = (self.exact && other.exact) || (self.exact && !self.value) || (other.exact && !other.value);
        Eval { value, exact }
    }

    pub fn or(self, other: Eval) -> Self {
        self.not().and(other.not()).not()
    }

    pub fn implies(self, other: Eval) -> Self {
        self.not().or(other)
    }
}

struct Evaluator {
    quant_bound: Nat,
    work: u64,
}

impl Evaluator {
    fn eval(&mut self, a: &Assertion, s: &mut State) -> Eval {
        if self.work > EVAL_BUDGET {
            return Eval::bounded(false);
        }
        match a {
            Assertion::Bool(b) => {
                self.work += 1;
                Eval::exact(eval_bool(b, s))
            }
            Assertion::Not(x) => self.eval(x, s).not(),
            Assertion::And(l, r) => {
                let l = self.eval(l, s);
                if l.exact && !l.value {
                    return l;
                }
                l.and(self.eval(r, s))
            }
            Assertion::Or(l, r) => {
                let l = self.eval(l, s);
                if l.exact && l.value {
                    return l;
                }
                l.or(self.eval(r, s))
            }
            Assertion::Implies(l, r) => {
                let l = self.eval(l, s);
                if l.exact && !l.value {
                    return Eval::exact(true);
                }
                l.implies(self.eval(r, s))
            }
            Assertion::Exists(v, body) => self.quantifier(v, body, s, true),
            Assertion::Forall(v, body) => self.quantifier(v, body, s, false),
        }
    }

    /// `∃` looks for a body value of `true`; `∀` for `false`.
    fn quantifier(&mut self, v: &Var, body: &Assertion, s: &mut State, exists: bool) -> Eval {
        let saved = s.get(v);
        let decisive = exists;
        let mut found_uncertain = false;
        let mut all_exact = true;
        let mut result = None;
        for c in 0..=self.quant_bound {
            s.set(v, c);
            let e = self.eval(body, s);
            if e.value == decisive {
                if e.exact {
                    result = Some(Eval::exact(decisive));
                    break;
                }
                found_uncertain = true;
            }
            all_exact &= e.exact;
        }
        let out = match result {
            Some(r) => r,
            None if found_uncertain => Eval::bounded(decisive),
            None => {
                let stable = all_exact && stabilizes_by(body, v, s, self.quant_bound);
                Eval { value: !decisive, exact: stable }
            }
        };
        s.set(v, saved);
        out
    }
}

/// Three-valued evaluation of an assertion in a state.
pub fn eval_assertion(a: &Assertion, s: &State, quant_bound: Nat) -> Eval {
    let mut ev = Evaluator { quant_bound, work: 0 };
    let mut scratch = s.clone();
    ev.eval(a, &mut scratch)
}

/// `s ⊨ a` with quantifiers ranging over `0..=quant_bound`.
pub fn assert_holds(s: &State, a: &Assertion, quant_bound: Nat) -> bool {
    eval_assertion(a, s, quant_bound).value
}

type Poly = Vec<i128>;

fn poly_add(a: &Poly, b: &Poly) -> Option<Poly> {
    let n = a.len().max(b.len());
    (0..n)
        .map(|i| a.get(i).copied().unwrap_or(0).checked_add(b.get(i).copied().unwrap_or(0)))
        .collect()
}

fn poly_mul(a: &Poly, b: &Poly) -> Option<Poly> {
    if a.is_empty() || b.is_empty() {
        return Some(Vec::new());
    }
    let mut out = vec![0i128; a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] = out[i + j].checked_add(x.checked_mul(*y)?)?;
        }
    }
    Some(out)
}

/// The expression as a polynomial in `v`, all other variables fixed by `s`.
/// `None` when `v` occurs under `-`, `/` or `%`, or on overflow.
fn as_poly(e: &Expr, v: &str, s: &State) -> Option<Poly> {
    if !e.mentions(v) {
        return Some(vec![i128::from(eval_expr(e, s))]);
    }
    match e {
        Expr::Var(_) => Some(vec![0, 1]),
        Expr::Const(_) => unreachable!("constants do not mention variables"),
        Expr::Bin(BinOp::Add, l, r) => poly_add(&as_poly(l, v, s)?, &as_poly(r, v, s)?),
        Expr::Bin(BinOp::Mul, l, r) => poly_mul(&as_poly(l, v, s)?, &as_poly(r, v, s)?),
        Expr::Bin(..) => None,
    }
}

/// Past this value of `v` the sign of `d(v)` never changes (Cauchy's bound on
/// the real roots).
fn root_bound(d: &Poly) -> Option<u128> {
    let mut d = d.clone();
    while d.last() == Some(&0) {
        d.pop();
    }
    if d.len() <= 1 {
        return Some(0);
    }
    let lead = d.last()?.unsigned_abs();
    let max = d[..d.len() - 1].iter().map(|c| c.unsigned_abs()).max().unwrap_or(0);
    Some(1 + max.div_ceil(lead))
}

fn atoms<'a>(b: &'a BoolExpr, out: &mut Vec<(&'a Expr, &'a Expr)>) {
    match b {
        BoolExpr::Eq(l, r) | BoolExpr::Le(l, r) => out.push((l, r)),
        BoolExpr::Not(x) => atoms(x, out),
        BoolExpr::And(l, r) | BoolExpr::Or(l, r) => {
            atoms(l, out);
            atoms(r, out);
        }
    }
}

fn qf_atoms<'a>(a: &'a Assertion, out: &mut Vec<(&'a Expr, &'a Expr)>) -> bool {
    match a {
        Assertion::Bool(b) => {
            atoms(b, out);
            true
        }
        Assertion::Not(x) => qf_atoms(x, out),
        Assertion::And(l, r) | Assertion::Or(l, r) | Assertion::Implies(l, r) => qf_atoms(l, out) && qf_atoms(r, out),
        Assertion::Exists(..) | Assertion::Forall(..) => false,
    }
}

/// True when the body's truth value is constant for every `v > quant_bound`.
fn stabilizes_by(body: &Assertion, v: &str, s: &State, quant_bound: Nat) -> bool {
    let mut ats = Vec::new();
    if !qf_atoms(body, &mut ats) {
        return false;
    }
    for (l, r) in ats {
        let (Some(pl), Some(pr)) = (as_poly(l, v, s), as_poly(r, v, s)) else {
            return false;
        };
        let neg: Poly = pr.iter().map(|c| -c).collect();
        let Some(d) = poly_add(&pl, &neg) else {
            return false;
        };
        match root_bound(&d) {
            Some(t) if u128::from(quant_bound) >= t => {}
            _ => return false,
        }
    }
    true
}

/// `lhs ⊨ rhs` over the states on `relevant_vars`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EntailmentQuery {
    pub lhs: Assertion,
    pub rhs: Assertion,
    pub relevant_vars: BTreeSet<Var>,
    pub bounds: Bounds,
}

impl EntailmentQuery {
    /// Relevant variables default to the free variables of both sides.
    pub fn new(lhs: Assertion, rhs: Assertion, bounds: Bounds) -> Self {
        let mut relevant_vars = lhs.free_vars();
        relevant_vars.extend(rhs.free_vars());
        EntailmentQuery { lhs, rhs, relevant_vars, bounds }
    }
}

/// Decides entailments. The bounded implementation enumerates states; an
/// external solver can stand in through this trait.
pub trait EntailmentOracle {
    fn decide(&self, q: &EntailmentQuery) -> Verdict;
}

/// Exhaustive enumeration over `0..=domain_max`.
#[derive(Debug, Clone, Copy, Default)]
pub struct BoundedOracle;

impl EntailmentOracle for BoundedOracle {
    fn decide(&self, q: &EntailmentQuery) -> Verdict {
        entails(q)
    }
}

/// Enumerates states in lexicographic order; the first state where `lhs`
/// holds and `rhs` fails is the witness. Entailments that hold syntactically
/// (`A ⊨ A`, `A ⊨ true`, `false ⊨ A`) are answered without enumeration.
pub fn entails(q: &EntailmentQuery) -> Verdict {
    if q.lhs.alpha_eq(&q.rhs) || q.rhs.alpha_eq(&Assertion::tt()) || q.lhs.alpha_eq(&Assertion::ff()) {
        return Verdict::Valid;
    }
    let mut vars = q.relevant_vars.clone();
    vars.extend(q.lhs.free_vars());
    vars.extend(q.rhs.free_vars());
    let order: Vec<Var> = vars.into_iter().collect();
    let qb = q.bounds.quant_bound;
    let mut inexact = false;
    // one budget for the whole query
    let mut ev = Evaluator { quant_bound: qb, work: 0 };
    for s in enumerate_states(&order, q.bounds.domain_max) {
        let mut scratch = s.clone();
        let l = ev.eval(&q.lhs, &mut scratch);
        if l.exact && !l.value {
            continue;
        }
        let violated = l.and(ev.eval(&q.rhs, &mut scratch).not());
        if !violated.exact {
            inexact = true;
        } else if violated.value {
            return Verdict::Invalid(Witness::State { vars: order.clone(), state: s });
        }
    }
    if inexact {
        Verdict::Unknown(UnknownReason::QuantifierBounded)
    } else {
        Verdict::Valid
    }
}

/// `⊨ a`.
pub fn models_tautology(a: &Assertion, vars: &BTreeSet<Var>, bounds: &Bounds) -> Verdict {
    entails(&EntailmentQuery { lhs: Assertion::tt(), rhs: a.clone(), relevant_vars: vars.clone(), bounds: *bounds })
}
