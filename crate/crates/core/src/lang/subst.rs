use std::collections::BTreeSet;

use super::ast::{Assertion, BoolExpr, Expr, Prog, Var};

/// Returns `hint` when it is not in `avoid`, otherwise the smallest `base_pK`
/// (printed `base` followed by K primes) outside `avoid`, where `base` is the
/// hint with any existing `_pN` suffix stripped.
pub fn fresh_var(avoid: &BTreeSet<Var>, hint: &str) -> Var {
    if !avoid.contains(hint) {
        return hint.to_string();
    }
    let base = strip_prime_suffix(hint);
    (1..)
        .map(|k| format!("{base}_p{k}"))
        .find(|cand| !avoid.contains(cand))
        .expect("unbounded candidate stream")
}

/// `x_p3` → (`x`, 3); names without a suffix yield 0.
pub fn split_primes(name: &str) -> (&str, usize) {
    if let Some(pos) = name.rfind("_p") {
        let digits = &name[pos + 2..];
        if !digits.is_empty() && digits.bytes().all(|b| b.is_ascii_digit()) && !digits.starts_with('0') {
            if let Ok(n) = digits.parse() {
                return (&name[..pos], n);
            }
        }
    }
    (name, 0)
}

fn strip_prime_suffix(name: &str) -> &str {
    split_primes(name).0
}

/// A simultaneous substitution `[x1 := E1, ..., xn := En]`.
pub type Bindings = [(Var, Expr)];

pub fn subst_expr(e: &Expr, bindings: &Bindings) -> Expr {
    match e {
        Expr::Var(v) => bindings
            .iter()
            .find(|(x, _)| x == v)
            .map(|(_, rep)| rep.clone())
            .unwrap_or_else(|| e.clone()),
        Expr::Const(_) => e.clone(),
        Expr::Bin(op, l, r) => Expr::bin(*op, subst_expr(l, bindings), subst_expr(r, bindings)),
    }
}

pub fn subst_bool(b: &BoolExpr, bindings: &Bindings) -> BoolExpr {
    match b {
        BoolExpr::Eq(l, r) => BoolExpr::Eq(subst_expr(l, bindings), subst_expr(r, bindings)),
        BoolExpr::Le(l, r) => BoolExpr::Le(subst_expr(l, bindings), subst_expr(r, bindings)),
        BoolExpr::Not(x) => BoolExpr::not(subst_bool(x, bindings)),
        BoolExpr::And(l, r) => BoolExpr::and(subst_bool(l, bindings), subst_bool(r, bindings)),
        BoolExpr::Or(l, r) => BoolExpr::or(subst_bool(l, bindings), subst_bool(r, bindings)),
    }
}

/// Capture-avoiding simultaneous substitution. A binder is renamed only when it
/// would capture a variable of some live replacement expression.
pub fn subst(a: &Assertion, bindings: &Bindings) -> Assertion {
    let fv = a.free_vars();
    let live: Vec<(Var, Expr)> = bindings.iter().filter(|(x, _)| fv.contains(x)).cloned().collect();
    if live.is_empty() {
        return a.clone();
    }
    match a {
        Assertion::Bool(b) => Assertion::Bool(subst_bool(b, &live)),
        Assertion::Not(x) => Assertion::not(subst(x, &live)),
        Assertion::And(l, r) => Assertion::and(subst(l, &live), subst(r, &live)),
        Assertion::Or(l, r) => Assertion::or(subst(l, &live), subst(r, &live)),
        Assertion::Implies(l, r) => Assertion::implies(subst(l, &live), subst(r, &live)),
        Assertion::Exists(v, body) => {
            let (v2, body2) = subst_binder(v, body, &live);
            Assertion::Exists(v2, Box::new(body2))
        }
        Assertion::Forall(v, body) => {
            let (v2, body2) = subst_binder(v, body, &live);
            Assertion::Forall(v2, Box::new(body2))
        }
    }
}

fn subst_binder(v: &Var, body: &Assertion, live: &Bindings) -> (Var, Assertion) {
    let live: Vec<(Var, Expr)> = live.iter().filter(|(x, _)| x != v).cloned().collect();
    if live.is_empty() {
        return (v.clone(), body.clone());
    }
    let captures = live.iter().any(|(_, e)| e.mentions(v));
    if !captures {
        return (v.clone(), subst(body, &live));
    }
    let mut avoid = body.all_vars();
    for (x, e) in &live {
        avoid.insert(x.clone());
        e.collect_vars(&mut avoid);
    }
    let v2 = fresh_var(&avoid, v);
    let mut extended = live.clone();
    extended.push((v.clone(), Expr::Var(v2.clone())));
    (v2, subst(body, &extended))
}

/// Single-variable convenience wrapper.
pub fn subst1(a: &Assertion, x: &str, e: &Expr) -> Assertion {
    subst(a, &[(x.to_string(), e.clone())])
}

/// Renames every bound variable apart from each other and from the free
/// variables of `a` and `extra`. Deterministic: each binder takes
/// `fresh_var(used, original)`.
pub fn rename_bound_apart(a: &Assertion, extra: &BTreeSet<Var>) -> Assertion {
    let mut used = a.free_vars();
    used.extend(extra.iter().cloned());
    rename_walk(a, &mut used, &mut Vec::new())
}

fn rename_walk(a: &Assertion, used: &mut BTreeSet<Var>, env: &mut Vec<(Var, Var)>) -> Assertion {
    match a {
        Assertion::Bool(b) => Assertion::Bool(subst_bool(b, &dedup_env(env))),
        Assertion::Not(x) => Assertion::not(rename_walk(x, used, env)),
        Assertion::And(l, r) => {
            let l = rename_walk(l, used, env);
            Assertion::and(l, rename_walk(r, used, env))
        }
        Assertion::Or(l, r) => {
            let l = rename_walk(l, used, env);
            Assertion::or(l, rename_walk(r, used, env))
        }
        Assertion::Implies(l, r) => {
            let l = rename_walk(l, used, env);
            Assertion::implies(l, rename_walk(r, used, env))
        }
        Assertion::Exists(v, body) | Assertion::Forall(v, body) => {
            let nv = fresh_var(used, v);
            used.insert(nv.clone());
            env.push((v.clone(), nv.clone()));
            let body = rename_walk(body, used, env);
            env.pop();
            if matches!(a, Assertion::Exists(..)) {
                Assertion::Exists(nv, Box::new(body))
            } else {
                Assertion::Forall(nv, Box::new(body))
            }
        }
    }
}

// innermost binding of each name wins
fn dedup_env(env: &[(Var, Var)]) -> Vec<(Var, Expr)> {
    let mut out: Vec<(Var, Expr)> = Vec::new();
    for (from, to) in env.iter().rev() {
        if !out.iter().any(|(f, _)| f == from) {
            out.push((from.clone(), Expr::Var(to.clone())));
        }
    }
    out
}

/// Splits a non-empty program into its first command and the rest.
pub fn decompose_head(p: &Prog) -> Result<(Prog, Prog), super::LangError> {
    let mut items = p.normalize().items();
    if items.is_empty() {
        return Err(super::LangError::EmptyProgram);
    }
    let head = items.remove(0);
    Ok((head, Prog::from_items(items)))
}
