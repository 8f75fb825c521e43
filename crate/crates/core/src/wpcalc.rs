//! Symbolic weakest pre-conditions `wpr(C, Q)`: the assertion satisfied by
//! exactly the states from which some run of `C` terminates in a `Q`-state.
//!
//! Loops have three treatments: the Gödel-β encoding of the whole iteration
//! sequence, the loop's invariant annotation, or a finite guarded unrolling.

use std::collections::BTreeSet;

use thiserror::Error;

use crate::lang::{fresh_var, subst, subst_bool, Assertion, BoolExpr, Expr, Nat, Prog, Var};
use crate::sem::{eval_expr, State};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WpError {
    #[error("loop `{0}` has no invariant annotation")]
    MissingInvariant(String),
    #[error("no encoding found with n + m <= {0}")]
    SearchExhausted(Nat),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum LoopMode {
    /// The exact β-encoded formula.
    #[default]
    Beta,
    /// The loop's `invariant` annotation.
    Invariant,
    /// `U_0 ∨ ... ∨ U_k`, `U_0 = ¬B ∧ Q`, `U_{j+1} = B ∧ wpr(C, U_j)`.
    /// Under-approximates.
    Unroll(usize),
}

impl std::str::FromStr for LoopMode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "beta" => Ok(LoopMode::Beta),
            "invariant" => Ok(LoopMode::Invariant),
            other => match other.strip_prefix("unroll:") {
                Some(k) => k.parse().map(LoopMode::Unroll).map_err(|_| format!("bad unroll depth `{k}`")),
                None => Err(format!("unknown loop mode `{other}` (beta, invariant, unroll:K)")),
            },
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WprRequest {
    pub program: Prog,
    pub post: Assertion,
    pub loop_mode: LoopMode,
}

/// `x = a % (1 + (1 + i) * b)`.
pub fn beta(a: Expr, b: Expr, i: Expr, x: Expr) -> Assertion {
    let modulus = Expr::add(Expr::Const(1), Expr::mul(Expr::add(Expr::Const(1), i), b));
    Assertion::eq(x, Expr::rem(a, modulus))
}

/// Whether `β(n, m, j, x)` holds.
pub fn beta_holds(n: Nat, m: Nat, j: Nat, x: Nat) -> bool {
    let e = beta(Expr::Const(n), Expr::Const(m), Expr::Const(j), Expr::Const(x));
    match e {
        Assertion::Bool(BoolExpr::Eq(l, r)) => eval_expr(&l, &State::new()) == eval_expr(&r, &State::new()),
        _ => unreachable!("beta is an equation"),
    }
}

pub const DEFAULT_SEARCH_CEILING: Nat = 4096;

/// Smallest `(n, m)` in the order (n + m, m) with `β(n, m, j, values[j])`
/// for every `j`.
pub fn encode_sequence(values: &[Nat], ceiling: Nat) -> Result<(Nat, Nat), WpError> {
    for sum in 0..=ceiling {
        for m in 0..=sum {
            let n = sum - m;
            if values.iter().enumerate().all(|(j, v)| beta_holds(n, m, j as Nat, *v)) {
                return Ok((n, m));
            }
        }
    }
    Err(WpError::SearchExhausted(ceiling))
}

/// Reads the sequence of length `len` encoded by `(n, m)`.
pub fn decode_sequence(n: Nat, m: Nat, len: usize) -> Vec<Nat> {
    (0..len as Nat).map(|j| n % (1 + (1 + j) * m)).collect()
}

pub fn wpr_formula(req: &WprRequest) -> Result<Assertion, WpError> {
    let mut avoid = req.post.all_vars();
    avoid.extend(req.program.vars());
    wpr_in(&req.program.normalize(), &req.post, req.loop_mode, &mut avoid)
}

/// Shorthand for [`wpr_formula`].
pub fn wpr(program: &Prog, post: &Assertion, loop_mode: LoopMode) -> Result<Assertion, WpError> {
    wpr_formula(&WprRequest { program: program.clone(), post: post.clone(), loop_mode })
}

fn wpr_in(p: &Prog, q: &Assertion, mode: LoopMode, avoid: &mut BTreeSet<Var>) -> Result<Assertion, WpError> {
    Ok(match p {
        Prog::Empty => q.clone(),
        Prog::Assign(x, e) => subst(q, &[(x.clone(), e.clone())]),
        Prog::Seq(c1, c2) => {
            let mid = wpr_in(c2, q, mode, avoid)?;
            avoid.extend(mid.all_vars());
            wpr_in(c1, &mid, mode, avoid)?
        }
        Prog::Choice(c1, c2) => Assertion::or(wpr_in(c1, q, mode, avoid)?, wpr_in(c2, q, mode, avoid)?),
        Prog::While { cond, invariant, body } => match mode {
            LoopMode::Invariant => invariant.clone().ok_or_else(|| WpError::MissingInvariant(p.to_string()))?,
            LoopMode::Unroll(k) => {
                let mut u = Assertion::and(Assertion::not(Assertion::from_bool(cond)), q.clone());
                let mut disjuncts = vec![u.clone()];
                for _ in 0..k {
                    avoid.extend(u.all_vars());
                    u = Assertion::and(Assertion::from_bool(cond), wpr_in(body, &u, mode, avoid)?);
                    disjuncts.push(u.clone());
                }
                let mut acc = disjuncts.pop().expect("at least U_0");
                while let Some(d) = disjuncts.pop() {
                    acc = Assertion::or(d, acc);
                }
                acc
            }
            LoopMode::Beta => beta_loop(p, cond, body, q, avoid)?,
        },
    })
}

fn fresh(avoid: &mut BTreeSet<Var>, hint: &str) -> Var {
    let v = fresh_var(avoid, hint);
    avoid.insert(v.clone());
    v
}

fn num(n: usize) -> Expr {
    Expr::Const(n as Nat)
}

/// Sequence index of position `j` (1-based) of the block at `base`:
/// `l*base` for the first, `l*(base+1)-1` for the last, `l*base+(j-1)` otherwise.
fn block_index(l: usize, base: Expr, j: usize) -> Expr {
    if j == 1 {
        Expr::mul(num(l), base)
    } else if j == l {
        Expr::sub(Expr::mul(num(l), Expr::add(base, Expr::Const(1))), Expr::Const(1))
    } else {
        Expr::add(Expr::mul(num(l), base), num(j - 1))
    }
}

fn renaming(xs: &[Var], ys: &[Var]) -> Vec<(Var, Expr)> {
    xs.iter().cloned().zip(ys.iter().map(|y| Expr::Var(y.clone()))).collect()
}

fn beta_loop(
    whole: &Prog,
    cond: &BoolExpr,
    body: &Prog,
    q: &Assertion,
    avoid: &mut BTreeSet<Var>,
) -> Result<Assertion, WpError> {
    let mut tuple: BTreeSet<Var> = q.free_vars();
    tuple.extend(whole.vars());
    let xs: Vec<Var> = tuple.into_iter().collect();
    let l = xs.len();
    avoid.extend(xs.iter().cloned());
    avoid.extend(q.all_vars());

    let k = fresh(avoid, "k");
    let m = fresh(avoid, "m");
    let n = fresh(avoid, "n");
    let i = fresh(avoid, "i");
    let ys: Vec<Var> = (1..=l).map(|j| fresh(avoid, &if l == 1 { "y".to_string() } else { format!("y{j}") })).collect();
    let y1s: Vec<Var> = ys.iter().map(|y| fresh(avoid, y)).collect();
    let y2s: Vec<Var> = y1s.iter().map(|y| fresh(avoid, y)).collect();
    let y3s: Vec<Var> = y2s.iter().map(|y| fresh(avoid, y)).collect();

    let ev = |v: &Var| Expr::Var(v.clone());
    let b = |idx: Expr, target: Expr| beta(ev(&n), ev(&m), idx, target);

    let f = Assertion::conj(xs.iter().enumerate().map(|(j, x)| b(num(j), ev(x))));

    let y_block = Assertion::conj((1..=l).map(|j| b(block_index(l, ev(&i), j), ev(&ys[j - 1]))));
    let y1_block = Assertion::conj(
        (1..=l).map(|j| b(block_index(l, Expr::add(ev(&i), Expr::Const(1)), j), ev(&y1s[j - 1]))),
    );
    let guard_at_y = Assertion::from_bool(&subst_bool(cond, &renaming(&xs, &ys)));
    let reach_post = Assertion::conj(xs.iter().zip(&y1s).map(|(x, y)| Assertion::eq(ev(x), ev(y))));
    avoid.extend(reach_post.all_vars());
    let body_wpr = wpr_in(body, &reach_post, LoopMode::Beta, avoid)?;
    let came_from = Assertion::conj(xs.iter().zip(&ys).map(|(x, y)| Assertion::eq(ev(x), ev(y))));
    let step = subst(&Assertion::implies(body_wpr, came_from), &renaming(&xs, &y2s));
    let in_range = Assertion::and(Assertion::le(Expr::Const(0), ev(&i)), Assertion::lt(ev(&i), ev(&k)));
    let s = Assertion::implies(
        Assertion::lt(Expr::Const(0), ev(&k)),
        Assertion::forall(
            i.clone(),
            Assertion::implies(
                in_range,
                Assertion::implies(Assertion::and(y_block, y1_block), Assertion::and(guard_at_y, step)),
            ),
        ),
    );

    let exit_block = Assertion::conj((1..=l).map(|j| b(block_index(l, ev(&k), j), ev(&y3s[j - 1]))));
    let at_exit = renaming(&xs, &y3s);
    let t = Assertion::implies(
        exit_block,
        Assertion::and(
            Assertion::not(Assertion::from_bool(&subst_bool(cond, &at_exit))),
            subst(q, &at_exit),
        ),
    );

    let mut out = Assertion::and(f, Assertion::and(s, t));
    for v in ys.iter().chain(&y1s).chain(&y2s).chain(&y3s).rev() {
        out = Assertion::forall(v.clone(), out);
    }
    for v in [&n, &m, &k] {
        out = Assertion::exists(v.clone(), out);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lang::{parse_assertion, parse_program, print_assertion};

    #[test]
    fn loop_free_cases() {
        let q = parse_assertion("x = 1").unwrap();
        assert_eq!(wpr(&Prog::Empty, &q, LoopMode::Beta).unwrap(), q);
        let p = parse_program("x := x + 2").unwrap();
        assert_eq!(print_assertion(&wpr(&p, &q, LoopMode::Beta).unwrap()), "x + 2 = 1");
        let p = parse_program("(x := 1 + skip)").unwrap();
        assert_eq!(print_assertion(&wpr(&p, &q, LoopMode::Beta).unwrap()), "1 = 1 || x = 1");
        let p = parse_program("x := x + 1; x := x * 2").unwrap();
        let q = parse_assertion("x = 6").unwrap();
        assert_eq!(print_assertion(&wpr(&p, &q, LoopMode::Beta).unwrap()), "(x + 1) * 2 = 6");
    }

    #[test]
    fn encodings() {
        assert_eq!(encode_sequence(&[1, 0], DEFAULT_SEARCH_CEILING), Ok((3, 1)));
        assert_eq!(encode_sequence(&[0], DEFAULT_SEARCH_CEILING), Ok((0, 0)));
        assert_eq!(encode_sequence(&[0, 1], DEFAULT_SEARCH_CEILING), Ok((4, 1)));
        let (n, m) = encode_sequence(&[2, 2, 2], DEFAULT_SEARCH_CEILING).unwrap();
        assert_eq!(decode_sequence(n, m, 3), vec![2, 2, 2]);
        assert_eq!(encode_sequence(&[5, 0, 5], 3), Err(WpError::SearchExhausted(3)));
        assert!(beta_holds(7, 1, 0, 1));
    }

    #[test]
    fn loop_modes() {
        let p = parse_program("while x < 3 invariant x <= 3 do { x := x + 1 }").unwrap();
        let q = parse_assertion("x = 3").unwrap();
        assert_eq!(print_assertion(&wpr(&p, &q, LoopMode::Invariant).unwrap()), "x <= 3");
        let bare = parse_program("while x < 3 do { x := x + 1 }").unwrap();
        assert!(matches!(wpr(&bare, &q, LoopMode::Invariant), Err(WpError::MissingInvariant(_))));
        let u = wpr(&bare, &q, LoopMode::Unroll(1)).unwrap();
        assert_eq!(print_assertion(&u), "!(x < 3) && x = 3 || x < 3 && (!(x + 1 < 3) && x + 1 = 3)");
        let b = wpr(&bare, &q, LoopMode::Beta).unwrap();
        let text = print_assertion(&b);
        assert!(text.starts_with("exists k. exists m. exists n. forall y. forall y_p1. forall y_p2. forall y_p3."), "{text}");
        assert_eq!(b.free_vars(), ["x".to_string()].into());
    }
}
