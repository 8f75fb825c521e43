use std::fmt::{self, Write};

use super::ast::{Assertion, BinOp, BoolExpr, Expr, Prog, Triple};
use super::subst::split_primes;

/// Fresh names are kept in ASCII (`x_p2`) for serialization and rendered with
/// primes (`x''`) for people.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NameStyle {
    Ascii,
    Primes,
}

fn name(out: &mut String, v: &str, style: NameStyle) {
    match style {
        NameStyle::Ascii => out.push_str(v),
        NameStyle::Primes => {
            let (base, n) = split_primes(v);
            out.push_str(base);
            for _ in 0..n {
                out.push('\'');
            }
        }
    }
}

fn prec(op: BinOp) -> u8 {
    match op {
        BinOp::Add | BinOp::Sub => 1,
        BinOp::Mul | BinOp::Div | BinOp::Mod => 2,
    }
}

fn expr(out: &mut String, e: &Expr, min: u8, style: NameStyle) {
    match e {
        Expr::Var(v) => name(out, v, style),
        Expr::Const(n) => {
            let _ = write!(out, "{n}");
        }
        Expr::Bin(op, l, r) => {
            let p = prec(*op);
            let paren = p < min;
            if paren {
                out.push('(');
            }
            expr(out, l, p, style);
            let _ = write!(out, " {} ", op.symbol());
            // left associative: an equal-precedence right operand needs parentheses
            expr(out, r, p + 1, style);
            if paren {
                out.push(')');
            }
        }
    }
}

// Shared precedence levels for boolean conditions and assertions.
const IMP: u8 = 1;
const OR: u8 = 2;
const AND: u8 = 3;
const NOT: u8 = 4;

fn is_true(b: &BoolExpr) -> bool {
    matches!(b, BoolExpr::Eq(Expr::Const(0), Expr::Const(0)))
}

fn boolean(out: &mut String, b: &BoolExpr, min: u8, style: NameStyle) {
    match b {
        _ if is_true(b) => out.push_str("true"),
        BoolExpr::Eq(l, r) => cmp(out, l, "=", r, style),
        BoolExpr::Le(l, r) => cmp(out, l, "<=", r, style),
        BoolExpr::Not(inner) => match inner.as_ref() {
            x if is_true(x) => out.push_str("false"),
            BoolExpr::Eq(l, r) => cmp(out, l, "!=", r, style),
            BoolExpr::Le(l, r) => cmp(out, r, "<", l, style),
            other => {
                out.push('!');
                if matches!(other, BoolExpr::Not(_)) {
                    out.push('(');
                    boolean(out, other, 0, style);
                    out.push(')');
                } else {
                    boolean(out, other, NOT + 1, style);
                }
            }
        },
        BoolExpr::And(l, r) => binary(out, min, AND, " && ", style, |o, m| boolean(o, l, m, style), |o, m| boolean(o, r, m, style)),
        BoolExpr::Or(l, r) => binary(out, min, OR, " || ", style, |o, m| boolean(o, l, m, style), |o, m| boolean(o, r, m, style)),
    }
}

fn cmp(out: &mut String, l: &Expr, op: &str, r: &Expr, style: NameStyle) {
    expr(out, l, 0, style);
    let _ = write!(out, " {op} ");
    expr(out, r, 0, style);
}

fn binary(
    out: &mut String,
    min: u8,
    level: u8,
    sep: &str,
    _style: NameStyle,
    left: impl FnOnce(&mut String, u8),
    right: impl FnOnce(&mut String, u8),
) {
    let paren = level < min;
    if paren {
        out.push('(');
    }
    // && and || are printed left-nested; -> is right-nested
    let (lmin, rmin) = if level == IMP { (level + 1, level) } else { (level, level + 1) };
    left(out, lmin);
    out.push_str(sep);
    right(out, rmin);
    if paren {
        out.push(')');
    }
}

fn assertion(out: &mut String, a: &Assertion, min: u8, style: NameStyle) {
    match a {
        Assertion::Bool(b) => boolean(out, b, min, style),
        Assertion::Not(inner) => match inner.as_ref() {
            Assertion::Bool(b) if is_true(b) => out.push_str("false"),
            Assertion::Bool(BoolExpr::Eq(l, r)) => cmp(out, l, "!=", r, style),
            Assertion::Bool(BoolExpr::Le(l, r)) => cmp(out, r, "<", l, style),
            other => {
                out.push('!');
                if matches!(other, Assertion::Not(_)) {
                    out.push('(');
                    assertion(out, other, 0, style);
                    out.push(')');
                } else {
                    assertion(out, other, NOT + 1, style);
                }
            }
        },
        Assertion::And(l, r) => binary(out, min, AND, " && ", style, |o, m| assertion(o, l, m, style), |o, m| assertion(o, r, m, style)),
        Assertion::Or(l, r) => binary(out, min, OR, " || ", style, |o, m| assertion(o, l, m, style), |o, m| assertion(o, r, m, style)),
        Assertion::Implies(l, r) => binary(out, min, IMP, " -> ", style, |o, m| assertion(o, l, m, style), |o, m| assertion(o, r, m, style)),
        Assertion::Exists(v, body) | Assertion::Forall(v, body) => {
            let paren = min > 0;
            if paren {
                out.push('(');
            }
            out.push_str(if matches!(a, Assertion::Exists(..)) { "exists " } else { "forall " });
            name(out, v, style);
            out.push_str(". ");
            assertion(out, body, 0, style);
            if paren {
                out.push(')');
            }
        }
    }
}

fn prog(out: &mut String, p: &Prog, style: NameStyle) {
    match p {
        Prog::Empty => out.push_str("skip"),
        Prog::Assign(x, e) => {
            name(out, x, style);
            out.push_str(" := ");
            expr(out, e, 0, style);
        }
        Prog::Seq(a, b) => {
            prog(out, a, style);
            out.push_str("; ");
            prog(out, b, style);
        }
        Prog::Choice(a, b) => {
            choice_operand(out, a, style);
            out.push_str(" + ");
            choice_operand(out, b, style);
        }
        Prog::While { cond, invariant, body } => {
            out.push_str("while ");
            boolean(out, cond, 0, style);
            if let Some(inv) = invariant {
                out.push_str(" invariant ");
                // a quantifier would otherwise swallow the `do`
                assertion(out, inv, 1, style);
            }
            out.push_str(" do { ");
            prog(out, body, style);
            out.push_str(" }");
        }
    }
}

fn choice_operand(out: &mut String, p: &Prog, style: NameStyle) {
    if matches!(p, Prog::Seq(..) | Prog::Choice(..)) {
        out.push('(');
        prog(out, p, style);
        out.push(')');
    } else {
        prog(out, p, style);
    }
}

pub fn print_expr_with(e: &Expr, style: NameStyle) -> String {
    let mut s = String::new();
    expr(&mut s, e, 0, style);
    s
}

pub fn print_bool_with(b: &BoolExpr, style: NameStyle) -> String {
    let mut s = String::new();
    boolean(&mut s, b, 0, style);
    s
}

pub fn print_assertion_with(a: &Assertion, style: NameStyle) -> String {
    let mut s = String::new();
    assertion(&mut s, a, 0, style);
    s
}

pub fn print_program_with(p: &Prog, style: NameStyle) -> String {
    let mut s = String::new();
    prog(&mut s, p, style);
    s
}

/// Concrete syntax with ASCII fresh names; parses back to the same tree.
pub fn print_expr(e: &Expr) -> String {
    print_expr_with(e, NameStyle::Ascii)
}

pub fn print_bool(b: &BoolExpr) -> String {
    print_bool_with(b, NameStyle::Ascii)
}

pub fn print_assertion(a: &Assertion) -> String {
    print_assertion_with(a, NameStyle::Ascii)
}

pub fn print_program(p: &Prog) -> String {
    print_program_with(p, NameStyle::Ascii)
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&print_expr_with(self, NameStyle::Primes))
    }
}

impl fmt::Display for BoolExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&print_bool_with(self, NameStyle::Primes))
    }
}

impl fmt::Display for Assertion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&print_assertion_with(self, NameStyle::Primes))
    }
}

impl fmt::Display for Prog {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&print_program_with(self, NameStyle::Primes))
    }
}

impl fmt::Display for Triple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{}}} {} {{{}}}", self.pre, self.prog, self.post)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lang::{parse_assertion, parse_program};

    #[test]
    fn renders_sugar() {
        let a = parse_assertion("x > 0 && i >= 5").unwrap();
        assert_eq!(print_assertion(&a), "0 < x && 5 <= i");
        let a = parse_assertion("!(i < 5) -> true").unwrap();
        assert_eq!(print_assertion(&a), "!(i < 5) -> true");
        assert_eq!(print_assertion(&Assertion::ff()), "false");
        let a = parse_assertion("x - (y - z) = (x - y) - z").unwrap();
        assert_eq!(print_assertion(&a), "x - (y - z) = x - y - z");
    }

    #[test]
    fn renders_programs() {
        let p = parse_program("(x:=1; y:=2) + skip; while i<5 {i:=i+1}").unwrap();
        assert_eq!(print_program(&p), "(x := 1; y := 2) + skip; while i < 5 do { i := i + 1 }");
        assert_eq!(parse_program(&print_program(&p)).unwrap(), p);
    }

    #[test]
    fn primes_in_display() {
        let a = parse_assertion("x_p2 = x'").unwrap();
        assert_eq!(a.to_string(), "x'' = x'");
        assert_eq!(print_assertion(&a), "x_p2 = x_p1");
    }
}
