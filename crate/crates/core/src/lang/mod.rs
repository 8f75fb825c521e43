//! Abstract syntax, concrete syntax, substitution and variable analysis for
//! the While language and its assertions.

mod ast;
mod parse;
mod print;
mod subst;

use thiserror::Error;

pub use ast::{Assertion, BinOp, BoolExpr, Expr, Nat, Prog, Triple, Var};
pub use parse::{parse_assertion, parse_bool, parse_expr, parse_program, parse_triple};
pub use print::{
    print_assertion, print_assertion_with, print_bool, print_bool_with, print_expr, print_expr_with, print_program,
    print_program_with, NameStyle,
};
pub use subst::{
    decompose_head, fresh_var, rename_bound_apart, split_primes, subst, subst1, subst_bool, subst_expr, Bindings,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LangError {
    #[error("syntax error at line {line}, column {col}: {msg}")]
    Syntax { line: usize, col: usize, msg: String },
    #[error("line {line}, column {col}: `{name}` is not a built-in function (only + - * / % are available)")]
    UnknownFunction { name: String, line: usize, col: usize },
    #[error("cannot split the empty program into a head and a tail")]
    EmptyProgram,
}
