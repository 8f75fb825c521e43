//! Checker, prover and bounded semantic oracle for partial reverse Hoare logic
//! (partial incorrectness logic) over a small While language with
//! nondeterministic choice.
//!
//! A triple `{P} C {Q}` is valid when every state from which `C` can terminate
//! in a `Q`-state satisfies `P`. The crate covers:
//!
//! - [`lang`]: syntax trees, parser, printer, capture-avoiding substitution.
//! - [`sem`]: small-step semantics, bounded execution, predicate transformers,
//!   triple validity for four logics.
//! - [`assertsem`]: bounded assertion evaluation and entailment.
//! - [`wpcalc`]: symbolic weakest pre-conditions, including the β-encoded loop case.
//! - [`proofir`]: proof certificates for the ordinary and cyclic systems.
//! - [`checker`]: certificate checking, including the global soundness condition.
//! - [`prover`]: proof construction and the ordinary-to-cyclic transformation.
//! - [`cli`]: the `prhl` command-line tool.
//!
//! The runnable programs under `examples/` walk through each capability:
//!
//! | example | shows |
//! |---|---|
//! | `run_program` | executing a program and listing final states |
//! | `check_triple` | validity of a triple in four logics |
//! | `entailment` | bounded entailment and tautology checks |
//! | `predicate_transformers` | wpr / wlp / sp / slp over an enumerated state space |
//! | `wp_formula` | symbolic weakest pre-conditions |
//! | `beta_encoding` | sequence encoding with the β predicate |
//! | `prove_and_check` | building an ordinary proof and re-checking it |
//! | `cyclic_transform` | turning an ordinary proof into a cyclic one |
//! | `refute_cyclic_example` | rejecting a flawed cyclic certificate |
//! | `certificate_roundtrip` | JSON certificates |
//!
//! ```
//! use prhl::lang::{parse_assertion, parse_program};
//! use prhl::sem::{check_triple, Bounds, Logic, Verdict};
//!
//! let pre = parse_assertion("x >= 1").unwrap();
//! let prog = parse_program("x := x + 1").unwrap();
//! let post = parse_assertion("x >= 2").unwrap();
//! let v = check_triple(Logic::PartialReverse, &pre, &prog, &post, &Bounds::default());
//! assert!(matches!(v, Verdict::Valid));
//! ```

pub mod assertsem;
pub mod checker;
pub mod cli;
pub mod lang;
pub mod proofir;
pub mod prover;
pub mod sem;
pub mod wpcalc;
