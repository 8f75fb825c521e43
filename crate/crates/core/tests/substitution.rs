mod common;

use common::Gen;
use prhl::assertsem::eval_assertion;
use prhl::lang::{subst, subst1, subst_expr, Assertion, Expr, Var};
use prhl::sem::{eval_expr, State};
use proptest::prelude::*;

const QB: u64 = 3;

fn state_strategy() -> impl Strategy<Value = State> {
    (0u64..6, 0u64..6, 0u64..6).prop_map(|(x, y, i)| State::from_pairs([("x", x), ("y", y), ("i", i)]))
}

/// Random instances drawn through the shared generator, keyed by a seed so
/// proptest can shrink towards small seeds.
fn instance(seed: u64) -> (Assertion, Var, Expr) {
    let mut g = Gen::new(seed, &["x", "y", "i"], 3);
    let a = g.assertion(3);
    let x = g.var();
    let e = g.expr(2);
    (a, x, e)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1500))]

    #[test]
    fn assertion_substitution_lemma(seed in any::<u64>(), s in state_strategy()) {
        let (a, x, e) = instance(seed);
        let lhs = eval_assertion(&subst1(&a, &x, &e), &s, QB);
        let rhs = eval_assertion(&a, &s.with(&x, eval_expr(&e, &s)), QB);
        prop_assert_eq!(lhs.value, rhs.value, "{} [{} := {}] at {}", a, x, e, s);
    }

    #[test]
    fn expression_substitution_lemma(seed in any::<u64>(), s in state_strategy()) {
        let mut g = Gen::new(seed, &["x", "y", "i"], 5);
        let (body, x, e) = (g.expr(3), g.var(), g.expr(2));
        let lhs = eval_expr(&subst_expr(&body, &[(x.clone(), e.clone())]), &s);
        prop_assert_eq!(lhs, eval_expr(&body, &s.with(&x, eval_expr(&e, &s))));
    }

    #[test]
    fn simultaneous_substitution(seed in any::<u64>(), s in state_strategy()) {
        let mut g = Gen::new(seed, &["x", "y", "i"], 3);
        let a = g.assertion(3);
        let (e1, e2) = (g.expr(2), g.expr(2));
        let r = subst(&a, &[("x".into(), e1.clone()), ("y".into(), e2.clone())]);
        let t = s.with("x", eval_expr(&e1, &s)).with("y", eval_expr(&e2, &s));
        prop_assert_eq!(eval_assertion(&r, &s, QB).value, eval_assertion(&a, &t, QB).value);
    }
}

#[test]
fn capture_is_avoided() {
    let a = prhl::lang::parse_assertion("forall y. y <= x -> exists x. x = y").unwrap();
    let r = subst1(&a, "x", &Expr::var("y"));
    assert!(r.free_vars().contains("y"));
    for v in 0..5 {
        let s = State::from_pairs([("y", v)]);
        assert_eq!(eval_assertion(&r, &s, 6).value, eval_assertion(&a, &s.with("x", v), 6).value);
    }
}
