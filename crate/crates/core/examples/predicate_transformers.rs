//! The four predicate transformers over an enumerated state space.

use std::collections::BTreeSet;

use prhl::lang::{parse_assertion, parse_program};
use prhl::sem::{transformer_set, AssertionPredicate, Bounds, TransformerKind};

fn main() {
    let prog = parse_program("x := x + 1 + x := 0").unwrap();
    let q = parse_assertion("x = 2").unwrap();
    let pred = AssertionPredicate { assertion: &q, quant_bound: 0 };
    let vars = BTreeSet::from(["x".to_string()]);
    let b = Bounds::new(4, 100, 0);
    println!("program {prog}, predicate {q}, x in 0..=4");
    for kind in [TransformerKind::Wpr, TransformerKind::Wlp, TransformerKind::Sp, TransformerKind::Slp] {
        let r = transformer_set(kind, &prog, &pred, &vars, &b);
        let states: Vec<String> = r.states.iter().map(|s| s.to_string()).collect();
        println!("  {kind:?}: {}", states.join(" "));
    }
}
