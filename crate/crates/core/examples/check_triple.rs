//! One triple, four logics.

use prhl::lang::{parse_assertion, parse_program};
use prhl::sem::{check_triple, Bounds, Logic};

fn main() {
    let b = Bounds::new(12, 1000, 16);
    let prog = parse_program("while i < 5 do { x := x + i; i := i + 1 }").unwrap();
    let cases = [
        ("true", "x > 0 && i >= 5"),
        ("x = 0 && i = 0", "x = 10 && i = 5"),
        ("i <= 5", "i = 5"),
    ];
    for (pre, post) in cases {
        let (p, q) = (parse_assertion(pre).unwrap(), parse_assertion(post).unwrap());
        println!("{{{pre}}} {prog} {{{post}}}");
        for logic in [Logic::PartialReverse, Logic::PartialHoare, Logic::TotalHoare, Logic::Incorrectness] {
            println!("  {logic:?}: {}", check_triple(logic, &p, &prog, &q, &b));
        }
    }
}
