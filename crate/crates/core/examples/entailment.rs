//! Entailments decided by enumeration, with quantifiers cut at a bound.

use prhl::assertsem::{entails, models_tautology, EntailmentQuery};
use prhl::lang::parse_assertion;
use prhl::sem::Bounds;

fn main() {
    let b = Bounds::new(6, 100, 8);
    let queries = [
        ("x = 0 && i = 0", "i < 6 -> x + 1 = i && i = 1"),
        ("x >= 2", "x >= 1"),
        ("x = y + y", "exists z. x = z + z"),
        ("true", "forall z. z <= x"),
    ];
    for (l, r) in queries {
        let q = EntailmentQuery::new(parse_assertion(l).unwrap(), parse_assertion(r).unwrap(), b);
        println!("{l} |= {r}: {}", entails(&q));
    }
    let t = parse_assertion("x % 2 = 0 || x % 2 = 1").unwrap();
    println!("|= {t}: {}", models_tautology(&t, &t.free_vars(), &b));
}
