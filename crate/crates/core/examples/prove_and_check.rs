//! Builds an ordinary derivation and checks it again independently.

use prhl::assertsem::BoundedOracle;
use prhl::checker::{check_prhl, CheckOptions};
use prhl::lang::parse_triple;
use prhl::prover::{prove_prhl, ProveRequest};
use prhl::sem::Bounds;
use prhl::wpcalc::LoopMode;

fn main() {
    let b = Bounds::new(8, 1000, 4);
    let triples = [
        ("pre: x = 2\nprog: x := x + 1; x := x * 2\npost: x = 6", LoopMode::Beta),
        ("pre: true\nprog: while i < 5 invariant true do { x := x + i; i := i + 1 }\npost: x > 0 && i >= 5", LoopMode::Invariant),
        ("pre: x = 0 && i = 0\nprog: while i < 5 do { x := x + i; i := i + 1 }\npost: x = 10 && i = 5", LoopMode::Beta),
    ];
    for (text, mode) in triples {
        let t = parse_triple(text).unwrap();
        println!("{t}");
        match prove_prhl(&ProveRequest::new(t, mode, b), &BoundedOracle) {
            Ok(proof) => {
                for n in proof.preorder() {
                    println!("  {} {:?}: {}", n.id, n.rule, n.triple);
                }
                print!("{}", check_prhl(&proof, &BoundedOracle, &CheckOptions::new(b)).render_text());
            }
            Err(e) => println!("  {e}"),
        }
    }
}
