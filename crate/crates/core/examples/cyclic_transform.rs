//! Turns an ordinary loop proof into a cyclic pre-proof with a back-link.

use prhl::assertsem::BoundedOracle;
use prhl::checker::{check_cprhl, CheckOptions};
use prhl::lang::{parse_triple, Prog};
use prhl::prover::{prove_prhl, transform_to_cyclic, ProveRequest};
use prhl::sem::Bounds;
use prhl::wpcalc::LoopMode;

fn main() {
    let t = parse_triple("pre: true\nprog: while i < 5 invariant true do { x := x + i; i := i + 1 }\npost: x > 0 && i >= 5")
        .unwrap();
    let b = Bounds::new(8, 1000, 4);
    let proof = prove_prhl(&ProveRequest::new(t.clone(), LoopMode::Invariant, b), &BoundedOracle).unwrap();
    let cyclic = transform_to_cyclic(&proof, &Prog::Empty, &t.post);
    for n in cyclic.nodes() {
        let link = cyclic.backlinks.get(&n.id).map(|c| format!("  -> {c}")).unwrap_or_default();
        println!("{} {:?} {}{link}", n.id, n.rule, n.triple);
    }
    print!("{}", check_cprhl(&cyclic, &BoundedOracle, &CheckOptions::new(b)).render_text());
}
