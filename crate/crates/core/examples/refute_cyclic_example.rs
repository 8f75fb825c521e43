//! A hand-written cyclic certificate for an invalid triple: the checker
//! names the rule applications that break and the semantic check refutes
//! the root.

use prhl::assertsem::BoundedOracle;
use prhl::checker::{check_cprhl, first_invalid_side_condition, global_soundness, CheckOptions};
use prhl::proofir::parse_cprhl;
use prhl::sem::{check_triple, Bounds, Logic};

fn main() {
    let path = concat!(env!("CARGO_MANIFEST_DIR"), "/corpus/summation_exact_literal.cprhl.json");
    let c = parse_cprhl(&std::fs::read_to_string(path).unwrap()).unwrap();
    let b = Bounds::new(12, 1000, 16);
    let report = check_cprhl(&c, &BoundedOracle, &CheckOptions::new(b));
    print!("{}", report.render_text());
    if let Some((id, v)) = first_invalid_side_condition(&report) {
        println!("first refuted side condition at {id}: {v}");
    }
    println!("global condition: {:?}", global_soundness(&c));
    let t = &c.root_node().triple;
    println!("root {t}: {}", check_triple(Logic::PartialReverse, &t.pre, &t.prog, &t.post, &b));
}
