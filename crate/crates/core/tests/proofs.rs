mod common;

use common::harness::{self, DESCENT_RULES};
use common::read_corpus;
use prhl::assertsem::BoundedOracle;
use prhl::checker::{check_cprhl, check_prhl, first_invalid_side_condition, global_soundness, CheckOptions};
use prhl::lang::{parse_triple, Prog};
use prhl::proofir::{parse_certificate, parse_cprhl, parse_prhl, serialize_cprhl, serialize_prhl, Certificate, GlobalStatus};
use prhl::prover::{prove_prhl, transform_to_cyclic, ProveError, ProveRequest};
use prhl::sem::{check_triple, Bounds, Logic, Verdict};
use prhl::wpcalc::LoopMode;

fn opts(b: Bounds) -> CheckOptions {
    CheckOptions::new(b)
}

#[test]
fn summation_certificate_is_accepted() {
    let p = parse_prhl(&read_corpus("summation_loop.prhl.json")).unwrap();
    let r = check_prhl(&p, &BoundedOracle, &opts(Bounds::new(12, 1000, 16)));
    assert!(r.accepted_exactly(), "{}", r.render_text());
    assert_eq!(r.render_text().lines().next(), Some("ACCEPT (bounded: none)"));
}

#[test]
fn literal_summation_certificate_breaks_the_sequence() {
    let p = parse_prhl(&read_corpus("summation_loop_literal.prhl.json")).unwrap();
    let r = check_prhl(&p, &BoundedOracle, &opts(Bounds::default()));
    assert!(!r.accepted());
    assert_eq!(r.failed_nodes().iter().map(|n| n.id.as_str()).collect::<Vec<_>>(), ["n2"]);
}

#[test]
fn literal_cyclic_example_is_rejected() {
    let c = parse_cprhl(&read_corpus("summation_exact_literal.cprhl.json")).unwrap();
    let b = Bounds::new(12, 1000, 16);
    let r = check_cprhl(&c, &BoundedOracle, &opts(b));
    assert!(!r.accepted());
    let (id, v) = first_invalid_side_condition(&r).unwrap();
    assert_eq!(id, "n7");
    assert_eq!(v.witness().unwrap().to_string(), "{i:0, x:0}");
    // the loop cycle itself is fine
    assert_eq!(global_soundness(&c), GlobalStatus::Ok);
    let t = c.root_node().triple.clone();
    let v = check_triple(Logic::PartialReverse, &t.pre, &t.prog, &t.post, &b);
    assert_eq!(v.witness().unwrap().to_string(), "σ={i:5, x:10} σ'={i:5, x:10}");
}

#[test]
fn cons_cycle_is_rejected() {
    let c = parse_cprhl(&read_corpus("cons_cycle.cprhl.json")).unwrap();
    assert_eq!(global_soundness(&c), GlobalStatus::ConsCycle(vec!["n1".into(), "n2".into()]));
    let r = check_cprhl(&c, &BoundedOracle, &opts(Bounds::default()));
    assert!(r.render_text().contains("global: cycle of Cons nodes only: n1, n2"));
}

#[test]
fn prove_then_transform_summation() {
    let t = parse_triple(&read_corpus("summation_loop.triple")).unwrap();
    let b = Bounds::new(8, 1000, 4);
    let p = prove_prhl(&ProveRequest::new(t.clone(), LoopMode::Invariant, b), &BoundedOracle).unwrap();
    assert!(check_prhl(&p, &BoundedOracle, &opts(b)).accepted_exactly());
    let c = transform_to_cyclic(&p, &Prog::Empty, &t.post);
    assert_eq!(c.backlinks.len(), 1);
    assert!(c.root_node().triple.same_label(&t));
    let r = check_cprhl(&c, &BoundedOracle, &opts(b));
    assert!(r.accepted_exactly(), "{}", r.render_text());

    // certificates survive a round trip through their text form
    let again = parse_cprhl(&serialize_cprhl(&c)).unwrap();
    assert_eq!(serialize_cprhl(&again), serialize_cprhl(&c));
    match parse_certificate(&serialize_prhl(&p)).unwrap() {
        Certificate::Prhl(q) => assert_eq!(q, p),
        other => panic!("detected {}", other.system()),
    }
}

#[test]
fn refuted_triples_have_no_proof() {
    let t = parse_triple(&read_corpus("summation_exact.triple")).unwrap();
    let r = ProveRequest::new(t, LoopMode::Beta, Bounds::new(12, 1000, 4));
    match prove_prhl(&r, &BoundedOracle) {
        Err(ProveError::Failure(Verdict::Invalid(w))) => assert_eq!(w.to_string(), "σ={i:5, x:10} σ'={i:5, x:10}"),
        other => panic!("{other:?}"),
    }
}

#[test]
fn accepted_certificates_are_sound() {
    let s = harness::soundness(31, 80, Bounds::new(6, 500, 0));
    assert!(s.counterexamples.is_empty(), "{:#?}", s.counterexamples);
    assert!(s.accepted >= 20, "{s:?}");
}

#[test]
fn loop_free_wpr_triples_are_provable() {
    let c = harness::completeness(32, 60, Bounds::new(6, 500, 4));
    assert!(c.failures.is_empty(), "{:#?}", c.failures);
    let t = harness::transformation(&c.proofs, Bounds::new(6, 500, 4));
    assert!(t.failures.is_empty(), "{:#?}", t.failures);
    assert_eq!(t.checked, 60);
}

#[test]
fn loop_proofs_transform_with_backlinks() {
    let proofs = harness::loop_proofs(33, 25);
    let t = harness::transformation(&proofs, Bounds::new(4, 300, 0));
    assert!(t.failures.is_empty(), "{:#?}", t.failures);
    assert_eq!(t.with_loops, 25);
}

#[test]
fn local_descent_small() {
    for (k, rule) in DESCENT_RULES.into_iter().enumerate() {
        let d = harness::local_descent(40 + k as u64, rule, 20, 3);
        assert!(d.failures.is_empty(), "{:#?}", d.failures);
    }
}

#[test]
fn global_condition_matches_reference() {
    let g = harness::global_agreement(34, 300, 14);
    assert!(g.disagreements.is_empty(), "{}", g.disagreements.join("\n"));
    assert!(g.cyclic > 20 && g.cyclic < 280, "{g:?}");
}
