//! Drivers for the randomized proof experiments, shared by the acceptance
//! suite (full size) and the integration tests (reduced size).

use std::collections::{BTreeMap, BTreeSet};

use prhl::assertsem::BoundedOracle;
use prhl::checker::{check_cprhl, check_cprhl_node, check_prhl, global_soundness, global_soundness_reference, CheckOptions};
use prhl::lang::{fresh_var, subst, subst1, subst_expr, Assertion, Expr, Prog, Triple, Var};
use prhl::proofir::{CyclicNode, CyclicPreProof, CyclicRule, GlobalStatus, NodeStatus, PrhlNode};
use prhl::prover::{build_prhl, prove_prhl, transform_to_cyclic, ProveRequest};
use prhl::sem::{check_triple, Bounds, Logic, Verdict};
use prhl::wpcalc::{wpr, LoopMode};
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand::SeedableRng;

use super::{closed_under, random_preproof, shortest_violation, Gen};

fn xy() -> Vec<String> {
    vec!["x".to_string(), "y".to_string()]
}

// ---- soundness of accepted certificates ----

#[derive(Debug, Default)]
pub struct Soundness {
    pub programs: usize,
    /// Programs skipped because their runs leave the checked domain.
    pub skipped: usize,
    pub accepted: usize,
    pub counterexamples: Vec<String>,
}

/// Builds invariant-mode certificates for random annotated triples and
/// confirms that every certificate accepted without bounded verdicts has a
/// root triple the semantic check does not refute.
///
/// Entailments are only decided inside `0..=domain_max`, so programs whose
/// runs leave that range are skipped.
pub fn soundness(seed: u64, programs: usize, b: Bounds) -> Soundness {
    let mut g = Gen::new(seed, &["x", "y"], 3);
    let mut out = Soundness::default();
    while out.programs < programs {
        let mut inv = |g: &mut Gen| Some(if g.rng.gen_bool(0.4) { Assertion::tt() } else { g.qf_assertion(1) });
        let p = g.program(3, &mut inv);
        if !closed_under(&p, &xy(), b.domain_max, b.step_bound) {
            out.skipped += 1;
            assert!(out.skipped < 50 * programs.max(1), "generator rarely stays in range");
            continue;
        }
        out.programs += 1;
        let post = g.qf_assertion(2);
        let pre = match g.rng.gen_range(0..3) {
            0 => Assertion::tt(),
            1 => wpr(&p, &post, LoopMode::Invariant).expect("every loop is annotated"),
            _ => g.qf_assertion(2),
        };
        let t = Triple::new(pre, p, post);
        let proof = build_prhl(&t, LoopMode::Invariant).expect("every loop is annotated");
        let report = check_prhl(&proof, &BoundedOracle, &CheckOptions::new(b));
        if !report.accepted_exactly() {
            continue;
        }
        out.accepted += 1;
        if let v @ Verdict::Invalid(_) = check_triple(Logic::PartialReverse, &t.pre, &t.prog, &t.post, &b) {
            out.counterexamples.push(format!("{t}: {v}"));
        }
    }
    out
}

// ---- completeness on loop-free programs ----

#[derive(Debug, Default)]
pub struct Completeness {
    pub proofs: Vec<PrhlNode>,
    pub failures: Vec<String>,
}

/// `{wpr(C, Q)} C {Q}` for random loop-free `C` and quantifier-free `Q`:
/// semantically valid, proved, and the proof accepted.
pub fn completeness(seed: u64, cases: usize, b: Bounds) -> Completeness {
    let mut g = Gen::new(seed, &["x", "y"], 3);
    let mut out = Completeness::default();
    for _ in 0..cases {
        let p = g.loop_free(3);
        let q = g.qf_assertion(2);
        let f = wpr(&p, &q, LoopMode::Beta).expect("loop-free");
        let t = Triple::new(f, p, q);
        let v = check_triple(Logic::PartialReverse, &t.pre, &t.prog, &t.post, &b);
        if !v.is_valid() {
            out.failures.push(format!("{t}: oracle says {v}"));
            continue;
        }
        match prove_prhl(&ProveRequest::new(t.clone(), LoopMode::Beta, b), &BoundedOracle) {
            Ok(proof) => {
                let report = check_prhl(&proof, &BoundedOracle, &CheckOptions::new(b));
                if report.accepted_exactly() {
                    out.proofs.push(proof);
                } else {
                    out.failures.push(format!("{t}: {}", report.render_text()));
                }
            }
            Err(e) => out.failures.push(format!("{t}: {e}")),
        }
    }
    out
}

/// Proofs of `{true} C {Q}` where every loop carries the invariant `true`.
pub fn loop_proofs(seed: u64, cases: usize) -> Vec<PrhlNode> {
    let mut g = Gen::new(seed, &["x", "y"], 3);
    let mut out = Vec::new();
    while out.len() < cases {
        let p = g.program(3, &mut |_| Some(Assertion::tt()));
        if !p.has_loop() {
            continue;
        }
        let t = Triple::new(Assertion::tt(), p, g.qf_assertion(2));
        out.push(build_prhl(&t, LoopMode::Invariant).expect("annotated"));
    }
    out
}

// ---- transformation ----

#[derive(Debug, Default)]
pub struct Transformation {
    pub checked: usize,
    pub with_loops: usize,
    pub failures: Vec<String>,
}

/// Transforms each accepted proof with an empty continuation and checks the
/// result, including the global condition.
pub fn transformation(proofs: &[PrhlNode], b: Bounds) -> Transformation {
    let mut out = Transformation::default();
    let opts = CheckOptions::new(b);
    for p in proofs {
        let name = p.triple.to_string();
        if !check_prhl(p, &BoundedOracle, &opts).accepted() {
            out.failures.push(format!("{name}: the ordinary proof is not accepted"));
            continue;
        }
        let c = transform_to_cyclic(p, &Prog::Empty, &p.triple.post);
        out.checked += 1;
        if !c.root_node().triple.same_label(&p.triple) {
            out.failures.push(format!("{name}: root changed to {}", c.root_node().triple));
        }
        if let g @ GlobalStatus::ConsCycle(_) = global_soundness(&c) {
            out.failures.push(format!("{name}: {g:?}"));
        }
        if p.triple.prog.has_loop() {
            out.with_loops += 1;
            if c.backlinks.is_empty() {
                out.failures.push(format!("{name}: loop without a back-link"));
            }
        }
        let report = check_cprhl(&c, &BoundedOracle, &opts);
        if !report.accepted() || report.global != GlobalStatus::Ok {
            out.failures.push(format!("{name}: {}", report.render_text()));
        }
    }
    out
}

// ---- local descent ----

pub const DESCENT_RULES: [CyclicRule; 5] =
    [CyclicRule::Cons, CyclicRule::AssignSubst, CyclicRule::AssignFresh, CyclicRule::Or, CyclicRule::While];

#[derive(Debug, Default)]
pub struct Descent {
    pub instances: usize,
    pub failures: Vec<String>,
}

struct Instance {
    conclusion: Triple,
    premises: Vec<Triple>,
    fresh: Option<Var>,
}

fn instance(g: &mut Gen, rule: CyclicRule) -> Instance {
    let plain = |g: &mut Gen| g.program(1, &mut |_| None);
    match rule {
        CyclicRule::Cons => {
            let prog = g.program(2, &mut |_| None);
            let (p1, q1) = (g.qf_assertion(2), g.qf_assertion(2));
            let p = Assertion::or(p1.clone(), g.qf_assertion(1));
            let q = Assertion::and(q1.clone(), g.qf_assertion(1));
            Instance { conclusion: Triple::new(p, prog.clone(), q), premises: vec![Triple::new(p1, prog, q1)], fresh: None }
        }
        CyclicRule::AssignSubst => {
            let (x, e, rest) = (g.var(), g.small_expr(), plain(g));
            let (q1, r) = (g.qf_assertion(2), g.qf_assertion(2));
            let p = subst1(&q1, &x, &e);
            let prog = Prog::seq(Prog::assign(&x, e), rest.clone());
            Instance { conclusion: Triple::new(p, prog, r.clone()), premises: vec![Triple::new(q1, rest, r)], fresh: None }
        }
        CyclicRule::AssignFresh => {
            let (x, e, rest) = (g.var(), g.small_expr(), plain(g));
            let (p, r) = (g.qf_assertion(2), g.qf_assertion(2));
            let prog = Prog::seq(Prog::assign(&x, e.clone()), rest.clone());
            let mut taken = p.all_vars();
            taken.extend(r.all_vars());
            taken.extend(prog.vars());
            taken.insert(x.clone());
            let x1 = fresh_var(&taken, &x);
            let renamed = [(x.clone(), Expr::var(&x1))];
            let pre = Assertion::and(Assertion::eq(Expr::var(&x), subst_expr(&e, &renamed)), subst(&p, &renamed));
            Instance { conclusion: Triple::new(p, prog, r.clone()), premises: vec![Triple::new(pre, rest, r)], fresh: Some(x1) }
        }
        CyclicRule::Or => {
            let (c0, c1, rest) = (g.loop_free(1), g.loop_free(1), plain(g));
            let (p, q) = (g.qf_assertion(2), g.qf_assertion(2));
            let prog = Prog::seq(Prog::choice(c0.clone(), c1.clone()), rest.clone());
            let premises = [c0, c1].into_iter().map(|c| Triple::new(p.clone(), Prog::seq(c, rest.clone()), q.clone())).collect();
            Instance { conclusion: Triple::new(p, prog, q), premises, fresh: None }
        }
        CyclicRule::While => {
            let (cond, body, rest) = (g.guard(), g.loop_free(1), g.loop_free(1));
            let (p, q) = (g.qf_assertion(2), g.qf_assertion(2));
            let lp = Prog::while_loop(cond.clone(), body.clone());
            let prog = Prog::seq(lp.clone(), rest.clone());
            let b = Assertion::from_bool(&cond);
            let exit = Triple::new(Assertion::implies(Assertion::not(b.clone()), p.clone()), rest.clone(), q.clone());
            let again = Triple::new(Assertion::implies(b, p.clone()), Prog::seq(body, prog.clone()), q.clone());
            Instance { conclusion: Triple::new(p, prog, q), premises: vec![exit, again], fresh: None }
        }
        other => unreachable!("no descent instances for {other}"),
    }
}

/// Checks that the instance is a correct rule application.
fn locally_valid(rule: CyclicRule, inst: &Instance, b: Bounds) -> Result<(), String> {
    let mut nodes = vec![CyclicNode {
        id: "c".into(),
        triple: inst.conclusion.clone(),
        rule,
        children: (0..inst.premises.len()).map(|i| format!("p{i}")).collect(),
        fresh: inst.fresh.clone(),
    }];
    for (i, t) in inst.premises.iter().enumerate() {
        nodes.push(CyclicNode { id: format!("p{i}"), triple: t.clone(), rule: CyclicRule::OpenLeaf, children: vec![], fresh: None });
    }
    let c = CyclicPreProof::new(nodes, "c", BTreeMap::new()).map_err(|e| e.to_string())?;
    let report = check_cprhl_node(&c, c.root_node(), &BoundedOracle, &CheckOptions::new(b));
    if report.statuses.iter().all(|s| matches!(s, NodeStatus::Ok)) {
        Ok(())
    } else {
        Err(format!("{:?}", report.statuses))
    }
}

/// For `count` invalid conclusions of `rule`, the shortest violating run of
/// some premise is no longer than the conclusion's, and strictly shorter
/// unless the rule is consequence. States are enumerated over
/// `0..=domain_max`, widened for the premise of an assignment so that the
/// state after the assignment is included.
pub fn local_descent(seed: u64, rule: CyclicRule, count: usize, domain_max: u64) -> Descent {
    let mut g = Gen::new(seed, &["x", "y"], 3);
    let conclusion_bounds = Bounds::new(domain_max, 60, 0);
    // only an assignment moves the start state out of the conclusion's range
    let premise_bounds = match rule {
        CyclicRule::AssignSubst | CyclicRule::AssignFresh => Bounds::new(2 * domain_max + 3, 60, 0),
        _ => conclusion_bounds,
    };
    let vars: BTreeSet<Var> = xy().into_iter().collect();
    let mut out = Descent::default();
    let mut attempts = 0;
    while out.instances < count {
        attempts += 1;
        assert!(attempts < 200 * count, "{rule}: too few invalid conclusions");
        let inst = instance(&mut g, rule);
        let Ok(Some(n)) = shortest_violation(&inst.conclusion, &vars, &conclusion_bounds) else { continue };
        out.instances += 1;
        if let Err(e) = locally_valid(rule, &inst, conclusion_bounds) {
            out.failures.push(format!("{rule} at {}: not a rule instance: {e}", inst.conclusion));
            continue;
        }
        let best = inst
            .premises
            .iter()
            .filter_map(|t| shortest_violation(t, &vars, &premise_bounds).ok().flatten())
            .min();
        let ok = match best {
            Some(k) if rule == CyclicRule::Cons => k <= n,
            Some(k) => k < n,
            None => false,
        };
        if !ok {
            out.failures.push(format!("{rule} at {} (length {n}): premises give {best:?}", inst.conclusion));
        }
    }
    out
}

// ---- global condition ----

#[derive(Debug, Default)]
pub struct GlobalAgreement {
    pub graphs: usize,
    pub cyclic: usize,
    pub disagreements: Vec<String>,
}

pub fn global_agreement(seed: u64, graphs: usize, max_nodes: usize) -> GlobalAgreement {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = GlobalAgreement::default();
    for _ in 0..graphs {
        let c = random_preproof(&mut rng, max_nodes);
        let fast = !matches!(global_soundness(&c), GlobalStatus::ConsCycle(_));
        let slow = global_soundness_reference(&c);
        out.graphs += 1;
        out.cyclic += usize::from(!slow);
        if fast != slow {
            out.disagreements.push(prhl::proofir::serialize_cprhl(&c));
        }
    }
    out
}
