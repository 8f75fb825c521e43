//! Certificates as JSON: write, read back, detect the proof system.

use prhl::lang::{parse_triple, Prog};
use prhl::proofir::{parse_certificate, serialize_cprhl, serialize_prhl, Certificate};
use prhl::prover::{build_prhl, transform_to_cyclic};
use prhl::wpcalc::LoopMode;

fn main() {
    let t = parse_triple("pre: x = 0 || x = 1\nprog: (x := x + 1 + x := x + 2); y := x\npost: y = 2").unwrap();
    let proof = build_prhl(&t, LoopMode::Beta).unwrap();
    let json = serialize_prhl(&proof);
    println!("{json}");

    let cyclic = serialize_cprhl(&transform_to_cyclic(&proof, &Prog::Empty, &t.post));
    for doc in [&json, &cyclic] {
        let cert = parse_certificate(doc).unwrap();
        assert_eq!(&cert.to_json(), doc);
        println!("{} certificate for {}", cert.system(), cert.root_triple());
        if let Certificate::Cprhl(c) = cert {
            println!("  {} nodes, {} back-links", c.nodes().len(), c.backlinks.len());
        }
    }

    let broken = json.replacen("\"Assign\"", "\"Asign\"", 1);
    println!("misspelled rule: {}", parse_certificate(&broken).unwrap_err());
}
