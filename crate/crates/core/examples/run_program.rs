//! Executes a nondeterministic program from a few initial states.

use prhl::lang::parse_program;
use prhl::sem::{run, Bounds, State};

fn main() {
    let prog = parse_program("while i < 3 do { (x := x + i + x := x * 2); i := i + 1 }").unwrap();
    println!("program: {prog}");
    for x in 0..3 {
        let init = State::from_pairs([("x", x)]);
        let r = run(&prog, &init, &Bounds::default());
        println!("from {init}:");
        for (s, steps) in &r.finals {
            println!("  {s} after {steps} steps");
        }
    }

    // a divergent branch shows up as truncation
    let spin = parse_program("x := 1 + while 0 = 0 do { skip }").unwrap();
    let r = run(&spin, &State::new(), &Bounds::new(8, 50, 16));
    println!("{spin}: finals {:?}, truncated {}", r.final_states(), r.truncated);
}
