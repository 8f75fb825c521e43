//! Symbolic weakest pre-conditions in each loop mode.

use prhl::lang::{parse_assertion, parse_program, print_assertion};
use prhl::wpcalc::{wpr, LoopMode};

fn main() {
    let q = parse_assertion("y = 2").unwrap();
    let straight = parse_program("(x := x + 1 + x := 0); y := x * 2").unwrap();
    println!("wpr({straight}, {q}) = {}", print_assertion(&wpr(&straight, &q, LoopMode::Beta).unwrap()));

    let lp = parse_program("while x < 2 invariant x <= 2 do { x := x + 1 }; y := x").unwrap();
    for mode in [LoopMode::Invariant, LoopMode::Unroll(2), LoopMode::Beta] {
        let f = wpr(&lp, &q, mode).unwrap();
        let text = print_assertion(&f);
        let shown = if text.len() > 160 { format!("{} ... ({} chars)", &text[..160], text.len()) } else { text };
        println!("{mode:?}: {shown}");
    }
}
