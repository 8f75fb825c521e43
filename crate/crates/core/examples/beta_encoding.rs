//! Encoding finite sequences as two numbers with the β predicate.

use prhl::wpcalc::{beta_holds, decode_sequence, encode_sequence, DEFAULT_SEARCH_CEILING};

fn main() {
    for values in [vec![1, 0], vec![0, 1], vec![2, 0, 1], vec![1, 1, 2], vec![3, 1, 4, 1]] {
        let (n, m) = match encode_sequence(&values, DEFAULT_SEARCH_CEILING) {
            Ok(pair) => pair,
            Err(e) => {
                println!("{values:?}: {e}");
                continue;
            }
        };
        let back = decode_sequence(n, m, values.len());
        println!("{values:?} -> n={n} m={m} -> {back:?}");
        assert!(values.iter().enumerate().all(|(j, v)| beta_holds(n, m, j as u64, *v)));
    }
}
