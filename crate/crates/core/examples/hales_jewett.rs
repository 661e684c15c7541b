//! Exhaustive line check on {1..t}^n and a line search in a word set.

use ramsey_chains::words::{find_variable_word, hj_line_free_coloring, WordSet};

fn main() -> ramsey_chains::Result<()> {
    for (t, r, n) in [(2, 2, 1), (2, 2, 2), (3, 2, 2), (2, 3, 3)] {
        match hj_line_free_coloring(t, r, n)? {
            None => println!("t={t} r={r} n={n}: every coloring has a monochromatic line"),
            Some(c) => println!("t={t} r={r} n={n}: line-free coloring {c:?}"),
        }
    }

    let starts_with_one = WordSet::from_predicate(&[1, 2, 3], 3, |w| w[0] == 1);
    let w = find_variable_word(&starts_with_one, &[1, 2, 3], 3).expect("1v is a line");
    println!("least line inside words starting with 1: {w}");
    Ok(())
}
