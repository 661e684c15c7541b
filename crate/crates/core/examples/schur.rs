//! Every 2-coloring of [1..5] has a monochromatic x + y = z; [1..4] escapes.

use ramsey_chains::classical::schur_threshold;

fn main() -> ramsey_chains::Result<()> {
    let t = schur_threshold(2, 10)?;
    println!("forced at n = {}", t.forced_at);
    if let Some(c) = t.escape {
        println!("escaping coloring of [1..{}]: {:?}", c.window().n_max(), c.colors());
    }
    let t = schur_threshold(3, 14)?;
    println!("three colors: forced at n = {}", t.forced_at);
    Ok(())
}
