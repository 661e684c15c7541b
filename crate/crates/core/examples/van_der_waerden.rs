//! W(3, 2) = 9 by exhaustive search.

use ramsey_chains::classical::van_der_waerden_number;

fn main() -> ramsey_chains::Result<()> {
    let t = van_der_waerden_number(3, 2, 12)?;
    println!("W(3, 2) = {}", t.forced_at);
    if let Some(c) = t.escape {
        println!("a 2-coloring of [1..{}] without a monochromatic 3-AP: {:?}", c.window().n_max(), c.colors());
    }
    let t = van_der_waerden_number(4, 2, 40);
    println!("W(4, 2) within a 2^24 coloring scan: {}", t.map_or_else(|e| e.to_string(), |t| t.forced_at.to_string()));
    Ok(())
}
