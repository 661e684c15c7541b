//! A partition of the naturals in which neither side holds an infinite
//! arithmetic progression, built by diagonalizing over all progressions.

use ramsey_chains::antiap::{diagonalize, enumerate_aps, verify_hitting};

fn main() -> ramsey_chains::Result<()> {
    let count = 10_000;
    let state = diagonalize(count);
    for (l, (x, y)) in enumerate_aps(6).iter().zip(state.x.iter().zip(&state.y)) {
        println!("AP({}, {}): x = {x}, y = {y}", l.a, l.b);
    }
    let report = verify_hitting(&state, count)?;
    println!("{count} progressions hit on both sides: {}", report.passed);
    Ok(())
}
