//! Over an alphabet of ordinals, coloring a word by the parity of its
//! largest letter leaves no monochromatic line.

use ramsey_chains::words::{infinite_alphabet_color, refute_line, Ordinal, VariableWord, Word};

fn main() -> ramsey_chains::Result<()> {
    let omega = Ordinal::monomial(1, 1);
    let letters = vec![
        Some(Ordinal::new(vec![(2, 1), (0, 3)])?),
        None,
        Some(omega.clone()),
        None,
    ];
    let w = VariableWord::new(letters)?;
    println!("word: {}", serde_json::to_string(&w).unwrap());

    let r = refute_line(&w);
    println!("w({}) has color {}, w({}) has color {}", r.even, r.even_color, r.odd, r.odd_color);

    let plain = Word::new(vec![Ordinal::natural(7), omega])?;
    println!("color of the word (7, ω): {}", infinite_alphabet_color(&plain));
    Ok(())
}
