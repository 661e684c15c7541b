//! Variable words w_1, w_2 whose lines and ordered products stay in the
//! word sets C_1, C_2 (here: words with an even number of 2s).

use ramsey_chains::chains::{build_word_chain, verify_word_chain, WordChainFamily};
use ramsey_chains::words::WordSet;

fn main() -> ramsey_chains::Result<()> {
    let alphabet = [1, 2];
    let even_twos = WordSet::from_predicate(&alphabet, 6, |w| w.iter().filter(|&&a| a == 2).count() % 2 == 0);
    let family = WordChainFamily::new(&alphabet, 2, vec![even_twos.clone(), even_twos])?;

    let chain = build_word_chain(&family)?;
    for (t, w) in chain.words.iter().enumerate() {
        println!("w_{} = {w}", t + 1);
    }
    let report = verify_word_chain(&family, &chain)?;
    println!("verified: {} ({} words checked)", report.passed, report.checked);
    Ok(())
}
