//! Finite-sum sequences in dyadic tails: FS(Y_n) inside C_n and every family
//! sum inside C_{min F}.

use ramsey_chains::foundation::DyadicSupport;
use ramsey_chains::sumsets::fs_values;
use ramsey_chains::{build_chain, verify_chain, BuildOptions, ChainFamily, GroundWindow, StructureKind, Witness};

fn main() -> ramsey_chains::Result<()> {
    let w = GroundWindow::pow2(24)?;
    let sets = (1..=3)
        .map(|n| DyadicSupport::tail(w, 2 * n).map(Into::into))
        .collect::<ramsey_chains::Result<Vec<_>>>()?;
    let family = ChainFamily::new(sets, 4)?;

    let chain = build_chain(&family, &StructureKind::FsSeq(vec![3, 3, 2]), &BuildOptions::default())?;
    for (n, y) in chain.witnesses.iter().enumerate() {
        if let Witness::FsSeq { terms } = y {
            println!("Y_{} = {:?}, FS = {:?}", n + 1, terms.terms(), fs_values(terms.terms()).unwrap());
        }
    }
    println!("verified: {}", verify_chain(&family, &chain)?.passed);
    Ok(())
}
