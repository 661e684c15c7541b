//! Arithmetic progressions Y_1, Y_2, Y_3 inside multiples of 2, 4, 8 whose
//! family sums stay in C_{min F}.

use ramsey_chains::{build_chain, verify_chain, BuildOptions, ChainFamily, GroundWindow, StructureKind, WindowSet};

fn main() -> ramsey_chains::Result<()> {
    let w = GroundWindow::pow2(16)?;
    let sets = (1..=3)
        .map(|n| WindowSet::multiples(w, 1 << n))
        .collect::<Result<Vec<_>, _>>()?;
    let family = ChainFamily::new(sets, 4)?;

    let chain = build_chain(&family, &StructureKind::Ap(vec![3, 4, 5]), &BuildOptions::default())?;
    for (n, y) in chain.witnesses.iter().enumerate() {
        println!("Y_{} = {:?}", n + 1, y.points().unwrap());
    }
    let report = verify_chain(&family, &chain)?;
    println!("verified: {} ({} family-sum elements checked)", report.passed, report.checked);
    Ok(())
}
