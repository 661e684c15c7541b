//! Matrix images and kernels as chain witnesses: entries of A x_n in C_n,
//! and solutions of x + y = z.

use ramsey_chains::rado::RationalMatrix;
use ramsey_chains::{build_chain, verify_chain, BuildOptions, ChainFamily, GroundWindow, StructureKind, WindowSet};

fn main() -> ramsey_chains::Result<()> {
    let w = GroundWindow::pow2(16)?;
    let sets = (1..=2)
        .map(|n| WindowSet::multiples(w, 1 << n))
        .collect::<Result<Vec<_>, _>>()?;
    let family = ChainFamily::new(sets, 4)?;
    let opts = BuildOptions::default();

    let image = RationalMatrix::from_ints(&[&[1, 0], &[0, 1], &[1, 1]])?;
    let chain = build_chain(&family, &StructureKind::Image(vec![image; 2]), &opts)?;
    println!("image chain: {}", serde_json::to_string(&chain).unwrap());
    println!("verified: {}", verify_chain(&family, &chain)?.passed);

    let schur = RationalMatrix::from_ints(&[&[1, 1, -1]])?;
    let chain = build_chain(&family, &StructureKind::Kernel(vec![schur; 2]), &opts)?;
    println!("kernel chain: {}", serde_json::to_string(&chain).unwrap());
    println!("verified: {}", verify_chain(&family, &chain)?.passed);
    Ok(())
}
