//! A 3 x 3 prefix of rows x_{i,j} with FS(row i) in C_i and all family sums
//! in C_{min F}, grown one square at a time.

use ramsey_chains::chains::{verify_htplus, HtplusBuilder};
use ramsey_chains::foundation::DyadicSupport;
use ramsey_chains::{ChainFamily, GroundWindow};

fn main() -> ramsey_chains::Result<()> {
    let w = GroundWindow::pow2(30)?;
    let sets = (1..=3)
        .map(|n| DyadicSupport::tail(w, 5 * n).map(Into::into))
        .collect::<ramsey_chains::Result<Vec<_>>>()?;
    let family = ChainFamily::new(sets, 4)?;

    let mut builder = HtplusBuilder::new(&family);
    for _ in 0..3 {
        builder.extend()?;
        println!("size {}: {:?}", builder.size(), builder.matrix().rows);
    }
    let report = verify_htplus(&family, &builder.matrix())?;
    println!("verified: {} ({} elements checked)", report.passed, report.checked);
    Ok(())
}
