//! α and H on the subsets of two sequences, with every chain sum landing in
//! the target set of its smallest member.

use ramsey_chains::fg::{build_alpha_h, verify_alpha_h, SeqFamily, SubsetKey, TargetAssignment};
use ramsey_chains::foundation::DyadicSupport;
use ramsey_chains::{DyadicOracle, GroundWindow};

fn main() -> ramsey_chains::Result<()> {
    let w = GroundWindow::pow2(30)?;
    let family = SeqFamily::from_fn(2, 12, |i, t| 1 << (2 * t + i - 1))?;
    let mut targets = TargetAssignment::new();
    for (key, from) in [("1", 2), ("2", 3), ("1,2", 4)] {
        targets.insert(SubsetKey::try_from(key.to_string())?, DyadicSupport::tail(w, from)?.into());
    }

    let ah = build_alpha_h(&family, &targets, DyadicOracle::new(w, 4)?, 1024)?;
    for (key, e) in &ah {
        println!("{{{key}}}: alpha = {}, H = {:?}", e.alpha, e.h);
    }
    let report = verify_alpha_h(&family, &targets, &ah)?;
    println!("verified: {} ({} chains with choices)", report.passed, report.chains_checked);
    Ok(())
}
