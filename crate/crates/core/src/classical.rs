//! Exhaustive certification of small van der Waerden and Schur numbers.

use serde::{Deserialize, Serialize};

use crate::chains::find_ap_in_set;
use crate::error::{Error, Result};
use crate::foundation::{Coloring, GroundWindow, SubsetMask};
use crate::rado::{find_kernel_in_set, RationalMatrix};

/// Largest number of colorings a single scan may visit.
pub const MAX_COLORINGS: u64 = 1 << 24;

/// Least `n` at which every coloring of `[1..n]` is forced, with a coloring
/// of `[1..n-1]` that escapes (absent when `n = 1`).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Threshold {
    pub forced_at: u64,
    pub escape: Option<Coloring>,
}

/// First coloring of `[1..n]` (in [`Coloring::from_index`] order) none of
/// whose classes satisfies `has`.
pub fn escaping_coloring(n: u64, r: u32, has: impl Fn(&SubsetMask) -> bool) -> Result<Option<Coloring>> {
    let window = GroundWindow::new(n)?;
    if r == 0 {
        return Err(Error::invalid("need at least one color"));
    }
    let total = (r as u64)
        .checked_pow(n.try_into().unwrap_or(u32::MAX))
        .filter(|&t| t <= MAX_COLORINGS)
        .ok_or_else(|| Error::BoundsExceeded(format!("{r}^{n} colorings exceed {MAX_COLORINGS}")))?;
    Ok((0..total)
        .map(|i| Coloring::from_index(window, r, i))
        .find(|c| !c.classes().iter().any(&has)))
}

/// A coloring of `[1..n]` with no monochromatic `len`-term progression.
pub fn vdw_escape(n: u64, r: u32, len: usize) -> Result<Option<Coloring>> {
    escaping_coloring(n, r, |class| find_ap_in_set(class, len).is_some())
}

fn schur_matrix() -> RationalMatrix {
    RationalMatrix::from_ints(&[&[1, 1, -1]]).expect("static matrix")
}

/// A coloring of `[1..n]` with no monochromatic `x + y = z`.
pub fn schur_escape(n: u64, r: u32) -> Result<Option<Coloring>> {
    let m = schur_matrix();
    escaping_coloring(n, r, |class| find_kernel_in_set(&m, class, n).is_some())
}

fn threshold(limit: u64, escape: impl Fn(u64) -> Result<Option<Coloring>>) -> Result<Threshold> {
    let mut last = None;
    for n in 1..=limit {
        match escape(n)? {
            Some(c) => last = Some(c),
            None => {
                return Ok(Threshold {
                    forced_at: n,
                    escape: last,
                })
            }
        }
    }
    Err(Error::BoundsExceeded(format!("no forcing found up to n = {limit}")))
}

/// `W(len, r)`, scanning `n` up to `limit`.
pub fn van_der_waerden_number(len: usize, r: u32, limit: u64) -> Result<Threshold> {
    threshold(limit, |n| vdw_escape(n, r, len))
}

/// Least `n` such that every `r`-coloring of `[1..n]` has a monochromatic
/// `x + y = z`, scanning up to `limit`.
pub fn schur_threshold(r: u32, limit: u64) -> Result<Threshold> {
    threshold(limit, |n| schur_escape(n, r))
}
