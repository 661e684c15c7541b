//! Finite sums, family sums and the dyadic stand-in for membership in an
//! idempotent ultrafilter.
//!
//! The greedy constructions ask "is B large?" at every step. Here "large"
//! means: B contains a full dyadic block `FS(<2^m, .., 2^(m+d-1)>)` for some
//! `m`. That is a heuristic, so every constructor re-checks its output with
//! an exact verifier and turns a failed search into
//! [`Error::OracleExhausted`] rather than a wrong answer.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::foundation::{GroundWindow, Membership, SubsetMask};

/// A nonempty finite sequence of naturals `<x_1, .., x_k>`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<u64>", into = "Vec<u64>")]
pub struct FiniteSeq(Vec<u64>);

impl FiniteSeq {
    pub fn new(terms: Vec<u64>) -> Result<Self> {
        if terms.is_empty() {
            return Err(Error::invalid("a finite sequence needs at least one term"));
        }
        if terms.contains(&0) {
            return Err(Error::invalid("sequence terms must be >= 1"));
        }
        Ok(FiniteSeq(terms))
    }

    pub fn terms(&self) -> &[u64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }
}

impl TryFrom<Vec<u64>> for FiniteSeq {
    type Error = Error;
    fn try_from(v: Vec<u64>) -> Result<Self> {
        FiniteSeq::new(v)
    }
}

impl From<FiniteSeq> for Vec<u64> {
    fn from(s: FiniteSeq) -> Self {
        s.0
    }
}

/// All subset sums of `terms` over nonempty index sets, sorted and deduplicated.
/// Returns `None` on `u64` overflow.
pub fn fs_values(terms: &[u64]) -> Option<Vec<u64>> {
    let mut sums: Vec<u64> = Vec::with_capacity((1usize << terms.len().min(20)) - 1);
    for &x in terms {
        let mut next = Vec::with_capacity(sums.len() * 2 + 1);
        next.push(x);
        for &s in &sums {
            next.push(s);
            next.push(s.checked_add(x)?);
        }
        sums = next;
    }
    sums.sort_unstable();
    sums.dedup();
    Some(sums)
}

/// `FS(<x_n>)` as a subset of the window.
pub fn finite_sums(xs: &FiniteSeq, window: GroundWindow) -> Result<SubsetMask> {
    let overflow = || Error::WindowOverflow {
        value: xs.terms().iter().fold(0u64, |a, &b| a.saturating_add(b)),
        n_max: window.n_max(),
    };
    let sums = fs_values(xs.terms()).ok_or_else(overflow)?;
    if let Some(&top) = sums.last() {
        window.check(top)?;
    }
    SubsetMask::from_members(window, sums)
}

/// `{a + b : a in left, b in right}`, sorted and deduplicated.
pub(crate) fn sumset(left: &[u64], right: &[u64]) -> Option<Vec<u64>> {
    let mut out = Vec::with_capacity(left.len() * right.len());
    for &a in left {
        for &b in right {
            out.push(a.checked_add(b)?);
        }
    }
    out.sort_unstable();
    out.dedup();
    Some(out)
}

fn family_parts<'a, T>(f: &BTreeSet<usize>, y: &'a BTreeMap<usize, Vec<T>>) -> Result<Vec<&'a [T]>> {
    if f.is_empty() {
        return Err(Error::invalid("family sums need a nonempty index set"));
    }
    f.iter()
        .map(|n| match y.get(n) {
            Some(v) if !v.is_empty() => Ok(v.as_slice()),
            Some(_) => Err(Error::invalid(format!("Y_{n} is empty"))),
            None => Err(Error::invalid(format!("Y_{n} is not defined"))),
        })
        .collect()
}

/// `sum_{n in F} Y_n`: every sum taking one point from each `Y_n`.
pub fn family_sum(
    f: &BTreeSet<usize>,
    y: &BTreeMap<usize, Vec<u64>>,
    window: GroundWindow,
) -> Result<BTreeSet<u64>> {
    let mut acc = vec![0u64];
    for part in family_parts(f, y)? {
        let mut vals = part.to_vec();
        vals.sort_unstable();
        vals.dedup();
        acc = sumset(&acc, &vals).ok_or(Error::WindowOverflow {
            value: u64::MAX,
            n_max: window.n_max(),
        })?;
    }
    if let Some(&top) = acc.last() {
        window.check(top)?;
    }
    Ok(acc.into_iter().collect())
}

/// Noncommutative family sum: concatenations `a_{n_1} a_{n_2} ..` taken in
/// increasing index order, one factor from each `Y_n`.
pub fn family_product<T: Clone + Ord>(
    f: &BTreeSet<usize>,
    y: &BTreeMap<usize, Vec<Vec<T>>>,
) -> Result<BTreeSet<Vec<T>>> {
    let mut acc: BTreeSet<Vec<T>> = BTreeSet::from([Vec::new()]);
    for part in family_parts(f, y)? {
        acc = acc
            .iter()
            .flat_map(|prefix| {
                part.iter().map(move |w| {
                    let mut out = prefix.clone();
                    out.extend_from_slice(w);
                    out
                })
            })
            .collect();
    }
    Ok(acc)
}

/// Stand-in oracle for an idempotent: `B` counts as large iff it contains
/// `FS(<2^m, .., 2^(m+depth-1)>)` for some `m` with `m + depth <= log2(n_max)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct DyadicOracle {
    window: GroundWindow,
    depth: u32,
}

impl DyadicOracle {
    pub const DEFAULT_DEPTH: u32 = 4;

    pub fn new(window: GroundWindow, depth: u32) -> Result<Self> {
        if depth == 0 {
            return Err(Error::invalid("oracle depth must be >= 1"));
        }
        if depth > window.log2_floor() {
            return Err(Error::invalid(format!(
                "oracle depth {depth} needs 2^{depth} <= n_max = {}",
                window.n_max()
            )));
        }
        Ok(DyadicOracle { window, depth })
    }

    pub fn window(&self) -> GroundWindow {
        self.window
    }

    pub fn depth(&self) -> u32 {
        self.depth
    }

    fn max_start(&self) -> u32 {
        self.window.log2_floor() - self.depth
    }

    fn block_top(&self) -> u64 {
        (1u64 << self.depth) - 1
    }

    /// True iff `offset + k*2^m` lies in `set` for all `1 <= k < 2^depth`,
    /// for some admissible `m`.
    fn has_block_after(&self, set: &dyn Membership, offset: u64) -> bool {
        let n_max = self.window.n_max();
        (0..=self.max_start()).any(|m| {
            let top = offset.checked_add(self.block_top() << m);
            top.is_some_and(|t| t <= n_max) && (1..=self.block_top()).all(|k| set.contains(offset + (k << m)))
        })
    }
}

/// Whether `b` contains a full dyadic block of the oracle's depth.
pub fn dyadic_member(b: &dyn Membership, oracle: &DyadicOracle) -> bool {
    oracle.has_block_after(b, 0)
}

/// Pointwise star test: `s in A` and `-s + A` is large.
pub fn star_contains(a: &dyn Membership, s: u64, oracle: &DyadicOracle) -> bool {
    a.contains(s) && oracle.has_block_after(a, s)
}

/// `A* = {s in A : -s + A is large}`, materialized.
pub fn star_set(a: &SubsetMask, oracle: &DyadicOracle) -> SubsetMask {
    Star::new(a, *oracle).to_mask()
}

/// Lazy view of `A*`.
#[derive(Clone, Copy)]
pub struct Star<'a> {
    set: &'a dyn Membership,
    oracle: DyadicOracle,
}

impl<'a> Star<'a> {
    pub fn new(set: &'a dyn Membership, oracle: DyadicOracle) -> Self {
        Star { set, oracle }
    }
}

impl Membership for Star<'_> {
    fn n_max(&self) -> u64 {
        self.set.n_max()
    }

    fn contains(&self, s: u64) -> bool {
        star_contains(self.set, s, &self.oracle)
    }

    fn next_member(&self, from: u64) -> Option<u64> {
        let mut from = from;
        loop {
            let s = self.set.next_member(from)?;
            if self.oracle.has_block_after(self.set, s) {
                return Some(s);
            }
            from = s + 1;
        }
    }
}
