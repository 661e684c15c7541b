//! Witness chains: per-index structures `Y_1, .., Y_K` with every family sum
//! `sum_{n in F} Y_n` inside `C_{min F}`.
//!
//! [`build_chain`] runs the greedy stage-by-stage construction against the
//! dyadic oracle and [`verify_chain`] checks the conclusion exhaustively.
//! Word chains live in [`hj`], the infinite-row variant in [`htplus`].

pub mod hj;
pub mod htplus;

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::foundation::{GroundWindow, Membership, TranslateMeet, WindowSet};
use crate::rado::{find_image_in_set, find_kernel_in_set, RationalMatrix};
use crate::report::VerificationReport;
use crate::sumsets::{fs_values, sumset, DyadicOracle, FiniteSeq, Star};

pub use hj::{build_word_chain, verify_word_chain, WordChain, WordChainFamily, WordChainViolation, WordOracle};
pub use htplus::{build_htplus_prefix, verify_htplus, HtplusBuilder, HtplusViolation, XMatrix};

/// Largest chain length accepted; the sets `M_k` grow like `3^K`.
pub const MAX_CHAIN_LEN: usize = 12;

/// `C_1, .., C_K` over one window together with the oracle standing in for
/// the idempotent they belong to.
///
/// JSON: `{"depth": d, "sets": [..]}` with each set in any [`WindowSet`] form.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "FamilyRepr", into = "FamilyRepr")]
pub struct ChainFamily {
    sets: Vec<WindowSet>,
    oracle: DyadicOracle,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct FamilyRepr {
    #[serde(default = "default_depth")]
    depth: u32,
    sets: Vec<WindowSet>,
}

fn default_depth() -> u32 {
    DyadicOracle::DEFAULT_DEPTH
}

impl TryFrom<FamilyRepr> for ChainFamily {
    type Error = Error;

    fn try_from(repr: FamilyRepr) -> Result<Self> {
        ChainFamily::new(repr.sets, repr.depth)
    }
}

impl From<ChainFamily> for FamilyRepr {
    fn from(f: ChainFamily) -> Self {
        FamilyRepr {
            depth: f.oracle.depth(),
            sets: f.sets,
        }
    }
}

impl ChainFamily {
    pub fn new(sets: Vec<WindowSet>, depth: u32) -> Result<Self> {
        let first = sets.first().ok_or_else(|| Error::invalid("a chain family needs at least one set"))?;
        let window = first.window();
        if sets.len() > MAX_CHAIN_LEN {
            return Err(Error::BoundsExceeded(format!(
                "chain families are capped at {MAX_CHAIN_LEN} sets, got {}",
                sets.len()
            )));
        }
        for (i, s) in sets.iter().enumerate() {
            if s.n_max() != window.n_max() {
                return Err(Error::invalid(format!(
                    "C_{} lives on [1..{}] but C_1 on [1..{}]",
                    i + 1,
                    s.n_max(),
                    window.n_max()
                )));
            }
            if s.is_empty() {
                return Err(Error::invalid(format!("C_{} is empty", i + 1)));
            }
        }
        let oracle = DyadicOracle::new(window, depth)?;
        Ok(ChainFamily { sets, oracle })
    }

    pub fn sets(&self) -> &[WindowSet] {
        &self.sets
    }

    pub fn oracle(&self) -> DyadicOracle {
        self.oracle
    }

    pub fn window(&self) -> GroundWindow {
        self.oracle.window()
    }

    pub fn len(&self) -> usize {
        self.sets.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }
}

/// What to build at each index, with the per-index parameter.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum StructureKind {
    /// Arithmetic progressions of the given lengths.
    Ap(Vec<usize>),
    /// Sequences of the given lengths whose finite sums lie in `C_n`.
    FsSeq(Vec<usize>),
    /// Entry sets of `A_n x_n`.
    Image(Vec<RationalMatrix>),
    /// Entry sets of solutions of `A_n x_n = 0`.
    Kernel(Vec<RationalMatrix>),
}

impl StructureKind {
    pub fn len(&self) -> usize {
        match self {
            StructureKind::Ap(v) | StructureKind::FsSeq(v) => v.len(),
            StructureKind::Image(v) | StructureKind::Kernel(v) => v.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn name(&self) -> &'static str {
        match self {
            StructureKind::Ap(_) => "ap",
            StructureKind::FsSeq(_) => "fs_seq",
            StructureKind::Image(_) => "image",
            StructureKind::Kernel(_) => "kernel",
        }
    }
}

/// One `Y_n`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Witness {
    Ap { first: u64, step: u64, length: usize },
    FsSeq { terms: FiniteSeq },
    Image { matrix: RationalMatrix, x: Vec<u64> },
    Kernel { matrix: RationalMatrix, x: Vec<u64> },
}

impl Witness {
    /// The points of `Y_n` taking part in family sums, or why the witness is
    /// malformed.
    pub fn points(&self) -> std::result::Result<Vec<u64>, String> {
        let mut pts = match self {
            Witness::Ap { first, step, length } => {
                if *first == 0 || *step == 0 || *length == 0 {
                    return Err("progressions need first, step and length >= 1".into());
                }
                (0..*length as u64)
                    .map(|i| i.checked_mul(*step).and_then(|d| d.checked_add(*first)))
                    .collect::<Option<Vec<u64>>>()
                    .ok_or("progression overflows u64")?
            }
            Witness::FsSeq { terms } => terms.terms().to_vec(),
            Witness::Image { matrix, x } => {
                if x.len() != matrix.cols() || x.contains(&0) {
                    return Err(format!("x must be a vector of {} naturals", matrix.cols()));
                }
                matrix.image_entries(x).ok_or("some entry of A x is not a natural")?
            }
            Witness::Kernel { matrix, x } => {
                if x.len() != matrix.cols() || x.contains(&0) {
                    return Err(format!("x must be a vector of {} naturals", matrix.cols()));
                }
                if matrix.apply(x).iter().any(|v| *v != 0.into()) {
                    return Err("A x is not the zero vector".into());
                }
                x.clone()
            }
        };
        pts.sort_unstable();
        pts.dedup();
        Ok(pts)
    }

    /// Elements that must lie in `C_n`: the finite sums for sequences,
    /// the points otherwise.
    fn required(&self, window: GroundWindow) -> Result<std::result::Result<Vec<u64>, String>> {
        let pts = match self.points() {
            Ok(p) => p,
            Err(e) => return Ok(Err(e)),
        };
        let req = match self {
            Witness::FsSeq { terms } => fs_values(terms.terms()).ok_or(Error::WindowOverflow {
                value: u64::MAX,
                n_max: window.n_max(),
            })?,
            _ => pts,
        };
        if let Some(&top) = req.last() {
            window.check(top)?;
        }
        Ok(Ok(req))
    }
}

/// `Y_1, .., Y_K`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WitnessChain {
    pub witnesses: Vec<Witness>,
}

/// Indices are 1-based, as in `C_1, .., C_K`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum ChainViolation {
    Structure { index: usize, reason: String },
    PerIndex { index: usize, element: u64 },
    FamilySum { subset: Vec<usize>, element: u64 },
}

/// Checks `Y_n` against `C_n` for each `n` and `sum_{n in F} Y_n ⊆ C_{min F}`
/// for every nonempty `F ⊆ {1..K}`. `checked` counts the family-sum
/// elements examined.
pub fn verify_chain(family: &ChainFamily, chain: &WitnessChain) -> Result<VerificationReport<ChainViolation>> {
    if chain.witnesses.len() != family.len() {
        return Err(Error::invalid(format!(
            "{} witnesses for a family of {} sets",
            chain.witnesses.len(),
            family.len()
        )));
    }
    let window = family.window();
    let mut violations = Vec::new();
    let mut points = Vec::with_capacity(family.len());
    for (i, (w, c)) in chain.witnesses.iter().zip(family.sets()).enumerate() {
        match w.required(window)? {
            Err(reason) => violations.push(ChainViolation::Structure { index: i + 1, reason }),
            Ok(req) => violations.extend(
                req.into_iter()
                    .filter(|&e| !c.contains(e))
                    .map(|element| ChainViolation::PerIndex { index: i + 1, element }),
            ),
        }
        points.push(w.points().ok());
    }
    if points.iter().any(Option::is_none) {
        return Ok(VerificationReport::new(0, violations));
    }
    let points: Vec<Vec<u64>> = points.into_iter().map(Option::unwrap).collect();
    let sets: Vec<&dyn Membership> = family.sets().iter().map(|s| s as &dyn Membership).collect();
    let checked = check_family_sums(&sets, &points, window, &mut |subset, element| {
        violations.push(ChainViolation::FamilySum { subset, element })
    })?;
    Ok(VerificationReport::new(checked, violations))
}

/// Walks every nonempty `F` depth-first, carrying the partial sumset, and
/// reports each element of `sum_F Y` outside `sets[min F]`. Returns the
/// number of elements examined.
pub(crate) fn check_family_sums(
    sets: &[&dyn Membership],
    points: &[Vec<u64>],
    window: GroundWindow,
    report: &mut dyn FnMut(Vec<usize>, u64),
) -> Result<u64> {
    #[allow(clippy::too_many_arguments)]
    fn dfs(
        min: usize,
        subset: &mut Vec<usize>,
        acc: &[u64],
        sets: &[&dyn Membership],
        points: &[Vec<u64>],
        window: GroundWindow,
        report: &mut dyn FnMut(Vec<usize>, u64),
        checked: &mut u64,
    ) -> Result<()> {
        if let Some(&top) = acc.last() {
            window.check(top)?;
        }
        *checked += acc.len() as u64;
        for &e in acc {
            if !sets[min].contains(e) {
                report(subset.iter().map(|i| i + 1).collect(), e);
            }
        }
        let last = *subset.last().expect("subsets are nonempty");
        for next in last + 1..points.len() {
            let sums = sumset(acc, &points[next]).ok_or(Error::WindowOverflow {
                value: u64::MAX,
                n_max: window.n_max(),
            })?;
            subset.push(next);
            dfs(min, subset, &sums, sets, points, window, report, checked)?;
            subset.pop();
        }
        Ok(())
    }

    let mut checked = 0;
    for k in 0..points.len() {
        let mut subset = vec![k];
        dfs(k, &mut subset, &points[k], sets, points, window, report, &mut checked)?;
    }
    Ok(checked)
}

/// Search bounds for the constructors.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BuildOptions {
    /// Entries of matrix witnesses are searched in `[1..x_max]`.
    pub x_max: u64,
    /// Candidate evaluations allowed per stage for progression and
    /// sequence searches.
    pub budget: u64,
}

impl Default for BuildOptions {
    fn default() -> Self {
        BuildOptions {
            x_max: 128,
            budget: 1 << 21,
        }
    }
}

pub(crate) enum Search<T> {
    Found(T),
    Absent,
    OutOfBudget,
}

pub(crate) struct Budget(u64);

impl Budget {
    pub(crate) fn new(n: u64) -> Self {
        Budget(n)
    }

    fn spend(&mut self) -> bool {
        if self.0 == 0 {
            return false;
        }
        self.0 -= 1;
        true
    }
}

/// Least `(first, step)` with `first + i*step in A` for `0 <= i < len`.
pub fn find_ap_in_set(a: &dyn Membership, len: usize) -> Option<(u64, u64)> {
    match search_ap(a, len, &mut Budget::new(u64::MAX)) {
        Search::Found(p) => Some(p),
        _ => None,
    }
}

pub(crate) fn search_ap(a: &dyn Membership, len: usize, budget: &mut Budget) -> Search<(u64, u64)> {
    if len == 0 {
        return Search::Absent;
    }
    let n_max = a.n_max();
    let mut from = 1;
    while let Some(first) = a.next_member(from) {
        if len == 1 {
            return Search::Found((first, 1));
        }
        let max_step = (n_max - first) / (len as u64 - 1);
        let mut next = first + 1;
        while let Some(second) = a.next_member(next) {
            let step = second - first;
            if step > max_step {
                break;
            }
            if !budget.spend() {
                return Search::OutOfBudget;
            }
            if (2..len as u64).all(|i| a.contains(first + i * step)) {
                return Search::Found((first, step));
            }
            next = second + 1;
        }
        from = first + 1;
    }
    Search::Absent
}

/// Least-first search for `x_1 < .. < x_len` with `FS(<x_j>) ⊆ A`, where
/// each term exceeds the sum of the earlier ones.
pub fn find_fs_seq_in_set(a: &dyn Membership, len: usize) -> Option<FiniteSeq> {
    match search_fs(a, len, &mut Budget::new(u64::MAX)) {
        Search::Found(s) => Some(s),
        _ => None,
    }
}

pub(crate) fn search_fs(a: &dyn Membership, len: usize, budget: &mut Budget) -> Search<FiniteSeq> {
    fn dfs(
        a: &dyn Membership,
        len: usize,
        terms: &mut Vec<u64>,
        sums: &mut Vec<u64>,
        total: u64,
        budget: &mut Budget,
    ) -> Option<bool> {
        if terms.len() == len {
            return Some(true);
        }
        let mut from = total + 1;
        while let Some(x) = a.next_member(from) {
            if x.checked_add(total).is_none_or(|t| t > a.n_max()) {
                break;
            }
            if !budget.spend() {
                return None;
            }
            if sums.iter().all(|&s| a.contains(s + x)) {
                let old = sums.len();
                sums.push(x);
                for i in 0..old {
                    sums.push(sums[i] + x);
                }
                terms.push(x);
                if dfs(a, len, terms, sums, total + x, budget)? {
                    return Some(true);
                }
                terms.pop();
                sums.truncate(old);
            }
            from = x + 1;
        }
        Some(false)
    }

    if len == 0 {
        return Search::Absent;
    }
    let mut terms = Vec::with_capacity(len);
    match dfs(a, len, &mut terms, &mut Vec::new(), 0, budget) {
        Some(true) => Search::Found(FiniteSeq::new(terms).expect("terms are naturals")),
        Some(false) => Search::Absent,
        None => Search::OutOfBudget,
    }
}

/// `M ∪ (M + Y)`, both sorted.
pub(crate) fn extend_sums(m: &[u64], y: &[u64]) -> Option<Vec<u64>> {
    let mut out = sumset(m, y)?;
    out.extend_from_slice(m);
    out.sort_unstable();
    out.dedup();
    Some(out)
}

/// Greedy construction: stage `n` searches
/// `C_n* ∩ ⋂_{k<n} ⋂_{a in M_k} (-a + C_k*)` where `M_k` collects the family
/// sums with least index `k` chosen so far. The result is verified before
/// it is returned.
pub fn build_chain(family: &ChainFamily, kind: &StructureKind, opts: &BuildOptions) -> Result<WitnessChain> {
    if kind.len() != family.len() {
        return Err(Error::invalid(format!(
            "{} parameters for a family of {} sets",
            kind.len(),
            family.len()
        )));
    }
    match kind {
        StructureKind::Ap(v) | StructureKind::FsSeq(v) if v.contains(&0) => {
            return Err(Error::invalid("lengths must be >= 1"));
        }
        _ => {}
    }
    let oracle = family.oracle();
    let n_max = family.window().n_max();
    let stars: Vec<Star> = family.sets().iter().map(|s| Star::new(s, oracle)).collect();
    let stars = &stars;
    let mut sums: Vec<Vec<u64>> = Vec::with_capacity(family.len());
    let mut witnesses = Vec::with_capacity(family.len());

    for n in 0..family.len() {
        let target = TranslateMeet {
            base: &stars[n],
            shifts: (0..n)
                .flat_map(|k| sums[k].iter().map(move |&a| (a, &stars[k] as &dyn Membership)))
                .collect(),
        };
        let mut budget = Budget::new(opts.budget);
        let found = match kind {
            StructureKind::Ap(lens) => match search_ap(&target, lens[n], &mut budget) {
                Search::Found((first, step)) => Search::Found(Witness::Ap {
                    first,
                    step,
                    length: lens[n],
                }),
                Search::Absent => Search::Absent,
                Search::OutOfBudget => Search::OutOfBudget,
            },
            StructureKind::FsSeq(lens) => match search_fs(&target, lens[n], &mut budget) {
                Search::Found(terms) => Search::Found(Witness::FsSeq { terms }),
                Search::Absent => Search::Absent,
                Search::OutOfBudget => Search::OutOfBudget,
            },
            StructureKind::Image(ms) => match find_image_in_set(&ms[n], &target, opts.x_max.min(n_max)) {
                Some(x) => Search::Found(Witness::Image {
                    matrix: ms[n].clone(),
                    x,
                }),
                None => Search::Absent,
            },
            StructureKind::Kernel(ms) => match find_kernel_in_set(&ms[n], &target, opts.x_max.min(n_max)) {
                Some(x) => Search::Found(Witness::Kernel {
                    matrix: ms[n].clone(),
                    x,
                }),
                None => Search::Absent,
            },
        };
        let witness = match found {
            Search::Found(w) => w,
            Search::Absent => {
                return Err(Error::exhausted(
                    format!("stage {}", n + 1),
                    diagnose(stars, &sums, n, kind.name()),
                ))
            }
            Search::OutOfBudget => {
                return Err(Error::exhausted(
                    format!("stage {}", n + 1),
                    format!("search budget of {} candidates spent without a {} witness", opts.budget, kind.name()),
                ))
            }
        };
        let pts = witness.points().map_err(Error::VerificationFailed)?;
        let overflow = || Error::WindowOverflow {
            value: u64::MAX,
            n_max,
        };
        for m in sums.iter_mut() {
            *m = extend_sums(m, &pts).ok_or_else(overflow)?;
        }
        sums.push(pts);
        witnesses.push(witness);
    }

    let chain = WitnessChain { witnesses };
    let report = verify_chain(family, &chain)?;
    if !report.passed {
        return Err(Error::VerificationFailed(format!(
            "greedy chain has {} violations, first {:?}",
            report.violations.len(),
            report.violations[0]
        )));
    }
    Ok(chain)
}

/// Names the first constraint that empties the stage-`n` target, adding the
/// translates one earlier index at a time.
fn diagnose(stars: &[Star], sums: &[Vec<u64>], n: usize, kind: &str) -> String {
    if stars[n].is_empty() {
        return format!("C_{}* is empty under the oracle", n + 1);
    }
    for k in 0..n {
        let partial = TranslateMeet {
            base: &stars[n],
            shifts: (0..=k)
                .flat_map(|j| sums[j].iter().map(move |&a| (a, &stars[j] as &dyn Membership)))
                .collect(),
        };
        if partial.is_empty() {
            return format!(
                "target emptied by the {} translates -a + C_{}*, a in M_{}",
                sums[k].len(),
                k + 1,
                k + 1
            );
        }
    }
    format!("target is nonempty but holds no {kind} witness within the search bounds")
}

/// Distinct subsets (1-based) among the family-sum violations.
pub fn violating_subsets(report: &VerificationReport<ChainViolation>) -> BTreeSet<Vec<usize>> {
    report
        .violations
        .iter()
        .filter_map(|v| match v {
            ChainViolation::FamilySum { subset, .. } => Some(subset.clone()),
            _ => None,
        })
        .collect()
}
