//! Ground window arithmetic, subsets of the window, colorings and exact
//! rationals.
//!
//! Every infinite subset of the naturals that the constructions talk about is
//! handled as its truncation to a window `[1..n_max]`. Elements whose sums
//! leave the window are treated as absent.
//!
//! Sets come in two flavours. [`SubsetMask`] is an explicit bitset and is the
//! right choice for windows up to a few million. [`WindowSet`] adds symbolic
//! descriptions (multiples of `k`, finite sums of a set of powers of two) so
//! that windows like `[1..2^30]` cost nothing to store. Both implement
//! [`Membership`], which is all the search kernels need.

use std::fmt;

use num_rational::Ratio;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// The window `[1..n_max]` standing in for the naturals.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct GroundWindow {
    n_max: u64,
}

impl GroundWindow {
    pub fn new(n_max: u64) -> Result<Self> {
        if n_max == 0 {
            return Err(Error::invalid("window must satisfy n_max >= 1"));
        }
        Ok(GroundWindow { n_max })
    }

    /// Window `[1..2^exp]`.
    pub fn pow2(exp: u32) -> Result<Self> {
        if exp > 62 {
            return Err(Error::invalid(format!("window 2^{exp} is too large")));
        }
        Self::new(1u64 << exp)
    }

    pub fn n_max(&self) -> u64 {
        self.n_max
    }

    pub fn contains(&self, x: u64) -> bool {
        x >= 1 && x <= self.n_max
    }

    /// `floor(log2(n_max))`.
    pub fn log2_floor(&self) -> u32 {
        63 - self.n_max.leading_zeros()
    }

    /// Returns `x` if it lies in the window, `WindowOverflow` otherwise.
    pub fn check(&self, x: u64) -> Result<u64> {
        if self.contains(x) {
            Ok(x)
        } else {
            Err(Error::WindowOverflow {
                value: x,
                n_max: self.n_max,
            })
        }
    }
}

/// Read access to a subset of a ground window.
///
/// `next_member` has a linear-scan default; implementors with structure
/// should override it since every witness search walks sets through it.
pub trait Membership {
    fn n_max(&self) -> u64;

    fn contains(&self, x: u64) -> bool;

    /// Least member `>= from`.
    fn next_member(&self, from: u64) -> Option<u64> {
        let mut x = from.max(1);
        while x <= self.n_max() {
            if self.contains(x) {
                return Some(x);
            }
            x += 1;
        }
        None
    }

    fn is_empty(&self) -> bool {
        self.next_member(1).is_none()
    }

    fn members(&self) -> MemberIter<'_, Self>
    where
        Self: Sized,
    {
        MemberIter { set: self, from: 1 }
    }

    /// Materializes the set as an explicit bitset.
    fn to_mask(&self) -> SubsetMask {
        let window = GroundWindow::new(self.n_max()).expect("n_max >= 1");
        let mut mask = SubsetMask::empty(window);
        let mut from = 1;
        while let Some(x) = self.next_member(from) {
            mask.insert(x);
            from = x + 1;
        }
        mask
    }
}

impl<M: Membership + ?Sized> Membership for &M {
    fn n_max(&self) -> u64 {
        (**self).n_max()
    }
    fn contains(&self, x: u64) -> bool {
        (**self).contains(x)
    }
    fn next_member(&self, from: u64) -> Option<u64> {
        (**self).next_member(from)
    }
}

/// Ascending iterator over the members of a set.
pub struct MemberIter<'a, M: Membership + ?Sized> {
    set: &'a M,
    from: u64,
}

impl<'a, M: Membership + ?Sized> MemberIter<'a, M> {
    pub fn new(set: &'a M) -> Self {
        MemberIter { set, from: 1 }
    }
}

impl<M: Membership + ?Sized> Iterator for MemberIter<'_, M> {
    type Item = u64;

    fn next(&mut self) -> Option<u64> {
        if self.from > self.set.n_max() {
            return None;
        }
        let x = self.set.next_member(self.from)?;
        self.from = x + 1;
        Some(x)
    }
}

/// Explicit subset of `[1..n_max]`, one bit per element.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "MaskRepr", into = "MaskRepr")]
pub struct SubsetMask {
    window: GroundWindow,
    bits: Vec<u64>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct MaskRepr {
    n_max: u64,
    members: Vec<u64>,
}

impl TryFrom<MaskRepr> for SubsetMask {
    type Error = Error;

    fn try_from(repr: MaskRepr) -> Result<Self> {
        SubsetMask::from_members(GroundWindow::new(repr.n_max)?, repr.members)
    }
}

impl From<SubsetMask> for MaskRepr {
    fn from(mask: SubsetMask) -> Self {
        MaskRepr {
            n_max: mask.window.n_max(),
            members: mask.to_vec(),
        }
    }
}

impl SubsetMask {
    pub fn empty(window: GroundWindow) -> Self {
        let words = (window.n_max() as usize).div_ceil(64);
        SubsetMask {
            window,
            bits: vec![0; words],
        }
    }

    pub fn full(window: GroundWindow) -> Self {
        let mut mask = Self::empty(window);
        mask.bits.iter_mut().for_each(|w| *w = u64::MAX);
        mask.clear_tail();
        mask
    }

    /// Builds a mask from members; every member must lie in the window.
    pub fn from_members(window: GroundWindow, members: impl IntoIterator<Item = u64>) -> Result<Self> {
        let mut mask = Self::empty(window);
        for x in members {
            window.check(x)?;
            mask.insert(x);
        }
        Ok(mask)
    }

    /// Members of `[1..n_max]` satisfying `pred`.
    pub fn from_predicate(window: GroundWindow, pred: impl Fn(u64) -> bool) -> Self {
        let mut mask = Self::empty(window);
        for x in 1..=window.n_max() {
            if pred(x) {
                mask.insert(x);
            }
        }
        mask
    }

    pub fn window(&self) -> GroundWindow {
        self.window
    }

    /// Inserts `x`; values outside the window are ignored.
    pub fn insert(&mut self, x: u64) {
        if self.window.contains(x) {
            let i = (x - 1) as usize;
            self.bits[i / 64] |= 1 << (i % 64);
        }
    }

    pub fn remove(&mut self, x: u64) {
        if self.window.contains(x) {
            let i = (x - 1) as usize;
            self.bits[i / 64] &= !(1 << (i % 64));
        }
    }

    pub fn len(&self) -> usize {
        self.bits.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn to_vec(&self) -> Vec<u64> {
        MemberIter::new(self).collect()
    }

    pub fn intersection(&self, other: &SubsetMask) -> SubsetMask {
        assert_eq!(self.window, other.window, "window mismatch");
        SubsetMask {
            window: self.window,
            bits: self.bits.iter().zip(&other.bits).map(|(a, b)| a & b).collect(),
        }
    }

    pub fn union(&self, other: &SubsetMask) -> SubsetMask {
        assert_eq!(self.window, other.window, "window mismatch");
        SubsetMask {
            window: self.window,
            bits: self.bits.iter().zip(&other.bits).map(|(a, b)| a | b).collect(),
        }
    }

    pub fn complement(&self) -> SubsetMask {
        let mut out = SubsetMask {
            window: self.window,
            bits: self.bits.iter().map(|w| !w).collect(),
        };
        out.clear_tail();
        out
    }

    pub fn is_subset(&self, other: &SubsetMask) -> bool {
        self.window == other.window && self.bits.iter().zip(&other.bits).all(|(a, b)| a & !b == 0)
    }

    fn clear_tail(&mut self) {
        let n = self.window.n_max() as usize;
        if !n.is_multiple_of(64) {
            if let Some(last) = self.bits.last_mut() {
                *last &= (1u64 << (n % 64)) - 1;
            }
        }
    }
}

impl Membership for SubsetMask {
    fn n_max(&self) -> u64 {
        self.window.n_max()
    }

    fn contains(&self, x: u64) -> bool {
        if !self.window.contains(x) {
            return false;
        }
        let i = (x - 1) as usize;
        self.bits[i / 64] >> (i % 64) & 1 == 1
    }

    fn next_member(&self, from: u64) -> Option<u64> {
        let from = from.max(1);
        if from > self.window.n_max() {
            return None;
        }
        let start = (from - 1) as usize;
        let mut word = start / 64;
        let mut cur = self.bits[word] & (u64::MAX << (start % 64));
        loop {
            if cur != 0 {
                return Some((word * 64 + cur.trailing_zeros() as usize) as u64 + 1);
            }
            word += 1;
            if word >= self.bits.len() {
                return None;
            }
            cur = self.bits[word];
        }
    }

    fn to_mask(&self) -> SubsetMask {
        self.clone()
    }
}

impl fmt::Debug for SubsetMask {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let members = self.to_vec();
        if members.len() <= 32 {
            write!(f, "SubsetMask[1..{}]{:?}", self.window.n_max(), members)
        } else {
            write!(
                f,
                "SubsetMask[1..{}]{{{} members, first {:?}}}",
                self.window.n_max(),
                members.len(),
                &members[..8]
            )
        }
    }
}

/// A subset of the window given either explicitly or by a closed form.
///
/// JSON forms (distinguished by their fields):
/// `{"n_max": N, "members": [..]}`, `{"n_max": N, "multiples_of": k}` and
/// `{"n_max": N, "dyadic_exponents": [j, ..]}`. The last one is
/// `FS(<2^j>_{j in J})` cut to the window: every number whose binary
/// digits all sit at positions in `J`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum WindowSet {
    Mask(SubsetMask),
    Multiples(Multiples),
    Dyadic(DyadicSupport),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Multiples {
    pub n_max: u64,
    pub multiples_of: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "DyadicRepr", into = "DyadicRepr")]
pub struct DyadicSupport {
    n_max: u64,
    support: u64,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct DyadicRepr {
    n_max: u64,
    dyadic_exponents: Vec<u32>,
}

impl TryFrom<DyadicRepr> for DyadicSupport {
    type Error = Error;

    fn try_from(repr: DyadicRepr) -> Result<Self> {
        DyadicSupport::new(GroundWindow::new(repr.n_max)?, repr.dyadic_exponents)
    }
}

impl From<DyadicSupport> for DyadicRepr {
    fn from(d: DyadicSupport) -> Self {
        DyadicRepr {
            n_max: d.n_max,
            dyadic_exponents: d.exponents(),
        }
    }
}

impl DyadicSupport {
    pub fn new(window: GroundWindow, exponents: impl IntoIterator<Item = u32>) -> Result<Self> {
        let mut support = 0u64;
        for j in exponents {
            if j > 62 {
                return Err(Error::invalid(format!("dyadic exponent {j} exceeds 62")));
            }
            support |= 1 << j;
        }
        Ok(DyadicSupport {
            n_max: window.n_max(),
            support,
        })
    }

    /// `FS(<2^j>_{j >= from})` cut to the window, i.e. the positive
    /// multiples of `2^from`.
    pub fn tail(window: GroundWindow, from: u32) -> Result<Self> {
        Self::new(window, from..=window.log2_floor())
    }

    pub fn exponents(&self) -> Vec<u32> {
        (0..64).filter(|j| self.support >> j & 1 == 1).collect()
    }
}

impl Membership for Multiples {
    fn n_max(&self) -> u64 {
        self.n_max
    }

    fn contains(&self, x: u64) -> bool {
        x >= 1 && x <= self.n_max && self.multiples_of != 0 && x.is_multiple_of(self.multiples_of)
    }

    fn next_member(&self, from: u64) -> Option<u64> {
        if self.multiples_of == 0 {
            return None;
        }
        let from = from.max(1);
        let x = from.div_ceil(self.multiples_of).checked_mul(self.multiples_of)?;
        (x <= self.n_max).then_some(x)
    }
}

impl Membership for DyadicSupport {
    fn n_max(&self) -> u64 {
        self.n_max
    }

    fn contains(&self, x: u64) -> bool {
        x >= 1 && x <= self.n_max && x & !self.support == 0
    }

    fn next_member(&self, from: u64) -> Option<u64> {
        let v = from.max(1);
        if v > self.n_max {
            return None;
        }
        let bad = v & !self.support;
        let x = if bad == 0 {
            v
        } else {
            // Smallest submask of `support` above v: keep v's bits above some
            // free support position p > (highest bad bit), set p, clear below.
            let h = 63 - bad.leading_zeros();
            let free = self.support & !v & (u64::MAX << h << 1);
            if free == 0 {
                return None;
            }
            let p = free.trailing_zeros();
            (v & (u64::MAX << p)) | (1 << p)
        };
        (x <= self.n_max).then_some(x)
    }
}

impl Membership for WindowSet {
    fn n_max(&self) -> u64 {
        match self {
            WindowSet::Mask(m) => m.n_max(),
            WindowSet::Multiples(m) => m.n_max(),
            WindowSet::Dyadic(d) => d.n_max(),
        }
    }

    fn contains(&self, x: u64) -> bool {
        match self {
            WindowSet::Mask(m) => m.contains(x),
            WindowSet::Multiples(m) => m.contains(x),
            WindowSet::Dyadic(d) => d.contains(x),
        }
    }

    fn next_member(&self, from: u64) -> Option<u64> {
        match self {
            WindowSet::Mask(m) => m.next_member(from),
            WindowSet::Multiples(m) => m.next_member(from),
            WindowSet::Dyadic(d) => d.next_member(from),
        }
    }
}

impl WindowSet {
    pub fn multiples(window: GroundWindow, k: u64) -> Result<Self> {
        if k == 0 {
            return Err(Error::invalid("multiples_of must be >= 1"));
        }
        Ok(WindowSet::Multiples(Multiples {
            n_max: window.n_max(),
            multiples_of: k,
        }))
    }

    pub fn window(&self) -> GroundWindow {
        GroundWindow::new(self.n_max()).expect("window sets always have n_max >= 1")
    }
}

impl From<SubsetMask> for WindowSet {
    fn from(mask: SubsetMask) -> Self {
        WindowSet::Mask(mask)
    }
}

impl From<DyadicSupport> for WindowSet {
    fn from(d: DyadicSupport) -> Self {
        WindowSet::Dyadic(d)
    }
}

/// `{y in [1..n_max] : x + y in A}`; sums leaving the window count as absent.
pub fn preimage_shift(a: &SubsetMask, x: u64) -> SubsetMask {
    let mut out = SubsetMask::empty(a.window());
    for m in MemberIter::new(a).filter(|&m| m > x) {
        out.insert(m - x);
    }
    out
}

/// `base ∩ ⋂ (-x + A)` over the listed shifts.
pub fn intersect_translates(base: &SubsetMask, shifts: &[(u64, &SubsetMask)]) -> SubsetMask {
    shifts
        .iter()
        .fold(base.clone(), |acc, (x, a)| acc.intersection(&preimage_shift(a, *x)))
}

/// Lazy `-by + set`: `y` is a member iff `y + by` is a member of `set`.
#[derive(Clone, Copy)]
pub struct Shifted<'a> {
    pub set: &'a dyn Membership,
    pub by: u64,
}

impl Membership for Shifted<'_> {
    fn n_max(&self) -> u64 {
        self.set.n_max()
    }

    fn contains(&self, y: u64) -> bool {
        y >= 1 && y <= self.n_max() && y.checked_add(self.by).is_some_and(|s| self.set.contains(s))
    }

    fn next_member(&self, from: u64) -> Option<u64> {
        let from = from.max(1);
        let s = self.set.next_member(from.checked_add(self.by)?)?;
        Some(s - self.by)
    }
}

/// Lazy intersection of a base set with translates, the target shape of
/// every greedy stage.
pub struct TranslateMeet<'a> {
    pub base: &'a dyn Membership,
    pub shifts: Vec<(u64, &'a dyn Membership)>,
}

impl Membership for TranslateMeet<'_> {
    fn n_max(&self) -> u64 {
        self.base.n_max()
    }

    fn contains(&self, y: u64) -> bool {
        self.base.contains(y)
            && self
                .shifts
                .iter()
                .all(|&(by, set)| y.checked_add(by).is_some_and(|s| set.contains(s)))
    }

    fn next_member(&self, from: u64) -> Option<u64> {
        let mut from = from;
        loop {
            let y = self.base.next_member(from)?;
            if self.contains(y) {
                return Some(y);
            }
            from = y + 1;
        }
    }
}

/// Lazy intersection of several sets over the same window.
pub struct Meet<'a>(pub Vec<&'a dyn Membership>);

impl Membership for Meet<'_> {
    fn n_max(&self) -> u64 {
        self.0.first().map_or(0, |s| s.n_max())
    }

    fn contains(&self, x: u64) -> bool {
        !self.0.is_empty() && self.0.iter().all(|s| s.contains(x))
    }

    fn next_member(&self, from: u64) -> Option<u64> {
        let mut x = from.max(1);
        loop {
            // Leapfrog: advance to the largest of the sets' next members until
            // they agree.
            let mut agreed = true;
            for s in &self.0 {
                let next = s.next_member(x)?;
                if next != x {
                    x = next;
                    agreed = false;
                }
            }
            if agreed {
                return Some(x);
            }
        }
    }
}

/// Total coloring of `[1..n_max]` with colors `0..r`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "ColoringRepr", into = "ColoringRepr")]
pub struct Coloring {
    window: GroundWindow,
    r: u32,
    colors: Vec<u32>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ColoringRepr {
    n_max: u64,
    r: u32,
    colors: Vec<u32>,
}

impl TryFrom<ColoringRepr> for Coloring {
    type Error = Error;

    fn try_from(repr: ColoringRepr) -> Result<Self> {
        Coloring::new(GroundWindow::new(repr.n_max)?, repr.r, repr.colors)
    }
}

impl From<Coloring> for ColoringRepr {
    fn from(c: Coloring) -> Self {
        ColoringRepr {
            n_max: c.window.n_max(),
            r: c.r,
            colors: c.colors,
        }
    }
}

impl Coloring {
    pub fn new(window: GroundWindow, r: u32, colors: Vec<u32>) -> Result<Self> {
        if r == 0 {
            return Err(Error::invalid("a coloring needs at least one color"));
        }
        if colors.len() as u64 != window.n_max() {
            return Err(Error::invalid(format!(
                "coloring lists {} colors for a window of {}",
                colors.len(),
                window.n_max()
            )));
        }
        if let Some(c) = colors.iter().find(|&&c| c >= r) {
            return Err(Error::invalid(format!("color {c} is not below r = {r}")));
        }
        Ok(Coloring { window, r, colors })
    }

    /// The `index`-th coloring in base-`r` order (color of 1 is the least
    /// significant digit).
    pub fn from_index(window: GroundWindow, r: u32, mut index: u64) -> Self {
        let colors = (0..window.n_max())
            .map(|_| {
                let c = (index % r as u64) as u32;
                index /= r as u64;
                c
            })
            .collect();
        Coloring { window, r, colors }
    }

    pub fn window(&self) -> GroundWindow {
        self.window
    }

    pub fn r(&self) -> u32 {
        self.r
    }

    pub fn color(&self, x: u64) -> Option<u32> {
        self.window.contains(x).then(|| self.colors[(x - 1) as usize])
    }

    pub fn colors(&self) -> &[u32] {
        &self.colors
    }

    /// The color class of `c` as a subset of the window.
    pub fn class(&self, c: u32) -> SubsetMask {
        let mut mask = SubsetMask::empty(self.window);
        for (i, &col) in self.colors.iter().enumerate() {
            if col == c {
                mask.insert(i as u64 + 1);
            }
        }
        mask
    }

    pub fn classes(&self) -> Vec<SubsetMask> {
        (0..self.r).map(|c| self.class(c)).collect()
    }
}

/// Exact rational, always in lowest terms with a positive denominator.
pub type Rational = Ratio<i128>;

/// Parses `"p/q"` or `"p"`.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let num: i128 = num
        .parse()
        .map_err(|_| Error::invalid(format!("bad rational numerator in {s:?}")))?;
    let den: i128 = den
        .parse()
        .map_err(|_| Error::invalid(format!("bad rational denominator in {s:?}")))?;
    if den == 0 {
        return Err(Error::invalid(format!("zero denominator in {s:?}")));
    }
    Ok(Rational::new(num, den))
}

/// Formats as `"p"` for integers and `"p/q"` otherwise.
pub fn format_rational(q: &Rational) -> String {
    if *q.denom() == 1 {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(n: u64) -> GroundWindow {
        GroundWindow::new(n).unwrap()
    }

    fn mask(n: u64, xs: &[u64]) -> SubsetMask {
        SubsetMask::from_members(w(n), xs.iter().copied()).unwrap()
    }

    #[test]
    fn window_rejects_zero() {
        assert!(GroundWindow::new(0).is_err());
        assert_eq!(w(1024).log2_floor(), 10);
        assert_eq!(w(1023).log2_floor(), 9);
    }

    #[test]
    fn preimage_shift_examples() {
        assert_eq!(preimage_shift(&mask(6, &[2, 4, 6]), 2).to_vec(), vec![2, 4]);
        let full = SubsetMask::full(w(9));
        assert_eq!(preimage_shift(&full, 1).to_vec(), (1..=8).collect::<Vec<_>>());
        assert!(preimage_shift(&mask(5, &[5]), 5).to_vec().is_empty());
    }

    #[test]
    fn intersect_translates_examples() {
        let base = mask(10, &[1, 2, 3]);
        assert_eq!(intersect_translates(&base, &[]), base);

        let evens = SubsetMask::from_predicate(w(10), |x| x % 2 == 0);
        assert_eq!(intersect_translates(&evens, &[(2, &evens)]).to_vec(), vec![2, 4, 6, 8]);

        let base = mask(10, &[1, 2, 3, 4]);
        let a1 = mask(10, &[2, 3]);
        let a2 = mask(10, &[4]);
        assert_eq!(intersect_translates(&base, &[(1, &a1), (2, &a2)]).to_vec(), vec![2]);
    }

    #[test]
    fn out_of_window_members_are_rejected() {
        assert!(matches!(
            SubsetMask::from_members(w(4), [5]),
            Err(Error::WindowOverflow { value: 5, n_max: 4 })
        ));
    }

    #[test]
    fn full_and_complement_respect_the_tail() {
        let full = SubsetMask::full(w(70));
        assert_eq!(full.len(), 70);
        assert_eq!(full.next_member(70), Some(70));
        assert_eq!(full.next_member(71), None);
        let odd = SubsetMask::from_predicate(w(70), |x| x % 2 == 1);
        assert_eq!(odd.complement().len(), 35);
        assert!(odd.complement().contains(70));
    }

    #[test]
    fn dyadic_next_member_matches_scan() {
        let d = DyadicSupport::new(w(200), [0, 2, 5]).unwrap();
        let scanned: Vec<u64> = (1..=200).filter(|&x| d.contains(x)).collect();
        assert_eq!(d.members().collect::<Vec<_>>(), scanned);
        for from in 1..=201 {
            assert_eq!(d.next_member(from), scanned.iter().copied().find(|&x| x >= from));
        }
    }

    #[test]
    fn dyadic_tail_is_multiples() {
        let d = DyadicSupport::tail(w(1 << 12), 3).unwrap();
        let m = Multiples {
            n_max: 1 << 12,
            multiples_of: 8,
        };
        assert_eq!(d.to_mask(), m.to_mask());
    }

    #[test]
    fn meet_leapfrogs() {
        let a = Multiples {
            n_max: 100,
            multiples_of: 6,
        };
        let b = Multiples {
            n_max: 100,
            multiples_of: 4,
        };
        let meet = Meet(vec![&a, &b]);
        assert_eq!(meet.members().collect::<Vec<_>>(), vec![12, 24, 36, 48, 60, 72, 84, 96]);
    }

    #[test]
    fn shifted_and_translate_meet_agree_with_materialized() {
        let a = SubsetMask::from_predicate(w(60), |x| x % 3 != 1);
        let b = SubsetMask::from_predicate(w(60), |x| x % 5 < 3);
        let lazy = TranslateMeet {
            base: &a,
            shifts: vec![(4, &b), (7, &a)],
        };
        let eager = intersect_translates(&a, &[(4, &b), (7, &a)]);
        assert_eq!(lazy.to_mask(), eager);
        let shifted = Shifted { set: &b, by: 9 };
        assert_eq!(shifted.to_mask(), preimage_shift(&b, 9));
    }

    #[test]
    fn window_set_json_forms() {
        let m: WindowSet = serde_json::from_str(r#"{"n_max": 6, "members": [2, 4]}"#).unwrap();
        assert_eq!(m, WindowSet::Mask(mask(6, &[2, 4])));
        let k: WindowSet = serde_json::from_str(r#"{"n_max": 64, "multiples_of": 4}"#).unwrap();
        assert!(k.contains(8) && !k.contains(6));
        let d: WindowSet = serde_json::from_str(r#"{"n_max": 64, "dyadic_exponents": [1, 3]}"#).unwrap();
        assert_eq!(d.members().collect::<Vec<_>>(), vec![2, 8, 10]);
        assert_eq!(
            serde_json::to_string(&WindowSet::Mask(mask(6, &[2, 4]))).unwrap(),
            r#"{"n_max":6,"members":[2,4]}"#
        );
    }

    #[test]
    fn coloring_json_and_classes() {
        let c: Coloring = serde_json::from_str(r#"{"n_max": 4, "r": 2, "colors": [0, 1, 1, 0]}"#).unwrap();
        assert_eq!(c.class(0).to_vec(), vec![1, 4]);
        assert_eq!(c.class(1).to_vec(), vec![2, 3]);
        assert!(serde_json::from_str::<Coloring>(r#"{"n_max": 2, "r": 2, "colors": [0, 2]}"#).is_err());
        assert!(serde_json::from_str::<Coloring>(r#"{"n_max": 3, "r": 2, "colors": [0, 1]}"#).is_err());
    }

    #[test]
    fn rationals_are_normalized() {
        let q = parse_rational("-4/6").unwrap();
        assert_eq!((*q.numer(), *q.denom()), (-2, 3));
        let q = parse_rational("3/-6").unwrap();
        assert_eq!((*q.numer(), *q.denom()), (-1, 2));
        assert_eq!(format_rational(&parse_rational("8/4").unwrap()), "2");
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("x").is_err());
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn arb_mask() -> impl Strategy<Value = SubsetMask> {
            (1u64..130).prop_flat_map(|n| {
                proptest::collection::vec(any::<bool>(), n as usize).prop_map(move |bits| {
                    let members = bits.iter().enumerate().filter(|(_, &b)| b).map(|(i, _)| i as u64 + 1);
                    SubsetMask::from_members(GroundWindow::new(n).unwrap(), members).unwrap()
                })
            })
        }

        proptest! {
            #[test]
            fn preimage_shift_is_exact(a in arb_mask(), x in 1u64..140) {
                let p = preimage_shift(&a, x);
                let n = a.n_max();
                for y in 1..=n {
                    let expected = y + x <= n && a.contains(y + x);
                    prop_assert_eq!(p.contains(y), expected);
                }
            }

            #[test]
            fn intersect_translates_stays_in_base(a in arb_mask(), x in 1u64..20, y in 1u64..20) {
                let r = intersect_translates(&a, &[(x, &a), (y, &a)]);
                prop_assert!(r.is_subset(&a));
            }

            #[test]
            fn next_member_agrees_with_contains(a in arb_mask(), from in 0u64..140) {
                let expected = (from.max(1)..=a.n_max()).find(|&x| a.contains(x));
                prop_assert_eq!(a.next_member(from), expected);
            }
        }
    }
}
