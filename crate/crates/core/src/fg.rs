//! Functions `α` and `H` on the nonempty subsets of a finite family of
//! sequences, with
//!
//! 1. `max H(F) < min H(G)` whenever `F ⊊ G`, and
//! 2. `sum_i (α(G_i) + sum_{t in H(G_i)} f_i(t)) ∈ R(G_1)` for every chain
//!    `G_1 ⊊ .. ⊊ G_m` and every choice `f_i ∈ G_i`.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::foundation::{GroundWindow, Membership, TranslateMeet, WindowSet};
use crate::sumsets::{DyadicOracle, Star};

/// Largest family size accepted by [`build_alpha_h`].
pub const MAX_SEQUENCES: usize = 5;

/// Prefixes `f_i(1..=T)` of `s` sequences. JSON: `{"T": T, "sequences": [[..], ..]}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "SeqFamilyRepr", into = "SeqFamilyRepr")]
pub struct SeqFamily {
    t: usize,
    sequences: Vec<Vec<u64>>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct SeqFamilyRepr {
    #[serde(rename = "T")]
    t: usize,
    sequences: Vec<Vec<u64>>,
}

impl TryFrom<SeqFamilyRepr> for SeqFamily {
    type Error = Error;

    fn try_from(r: SeqFamilyRepr) -> Result<Self> {
        SeqFamily::new(r.t, r.sequences)
    }
}

impl From<SeqFamily> for SeqFamilyRepr {
    fn from(f: SeqFamily) -> Self {
        SeqFamilyRepr {
            t: f.t,
            sequences: f.sequences,
        }
    }
}

impl SeqFamily {
    pub fn new(t: usize, sequences: Vec<Vec<u64>>) -> Result<Self> {
        if t == 0 || sequences.is_empty() {
            return Err(Error::invalid("need T >= 1 and at least one sequence"));
        }
        if sequences.len() > 16 {
            return Err(Error::BoundsExceeded(format!("{} sequences, at most 16", sequences.len())));
        }
        for (i, f) in sequences.iter().enumerate() {
            if f.len() != t {
                return Err(Error::invalid(format!("f_{} has {} values, expected T = {t}", i + 1, f.len())));
            }
            if f.contains(&0) {
                return Err(Error::invalid(format!("f_{} takes the value 0", i + 1)));
            }
        }
        Ok(SeqFamily { t, sequences })
    }

    /// Builds `f_i(t) = gen(i, t)` for `i` in `1..=s`, `t` in `1..=T`.
    pub fn from_fn(s: usize, t: usize, gen: impl Fn(usize, usize) -> u64) -> Result<Self> {
        Self::new(t, (1..=s).map(|i| (1..=t).map(|j| gen(i, j)).collect()).collect())
    }

    pub fn t(&self) -> usize {
        self.t
    }

    pub fn len(&self) -> usize {
        self.sequences.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// `f_i(t)` with both indices 1-based.
    pub fn value(&self, i: usize, t: usize) -> u64 {
        self.sequences[i - 1][t - 1]
    }

    /// All nonempty subsets in build order.
    pub fn subsets(&self) -> Vec<SubsetKey> {
        let mut keys: Vec<SubsetKey> = (1..1u32 << self.len()).map(SubsetKey).collect();
        keys.sort();
        keys
    }
}

/// A nonempty set of sequence indices. Ordered by size, then
/// lexicographically; written `"1,3"`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct SubsetKey(u32);

impl SubsetKey {
    pub fn from_indices(indices: &[usize]) -> Result<Self> {
        let mut bits = 0u32;
        for &i in indices {
            if i == 0 || i > 16 {
                return Err(Error::invalid(format!("sequence index {i} out of range 1..=16")));
            }
            bits |= 1 << (i - 1);
        }
        if bits == 0 {
            return Err(Error::invalid("subsets must be nonempty"));
        }
        Ok(SubsetKey(bits))
    }

    /// 1-based indices, ascending.
    pub fn indices(&self) -> Vec<usize> {
        (0..32).filter(|b| self.0 >> b & 1 == 1).map(|b| b as usize + 1).collect()
    }

    pub fn len(&self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(&self) -> bool {
        self.0 == 0
    }

    pub fn is_proper_subset_of(&self, other: &SubsetKey) -> bool {
        self.0 != other.0 && self.0 & !other.0 == 0
    }

    fn proper_subsets(&self) -> impl Iterator<Item = SubsetKey> + '_ {
        let full = self.0;
        let mut sub = full;
        std::iter::from_fn(move || {
            sub = (sub.wrapping_sub(1)) & full;
            (sub != 0).then_some(SubsetKey(sub))
        })
    }
}

impl Ord for SubsetKey {
    fn cmp(&self, other: &Self) -> Ordering {
        self.len().cmp(&other.len()).then_with(|| self.indices().cmp(&other.indices()))
    }
}

impl PartialOrd for SubsetKey {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for SubsetKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.indices().iter().map(|i| i.to_string()).collect();
        write!(f, "{}", parts.join(","))
    }
}

impl From<SubsetKey> for String {
    fn from(k: SubsetKey) -> Self {
        k.to_string()
    }
}

impl TryFrom<String> for SubsetKey {
    type Error = Error;

    fn try_from(s: String) -> Result<Self> {
        let indices = s
            .split(',')
            .map(|p| p.trim().parse::<usize>())
            .collect::<std::result::Result<Vec<_>, _>>()
            .map_err(|e| Error::invalid(format!("bad subset key {s:?}: {e}")))?;
        SubsetKey::from_indices(&indices)
    }
}

/// `R(F)` for every nonempty `F`. JSON: an object keyed by subset strings.
pub type TargetAssignment = BTreeMap<SubsetKey, WindowSet>;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AlphaHEntry {
    pub alpha: u64,
    /// Indices into `1..=T`, ascending.
    pub h: Vec<usize>,
}

/// `α` and `H`. JSON: `{"1": {"alpha": a, "h": [..]}, ..}`.
pub type AlphaH = BTreeMap<SubsetKey, AlphaHEntry>;

fn check_assignment(fam: &SeqFamily, r: &TargetAssignment) -> Result<GroundWindow> {
    let mut window = None;
    for key in fam.subsets() {
        let set = r
            .get(&key)
            .ok_or_else(|| Error::invalid(format!("R({{{key}}}) is missing")))?;
        if set.is_empty() {
            return Err(Error::invalid(format!("R({{{key}}}) is empty")));
        }
        match window {
            None => window = Some(set.window()),
            Some(w) if w.n_max() != set.n_max() => {
                return Err(Error::invalid("all R(F) must share one window"));
            }
            _ => {}
        }
    }
    if let Some(k) = r.keys().find(|k| k.indices().last().is_some_and(|&i| i > fam.len())) {
        return Err(Error::invalid(format!("R is given on {{{k}}}, outside the family")));
    }
    Ok(window.expect("families are nonempty"))
}

/// `{α(G) + sum_{t in H(G)} f(t) : f ∈ G}`.
fn block_values(fam: &SeqFamily, g: SubsetKey, e: &AlphaHEntry) -> Option<Vec<u64>> {
    g.indices()
        .iter()
        .map(|&i| e.h.iter().try_fold(e.alpha, |acc, &t| acc.checked_add(fam.value(i, t))))
        .collect()
}

/// Builds `α` and `H` subset by subset. For `F`, with `k` the largest
/// index used below `F` and `M_G` the chain sums from `G` up to (not
/// including) `F`, the target is
/// `R(F)* ∩ ⋂_{G ⊊ F} ⋂_{x in M_G} (-x + R(G)*)` and the pick is the least
/// `(a, h)`, `a` in `[1..a_max]` first, then `h ⊆ (k..T]` by largest element
/// and lexicographically, with `a + sum_{t in h} f(t)` in the target for
/// every `f ∈ F`. The result is verified before it is returned.
pub fn build_alpha_h(fam: &SeqFamily, r: &TargetAssignment, oracle: DyadicOracle, a_max: u64) -> Result<AlphaH> {
    if fam.len() > MAX_SEQUENCES {
        return Err(Error::BoundsExceeded(format!(
            "{} sequences, at most {MAX_SEQUENCES}",
            fam.len()
        )));
    }
    if a_max == 0 {
        return Err(Error::invalid("a_max must be >= 1"));
    }
    let window = check_assignment(fam, r)?;
    if window != oracle.window() {
        return Err(Error::invalid("the oracle window differs from the window of R"));
    }
    let n_max = window.n_max();
    let stars: BTreeMap<SubsetKey, Star> = r.iter().map(|(k, s)| (*k, Star::new(s, oracle))).collect();
    let mut ah = AlphaH::new();

    for f in fam.subsets() {
        let below: Vec<SubsetKey> = f.proper_subsets().collect();
        let k = below.iter().flat_map(|g| ah[g].h.iter().copied()).max().unwrap_or(0);
        if k >= fam.t() {
            return Err(Error::PrefixTooShort {
                subset: f.to_string(),
                k,
                t_len: fam.t(),
            });
        }
        // M_G, largest G first so that every G' ⊋ G is ready.
        let mut by_size = below.clone();
        by_size.sort_by(|a, b| b.cmp(a));
        let mut m: BTreeMap<SubsetKey, Vec<u64>> = BTreeMap::new();
        for &g in &by_size {
            let v = block_values(fam, g, &ah[&g]).ok_or(Error::WindowOverflow { value: u64::MAX, n_max })?;
            let mut mg = v.clone();
            for (g2, m2) in &m {
                if g.is_proper_subset_of(g2) {
                    for &x in &v {
                        mg.extend(m2.iter().filter_map(|&y| x.checked_add(y)).filter(|&s| s <= n_max));
                    }
                }
            }
            mg.sort_unstable();
            mg.dedup();
            m.insert(g, mg);
        }
        let target = TranslateMeet {
            base: &stars[&f],
            shifts: m
                .iter()
                .flat_map(|(g, xs)| xs.iter().map(|&x| (x, &stars[g] as &dyn Membership)))
                .collect(),
        };

        let hs = h_candidates(k, fam.t());
        let members = f.indices();
        let sums: Vec<Vec<Option<u64>>> = members
            .iter()
            .map(|&i| {
                hs.iter()
                    .map(|h| h.iter().try_fold(0u64, |acc, &t| acc.checked_add(fam.value(i, t))))
                    .collect()
            })
            .collect();
        let hit = (1..=a_max).find_map(|a| {
            (0..hs.len())
                .find(|&j| {
                    sums.iter().all(|s| {
                        s[j].and_then(|v| v.checked_add(a))
                            .is_some_and(|v| v <= n_max && target.contains(v))
                    })
                })
                .map(|j| (a, j))
        });
        let (alpha, j) = hit.ok_or_else(|| {
            Error::exhausted(format!("subset {{{f}}}"), diagnose(&stars, &m, f, a_max))
        })?;
        ah.insert(f, AlphaHEntry { alpha, h: hs[j].clone() });
    }

    let report = verify_alpha_h(fam, r, &ah)?;
    if !report.passed {
        return Err(Error::VerificationFailed(format!(
            "α, H has {} violations, first {:?}",
            report.violations.len(),
            report.violations[0]
        )));
    }
    Ok(ah)
}

/// Nonempty `h ⊆ (k..T]`, by largest element, then lexicographically.
fn h_candidates(k: usize, t: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    for top in k + 1..=t {
        let lower: Vec<usize> = (k + 1..top).collect();
        let mut group: Vec<Vec<usize>> = (0u64..1 << lower.len())
            .map(|bits| {
                let mut h: Vec<usize> = (0..lower.len()).filter(|b| bits >> b & 1 == 1).map(|b| lower[b]).collect();
                h.push(top);
                h
            })
            .collect();
        group.sort();
        out.extend(group);
    }
    out
}

fn diagnose(stars: &BTreeMap<SubsetKey, Star>, m: &BTreeMap<SubsetKey, Vec<u64>>, f: SubsetKey, a_max: u64) -> String {
    let base = &stars[&f];
    if base.is_empty() {
        return format!("R({{{f}}})* is empty under the oracle");
    }
    let mut shifts: Vec<(u64, &dyn Membership)> = Vec::new();
    for (g, xs) in m {
        shifts.extend(xs.iter().map(|&x| (x, &stars[g] as &dyn Membership)));
        let partial = TranslateMeet {
            base,
            shifts: shifts.clone(),
        };
        if partial.is_empty() {
            return format!("target emptied by the translates -x + R({{{g}}})*, x in M_{{{g}}}");
        }
    }
    format!("target is nonempty but no (a, h) with a <= {a_max} puts every a + sum f(h) in it")
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum AlphaHViolation {
    /// `max H(smaller) >= min H(larger)` although `smaller ⊊ larger`.
    Ordering { smaller: SubsetKey, larger: SubsetKey },
    /// The chain sum for these subsets and choices (1-based sequence
    /// indices) misses `R(G_1)`.
    ChainSum { chain: Vec<SubsetKey>, choices: Vec<usize>, value: u64 },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AlphaHReport {
    pub passed: bool,
    pub pairs_checked: u64,
    /// Chains `G_1 ⊊ .. ⊊ G_m` times choice functions.
    pub chains_checked: u64,
    pub violations: Vec<AlphaHViolation>,
}

/// Checks condition 1 over all strict inclusions and condition 2 over all
/// chains and all choice functions.
pub fn verify_alpha_h(fam: &SeqFamily, r: &TargetAssignment, ah: &AlphaH) -> Result<AlphaHReport> {
    let window = check_assignment(fam, r)?;
    let keys = fam.subsets();
    for key in &keys {
        let e = ah
            .get(key)
            .ok_or_else(|| Error::invalid(format!("α, H undefined on {{{key}}}")))?;
        if e.h.is_empty() || e.h.iter().any(|&t| t == 0 || t > fam.t()) || e.h.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::invalid(format!(
                "H({{{key}}}) must be a nonempty ascending subset of 1..={}",
                fam.t()
            )));
        }
    }
    let mut violations = Vec::new();
    let mut pairs_checked = 0;
    for a in &keys {
        for b in &keys {
            if a.is_proper_subset_of(b) {
                pairs_checked += 1;
                if ah[a].h.last() >= ah[b].h.first() {
                    violations.push(AlphaHViolation::Ordering { smaller: *a, larger: *b });
                }
            }
        }
    }

    struct Walk<'a> {
        fam: &'a SeqFamily,
        r: &'a TargetAssignment,
        ah: &'a AlphaH,
        keys: &'a [SubsetKey],
        window: GroundWindow,
        chain: Vec<SubsetKey>,
        choices: Vec<usize>,
        checked: u64,
        violations: Vec<AlphaHViolation>,
    }

    impl Walk<'_> {
        fn descend(&mut self, total: u64) -> Result<()> {
            let last = *self.chain.last().expect("chains are nonempty");
            let e = &self.ah[&last];
            for i in last.indices() {
                let v = e
                    .h
                    .iter()
                    .try_fold(e.alpha, |acc, &t| acc.checked_add(self.fam.value(i, t)))
                    .and_then(|v| v.checked_add(total))
                    .ok_or(Error::WindowOverflow {
                        value: u64::MAX,
                        n_max: self.window.n_max(),
                    })?;
                self.window.check(v)?;
                self.choices.push(i);
                self.checked += 1;
                if !self.r[&self.chain[0]].contains(v) {
                    self.violations.push(AlphaHViolation::ChainSum {
                        chain: self.chain.clone(),
                        choices: self.choices.clone(),
                        value: v,
                    });
                }
                for &next in self.keys {
                    if last.is_proper_subset_of(&next) {
                        self.chain.push(next);
                        self.descend(v)?;
                        self.chain.pop();
                    }
                }
                self.choices.pop();
            }
            Ok(())
        }
    }

    let mut walk = Walk {
        fam,
        r,
        ah,
        keys: &keys,
        window,
        chain: Vec::new(),
        choices: Vec::new(),
        checked: 0,
        violations: Vec::new(),
    };
    for &g in &keys {
        walk.chain.push(g);
        walk.descend(0)?;
        walk.chain.pop();
    }
    violations.extend(walk.violations);
    Ok(AlphaHReport {
        passed: violations.is_empty(),
        pairs_checked,
        chains_checked: walk.checked,
        violations,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::foundation::{DyadicSupport, SubsetMask};

    fn key(ix: &[usize]) -> SubsetKey {
        SubsetKey::from_indices(ix).unwrap()
    }

    fn multiples_assignment(fam: &SeqFamily, window: GroundWindow, base_exp: u32) -> TargetAssignment {
        fam.subsets()
            .into_iter()
            .zip(base_exp..)
            .map(|(k, e)| (k, WindowSet::multiples(window, 1 << e).unwrap()))
            .collect()
    }

    /// Number of (chain, choice) pairs: over strictly increasing size
    /// profiles `n_1 < .. < n_m`, chains with those sizes times `prod n_i`.
    fn chain_choice_count(s: u64) -> u64 {
        fn fact(n: u64) -> u64 {
            (1..=n).product()
        }
        fn walk(s: u64, prev: u64, ways: u64, weight: u64) -> u64 {
            let mut total = 0;
            for n in prev + 1..=s {
                let w = ways * fact(s - prev) / (fact(n - prev) * fact(s - n));
                total += w * weight * n + walk(s, n, w, weight * n);
            }
            total
        }
        walk(s, 0, 1, 1)
    }

    #[test]
    fn subset_keys() {
        assert_eq!(key(&[1, 3]).to_string(), "1,3");
        assert_eq!(serde_json::to_string(&key(&[2])).unwrap(), r#""2""#);
        let k: SubsetKey = serde_json::from_str(r#""3,1""#).unwrap();
        assert_eq!(k, key(&[1, 3]));
        let fam = SeqFamily::from_fn(3, 2, |_, _| 1).unwrap();
        let order: Vec<String> = fam.subsets().iter().map(|k| k.to_string()).collect();
        assert_eq!(order, ["1", "2", "3", "1,2", "1,3", "2,3", "1,2,3"]);
        assert!(serde_json::from_str::<SubsetKey>(r#""""#).is_err());
    }

    #[test]
    fn h_order() {
        assert_eq!(h_candidates(0, 2), vec![vec![1], vec![1, 2], vec![2]]);
        assert_eq!(h_candidates(1, 3), vec![vec![2], vec![2, 3], vec![3]]);
        assert_eq!(h_candidates(0, 12).len(), 4095);
    }

    #[test]
    fn single_sequence() {
        let w = GroundWindow::pow2(30).unwrap();
        let fam = SeqFamily::from_fn(1, 4, |_, t| 1 << (5 * t)).unwrap();
        let r = TargetAssignment::from([(key(&[1]), DyadicSupport::tail(w, 0).unwrap().into())]);
        let oracle = DyadicOracle::new(w, 4).unwrap();
        let ah = build_alpha_h(&fam, &r, oracle, 64).unwrap();
        assert_eq!(ah[&key(&[1])], AlphaHEntry { alpha: 1, h: vec![1] });
    }

    #[test]
    fn single_sequence_matches_brute_force() {
        let w = GroundWindow::new(1 << 12).unwrap();
        let fam = SeqFamily::new(5, vec![vec![3, 6, 12, 24, 48]]).unwrap();
        let oracle = DyadicOracle::new(w, 3).unwrap();
        let set = WindowSet::multiples(w, 8).unwrap();
        let r = TargetAssignment::from([(key(&[1]), set.clone())]);
        let ah = build_alpha_h(&fam, &r, oracle, 64).unwrap();
        // Direct scan over a, then h as bitmask sorted into the same order.
        let star = Star::new(&set, oracle);
        let mut hs: Vec<Vec<usize>> = (1u32..32).map(|b| (1..=5).filter(|t| b >> (t - 1) & 1 == 1).collect()).collect();
        hs.sort_by(|x, y| x.last().cmp(&y.last()).then(x.cmp(y)));
        let brute = (1..=64u64)
            .find_map(|a| {
                hs.iter()
                    .find(|h| star.contains(a + h.iter().map(|&t| fam.value(1, t)).sum::<u64>()))
                    .map(|h| (a, h.clone()))
            })
            .unwrap();
        assert_eq!((ah[&key(&[1])].alpha, ah[&key(&[1])].h.clone()), brute);
    }

    #[test]
    fn two_dyadic_sequences() {
        let w = GroundWindow::pow2(30).unwrap();
        let fam = SeqFamily::from_fn(2, 12, |i, t| 1 << (2 * t + i - 1)).unwrap();
        let r = multiples_assignment(&fam, w, 2);
        let oracle = DyadicOracle::new(w, 4).unwrap();
        let ah = build_alpha_h(&fam, &r, oracle, 256).unwrap();
        let report = verify_alpha_h(&fam, &r, &ah).unwrap();
        assert!(report.passed);
        assert_eq!(report.chains_checked, 8);
        assert_eq!(report.chains_checked, chain_choice_count(2));
        assert_eq!(report.pairs_checked, 2);
    }

    #[test]
    fn three_sequences_chain_count() {
        let w = GroundWindow::pow2(40).unwrap();
        let fam = SeqFamily::from_fn(3, 10, |i, t| 1 << (3 * t + i - 1)).unwrap();
        let r = multiples_assignment(&fam, w, 1);
        let oracle = DyadicOracle::new(w, 4).unwrap();
        let ah = build_alpha_h(&fam, &r, oracle, 512).unwrap();
        let report = verify_alpha_h(&fam, &r, &ah).unwrap();
        assert!(report.passed, "{:?}", report.violations);
        assert_eq!(report.chains_checked, chain_choice_count(3));
        for s in 1..=5 {
            let fam = SeqFamily::from_fn(s, 1, |_, _| 1).unwrap();
            let whole = SubsetMask::full(GroundWindow::new(1 << 20).unwrap());
            let r: TargetAssignment = fam.subsets().into_iter().map(|k| (k, whole.clone().into())).collect();
            let ah: AlphaH = fam.subsets().into_iter().map(|k| (k, AlphaHEntry { alpha: 1, h: vec![1] })).collect();
            let report = verify_alpha_h(&fam, &r, &ah).unwrap();
            assert_eq!(report.chains_checked, chain_choice_count(s as u64), "s = {s}");
        }
    }

    #[test]
    fn ordering_violation() {
        let w = GroundWindow::new(1 << 10).unwrap();
        let fam = SeqFamily::from_fn(2, 4, |_, _| 2).unwrap();
        let r: TargetAssignment = fam.subsets().into_iter().map(|k| (k, SubsetMask::full(w).into())).collect();
        let mut ah: AlphaH = fam.subsets().into_iter().map(|k| (k, AlphaHEntry { alpha: 1, h: vec![3] })).collect();
        let report = verify_alpha_h(&fam, &r, &ah).unwrap();
        assert!(report
            .violations
            .contains(&AlphaHViolation::Ordering { smaller: key(&[1]), larger: key(&[1, 2]) }));
        ah.get_mut(&key(&[1, 2])).unwrap().h = vec![4];
        assert!(verify_alpha_h(&fam, &r, &ah).unwrap().passed);
    }

    #[test]
    fn single_chain_condition() {
        let w = GroundWindow::new(100).unwrap();
        let fam = SeqFamily::new(2, vec![vec![5, 7]]).unwrap();
        let r = TargetAssignment::from([(key(&[1]), SubsetMask::from_members(w, [13]).unwrap().into())]);
        let ok = AlphaH::from([(key(&[1]), AlphaHEntry { alpha: 1, h: vec![1, 2] })]);
        assert!(verify_alpha_h(&fam, &r, &ok).unwrap().passed);
        let bad = AlphaH::from([(key(&[1]), AlphaHEntry { alpha: 2, h: vec![1, 2] })]);
        let report = verify_alpha_h(&fam, &r, &bad).unwrap();
        assert_eq!(
            report.violations,
            vec![AlphaHViolation::ChainSum { chain: vec![key(&[1])], choices: vec![1], value: 14 }]
        );
    }

    #[test]
    fn forced_failures() {
        let w = GroundWindow::new(1 << 8).unwrap();
        let oracle = DyadicOracle::new(w, 2).unwrap();
        let fam = SeqFamily::new(1, vec![vec![1]]).unwrap();
        let r = TargetAssignment::from([(key(&[1]), SubsetMask::from_members(w, [200]).unwrap().into())]);
        assert!(matches!(build_alpha_h(&fam, &r, oracle, 2), Err(Error::OracleExhausted { .. })));

        let fam = SeqFamily::from_fn(2, 1, |_, _| 4).unwrap();
        let r: TargetAssignment = fam.subsets().into_iter().map(|k| (k, SubsetMask::full(w).into())).collect();
        assert!(matches!(build_alpha_h(&fam, &r, oracle, 8), Err(Error::PrefixTooShort { k: 1, t_len: 1, .. })));
    }

    #[test]
    fn json_shapes() {
        let fam: SeqFamily = serde_json::from_str(r#"{"T": 2, "sequences": [[1, 2], [3, 4]]}"#).unwrap();
        assert_eq!(fam.value(2, 1), 3);
        assert!(serde_json::from_str::<SeqFamily>(r#"{"T": 3, "sequences": [[1, 2]]}"#).is_err());
        let ah = AlphaH::from([(key(&[1, 2]), AlphaHEntry { alpha: 4, h: vec![2] })]);
        assert_eq!(serde_json::to_string(&ah).unwrap(), r#"{"1,2":{"alpha":4,"h":[2]}}"#);
        let r: TargetAssignment =
            serde_json::from_str(r#"{"1": {"n_max": 64, "multiples_of": 4}, "2": {"n_max": 64, "members": [8]}}"#).unwrap();
        assert_eq!(r.len(), 2);
    }
}
