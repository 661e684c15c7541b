//! Chains of variable words in the free semigroup: `Y_t = {w_t(a)}` with
//! every ordered product `prod_{t in F} Y_t` inside `C_{min F}`.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use super::MAX_CHAIN_LEN;
use crate::error::{Error, Result};
use crate::report::VerificationReport;
use crate::sumsets::family_product;
use crate::words::{find_variable_word_by, VariableWord, WordSet};

/// Word analogue of the dyadic oracle: a set is large iff it contains a
/// combinatorial line `{w(a)}` with `|w| <= depth`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WordOracle {
    alphabet: Vec<u32>,
    depth: usize,
}

impl WordOracle {
    pub fn new(alphabet: &[u32], depth: usize) -> Result<Self> {
        let mut alphabet = alphabet.to_vec();
        alphabet.sort_unstable();
        alphabet.dedup();
        if alphabet.is_empty() || depth == 0 {
            return Err(Error::invalid("word oracles need a nonempty alphabet and depth >= 1"));
        }
        Ok(WordOracle { alphabet, depth })
    }

    pub fn alphabet(&self) -> &[u32] {
        &self.alphabet
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    pub fn is_large(&self, contains: impl FnMut(&[u32]) -> bool) -> bool {
        find_variable_word_by(contains, &self.alphabet, self.depth).is_some()
    }

    /// `s in A*`: `s in A` and `{u : s u in A}` is large.
    pub fn star_contains(&self, a: &WordSet, s: &[u32]) -> bool {
        if !a.contains(s) {
            return false;
        }
        let mut buf = s.to_vec();
        self.is_large(|u| {
            buf.truncate(s.len());
            buf.extend_from_slice(u);
            a.contains(&buf)
        })
    }
}

/// JSON: `{"alphabet": [..], "depth": d, "sets": [{"max_len": L, "words": [..]}, ..]}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "WordFamilyRepr", into = "WordFamilyRepr")]
pub struct WordChainFamily {
    oracle: WordOracle,
    sets: Vec<WordSet>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct WordFamilyRepr {
    alphabet: Vec<u32>,
    depth: usize,
    sets: Vec<WordSet>,
}

impl TryFrom<WordFamilyRepr> for WordChainFamily {
    type Error = Error;

    fn try_from(r: WordFamilyRepr) -> Result<Self> {
        WordChainFamily::new(&r.alphabet, r.depth, r.sets)
    }
}

impl From<WordChainFamily> for WordFamilyRepr {
    fn from(f: WordChainFamily) -> Self {
        WordFamilyRepr {
            alphabet: f.oracle.alphabet,
            depth: f.oracle.depth,
            sets: f.sets,
        }
    }
}

impl WordChainFamily {
    pub fn new(alphabet: &[u32], depth: usize, sets: Vec<WordSet>) -> Result<Self> {
        let oracle = WordOracle::new(alphabet, depth)?;
        let first = sets.first().ok_or_else(|| Error::invalid("a chain family needs at least one set"))?;
        if sets.len() > MAX_CHAIN_LEN {
            return Err(Error::BoundsExceeded(format!(
                "chain families are capped at {MAX_CHAIN_LEN} sets, got {}",
                sets.len()
            )));
        }
        for (i, s) in sets.iter().enumerate() {
            if s.max_len != first.max_len {
                return Err(Error::invalid(format!("C_{} has a different max_len than C_1", i + 1)));
            }
            if s.words.is_empty() {
                return Err(Error::invalid(format!("C_{} is empty", i + 1)));
            }
            if let Some(w) = s.words.iter().find(|w| w.iter().any(|l| oracle.alphabet.binary_search(l).is_err())) {
                return Err(Error::invalid(format!("C_{} holds {w:?}, which leaves the alphabet", i + 1)));
            }
        }
        Ok(WordChainFamily { oracle, sets })
    }

    pub fn alphabet(&self) -> &[u32] {
        self.oracle.alphabet()
    }

    pub fn oracle(&self) -> &WordOracle {
        &self.oracle
    }

    pub fn sets(&self) -> &[WordSet] {
        &self.sets
    }

    pub fn max_len(&self) -> usize {
        self.sets[0].max_len
    }

    pub fn len(&self) -> usize {
        self.sets.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }
}

/// `w_1, .., w_K`. JSON: `{"words": [{"letters": [..]}, ..]}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WordChain {
    pub words: Vec<VariableWord<u32>>,
}

/// Indices are 1-based.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum WordChainViolation {
    PerIndex { index: usize, word: Vec<u32> },
    FamilySum { subset: Vec<usize>, word: Vec<u32> },
}

fn line(w: &VariableWord<u32>, alphabet: &[u32]) -> Vec<Vec<u32>> {
    alphabet.iter().map(|a| w.substitute(a).letters().to_vec()).collect()
}

/// Checks `{w_t(a)} ⊆ C_t` and every ordered product over nonempty
/// `F ⊆ {1..K}` against `C_{min F}`. Products longer than `max_len` are a
/// window overflow.
pub fn verify_word_chain(
    family: &WordChainFamily,
    chain: &WordChain,
) -> Result<VerificationReport<WordChainViolation>> {
    let k = family.len();
    if chain.words.len() != k {
        return Err(Error::invalid(format!("{} words for a family of {k} sets", chain.words.len())));
    }
    let max_len = family.max_len();
    let lines: BTreeMap<usize, Vec<Vec<u32>>> = chain
        .words
        .iter()
        .enumerate()
        .map(|(t, w)| (t, line(w, family.alphabet())))
        .collect();
    let mut violations = Vec::new();
    for (t, ys) in &lines {
        violations.extend(
            ys.iter()
                .filter(|y| !family.sets[*t].contains(y))
                .map(|y| WordChainViolation::PerIndex { index: t + 1, word: y.clone() }),
        );
    }
    let mut checked = 0u64;
    for bits in 1u32..1 << k {
        let f: BTreeSet<usize> = (0..k).filter(|&t| bits >> t & 1 == 1).collect();
        let min = *f.first().expect("nonempty");
        let products = family_product(&f, &lines)?;
        for p in products {
            if p.len() > max_len {
                return Err(Error::WindowOverflow {
                    value: p.len() as u64,
                    n_max: max_len as u64,
                });
            }
            checked += 1;
            if !family.sets[min].contains(&p) {
                violations.push(WordChainViolation::FamilySum {
                    subset: f.iter().map(|t| t + 1).collect(),
                    word: p,
                });
            }
        }
    }
    Ok(VerificationReport::new(checked, violations))
}

/// Greedy construction: `w_n` is the first variable word whose line lies in
/// `C_n* ∩ ⋂_{k<n} ⋂_{m in M_k} m^{-1} C_k*`, with `M_k` the ordered products
/// with least index `k` chosen so far. Verified before it is returned.
pub fn build_word_chain(family: &WordChainFamily) -> Result<WordChain> {
    let oracle = family.oracle();
    let max_len = family.max_len();
    let mut sums: Vec<Vec<Vec<u32>>> = Vec::with_capacity(family.len());
    let mut words = Vec::with_capacity(family.len());
    for n in 0..family.len() {
        let sets = family.sets();
        let mut buf = Vec::with_capacity(max_len);
        let in_target = |u: &[u32]| {
            oracle.star_contains(&sets[n], u)
                && (0..n).all(|k| {
                    sums[k].iter().all(|m| {
                        buf.clear();
                        buf.extend_from_slice(m);
                        buf.extend_from_slice(u);
                        buf.len() <= max_len && oracle.star_contains(&sets[k], &buf)
                    })
                })
        };
        let w = find_variable_word_by(in_target, oracle.alphabet(), max_len).ok_or_else(|| {
            Error::exhausted(
                format!("stage {}", n + 1),
                format!("no variable word of length <= {max_len} has its line in the target"),
            )
        })?;
        let ys = line(&w, oracle.alphabet());
        for m in sums.iter_mut() {
            let mut next: BTreeSet<Vec<u32>> = m.iter().cloned().collect();
            for prefix in m.iter() {
                for y in &ys {
                    let mut p = prefix.clone();
                    p.extend_from_slice(y);
                    next.insert(p);
                }
            }
            *m = next.into_iter().collect();
        }
        sums.push(ys);
        words.push(w);
    }
    let chain = WordChain { words };
    let report = verify_word_chain(family, &chain)?;
    if !report.passed {
        return Err(Error::VerificationFailed(format!(
            "greedy word chain has {} violations, first {:?}",
            report.violations.len(),
            report.violations[0]
        )));
    }
    Ok(chain)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn count(w: &[u32], a: u32) -> usize {
        w.iter().filter(|&&l| l == a).count()
    }

    #[test]
    fn even_twos_chain() {
        let sets = (1..=3)
            .map(|_| WordSet::from_predicate(&[1, 2], 12, |w| count(w, 2) % 2 == 0))
            .collect();
        let fam = WordChainFamily::new(&[1, 2], 2, sets).unwrap();
        let chain = build_word_chain(&fam).unwrap();
        let vv = VariableWord::new(vec![None, None]).unwrap();
        assert_eq!(chain.words, vec![vv.clone(), vv.clone(), vv]);
        let report = verify_word_chain(&fam, &chain).unwrap();
        assert!(report.passed);
        // 2 + 2 + 2 singletons, 4 per pair, 8 for the triple.
        assert_eq!(report.checked, 6 + 12 + 8);
    }

    #[test]
    fn nested_parity_family() {
        // C_1 everything, C_2 even number of 2s and a leading 1, C_3 also an
        // even number of 3s.
        let pred = |n: usize| {
            move |w: &[u32]| match n {
                1 => true,
                2 => count(w, 2) % 2 == 0 && w[0] == 1,
                _ => count(w, 2) % 2 == 0 && count(w, 3) % 2 == 0 && w[0] == 1,
            }
        };
        let sets = (1..=3).map(|n| WordSet::from_predicate(&[1, 2, 3], 9, pred(n))).collect();
        let fam = WordChainFamily::new(&[1, 2, 3], 2, sets).unwrap();
        let chain = build_word_chain(&fam).unwrap();
        assert!(verify_word_chain(&fam, &chain).unwrap().passed);
        let shown: Vec<String> = chain.words.iter().map(|w| w.to_string()).collect();
        assert_eq!(shown, ["v", "1·v·v", "1·v·v"]);
    }

    #[test]
    fn verifier_reports_bad_products() {
        let even = WordSet::from_predicate(&[1, 2], 6, |w| count(w, 2) % 2 == 0);
        let fam = WordChainFamily::new(&[1, 2], 2, vec![even.clone(), even]).unwrap();
        let v = VariableWord::new(vec![None]).unwrap();
        let chain = WordChain { words: vec![v.clone(), v] };
        let report = verify_word_chain(&fam, &chain).unwrap();
        assert!(!report.passed);
        assert!(report
            .violations
            .contains(&WordChainViolation::PerIndex { index: 1, word: vec![2] }));
        assert!(report.violations.contains(&WordChainViolation::FamilySum {
            subset: vec![1, 2],
            word: vec![1, 2]
        }));
    }

    #[test]
    fn long_products_overflow() {
        let all = WordSet::from_predicate(&[1, 2], 3, |_| true);
        let fam = WordChainFamily::new(&[1, 2], 1, vec![all.clone(), all]).unwrap();
        let vv = VariableWord::new(vec![None, None]).unwrap();
        let chain = WordChain { words: vec![vv.clone(), vv] };
        assert!(matches!(verify_word_chain(&fam, &chain), Err(Error::WindowOverflow { .. })));
    }

    #[test]
    fn star_needs_a_line_after_the_prefix() {
        let even = WordSet::from_predicate(&[1, 2], 4, |w| count(w, 2) % 2 == 0);
        let oracle = WordOracle::new(&[1, 2], 2).unwrap();
        assert!(oracle.star_contains(&even, &[1]));
        assert!(!oracle.star_contains(&even, &[2]));
        assert!(!oracle.star_contains(&even, &[1, 1, 1, 1]));
    }
}
