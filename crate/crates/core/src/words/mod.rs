//! Words over an alphabet, variable words and combinatorial lines.
//!
//! Finite alphabets use `u32` letters. The infinite-alphabet coloring works
//! over [`Ordinal`] letters: a word gets color 1 iff its largest letter is
//! odd, and [`refute_line`] exhibits, for any variable word, two
//! substitutions of different colors.

mod ordinal;

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

pub use ordinal::{cnf_parity, ordinal_compare, Ordinal, Parity};

/// Nonempty word.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(bound(deserialize = "L: Deserialize<'de>"))]
pub struct Word<L> {
    letters: Vec<L>,
}

impl<L> Word<L> {
    pub fn new(letters: Vec<L>) -> Result<Self> {
        if letters.is_empty() {
            return Err(Error::invalid("words must have at least one letter"));
        }
        Ok(Word { letters })
    }

    pub fn letters(&self) -> &[L] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }
}

/// A word over `alphabet ∪ {v}` in which `v` occurs at least once.
/// `None` marks an occurrence of `v`.
///
/// JSON: `{"letters": [..]}` with the string `"v"` for the variable.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct VariableWord<L> {
    letters: Vec<Option<L>>,
}

impl<L> VariableWord<L> {
    pub fn new(letters: Vec<Option<L>>) -> Result<Self> {
        if !letters.iter().any(Option::is_none) {
            return Err(Error::invalid("a variable word needs at least one occurrence of v"));
        }
        Ok(VariableWord { letters })
    }

    pub fn letters(&self) -> &[Option<L>] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn variable_positions(&self) -> Vec<usize> {
        (0..self.letters.len()).filter(|&i| self.letters[i].is_none()).collect()
    }
}

impl<L: Clone> VariableWord<L> {
    /// `w(a)`: every `v` replaced by `a`.
    pub fn substitute(&self, a: &L) -> Word<L> {
        Word {
            letters: self.letters.iter().map(|l| l.clone().unwrap_or_else(|| a.clone())).collect(),
        }
    }
}

pub fn substitute<L: Clone>(w: &VariableWord<L>, a: &L) -> Word<L> {
    w.substitute(a)
}

impl fmt::Display for VariableWord<u32> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .letters
            .iter()
            .map(|l| l.map_or_else(|| "v".to_string(), |a| a.to_string()))
            .collect();
        write!(f, "{}", parts.join("·"))
    }
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum LetterRepr<L> {
    Var(String),
    Const(L),
}

#[derive(Serialize, Deserialize)]
#[serde(bound(deserialize = "L: Deserialize<'de>"))]
struct VariableWordRepr<L> {
    letters: Vec<LetterRepr<L>>,
}

impl<L: Serialize + Clone> Serialize for VariableWord<L> {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        VariableWordRepr {
            letters: self
                .letters
                .iter()
                .map(|l| match l {
                    None => LetterRepr::Var("v".to_string()),
                    Some(a) => LetterRepr::Const(a.clone()),
                })
                .collect(),
        }
        .serialize(s)
    }
}

impl<'de, L: Deserialize<'de>> Deserialize<'de> for VariableWord<L> {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let repr = VariableWordRepr::<L>::deserialize(d)?;
        let letters = repr
            .letters
            .into_iter()
            .map(|l| match l {
                LetterRepr::Var(s) if s == "v" => Ok(None),
                LetterRepr::Var(s) => Err(serde::de::Error::custom(format!("unknown letter {s:?}, expected \"v\""))),
                LetterRepr::Const(a) => Ok(Some(a)),
            })
            .collect::<std::result::Result<Vec<_>, _>>()?;
        VariableWord::new(letters).map_err(serde::de::Error::custom)
    }
}

/// A finite set of words over `u32` letters, all of length at most `max_len`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WordSet {
    pub max_len: usize,
    pub words: BTreeSet<Vec<u32>>,
}

impl WordSet {
    pub fn new(max_len: usize, words: impl IntoIterator<Item = Vec<u32>>) -> Result<Self> {
        let words: BTreeSet<Vec<u32>> = words.into_iter().collect();
        if let Some(w) = words.iter().find(|w| w.is_empty() || w.len() > max_len) {
            return Err(Error::invalid(format!("word {w:?} is empty or longer than {max_len}")));
        }
        Ok(WordSet { max_len, words })
    }

    /// All words over `alphabet` with lengths in `1..=max_len` satisfying `pred`.
    pub fn from_predicate(alphabet: &[u32], max_len: usize, pred: impl Fn(&[u32]) -> bool) -> Self {
        let mut words = BTreeSet::new();
        let mut layer: Vec<Vec<u32>> = vec![Vec::new()];
        for _ in 0..max_len {
            layer = layer
                .iter()
                .flat_map(|w| {
                    alphabet.iter().map(move |&a| {
                        let mut next = w.clone();
                        next.push(a);
                        next
                    })
                })
                .collect();
            words.extend(layer.iter().filter(|w| pred(w)).cloned());
        }
        WordSet { max_len, words }
    }

    pub fn contains(&self, w: &[u32]) -> bool {
        self.words.contains(w)
    }
}

/// Shortest, then lexicographically least (with `v` before every letter),
/// variable word `w` of length at most `max_len` with `w(a) ∈ C` for all `a`.
pub fn find_variable_word(c: &WordSet, alphabet: &[u32], max_len: usize) -> Option<VariableWord<u32>> {
    find_variable_word_by(|w| c.contains(w), alphabet, max_len)
}

/// [`find_variable_word`] against a membership predicate.
pub fn find_variable_word_by(
    mut contains: impl FnMut(&[u32]) -> bool,
    alphabet: &[u32],
    max_len: usize,
) -> Option<VariableWord<u32>> {
    let mut letters: Vec<u32> = alphabet.to_vec();
    letters.sort_unstable();
    letters.dedup();
    if letters.is_empty() {
        return None;
    }
    let mut symbols: Vec<Option<u32>> = vec![None];
    symbols.extend(letters.iter().copied().map(Some));

    let mut buf = Vec::new();
    for len in 1..=max_len {
        // Odometer over symbols^len in lexicographic order.
        let mut digits = vec![0usize; len];
        loop {
            if digits.contains(&0) {
                let all_hit = letters.iter().all(|&a| {
                    buf.clear();
                    buf.extend(digits.iter().map(|&d| symbols[d].unwrap_or(a)));
                    contains(&buf)
                });
                if all_hit {
                    return Some(VariableWord {
                        letters: digits.iter().map(|&d| symbols[d]).collect(),
                    });
                }
            }
            let mut i = len;
            loop {
                if i == 0 {
                    break;
                }
                i -= 1;
                digits[i] += 1;
                if digits[i] < symbols.len() {
                    break;
                }
                digits[i] = 0;
                if i == 0 {
                    i = usize::MAX;
                    break;
                }
            }
            if i == usize::MAX {
                break;
            }
        }
    }
    None
}

/// Combinatorial lines of `{1..t}^n` as lists of word indices (base-`t`,
/// first letter most significant, letter `a` as digit `a - 1`).
pub fn combinatorial_lines(t: u32, n: u32) -> Vec<Vec<usize>> {
    let t = t as usize;
    let n = n as usize;
    let mut lines = Vec::new();
    let mut digits = vec![0usize; n];
    // digits over {0 = v, 1..=t}.
    'outer: loop {
        if digits.contains(&0) {
            lines.push(
                (1..=t)
                    .map(|a| digits.iter().fold(0usize, |acc, &d| acc * t + if d == 0 { a - 1 } else { d - 1 }))
                    .collect(),
            );
        }
        for i in (0..n).rev() {
            digits[i] += 1;
            if digits[i] <= t {
                continue 'outer;
            }
            digits[i] = 0;
        }
        break;
    }
    lines
}

/// Largest `t^n` accepted by [`hj_exhaustive`].
pub const HJ_MAX_WORDS: u64 = 16;
/// Largest color count accepted by [`hj_exhaustive`].
pub const HJ_MAX_COLORS: u32 = 4;

fn hj_check_bounds(t: u32, r: u32, n: u32) -> Result<usize> {
    if t == 0 || r == 0 || n == 0 {
        return Err(Error::invalid("alphabet size, colors and length must all be >= 1"));
    }
    let words = (t as u64).checked_pow(n).filter(|&w| w <= HJ_MAX_WORDS);
    match words {
        Some(w) if r <= HJ_MAX_COLORS => Ok(w as usize),
        _ => Err(Error::BoundsExceeded(format!(
            "need t^n <= {HJ_MAX_WORDS} and r <= {HJ_MAX_COLORS}, got t = {t}, n = {n}, r = {r}"
        ))),
    }
}

/// A coloring of `{1..t}^n` with no monochromatic combinatorial line, if
/// one exists. Colors are listed by word index (see [`combinatorial_lines`]).
///
/// Backtracking over all `r^(t^n)` colorings: words are colored in index
/// order, a branch dies as soon as a line whose last point was just colored
/// is monochromatic, and color values are introduced in increasing order.
pub fn hj_line_free_coloring(t: u32, r: u32, n: u32) -> Result<Option<Vec<u32>>> {
    let words = hj_check_bounds(t, r, n)?;
    let mut completes: Vec<Vec<Vec<usize>>> = vec![Vec::new(); words];
    for line in combinatorial_lines(t, n) {
        let last = *line.iter().max().expect("lines are nonempty");
        completes[last].push(line);
    }
    let mut colors = vec![0u32; words];

    fn dfs(i: usize, used: u32, r: u32, colors: &mut [u32], completes: &[Vec<Vec<usize>>]) -> bool {
        if i == colors.len() {
            return true;
        }
        for c in 0..r.min(used + 1) {
            colors[i] = c;
            let mono = completes[i].iter().any(|line| line.iter().all(|&p| colors[p] == c));
            if !mono && dfs(i + 1, used.max(c + 1), r, colors, completes) {
                return true;
            }
        }
        false
    }

    Ok(dfs(0, 0, r, &mut colors, &completes).then_some(colors))
}

/// Whether every `r`-coloring of `{1..t}^n` has a monochromatic
/// combinatorial line.
pub fn hj_exhaustive(t: u32, r: u32, n: u32) -> Result<bool> {
    Ok(hj_line_free_coloring(t, r, n)?.is_none())
}

/// 0 iff the largest letter is even.
pub fn infinite_alphabet_color(s: &Word<Ordinal>) -> u8 {
    let max = s.letters().iter().max().expect("words are nonempty");
    match max.parity() {
        Parity::Even => 0,
        Parity::Odd => 1,
    }
}

/// Two substitutions of opposite color for one variable word.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RefutedLine {
    pub even: Ordinal,
    pub odd: Ordinal,
    pub even_color: u8,
    pub odd_color: u8,
}

/// Picks the least even and least odd ordinals strictly above every constant
/// letter of `w`. Both substitutions then have themselves as largest letter,
/// so their colors differ. The result is checked before it is returned.
pub fn refute_line(w: &VariableWord<Ordinal>) -> RefutedLine {
    let mu = w.letters().iter().flatten().max().cloned().unwrap_or_else(Ordinal::zero);
    let next = mu.successor();
    let after = next.successor();
    let (even, odd) = match next.parity() {
        Parity::Even => (next, after),
        Parity::Odd => (after, next),
    };
    let even_color = infinite_alphabet_color(&w.substitute(&even));
    let odd_color = infinite_alphabet_color(&w.substitute(&odd));
    assert!(
        even_color == 0 && odd_color == 1,
        "line refutation failed to separate colors for {w:?}"
    );
    RefutedLine {
        even,
        odd,
        even_color,
        odd_color,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn vw(letters: &[Option<u32>]) -> VariableWord<u32> {
        VariableWord::new(letters.to_vec()).unwrap()
    }

    fn ord(terms: &[(u32, u64)]) -> Ordinal {
        Ordinal::new(terms.to_vec()).unwrap()
    }

    #[test]
    fn substitute_examples() {
        assert_eq!(substitute(&vw(&[None, Some(1), None]), &2).letters(), &[2, 1, 2]);
        assert_eq!(substitute(&vw(&[None]), &7).letters(), &[7]);
        assert_eq!(substitute(&vw(&[Some(1), None, Some(2)]), &3).letters(), &[1, 3, 2]);
    }

    #[test]
    fn variable_words_need_a_variable() {
        assert!(VariableWord::new(vec![Some(1u32), Some(2)]).is_err());
        assert!(serde_json::from_str::<VariableWord<u32>>(r#"{"letters": [1, 2]}"#).is_err());
        assert!(serde_json::from_str::<VariableWord<u32>>(r#"{"letters": [1, "x"]}"#).is_err());
        let w: VariableWord<u32> = serde_json::from_str(r#"{"letters": [1, "v"]}"#).unwrap();
        assert_eq!(w, vw(&[Some(1), None]));
        assert_eq!(serde_json::to_string(&w).unwrap(), r#"{"letters":[1,"v"]}"#);
    }

    #[test]
    fn find_variable_word_examples() {
        let all2 = WordSet::from_predicate(&[1, 2], 2, |w| w.len() == 2);
        assert_eq!(find_variable_word(&all2, &[1, 2], 3), Some(vw(&[None, None])));
        let diag = WordSet::new(2, [vec![1, 1], vec![2, 2]]).unwrap();
        assert_eq!(find_variable_word(&diag, &[1, 2], 3), Some(vw(&[None, None])));
        let single = WordSet::new(2, [vec![1, 2]]).unwrap();
        assert_eq!(find_variable_word(&single, &[1, 2], 3), None);
    }

    #[test]
    fn find_variable_word_prefers_shorter_then_v_first() {
        let c = WordSet::new(3, [vec![1, 1, 2], vec![1, 2, 2], vec![2, 1, 2], vec![1], vec![2]]).unwrap();
        assert_eq!(find_variable_word(&c, &[1, 2], 3), Some(vw(&[None])));
        let c = WordSet::new(3, [vec![1, 1, 2], vec![1, 2, 2], vec![2, 1, 2]]).unwrap();
        // v12 hits 112, 212; 1v2 hits 112, 122. v-first order puts v12 first.
        assert_eq!(find_variable_word(&c, &[1, 2], 3), Some(vw(&[None, Some(1), Some(2)])));
    }

    #[test]
    fn lines_count() {
        // (t+1)^n - t^n variable words.
        assert_eq!(combinatorial_lines(2, 1).len(), 1);
        assert_eq!(combinatorial_lines(2, 2).len(), 5);
        assert_eq!(combinatorial_lines(3, 2).len(), 7);
        assert_eq!(combinatorial_lines(2, 3).len(), 19);
        assert_eq!(combinatorial_lines(2, 2)[0], vec![0, 3]);
    }

    /// Enumerates every coloring outright.
    fn hj_brute(t: u32, r: u32, n: u32) -> bool {
        let words = t.pow(n) as usize;
        let lines = combinatorial_lines(t, n);
        (0..(r as u64).pow(words as u32)).all(|mut idx| {
            let colors: Vec<u64> = (0..words)
                .map(|_| {
                    let c = idx % r as u64;
                    idx /= r as u64;
                    c
                })
                .collect();
            lines.iter().any(|l| l.iter().all(|&p| colors[p] == colors[l[0]]))
        })
    }

    #[test]
    fn hj_examples() {
        assert!(!hj_exhaustive(2, 2, 1).unwrap());
        assert!(hj_exhaustive(2, 2, 2).unwrap());
        assert!(hj_exhaustive(2, 1, 1).unwrap());
    }

    #[test]
    fn hj_backtracking_matches_brute_force() {
        for (t, r, n) in [(2, 2, 1), (2, 2, 2), (2, 2, 3), (2, 3, 2), (3, 2, 2), (2, 3, 3), (1, 3, 4), (4, 2, 1)] {
            assert_eq!(hj_exhaustive(t, r, n).unwrap(), hj_brute(t, r, n), "t={t} r={r} n={n}");
        }
    }

    #[test]
    fn hj_counterexample_is_line_free() {
        let coloring = hj_line_free_coloring(2, 2, 1).unwrap().unwrap();
        assert_eq!(coloring, vec![0, 1]);
        let coloring = hj_line_free_coloring(3, 2, 2).unwrap().unwrap();
        for line in combinatorial_lines(3, 2) {
            assert!(line.iter().any(|&p| coloring[p] != coloring[line[0]]));
        }
    }

    #[test]
    fn hj_bounds() {
        assert!(matches!(hj_exhaustive(2, 2, 5), Err(Error::BoundsExceeded(_))));
        assert!(matches!(hj_exhaustive(2, 5, 2), Err(Error::BoundsExceeded(_))));
        assert!(hj_exhaustive(0, 2, 2).is_err());
        assert!(hj_exhaustive(2, 4, 4).is_ok());
    }

    #[test]
    fn infinite_alphabet_color_examples() {
        let omega = Ordinal::monomial(1, 1);
        let s = Word::new(vec![omega.clone(), Ordinal::natural(3)]).unwrap();
        assert_eq!(infinite_alphabet_color(&s), 0);
        assert_eq!(infinite_alphabet_color(&Word::new(vec![Ordinal::natural(5)]).unwrap()), 1);
        let s = Word::new(vec![Ordinal::natural(1), ord(&[(1, 2), (0, 3)])]).unwrap();
        assert_eq!(infinite_alphabet_color(&s), 1);
    }

    #[test]
    fn refute_line_examples() {
        let r = refute_line(&VariableWord::new(vec![None]).unwrap());
        assert_eq!((r.even, r.odd), (Ordinal::natural(2), Ordinal::natural(1)));

        let omega = Ordinal::monomial(1, 1);
        let r = refute_line(&VariableWord::new(vec![Some(omega.clone()), None]).unwrap());
        assert_eq!(r.odd, ord(&[(1, 1), (0, 1)]));
        assert_eq!(r.even, ord(&[(1, 1), (0, 2)]));

        let three = Some(Ordinal::natural(3));
        let r = refute_line(&VariableWord::new(vec![three.clone(), None, three]).unwrap());
        assert_eq!((r.even, r.odd), (Ordinal::natural(4), Ordinal::natural(5)));
        assert_ne!(r.even_color, r.odd_color);
    }
}
