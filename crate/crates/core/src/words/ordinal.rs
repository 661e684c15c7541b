//! Ordinals below `ω^ω` in Cantor normal form.

use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// `ω^e_1·k_1 + .. + ω^e_n·k_n` with `e_1 > .. > e_n` and every `k_i >= 1`.
/// The empty term list is the ordinal `0`.
///
/// JSON: `[[exponent, coefficient], ..]`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<(u32, u64)>", into = "Vec<(u32, u64)>")]
pub struct Ordinal {
    terms: Vec<(u32, u64)>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Parity {
    Odd,
    Even,
}

impl Ordinal {
    pub fn new(terms: Vec<(u32, u64)>) -> Result<Self> {
        if terms.iter().any(|&(_, k)| k == 0) {
            return Err(Error::invalid("Cantor normal form coefficients must be >= 1"));
        }
        if terms.windows(2).any(|w| w[0].0 <= w[1].0) {
            return Err(Error::invalid("Cantor normal form exponents must strictly decrease"));
        }
        Ok(Ordinal { terms })
    }

    pub fn zero() -> Self {
        Ordinal { terms: Vec::new() }
    }

    pub fn natural(k: u64) -> Self {
        if k == 0 {
            Self::zero()
        } else {
            Ordinal { terms: vec![(0, k)] }
        }
    }

    /// `ω^e · k`.
    pub fn monomial(e: u32, k: u64) -> Self {
        if k == 0 {
            Self::zero()
        } else {
            Ordinal { terms: vec![(e, k)] }
        }
    }

    pub fn terms(&self) -> &[(u32, u64)] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Successor or zero: not a limit.
    pub fn is_limit(&self) -> bool {
        self.terms.last().is_some_and(|&(e, _)| e != 0)
    }

    /// `self + 1`.
    pub fn successor(&self) -> Self {
        let mut terms = self.terms.clone();
        match terms.last_mut() {
            Some((0, k)) => *k += 1,
            _ => terms.push((0, 1)),
        }
        Ordinal { terms }
    }

    /// Odd iff nonzero, the last term has exponent 0 and an odd coefficient.
    pub fn parity(&self) -> Parity {
        match self.terms.last() {
            Some(&(0, k)) if k % 2 == 1 => Parity::Odd,
            _ => Parity::Even,
        }
    }
}

/// Standard ordinal order on Cantor normal forms: compare term by term
/// (exponent first, then coefficient); a proper prefix is smaller.
pub fn ordinal_compare(a: &Ordinal, b: &Ordinal) -> Ordering {
    for (&(ea, ka), &(eb, kb)) in a.terms.iter().zip(&b.terms) {
        match ea.cmp(&eb).then(ka.cmp(&kb)) {
            Ordering::Equal => continue,
            other => return other,
        }
    }
    a.terms.len().cmp(&b.terms.len())
}

impl Ord for Ordinal {
    fn cmp(&self, other: &Self) -> Ordering {
        ordinal_compare(self, other)
    }
}

impl PartialOrd for Ordinal {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl TryFrom<Vec<(u32, u64)>> for Ordinal {
    type Error = Error;
    fn try_from(terms: Vec<(u32, u64)>) -> Result<Self> {
        Ordinal::new(terms)
    }
}

impl From<Ordinal> for Vec<(u32, u64)> {
    fn from(o: Ordinal) -> Self {
        o.terms
    }
}

pub fn cnf_parity(alpha: &Ordinal) -> Parity {
    alpha.parity()
}

impl fmt::Display for Ordinal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, &(e, k)) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            match (e, k) {
                (0, k) => write!(f, "{k}")?,
                (1, 1) => write!(f, "ω")?,
                (1, k) => write!(f, "ω·{k}")?,
                (e, 1) => write!(f, "ω^{e}")?,
                (e, k) => write!(f, "ω^{e}·{k}")?,
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ord(terms: &[(u32, u64)]) -> Ordinal {
        Ordinal::new(terms.to_vec()).unwrap()
    }

    #[test]
    fn parity_examples() {
        assert_eq!(cnf_parity(&ord(&[(1, 2), (0, 3)])), Parity::Odd);
        assert_eq!(cnf_parity(&ord(&[(2, 1)])), Parity::Even);
        assert_eq!(cnf_parity(&Ordinal::natural(4)), Parity::Even);
        assert_eq!(cnf_parity(&Ordinal::zero()), Parity::Even);
        for k in 1..50 {
            let expected = if k % 2 == 1 { Parity::Odd } else { Parity::Even };
            assert_eq!(cnf_parity(&Ordinal::natural(k)), expected);
        }
    }

    #[test]
    fn compare_examples() {
        assert_eq!(ordinal_compare(&Ordinal::monomial(1, 1), &Ordinal::natural(100)), Ordering::Greater);
        let a = ord(&[(1, 2), (0, 3)]);
        assert_eq!(ordinal_compare(&a, &a.clone()), Ordering::Equal);
        assert_eq!(
            ordinal_compare(&Ordinal::monomial(2, 1), &ord(&[(1, 9), (0, 9)])),
            Ordering::Greater
        );
        assert!(ord(&[(1, 2)]) < ord(&[(1, 2), (0, 1)]));
        assert!(Ordinal::zero() < Ordinal::natural(1));
    }

    #[test]
    fn rejects_malformed_forms() {
        assert!(Ordinal::new(vec![(1, 1), (1, 2)]).is_err());
        assert!(Ordinal::new(vec![(0, 1), (1, 2)]).is_err());
        assert!(Ordinal::new(vec![(1, 0)]).is_err());
        assert!(serde_json::from_str::<Ordinal>("[[0, 1], [2, 1]]").is_err());
    }

    #[test]
    fn successor_and_limits() {
        let omega = Ordinal::monomial(1, 1);
        assert!(omega.is_limit());
        assert_eq!(omega.successor(), ord(&[(1, 1), (0, 1)]));
        assert_eq!(omega.successor().successor(), ord(&[(1, 1), (0, 2)]));
        assert!(!Ordinal::zero().is_limit());
        assert_eq!(Ordinal::zero().successor(), Ordinal::natural(1));
    }

    #[test]
    fn display_and_json() {
        assert_eq!(ord(&[(2, 1), (1, 3), (0, 4)]).to_string(), "ω^2 + ω·3 + 4");
        let o: Ordinal = serde_json::from_str("[[1, 2], [0, 3]]").unwrap();
        assert_eq!(o, ord(&[(1, 2), (0, 3)]));
        assert_eq!(serde_json::to_string(&o).unwrap(), "[[1,2],[0,3]]");
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn arb_ordinal() -> impl Strategy<Value = Ordinal> {
            proptest::collection::btree_map(0u32..4, 1u64..6, 0..4).prop_map(|m| {
                Ordinal::new(m.into_iter().rev().collect()).unwrap()
            })
        }

        /// Order-preserving evaluation at a finite base exceeding every
        /// coefficient: `ω ↦ 10`.
        fn eval(o: &Ordinal) -> u64 {
            o.terms().iter().map(|&(e, k)| k * 10u64.pow(e)).sum()
        }

        proptest! {
            #[test]
            fn compare_agrees_with_base_evaluation(a in arb_ordinal(), b in arb_ordinal()) {
                prop_assert_eq!(ordinal_compare(&a, &b), eval(&a).cmp(&eval(&b)));
            }

            #[test]
            fn compare_is_antisymmetric(a in arb_ordinal(), b in arb_ordinal()) {
                prop_assert_eq!(ordinal_compare(&a, &b), ordinal_compare(&b, &a).reverse());
            }

            #[test]
            fn successor_flips_parity_and_grows(a in arb_ordinal()) {
                let s = a.successor();
                prop_assert!(s > a);
                prop_assert_ne!(s.parity(), a.parity());
            }
        }
    }
}
