//! Exact-rational partition regularity: Rado's columns condition with a
//! replayable certificate, the first entries condition, and exhaustive
//! searches for matrix images and kernel solutions inside a set.
//!
//! No floating point anywhere; all arithmetic is over [`Rational`].

use num_integer::Integer;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::foundation::{format_rational, parse_rational, Membership, Rational};

/// Largest column count accepted by [`columns_condition`].
pub const MAX_COLUMNS_CONDITION: usize = 8;

/// A `rows x cols` matrix of rationals.
///
/// JSON: `{"rows": u, "cols": m, "entries": [["p/q", ..], ..]}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "MatrixRepr", into = "MatrixRepr")]
pub struct RationalMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<Vec<Rational>>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct MatrixRepr {
    rows: usize,
    cols: usize,
    entries: Vec<Vec<String>>,
}

impl TryFrom<MatrixRepr> for RationalMatrix {
    type Error = Error;

    fn try_from(repr: MatrixRepr) -> Result<Self> {
        let entries = repr
            .entries
            .iter()
            .map(|row| row.iter().map(|s| parse_rational(s)).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        let m = RationalMatrix::new(entries)?;
        if m.rows != repr.rows || m.cols != repr.cols {
            return Err(Error::invalid(format!(
                "declared shape {}x{} does not match entries {}x{}",
                repr.rows, repr.cols, m.rows, m.cols
            )));
        }
        Ok(m)
    }
}

impl From<RationalMatrix> for MatrixRepr {
    fn from(m: RationalMatrix) -> Self {
        MatrixRepr {
            rows: m.rows,
            cols: m.cols,
            entries: m.entries.iter().map(|r| r.iter().map(format_rational).collect()).collect(),
        }
    }
}

impl RationalMatrix {
    pub fn new(entries: Vec<Vec<Rational>>) -> Result<Self> {
        let rows = entries.len();
        let cols = entries.first().map_or(0, Vec::len);
        if rows == 0 || cols == 0 {
            return Err(Error::invalid("matrices must have at least one row and one column"));
        }
        if entries.iter().any(|r| r.len() != cols) {
            return Err(Error::invalid("matrix rows have different lengths"));
        }
        Ok(RationalMatrix { rows, cols, entries })
    }

    pub fn from_ints(rows: &[&[i64]]) -> Result<Self> {
        Self::new(
            rows.iter()
                .map(|r| r.iter().map(|&v| Rational::from_integer(v as i128)).collect())
                .collect(),
        )
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn entry(&self, i: usize, j: usize) -> Rational {
        self.entries[i][j]
    }

    pub fn row(&self, i: usize) -> &[Rational] {
        &self.entries[i]
    }

    pub fn column(&self, j: usize) -> Vec<Rational> {
        self.entries.iter().map(|r| r[j]).collect()
    }

    /// `M x` in exact arithmetic.
    pub fn apply(&self, x: &[u64]) -> Vec<Rational> {
        self.entries
            .iter()
            .map(|row| {
                row.iter()
                    .zip(x)
                    .fold(Rational::zero(), |acc, (a, &xi)| acc + a * Rational::from_integer(xi as i128))
            })
            .collect()
    }

    /// Entries of `M x` when they are all naturals `>= 1`.
    pub fn image_entries(&self, x: &[u64]) -> Option<Vec<u64>> {
        self.apply(x)
            .into_iter()
            .map(|v| (v.is_integer() && v.numer() >= &1).then(|| *v.numer() as u64))
            .collect()
    }

    /// Each row scaled to integer coefficients: `(coeffs, denominator)`.
    fn integer_rows(&self) -> Vec<(Vec<i128>, i128)> {
        self.entries
            .iter()
            .map(|row| {
                let den = row.iter().fold(1i128, |l, q| l.lcm(q.denom()));
                let coeffs = row.iter().map(|q| q.numer() * (den / q.denom())).collect();
                (coeffs, den)
            })
            .collect()
    }
}

mod rational_str {
    use super::*;
    use serde::{Deserializer, Serializer};

    pub fn serialize<S: Serializer>(q: &Rational, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&format_rational(q))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Rational, D::Error> {
        let s = String::deserialize(d)?;
        parse_rational(&s).map_err(serde::de::Error::custom)
    }
}

/// One coefficient of a span witness.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpanTerm {
    pub column: usize,
    #[serde(with = "rational_str")]
    pub coeff: Rational,
}

/// A block `I_t` of the ordered column partition together with the
/// combination of earlier columns that equals its column sum (empty for the
/// first block, whose sum is zero).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertificateBlock {
    pub columns: Vec<usize>,
    pub combination: Vec<SpanTerm>,
}

/// Replayable witness that a matrix satisfies the columns condition.
/// Column indices are 0-based.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ColumnsConditionCertificate {
    pub blocks: Vec<CertificateBlock>,
}

fn column_sum(m: &RationalMatrix, set: u32) -> Vec<Rational> {
    (0..m.rows)
        .map(|i| {
            (0..m.cols)
                .filter(|j| set >> j & 1 == 1)
                .fold(Rational::zero(), |acc, j| acc + m.entries[i][j])
        })
        .collect()
}

/// Solves `sum_k c_k v_k = target` exactly; free variables are set to zero.
pub fn solve_combination(vectors: &[Vec<Rational>], target: &[Rational]) -> Option<Vec<Rational>> {
    let k = vectors.len();
    let u = target.len();
    // Augmented u x (k+1) system.
    let mut a: Vec<Vec<Rational>> = (0..u)
        .map(|i| {
            let mut row: Vec<Rational> = vectors.iter().map(|v| v[i]).collect();
            row.push(target[i]);
            row
        })
        .collect();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..k {
        let Some(p) = (r..u).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(r, p);
        let inv = a[r][c].recip();
        for v in a[r].iter_mut() {
            *v *= inv;
        }
        for i in 0..u {
            if i != r && !a[i][c].is_zero() {
                let f = a[i][c];
                for j in c..=k {
                    let delta = f * a[r][j];
                    a[i][j] -= delta;
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == u {
            break;
        }
    }
    if a[r..].iter().any(|row| !row[k].is_zero()) {
        return None;
    }
    let mut sol = vec![Rational::zero(); k];
    for (row, &c) in pivots.iter().enumerate() {
        sol[c] = a[row][k];
    }
    Some(sol)
}

/// Searches ordered column partitions for Rado's columns condition.
///
/// The first block must sum to the zero vector; every later block sum must
/// be a rational combination of the columns already used. Feasibility of a
/// partial partition depends only on the set of used columns, so the search
/// is a memoized DFS over that set and stays exhaustive.
pub fn columns_condition(m: &RationalMatrix) -> Result<Option<ColumnsConditionCertificate>> {
    if m.cols > MAX_COLUMNS_CONDITION {
        return Err(Error::BoundsExceeded(format!(
            "columns condition search is limited to {MAX_COLUMNS_CONDITION} columns, got {}",
            m.cols
        )));
    }
    let all = (1u32 << m.cols) - 1;
    let mut dead = vec![false; 1 << m.cols];
    let mut blocks = Vec::new();
    Ok(columns_dfs(m, 0, all, &mut dead, &mut blocks).then_some(ColumnsConditionCertificate { blocks }))
}

fn columns_dfs(
    m: &RationalMatrix,
    used: u32,
    all: u32,
    dead: &mut [bool],
    blocks: &mut Vec<CertificateBlock>,
) -> bool {
    if used == all {
        return true;
    }
    if dead[used as usize] {
        return false;
    }
    let rest = all & !used;
    let used_cols: Vec<usize> = (0..m.cols).filter(|j| used >> j & 1 == 1).collect();
    let used_vecs: Vec<Vec<Rational>> = used_cols.iter().map(|&j| m.column(j)).collect();
    for block in 1..=rest {
        if block & !rest != 0 {
            continue;
        }
        let sum = column_sum(m, block);
        let combination = if used == 0 {
            if !sum.iter().all(Zero::is_zero) {
                continue;
            }
            Vec::new()
        } else {
            let Some(coeffs) = solve_combination(&used_vecs, &sum) else {
                continue;
            };
            used_cols
                .iter()
                .zip(coeffs)
                .filter(|(_, c)| !c.is_zero())
                .map(|(&column, coeff)| SpanTerm { column, coeff })
                .collect()
        };
        blocks.push(CertificateBlock {
            columns: (0..m.cols).filter(|j| block >> j & 1 == 1).collect(),
            combination,
        });
        if columns_dfs(m, used | block, all, dead, blocks) {
            return true;
        }
        blocks.pop();
    }
    dead[used as usize] = true;
    false
}

/// Replays a certificate with exact arithmetic.
pub fn verify_certificate(m: &RationalMatrix, cert: &ColumnsConditionCertificate) -> bool {
    let mut seen = vec![false; m.cols];
    for (t, block) in cert.blocks.iter().enumerate() {
        if block.columns.is_empty() {
            return false;
        }
        for &j in &block.columns {
            if j >= m.cols || seen[j] {
                return false;
            }
        }
        let sum: Vec<Rational> = (0..m.rows)
            .map(|i| block.columns.iter().fold(Rational::zero(), |acc, &j| acc + m.entries[i][j]))
            .collect();
        let expected: Vec<Rational> = (0..m.rows)
            .map(|i| {
                block
                    .combination
                    .iter()
                    .fold(Rational::zero(), |acc, term| acc + term.coeff * m.entries[i][term.column])
            })
            .collect();
        if t == 0 && !block.combination.is_empty() {
            return false;
        }
        if block.combination.iter().any(|term| term.column >= m.cols || !seen[term.column]) {
            return false;
        }
        if sum != expected {
            return false;
        }
        for &j in &block.columns {
            seen[j] = true;
        }
    }
    seen.iter().all(|&s| s)
}

/// Outcome of the first entries check.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FirstEntries {
    pub holds: bool,
    /// Per column, the distinct first entries of rows whose leading nonzero
    /// entry sits in that column.
    pub per_column: Vec<Vec<String>>,
}

/// The first entries condition: no zero rows, and rows whose leading nonzero
/// entry sits in the same column agree on that entry, which is positive.
pub fn first_entries_condition(m: &RationalMatrix) -> Result<FirstEntries> {
    let mut per_column: Vec<Vec<Rational>> = vec![Vec::new(); m.cols];
    for (i, row) in m.entries.iter().enumerate() {
        let Some(l) = row.iter().position(|q| !q.is_zero()) else {
            return Err(Error::ZeroRow { row: i });
        };
        if !per_column[l].contains(&row[l]) {
            per_column[l].push(row[l]);
        }
    }
    let holds = per_column.iter().all(|vals| vals.len() <= 1 && vals.iter().all(Signed::is_positive));
    Ok(FirstEntries {
        holds,
        per_column: per_column.iter().map(|v| v.iter().map(format_rational).collect()).collect(),
    })
}

/// Rows grouped by the column after whose assignment they are fully determined.
fn rows_by_last_column(rows: &[(Vec<i128>, i128)], cols: usize) -> Vec<Vec<usize>> {
    let mut by_col = vec![Vec::new(); cols];
    for (i, (coeffs, _)) in rows.iter().enumerate() {
        if let Some(last) = coeffs.iter().rposition(|&c| c != 0) {
            by_col[last].push(i);
        }
    }
    by_col
}

/// Lexicographically least `x in [1..x_max]^m` with every entry of `M x` a
/// natural in `a`.
pub fn find_image_in_set(m: &RationalMatrix, a: &dyn Membership, x_max: u64) -> Option<Vec<u64>> {
    let rows = m.integer_rows();
    if x_max == 0 || rows.iter().any(|(c, _)| c.iter().all(|&v| v == 0)) {
        return None;
    }
    let by_col = rows_by_last_column(&rows, m.cols);
    let mut x = vec![0u64; m.cols];
    let check = |x: &[u64], j: usize| {
        by_col[j].iter().all(|&i| {
            let (coeffs, den) = &rows[i];
            let num: i128 = coeffs.iter().zip(x).map(|(c, &v)| c * v as i128).sum();
            num > 0 && num % den == 0 && u64::try_from(num / den).is_ok_and(|v| a.contains(v))
        })
    };
    fn dfs(j: usize, x: &mut Vec<u64>, x_max: u64, check: &dyn Fn(&[u64], usize) -> bool) -> bool {
        if j == x.len() {
            return true;
        }
        for v in 1..=x_max {
            x[j] = v;
            if check(x, j) && dfs(j + 1, x, x_max, check) {
                return true;
            }
        }
        false
    }
    dfs(0, &mut x, x_max, &check).then_some(x)
}

/// Lexicographically least `x in [1..x_max]^m` with `M x = 0` and every
/// entry of `x` in `a`.
pub fn find_kernel_in_set(m: &RationalMatrix, a: &dyn Membership, x_max: u64) -> Option<Vec<u64>> {
    let rows = m.integer_rows();
    if x_max == 0 {
        return None;
    }
    let by_col = rows_by_last_column(&rows, m.cols);
    let check = |x: &[u64], j: usize| {
        by_col[j].iter().all(|&i| {
            let (coeffs, _) = &rows[i];
            coeffs.iter().zip(x).map(|(c, &v)| c * v as i128).sum::<i128>() == 0
        })
    };
    fn dfs(
        j: usize,
        x: &mut Vec<u64>,
        x_max: u64,
        a: &dyn Membership,
        check: &dyn Fn(&[u64], usize) -> bool,
    ) -> bool {
        if j == x.len() {
            return true;
        }
        let mut from = 1;
        while let Some(v) = a.next_member(from).filter(|&v| v <= x_max) {
            x[j] = v;
            if check(x, j) && dfs(j + 1, x, x_max, a, check) {
                return true;
            }
            from = v + 1;
        }
        false
    }
    let mut x = vec![0u64; m.cols];
    dfs(0, &mut x, x_max, a, &check).then_some(x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::foundation::{GroundWindow, SubsetMask};

    fn ints(rows: &[&[i64]]) -> RationalMatrix {
        RationalMatrix::from_ints(rows).unwrap()
    }

    fn q(n: i128) -> Rational {
        Rational::from_integer(n)
    }

    fn window(n: u64) -> GroundWindow {
        GroundWindow::new(n).unwrap()
    }

    #[test]
    fn schur_columns_certificate() {
        let m = ints(&[&[1, 1, -1]]);
        let cert = columns_condition(&m).unwrap().expect("Schur matrix satisfies the columns condition");
        assert_eq!(cert.blocks[0].columns, vec![0, 2]);
        assert!(cert.blocks[0].combination.is_empty());
        assert_eq!(cert.blocks[1].columns, vec![1]);
        assert_eq!(cert.blocks[1].combination, vec![SpanTerm { column: 0, coeff: q(1) }]);
        assert!(verify_certificate(&m, &cert));
    }

    #[test]
    fn all_ones_fails_columns_condition() {
        assert_eq!(columns_condition(&ints(&[&[1, 1, 1]])).unwrap(), None);
    }

    #[test]
    fn difference_row_single_block() {
        let cert = columns_condition(&ints(&[&[1, -1]])).unwrap().unwrap();
        assert_eq!(cert.blocks.len(), 1);
        assert_eq!(cert.blocks[0].columns, vec![0, 1]);
    }

    #[test]
    fn columns_condition_limit() {
        let wide = ints(&[&[1; 9]]);
        assert!(matches!(columns_condition(&wide), Err(Error::BoundsExceeded(_))));
    }

    #[test]
    fn tampered_certificates_fail_replay() {
        let m = ints(&[&[1, 1, -1]]);
        let mut cert = columns_condition(&m).unwrap().unwrap();
        cert.blocks[1].combination[0].coeff = q(2);
        assert!(!verify_certificate(&m, &cert));
        let mut cert = columns_condition(&m).unwrap().unwrap();
        cert.blocks.pop();
        assert!(!verify_certificate(&m, &cert));
    }

    #[test]
    fn solve_combination_exact() {
        let vs = vec![vec![q(1), q(2)], vec![q(3), q(4)]];
        let sol = solve_combination(&vs, &[q(5), q(6)]).unwrap();
        assert_eq!(sol, vec![q(-1), q(2)]);
        assert_eq!(solve_combination(&[vec![q(1), q(1)]], &[q(1), q(2)]), None);
        let half = solve_combination(&[vec![q(2)]], &[q(1)]).unwrap();
        assert_eq!(half, vec![Rational::new(1, 2)]);
    }

    #[test]
    fn first_entries_examples() {
        assert!(first_entries_condition(&ints(&[&[1, 0], &[0, 1], &[1, 1]])).unwrap().holds);
        assert!(!first_entries_condition(&ints(&[&[-1, 1]])).unwrap().holds);
        // Both rows lead in column 1 with different values 2 and 1.
        let fe = first_entries_condition(&ints(&[&[2, 0], &[1, 1]])).unwrap();
        assert!(!fe.holds);
        assert_eq!(fe.per_column, vec![vec!["2".to_string(), "1".to_string()], vec![]]);
        assert_eq!(
            first_entries_condition(&ints(&[&[1, 0], &[0, 0]])),
            Err(Error::ZeroRow { row: 1 })
        );
    }

    #[test]
    fn image_examples() {
        let schur = ints(&[&[1, 0], &[0, 1], &[1, 1]]);
        let evens = SubsetMask::from_predicate(window(100), |x| x % 2 == 0);
        let x = find_image_in_set(&schur, &evens, 100).unwrap();
        assert_eq!(x, vec![2, 2]);
        assert_eq!(schur.image_entries(&x).unwrap(), vec![2, 2, 4]);

        let one = ints(&[&[1]]);
        let seven = SubsetMask::from_members(window(10), [7]).unwrap();
        assert_eq!(find_image_in_set(&one, &seven, 10), Some(vec![7]));
        assert_eq!(find_image_in_set(&one, &SubsetMask::empty(window(10)), 10), None);
    }

    #[test]
    fn image_with_fractions() {
        // Rows (1/2, 0) and (0, 1): x_1 must be even.
        let m = RationalMatrix::new(vec![vec![Rational::new(1, 2), q(0)], vec![q(0), q(1)]]).unwrap();
        let all = SubsetMask::full(window(20));
        assert_eq!(find_image_in_set(&m, &all, 20), Some(vec![2, 1]));
    }

    #[test]
    fn kernel_examples() {
        let schur = ints(&[&[1, 1, -1]]);
        let all = SubsetMask::full(window(10));
        assert_eq!(find_kernel_in_set(&schur, &all, 10), Some(vec![1, 1, 2]));
        let odds = SubsetMask::from_predicate(window(20), |x| x % 2 == 1);
        assert_eq!(find_kernel_in_set(&schur, &odds, 20), None);
        let diff = ints(&[&[1, -1]]);
        let five = SubsetMask::from_members(window(10), [5]).unwrap();
        assert_eq!(find_kernel_in_set(&diff, &five, 10), Some(vec![5, 5]));
    }

    /// Plain lexicographic enumeration, used as the oracle for the DFS.
    fn kernel_brute(m: &RationalMatrix, a: &SubsetMask, x_max: u64) -> Option<Vec<u64>> {
        let cols = m.cols();
        let total = x_max.pow(cols as u32);
        (0..total).find_map(|mut idx| {
            let mut x = vec![0; cols];
            for j in (0..cols).rev() {
                x[j] = idx % x_max + 1;
                idx /= x_max;
            }
            (x.iter().all(|&v| a.contains(v)) && m.apply(&x).iter().all(Zero::is_zero)).then_some(x)
        })
    }

    #[test]
    fn kernel_search_matches_brute_force() {
        let m = ints(&[&[1, 2, -3], &[0, 1, -1]]);
        for modulus in 2..6u64 {
            let a = SubsetMask::from_predicate(window(12), |x| x % modulus != 1);
            assert_eq!(find_kernel_in_set(&m, &a, 12), kernel_brute(&m, &a, 12));
        }
    }

    #[test]
    fn matrix_json_round_trip() {
        let json = r#"{"rows": 1, "cols": 3, "entries": [["1", "1/2", "-3/6"]]}"#;
        let m: RationalMatrix = serde_json::from_str(json).unwrap();
        assert_eq!(m.entry(0, 2), Rational::new(-1, 2));
        let back = serde_json::to_string(&m).unwrap();
        assert_eq!(back, r#"{"rows":1,"cols":3,"entries":[["1","1/2","-1/2"]]}"#);
        assert!(serde_json::from_str::<RationalMatrix>(r#"{"rows": 2, "cols": 1, "entries": [["1"]]}"#).is_err());
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #[test]
            fn certificates_always_replay(entries in proptest::collection::vec(-2i64..3, 2..7)) {
                let m = RationalMatrix::from_ints(&[&entries]).unwrap();
                if let Some(cert) = columns_condition(&m).unwrap() {
                    prop_assert!(verify_certificate(&m, &cert));
                }
            }

            #[test]
            fn single_row_condition_iff_zero_subset_sum(entries in proptest::collection::vec(-3i64..4, 1..7)) {
                // For one row, a zero-sum first block exists iff some nonempty
                // subset sums to zero; later blocks are then in the span
                // whenever the first block has a nonzero entry, or trivially
                // when every entry is zero.
                let m = RationalMatrix::from_ints(&[&entries]).unwrap();
                let n = entries.len();
                let zero_subsets: Vec<u32> = (1u32..(1 << n))
                    .filter(|s| (0..n).filter(|j| s >> j & 1 == 1).map(|j| entries[j]).sum::<i64>() == 0)
                    .collect();
                let expected = zero_subsets.iter().any(|&s| {
                    let rest_nonzero = (0..n).any(|j| s >> j & 1 == 0 && entries[j] != 0);
                    let block_nonzero = (0..n).any(|j| s >> j & 1 == 1 && entries[j] != 0);
                    !rest_nonzero || block_nonzero
                });
                prop_assert_eq!(columns_condition(&m).unwrap().is_some(), expected);
            }

            #[test]
            fn image_results_recheck(a in 0i64..3, b in 0i64..3, c in 1i64..3, modulus in 2u64..5) {
                let m = RationalMatrix::from_ints(&[&[c, 0], &[a, b + 1]]).unwrap();
                let set = SubsetMask::from_predicate(GroundWindow::new(60).unwrap(), |x| x % modulus == 0);
                if let Some(x) = find_image_in_set(&m, &set, 15) {
                    let image = m.image_entries(&x).unwrap();
                    prop_assert!(image.iter().all(|&v| set.contains(v)));
                }
            }
        }
    }
}
