//! Rows `<x_{i,j}>_j` with `FS(row i) ⊆ C_i` and every family sum of rows
//! inside `C_{min F}`, grown as a square prefix.
//!
//! Stage `n + 1` first appends column `n + 1` to rows `1..n` in order, then
//! builds row `n + 1` one entry at a time. Every pick is the least member of
//! an intersection of sets `B_X^A = A* ∩ ⋂_{x in X} (-x + A*)`.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use super::{check_family_sums, ChainFamily};
use crate::error::{Error, Result};
use crate::foundation::{Meet, Membership, TranslateMeet};
use crate::report::VerificationReport;
use crate::sumsets::{fs_values, sumset, Star};

/// Row-major prefix `x_{i,j}`. JSON: `{"rows": [[..], ..]}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct XMatrix {
    pub rows: Vec<Vec<u64>>,
}

/// Indices are 1-based.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum HtplusViolation {
    RowFs { row: usize, element: u64 },
    FamilySum { subset: Vec<usize>, element: u64 },
}

/// Constraints of one pick: for each set index `i`, the shifts `x` with
/// `y + x` required in `C_i*` (shift 0 means `y in C_i*` itself).
#[derive(Default)]
struct Constraints(BTreeMap<usize, BTreeSet<u64>>);

impl Constraints {
    /// Adds `B_X^{C_i}`.
    fn add_b(&mut self, i: usize, xs: impl IntoIterator<Item = u64>) {
        let entry = self.0.entry(i).or_default();
        entry.insert(0);
        entry.extend(xs);
    }

    fn least<'a>(&self, stars: &'a [Star<'a>]) -> Option<u64> {
        let (&base_idx, _) = self.0.iter().next_back()?;
        let target = TranslateMeet {
            base: &stars[base_idx],
            shifts: self
                .0
                .iter()
                .flat_map(|(&i, xs)| xs.iter().map(move |&x| (x, &stars[i] as &dyn Membership)))
                .filter(|&(x, _)| x != 0)
                .chain(self.0.keys().filter(|&&i| i != base_idx).map(|&i| (0, &stars[i] as &dyn Membership)))
                .collect(),
        };
        target.next_member(1)
    }
}

/// Resumable construction over a fixed family; each [`extend`](Self::extend)
/// grows the square prefix by one.
pub struct HtplusBuilder<'f> {
    family: &'f ChainFamily,
    x: Vec<Vec<u64>>,
}

impl<'f> HtplusBuilder<'f> {
    pub fn new(family: &'f ChainFamily) -> Self {
        HtplusBuilder { family, x: Vec::new() }
    }

    pub fn size(&self) -> usize {
        self.x.len()
    }

    pub fn matrix(&self) -> XMatrix {
        XMatrix { rows: self.x.clone() }
    }

    /// Sums `sum_{i in F} <x_{i,j}>_{j <= t(i)}`, sorted.
    fn family_sums(&self, subset: &[usize], t: impl Fn(usize) -> usize) -> Result<Vec<u64>> {
        let mut acc = vec![0u64];
        for &i in subset {
            let mut row = self.x[i][..t(i)].to_vec();
            row.sort_unstable();
            row.dedup();
            acc = sumset(&acc, &row).ok_or_else(|| self.overflow())?;
        }
        Ok(acc)
    }

    fn overflow(&self) -> Error {
        Error::WindowOverflow {
            value: u64::MAX,
            n_max: self.family.window().n_max(),
        }
    }

    fn fs(&self, terms: &[u64]) -> Result<Vec<u64>> {
        if terms.is_empty() {
            return Ok(Vec::new());
        }
        fs_values(terms).ok_or_else(|| self.overflow())
    }

    /// Nonempty subsets of `indices`, each ascending.
    fn subsets(indices: &[usize]) -> impl Iterator<Item = Vec<usize>> + '_ {
        (1u32..1 << indices.len()).map(move |bits| {
            (0..indices.len())
                .filter(|&b| bits >> b & 1 == 1)
                .map(|b| indices[b])
                .collect()
        })
    }

    pub fn extend(&mut self) -> Result<()> {
        let n = self.x.len();
        if n >= self.family.len() {
            return Err(Error::invalid(format!(
                "the family has {} sets, so the prefix cannot grow past {n} rows",
                self.family.len()
            )));
        }
        let oracle = self.family.oracle();
        // C_i replaced by C_1 ∩ .. ∩ C_i.
        let sets: Vec<&dyn Membership> = self.family.sets().iter().map(|s| s as &dyn Membership).collect();
        let prefixes: Vec<Meet> = (0..=n).map(|i| Meet(sets[..=i].to_vec())).collect();
        let stars: Vec<Star> = prefixes.iter().map(|m| Star::new(m, oracle)).collect();
        let exhausted = |row: usize, what: &str| {
            Error::exhausted(format!("stage {}, row {}", n + 1, row + 1), what.to_string())
        };

        // Column n+1 of rows 1..n.
        for k in 0..n {
            let mut c = Constraints::default();
            c.add_b(k, self.fs(&self.x[k][..n])?);
            let others: Vec<usize> = (0..n).filter(|&i| i != k).collect();
            for f in Self::subsets(&others) {
                let sums = self.family_sums(&f, |i| if i < k { n + 1 } else { n })?;
                c.add_b(f[0], sums);
            }
            let v = c
                .least(&stars)
                .ok_or_else(|| exhausted(k, "no point left for the new column entry"))?;
            self.x[k].push(v);
        }

        // Row n+1.
        let mut b = Constraints::default();
        let earlier: Vec<usize> = (0..n).collect();
        for f in Self::subsets(&earlier) {
            let sums = self.family_sums(&f, |_| n + 1)?;
            b.add_b(f[0], sums);
        }
        let mut row = Vec::with_capacity(n + 1);
        for _ in 0..=n {
            let mut c = Constraints(b.0.clone());
            c.add_b(n, self.fs(&row)?);
            let v = c.least(&stars).ok_or_else(|| exhausted(n, "no point left for the new row"))?;
            row.push(v);
        }
        self.x.push(row);
        Ok(())
    }
}

/// Builds the `rows x cols` prefix (square only) and verifies it.
pub fn build_htplus_prefix(family: &ChainFamily, rows: usize, cols: usize) -> Result<XMatrix> {
    if rows != cols {
        return Err(Error::invalid(format!(
            "the construction grows square prefixes, got {rows} x {cols}"
        )));
    }
    if rows == 0 {
        return Err(Error::invalid("the prefix needs at least one row"));
    }
    let mut builder = HtplusBuilder::new(family);
    for _ in 0..rows {
        builder.extend()?;
    }
    let x = builder.matrix();
    let report = verify_htplus(family, &x)?;
    if !report.passed {
        return Err(Error::VerificationFailed(format!(
            "prefix has {} violations, first {:?}",
            report.violations.len(),
            report.violations[0]
        )));
    }
    Ok(x)
}

/// Checks `FS(row i) ⊆ C_i` and `sum_{i in F} row_i ⊆ C_{min F}` against the
/// family as given. `checked` counts the elements examined.
pub fn verify_htplus(family: &ChainFamily, x: &XMatrix) -> Result<VerificationReport<HtplusViolation>> {
    let width = x.rows.first().map_or(0, Vec::len);
    if width == 0 || x.rows.iter().any(|r| r.len() != width) {
        return Err(Error::invalid("the prefix must be a nonempty rectangular matrix"));
    }
    if x.rows.len() > family.len() {
        return Err(Error::invalid(format!(
            "{} rows for a family of {} sets",
            x.rows.len(),
            family.len()
        )));
    }
    if x.rows.iter().flatten().any(|&v| v == 0) {
        return Err(Error::invalid("entries must be naturals >= 1"));
    }
    let window = family.window();
    let mut violations = Vec::new();
    let mut checked = 0u64;
    for (i, row) in x.rows.iter().enumerate() {
        let fs = fs_values(row).ok_or(Error::WindowOverflow {
            value: u64::MAX,
            n_max: window.n_max(),
        })?;
        window.check(*fs.last().expect("rows are nonempty"))?;
        checked += fs.len() as u64;
        violations.extend(
            fs.into_iter()
                .filter(|&e| !family.sets()[i].contains(e))
                .map(|element| HtplusViolation::RowFs { row: i + 1, element }),
        );
    }
    let points: Vec<Vec<u64>> = x
        .rows
        .iter()
        .map(|r| {
            let mut p = r.clone();
            p.sort_unstable();
            p.dedup();
            p
        })
        .collect();
    let sets: Vec<&dyn Membership> = family.sets().iter().map(|s| s as &dyn Membership).collect();
    checked += check_family_sums(&sets, &points, window, &mut |subset, element| {
        violations.push(HtplusViolation::FamilySum { subset, element })
    })?;
    Ok(VerificationReport::new(checked, violations))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::foundation::{DyadicSupport, GroundWindow, SubsetMask, WindowSet};

    fn window(n: u64) -> GroundWindow {
        GroundWindow::new(n).unwrap()
    }

    fn family(sets: Vec<WindowSet>, depth: u32) -> ChainFamily {
        ChainFamily::new(sets, depth).unwrap()
    }

    #[test]
    fn trivial_prefix() {
        let fam = family(vec![SubsetMask::full(window(10)).into()], 2);
        assert_eq!(build_htplus_prefix(&fam, 1, 1).unwrap().rows, vec![vec![1]]);
    }

    #[test]
    fn odd_rows_run_out() {
        let w = window(64);
        let odds: WindowSet = SubsetMask::from_predicate(w, |x| x % 2 == 1).into();
        let fam = family(vec![odds.clone(), odds], 2);
        match build_htplus_prefix(&fam, 2, 2) {
            Err(Error::OracleExhausted { stage, .. }) => assert_eq!(stage, "stage 2, row 1"),
            other => panic!("expected exhaustion, got {other:?}"),
        }
    }

    #[test]
    fn rejects_non_square() {
        let fam = family(vec![SubsetMask::full(window(10)).into()], 2);
        assert!(matches!(build_htplus_prefix(&fam, 1, 2), Err(Error::InvalidInput(_))));
    }

    #[test]
    fn verify_examples() {
        let w = window(64);
        let fam = family(vec![SubsetMask::full(window(7)).into()], 2);
        assert!(verify_htplus(&fam, &XMatrix { rows: vec![vec![1, 2, 4]] }).unwrap().passed);

        let fam = family(
            vec![WindowSet::multiples(w, 2).unwrap(), WindowSet::multiples(w, 4).unwrap()],
            2,
        );
        let x = XMatrix {
            rows: vec![vec![2], vec![4]],
        };
        assert!(verify_htplus(&fam, &x).unwrap().passed);

        let x = XMatrix {
            rows: vec![vec![1], vec![2]],
        };
        let report = verify_htplus(&fam, &x).unwrap();
        assert!(report.violations.contains(&HtplusViolation::RowFs { row: 1, element: 1 }));
        assert!(report
            .violations
            .contains(&HtplusViolation::FamilySum { subset: vec![1], element: 1 }));
    }

    #[test]
    fn dyadic_tails_three_rows() {
        let w = GroundWindow::pow2(30).unwrap();
        let sets = (1..=3).map(|n| DyadicSupport::tail(w, 5 * n).unwrap().into()).collect();
        let fam = family(sets, 4);
        let x = build_htplus_prefix(&fam, 3, 3).unwrap();
        assert_eq!(x.rows.len(), 3);
        let report = verify_htplus(&fam, &x).unwrap();
        assert!(report.passed);
    }

    #[test]
    fn builder_resumes() {
        let w = GroundWindow::pow2(24).unwrap();
        let sets = (1..=3).map(|n| DyadicSupport::tail(w, 3 * n).unwrap().into()).collect();
        let fam = family(sets, 3);
        let mut b = HtplusBuilder::new(&fam);
        b.extend().unwrap();
        b.extend().unwrap();
        let two = b.matrix();
        assert!(verify_htplus(&fam, &two).unwrap().passed);
        b.extend().unwrap();
        let three = b.matrix();
        assert_eq!(three.rows[0][..2], two.rows[0][..]);
        assert!(verify_htplus(&fam, &three).unwrap().passed);
        assert!(b.extend().is_err());
    }

    #[test]
    fn normalizes_to_a_decreasing_family() {
        // C_2 is not inside C_1; picks for row 2 must land in both.
        let w = window(1 << 12);
        let c2 = DyadicSupport::new(w, [0, 1].into_iter().chain(5..12)).unwrap();
        let fam = family(vec![WindowSet::multiples(w, 4).unwrap(), c2.into()], 3);
        let x = build_htplus_prefix(&fam, 2, 2).unwrap();
        assert!(x.rows[1].iter().all(|v| v % 32 == 0));
    }
}
