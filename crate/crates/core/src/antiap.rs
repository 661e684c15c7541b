//! Two disjoint sequences meeting every infinite arithmetic progression, so
//! that neither `A = {x_n}` nor its complement contains one.

use std::collections::{BTreeMap, HashSet};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::report::VerificationReport;

/// `AP_{a,b} = {a + n b : n >= 0}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct APSpec {
    pub a: u64,
    pub b: u64,
}

impl APSpec {
    pub fn contains(&self, v: u64) -> bool {
        v >= self.a && (v - self.a).is_multiple_of(self.b)
    }
}

/// The first `count` progressions ordered by `a + b`, then by `a`.
pub fn enumerate_aps(count: usize) -> Vec<APSpec> {
    (2u64..)
        .flat_map(|s| (1..s).map(move |a| APSpec { a, b: s - a }))
        .take(count)
        .collect()
}

/// `x_1..x_k` and `y_1..y_k`; stage `n` serves the `n`-th enumerated
/// progression. JSON: `{"x": [..], "y": [..]}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DiagonalState {
    pub x: Vec<u64>,
    pub y: Vec<u64>,
}

impl DiagonalState {
    pub fn stages(&self) -> usize {
        self.x.len().min(self.y.len())
    }
}

/// Runs `count` stages, each picking the least unused points of `l_n`
/// (first `x_n`, then `y_n`).
pub fn diagonalize(count: usize) -> DiagonalState {
    let mut used = HashSet::with_capacity(2 * count);
    let mut state = DiagonalState {
        x: Vec::with_capacity(count),
        y: Vec::with_capacity(count),
    };
    let least_unused = |l: &APSpec, used: &HashSet<u64>| {
        (0..)
            .map(|i| l.a + i * l.b)
            .find(|v| !used.contains(v))
            .expect("progressions are infinite")
    };
    for l in enumerate_aps(count) {
        let x = least_unused(&l, &used);
        used.insert(x);
        let y = least_unused(&l, &used);
        used.insert(y);
        state.x.push(x);
        state.y.push(y);
    }
    state
}

/// Which sequence a value came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    X,
    Y,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum HittingViolation {
    /// The point chosen at `stage` is not in the progression `l_stage`.
    OffProgression { stage: usize, side: Side, value: u64 },
    /// `y_stage` lies in `A`, so it does not witness `l_stage ⊄ A`.
    YInA { stage: usize, value: u64 },
    /// A value chosen more than once.
    Duplicate { value: u64 },
}

/// Checks, for the first `count` progressions, that `x_n ∈ l_n ∩ A` and
/// `y_n ∈ l_n \ A`, and that all chosen values are distinct. `checked`
/// counts progressions.
pub fn verify_hitting(state: &DiagonalState, count: usize) -> Result<VerificationReport<HittingViolation>> {
    if state.x.len() != state.y.len() {
        return Err(Error::invalid(format!(
            "{} x values but {} y values",
            state.x.len(),
            state.y.len()
        )));
    }
    if count > state.stages() {
        return Err(Error::invalid(format!(
            "asked to check {count} progressions but only {} stages exist",
            state.stages()
        )));
    }
    let a: HashSet<u64> = state.x.iter().copied().collect();
    let mut violations = Vec::new();
    for (n, l) in enumerate_aps(count).into_iter().enumerate() {
        let (x, y) = (state.x[n], state.y[n]);
        if !l.contains(x) {
            violations.push(HittingViolation::OffProgression { stage: n + 1, side: Side::X, value: x });
        }
        if !l.contains(y) {
            violations.push(HittingViolation::OffProgression { stage: n + 1, side: Side::Y, value: y });
        }
        if a.contains(&y) {
            violations.push(HittingViolation::YInA { stage: n + 1, value: y });
        }
    }
    let mut seen: BTreeMap<u64, usize> = BTreeMap::new();
    for &v in state.x.iter().chain(&state.y) {
        *seen.entry(v).or_default() += 1;
    }
    violations.extend(
        seen.into_iter()
            .filter(|&(_, c)| c > 1)
            .map(|(value, _)| HittingViolation::Duplicate { value }),
    );
    Ok(VerificationReport::new(count as u64, violations))
}
