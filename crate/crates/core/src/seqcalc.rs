//! Exact finite-difference calculus on sequence prefixes.
//!
//! The difference operator here is the *backward-looking* one used throughout
//! the moment literature:
//!
//! ```text
//! ∇c(n) = c(n) − c(n+1)
//! ∇^j c(n) = Σ_{i=0}^{j} (−1)^i C(j,i) c(n+i)
//! ```
//!
//! which is `(−1)^j` times the usual forward difference. Every sign condition
//! below (complete monotonicity, complete alternation, the convexity test on
//! the triangular array) is stated in terms of this `∇`.
//!
//! Only finite prefixes are ever available, so certification is always
//! relative to the depth of the prefix: a certificate says that every
//! inequality that can be evaluated from the given terms holds.

use num::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::rational::{self, binomial_q, Rational};

/// A prefix `c(0), …, c(N)` of a real sequence; `N` is its depth.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
#[serde(transparent)]
pub struct FiniteSequence {
    #[serde(with = "rational::vec")]
    values: Vec<Rational>,
}

impl<'de> Deserialize<'de> for FiniteSequence {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let values = rational::vec::deserialize(d)?;
        Self::new(values).map_err(serde::de::Error::custom)
    }
}

impl FiniteSequence {
    /// Fails on an empty vector; a depth-`N` sequence has `N + 1` terms.
    pub fn new(values: Vec<Rational>) -> Result<Self> {
        if values.is_empty() {
            return Err(invalid("a sequence needs at least one term"));
        }
        Ok(Self { values })
    }

    /// Samples `f(0), …, f(depth)`.
    pub fn from_fn(depth: usize, f: impl FnMut(usize) -> Rational) -> Self {
        Self {
            values: (0..=depth).map(f).collect(),
        }
    }

    pub fn depth(&self) -> usize {
        self.values.len() - 1
    }

    pub fn values(&self) -> &[Rational] {
        &self.values
    }

    pub fn into_values(self) -> Vec<Rational> {
        self.values
    }

    pub fn get(&self, n: usize) -> Option<&Rational> {
        self.values.get(n)
    }

    /// Keeps `c(0), …, c(depth)`.
    pub fn truncate(&self, depth: usize) -> Result<Self> {
        self.require_depth(depth)?;
        Ok(Self {
            values: self.values[..=depth].to_vec(),
        })
    }

    pub(crate) fn require_depth(&self, required: usize) -> Result<()> {
        if required > self.depth() {
            Err(Error::Index {
                required,
                available: self.depth(),
            })
        } else {
            Ok(())
        }
    }
}

impl std::ops::Index<usize> for FiniteSequence {
    type Output = Rational;

    fn index(&self, n: usize) -> &Rational {
        &self.values[n]
    }
}

/// Row `n` of the array `c(n, m) = C(n, m) ∇^{n−m} c(m)`, `m = 0..=n`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TriangularArrayRow {
    pub n: usize,
    #[serde(with = "rational::vec")]
    pub entries: Vec<Rational>,
}

impl TriangularArrayRow {
    pub fn sum(&self) -> Rational {
        self.entries.iter().sum()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    CertifiedToDepth,
    Violated,
}

/// First failing inequality. For difference conditions `value = ∇^j x(n)`;
/// for the triangular-array test `j` is the row and `n` the column (see
/// [`df_condition`]).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Witness {
    pub j: usize,
    pub n: usize,
    #[serde(with = "rational")]
    pub value: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DepthCertificate {
    pub verdict: Verdict,
    pub depth: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<Witness>,
}

impl DepthCertificate {
    pub fn certified(depth: usize) -> Self {
        Self {
            verdict: Verdict::CertifiedToDepth,
            depth,
            witness: None,
        }
    }

    pub fn violated(depth: usize, j: usize, n: usize, value: Rational) -> Self {
        Self {
            verdict: Verdict::Violated,
            depth,
            witness: Some(Witness { j, n, value }),
        }
    }

    pub fn is_certified(&self) -> bool {
        self.verdict == Verdict::CertifiedToDepth
    }
}

/// `∇^j c(n)` by the binomial expansion.
pub fn nabla_power(c: &FiniteSequence, j: usize, n: usize) -> Result<Rational> {
    c.require_depth(n + j)?;
    let mut acc = Rational::zero();
    for i in 0..=j {
        let term = binomial_q(j, i) * &c[n + i];
        if i % 2 == 0 {
            acc += term;
        } else {
            acc -= term;
        }
    }
    Ok(acc)
}

/// All differences reachable from the prefix: `table[j][n] = ∇^j c(n)` for
/// `j + n ≤ depth`. Built by repeated differencing, so O(depth²) operations.
pub fn difference_table(c: &FiniteSequence) -> Vec<Vec<Rational>> {
    let mut table = Vec::with_capacity(c.values.len());
    let mut row = c.values.clone();
    loop {
        let next: Vec<Rational> = row.windows(2).map(|w| &w[0] - &w[1]).collect();
        table.push(row);
        if next.is_empty() {
            break;
        }
        row = next;
    }
    table
}

pub fn triangular_row(c: &FiniteSequence, n: usize) -> Result<TriangularArrayRow> {
    c.require_depth(n)?;
    let entries = (0..=n)
        .map(|m| nabla_power(c, n - m, m).map(|d| binomial_q(n, m) * d))
        .collect::<Result<Vec<_>>>()?;
    Ok(TriangularArrayRow { n, entries })
}

/// Every row `0..=depth` at once, reusing one difference table.
pub fn triangular_rows(c: &FiniteSequence) -> Vec<TriangularArrayRow> {
    let table = difference_table(c);
    (0..=c.depth())
        .map(|n| TriangularArrayRow {
            n,
            entries: (0..=n)
                .map(|m| binomial_q(n, m) * &table[n - m][m])
                .collect(),
        })
        .collect()
}

/// Scans `table` in (j, then n) order starting at `j_min` and reports the
/// first entry rejected by `ok`.
fn first_violation(
    table: &[Vec<Rational>],
    j_min: usize,
    ok: impl Fn(&Rational) -> bool,
) -> Option<(usize, usize, Rational)> {
    table.iter().enumerate().skip(j_min).find_map(|(j, row)| {
        row.iter()
            .position(|v| !ok(v))
            .map(|n| (j, n, row[n].clone()))
    })
}

/// `∇^j c(n) ≥ 0` for every `j + n ≤ depth`.
pub fn certify_completely_monotone(c: &FiniteSequence) -> DepthCertificate {
    let table = difference_table(c);
    match first_violation(&table, 0, |v| !v.is_negative()) {
        None => DepthCertificate::certified(c.depth()),
        Some((j, n, v)) => DepthCertificate::violated(c.depth(), j, n, v),
    }
}

/// `∇^j a(n) ≤ 0` for every `j ≥ 1`, `j + n ≤ depth`.
pub fn certify_completely_alternating(a: &FiniteSequence) -> DepthCertificate {
    let table = difference_table(a);
    match first_violation(&table, 1, |v| !v.is_positive()) {
        None => DepthCertificate::certified(a.depth()),
        Some((j, n, v)) => DepthCertificate::violated(a.depth(), j, n, v),
    }
}

/// `a(0) = 0`, `a(n) = n c(n−1)`; one term deeper than `c`.
pub fn a_from_c(c: &FiniteSequence) -> FiniteSequence {
    let mut values = Vec::with_capacity(c.values.len() + 1);
    values.push(Rational::zero());
    values.extend(
        c.values
            .iter()
            .enumerate()
            .map(|(i, v)| rational::int(i as i64 + 1) * v),
    );
    FiniteSequence { values }
}

/// Inverse of [`a_from_c`]: `c(n) = a(n+1) / (n+1)`.
pub fn c_from_a(a: &FiniteSequence) -> Result<FiniteSequence> {
    if !a[0].is_zero() {
        return Err(invalid(format!("a(0) must be 0, got {}", a[0])));
    }
    if a.depth() == 0 {
        return Err(invalid("a needs depth at least 1 to define c(0)"));
    }
    let values = a.values[1..]
        .iter()
        .enumerate()
        .map(|(i, v)| v / rational::int(i as i64 + 1))
        .collect();
    Ok(FiniteSequence { values })
}

/// Checks that each row `c(n, ·)`, `n ≤ depth`, is non-negative and
/// nondecreasing, i.e. that the increments
/// `c(n, m) − c(n, m−1)` with `c(n, −1) := 0` are all `≥ 0`.
///
/// A witness has `j` = row `n`, `n` = column `m`, and `value` the offending
/// increment (so column 0 reports `c(n, 0)` itself).
pub fn df_condition(c: &FiniteSequence) -> Result<DepthCertificate> {
    if c[0] != rational::int(1) {
        return Err(invalid(format!("c(0) must be 1, got {}", c[0])));
    }
    for row in triangular_rows(c) {
        let mut prev = Rational::zero();
        for (m, entry) in row.entries.iter().enumerate() {
            let inc = entry - &prev;
            if inc.is_negative() {
                return Ok(DepthCertificate::violated(c.depth(), row.n, m, inc));
            }
            prev = entry.clone();
        }
    }
    Ok(DepthCertificate::certified(c.depth()))
}
