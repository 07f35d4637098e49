//! Regenerative composition structures driven by a subordinator.
//!
//! The first part of `C_n` has law `q(n, ·)` and, given it equals `m`, the
//! rest of the composition is a copy of `C_{n−m}`. Hence
//! `P(C_n = λ) = Π_j q(Λ_j, λ_j)` with tail sums `Λ_j = λ_j + … + λ_ℓ`, and
//!
//! ```text
//! q(n, m) = −C(n,m) ∇^m Φ(n−m) / Φ(n)
//!         = (n d 1(m=1) + C(n,m) ∫ x^m (1−x)^{n−m} ν̃(dx)) / Φ(n)
//! ```

use std::collections::BTreeMap;
use std::fmt;

use num::{Signed, Zero};
use rand::Rng;
use serde::ser::SerializeStruct;
use serde::{Deserialize, Serialize, Serializer};

use crate::error::{invalid, Error, Result};
use crate::rational::{self, binomial_q, int, Rational};
use crate::seqcalc::{self, FiniteSequence};
use crate::subord::{phi, phi_sequence, LaplaceExponentData};

/// Largest `n` for exact enumeration unless overridden (2^15 compositions).
pub const DEFAULT_CAP: usize = 16;

/// Ordered positive parts; orders lexicographically.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(transparent)]
pub struct Composition(Vec<usize>);

impl<'de> Deserialize<'de> for Composition {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let parts = Vec::<usize>::deserialize(d)?;
        Self::new(parts).map_err(serde::de::Error::custom)
    }
}

impl Composition {
    pub fn new(parts: Vec<usize>) -> Result<Self> {
        if parts.is_empty() {
            return Err(invalid("a composition needs at least one part"));
        }
        if parts.contains(&0) {
            return Err(invalid("composition parts must be positive"));
        }
        Ok(Self(parts))
    }

    pub fn parts(&self) -> &[usize] {
        &self.0
    }

    pub fn n(&self) -> usize {
        self.0.iter().sum()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Parts sorted nonincreasingly (the induced integer partition).
    pub fn to_partition(&self) -> Composition {
        let mut parts = self.0.clone();
        parts.sort_unstable_by(|a, b| b.cmp(a));
        Composition(parts)
    }
}

impl fmt::Display for Composition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let strs: Vec<String> = self.0.iter().map(|p| p.to_string()).collect();
        write!(f, "({})", strs.join(","))
    }
}

/// Every composition of `n` in lexicographic order.
pub fn compositions(n: usize) -> Vec<Composition> {
    fn rec(rest: usize, prefix: &mut Vec<usize>, out: &mut Vec<Composition>) {
        if rest == 0 {
            out.push(Composition(prefix.clone()));
            return;
        }
        for first in 1..=rest {
            prefix.push(first);
            rec(rest - first, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    if n > 0 {
        rec(n, &mut Vec::new(), &mut out);
    }
    out
}

/// Exact law of a random composition of `n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CompositionDistribution {
    pub n: usize,
    pub pmf: BTreeMap<Composition, Rational>,
}

impl CompositionDistribution {
    pub fn point_mass(c: Composition) -> Self {
        Self {
            n: c.n(),
            pmf: BTreeMap::from([(c, int(1))]),
        }
    }

    pub fn prob(&self, c: &Composition) -> Rational {
        self.pmf.get(c).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn total(&self) -> Rational {
        self.pmf.values().sum()
    }

    /// Law of the sorted parts.
    pub fn to_partitions(&self) -> CompositionDistribution {
        let mut pmf = BTreeMap::new();
        for (c, p) in &self.pmf {
            *pmf.entry(c.to_partition()).or_insert_with(Rational::zero) += p;
        }
        Self { n: self.n, pmf }
    }

    fn drop_zeros(mut self) -> Self {
        self.pmf.retain(|_, p| !p.is_zero());
        self
    }
}

impl Serialize for CompositionDistribution {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Entry<'a> {
            parts: &'a Composition,
            #[serde(with = "rational")]
            p: &'a Rational,
        }
        let entries: Vec<Entry> = self
            .pmf
            .iter()
            .map(|(parts, p)| Entry { parts, p })
            .collect();
        let mut st = s.serialize_struct("CompositionDistribution", 2)?;
        st.serialize_field("n", &self.n)?;
        st.serialize_field("pmf", &entries)?;
        st.end()
    }
}

/// `q(n, m)` for `m = 1..=n`, stored at index `m − 1`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct QRow {
    pub n: usize,
    #[serde(with = "rational::vec")]
    pub q: Vec<Rational>,
}

impl QRow {
    pub fn get(&self, m: usize) -> Rational {
        if m == 0 || m > self.n {
            Rational::zero()
        } else {
            self.q[m - 1].clone()
        }
    }

    pub fn sum(&self) -> Rational {
        self.q.iter().sum()
    }
}

fn require_positive_n(n: usize) -> Result<()> {
    if n == 0 {
        Err(invalid("n must be at least 1"))
    } else {
        Ok(())
    }
}

fn q_row_from_phis(phis: &FiniteSequence, n: usize) -> QRow {
    let total = &phis[n];
    let q = (1..=n)
        .map(|m| {
            let d = seqcalc::nabla_power(phis, m, n - m).expect("phi sequence reaches n");
            -(binomial_q(n, m) * d) / total
        })
        .collect();
    QRow { n, q }
}

/// First-part law from finite differences of `Φ`.
pub fn q_row_fd(data: &LaplaceExponentData, n: usize) -> Result<QRow> {
    require_positive_n(n)?;
    Ok(q_row_from_phis(&phi_sequence(data, n), n))
}

/// First-part law from the integral against `ν̃`, normalized by `Φ(n)` so
/// the row sums to 1.
pub fn q_row_integral(data: &LaplaceExponentData, n: usize) -> Result<QRow> {
    require_positive_n(n)?;
    let total = phi(data, n);
    let one = int(1);
    let q = (1..=n)
        .map(|m| {
            let jumps: Rational = data
                .nutilde()
                .atoms()
                .iter()
                .map(|a| &a.w * rational::pow(&a.x, m) * rational::pow(&(&one - &a.x), n - m))
                .sum();
            let mut num = binomial_q(n, m) * jumps;
            if m == 1 {
                num += int(n as i64) * data.drift();
            }
            num / &total
        })
        .collect();
    Ok(QRow { n, q })
}

fn check_cap(n: usize, cap: usize) -> Result<()> {
    if n > cap {
        Err(Error::Resource { n, cap })
    } else {
        Ok(())
    }
}

/// Exact laws of `C_1, …, C_n`, built by the regenerative recursion.
pub fn composition_pmfs(
    data: &LaplaceExponentData,
    n: usize,
    cap: usize,
) -> Result<Vec<CompositionDistribution>> {
    require_positive_n(n)?;
    check_cap(n, cap)?;
    let phis = phi_sequence(data, n);
    let mut dists: Vec<CompositionDistribution> = Vec::with_capacity(n);
    for size in 1..=n {
        let row = q_row_from_phis(&phis, size);
        let mut pmf = BTreeMap::new();
        for m in 1..=size {
            let qm = row.get(m);
            if qm.is_zero() {
                continue;
            }
            if m == size {
                pmf.insert(Composition(vec![m]), qm);
                continue;
            }
            for (rest, p) in &dists[size - m - 1].pmf {
                let mut parts = Vec::with_capacity(rest.len() + 1);
                parts.push(m);
                parts.extend_from_slice(rest.parts());
                pmf.insert(Composition(parts), &qm * p);
            }
        }
        dists.push(CompositionDistribution { n: size, pmf });
    }
    Ok(dists)
}

/// Exact law of `C_n`; compositions of probability zero are omitted.
pub fn composition_pmf(
    data: &LaplaceExponentData,
    n: usize,
    cap: usize,
) -> Result<CompositionDistribution> {
    Ok(composition_pmfs(data, n, cap)?.pop().expect("n ≥ 1"))
}

/// Deletes one uniformly chosen ball: from `λ`, part `j` loses a ball with
/// probability `λ_j / n` and disappears if it empties.
pub fn deletion_projection(dist: &CompositionDistribution) -> Result<CompositionDistribution> {
    if dist.n < 2 {
        return Err(invalid("deletion projection needs n ≥ 2"));
    }
    let n = int(dist.n as i64);
    let mut pmf: BTreeMap<Composition, Rational> = BTreeMap::new();
    for (c, p) in &dist.pmf {
        for (j, &part) in c.parts().iter().enumerate() {
            let mut parts = c.parts().to_vec();
            if part == 1 {
                parts.remove(j);
            } else {
                parts[j] -= 1;
            }
            *pmf.entry(Composition(parts)).or_insert_with(Rational::zero) += p * int(part as i64);
        }
    }
    for p in pmf.values_mut() {
        *p /= &n;
    }
    Ok(CompositionDistribution { n: dist.n - 1, pmf }.drop_zeros())
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RegenerationReport {
    pub n: usize,
    pub passed: bool,
    /// First part `m` and remainder `μ` where the conditional law differs.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<(usize, Composition)>,
}

/// Checks `P(C_n = (m, μ) | first part m) = P(C_{n−m} = μ)` using `smaller`,
/// where `smaller[k − 1]` is the law of `C_k`.
pub fn regeneration_check_against(
    dist: &CompositionDistribution,
    smaller: &[CompositionDistribution],
) -> Result<RegenerationReport> {
    let n = dist.n;
    if smaller.len() + 1 < n {
        return Err(invalid(format!(
            "need laws of C_1..C_{} to check regeneration at n = {n}",
            n - 1
        )));
    }
    let mut by_first: BTreeMap<usize, Vec<(&Composition, &Rational)>> = BTreeMap::new();
    for (c, p) in &dist.pmf {
        by_first.entry(c.parts()[0]).or_default().push((c, p));
    }
    for (m, entries) in by_first {
        let marginal: Rational = entries.iter().map(|(_, p)| *p).sum();
        if marginal.is_zero() || m == n {
            continue;
        }
        let target = &smaller[n - m - 1];
        for (c, p) in &entries {
            let rest = Composition(c.parts()[1..].to_vec());
            let conditional = *p / &marginal;
            if conditional != target.prob(&rest) {
                return Ok(RegenerationReport {
                    n,
                    passed: false,
                    witness: Some((m, rest)),
                });
            }
        }
        // remainders the target supports but the conditional law never produced
        if let Some(missing) = target.pmf.iter().find(|(mu, p)| {
            !p.is_zero()
                && !entries
                    .iter()
                    .any(|(c, q)| !q.is_zero() && &c.parts()[1..] == mu.parts())
        }) {
            return Ok(RegenerationReport {
                n,
                passed: false,
                witness: Some((m, missing.0.clone())),
            });
        }
    }
    Ok(RegenerationReport {
        n,
        passed: true,
        witness: None,
    })
}

pub fn regeneration_check(
    data: &LaplaceExponentData,
    n: usize,
    cap: usize,
) -> Result<RegenerationReport> {
    let mut dists = composition_pmfs(data, n, cap)?;
    let top = dists.pop().expect("n ≥ 1");
    regeneration_check_against(&top, &dists)
}

/// Precomputed tables for drawing compositions of a fixed `n`.
#[derive(Debug, Clone)]
pub struct CompositionSampler {
    n: usize,
    /// cumulative `q(k, ·)` for `k = 1..=n`
    cumulative_q: Vec<Vec<f64>>,
    drift: f64,
    jump_rate: f64,
    /// cumulative jump-choice probabilities and the matching level jumps
    jump_cdf: Vec<f64>,
    jump_sizes: Vec<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SamplingMethod {
    Recursive,
    Paintbox,
}

impl CompositionSampler {
    pub fn new(data: &LaplaceExponentData, n: usize) -> Result<Self> {
        require_positive_n(n)?;
        let phis = phi_sequence(data, n);
        let cumulative_q = (1..=n)
            .map(|k| {
                let row = q_row_from_phis(&phis, k);
                let mut acc = 0.0;
                row.q
                    .iter()
                    .map(|p| {
                        acc += rational::to_f64(p);
                        acc
                    })
                    .collect()
            })
            .collect();
        let jump_rate = data.jump_rate();
        let mut acc = Rational::zero();
        let jump_cdf = data
            .nutilde()
            .atoms()
            .iter()
            .map(|a| {
                acc += &a.w;
                if jump_rate.is_zero() {
                    1.0
                } else {
                    rational::to_f64(&(&acc / &jump_rate))
                }
            })
            .collect();
        let jump_sizes = data
            .nutilde()
            .atoms()
            .iter()
            .map(|a| {
                if a.x == int(1) {
                    f64::INFINITY
                } else {
                    -(1.0 - rational::to_f64(&a.x)).ln()
                }
            })
            .collect();
        Ok(Self {
            n,
            cumulative_q,
            drift: rational::to_f64(data.drift()),
            jump_rate: rational::to_f64(&jump_rate),
            jump_cdf,
            jump_sizes,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn sample<R: Rng + ?Sized>(&self, method: SamplingMethod, rng: &mut R) -> Composition {
        match method {
            SamplingMethod::Recursive => self.sample_recursive(rng),
            SamplingMethod::Paintbox => self.sample_paintbox(rng),
        }
    }

    /// Draws the first part from `q(n, ·)` and repeats on the remainder.
    pub fn sample_recursive<R: Rng + ?Sized>(&self, rng: &mut R) -> Composition {
        let mut parts = Vec::new();
        let mut rest = self.n;
        while rest > 0 {
            let row = &self.cumulative_q[rest - 1];
            let u: f64 = rng.random();
            let idx = row.partition_point(|&c| c <= u).min(rest - 1);
            parts.push(idx + 1);
            rest -= idx + 1;
        }
        Composition(parts)
    }

    /// Clusters `n` uniform points by the gaps of the closed range of
    /// `1 − exp(−Y)`. Points are mapped to levels `z = −log(1 − u)` and the
    /// subordinator is run until every level is covered: levels passed by
    /// drift are singletons, levels inside one jump form one part. A level
    /// equal to a jump endpoint counts as inside the jump.
    pub fn sample_paintbox<R: Rng + ?Sized>(&self, rng: &mut R) -> Composition {
        let mut levels: Vec<f64> = (0..self.n)
            .map(|_| {
                let u: f64 = rng.random();
                -(1.0 - u).ln()
            })
            .collect();
        levels.sort_by(|a, b| a.total_cmp(b));

        let mut parts = Vec::new();
        let mut next = 0usize;
        let mut y = 0.0f64;
        if self.jump_rate <= 0.0 {
            return Composition(vec![1; self.n]);
        }
        while next < self.n {
            if self.drift > 0.0 {
                let u: f64 = rng.random();
                let wait = -(1.0 - u).ln() / self.jump_rate;
                let end = y + self.drift * wait;
                while next < self.n && levels[next] < end {
                    parts.push(1);
                    next += 1;
                }
                y = end;
                if next == self.n {
                    break;
                }
            }
            let u: f64 = rng.random();
            let atom = self
                .jump_cdf
                .partition_point(|&c| c <= u)
                .min(self.jump_cdf.len() - 1);
            let top = y + self.jump_sizes[atom];
            let covered = levels[next..].partition_point(|&z| z <= top);
            if covered > 0 {
                parts.push(covered);
                next += covered;
            }
            y = top;
        }
        Composition(parts)
    }
}

pub fn sample_composition_recursive<R: Rng + ?Sized>(
    data: &LaplaceExponentData,
    n: usize,
    rng: &mut R,
) -> Result<Composition> {
    Ok(CompositionSampler::new(data, n)?.sample_recursive(rng))
}

pub fn sample_composition_paintbox<R: Rng + ?Sized>(
    data: &LaplaceExponentData,
    n: usize,
    rng: &mut R,
) -> Result<Composition> {
    Ok(CompositionSampler::new(data, n)?.sample_paintbox(rng))
}

/// Ball counts per box `(X_{j−1}, X_j]` with `X_0 = 0`, plus the balls that
/// fell beyond the last breakpoint.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Allocation {
    pub counts: Vec<u64>,
    pub residual: u64,
}

/// Throws `n` uniform balls against the breakpoints `X_1 ≤ X_2 ≤ … ≤ 1`.
/// A single breakpoint `X` gives the two-box count `S_n = counts[0]`.
pub fn definetti_allocation<R: Rng + ?Sized>(
    breakpoints: &[Rational],
    n: u64,
    rng: &mut R,
) -> Result<Allocation> {
    if let Some(x) = breakpoints.iter().find(|x| x.is_negative() || **x > int(1)) {
        return Err(invalid(format!("breakpoint {x} outside [0,1]")));
    }
    if breakpoints.windows(2).any(|w| w[0] > w[1]) {
        return Err(invalid("breakpoints must be nondecreasing"));
    }
    let cuts: Vec<f64> = breakpoints.iter().map(rational::to_f64).collect();
    let mut counts = vec![0u64; cuts.len()];
    let mut residual = 0u64;
    for _ in 0..n {
        let u: f64 = rng.random();
        // first box whose right end is ≥ u
        let j = cuts.partition_point(|&x| x < u);
        match counts.get_mut(j) {
            Some(c) => *c += 1,
            None => residual += 1,
        }
    }
    Ok(Allocation { counts, residual })
}
