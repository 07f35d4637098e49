//! Chi-square goodness of fit of sampled compositions against an exact law.

use std::collections::BTreeMap;

use serde::Serialize;
use statrs::distribution::{ChiSquared, ContinuousCDF};

use crate::compstruct::{Composition, CompositionDistribution};
use crate::rational;

/// Bins whose expected count falls below this are pooled.
pub const MIN_EXPECTED: f64 = 5.0;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ChiSquareReport {
    pub statistic: f64,
    pub dof: usize,
    pub pvalue: f64,
}

impl ChiSquareReport {
    pub fn passes(&self, significance: f64) -> bool {
        self.pvalue > significance
    }
}

pub fn tally<'a>(draws: impl IntoIterator<Item = &'a Composition>) -> BTreeMap<Composition, u64> {
    let mut counts = BTreeMap::new();
    for c in draws {
        *counts.entry(c.clone()).or_insert(0) += 1;
    }
    counts
}

/// Pearson's statistic over the support of `expected`, pooling sparse bins
/// into one. A draw outside the support gives an infinite statistic and
/// p-value 0.
pub fn chi_square_gof(
    observed: &BTreeMap<Composition, u64>,
    expected: &CompositionDistribution,
) -> ChiSquareReport {
    let total: u64 = observed.values().sum();
    if observed.keys().any(|c| !expected.pmf.contains_key(c)) {
        return ChiSquareReport {
            statistic: f64::INFINITY,
            dof: expected.pmf.len().saturating_sub(1),
            pvalue: 0.0,
        };
    }
    let mut bins: Vec<(f64, f64)> = Vec::new();
    let mut pooled = (0.0, 0.0);
    for (c, p) in &expected.pmf {
        let e = rational::to_f64(p) * total as f64;
        let o = *observed.get(c).unwrap_or(&0) as f64;
        if e < MIN_EXPECTED {
            pooled.0 += o;
            pooled.1 += e;
        } else {
            bins.push((o, e));
        }
    }
    if pooled.1 > 0.0 {
        if pooled.1 < MIN_EXPECTED && !bins.is_empty() {
            // fold an undersized pool into the smallest regular bin
            let idx = bins
                .iter()
                .enumerate()
                .min_by(|a, b| a.1 .1.total_cmp(&b.1 .1))
                .map(|(i, _)| i)
                .expect("non-empty");
            bins[idx].0 += pooled.0;
            bins[idx].1 += pooled.1;
        } else {
            bins.push(pooled);
        }
    }
    let statistic: f64 = bins.iter().map(|(o, e)| (o - e) * (o - e) / e).sum();
    let dof = bins.len().saturating_sub(1);
    let pvalue = if dof == 0 {
        if statistic == 0.0 {
            1.0
        } else {
            0.0
        }
    } else {
        let dist = ChiSquared::new(dof as f64).expect("positive dof");
        1.0 - dist.cdf(statistic)
    };
    ChiSquareReport {
        statistic,
        dof,
        pvalue,
    }
}
