//! Higher convexity: `(k+1)`-convex distribution functions and k-alternating
//! sequences.
//!
//! With vanishing polynomial part, a `(k+1)`-convex CDF is the mixture
//! `F(x) = ∫ ((x − ξ)/(1 − ξ))^k 1(x ≥ ξ) ν(dξ)`. Its k-associated sequence
//! `a_k(n) = n(n−1)…(n−k+1) c(n−k)` (zero for `n < k`) is k-alternating:
//! `(−∇)^k a_k` is completely monotone. `k = 1` is the convex case.

use num::Zero;
use serde::Serialize;

use crate::error::{invalid, Result};
use crate::momentrep::DiscreteMeasure;
use crate::rational::{self, binomial_q, int, Rational};
use crate::seqcalc::{
    certify_completely_monotone, difference_table, DepthCertificate, FiniteSequence,
};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct KAssociated {
    pub k: usize,
    pub a: FiniteSequence,
}

impl KAssociated {
    /// Checks that the first `k` terms vanish.
    pub fn new(k: usize, a: FiniteSequence) -> Result<Self> {
        if k == 0 {
            return Err(invalid("k must be at least 1"));
        }
        if let Some(i) = (0..k.min(a.depth() + 1)).find(|&i| !a[i].is_zero()) {
            return Err(invalid(format!(
                "a({i}) must be 0 for a {k}-associated sequence"
            )));
        }
        Ok(Self { k, a })
    }
}

fn falling_factorial(n: usize, k: usize) -> Rational {
    (0..k).fold(int(1), |acc, i| acc * int(n as i64 - i as i64))
}

/// `a(n) = 0` for `n < k`, `a(n) = n^{k↓} c(n − k)` otherwise.
pub fn k_associated(c: &FiniteSequence, k: usize) -> Result<KAssociated> {
    if k == 0 {
        return Err(invalid("k must be at least 1"));
    }
    let a = FiniteSequence::from_fn(c.depth() + k, |n| {
        if n < k {
            Rational::zero()
        } else {
            falling_factorial(n, k) * &c[n - k]
        }
    });
    Ok(KAssociated { k, a })
}

/// Certifies that `b = (−∇)^k a` satisfies `∇^j b(n) ≥ 0` for all
/// `k + j + n ≤ depth`. Witness indices refer to `∇^j b(n)`.
pub fn certify_k_alternating(assoc: &KAssociated) -> DepthCertificate {
    let depth = assoc.a.depth();
    let k = assoc.k;
    if k > depth {
        return DepthCertificate::certified(depth);
    }
    let table = difference_table(&assoc.a);
    let sign = if k.is_multiple_of(2) { int(1) } else { int(-1) };
    let b = FiniteSequence::new(table[k].iter().map(|v| v * &sign).collect())
        .expect("row k of the table is non-empty");
    let mut cert = certify_completely_monotone(&b);
    cert.depth = depth;
    cert
}

/// `∫ x^n dF` for the single mixture component at `ξ`:
/// `Σ_j C(n,j) ξ^{n−j} (1−ξ)^j k/(k+j)`, and 1 at `ξ = 1`.
fn component_moment(xi: &Rational, k: usize, n: usize) -> Rational {
    let one = int(1);
    if *xi == one {
        return one;
    }
    let rest = &one - xi;
    (0..=n)
        .map(|j| {
            binomial_q(n, j) * rational::pow(xi, n - j) * rational::pow(&rest, j) * int(k as i64)
                / int((k + j) as i64)
        })
        .sum()
}

/// Moments `c(0..=depth)` of the `(k+1)`-convex CDF mixing the components
/// `((x − ξ)/(1 − ξ))^k` by the probability `nu`.
pub fn moments_kconvex_from_nu(
    nu: &DiscreteMeasure,
    k: usize,
    depth: usize,
) -> Result<FiniteSequence> {
    if k == 0 {
        return Err(invalid("k must be at least 1"));
    }
    if !nu.is_probability() {
        return Err(invalid(format!(
            "mixing measure must have mass 1, got {}",
            nu.total_mass()
        )));
    }
    Ok(FiniteSequence::from_fn(depth, |n| {
        nu.atoms()
            .iter()
            .map(|a| &a.w * component_moment(&a.x, k, n))
            .sum()
    }))
}
