//! Laplace exponents of subordinators at integer arguments.
//!
//! A subordinator with drift `d` and Lévy measure `Λ` has exponent
//! `Φ(λ) = λd + ∫ (1 − e^{−λy}) Λ(dy)`. Pushing `Λ` through `y ↦ 1 − e^{−y}`
//! gives the measure `ν̃` on `]0,1]` used as the canonical coordinate here:
//!
//! ```text
//! Φ(n) = n d + ∫ (1 − (1 − x)^n) ν̃(dx)
//! ```
//!
//! An atom of `ν̃` at 1 is the killing rate `Λ{∞}`. Storing `ν̃` keeps integer
//! evaluations exact; real arguments go through [`newton_interpolate`].

use num::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::momentrep::{geometric_sum, Atom, DiscreteMeasure};
use crate::rational::{self, int, Rational};
use crate::seqcalc::{self, FiniteSequence};

/// Drift plus a finite jump measure in the `ν̃` scale.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LaplaceExponentData {
    #[serde(with = "rational")]
    drift: Rational,
    nutilde: DiscreteMeasure,
}

#[derive(Deserialize)]
struct RawData {
    #[serde(with = "rational")]
    drift: Rational,
    nutilde: DiscreteMeasure,
}

impl<'de> Deserialize<'de> for LaplaceExponentData {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = RawData::deserialize(d)?;
        Self::new(raw.drift, raw.nutilde).map_err(serde::de::Error::custom)
    }
}

impl LaplaceExponentData {
    /// Rejects negative drift, atoms at 0, and the degenerate `Φ ≡ 0`.
    pub fn new(drift: Rational, nutilde: DiscreteMeasure) -> Result<Self> {
        if drift.is_negative() {
            return Err(invalid(format!("drift must be non-negative, got {drift}")));
        }
        if let Some(a) = nutilde.atoms().iter().find(|a| a.x.is_zero()) {
            return Err(invalid(format!(
                "jump measure atoms must lie in ]0,1], found one at {}",
                a.x
            )));
        }
        if (&drift + nutilde.total_mass()).is_zero() {
            return Err(invalid(
                "degenerate subordinator: zero drift and no jump mass",
            ));
        }
        Ok(Self { drift, nutilde })
    }

    pub fn pure_drift(drift: Rational) -> Result<Self> {
        Self::new(drift, DiscreteMeasure::empty())
    }

    pub fn drift(&self) -> &Rational {
        &self.drift
    }

    pub fn nutilde(&self) -> &DiscreteMeasure {
        &self.nutilde
    }

    /// Total jump rate `W = ν̃(]0,1])`.
    pub fn jump_rate(&self) -> Rational {
        self.nutilde.total_mass()
    }

    /// Multiplies drift and every weight by `factor > 0`.
    pub fn scaled(&self, factor: &Rational) -> Result<Self> {
        if !factor.is_positive() {
            return Err(invalid(format!(
                "scale factor must be positive, got {factor}"
            )));
        }
        let atoms = self
            .nutilde
            .atoms()
            .iter()
            .map(|a| Atom::new(a.x.clone(), &a.w * factor))
            .collect();
        Self::new(&self.drift * factor, DiscreteMeasure::new(atoms)?)
    }
}

/// Drift plus a measure on `[0,1[` in the `ν` scale, where
/// `Φ(λ) = λd + ∫ (1 − x^λ)/(1 − x) ν(dx)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NuScaleData {
    #[serde(with = "rational")]
    pub drift: Rational,
    pub nu: DiscreteMeasure,
}

/// `Φ(λ) = λd + Σ w (1 − (1 − x̃)^λ)`.
pub fn phi(data: &LaplaceExponentData, lam: usize) -> Rational {
    let one = int(1);
    let jumps: Rational = data
        .nutilde
        .atoms()
        .iter()
        .map(|a| &a.w * (&one - rational::pow(&(&one - &a.x), lam)))
        .sum();
    int(lam as i64) * &data.drift + jumps
}

/// `Φ(λ)` from the `ν` scale: `λd + Σ w (1 − x^λ)/(1 − x)`.
pub fn phi_nu_scale(data: &NuScaleData, lam: usize) -> Rational {
    let jumps: Rational = data
        .nu
        .atoms()
        .iter()
        .map(|a| &a.w * geometric_sum(&a.x, lam))
        .sum();
    int(lam as i64) * &data.drift + jumps
}

pub fn phi_sequence(data: &LaplaceExponentData, depth: usize) -> FiniteSequence {
    FiniteSequence::from_fn(depth, |n| phi(data, n))
}

/// `(x̃, w) ↦ (1 − x̃, w x̃)`; the drift carries over unchanged.
pub fn nu_from_nutilde(data: &LaplaceExponentData) -> NuScaleData {
    let one = int(1);
    let atoms = data
        .nutilde
        .atoms()
        .iter()
        .rev()
        .map(|a| Atom::new(&one - &a.x, &a.w * &a.x))
        .collect();
    NuScaleData {
        drift: data.drift.clone(),
        nu: DiscreteMeasure::new(atoms).expect("image of ]0,1] is [0,1[ and stays sorted"),
    }
}

/// Inverse of [`nu_from_nutilde`]. Atoms of `ν` at 1 have no preimage (that
/// mass belongs to the drift) and are rejected.
pub fn nutilde_from_nu(data: &NuScaleData) -> Result<LaplaceExponentData> {
    let one = int(1);
    if let Some(a) = data.nu.atoms().iter().find(|a| a.x == one) {
        return Err(invalid(format!(
            "nu-scale atom at 1 (weight {}) belongs to the drift term",
            a.w
        )));
    }
    let atoms = data
        .nu
        .atoms()
        .iter()
        .rev()
        .map(|a| {
            let xt = &one - &a.x;
            Atom::new(xt.clone(), &a.w / xt)
        })
        .collect();
    LaplaceExponentData::new(data.drift.clone(), DiscreteMeasure::new(atoms)?)
}

/// `c(n) = Φ(n+1)/(n+1)`: the moments of the convex CDF whose mixing measure
/// is `ν + d δ_1`. Requires `Φ(1) = 1`.
pub fn moments_from_phi(data: &LaplaceExponentData, depth: usize) -> Result<FiniteSequence> {
    let phi_one = phi(data, 1);
    if phi_one != int(1) {
        return Err(Error::Normalization { phi_one });
    }
    Ok(FiniteSequence::from_fn(depth, |n| {
        phi(data, n + 1) / int(n as i64 + 1)
    }))
}

/// Generalized binomial coefficient `C(λ, j)` for real `λ`.
fn real_binomial(lam: f64, j: usize) -> f64 {
    (0..j).fold(1.0, |acc, i| acc * (lam - i as f64) / (i as f64 + 1.0))
}

/// Newton forward-difference polynomial through `(n, Φ(n))`, `n = 0..=N`,
/// evaluated at real `lam`. Differences are taken exactly; only the final
/// weighted sum is in floating point. Integer nodes return the node value.
pub fn newton_interpolate(phi_values: &FiniteSequence, lam: f64) -> f64 {
    if lam >= 0.0 && lam.fract() == 0.0 && lam <= phi_values.depth() as f64 {
        return rational::to_f64(&phi_values[lam as usize]);
    }
    let table = seqcalc::difference_table(phi_values);
    table
        .iter()
        .enumerate()
        .map(|(j, row)| {
            // forward difference Δ^j = (−1)^j ∇^j
            let forward = rational::to_f64(&row[0]) * if j % 2 == 0 { 1.0 } else { -1.0 };
            real_binomial(lam, j) * forward
        })
        .sum()
}
