//! Convex distribution functions on [0,1] through their mixing measures.
//!
//! A convex CDF `F` with `F(0) = 0` is a mixture of the uniform laws on
//! `[ξ, 1]`:
//!
//! ```text
//! F(x) = ∫ F_ξ(x) ν(dξ),   F_ξ(x) = (x − ξ)/(1 − ξ) · 1(x ≥ ξ),   F_1(x) = 1(x = 1)
//! ```
//!
//! and the map `ν ↦ F` is a bijection onto probability measures on [0,1].
//! Everything here works with finite-atom `ν` and exact rationals.

use num::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::rational::{self, int, Rational};
use crate::seqcalc::{
    self, certify_completely_alternating, certify_completely_monotone, FiniteSequence,
};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Atom {
    #[serde(with = "rational")]
    pub x: Rational,
    #[serde(with = "rational")]
    pub w: Rational,
}

impl Atom {
    pub fn new(x: Rational, w: Rational) -> Self {
        Self { x, w }
    }
}

/// Finitely many weighted points of [0,1], sorted strictly by location.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DiscreteMeasure {
    atoms: Vec<Atom>,
}

#[derive(Deserialize)]
struct RawMeasure {
    atoms: Vec<Atom>,
}

impl<'de> Deserialize<'de> for DiscreteMeasure {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = RawMeasure::deserialize(d)?;
        Self::new(raw.atoms).map_err(serde::de::Error::custom)
    }
}

impl DiscreteMeasure {
    /// Validates locations in [0,1], strictly ascending, and weights `≥ 0`.
    pub fn new(atoms: Vec<Atom>) -> Result<Self> {
        for a in &atoms {
            if a.x.is_negative() || a.x > int(1) {
                return Err(invalid(format!("atom location {} outside [0,1]", a.x)));
            }
            if a.w.is_negative() {
                return Err(invalid(format!("negative weight {} at {}", a.w, a.x)));
            }
        }
        if let Some(pair) = atoms.windows(2).find(|p| p[0].x >= p[1].x) {
            return Err(invalid(format!(
                "atom locations must be strictly increasing ({} then {})",
                pair[0].x, pair[1].x
            )));
        }
        Ok(Self { atoms })
    }

    /// Sorts and merges atoms sharing a location, then validates.
    pub fn from_unsorted(mut atoms: Vec<Atom>) -> Result<Self> {
        atoms.sort_by(|a, b| a.x.cmp(&b.x));
        let mut merged: Vec<Atom> = Vec::with_capacity(atoms.len());
        for a in atoms {
            match merged.last_mut() {
                Some(last) if last.x == a.x => last.w += a.w,
                _ => merged.push(a),
            }
        }
        Self::new(merged)
    }

    pub fn dirac(x: Rational) -> Result<Self> {
        Self::new(vec![Atom::new(x, int(1))])
    }

    pub fn empty() -> Self {
        Self { atoms: Vec::new() }
    }

    pub fn atoms(&self) -> &[Atom] {
        &self.atoms
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    pub fn total_mass(&self) -> Rational {
        self.atoms.iter().map(|a| &a.w).sum()
    }

    pub fn is_probability(&self) -> bool {
        self.total_mass() == int(1)
    }

    /// Weight of the atom at 1 (zero if none).
    pub fn mass_at_one(&self) -> Rational {
        match self.atoms.last() {
            Some(a) if a.x == int(1) => a.w.clone(),
            _ => Rational::zero(),
        }
    }

    /// Atoms strictly below 1.
    pub fn interior(&self) -> impl Iterator<Item = &Atom> {
        let one = int(1);
        self.atoms.iter().filter(move |a| a.x < one)
    }

    /// `∫ ξ^n ν(dξ)` for `n = 0..=depth`.
    pub fn moments(&self, depth: usize) -> FiniteSequence {
        FiniteSequence::from_fn(depth, |n| {
            self.atoms
                .iter()
                .map(|a| rational::pow(&a.x, n) * &a.w)
                .sum()
        })
    }
}

/// A convex CDF on [0,1] with `F(0) = 0`, held as its mixing probability `ν`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ConvexCdf {
    nu: DiscreteMeasure,
}

impl ConvexCdf {
    pub fn new(nu: DiscreteMeasure) -> Result<Self> {
        if !nu.is_probability() {
            return Err(invalid(format!(
                "mixing measure must have mass 1, got {}",
                nu.total_mass()
            )));
        }
        Ok(Self { nu })
    }

    pub fn nu(&self) -> &DiscreteMeasure {
        &self.nu
    }
}

fn require_unit_interval(x: &Rational) -> Result<()> {
    if x.is_negative() || *x > int(1) {
        Err(invalid(format!("x = {x} outside [0,1]")))
    } else {
        Ok(())
    }
}

pub fn cdf_eval(f: &ConvexCdf, x: &Rational) -> Result<Rational> {
    require_unit_interval(x)?;
    let one = int(1);
    let ramps: Rational =
        f.nu.interior()
            .filter(|a| a.x <= *x)
            .map(|a| &a.w * (x - &a.x) / (&one - &a.x))
            .sum();
    let top = if *x == one {
        f.nu.mass_at_one()
    } else {
        Rational::zero()
    };
    Ok(ramps + top)
}

/// Right-continuous density on [0,1[: `f(x) = Σ_{ξ ≤ x, ξ < 1} w / (1 − ξ)`.
pub fn density_eval(f: &ConvexCdf, x: &Rational) -> Result<Rational> {
    if x.is_negative() || *x >= int(1) {
        return Err(invalid(format!("density is defined on [0,1[, got x = {x}")));
    }
    let one = int(1);
    Ok(f.nu
        .interior()
        .filter(|a| a.x <= *x)
        .map(|a| &a.w / (&one - &a.x))
        .sum())
}

/// `(1 − ξ^n)/(1 − ξ) = 1 + ξ + … + ξ^{n−1}`; equals `n` at `ξ = 1`.
pub(crate) fn geometric_sum(xi: &Rational, n: usize) -> Rational {
    let mut acc = Rational::zero();
    let mut p = int(1);
    for _ in 0..n {
        acc += &p;
        p *= xi;
    }
    acc
}

/// Moments `c(n) = ∫ x^n dF(x)`, `n = 0..=depth`, of the convex CDF with
/// mixing probability `nu`.
pub fn moments_from_nu(nu: &DiscreteMeasure, depth: usize) -> Result<FiniteSequence> {
    if !nu.is_probability() {
        return Err(invalid(format!(
            "mixing measure must have mass 1, got {}",
            nu.total_mass()
        )));
    }
    Ok(FiniteSequence::from_fn(depth, |n| {
        let denom = int(n as i64 + 1);
        nu.atoms
            .iter()
            .map(|a| &a.w * geometric_sum(&a.x, n + 1) / &denom)
            .sum()
    }))
}

/// `a(0) = 0`, `a(n) = n ν{1} + ∫_{[0,1[} (1 − ξ^n)/(1 − ξ) ν(dξ)` for any
/// bounded `ν`.
pub fn alt_sequence_from_nu(nu: &DiscreteMeasure, depth: usize) -> FiniteSequence {
    FiniteSequence::from_fn(depth, |n| {
        nu.atoms.iter().map(|a| &a.w * geometric_sum(&a.x, n)).sum()
    })
}

/// Moments `−∇a(n) = a(n+1) − a(n)` of the measure `ν` representing a
/// completely alternating `a` with `a(0) = 0`.
pub fn nu_moments_from_alt(a: &FiniteSequence) -> Result<FiniteSequence> {
    if !a[0].is_zero() {
        return Err(invalid(format!("a(0) must be 0, got {}", a[0])));
    }
    if a.depth() == 0 {
        return Err(invalid("a needs depth at least 1"));
    }
    let certificate = certify_completely_alternating(a);
    if !certificate.is_certified() {
        return Err(Error::NotCertified {
            what: "complete alternation",
            certificate,
        });
    }
    let values = a.values().windows(2).map(|w| &w[1] - &w[0]).collect();
    FiniteSequence::new(values)
}

/// CDF of `S_n / n`, where `P(S_n = m) = c(n, m)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StepCdf {
    /// `(m/n, P(S_n ≤ m))` for `m = 0..=n`.
    pub points: Vec<(Rational, Rational)>,
}

impl StepCdf {
    pub fn eval(&self, x: f64) -> f64 {
        let idx = self
            .points
            .partition_point(|(loc, _)| rational::to_f64(loc) <= x);
        if idx == 0 {
            0.0
        } else {
            rational::to_f64(&self.points[idx - 1].1)
        }
    }

    /// `sup_x |G(x) − F(x)|` against a continuous CDF `F`. Between jumps `G`
    /// is flat and `F` monotone, so the supremum is attained at jump points
    /// using both one-sided values of `G`.
    pub fn sup_distance_continuous(&self, target: impl Fn(f64) -> f64) -> f64 {
        let mut prev = 0.0;
        let mut worst: f64 = 0.0;
        for (loc, value) in &self.points {
            let x = rational::to_f64(loc);
            let v = rational::to_f64(value);
            let t = target(x);
            worst = worst.max((prev - t).abs()).max((v - t).abs());
            prev = v;
        }
        worst.max((prev - target(1.0)).abs())
    }

    /// Exact `sup_x |G(x) − H(x)|` against another step CDF on the same kind
    /// of grid.
    pub fn sup_distance_steps(&self, other: &StepCdf) -> Rational {
        let eval = |pts: &[(Rational, Rational)], x: &Rational| -> Rational {
            let idx = pts.partition_point(|(loc, _)| loc <= x);
            if idx == 0 {
                Rational::zero()
            } else {
                pts[idx - 1].1.clone()
            }
        };
        let mut worst = Rational::zero();
        for (x, _) in self.points.iter().chain(other.points.iter()) {
            let d = (eval(&self.points, x) - eval(&other.points, x)).abs();
            if d > worst {
                worst = d;
            }
        }
        worst
    }
}

/// Hausdorff's approximation: the law of `S_n / n` from row `n` of the
/// triangular array. The prefix `c(0..=n)` must certify completely monotone.
pub fn hausdorff_reconstruct(c: &FiniteSequence, n: usize) -> Result<StepCdf> {
    if c[0] != int(1) {
        return Err(invalid(format!("c(0) must be 1, got {}", c[0])));
    }
    let prefix = c.truncate(n)?;
    let certificate = certify_completely_monotone(&prefix);
    if !certificate.is_certified() {
        return Err(Error::NotCertified {
            what: "complete monotonicity",
            certificate,
        });
    }
    let row = seqcalc::triangular_row(&prefix, n)?;
    let denom = int(n.max(1) as i64);
    let mut cum = Rational::zero();
    let points = row
        .entries
        .iter()
        .enumerate()
        .map(|(m, p)| {
            cum += p;
            let loc = if n == 0 {
                int(1)
            } else {
                int(m as i64) / &denom
            };
            (loc, cum.clone())
        })
        .collect();
    Ok(StepCdf { points })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::ratio;

    fn measure(atoms: &[(Rational, Rational)]) -> DiscreteMeasure {
        DiscreteMeasure::new(
            atoms
                .iter()
                .map(|(x, w)| Atom::new(x.clone(), w.clone()))
                .collect(),
        )
        .unwrap()
    }

    fn half_half() -> ConvexCdf {
        ConvexCdf::new(measure(&[
            (int(0), ratio(1, 2)),
            (ratio(1, 2), ratio(1, 2)),
        ]))
        .unwrap()
    }

    #[test]
    fn measure_validation() {
        assert!(DiscreteMeasure::new(vec![Atom::new(ratio(3, 2), int(1))]).is_err());
        assert!(DiscreteMeasure::new(vec![Atom::new(int(0), int(-1))]).is_err());
        assert!(DiscreteMeasure::new(vec![
            Atom::new(ratio(1, 2), int(1)),
            Atom::new(ratio(1, 2), int(1))
        ])
        .is_err());
        let m = DiscreteMeasure::from_unsorted(vec![
            Atom::new(ratio(1, 2), ratio(1, 4)),
            Atom::new(int(0), ratio(1, 4)),
            Atom::new(ratio(1, 2), ratio(1, 2)),
        ])
        .unwrap();
        assert_eq!(m.atoms().len(), 2);
        assert_eq!(m.atoms()[1].w, ratio(3, 4));
        assert!(ConvexCdf::new(measure(&[(int(0), ratio(1, 2))])).is_err());
    }

    #[test]
    fn measure_json() {
        let m: DiscreteMeasure =
            serde_json::from_str(r#"{"atoms":[{"x":"0","w":"1/2"},{"x":"1/2","w":"2/4"}]}"#)
                .unwrap();
        assert_eq!(m, half_half().nu().clone());
        assert_eq!(
            serde_json::to_string(&m).unwrap(),
            r#"{"atoms":[{"x":"0","w":"1/2"},{"x":"1/2","w":"1/2"}]}"#
        );
        assert!(
            serde_json::from_str::<DiscreteMeasure>(r#"{"atoms":[{"x":"2","w":"1"}]}"#).is_err()
        );
    }

    #[test]
    fn cdf_examples() {
        let uniform = ConvexCdf::new(DiscreteMeasure::dirac(int(0)).unwrap()).unwrap();
        assert_eq!(cdf_eval(&uniform, &ratio(3, 10)).unwrap(), ratio(3, 10));
        let top = ConvexCdf::new(DiscreteMeasure::dirac(int(1)).unwrap()).unwrap();
        assert_eq!(cdf_eval(&top, &ratio(1, 2)).unwrap(), int(0));
        assert_eq!(cdf_eval(&top, &int(1)).unwrap(), int(1));
        assert_eq!(cdf_eval(&half_half(), &ratio(3, 4)).unwrap(), ratio(5, 8));
        assert_eq!(cdf_eval(&half_half(), &int(1)).unwrap(), int(1));
        assert!(cdf_eval(&half_half(), &ratio(-1, 2)).is_err());
    }

    #[test]
    fn density_examples() {
        let uniform = ConvexCdf::new(DiscreteMeasure::dirac(int(0)).unwrap()).unwrap();
        assert_eq!(density_eval(&uniform, &ratio(2, 3)).unwrap(), int(1));
        assert_eq!(
            density_eval(&half_half(), &ratio(1, 4)).unwrap(),
            ratio(1, 2)
        );
        assert_eq!(
            density_eval(&half_half(), &ratio(3, 4)).unwrap(),
            ratio(3, 2)
        );
        let top = ConvexCdf::new(DiscreteMeasure::dirac(int(1)).unwrap()).unwrap();
        assert_eq!(density_eval(&top, &ratio(1, 2)).unwrap(), int(0));
        assert!(density_eval(&uniform, &int(1)).is_err());
    }

    #[test]
    fn moments_examples() {
        let c = moments_from_nu(&DiscreteMeasure::dirac(int(0)).unwrap(), 5).unwrap();
        assert_eq!(c, FiniteSequence::from_fn(5, |n| ratio(1, n as i64 + 1)));
        let c = moments_from_nu(&DiscreteMeasure::dirac(int(1)).unwrap(), 5).unwrap();
        assert_eq!(c, FiniteSequence::from_fn(5, |_| int(1)));
        let c = moments_from_nu(half_half().nu(), 3).unwrap();
        assert_eq!(c[0], int(1));
        assert_eq!(c[1], ratio(5, 8));
        assert!(moments_from_nu(&measure(&[(int(0), ratio(1, 3))]), 2).is_err());
    }

    #[test]
    fn moments_against_quadrature() {
        // midpoint rule on the piecewise-linear density of ½δ_0 + ½δ_{1/2}
        let f = half_half();
        let c = moments_from_nu(f.nu(), 4).unwrap();
        let steps = 200_000;
        for n in 0..=4 {
            let h = 1.0 / steps as f64;
            let approx: f64 = (0..steps)
                .map(|i| {
                    let x = (i as f64 + 0.5) * h;
                    let dens = if x < 0.5 { 0.5 } else { 1.5 };
                    x.powi(n as i32) * dens * h
                })
                .sum();
            assert!((approx - rational::to_f64(&c[n])).abs() < 1e-6, "n = {n}");
        }
    }

    #[test]
    fn alt_sequence_examples() {
        let a = alt_sequence_from_nu(&DiscreteMeasure::dirac(int(0)).unwrap(), 4);
        assert_eq!(a.values(), &[int(0), int(1), int(1), int(1), int(1)]);
        let a = alt_sequence_from_nu(&DiscreteMeasure::dirac(int(1)).unwrap(), 4);
        assert_eq!(a, FiniteSequence::from_fn(4, |n| int(n as i64)));
        let a = alt_sequence_from_nu(&DiscreteMeasure::dirac(ratio(1, 2)).unwrap(), 4);
        assert_eq!(
            a.values(),
            &[int(0), int(1), ratio(3, 2), ratio(7, 4), ratio(15, 8)]
        );
    }

    #[test]
    fn nu_moments_examples() {
        let a = FiniteSequence::new(vec![int(0), int(1), int(1), int(1)]).unwrap();
        assert_eq!(
            nu_moments_from_alt(&a).unwrap().values(),
            &[int(1), int(0), int(0)]
        );
        let a = FiniteSequence::from_fn(5, |n| int(n as i64));
        assert_eq!(
            nu_moments_from_alt(&a).unwrap(),
            FiniteSequence::from_fn(4, |_| int(1))
        );
        let a = FiniteSequence::from_fn(6, |n| int(2) * (int(1) - ratio(1, 1 << n)));
        assert_eq!(
            nu_moments_from_alt(&a).unwrap(),
            FiniteSequence::from_fn(5, |n| ratio(1, 1 << n))
        );
        let bad = FiniteSequence::new(vec![int(0), int(1), int(3)]).unwrap();
        assert!(matches!(
            nu_moments_from_alt(&bad),
            Err(Error::NotCertified { .. })
        ));
        let shifted = FiniteSequence::new(vec![int(1), int(2)]).unwrap();
        assert!(matches!(
            nu_moments_from_alt(&shifted),
            Err(Error::InvalidInput(_))
        ));
    }

    #[test]
    fn single_atom_moment_identity() {
        for (p, q) in [(0, 1), (1, 3), (1, 2), (5, 7)] {
            let xi = ratio(p, q);
            let c = moments_from_nu(&DiscreteMeasure::dirac(xi.clone()).unwrap(), 10).unwrap();
            for n in 1..=10 {
                let lhs = int(n as i64) * &c[n - 1];
                let rhs = (int(1) - rational::pow(&xi, n)) / (int(1) - &xi);
                assert_eq!(lhs, rhs);
            }
        }
    }

    #[test]
    fn reconstruct_examples() {
        let uniform = FiniteSequence::from_fn(3, |n| ratio(1, n as i64 + 1));
        let g = hausdorff_reconstruct(&uniform, 3).unwrap();
        let expected: Vec<_> = (0..=3).map(|m| (ratio(m, 3), ratio(m + 1, 4))).collect();
        assert_eq!(g.points, expected);

        let ones = FiniteSequence::from_fn(7, |_| int(1));
        let g = hausdorff_reconstruct(&ones, 7).unwrap();
        assert!(g.points[..7].iter().all(|(_, v)| v.is_zero()));
        assert_eq!(g.points[7], (int(1), int(1)));

        let bad = FiniteSequence::new(vec![int(1), int(0), int(1)]).unwrap();
        assert!(matches!(
            hausdorff_reconstruct(&bad, 2),
            Err(Error::NotCertified { .. })
        ));
        assert!(matches!(
            hausdorff_reconstruct(&uniform, 4),
            Err(Error::Index { .. })
        ));
    }

    #[test]
    fn step_cdf_distances() {
        let uniform = FiniteSequence::from_fn(3, |n| ratio(1, n as i64 + 1));
        let g = hausdorff_reconstruct(&uniform, 3).unwrap();
        // largest gap is just below x = 1: G = 3/4, F → 1
        assert!((g.sup_distance_continuous(|x| x) - 0.25).abs() < 1e-12);
        assert_eq!(g.sup_distance_steps(&g), int(0));
        assert_eq!(g.eval(0.5), 0.5);
    }
}
