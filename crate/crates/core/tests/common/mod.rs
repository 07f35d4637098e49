#![allow(dead_code)]

use altmoments::momentrep::{Atom, DiscreteMeasure};
use altmoments::rational::{int, ratio, Rational};
use altmoments::seqcalc::FiniteSequence;
use altmoments::subord::LaplaceExponentData;
use rand::Rng;

pub fn random_rational<R: Rng>(rng: &mut R, max_num: i64, max_den: i64) -> Rational {
    ratio(
        rng.random_range(-max_num..=max_num),
        rng.random_range(1..=max_den),
    )
}

/// Point of [0,1] with denominator at most `max_den`.
pub fn random_unit<R: Rng>(rng: &mut R, max_den: i64) -> Rational {
    let q = rng.random_range(1..=max_den);
    ratio(rng.random_range(0..=q), q)
}

pub fn random_sequence<R: Rng>(rng: &mut R, depth: usize) -> FiniteSequence {
    FiniteSequence::from_fn(depth, |_| random_rational(rng, 50, 40))
}

/// Probability measure with 1..=max_atoms atoms, rational locations and
/// weights with denominators at most `max_den`.
pub fn random_probability<R: Rng>(rng: &mut R, max_atoms: usize, max_den: i64) -> DiscreteMeasure {
    let k = rng.random_range(1..=max_atoms);
    let raw: Vec<i64> = (0..k).map(|_| rng.random_range(1..=max_den)).collect();
    let total: i64 = raw.iter().sum();
    let atoms = raw
        .iter()
        .map(|&w| Atom::new(random_unit(rng, max_den), ratio(w, total)))
        .collect();
    DiscreteMeasure::from_unsorted(atoms).unwrap()
}

/// Drift and up to `max_atoms` jump atoms in ]0,1]; sometimes drift-only,
/// sometimes with a killing atom at 1.
pub fn random_laplace_data<R: Rng>(rng: &mut R, max_atoms: usize) -> LaplaceExponentData {
    loop {
        let drift = if rng.random_bool(0.6) {
            ratio(rng.random_range(0..=8), rng.random_range(1..=8))
        } else {
            int(0)
        };
        let k = rng.random_range(0..=max_atoms);
        let atoms = (0..k)
            .map(|_| {
                let x = if rng.random_bool(0.15) {
                    int(1)
                } else {
                    let q = rng.random_range(2..=24);
                    ratio(rng.random_range(1..=q), q)
                };
                Atom::new(x, ratio(rng.random_range(1..=12), rng.random_range(1..=6)))
            })
            .collect();
        let nu = DiscreteMeasure::from_unsorted(atoms).unwrap();
        if let Ok(d) = LaplaceExponentData::new(drift, nu) {
            return d;
        }
    }
}

/// Gauss–Legendre nodes and weights on [−1, 1] by Newton iteration on P_m.
pub fn gauss_legendre(m: usize) -> Vec<(f64, f64)> {
    (0..m)
        .map(|i| {
            let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (m as f64 + 0.5)).cos();
            let mut deriv = 0.0;
            for _ in 0..100 {
                let (mut p0, mut p1) = (1.0, x);
                for k in 2..=m {
                    let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
                    p0 = p1;
                    p1 = p2;
                }
                deriv = m as f64 * (x * p1 - p0) / (x * x - 1.0);
                let step = p1 / deriv;
                x -= step;
                if step.abs() < 1e-16 {
                    break;
                }
            }
            (x, 2.0 / ((1.0 - x * x) * deriv * deriv))
        })
        .collect()
}

/// `∫_a^b f` with an m-point Gauss–Legendre rule.
pub fn integrate(f: impl Fn(f64) -> f64, a: f64, b: f64, m: usize) -> f64 {
    let half = 0.5 * (b - a);
    let mid = 0.5 * (b + a);
    gauss_legendre(m)
        .into_iter()
        .map(|(x, w)| w * f(mid + half * x))
        .sum::<f64>()
        * half
}
