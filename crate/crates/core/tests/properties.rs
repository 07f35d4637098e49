use altmoments::compstruct::{
    composition_pmfs, deletion_projection, q_row_fd, q_row_integral, DEFAULT_CAP,
};
use altmoments::kconvex::{certify_k_alternating, k_associated, moments_kconvex_from_nu};
use altmoments::momentrep::{
    alt_sequence_from_nu, cdf_eval, density_eval, moments_from_nu, Atom, ConvexCdf, DiscreteMeasure,
};
use altmoments::rational::{binomial_q, int, pow, ratio, Rational};
use altmoments::seqcalc::{
    a_from_c, c_from_a, certify_completely_alternating, certify_completely_monotone, df_condition,
    difference_table, nabla_power, triangular_row, FiniteSequence,
};
use altmoments::subord::{
    moments_from_phi, nu_from_nutilde, nutilde_from_nu, phi, phi_nu_scale, phi_sequence,
    LaplaceExponentData,
};
use num::{Signed, Zero};
use proptest::collection::vec;
use proptest::prelude::*;

fn rat() -> impl Strategy<Value = Rational> {
    (-50i64..=50, 1i64..=40).prop_map(|(p, q)| ratio(p, q))
}

fn sequence(depth: usize) -> impl Strategy<Value = FiniteSequence> {
    vec(rat(), depth + 1).prop_map(|v| FiniteSequence::new(v).unwrap())
}

fn normalized_sequence(depth: usize) -> impl Strategy<Value = FiniteSequence> {
    vec(rat(), depth).prop_map(|mut v| {
        v.insert(0, int(1));
        FiniteSequence::new(v).unwrap()
    })
}

fn probability() -> impl Strategy<Value = DiscreteMeasure> {
    vec((1i64..=64, 0i64..=64, 1i64..=64), 1..=6).prop_map(|raw| {
        let total: i64 = raw.iter().map(|r| r.2).sum();
        let atoms = raw
            .iter()
            .map(|&(q, p, w)| Atom::new(ratio(p % (q + 1), q), ratio(w, total)))
            .collect();
        DiscreteMeasure::from_unsorted(atoms).unwrap()
    })
}

fn laplace_data() -> impl Strategy<Value = LaplaceExponentData> {
    (
        0i64..=6,
        1i64..=6,
        vec(
            (2i64..=24, 1i64..=24, 1i64..=12, 1i64..=6, any::<bool>()),
            0..=4,
        ),
    )
        .prop_filter_map("degenerate", |(dp, dq, raw)| {
            let atoms = raw
                .iter()
                .map(|&(q, p, wp, wq, kill)| {
                    let x = if kill { int(1) } else { ratio(1 + p % q, q) };
                    Atom::new(x, ratio(wp, wq))
                })
                .collect();
            let nu = DiscreteMeasure::from_unsorted(atoms).ok()?;
            LaplaceExponentData::new(ratio(dp, dq), nu).ok()
        })
}

/// Laplace data rescaled so that Φ(1) = 1.
fn normalized_laplace_data() -> impl Strategy<Value = LaplaceExponentData> {
    laplace_data().prop_map(|d| {
        let phi_one = phi(&d, 1);
        d.scaled(&(int(1) / phi_one)).unwrap()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn row_sums_equal_first_term(c in sequence(10), n in 0usize..=10) {
        prop_assert_eq!(triangular_row(&c, n).unwrap().sum(), c[0].clone());
    }

    #[test]
    fn nabla_zero_is_identity(c in sequence(6)) {
        for n in 0..=6 {
            prop_assert_eq!(nabla_power(&c, 0, n).unwrap(), c[n].clone());
        }
    }

    #[test]
    fn leibniz_rule(x in sequence(9), y in sequence(9)) {
        let xy = FiniteSequence::from_fn(9, |n| &x[n] * &y[n]);
        for j in 0..=9 {
            for n in 0..=(9 - j) {
                let rhs: Rational = (0..=j)
                    .map(|i| {
                        binomial_q(j, i)
                            * nabla_power(&x, j - i, n + i).unwrap()
                            * nabla_power(&y, i, n).unwrap()
                    })
                    .sum();
                prop_assert_eq!(nabla_power(&xy, j, n).unwrap(), rhs);
            }
        }
    }

    #[test]
    fn difference_identity_for_associated_sequence(c in sequence(9)) {
        let a = a_from_c(&c);
        // c(−1) := 0
        let shifted = |j: usize, n: isize| -> Rational {
            if n < 0 {
                // ∇^j c(−1) = Σ (−1)^i C(j,i) c(i−1), with c(−1) = 0
                (1..=j)
                    .map(|i| {
                        let t = binomial_q(j, i) * &c[i - 1];
                        if i % 2 == 0 { t } else { -t }
                    })
                    .sum()
            } else {
                nabla_power(&c, j, n as usize).unwrap()
            }
        };
        for j in 1..=10 {
            for n in 0..=(10 - j) {
                let rhs = int(n as i64) * shifted(j, n as isize - 1)
                    - int(j as i64) * shifted(j - 1, n as isize);
                prop_assert_eq!(nabla_power(&a, j, n).unwrap(), rhs);
            }
        }
    }

    #[test]
    fn row_increments_from_associated_sequence(c in normalized_sequence(9)) {
        let a = a_from_c(&c);
        for n in 1..=9 {
            let row = triangular_row(&c, n).unwrap();
            for m in 0..n {
                let lhs = &row.entries[m + 1] - &row.entries[m];
                let rhs = ratio(-1, m as i64 + 1)
                    * binomial_q(n, m)
                    * nabla_power(&a, n - m, m + 1).unwrap();
                prop_assert_eq!(lhs, rhs);
            }
        }
    }

    #[test]
    fn df_and_ca_verdicts_agree(c in normalized_sequence(7)) {
        let df = df_condition(&c).unwrap();
        let ca = certify_completely_alternating(&a_from_c(&c));
        prop_assert_eq!(df.verdict, ca.verdict);
        prop_assert_eq!(ca.depth, df.depth + 1);
    }

    #[test]
    fn df_and_ca_agree_near_moment_sequences(nu in probability(), idx in 1usize..=7, bump in rat()) {
        let mut v = moments_from_nu(&nu, 7).unwrap().into_values();
        v[idx] += bump / int(400);
        let c = FiniteSequence::new(v).unwrap();
        let df = df_condition(&c).unwrap();
        prop_assert_eq!(df.verdict, certify_completely_alternating(&a_from_c(&c)).verdict);
    }

    #[test]
    fn a_c_round_trip(c in sequence(8)) {
        prop_assert_eq!(c_from_a(&a_from_c(&c)).unwrap(), c);
    }

    #[test]
    fn convex_moments_round_trip(nu in probability()) {
        let c = moments_from_nu(&nu, 10).unwrap();
        let a = a_from_c(&c);
        prop_assert_eq!(&a, &alt_sequence_from_nu(&nu, 11));
        prop_assert!(certify_completely_alternating(&a).is_certified());
        prop_assert!(certify_completely_monotone(&c).is_certified());
        prop_assert!(df_condition(&c).unwrap().is_certified());
    }

    #[test]
    fn triangular_entries_are_mixture_integrals(nu in probability(), n in 0usize..=8) {
        let c = moments_from_nu(&nu, 8).unwrap();
        let row = triangular_row(&c, n).unwrap();
        for m in 0..=n {
            let expected: Rational = nu
                .atoms()
                .iter()
                .map(|a| &a.w * binomial_q(n, m) * component_integral(&a.x, m, n - m))
                .sum();
            prop_assert_eq!(&row.entries[m], &expected);
        }
    }

    #[test]
    fn cdf_is_convex_and_density_monotone(nu in probability()) {
        let f = ConvexCdf::new(nu).unwrap();
        let grid = 48i64;
        let values: Vec<Rational> = (0..grid)
            .map(|i| cdf_eval(&f, &ratio(i, grid)).unwrap())
            .collect();
        for w in values.windows(2) {
            prop_assert!(w[0] <= w[1]);
        }
        for w in values.windows(3) {
            prop_assert!(!(&w[0] - int(2) * &w[1] + &w[2]).is_negative());
        }
        let dens: Vec<Rational> = (0..grid)
            .map(|i| density_eval(&f, &ratio(i, grid)).unwrap())
            .collect();
        for w in dens.windows(2) {
            prop_assert!(w[0] <= w[1]);
        }
        prop_assert_eq!(cdf_eval(&f, &int(1)).unwrap(), int(1));
        prop_assert_eq!(cdf_eval(&f, &int(0)).unwrap(), int(0));
    }

    #[test]
    fn phi_sequence_is_completely_alternating(d in laplace_data()) {
        let phis = phi_sequence(&d, 16);
        prop_assert!(certify_completely_alternating(&phis).is_certified());
        for n in 0..16 {
            prop_assert!(phis[n] <= phis[n + 1]);
        }
        for n in 0..=8 {
            for m in 0..=8 {
                prop_assert!(phis[n + m] <= &phis[n] + &phis[m]);
            }
        }
    }

    #[test]
    fn phi_agrees_across_scales(d in laplace_data()) {
        let nu = nu_from_nutilde(&d);
        for lam in 0..=16 {
            prop_assert_eq!(phi(&d, lam), phi_nu_scale(&nu, lam));
        }
        prop_assert_eq!(nutilde_from_nu(&nu).unwrap(), d);
    }

    #[test]
    fn moments_from_phi_bridges_to_phi_sequence(d in normalized_laplace_data()) {
        let c = moments_from_phi(&d, 10).unwrap();
        prop_assert_eq!(a_from_c(&c), phi_sequence(&d, 11));
        // the same moments come from the mixing probability ν + d δ_1
        let nu = nu_from_nutilde(&d);
        let mut atoms = nu.nu.atoms().to_vec();
        atoms.push(Atom::new(int(1), d.drift().clone()));
        let mixing = DiscreteMeasure::from_unsorted(atoms).unwrap();
        prop_assert_eq!(moments_from_nu(&mixing, 10).unwrap(), c);
    }

    #[test]
    fn q_rows_cross_formula(d in laplace_data(), n in 1usize..=16) {
        let fd = q_row_fd(&d, n).unwrap();
        prop_assert_eq!(fd.sum(), int(1));
        prop_assert!(fd.q.iter().all(|p| !p.is_negative()));
        prop_assert_eq!(fd, q_row_integral(&d, n).unwrap());
    }

    #[test]
    fn kconvex_moments_are_k_alternating(nu in probability(), k in 1usize..=3) {
        let c = moments_kconvex_from_nu(&nu, k, 12 - k).unwrap();
        prop_assert_eq!(c[0].clone(), int(1));
        prop_assert!(certify_completely_monotone(&c).is_certified());
        prop_assert!(certify_k_alternating(&k_associated(&c, k).unwrap()).is_certified());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn sampling_consistency(d in laplace_data()) {
        let dists = composition_pmfs(&d, 9, DEFAULT_CAP).unwrap();
        for n in 2..=9 {
            let projected = deletion_projection(&dists[n - 1]).unwrap();
            prop_assert_eq!(&projected, &dists[n - 2]);
            prop_assert_eq!(projected.to_partitions(), dists[n - 2].to_partitions());
            prop_assert_eq!(dists[n - 1].total(), int(1));
        }
    }
}

/// `∫ x^m (1−x)^l dF_ξ` for the uniform law on `[ξ, 1]` (point mass at 1 when
/// `ξ = 1`), integrating the expanded polynomial term by term.
fn component_integral(xi: &Rational, m: usize, l: usize) -> Rational {
    let one = int(1);
    if *xi == one {
        return if l == 0 { one } else { Rational::zero() };
    }
    // antiderivative of Σ_i C(l,i)(−1)^i x^{m+i}
    let antideriv = |x: &Rational| -> Rational {
        (0..=l)
            .map(|i| {
                let t = binomial_q(l, i) * pow(x, m + i + 1) / int((m + i + 1) as i64);
                if i % 2 == 0 {
                    t
                } else {
                    -t
                }
            })
            .sum()
    };
    (antideriv(&one) - antideriv(xi)) / (&one - xi)
}

#[test]
fn difference_table_matches_expansion_on_random_input() {
    use rand::SeedableRng;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(1);
    for _ in 0..20 {
        let c = FiniteSequence::from_fn(10, |_| {
            ratio(
                rand::Rng::random_range(&mut rng, -9..=9),
                rand::Rng::random_range(&mut rng, 1..=9),
            )
        });
        let table = difference_table(&c);
        for (j, row) in table.iter().enumerate() {
            for (n, v) in row.iter().enumerate() {
                assert_eq!(*v, nabla_power(&c, j, n).unwrap());
            }
        }
    }
}
