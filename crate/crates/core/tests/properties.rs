use proptest::prelude::*;
use strongfree_core::ensembles::{conjugate_by_haar, sample_ginibre};
use strongfree_core::freelimit::{
    free_add_convolve_with, free_haar_trace, kolmogorov_distance, reduce_word, semicircle_measure_with, Atom,
    CompactMeasure,
};
use strongfree_core::ncalg::{Coefficient, NcPolynomial, StarLetter, StarMonomial};
use strongfree_core::spectral::{empirical_cdf, generalized_inverse, hermitian_eigenvalues};
use strongfree_core::{c64, Execution, Field, Seed, SquareMatrix};

fn letter() -> impl Strategy<Value = StarLetter> {
    (1usize..=3, any::<bool>()).prop_map(|(index, starred)| StarLetter { index, starred })
}

fn word(max: usize) -> impl Strategy<Value = StarMonomial> {
    prop::collection::vec(letter(), 0..=max).prop_map(StarMonomial::new)
}

fn complex() -> impl Strategy<Value = c64> {
    (-2.0f64..2.0, -2.0f64..2.0).prop_map(|(re, im)| c64::new(re, im))
}

fn polynomial() -> impl Strategy<Value = NcPolynomial> {
    prop::collection::vec((complex(), word(3)), 0..5).prop_map(|terms| {
        let mut p = NcPolynomial::zero(3, 1).unwrap();
        for (c, w) in terms {
            p.add_term(Coefficient::scalar(c), w).unwrap();
        }
        p
    })
}

fn matrices(seed: u64) -> Vec<SquareMatrix> {
    (0..3)
        .map(|i| sample_ginibre(4, Field::Complex, Seed::new(seed, i)).unwrap())
        .collect()
}

/// Free-group reduction by repeated scanning for an adjacent cancelling pair.
fn reduce_by_scanning(w: &StarMonomial) -> Vec<StarLetter> {
    let mut v = w.letters().to_vec();
    loop {
        let pos = v.windows(2).position(|p| p[0].index == p[1].index && p[0].starred != p[1].starred);
        match pos {
            Some(i) => {
                v.drain(i..i + 2);
            }
            None => return v,
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn evaluation_is_linear_and_multiplicative(p in polynomial(), q in polynomial(), seed in 0u64..1000) {
        let x = matrices(seed);
        let sum = p.add(&q).unwrap().evaluate(&x).unwrap();
        let expected = p.evaluate(&x).unwrap().add(&q.evaluate(&x).unwrap()).unwrap();
        prop_assert!(sum.max_abs_diff(&expected).unwrap() <= 1e-9 * (1.0 + expected.max_abs()));
        let prod = p.mul(&q).unwrap().evaluate(&x).unwrap();
        let expected = p.evaluate(&x).unwrap().matmul(&q.evaluate(&x).unwrap()).unwrap();
        prop_assert!(prod.max_abs_diff(&expected).unwrap() <= 1e-9 * (1.0 + expected.max_abs()));
    }

    #[test]
    fn adjoint_is_an_involution_and_commutes_with_evaluation(p in polynomial(), seed in 0u64..1000) {
        prop_assert_eq!(p.adjoint().adjoint(), p.clone());
        let x = matrices(seed);
        let lhs = p.adjoint().evaluate(&x).unwrap();
        let rhs = p.evaluate(&x).unwrap().adjoint();
        prop_assert!(lhs.max_abs_diff(&rhs).unwrap() <= 1e-9 * (1.0 + rhs.max_abs()));
    }

    #[test]
    fn text_form_round_trips(p in polynomial()) {
        let back: NcPolynomial = p.to_string().parse().unwrap();
        prop_assert_eq!(back, p);
    }

    #[test]
    fn word_reduction_matches_scanning(w in word(10)) {
        prop_assert_eq!(reduce_word(&w), reduce_by_scanning(&w));
        let expected = if reduce_by_scanning(&w).is_empty() { 1.0 } else { 0.0 };
        prop_assert_eq!(free_haar_trace(&w), expected);
        prop_assert_eq!(free_haar_trace(&w.concat(&w.adjoint())), 1.0);
    }

    #[test]
    fn haar_conjugation_preserves_spectrum(data in prop::collection::vec(-5.0f64..5.0, 1..12), seed in 0u64..1000) {
        let d: Vec<c64> = data.iter().map(|&x| c64::new(x, 0.0)).collect();
        let m = conjugate_by_haar(&d, Seed::new(seed, 0)).unwrap();
        let mut sorted = data.clone();
        sorted.sort_by(f64::total_cmp);
        let eig = hermitian_eigenvalues(&m).unwrap();
        for (a, b) in eig.iter().zip(&sorted) {
            prop_assert!((a - b).abs() <= 1e-10 * (1.0 + b.abs()));
        }
    }

    #[test]
    fn empirical_cdf_is_monotone_and_inverts(data in prop::collection::vec(-5.0f64..5.0, 1..40), s in 0.001f64..1.0) {
        let f = empirical_cdf(&data).unwrap();
        let mut pts = data.clone();
        pts.sort_by(f64::total_cmp);
        let vals: Vec<f64> = pts.iter().map(|&x| f.evaluate(x)).collect();
        prop_assert!(vals.windows(2).all(|w| w[0] <= w[1]));
        prop_assert_eq!(*vals.last().unwrap(), 1.0);
        let q = generalized_inverse(&f, s).unwrap();
        prop_assert!(f.evaluate(q) >= s - 1e-12);
        prop_assert!(f.left_limit(q) < s + 1e-12);
    }

    #[test]
    fn measure_operations_preserve_mass(
        atoms in prop::collection::vec((-3.0f64..3.0, 0.01f64..1.0), 0..4),
        density in prop::collection::vec(0.0f64..2.0, 8..64),
        shift in -2.0f64..2.0,
        scale in prop_oneof![-3.0f64..-0.1, 0.1f64..3.0],
    ) {
        let a_total: f64 = atoms.iter().map(|a| a.1).sum();
        let d_total: f64 = density.iter().sum();
        prop_assume!(d_total > 0.0);
        // Half the mass on atoms, half on the density over [−1, 1].
        let h = 2.0 / density.len() as f64;
        let dens: Vec<f64> = density.iter().map(|d| 0.5 * d / (d_total * h)).collect();
        let atoms: Vec<Atom> = if atoms.is_empty() {
            vec![Atom::new(0.0, 0.5)]
        } else {
            atoms.iter().map(|&(x, m)| Atom::new(x, 0.5 * m / a_total)).collect()
        };
        let mu = CompactMeasure::from_parts(atoms, [-1.0, 1.0], dens).unwrap();
        prop_assert!((mu.total_mass() - 1.0).abs() <= 1e-12);
        let t = mu.translate(shift);
        prop_assert!((t.mean() - mu.mean() - shift).abs() <= 1e-10);
        prop_assert!((t.variance() - mu.variance()).abs() <= 1e-9);
        let d = mu.dilate(scale).unwrap();
        prop_assert!((d.total_mass() - 1.0).abs() <= 1e-12);
        prop_assert!((d.mean() - scale * mu.mean()).abs() <= 1e-10);
        prop_assert!((d.variance() - scale * scale * mu.variance()).abs() <= 1e-9);
        prop_assert!(kolmogorov_distance(&mu, &mu) == 0.0);
        prop_assert!((kolmogorov_distance(&mu, &t) - kolmogorov_distance(&t, &mu)).abs() <= 1e-15);
        let vals: Vec<f64> = mu.breakpoints().iter().map(|&x| mu.cdf(x)).collect();
        prop_assert!(vals.windows(2).all(|w| w[0] <= w[1] + 1e-15));
        let mut buf = Vec::new();
        mu.write(&mut buf).unwrap();
        prop_assert_eq!(CompactMeasure::read(buf.as_slice()).unwrap(), mu);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(4))]

    #[test]
    fn free_addition_adds_mean_and_variance(
        atoms in prop::collection::vec((-2.0f64..2.0, 0.1f64..1.0), 2..4),
        variance in 0.2f64..1.5,
    ) {
        let total: f64 = atoms.iter().map(|a| a.1).sum();
        let pairs: Vec<(f64, f64)> = atoms.iter().map(|&(x, m)| (x, m / total)).collect();
        let mu = CompactMeasure::atomic(&pairs).unwrap();
        let nu = semicircle_measure_with(variance, 1024).unwrap();
        let sum = free_add_convolve_with(&mu, &nu, 1024, Execution::default()).unwrap();
        prop_assert!((sum.total_mass() - 1.0).abs() <= 1e-8);
        prop_assert!((sum.mean() - mu.mean() - nu.mean()).abs() <= 1e-3);
        prop_assert!((sum.variance() - mu.variance() - nu.variance()).abs() <= 1e-3, "{} vs {}", sum.variance(), mu.variance() + nu.variance());
    }
}
