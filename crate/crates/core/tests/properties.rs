//! Property suites for the polynomial substrate, regions, and operators.

mod common;

use common::*;
use num_complex::Complex64;
use proptest::prelude::*;
use rand::Rng;
use stabil_core::analysis::{classify, reduce_general, Classification, ClassifyOptions};
use stabil_core::{
    compose_operators, make_dilation, make_pcd, make_product_composition, maps_into, ComplexPoly,
    MapsInto, Membership, Region, StabilityVerdict,
};

fn arb_complex(half_side: f64) -> impl Strategy<Value = Complex64> {
    (-half_side..half_side, -half_side..half_side).prop_map(|(re, im)| Complex64::new(re, im))
}

fn arb_poly(max_degree: usize) -> impl Strategy<Value = ComplexPoly> {
    proptest::collection::vec(arb_complex(3.0), 1..=max_degree + 1).prop_map(ComplexPoly::new)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn multiply_commutes(p in arb_poly(30), q in arb_poly(30)) {
        let pq = &p * &q;
        let qp = &q * &p;
        let scale = pq.max_coeff_norm().max(1.0);
        prop_assert!((&pq - &qp).max_coeff_norm() <= 1e-10 * scale);
    }

    #[test]
    fn multiply_associates(p in arb_poly(10), q in arb_poly(10), r in arb_poly(10)) {
        let left = &(&p * &q) * &r;
        let right = &p * &(&q * &r);
        let scale = left.max_coeff_norm().max(1.0);
        prop_assert!((&left - &right).max_coeff_norm() <= 1e-10 * scale);
    }

    #[test]
    fn eval_respects_products(p in arb_poly(30), q in arb_poly(30), z in arb_complex(1.2)) {
        let product = (&p * &q).eval(z);
        let separate = p.eval(z) * q.eval(z);
        let scale = separate.norm().max(1.0);
        prop_assert!((product - separate).norm() <= 1e-10 * scale);
    }

    #[test]
    fn compose_associates(p in arb_poly(5), q in arb_poly(3), r in arb_poly(3)) {
        let left = p.compose(&q).compose(&r);
        let right = p.compose(&q.compose(&r));
        let scale = left.max_coeff_norm().max(right.max_coeff_norm()).max(1.0);
        prop_assert!((&left - &right).max_coeff_norm() <= 1e-8 * scale);
    }

    #[test]
    fn divide_exact_round_trips(q in arb_poly(8), r in arb_poly(8)) {
        prop_assume!(!q.is_zero());
        let p = &q * &r;
        if let Some(quotient) = p.divide_exact(&q, 1e-9).unwrap() {
            let rebuilt = &q * &quotient;
            let scale = p.max_coeff_norm().max(1.0);
            prop_assert!((&rebuilt - &p).max_coeff_norm() <= 1e-8 * scale);
        } else {
            // Division may only fail when cancellation made the product
            // ill-conditioned; require obvious imbalance to excuse it.
            let imbalance = q.max_coeff_norm() * r.max_coeff_norm() / p.max_coeff_norm().max(1e-300);
            prop_assert!(imbalance > 1e6);
        }
    }
}

#[test]
fn roots_match_known_factors() {
    let mut rng = rng(9001);
    for _ in 0..200 {
        let degree = rng.gen_range(1..=12);
        let roots: Vec<Complex64> = (0..degree)
            .map(|_| random_in_annulus(&mut rng, 0.2, 2.5))
            .collect();
        let p = ComplexPoly::from_roots(random_in_annulus(&mut rng, 0.5, 2.0), &roots);
        let found = p.roots().unwrap();
        assert!(found.residual <= found.residual_bound);
        assert_eq!(found.total_multiplicity(), degree);
        let flat = found.flat();
        for r in &flat {
            assert!(
                roots.iter().any(|t| (t - r).norm() < 1e-6),
                "spurious root {r}"
            );
        }
        for t in &roots {
            assert!(
                flat.iter().any(|r| (t - r).norm() < 1e-6),
                "missed root {t}"
            );
        }
    }
}

#[test]
fn gauss_lucas_derivative_roots_in_hull() {
    let mut rng = rng(42);
    for _ in 0..150 {
        let degree = rng.gen_range(2..=15);
        let roots: Vec<Complex64> = (0..degree)
            .map(|_| random_in_annulus(&mut rng, 0.1, 2.0))
            .collect();
        let p = ComplexPoly::from_roots(random_in_annulus(&mut rng, 0.5, 2.0), &roots);
        for d_root in p.derivative().roots().unwrap().flat() {
            assert!(
                hull_distance(d_root, &roots) <= 1e-8,
                "derivative root {d_root} escapes the hull"
            );
        }
    }
}

#[test]
fn stability_agrees_with_direct_membership() {
    let mut rng = rng(7);
    for case in 0..1000 {
        let omega = random_bounded_region(&mut rng, 0.0);
        let degree = rng.gen_range(1..=12);
        let roots: Vec<Complex64> = (0..degree)
            .map(|_| random_in_annulus(&mut rng, 0.05, 3.0))
            .collect();
        let p = ComplexPoly::from_roots(random_in_annulus(&mut rng, 0.5, 2.0), &roots);
        let expected_unstable = roots.iter().any(|&r| omega.membership(r) == Membership::Inside);
        match omega.is_stable(&p).unwrap() {
            StabilityVerdict::Unstable(_) => assert!(expected_unstable, "case {case}"),
            StabilityVerdict::Stable => assert!(!expected_unstable, "case {case}"),
            StabilityVerdict::Borderline(_) => {
                // Only possible when some root sits numerically on the
                // boundary; with band zero this needs an exact hit.
                let near = roots.iter().any(|&r| {
                    omega.membership_with_band(r, 1e-9) == Membership::Band
                });
                assert!(near, "case {case}: borderline without a near-boundary root");
            }
            StabilityVerdict::ZeroPoly => unreachable!(),
        }
    }
}

#[test]
fn sampler_always_produces_stable_polys() {
    let mut rng = rng(11);
    for _ in 0..1000 {
        let omega = random_bounded_region(&mut rng, 1e-8);
        let degree = rng.gen_range(0..=8);
        let p = omega.random_stable_poly(degree, rng.gen()).unwrap();
        assert_eq!(omega.is_stable(&p).unwrap(), StabilityVerdict::Stable);
    }
}

#[test]
fn dilation_law_for_regions_and_operators() {
    let mut rng = rng(23);
    for _ in 0..200 {
        let omega = random_bounded_region(&mut rng, 0.0);
        let degree = rng.gen_range(1..=8);
        let p = random_poly(&mut rng, degree, 2.0);
        if p.degree().is_none() {
            continue;
        }
        let tau = rng.gen_range(0.1..10.0);
        let dilation = make_dilation(Complex64::new(tau, 0.0), degree).unwrap();
        let dilated = dilation.apply(&p).unwrap();
        let scaled = omega.scale(1.0 / tau);
        let original = omega.is_stable(&p).unwrap();
        let transformed = scaled.is_stable(&dilated).unwrap();
        let same_kind = matches!(
            (&original, &transformed),
            (StabilityVerdict::Stable, StabilityVerdict::Stable)
                | (StabilityVerdict::Unstable(_), StabilityVerdict::Unstable(_))
                | (StabilityVerdict::Borderline(_), StabilityVerdict::Borderline(_))
        );
        assert!(
            same_kind,
            "dilation by {tau} changed the verdict: {original:?} vs {transformed:?}"
        );
    }
}

#[test]
fn certified_maps_hold_on_fresh_samples() {
    let mut rng = rng(31);
    let mut certified_seen = 0;
    while certified_seen < 10 {
        let tuple = conforming_tuple(&mut rng);
        if maps_into(&tuple.phi, &tuple.omega2, &tuple.omega1, 32) != MapsInto::Certified {
            continue;
        }
        certified_seen += 1;
        let mut checked = 0;
        let mut attempts = 0;
        let (center, radius) = tuple.omega2.enclosing_disk();
        while checked < 10_000 && attempts < 200_000 {
            attempts += 1;
            let z = center
                + Complex64::new(
                    rng.gen_range(-radius..radius),
                    rng.gen_range(-radius..radius),
                );
            if tuple.omega2.membership(z) != Membership::Inside {
                continue;
            }
            checked += 1;
            assert_eq!(
                tuple.omega1.membership(tuple.phi.eval(z)),
                Membership::Inside,
                "certified symbol escaped at {z}"
            );
        }
        assert!(checked >= 1000, "sampler failed to exercise the region");
    }
}

#[test]
fn homomorphism_iff_agrees_with_composition_by_first_column() {
    let mut rng = rng(57);
    for _ in 0..50 {
        let (_, phi) = disk_pair(&mut rng);
        let a = make_product_composition(&ComplexPoly::one(), &phi, 5);
        assert!(a.is_algebra_homomorphism(1e-10));
        // Agreement with composition by its own first column.
        let rebuilt = make_product_composition(&ComplexPoly::one(), a.column(1), 5);
        for n in 0..=5 {
            let diff = (a.column(n) - rebuilt.column(n)).max_coeff_norm();
            assert!(diff <= 1e-10 * (1.0 + a.column(n).max_coeff_norm()));
        }

        let (psi, phi) = disk_pair(&mut rng);
        if psi.degree().is_some_and(|d| d >= 1) {
            let b = make_product_composition(&psi, &phi, 5);
            assert!(!b.is_algebra_homomorphism(1e-10));
        }
    }
}

#[test]
fn pcd_operators_preserve_convex_complements() {
    let mut rng = rng(71);
    for _ in 0..30 {
        let instance = pcd_instance(&mut rng);
        let a = make_pcd(&instance.psi, &instance.phi, instance.n_deriv, 8);
        for _ in 0..20 {
            let degree = rng.gen_range(1..=8);
            let p = instance.omega.random_stable_poly(degree, rng.gen()).unwrap();
            let image = a.apply(&p).unwrap();
            if image.is_zero() {
                continue;
            }
            assert_eq!(
                instance.omega.is_stable(&image).unwrap(),
                StabilityVerdict::Stable,
                "image lost stability for derivative order {}",
                instance.n_deriv
            );
        }
    }
}

#[test]
fn classified_operators_reverify_on_fresh_inputs() {
    let mut rng = rng(83);
    for _ in 0..10 {
        let tuple = conforming_tuple(&mut rng);
        let a = make_product_composition(&tuple.psi, &tuple.phi, 5);
        let verdict = classify(&a, &tuple.omega1, &tuple.omega2, &ClassifyOptions::default())
            .unwrap();
        let Classification::ProductComposition { .. } = verdict else {
            panic!("constructed operator not recognized: {verdict:?}");
        };
        for _ in 0..500 {
            let p = tuple
                .omega1
                .random_stable_poly(rng.gen_range(1..=5), rng.gen())
                .unwrap();
            let image = a.apply(&p).unwrap();
            if image.is_zero() {
                continue;
            }
            assert!(matches!(
                tuple.omega2.is_stable(&image).unwrap(),
                StabilityVerdict::Stable | StabilityVerdict::Borderline(_)
            ));
        }
    }
}

#[test]
fn classify_via_reduction_agrees_on_category() {
    let mut rng = rng(97);
    let opts = ClassifyOptions::default();
    for case in 0..50 {
        let tuple = conforming_tuple(&mut rng);
        let a = make_product_composition(&tuple.psi, &tuple.phi, 4);
        let direct = classify(&a, &tuple.omega1, &tuple.omega2, &opts).unwrap();

        let reduction = reduce_general(&a, &tuple.omega1, &tuple.omega2).unwrap();
        // The reduced operator maps disk-stable polynomials to stable
        // functions on the small disk; classify it against that pair.
        let reduced_verdict = classify(
            &reduction.reduced,
            &Region::closed_unit_disk(),
            &reduction.omega,
            &opts,
        )
        .unwrap();

        let same_category = matches!(
            (&direct, &reduced_verdict),
            (
                Classification::ProductComposition { .. },
                Classification::ProductComposition { .. }
            ) | (Classification::Rank1 { .. }, Classification::Rank1 { .. })
        );
        assert!(
            same_category,
            "case {case}: direct {direct:?} vs reduced {reduced_verdict:?}"
        );
    }
}

#[test]
fn structure_corollaries_at_truncation() {
    let mut rng = rng(131);
    for _ in 0..30 {
        let (psi, phi) = disk_pair(&mut rng);
        let n = rng.gen_range(3..=6);

        // A disk-preserving operator of rank >= 2 is injective on the
        // truncation: the coefficient matrix has full column rank.
        let a = make_product_composition(&psi, &phi, n);
        assert_eq!(a.rank_estimate(1e-10), n + 1);

        // When it fixes the constant 1, it embeds the polynomial algebra.
        let embedding = make_product_composition(&ComplexPoly::one(), &phi, n);
        assert!(embedding.is_algebra_homomorphism(1e-10));
        assert_eq!(embedding.rank_estimate(1e-10), n + 1);
    }
}

#[test]
fn dilation_composition_cancels() {
    let mut rng = rng(113);
    for _ in 0..20 {
        let tau = rng.gen_range(0.2..5.0);
        let up = make_dilation(Complex64::new(tau, 0.0), 6).unwrap();
        let down = make_dilation(Complex64::new(1.0 / tau, 0.0), 6).unwrap();
        let composed = compose_operators(&up, &down).unwrap();
        let p = random_poly(&mut rng, 6, 2.0);
        let round = composed.apply(&p).unwrap();
        assert!((&round - &p).max_coeff_norm() <= 1e-10 * (1.0 + p.max_coeff_norm()));
    }
}
