//! Acceptance suite: one test per criterion, each printing a PASS line with
//! its measured counts. Run with `cargo test --test acceptance -- --nocapture`
//! to see the lines.

mod common;

use common::*;
use num_complex::Complex64;
use rand::Rng;
use stabil_core::analysis::{
    bb_certificate, canonical_product, char_fn, classify, combinatorial_identity_check, falsify,
    moment_bound_check, rational, second_companion, Classification, ClassifyOptions,
};
use stabil_core::hardy::{
    classify_functional, jensen_outer_test, root_outer_test, H2Trunc, OuterVerdict,
};
use stabil_core::{
    make_pcd, make_product_composition, make_rank1, maps_into, ComplexPoly, MapsInto, Membership,
    OperatorTruncation, Region, StabilityVerdict,
};

fn pass(criterion: usize, name: &str, detail: String) {
    println!("ACCEPTANCE {criterion} {name}: PASS ({detail})");
}

/// Criterion 1: images of stable polynomials under conforming
/// product-composition operators are stable or zero, with zero failures.
#[test]
fn criterion_01_sufficiency() {
    let mut rng = rng(0x5001);
    let mut tuples = 0;
    let mut images = 0;
    while tuples < 200 {
        let tuple = conforming_tuple(&mut rng);
        if maps_into(&tuple.phi, &tuple.omega2, &tuple.omega1, 32) != MapsInto::Certified {
            continue;
        }
        tuples += 1;
        let a = make_product_composition(&tuple.psi, &tuple.phi, 6);
        for _ in 0..100 {
            let degree = rng.gen_range(1..=6);
            let p = tuple
                .omega1
                .random_stable_poly(degree, rng.gen())
                .expect("sampler");
            let image = a.apply(&p).expect("degree fits");
            if image.is_zero() {
                continue;
            }
            images += 1;
            assert_eq!(
                tuple.omega2.is_stable(&image).expect("roots converge"),
                StabilityVerdict::Stable,
                "stability violated"
            );
        }
    }
    pass(1, "sufficiency", format!("{tuples} operators, {images} images, 0 violations"));
}

/// Criterion 2: constructed operators classify back to their data with
/// coefficient error below 1e-8 relative and no misclassifications.
#[test]
fn criterion_02_classifier_round_trip() {
    let mut rng = rng(0x5002);
    let opts = ClassifyOptions::default();

    let mut product_cases = 0;
    while product_cases < 200 {
        let tuple = conforming_tuple(&mut rng);
        if maps_into(&tuple.phi, &tuple.omega2, &tuple.omega1, 32) != MapsInto::Certified {
            continue;
        }
        product_cases += 1;
        let n = rng.gen_range(3..=8);
        let a = make_product_composition(&tuple.psi, &tuple.phi, n);
        match classify(&a, &tuple.omega1, &tuple.omega2, &opts).expect("preconditions hold") {
            Classification::ProductComposition { psi, phi, residuals } => {
                let psi_err = (&psi - &tuple.psi).max_coeff_norm()
                    / tuple.psi.max_coeff_norm().max(1e-300);
                let phi_err = (&phi - &tuple.phi).max_coeff_norm()
                    / tuple.phi.max_coeff_norm().max(1e-300);
                assert!(psi_err <= 1e-8, "multiplier error {psi_err:.3e}");
                assert!(phi_err <= 1e-8, "symbol error {phi_err:.3e}");
                assert!(residuals.iter().all(|&r| r <= opts.tol));
            }
            other => panic!("misclassified constructed operator: {other:?}"),
        }
    }

    let mut rank1_cases = 0;
    while rank1_cases < 100 {
        let tuple = conforming_tuple(&mut rng);
        let n = rng.gen_range(2..=6);
        let nu: Vec<Complex64> = (0..=n)
            .map(|_| {
                if rng.gen_bool(0.2) {
                    Complex64::new(0.0, 0.0)
                } else {
                    random_in_annulus(&mut rng, 0.2, 2.0)
                }
            })
            .collect();
        if nu.iter().all(|v| v.norm_sqr() == 0.0) {
            continue;
        }
        rank1_cases += 1;
        let a = make_rank1(&nu, &tuple.psi, n);
        match classify(&a, &tuple.omega1, &tuple.omega2, &opts).expect("preconditions hold") {
            Classification::Rank1 { nu: nu_hat, psi: psi_hat } => {
                for (k, coefficient) in nu_hat.iter().enumerate() {
                    let rebuilt = psi_hat.scale(*coefficient);
                    let scale = a.column(k).max_coeff_norm().max(1.0);
                    let err = (&rebuilt - a.column(k)).max_coeff_norm() / scale;
                    assert!(err <= 1e-8, "rank-1 column {k} error {err:.3e}");
                }
            }
            other => panic!("misclassified rank-1 operator: {other:?}"),
        }
    }
    pass(
        2,
        "classifier_round_trip",
        format!("{product_cases} product-composition + {rank1_cases} rank-1, 0 misclassifications"),
    );
}

/// Criterion 3: the hand-built violator and randomized mutants of valid
/// operators all yield independently re-verified counterexamples.
#[test]
fn criterion_03_falsification() {
    let mut rng = rng(0x5003);
    let budget = 10_000;

    fn verify_witness(a: &OperatorTruncation, label: &str, budget: usize, seed: u64) {
        let disk = Region::closed_unit_disk();
        let (witness, image_root) = falsify(a, &disk, &disk, budget, seed)
            .unwrap_or_else(|| panic!("{label}: no witness within budget {budget}"));
        assert_eq!(
            disk.is_stable(&witness).expect("roots converge"),
            StabilityVerdict::Stable,
            "{label}: witness not stable"
        );
        let image = a.apply(&witness).expect("degree fits");
        assert!(!image.is_zero(), "{label}: witness image is zero");
        assert_eq!(
            disk.membership(image_root),
            Membership::Inside,
            "{label}: image root not inside"
        );
        let scale = image.max_coeff_norm().max(1.0);
        assert!(
            image.eval(image_root).norm() <= 1e-6 * scale,
            "{label}: reported root does not annihilate the image"
        );
    }

    let hand = OperatorTruncation::from_columns(vec![
        ComplexPoly::one(),
        ComplexPoly::monomial(Complex64::new(1.0, 0.0), 1),
        ComplexPoly::constant(Complex64::new(3.0, 0.0)),
    ]);
    verify_witness(&hand, "hand violator", budget, rng.gen());

    for mutant_idx in 0..20 {
        let (psi, phi) = disk_pair(&mut rng);
        let n = rng.gen_range(2..=5);
        let valid = make_product_composition(&psi, &phi, n);
        let mut columns = valid.columns().to_vec();
        let target = rng.gen_range(1..=n);
        let spike_deg = rng.gen_range(0..=2);
        let magnitude = (1.5 + rng.gen_range(0.0..1.5))
            * columns[target].max_coeff_norm().max(1.0);
        columns[target] = &columns[target]
            + &ComplexPoly::monomial(random_unit(&mut rng) * magnitude, spike_deg);
        let mutant = OperatorTruncation::from_columns(columns);
        verify_witness(&mutant, &format!("mutant {mutant_idx}"), budget, rng.gen());
    }
    pass(3, "falsification", "hand violator + 20 mutants, all witnesses re-verified".into());
}

/// Criterion 4: the rearrangement identity holds exactly in rational
/// arithmetic for all orders up to 12.
#[test]
fn criterion_04_exact_identity() {
    let mut rng = rng(0x5004);
    let mut checks = 0;
    for _ in 0..100 {
        let coeffs: Vec<_> = (0..25)
            .map(|_| rational(rng.gen_range(-9..=9), rng.gen_range(1..=9)))
            .collect();
        let beta = rational(rng.gen_range(-9..=9), rng.gen_range(1..=9));
        for n in 0..=12 {
            checks += 1;
            assert!(
                combinatorial_identity_check(n, &coeffs, &beta),
                "identity failed at order {n}"
            );
        }
    }
    pass(4, "exact_identity", format!("{checks} exact checks, zero tolerance"));
}

/// Criterion 5: canonical-product coefficients start 1, 0 and obey the
/// factorial bound with slack 1e-12.
#[test]
fn criterion_05_canonical_product_bound() {
    let mut rng = rng(0x5005);
    for case in 0..100 {
        let count = rng.gen_range(1..=20);
        let zeros: Vec<Complex64> = (0..count)
            .map(|_| random_in_annulus(&mut rng, 0.5, 5.0))
            .collect();
        let cp = canonical_product(&zeros, 30).expect("zeros avoid the origin");
        assert_eq!(cp.coeffs[0], Complex64::new(1.0, 0.0), "case {case}: c0");
        assert!(cp.coeffs[1].norm() <= 1e-14, "case {case}: c1 = {}", cp.coeffs[1]);
        assert!(cp.coeff_bound_check(), "case {case}: bound violated");
    }
    pass(5, "canonical_product_bound", "100 zero sets, T = 30".into());
}

/// Criterion 6: for valid rank >= 2 operators the companion function is 1 up
/// to the computed truncation bound, and the second characteristic function
/// is zero-free above its tail.
#[test]
fn criterion_06_companion_triviality_and_f2() {
    let mut rng = rng(0x5006);
    let t = 6;
    let factorial_t1: f64 = (1..=t + 1).product::<usize>() as f64;
    for case in 0..50 {
        let (psi, phi) = disk_pair(&mut rng);
        let a = make_product_composition(&psi, &phi, 2 * t);
        let data = second_companion(&a, t).expect("valid operator");
        let f2 = char_fn(&a, 2, t).expect("depth fits");

        let zs: Vec<Complex64> = square_grid_points(0.5, 20);
        let ws: Vec<Complex64> = square_grid_points(1.0, 20);
        for &z in &zs {
            let beta_abs = data.beta(z).norm();
            let psi0_abs = psi.eval(z).norm();
            for &w in &ws {
                let g_bound = 3.0 * w.norm().powi(t as i32 + 1)
                    * (w.norm() * (1.0 + beta_abs * beta_abs)).exp()
                    / factorial_t1;
                let dev = (data.eval_w_series(z, w) - Complex64::new(1.0, 0.0)).norm();
                assert!(
                    dev <= g_bound,
                    "case {case}: |G - 1| = {dev:.3e} above bound {g_bound:.3e} at ({z}, {w})"
                );
                let f2_val = f2.eval(z, w).norm();
                let tail = f2.tail_bound(psi0_abs, w.norm());
                assert!(
                    f2_val > tail,
                    "case {case}: F2 not zero-free above tail at ({z}, {w})"
                );
            }
        }
    }
    pass(6, "companion_triviality_and_f2", "50 operators on a 20 x 20 grid".into());
}

/// Criterion 7: moment-ratio bounds hold on 50 constructed operators.
#[test]
fn criterion_07_moment_bounds() {
    let mut rng = rng(0x5007);
    let mut product_cases = 0;
    let mut rank1_cases = 0;
    for case in 0..50 {
        let omega = Region::disk(Complex64::new(0.0, 0.0), rng.gen_range(0.3..0.6), false);
        let report = if case % 5 < 3 {
            product_cases += 1;
            // Symbol mapping the small disk into the unit disk.
            let k = rng.gen_range(1..=2usize);
            let offset = rng.gen_range(0.0..0.4);
            let span = rng.gen_range(0.1..(0.9 - offset));
            let mut coeffs = vec![Complex64::new(0.0, 0.0); k + 1];
            coeffs[0] = random_unit(&mut rng) * offset;
            coeffs[k] = random_unit(&mut rng) * span;
            let phi = ComplexPoly::new(coeffs);
            let roots: Vec<Complex64> = (0..rng.gen_range(1..=3))
                .map(|_| random_in_annulus(&mut rng, 1.2, 3.0))
                .collect();
            let psi = ComplexPoly::from_roots(random_unit(&mut rng), &roots);
            let a = make_product_composition(&psi, &phi, 6);
            moment_bound_check(&a, &omega, 12).expect("grids avoid roots")
        } else {
            rank1_cases += 1;
            let beta = random_unit(&mut rng) * rng.gen_range(0.0..0.95);
            let sigma = random_in_annulus(&mut rng, 0.5, 2.0);
            let nu: Vec<Complex64> = (0..=6).map(|n| sigma * beta.powu(n)).collect();
            let roots: Vec<Complex64> = (0..rng.gen_range(1..=2))
                .map(|_| random_in_annulus(&mut rng, 1.2, 3.0))
                .collect();
            let psi = ComplexPoly::from_roots(random_unit(&mut rng), &roots);
            let a = make_rank1(&nu, &psi, 6);
            moment_bound_check(&a, &omega, 12).expect("grids avoid roots")
        };
        assert!(report.all_ok, "case {case}: {:?}", report.entries);
    }
    pass(
        7,
        "moment_bounds",
        format!("{product_cases} product-composition + {rank1_cases} rank-1 operators"),
    );
}

/// Criterion 8: the two outer oracles agree on at least 998 of 1000 random
/// polynomials (disagreements only when one verdict is borderline), and the
/// point-evaluation fit accepts all clean geometric sequences and rejects
/// all perturbed ones.
#[test]
fn criterion_08_hardy_oracles() {
    let mut rng = rng(0x5008);
    let mut agreements = 0;
    let mut borderline_disagreements = 0;
    for _ in 0..1000 {
        let degree = rng.gen_range(1..=12);
        let roots: Vec<Complex64> = (0..degree)
            .map(|_| {
                let inside = rng.gen_bool(0.5);
                let radius = if inside {
                    rng.gen_range(0.1..0.9)
                } else {
                    rng.gen_range(1.1..3.0)
                };
                Complex64::from_polar(radius, rng.gen_range(0.0..2.0 * std::f64::consts::PI))
            })
            .collect();
        let p = ComplexPoly::from_roots(random_unit(&mut rng), &roots);
        let by_roots = root_outer_test(&p).expect("nonzero").verdict;
        let by_jensen = jensen_outer_test(&H2Trunc::from_poly(&p), 4096, 1e-6)
            .expect("nonzero")
            .verdict;
        if by_roots == by_jensen {
            agreements += 1;
        } else {
            assert!(
                by_roots == OuterVerdict::Borderline || by_jensen == OuterVerdict::Borderline,
                "non-borderline disagreement: {by_roots:?} vs {by_jensen:?}"
            );
            borderline_disagreements += 1;
        }
    }
    assert!(agreements >= 998, "only {agreements}/1000 agreements");

    let tol = 1e-9;
    for case in 0..500 {
        let sigma = random_in_annulus(&mut rng, 0.1, 5.0);
        let beta = random_unit(&mut rng) * rng.gen_range(0.0..0.95);
        let len = rng.gen_range(3..=10);
        let rho: Vec<Complex64> = (0..len).map(|n| sigma * beta.powu(n as u32)).collect();
        let eval = classify_functional(&rho, false, tol)
            .unwrap_or_else(|| panic!("case {case}: clean sequence rejected"));
        assert!((eval.sigma - sigma).norm() <= 1e-12 * sigma.norm());
        assert!((eval.z0 - beta).norm() <= 1e-12);

        let mut perturbed = rho;
        let idx = rng.gen_range(1..len);
        perturbed[idx] += random_unit(&mut rng) * (1e3 * tol * sigma.norm());
        assert!(
            classify_functional(&perturbed, false, tol).is_none(),
            "case {case}: perturbed sequence accepted"
        );
    }
    pass(
        8,
        "hardy_oracles",
        format!(
            "{agreements}/1000 agreements ({borderline_disagreements} borderline), 500 + 500 functional fits"
        ),
    );
}

/// Criterion 9: every operator classified as product-composition over the
/// unit disk passes the test-family certificate with 200 sampled points.
#[test]
fn criterion_09_bb_bridge() {
    let mut rng = rng(0x5009);
    let disk = Region::open_unit_disk();
    let opts = ClassifyOptions::default();
    let mut classified = 0;
    while classified < 25 {
        let (psi, phi) = disk_pair(&mut rng);
        let a = make_product_composition(&psi, &phi, rng.gen_range(3..=6));
        match classify(&a, &disk, &disk, &opts).expect("preconditions hold") {
            Classification::ProductComposition { .. } => {
                classified += 1;
                assert!(
                    bb_certificate(&a, 200, rng.gen()),
                    "certified operator failed the test family"
                );
            }
            other => panic!("constructed disk operator misclassified: {other:?}"),
        }
    }
    pass(9, "bb_bridge", format!("{classified} operators x 200 samples"));
}

/// Criterion 10: product-composition-differential operators preserve
/// convex-complement stability, no violations.
#[test]
fn criterion_10_pcd_suite() {
    let mut rng = rng(0x500a);
    let mut images = 0;
    for _ in 0..50 {
        let instance = pcd_instance(&mut rng);
        let a = make_pcd(&instance.psi, &instance.phi, instance.n_deriv, 8);
        for _ in 0..50 {
            let degree = rng.gen_range(1..=8);
            let p = instance
                .omega
                .random_stable_poly(degree, rng.gen())
                .expect("sampler");
            let image = a.apply(&p).expect("degree fits");
            if image.is_zero() {
                continue;
            }
            images += 1;
            assert_eq!(
                instance.omega.is_stable(&image).expect("roots converge"),
                StabilityVerdict::Stable,
                "image unstable for derivative order {}",
                instance.n_deriv
            );
        }
    }
    pass(10, "pcd_suite", format!("50 operators, {images} nonzero images, 0 violations"));
}

/// A deterministic list of points in the disk of the given radius, truncated
/// to a fixed count for grid sizing.
fn square_grid_points(radius: f64, count: usize) -> Vec<Complex64> {
    let mut pts = stabil_core::analysis::square_grid(radius, 6);
    pts.truncate(count);
    pts
}
