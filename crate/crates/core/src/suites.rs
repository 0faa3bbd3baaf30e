//! Built-in invariant suites, runnable from the command line.
//!
//! Each suite re-verifies one of the crate's load-bearing identities on
//! freshly generated random data: the exact rational identity, the
//! canonical-product coefficient bound, the moment formula against direct
//! column evaluation, triviality of the companion function for constructed
//! operators, and agreement of the two outer-function oracles.

use crate::analysis::{
    canonical_product, char_fn, combinatorial_identity_check, moment_formula, rational,
    second_companion,
};
use crate::hardy::{jensen_outer_test, root_outer_test, H2Trunc, OuterVerdict};
use crate::operator::make_product_composition;
use crate::poly::ComplexPoly;
use num_complex::Complex64;
use num_rational::BigRational;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CheckLevel {
    Fast,
    Full,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SuiteResult {
    pub name: String,
    pub passed: bool,
    pub cases: usize,
    pub detail: String,
}

pub fn run_selfcheck(level: CheckLevel) -> Vec<SuiteResult> {
    vec![
        exact_identity_suite(level),
        coefficient_bound_suite(level),
        moment_formula_suite(level),
        companion_triviality_suite(level),
        oracle_agreement_suite(level),
    ]
}

fn exact_identity_suite(level: CheckLevel) -> SuiteResult {
    let (max_order, draws) = match level {
        CheckLevel::Fast => (8, 20),
        CheckLevel::Full => (12, 100),
    };
    let mut rng = ChaCha8Rng::seed_from_u64(101);
    let mut cases = 0;
    for _ in 0..draws {
        let coeffs: Vec<BigRational> = (0..2 * max_order + 1)
            .map(|_| rational(rng.gen_range(-9..=9), rng.gen_range(1..=9)))
            .collect();
        let beta = rational(rng.gen_range(-9..=9), rng.gen_range(1..=9));
        for n in 0..=max_order {
            cases += 1;
            if !combinatorial_identity_check(n, &coeffs, &beta) {
                return SuiteResult {
                    name: "exact_identity".into(),
                    passed: false,
                    cases,
                    detail: format!("identity failed at order {n}"),
                };
            }
        }
    }
    SuiteResult {
        name: "exact_identity".into(),
        passed: true,
        cases,
        detail: format!("orders 0..={max_order}, exact rational arithmetic"),
    }
}

fn coefficient_bound_suite(level: CheckLevel) -> SuiteResult {
    let draws = match level {
        CheckLevel::Fast => 30,
        CheckLevel::Full => 100,
    };
    let mut rng = ChaCha8Rng::seed_from_u64(202);
    for case in 0..draws {
        let count = rng.gen_range(1..=20);
        let zeros: Vec<Complex64> = (0..count)
            .map(|_| {
                Complex64::from_polar(
                    rng.gen_range(0.5..5.0),
                    rng.gen_range(0.0..2.0 * std::f64::consts::PI),
                )
            })
            .collect();
        let cp = match canonical_product(&zeros, 30) {
            Ok(cp) => cp,
            Err(e) => {
                return SuiteResult {
                    name: "coefficient_bounds".into(),
                    passed: false,
                    cases: case,
                    detail: format!("construction failed: {e}"),
                }
            }
        };
        let head_ok = cp.coeffs[0] == Complex64::new(1.0, 0.0) && cp.coeffs[1].norm() <= 1e-14;
        if !head_ok || !cp.coeff_bound_check() {
            return SuiteResult {
                name: "coefficient_bounds".into(),
                passed: false,
                cases: case,
                detail: format!("bound violated for zero set of size {count}"),
            };
        }
    }
    SuiteResult {
        name: "coefficient_bounds".into(),
        passed: true,
        cases: draws,
        detail: "truncation 30, slack 1e-12".into(),
    }
}

fn moment_formula_suite(level: CheckLevel) -> SuiteResult {
    let draws = match level {
        CheckLevel::Fast => 20,
        CheckLevel::Full => 100,
    };
    let mut rng = ChaCha8Rng::seed_from_u64(303);
    let trivial: Vec<Complex64> = std::iter::once(Complex64::new(1.0, 0.0))
        .chain(std::iter::repeat_n(Complex64::new(0.0, 0.0), 8))
        .collect();
    let mut cases = 0;
    for _ in 0..draws {
        let (psi, phi) = random_multiplier_and_symbol(&mut rng);
        let a = make_product_composition(&psi, &phi, 8);
        let z = Complex64::from_polar(rng.gen_range(0.0..0.6), rng.gen_range(0.0..std::f64::consts::TAU));
        let psi0 = psi.eval(z);
        let beta = phi.eval(z);
        for n in 0..=8 {
            cases += 1;
            let via_formula = psi0 * moment_formula(&trivial, beta, n);
            let direct = a.column(n).eval(z);
            let scale = direct.norm().max(1.0);
            if (via_formula - direct).norm() / scale > 1e-10 {
                return SuiteResult {
                    name: "moment_formula".into(),
                    passed: false,
                    cases,
                    detail: format!("moment {n} deviates at z = {z}"),
                };
            }
        }
    }
    SuiteResult {
        name: "moment_formula".into(),
        passed: true,
        cases,
        detail: "formula vs direct column evaluation, tolerance 1e-10".into(),
    }
}

fn companion_triviality_suite(level: CheckLevel) -> SuiteResult {
    let draws = match level {
        CheckLevel::Fast => 10,
        CheckLevel::Full => 50,
    };
    let t = 6;
    let mut rng = ChaCha8Rng::seed_from_u64(404);
    for case in 0..draws {
        let (psi, phi) = random_multiplier_and_symbol(&mut rng);
        let a = make_product_composition(&psi, &phi, 2 * t);
        let data = match second_companion(&a, t) {
            Ok(d) => d,
            Err(e) => {
                return SuiteResult {
                    name: "companion_triviality".into(),
                    passed: false,
                    cases: case,
                    detail: format!("companion construction failed: {e}"),
                }
            }
        };
        let f2 = char_fn(&a, 2, t).expect("bounds were checked");
        for i in 0..5 {
            for j in 0..5 {
                let z = Complex64::new(-0.4 + 0.2 * i as f64, -0.4 + 0.2 * j as f64);
                let w = Complex64::new(-0.8 + 0.4 * j as f64, -0.8 + 0.4 * i as f64);
                let tail = f2.tail_bound(psi.eval(z).norm(), w.norm()) + 1e-9;
                if (data.eval_w_series(z, w) - Complex64::new(1.0, 0.0)).norm() > tail {
                    return SuiteResult {
                        name: "companion_triviality".into(),
                        passed: false,
                        cases: case,
                        detail: format!("companion deviates from 1 at (z, w) = ({z}, {w})"),
                    };
                }
                if f2.eval(z, w).norm() <= f2.tail_bound(psi.eval(z).norm(), w.norm()) {
                    return SuiteResult {
                        name: "companion_triviality".into(),
                        passed: false,
                        cases: case,
                        detail: "second characteristic function not zero-free above tail".into(),
                    };
                }
            }
        }
    }
    SuiteResult {
        name: "companion_triviality".into(),
        passed: true,
        cases: draws,
        detail: format!("constructed operators, truncation order {t}"),
    }
}

fn oracle_agreement_suite(level: CheckLevel) -> SuiteResult {
    let draws = match level {
        CheckLevel::Fast => 100,
        CheckLevel::Full => 1000,
    };
    let mut rng = ChaCha8Rng::seed_from_u64(505);
    let mut disagreements = 0;
    for _ in 0..draws {
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
        let p = ComplexPoly::from_roots(Complex64::new(1.0, 0.0), &roots);
        let by_roots = root_outer_test(&p).map(|r| r.verdict);
        let by_jensen = jensen_outer_test(&H2Trunc::from_poly(&p), 4096, 1e-6).map(|r| r.verdict);
        match (by_roots, by_jensen) {
            (Ok(a), Ok(b)) if a == b => {}
            (Ok(OuterVerdict::Borderline), Ok(_)) | (Ok(_), Ok(OuterVerdict::Borderline)) => {
                disagreements += 1;
            }
            _ => {
                return SuiteResult {
                    name: "oracle_agreement".into(),
                    passed: false,
                    cases: draws,
                    detail: "outer oracle disagreement outside the borderline band".into(),
                }
            }
        }
    }
    SuiteResult {
        name: "oracle_agreement".into(),
        passed: true,
        cases: draws,
        detail: format!("{disagreements} borderline-only disagreements"),
    }
}

fn random_multiplier_and_symbol(rng: &mut ChaCha8Rng) -> (ComplexPoly, ComplexPoly) {
    // Multiplier with roots outside the closed disk, symbol contracting the
    // disk into itself.
    let deg = rng.gen_range(1..=3);
    let roots: Vec<Complex64> = (0..deg)
        .map(|_| {
            Complex64::from_polar(
                rng.gen_range(1.3..3.0),
                rng.gen_range(0.0..2.0 * std::f64::consts::PI),
            )
        })
        .collect();
    let psi = ComplexPoly::from_roots(Complex64::new(1.0, 0.0), &roots);

    let k = rng.gen_range(1..=2);
    let scale = rng.gen_range(0.2..0.6);
    let offset = rng.gen_range(0.0..0.3);
    let mut coeffs = vec![Complex64::new(0.0, 0.0); k + 1];
    coeffs[0] = Complex64::from_polar(offset, rng.gen_range(0.0..std::f64::consts::TAU));
    coeffs[k] = Complex64::from_polar(scale, rng.gen_range(0.0..std::f64::consts::TAU));
    let phi = ComplexPoly::new(coeffs);
    (psi, phi)
}
