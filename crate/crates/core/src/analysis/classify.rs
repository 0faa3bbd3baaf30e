//! Structure classification of stability-transforming operators.
//!
//! For a bounded first region and a second region with nonempty interior,
//! an operator carrying stable polynomials to stable-or-zero polynomials is
//! either rank one onto a stable line, or multiplication by a stable
//! polynomial after composition with a polynomial that maps the second region
//! into the first. The classifier decides which case holds for a given
//! truncation, recovering the data; on failure it searches for an explicit
//! counterexample before conceding `Inconclusive`.

use super::AnalysisError;
use crate::operator::{compose_operators, make_dilation, OperatorTruncation};
use crate::poly::ComplexPoly;
use crate::region::{maps_into, MapsInto, Region, StabilityVerdict};
use num_complex::Complex64;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy)]
pub struct ClassifyOptions {
    pub tol: f64,
    pub budget: usize,
    pub seed: u64,
    pub grid_density: usize,
}

impl Default for ClassifyOptions {
    fn default() -> Self {
        ClassifyOptions {
            tol: 1e-8,
            budget: 10_000,
            seed: 0,
            grid_density: 24,
        }
    }
}

/// Outcome of the structure decision.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum Classification {
    Rank1 {
        #[serde(with = "crate::region::serde_complex_vec")]
        nu: Vec<Complex64>,
        psi: ComplexPoly,
    },
    ProductComposition {
        psi: ComplexPoly,
        phi: ComplexPoly,
        residuals: Vec<f64>,
    },
    NotPreserving {
        witness: ComplexPoly,
        #[serde(with = "crate::region::serde_complex")]
        image_root: Complex64,
    },
    Inconclusive {
        report: String,
    },
}

/// Classifies `a` against the pair `(omega1, omega2)`.
pub fn classify(
    a: &OperatorTruncation,
    omega1: &Region,
    omega2: &Region,
    opts: &ClassifyOptions,
) -> Result<Classification, AnalysisError> {
    if !omega1.bounded() {
        return Err(AnalysisError::PreconditionViolated(
            "the first region must be bounded".into(),
        ));
    }
    if !omega2.interior_nonempty() {
        return Err(AnalysisError::PreconditionViolated(
            "the second region must have nonempty interior".into(),
        ));
    }

    let rank = a.rank_estimate(opts.tol.min(1e-8));
    if rank <= 1 {
        match classify_rank1(a, omega2, opts.tol) {
            Ok(result) => return Ok(result),
            Err(step) => return Ok(fail(a, omega1, omega2, opts, &step)),
        }
    }

    let psi = a.column(0).clone();
    match omega2.is_stable(&psi) {
        Ok(StabilityVerdict::Stable) => {}
        Ok(StabilityVerdict::Unstable(root)) => {
            // The image of the constant 1 already violates containment.
            return Ok(Classification::NotPreserving {
                witness: ComplexPoly::one(),
                image_root: root,
            });
        }
        Ok(StabilityVerdict::Borderline(_)) => {
            return Ok(fail(a, omega1, omega2, opts, "zeroeth moment is borderline-stable"));
        }
        Ok(StabilityVerdict::ZeroPoly) => {
            return Ok(fail(
                a,
                omega1,
                omega2,
                opts,
                "zeroeth moment vanishes at rank >= 2",
            ));
        }
        Err(e) => {
            return Ok(fail(
                a,
                omega1,
                omega2,
                opts,
                &format!("root finding failed on the zeroeth moment: {e}"),
            ));
        }
    }

    let psi1 = a.column(1);
    // psi is stable, hence nonzero, so division by zero cannot occur here.
    let phi = match psi1.divide_exact(&psi, opts.tol)? {
        Some(q) => q,
        None => {
            return Ok(fail(
                a,
                omega1,
                omega2,
                opts,
                "first moment is not a polynomial multiple of the zeroeth",
            ))
        }
    };
    if phi.degree().is_none_or(|d| d == 0) {
        return Ok(fail(
            a,
            omega1,
            omega2,
            opts,
            "recovered composition symbol is constant at rank >= 2",
        ));
    }

    // Cross-relation psi_0^{n-1} psi_n = psi_1^n, checked as polynomial
    // identities; this avoids pointwise division entirely.
    let mut residuals = Vec::new();
    let mut lhs_power = psi.clone(); // psi_0^{n-1} running power
    let mut rhs_power = psi1 * psi1; // psi_1^n running power
    for n in 2..=a.source_bound() {
        let lhs = &lhs_power * a.column(n);
        let scale = lhs.max_coeff_norm().max(rhs_power.max_coeff_norm()).max(1e-300);
        let residual = (&lhs - &rhs_power).max_coeff_norm() / scale;
        residuals.push(residual);
        if residual > opts.tol {
            return Ok(fail(
                a,
                omega1,
                omega2,
                opts,
                &format!("cross-relation failed at moment {n} (residual {residual:.3e})"),
            ));
        }
        lhs_power = &lhs_power * &psi;
        rhs_power = &rhs_power * psi1;
    }

    match maps_into(&phi, omega2, omega1, opts.grid_density) {
        MapsInto::Refuted { .. } => Ok(fail(
            a,
            omega1,
            omega2,
            opts,
            "recovered symbol maps the second region outside the first",
        )),
        MapsInto::Certified | MapsInto::SampledOnly => Ok(Classification::ProductComposition {
            psi,
            phi,
            residuals,
        }),
    }
}

/// Rank <= 1 path: extract the common direction and the functional values.
fn classify_rank1(
    a: &OperatorTruncation,
    omega2: &Region,
    tol: f64,
) -> Result<Classification, String> {
    let best = a
        .columns()
        .iter()
        .enumerate()
        .max_by(|x, y| {
            x.1.max_coeff_norm()
                .partial_cmp(&y.1.max_coeff_norm())
                .unwrap()
        })
        .map(|(i, _)| i)
        .unwrap_or(0);
    if a.column(best).is_zero() {
        // Zero operator: any stable direction will do.
        return Ok(Classification::Rank1 {
            nu: vec![Complex64::new(0.0, 0.0); a.source_bound() + 1],
            psi: ComplexPoly::one(),
        });
    }
    // Normalize the direction so its largest coefficient is 1.
    let dir_raw = a.column(best);
    let lead = dir_raw
        .coeffs()
        .iter()
        .copied()
        .max_by(|x, y| x.norm().partial_cmp(&y.norm()).unwrap())
        .unwrap();
    let psi = dir_raw.scale(lead.inv()).trimmed();
    let psi_norm2: f64 = psi.coeffs().iter().map(|c| c.norm_sqr()).sum();

    let mut nu = Vec::with_capacity(a.source_bound() + 1);
    for column in a.columns() {
        let dot: Complex64 = (0..psi.coeffs().len())
            .map(|k| psi.coeff(k).conj() * column.coeff(k))
            .sum();
        let coefficient = dot / psi_norm2;
        let residual = (column - &psi.scale(coefficient)).max_coeff_norm();
        if residual > tol * (1.0 + column.max_coeff_norm()) {
            return Err(format!(
                "rank estimate 1 but column deviates from the common direction by {residual:.3e}"
            ));
        }
        nu.push(coefficient);
    }

    match omega2.is_stable(&psi) {
        Ok(StabilityVerdict::Stable) => Ok(Classification::Rank1 { nu, psi }),
        Ok(StabilityVerdict::Borderline(_)) => {
            Err("rank-1 direction is borderline-stable".into())
        }
        Ok(StabilityVerdict::Unstable(_)) => Err("rank-1 direction is unstable".into()),
        Ok(StabilityVerdict::ZeroPoly) => Err("rank-1 direction vanished".into()),
        Err(e) => Err(format!("root finding failed on the rank-1 direction: {e}")),
    }
}

fn fail(
    a: &OperatorTruncation,
    omega1: &Region,
    omega2: &Region,
    opts: &ClassifyOptions,
    step: &str,
) -> Classification {
    match falsify(a, omega1, omega2, opts.budget, opts.seed) {
        Some((witness, image_root)) => Classification::NotPreserving { witness, image_root },
        None => Classification::Inconclusive {
            report: format!("{step}; no counterexample found within budget {}", opts.budget),
        },
    }
}

/// Random search for a stability violation: a polynomial stable for the first
/// region whose image is nonzero and unstable for the second. The first
/// witness in deterministic draw order wins.
pub fn falsify(
    a: &OperatorTruncation,
    omega1: &Region,
    omega2: &Region,
    budget: usize,
    seed: u64,
) -> Option<(ComplexPoly, Complex64)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = a.source_bound();
    // A witness root must sit inside by a margin even when the region's own
    // band is zero, so a boundary root jittered in by float error never
    // testifies.
    let margin = omega2.boundary_band().max(1e-12);
    for draw in 0..budget {
        let degree = 1 + (draw % n.max(1));
        let draw_seed = rand::Rng::gen::<u64>(&mut rng);
        let p = match omega1.random_stable_poly(degree, draw_seed) {
            Ok(p) => p,
            Err(_) => continue,
        };
        let image = match a.apply(&p) {
            Ok(image) => image,
            Err(_) => continue,
        };
        if image.is_zero() {
            continue;
        }
        if let Ok(StabilityVerdict::Unstable(root)) = omega2.is_stable(&image) {
            if omega2.membership_with_band(root, margin) == crate::region::Membership::Inside {
                return Some((p, root));
            }
        }
    }
    None
}

/// Certificate in the style of the disk characterization: the images of the
/// test family `(1 + w z)^n` must all be disk-stable or zero.
pub fn bb_certificate(a: &OperatorTruncation, samples: usize, seed: u64) -> bool {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let disk = Region::open_unit_disk();
    for _ in 0..samples {
        // Uniform on the open unit disk.
        let radius = rand::Rng::gen::<f64>(&mut rng).sqrt();
        let angle = rand::Rng::gen_range(&mut rng, 0.0..2.0 * std::f64::consts::PI);
        let w = Complex64::from_polar(radius, angle);
        let base = ComplexPoly::new(vec![Complex64::new(1.0, 0.0), w]);
        let mut family = ComplexPoly::one();
        for _ in 0..a.source_bound() {
            family = &family * &base;
            let image = match a.apply(&family) {
                Ok(image) => image,
                Err(_) => return false,
            };
            if image.is_zero() {
                continue;
            }
            match disk.is_stable(&image) {
                Ok(StabilityVerdict::Stable) | Ok(StabilityVerdict::Borderline(_)) => {}
                _ => return false,
            }
        }
    }
    // n = 0: the constant 1 maps to the zeroeth moment.
    let psi0 = a.column(0);
    psi0.is_zero()
        || matches!(
            disk.is_stable(psi0),
            Ok(StabilityVerdict::Stable) | Ok(StabilityVerdict::Borderline(_))
        )
}

/// Conjugation by dilations that reduces an arbitrary conforming pair of
/// regions to a disk sub-problem.
#[derive(Debug, Clone)]
pub struct Reduction {
    pub reduced: OperatorTruncation,
    /// Open disk inside both the unit disk and the scaled second region.
    pub omega: Region,
    pub delta: f64,
    pub epsilon: f64,
}

pub fn reduce_general(
    a: &OperatorTruncation,
    omega1: &Region,
    omega2: &Region,
) -> Result<Reduction, AnalysisError> {
    let sup1 = omega1.sup_abs().ok_or_else(|| {
        AnalysisError::PreconditionViolated("the first region must be bounded".into())
    })?;
    if !omega2.interior_nonempty() {
        return Err(AnalysisError::PreconditionViolated(
            "the second region must have nonempty interior".into(),
        ));
    }
    let delta = if sup1 == 0.0 { 1.0 } else { 0.5 / sup1 };

    let (z2, clearance) = omega2.interior_point().ok_or_else(|| {
        AnalysisError::PreconditionViolated("no interior point available".into())
    })?;
    let r_small = clearance / 2.0;
    let epsilon = (0.5 / (z2.norm() + r_small)).min(1.0);
    let omega = Region::disk(z2 * epsilon, r_small * epsilon, false);

    let d_delta = make_dilation(Complex64::new(delta, 0.0), a.source_bound())
        .expect("delta is positive");
    let inner = compose_operators(a, &d_delta).expect("dilation preserves degrees");
    let d_inv_eps = make_dilation(Complex64::new(1.0 / epsilon, 0.0), inner.max_target_degree())
        .expect("epsilon is positive");
    let reduced = compose_operators(&d_inv_eps, &inner).expect("bounds were sized to fit");

    Ok(Reduction {
        reduced,
        omega,
        delta,
        epsilon,
    })
}
