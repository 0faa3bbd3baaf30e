//! Truncated Hardy-space elements, outer-function tests, minimum-phase
//! signals, and classification of operators that preserve outerness.
//!
//! Everything here works on finite coefficient data. An outer function
//! satisfies the Jensen equality between `log |f(0)|` and the circle mean of
//! `log |f|`; for polynomials this is equivalent to having no roots in the
//! open unit disk, which gives two independent test routes. Circle integrals
//! are taken on radius `1 - 1/K` rather than 1 so boundary zeros and
//! truncated tails stay out of the quadrature. Every verdict records the
//! truncation length it was computed at.

use crate::operator::OperatorTruncation;
use crate::poly::{ComplexPoly, PolyError};
use crate::region::{Region, StabilityVerdict};
use num_complex::Complex64;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Default circle sample count for the Jensen test.
pub const DEFAULT_JENSEN_SAMPLES: usize = 4096;
/// Default Jensen deficit tolerance. The detectable root depth is coupled to
/// the sample count: roots between radius `1 - 1/K` and 1 contribute no
/// deficit, so `tol` should not be taken far below `1/K`.
pub const DEFAULT_JENSEN_TOL: f64 = 1e-6;

#[derive(Debug, Clone, Error, PartialEq)]
pub enum HardyError {
    #[error("the zero signal has no phase classification")]
    ZeroSignal,
    #[error("the zero function is not classifiable")]
    ZeroFunction,
    #[error(transparent)]
    Poly(#[from] PolyError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OuterVerdict {
    Outer,
    NotOuter,
    Borderline,
}

/// Truncated Taylor coefficients of an `H^2` element.
#[derive(Debug, Clone, PartialEq)]
pub struct H2Trunc {
    pub coeffs: Vec<Complex64>,
}

impl H2Trunc {
    pub fn new(coeffs: Vec<Complex64>) -> Self {
        H2Trunc { coeffs }
    }

    pub fn from_poly(p: &ComplexPoly) -> Self {
        H2Trunc {
            coeffs: p.coeffs().to_vec(),
        }
    }

    pub fn to_poly(&self) -> ComplexPoly {
        ComplexPoly::new(self.coeffs.clone())
    }

    pub fn truncation_len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn norm(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn eval(&self, z: Complex64) -> Complex64 {
        self.to_poly().eval(z)
    }

    /// Evaluation tail bound on `|z| <= r < 1`: by Cauchy-Schwarz a function
    /// of the given norm deviates from this truncation by at most
    /// `norm * r^L / sqrt(1 - r^2)` at radius `r`, `L` the truncation length.
    pub fn tail_bound(&self, r: f64) -> f64 {
        self.norm() * r.powi(self.coeffs.len() as i32) / (1.0 - r * r).sqrt()
    }
}

/// A causal signal: sample 0 is at time 0. Identical data to `H2Trunc`; the
/// interpretation differs.
#[derive(Debug, Clone, PartialEq)]
pub struct Signal {
    pub samples: Vec<Complex64>,
}

impl Signal {
    pub fn new(samples: Vec<Complex64>) -> Self {
        Signal { samples }
    }

    /// The z-transform convention in which sample `n` multiplies `z^n`, so
    /// that finite minimum-phase signals correspond to disk-stable
    /// polynomials.
    pub fn z_transform(&self) -> ComplexPoly {
        ComplexPoly::new(self.samples.clone())
    }
}

/// A functional of point-evaluation form `f -> sigma * f(z0)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PointEvaluation {
    #[serde(with = "crate::region::serde_complex")]
    pub sigma: Complex64,
    #[serde(with = "crate::region::serde_complex")]
    pub z0: Complex64,
}

/// Outcome of an outer test with its diagnostics.
#[derive(Debug, Clone, PartialEq)]
pub struct OuterReport {
    pub verdict: OuterVerdict,
    /// Circle mean of `log |f|` minus `log |f(0)|`; zero for outer functions.
    pub deficit: f64,
    pub radius: f64,
    pub samples: usize,
    pub truncation_len: usize,
    /// Roots found within 1e-9 of the unit circle (root-test route only).
    pub boundary_roots: Vec<Complex64>,
    /// Deficits at interior radii approaching the quadrature circle, as
    /// (radius, deficit) pairs ending at `radius`. The deficit only grows
    /// with the radius; a jump reveals zeros entering the integration
    /// circle (Jensen route only).
    pub radius_deficits: Vec<(f64, f64)>,
}

/// Jensen-equality test on the circle of radius `1 - 1/k`.
pub fn jensen_outer_test(f: &H2Trunc, k: usize, tol: f64) -> Result<OuterReport, HardyError> {
    assert!(k >= 64, "the circle quadrature needs at least 64 samples");
    if f.coeffs.iter().all(|c| c.norm_sqr() == 0.0) {
        return Err(HardyError::ZeroFunction);
    }
    let radius = 1.0 - 1.0 / k as f64;
    let truncation_len = f.truncation_len();
    let at_zero = f.coeffs.first().copied().unwrap_or_default();
    if at_zero.norm_sqr() == 0.0 {
        // Outer functions cannot vanish at the origin.
        return Ok(OuterReport {
            verdict: OuterVerdict::NotOuter,
            deficit: f64::INFINITY,
            radius,
            samples: k,
            truncation_len,
            boundary_roots: Vec::new(),
            radius_deficits: Vec::new(),
        });
    }
    let p = f.to_poly();
    let log_at_zero = at_zero.norm().ln();
    let circle_deficit = |r: f64| {
        let mut mean = 0.0;
        for j in 0..k {
            let angle = 2.0 * std::f64::consts::PI * j as f64 / k as f64;
            let value = p.eval(Complex64::from_polar(r, angle)).norm();
            mean += value.max(f64::MIN_POSITIVE).ln();
        }
        mean / k as f64 - log_at_zero
    };
    let radius_deficits: Vec<(f64, f64)> = [4.0, 2.0, 1.0]
        .iter()
        .map(|&step| {
            let r = 1.0 - step / k as f64;
            (r, circle_deficit(r))
        })
        .collect();
    let deficit = radius_deficits.last().expect("three radii").1;
    let verdict = if deficit <= tol {
        OuterVerdict::Outer
    } else if deficit > 10.0 * tol {
        OuterVerdict::NotOuter
    } else {
        OuterVerdict::Borderline
    };
    Ok(OuterReport {
        verdict,
        deficit,
        radius,
        samples: k,
        truncation_len,
        boundary_roots: Vec::new(),
        radius_deficits,
    })
}

/// Root-location outer test for polynomial data: outer iff no roots in the
/// open unit disk. With the default zero band a root sitting exactly on the
/// circle still counts as outer and is reported in `boundary_roots`.
pub fn root_outer_test(p: &ComplexPoly) -> Result<OuterReport, HardyError> {
    root_outer_test_with_band(p, 0.0)
}

pub fn root_outer_test_with_band(p: &ComplexPoly, band: f64) -> Result<OuterReport, HardyError> {
    let truncation_len = p.coeffs().len();
    let degree = match p.degree() {
        None => return Err(HardyError::ZeroFunction),
        Some(d) => d,
    };
    let mut boundary_roots = Vec::new();
    let mut verdict = OuterVerdict::Outer;
    if degree >= 1 {
        let roots = p.roots()?;
        for &(root, _) in &roots.roots {
            let distance = root.norm() - 1.0;
            if distance.abs() <= 1e-9 {
                boundary_roots.push(root);
            }
            if distance < -band {
                verdict = OuterVerdict::NotOuter;
                break;
            } else if distance.abs() <= band && band > 0.0 {
                verdict = OuterVerdict::Borderline;
            }
        }
    }
    Ok(OuterReport {
        verdict,
        deficit: 0.0,
        radius: 1.0,
        samples: 0,
        truncation_len,
        boundary_roots,
        radius_deficits: Vec::new(),
    })
}

/// Strips the maximal run of leading below-threshold coefficients as a power
/// of `z` and tests the remainder for outerness; succeeds only when the
/// remainder is outer.
pub fn shifted_outer_decompose(f: &H2Trunc, tol: f64) -> Option<(usize, H2Trunc)> {
    let threshold = tol * f.norm();
    let shift = f
        .coeffs
        .iter()
        .position(|c| c.norm() > threshold)
        .unwrap_or(f.coeffs.len());
    if shift == f.coeffs.len() {
        return None;
    }
    let rest = H2Trunc::new(f.coeffs[shift..].to_vec());
    match root_outer_test(&rest.to_poly()) {
        Ok(report) if report.verdict == OuterVerdict::Outer => Some((shift, rest)),
        _ => None,
    }
}

/// Minimum-phase test: the signal's z-transform must be outer.
pub fn minimum_phase_test(s: &Signal) -> Result<OuterReport, HardyError> {
    if s.samples.iter().all(|c| c.norm_sqr() == 0.0) {
        return Err(HardyError::ZeroSignal);
    }
    root_outer_test(&s.z_transform())
}

/// Fits a geometric law `rho_n = sigma * z0^n` to functional values; accepts
/// only when the fit is within `tol * |sigma|` everywhere and `|z0| < 1`.
/// In shifted mode, `z0 = 0` is additionally rejected.
pub fn classify_functional(rho: &[Complex64], shifted: bool, tol: f64) -> Option<PointEvaluation> {
    let sigma = *rho.first()?;
    if sigma.norm_sqr() == 0.0 {
        return None;
    }
    let z0 = if rho.len() >= 2 {
        rho[1] / sigma
    } else {
        Complex64::new(0.0, 0.0)
    };
    if z0.norm() >= 1.0 {
        return None;
    }
    if shifted && z0.norm() <= tol {
        return None;
    }
    let mut power = Complex64::new(1.0, 0.0);
    for &value in rho {
        if (value - sigma * power).norm() > tol * sigma.norm() {
            return None;
        }
        power *= z0;
    }
    Some(PointEvaluation { sigma, z0 })
}

/// Classification outcome for operators acting on truncated Hardy data.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum H2Classification {
    ProductComposition {
        psi: ComplexPoly,
        phi: ComplexPoly,
        residuals: Vec<f64>,
        truncation: usize,
    },
    Rank1 {
        eval: PointEvaluation,
        psi: ComplexPoly,
        truncation: usize,
    },
    NotPreserving {
        witness: ComplexPoly,
        image: ComplexPoly,
        truncation: usize,
    },
    Inconclusive {
        report: String,
        truncation: usize,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OuterMode {
    Outer,
    Shifted,
}

/// Classifies an operator on truncated Hardy data as outer-preserving
/// product-composition, point-evaluation rank one, a refuted operator with a
/// witness, or inconclusive.
pub fn classify_h2_operator(
    a: &OperatorTruncation,
    mode: OuterMode,
    tol: f64,
    budget: usize,
    seed: u64,
) -> H2Classification {
    let truncation = a.max_target_degree() + 1;
    let shifted = mode == OuterMode::Shifted;

    // The image of the constant 1 must itself pass the mode's outer test;
    // when it fails, 1 is already a witness.
    let psi = a.column(0).clone();
    if !passes_mode(&psi, shifted, tol) {
        return match falsify_h2(a, shifted, budget, seed) {
            Some((witness, image)) => H2Classification::NotPreserving {
                witness,
                image,
                truncation,
            },
            None => H2Classification::Inconclusive {
                report: "image of 1 fails the outer test but no witness verified".into(),
                truncation,
            },
        };
    }

    let rank = a.rank_estimate(tol.min(1e-8));
    if rank <= 1 {
        // Extract functional values against the common direction.
        let psi_norm2: f64 = psi.coeffs().iter().map(|c| c.norm_sqr()).sum();
        if psi_norm2 == 0.0 {
            return H2Classification::Inconclusive {
                report: "zero operator preserves nothing".into(),
                truncation,
            };
        }
        let mut rho = Vec::with_capacity(a.source_bound() + 1);
        for column in a.columns() {
            let dot: Complex64 = (0..psi.coeffs().len())
                .map(|k| psi.coeff(k).conj() * column.coeff(k))
                .sum();
            rho.push(dot / psi_norm2);
        }
        // rho is normalized against column 0, so the recovered sigma is 1 and
        // the reported pair satisfies `A(z^n) = sigma z0^n psi` exactly.
        return match classify_functional(&rho, shifted, tol) {
            Some(eval) => H2Classification::Rank1 {
                eval,
                psi,
                truncation,
            },
            None => match falsify_h2(a, shifted, budget, seed) {
                Some((witness, image)) => H2Classification::NotPreserving {
                    witness,
                    image,
                    truncation,
                },
                None => H2Classification::Inconclusive {
                    report: "rank-1 functional is not a point evaluation of the admissible form"
                        .into(),
                    truncation,
                },
            },
        };
    }

    let inconclusive_or_witness = |report: String| match falsify_h2(a, shifted, budget, seed) {
        Some((witness, image)) => H2Classification::NotPreserving {
            witness,
            image,
            truncation,
        },
        None => H2Classification::Inconclusive { report, truncation },
    };

    let phi = match psi.is_zero() {
        true => return inconclusive_or_witness("zeroeth column vanished at rank >= 2".into()),
        false => match a.column(1).divide_exact(&psi, tol) {
            Ok(Some(q)) => q,
            Ok(None) => {
                return inconclusive_or_witness(
                    "first column is not a polynomial multiple of the zeroeth at this truncation"
                        .into(),
                )
            }
            Err(e) => return inconclusive_or_witness(format!("division failed: {e}")),
        },
    };

    // Cross-relation at truncation.
    let mut residuals = Vec::new();
    let mut lhs_power = psi.clone();
    let mut rhs_power = a.column(1) * a.column(1);
    for n in 2..=a.source_bound() {
        let lhs = &lhs_power * a.column(n);
        let scale = lhs.max_coeff_norm().max(rhs_power.max_coeff_norm()).max(1e-300);
        let residual = (&lhs - &rhs_power).max_coeff_norm() / scale;
        residuals.push(residual);
        if residual > tol {
            return inconclusive_or_witness(format!(
                "cross-relation failed at column {n} (residual {residual:.3e})"
            ));
        }
        lhs_power = &lhs_power * &psi;
        rhs_power = &rhs_power * a.column(1);
    }

    // phi must fix the disk: circle-grid supremum plus derivative pad.
    let k = DEFAULT_JENSEN_SAMPLES;
    let radius = 1.0 - 1.0 / k as f64;
    let lip: f64 = phi
        .coeffs()
        .iter()
        .enumerate()
        .skip(1)
        .map(|(n, c)| n as f64 * c.norm())
        .sum();
    let mut sup: f64 = 0.0;
    for j in 0..k {
        let angle = 2.0 * std::f64::consts::PI * j as f64 / k as f64;
        sup = sup.max(phi.eval(Complex64::from_polar(radius, angle)).norm());
    }
    let sup_bound = (sup + lip * (1.0 / k as f64 + std::f64::consts::PI / k as f64))
        .min(phi.coeffs().iter().map(|c| c.norm()).sum());
    if sup_bound > 1.0 + tol {
        return inconclusive_or_witness(format!(
            "recovered symbol does not fix the disk (sup bound {sup_bound:.6})"
        ));
    }

    if shifted && shifted_outer_decompose(&H2Trunc::from_poly(&phi), tol).is_none() {
        return inconclusive_or_witness("recovered symbol is not shifted outer".into());
    }

    H2Classification::ProductComposition {
        psi,
        phi,
        residuals,
        truncation,
    }
}

fn passes_mode(p: &ComplexPoly, shifted: bool, tol: f64) -> bool {
    if shifted {
        shifted_outer_decompose(&H2Trunc::from_poly(p), tol).is_some()
    } else {
        matches!(
            root_outer_test(p),
            Ok(OuterReport {
                verdict: OuterVerdict::Outer,
                ..
            })
        )
    }
}

/// Clear failure of the mode's outer test: some root lies deeper than `band`
/// inside the disk. Roots within `band` of the circle do not count, so a
/// preserver whose images have circle roots cannot be falsely witnessed.
fn clearly_fails_mode(p: &ComplexPoly, shifted: bool, tol: f64, band: f64) -> bool {
    let data = H2Trunc::from_poly(p);
    let threshold = tol * data.norm();
    let shift = if shifted {
        data.coeffs
            .iter()
            .position(|c| c.norm() > threshold)
            .unwrap_or(data.coeffs.len())
    } else {
        0
    };
    if shift >= data.coeffs.len() {
        return false;
    }
    let rest = ComplexPoly::new(data.coeffs[shift..].to_vec());
    matches!(
        root_outer_test_with_band(&rest, band),
        Ok(OuterReport {
            verdict: OuterVerdict::NotOuter,
            ..
        })
    )
}

/// Random search for an outer (or shifted-outer) polynomial whose image
/// fails the same test.
fn falsify_h2(
    a: &OperatorTruncation,
    shifted: bool,
    budget: usize,
    seed: u64,
) -> Option<(ComplexPoly, ComplexPoly)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for draw in 0..budget {
        let degree = draw % (a.source_bound() + 1);
        let shift = if shifted { draw % 3 } else { 0 };
        if degree + shift > a.source_bound() {
            continue;
        }
        let mut roots = Vec::with_capacity(degree);
        for _ in 0..degree {
            let radius = rng.gen_range(1.05..3.0);
            let angle = rng.gen_range(0.0..2.0 * std::f64::consts::PI);
            roots.push(Complex64::from_polar(radius, angle));
        }
        let outer_part = ComplexPoly::from_roots(Complex64::new(1.0, 0.0), &roots);
        let candidate = &ComplexPoly::monomial(Complex64::new(1.0, 0.0), shift) * &outer_part;
        debug_assert!(passes_mode(&candidate, shifted, 1e-9));
        let image = match a.apply(&candidate) {
            Ok(image) => image,
            Err(_) => continue,
        };
        // Preservation here has no zero escape hatch: a vanished image is a
        // violation. Non-zero images count only when they clearly fail.
        if image.is_zero() || clearly_fails_mode(&image, shifted, 1e-9, 1e-9) {
            return Some((candidate, image));
        }
    }
    None
}

/// Instance report for the product implication: if `f` and `f * g` are both
/// shifted outer, then `g` must be.
#[derive(Debug, Clone, PartialEq)]
pub struct ShiftedProductReport {
    pub f_shifted_outer: bool,
    pub fg_shifted_outer: bool,
    pub g_shifted_outer: bool,
    pub violation: bool,
}

pub fn shifted_product_check(f: &H2Trunc, g: &H2Trunc, tol: f64) -> ShiftedProductReport {
    let product = H2Trunc::from_poly(&(&f.to_poly() * &g.to_poly()));
    let f_in = shifted_outer_decompose(f, tol).is_some();
    let fg_in = shifted_outer_decompose(&product, tol).is_some();
    let g_in = shifted_outer_decompose(g, tol).is_some();
    ShiftedProductReport {
        f_shifted_outer: f_in,
        fg_shifted_outer: fg_in,
        g_shifted_outer: g_in,
        violation: f_in && fg_in && !g_in,
    }
}

/// Rank-one operator `f -> sigma f(z0) psi` expressed in monomial columns:
/// convenience constructor for the Hardy setting.
pub fn make_point_evaluation_operator(
    eval: &PointEvaluation,
    psi: &ComplexPoly,
    n: usize,
) -> OperatorTruncation {
    let values: Vec<Complex64> = (0..=n)
        .map(|k| eval.sigma * eval.z0.powu(k as u32))
        .collect();
    crate::operator::make_rank1(&values, psi, n)
}

/// Stability-style wrapper so callers can reuse region machinery on signals.
pub fn signal_stability(s: &Signal) -> Result<StabilityVerdict, HardyError> {
    if s.samples.iter().all(|c| c.norm_sqr() == 0.0) {
        return Err(HardyError::ZeroSignal);
    }
    Ok(Region::open_unit_disk().is_stable(&s.z_transform())?)
}
