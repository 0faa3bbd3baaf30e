//! Characteristic functions of an operator.
//!
//! The k-th characteristic function collects every k-th moment into an
//! exponential generating function of the auxiliary variable `w`. At
//! truncation order `T` the series tail is controlled by the moment bound
//! `|psi_kn(z)| <= 3 |psi_0(z)|`, giving the computable tail estimate
//! `3 |psi_0(z)| |w|^{T+1} e^{|w|} / (T+1)!`. Every zero-freeness statement
//! made here is asserted only above that tail.

use super::{factorials, AnalysisError};
use crate::operator::OperatorTruncation;
use crate::poly::ComplexPoly;
use num_complex::Complex64;

/// Truncation of a characteristic function: entry `n` of `coeff_polys` is the
/// moment of index `k * n`.
#[derive(Debug, Clone)]
pub struct CharFnTruncation {
    pub k: usize,
    pub order: usize,
    coeff_polys: Vec<ComplexPoly>,
    factorial: Vec<f64>,
}

impl CharFnTruncation {
    pub fn coeff_polys(&self) -> &[ComplexPoly] {
        &self.coeff_polys
    }

    /// `sum_{n<=T} psi_{kn}(z) w^n / n!`.
    pub fn eval(&self, z: Complex64, w: Complex64) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        let mut wn = Complex64::new(1.0, 0.0);
        for (n, poly) in self.coeff_polys.iter().enumerate() {
            acc += poly.eval(z) * wn / self.factorial[n];
            wn *= w;
        }
        acc
    }

    /// Tail estimate for the discarded part of the series at the given
    /// magnitudes.
    pub fn tail_bound(&self, psi0_abs: f64, w_abs: f64) -> f64 {
        let t = self.order;
        3.0 * psi0_abs * w_abs.powi(t as i32 + 1) * w_abs.exp()
            / (self.factorial[t] * (t as f64 + 1.0))
    }
}

/// The k-th characteristic function of `a`, truncated at order `t` in `w`.
pub fn char_fn(
    a: &OperatorTruncation,
    k: usize,
    t: usize,
) -> Result<CharFnTruncation, AnalysisError> {
    assert!(k >= 1, "characteristic functions are indexed from 1");
    if a.source_bound() < k * t {
        return Err(AnalysisError::TruncationTooDeep {
            needed: k * t,
            available: a.source_bound(),
        });
    }
    let coeff_polys = (0..=t).map(|n| a.column(k * n).clone()).collect();
    Ok(CharFnTruncation {
        k,
        order: t,
        coeff_polys,
        factorial: factorials(t + 1),
    })
}

/// Diagnostic sweep of `|F(z, w0)|` across a grid of `z` values; the zero set
/// of a characteristic function does not depend on `z`, so the minimum is
/// either uniformly near zero or bounded away from it, up to the tail.
#[derive(Debug, Clone, PartialEq)]
pub struct ZeroProbeReport {
    pub min_abs: f64,
    pub max_abs: f64,
    pub tail_bound: f64,
}

pub fn zero_independence_probe(
    f: &CharFnTruncation,
    w0: Complex64,
    zgrid: &[Complex64],
) -> ZeroProbeReport {
    assert!(!zgrid.is_empty(), "probe needs at least one grid point");
    let mut min_abs = f64::INFINITY;
    let mut max_abs: f64 = 0.0;
    let mut max_psi0: f64 = 0.0;
    for &z in zgrid {
        let v = f.eval(z, w0).norm();
        min_abs = min_abs.min(v);
        max_abs = max_abs.max(v);
        max_psi0 = max_psi0.max(f.coeff_polys[0].eval(z).norm());
    }
    ZeroProbeReport {
        min_abs,
        max_abs,
        tail_bound: f.tail_bound(max_psi0, w0.norm()),
    }
}

/// Scan of the second characteristic function over a grid of `(z, w)` pairs.
#[derive(Debug, Clone, PartialEq)]
pub struct F2ScanReport {
    pub min_abs: f64,
    pub tail_bound: f64,
    /// Whether the scan certifies zero-freeness above the truncation tail.
    pub zero_free: bool,
}

pub fn f2_zero_scan(
    a: &OperatorTruncation,
    t: usize,
    grid: &[(Complex64, Complex64)],
) -> Result<F2ScanReport, AnalysisError> {
    let f2 = char_fn(a, 2, t)?;
    let mut min_abs = f64::INFINITY;
    let mut tail: f64 = 0.0;
    for &(z, w) in grid {
        min_abs = min_abs.min(f2.eval(z, w).norm());
        tail = tail.max(f2.tail_bound(f2.coeff_polys[0].eval(z).norm(), w.norm()));
    }
    Ok(F2ScanReport {
        min_abs,
        tail_bound: tail,
        zero_free: min_abs > tail,
    })
}

/// A deterministic rectangular grid of `(z, w)` pairs with `|z| <= z_radius`
/// and `|w| <= w_radius`, suitable for the scans above.
pub fn default_zw_grid(
    z_radius: f64,
    w_radius: f64,
    per_axis: usize,
) -> Vec<(Complex64, Complex64)> {
    let zs = square_grid(z_radius, per_axis);
    let ws = square_grid(w_radius, per_axis);
    zs.iter()
        .flat_map(|&z| ws.iter().map(move |&w| (z, w)))
        .collect()
}

pub fn square_grid(radius: f64, per_axis: usize) -> Vec<Complex64> {
    let per_axis = per_axis.max(2);
    let mut out = Vec::new();
    for i in 0..per_axis {
        for j in 0..per_axis {
            let x = -radius + 2.0 * radius * (i as f64 + 0.5) / per_axis as f64;
            let y = -radius + 2.0 * radius * (j as f64 + 0.5) / per_axis as f64;
            let z = Complex64::new(x, y);
            if z.norm() <= radius {
                out.push(z);
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operator::{make_product_composition, make_rank1, OperatorTruncation};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn first_char_fn_of_squaring_composition() {
        // A = C_{z^2}: psi_{n} = z^{2n}, so F_1(z, w) ~ e^{z^2 w}.
        let a = make_product_composition(
            &ComplexPoly::one(),
            &ComplexPoly::monomial(c(1.0, 0.0), 2),
            12,
        );
        let f1 = char_fn(&a, 1, 12).unwrap();
        let z = c(0.4, 0.2);
        let w = c(0.7, -0.3);
        let expected = (z * z * w).exp();
        assert!((f1.eval(z, w) - expected).norm() < 1e-10);
    }

    #[test]
    fn identity_char_fn_is_exponential() {
        let id = OperatorTruncation::identity(14);
        let f1 = char_fn(&id, 1, 14).unwrap();
        let z = c(0.5, -0.1);
        let w = c(1.0, 0.5);
        assert!((f1.eval(z, w) - (z * w).exp()).norm() < 1e-9);
    }

    #[test]
    fn rank1_char_fn_is_constant_in_w() {
        let psi = ComplexPoly::from_real(&[1.0, -0.5]);
        let nu: Vec<Complex64> = std::iter::once(c(1.0, 0.0))
            .chain(std::iter::repeat_n(c(0.0, 0.0), 6))
            .collect();
        let a = make_rank1(&nu, &psi, 6);
        let f1 = char_fn(&a, 1, 6).unwrap();
        let z = c(0.3, 0.3);
        assert!((f1.eval(z, c(5.0, 1.0)) - psi.eval(z)).norm() < 1e-12);
    }

    #[test]
    fn truncation_depth_is_checked() {
        let id = OperatorTruncation::identity(5);
        assert!(matches!(
            char_fn(&id, 2, 3),
            Err(AnalysisError::TruncationTooDeep { needed: 6, available: 5 })
        ));
    }

    #[test]
    fn zero_probe_examples() {
        let a = make_product_composition(
            &ComplexPoly::one(),
            &ComplexPoly::monomial(c(1.0, 0.0), 2),
            12,
        );
        let f1 = char_fn(&a, 1, 12).unwrap();
        let grid = square_grid(0.5, 8);

        // At w = 0 the probe sees psi_0 = 1 exactly.
        let report = zero_independence_probe(&f1, c(0.0, 0.0), &grid);
        assert!((report.min_abs - 1.0).abs() < 1e-12);
        assert!((report.max_abs - 1.0).abs() < 1e-12);

        // Same for the identity operator.
        let id_probe = zero_independence_probe(
            &char_fn(&OperatorTruncation::identity(8), 1, 8).unwrap(),
            c(0.0, 0.0),
            &grid,
        );
        assert!((id_probe.min_abs - 1.0).abs() < 1e-12);
        assert!((id_probe.max_abs - 1.0).abs() < 1e-12);

        // At w = 1 the function is e^{z^2}, whose modulus on |z| <= 0.5 is at
        // least e^{-1/4}.
        let report = zero_independence_probe(&f1, c(1.0, 0.0), &grid);
        assert!(report.min_abs >= (-0.25f64).exp() - report.tail_bound);
    }

    #[test]
    fn f2_scan_examples() {
        // F_2 of C_{z^2} is e^{z^4 w}; well away from zero on a small grid.
        let a = make_product_composition(
            &ComplexPoly::one(),
            &ComplexPoly::monomial(c(1.0, 0.0), 2),
            16,
        );
        let grid = default_zw_grid(0.5, 1.0, 8);
        let report = f2_zero_scan(&a, 8, &grid).unwrap();
        assert!(report.zero_free);
        assert!(report.min_abs >= (-1.25f64).exp() - report.tail_bound);

        // F_2(z, 0) = psi_0(z).
        let psi = ComplexPoly::from_real(&[2.0, -1.0]);
        let a = make_product_composition(&psi, &ComplexPoly::monomial(c(1.0, 0.0), 1), 16);
        let f2 = char_fn(&a, 2, 8).unwrap();
        let z = c(0.25, 0.1);
        assert!((f2.eval(z, c(0.0, 0.0)) - psi.eval(z)).norm() < 1e-13);

        // Identity operator: F_2 = e^{z^2 w} > 0.
        let id = OperatorTruncation::identity(16);
        let report = f2_zero_scan(&id, 8, &grid).unwrap();
        assert!(report.zero_free);
    }
}
