//! Truncated canonical products `prod_n e^{w/w_n} (1 - w/w_n)`.
//!
//! Each factor expands as `1 + sum_{m>=2} (1-m)/m! (w/w_n)^m`, so the product
//! has constant term 1 and no linear term, and its Taylor coefficients obey
//! `|c_n| <= (gamma + |sigma|)^n / n!` where `gamma = sum 1/|w_n|` and
//! `sigma = sum 1/w_n`.

use super::{factorials, AnalysisError};
use num_complex::Complex64;

#[derive(Debug, Clone, PartialEq)]
pub struct CanonicalProduct {
    pub zeros: Vec<Complex64>,
    /// Truncation order: coefficients are kept for powers `0..=order`.
    pub order: usize,
    /// Taylor coefficients `c_0..c_T` of the product.
    pub coeffs: Vec<Complex64>,
    /// `sum 1/|w_n|`.
    pub inv_abs_sum: f64,
    /// `sum 1/w_n`.
    pub inv_sum: Complex64,
}

pub fn canonical_product(
    zeros: &[Complex64],
    order: usize,
) -> Result<CanonicalProduct, AnalysisError> {
    if zeros.iter().any(|w| w.norm_sqr() == 0.0) {
        return Err(AnalysisError::ZeroAtOrigin);
    }
    let fact = factorials(order);
    let mut coeffs = vec![Complex64::new(0.0, 0.0); order + 1];
    coeffs[0] = Complex64::new(1.0, 0.0);
    let mut factor = vec![Complex64::new(0.0, 0.0); order + 1];
    for w in zeros {
        let u = w.inv();
        factor[0] = Complex64::new(1.0, 0.0);
        let mut um = Complex64::new(1.0, 0.0);
        for m in 1..=order {
            um *= u;
            factor[m] = um * ((1.0 - m as f64) / fact[m]);
        }
        // Truncated series product, low order first.
        let mut next = vec![Complex64::new(0.0, 0.0); order + 1];
        for i in 0..=order {
            if coeffs[i].norm_sqr() == 0.0 {
                continue;
            }
            for j in 0..=order - i {
                next[i + j] += coeffs[i] * factor[j];
            }
        }
        coeffs = next;
    }
    Ok(CanonicalProduct {
        zeros: zeros.to_vec(),
        order,
        coeffs,
        inv_abs_sum: zeros.iter().map(|w| 1.0 / w.norm()).sum(),
        inv_sum: zeros.iter().map(|w| w.inv()).sum(),
    })
}

impl CanonicalProduct {
    /// Checks `|c_n| <= (gamma + |sigma|)^n / n! + 1e-12` for all stored
    /// coefficients.
    pub fn coeff_bound_check(&self) -> bool {
        let base = self.inv_abs_sum + self.inv_sum.norm();
        let mut bound = 1.0;
        for (n, c) in self.coeffs.iter().enumerate() {
            if n > 0 {
                bound *= base / n as f64;
            }
            if c.norm() > bound + 1e-12 {
                return false;
            }
        }
        true
    }
}
