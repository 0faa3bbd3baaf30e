//! Moment formulas and moment-ratio bounds.

use super::{factorials, AnalysisError};
use crate::operator::OperatorTruncation;
use crate::region::Region;
use num_complex::Complex64;

/// The bracketed moment sum `n! * sum_{j=0}^{n} c_{n-j} beta^j / j!`.
///
/// The caller supplies the zeroeth-moment value as an external factor, so
/// that the full moment is `psi_0(z)` times this quantity.
pub fn moment_formula(coeffs: &[Complex64], beta: Complex64, n: usize) -> Complex64 {
    assert!(coeffs.len() > n, "need coefficients up to index {n}");
    let fact = factorials(n);
    let mut acc = Complex64::new(0.0, 0.0);
    let mut beta_j = Complex64::new(1.0, 0.0);
    for j in 0..=n {
        acc += coeffs[n - j] * beta_j / fact[j];
        beta_j *= beta;
    }
    acc * fact[n]
}

/// Per-moment verdict of the ratio bounds: non-proportional moments must
/// satisfy `|psi_n / psi_0| < 1` on the region grid, proportional ones
/// `|psi_n / psi_0| < 3` on a unit-disk grid.
#[derive(Debug, Clone, PartialEq)]
pub struct MomentBoundEntry {
    pub n: usize,
    pub proportional: bool,
    pub max_ratio: f64,
    pub bound: f64,
    pub ok: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MomentBoundReport {
    pub entries: Vec<MomentBoundEntry>,
    pub all_ok: bool,
}

/// Checks the moment-ratio bounds of `a` over an interior grid of `omega`
/// (for moments not proportional to the zeroeth) and over a unit-disk grid
/// (for proportional ones). Rank-one operators are not an error here: all
/// their moments are proportional by construction.
pub fn moment_bound_check(
    a: &OperatorTruncation,
    omega: &Region,
    grid_density: usize,
) -> Result<MomentBoundReport, AnalysisError> {
    let psi0 = a.column(0);
    if psi0.is_zero() {
        return Err(AnalysisError::Psi0Zero);
    }
    let omega_grid = omega.interior_grid(grid_density.max(8));
    let disk_grid = Region::open_unit_disk().interior_grid(grid_density.max(8));
    for grid in [&omega_grid, &disk_grid] {
        for &z in grid.iter() {
            if psi0.eval(z).norm() < 1e-14 * (1.0 + psi0.max_coeff_norm()) {
                return Err(AnalysisError::Psi0VanishesOnGrid { at: z });
            }
        }
    }

    let mut entries = Vec::new();
    for n in 1..=a.source_bound() {
        let psi_n = a.column(n);
        let proportional = is_proportional(psi_n, psi0, 1e-9);
        let (grid, bound) = if proportional {
            (&disk_grid, 3.0)
        } else {
            (&omega_grid, 1.0)
        };
        let max_ratio = grid
            .iter()
            .map(|&z| psi_n.eval(z).norm() / psi0.eval(z).norm())
            .fold(0.0, f64::max);
        entries.push(MomentBoundEntry {
            n,
            proportional,
            max_ratio,
            bound,
            ok: max_ratio < bound,
        });
    }
    let all_ok = entries.iter().all(|e| e.ok);
    Ok(MomentBoundReport { entries, all_ok })
}

/// Least-squares proportionality test on coefficient vectors.
fn is_proportional(p: &crate::poly::ComplexPoly, base: &crate::poly::ComplexPoly, tol: f64) -> bool {
    let len = p.coeffs().len().max(base.coeffs().len());
    let mut dot = Complex64::new(0.0, 0.0);
    let mut base_norm2 = 0.0;
    for k in 0..len {
        dot += base.coeff(k).conj() * p.coeff(k);
        base_norm2 += base.coeff(k).norm_sqr();
    }
    if base_norm2 == 0.0 {
        return p.is_zero();
    }
    let lambda = dot / base_norm2;
    let mut resid2 = 0.0;
    let mut p_norm2 = 0.0;
    for k in 0..len {
        resid2 += (p.coeff(k) - lambda * base.coeff(k)).norm_sqr();
        p_norm2 += p.coeff(k).norm_sqr();
    }
    resid2.sqrt() <= tol * (1.0 + p_norm2.sqrt())
}
