//! The second companion function of a rank-two-or-higher operator.
//!
//! Writing the first characteristic function in Weierstrass form factors it
//! into a canonical product `q(w) = sum c_n w^n` and an exponential carried
//! by the zeroeth moment and the moment ratio `beta = psi_1 / psi_0`. The
//! companion function rescales the second characteristic function by
//! `e^{-w beta^2} / psi_0`; for genuine product-composition operators it is
//! identically 1. Three algebraic arrangements of the same double series are
//! exposed so they can be cross-checked numerically.
//!
//! The exponential prefactor is always carried as `psi_0` itself; no
//! logarithm is ever taken, so there are no branch cuts to track.

use super::charfn::square_grid;
use super::{factorials, AnalysisError};
use crate::operator::OperatorTruncation;
use crate::poly::ComplexPoly;
use num_complex::Complex64;

#[derive(Debug, Clone)]
pub struct CompanionData {
    /// Zeroeth moment; stands in for the exponential factor.
    pub psi0: ComplexPoly,
    /// First moment; `beta = psi1 / psi0` is evaluated as a ratio and only
    /// where `psi0` does not vanish.
    pub psi1: ComplexPoly,
    /// Truncation order in `w`.
    pub order: usize,
    /// Canonical-product coefficients `c_0..c_{2T}` recovered from the
    /// moments at the reference point.
    pub q_coeffs: Vec<Complex64>,
    /// Reference point used for the recovery.
    pub z_ref: Complex64,
    /// `g_w[n][j]` weights: the coefficient of `w^n/n!` is
    /// `sum_j g_w[n][j] beta(z)^j`.
    g_w: Vec<Vec<Complex64>>,
    factorial: Vec<f64>,
}

/// Builds the companion data of `a` at truncation order `t`, recovering the
/// canonical-product coefficients from the moments at a reference point.
pub fn second_companion(
    a: &OperatorTruncation,
    t: usize,
) -> Result<CompanionData, AnalysisError> {
    if a.source_bound() < 2 * t {
        return Err(AnalysisError::TruncationTooDeep {
            needed: 2 * t,
            available: a.source_bound(),
        });
    }
    let rank = a.rank_estimate(1e-10);
    if rank < 2 {
        return Err(AnalysisError::RankTooLow { rank });
    }
    let psi0 = a.column(0).clone();
    if psi0.is_zero() {
        return Err(AnalysisError::Psi0Zero);
    }
    let psi1 = a.column(1).clone();

    // Reference point: where |psi0| is largest on a small disk grid.
    let z_ref = square_grid(0.75, 17)
        .into_iter()
        .max_by(|&x, &y| {
            psi0.eval(x)
                .norm()
                .partial_cmp(&psi0.eval(y).norm())
                .unwrap()
        })
        .expect("grid is nonempty");

    let depth = 2 * t;
    let fact = factorials(depth.max(1));
    let psi0_ref = psi0.eval(z_ref);
    let beta_ref = psi1.eval(z_ref) / psi0_ref;

    // Invert the moment formula at the reference point:
    // psi_n/psi_0 = n! sum_{j<=n} c_{n-j} beta^j / j!.
    let mut q_coeffs = vec![Complex64::new(0.0, 0.0); depth + 1];
    q_coeffs[0] = Complex64::new(1.0, 0.0);
    for n in 1..=depth {
        let ratio = a.column(n).eval(z_ref) / psi0_ref;
        let mut correction = Complex64::new(0.0, 0.0);
        let mut beta_j = Complex64::new(1.0, 0.0);
        for j in 1..=n {
            beta_j *= beta_ref;
            correction += q_coeffs[n - j] * beta_j / fact[j];
        }
        q_coeffs[n] = ratio / fact[n] - correction;
    }

    // Weights of the power-series-in-w arrangement.
    let mut g_w = Vec::with_capacity(t + 1);
    for n in 0..=t {
        let mut row = Vec::with_capacity(n + 1);
        for j in 0..=n {
            let binom = fact[n] / (fact[j] * fact[n - j]);
            row.push(q_coeffs[2 * n - j] * fact[2 * n - j] * binom * 2f64.powi(j as i32));
        }
        g_w.push(row);
    }

    Ok(CompanionData {
        psi0,
        psi1,
        order: t,
        q_coeffs,
        z_ref,
        g_w,
        factorial: fact,
    })
}

impl CompanionData {
    pub fn beta(&self, z: Complex64) -> Complex64 {
        self.psi1.eval(z) / self.psi0.eval(z)
    }

    /// Power series in `w`: coefficient of `w^n/n!` is a polynomial in
    /// `2 beta`.
    pub fn eval_w_series(&self, z: Complex64, w: Complex64) -> Complex64 {
        let beta = self.beta(z);
        let mut acc = Complex64::new(0.0, 0.0);
        let mut wn = Complex64::new(1.0, 0.0);
        for (n, row) in self.g_w.iter().enumerate() {
            let mut inner = Complex64::new(0.0, 0.0);
            let mut bj = Complex64::new(1.0, 0.0);
            for weight in row {
                inner += weight * bj;
                bj *= beta;
            }
            acc += inner * wn / self.factorial[n];
            wn *= w;
        }
        acc
    }

    /// Power series in `beta`: coefficient of `beta^m/m!` is `(2w)^m` times a
    /// series in `w`.
    pub fn eval_beta_series(&self, z: Complex64, w: Complex64) -> Complex64 {
        let beta = self.beta(z);
        let depth = 2 * self.order;
        let mut acc = Complex64::new(0.0, 0.0);
        for m in 0..=depth {
            let mut inner = Complex64::new(0.0, 0.0);
            let mut wn = Complex64::new(1.0, 0.0);
            let mut n = 0;
            while m + 2 * n <= depth {
                inner += self.q_coeffs[m + 2 * n] * self.factorial[m + 2 * n] * wn
                    / self.factorial[n];
                wn *= w;
                n += 1;
            }
            let prefactor = (w * 2.0).powu(m as u32) * beta.powu(m as u32) / self.factorial[m];
            acc += prefactor * inner;
        }
        acc
    }

    /// Raw double sum over the same index set as the beta arrangement.
    pub fn eval_double_sum(&self, z: Complex64, w: Complex64) -> Complex64 {
        let beta = self.beta(z);
        let depth = 2 * self.order;
        let mut acc = Complex64::new(0.0, 0.0);
        for m in 0..=depth {
            let mut n = 0;
            while m + 2 * n <= depth {
                let weight = self.q_coeffs[m + 2 * n] * self.factorial[m + 2 * n]
                    / (self.factorial[m] * self.factorial[n]);
                acc += weight * (beta * 2.0).powu(m as u32) * w.powu((m + n) as u32);
                n += 1;
            }
        }
        acc
    }
}
