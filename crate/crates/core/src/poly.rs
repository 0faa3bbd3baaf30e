//! Dense univariate polynomials over the complex numbers.
//!
//! Coefficients are stored ascending in the monomial basis: index `n` holds
//! the coefficient of `z^n`. The effective degree is taken relative to the
//! largest coefficient magnitude so that dilation by `tau` (which scales
//! coefficient `n` by `tau^n`) does not spuriously change degrees.

use num_complex::Complex64;
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

/// Relative threshold below which a coefficient is treated as zero when
/// computing degrees.
pub const DEFAULT_DEG_TOL: f64 = 1e-12;

/// Roots closer than this after polishing are merged into one multiple root.
pub const ROOT_CLUSTER_TOL: f64 = 1e-7;

#[derive(Debug, Clone, Error, PartialEq)]
pub enum PolyError {
    #[error("the zero polynomial has no well-defined roots")]
    ZeroPolynomial,
    #[error("constant polynomials have no roots")]
    DegreeZero,
    #[error("root iteration did not converge: residual {residual:.3e} exceeds bound {bound:.3e}")]
    NonConvergence { residual: f64, bound: f64 },
    #[error("division by the zero polynomial")]
    DivisorZero,
}

/// A polynomial with complex coefficients, dense ascending.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexPoly {
    coeffs: Vec<Complex64>,
}

impl ComplexPoly {
    pub fn new(coeffs: Vec<Complex64>) -> Self {
        ComplexPoly { coeffs }
    }

    pub fn from_real(coeffs: &[f64]) -> Self {
        ComplexPoly {
            coeffs: coeffs.iter().map(|&c| Complex64::new(c, 0.0)).collect(),
        }
    }

    pub fn zero() -> Self {
        ComplexPoly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(Complex64::new(1.0, 0.0))
    }

    pub fn constant(c: Complex64) -> Self {
        ComplexPoly { coeffs: vec![c] }
    }

    /// The monomial `c * z^n`.
    pub fn monomial(c: Complex64, n: usize) -> Self {
        let mut coeffs = vec![Complex64::new(0.0, 0.0); n + 1];
        coeffs[n] = c;
        ComplexPoly { coeffs }
    }

    /// The linear factor `z - r`.
    pub fn linear_from_root(r: Complex64) -> Self {
        ComplexPoly {
            coeffs: vec![-r, Complex64::new(1.0, 0.0)],
        }
    }

    /// `lead * prod (z - r_k)`, multiplied out.
    pub fn from_roots(lead: Complex64, roots: &[Complex64]) -> Self {
        let mut p = ComplexPoly::constant(lead);
        for &r in roots {
            p = &p * &ComplexPoly::linear_from_root(r);
        }
        p
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    /// Coefficient of `z^n`, zero beyond the stored length.
    pub fn coeff(&self, n: usize) -> Complex64 {
        self.coeffs
            .get(n)
            .copied()
            .unwrap_or_else(|| Complex64::new(0.0, 0.0))
    }

    pub fn max_coeff_norm(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    pub fn l2_norm(&self) -> f64 {
        self.coeffs
            .iter()
            .map(|c| c.norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    /// Largest index whose coefficient exceeds `tol` relative to the largest
    /// coefficient magnitude; `None` for the (effective) zero polynomial.
    pub fn degree_with_tol(&self, tol: f64) -> Option<usize> {
        let max = self.max_coeff_norm();
        if max == 0.0 {
            return None;
        }
        let cut = tol * max;
        self.coeffs.iter().rposition(|c| c.norm() > cut)
    }

    pub fn degree(&self) -> Option<usize> {
        self.degree_with_tol(DEFAULT_DEG_TOL)
    }

    pub fn is_zero(&self) -> bool {
        self.degree().is_none()
    }

    /// Drops trailing coefficients below the degree tolerance.
    pub fn trimmed(&self) -> ComplexPoly {
        match self.degree() {
            None => ComplexPoly::zero(),
            Some(d) => ComplexPoly {
                coeffs: self.coeffs[..=d].to_vec(),
            },
        }
    }

    /// Horner evaluation, highest coefficient first. The order is fixed so
    /// results are deterministic.
    pub fn eval(&self, z: Complex64) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for &c in self.coeffs.iter().rev() {
            acc = acc * z + c;
        }
        acc
    }

    /// Formal derivative.
    pub fn derivative(&self) -> ComplexPoly {
        if self.coeffs.len() <= 1 {
            return ComplexPoly::zero();
        }
        ComplexPoly {
            coeffs: self
                .coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(n, c)| c * n as f64)
                .collect(),
        }
    }

    /// Composition `self(phi(z))` by Horner over polynomial arithmetic.
    pub fn compose(&self, phi: &ComplexPoly) -> ComplexPoly {
        let mut acc = ComplexPoly::zero();
        for &c in self.coeffs.iter().rev() {
            acc = &(&acc * phi) + &ComplexPoly::constant(c);
        }
        acc
    }

    pub fn scale(&self, c: Complex64) -> ComplexPoly {
        ComplexPoly {
            coeffs: self.coeffs.iter().map(|a| a * c).collect(),
        }
    }

    /// `self^k` by repeated multiplication.
    pub fn pow(&self, k: usize) -> ComplexPoly {
        let mut acc = ComplexPoly::one();
        for _ in 0..k {
            acc = &acc * self;
        }
        acc
    }

    /// Quotient candidate for division by `q`, computed from whichever end
    /// of the divisor is numerically dominant. Descending synthetic division
    /// amplifies rounding error by roughly the divisor's root magnitudes per
    /// step, so when the constant term dominates the leading one (roots
    /// outside the unit circle) both polynomials are reversed first.
    fn quotient_candidate(&self, q: &ComplexPoly) -> ComplexPoly {
        let dq = q.degree().expect("divisor must be nonzero");
        let dp = match self.degree() {
            Some(d) if d >= dq => d,
            _ => return ComplexPoly::zero(),
        };
        let p_coeffs: Vec<Complex64> = (0..=dp).map(|k| self.coeff(k)).collect();
        let q_coeffs: Vec<Complex64> = (0..=dq).map(|k| q.coeff(k)).collect();
        if q.coeff(0).norm() > q.coeff(dq).norm() {
            let p_rev: Vec<Complex64> = p_coeffs.iter().rev().copied().collect();
            let q_rev: Vec<Complex64> = q_coeffs.iter().rev().copied().collect();
            let mut quot = raw_quotient(&p_rev, &q_rev);
            quot.reverse();
            ComplexPoly::new(quot)
        } else {
            ComplexPoly::new(raw_quotient(&p_coeffs, &q_coeffs))
        }
    }

    /// Exact division: returns `r` with `self = q * r` when the remainder is
    /// small (`<= tol * ||self||` in the coefficient 2-norm), `None` otherwise.
    /// A couple of refinement passes keep ill-scaled divisors from rejecting
    /// genuinely divisible inputs.
    pub fn divide_exact(&self, q: &ComplexPoly, tol: f64) -> Result<Option<ComplexPoly>, PolyError> {
        if q.is_zero() {
            return Err(PolyError::DivisorZero);
        }
        let gate = tol * self.l2_norm().max(f64::MIN_POSITIVE);
        let mut quot = self.quotient_candidate(q);
        let mut rem = self - &(q * &quot);
        for _ in 0..2 {
            if rem.l2_norm() <= gate {
                break;
            }
            let delta = rem.quotient_candidate(q);
            if delta.is_zero() {
                break;
            }
            quot = &quot + &delta;
            rem = self - &(q * &quot);
        }
        if rem.l2_norm() <= gate {
            Ok(Some(quot.trimmed()))
        } else {
            Ok(None)
        }
    }

    /// All complex roots with multiplicities. See [`RootSet`].
    pub fn roots(&self) -> Result<RootSet, PolyError> {
        crate::roots::find_roots(self)
    }
}

/// Quotient of descending synthetic division; both inputs are exact-length
/// coefficient slices, the divisor's leading term nonzero, `p` at least as
/// long as `q`.
fn raw_quotient(p: &[Complex64], q: &[Complex64]) -> Vec<Complex64> {
    let dp = p.len() - 1;
    let dq = q.len() - 1;
    let lead = q[dq];
    let mut rem = p.to_vec();
    let mut quot = vec![Complex64::new(0.0, 0.0); dp - dq + 1];
    for k in (0..=dp - dq).rev() {
        let factor = rem[k + dq] / lead;
        quot[k] = factor;
        for j in 0..=dq {
            let t = factor * q[j];
            rem[k + j] -= t;
        }
    }
    quot
}

impl std::ops::Add for &ComplexPoly {
    type Output = ComplexPoly;
    fn add(self, rhs: &ComplexPoly) -> ComplexPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let coeffs = (0..n).map(|k| self.coeff(k) + rhs.coeff(k)).collect();
        ComplexPoly { coeffs }
    }
}

impl std::ops::Sub for &ComplexPoly {
    type Output = ComplexPoly;
    fn sub(self, rhs: &ComplexPoly) -> ComplexPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let coeffs = (0..n).map(|k| self.coeff(k) - rhs.coeff(k)).collect();
        ComplexPoly { coeffs }
    }
}

impl std::ops::Mul for &ComplexPoly {
    type Output = ComplexPoly;
    fn mul(self, rhs: &ComplexPoly) -> ComplexPoly {
        if self.coeffs.is_empty() || rhs.coeffs.is_empty() {
            return ComplexPoly::zero();
        }
        let mut coeffs = vec![Complex64::new(0.0, 0.0); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.norm_sqr() == 0.0 {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                coeffs[i + j] += a * b;
            }
        }
        ComplexPoly { coeffs }
    }
}

/// Roots of a polynomial, each with its multiplicity after clustering.
///
/// `residual` is the worst relative backward error `|p(r)| / sum |c_n||r|^n`
/// over the reported roots; `residual_bound` is the bound it was required to
/// meet before the set was accepted.
#[derive(Debug, Clone, PartialEq)]
pub struct RootSet {
    pub roots: Vec<(Complex64, usize)>,
    pub residual: f64,
    pub residual_bound: f64,
}

impl RootSet {
    /// Roots repeated according to multiplicity.
    pub fn flat(&self) -> Vec<Complex64> {
        let mut out = Vec::new();
        for &(r, m) in &self.roots {
            for _ in 0..m {
                out.push(r);
            }
        }
        out
    }

    pub fn total_multiplicity(&self) -> usize {
        self.roots.iter().map(|&(_, m)| m).sum()
    }
}

// JSON form: {"coeffs": [[re, im], ...]} ascending.
impl Serialize for ComplexPoly {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Repr<'a> {
            coeffs: &'a Vec<[f64; 2]>,
        }
        let coeffs = self.coeffs.iter().map(|c| [c.re, c.im]).collect();
        Repr { coeffs: &coeffs }.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for ComplexPoly {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Repr {
            coeffs: Vec<[f64; 2]>,
        }
        let repr = Repr::deserialize(deserializer)?;
        if repr.coeffs.iter().any(|c| !c[0].is_finite() || !c[1].is_finite()) {
            return Err(D::Error::custom("non-finite coefficient"));
        }
        Ok(ComplexPoly::new(
            repr.coeffs
                .into_iter()
                .map(|[re, im]| Complex64::new(re, im))
                .collect(),
        ))
    }
}
