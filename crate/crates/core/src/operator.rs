//! Finite truncations of linear operators on polynomials.
//!
//! An operator is stored column-wise: column `n` is the image of the monomial
//! `z^n`, for `0 <= n <= N`. Linearity is then exact by construction, and the
//! moment sequence of the operator is just its column list. Truncation bounds
//! are explicit: applying to a polynomial of degree above `N`, or composing
//! past the target bound, is an error rather than a silent cut.

use crate::linalg::column_rank;
use crate::poly::ComplexPoly;
use num_complex::Complex64;
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

#[derive(Debug, Clone, Error, PartialEq)]
pub enum OperatorError {
    #[error("polynomial degree {degree} exceeds the operator source bound {bound}")]
    DegreeOverflow { degree: usize, bound: usize },
    #[error("dilation factor must be nonzero")]
    TauZero,
}

/// Truncation of a linear operator `A`: column `n` holds `A(z^n)`.
#[derive(Debug, Clone, PartialEq)]
pub struct OperatorTruncation {
    columns: Vec<ComplexPoly>,
    max_target_degree: usize,
}

/// The moment sequence of an operator: entry `n` is the image of `z^n`.
#[derive(Debug, Clone, PartialEq)]
pub struct MomentSequence {
    pub psi: Vec<ComplexPoly>,
}

impl OperatorTruncation {
    /// Builds a truncation from monomial images. The target bound is the
    /// largest column degree.
    pub fn from_columns(columns: Vec<ComplexPoly>) -> Self {
        assert!(!columns.is_empty(), "an operator needs at least column 0");
        let max_target_degree = columns
            .iter()
            .filter_map(|c| c.degree())
            .max()
            .unwrap_or(0);
        OperatorTruncation {
            columns,
            max_target_degree,
        }
    }

    pub fn identity(n: usize) -> Self {
        Self::from_columns(
            (0..=n)
                .map(|k| ComplexPoly::monomial(Complex64::new(1.0, 0.0), k))
                .collect(),
        )
    }

    pub fn zero(n: usize) -> Self {
        Self::from_columns(vec![ComplexPoly::zero(); n + 1])
    }

    /// Source degree bound `N`.
    pub fn source_bound(&self) -> usize {
        self.columns.len() - 1
    }

    /// Target degree bound `M`.
    pub fn max_target_degree(&self) -> usize {
        self.max_target_degree
    }

    pub fn columns(&self) -> &[ComplexPoly] {
        &self.columns
    }

    pub fn column(&self, n: usize) -> &ComplexPoly {
        &self.columns[n]
    }

    /// Applies the operator: `sum_n p_n * column_n`.
    pub fn apply(&self, p: &ComplexPoly) -> Result<ComplexPoly, OperatorError> {
        let bound = self.source_bound();
        if let Some(d) = p.degree() {
            if d > bound {
                return Err(OperatorError::DegreeOverflow { degree: d, bound });
            }
        }
        let mut acc = ComplexPoly::zero();
        for (n, column) in self.columns.iter().enumerate() {
            let a = p.coeff(n);
            if a.norm_sqr() != 0.0 {
                acc = &acc + &column.scale(a);
            }
        }
        Ok(acc)
    }

    pub fn moments(&self) -> MomentSequence {
        MomentSequence {
            psi: self.columns.clone(),
        }
    }

    /// Numerical rank of the coefficient matrix (columns flattened), with
    /// pivots below `tol` relative to the largest dropped.
    pub fn rank_estimate(&self, tol: f64) -> usize {
        let cols: Vec<Vec<Complex64>> = self
            .columns
            .iter()
            .map(|c| c.coeffs().to_vec())
            .collect();
        column_rank(&cols, tol)
    }

    /// True iff column 0 is the constant 1 and columns multiply like
    /// monomial images of an algebra homomorphism:
    /// `column(m + n) = column(m) * column(n)` for all `m + n <= N`.
    pub fn is_algebra_homomorphism(&self, tol: f64) -> bool {
        let n = self.source_bound();
        let one = ComplexPoly::one();
        if !poly_close(&self.columns[0], &one, tol) {
            return false;
        }
        for m in 1..=n {
            for k in m..=n {
                if m + k > n {
                    break;
                }
                let product = &self.columns[m] * &self.columns[k];
                if !poly_close(&self.columns[m + k], &product, tol) {
                    return false;
                }
            }
        }
        true
    }
}

fn poly_close(a: &ComplexPoly, b: &ComplexPoly, tol: f64) -> bool {
    let diff = a - b;
    let scale = 1.0 + a.max_coeff_norm().max(b.max_coeff_norm());
    diff.max_coeff_norm() <= tol * scale
}

/// `M_psi C_phi` truncated at source degree `n`: column `k = psi * phi^k`.
pub fn make_product_composition(
    psi: &ComplexPoly,
    phi: &ComplexPoly,
    n: usize,
) -> OperatorTruncation {
    let mut columns = Vec::with_capacity(n + 1);
    let mut power = ComplexPoly::one();
    for k in 0..=n {
        if k > 0 {
            power = &power * phi;
        }
        columns.push(psi * &power);
    }
    OperatorTruncation::from_columns(columns)
}

/// Rank-one operator `f -> nu(f) psi`, with the functional given by its
/// monomial values `nu(z^n)`.
pub fn make_rank1(nu: &[Complex64], psi: &ComplexPoly, n: usize) -> OperatorTruncation {
    assert_eq!(nu.len(), n + 1, "need nu(z^k) for every k <= N");
    OperatorTruncation::from_columns(nu.iter().map(|&v| psi.scale(v)).collect())
}

/// Dilation `(D_tau p)(z) = p(tau z)`: column `n = tau^n z^n`.
pub fn make_dilation(tau: Complex64, n: usize) -> Result<OperatorTruncation, OperatorError> {
    if tau.norm_sqr() == 0.0 {
        return Err(OperatorError::TauZero);
    }
    let mut columns = Vec::with_capacity(n + 1);
    let mut factor = Complex64::new(1.0, 0.0);
    for k in 0..=n {
        columns.push(ComplexPoly::monomial(factor, k));
        factor *= tau;
    }
    Ok(OperatorTruncation::from_columns(columns))
}

/// Product-composition-differential operator `M_psi C_phi D^m`:
/// column `k = psi * ((d/dz)^m z^k)(phi)`.
pub fn make_pcd(
    psi: &ComplexPoly,
    phi: &ComplexPoly,
    n_deriv: usize,
    n: usize,
) -> OperatorTruncation {
    let mut columns = Vec::with_capacity(n + 1);
    for k in 0..=n {
        let mut monomial = ComplexPoly::monomial(Complex64::new(1.0, 0.0), k);
        for _ in 0..n_deriv {
            monomial = monomial.derivative();
        }
        columns.push(psi * &monomial.compose(phi));
    }
    OperatorTruncation::from_columns(columns)
}

/// Operator composition `(A o B)`: column `n = A(B(z^n))`. Requires the
/// target bound of `B` to fit inside the source bound of `A`.
pub fn compose_operators(
    a: &OperatorTruncation,
    b: &OperatorTruncation,
) -> Result<OperatorTruncation, OperatorError> {
    if b.max_target_degree() > a.source_bound() {
        return Err(OperatorError::DegreeOverflow {
            degree: b.max_target_degree(),
            bound: a.source_bound(),
        });
    }
    let columns = b
        .columns
        .iter()
        .map(|col| a.apply(col))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(OperatorTruncation::from_columns(columns))
}

// JSON form: {"N": int, "columns": [poly, ...]}.
impl Serialize for OperatorTruncation {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Repr<'a> {
            #[serde(rename = "N")]
            n: usize,
            columns: &'a [ComplexPoly],
        }
        Repr {
            n: self.source_bound(),
            columns: &self.columns,
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for OperatorTruncation {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Repr {
            #[serde(rename = "N")]
            n: usize,
            columns: Vec<ComplexPoly>,
        }
        let repr = Repr::deserialize(deserializer)?;
        if repr.columns.is_empty() {
            return Err(D::Error::custom("operator needs at least column 0"));
        }
        if repr.columns.len() != repr.n + 1 {
            return Err(D::Error::custom(format!(
                "declared N = {} but {} columns given",
                repr.n,
                repr.columns.len()
            )));
        }
        Ok(OperatorTruncation::from_columns(repr.columns))
    }
}
