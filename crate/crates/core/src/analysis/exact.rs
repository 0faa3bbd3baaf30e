//! Exact rational verification of the double-sum rearrangement identity
//!
//! ```text
//! sum_{m=0}^{n} sum_{j=0}^{m} c_{2m-j} (2m-j)! / (j! (m-j)! (n-m)!) 2^j b^{j+2n-2m}
//!   = sum_{j=0}^{2n} c_{2n-j} (2n)! / (j! n!) b^j
//! ```
//!
//! This is the one statement in the crate that is checked in exact
//! arithmetic: both sides are evaluated over arbitrary-precision rationals
//! and compared for literal equality, with no tolerance anywhere.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

/// Convenience constructor for exact rationals.
pub fn rational(numerator: i64, denominator: i64) -> BigRational {
    BigRational::new(BigInt::from(numerator), BigInt::from(denominator))
}

fn factorial(n: usize) -> BigInt {
    let mut acc = BigInt::one();
    for k in 2..=n {
        acc *= BigInt::from(k);
    }
    acc
}

fn pow_rational(base: &BigRational, exp: usize) -> BigRational {
    let mut acc = BigRational::one();
    for _ in 0..exp {
        acc *= base;
    }
    acc
}

/// Evaluates both sides of the identity for the given coefficient prefix and
/// base point; `coeffs` must supply at least `2n + 1` entries.
pub fn combinatorial_identity_check(n: usize, coeffs: &[BigRational], beta: &BigRational) -> bool {
    assert!(
        coeffs.len() > 2 * n,
        "need at least {} coefficients, got {}",
        2 * n + 1,
        coeffs.len()
    );

    let mut lhs = BigRational::zero();
    for m in 0..=n {
        for j in 0..=m {
            let numer = factorial(2 * m - j) * BigInt::from(2).pow(j as u32);
            let denom = factorial(j) * factorial(m - j) * factorial(n - m);
            let term = BigRational::new(numer, denom)
                * &coeffs[2 * m - j]
                * pow_rational(beta, j + 2 * n - 2 * m);
            lhs += term;
        }
    }

    let mut rhs = BigRational::zero();
    let two_n_fact = factorial(2 * n);
    let n_fact = factorial(n);
    for j in 0..=2 * n {
        let term = BigRational::new(two_n_fact.clone(), factorial(j) * n_fact.clone())
            * &coeffs[2 * n - j]
            * pow_rational(beta, j);
        rhs += term;
    }

    lhs == rhs
}
