//! Polynomial root finding.
//!
//! Aberth–Ehrlich simultaneous iteration with deterministic initial guesses,
//! followed by a multiplicity-aware Newton polish of each cluster
//! representative. Nothing here draws randomness, so fixed input gives a
//! fixed output.

use crate::poly::{ComplexPoly, PolyError, RootSet, DEFAULT_DEG_TOL, ROOT_CLUSTER_TOL};
use num_complex::Complex64;

const MAX_ITERS: usize = 400;
const STEP_TOL: f64 = 1e-13;

pub(crate) fn find_roots(p: &ComplexPoly) -> Result<RootSet, PolyError> {
    let deg = match p.degree_with_tol(DEFAULT_DEG_TOL) {
        None => return Err(PolyError::ZeroPolynomial),
        Some(0) => return Err(PolyError::DegreeZero),
        Some(d) => d,
    };

    // Work on the monic trim. Coefficients past the effective degree are
    // below deg_tol relative to the largest one; the trimmed polynomial is
    // the object whose roots are reported, and the residual certifies that
    // object.
    let lead = p.coeff(deg);
    let mut monic: Vec<Complex64> = (0..=deg).map(|k| p.coeff(k) / lead).collect();

    // Exact zero constant terms are roots at the origin; peel them off so the
    // iteration never has to chase a multiple root at 0.
    let mut origin_mult = 0usize;
    while monic.len() > 1 && monic[0].norm_sqr() == 0.0 {
        monic.remove(0);
        origin_mult += 1;
    }

    let d = monic.len() - 1;
    let mut approx: Vec<Complex64> = Vec::new();
    if d > 0 {
        approx = aberth(&monic, d);
    }
    for _ in 0..origin_mult {
        approx.push(Complex64::new(0.0, 0.0));
    }

    let trimmed = ComplexPoly::new(
        std::iter::repeat_n(Complex64::new(0.0, 0.0), origin_mult)
            .chain(monic.iter().copied())
            .collect(),
    );
    let trimmed_deriv = trimmed.derivative();

    // Plain Newton polish of each approximation pulls close pairs from a
    // multiple root near enough to cluster.
    for z in approx.iter_mut() {
        *z = polish(&trimmed, &trimmed_deriv, *z, 1);
    }

    // Deterministic order before clustering.
    approx.sort_by(|a, b| {
        a.re.partial_cmp(&b.re)
            .unwrap()
            .then(a.im.partial_cmp(&b.im).unwrap())
    });

    let mut clusters = cluster(&approx, ROOT_CLUSTER_TOL);
    for (root, mult) in clusters.iter_mut() {
        if *mult > 1 {
            *root = polish(&trimmed, &trimmed_deriv, *root, *mult);
        }
    }
    clusters.sort_by(|a, b| {
        a.0.re
            .partial_cmp(&b.0.re)
            .unwrap()
            .then(a.0.im.partial_cmp(&b.0.im).unwrap())
    });

    let residual = clusters
        .iter()
        .map(|&(r, _)| backward_error(&trimmed, r))
        .fold(0.0, f64::max);
    let residual_bound = (deg as f64 + 1.0) * 1e-11;
    if residual > residual_bound {
        return Err(PolyError::NonConvergence {
            residual,
            bound: residual_bound,
        });
    }

    Ok(RootSet {
        roots: clusters,
        residual,
        residual_bound,
    })
}

/// Relative backward error of a candidate root: |p(r)| / sum |c_n| |r|^n.
fn backward_error(p: &ComplexPoly, r: Complex64) -> f64 {
    let val = p.eval(r).norm();
    let mut scale = 0.0;
    let mut pw = 1.0;
    for c in p.coeffs() {
        scale += c.norm() * pw;
        pw *= r.norm();
    }
    if scale == 0.0 {
        return 0.0;
    }
    val / scale
}

fn horner_with_derivative(coeffs: &[Complex64], z: Complex64) -> (Complex64, Complex64) {
    let mut v = Complex64::new(0.0, 0.0);
    let mut dv = Complex64::new(0.0, 0.0);
    for &c in coeffs.iter().rev() {
        dv = dv * z + v;
        v = v * z + c;
    }
    (v, dv)
}

/// Aberth–Ehrlich on a monic polynomial of degree `d >= 1` with nonzero
/// constant term. Initial guesses come from the Newton polygon of the
/// coefficient magnitudes, which adapts the starting radii to polynomials
/// with widely scaled coefficients.
fn aberth(monic: &[Complex64], d: usize) -> Vec<Complex64> {
    let mut z = newton_polygon_guesses(monic, d);

    // Scale for the relative backward-error stop: |p(z)| against the
    // magnitude sum of the evaluation.
    let magnitudes: Vec<f64> = monic.iter().map(|c| c.norm()).collect();
    let eval_scale = |x: Complex64| {
        let r = x.norm();
        let mut acc = 0.0;
        for &m in magnitudes.iter().rev() {
            acc = acc * r + m;
        }
        acc.max(f64::MIN_POSITIVE)
    };

    let mut converged = vec![false; d];
    for _ in 0..MAX_ITERS {
        let mut max_step = 0.0f64;
        for k in 0..d {
            if converged[k] {
                continue;
            }
            let (v, dv) = horner_with_derivative(monic, z[k]);
            if v.norm() <= 4.0 * f64::EPSILON * eval_scale(z[k]) {
                converged[k] = true;
                continue;
            }
            let newton = if dv.norm() == 0.0 {
                // Flat spot: take a small fixed move to break the tie.
                Complex64::new(1e-8 * (1.0 + z[k].norm()), 0.0)
            } else {
                v / dv
            };
            let mut repulsion = Complex64::new(0.0, 0.0);
            for j in 0..d {
                if j != k {
                    let diff = z[k] - z[j];
                    if diff.norm_sqr() > 0.0 {
                        repulsion += diff.inv();
                    }
                }
            }
            let denom = Complex64::new(1.0, 0.0) - newton * repulsion;
            let step = if denom.norm() < 1e-300 {
                newton
            } else {
                newton / denom
            };
            z[k] -= step;
            max_step = max_step.max(step.norm() / (1.0 + z[k].norm()));
        }
        if max_step < STEP_TOL {
            break;
        }
    }
    z
}

/// Starting points on annuli read off the upper convex hull of the points
/// `(k, log |a_k|)`: each hull segment contributes its slope as a radius and
/// as many guesses as its width.
fn newton_polygon_guesses(monic: &[Complex64], d: usize) -> Vec<Complex64> {
    const LOG_FLOOR: f64 = -745.0; // below exp(LOG_FLOOR) underflows anyway
    let pts: Vec<(f64, f64)> = (0..=d)
        .map(|k| {
            let m = monic[k].norm();
            (k as f64, if m > 0.0 { m.ln() } else { LOG_FLOOR })
        })
        .collect();

    // Upper hull, left to right.
    let mut hull: Vec<(f64, f64)> = Vec::new();
    for &p in &pts {
        while hull.len() >= 2 {
            let a = hull[hull.len() - 2];
            let b = hull[hull.len() - 1];
            if (b.0 - a.0) * (p.1 - a.1) - (b.1 - a.1) * (p.0 - a.0) >= 0.0 {
                hull.pop();
            } else {
                break;
            }
        }
        hull.push(p);
    }

    let mut guesses = Vec::with_capacity(d);
    for (annulus, pair) in hull.windows(2).enumerate() {
        let (k1, h1) = pair[0];
        let (k2, h2) = pair[1];
        let width = (k2 - k1).round() as usize;
        let radius = ((h1 - h2) / (k2 - k1)).exp().clamp(1e-150, 1e150);
        for j in 0..width {
            let angle = 2.0 * std::f64::consts::PI * j as f64 / width as f64
                + 0.4
                + 0.31 * annulus as f64;
            guesses.push(Complex64::from_polar(radius, angle));
        }
    }
    debug_assert_eq!(guesses.len(), d);
    guesses
}

/// Transitive clustering of nearby approximations into multiple roots. The
/// tolerance is taken relative to the root magnitude beyond the unit circle.
fn cluster(roots: &[Complex64], tol: f64) -> Vec<(Complex64, usize)> {
    let n = roots.len();
    let mut assigned = vec![false; n];
    let mut out = Vec::new();
    for i in 0..n {
        if assigned[i] {
            continue;
        }
        let mut members = vec![i];
        assigned[i] = true;
        let mut cursor = 0;
        while cursor < members.len() {
            let base = roots[members[cursor]];
            let scaled = tol * base.norm().max(1.0);
            for j in 0..n {
                if !assigned[j] && (roots[j] - base).norm() <= scaled {
                    assigned[j] = true;
                    members.push(j);
                }
            }
            cursor += 1;
        }
        let mean = members.iter().map(|&j| roots[j]).sum::<Complex64>() / members.len() as f64;
        out.push((mean, members.len()));
    }
    out
}

/// Modified Newton steps `z -= m p(z)/p'(z)`, kept only while they reduce
/// |p(z)|.
fn polish(p: &ComplexPoly, pd: &ComplexPoly, start: Complex64, mult: usize) -> Complex64 {
    let mut best = start;
    let mut best_val = p.eval(best).norm();
    let mut z = start;
    for _ in 0..3 {
        let dv = pd.eval(z);
        if dv.norm() == 0.0 {
            break;
        }
        z -= p.eval(z) / dv * mult as f64;
        let val = p.eval(z).norm();
        if val < best_val {
            best_val = val;
            best = z;
        } else {
            break;
        }
    }
    best
}
