//! Shared generators and oracles for the integration and acceptance suites.
//!
//! Everything here is test-side machinery: the convex hull used for the
//! derivative-roots oracle is written independently of the library's own
//! geometry so the two can check each other.

// Each test binary pulls in a different subset of these helpers.
#![allow(dead_code)]

use num_complex::Complex64;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use stabil_core::{ComplexPoly, ConvexSet, Region};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

pub fn random_unit(rng: &mut ChaCha8Rng) -> Complex64 {
    Complex64::from_polar(1.0, rng.gen_range(0.0..2.0 * std::f64::consts::PI))
}

pub fn random_in_annulus(rng: &mut ChaCha8Rng, r_min: f64, r_max: f64) -> Complex64 {
    Complex64::from_polar(
        rng.gen_range(r_min..r_max),
        rng.gen_range(0.0..2.0 * std::f64::consts::PI),
    )
}

/// Random polynomial with coefficients in the square of the given half-side.
pub fn random_poly(rng: &mut ChaCha8Rng, degree: usize, half_side: f64) -> ComplexPoly {
    let coeffs = (0..=degree)
        .map(|_| {
            Complex64::new(
                rng.gen_range(-half_side..half_side),
                rng.gen_range(-half_side..half_side),
            )
        })
        .collect();
    ComplexPoly::new(coeffs)
}

/// A random bounded region suitable as the first region of a pair.
pub fn random_bounded_region(rng: &mut ChaCha8Rng, band: f64) -> Region {
    let center = Complex64::new(rng.gen_range(-0.5..0.5), rng.gen_range(-0.5..0.5));
    match rng.gen_range(0..3u8) {
        0 => Region::disk(center, rng.gen_range(0.5..2.0), rng.gen_bool(0.5)).with_band(band),
        1 => {
            let r_inner = rng.gen_range(0.2..0.8);
            let r_outer = r_inner + rng.gen_range(0.5..1.5);
            Region::annulus(center, r_inner, r_outer).with_band(band)
        }
        _ => Region::punctured_disk(center, rng.gen_range(0.5..2.0), rng.gen_bool(0.5))
            .with_band(band),
    }
}

/// A conforming tuple: bounded regions, a stable multiplier for the second
/// region, and a symbol whose image of the second region sits well inside the
/// first (certifiably).
pub struct ConformingTuple {
    pub omega1: Region,
    pub omega2: Region,
    pub psi: ComplexPoly,
    pub phi: ComplexPoly,
}

pub fn conforming_tuple(rng: &mut ChaCha8Rng) -> ConformingTuple {
    let band = 1e-6;
    let omega1 = random_bounded_region(rng, band);
    let omega2 = random_bounded_region(rng, band);

    let psi_degree = rng.gen_range(0..=4);
    let psi = omega2
        .random_stable_poly(psi_degree, rng.gen())
        .expect("bounded regions always admit stable polynomials");

    // Symbol: target-interior anchor plus a contraction of the source
    // enclosure, so the image lands in a disk of radius d/3 around the
    // anchor.
    let (anchor, clearance) = omega1.interior_point().expect("regions have interior");
    let (source_center, source_radius) = omega2.enclosing_disk();
    let k = rng.gen_range(1..=3u32);
    let lambda =
        random_unit(rng) * (clearance / (3.0 * source_radius.powi(k as i32)));
    // phi(z) = anchor + lambda (z - source_center)^k, expanded.
    let shift = ComplexPoly::new(vec![-source_center, c(1.0, 0.0)]);
    let phi = &ComplexPoly::constant(anchor)
        + &shift.pow(k as usize).scale(lambda);

    ConformingTuple {
        omega1,
        omega2,
        psi,
        phi,
    }
}

/// Multiplier/symbol pair for the unit-disk setting: multiplier stable on the
/// closed disk, symbol a certified self-map of the closed disk.
pub fn disk_pair(rng: &mut ChaCha8Rng) -> (ComplexPoly, ComplexPoly) {
    let deg = rng.gen_range(1..=3);
    let roots: Vec<Complex64> = (0..deg)
        .map(|_| random_in_annulus(rng, 1.3, 3.0))
        .collect();
    let psi = ComplexPoly::from_roots(random_in_annulus(rng, 0.5, 2.0), &roots);

    let k = rng.gen_range(1..=3usize);
    let margin = rng.gen_range(0.55..0.9);
    let offset = random_unit(rng) * rng.gen_range(0.0..(0.95 - margin));
    let mut coeffs = vec![c(0.0, 0.0); k + 1];
    coeffs[0] = offset;
    coeffs[k] = random_unit(rng) * margin;
    (psi, ComplexPoly::new(coeffs))
}

/// Convex-complement region with one of the symbol families that fix it.
pub struct PcdInstance {
    pub omega: Region,
    pub psi: ComplexPoly,
    pub phi: ComplexPoly,
    pub n_deriv: usize,
}

pub fn pcd_instance(rng: &mut ChaCha8Rng) -> PcdInstance {
    let band = 1e-6;
    let omega;
    let phi;
    if rng.gen_bool(0.5) {
        // Complement of a disk: expansion about the disk center.
        let center = Complex64::new(rng.gen_range(-0.5..0.5), rng.gen_range(-0.5..0.5));
        let radius = rng.gen_range(0.5..1.5);
        omega = Region::convex_complement(ConvexSet::Disk { center, radius }).with_band(band);
        let k = rng.gen_range(1..=2usize);
        let lambda = random_unit(rng) * rng.gen_range(1.0..2.0);
        // phi(z) = center + lambda r^{1-k} (z - center)^k.
        let shift = ComplexPoly::new(vec![-center, c(1.0, 0.0)]);
        phi = &ComplexPoly::constant(center)
            + &shift.pow(k).scale(lambda * radius.powi(1 - k as i32));
    } else {
        // Complement of a half plane: real expansion about a boundary point
        // plus an outward translation.
        let normal = random_unit(rng);
        let offset = rng.gen_range(-1.0..1.0);
        omega = Region::convex_complement(ConvexSet::half_plane(normal, offset)).with_band(band);
        let anchor = normal * offset;
        let lambda = rng.gen_range(1.0..2.0);
        let outward = normal * rng.gen_range(0.0..1.0);
        // phi(z) = anchor + lambda (z - anchor) + outward.
        phi = ComplexPoly::new(vec![
            anchor * (1.0 - lambda) + outward,
            c(lambda, 0.0),
        ]);
    }
    let psi = omega
        .random_stable_poly(rng.gen_range(0..=3), rng.gen())
        .expect("complement sampling succeeds for convex complements");
    PcdInstance {
        omega,
        psi,
        phi,
        n_deriv: rng.gen_range(0..=2),
    }
}

/// Monotone-chain convex hull, written independently of the library's
/// geometry module to serve as an oracle.
pub fn hull_of(points: &[Complex64]) -> Vec<Complex64> {
    let mut pts: Vec<Complex64> = points.to_vec();
    pts.sort_by(|a, b| {
        a.re.partial_cmp(&b.re)
            .unwrap()
            .then(a.im.partial_cmp(&b.im).unwrap())
    });
    pts.dedup_by(|a, b| a == b);
    if pts.len() <= 2 {
        return pts;
    }
    let turn = |o: Complex64, a: Complex64, b: Complex64| {
        (a.re - o.re) * (b.im - o.im) - (a.im - o.im) * (b.re - o.re)
    };
    let mut hull: Vec<Complex64> = Vec::new();
    for &p in pts.iter() {
        while hull.len() >= 2 && turn(hull[hull.len() - 2], hull[hull.len() - 1], p) <= 0.0 {
            hull.pop();
        }
        hull.push(p);
    }
    let lower_len = hull.len() + 1;
    for &p in pts.iter().rev().skip(1) {
        while hull.len() >= lower_len && turn(hull[hull.len() - 2], hull[hull.len() - 1], p) <= 0.0 {
            hull.pop();
        }
        hull.push(p);
    }
    hull.pop();
    hull
}

/// Distance from a point to the convex hull of the given points (zero when
/// inside).
pub fn hull_distance(z: Complex64, points: &[Complex64]) -> f64 {
    let hull = hull_of(points);
    match hull.len() {
        0 => f64::INFINITY,
        1 => (z - hull[0]).norm(),
        _ => {
            let n = hull.len();
            let turn = |o: Complex64, a: Complex64, b: Complex64| {
                (a.re - o.re) * (b.im - o.im) - (a.im - o.im) * (b.re - o.re)
            };
            let inside = n >= 3
                && (0..n).all(|i| turn(hull[i], hull[(i + 1) % n], z) >= 0.0);
            if inside {
                return 0.0;
            }
            (0..n)
                .map(|i| {
                    let a = hull[i];
                    let b = hull[(i + 1) % n];
                    let ab = b - a;
                    let len2 = ab.norm_sqr();
                    if len2 == 0.0 {
                        (z - a).norm()
                    } else {
                        let t = (((z - a).re * ab.re + (z - a).im * ab.im) / len2)
                            .clamp(0.0, 1.0);
                        (z - (a + ab * t)).norm()
                    }
                })
                .fold(f64::INFINITY, f64::min)
        }
    }
}
