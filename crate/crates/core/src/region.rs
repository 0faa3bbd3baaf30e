//! Subsets of the complex plane and stability of polynomials with respect to
//! them.
//!
//! A polynomial is stable for a region when it has no roots inside it.
//! Because floating-point roots cannot certify exact boundary membership,
//! every region carries a `boundary_band`: points within that distance of the
//! boundary get the verdict `Band`, which stability tests surface as
//! `Borderline` instead of silently resolving.

use crate::poly::{ComplexPoly, PolyError};
use num_complex::Complex64;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Membership {
    Inside,
    Outside,
    /// Within `boundary_band` of the boundary; never silently resolved.
    Band,
}

/// Tri-state stability verdict, plus the out-of-band status for the zero
/// polynomial (which is neither stable nor unstable by convention).
#[derive(Debug, Clone, PartialEq)]
pub enum StabilityVerdict {
    Stable,
    Unstable(Complex64),
    Borderline(Complex64),
    ZeroPoly,
}

#[derive(Debug, Clone, Error, PartialEq)]
pub enum RegionError {
    #[error("complement sampler exhausted its budget of {budget} draws")]
    SamplerExhausted { budget: usize },
    #[error(transparent)]
    Poly(#[from] PolyError),
}

pub(crate) mod serde_complex {
    use num_complex::Complex64;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(c: &Complex64, s: S) -> Result<S::Ok, S::Error> {
        [c.re, c.im].serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Complex64, D::Error> {
        let [re, im] = <[f64; 2]>::deserialize(d)?;
        Ok(Complex64::new(re, im))
    }
}

pub(crate) mod serde_complex_vec {
    use num_complex::Complex64;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(v: &[Complex64], s: S) -> Result<S::Ok, S::Error> {
        v.iter().map(|c| [c.re, c.im]).collect::<Vec<_>>().serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Complex64>, D::Error> {
        let pairs = Vec::<[f64; 2]>::deserialize(d)?;
        Ok(pairs.into_iter().map(|[re, im]| Complex64::new(re, im)).collect())
    }
}

/// A convex subset of the plane, used as the complement of an unbounded
/// region.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ConvexSet {
    Disk {
        #[serde(with = "serde_complex")]
        center: Complex64,
        radius: f64,
    },
    /// `{ z : <z, normal> <= offset }` with `normal` a unit vector.
    HalfPlane {
        #[serde(with = "serde_complex")]
        normal: Complex64,
        offset: f64,
    },
    /// Convex hull of the given vertices (hull is taken on construction).
    PolygonHull {
        #[serde(with = "serde_complex_vec")]
        vertices: Vec<Complex64>,
    },
}

fn dot(a: Complex64, b: Complex64) -> f64 {
    a.re * b.re + a.im * b.im
}

fn cross(o: Complex64, a: Complex64, b: Complex64) -> f64 {
    (a.re - o.re) * (b.im - o.im) - (a.im - o.im) * (b.re - o.re)
}

/// Monotone chain; returns the hull in counterclockwise order.
pub fn convex_hull(points: &[Complex64]) -> Vec<Complex64> {
    let mut pts = points.to_vec();
    pts.sort_by(|a, b| a.re.partial_cmp(&b.re).unwrap().then(a.im.partial_cmp(&b.im).unwrap()));
    pts.dedup_by(|a, b| (*a - *b).norm() == 0.0);
    let n = pts.len();
    if n <= 2 {
        return pts;
    }
    let mut hull: Vec<Complex64> = Vec::with_capacity(2 * n);
    for &p in pts.iter() {
        while hull.len() >= 2 && cross(hull[hull.len() - 2], hull[hull.len() - 1], p) <= 0.0 {
            hull.pop();
        }
        hull.push(p);
    }
    let lower_len = hull.len() + 1;
    for &p in pts.iter().rev().skip(1) {
        while hull.len() >= lower_len && cross(hull[hull.len() - 2], hull[hull.len() - 1], p) <= 0.0 {
            hull.pop();
        }
        hull.push(p);
    }
    hull.pop();
    hull
}

fn seg_dist(z: Complex64, a: Complex64, b: Complex64) -> f64 {
    let ab = b - a;
    let len2 = ab.norm_sqr();
    if len2 == 0.0 {
        return (z - a).norm();
    }
    let t = (dot(z - a, ab) / len2).clamp(0.0, 1.0);
    (z - (a + ab * t)).norm()
}

impl ConvexSet {
    pub fn polygon(vertices: &[Complex64]) -> ConvexSet {
        ConvexSet::PolygonHull {
            vertices: convex_hull(vertices),
        }
    }

    pub fn half_plane(normal: Complex64, offset: f64) -> ConvexSet {
        let unit = normal / normal.norm();
        ConvexSet::HalfPlane { normal: unit, offset }
    }

    /// Closed containment test.
    pub fn contains(&self, z: Complex64) -> bool {
        match self {
            ConvexSet::Disk { center, radius } => (z - center).norm() <= *radius,
            ConvexSet::HalfPlane { normal, offset } => dot(z, *normal) <= *offset,
            ConvexSet::PolygonHull { vertices } => match vertices.len() {
                0 => false,
                1 => (z - vertices[0]).norm() == 0.0,
                2 => seg_dist(z, vertices[0], vertices[1]) == 0.0,
                n => (0..n).all(|i| cross(vertices[i], vertices[(i + 1) % n], z) >= 0.0),
            },
        }
    }

    pub fn boundary_distance(&self, z: Complex64) -> f64 {
        match self {
            ConvexSet::Disk { center, radius } => ((z - center).norm() - radius).abs(),
            ConvexSet::HalfPlane { normal, offset } => (dot(z, *normal) - offset).abs(),
            ConvexSet::PolygonHull { vertices } => match vertices.len() {
                0 => f64::INFINITY,
                1 => (z - vertices[0]).norm(),
                n => (0..n)
                    .map(|i| seg_dist(z, vertices[i], vertices[(i + 1) % n]))
                    .fold(f64::INFINITY, f64::min),
            },
        }
    }

    pub fn scale(&self, tau: f64) -> ConvexSet {
        match self {
            ConvexSet::Disk { center, radius } => ConvexSet::Disk {
                center: center * tau,
                radius: radius * tau,
            },
            ConvexSet::HalfPlane { normal, offset } => ConvexSet::HalfPlane {
                normal: *normal,
                offset: offset * tau,
            },
            ConvexSet::PolygonHull { vertices } => ConvexSet::PolygonHull {
                vertices: vertices.iter().map(|v| v * tau).collect(),
            },
        }
    }

    /// A box (center, half-side) whose intersection with the set has
    /// substantial area; used for rejection sampling inside the set.
    fn sample_box(&self) -> (Complex64, f64) {
        match self {
            ConvexSet::Disk { center, radius } => (*center, radius.max(1e-6)),
            ConvexSet::HalfPlane { normal, offset } => {
                let s = 2.0 + 0.5 * offset.abs();
                (normal * *offset - normal * s, s)
            }
            ConvexSet::PolygonHull { vertices } => {
                if vertices.is_empty() {
                    return (Complex64::new(0.0, 0.0), 1.0);
                }
                let centroid = vertices.iter().sum::<Complex64>() / vertices.len() as f64;
                let r = vertices
                    .iter()
                    .map(|v| (v - centroid).norm())
                    .fold(0.0, f64::max);
                (centroid, r.max(1e-6))
            }
        }
    }
}

/// A region of the plane with tri-state membership.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Region {
    Disk {
        #[serde(with = "serde_complex")]
        center: Complex64,
        radius: f64,
        closed: bool,
        #[serde(default)]
        boundary_band: f64,
    },
    Annulus {
        #[serde(with = "serde_complex")]
        center: Complex64,
        r_inner: f64,
        r_outer: f64,
        closed_inner: bool,
        closed_outer: bool,
        #[serde(default)]
        boundary_band: f64,
    },
    PuncturedDisk {
        #[serde(with = "serde_complex")]
        center: Complex64,
        radius: f64,
        closed: bool,
        #[serde(default)]
        boundary_band: f64,
    },
    /// The complement of a convex set; unbounded.
    ConvexComplement {
        hull: ConvexSet,
        #[serde(default)]
        boundary_band: f64,
    },
    /// A finite set of probe points standing in for an otherwise unknown
    /// region. Membership is exact-hit only; no certification is possible.
    Sampled {
        #[serde(with = "serde_complex_vec")]
        points: Vec<Complex64>,
        #[serde(default)]
        boundary_band: f64,
    },
}

impl Region {
    pub fn disk(center: Complex64, radius: f64, closed: bool) -> Region {
        Region::Disk {
            center,
            radius,
            closed,
            boundary_band: 0.0,
        }
    }

    pub fn open_unit_disk() -> Region {
        Region::disk(Complex64::new(0.0, 0.0), 1.0, false)
    }

    pub fn closed_unit_disk() -> Region {
        Region::disk(Complex64::new(0.0, 0.0), 1.0, true)
    }

    pub fn annulus(center: Complex64, r_inner: f64, r_outer: f64) -> Region {
        Region::Annulus {
            center,
            r_inner,
            r_outer,
            closed_inner: false,
            closed_outer: false,
            boundary_band: 0.0,
        }
    }

    pub fn punctured_disk(center: Complex64, radius: f64, closed: bool) -> Region {
        Region::PuncturedDisk {
            center,
            radius,
            closed,
            boundary_band: 0.0,
        }
    }

    pub fn convex_complement(hull: ConvexSet) -> Region {
        Region::ConvexComplement {
            hull,
            boundary_band: 0.0,
        }
    }

    pub fn sampled(points: Vec<Complex64>) -> Region {
        Region::Sampled {
            points,
            boundary_band: 0.0,
        }
    }

    pub fn with_band(mut self, band: f64) -> Region {
        *self.band_mut() = band;
        self
    }

    fn band_mut(&mut self) -> &mut f64 {
        match self {
            Region::Disk { boundary_band, .. }
            | Region::Annulus { boundary_band, .. }
            | Region::PuncturedDisk { boundary_band, .. }
            | Region::ConvexComplement { boundary_band, .. }
            | Region::Sampled { boundary_band, .. } => boundary_band,
        }
    }

    pub fn boundary_band(&self) -> f64 {
        match self {
            Region::Disk { boundary_band, .. }
            | Region::Annulus { boundary_band, .. }
            | Region::PuncturedDisk { boundary_band, .. }
            | Region::ConvexComplement { boundary_band, .. }
            | Region::Sampled { boundary_band, .. } => *boundary_band,
        }
    }

    /// Topological interior test and distance to the boundary, ignoring the
    /// band. For `Sampled`, "inside" means an exact hit on a probe point.
    fn locate(&self, z: Complex64) -> (bool, f64) {
        match self {
            Region::Disk { center, radius, .. } => {
                let m = (z - center).norm();
                (m < *radius, (m - radius).abs())
            }
            Region::Annulus {
                center,
                r_inner,
                r_outer,
                ..
            } => {
                let m = (z - center).norm();
                let inner_dist = if *r_inner == 0.0 { m } else { (m - r_inner).abs() };
                (
                    m > *r_inner && m < *r_outer,
                    inner_dist.min((m - r_outer).abs()),
                )
            }
            Region::PuncturedDisk { center, radius, .. } => {
                let m = (z - center).norm();
                (m > 0.0 && m < *radius, m.min((m - radius).abs()))
            }
            Region::ConvexComplement { hull, .. } => {
                (!hull.contains(z), hull.boundary_distance(z))
            }
            Region::Sampled { points, .. } => {
                let d = points
                    .iter()
                    .map(|p| (z - p).norm())
                    .fold(f64::INFINITY, f64::min);
                (d == 0.0, d)
            }
        }
    }

    pub fn membership(&self, z: Complex64) -> Membership {
        self.membership_with_band(z, self.boundary_band())
    }

    pub fn membership_with_band(&self, z: Complex64, band: f64) -> Membership {
        let (inside, dist) = self.locate(z);
        if let Region::Sampled { .. } = self {
            return if inside {
                Membership::Inside
            } else if dist <= band {
                Membership::Band
            } else {
                Membership::Outside
            };
        }
        if dist <= band {
            Membership::Band
        } else if inside {
            Membership::Inside
        } else {
            Membership::Outside
        }
    }

    pub fn bounded(&self) -> bool {
        !matches!(self, Region::ConvexComplement { .. })
    }

    /// Whether the region is an open set (no closed boundary flags).
    pub fn is_open_set(&self) -> bool {
        match self {
            Region::Disk { closed, .. } => !closed,
            Region::Annulus {
                closed_inner,
                closed_outer,
                ..
            } => !closed_inner && !closed_outer,
            Region::PuncturedDisk { closed, .. } => !closed,
            Region::ConvexComplement { .. } => true,
            Region::Sampled { .. } => false,
        }
    }

    pub fn interior_nonempty(&self) -> bool {
        match self {
            Region::Sampled { points, .. } => !points.is_empty(),
            _ => true,
        }
    }

    /// Pointwise scaling `tau * Region` for `tau > 0`. Distances (and hence
    /// the band) scale with the set.
    pub fn scale(&self, tau: f64) -> Region {
        assert!(tau > 0.0, "scale factor must be positive");
        match self {
            Region::Disk {
                center,
                radius,
                closed,
                boundary_band,
            } => Region::Disk {
                center: center * tau,
                radius: radius * tau,
                closed: *closed,
                boundary_band: boundary_band * tau,
            },
            Region::Annulus {
                center,
                r_inner,
                r_outer,
                closed_inner,
                closed_outer,
                boundary_band,
            } => Region::Annulus {
                center: center * tau,
                r_inner: r_inner * tau,
                r_outer: r_outer * tau,
                closed_inner: *closed_inner,
                closed_outer: *closed_outer,
                boundary_band: boundary_band * tau,
            },
            Region::PuncturedDisk {
                center,
                radius,
                closed,
                boundary_band,
            } => Region::PuncturedDisk {
                center: center * tau,
                radius: radius * tau,
                closed: *closed,
                boundary_band: boundary_band * tau,
            },
            Region::ConvexComplement { hull, boundary_band } => Region::ConvexComplement {
                hull: hull.scale(tau),
                boundary_band: boundary_band * tau,
            },
            Region::Sampled { points, boundary_band } => Region::Sampled {
                points: points.iter().map(|p| p * tau).collect(),
                boundary_band: boundary_band * tau,
            },
        }
    }

    /// `sup { |z| : z in closure(region) }` for bounded regions.
    pub fn sup_abs(&self) -> Option<f64> {
        match self {
            Region::Disk { center, radius, .. } => Some(center.norm() + radius),
            Region::Annulus { center, r_outer, .. } => Some(center.norm() + r_outer),
            Region::PuncturedDisk { center, radius, .. } => Some(center.norm() + radius),
            Region::ConvexComplement { .. } => None,
            Region::Sampled { points, .. } => {
                Some(points.iter().map(|p| p.norm()).fold(0.0, f64::max))
            }
        }
    }

    /// Smallest convenient (center, radius) disk covering a bounded region,
    /// or covering the convex complement for unbounded ones.
    pub fn enclosing_disk(&self) -> (Complex64, f64) {
        self.enclosure()
    }

    fn enclosure(&self) -> (Complex64, f64) {
        match self {
            Region::Disk { center, radius, .. } => (*center, *radius),
            Region::Annulus { center, r_outer, .. } => (*center, *r_outer),
            Region::PuncturedDisk { center, radius, .. } => (*center, *radius),
            Region::ConvexComplement { hull, .. } => hull.sample_box(),
            Region::Sampled { points, .. } => {
                if points.is_empty() {
                    return (Complex64::new(0.0, 0.0), 1.0);
                }
                let centroid = points.iter().sum::<Complex64>() / points.len() as f64;
                let r = points
                    .iter()
                    .map(|p| (p - centroid).norm())
                    .fold(0.0, f64::max);
                (centroid, r.max(1e-6))
            }
        }
    }

    /// A representative interior point together with its distance to the
    /// boundary. For `Sampled` this is heuristic (the first probe point).
    pub fn interior_point(&self) -> Option<(Complex64, f64)> {
        match self {
            Region::Disk { center, radius, .. } => Some((*center, *radius)),
            Region::Annulus {
                center,
                r_inner,
                r_outer,
                ..
            } => {
                let mid = (r_inner + r_outer) / 2.0;
                Some((center + Complex64::new(mid, 0.0), (r_outer - r_inner) / 2.0))
            }
            Region::PuncturedDisk { center, radius, .. } => {
                Some((center + Complex64::new(radius / 2.0, 0.0), radius / 2.0))
            }
            Region::ConvexComplement { hull, .. } => {
                let (c, s) = hull.sample_box();
                let dir = Complex64::new(1.0, 0.3);
                let dir = dir / dir.norm();
                let mut z = c + dir * (3.0 * s);
                for _ in 0..64 {
                    if !hull.contains(z) && hull.boundary_distance(z) > 0.0 {
                        return Some((z, hull.boundary_distance(z)));
                    }
                    z += dir * s;
                }
                None
            }
            Region::Sampled { points, boundary_band } => points
                .first()
                .map(|&p| (p, boundary_band.max(1e-3))),
        }
    }

    /// Deterministic grid of interior points (membership strictly `Inside`).
    pub fn interior_grid(&self, density: usize) -> Vec<Complex64> {
        let density = density.max(2);
        let mut out = Vec::new();
        match self {
            Region::Sampled { points, .. } => {
                out.extend(points.iter().copied());
            }
            Region::ConvexComplement { hull, .. } => {
                let (c, s) = hull.sample_box();
                let span = 3.0 * s;
                for i in 0..density {
                    for j in 0..density {
                        let x = c.re - span + 2.0 * span * (i as f64 + 0.5) / density as f64;
                        let y = c.im - span + 2.0 * span * (j as f64 + 0.5) / density as f64;
                        let z = Complex64::new(x, y);
                        if self.membership(z) == Membership::Inside {
                            out.push(z);
                        }
                    }
                }
                // Far probes: an unbounded region must be sampled away from
                // the complement as well.
                for &mult in &[5.0, 20.0, 100.0] {
                    for k in 0..8 {
                        let angle = 2.0 * std::f64::consts::PI * k as f64 / 8.0;
                        let z = c + Complex64::from_polar(mult * s, angle);
                        if self.membership(z) == Membership::Inside {
                            out.push(z);
                        }
                    }
                }
            }
            _ => {
                let (c, r) = self.enclosure();
                let span = r * 1.001 + self.boundary_band();
                for i in 0..density {
                    for j in 0..density {
                        let x = c.re - span + 2.0 * span * (i as f64 + 0.5) / density as f64;
                        let y = c.im - span + 2.0 * span * (j as f64 + 0.5) / density as f64;
                        let z = Complex64::new(x, y);
                        if self.membership(z) == Membership::Inside {
                            out.push(z);
                        }
                    }
                }
            }
        }
        out
    }

    /// Boundary circles plus isolated boundary points, when the boundary has
    /// that form; used for maximum-modulus certification.
    #[allow(clippy::type_complexity)]
    pub(crate) fn boundary_circles(&self) -> Option<(Vec<(Complex64, f64)>, Vec<Complex64>)> {
        match self {
            Region::Disk { center, radius, .. } => Some((vec![(*center, *radius)], vec![])),
            Region::Annulus {
                center,
                r_inner,
                r_outer,
                ..
            } => {
                if *r_inner == 0.0 {
                    Some((vec![(*center, *r_outer)], vec![*center]))
                } else {
                    Some((vec![(*center, *r_inner), (*center, *r_outer)], vec![]))
                }
            }
            Region::PuncturedDisk { center, radius, .. } => {
                Some((vec![(*center, *radius)], vec![*center]))
            }
            _ => None,
        }
    }

    /// Stability of `p` with respect to this region: no root may be `Inside`.
    pub fn is_stable(&self, p: &ComplexPoly) -> Result<StabilityVerdict, PolyError> {
        match p.degree() {
            None => return Ok(StabilityVerdict::ZeroPoly),
            Some(0) => return Ok(StabilityVerdict::Stable),
            Some(_) => {}
        }
        let roots = p.roots()?;
        let mut band_root = None;
        for &(r, _) in &roots.roots {
            match self.membership(r) {
                Membership::Inside => return Ok(StabilityVerdict::Unstable(r)),
                Membership::Band => {
                    band_root.get_or_insert(r);
                }
                Membership::Outside => {}
            }
        }
        Ok(match band_root {
            Some(r) => StabilityVerdict::Borderline(r),
            None => StabilityVerdict::Stable,
        })
    }

    /// A random polynomial of the given degree whose roots are all strictly
    /// outside the region with margin at least twice the boundary band.
    /// Deterministic for a fixed seed.
    pub fn random_stable_poly(
        &self,
        degree: usize,
        seed: u64,
    ) -> Result<ComplexPoly, RegionError> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let lead = random_annulus_point(&mut rng, 0.5, 2.0);
        if degree == 0 {
            return Ok(ComplexPoly::constant(lead));
        }
        let margin_band = 2.0 * self.boundary_band();
        let (c, r) = self.enclosure();
        let budget = 20_000 * (degree + 1);
        // One scale profile per polynomial: root sets that cluster near the
        // boundary are what falsification searches feed on, and mixing
        // scales per root would make such sets exponentially rare.
        let profile = rng.gen_range(0..3u8);
        let mut roots = Vec::with_capacity(degree);
        let mut draws = 0usize;
        while roots.len() < degree {
            if draws >= budget {
                return Err(RegionError::SamplerExhausted { budget });
            }
            draws += 1;
            let candidate = match (self.bounded(), profile) {
                // Near field: rays through the region, boundary and holes.
                (true, 0) => c + random_annulus_point(&mut rng, 0.0, 1.6 * r.max(1e-6)),
                // Box of side four diameters around the region.
                (true, 1) => {
                    let half = 4.0 * r;
                    c + Complex64::new(
                        rng.gen_range(-half..half),
                        rng.gen_range(-half..half),
                    )
                }
                // Exterior ring.
                (true, _) => c + random_annulus_point(&mut rng, 4.0 * r, 8.0 * r),
                // Complement of the region is the convex set; sample inside
                // its box.
                (false, _) => c + Complex64::new(
                    rng.gen_range(-1.5 * r..1.5 * r),
                    rng.gen_range(-1.5 * r..1.5 * r),
                ),
            };
            if self.membership_with_band(candidate, margin_band) == Membership::Outside {
                roots.push(candidate);
            }
        }
        Ok(ComplexPoly::from_roots(lead, &roots))
    }
}

fn random_annulus_point<R: Rng>(rng: &mut R, r_min: f64, r_max: f64) -> Complex64 {
    let radius = rng.gen_range(r_min..r_max);
    let angle = rng.gen_range(0.0..2.0 * std::f64::consts::PI);
    Complex64::from_polar(radius, angle)
}

/// Outcome of testing whether `phi(source)` lies inside `target`.
#[derive(Debug, Clone, PartialEq)]
pub enum MapsInto {
    /// Rigorous: boundary-grid maximum plus a derivative continuity pad keeps
    /// the image strictly inside the target (minus its band).
    Certified,
    Refuted {
        witness: Complex64,
        image: Complex64,
    },
    /// Dense sampling found no violation, but no certificate applies.
    SampledOnly,
}

/// Tests `phi(source) <= target`. Certification is attempted only for
/// bounded circle-boundary sources into disk or annulus targets; every other
/// combination reports `SampledOnly` unless sampling finds a witness.
pub fn maps_into(
    phi: &ComplexPoly,
    source: &Region,
    target: &Region,
    grid_density: usize,
) -> MapsInto {
    // Refutation scan over an interior grid.
    for z in source.interior_grid(grid_density.max(8)) {
        let image = phi.eval(z);
        if target.membership(image) == Membership::Outside {
            return MapsInto::Refuted { witness: z, image };
        }
    }

    let (circles, isolated) = match source.boundary_circles() {
        Some(parts) => parts,
        None => return MapsInto::SampledOnly,
    };
    let samples = (grid_density * grid_density).max(256);
    let non_constant = phi.degree().is_some_and(|d| d >= 1);

    let (t_center, t_inner, t_outer, closed_inner, closed_outer, t_band) = match target {
        Region::Disk {
            center,
            radius,
            closed,
            boundary_band,
        } => (*center, None, *radius, false, *closed, *boundary_band),
        Region::Annulus {
            center,
            r_inner,
            r_outer,
            closed_inner,
            closed_outer,
            boundary_band,
        } => (
            *center,
            Some(*r_inner),
            *r_outer,
            *closed_inner,
            *closed_outer,
            *boundary_band,
        ),
        Region::PuncturedDisk {
            center,
            radius,
            closed,
            boundary_band,
        } => (*center, Some(0.0), *radius, false, *closed, *boundary_band),
        _ => return MapsInto::SampledOnly,
    };

    // Upper bound for sup |phi - t_center| over the source closure: boundary
    // grid plus a Lipschitz pad, and independently the coefficient-sum bound
    // about the enclosure center.
    let shifted = phi - &ComplexPoly::constant(t_center);
    let (enc_center, enc_radius) = source.enclosure();
    let recentered = shifted.compose(&ComplexPoly::new(vec![
        enc_center,
        Complex64::new(1.0, 0.0),
    ]));
    let coeff_bound: f64 = recentered
        .coeffs()
        .iter()
        .enumerate()
        .map(|(k, a)| a.norm() * enc_radius.powi(k as i32))
        .sum();
    let source_sup = source.sup_abs().unwrap_or(enc_center.norm() + enc_radius);
    let lip: f64 = phi
        .coeffs()
        .iter()
        .enumerate()
        .skip(1)
        .map(|(k, a)| k as f64 * a.norm() * source_sup.powi(k as i32 - 1))
        .sum();

    let mut grid_sup: f64 = isolated
        .iter()
        .map(|&p| (phi.eval(p) - t_center).norm())
        .fold(0.0, f64::max);
    let mut grid_inf: f64 = isolated
        .iter()
        .map(|&p| (phi.eval(p) - t_center).norm())
        .fold(f64::INFINITY, f64::min);
    for &(bc, br) in &circles {
        let pad = lip * std::f64::consts::PI * br / samples as f64;
        let (lo, hi) = circle_min_max(phi, bc, br, samples, t_center);
        grid_sup = grid_sup.max(hi + pad);
        grid_inf = grid_inf.min(lo - pad);
    }
    let upper = grid_sup.min(coeff_bound);

    // Maximum/minimum-modulus strictness: a non-constant map sends interior
    // points strictly below the closure supremum (and strictly above the
    // zero-free infimum). Attaining the bound exactly is therefore tolerable
    // when the target keeps the relevant boundary or the source is open --
    // but only for non-constant maps, and never against a positive band.
    let le_route =
        |boundary_closed: bool| t_band == 0.0 && non_constant && (boundary_closed || source.is_open_set());

    let outer_ok = if le_route(closed_outer) {
        upper <= t_outer
    } else {
        upper < t_outer - t_band
    };
    if !outer_ok {
        return MapsInto::SampledOnly;
    }

    let t_inner = match t_inner {
        None => return MapsInto::Certified,
        Some(r) => r,
    };

    // Inner side: the minimum-modulus argument needs phi - t_center zero-free
    // on the source closure.
    match shifted.degree() {
        None => return MapsInto::SampledOnly,
        Some(0) => {}
        Some(_) => {
            let roots = match shifted.roots() {
                Ok(r) => r,
                Err(_) => return MapsInto::SampledOnly,
            };
            for &(root, _) in &roots.roots {
                match source.membership(root) {
                    Membership::Inside => {
                        // phi(root) equals the target center, which sits in
                        // the annulus hole.
                        if target.membership(t_center) == Membership::Outside {
                            return MapsInto::Refuted {
                                witness: root,
                                image: phi.eval(root),
                            };
                        }
                        return MapsInto::SampledOnly;
                    }
                    Membership::Band => return MapsInto::SampledOnly,
                    Membership::Outside => {}
                }
            }
        }
    }
    let inner_ok = if le_route(closed_inner) {
        grid_inf >= t_inner
    } else {
        grid_inf > t_inner + t_band
    };
    if inner_ok {
        MapsInto::Certified
    } else {
        MapsInto::SampledOnly
    }
}

fn circle_min_max(
    phi: &ComplexPoly,
    center: Complex64,
    radius: f64,
    samples: usize,
    relative_to: Complex64,
) -> (f64, f64) {
    let mut min = f64::INFINITY;
    let mut max = f64::NEG_INFINITY;
    for k in 0..samples {
        let angle = 2.0 * std::f64::consts::PI * k as f64 / samples as f64;
        let z = center + Complex64::from_polar(radius, angle);
        let v = (phi.eval(z) - relative_to).norm();
        min = min.min(v);
        max = max.max(v);
    }
    (min, max)
}
