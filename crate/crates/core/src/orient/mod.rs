//! Critical orientations of the map `n ↦ E₀(M; n)` on the unit sphere.
//!
//! The search runs on a discrete objective built from a quadrature rule of
//! the surface, whose exact gradient is `⁴√24` times the quadrature of the
//! first-variation integrand returned by [`residual`]. Reported energies are
//! re-evaluated with the most accurate engine available for the surface.

mod approx;
mod scan;

pub use approx::{approx_stability, exact_cube_minimizers, StabilityReport, StabilityRow};
pub use scan::{scan, ScanGrid, ScanPoint, ScanSpec};

use crate::direction::Direction;
use crate::energy::{e0, EngineChoice, DEFAULT_RESOLUTION};
use crate::error::{Error, Result};
use crate::numerics::{
    compensated_sum, compensated_sum_vec, geodesic_distance, tangent_basis, Vec3, FOURTH_ROOT_24,
};
use crate::surfaces::{QuadratureSamples, Surface, SymmetryClass};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::collections::HashMap;

/// Samples with `1 − (ν·n)² below this` contribute nothing to the residual.
const DEGENERATE: f64 = 1e-12;

/// `∫ ((ν·n)ν − (ν·n)²n) / √(1 − (ν·n)²)` over the samples. Vanishes exactly
/// at critical points of `E₀(M; ·)`; the gradient is `⁴√24` times this.
pub fn residual(samples: &QuadratureSamples, n: &Direction) -> Vec3 {
    let v = n.vec();
    residual_terms(samples.normals.iter().zip(&samples.weights), &v)
}

fn residual_terms<'a>(terms: impl Iterator<Item = (&'a Vec3, &'a f64)>, n: &Vec3) -> Vec3 {
    compensated_sum_vec(terms.filter_map(|(nu, w)| {
        let c = nu.dot(n);
        let s2 = 1.0 - c * c;
        (s2 >= DEGENERATE).then(|| (nu * c - n * (c * c)) * (w / s2.sqrt()))
    }))
}

/// Quadrature rule with repeated normals merged. Only the normal
/// distribution matters for `E₀`, and `ν ↦ −ν` leaves the integrand
/// unchanged, so flat faces and cylinder generators collapse to a few terms.
#[derive(Debug, Clone)]
pub struct Objective {
    normals: Vec<Vec3>,
    weights: Vec<f64>,
    area: f64,
}

impl Objective {
    pub fn from_samples(samples: &QuadratureSamples) -> Self {
        let mut index: HashMap<[u64; 3], usize> = HashMap::new();
        let mut normals = Vec::new();
        let mut weights = Vec::new();
        for (nu, &w) in samples.normals.iter().zip(&samples.weights) {
            let first = [nu.x, nu.y, nu.z]
                .into_iter()
                .find(|c| *c != 0.0)
                .unwrap_or(1.0);
            let canon = if first < 0.0 { -nu } else { *nu };
            // Adding 0.0 folds −0.0 into +0.0 before hashing the bits.
            let key = [
                (canon.x + 0.0).to_bits(),
                (canon.y + 0.0).to_bits(),
                (canon.z + 0.0).to_bits(),
            ];
            match index.get(&key) {
                Some(&i) => weights[i] += w,
                None => {
                    index.insert(key, normals.len());
                    normals.push(canon);
                    weights.push(w);
                }
            }
        }
        let area = compensated_sum(weights.iter().copied());
        Objective {
            normals,
            weights,
            area,
        }
    }

    pub fn for_surface(surface: &Surface, resolution: usize) -> Result<Self> {
        Ok(Self::from_samples(&surface.sample(resolution)?))
    }

    /// Number of distinct normals after merging.
    pub fn len(&self) -> usize {
        self.normals.len()
    }

    pub fn is_empty(&self) -> bool {
        self.normals.is_empty()
    }

    pub fn area(&self) -> f64 {
        self.area
    }

    pub fn energy(&self, n: &Vec3) -> f64 {
        FOURTH_ROOT_24
            * compensated_sum(self.normals.iter().zip(&self.weights).map(|(nu, w)| {
                let c = nu.dot(n);
                w * (1.0 - (1.0 - c * c).max(0.0).sqrt())
            }))
    }

    pub fn residual(&self, n: &Vec3) -> Vec3 {
        residual_terms(self.normals.iter().zip(&self.weights), n)
    }

    /// Riemannian gradient of [`Objective::energy`].
    pub fn gradient(&self, n: &Vec3) -> Vec3 {
        self.residual(n) * FOURTH_ROOT_24
    }

    /// Merged normal within `radius` of `±n` with the largest weight. The
    /// objective has a conical point at each of these.
    fn nearest_atom(&self, n: &Vec3, radius: f64) -> Option<Vec3> {
        let cos_r = radius.cos();
        self.normals
            .iter()
            .zip(&self.weights)
            .filter(|(nu, _)| nu.dot(n).abs() >= cos_r)
            .max_by(|a, b| a.1.total_cmp(b.1))
            .map(|(nu, _)| if nu.dot(n) < 0.0 { -nu } else { *nu })
    }

    /// Central-difference Hessian of the energy in the chart
    /// `ξ ↦ (n + ξ₁a + ξ₂b)/|·|`.
    pub fn chart_hessian(&self, n: &Vec3, h: f64) -> [[f64; 2]; 2] {
        let (a, b) = tangent_basis(n);
        let at = |x: f64, y: f64| self.energy(&(n + a * x + b * y).normalize());
        let f0 = at(0.0, 0.0);
        let h11 = (at(h, 0.0) + at(-h, 0.0) - 2.0 * f0) / (h * h);
        let h22 = (at(0.0, h) + at(0.0, -h) - 2.0 * f0) / (h * h);
        let h12 = (at(h, h) - at(h, -h) - at(-h, h) + at(-h, -h)) / (4.0 * h * h);
        [[h11, h12], [h12, h22]]
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Classification {
    Minimum,
    Maximum,
    Saddle,
}

/// The set of directions a reported critical point stands for.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Orbit {
    /// The pair `{n, −n}`.
    Antipodal,
    /// Every direction with `|n₃|` equal to that of the representative.
    AxialCircle { n3: f64 },
    /// The whole sphere; the energy is constant.
    AllDirections,
}

impl Orbit {
    /// Number of isolated directions represented, `None` for continua.
    pub fn multiplicity(&self) -> Option<usize> {
        match self {
            Orbit::Antipodal => Some(2),
            Orbit::AxialCircle { n3 } if (n3.abs() - 1.0).abs() < 1e-12 => Some(2),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CriticalPoint {
    pub direction: Direction,
    pub energy: f64,
    pub residual_norm: f64,
    pub classification: Classification,
    pub orbit: Orbit,
}

impl CriticalPoint {
    /// The isolated directions of the orbit (just the representative for a
    /// continuum).
    pub fn points(&self) -> Vec<Vec3> {
        match self.orbit.multiplicity() {
            Some(_) => vec![self.direction.vec(), -self.direction.vec()],
            None => vec![self.direction.vec()],
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct Census {
    pub minima: usize,
    pub maxima: usize,
    pub saddles: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OrientationReport {
    /// Sorted by ascending energy.
    pub critical_points: Vec<CriticalPoint>,
    /// Bound on the residual norm of every listed point.
    pub tolerance: f64,
    pub symmetry: SymmetryClass,
    /// Converged candidates dropped because their residual stayed above
    /// the tolerance.
    pub rejected: usize,
}

impl OrientationReport {
    /// Counts isolated points by type; each continuous orbit counts once.
    pub fn census(&self) -> Census {
        let mut c = Census::default();
        for p in &self.critical_points {
            let k = p.orbit.multiplicity().unwrap_or(1);
            match p.classification {
                Classification::Minimum => c.minima += k,
                Classification::Maximum => c.maxima += k,
                Classification::Saddle => c.saddles += k,
            }
        }
        c
    }

    pub fn minima(&self) -> impl Iterator<Item = &CriticalPoint> {
        self.critical_points
            .iter()
            .filter(|p| p.classification == Classification::Minimum)
    }

    /// Lowest energy among the listed points.
    pub fn min_energy(&self) -> Option<f64> {
        self.critical_points.first().map(|p| p.energy)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct MinimizeOptions {
    /// Points of the Fibonacci lattice on the upper hemisphere.
    pub lattice_points: usize,
    /// Lattice neighbours used to detect discrete extrema.
    pub neighbours: usize,
    pub max_iterations: usize,
    /// Residual norm at which an iterate counts as critical.
    pub tolerance: f64,
    /// Geodesic radius for merging converged points.
    pub cluster_radius: f64,
    pub hessian_step: f64,
    /// Resolution of the quadrature rule behind the objective.
    pub resolution: usize,
    /// Resolution of the engine that re-evaluates reported energies.
    pub energy_resolution: usize,
}

impl Default for MinimizeOptions {
    fn default() -> Self {
        MinimizeOptions {
            lattice_points: 2048,
            neighbours: 8,
            max_iterations: 500,
            tolerance: 1e-8,
            cluster_radius: 1e-3,
            hessian_step: 1e-4,
            resolution: 48,
            energy_resolution: DEFAULT_RESOLUTION,
        }
    }
}

/// Fibonacci lattice on the closed upper hemisphere.
pub fn fibonacci_hemisphere(count: usize) -> Vec<Vec3> {
    let golden = std::f64::consts::PI * (3.0 - 5f64.sqrt());
    (0..count)
        .map(|i| {
            let z = 1.0 - (i as f64 + 0.5) / count as f64;
            let r = (1.0 - z * z).max(0.0).sqrt();
            let phi = golden * i as f64;
            Vec3::new(r * phi.cos(), r * phi.sin(), z)
        })
        .collect()
}

/// Angle between the lines spanned by `a` and `b`.
pub fn axial_distance(a: &Vec3, b: &Vec3) -> f64 {
    geodesic_distance(a, b).min(geodesic_distance(a, &-b))
}

fn canonical_sign(n: Vec3) -> Vec3 {
    let first = [n.z, n.y, n.x]
        .into_iter()
        .find(|c| c.abs() > 1e-12)
        .unwrap_or(1.0);
    if first < 0.0 {
        -n
    } else {
        n
    }
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Method {
    Descend,
    Ascend,
    Newton,
}

struct Searcher<'a> {
    obj: &'a Objective,
    opts: &'a MinimizeOptions,
}

impl Searcher<'_> {
    fn converged(&self, n: &Vec3) -> bool {
        self.obj.residual(n).norm() <= self.opts.tolerance
    }

    fn run(&self, method: Method, n0: Vec3) -> Result<Option<Vec3>> {
        match method {
            Method::Newton => Ok(self.newton(n0)),
            _ => {
                let sign = if method == Method::Descend { 1.0 } else { -1.0 };
                let n = self.descend(n0, sign)?;
                // The line search cannot resolve energy decreases below
                // rounding; Newton on the gradient finishes the job.
                if self.converged(&n) {
                    Ok(Some(n))
                } else {
                    Ok(Some(
                        self.newton(n)
                            .filter(|m| geodesic_distance(m, &n) < 1e-3)
                            .unwrap_or(n),
                    ))
                }
            }
        }
    }

    /// Projected gradient descent of `sign·E` with Armijo backtracking and
    /// retraction by normalization. A stalled line search ends the run; the
    /// caller filters by residual.
    fn descend(&self, n0: Vec3, sign: f64) -> Result<Vec3> {
        let obj = self.obj;
        let mut n = n0;
        let mut f = sign * obj.energy(&n);
        let mut alpha = 0.05 / (FOURTH_ROOT_24 * obj.area.max(1e-300));
        for _ in 0..self.opts.max_iterations {
            let g = obj.gradient(&n) * sign;
            if g.norm() <= self.opts.tolerance * FOURTH_ROOT_24 {
                return Ok(n);
            }
            if let Some(a) = obj.nearest_atom(&n, 1e-3) {
                let fa = sign * obj.energy(&a);
                if geodesic_distance(&a, &n) > 0.0 && fa <= f {
                    n = a;
                    f = fa;
                    continue;
                }
            }
            let g2 = g.norm_squared();
            loop {
                let trial = (n - g * alpha).normalize();
                let ft = sign * obj.energy(&trial);
                if ft <= f - 1e-4 * alpha * g2 {
                    n = trial;
                    f = ft;
                    alpha *= 2.0;
                    break;
                }
                alpha *= 0.5;
                if alpha * g2.sqrt() < 1e-15 {
                    return Ok(n);
                }
            }
        }
        if self.converged(&n) {
            Ok(n)
        } else {
            Err(Error::NoConvergence {
                iterations: self.opts.max_iterations,
            })
        }
    }

    /// Damped Newton iteration on the gradient in a tangent chart. Finds
    /// critical points of any type; `None` when it fails to settle.
    fn newton(&self, n0: Vec3) -> Option<Vec3> {
        let obj = self.obj;
        let mut n = n0;
        let mut g = obj.gradient(&n);
        for _ in 0..50 {
            if g.norm() <= self.opts.tolerance * FOURTH_ROOT_24 {
                return Some(n);
            }
            let (a, b) = tangent_basis(&n);
            let [[h11, h12], [_, h22]] = obj.chart_hessian(&n, self.opts.hessian_step);
            let det = h11 * h22 - h12 * h12;
            if det.abs() < 1e-300 {
                return None;
            }
            let (g1, g2) = (g.dot(&a), g.dot(&b));
            let mut x = -(h22 * g1 - h12 * g2) / det;
            let mut y = -(h11 * g2 - h12 * g1) / det;
            let len = x.hypot(y);
            if len > 0.1 {
                x *= 0.1 / len;
                y *= 0.1 / len;
            }
            let mut t = 1.0;
            loop {
                let trial = (n + a * (t * x) + b * (t * y)).normalize();
                let gt = obj.gradient(&trial);
                if gt.norm() < (1.0 - 1e-4 * t) * g.norm() {
                    n = trial;
                    g = gt;
                    break;
                }
                t *= 0.5;
                if t < 1e-6 {
                    return None;
                }
            }
        }
        self.converged(&n).then_some(n)
    }

    fn classify(&self, n: &Vec3, axial: bool) -> Classification {
        let tau = 1e-4 * FOURTH_ROOT_24 * self.obj.area;
        if axial {
            // Only the meridian direction carries information.
            let m = if n.x.hypot(n.y) < 1e-12 {
                Vec3::x()
            } else {
                Vec3::new(-n.z * n.x, -n.z * n.y, n.x * n.x + n.y * n.y).normalize()
            };
            let h = self.opts.hessian_step;
            let at = |t: f64| self.obj.energy(&(n + m * t).normalize());
            let l = (at(h) + at(-h) - 2.0 * at(0.0)) / (h * h);
            return if l > tau {
                Classification::Minimum
            } else if l < -tau {
                Classification::Maximum
            } else {
                self.classify_by_ring(n)
            };
        }
        let [[a, b], [_, d]] = self.obj.chart_hessian(n, self.opts.hessian_step);
        let mean = 0.5 * (a + d);
        let rad = (0.25 * (a - d) * (a - d) + b * b).sqrt();
        let (l1, l2) = (mean - rad, mean + rad);
        match (l1 < -tau, l2 > tau) {
            (true, true) => Classification::Saddle,
            (false, true) => Classification::Minimum,
            (true, false) => Classification::Maximum,
            (false, false) => self.classify_by_ring(n),
        }
    }

    /// Fallback for flat Hessians: compare with a ring of nearby values.
    fn classify_by_ring(&self, n: &Vec3) -> Classification {
        let (a, b) = tangent_basis(n);
        let f0 = self.obj.energy(n);
        let r = 10.0 * self.opts.hessian_step;
        let tol = 1e-13 * f0.abs().max(1.0);
        let (mut above, mut below) = (false, false);
        for k in 0..16 {
            let t = k as f64 * std::f64::consts::PI / 8.0;
            let f = self
                .obj
                .energy(&(n + a * (r * t.cos()) + b * (r * t.sin())).normalize());
            above |= f > f0 + tol;
            below |= f < f0 - tol;
        }
        match (above, below) {
            (true, true) => Classification::Saddle,
            (false, true) => Classification::Maximum,
            _ => Classification::Minimum,
        }
    }
}

/// Locates and classifies the critical points of `E₀(M; ·)`: a lattice scan
/// seeds descent from discrete minima, ascent from discrete maxima and
/// Newton iterations from discrete minima of the gradient norm.
pub fn minimize(surface: &Surface, opts: &MinimizeOptions) -> Result<OrientationReport> {
    let obj = Objective::for_surface(surface, opts.resolution)?;
    let symmetry = surface.symmetry();
    let searcher = Searcher { obj: &obj, opts };
    let energy_of = |n: &Vec3| -> Result<f64> {
        Ok(e0(
            surface,
            &Direction::new(*n)?,
            EngineChoice::Auto,
            opts.energy_resolution,
        )?
        .value)
    };

    if symmetry == SymmetryClass::Full {
        let n = Direction::e3();
        let point = CriticalPoint {
            direction: n,
            energy: energy_of(&n.vec())?,
            residual_norm: residual(&surface.sample_aligned(opts.resolution, &n)?, &n).norm(),
            classification: Classification::Minimum,
            orbit: Orbit::AllDirections,
        };
        return Ok(OrientationReport {
            critical_points: vec![point],
            tolerance: opts.tolerance,
            symmetry,
            rejected: 0,
        });
    }

    let lattice = fibonacci_hemisphere(opts.lattice_points.max(16));
    let values: Vec<(f64, f64)> = lattice
        .par_iter()
        .map(|n| (obj.energy(n), obj.gradient(n).norm()))
        .collect();
    let k = opts.neighbours.max(3);
    let neighbours: Vec<Vec<usize>> = lattice
        .par_iter()
        .enumerate()
        .map(|(i, n)| {
            let mut d: Vec<(f64, usize)> = lattice
                .iter()
                .enumerate()
                .filter(|(j, _)| *j != i)
                .map(|(j, m)| (-n.dot(m).abs(), j))
                .collect();
            d.select_nth_unstable_by(k - 1, |a, b| a.0.total_cmp(&b.0));
            d[..k].iter().map(|&(_, j)| j).collect()
        })
        .collect();

    let mut seeds = Vec::new();
    for (i, nb) in neighbours.iter().enumerate() {
        let (f, g) = values[i];
        let is_min = nb.iter().all(|&j| values[j].0 > f);
        let is_max = nb.iter().all(|&j| values[j].0 < f);
        if is_min {
            seeds.push((Method::Descend, lattice[i]));
        }
        if is_max {
            seeds.push((Method::Ascend, lattice[i]));
        }
        if !is_min && !is_max && nb.iter().all(|&j| values[j].1 > g) {
            seeds.push((Method::Newton, lattice[i]));
        }
    }

    let outcomes: Vec<Result<Option<Vec3>>> =
        seeds.par_iter().map(|&(m, n)| searcher.run(m, n)).collect();
    let mut candidates = Vec::new();
    for o in outcomes {
        if let Some(n) = o? {
            candidates.push(canonical_sign(n));
        }
    }

    // Merge candidates that describe the same line, keeping the best residual.
    let mut clusters: Vec<(Vec3, f64)> = Vec::new();
    for n in candidates {
        let r = obj.residual(&n).norm();
        match clusters
            .iter_mut()
            .find(|(c, _)| axial_distance(c, &n) < opts.cluster_radius)
        {
            Some(c) if r < c.1 => *c = (n, r),
            Some(_) => {}
            None => clusters.push((n, r)),
        }
    }

    // Symmetry orbits; axial shapes keep one representative per |n₃|.
    let mut reps: Vec<(Vec3, Orbit)> = Vec::new();
    for (n, _) in clusters {
        let (rep, orbit) = if symmetry == SymmetryClass::Axial {
            let c = n.z.abs().min(1.0);
            (
                Vec3::new((1.0 - c * c).sqrt(), 0.0, c),
                Orbit::AxialCircle { n3: c },
            )
        } else {
            (n, Orbit::Antipodal)
        };
        if !reps
            .iter()
            .any(|(m, _)| axial_distance(m, &rep) < opts.cluster_radius)
        {
            reps.push((rep, orbit));
        }
    }

    let mut points = Vec::new();
    let mut rejected = 0;
    for (rep, orbit) in reps {
        let class = searcher.classify(&rep, symmetry == SymmetryClass::Axial);
        let method = match class {
            Classification::Minimum => Method::Descend,
            Classification::Maximum => Method::Ascend,
            Classification::Saddle => Method::Newton,
        };
        // Polishing keeps axial representatives in the x–z plane, where the
        // rule is mirror symmetric.
        let polished = searcher
            .run(method, rep)
            .ok()
            .flatten()
            .map(canonical_sign)
            .unwrap_or(rep);
        let direction = Direction::new(polished)?;
        let residual_norm = residual(
            &surface.sample_aligned(opts.resolution, &direction)?,
            &direction,
        )
        .norm();
        if residual_norm > opts.tolerance {
            rejected += 1;
            continue;
        }
        let orbit = match orbit {
            Orbit::AxialCircle { .. } => Orbit::AxialCircle {
                n3: polished.z.abs(),
            },
            o => o,
        };
        points.push(CriticalPoint {
            direction,
            energy: energy_of(&polished)?,
            residual_norm,
            classification: class,
            orbit,
        });
    }
    points.sort_by(|a, b| {
        a.energy.total_cmp(&b.energy).then_with(|| {
            let (x, y) = (a.direction.vec(), b.direction.vec());
            x.x.total_cmp(&y.x)
                .then(x.y.total_cmp(&y.y))
                .then(x.z.total_cmp(&y.z))
        })
    });
    Ok(OrientationReport {
        critical_points: points,
        tolerance: opts.tolerance,
        symmetry,
        rejected,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::energy::{e0_cube, e0_sphere};
    use crate::surfaces::AnalyticShape;
    use rand::{Rng, SeedableRng};

    fn shape(s: AnalyticShape) -> Surface {
        Surface::from(s)
    }

    #[test]
    fn residual_vanishes_by_symmetry() {
        let sphere = shape(AnalyticShape::sphere(1.0).unwrap());
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        for _ in 0..5 {
            let v = Vec3::new(
                rng.gen_range(-1.0..1.0),
                rng.gen_range(-1.0..1.0),
                rng.gen_range(-1.0..1.0),
            );
            let n = Direction::new(v).unwrap();
            let s = sphere.sample_aligned(64, &n).unwrap();
            assert!(residual(&s, &n).norm() < 1e-8);
        }
        let c = AnalyticShape::spherocylinder(1.0, 2.0)
            .unwrap()
            .sample(32)
            .unwrap();
        assert!(residual(&c, &Direction::e3()).norm() < 1e-8);
    }

    #[test]
    fn residual_is_tangent() {
        let s = AnalyticShape::torus(2.0, 1.0).unwrap().sample(24).unwrap();
        let n = Direction::from_components(0.3, -0.5, 0.8).unwrap();
        assert!(residual(&s, &n).dot(&n.vec()).abs() < 1e-12);
    }

    #[test]
    fn cube_residual_matches_finite_differences() {
        let s = AnalyticShape::cube(0.5).unwrap().sample(8).unwrap();
        let diag = Direction::from_components(1.0, 1.0, 1.0).unwrap();
        assert!(residual(&s, &diag).norm() < 1e-6);
        let n = Direction::from_components(0.2, 0.5, 0.7).unwrap();
        let g = residual(&s, &n) * FOURTH_ROOT_24;
        let (a, b) = tangent_basis(&n.vec());
        let h = 1e-5;
        let e = |v: Vec3| e0_cube(1.0, &Direction::new(v).unwrap()).unwrap();
        for t in [a, b] {
            let fd = (e(n.vec() + t * h) - e(n.vec() - t * h)) / (2.0 * h);
            assert!((fd - g.dot(&t)).abs() < 1e-6 * g.norm().max(1.0));
        }
    }

    #[test]
    fn merging_keeps_the_energy() {
        let samples = AnalyticShape::rounded_cube(1.0, 0.2)
            .unwrap()
            .sample(16)
            .unwrap();
        let obj = Objective::from_samples(&samples);
        assert!(obj.len() < samples.len() / 2);
        let n = Direction::from_components(0.1, 0.7, -0.4).unwrap();
        let direct = crate::energy::e0_quadrature(&samples, &n).value;
        assert!((obj.energy(&n.vec()) - direct).abs() < 1e-12 * direct);
    }

    #[test]
    fn lattice_covers_the_hemisphere() {
        let pts = fibonacci_hemisphere(2048);
        assert!(pts
            .iter()
            .all(|p| p.z > 0.0 && (p.norm() - 1.0).abs() < 1e-15));
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(4);
        for _ in 0..200 {
            let v = Vec3::new(
                rng.gen_range(-1.0..1.0),
                rng.gen_range(-1.0..1.0),
                rng.gen_range(-1.0..1.0),
            )
            .normalize();
            let d = pts
                .iter()
                .map(|p| axial_distance(p, &v))
                .fold(f64::INFINITY, f64::min);
            assert!(d < 0.05);
        }
    }

    #[test]
    fn sphere_is_one_orbit() {
        let r = minimize(
            &shape(AnalyticShape::sphere(1.0).unwrap()),
            &MinimizeOptions::default(),
        )
        .unwrap();
        assert_eq!(r.critical_points.len(), 1);
        assert_eq!(r.critical_points[0].orbit, Orbit::AllDirections);
        assert!((r.critical_points[0].energy - e0_sphere(1.0)).abs() < 1e-12);
    }

    #[test]
    fn spherocylinder_minimizer_is_the_axis() {
        let r = minimize(
            &shape(AnalyticShape::spherocylinder(1.0, 2.0).unwrap()),
            &MinimizeOptions::default(),
        )
        .unwrap();
        let mins: Vec<_> = r.minima().collect();
        assert_eq!(mins.len(), 1);
        assert!(axial_distance(&mins[0].direction.vec(), &Vec3::z()) < 1e-6);
        assert!((mins[0].energy - 5.968925).abs() < 1e-5);
        assert_eq!(r.critical_points[0], *mins[0]);
        assert!(r.critical_points.iter().all(|p| p.residual_norm < 1e-6));
    }

    #[test]
    fn torus_minimizer_is_the_equator() {
        let r = minimize(
            &shape(AnalyticShape::torus(2.0, 1.0).unwrap()),
            &MinimizeOptions::default(),
        )
        .unwrap();
        let best = &r.critical_points[0];
        assert_eq!(best.classification, Classification::Minimum);
        assert!(best.direction.z().abs() < 1e-4);
        assert!((best.energy - 27.602923).abs() < 1e-3);
        assert!(best.residual_norm < 1e-6);
    }

    #[test]
    fn cube_census() {
        let r = minimize(
            &shape(AnalyticShape::cube(1.0).unwrap()),
            &MinimizeOptions::default(),
        )
        .unwrap();
        assert_eq!(
            r.census(),
            Census {
                minima: 8,
                maxima: 6,
                saddles: 12
            }
        );
        let diag = 1.0 / 3f64.sqrt();
        for p in r.minima() {
            let v = p.direction.vec();
            assert!(v.iter().all(|c| (c.abs() - diag).abs() < 1e-6), "{v:?}");
        }
        for w in r.critical_points.windows(2) {
            assert!(w[0].energy <= w[1].energy);
        }
    }

    #[test]
    fn antipodal_flip_leaves_the_report() {
        // Reflecting the particle through its centre maps every normal to
        // its negative, which is the same as flipping n.
        let mesh = AnalyticShape::rounded_cube(1.0, 0.2)
            .unwrap()
            .tessellate(8)
            .unwrap();
        let flipped = crate::surfaces::TriMesh::new(
            mesh.vertices().iter().map(|v| -v).collect(),
            mesh.triangles().to_vec(),
        )
        .unwrap();
        let opts = MinimizeOptions {
            lattice_points: 512,
            ..Default::default()
        };
        let a = minimize(&Surface::from(mesh), &opts).unwrap();
        let b = minimize(&Surface::from(flipped), &opts).unwrap();
        assert!(!a.critical_points.is_empty());
        assert_eq!(a, b);
    }
}
