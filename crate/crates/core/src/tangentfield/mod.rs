//! Tangential boundary director fields: the pointwise optimal field `v*`,
//! the regions where it degenerates, winding degrees, and a continuous field
//! with point defects built from them.

pub mod defect;
pub mod degree;
pub mod geodesic;
pub mod regions;

pub use defect::{defect_profile, DefectPatch, DefectRecord};
pub use degree::{loop_degree, winding, Winding};
pub use regions::{degenerate_regions, Feature, MongeChart, Region};

use crate::direction::Direction;
use crate::error::{Error, Result};
use crate::numerics::{compensated_sum, wrap_angle, Vec3, FOURTH_ROOT_24};
use crate::surfaces::{Core, OffsetSurface, QuadratureSamples};
use regions::{annulus_angles, boundary_radius, LOOP_POINTS};
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

/// `|ν·n∞|` above `1 − PARALLEL_TOL` counts as parallel.
const PARALLEL_TOL: f64 = 1e-12;

/// Unit tangent `v` maximizing `|v·n∞|`: `(n∞ − (ν·n∞)ν)/|n∞ − (ν·n∞)ν|`.
pub fn vstar(nu: &Direction, n: &Direction) -> Result<Direction> {
    let c = nu.dot(&n.vec());
    if c.abs() >= 1.0 - PARALLEL_TOL {
        return Err(Error::DegenerateNormal);
    }
    Direction::new(n.vec() - nu.vec() * c)
}

/// A unit tangent field on part of a surface.
pub trait DirectorField {
    fn eval(&self, x: &Vec3) -> Result<Vec3>;
}

impl<F: Fn(&Vec3) -> Result<Vec3>> DirectorField for F {
    fn eval(&self, x: &Vec3) -> Result<Vec3> {
        self(x)
    }
}

/// `v*` at every point of an offset surface.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VStarField {
    pub surface: OffsetSurface,
    pub n: Direction,
}

impl VStarField {
    pub fn new(surface: OffsetSurface, n: Direction) -> Self {
        VStarField { surface, n }
    }
}

impl DirectorField for VStarField {
    fn eval(&self, x: &Vec3) -> Result<Vec3> {
        let nu = Direction::new(self.surface.normal(x)?)?;
        Ok(vstar(&nu, &self.n)?.vec())
    }
}

/// Euler characteristic of a closed offset surface.
pub fn euler_characteristic(surface: &OffsetSurface) -> i32 {
    match surface.core {
        Core::Circle { .. } => 0,
        _ => 2,
    }
}

/// Degree of `v*` in a region: `χ(R)` plus the turns of `v*` relative to the
/// boundary tangent on each oriented boundary loop.
pub fn region_degree(surface: &OffsetSurface, region: &Region, n: &Direction) -> Result<i32> {
    let f = VStarField::new(*surface, *n);
    let mut d = region.euler_characteristic;
    for lp in &region.loops {
        d += winding(surface, lp, &f)?.relative();
    }
    Ok(d)
}

/// Periodic table on a uniform grid over `[0, 2π)`, linearly interpolated.
#[derive(Debug, Clone, PartialEq)]
struct Periodic(Vec<f64>);

impl Periodic {
    fn step(&self) -> f64 {
        2.0 * PI / self.0.len() as f64
    }

    fn node(&self, k: usize) -> f64 {
        k as f64 * self.step()
    }

    fn at(&self, phi: f64) -> f64 {
        let n = self.0.len();
        let s = phi.rem_euclid(2.0 * PI) / self.step();
        let k = (s.floor() as usize).min(n - 1);
        let t = s - k as f64;
        self.0[k] * (1.0 - t) + self.0[(k + 1) % n] * t
    }
}

/// The branch of `raw` (mod 2π) closest to `reference`.
fn nearest_branch(raw: f64, reference: f64) -> f64 {
    reference + wrap_angle(raw - reference)
}

/// Lifts angle samples to a continuous sequence and checks it closes up.
fn lift_periodic(raw: &[f64], what: &str) -> Result<Periodic> {
    let mut out = Vec::with_capacity(raw.len());
    let mut prev = wrap_angle(raw[0]);
    for &r in raw {
        prev = nearest_branch(r, prev);
        out.push(prev);
    }
    let closing = nearest_branch(raw[0], prev);
    if (closing - out[0]).abs() > 1e-6 {
        return Err(Error::Region(format!(
            "{what} does not close up ({:.3} turns)",
            (closing - out[0]) / (2.0 * PI)
        )));
    }
    Ok(Periodic(out))
}

fn angle_of(v: &Vec3, w: &Vec3, nu: &Vec3) -> f64 {
    v.dot(&nu.cross(w)).atan2(v.dot(w))
}

fn from_angle(alpha: f64, w: &Vec3, nu: &Vec3) -> Vec3 {
    w * alpha.cos() + nu.cross(w) * alpha.sin()
}

/// Field inside a disk-like region, written as an angle against the frame
/// `P_ν(a)` in polar coordinates `(r, φ)` of the region's chart.
#[derive(Debug, Clone, PartialEq)]
struct DiskFill {
    chart: MongeChart,
    radius: Periodic,
    inner: DiskInner,
}

#[derive(Debug, Clone, PartialEq)]
enum DiskInner {
    /// Defect profile for `r ≤ r_in`, then angle interpolation out to `v*`.
    Defect {
        patch: DefectPatch,
        r_in: f64,
        delta: Periodic,
    },
    /// Degree zero: the outer angle scaled towards a constant at the centre.
    Smooth { centre: f64, outer: Periodic },
}

/// Field inside a tube around a circle on the torus, as an angle against
/// the azimuthal direction, interpolated in the tube angle `ψ`.
#[derive(Debug, Clone, PartialEq)]
struct AnnulusFill {
    major: f64,
    psi: (f64, f64),
    delta: Periodic,
}

#[derive(Debug, Clone, PartialEq)]
enum Fill {
    Disk(Box<DiskFill>),
    Annulus(AnnulusFill),
}

fn disk_frame(surface: &OffsetSurface, chart: &MongeChart, x: &Vec3) -> Result<(Vec3, Vec3)> {
    let nu = surface.normal(x)?;
    let w = chart.a - nu * nu.dot(&chart.a);
    Ok((w.normalize(), nu))
}

fn torus_point(major: f64, rho: f64, theta: f64, psi: f64) -> Vec3 {
    let h = major + rho * psi.cos();
    Vec3::new(h * theta.cos(), h * theta.sin(), rho * psi.sin())
}

fn azimuthal(x: &Vec3) -> Vec3 {
    Vec3::new(-x.y, x.x, 0.0).normalize()
}

impl DiskFill {
    /// Chart polar coordinates of `x` if it lies in the region.
    fn locate(&self, surface: &OffsetSurface, x: &Vec3) -> Option<(f64, f64)> {
        let [u, v] = self.chart.coords(x);
        let r = u.hypot(v);
        let phi = v.atan2(u);
        if r >= self.radius.at(phi) {
            return None;
        }
        // Reject points on other sheets over the same chart disk.
        let lifted = self.chart.lift(surface, u, v).ok()?;
        ((lifted - x).norm() <= 1e-9 * (surface.rho + r)).then_some((r, phi))
    }

    fn outer_point(&self, surface: &OffsetSurface, phi: f64) -> Result<Vec3> {
        let rb = self.radius.at(phi);
        self.chart.lift(surface, rb * phi.cos(), rb * phi.sin())
    }

    fn eval(
        &self,
        surface: &OffsetSurface,
        n: &Direction,
        x: &Vec3,
        r: f64,
        phi: f64,
    ) -> Result<Vec3> {
        let vs = VStarField::new(*surface, *n);
        let q_out = self.outer_point(surface, phi)?;
        let (w_out, nu_out) = disk_frame(surface, &self.chart, &q_out)?;
        let a_out = angle_of(&vs.eval(&q_out)?, &w_out, &nu_out);
        let (w, nu) = disk_frame(surface, &self.chart, x)?;
        let rb = self.radius.at(phi);
        match &self.inner {
            DiskInner::Defect { patch, r_in, delta } => {
                if r <= *r_in {
                    return patch.eval(x);
                }
                let q_in = self
                    .chart
                    .lift(surface, r_in * phi.cos(), r_in * phi.sin())?;
                let (w_in, nu_in) = disk_frame(surface, &self.chart, &q_in)?;
                let a_in = angle_of(&patch.eval(&q_in)?, &w_in, &nu_in);
                let d = nearest_branch(a_out - a_in, delta.at(phi));
                let lambda = ((r - r_in) / (rb - r_in)).clamp(0.0, 1.0);
                Ok(from_angle(a_in + lambda * d, &w, &nu))
            }
            DiskInner::Smooth { centre, outer } => {
                let a = nearest_branch(a_out, outer.at(phi));
                Ok(from_angle(centre + (r / rb) * (a - centre), &w, &nu))
            }
        }
    }
}

impl AnnulusFill {
    fn locate(&self, surface: &OffsetSurface, x: &Vec3) -> Option<(f64, f64)> {
        let h = x.x.hypot(x.y);
        let psi = x.z.atan2(h - self.major);
        let theta = x.y.atan2(x.x);
        ((psi > self.psi.0 && psi < self.psi.1)
            && surface.signed_distance(x).abs() < 1e-9 * surface.rho)
            .then_some((theta, psi))
    }

    fn edge_angle(
        &self,
        surface: &OffsetSurface,
        n: &Direction,
        theta: f64,
        psi: f64,
    ) -> Result<f64> {
        let q = torus_point(self.major, surface.rho, theta, psi);
        let nu = surface.normal(&q)?;
        let v = VStarField::new(*surface, *n).eval(&q)?;
        Ok(angle_of(&v, &azimuthal(&q), &nu))
    }

    fn eval(
        &self,
        surface: &OffsetSurface,
        n: &Direction,
        x: &Vec3,
        theta: f64,
        psi: f64,
    ) -> Result<Vec3> {
        let lo = self.edge_angle(surface, n, theta, self.psi.0)?;
        let hi = self.edge_angle(surface, n, theta, self.psi.1)?;
        let d = nearest_branch(hi - lo, self.delta.at(theta));
        let lambda = (psi - self.psi.0) / (self.psi.1 - self.psi.0);
        let nu = surface.normal(x)?;
        Ok(from_angle(lo + lambda * d, &azimuthal(x), &nu))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RegionSummary {
    pub region: Region,
    /// Degree of `v*` around the region boundary.
    pub degree: i32,
    pub defects: usize,
}

/// Continuous unit tangent field equal to `v*` away from the degenerate
/// regions, with point defects carrying the regions' degrees.
#[derive(Debug, Clone, PartialEq)]
pub struct TangentField {
    pub surface: OffsetSurface,
    pub n: Direction,
    pub delta: f64,
    pub regions: Vec<RegionSummary>,
    pub defects: Vec<DefectRecord>,
    fills: Vec<Fill>,
}

impl TangentField {
    pub fn total_degree(&self) -> i32 {
        self.defects.iter().map(|d| d.degree).sum()
    }
}

impl DirectorField for TangentField {
    fn eval(&self, x: &Vec3) -> Result<Vec3> {
        let s = &self.surface;
        for fill in &self.fills {
            match fill {
                Fill::Disk(f) => {
                    if let Some((r, phi)) = f.locate(s, x) {
                        return f.eval(s, &self.n, x, r, phi);
                    }
                }
                Fill::Annulus(f) => {
                    if let Some((theta, psi)) = f.locate(s, x) {
                        return f.eval(s, &self.n, x, theta, psi);
                    }
                }
            }
        }
        VStarField::new(*s, self.n).eval(x)
    }
}

fn disk_fill(
    surface: &OffsetSurface,
    n: &Direction,
    region: &Region,
    degree: i32,
) -> Result<(DiskFill, Option<DefectRecord>)> {
    let centre = region
        .feature
        .centroid()
        .ok_or_else(|| Error::Region("disk region without a centre".into()))?;
    let chart = MongeChart::at(surface, centre)?;
    let grid = Periodic(vec![0.0; LOOP_POINTS]);
    let radii = (0..LOOP_POINTS)
        .map(|k| boundary_radius(surface, &chart, &region.feature, region.delta, grid.node(k)))
        .collect::<Result<Vec<_>>>()?;
    let radius = Periodic(radii);
    let mut fill = DiskFill {
        chart,
        radius,
        inner: DiskInner::Smooth {
            centre: 0.0,
            outer: Periodic(Vec::new()),
        },
    };
    let vs = VStarField::new(*surface, *n);
    let mut outer = Vec::with_capacity(LOOP_POINTS);
    for k in 0..LOOP_POINTS {
        let q = fill.outer_point(surface, grid.node(k))?;
        let (w, nu) = disk_frame(surface, &chart, &q)?;
        outer.push(angle_of(&vs.eval(&q)?, &w, &nu));
    }
    if degree == 0 {
        let outer = lift_periodic(&outer, "boundary angle")?;
        let centre = outer.0.iter().sum::<f64>() / LOOP_POINTS as f64;
        fill.inner = DiskInner::Smooth { centre, outer };
        return Ok((fill, None));
    }
    let r_in = region.delta / 4.0;
    let r_min = fill.radius.0.iter().copied().fold(f64::INFINITY, f64::min);
    if r_in >= 0.5 * r_min {
        return Err(Error::Region(format!(
            "defect patch of radius {r_in} does not fit in its region"
        )));
    }
    let patch = defect_profile(surface, &centre, r_in, degree)?;
    let mut delta = Vec::with_capacity(LOOP_POINTS);
    for (k, a_out) in outer.iter().enumerate() {
        let phi = grid.node(k);
        let q = chart.lift(surface, r_in * phi.cos(), r_in * phi.sin())?;
        let (w, nu) = disk_frame(surface, &chart, &q)?;
        delta.push(a_out - angle_of(&patch.eval(&q)?, &w, &nu));
    }
    let delta = lift_periodic(&delta, "defect profile against v*")?;
    fill.inner = DiskInner::Defect { patch, r_in, delta };
    Ok((fill, Some(patch.record())))
}

fn annulus_fill(surface: &OffsetSurface, n: &Direction, region: &Region) -> Result<AnnulusFill> {
    let Feature::Circle { radius, z } = region.feature else {
        return Err(Error::Region("annulus without a circle".into()));
    };
    let mut fill = AnnulusFill {
        major: radius,
        psi: annulus_angles(z, surface.rho, region.delta),
        delta: Periodic(Vec::new()),
    };
    let grid = Periodic(vec![0.0; LOOP_POINTS]);
    let mut delta = Vec::with_capacity(LOOP_POINTS);
    for k in 0..LOOP_POINTS {
        let th = grid.node(k);
        delta.push(
            fill.edge_angle(surface, n, th, fill.psi.1)?
                - fill.edge_angle(surface, n, th, fill.psi.0)?,
        );
    }
    fill.delta = lift_periodic(&delta, "v* across the annulus")?;
    Ok(fill)
}

/// Builds the boundary field for alignment `n` with degenerate regions of
/// size `delta`: `v*` outside the regions, one defect of the region's degree
/// at the centre of each region of degree ±1, and angle interpolation in
/// between.
pub fn build_boundary_field(
    surface: &OffsetSurface,
    n: &Direction,
    delta: f64,
) -> Result<TangentField> {
    let regions = degenerate_regions(surface, n, delta)?;
    let mut summaries = Vec::with_capacity(regions.len());
    let mut fills = Vec::with_capacity(regions.len());
    let mut defects = Vec::new();
    for region in regions {
        let degree = region_degree(surface, &region, n)?;
        let mut count = 0;
        if region.euler_characteristic == 0 {
            if degree != 0 {
                return Err(Error::Unsupported(format!(
                    "annular region of degree {degree}"
                )));
            }
            fills.push(Fill::Annulus(annulus_fill(surface, n, &region)?));
        } else {
            if degree.abs() > 1 {
                return Err(Error::Unsupported(format!(
                    "region of degree {degree} needs several defects"
                )));
            }
            let (fill, record) = disk_fill(surface, n, &region, degree)?;
            if let Some(r) = record {
                defects.push(r);
                count = 1;
            }
            fills.push(Fill::Disk(Box::new(fill)));
        }
        summaries.push(RegionSummary {
            region,
            degree,
            defects: count,
        });
    }
    Ok(TangentField {
        surface: *surface,
        n: *n,
        delta,
        regions: summaries,
        defects,
        fills,
    })
}

/// `⁴√24 Σ w (1 − |v·n∞|)` over the samples; points where the field is
/// undefined (defect centres) are skipped.
pub fn field_surface_energy(
    samples: &QuadratureSamples,
    field: &dyn DirectorField,
    n: &Direction,
) -> f64 {
    let terms = samples
        .points
        .iter()
        .zip(&samples.weights)
        .filter_map(|(p, w)| {
            field
                .eval(p)
                .ok()
                .map(|v| w * FOURTH_ROOT_24 * (1.0 - n.dot(&v).abs()))
        });
    compensated_sum(terms)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RegionReport {
    pub loop_degree: i32,
    pub n_defects: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DefectReport {
    pub regions: Vec<RegionReport>,
    pub defects: Vec<DefectRecord>,
    pub total_degree: i32,
    pub euler_characteristic: i32,
    pub field_energy: f64,
}

/// Summary of [`build_boundary_field`] with the field energy on `samples`.
pub fn defect_report(field: &TangentField, samples: &QuadratureSamples) -> DefectReport {
    DefectReport {
        regions: field
            .regions
            .iter()
            .map(|r| RegionReport {
                loop_degree: r.degree,
                n_defects: r.defects,
            })
            .collect(),
        defects: field.defects.clone(),
        total_degree: field.total_degree(),
        euler_characteristic: euler_characteristic(&field.surface),
        field_energy: field_surface_energy(samples, field, &field.n),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::energy::e0_quadrature;
    use crate::surfaces::{AnalyticShape, Surface};

    fn offset(s: AnalyticShape) -> OffsetSurface {
        OffsetSurface::from_shape(&s).unwrap()
    }

    fn diag() -> Direction {
        Direction::from_components(1.0, 1.0, 1.0).unwrap()
    }

    #[test]
    fn vstar_examples() {
        let v = vstar(&Direction::e1(), &Direction::e3()).unwrap();
        assert_eq!(v.vec(), Vec3::z());
        let nu = Direction::from_components(1.0, 0.0, 1.0).unwrap();
        let v = vstar(&nu, &Direction::e3()).unwrap();
        let h = 0.5f64.sqrt();
        assert!((v.vec() - Vec3::new(-h, 0.0, h)).norm() < 1e-15);
        assert_eq!(
            vstar(&Direction::e3(), &Direction::e3()),
            Err(Error::DegenerateNormal)
        );
        let down = Direction::from_components(0.0, 0.0, -1.0).unwrap();
        assert_eq!(vstar(&down, &Direction::e3()), Err(Error::DegenerateNormal));
    }

    #[test]
    fn vstar_field_energy_is_e0() {
        let s = Surface::from(AnalyticShape::sphere(1.0).unwrap());
        let samples = s.sample(128).unwrap();
        let f = VStarField::new(offset(AnalyticShape::sphere(1.0).unwrap()), Direction::e3());
        let e = field_surface_energy(&samples, &f, &Direction::e3());
        assert!((e - 5.968925).abs() < 1e-6, "{e}");
        let q = e0_quadrature(&samples, &Direction::e3()).value;
        assert!((e - q).abs() < 1e-10);
    }

    #[test]
    fn sphere_field_has_two_sinks() {
        let s = offset(AnalyticShape::sphere(1.0).unwrap());
        let f = build_boundary_field(&s, &Direction::e3(), 0.2).unwrap();
        assert_eq!(f.defects.len(), 2);
        assert!(f.defects.iter().all(|d| d.degree == 1));
        assert_eq!(f.total_degree(), 2);
        assert!((f.defects[0].position - Vec3::z()).norm() < 1e-12);
    }

    #[test]
    fn field_is_unit_and_tangent() {
        let s = offset(AnalyticShape::sphere(1.0).unwrap());
        let f = build_boundary_field(&s, &Direction::e3(), 0.3).unwrap();
        let samples = Surface::from(AnalyticShape::sphere(1.0).unwrap())
            .sample(48)
            .unwrap();
        for (p, nu) in samples.points.iter().zip(&samples.normals) {
            let v = f.eval(p).unwrap();
            assert!((v.norm() - 1.0).abs() < 1e-10);
            assert!(v.dot(nu).abs() < 1e-8);
        }
    }

    #[test]
    fn field_is_continuous_across_the_boundaries() {
        let s = offset(AnalyticShape::sphere(1.0).unwrap());
        let f = build_boundary_field(&s, &Direction::e3(), 0.3).unwrap();
        // Walk down a meridian through the defect patch and the region edge.
        let mut prev: Option<Vec3> = None;
        for k in 1..=2000 {
            let t = 0.5 * k as f64 / 2000.0;
            let x = Vec3::new(t.sin() * 0.6, t.sin() * 0.8, t.cos());
            let v = f.eval(&x).unwrap();
            if let Some(p) = prev {
                assert!((v - p).norm() < 0.02, "jump at t = {t}");
            }
            prev = Some(v);
        }
    }

    #[test]
    fn defect_loops_carry_the_degree() {
        let s = offset(AnalyticShape::torus(2.0, 1.0).unwrap());
        let f = build_boundary_field(&s, &diag(), 0.2).unwrap();
        assert_eq!(f.defects.len(), 4);
        for d in &f.defects {
            let patch = defect_profile(&s, &d.position, d.radius, d.degree).unwrap();
            let lp = patch.circle(d.radius, 64).unwrap();
            assert_eq!(loop_degree(&s, &lp, &f).unwrap(), d.degree);
            let half = patch.circle(0.5 * d.radius, 64).unwrap();
            assert_eq!(loop_degree(&s, &half, &f).unwrap(), d.degree);
        }
        for r in &f.regions {
            let loop_d = winding(&s, &r.region.loops[0], &f).unwrap();
            assert_eq!(1 + loop_d.relative(), r.degree);
        }
        assert_eq!(f.total_degree(), 0);
    }

    #[test]
    fn torus_pole_has_annuli_and_no_defects() {
        let s = offset(AnalyticShape::torus(2.0, 1.0).unwrap());
        let f = build_boundary_field(&s, &Direction::e3(), 0.2).unwrap();
        assert_eq!(f.regions.len(), 2);
        assert!(f.regions.iter().all(|r| r.degree == 0));
        assert!(f.defects.is_empty());
        let x = Vec3::new(0.0, 2.0, 1.0);
        let v = f.eval(&x).unwrap();
        assert!((v.norm() - 1.0).abs() < 1e-12 && v.z.abs() < 1e-12);
    }

    #[test]
    fn poincare_hopf() {
        let shapes = [
            AnalyticShape::sphere(1.0).unwrap(),
            AnalyticShape::spherocylinder(1.0, 2.0).unwrap(),
            AnalyticShape::rounded_cube(1.0, 0.1).unwrap(),
            AnalyticShape::torus(2.0, 1.0).unwrap(),
        ];
        for shape in shapes {
            let s = offset(shape);
            let delta = 0.4 * s.rho;
            for n in [Direction::e3(), diag(), Direction::e1()] {
                let f = build_boundary_field(&s, &n, delta)
                    .unwrap_or_else(|e| panic!("{shape:?} {n:?}: {e}"));
                assert_eq!(
                    f.total_degree(),
                    euler_characteristic(&s),
                    "{shape:?} {n:?}"
                );
                let sum: i32 = f.regions.iter().map(|r| r.degree).sum();
                assert_eq!(sum, euler_characteristic(&s));
            }
        }
    }

    #[test]
    fn rounded_cube_corner_defects() {
        let s = offset(AnalyticShape::rounded_cube(1.0, 0.1).unwrap());
        let f = build_boundary_field(&s, &diag(), 0.05).unwrap();
        assert_eq!(f.defects.len(), 2);
        let c = 0.9 + 0.1 / 3f64.sqrt();
        for d in &f.defects {
            assert_eq!(d.degree, 1);
            assert!((d.position.abs() - Vec3::repeat(c)).norm() < 1e-12);
        }
    }

    #[test]
    fn sphere_energy_converges() {
        let shape = AnalyticShape::sphere(1.0).unwrap();
        let samples = Surface::from(shape).sample(96).unwrap();
        let s = offset(shape);
        let n = Direction::e3();
        let e0 = e0_quadrature(&samples, &n).value;
        let gaps: Vec<f64> = [0.4, 0.2, 0.1]
            .iter()
            .map(|&d| {
                let f = build_boundary_field(&s, &n, d).unwrap();
                field_surface_energy(&samples, &f, &n) - e0
            })
            .collect();
        assert!(
            gaps[0] > gaps[1] && gaps[1] > gaps[2] && gaps[2] >= -1e-8,
            "{gaps:?}"
        );
        assert!(gaps[2] < 0.05);
    }

    #[test]
    fn rounded_cube_energy_converges() {
        let shape = AnalyticShape::rounded_cube(1.0, 0.1).unwrap();
        let samples = Surface::from(shape).sample(64).unwrap();
        let s = offset(shape);
        for n in [diag(), Direction::e3()] {
            let e0 = e0_quadrature(&samples, &n).value;
            let gaps: Vec<f64> = [0.08, 0.04, 0.02]
                .iter()
                .map(|&d| {
                    let f = build_boundary_field(&s, &n, d).unwrap();
                    field_surface_energy(&samples, &f, &n) - e0
                })
                .collect();
            assert!(
                gaps[0] > gaps[1] && gaps[1] > gaps[2] && gaps[2] >= 0.0,
                "{gaps:?}"
            );
        }
    }

    #[test]
    fn field_energy_is_bounded_below() {
        let shape = AnalyticShape::torus(2.0, 1.0).unwrap();
        let samples = Surface::from(shape).sample(48).unwrap();
        let s = offset(shape);
        let n = diag();
        let f = build_boundary_field(&s, &n, 0.2).unwrap();
        let constant = |x: &Vec3| -> Result<Vec3> {
            let nu = s.normal(x)?;
            Ok((Vec3::x() - nu * nu.x).normalize())
        };
        let floor = e0_quadrature(&samples, &n).value - 1e-8;
        assert!(field_surface_energy(&samples, &f, &n) >= floor);
        assert!(field_surface_energy(&samples, &constant, &n) >= floor);
    }
}
