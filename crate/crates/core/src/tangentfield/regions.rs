//! Neighbourhoods of the set where the surface normal is parallel to the
//! alignment direction.

use crate::direction::Direction;
use crate::error::{Error, Result};
use crate::numerics::{tangent_basis, Vec3};
use crate::surfaces::{Core, OffsetSurface};
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

/// Points of a loop used for region boundaries.
pub const LOOP_POINTS: usize = 256;

/// Below this a direction component counts as zero when finding the part
/// of the core that supports a direction.
const SUPPORT_TOL: f64 = 1e-12;

/// A connected piece of `{ω : ν(ω) = ±n∞}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Feature {
    Point {
        p: Vec3,
    },
    Segment {
        from: Vec3,
        to: Vec3,
    },
    /// Rectangle `centre + s·u + t·v`, `|s| ≤ half_u`, `|t| ≤ half_v`.
    Rectangle {
        centre: Vec3,
        u: Vec3,
        v: Vec3,
        half_u: f64,
        half_v: f64,
    },
    /// Horizontal circle about the e₃ axis.
    Circle {
        radius: f64,
        z: f64,
    },
}

impl Feature {
    pub fn closest(&self, x: &Vec3) -> Vec3 {
        match *self {
            Feature::Point { p } => p,
            Feature::Segment { from, to } => {
                let d = to - from;
                let t = ((x - from).dot(&d) / d.norm_squared()).clamp(0.0, 1.0);
                from + d * t
            }
            Feature::Rectangle {
                centre,
                u,
                v,
                half_u,
                half_v,
            } => {
                let d = x - centre;
                centre + u * d.dot(&u).clamp(-half_u, half_u) + v * d.dot(&v).clamp(-half_v, half_v)
            }
            Feature::Circle { radius, z } => {
                let h = x.x.hypot(x.y);
                if h < 1e-300 {
                    Vec3::new(radius, 0.0, z)
                } else {
                    Vec3::new(radius * x.x / h, radius * x.y / h, z)
                }
            }
        }
    }

    pub fn distance(&self, x: &Vec3) -> f64 {
        (x - self.closest(x)).norm()
    }

    /// Centroid, for features that bound a disk-like neighbourhood.
    pub fn centroid(&self) -> Option<Vec3> {
        match *self {
            Feature::Point { p } => Some(p),
            Feature::Segment { from, to } => Some((from + to) * 0.5),
            Feature::Rectangle { centre, .. } => Some(centre),
            Feature::Circle { .. } => None,
        }
    }
}

/// Parts of the core whose outward normal cone contains `m`.
fn support(core: &Core, m: &Vec3) -> Vec<Feature> {
    match *core {
        Core::Point(c) => vec![Feature::Point { p: c }],
        Core::AxisSegment { half_length: h } => {
            if m.z > SUPPORT_TOL {
                vec![Feature::Point {
                    p: Vec3::new(0.0, 0.0, h),
                }]
            } else if m.z < -SUPPORT_TOL {
                vec![Feature::Point {
                    p: Vec3::new(0.0, 0.0, -h),
                }]
            } else {
                vec![Feature::Segment {
                    from: Vec3::new(0.0, 0.0, -h),
                    to: Vec3::new(0.0, 0.0, h),
                }]
            }
        }
        Core::Cube { half_width: a } => {
            let free: Vec<usize> = (0..3).filter(|&i| m[i].abs() <= SUPPORT_TOL).collect();
            let mut corner = Vec3::zeros();
            for i in 0..3 {
                if !free.contains(&i) {
                    corner[i] = a * m[i].signum();
                }
            }
            let axis = |i: usize| {
                let mut e = Vec3::zeros();
                e[i] = 1.0;
                e
            };
            match free.as_slice() {
                [] => vec![Feature::Point { p: corner }],
                [i] => vec![Feature::Segment {
                    from: corner - axis(*i) * a,
                    to: corner + axis(*i) * a,
                }],
                [i, j] => vec![Feature::Rectangle {
                    centre: corner,
                    u: axis(*i),
                    v: axis(*j),
                    half_u: a,
                    half_v: a,
                }],
                _ => Vec::new(),
            }
        }
        Core::Circle { radius } => {
            let mh = m.x.hypot(m.y);
            if mh <= SUPPORT_TOL {
                vec![Feature::Circle { radius, z: 0.0 }]
            } else {
                let u = Vec3::new(m.x / mh, m.y / mh, 0.0);
                vec![
                    Feature::Point { p: u * radius },
                    Feature::Point { p: -u * radius },
                ]
            }
        }
    }
}

/// Distance between two features by alternating closest-point steps, which
/// converge for the convex pieces and coaxial circles that occur here.
fn feature_gap(f: &Feature, g: &Feature) -> f64 {
    let mut x = f.centroid().unwrap_or_else(|| f.closest(&Vec3::zeros()));
    let mut y = g.closest(&x);
    for _ in 0..200 {
        x = f.closest(&y);
        y = g.closest(&x);
    }
    (x - y).norm()
}

/// Shifts a core feature along `m` by the offset radius.
fn offset(f: Feature, m: &Vec3, rho: f64) -> Feature {
    let d = m * rho;
    match f {
        Feature::Point { p } => Feature::Point { p: p + d },
        Feature::Segment { from, to } => Feature::Segment {
            from: from + d,
            to: to + d,
        },
        Feature::Rectangle {
            centre,
            u,
            v,
            half_u,
            half_v,
        } => Feature::Rectangle {
            centre: centre + d,
            u,
            v,
            half_u,
            half_v,
        },
        Feature::Circle { radius, z } => Feature::Circle { radius, z: z + d.z },
    }
}

/// Chart `(x, y) ↦ ω` with `ω − p` projecting to `x·a + y·b`, valid while the
/// surface is a graph over the tangent plane at `p`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MongeChart {
    pub p: Vec3,
    pub a: Vec3,
    pub b: Vec3,
    pub nu: Vec3,
}

impl MongeChart {
    pub fn at(surface: &OffsetSurface, p: Vec3) -> Result<Self> {
        let nu = surface.normal(&p)?;
        let (a, b) = tangent_basis(&nu);
        Ok(MongeChart { p, a, b, nu })
    }

    pub fn coords(&self, x: &Vec3) -> [f64; 2] {
        let d = x - self.p;
        [d.dot(&self.a), d.dot(&self.b)]
    }

    /// Surface point over chart coordinates `(x, y)`: the root of the signed
    /// distance along the chart normal through `p + x·a + y·b`.
    pub fn lift(&self, surface: &OffsetSurface, x: f64, y: f64) -> Result<Vec3> {
        let base = self.p + self.a * x + self.b * y;
        let tol = 1e-14 * (self.p.norm() + surface.rho + x.hypot(y));
        let mut t = 0.0;
        for _ in 0..100 {
            let w = base + self.nu * t;
            let f = surface.signed_distance(&w);
            let slope = surface.normal(&w)?.dot(&self.nu);
            if slope < 0.05 {
                break;
            }
            let step = f / slope;
            t -= step;
            if step.abs() <= tol {
                return surface.project(&(base + self.nu * t));
            }
        }
        Err(Error::Region(format!(
            "surface is not a graph over the chart at ({x}, {y})"
        )))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Region {
    pub feature: Feature,
    /// `+1` on `M⁺` (where `ν·n∞ > 0`), `−1` on `M⁻`.
    pub sign: i32,
    pub delta: f64,
    /// Boundary loops, oriented with the region on the left as seen from
    /// outside the particle.
    pub loops: Vec<Vec<Vec3>>,
    pub euler_characteristic: i32,
}

impl Region {
    pub fn contains(&self, x: &Vec3) -> bool {
        self.feature.distance(x) < self.delta
    }
}

/// Radius along the chart ray at angle `phi` where the distance to the
/// feature reaches `delta`.
pub(crate) fn boundary_radius(
    surface: &OffsetSurface,
    chart: &MongeChart,
    feature: &Feature,
    delta: f64,
    phi: f64,
) -> Result<f64> {
    let (c, s) = (phi.cos(), phi.sin());
    // Normals in the region stay within 60° of the chart normal, so a ray
    // that leaves the graph part of the chart has already left the region.
    let outside = |r: f64| match chart.lift(surface, r * c, r * s) {
        Ok(w) => feature.distance(&w) >= delta,
        Err(_) => true,
    };
    let step = 0.5 * delta;
    let limit = 1e3 * delta + 10.0 * surface.rho;
    let mut lo = 0.0;
    let mut hi = step;
    while !outside(hi) {
        lo = hi;
        hi += step;
        if hi > limit {
            return Err(Error::Region(
                "region boundary not found along a chart ray".into(),
            ));
        }
    }
    for _ in 0..60 {
        let mid = 0.5 * (lo + hi);
        if outside(mid) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    let r = 0.5 * (lo + hi);
    chart.lift(surface, r * c, r * s)?;
    Ok(r)
}

/// Reverses `lp` unless the region lies to the left of its tangent.
fn orient(
    surface: &OffsetSurface,
    feature: &Feature,
    delta: f64,
    mut lp: Vec<Vec3>,
) -> Result<Vec<Vec3>> {
    let t = lp[1] - lp[lp.len() - 1];
    let nu = surface.normal(&lp[0])?;
    let left = nu.cross(&t).normalize();
    let probe = surface.project(&(lp[0] + left * (1e-3 * delta)))?;
    if feature.distance(&probe) > delta {
        lp.reverse();
    }
    Ok(lp)
}

fn disk_loop(
    surface: &OffsetSurface,
    feature: &Feature,
    delta: f64,
    points: usize,
) -> Result<Vec<Vec3>> {
    let centre = feature.centroid().expect("disk feature");
    let chart = MongeChart::at(surface, centre)?;
    let mut lp = Vec::with_capacity(points);
    for k in 0..points {
        let phi = 2.0 * PI * k as f64 / points as f64;
        let r = boundary_radius(surface, &chart, feature, delta, phi)?;
        lp.push(chart.lift(surface, r * phi.cos(), r * phi.sin())?);
    }
    Ok(lp)
}

/// Tube angles `ψ` bounding the `δ`-neighbourhood of a circle feature on a
/// torus with tube radius `rho`.
pub(crate) fn annulus_angles(z: f64, rho: f64, delta: f64) -> (f64, f64) {
    let psi0 = (z / rho).clamp(-1.0, 1.0).asin();
    let beta = 2.0 * (0.5 * delta / rho).asin();
    (psi0 - beta, psi0 + beta)
}

fn annulus_loops(
    surface: &OffsetSurface,
    feature: &Feature,
    delta: f64,
    points: usize,
) -> Result<Vec<Vec<Vec3>>> {
    let (Feature::Circle { radius, z }, Core::Circle { .. }) = (*feature, surface.core) else {
        return Err(Error::Region("annular regions only occur on tori".into()));
    };
    let rho = surface.rho;
    let (lo, hi) = annulus_angles(z, rho, delta);
    let mut out = Vec::new();
    for psi in [lo, hi] {
        let lp: Vec<Vec3> = (0..points)
            .map(|k| {
                let th = 2.0 * PI * k as f64 / points as f64;
                let h = radius + rho * psi.cos();
                Vec3::new(h * th.cos(), h * th.sin(), rho * psi.sin())
            })
            .collect();
        out.push(orient(surface, feature, delta, lp)?);
    }
    Ok(out)
}

/// Connected `δ`-neighbourhoods of `{ν = n∞}` on `M⁺` and of `{ν = −n∞}` on
/// `M⁻`, each with its boundary loops.
pub fn degenerate_regions(
    surface: &OffsetSurface,
    n: &Direction,
    delta: f64,
) -> Result<Vec<Region>> {
    degenerate_regions_with(surface, n, delta, LOOP_POINTS)
}

pub fn degenerate_regions_with(
    surface: &OffsetSurface,
    n: &Direction,
    delta: f64,
    points: usize,
) -> Result<Vec<Region>> {
    if !(delta > 0.0 && delta < surface.rho) {
        return Err(Error::Domain(format!(
            "δ = {delta} must lie in (0, {}) for this surface",
            surface.rho
        )));
    }
    let mut features = Vec::new();
    for sign in [1, -1] {
        let m = n.vec() * sign as f64;
        for f in support(&surface.core, &m) {
            features.push((offset(f, &m, surface.rho), sign));
        }
    }
    for (i, (f, _)) in features.iter().enumerate() {
        for (g, _) in &features[i + 1..] {
            let gap = feature_gap(f, g);
            if gap < 2.0 * delta {
                return Err(Error::Region(format!(
                    "degenerate pieces are {gap:.3e} apart; reduce δ below half of that"
                )));
            }
        }
    }
    let mut regions = Vec::with_capacity(features.len());
    for (feature, sign) in features {
        let (loops, euler_characteristic) = match feature {
            Feature::Circle { .. } => (annulus_loops(surface, &feature, delta, points)?, 0),
            _ => {
                let lp = disk_loop(surface, &feature, delta, points)?;
                (vec![orient(surface, &feature, delta, lp)?], 1)
            }
        };
        regions.push(Region {
            feature,
            sign,
            delta,
            loops,
            euler_characteristic,
        });
    }
    Ok(regions)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::surfaces::AnalyticShape;

    fn offset_of(s: AnalyticShape) -> OffsetSurface {
        OffsetSurface::from_shape(&s).unwrap()
    }

    #[test]
    fn sphere_has_two_polar_caps() {
        let s = offset_of(AnalyticShape::sphere(1.0).unwrap());
        let r = degenerate_regions(&s, &Direction::e3(), 0.2).unwrap();
        assert_eq!(r.len(), 2);
        assert_eq!(r[0].feature, Feature::Point { p: Vec3::z() });
        assert_eq!(r[1].feature, Feature::Point { p: -Vec3::z() });
        for p in &r[0].loops[0] {
            assert!(((p - Vec3::z()).norm() - 0.2).abs() < 1e-12);
            assert!(s.signed_distance(p).abs() < 1e-12);
        }
    }

    #[test]
    fn torus_at_the_pole_has_two_annuli() {
        let s = offset_of(AnalyticShape::torus(2.0, 1.0).unwrap());
        let r = degenerate_regions(&s, &Direction::e3(), 0.2).unwrap();
        assert_eq!(r.len(), 2);
        for reg in &r {
            assert_eq!(reg.euler_characteristic, 0);
            assert_eq!(reg.loops.len(), 2);
            assert!(matches!(reg.feature, Feature::Circle { radius, .. } if radius == 2.0));
        }
    }

    #[test]
    fn spherocylinder_across_the_axis_has_two_strips() {
        let s = offset_of(AnalyticShape::spherocylinder(1.0, 2.0).unwrap());
        let r = degenerate_regions(&s, &Direction::e1(), 0.2).unwrap();
        assert_eq!(r.len(), 2);
        assert!(matches!(r[0].feature, Feature::Segment { .. }));
        let tilted = Direction::from_components(1.0, 0.0, 1.0).unwrap();
        let r = degenerate_regions(&s, &tilted, 0.2).unwrap();
        assert!(r.iter().all(|x| matches!(x.feature, Feature::Point { .. })));
    }

    #[test]
    fn rounded_cube_features() {
        let s = offset_of(AnalyticShape::rounded_cube(1.0, 0.1).unwrap());
        let diag = Direction::from_components(1.0, 1.0, 1.0).unwrap();
        let r = degenerate_regions(&s, &diag, 0.05).unwrap();
        assert_eq!(r.len(), 2);
        let corner = Vec3::repeat(0.9) + diag.vec() * 0.1;
        assert_eq!(r[0].feature, Feature::Point { p: corner });
        let r = degenerate_regions(&s, &Direction::e3(), 0.05).unwrap();
        assert!(matches!(r[0].feature, Feature::Rectangle { .. }));
        assert!(degenerate_regions(&s, &Direction::e3(), 0.2).is_err());
    }

    #[test]
    fn loops_keep_the_region_on_the_left() {
        let s = offset_of(AnalyticShape::torus(2.0, 1.0).unwrap());
        let n = Direction::from_components(1.0, 1.0, 1.0).unwrap();
        for reg in degenerate_regions(&s, &n, 0.2).unwrap() {
            let lp = &reg.loops[0];
            let nu = s.normal(&lp[0]).unwrap();
            let left = nu.cross(&(lp[1] - lp[0]));
            let inward = reg.feature.closest(&lp[0]) - lp[0];
            assert!(left.dot(&inward) > 0.0);
        }
    }
}
