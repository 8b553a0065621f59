//! Surfaces generated by rotating a planar profile `γ(s) = (γ₁(s), γ₃(s))`
//! about the e₃ axis.

use super::QuadratureSamples;
use crate::direction::Direction;
use crate::error::{Error, Result};
use crate::numerics::{gauss_legendre, Vec3};
use serde::{Deserialize, Serialize};
use std::f64::consts::{FRAC_PI_2, PI};

const JOIN_TOL: f64 = 1e-10;

/// One analytic piece of a profile chain, in meridian coordinates `(ρ, z)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum ProfilePiece {
    Segment {
        from: [f64; 2],
        to: [f64; 2],
    },
    /// `center + radius·(cos t, sin t)` for `t` running from `start` to `end`.
    Arc {
        center: [f64; 2],
        radius: f64,
        start: f64,
        end: f64,
    },
}

impl ProfilePiece {
    /// Point at local parameter `u ∈ [0, 1]`.
    pub fn point(&self, u: f64) -> [f64; 2] {
        match *self {
            ProfilePiece::Segment { from, to } => [
                from[0] + u * (to[0] - from[0]),
                from[1] + u * (to[1] - from[1]),
            ],
            ProfilePiece::Arc {
                center,
                radius,
                start,
                end,
            } => {
                let t = start + u * (end - start);
                [center[0] + radius * t.cos(), center[1] + radius * t.sin()]
            }
        }
    }

    /// Derivative with respect to the local parameter `u`.
    pub fn tangent(&self, u: f64) -> [f64; 2] {
        match *self {
            ProfilePiece::Segment { from, to } => [to[0] - from[0], to[1] - from[1]],
            ProfilePiece::Arc {
                radius, start, end, ..
            } => {
                let t = start + u * (end - start);
                let d = end - start;
                [-radius * t.sin() * d, radius * t.cos() * d]
            }
        }
    }

    pub fn length(&self) -> f64 {
        match *self {
            ProfilePiece::Segment { from, to } => (to[0] - from[0]).hypot(to[1] - from[1]),
            ProfilePiece::Arc {
                radius, start, end, ..
            } => radius.abs() * (end - start).abs(),
        }
    }

    /// Unsigned curvature of the profile curve.
    pub fn curvature(&self) -> f64 {
        match *self {
            ProfilePiece::Segment { .. } => 0.0,
            ProfilePiece::Arc { radius, .. } => 1.0 / radius.abs(),
        }
    }

    /// Contribution of the piece to the signed area `½∮(ρ dz − z dρ)`.
    fn signed_area_term(&self) -> f64 {
        match *self {
            ProfilePiece::Segment { from, to } => 0.5 * (from[0] * to[1] - to[0] * from[1]),
            ProfilePiece::Arc {
                center,
                radius,
                start,
                end,
            } => {
                let (c0, c1) = (center[0], center[1]);
                let r = radius;
                // ½∫(x y′ − y x′) dt for x = c0 + r cos t, y = c1 + r sin t.
                0.5 * (r * r * (end - start)
                    + c0 * r * (end.sin() - start.sin())
                    + c1 * r * (end.cos() - start.cos()))
            }
        }
    }
}

/// A surface of revolution given by a chain of profile pieces. The chain is
/// either closed or starts and ends on the axis.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<ProfilePiece>", into = "Vec<ProfilePiece>")]
pub struct RevolutionSurface {
    pieces: Vec<ProfilePiece>,
    /// `+1` when the chain runs so that `(γ₃′, −γ₁′)` points outward.
    orientation: f64,
    closed: bool,
    /// Cumulative arc length at the start of each piece, normalized to [0, 1].
    breaks: Vec<f64>,
}

impl TryFrom<Vec<ProfilePiece>> for RevolutionSurface {
    type Error = Error;
    fn try_from(p: Vec<ProfilePiece>) -> Result<Self> {
        RevolutionSurface::new(p)
    }
}

impl From<RevolutionSurface> for Vec<ProfilePiece> {
    fn from(s: RevolutionSurface) -> Self {
        s.pieces
    }
}

fn close(a: [f64; 2], b: [f64; 2], scale: f64) -> bool {
    (a[0] - b[0]).hypot(a[1] - b[1]) <= JOIN_TOL * scale.max(1.0)
}

impl RevolutionSurface {
    pub fn new(pieces: Vec<ProfilePiece>) -> Result<Self> {
        if pieces.is_empty() {
            return Err(Error::InvalidShape("empty profile chain".into()));
        }
        let total: f64 = pieces.iter().map(ProfilePiece::length).sum();
        if !(total > 0.0) || !total.is_finite() {
            return Err(Error::InvalidShape("profile has no length".into()));
        }
        for (i, p) in pieces.iter().enumerate() {
            if !(p.length() > 1e-14 * total) {
                return Err(Error::DegenerateParameter(format!(
                    "piece {i} has zero length"
                )));
            }
            for k in 0..=64 {
                let rho = p.point(k as f64 / 64.0)[0];
                if rho < -JOIN_TOL * total {
                    return Err(Error::InvalidShape(format!(
                        "piece {i} crosses the axis (γ₁ = {rho})"
                    )));
                }
            }
            if let ProfilePiece::Segment { from, to } = p {
                if from[0].abs() <= JOIN_TOL * total && to[0].abs() <= JOIN_TOL * total {
                    return Err(Error::InvalidShape(format!("piece {i} lies on the axis")));
                }
            }
        }
        for (i, w) in pieces.windows(2).enumerate() {
            if !close(w[0].point(1.0), w[1].point(0.0), total) {
                return Err(Error::InvalidShape(format!(
                    "pieces {i} and {} do not join",
                    i + 1
                )));
            }
        }
        let first = pieces[0].point(0.0);
        let last = pieces[pieces.len() - 1].point(1.0);
        let closed = close(first, last, total);
        if !closed && (first[0].abs() > JOIN_TOL * total || last[0].abs() > JOIN_TOL * total) {
            return Err(Error::InvalidShape(
                "open profile must start and end on the axis".into(),
            ));
        }
        // Signed area of the region bounded by the chain (closed along the
        // axis when open); positive for counterclockwise traversal.
        let mut area: f64 = pieces.iter().map(ProfilePiece::signed_area_term).sum();
        if !closed {
            area += 0.5 * (last[0] * first[1] - first[0] * last[1]);
        }
        if area.abs() < 1e-14 * total * total {
            return Err(Error::InvalidShape("profile encloses no area".into()));
        }
        let mut breaks = Vec::with_capacity(pieces.len() + 1);
        let mut acc = 0.0;
        breaks.push(0.0);
        for p in &pieces {
            acc += p.length();
            breaks.push(acc / total);
        }
        Ok(RevolutionSurface {
            pieces,
            orientation: area.signum(),
            closed,
            breaks,
        })
    }

    /// Sphere of radius `r`, traversed from the south pole upward.
    pub fn sphere(r: f64) -> Result<Self> {
        RevolutionSurface::new(vec![ProfilePiece::Arc {
            center: [0.0, 0.0],
            radius: r,
            start: -PI / 2.0,
            end: PI / 2.0,
        }])
    }

    /// Cylinder of radius `r` and length `l` capped by hemispheres.
    pub fn spherocylinder(r: f64, l: f64) -> Result<Self> {
        let h = 0.5 * l;
        RevolutionSurface::new(vec![
            ProfilePiece::Arc {
                center: [0.0, -h],
                radius: r,
                start: -PI / 2.0,
                end: 0.0,
            },
            ProfilePiece::Segment {
                from: [r, -h],
                to: [r, h],
            },
            ProfilePiece::Arc {
                center: [0.0, h],
                radius: r,
                start: 0.0,
                end: PI / 2.0,
            },
        ])
    }

    /// Torus with tube radius `r` around the circle of radius `big_r`. The
    /// parameter `s = 0` is the top circle, where the normal is e₃.
    pub fn torus(big_r: f64, r: f64) -> Result<Self> {
        RevolutionSurface::new(vec![ProfilePiece::Arc {
            center: [big_r, 0.0],
            radius: r,
            start: PI / 2.0,
            end: PI / 2.0 - 2.0 * PI,
        }])
    }

    pub fn pieces(&self) -> &[ProfilePiece] {
        &self.pieces
    }

    pub fn is_closed(&self) -> bool {
        self.closed
    }

    /// True when consecutive pieces meet with matching unit tangents.
    pub fn is_tangent_continuous(&self) -> bool {
        let unit = |t: [f64; 2]| {
            let l = t[0].hypot(t[1]);
            [t[0] / l, t[1] / l]
        };
        let mut joins: Vec<(usize, usize)> =
            (0..self.pieces.len() - 1).map(|i| (i, i + 1)).collect();
        if self.closed {
            joins.push((self.pieces.len() - 1, 0));
        }
        joins.iter().all(|&(i, j)| {
            let a = unit(self.pieces[i].tangent(1.0));
            let b = unit(self.pieces[j].tangent(0.0));
            (a[0] - b[0]).hypot(a[1] - b[1]) < 1e-9
        })
    }

    fn locate(&self, s: f64) -> (usize, f64) {
        let s = s.clamp(0.0, 1.0);
        let i = match self.breaks.iter().position(|&b| b > s) {
            Some(0) => 0,
            Some(k) => k - 1,
            None => self.pieces.len() - 1,
        }
        .min(self.pieces.len() - 1);
        let (a, b) = (self.breaks[i], self.breaks[i + 1]);
        (i, ((s - a) / (b - a)).clamp(0.0, 1.0))
    }

    /// Profile point at normalized arc length `s`.
    pub fn profile_point(&self, s: f64) -> [f64; 2] {
        let (i, u) = self.locate(s);
        self.pieces[i].point(u)
    }

    /// Outward normal of the profile at a piece-local parameter.
    fn piece_normal(&self, i: usize, u: f64) -> Result<[f64; 2]> {
        let t = self.pieces[i].tangent(u);
        let len = t[0].hypot(t[1]);
        if len < 1e-300 {
            return Err(Error::DegenerateParameter(format!("|γ′| = 0 on piece {i}")));
        }
        Ok([
            self.orientation * t[1] / len,
            -self.orientation * t[0] / len,
        ])
    }

    pub fn point(&self, s: f64, theta: f64) -> Vec3 {
        let [rho, z] = self.profile_point(s);
        Vec3::new(rho * theta.cos(), rho * theta.sin(), z)
    }

    /// Outward unit normal at `(s, θ)`.
    pub fn normal(&self, s: f64, theta: f64) -> Result<Direction> {
        let (i, u) = self.locate(s);
        let [nr, nz] = self.piece_normal(i, u)?;
        Direction::new(Vec3::new(nr * theta.cos(), nr * theta.sin(), nz))
    }

    pub fn area(&self) -> f64 {
        self.area_at(256)
    }

    fn area_at(&self, n: usize) -> f64 {
        let (x, w) = gauss_legendre(n);
        let mut total = 0.0;
        for p in &self.pieces {
            for (xi, wi) in x.iter().zip(&w) {
                let u = 0.5 * (xi + 1.0);
                let t = p.tangent(u);
                total += 0.5 * wi * p.point(u)[0] * t[0].hypot(t[1]);
            }
        }
        2.0 * PI * total
    }

    /// Largest absolute principal curvature, sampled along the profile. The
    /// parallel curvature is `ν_ρ / γ₁`, taking its limit on the axis.
    pub fn max_curvature(&self) -> f64 {
        let mut k = 0.0f64;
        for (i, p) in self.pieces.iter().enumerate() {
            k = k.max(p.curvature());
            for j in 0..=512 {
                let u = j as f64 / 512.0;
                let rho = p.point(u)[0];
                if rho > 1e-9 {
                    if let Ok([nr, _]) = self.piece_normal(i, u) {
                        k = k.max((nr / rho).abs());
                    }
                }
            }
        }
        k
    }

    /// Tensor-product rule: `resolution` graded Gauss–Legendre nodes per
    /// profile panel, `2·resolution` uniform nodes in θ, with measure
    /// `γ₁|γ′| ds dθ`. Arcs are split into panels at quarter turns.
    pub fn sample(&self, resolution: usize) -> QuadratureSamples {
        let n_theta = 2 * resolution;
        let dtheta = 2.0 * PI / n_theta as f64;
        let angles: Vec<(f64, f64)> = (0..n_theta).map(|j| (j as f64 * dtheta, dtheta)).collect();
        self.rule(resolution, None, &angles)
    }

    /// The same rule adapted to a direction `n`: profile panels are also cut
    /// where `ν = ±n` can occur, and θ uses two graded Gauss–Legendre panels
    /// meeting at the azimuth of `n`, so the points `ν = ±n` sit on panel
    /// corners. Integrands with kinks or direction jumps there converge much
    /// faster on it.
    pub fn sample_aligned(&self, resolution: usize, n: &Vec3) -> QuadratureSamples {
        let nh = n.x.hypot(n.y).min(1.0);
        let phi = if nh > 0.0 { n.y.atan2(n.x) } else { 0.0 };
        let (x, w) = gauss_legendre(resolution);
        let mut angles = Vec::with_capacity(2 * resolution);
        for half in 0..2 {
            for (xi, wi) in x.iter().zip(&w) {
                let v = 0.5 * (xi + 1.0);
                let t = phi + PI * (half as f64 + v * v * (3.0 - 2.0 * v));
                angles.push((t, 0.5 * wi * PI * 6.0 * v * (1.0 - v)));
            }
        }
        self.rule(resolution, Some((nh, n.z)), &angles)
    }

    fn rule(
        &self,
        resolution: usize,
        kink: Option<(f64, f64)>,
        angles: &[(f64, f64)],
    ) -> QuadratureSamples {
        let trig: Vec<(f64, f64, f64)> =
            angles.iter().map(|&(t, w)| (t.cos(), t.sin(), w)).collect();
        let rule = self.profile_rule(resolution, kink);
        let mut out = QuadratureSamples::with_capacity(rule.len() * trig.len());
        for [rho, z, nr, nz, w] in rule {
            for &(c, s, wt) in &trig {
                out.push(
                    Vec3::new(rho * c, rho * s, z),
                    Vec3::new(nr * c, nr * s, nz),
                    w * wt,
                );
            }
        }
        out
    }

    /// Panels `(piece, u₀, u₁)` of the profile. Arc pieces are cut at quarter
    /// turns and, when `kink = (n_h, n_z)` is given, wherever the profile
    /// normal equals `(±n_h, ±n_z)`; there the θ-integral of the energy
    /// density is not smooth in the profile parameter.
    fn panels(&self, kink: Option<(f64, f64)>) -> Vec<(usize, f64, f64)> {
        let mut out = Vec::new();
        for (i, p) in self.pieces.iter().enumerate() {
            let mut cuts = vec![0.0, 1.0];
            if let ProfilePiece::Arc { start, end, .. } = *p {
                let (lo, hi) = (start.min(end), start.max(end));
                let mut targets: Vec<f64> = (0..4).map(|k| k as f64 * FRAC_PI_2).collect();
                if let Some((nh, nz)) = kink {
                    for (a, b) in [(nh, nz), (-nh, nz), (nh, -nz), (-nh, -nz)] {
                        targets.push(b.atan2(a));
                    }
                }
                for t0 in targets {
                    let mut t = t0 + 2.0 * PI * ((lo - t0) / (2.0 * PI)).ceil();
                    while t <= hi {
                        let u = (t - start) / (end - start);
                        if u > 1e-9 && u < 1.0 - 1e-9 {
                            cuts.push(u);
                        }
                        t += 2.0 * PI;
                    }
                }
            }
            cuts.sort_by(f64::total_cmp);
            cuts.dedup_by(|a, b| (*a - *b).abs() < 1e-9);
            out.extend(cuts.windows(2).map(|w| (i, w[0], w[1])));
        }
        out
    }

    /// Profile nodes `(ρ, z, ν_ρ, ν_z, γ₁|γ′| du)` of the graded panel rule.
    /// The map `v ↦ v²(3 − 2v)` clusters nodes at the panel ends.
    pub(crate) fn profile_rule(&self, n_s: usize, kink: Option<(f64, f64)>) -> Vec<[f64; 5]> {
        let (x, w) = gauss_legendre(n_s);
        let panels = self.panels(kink);
        let mut out = Vec::with_capacity(panels.len() * n_s);
        for (i, u0, u1) in panels {
            let p = &self.pieces[i];
            for (xi, wi) in x.iter().zip(&w) {
                let v = 0.5 * (xi + 1.0);
                let u = u0 + (u1 - u0) * v * v * (3.0 - 2.0 * v);
                let jac = (u1 - u0) * 6.0 * v * (1.0 - v);
                let [rho, z] = p.point(u);
                let t = p.tangent(u);
                let speed = t[0].hypot(t[1]);
                out.push([
                    rho,
                    z,
                    self.orientation * t[1] / speed,
                    -self.orientation * t[0] / speed,
                    0.5 * wi * jac * rho.max(0.0) * speed,
                ]);
            }
        }
        out
    }
}
