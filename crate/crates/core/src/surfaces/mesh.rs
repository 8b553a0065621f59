use super::{QuadratureSamples, RevolutionSurface};
use crate::error::{Error, Result};
use crate::numerics::{compensated_sum, Vec3};
use std::collections::HashMap;
use std::f64::consts::{FRAC_PI_4, PI};

/// Closed, consistently oriented triangle mesh with outward normals.
#[derive(Debug, Clone, PartialEq)]
pub struct TriMesh {
    vertices: Vec<Vec3>,
    triangles: Vec<[usize; 3]>,
    normals: Vec<Vec3>,
    areas: Vec<f64>,
}

impl TriMesh {
    /// Validates the mesh: indices in range, no triangle with area below
    /// 1e−12, every edge shared by exactly two triangles traversing it in
    /// opposite directions. If the enclosed signed volume is negative all
    /// triangles are flipped so that normals point outward.
    pub fn new(vertices: Vec<Vec3>, mut triangles: Vec<[usize; 3]>) -> Result<Self> {
        if triangles.is_empty() {
            return Err(Error::InvalidMesh("no triangles".into()));
        }
        for (t, tri) in triangles.iter().enumerate() {
            if tri.iter().any(|&i| i >= vertices.len()) {
                return Err(Error::InvalidMesh(format!(
                    "triangle {t} has an out-of-range index"
                )));
            }
        }
        let mut edges: HashMap<(usize, usize), (usize, usize)> = HashMap::new();
        for (t, tri) in triangles.iter().enumerate() {
            for k in 0..3 {
                let (a, b) = (tri[k], tri[(k + 1) % 3]);
                let entry = edges.entry((a.min(b), a.max(b))).or_insert((0, 0));
                if a < b {
                    entry.0 += 1;
                } else {
                    entry.1 += 1;
                }
                if entry.0 + entry.1 > 2 {
                    return Err(Error::InvalidMesh(format!(
                        "edge ({a}, {b}) of triangle {t} is shared by more than two triangles"
                    )));
                }
            }
        }
        for (&(a, b), &(fwd, back)) in &edges {
            if fwd + back != 2 {
                return Err(Error::InvalidMesh(format!(
                    "edge ({a}, {b}) is a boundary edge"
                )));
            }
            if fwd != 1 {
                return Err(Error::InvalidMesh(format!(
                    "edge ({a}, {b}) has inconsistent orientation"
                )));
            }
        }
        let volume: f64 = compensated_sum(
            triangles
                .iter()
                .map(|t| vertices[t[0]].dot(&vertices[t[1]].cross(&vertices[t[2]])) / 6.0),
        );
        if volume < 0.0 {
            for t in &mut triangles {
                t.swap(1, 2);
            }
        }
        let mut normals = Vec::with_capacity(triangles.len());
        let mut areas = Vec::with_capacity(triangles.len());
        for (t, tri) in triangles.iter().enumerate() {
            let c =
                (vertices[tri[1]] - vertices[tri[0]]).cross(&(vertices[tri[2]] - vertices[tri[0]]));
            let area = 0.5 * c.norm();
            if !(area >= 1e-12) {
                return Err(Error::InvalidMesh(format!(
                    "triangle {t} has area {area:e}"
                )));
            }
            normals.push(c / c.norm());
            areas.push(area);
        }
        Ok(TriMesh {
            vertices,
            triangles,
            normals,
            areas,
        })
    }

    pub fn vertices(&self) -> &[Vec3] {
        &self.vertices
    }

    pub fn triangles(&self) -> &[[usize; 3]] {
        &self.triangles
    }

    pub fn normals(&self) -> &[Vec3] {
        &self.normals
    }

    pub fn area(&self) -> f64 {
        compensated_sum(self.areas.iter().copied())
    }

    pub fn euler_characteristic(&self) -> i64 {
        let v = self.vertices.len() as i64;
        let f = self.triangles.len() as i64;
        // Closed manifold: every edge borders two faces.
        v - 3 * f / 2 + f
    }

    /// Three-point rule per triangle (nodes at barycentric (2/3, 1/6, 1/6) and
    /// permutations) with the flat triangle normal.
    pub fn sample(&self) -> QuadratureSamples {
        let mut out = QuadratureSamples::with_capacity(3 * self.triangles.len());
        for ((tri, n), a) in self.triangles.iter().zip(&self.normals).zip(&self.areas) {
            let [p0, p1, p2] = tri.map(|i| self.vertices[i]);
            for (l0, l1, l2) in [(2.0, 1.0, 1.0), (1.0, 2.0, 1.0), (1.0, 1.0, 2.0)] {
                out.push((l0 * p0 + l1 * p1 + l2 * p2) / 6.0, *n, a / 3.0);
            }
        }
        out
    }

    /// Curvature estimate: the largest ratio `|n_a − n_b| / |x_a − x_b|` over
    /// edges, with vertex normals taken as means of the incident triangle
    /// normals weighted by the corner angle.
    pub fn max_curvature_estimate(&self) -> f64 {
        let mut vn = vec![Vec3::zeros(); self.vertices.len()];
        for (tri, n) in self.triangles.iter().zip(&self.normals) {
            for k in 0..3 {
                let p = self.vertices[tri[k]];
                let e1 = self.vertices[tri[(k + 1) % 3]] - p;
                let e2 = self.vertices[tri[(k + 2) % 3]] - p;
                let angle = e1.cross(&e2).norm().atan2(e1.dot(&e2));
                vn[tri[k]] += n * angle;
            }
        }
        for v in &mut vn {
            *v = v.normalize();
        }
        let mut best = 0.0f64;
        for tri in &self.triangles {
            for k in 0..3 {
                let (a, b) = (tri[k], tri[(k + 1) % 3]);
                let d = (self.vertices[a] - self.vertices[b]).norm();
                best = best.max((vn[a] - vn[b]).norm() / d);
            }
        }
        best
    }

    #[cfg(test)]
    fn centroid(&self, t: usize) -> Vec3 {
        let tri = self.triangles[t];
        (self.vertices[tri[0]] + self.vertices[tri[1]] + self.vertices[tri[2]]) / 3.0
    }

    /// Parses an OFF file with triangular faces.
    pub fn from_off(text: &str) -> Result<Self> {
        let mut tokens = text
            .lines()
            .map(|l| l.split('#').next().unwrap_or(""))
            .flat_map(str::split_whitespace);
        let header = tokens
            .next()
            .ok_or_else(|| Error::Parse("empty OFF file".into()))?;
        if header != "OFF" {
            return Err(Error::Parse(format!(
                "expected OFF header, found '{header}'"
            )));
        }
        let mut next_num = |what: &str| -> Result<f64> {
            let tok = tokens
                .next()
                .ok_or_else(|| Error::Parse(format!("OFF: missing {what}")))?;
            tok.parse::<f64>()
                .map_err(|e| Error::Parse(format!("OFF: bad {what} '{tok}': {e}")))
        };
        let nv = next_num("vertex count")? as usize;
        let nf = next_num("face count")? as usize;
        let _ne = next_num("edge count")?;
        let mut vertices = Vec::with_capacity(nv);
        for _ in 0..nv {
            vertices.push(Vec3::new(next_num("x")?, next_num("y")?, next_num("z")?));
        }
        let mut triangles = Vec::with_capacity(nf);
        for f in 0..nf {
            let k = next_num("face size")? as usize;
            if k != 3 {
                return Err(Error::Parse(format!(
                    "OFF: face {f} has {k} vertices, only triangles are supported"
                )));
            }
            triangles.push([
                next_num("index")? as usize,
                next_num("index")? as usize,
                next_num("index")? as usize,
            ]);
        }
        TriMesh::new(vertices, triangles)
    }

    /// Parses the `v` and `f` records of an OBJ file with triangular faces.
    pub fn from_obj(text: &str) -> Result<Self> {
        let mut vertices = Vec::new();
        let mut triangles = Vec::new();
        for (lineno, line) in text.lines().enumerate() {
            let mut parts = line.split_whitespace();
            match parts.next() {
                Some("v") => {
                    let c: Vec<f64> = parts
                        .take(3)
                        .map(str::parse)
                        .collect::<std::result::Result<_, _>>()
                        .map_err(|e| Error::Parse(format!("OBJ line {}: {e}", lineno + 1)))?;
                    if c.len() != 3 {
                        return Err(Error::Parse(format!(
                            "OBJ line {}: vertex needs three coordinates",
                            lineno + 1
                        )));
                    }
                    vertices.push(Vec3::new(c[0], c[1], c[2]));
                }
                Some("f") => {
                    let idx: Vec<usize> = parts
                        .map(|p| {
                            let first = p.split('/').next().unwrap_or("");
                            first
                                .parse::<i64>()
                                .map_err(|e| Error::Parse(format!("OBJ line {}: {e}", lineno + 1)))
                                .and_then(|i| {
                                    let n = vertices.len() as i64;
                                    let resolved = if i < 0 { n + i } else { i - 1 };
                                    if resolved < 0 || resolved >= n {
                                        Err(Error::Parse(format!(
                                            "OBJ line {}: index {i} out of range",
                                            lineno + 1
                                        )))
                                    } else {
                                        Ok(resolved as usize)
                                    }
                                })
                        })
                        .collect::<Result<_>>()?;
                    if idx.len() != 3 {
                        return Err(Error::Parse(format!(
                            "OBJ line {}: face has {} vertices, only triangles are supported",
                            lineno + 1,
                            idx.len()
                        )));
                    }
                    triangles.push([idx[0], idx[1], idx[2]]);
                }
                _ => {}
            }
        }
        TriMesh::new(vertices, triangles)
    }

    pub fn to_off(&self) -> String {
        let mut s = format!("OFF\n{} {} 0\n", self.vertices.len(), self.triangles.len());
        for v in &self.vertices {
            s.push_str(&format!("{:?} {:?} {:?}\n", v.x, v.y, v.z));
        }
        for t in &self.triangles {
            s.push_str(&format!("3 {} {} {}\n", t[0], t[1], t[2]));
        }
        s
    }
}

/// UV mesh of a surface of revolution: `resolution` segments per profile
/// piece, `2·resolution` around the axis, with one vertex at each pole.
pub(crate) fn tessellate_revolution(
    surface: &RevolutionSurface,
    resolution: usize,
) -> Result<TriMesh> {
    let n = resolution.max(3);
    let mut profile: Vec<[f64; 2]> = Vec::new();
    for (i, p) in surface.pieces().iter().enumerate() {
        let start = if i == 0 { 0 } else { 1 };
        for k in start..=n {
            profile.push(p.point(k as f64 / n as f64));
        }
    }
    if surface.is_closed() {
        profile.pop();
    }
    let scale = profile
        .iter()
        .map(|p| p[0].abs().max(p[1].abs()))
        .fold(0.0, f64::max);
    let n_theta = 2 * n;
    let mut vertices = Vec::new();
    // Per profile vertex: either a pole index or the first ring index.
    let mut rings: Vec<Option<usize>> = Vec::new();
    let mut poles: Vec<usize> = Vec::new();
    for &[rho, z] in &profile {
        if rho.abs() <= 1e-12 * scale {
            poles.push(vertices.len());
            rings.push(None);
            vertices.push(Vec3::new(0.0, 0.0, z));
        } else {
            poles.push(usize::MAX);
            rings.push(Some(vertices.len()));
            for j in 0..n_theta {
                let t = 2.0 * PI * j as f64 / n_theta as f64;
                vertices.push(Vec3::new(rho * t.cos(), rho * t.sin(), z));
            }
        }
    }
    let m = profile.len();
    let strips = if surface.is_closed() { m } else { m - 1 };
    let mut triangles = Vec::new();
    for k in 0..strips {
        let (a, b) = (k, (k + 1) % m);
        for j in 0..n_theta {
            let j1 = (j + 1) % n_theta;
            let va = |jj: usize| rings[a].map_or(poles[a], |r| r + jj);
            let vb = |jj: usize| rings[b].map_or(poles[b], |r| r + jj);
            if rings[a].is_some() {
                triangles.push([va(j), va(j1), vb(j1)]);
            }
            if rings[b].is_some() {
                triangles.push([va(j), vb(j1), vb(j)]);
            }
        }
    }
    TriMesh::new(vertices, triangles)
}

/// Mesh of the boundary of `[−a, a]³ ⊕ B_ε` (a plain cube when `ε = 0`).
/// Lattice points on the cube of half-width `a + ε` are pushed onto the
/// surface by the offset projection; each axis uses `resolution` cells on the
/// flat part and cells of equal angle on the rounded ends.
pub(crate) fn tessellate_box(a: f64, eps: f64, resolution: usize) -> Result<TriMesh> {
    let n = resolution.max(2);
    let r = a + eps;
    let mut axis: Vec<f64> = Vec::new();
    let fillet = if eps > 0.0 { (n / 4).max(4) } else { 0 };
    for k in (1..=fillet).rev() {
        axis.push(-(a + eps * (FRAC_PI_4 * k as f64 / fillet as f64).tan()));
    }
    for k in 0..=n {
        axis.push(-a + 2.0 * a * k as f64 / n as f64);
    }
    for k in 1..=fillet {
        axis.push(a + eps * (FRAC_PI_4 * k as f64 / fillet as f64).tan());
    }
    let last = axis.len() - 1;
    axis[0] = -r;
    axis[last] = r;
    let project = |x: Vec3| -> Vec3 {
        if eps == 0.0 {
            return x;
        }
        let q = x.map(|c| c.clamp(-a, a));
        q + eps * (x - q).normalize()
    };
    let outward = |x: Vec3| -> Vec3 {
        if eps == 0.0 {
            // Cube face normal from the coordinate at ±r.
            let mut n = Vec3::zeros();
            for i in 0..3 {
                if (x[i].abs() - r).abs() < 1e-12 * r {
                    n[i] = x[i].signum();
                }
            }
            return n;
        }
        let q = x.map(|c| c.clamp(-a, a));
        (x - q).normalize()
    };
    let mut index: HashMap<[usize; 3], usize> = HashMap::new();
    let mut lattice: Vec<Vec3> = Vec::new();
    let mut vertices = Vec::new();
    let mut triangles = Vec::new();
    let mut vid = |c: [usize; 3], vertices: &mut Vec<Vec3>, lattice: &mut Vec<Vec3>| -> usize {
        *index.entry(c).or_insert_with(|| {
            let x = Vec3::new(axis[c[0]], axis[c[1]], axis[c[2]]);
            lattice.push(x);
            vertices.push(project(x));
            vertices.len() - 1
        })
    };
    for fixed in 0..3 {
        let (i, j) = ((fixed + 1) % 3, (fixed + 2) % 3);
        for side in [0, last] {
            for u in 0..last {
                for v in 0..last {
                    let corner = |du: usize, dv: usize| {
                        let mut c = [0usize; 3];
                        c[fixed] = side;
                        c[i] = u + du;
                        c[j] = v + dv;
                        c
                    };
                    let q = [corner(0, 0), corner(1, 0), corner(1, 1), corner(0, 1)];
                    let ids = q.map(|c| vid(c, &mut vertices, &mut lattice));
                    for tri in [[ids[0], ids[1], ids[2]], [ids[0], ids[2], ids[3]]] {
                        let p = tri.map(|k| vertices[k]);
                        let normal = (p[1] - p[0]).cross(&(p[2] - p[0]));
                        let centre = tri.iter().map(|&k| lattice[k]).sum::<Vec3>() / 3.0;
                        if normal.dot(&outward(centre)) >= 0.0 {
                            triangles.push(tri);
                        } else {
                            triangles.push([tri[0], tri[2], tri[1]]);
                        }
                    }
                }
            }
        }
    }
    TriMesh::new(vertices, triangles)
}
