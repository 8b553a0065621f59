//! Particle boundaries: analytic shapes, surfaces of revolution and closed
//! triangle meshes, with outward normals and quadrature rules.

mod analytic;
mod mesh;
pub mod offset;
mod revolution;

pub use analytic::{symmetric_difference_area, AnalyticShape};
pub use mesh::TriMesh;
pub use offset::{Core, OffsetSurface};
pub use revolution::{ProfilePiece, RevolutionSurface};

use crate::direction::Direction;
use crate::error::{Error, Result};
use crate::numerics::{compensated_sum, Vec3};
use serde::{Deserialize, Serialize};

/// Minimum accepted sampling resolution.
pub const MIN_RESOLUTION: usize = 8;

/// Quadrature nodes on a surface: points, outward unit normals and
/// nonnegative area weights.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct QuadratureSamples {
    pub points: Vec<Vec3>,
    pub normals: Vec<Vec3>,
    pub weights: Vec<f64>,
}

impl QuadratureSamples {
    pub fn with_capacity(n: usize) -> Self {
        QuadratureSamples {
            points: Vec::with_capacity(n),
            normals: Vec::with_capacity(n),
            weights: Vec::with_capacity(n),
        }
    }

    pub fn push(&mut self, point: Vec3, normal: Vec3, weight: f64) {
        self.points.push(point);
        self.normals.push(normal);
        self.weights.push(weight);
    }

    pub fn extend(&mut self, other: QuadratureSamples) {
        self.points.extend(other.points);
        self.normals.extend(other.normals);
        self.weights.extend(other.weights);
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn total_weight(&self) -> f64 {
        compensated_sum(self.weights.iter().copied())
    }
}

/// How much of the rotation group leaves a surface invariant, as far as the
/// orientation analysis is concerned.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SymmetryClass {
    None,
    /// Invariant under rotations about e₃.
    Axial,
    /// Invariant under all rotations.
    Full,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Surface {
    Analytic(AnalyticShape),
    Revolution(RevolutionSurface),
    Mesh(TriMesh),
}

impl From<AnalyticShape> for Surface {
    fn from(s: AnalyticShape) -> Self {
        Surface::Analytic(s)
    }
}

impl From<RevolutionSurface> for Surface {
    fn from(s: RevolutionSurface) -> Self {
        Surface::Revolution(s)
    }
}

impl From<TriMesh> for Surface {
    fn from(s: TriMesh) -> Self {
        Surface::Mesh(s)
    }
}

fn check_resolution(resolution: usize) -> Result<()> {
    if resolution < MIN_RESOLUTION {
        return Err(Error::Domain(format!(
            "resolution {resolution} below the minimum {MIN_RESOLUTION}"
        )));
    }
    Ok(())
}

impl Surface {
    pub fn sample(&self, resolution: usize) -> Result<QuadratureSamples> {
        check_resolution(resolution)?;
        match self {
            Surface::Analytic(a) => a.sample(resolution),
            Surface::Revolution(r) => Ok(r.sample(resolution)),
            Surface::Mesh(m) => Ok(m.sample()),
        }
    }

    /// Quadrature rule tuned for integrands that depend on `ν·n`; equals
    /// [`Surface::sample`] for surfaces without axial symmetry.
    pub fn sample_aligned(&self, resolution: usize, n: &Direction) -> Result<QuadratureSamples> {
        check_resolution(resolution)?;
        match self {
            Surface::Analytic(a) => a.sample_aligned(resolution, &n.vec()),
            Surface::Revolution(r) => Ok(r.sample_aligned(resolution, &n.vec())),
            Surface::Mesh(m) => Ok(m.sample()),
        }
    }

    pub fn area(&self) -> f64 {
        match self {
            Surface::Analytic(a) => a.area(),
            Surface::Revolution(r) => r.area(),
            Surface::Mesh(m) => m.area(),
        }
    }

    /// Largest absolute principal curvature.
    pub fn max_curvature(&self) -> Result<f64> {
        match self {
            Surface::Analytic(a) => a.max_curvature(),
            Surface::Revolution(r) => Ok(r.max_curvature()),
            Surface::Mesh(m) => Ok(m.max_curvature_estimate()),
        }
    }

    /// Ray length `r₀ = 1/(2κ)` below which normal rays do not cross.
    pub fn ray_length(&self) -> Result<f64> {
        let k = self.max_curvature()?;
        Ok(if k > 0.0 { 0.5 / k } else { f64::INFINITY })
    }

    pub fn symmetry(&self) -> SymmetryClass {
        match self {
            Surface::Analytic(a) => a.symmetry(),
            Surface::Revolution(_) => SymmetryClass::Axial,
            Surface::Mesh(_) => SymmetryClass::None,
        }
    }

    /// Closed triangle mesh approximating the surface.
    pub fn tessellate(&self, resolution: usize) -> Result<TriMesh> {
        match self {
            Surface::Analytic(a) => a.tessellate(resolution),
            Surface::Revolution(r) => mesh::tessellate_revolution(r, resolution),
            Surface::Mesh(m) => Ok(m.clone()),
        }
    }
}
