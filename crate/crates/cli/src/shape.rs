use anchoring::surfaces::{AnalyticShape, OffsetSurface, Surface, TriMesh};
use anyhow::{bail, Context, Result};
use clap::Args;
use serde::{Deserialize, Serialize};
use std::path::PathBuf;

/// Shape selection shared by the subcommands and the `[shape]` config table.
#[derive(Debug, Clone, Default, PartialEq, Args, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ShapeArgs {
    /// sphere, spherocylinder, torus, cube, rounded-cube or mesh
    #[arg(long)]
    pub shape: Option<String>,
    /// Radius (sphere, spherocylinder), major radius (torus) or half-width (cubes)
    #[arg(long = "R")]
    #[serde(rename = "R")]
    pub big_r: Option<f64>,
    /// Minor radius of the torus
    #[arg(long = "r")]
    pub r: Option<f64>,
    /// Cylinder length of the spherocylinder
    #[arg(long = "L")]
    #[serde(rename = "L")]
    pub length: Option<f64>,
    /// Rounding radius of the rounded cube
    #[arg(long)]
    pub epsilon: Option<f64>,
    /// OFF or OBJ file with triangular faces
    #[arg(long)]
    pub mesh: Option<PathBuf>,
}

impl ShapeArgs {
    /// Flag values win; the config table is ignored once `--shape` is given.
    pub fn merged(&self, config: Option<&ShapeArgs>) -> ShapeArgs {
        match config {
            Some(c) if self.shape.is_none() => crate::config::overlay(self, c),
            _ => self.clone(),
        }
    }

    fn need(&self, value: Option<f64>, key: &str) -> Result<f64> {
        value.with_context(|| {
            format!(
                "shape '{}' needs --{key}",
                self.shape.as_deref().unwrap_or("")
            )
        })
    }

    pub fn analytic(&self) -> Result<AnalyticShape> {
        let Some(kind) = self.shape.as_deref() else {
            bail!("no shape given; use --shape or a [shape] table in the config");
        };
        let shape = match kind {
            "sphere" => AnalyticShape::sphere(self.need(self.big_r, "R")?)?,
            "spherocylinder" => AnalyticShape::spherocylinder(
                self.need(self.big_r, "R")?,
                self.need(self.length, "L")?,
            )?,
            "torus" => AnalyticShape::torus(self.need(self.big_r, "R")?, self.need(self.r, "r")?)?,
            "cube" => AnalyticShape::cube(self.need(self.big_r, "R")?)?,
            "rounded-cube" => AnalyticShape::rounded_cube(
                self.need(self.big_r, "R")?,
                self.need(self.epsilon, "epsilon")?,
            )?,
            "mesh" => bail!("this subcommand needs an analytic shape, not a mesh"),
            other => bail!("unknown shape '{other}'"),
        };
        Ok(shape)
    }

    pub fn surface(&self) -> Result<Surface> {
        if self.shape.as_deref() != Some("mesh") {
            return Ok(Surface::from(self.analytic()?));
        }
        let Some(path) = &self.mesh else {
            bail!("shape 'mesh' needs --mesh <file>");
        };
        let text =
            std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        let ext = path.extension().and_then(|e| e.to_str()).unwrap_or("");
        let mesh = match ext.to_ascii_lowercase().as_str() {
            "off" => TriMesh::from_off(&text)?,
            "obj" => TriMesh::from_obj(&text)?,
            _ => bail!("mesh file {} must end in .off or .obj", path.display()),
        };
        Ok(Surface::from(mesh))
    }

    pub fn offset(&self) -> Result<OffsetSurface> {
        Ok(OffsetSurface::from_shape(&self.analytic()?)?)
    }
}
