use crate::config::{
    merge, ApproxOpts, DefectsOpts, EnergyOpts, FiguresOpts, OptimizeOpts, ProfileOpts, RunConfig,
    ScanOpts,
};
use crate::shape::ShapeArgs;
use anchoring::energy::{e0, EnergyValue, EngineChoice, DEFAULT_RESOLUTION};
use anchoring::orient::{approx_stability, minimize, scan, MinimizeOptions, ScanSpec};
use anchoring::profile1d::{optimal_profile_angle, profile_energy_density};
use anchoring::surfaces::{AnalyticShape, Surface};
use anchoring::tangentfield::{build_boundary_field, defect_report, DirectorField};
use anchoring::validation::{reference, run_criteria};
use anchoring::{Direction, Error};
use anyhow::{bail, Context, Result};
use serde::Serialize;
use std::fs::File;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

/// Raised when the self-check finds a failing criterion.
#[derive(Debug)]
pub struct SuiteFailed(pub Vec<usize>);

impl std::fmt::Display for SuiteFailed {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "acceptance criteria failed: {:?}", self.0)
    }
}

impl std::error::Error for SuiteFailed {}

/// Settings common to every subcommand.
pub struct Session {
    pub config: RunConfig,
    pub out_dir: Option<PathBuf>,
    pub tolerance: Option<f64>,
}

const UNITS: &str = "# E0 in nondimensional units of eta*E (surface energy per unit eta)";

impl Session {
    fn resolve(&self, path: &Path) -> PathBuf {
        match &self.out_dir {
            Some(d) => d.join(path),
            None => path.to_path_buf(),
        }
    }

    fn sink(&self, output: Option<&PathBuf>) -> Result<Box<dyn Write>> {
        match output {
            Some(p) => {
                let p = self.resolve(p);
                if let Some(parent) = p.parent().filter(|d| !d.as_os_str().is_empty()) {
                    std::fs::create_dir_all(parent)?;
                }
                let f = File::create(&p).with_context(|| format!("creating {}", p.display()))?;
                Ok(Box::new(io::BufWriter::new(f)))
            }
            None => Ok(Box::new(io::stdout().lock())),
        }
    }

    fn json<T: Serialize>(&self, output: Option<&PathBuf>, value: &T) -> Result<()> {
        let mut w = self.sink(output)?;
        serde_json::to_writer_pretty(&mut w, value)?;
        writeln!(w)?;
        w.flush()?;
        Ok(())
    }

    fn shape(&self, flags: &ShapeArgs) -> ShapeArgs {
        flags.merged(self.config.shape.as_ref())
    }
}

fn csv_writer(mut w: Box<dyn Write>, comment: &str) -> Result<csv::Writer<Box<dyn Write>>> {
    writeln!(w, "{comment}")?;
    Ok(csv::Writer::from_writer(w))
}

fn parse_direction(text: Option<&str>, what: &str) -> Result<Direction> {
    let Some(text) = text else {
        bail!("missing {what}; give it as x,y,z");
    };
    let parts: Vec<f64> = text
        .split(',')
        .map(|t| t.trim().parse::<f64>())
        .collect::<std::result::Result<_, _>>()
        .with_context(|| format!("bad direction '{text}'"))?;
    let [x, y, z] = parts[..] else {
        bail!("direction '{text}' needs three components");
    };
    Ok(Direction::from_components(x, y, z)?)
}

fn parse_list(text: &str) -> Result<Vec<f64>> {
    text.split(',')
        .map(|t| {
            t.trim()
                .parse::<f64>()
                .with_context(|| format!("bad number '{t}'"))
        })
        .collect()
}

pub fn energy(ctx: &Session, shape: &ShapeArgs, flags: &EnergyOpts) -> Result<()> {
    let o = merge(flags, ctx.config.energy.as_ref());
    let surface = ctx.shape(shape).surface()?;
    let n = parse_direction(o.n.as_deref(), "--n")?;
    let engine = o.engine.unwrap_or_default();
    let mut res = o.resolution.unwrap_or(DEFAULT_RESOLUTION);
    let mut value: EnergyValue = e0(&surface, &n, engine, res)?;
    if let Some(tol) = ctx.tolerance {
        // Double the resolution until the error estimate meets the tolerance.
        let mut doublings = 0;
        while value.est_error.is_some_and(|e| e > tol) {
            if doublings == 4 {
                return Err(Error::NoConvergence {
                    iterations: doublings,
                }
                .into());
            }
            res *= 2;
            doublings += 1;
            value = e0(&surface, &n, engine, res)?;
        }
    }
    ctx.json(o.output.as_ref(), &value)
}

pub fn scan_cmd(ctx: &Session, shape: &ShapeArgs, flags: &ScanOpts) -> Result<()> {
    let o = merge(flags, ctx.config.scan.as_ref());
    let surface = ctx.shape(shape).surface()?;
    let Some(grid) = o.grid.as_deref() else {
        bail!("missing --grid");
    };
    let spec: ScanSpec = grid.parse()?;
    let result = scan(
        &surface,
        &spec,
        o.engine.unwrap_or_default(),
        o.resolution.unwrap_or(DEFAULT_RESOLUTION),
    )?;
    let mut w = csv_writer(ctx.sink(o.output.as_ref())?, UNITS)?;
    w.write_record(["param1", "param2", "n1", "n2", "n3", "E0"])?;
    for p in &result.points {
        let v = p.n.vec();
        w.write_record([
            p.param1.to_string(),
            p.param2.map(|x| x.to_string()).unwrap_or_default(),
            v.x.to_string(),
            v.y.to_string(),
            v.z.to_string(),
            p.e0.to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

fn minimize_options(ctx: &Session, o: &OptimizeOpts) -> MinimizeOptions {
    let mut opts = MinimizeOptions::default();
    if let Some(v) = o.lattice_points {
        opts.lattice_points = v;
    }
    if let Some(v) = o.max_iterations {
        opts.max_iterations = v;
    }
    if let Some(v) = o.resolution {
        opts.resolution = v;
    }
    if let Some(v) = o.energy_resolution {
        opts.energy_resolution = v;
    }
    if let Some(t) = ctx.tolerance {
        opts.tolerance = t;
    }
    opts
}

pub fn optimize(ctx: &Session, shape: &ShapeArgs, flags: &OptimizeOpts) -> Result<()> {
    let o = merge(flags, ctx.config.optimize.as_ref());
    let surface = ctx.shape(shape).surface()?;
    let report = minimize(&surface, &minimize_options(ctx, &o))?;
    ctx.json(o.output.as_ref(), &report)
}

pub fn defects(ctx: &Session, shape: &ShapeArgs, flags: &DefectsOpts) -> Result<()> {
    let o = merge(flags, ctx.config.defects.as_ref());
    let shape = ctx.shape(shape);
    let surface = shape.offset()?;
    let n = parse_direction(o.n.as_deref(), "--n")?;
    let delta = o.delta.unwrap_or(0.4 * surface.rho);
    let field = build_boundary_field(&surface, &n, delta)?;
    let samples = Surface::from(shape.analytic()?).sample(o.resolution.unwrap_or(128))?;
    if let Some(path) = &o.dump {
        let mut w = csv_writer(
            ctx.sink(Some(path))?,
            "# unit tangent field at the quadrature points; defect centres omitted",
        )?;
        w.write_record(["x", "y", "z", "v1", "v2", "v3"])?;
        for p in &samples.points {
            if let Ok(v) = field.eval(p) {
                w.write_record([p.x, p.y, p.z, v.x, v.y, v.z].map(|c| c.to_string()))?;
            }
        }
        w.flush()?;
    }
    ctx.json(o.output.as_ref(), &defect_report(&field, &samples))
}

pub fn profile(ctx: &Session, flags: &ProfileOpts) -> Result<()> {
    let o = merge(flags, ctx.config.profile.as_ref());
    let phi0 = o.phi0.context("missing --phi0")?;
    let h = o.h.unwrap_or(10.0);
    let points = o.points.unwrap_or(401);
    if !(h > 0.0) || points < 2 {
        bail!("profile needs H > 0 and at least two points");
    }
    let mut w = csv_writer(
        ctx.sink(o.output.as_ref())?,
        "# r_tilde is the stretched distance; energy_density in units of eta*E per unit length",
    )?;
    w.write_record(["r_tilde", "phi", "n1", "n3", "energy_density"])?;
    for i in 0..points {
        let r = h * i as f64 / (points - 1) as f64;
        let phi = optimal_profile_angle(phi0, r)?;
        let d = profile_energy_density(phi0, r)?;
        w.write_record([r, phi, phi.sin(), phi.cos(), d].map(|c| c.to_string()))?;
    }
    w.flush()?;
    Ok(())
}

pub fn approx(ctx: &Session, flags: &ApproxOpts) -> Result<()> {
    let o = merge(flags, ctx.config.approx.as_ref());
    let eps = parse_list(o.epsilons.as_deref().unwrap_or("0.2,0.1,0.05"))?;
    let mut opts = MinimizeOptions::default();
    if let Some(t) = ctx.tolerance {
        opts.tolerance = t;
    }
    let report = approx_stability(
        o.half_width.unwrap_or(1.0),
        &eps,
        o.delta.unwrap_or(0.05),
        o.directions.unwrap_or(500),
        o.seed.unwrap_or(1),
        &opts,
    )?;
    let mut w = csv_writer(ctx.sink(o.output.as_ref())?, UNITS)?;
    w.write_record([
        "epsilon",
        "max_min_distance",
        "energy_gap_bound",
        "energy_gap_measured",
    ])?;
    for r in &report.rows {
        w.write_record(
            [
                r.epsilon,
                r.max_min_distance,
                r.energy_gap_bound,
                r.energy_gap_measured,
            ]
            .map(|c| c.to_string()),
        )?;
    }
    w.flush()?;
    Ok(())
}

pub fn validate(ctx: &Session, output: Option<&PathBuf>) -> Result<()> {
    let results = run_criteria();
    let mut out = io::stdout().lock();
    for r in &results {
        writeln!(out, "{}", r.line())?;
    }
    if let Some(p) = output {
        ctx.json(Some(p), &results)?;
    }
    let failed: Vec<usize> = results.iter().filter(|r| !r.passed).map(|r| r.id).collect();
    if failed.is_empty() {
        Ok(())
    } else {
        Err(SuiteFailed(failed).into())
    }
}

pub const FIGURES: [&str; 3] = ["capsule", "torus", "cube-heatmap"];

pub fn figures(ctx: &Session, which: &[String], flags: &FiguresOpts) -> Result<()> {
    let o = merge(flags, ctx.config.figures.as_ref());
    let dir = ctx.out_dir.clone().unwrap_or_else(|| PathBuf::from("."));
    std::fs::create_dir_all(&dir)?;
    let selected: Vec<&str> = if which.is_empty() {
        FIGURES.to_vec()
    } else {
        which.iter().map(String::as_str).collect()
    };
    for id in selected {
        let path = dir.join(format!("{id}.csv"));
        let file = File::create(&path).with_context(|| format!("creating {}", path.display()))?;
        let mut w = csv_writer(Box::new(io::BufWriter::new(file)), UNITS)?;
        match id {
            "capsule" => {
                let s = Surface::from(AnalyticShape::spherocylinder(1.0, 2.0)?);
                w.write_record(["n1", "E0"])?;
                for (n1, _) in reference::CAPSULE_FIGURE {
                    let v = e0(
                        &s,
                        &Direction::from_n1(n1)?,
                        EngineChoice::Auto,
                        DEFAULT_RESOLUTION,
                    )?;
                    w.write_record([n1.to_string(), v.value.to_string()])?;
                }
            }
            "torus" => {
                let s = Surface::from(AnalyticShape::torus(2.0, 1.0)?);
                let res = o.resolution.unwrap_or(DEFAULT_RESOLUTION);
                w.write_record(["n3", "E0"])?;
                for (n3, _) in reference::TORUS_FIGURE {
                    let v = e0(&s, &Direction::from_n3(n3)?, EngineChoice::Auto, res)?;
                    w.write_record([n3.to_string(), v.value.to_string()])?;
                }
            }
            "cube-heatmap" => {
                let s = Surface::from(AnalyticShape::cube(1.0)?);
                let spec = ScanSpec::Disk {
                    count: o.heatmap_points.unwrap_or(101),
                };
                let grid = scan(&s, &spec, EngineChoice::Closed, DEFAULT_RESOLUTION)?;
                w.write_record(["n1", "n2", "E0"])?;
                for p in &grid.points {
                    let v = p.n.vec();
                    w.write_record([v.x, v.y, p.e0].map(|c| c.to_string()))?;
                }
            }
            other => bail!("unknown figure '{other}'; expected one of {FIGURES:?}"),
        }
        w.flush()?;
    }
    Ok(())
}
