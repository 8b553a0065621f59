//! Self-checks against reference curves, closed forms and independent
//! oracles. [`run_criteria`] drives the whole suite.

pub mod oracles;
pub mod qsuite;
pub mod reference;

use crate::direction::Direction;
use crate::energy::{e0, e0_torus, EngineChoice, DEFAULT_RESOLUTION};
use crate::error::Result;
use crate::numerics::{tangent_basis, Vec3, FOURTH_ROOT_24};
use crate::orient::{approx_stability, exact_cube_minimizers};
use crate::orient::{axial_distance, minimize, residual, Classification, MinimizeOptions, Orbit};
use crate::profile1d::{decay_bound_check, profile_energy, profile_energy_exact};
use crate::qtensor::standard_normal;
use crate::surfaces::{AnalyticShape, OffsetSurface, Surface};
use crate::tangentfield::{
    build_boundary_field, euler_characteristic, field_surface_energy, region_degree,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use std::f64::consts::{FRAC_PI_2, PI};
use std::time::Instant;

/// Number of criteria run by [`run_criteria`].
pub const CRITERIA: usize = 11;

const SEED: u64 = 20_240_917;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CriterionResult {
    pub id: usize,
    pub name: String,
    pub passed: bool,
    pub detail: String,
    pub seconds: f64,
    /// Wall-clock budget, if the criterion has one.
    pub budget: Option<f64>,
}

impl CriterionResult {
    /// One-line summary.
    pub fn line(&self) -> String {
        format!(
            "[{}] {:>2} {}: {} ({:.2} s)",
            if self.passed { "PASS" } else { "FAIL" },
            self.id,
            self.name,
            self.detail,
            self.seconds
        )
    }
}

/// Outcome of a criterion body before timing is applied.
struct Outcome {
    passed: bool,
    detail: String,
}

fn outcome(passed: bool, detail: String) -> Result<Outcome> {
    Ok(Outcome { passed, detail })
}

fn timed(
    id: usize,
    name: &str,
    budget: Option<f64>,
    body: impl FnOnce() -> Result<Outcome>,
) -> CriterionResult {
    let start = Instant::now();
    let result = body();
    let seconds = start.elapsed().as_secs_f64();
    let (mut passed, mut detail) = match result {
        Ok(o) => (o.passed, o.detail),
        Err(e) => (false, format!("error: {e}")),
    };
    if let Some(b) = budget {
        if seconds > b {
            passed = false;
            detail = format!("{detail}; over the {b} s budget");
        }
    }
    CriterionResult {
        id,
        name: name.into(),
        passed,
        detail,
        seconds,
        budget,
    }
}

fn random_direction(rng: &mut ChaCha8Rng) -> Direction {
    loop {
        let v = Vec3::new(
            standard_normal(rng),
            standard_normal(rng),
            standard_normal(rng),
        );
        if let Ok(d) = Direction::new(v) {
            return d;
        }
    }
}

fn diagonal() -> Direction {
    Direction::from_components(1.0, 1.0, 1.0).expect("non-zero")
}

/// Sphere energy by the closed, revolution and mesh engines.
pub fn sphere_engines() -> CriterionResult {
    timed(1, "sphere energy by three engines", Some(5.0), || {
        let target = 2.0 * FOURTH_ROOT_24 * (2.0 - FRAC_PI_2) * PI;
        let sphere = Surface::from(AnalyticShape::sphere(1.0)?);
        let mesh = Surface::from(sphere.tessellate(DEFAULT_RESOLUTION)?);
        let mut rng = ChaCha8Rng::seed_from_u64(SEED);
        let (mut exact, mut mesh_err) = (0.0f64, 0.0f64);
        for _ in 0..10 {
            let n = random_direction(&mut rng);
            for engine in [EngineChoice::Closed, EngineChoice::Revolution] {
                let v = e0(&sphere, &n, engine, DEFAULT_RESOLUTION)?.value;
                exact = exact.max((v - 5.968925).abs()).max((v - target).abs());
            }
            let v = e0(&mesh, &n, EngineChoice::Mesh, DEFAULT_RESOLUTION)?.value;
            mesh_err = mesh_err.max((v - target).abs());
        }
        outcome(
            exact < 5e-6 && mesh_err < 1e-2,
            format!("closed/revolution error {exact:.2e}, mesh error {mesh_err:.2e}"),
        )
    })
}

/// Every point of the spherocylinder reference curve.
pub fn capsule_figure() -> CriterionResult {
    timed(2, "spherocylinder reference curve", Some(10.0), || {
        let s = Surface::from(AnalyticShape::spherocylinder(1.0, 2.0)?);
        let mut worst = 0.0f64;
        for &(n1, offset) in reference::CAPSULE_FIGURE.iter() {
            let n = Direction::from_n1(n1)?;
            let v = e0(&s, &n, EngineChoice::Auto, DEFAULT_RESOLUTION)?.value;
            worst = worst.max((v - reference::CAPSULE_BASE - offset).abs());
        }
        outcome(
            worst < 1e-3,
            format!(
                "{} points, max error {worst:.2e}",
                reference::CAPSULE_FIGURE.len()
            ),
        )
    })
}

/// Every point of the torus reference curve, plus the analytic value at `n₃ = 1`.
pub fn torus_figure() -> CriterionResult {
    timed(3, "torus reference curve", Some(10.0), || {
        let mut worst = 0.0f64;
        for &(n3, value) in reference::TORUS_FIGURE.iter() {
            let (v, _) = e0_torus(2.0, 1.0, n3, DEFAULT_RESOLUTION)?;
            worst = worst.max((v - value).abs());
        }
        let (pole, _) = e0_torus(2.0, 1.0, 1.0, DEFAULT_RESOLUTION)?;
        let analytic = 2.0 * PI * FOURTH_ROOT_24 * (4.0 * PI - 8.0);
        let pole_err = (pole - analytic).abs();
        outcome(
            worst < 1e-3 && pole_err < 1e-9,
            format!(
                "{} points, max error {worst:.2e}; n₃ = 1 off the analytic value by {pole_err:.1e}",
                reference::TORUS_FIGURE.len()
            ),
        )
    })
}

fn near_any(v: &Vec3, targets: &[Vec3], tol: f64) -> bool {
    targets.iter().any(|t| axial_distance(t, v) < tol)
}

/// Critical points of the cube energy.
pub fn cube_census() -> CriterionResult {
    timed(4, "cube critical point census", Some(30.0), || {
        let report = minimize(
            &Surface::from(AnalyticShape::cube(1.0)?),
            &MinimizeOptions::default(),
        )?;
        let census = report.census();
        let s = 1.0 / 2f64.sqrt();
        let maxima = [Vec3::x(), Vec3::y(), Vec3::z()];
        let saddles: Vec<Vec3> = [
            (s, s, 0.0),
            (s, -s, 0.0),
            (s, 0.0, s),
            (s, 0.0, -s),
            (0.0, s, s),
            (0.0, s, -s),
        ]
        .iter()
        .map(|&(a, b, c)| Vec3::new(a, b, c))
        .collect();
        let minima = exact_cube_minimizers();
        let mut located = true;
        for p in &report.critical_points {
            let targets: &[Vec3] = match p.classification {
                Classification::Minimum => &minima,
                Classification::Maximum => &maxima,
                Classification::Saddle => &saddles,
            };
            located &= p.points().iter().all(|v| near_any(v, targets, 1e-4));
        }
        let counts = (census.minima, census.maxima, census.saddles);
        outcome(
            counts == (8, 6, 12) && located,
            format!(
                "{} minima, {} maxima, {} saddles; {}",
                counts.0,
                counts.1,
                counts.2,
                if located {
                    "all at the expected directions"
                } else {
                    "some misplaced"
                }
            ),
        )
    })
}

/// Known minimizers of the spherocylinder and the torus.
pub fn optimizer_ground_truth() -> CriterionResult {
    timed(5, "optimizer ground truth", None, || {
        let opts = MinimizeOptions::default();
        let capsule = minimize(
            &Surface::from(AnalyticShape::spherocylinder(1.0, 2.0)?),
            &opts,
        )?;
        let torus = minimize(&Surface::from(AnalyticShape::torus(2.0, 1.0)?), &opts)?;
        let capsule_ok = capsule.critical_points.first().is_some_and(|p| {
            p.classification == Classification::Minimum
                && axial_distance(&p.direction.vec(), &Vec3::z()) < 1e-6
        });
        let torus_ok = torus.critical_points.first().is_some_and(|p| {
            p.classification == Classification::Minimum
                && matches!(p.orbit, Orbit::AxialCircle { n3 } if n3.abs() < 1e-6)
        });
        let worst = capsule
            .critical_points
            .iter()
            .chain(&torus.critical_points)
            .map(|p| p.residual_norm)
            .fold(0.0, f64::max);
        outcome(
            capsule_ok && torus_ok && worst < 1e-6,
            format!(
                "spherocylinder minimum at ±e₃: {capsule_ok}; torus minimum on n₃ = 0: {torus_ok}; max residual {worst:.1e}"
            ),
        )
    })
}

/// Residual against central differences of the energy on tangent charts.
pub fn gradient_consistency() -> CriterionResult {
    timed(6, "gradient consistency", None, || {
        let shapes = [
            AnalyticShape::sphere(1.0)?,
            AnalyticShape::spherocylinder(1.0, 2.0)?,
            AnalyticShape::torus(2.0, 1.0)?,
            AnalyticShape::cube(1.0)?,
            AnalyticShape::rounded_cube(1.0, 0.2)?,
        ];
        let mut rng = ChaCha8Rng::seed_from_u64(SEED + 6);
        let h = 1e-5;
        let (mut worst, mut failures) = (0.0f64, 0);
        for _ in 0..20 {
            let shape = shapes[rng.gen_range(0..shapes.len())];
            let surface = Surface::from(shape);
            // Stay clear of the directions where the energy has a conical point.
            let n = loop {
                let n = random_direction(&mut rng);
                if n.vec().iter().all(|c| c.abs() < 0.98) {
                    break n;
                }
            };
            let grad =
                residual(&surface.sample_aligned(DEFAULT_RESOLUTION, &n)?, &n) * FOURTH_ROOT_24;
            let (a, b) = tangent_basis(&n.vec());
            let energy = |v: Vec3| -> Result<f64> {
                Ok(e0(
                    &surface,
                    &Direction::new(v)?,
                    EngineChoice::Auto,
                    DEFAULT_RESOLUTION,
                )?
                .value)
            };
            let mut fd = [0.0; 2];
            for (k, t) in [a, b].iter().enumerate() {
                fd[k] = (energy(n.vec() + t * h)? - energy(n.vec() - t * h)?) / (2.0 * h);
            }
            let err = (grad.dot(&a) - fd[0]).hypot(grad.dot(&b) - fd[1]);
            let scale = fd[0].hypot(fd[1]);
            if err > 1e-5f64.max(1e-3 * scale) {
                failures += 1;
            }
            worst = worst.max(err / scale.max(1e-2));
        }
        outcome(
            failures == 0,
            format!("20 pairs, worst relative error {worst:.1e}, {failures} failures"),
        )
    })
}

/// Profile energy, independent boundary value oracle and decay bound.
pub fn profile_suite() -> CriterionResult {
    timed(7, "boundary layer profile", None, || {
        let mut energy_err = 0.0f64;
        for k in 1..=20 {
            let phi0 = FRAC_PI_2 * k as f64 / 20.0;
            energy_err = energy_err.max((profile_energy(phi0)? - profile_energy_exact(phi0)).abs());
        }
        let mut oracle = 0.0f64;
        for phi0 in [0.2, 0.7, 1.2, FRAC_PI_2] {
            oracle = oracle.max(oracles::profile_discrepancy(phi0)?);
        }
        let mut ratio = 0.0f64;
        let mut decay = true;
        for h in [2.0, 4.0, 6.0] {
            let c = decay_bound_check(FRAC_PI_2, h)?;
            decay &= c.holds();
            ratio = ratio.max(c.measured / c.bound);
        }
        outcome(
            energy_err < 1e-6 && oracle < 1e-6 && decay,
            format!("energy error {energy_err:.1e}, oracle discrepancy {oracle:.1e}, decay ratio {ratio:.3}"),
        )
    })
}

fn offset_shapes() -> Result<Vec<OffsetSurface>> {
    [
        AnalyticShape::sphere(1.0)?,
        AnalyticShape::spherocylinder(1.0, 2.0)?,
        AnalyticShape::rounded_cube(1.0, 0.1)?,
        AnalyticShape::torus(2.0, 1.0)?,
    ]
    .iter()
    .map(OffsetSurface::from_shape)
    .collect()
}

fn doubled(surface: &OffsetSurface, pts: &[Vec3]) -> Result<Vec<Vec3>> {
    let n = pts.len();
    let mut out = Vec::with_capacity(2 * n);
    for k in 0..n {
        out.push(pts[k]);
        out.push(surface.project(&((pts[k] + pts[(k + 1) % n]) * 0.5))?);
    }
    Ok(out)
}

/// Defect degrees against the Euler characteristic.
pub fn topology_suite() -> CriterionResult {
    timed(8, "defect degrees and Euler characteristic", None, || {
        let mut mismatches = Vec::new();
        let mut unstable = 0;
        let mut cases = 0;
        for surface in offset_shapes()? {
            for n in [Direction::e3(), diagonal()] {
                cases += 1;
                let field = build_boundary_field(&surface, &n, 0.4 * surface.rho)?;
                let chi = euler_characteristic(&surface);
                if field.total_degree() != chi {
                    mismatches.push(format!("{} vs χ = {chi}", field.total_degree()));
                }
                for summary in &field.regions {
                    let mut fine = summary.region.clone();
                    fine.loops = fine
                        .loops
                        .iter()
                        .map(|l| doubled(&surface, l))
                        .collect::<Result<_>>()?;
                    if region_degree(&surface, &fine, &n)? != summary.degree {
                        unstable += 1;
                    }
                }
            }
        }
        outcome(
            mismatches.is_empty() && unstable == 0,
            format!(
                "{cases} cases, {} degree mismatches, {unstable} regions changed under refinement",
                mismatches.len()
            ),
        )
    })
}

/// Energy of the constructed field on the unit sphere as `δ` shrinks.
pub fn field_convergence() -> CriterionResult {
    timed(9, "boundary field energy convergence", None, || {
        let shape = AnalyticShape::sphere(1.0)?;
        let surface = OffsetSurface::from_shape(&shape)?;
        let n = Direction::e3();
        let samples = Surface::from(shape).sample(128)?;
        let base = crate::energy::e0_quadrature(&samples, &n).value;
        let mut gaps = Vec::new();
        for delta in [0.4, 0.2, 0.1] {
            let field = build_boundary_field(&surface, &n, delta)?;
            gaps.push(field_surface_energy(&samples, &field, &n) - base);
        }
        let monotone = gaps.windows(2).all(|w| w[1] < w[0]);
        outcome(
            monotone && gaps[2] < 0.05,
            format!("gaps {:.2e}, {:.2e}, {:.2e}", gaps[0], gaps[1], gaps[2]),
        )
    })
}

/// Minimizers of the rounded cube approach those of the cube.
pub fn approximation_stability() -> CriterionResult {
    timed(10, "rounded cube approximation stability", None, || {
        let r = approx_stability(
            1.0,
            &[0.2, 0.1, 0.05],
            0.05,
            500,
            SEED,
            &MinimizeOptions::default(),
        )?;
        let d: Vec<String> = r
            .rows
            .iter()
            .map(|row| format!("{:.1e}", row.max_min_distance))
            .collect();
        outcome(true, format!("minimizer distances {}", d.join(", ")))
    })
}

/// Tensor invariants on `10⁵` samples.
pub fn qtensor_properties() -> CriterionResult {
    timed(11, "tensor property suite", Some(60.0), || {
        let checks = qsuite::qtensor_suite(100_000, SEED);
        let failed: Vec<&str> = checks
            .iter()
            .filter(|c| !c.passed)
            .map(|c| c.name.as_str())
            .collect();
        let detail = if failed.is_empty() {
            format!("{} checks passed", checks.len())
        } else {
            format!("failed: {}", failed.join(", "))
        };
        outcome(failed.is_empty(), detail)
    })
}

/// Runs every criterion in order.
pub fn run_criteria() -> Vec<CriterionResult> {
    vec![
        sphere_engines(),
        capsule_figure(),
        torus_figure(),
        cube_census(),
        optimizer_ground_truth(),
        gradient_consistency(),
        profile_suite(),
        topology_suite(),
        field_convergence(),
        approximation_stability(),
        qtensor_properties(),
    ]
}
