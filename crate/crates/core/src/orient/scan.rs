//! Energy scans along the curves and discs used for the figure data.

use crate::direction::Direction;
use crate::energy::{e0, EngineChoice};
use crate::error::{Error, Result};
use crate::surfaces::Surface;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::fmt;
use std::str::FromStr;

/// Scan parameterization.
///
/// `Line { component: k, .. }` varies `n_k` over `[from, to]` and fills the
/// complementary component `√(1 − n_k²)`: `n₁` pairs with `n₃`, `n₂` with
/// `n₃` and `n₃` with `n₁`. `Disk` covers the closed unit disk in `(n₁, n₂)`
/// with `n₃ = √(1 − n₁² − n₂²)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum ScanSpec {
    Line {
        component: usize,
        from: f64,
        to: f64,
        count: usize,
    },
    Disk {
        count: usize,
    },
}

impl ScanSpec {
    pub fn validate(&self) -> Result<()> {
        match *self {
            ScanSpec::Line {
                component,
                from,
                to,
                count,
            } => {
                if component > 2 {
                    return Err(Error::Parse(format!(
                        "component index {component} out of range"
                    )));
                }
                if !(from.abs() <= 1.0 && to.abs() <= 1.0) {
                    return Err(Error::Domain(format!(
                        "scan range [{from}, {to}] leaves [−1, 1]"
                    )));
                }
                if count == 0 {
                    return Err(Error::Domain("scan needs at least one point".into()));
                }
            }
            ScanSpec::Disk { count } => {
                if count < 2 {
                    return Err(Error::Domain(
                        "disk scan needs at least two points per side".into(),
                    ));
                }
            }
        }
        Ok(())
    }

    /// `(param1, param2, n)` for every grid point, in output order.
    pub fn points(&self) -> Result<Vec<(f64, Option<f64>, Direction)>> {
        self.validate()?;
        let lin = |a: f64, b: f64, n: usize, i: usize| {
            if n == 1 {
                a
            } else {
                a + (b - a) * i as f64 / (n - 1) as f64
            }
        };
        let mut out = Vec::new();
        match *self {
            ScanSpec::Line {
                component,
                from,
                to,
                count,
            } => {
                for i in 0..count {
                    let t = lin(from, to, count, i);
                    let c = (1.0 - t * t).max(0.0).sqrt();
                    let v = match component {
                        0 => [t, 0.0, c],
                        1 => [0.0, t, c],
                        _ => [c, 0.0, t],
                    };
                    out.push((t, None, Direction::from_components(v[0], v[1], v[2])?));
                }
            }
            ScanSpec::Disk { count } => {
                for i in 0..count {
                    for j in 0..count {
                        let x = lin(-1.0, 1.0, count, i);
                        let y = lin(-1.0, 1.0, count, j);
                        let r2 = x * x + y * y;
                        if r2 <= 1.0 + 1e-12 {
                            let z = (1.0 - r2).max(0.0).sqrt();
                            out.push((x, Some(y), Direction::from_components(x, y, z)?));
                        }
                    }
                }
            }
        }
        Ok(out)
    }
}

impl FromStr for ScanSpec {
    type Err = Error;

    /// `n1:from:to:count`, `n2:…`, `n3:…` or `disk:count`.
    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split(':').map(str::trim).collect();
        let num = |t: &str| {
            t.parse::<f64>()
                .map_err(|_| Error::Parse(format!("bad number '{t}' in grid '{s}'")))
        };
        let int = |t: &str| {
            t.parse::<usize>()
                .map_err(|_| Error::Parse(format!("bad count '{t}' in grid '{s}'")))
        };
        let spec = match parts.as_slice() {
            ["disk", n] => ScanSpec::Disk { count: int(n)? },
            [axis, a, b, n] => {
                let component = match *axis {
                    "n1" => 0,
                    "n2" => 1,
                    "n3" => 2,
                    _ => return Err(Error::Parse(format!("unknown grid axis '{axis}'"))),
                };
                ScanSpec::Line {
                    component,
                    from: num(a)?,
                    to: num(b)?,
                    count: int(n)?,
                }
            }
            _ => {
                return Err(Error::Parse(format!(
                    "grid '{s}' is neither n<k>:from:to:count nor disk:count"
                )))
            }
        };
        spec.validate()?;
        Ok(spec)
    }
}

impl fmt::Display for ScanSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ScanSpec::Line {
                component,
                from,
                to,
                count,
            } => write!(f, "n{}:{from}:{to}:{count}", component + 1),
            ScanSpec::Disk { count } => write!(f, "disk:{count}"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScanPoint {
    pub param1: f64,
    pub param2: Option<f64>,
    pub n: Direction,
    pub e0: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScanGrid {
    pub spec: ScanSpec,
    pub points: Vec<ScanPoint>,
}

impl ScanGrid {
    /// Grid point with the lowest energy.
    pub fn argmin(&self) -> Option<&ScanPoint> {
        self.points.iter().min_by(|a, b| a.e0.total_cmp(&b.e0))
    }
}

pub fn scan(
    surface: &Surface,
    spec: &ScanSpec,
    engine: EngineChoice,
    resolution: usize,
) -> Result<ScanGrid> {
    let grid = spec.points()?;
    let values: Result<Vec<f64>> = grid
        .par_iter()
        .map(|(_, _, n)| e0(surface, n, engine, resolution).map(|v| v.value))
        .collect();
    let points = grid
        .into_iter()
        .zip(values?)
        .map(|((param1, param2, n), e0)| ScanPoint {
            param1,
            param2,
            n,
            e0,
        })
        .collect();
    Ok(ScanGrid {
        spec: *spec,
        points,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::energy::e0_cube;
    use crate::surfaces::AnalyticShape;

    #[test]
    fn parses_grid_strings() {
        assert_eq!(
            "n1:-0.99:0.99:48".parse::<ScanSpec>().unwrap(),
            ScanSpec::Line {
                component: 0,
                from: -0.99,
                to: 0.99,
                count: 48
            }
        );
        assert_eq!(
            "disk:11".parse::<ScanSpec>().unwrap(),
            ScanSpec::Disk { count: 11 }
        );
        for bad in ["n4:0:1:3", "n1:0:2:3", "disk", "n1:a:1:3", "n3:0:1:0"] {
            assert!(bad.parse::<ScanSpec>().is_err(), "{bad}");
        }
        let s = ScanSpec::Line {
            component: 2,
            from: -1.0,
            to: 0.5,
            count: 7,
        };
        assert_eq!(s.to_string().parse::<ScanSpec>().unwrap(), s);
    }

    #[test]
    fn disk_stays_inside() {
        let pts = ScanSpec::Disk { count: 21 }.points().unwrap();
        assert!(pts
            .iter()
            .all(|(x, y, _)| x * x + y.unwrap() * y.unwrap() <= 1.0 + 1e-12));
        assert!(pts.iter().any(|(x, y, _)| *x == 0.0 && *y == Some(0.0)));
    }

    #[test]
    fn torus_scan_is_even() {
        let s = Surface::from(AnalyticShape::torus(2.0, 1.0).unwrap());
        let g = scan(&s, &"n3:-1:1:9".parse().unwrap(), EngineChoice::Auto, 128).unwrap();
        for i in 0..9 {
            assert!((g.points[i].e0 - g.points[8 - i].e0).abs() < 1e-10);
        }
    }

    #[test]
    fn cube_centre_is_the_closed_form() {
        let s = Surface::from(AnalyticShape::cube(1.0).unwrap());
        let g = scan(&s, &ScanSpec::Disk { count: 5 }, EngineChoice::Auto, 64).unwrap();
        let centre = g
            .points
            .iter()
            .find(|p| p.param1 == 0.0 && p.param2 == Some(0.0))
            .unwrap();
        assert_eq!(centre.e0, e0_cube(2.0, &Direction::e3()).unwrap());
    }
}
