use crate::error::{Error, Result};
use crate::numerics::Vec3;
use serde::{Deserialize, Serialize};
use std::fmt;

/// A unit vector on S².
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "[f64; 3]", into = "[f64; 3]")]
pub struct Direction(Vec3);

impl Direction {
    /// Normalizes `v`. Fails for vectors that are zero or not finite.
    pub fn new(v: Vec3) -> Result<Self> {
        let len = v.norm();
        if !len.is_finite() || len < 1e-300 {
            return Err(Error::Domain(format!("cannot normalize {v:?}")));
        }
        Ok(Direction(v / len))
    }

    pub fn from_components(x: f64, y: f64, z: f64) -> Result<Self> {
        Self::new(Vec3::new(x, y, z))
    }

    pub fn e1() -> Self {
        Direction(Vec3::x())
    }

    pub fn e2() -> Self {
        Direction(Vec3::y())
    }

    pub fn e3() -> Self {
        Direction(Vec3::z())
    }

    /// Direction with third component `n3` in the x–z plane.
    pub fn from_n3(n3: f64) -> Result<Self> {
        if !(-1.0..=1.0).contains(&n3) {
            return Err(Error::Domain(format!("n3 = {n3} outside [-1, 1]")));
        }
        Ok(Direction(Vec3::new(
            (1.0 - n3 * n3).max(0.0).sqrt(),
            0.0,
            n3,
        )))
    }

    /// Direction with first component `n1` in the x–z plane.
    pub fn from_n1(n1: f64) -> Result<Self> {
        if !(-1.0..=1.0).contains(&n1) {
            return Err(Error::Domain(format!("n1 = {n1} outside [-1, 1]")));
        }
        Ok(Direction(Vec3::new(
            n1,
            0.0,
            (1.0 - n1 * n1).max(0.0).sqrt(),
        )))
    }

    pub fn vec(&self) -> Vec3 {
        self.0
    }

    pub fn x(&self) -> f64 {
        self.0.x
    }

    pub fn y(&self) -> f64 {
        self.0.y
    }

    pub fn z(&self) -> f64 {
        self.0.z
    }

    pub fn dot(&self, v: &Vec3) -> f64 {
        self.0.dot(v)
    }
}

impl std::ops::Neg for Direction {
    type Output = Direction;
    fn neg(self) -> Direction {
        Direction(-self.0)
    }
}

impl TryFrom<[f64; 3]> for Direction {
    type Error = Error;
    fn try_from(a: [f64; 3]) -> Result<Self> {
        Direction::new(Vec3::new(a[0], a[1], a[2]))
    }
}

impl From<Direction> for [f64; 3] {
    fn from(d: Direction) -> [f64; 3] {
        [d.0.x, d.0.y, d.0.z]
    }
}

impl fmt::Display for Direction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.0.x, self.0.y, self.0.z)
    }
}

impl std::str::FromStr for Direction {
    type Err = Error;

    /// Parses `x,y,z`; the vector is normalized.
    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<f64> = s
            .split(',')
            .map(|p| p.trim().parse::<f64>())
            .collect::<std::result::Result<_, _>>()
            .map_err(|e| Error::Parse(format!("direction '{s}': {e}")))?;
        if parts.len() != 3 {
            return Err(Error::Parse(format!(
                "direction '{s}' needs three components"
            )));
        }
        Direction::from_components(parts[0], parts[1], parts[2])
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_normalizes() {
        let d: Direction = "1,1,0".parse().unwrap();
        assert!((d.x() - 0.5f64.sqrt()).abs() < 1e-15);
        assert!("0,0,0".parse::<Direction>().is_err());
        assert!("1,2".parse::<Direction>().is_err());
    }

    #[test]
    fn serde_roundtrip() {
        let d = Direction::from_components(0.3, -0.2, 0.9).unwrap();
        let s = serde_json::to_string(&d).unwrap();
        let back: Direction = serde_json::from_str(&s).unwrap();
        assert_eq!(d, back);
    }
}
