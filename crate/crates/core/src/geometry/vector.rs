use crate::error::{LlbmError, Result};
use crate::linalg;

/// A point of R^n with finite coordinates.
#[derive(Debug, Clone, PartialEq)]
pub struct Vector {
    coords: Vec<f64>,
}

impl Vector {
    pub fn new(coords: Vec<f64>) -> Result<Self> {
        if coords.is_empty() {
            return Err(LlbmError::InvalidInput("vector must have dimension >= 1".into()));
        }
        if coords.iter().any(|x| !x.is_finite()) {
            return Err(LlbmError::InvalidInput("vector coordinates must be finite".into()));
        }
        Ok(Self { coords })
    }

    /// Construction for internally computed values (already finite).
    pub(crate) fn from_raw(coords: Vec<f64>) -> Self {
        debug_assert!(coords.iter().all(|x| x.is_finite()));
        Self { coords }
    }

    pub fn zeros(dim: usize) -> Self {
        Self { coords: vec![0.0; dim] }
    }

    pub fn basis(dim: usize, i: usize) -> Self {
        let mut c = vec![0.0; dim];
        c[i] = 1.0;
        Self { coords: c }
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[f64] {
        &self.coords
    }

    pub fn dot(&self, other: &Vector) -> f64 {
        linalg::dot(&self.coords, &other.coords)
    }

    pub fn norm(&self) -> f64 {
        linalg::norm(&self.coords)
    }

    pub fn scaled(&self, c: f64) -> Vector {
        Vector::from_raw(self.coords.iter().map(|x| c * x).collect())
    }

    pub fn add(&self, other: &Vector) -> Vector {
        Vector::from_raw(self.coords.iter().zip(other.coords()).map(|(a, b)| a + b).collect())
    }

    pub fn sub(&self, other: &Vector) -> Vector {
        Vector::from_raw(self.coords.iter().zip(other.coords()).map(|(a, b)| a - b).collect())
    }

    pub fn negated(&self) -> Vector {
        self.scaled(-1.0)
    }

    pub fn normalized(&self) -> Option<Vector> {
        let n = self.norm();
        if n == 0.0 {
            None
        } else {
            Some(self.scaled(1.0 / n))
        }
    }
}

impl std::ops::Index<usize> for Vector {
    type Output = f64;
    fn index(&self, i: usize) -> &f64 {
        &self.coords[i]
    }
}
