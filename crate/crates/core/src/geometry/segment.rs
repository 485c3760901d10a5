use crate::error::{LlbmError, Result};
use crate::linalg;
use crate::tolerances;

use super::vector::Vector;
use super::zonotope::Zonotope;

/// An origin-symmetric segment `[-g, g]`, `g != 0`.
///
/// The stored generator is sign-canonical (first significant coordinate
/// positive), so `[-g, g]` and `[g, -g]` construct the same value.
#[derive(Debug, Clone, PartialEq)]
pub struct Segment {
    generator: Vector,
}

impl Segment {
    pub fn new(generator: Vector) -> Result<Self> {
        if generator.norm() <= tolerances::ZERO_GENERATOR {
            return Err(LlbmError::InvalidInput(
                "segment generator must be nonzero".into(),
            ));
        }
        let mut coords = generator.coords().to_vec();
        linalg::canonicalize_sign(&mut coords);
        Ok(Self { generator: Vector::from_raw(coords) })
    }

    pub fn dim(&self) -> usize {
        self.generator.dim()
    }

    pub fn generator(&self) -> &Vector {
        &self.generator
    }

    /// Length `|I| = 2 ||g||`.
    pub fn length(&self) -> f64 {
        2.0 * self.generator.norm()
    }

    /// Support function `h_I(u) = |<g, u>|`.
    pub fn support(&self, u: &Vector) -> f64 {
        self.generator.dot(u).abs()
    }

    /// Unit direction of the generator (sign-canonical).
    pub fn direction(&self) -> Vector {
        self.generator.normalized().expect("segment generator is nonzero")
    }

    pub fn scaled(&self, c: f64) -> Result<Segment> {
        Segment::new(self.generator.scaled(c.abs()))
    }

    /// The segment viewed as a one-generator zonotope.
    pub fn to_zonotope(&self) -> Zonotope {
        Zonotope::new(self.dim(), vec![self.generator.clone()])
            .expect("a segment is a valid zonotope")
    }
}
