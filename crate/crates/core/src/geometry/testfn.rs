use std::sync::Arc;

use crate::error::{LlbmError, Result};

use super::frame::{project_zonotope, OrthonormalFrame};
use super::vector::Vector;
use super::zonotope::Zonotope;

/// An even test function on the sphere.
///
/// The engine integrates these against atomic mixed area measures, so only
/// pointwise evaluation is required.  The support-difference variant is the
/// structured form used everywhere identities depend on multilinearity; the
/// closed-form variant is an arbitrary even evaluator.
#[derive(Clone)]
pub enum TestFunction {
    /// `f = h_plus - h_minus`, a difference of zonotope support functions.
    SupportDiff { plus: Zonotope, minus: Zonotope },
    /// An arbitrary even evaluator (1-homogeneous extension assumed where the
    /// argument is not a unit vector).
    Closed {
        dim: usize,
        eval: Arc<dyn Fn(&[f64]) -> f64 + Send + Sync>,
    },
}

impl std::fmt::Debug for TestFunction {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            TestFunction::SupportDiff { plus, minus } => f
                .debug_struct("SupportDiff")
                .field("plus_generators", &plus.generators().len())
                .field("minus_generators", &minus.generators().len())
                .finish(),
            TestFunction::Closed { dim, .. } => {
                f.debug_struct("Closed").field("dim", dim).finish()
            }
        }
    }
}

impl TestFunction {
    pub fn support_diff(plus: Zonotope, minus: Zonotope) -> Result<Self> {
        if plus.dim() != minus.dim() {
            return Err(LlbmError::DimensionMismatch { expected: plus.dim(), got: minus.dim() });
        }
        Ok(TestFunction::SupportDiff { plus, minus })
    }

    /// `f = h_Z` (minus part degenerate at the origin).
    pub fn support_of(z: &Zonotope) -> Self {
        let origin = Zonotope::new(z.dim(), vec![]).expect("origin is a valid zonotope");
        TestFunction::SupportDiff { plus: z.clone(), minus: origin }
    }

    pub fn closed<F>(dim: usize, eval: F) -> Self
    where
        F: Fn(&[f64]) -> f64 + Send + Sync + 'static,
    {
        TestFunction::Closed { dim, eval: Arc::new(eval) }
    }

    /// Constant value `c` on the sphere (even; used for dimension-1 cases).
    pub fn constant(dim: usize, c: f64) -> Self {
        TestFunction::closed(dim, move |_| c)
    }

    pub fn dim(&self) -> usize {
        match self {
            TestFunction::SupportDiff { plus, .. } => plus.dim(),
            TestFunction::Closed { dim, .. } => *dim,
        }
    }

    pub fn eval(&self, u: &Vector) -> f64 {
        match self {
            TestFunction::SupportDiff { plus, minus } => plus.support(u) - minus.support(u),
            TestFunction::Closed { eval, .. } => eval(u.coords()),
        }
    }

    /// The restriction `f|_{I-perp}` expressed in the frame's coordinates.
    pub fn restrict(&self, frame: &OrthonormalFrame) -> Result<TestFunction> {
        if self.dim() != frame.ambient_dim() {
            return Err(LlbmError::DimensionMismatch {
                expected: frame.ambient_dim(),
                got: self.dim(),
            });
        }
        match self {
            TestFunction::SupportDiff { plus, minus } => Ok(TestFunction::SupportDiff {
                plus: project_zonotope(plus, frame)?,
                minus: project_zonotope(minus, frame)?,
            }),
            TestFunction::Closed { eval, .. } => {
                let eval = Arc::clone(eval);
                let frame = frame.clone();
                Ok(TestFunction::closed(frame.subspace_dim(), move |v| {
                    let lifted = frame.lift(&Vector::from_raw(v.to_vec()));
                    eval(lifted.coords())
                }))
            }
        }
    }

    /// The normalized function `f - c h_K`.
    ///
    /// For the support-difference variant the shift stays structured: the
    /// scaled body joins the minus part (or the plus part when `c < 0`).
    pub fn shifted(&self, c: f64, body: &Zonotope) -> Result<TestFunction> {
        if self.dim() != body.dim() {
            return Err(LlbmError::DimensionMismatch { expected: body.dim(), got: self.dim() });
        }
        match self {
            TestFunction::SupportDiff { plus, minus } => {
                let scaled = body.scaled(c.abs());
                let (plus, minus) = if c >= 0.0 {
                    (plus.clone(), minus.minkowski_sum(&scaled)?)
                } else {
                    (plus.minkowski_sum(&scaled)?, minus.clone())
                };
                Ok(TestFunction::SupportDiff { plus, minus })
            }
            TestFunction::Closed { eval, dim } => {
                let eval = Arc::clone(eval);
                let body = body.clone();
                Ok(TestFunction::closed(*dim, move |v| {
                    let u = Vector::from_raw(v.to_vec());
                    eval(v) - c * body.support(&u)
                }))
            }
        }
    }

    /// Samples evenness at deterministic directions; closed-form inputs from
    /// files are validated with this.
    pub fn is_even_sampled(&self, tol: f64) -> bool {
        match self {
            TestFunction::SupportDiff { .. } => true, // support functions are even
            TestFunction::Closed { dim, eval } => {
                let n = *dim;
                for trial in 0..16usize {
                    let mut u = vec![0.0; n];
                    let mut s = 0.0;
                    for (i, x) in u.iter_mut().enumerate() {
                        // Deterministic low-discrepancy-ish angles.
                        let t = ((trial * n + i + 1) as f64) * 0.754_877_666_246_692_9;
                        *x = (t - t.floor()) * 2.0 - 1.0;
                        s += *x * *x;
                    }
                    if s == 0.0 {
                        continue;
                    }
                    let inv = s.sqrt().recip();
                    for x in u.iter_mut() {
                        *x *= inv;
                    }
                    let plus = eval(&u);
                    let neg: Vec<f64> = u.iter().map(|x| -x).collect();
                    let minus = eval(&neg);
                    if (plus - minus).abs() > tol * (1.0 + plus.abs().max(minus.abs())) {
                        return false;
                    }
                }
                true
            }
        }
    }
}
