//! Instance files: named bodies and functions plus a list of experiment
//! records, stored as JSON.
//!
//! The format is strict by design: unknown fields are rejected everywhere,
//! every name reference must resolve, and parse -> serialize -> parse is the
//! identity on values.  Tagged records (`"type"` on body and function
//! literals, `"command"` on experiments) are dispatched by hand because the
//! derive-based internally-tagged representation silently ignores unknown
//! fields inside variants.

use std::collections::BTreeMap;
use std::path::Path;

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use serde_json::Value;

use crate::error::{LlbmError, Result};
use crate::geometry::{LinearMap, Segment, TestFunction, Vector, Zonotope};
use crate::smooth::{Harmonic, SmoothBody, SmoothFunction};

/// The only instance-format version this build reads.
pub const INSTANCE_VERSION: u32 = 1;

/// A parsed instance file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InstanceFile {
    pub version: u32,
    #[serde(default)]
    pub bodies: BTreeMap<String, BodyLiteral>,
    #[serde(default)]
    pub functions: BTreeMap<String, FunctionLiteral>,
    #[serde(default)]
    pub experiments: Vec<Experiment>,
}

/// A named convex body.  Zonotopes and segments feed the combinatorial
/// engine; ellipsoids and perturbed balls feed the quadrature engine.
#[derive(Debug, Clone, PartialEq)]
pub enum BodyLiteral {
    Zonotope(ZonotopeBody),
    Segment(SegmentBody),
    Ellipsoid(EllipsoidBody),
    PerturbedBall(PerturbedBallBody),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ZonotopeBody {
    pub dim: usize,
    pub generators: Vec<Vec<f64>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SegmentBody {
    pub generator: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EllipsoidBody {
    pub matrix: Vec<Vec<f64>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PerturbedBallBody {
    pub dim: usize,
    pub radius: f64,
    pub harmonics: Vec<Harmonic>,
}

/// A named even test function, defined by reference to named bodies.
#[derive(Debug, Clone, PartialEq)]
pub enum FunctionLiteral {
    SupportDiff(SupportDiffFunction),
    Support(SupportFunction),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SupportDiffFunction {
    pub plus: String,
    pub minus: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SupportFunction {
    pub body: String,
}

/// One experiment record, dispatched by its `command` field.
#[derive(Debug, Clone, PartialEq)]
pub enum Experiment {
    Volume(VolumeSpec),
    MixedVolume(MixedVolumeSpec),
    Deficit(DeficitSpec),
    Monotonicity(MonotonicitySpec),
    Chain(ChainSpec),
    Sweep(SweepSpec),
    CubeCase(CubeCaseSpec),
    Dim1(Dim1Spec),
    Derivative(DerivativeSpec),
    SmoothDeficit(SmoothDeficitSpec),
    DerivativeSmooth(DerivativeSmoothSpec),
    EqualityScan(EqualityScanSpec),
    OracleCompare(OracleCompareSpec),
    ProjectionCheck(ProjectionCheckSpec),
    CovarianceCheck(CovarianceCheckSpec),
}

fn is_false(b: &bool) -> bool {
    !*b
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VolumeSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub id: Option<String>,
    pub body: String,
    #[serde(default, skip_serializing_if = "is_false")]
    pub exact: bool,
}

/// One slot group of a mixed-volume query: `count` copies of `body`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SlotSpec {
    pub body: String,
    #[serde(default = "default_count")]
    pub count: usize,
}

fn default_count() -> usize {
    1
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MixedVolumeSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub id: Option<String>,
    pub slots: Vec<SlotSpec>,
    #[serde(default, skip_serializing_if = "is_false")]
    pub exact: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DeficitSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub id: Option<String>,
    /// Body name; may be omitted when the file has exactly one
    /// full-dimensional zonotope.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub body: Option<String>,
    pub function: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MonotonicitySpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub id: Option<String>,
    pub body: String,
    pub segment: String,
    pub function: String,
    #[serde(default = "default_points")]
    pub points: usize,
}

fn default_points() -> usize {
    11
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChainSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub id: Option<String>,
    pub base: String,
    pub segments: Vec<String>,
    pub function: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub id: Option<String>,
    pub dims: Vec<usize>,
    /// Absolute generator counts (each must be >= every swept dimension).
    /// Omitted: counts n, n+2, n+4 above each dimension n.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gens: Option<Vec<usize>>,
    pub trials: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default, skip_serializing_if = "is_false")]
    pub collect_trials: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CubeCaseSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub id: Option<String>,
    pub dim: usize,
    pub function: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Dim1Spec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub id: Option<String>,
    /// Half-length of the body `[-a, a]`.
    pub a: f64,
    /// Shorthand: the value of `f` at both poles (builds a one-dimensional
    /// support function with that value).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fvals: Option<f64>,
    /// Alternatively, a named function; exactly one of the two is required.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub function: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DerivativeSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub id: Option<String>,
    pub body: String,
    pub segment: String,
    pub function: String,
    /// Central-difference steps, strictly decreasing.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub steps: Option<Vec<f64>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SmoothDeficitSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub id: Option<String>,
    pub body: String,
    pub function: String,
    /// Refinement-agreement tolerance for the accuracy warning.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tol: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DerivativeSmoothSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub id: Option<String>,
    pub body: String,
    pub segment: String,
    pub function: String,
    /// Forward-difference steps, strictly decreasing.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub steps: Option<Vec<f64>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EqualityScanSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub id: Option<String>,
    pub body: String,
    pub candidates: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OracleCompareSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub id: Option<String>,
    pub first: String,
    pub second: String,
    /// Copies of `first`; defaults to n-1.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub first_count: Option<usize>,
    /// Copies of `second`; defaults to 1.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub second_count: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProjectionCheckSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub id: Option<String>,
    pub segment: String,
    /// Exactly n-1 body names.
    pub bodies: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CovarianceCheckSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub id: Option<String>,
    pub matrix: Vec<Vec<f64>>,
    pub slots: Vec<SlotSpec>,
}

/// Serializes a tagged record: the payload's fields plus `tag_key: tag`.
fn serialize_tagged<T: Serialize, S: Serializer>(
    tag_key: &str,
    tag: &str,
    payload: &T,
    serializer: S,
) -> std::result::Result<S::Ok, S::Error> {
    let value = serde_json::to_value(payload).map_err(serde::ser::Error::custom)?;
    let Value::Object(mut map) = value else {
        return Err(serde::ser::Error::custom("tagged records must be objects"));
    };
    map.insert(tag_key.to_owned(), Value::String(tag.to_owned()));
    Value::Object(map).serialize(serializer)
}

/// Splits a tagged record into its tag and the remaining fields.
fn split_tag<'de, D: Deserializer<'de>>(
    deserializer: D,
    tag_key: &str,
    what: &str,
) -> std::result::Result<(String, Value), D::Error> {
    let mut map = serde_json::Map::<String, Value>::deserialize(deserializer)?;
    let tag = map
        .remove(tag_key)
        .ok_or_else(|| D::Error::custom(format!("{what} record is missing its '{tag_key}' field")))?;
    let Value::String(tag) = tag else {
        return Err(D::Error::custom(format!("the '{tag_key}' field of a {what} record must be a string")));
    };
    Ok((tag, Value::Object(map)))
}

macro_rules! tagged_enum {
    ($name:ident, $tag_key:literal, $what:literal, { $($tag:literal => $variant:ident),+ $(,)? }) => {
        impl Serialize for $name {
            fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
                match self {
                    $( $name::$variant(payload) => serialize_tagged($tag_key, $tag, payload, serializer), )+
                }
            }
        }

        impl<'de> Deserialize<'de> for $name {
            fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
                let (tag, rest) = split_tag(deserializer, $tag_key, $what)?;
                match tag.as_str() {
                    $(
                        $tag => serde_json::from_value(rest)
                            .map($name::$variant)
                            .map_err(|e| D::Error::custom(format!("in {} '{}': {}", $what, $tag, e))),
                    )+
                    other => Err(D::Error::custom(format!(
                        "unknown {} '{}'; expected one of: {}",
                        $what, other, [$($tag),+].join(", ")
                    ))),
                }
            }
        }
    };
}

tagged_enum!(BodyLiteral, "type", "body", {
    "zonotope" => Zonotope,
    "segment" => Segment,
    "ellipsoid" => Ellipsoid,
    "perturbed_ball" => PerturbedBall,
});

tagged_enum!(FunctionLiteral, "type", "function", {
    "support_diff" => SupportDiff,
    "support" => Support,
});

tagged_enum!(Experiment, "command", "experiment", {
    "volume" => Volume,
    "mixed-volume" => MixedVolume,
    "deficit" => Deficit,
    "monotonicity" => Monotonicity,
    "chain" => Chain,
    "sweep" => Sweep,
    "cube-case" => CubeCase,
    "dim1" => Dim1,
    "derivative" => Derivative,
    "smooth-deficit" => SmoothDeficit,
    "derivative-smooth" => DerivativeSmooth,
    "equality-scan" => EqualityScan,
    "oracle-compare" => OracleCompare,
    "projection-check" => ProjectionCheck,
    "covariance-check" => CovarianceCheck,
});

impl Experiment {
    /// The command tag this record dispatches to.
    pub fn command(&self) -> &'static str {
        match self {
            Experiment::Volume(_) => "volume",
            Experiment::MixedVolume(_) => "mixed-volume",
            Experiment::Deficit(_) => "deficit",
            Experiment::Monotonicity(_) => "monotonicity",
            Experiment::Chain(_) => "chain",
            Experiment::Sweep(_) => "sweep",
            Experiment::CubeCase(_) => "cube-case",
            Experiment::Dim1(_) => "dim1",
            Experiment::Derivative(_) => "derivative",
            Experiment::SmoothDeficit(_) => "smooth-deficit",
            Experiment::DerivativeSmooth(_) => "derivative-smooth",
            Experiment::EqualityScan(_) => "equality-scan",
            Experiment::OracleCompare(_) => "oracle-compare",
            Experiment::ProjectionCheck(_) => "projection-check",
            Experiment::CovarianceCheck(_) => "covariance-check",
        }
    }

    /// The record's explicit id, if any.
    pub fn id(&self) -> Option<&str> {
        match self {
            Experiment::Volume(s) => s.id.as_deref(),
            Experiment::MixedVolume(s) => s.id.as_deref(),
            Experiment::Deficit(s) => s.id.as_deref(),
            Experiment::Monotonicity(s) => s.id.as_deref(),
            Experiment::Chain(s) => s.id.as_deref(),
            Experiment::Sweep(s) => s.id.as_deref(),
            Experiment::CubeCase(s) => s.id.as_deref(),
            Experiment::Dim1(s) => s.id.as_deref(),
            Experiment::Derivative(s) => s.id.as_deref(),
            Experiment::SmoothDeficit(s) => s.id.as_deref(),
            Experiment::DerivativeSmooth(s) => s.id.as_deref(),
            Experiment::EqualityScan(s) => s.id.as_deref(),
            Experiment::OracleCompare(s) => s.id.as_deref(),
            Experiment::ProjectionCheck(s) => s.id.as_deref(),
            Experiment::CovarianceCheck(s) => s.id.as_deref(),
        }
    }
}

impl InstanceFile {
    /// An empty instance (useful for programmatic construction).
    pub fn empty() -> Self {
        InstanceFile {
            version: INSTANCE_VERSION,
            bodies: BTreeMap::new(),
            functions: BTreeMap::new(),
            experiments: Vec::new(),
        }
    }

    /// Parses and validates an instance from JSON text.
    pub fn from_json(text: &str) -> Result<Self> {
        let file: InstanceFile = serde_json::from_str(text)?;
        file.validate()?;
        Ok(file)
    }

    /// Reads, parses, and validates an instance file.
    pub fn from_path(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| {
            LlbmError::InvalidInput(format!("cannot read '{}': {e}", path.display()))
        })?;
        Self::from_json(&text)
    }

    /// Serializes to pretty JSON.
    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    /// Checks the version tag and that every name mentioned anywhere
    /// resolves.  Dimension consistency is enforced by the engines when an
    /// experiment runs.
    pub fn validate(&self) -> Result<()> {
        if self.version != INSTANCE_VERSION {
            return Err(LlbmError::InvalidInput(format!(
                "unsupported instance version {}; this build reads version {}",
                self.version, INSTANCE_VERSION
            )));
        }
        for (name, f) in &self.functions {
            match f {
                FunctionLiteral::SupportDiff(s) => {
                    self.require_body(&s.plus, &format!("function '{name}'"))?;
                    self.require_body(&s.minus, &format!("function '{name}'"))?;
                }
                FunctionLiteral::Support(s) => {
                    self.require_body(&s.body, &format!("function '{name}'"))?;
                }
            }
        }
        for (index, e) in self.experiments.iter().enumerate() {
            let at = format!("experiment #{index} ({})", e.command());
            for b in self.body_refs(e) {
                self.require_body(&b, &at)?;
            }
            for f in self.function_refs(e) {
                if !self.functions.contains_key(&f) {
                    return Err(LlbmError::InvalidInput(format!(
                        "{at} references unknown function '{f}'"
                    )));
                }
            }
        }
        Ok(())
    }

    fn require_body(&self, name: &str, at: &str) -> Result<()> {
        if !self.bodies.contains_key(name) {
            return Err(LlbmError::InvalidInput(format!(
                "{at} references unknown body '{name}'"
            )));
        }
        Ok(())
    }

    fn body_refs(&self, e: &Experiment) -> Vec<String> {
        match e {
            Experiment::Volume(s) => vec![s.body.clone()],
            Experiment::MixedVolume(s) => s.slots.iter().map(|g| g.body.clone()).collect(),
            Experiment::Deficit(s) => s.body.iter().cloned().collect(),
            Experiment::Monotonicity(s) => vec![s.body.clone(), s.segment.clone()],
            Experiment::Chain(s) => {
                let mut v = vec![s.base.clone()];
                v.extend(s.segments.iter().cloned());
                v
            }
            Experiment::Sweep(_) => vec![],
            Experiment::CubeCase(_) => vec![],
            Experiment::Dim1(_) => vec![],
            Experiment::Derivative(s) => vec![s.body.clone(), s.segment.clone()],
            Experiment::SmoothDeficit(s) => vec![s.body.clone()],
            Experiment::DerivativeSmooth(s) => vec![s.body.clone(), s.segment.clone()],
            Experiment::EqualityScan(s) => {
                let mut v = vec![s.body.clone()];
                v.extend(s.candidates.iter().cloned());
                v
            }
            Experiment::OracleCompare(s) => vec![s.first.clone(), s.second.clone()],
            Experiment::ProjectionCheck(s) => {
                let mut v = vec![s.segment.clone()];
                v.extend(s.bodies.iter().cloned());
                v
            }
            Experiment::CovarianceCheck(s) => s.slots.iter().map(|g| g.body.clone()).collect(),
        }
    }

    fn function_refs(&self, e: &Experiment) -> Vec<String> {
        match e {
            Experiment::Deficit(s) => vec![s.function.clone()],
            Experiment::Monotonicity(s) => vec![s.function.clone()],
            Experiment::Chain(s) => vec![s.function.clone()],
            Experiment::CubeCase(s) => vec![s.function.clone()],
            Experiment::Dim1(s) => s.function.iter().cloned().collect(),
            Experiment::Derivative(s) => vec![s.function.clone()],
            Experiment::SmoothDeficit(s) => vec![s.function.clone()],
            Experiment::DerivativeSmooth(s) => vec![s.function.clone()],
            _ => vec![],
        }
    }

    fn literal(&self, name: &str) -> Result<&BodyLiteral> {
        self.bodies
            .get(name)
            .ok_or_else(|| LlbmError::InvalidInput(format!("unknown body '{name}'")))
    }

    /// Resolves a body to a zonotope.  Segments become their zonotope form;
    /// quadrature bodies are rejected by name.
    pub fn zonotope(&self, name: &str) -> Result<Zonotope> {
        match self.literal(name)? {
            BodyLiteral::Zonotope(z) => {
                let gens = z
                    .generators
                    .iter()
                    .map(|g| Vector::new(g.clone()))
                    .collect::<Result<Vec<_>>>()
                    .map_err(|e| label(name, e))?;
                Zonotope::new(z.dim, gens).map_err(|e| label(name, e))
            }
            BodyLiteral::Segment(s) => {
                let v = Vector::new(s.generator.clone()).map_err(|e| label(name, e))?;
                Ok(Segment::new(v).map_err(|e| label(name, e))?.to_zonotope())
            }
            BodyLiteral::Ellipsoid(_) | BodyLiteral::PerturbedBall(_) => {
                Err(LlbmError::InvalidInput(format!(
                    "body '{name}' is a quadrature body; this operation needs a zonotope or segment"
                )))
            }
        }
    }

    /// Resolves a body that must be a segment literal.
    pub fn segment(&self, name: &str) -> Result<Segment> {
        match self.literal(name)? {
            BodyLiteral::Segment(s) => {
                let v = Vector::new(s.generator.clone()).map_err(|e| label(name, e))?;
                Segment::new(v).map_err(|e| label(name, e))
            }
            _ => Err(LlbmError::InvalidInput(format!(
                "body '{name}' must be a segment for this operation"
            ))),
        }
    }

    /// Resolves a body to a quadrature-backed smooth body.
    pub fn smooth_body(&self, name: &str) -> Result<SmoothBody> {
        match self.literal(name)? {
            BodyLiteral::Ellipsoid(e) => {
                SmoothBody::ellipsoid(e.matrix.clone()).map_err(|e| label(name, e))
            }
            BodyLiteral::PerturbedBall(p) => {
                SmoothBody::perturbed_ball(p.dim, p.radius, p.harmonics.clone())
                    .map_err(|e| label(name, e))
            }
            BodyLiteral::Zonotope(_) | BodyLiteral::Segment(_) => {
                Err(LlbmError::InvalidInput(format!(
                    "body '{name}' is polytopal; this operation needs an ellipsoid or perturbed ball"
                )))
            }
        }
    }

    /// Resolves a function over zonotope-world bodies.
    pub fn test_function(&self, name: &str) -> Result<TestFunction> {
        let f = self
            .functions
            .get(name)
            .ok_or_else(|| LlbmError::InvalidInput(format!("unknown function '{name}'")))?;
        match f {
            FunctionLiteral::SupportDiff(s) => {
                let plus = self.zonotope(&s.plus)?;
                let minus = self.zonotope(&s.minus)?;
                TestFunction::support_diff(plus, minus).map_err(|e| label(name, e))
            }
            FunctionLiteral::Support(s) => Ok(TestFunction::support_of(&self.zonotope(&s.body)?)),
        }
    }

    /// Resolves a function over quadrature-backed smooth bodies.
    pub fn smooth_function(&self, name: &str) -> Result<SmoothFunction> {
        let f = self
            .functions
            .get(name)
            .ok_or_else(|| LlbmError::InvalidInput(format!("unknown function '{name}'")))?;
        match f {
            FunctionLiteral::SupportDiff(s) => {
                let plus = self.smooth_body(&s.plus)?;
                let minus = self.smooth_body(&s.minus)?;
                SmoothFunction::support_diff(&plus, &minus).map_err(|e| label(name, e))
            }
            FunctionLiteral::Support(s) => {
                Ok(SmoothFunction::support_of(&self.smooth_body(&s.body)?))
            }
        }
    }

    /// Builds a linear map from an inline row-major matrix.
    pub fn linear_map(matrix: &[Vec<f64>]) -> Result<LinearMap> {
        LinearMap::new(matrix.to_vec())
    }

    /// The single full-dimensional zonotope body, when a record omits the
    /// body name.  Errors if the choice is ambiguous or empty.
    pub fn default_deficit_body(&self) -> Result<String> {
        let mut eligible: Vec<&str> = Vec::new();
        for (name, lit) in &self.bodies {
            if matches!(lit, BodyLiteral::Zonotope(_)) && self.zonotope(name)?.is_full_dimensional()
            {
                eligible.push(name);
            }
        }
        match eligible.as_slice() {
            [only] => Ok((*only).to_string()),
            [] => Err(LlbmError::InvalidInput(
                "no full-dimensional zonotope body to default to; name one explicitly".into(),
            )),
            many => Err(LlbmError::InvalidInput(format!(
                "several bodies are eligible ({}); name one explicitly",
                many.join(", ")
            ))),
        }
    }
}

fn label(name: &str, e: LlbmError) -> LlbmError {
    LlbmError::InvalidInput(format!("in '{name}': {e}"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::smooth::SmoothSupport as _;

    fn sample_text() -> &'static str {
        r#"{
            "version": 1,
            "bodies": {
                "cube": {"type": "zonotope", "dim": 3,
                         "generators": [[1,0,0],[0,1,0],[0,0,1]]},
                "hex": {"type": "zonotope", "dim": 3,
                        "generators": [[1,0,0],[0,1,0],[1,1,0],[0,0,1]]},
                "j": {"type": "segment", "generator": [0,0,1]},
                "ball": {"type": "ellipsoid", "matrix": [[1,0,0],[0,1,0],[0,0,1]]},
                "bump": {"type": "perturbed_ball", "dim": 3, "radius": 1.0,
                         "harmonics": [{"l": 2, "m": 1, "coeff": 0.05}]}
            },
            "functions": {
                "f1": {"type": "support_diff", "plus": "hex", "minus": "cube"},
                "hk": {"type": "support", "body": "cube"},
                "fs": {"type": "support_diff", "plus": "bump", "minus": "ball"}
            },
            "experiments": [
                {"command": "volume", "id": "v1", "body": "cube"},
                {"command": "deficit", "function": "f1"},
                {"command": "mixed-volume",
                 "slots": [{"body": "cube", "count": 2}, {"body": "j"}]},
                {"command": "dim1", "a": 1.0, "fvals": 3.0},
                {"command": "sweep", "dims": [2, 3], "gens": [4, 6],
                 "trials": 5, "seed": 42}
            ]
        }"#
    }

    #[test]
    fn parse_serialize_parse_is_identity() {
        let a = InstanceFile::from_json(sample_text()).unwrap();
        let text = a.to_json().unwrap();
        let b = InstanceFile::from_json(&text).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn unknown_fields_are_rejected_at_every_level() {
        let top = r#"{"version": 1, "extra": 1}"#;
        assert!(InstanceFile::from_json(top).is_err());

        let body = r#"{"version": 1, "bodies": {"z": {"type": "zonotope", "dim": 1,
                       "generators": [[1]], "color": "red"}}}"#;
        let err = InstanceFile::from_json(body).unwrap_err().to_string();
        assert!(err.contains("color"), "{err}");

        let func = r#"{"version": 1,
                       "bodies": {"z": {"type": "zonotope", "dim": 1, "generators": [[1]]}},
                       "functions": {"f": {"type": "support", "body": "z", "typo": 0}}}"#;
        assert!(InstanceFile::from_json(func).is_err());

        let exp = r#"{"version": 1, "experiments": [
                      {"command": "dim1", "a": 1.0, "fvals": 3.0, "oops": true}]}"#;
        let err = InstanceFile::from_json(exp).unwrap_err().to_string();
        assert!(err.contains("oops"), "{err}");
    }

    #[test]
    fn unknown_tags_name_the_offender() {
        let bad = r#"{"version": 1, "bodies": {"z": {"type": "simplex"}}}"#;
        let err = InstanceFile::from_json(bad).unwrap_err().to_string();
        assert!(err.contains("simplex"), "{err}");

        let bad = r#"{"version": 1, "experiments": [{"command": "make-coffee"}]}"#;
        let err = InstanceFile::from_json(bad).unwrap_err().to_string();
        assert!(err.contains("make-coffee"), "{err}");
    }

    #[test]
    fn dangling_names_are_rejected_with_the_entity_named() {
        let bad = r#"{"version": 1,
                      "functions": {"f": {"type": "support", "body": "ghost"}}}"#;
        let err = InstanceFile::from_json(bad).unwrap_err().to_string();
        assert!(err.contains("ghost") && err.contains('f'), "{err}");

        let bad = r#"{"version": 1, "experiments": [
                      {"command": "volume", "body": "phantom"}]}"#;
        let err = InstanceFile::from_json(bad).unwrap_err().to_string();
        assert!(err.contains("phantom"), "{err}");
    }

    #[test]
    fn version_gate() {
        let bad = r#"{"version": 2}"#;
        let err = InstanceFile::from_json(bad).unwrap_err().to_string();
        assert!(err.contains("version"), "{err}");
    }

    #[test]
    fn resolution_produces_working_values() {
        let file = InstanceFile::from_json(sample_text()).unwrap();
        let cube = file.zonotope("cube").unwrap();
        assert_eq!(crate::engine::zonotope_volume(&cube), 8.0);
        let seg = file.segment("j").unwrap();
        assert_eq!(seg.length(), 2.0);
        let f = file.test_function("f1").unwrap();
        assert_eq!(f.dim(), 3);
        let ball = file.smooth_body("ball").unwrap();
        assert_eq!(ball.dim(), 3);
        let fs = file.smooth_function("fs").unwrap();
        assert_eq!(fs.dim(), 3);
    }

    #[test]
    fn kind_mismatches_are_descriptive() {
        let file = InstanceFile::from_json(sample_text()).unwrap();
        let err = file.zonotope("ball").unwrap_err().to_string();
        assert!(err.contains("ball") && err.contains("quadrature"), "{err}");
        let err = file.segment("cube").unwrap_err().to_string();
        assert!(err.contains("segment"), "{err}");
        let err = file.smooth_body("cube").unwrap_err().to_string();
        assert!(err.contains("polytopal"), "{err}");
        // Mixed-kind support differences are rejected on resolution.
        let text = r#"{"version": 1,
            "bodies": {
                "z": {"type": "zonotope", "dim": 3, "generators": [[1,0,0],[0,1,0],[0,0,1]]},
                "e": {"type": "ellipsoid", "matrix": [[1,0,0],[0,1,0],[0,0,1]]}
            },
            "functions": {"f": {"type": "support_diff", "plus": "z", "minus": "e"}}}"#;
        let file = InstanceFile::from_json(text).unwrap();
        assert!(file.test_function("f").is_err());
        assert!(file.smooth_function("f").is_err());
    }

    #[test]
    fn deficit_body_defaulting() {
        // Two full-dimensional zonotopes: ambiguous.
        let file = InstanceFile::from_json(sample_text()).unwrap();
        let err = file.default_deficit_body().unwrap_err().to_string();
        assert!(err.contains("cube") && err.contains("hex"), "{err}");

        // Exactly one: picked.
        let text = r#"{"version": 1, "bodies": {
            "only": {"type": "zonotope", "dim": 2, "generators": [[1,0],[0,1]]},
            "flat": {"type": "zonotope", "dim": 2, "generators": [[1,0]]},
            "s": {"type": "segment", "generator": [1,1]}}}"#;
        let file = InstanceFile::from_json(text).unwrap();
        assert_eq!(file.default_deficit_body().unwrap(), "only");
    }
}
