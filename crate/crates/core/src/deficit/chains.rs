//! Monotonicity of the deficit along segment scaling, and the peel-off
//! chain that reduces a zonotope to a base body one segment at a time.

use crate::deficit::{deficit, normalized_function, DeficitReport};
use crate::error::{LlbmError, Result};
use crate::geometry::{Segment, TestFunction, Zonotope};

/// Deficit values along `t -> deficit((K div I) + t I, fbar)` over an even
/// grid on `[0, 1]`, with `fbar` the normalized shift of `f` at `(K, I)`.
///
/// After normalization the derivative of this curve is a sum of two
/// nonnegative terms, so the curve must be non-decreasing.
#[derive(Debug, Clone, serde::Serialize)]
pub struct MonotonicityReport {
    /// The normalization constant used for `fbar`.
    pub constant: f64,
    /// Grid parameters in `[0, 1]`, increasing.
    pub ts: Vec<f64>,
    /// `deficit(K_t, fbar)` per grid point.
    pub deficits: Vec<f64>,
    /// Term scale of the deficit per grid point.
    pub scales: Vec<f64>,
    /// Largest normalized decrease between consecutive grid points:
    /// `max_i (deficits[i] - deficits[i+1]) / max(scales[i], scales[i+1])`.
    /// Negative or tiny positive values certify monotonicity.
    pub max_backslide: f64,
}

/// Evaluates the normalized deficit along the segment-scaling path.
/// `I` must be a structural summand of `K`.
pub fn monotonicity_check(
    k: &Zonotope,
    seg: &Segment,
    f: &TestFunction,
    points: usize,
) -> Result<MonotonicityReport> {
    if points < 2 {
        return Err(LlbmError::InvalidInput("monotonicity grid needs >= 2 points".into()));
    }
    if !k.has_summand(seg) {
        return Err(LlbmError::NotASummand(
            "monotonicity path needs the segment as a structural summand".into(),
        ));
    }
    let (constant, fbar) = normalized_function(k, seg, f)?;
    let mut ts = Vec::with_capacity(points);
    let mut deficits = Vec::with_capacity(points);
    let mut scales = Vec::with_capacity(points);
    for i in 0..points {
        let t = i as f64 / (points - 1) as f64;
        let body = k.minkowski_diff_summand(seg, t)?;
        if !body.is_full_dimensional() {
            return Err(LlbmError::DegenerateBody(format!(
                "body at path parameter t={t} is lower-dimensional"
            )));
        }
        let r = deficit(&body, &fbar)?;
        ts.push(t);
        deficits.push(r.deficit);
        scales.push(r.scale());
    }
    let mut max_backslide = f64::NEG_INFINITY;
    for i in 0..points - 1 {
        let pair_scale = scales[i].max(scales[i + 1]);
        max_backslide = max_backslide.max((deficits[i] - deficits[i + 1]) / pair_scale);
    }
    Ok(MonotonicityReport { constant, ts, deficits, scales, max_backslide })
}

/// One station of the peel-off chain.
#[derive(Debug, Clone, serde::Serialize)]
pub struct ChainStation {
    /// Number of segments still present (the station body is
    /// `base + I_1 + ... + I_count`).
    pub segments_remaining: usize,
    /// Normalization constant consumed when peeling the segment at this
    /// station (zero at the base station, which peels nothing).
    pub constant: f64,
    /// Deficit of the station body at the function normalized so far.
    pub report: DeficitReport,
}

/// The full peel-off chain: deficits must be non-increasing from the full
/// body down to the base, and the base deficit must be nonnegative.
#[derive(Debug, Clone, serde::Serialize)]
pub struct ChainReport {
    /// Stations ordered from the full body (all segments) to the base.
    pub stations: Vec<ChainStation>,
    /// Largest normalized increase between consecutive stations:
    /// `max_j (station[j+1].deficit - station[j].deficit) / pair_scale`.
    pub max_climb: f64,
    /// Final (base) deficit normalized by its scale.
    pub final_normalized: f64,
}

/// Peels the segments off `base + I_1 + ... + I_m` in reverse order,
/// renormalizing the test function at each step so the deficit can only
/// decrease down the chain.
pub fn peel_chain(
    base: &Zonotope,
    segments: &[Segment],
    f: &TestFunction,
) -> Result<ChainReport> {
    let n = base.dim();
    if !base.is_full_dimensional() {
        return Err(LlbmError::DegenerateBody(
            "chain base must be full-dimensional".into(),
        ));
    }
    // Stations: bodies[j] = base + I_1 + ... + I_j.
    let mut bodies = Vec::with_capacity(segments.len() + 1);
    bodies.push(base.clone());
    for seg in segments {
        if seg.dim() != n {
            return Err(LlbmError::DimensionMismatch { expected: n, got: seg.dim() });
        }
        let prev = bodies.last().expect("nonempty by construction");
        bodies.push(prev.add_segment(seg)?);
    }

    let mut stations = Vec::with_capacity(bodies.len());
    let mut current = f.clone();
    for j in (0..bodies.len()).rev() {
        let body = &bodies[j];
        let report = deficit(body, &current)?;
        let constant = if j > 0 {
            let (c, shifted) = normalized_function(body, &segments[j - 1], &current)?;
            current = shifted;
            c
        } else {
            0.0
        };
        stations.push(ChainStation { segments_remaining: j, constant, report });
    }

    let mut max_climb = f64::NEG_INFINITY;
    for w in stations.windows(2) {
        let pair_scale = w[0].report.scale().max(w[1].report.scale());
        max_climb = max_climb.max((w[1].report.deficit - w[0].report.deficit) / pair_scale);
    }
    let last = stations.last().expect("chain has at least the base station");
    let final_normalized = last.report.deficit / last.report.scale();
    Ok(ChainReport { stations, max_climb, final_normalized })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::Vector;
    use crate::tolerances;

    fn v(coords: &[f64]) -> Vector {
        Vector::new(coords.to_vec()).unwrap()
    }

    fn instance() -> (Zonotope, Segment, TestFunction) {
        let seg = Segment::new(v(&[0.75, 0.5, 0.25])).unwrap();
        let base = Zonotope::new(
            3,
            vec![v(&[1.0, 0.0, 0.0]), v(&[0.0, 1.0, 0.25]), v(&[0.25, 0.0, 1.0])],
        )
        .unwrap();
        let k = base.add_segment(&seg).unwrap();
        let z1 = Zonotope::new(3, vec![v(&[1.0, 0.5, 0.25]), v(&[0.0, 0.75, 1.0])]).unwrap();
        let z2 = Zonotope::new(3, vec![v(&[0.5, 1.0, 0.0])]).unwrap();
        let f = TestFunction::support_diff(z1, z2).unwrap();
        (k, seg, f)
    }

    #[test]
    fn normalized_deficit_is_monotone_along_the_path() {
        let (k, seg, f) = instance();
        let report = monotonicity_check(&k, &seg, &f, 11).unwrap();
        assert_eq!(report.ts.len(), 11);
        assert!(
            report.max_backslide <= tolerances::MONOTONE_SLACK,
            "max backslide {}",
            report.max_backslide
        );
        // The shift must leave the full-body deficit unchanged.
        let direct = deficit(&k, &f).unwrap();
        let at_one = *report.deficits.last().unwrap();
        assert!(
            (direct.deficit - at_one).abs()
                <= tolerances::SHIFT_INVARIANCE
                    * (1.0 + direct.deficit.abs() + report.constant.powi(2)),
            "shifted endpoint {} vs direct {}",
            at_one,
            direct.deficit
        );
    }

    #[test]
    fn chain_decreases_and_ends_nonnegative() {
        let (_, seg, f) = instance();
        let base = Zonotope::new(
            3,
            vec![v(&[1.0, 0.0, 0.0]), v(&[0.0, 1.0, 0.25]), v(&[0.25, 0.0, 1.0])],
        )
        .unwrap();
        let seg2 = Segment::new(v(&[0.0, 0.5, 1.0])).unwrap();
        let report = peel_chain(&base, &[seg, seg2], &f).unwrap();
        assert_eq!(report.stations.len(), 3);
        assert!(report.max_climb <= tolerances::MONOTONE_SLACK, "climb {}", report.max_climb);
        assert!(
            report.final_normalized >= tolerances::DEFICIT_FLOOR,
            "final {}",
            report.final_normalized
        );
    }

    #[test]
    fn monotonicity_rejects_non_summands() {
        let (k, _, f) = instance();
        let alien = Segment::new(v(&[1.0, -1.0, 0.5])).unwrap();
        assert!(matches!(
            monotonicity_check(&k, &alien, &f, 5),
            Err(LlbmError::NotASummand(_))
        ));
    }
}
