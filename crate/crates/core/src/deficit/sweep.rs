//! Randomized nonnegativity sweeps and the structured cube and
//! dimension-one cases.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::deficit::{deficit, normalization_constant, DeficitReport};
use crate::engine::functional_mixed_volume;
use crate::error::{LlbmError, Result};
use crate::geometry::{Segment, TestFunction, Vector, Zonotope};
use crate::tolerances;

/// How the generator counts of the sweep cells are specified.
#[derive(Debug, Clone)]
pub enum GeneratorGrid {
    /// Offsets above each dimension (offset 0 gives a parallelotope-sized
    /// family in every dimension).
    Offsets(Vec<usize>),
    /// Absolute counts; each must be at least the dimension it is paired
    /// with, since the bodies have to be full-dimensional.
    Counts(Vec<usize>),
}

impl GeneratorGrid {
    fn counts_for(&self, dim: usize) -> Result<Vec<usize>> {
        match self {
            GeneratorGrid::Offsets(offsets) => Ok(offsets.iter().map(|o| dim + o).collect()),
            GeneratorGrid::Counts(counts) => {
                if let Some(&m) = counts.iter().find(|&&m| m < dim) {
                    return Err(LlbmError::InvalidInput(format!(
                        "a full-dimensional zonotope in dimension {dim} needs at least \
                         {dim} generators, got {m}"
                    )));
                }
                Ok(counts.clone())
            }
        }
    }
}

/// Configuration of a randomized deficit sweep over a grid of cells
/// (dimension x generator count).
#[derive(Debug, Clone)]
pub struct SweepConfig {
    /// Ambient dimensions to cover.
    pub dims: Vec<usize>,
    /// Generator counts per dimension.
    pub gens: GeneratorGrid,
    /// Random trials per cell.
    pub trials: usize,
    /// Master seed; every trial derives its own stream from
    /// (seed, dim, generators, trial), so cells and trials are independent
    /// of execution order and thread count.
    pub seed: u64,
    /// Keep one record per trial (for row-level exports).  Costs memory
    /// proportional to the total trial count.
    pub collect_trials: bool,
}

impl Default for SweepConfig {
    fn default() -> Self {
        Self {
            dims: vec![2, 3, 4, 5],
            gens: GeneratorGrid::Offsets(vec![0, 2, 4]),
            trials: 1000,
            seed: 2026,
            collect_trials: false,
        }
    }
}

/// One sweep trial, kept only when `SweepConfig::collect_trials` is set.
#[derive(Debug, Clone, Serialize)]
pub struct TrialRecord {
    pub dim: usize,
    pub generators: usize,
    pub trial: usize,
    /// Derived stream seed; feeding it to `ChaCha8Rng::seed_from_u64`
    /// replays exactly this trial.
    pub stream: u64,
    pub deficit: f64,
    pub scale: f64,
    pub normalized: f64,
    /// Whether the normalized deficit stayed above the violation floor.
    pub pass: bool,
}

/// Outcome of one sweep cell.
#[derive(Debug, Clone, Serialize)]
pub struct CellReport {
    pub dim: usize,
    pub generators: usize,
    pub trials: usize,
    /// Smallest deficit across trials, normalized by its term scale.
    pub min_normalized: f64,
    /// Trial index attaining the minimum (for replay).
    pub min_trial: usize,
    /// |deficit| / scale for the planted case `f = h_K`, which cancels
    /// analytically.
    pub planted_normalized: f64,
    /// Trials whose normalized deficit fell below the configured floor.
    pub violations: usize,
}

/// Outcome of the whole sweep.
#[derive(Debug, Clone, Serialize)]
pub struct SweepReport {
    pub cells: Vec<CellReport>,
    pub total_trials: usize,
    pub violations: usize,
    /// Per-trial rows; empty unless the config asked for them.
    pub trial_records: Vec<TrialRecord>,
    pub elapsed_secs: f64,
}

/// Runs the randomized nonnegativity sweep.  Trials within a cell run in
/// parallel; results are reduced in trial order, so the report is
/// deterministic for a fixed seed.
pub fn zonoid_sweep(cfg: &SweepConfig) -> Result<SweepReport> {
    let start = std::time::Instant::now();
    let mut cells = Vec::new();
    let mut trial_records = Vec::new();
    let mut violations = 0usize;
    let mut total_trials = 0usize;
    for &dim in &cfg.dims {
        if dim < 1 {
            return Err(LlbmError::InvalidInput("sweep dimensions start at 1".into()));
        }
        for generators in cfg.gens.counts_for(dim)? {
            let outcomes: Vec<(f64, f64)> = (0..cfg.trials)
                .into_par_iter()
                .map(|trial| -> Result<(f64, f64)> {
                    let mut rng = trial_rng(cfg.seed, dim, generators, trial as u64);
                    let k = random_zonotope(&mut rng, dim, generators)?;
                    let f = random_test_function(&mut rng, dim)?;
                    let r = deficit(&k, &f)?;
                    Ok((r.deficit, r.scale()))
                })
                .collect::<Result<_>>()?;
            let (mut min_normalized, mut min_trial) = (f64::INFINITY, 0usize);
            let mut cell_violations = 0usize;
            for (i, &(value, scale)) in outcomes.iter().enumerate() {
                let x = value / scale;
                if x < min_normalized {
                    min_normalized = x;
                    min_trial = i;
                }
                if x < tolerances::DEFICIT_FLOOR {
                    cell_violations += 1;
                }
                if cfg.collect_trials {
                    trial_records.push(TrialRecord {
                        dim,
                        generators,
                        trial: i,
                        stream: trial_stream(cfg.seed, dim, generators, i as u64),
                        deficit: value,
                        scale,
                        normalized: x,
                        pass: x >= tolerances::DEFICIT_FLOOR,
                    });
                }
            }
            // Planted zero: f = h_K makes all three terms cancel.
            let mut rng = trial_rng(cfg.seed, dim, generators, cfg.trials as u64);
            let k = random_zonotope(&mut rng, dim, generators)?;
            let planted = deficit(&k, &TestFunction::support_of(&k))?;
            let planted_normalized = planted.deficit.abs() / planted.scale();

            violations += cell_violations;
            total_trials += cfg.trials;
            cells.push(CellReport {
                dim,
                generators,
                trials: cfg.trials,
                min_normalized,
                min_trial,
                planted_normalized,
                violations: cell_violations,
            });
        }
    }
    Ok(SweepReport {
        cells,
        total_trials,
        violations,
        trial_records,
        elapsed_secs: start.elapsed().as_secs_f64(),
    })
}

/// Derived stream seed for one trial.  SplitMix64 finalization over the
/// packed identifiers keeps streams decorrelated across cells and trials.
pub fn trial_stream(seed: u64, dim: usize, generators: usize, trial: u64) -> u64 {
    let mut x = seed
        ^ (dim as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15)
        ^ (generators as u64).wrapping_mul(0xBF58_476D_1CE4_E5B9)
        ^ trial.wrapping_mul(0x94D0_49BB_1331_11EB);
    x = (x ^ (x >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    x ^ (x >> 31)
}

/// The per-trial random stream.
pub fn trial_rng(seed: u64, dim: usize, generators: usize, trial: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(trial_stream(seed, dim, generators, trial))
}

/// A random full-dimensional zonotope with the requested number of
/// generators, coordinates uniform in [-1, 1].
pub fn random_zonotope<R: Rng>(rng: &mut R, dim: usize, generators: usize) -> Result<Zonotope> {
    for _ in 0..64 {
        let gens: Vec<Vector> = (0..generators)
            .map(|_| {
                Vector::new((0..dim).map(|_| rng.gen_range(-1.0..1.0)).collect())
            })
            .collect::<Result<_>>()?;
        let z = Zonotope::new(dim, gens)?;
        if z.is_full_dimensional() && z.generators().len() == generators {
            return Ok(z);
        }
    }
    Err(LlbmError::DegenerateBody(format!(
        "could not draw a full-dimensional zonotope with {generators} generators in dim {dim}"
    )))
}

/// A random support difference `h_{Z1} - h_{Z2}` with 2..=5 generators on
/// each side.
pub fn random_test_function<R: Rng>(rng: &mut R, dim: usize) -> Result<TestFunction> {
    let part = |rng: &mut R| -> Result<Zonotope> {
        let m = rng.gen_range(2..=5);
        let gens: Vec<Vector> = (0..m)
            .map(|_| Vector::new((0..dim).map(|_| rng.gen_range(-1.0..1.0)).collect()))
            .collect::<Result<_>>()?;
        Zonotope::new(dim, gens)
    };
    let z1 = part(rng)?;
    let z2 = part(rng)?;
    TestFunction::support_diff(z1, z2)
}

/// The structured cube case in dimension `n >= 2`.
///
/// With `C` the cube, `J = [-e_n, e_n]`, and `C0` the degenerate slab
/// `[-1,1]^(n-1) x {0}`:
/// * `V(C0[n-1], f) = 2^(n-1)/n * (f(e_n) + f(-e_n))`,
/// * `V(C0[n-1], J) = 2^n / n` (exactly, including in floating point),
/// * the normalization constant of `(C, J)` is `f(e_n)`, and
/// * the shifted function vanishes at both poles.
#[derive(Debug, Clone, Serialize)]
pub struct CubeCaseReport {
    pub dim: usize,
    /// `V(C0[n-1], f)` from the measure engine.
    pub v_slab_f: f64,
    /// `2^(n-1)/n * (f(e_n) + f(-e_n))`.
    pub v_slab_f_expected: f64,
    /// `V(C0[n-1], J)` from the measure engine.
    pub v_slab_seg: f64,
    /// The float nearest `2^n / n`.
    pub v_slab_seg_expected: f64,
    /// Normalization constant of the cube along `J`.
    pub constant: f64,
    /// Its closed form, `f(e_n)`.
    pub constant_expected: f64,
    /// The shifted function at `(e_n, -e_n)`; both must vanish.
    pub normalized_pole_values: (f64, f64),
    /// Deficit of the cube at `f`.
    pub deficit: DeficitReport,
}

/// Evaluates the cube case at an even test function.
pub fn cube_case(dim: usize, f: &TestFunction) -> Result<CubeCaseReport> {
    if dim < 2 {
        return Err(LlbmError::InvalidInput("the cube case needs dimension >= 2".into()));
    }
    if f.dim() != dim {
        return Err(LlbmError::DimensionMismatch { expected: dim, got: f.dim() });
    }
    let cube = Zonotope::cube(dim);
    let slab = Zonotope::slab(dim);
    let pole = Vector::basis(dim, dim - 1);
    let antipole = pole.negated();
    let seg = Segment::new(pole.clone())?;
    let seg_z = seg.to_zonotope();

    let v_slab_f = functional_mixed_volume(f, dim, &[(&slab, dim - 1)])?;
    let v_slab_f_expected =
        2f64.powi(dim as i32 - 1) / dim as f64 * (f.eval(&pole) + f.eval(&antipole));
    let v_slab_seg =
        functional_mixed_volume(&TestFunction::support_of(&seg_z), dim, &[(&slab, dim - 1)])?;
    let v_slab_seg_expected = 2f64.powi(dim as i32) / dim as f64;

    let constant = normalization_constant(&cube, &seg, f)?;
    let constant_expected = f.eval(&pole);
    let fbar = f.shifted(constant, &cube)?;
    let normalized_pole_values = (fbar.eval(&pole), fbar.eval(&antipole));
    let deficit = deficit(&cube, f)?;

    Ok(CubeCaseReport {
        dim,
        v_slab_f,
        v_slab_f_expected,
        v_slab_seg,
        v_slab_seg_expected,
        constant,
        constant_expected,
        normalized_pole_values,
        deficit,
    })
}

/// Deficit of the one-dimensional body `[-a, a]`.
///
/// In dimension one the bilinear slot is empty, so the deficit collapses to
/// `(f(1) + f(-1))^2 / (2a) - (f(1)^2 + f(-1)^2) / a`, which vanishes for
/// every even `f`.  The returned value is therefore zero up to rounding,
/// at the scale `f(1)^2 / a`.
pub fn dim1_case(a: f64, f: &TestFunction) -> Result<f64> {
    if !(a > 0.0) || !a.is_finite() {
        return Err(LlbmError::InvalidInput(format!(
            "the half-length must be positive and finite, got {a}"
        )));
    }
    let k = Zonotope::new(1, vec![Vector::new(vec![a])?])?;
    Ok(deficit(&k, f)?.deficit)
}
