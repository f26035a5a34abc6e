//! Sharpness checks by direct search over discrete measures.
//!
//! A measure with `K` atoms is encoded as `2K` unconstrained reals: `K`
//! angles followed by `K` logits whose softmax gives the weights, so every
//! point of the search space is a valid probability measure. The search
//! maximizes `|Φ_λ(n, f)|` with a restarted Nelder–Mead simplex from several
//! starts; start 0 is always the known extremal measure.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::bounds::{sharp_bound, BoundResult, Extremal, Lambda, Regime};
use crate::error::{Error, Result};
use crate::falpha::{compute_an, rotation_mix_angles, Alpha, Atom, DiscreteMeasure};
use crate::optim::NelderMead;

/// Allowed excess of an evaluated `|Φ|` over the sharp bound (rounding only).
pub const SOUNDNESS_TOLERANCE: f64 = 1e-9;
/// Largest acceptable gap between the bound and the best value found.
pub const ATTAINMENT_TOLERANCE: f64 = 1e-5;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SearchConfig {
    /// Atoms per measure; `None` means `2n − 2`.
    pub atoms: Option<usize>,
    pub starts: usize,
    /// Simplex iterations per start.
    pub max_iters: usize,
    pub tol_converge: f64,
    pub seed: u64,
}

impl Default for SearchConfig {
    fn default() -> Self {
        Self {
            atoms: None,
            starts: 32,
            max_iters: 2000,
            tol_converge: 1e-10,
            seed: 0,
        }
    }
}

impl SearchConfig {
    pub fn validate(&self) -> Result<()> {
        if self.starts == 0 {
            return Err(Error::InvalidConfig("starts must be positive".into()));
        }
        if self.max_iters == 0 {
            return Err(Error::InvalidConfig("max_iters must be positive".into()));
        }
        if self.atoms == Some(0) {
            return Err(Error::InvalidConfig("atoms must be positive".into()));
        }
        if !(self.tol_converge.is_finite() && self.tol_converge > 0.0) {
            return Err(Error::InvalidConfig("tol_converge must be positive".into()));
        }
        Ok(())
    }

    pub fn atom_count(&self, n: usize) -> usize {
        self.atoms.unwrap_or(2 * n - 2)
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SearchResult {
    pub alpha: f64,
    pub lambda: f64,
    pub n: usize,
    pub best_modulus: f64,
    pub best_measure: DiscreteMeasure,
    pub bound: f64,
    pub regime: Regime,
    pub extremal: Extremal,
    /// `bound − best_modulus`, signed.
    pub gap: f64,
    /// `|Φ|` of the seeded extremal start before any search step.
    pub seeded_modulus: f64,
    /// Best `|Φ|` over the random starts alone; `None` with a single start.
    pub unseeded_modulus: Option<f64>,
    pub starts_used: usize,
    pub iterations_total: usize,
    pub evaluations: usize,
    pub converged: bool,
    /// Largest `|Φ|` over every evaluated measure.
    pub max_evaluated: f64,
    /// Evaluations with `|Φ| > bound + SOUNDNESS_TOLERANCE`.
    pub violations: usize,
}

impl SearchResult {
    pub fn is_sound(&self) -> bool {
        self.violations == 0 && self.best_modulus <= self.bound + SOUNDNESS_TOLERANCE
    }

    pub fn attains(&self) -> bool {
        self.gap.abs() <= ATTAINMENT_TOLERANCE
    }
}

/// The measure attaining the sharp bound: a point mass at 0 when
/// `λ ≥ C_n(α)`, otherwise equal weights at `(2k+1)π/(2n−2)`,
/// `k = 0..2n−3`, which gives `a_n = 0` and `a_{2n−1} = −A_{2n−1}`.
pub fn extremal_measure(alpha: Alpha, lambda: Lambda, n: usize) -> Result<DiscreteMeasure> {
    let b = sharp_bound(alpha, lambda, n)?;
    Ok(match b.extremal {
        Extremal::SingleAtom => DiscreteMeasure::dirac(0.0),
        Extremal::RotationMix => DiscreteMeasure::uniform(&rotation_mix_angles(n))?,
    })
}

/// The extremal measure spread over exactly `k` slots, so it can seed a
/// search with a fixed atom count.
fn seed_params(alpha: Alpha, lambda: Lambda, n: usize, k: usize) -> Result<Vec<f64>> {
    let mut mu = extremal_measure(alpha, lambda, n)?;
    if mu.len() > k {
        // equal mass on two adjacent rotation angles keeps a_n = 0 and
        // a_{2n−1} = −A_{2n−1}; with a single slot no mix is possible
        let angles = rotation_mix_angles(n);
        mu = if k >= 2 {
            DiscreteMeasure::uniform(&angles[..2])?
        } else {
            DiscreteMeasure::dirac(angles[0])
        };
    }
    let m = mu.len();
    let mut params = vec![0.0; 2 * k];
    for slot in 0..k {
        let atom = mu.atoms()[slot % m];
        let copies = k / m + usize::from(slot % m < k % m);
        params[slot] = atom.theta;
        params[k + slot] = (atom.w / copies as f64).ln();
    }
    Ok(params)
}

fn softmax(logits: &[f64]) -> Vec<f64> {
    let max = logits.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let exps: Vec<f64> = logits.iter().map(|l| (l - max).exp()).collect();
    let total: f64 = exps.iter().sum();
    exps.into_iter().map(|e| e / total).collect()
}

/// Decode `(angles, logits)` into a measure.
pub fn measure_from_params(params: &[f64]) -> Result<DiscreteMeasure> {
    let k = params.len() / 2;
    let weights = softmax(&params[k..]);
    DiscreteMeasure::new(
        params[..k]
            .iter()
            .zip(weights)
            .map(|(&theta, w)| Atom { theta, w })
            .collect(),
    )
}

/// Read-only problem description shared by all starts.
struct Problem {
    lambda: f64,
    n: usize,
    a_n: f64,
    a_2n1: f64,
    bound: f64,
}

impl Problem {
    fn modulus(&self, params: &[f64]) -> f64 {
        let k = params.len() / 2;
        let (thetas, logits) = params.split_at(k);
        let max = logits.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let p = (self.n - 1) as f64;
        let mut total = 0.0;
        let mut m1 = Complex64::new(0.0, 0.0);
        let mut m2 = Complex64::new(0.0, 0.0);
        for (&theta, &l) in thetas.iter().zip(logits) {
            let w = (l - max).exp();
            total += w;
            let (s, c) = (p * theta).sin_cos();
            let e1 = Complex64::new(c, s);
            m1 += e1 * w;
            m2 += e1 * e1 * w;
        }
        let a_n = m1 * (self.a_n / total);
        let a_odd = m2 * (self.a_2n1 / total);
        (a_n * a_n * self.lambda - a_odd).norm()
    }
}

struct StartOutcome {
    modulus: f64,
    params: Vec<f64>,
    iters: usize,
    evals: usize,
    converged: bool,
    max_evaluated: f64,
    violations: usize,
}

fn run_start(problem: &Problem, start: Vec<f64>, cfg: &SearchConfig) -> StartOutcome {
    let nm = NelderMead {
        max_iters: cfg.max_iters,
        tol: cfg.tol_converge,
    };
    let mut evals = 0;
    let mut max_evaluated: f64 = 0.0;
    let mut violations = 0;
    let limit = problem.bound + SOUNDNESS_TOLERANCE;
    let result = nm.minimize(
        |x| {
            let m = problem.modulus(x);
            evals += 1;
            max_evaluated = max_evaluated.max(m);
            if m > limit {
                violations += 1;
            }
            -m
        },
        &start,
        0.5,
    );
    StartOutcome {
        modulus: -result.fx,
        params: result.x,
        iters: result.iters,
        evals,
        converged: result.converged,
        max_evaluated,
        violations,
    }
}

fn random_start(k: usize, seed: u64, index: usize) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index as u64);
    let mut params = Vec::with_capacity(2 * k);
    params.extend((0..k).map(|_| rng.random_range(0.0..2.0 * PI)));
    params.extend((0..k).map(|_| rng.random_range(-1.0..1.0)));
    params
}

/// Multi-start maximization of `|Φ_λ(n, f)|` over measures with
/// `cfg.atom_count(n)` atoms. Every evaluation is checked against the sharp
/// bound; excesses are counted in [`SearchResult::violations`].
pub fn maximize_phi(
    alpha: Alpha,
    lambda: Lambda,
    n: usize,
    cfg: &SearchConfig,
) -> Result<SearchResult> {
    cfg.validate()?;
    let bound = sharp_bound(alpha, lambda, n)?;
    let k = cfg.atom_count(n);
    let problem = Problem {
        lambda: lambda.value(),
        n,
        a_n: compute_an(alpha, n),
        a_2n1: compute_an(alpha, 2 * n - 1),
        bound: bound.value,
    };
    let seeded = seed_params(alpha, lambda, n, k)?;
    let seeded_modulus = problem.modulus(&seeded);

    let outcomes: Vec<StartOutcome> = (0..cfg.starts)
        .into_par_iter()
        .map(|i| {
            let start = if i == 0 {
                seeded.clone()
            } else {
                random_start(k, cfg.seed, i)
            };
            run_start(&problem, start, cfg)
        })
        .collect();

    // largest modulus wins, ties go to the lower start index
    let best = outcomes
        .iter()
        .enumerate()
        .fold(None::<(usize, &StartOutcome)>, |acc, (i, o)| match acc {
            Some((_, b)) if b.modulus >= o.modulus => acc,
            _ => Some((i, o)),
        })
        .map(|(_, o)| o)
        .expect("at least one start");

    Ok(SearchResult {
        alpha: alpha.value(),
        lambda: lambda.value(),
        n,
        best_modulus: best.modulus,
        best_measure: measure_from_params(&best.params)?,
        bound: bound.value,
        regime: bound.regime,
        extremal: bound.extremal,
        gap: bound.value - best.modulus,
        seeded_modulus,
        unseeded_modulus: outcomes[1..].iter().map(|o| o.modulus).reduce(f64::max),
        starts_used: outcomes.len(),
        iterations_total: outcomes.iter().map(|o| o.iters).sum(),
        evaluations: outcomes.iter().map(|o| o.evals).sum::<usize>() + 1,
        converged: best.converged,
        max_evaluated: outcomes
            .iter()
            .map(|o| o.max_evaluated)
            .fold(seeded_modulus, f64::max),
        violations: outcomes.iter().map(|o| o.violations).sum::<usize>()
            + usize::from(seeded_modulus > bound.value + SOUNDNESS_TOLERANCE),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GridPoint {
    pub alpha: f64,
    pub lambda: f64,
    pub n: usize,
}

/// α ∈ {−1/2, −1/4, 0, 1/4, 1/2}, λ ∈ {1/2, 1, 3/2, 2, 4}, n ∈ {3, 4, 5, 6}.
pub fn default_grid() -> Vec<GridPoint> {
    let mut grid = Vec::with_capacity(100);
    for alpha in [-0.5, -0.25, 0.0, 0.25, 0.5] {
        for lambda in [0.5, 1.0, 1.5, 2.0, 4.0] {
            for n in 3..=6 {
                grid.push(GridPoint { alpha, lambda, n });
            }
        }
    }
    grid
}

#[derive(Debug, Clone, Serialize)]
pub struct SweepRow {
    pub point: GridPoint,
    pub bound: BoundResult,
    pub result: SearchResult,
}

#[derive(Debug, Clone, Serialize)]
pub struct SweepReport {
    pub rows: Vec<SweepRow>,
    /// Grid points where some evaluated measure exceeded the bound.
    pub violations: Vec<GridPoint>,
    /// Largest `|gap|` per regime.
    pub worst_gap: BTreeMap<String, f64>,
    pub passed: bool,
}

/// Runs [`maximize_phi`] on every grid point, in grid order.
pub fn falsification_sweep(grid: &[GridPoint], cfg: &SearchConfig) -> Result<SweepReport> {
    cfg.validate()?;
    let rows = grid
        .par_iter()
        .map(|&point| {
            let alpha = Alpha::new(point.alpha)?;
            let lambda = Lambda::new(point.lambda)?;
            let bound = sharp_bound(alpha, lambda, point.n)?;
            let result = maximize_phi(alpha, lambda, point.n, cfg)?;
            Ok(SweepRow {
                point,
                bound,
                result,
            })
        })
        .collect::<Result<Vec<_>>>()?;

    let violations: Vec<GridPoint> = rows
        .iter()
        .filter(|r| !r.result.is_sound())
        .map(|r| r.point)
        .collect();
    let mut worst_gap = BTreeMap::new();
    for r in &rows {
        let entry = worst_gap
            .entry(r.bound.regime.to_string())
            .or_insert(0.0f64);
        *entry = entry.max(r.result.gap.abs());
    }
    Ok(SweepReport {
        passed: violations.is_empty(),
        rows,
        violations,
        worst_gap,
    })
}
