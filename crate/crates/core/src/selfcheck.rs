//! Small-scale runs of every invariant suite, used by `zalcman selfcheck`.

use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use statrs::function::gamma::ln_gamma;

use crate::bounds::{case_bound, check_monotonicity, sharp_bound, Lambda};
use crate::error::Result;
use crate::falpha::{coeffs_from_measure, compute_an, Alpha, Atom, DiscreteMeasure};
use crate::functional::{phi, phi_rotation_check, root_transform_identity_gap};
use crate::search::{default_grid, extremal_measure};

#[derive(Debug, Clone, Serialize)]
pub struct SuiteResult {
    pub name: &'static str,
    pub passed: bool,
    pub checked: usize,
    /// Worst observed deviation.
    pub worst: f64,
    pub tolerance: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub offending: Option<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct SelfCheckReport {
    pub suites: Vec<SuiteResult>,
    pub passed: bool,
}

impl SelfCheckReport {
    pub fn exit_code(&self) -> i32 {
        if self.passed {
            0
        } else {
            1
        }
    }
}

pub type AnFn = fn(Alpha, usize) -> f64;

/// Suite runner; the `A_n` provider is swappable so fault injection can be
/// tested.
#[derive(Debug, Clone)]
pub struct SelfCheck {
    pub an: AnFn,
    pub seed: u64,
}

impl Default for SelfCheck {
    fn default() -> Self {
        Self {
            an: compute_an,
            seed: 2024,
        }
    }
}

/// Accumulates the worst deviation and the first tuple beyond tolerance.
struct Tally {
    name: &'static str,
    tolerance: f64,
    checked: usize,
    worst: f64,
    offending: Option<String>,
}

impl Tally {
    fn new(name: &'static str, tolerance: f64) -> Self {
        Self {
            name,
            tolerance,
            checked: 0,
            worst: 0.0,
            offending: None,
        }
    }

    // written negated so that NaN counts as a failure
    #[allow(clippy::neg_cmp_op_on_partial_ord)]
    fn record(&mut self, deviation: f64, tuple: impl FnOnce() -> String) {
        self.checked += 1;
        if deviation > self.worst || deviation.is_nan() {
            self.worst = deviation;
        }
        if !(deviation <= self.tolerance) && self.offending.is_none() {
            self.offending = Some(tuple());
        }
    }

    fn finish(self) -> SuiteResult {
        SuiteResult {
            name: self.name,
            passed: self.offending.is_none(),
            checked: self.checked,
            worst: self.worst,
            tolerance: self.tolerance,
            offending: self.offending,
        }
    }
}

pub(crate) fn random_measure(rng: &mut impl Rng, max_atoms: usize) -> DiscreteMeasure {
    let k = rng.random_range(1..=max_atoms);
    let raw: Vec<(f64, f64)> = (0..k)
        .map(|_| (rng.random_range(0.0..2.0 * PI), rng.random_range(0.01..1.0)))
        .collect();
    let total: f64 = raw.iter().map(|p| p.1).sum();
    DiscreteMeasure::new(
        raw.into_iter()
            .map(|(theta, w)| Atom {
                theta,
                w: w / total,
            })
            .collect(),
    )
    .expect("normalized weights")
}

impl SelfCheck {
    pub fn run(&self) -> SelfCheckReport {
        type Suite = fn(&SelfCheck) -> Result<SuiteResult>;
        let suites: [(&'static str, Suite); 6] = [
            ("recurrence-vs-gamma", Self::recurrence_vs_gamma),
            ("monotonicity", Self::monotonicity),
            ("unified-vs-cases", Self::unified_vs_cases),
            ("rotation-invariance", Self::rotation_invariance),
            ("root-transform-identity", Self::root_transform_identity),
            ("extremal-attainment", Self::extremal_attainment),
        ];
        let suites: Vec<SuiteResult> = suites
            .par_iter()
            .map(|(name, suite)| {
                suite(self).unwrap_or_else(|e| SuiteResult {
                    name,
                    passed: false,
                    checked: 0,
                    worst: f64::NAN,
                    tolerance: 0.0,
                    offending: Some(e.to_string()),
                })
            })
            .collect();
        SelfCheckReport {
            passed: suites.iter().all(|s| s.passed),
            suites,
        }
    }

    fn rng(&self, stream: u64) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(stream);
        rng
    }

    fn recurrence_vs_gamma(&self) -> Result<SuiteResult> {
        let mut t = Tally::new("recurrence-vs-gamma", 1e-10);
        for i in 0..=59 {
            let a = -0.5 + 1.49 * i as f64 / 59.0;
            let alpha = Alpha::new(a)?;
            for n in 1..=50 {
                let nf = n as f64;
                let oracle =
                    (ln_gamma(nf + 1.0 - 2.0 * a) - ln_gamma(nf + 1.0) - ln_gamma(2.0 - 2.0 * a))
                        .exp();
                let got = (self.an)(alpha, n);
                t.record((got - oracle).abs() / oracle, || {
                    format!("alpha={a}, n={n}: A_n={got}, gamma ratio={oracle}")
                });
            }
        }
        Ok(t.finish())
    }

    fn monotonicity(&self) -> Result<SuiteResult> {
        let mut t = Tally::new("monotonicity", 1e-12);
        let mut rng = self.rng(1);
        let mut alphas: Vec<f64> = (0..200).map(|_| rng.random_range(-0.5..1.0)).collect();
        alphas.push(0.0);
        for a in alphas {
            let r = check_monotonicity(Alpha::new(a)?, 100)?;
            let failed = !r.passed;
            t.record(
                if failed {
                    f64::INFINITY
                } else {
                    r.max_violation
                },
                || format!("alpha={a}, first violation at n={:?}", r.first_violation),
            );
        }
        Ok(t.finish())
    }

    fn unified_vs_cases(&self) -> Result<SuiteResult> {
        let mut t = Tally::new("unified-vs-cases", 1e-12);
        for a in [-0.5, -0.3, -0.1, 0.0, 0.1, 0.25, 0.5, 0.75] {
            let alpha = Alpha::new(a)?;
            for step in 1..=50 {
                let l = step as f64 / 10.0;
                let lambda = Lambda::new(l)?;
                for n in 3..=30 {
                    let unified = sharp_bound(alpha, lambda, n)?.value;
                    let cases = case_bound(alpha, lambda, n)?;
                    t.record((unified - cases).abs() / unified.abs().max(1e-300), || {
                        format!("alpha={a}, lambda={l}, n={n}: unified={unified}, cases={cases}")
                    });
                }
            }
        }
        Ok(t.finish())
    }

    fn rotation_invariance(&self) -> Result<SuiteResult> {
        let mut t = Tally::new("rotation-invariance", 1e-12);
        let mut rng = self.rng(2);
        for _ in 0..100 {
            let a = rng.random_range(-0.5..1.0);
            let l = rng.random_range(0.05..5.0);
            let n = rng.random_range(2..=12usize);
            let theta = rng.random_range(0.0..2.0 * PI);
            let mu = random_measure(&mut rng, 8);
            let f = coeffs_from_measure(Alpha::new(a)?, &mu, 2 * n - 1)?;
            let lambda = Lambda::new(l)?;
            let scale = 1.0 + phi(lambda, n, &f)?.modulus;
            let dev = phi_rotation_check(lambda, n, &f, theta)? / scale;
            t.record(dev, || {
                format!("alpha={a}, lambda={l}, n={n}, theta={theta}")
            });
        }
        Ok(t.finish())
    }

    fn root_transform_identity(&self) -> Result<SuiteResult> {
        let mut t = Tally::new("root-transform-identity", 1e-10);
        let mut rng = self.rng(3);
        for i in 0..50 {
            let a = rng.random_range(-0.5..1.0);
            let l = rng.random_range(0.05..5.0);
            let n = 2 + i % 3;
            let mu = random_measure(&mut rng, 8);
            let f = coeffs_from_measure(Alpha::new(a)?, &mu, 3)?;
            let gap = root_transform_identity_gap(Lambda::new(l)?, n, &f)?;
            t.record(gap, || format!("alpha={a}, lambda={l}, n={n}"));
        }
        Ok(t.finish())
    }

    fn extremal_attainment(&self) -> Result<SuiteResult> {
        let mut t = Tally::new("extremal-attainment", 1e-10);
        for p in default_grid() {
            let alpha = Alpha::new(p.alpha)?;
            let lambda = Lambda::new(p.lambda)?;
            let bound = sharp_bound(alpha, lambda, p.n)?.value;
            let mu = extremal_measure(alpha, lambda, p.n)?;
            let f = coeffs_from_measure(alpha, &mu, 2 * p.n - 1)?;
            let modulus = phi(lambda, p.n, &f)?.modulus;
            t.record((bound - modulus).abs(), || {
                format!(
                    "alpha={}, lambda={}, n={}: bound={bound}, extremal gives {modulus}",
                    p.alpha, p.lambda, p.n
                )
            });
        }
        Ok(t.finish())
    }
}
