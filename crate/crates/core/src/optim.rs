//! Nelder–Mead simplex minimizer with restart on stagnation.

#[derive(Debug, Clone)]
pub(crate) struct NelderMead {
    pub max_iters: usize,
    /// Spread of function values across the simplex that counts as converged.
    pub tol: f64,
}

#[derive(Debug, Clone)]
pub(crate) struct Minimum {
    pub x: Vec<f64>,
    pub fx: f64,
    pub iters: usize,
    pub converged: bool,
}

const REFLECT: f64 = 1.0;
const EXPAND: f64 = 2.0;
const CONTRACT: f64 = 0.5;
const SHRINK: f64 = 0.5;
const MAX_RESTARTS: usize = 20;

impl NelderMead {
    /// Minimizes `f` from `x0`, restarting a fresh simplex of size `step` at
    /// the incumbent each time the simplex collapses, until a restart no
    /// longer improves on it or the iteration budget is spent.
    pub fn minimize<F>(&self, mut f: F, x0: &[f64], step: f64) -> Minimum
    where
        F: FnMut(&[f64]) -> f64,
    {
        let mut best_x = x0.to_vec();
        let mut best_f = f(&best_x);
        let mut iters = 0;
        let mut converged = false;
        for _ in 0..=MAX_RESTARTS {
            if iters >= self.max_iters {
                break;
            }
            let (x, fx, used, collapsed) =
                self.run(&mut f, &best_x, best_f, step, self.max_iters - iters);
            iters += used;
            let improved = best_f - fx > self.tol;
            if fx < best_f {
                best_x = x;
                best_f = fx;
            }
            if !collapsed {
                break;
            }
            if !improved {
                converged = true;
                break;
            }
        }
        Minimum {
            x: best_x,
            fx: best_f,
            iters,
            converged,
        }
    }

    fn run<F>(
        &self,
        f: &mut F,
        x0: &[f64],
        f0: f64,
        step: f64,
        budget: usize,
    ) -> (Vec<f64>, f64, usize, bool)
    where
        F: FnMut(&[f64]) -> f64,
    {
        let dim = x0.len();
        let mut simplex: Vec<(Vec<f64>, f64)> = Vec::with_capacity(dim + 1);
        simplex.push((x0.to_vec(), f0));
        for i in 0..dim {
            let mut x = x0.to_vec();
            x[i] += step;
            let fx = f(&x);
            simplex.push((x, fx));
        }

        let mut iters = 0;
        let mut centroid = vec![0.0; dim];
        let mut trial = vec![0.0; dim];
        while iters < budget {
            simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
            let spread = simplex[dim].1 - simplex[0].1;
            if spread <= self.tol {
                let (x, fx) = simplex.swap_remove(0);
                return (x, fx, iters, true);
            }
            iters += 1;

            centroid.iter_mut().for_each(|c| *c = 0.0);
            for (x, _) in &simplex[..dim] {
                for (c, xi) in centroid.iter_mut().zip(x) {
                    *c += xi / dim as f64;
                }
            }
            let along = |coef: f64, worst: &[f64], out: &mut Vec<f64>| {
                for ((o, c), w) in out.iter_mut().zip(&centroid).zip(worst) {
                    *o = c + coef * (c - w);
                }
            };

            along(REFLECT, &simplex[dim].0, &mut trial);
            let f_reflect = f(&trial);
            if f_reflect < simplex[0].1 {
                let reflected = trial.clone();
                along(EXPAND, &simplex[dim].0, &mut trial);
                let f_expand = f(&trial);
                simplex[dim] = if f_expand < f_reflect {
                    (trial.clone(), f_expand)
                } else {
                    (reflected, f_reflect)
                };
                continue;
            }
            if f_reflect < simplex[dim - 1].1 {
                simplex[dim] = (trial.clone(), f_reflect);
                continue;
            }
            // contraction, outside if the reflection beat the worst point
            let outside = f_reflect < simplex[dim].1;
            let coef = if outside { CONTRACT } else { -CONTRACT };
            along(coef, &simplex[dim].0, &mut trial);
            let f_contract = f(&trial);
            let limit = if outside { f_reflect } else { simplex[dim].1 };
            if f_contract <= limit {
                simplex[dim] = (trial.clone(), f_contract);
                continue;
            }
            let best = simplex[0].0.clone();
            for (x, fx) in simplex.iter_mut().skip(1) {
                for (xi, bi) in x.iter_mut().zip(&best) {
                    *xi = bi + SHRINK * (*xi - bi);
                }
                *fx = f(x);
            }
        }
        simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
        let (x, fx) = simplex.swap_remove(0);
        (x, fx, iters, false)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimizes_rosenbrock() {
        let nm = NelderMead {
            max_iters: 20_000,
            tol: 1e-14,
        };
        let rosen = |x: &[f64]| (1.0 - x[0]).powi(2) + 100.0 * (x[1] - x[0] * x[0]).powi(2);
        let m = nm.minimize(rosen, &[-1.2, 1.0], 0.5);
        assert!(m.converged);
        assert!(
            (m.x[0] - 1.0).abs() < 1e-4 && (m.x[1] - 1.0).abs() < 1e-4,
            "{:?}",
            m.x
        );
    }

    #[test]
    fn respects_budget() {
        let nm = NelderMead {
            max_iters: 5,
            tol: 0.0,
        };
        let m = nm.minimize(
            |x: &[f64]| x.iter().map(|v| v * v).sum(),
            &[3.0, 4.0, 5.0],
            1.0,
        );
        assert!(m.iters <= 5);
        assert!(!m.converged);
        assert!(m.fx <= 50.0);
    }

    #[test]
    fn never_returns_worse_than_start() {
        let nm = NelderMead {
            max_iters: 100,
            tol: 1e-12,
        };
        let m = nm.minimize(|x: &[f64]| (x[0] - 0.1).abs(), &[0.1], 1.0);
        assert_eq!(m.fx, 0.0);
        assert_eq!(m.x, vec![0.1]);
    }
}
