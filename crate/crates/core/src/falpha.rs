//! The class of convex functions of order α.
//!
//! Members are built from probability measures on the circle: a measure `ν`
//! gives `f′(z) = ∫ (1 − e^{iθ} z)^{2α−2} dν(θ)` and therefore
//! `a_n = A_n(α) ∫ e^{i(n−1)θ} dν(θ)`. Only finitely supported measures are
//! represented here.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::powerseries::{reduce_angle, TruncatedSeries};

/// Order of convexity, `−1/2 ≤ α < 1`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize)]
#[serde(transparent)]
pub struct Alpha(f64);

impl Alpha {
    pub const MIN: f64 = -0.5;
    pub const MAX_EXCLUSIVE: f64 = 1.0;

    pub fn new(value: f64) -> Result<Self> {
        if value.is_finite() && (Self::MIN..Self::MAX_EXCLUSIVE).contains(&value) {
            Ok(Self(value))
        } else {
            Err(Error::InvalidAlpha(value))
        }
    }

    pub fn value(self) -> f64 {
        self.0
    }
}

impl TryFrom<f64> for Alpha {
    type Error = Error;

    fn try_from(value: f64) -> Result<Self> {
        Self::new(value)
    }
}

/// `A_n(α) = Γ(n+1−2α) / (n! Γ(2−2α))`, the coefficients of the extremal
/// function `f_α`.
///
/// Evaluated by the recurrence `A_1 = 1`, `A_{k+1} = A_k (k+1−2α)/(k+1)`,
/// which avoids overflow of the gamma functions.
///
/// # Panics
///
/// Panics if `n == 0`.
pub fn compute_an(alpha: Alpha, n: usize) -> f64 {
    assert!(n >= 1, "A_n is defined for n >= 1");
    let two_a = 2.0 * alpha.value();
    (1..n).fold(1.0, |acc, k| {
        let k1 = (k + 1) as f64;
        acc * ((k1 - two_a) / k1)
    })
}

/// `A_0..=A_{n_max}` with the unused slot 0 set to zero.
pub(crate) fn an_table(alpha: Alpha, n_max: usize) -> Vec<f64> {
    let two_a = 2.0 * alpha.value();
    let mut table = vec![0.0; n_max + 1];
    if n_max >= 1 {
        table[1] = 1.0;
    }
    for k in 1..n_max {
        let k1 = (k + 1) as f64;
        table[k + 1] = table[k] * ((k1 - two_a) / k1);
    }
    table
}

/// Normalized Taylor coefficients `a_1 = 1, a_2, …, a_{n_max}`.
#[derive(Debug, Clone, PartialEq)]
pub struct CoeffSequence {
    a: Vec<Complex64>,
}

impl CoeffSequence {
    /// `a[0]` is `a_1` and must equal 1 exactly.
    pub fn new(a: Vec<Complex64>) -> Result<Self> {
        match a.first() {
            Some(first) if *first == Complex64::new(1.0, 0.0) => {}
            Some(_) => return Err(Error::InvalidSeries("a_1 must equal 1".into())),
            None => return Err(Error::InvalidSeries("empty coefficient sequence".into())),
        }
        if let Some(k) = a.iter().position(|c| !c.is_finite()) {
            return Err(Error::InvalidSeries(format!("a_{} is not finite", k + 1)));
        }
        Ok(Self { a })
    }

    pub fn from_real(a: &[f64]) -> Result<Self> {
        Self::new(a.iter().map(|&x| Complex64::new(x, 0.0)).collect())
    }

    pub(crate) fn from_trusted(a: Vec<Complex64>) -> Self {
        debug_assert_eq!(a[0], Complex64::new(1.0, 0.0));
        Self { a }
    }

    /// Koebe function `z/(1−z)²`, `a_n = n`.
    pub fn koebe(n_max: usize) -> Self {
        Self::from_trusted(
            (1..=n_max.max(1))
                .map(|n| Complex64::new(n as f64, 0.0))
                .collect(),
        )
    }

    pub fn n_max(&self) -> usize {
        self.a.len()
    }

    /// `a_1..=a_{n_max}`.
    pub fn coeffs(&self) -> &[Complex64] {
        &self.a
    }

    /// `a_n`, 1-based.
    pub fn get(&self, n: usize) -> Option<Complex64> {
        n.checked_sub(1).and_then(|i| self.a.get(i).copied())
    }

    /// `f(z) = z + a_2 z² + …` as a truncated series of order `n_max`.
    pub fn to_series(&self) -> TruncatedSeries {
        let mut c = Vec::with_capacity(self.a.len() + 1);
        c.push(Complex64::new(0.0, 0.0));
        c.extend_from_slice(&self.a);
        TruncatedSeries::new(c).expect("finite coefficients within the order cap")
    }
}

/// Coefficients of `f_α(z) = (1 − (1−z)^{2α−1}) / (2α−1)`, i.e. `a_n = A_n(α)`.
///
/// At `α = 1/2` the same recurrence yields `a_n = 1/n`, the coefficients of
/// the limiting function `−log(1−z)`.
pub fn extremal_falpha_coeffs(alpha: Alpha, n_max: usize) -> Result<CoeffSequence> {
    if n_max < 2 {
        return Err(Error::OrderTooSmall { got: n_max, min: 2 });
    }
    let table = an_table(alpha, n_max);
    Ok(CoeffSequence::from_trusted(
        table[1..].iter().map(|&x| Complex64::new(x, 0.0)).collect(),
    ))
}

/// One point mass of a discrete measure.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Atom {
    pub theta: f64,
    pub w: f64,
}

/// Finitely supported probability measure on `[0, 2π)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(transparent)]
pub struct DiscreteMeasure {
    atoms: Vec<Atom>,
}

/// Weight sums closer to 1 than this are renormalized silently.
pub const WEIGHT_DRIFT_TOLERANCE: f64 = 1e-9;

impl DiscreteMeasure {
    pub fn new(atoms: Vec<Atom>) -> Result<Self> {
        if atoms.is_empty() {
            return Err(Error::InvalidMeasure(
                "at least one atom is required".into(),
            ));
        }
        for (k, atom) in atoms.iter().enumerate() {
            if !atom.theta.is_finite() {
                return Err(Error::InvalidMeasure(format!(
                    "atom {k}: angle is not finite"
                )));
            }
            if !atom.w.is_finite() || atom.w < 0.0 {
                return Err(Error::InvalidMeasure(format!(
                    "atom {k}: weight {} is not a finite non-negative number",
                    atom.w
                )));
            }
        }
        let total: f64 = atoms.iter().map(|a| a.w).sum();
        if (total - 1.0).abs() > WEIGHT_DRIFT_TOLERANCE {
            return Err(Error::InvalidMeasure(format!(
                "weights sum to {total}, expected 1"
            )));
        }
        let atoms = atoms
            .into_iter()
            .map(|a| Atom {
                theta: reduce_angle(a.theta),
                w: a.w / total,
            })
            .collect();
        Ok(Self { atoms })
    }

    pub fn from_pairs(pairs: &[(f64, f64)]) -> Result<Self> {
        Self::new(pairs.iter().map(|&(theta, w)| Atom { theta, w }).collect())
    }

    pub fn dirac(theta: f64) -> Self {
        Self::new(vec![Atom { theta, w: 1.0 }]).expect("a unit point mass is valid")
    }

    /// Equal weights at the given angles.
    pub fn uniform(thetas: &[f64]) -> Result<Self> {
        let w = 1.0 / thetas.len() as f64;
        Self::new(thetas.iter().map(|&theta| Atom { theta, w }).collect())
    }

    /// Parse the JSON literal `[{"theta": .., "w": ..}, ..]`.
    pub fn from_json(text: &str) -> Result<Self> {
        let atoms: Vec<Atom> =
            serde_json::from_str(text).map_err(|e| Error::InvalidMeasure(e.to_string()))?;
        Self::new(atoms)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.atoms).expect("atoms serialize")
    }

    pub fn atoms(&self) -> &[Atom] {
        &self.atoms
    }

    pub fn len(&self) -> usize {
        self.atoms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    pub fn total_weight(&self) -> f64 {
        self.atoms.iter().map(|a| a.w).sum()
    }

    /// `∫ e^{ikθ} dν(θ)`.
    pub fn moment(&self, k: usize) -> Complex64 {
        self.atoms
            .iter()
            .map(|a| Complex64::from_polar(a.w, k as f64 * a.theta))
            .sum()
    }
}

/// `a_n = A_n(α) Σ_k w_k e^{i(n−1)θ_k}` for `n = 1..=n_max`.
pub fn coeffs_from_measure(
    alpha: Alpha,
    mu: &DiscreteMeasure,
    n_max: usize,
) -> Result<CoeffSequence> {
    if n_max < 2 {
        return Err(Error::OrderTooSmall { got: n_max, min: 2 });
    }
    let table = an_table(alpha, n_max);
    let mut a = Vec::with_capacity(n_max);
    a.push(Complex64::new(1.0, 0.0));
    for (n, an) in table.iter().enumerate().skip(2) {
        a.push(mu.moment(n - 1) * an);
    }
    Ok(CoeffSequence::from_trusted(a))
}

/// `f′` as the weighted sum of the kernels `(1 − e^{iθ_k} z)^{2α−2}`.
pub fn fprime_series_from_measure(
    alpha: Alpha,
    mu: &DiscreteMeasure,
    order: usize,
) -> Result<TruncatedSeries> {
    let mut acc = TruncatedSeries::zero(order)?;
    for atom in mu.atoms() {
        let kernel = TruncatedSeries::binom_series(alpha, atom.theta, order)?;
        acc.add_scaled(&kernel, Complex64::new(atom.w, 0.0))?;
    }
    Ok(acc)
}

/// Angles `(2k+1)π/(2n−2)`, `k = 0..2n−3`, of the rotation mix.
pub fn rotation_mix_angles(n: usize) -> Vec<f64> {
    let m = 2 * n - 2;
    (0..m).map(|k| (2 * k + 1) as f64 * PI / m as f64).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use statrs::function::gamma::ln_gamma;

    fn alpha(a: f64) -> Alpha {
        Alpha::new(a).unwrap()
    }

    fn re(x: f64) -> Complex64 {
        Complex64::new(x, 0.0)
    }

    #[test]
    fn alpha_range() {
        assert!(Alpha::new(-0.5).is_ok());
        assert!(Alpha::new(0.999).is_ok());
        assert_eq!(Alpha::new(1.0), Err(Error::InvalidAlpha(1.0)));
        assert!(Alpha::new(-0.500001).is_err());
        assert!(Alpha::new(f64::NAN).is_err());
    }

    #[test]
    fn an_examples() {
        assert!((compute_an(alpha(-0.5), 7) - 4.0).abs() < 1e-15);
        for n in 1..40 {
            assert_eq!(compute_an(alpha(0.0), n), 1.0);
        }
        // Γ(5) / (5! Γ(1)) = 24/120
        let oracle = (ln_gamma(5.0) - ln_gamma(6.0) - ln_gamma(1.0)).exp();
        assert!((oracle - 0.2).abs() < 1e-14);
        assert!((compute_an(alpha(0.5), 5) - 0.2).abs() < 1e-15);
        assert!((compute_an(alpha(0.5), 5) - oracle).abs() < 1e-13);
    }

    #[test]
    fn an_table_agrees_with_compute_an() {
        let a = alpha(0.37);
        let t = an_table(a, 30);
        for (n, &x) in t.iter().enumerate().skip(1) {
            assert_eq!(x, compute_an(a, n));
        }
    }

    #[test]
    fn extremal_coefficients() {
        let f = extremal_falpha_coeffs(alpha(-0.5), 4).unwrap();
        assert_eq!(f.coeffs(), &[re(1.0), re(1.5), re(2.0), re(2.5)]);
        let f = extremal_falpha_coeffs(alpha(0.0), 3).unwrap();
        assert_eq!(f.coeffs(), &[re(1.0); 3]);
        let f = extremal_falpha_coeffs(alpha(0.5), 4).unwrap();
        for (k, a) in f.coeffs().iter().enumerate() {
            assert!((a - re(1.0 / (k + 1) as f64)).norm() < 1e-15);
        }
        assert!(extremal_falpha_coeffs(alpha(0.0), 1).is_err());
    }

    #[test]
    fn extremal_is_integrated_kernel() {
        for a in [-0.5, -0.2, 0.0, 0.3, 0.5, 0.8] {
            let al = alpha(a);
            let f = extremal_falpha_coeffs(al, 12).unwrap();
            let g = TruncatedSeries::binom_series(al, 0.0, 11)
                .unwrap()
                .antiderivative();
            assert!(f.to_series().max_abs_diff(&g) < 1e-13);
        }
    }

    #[test]
    fn measure_coefficients() {
        let dirac = DiscreteMeasure::dirac(0.0);
        for a in [-0.5, 0.1, 0.5, 0.9] {
            let al = alpha(a);
            let f = coeffs_from_measure(al, &dirac, 10).unwrap();
            assert_eq!(f, extremal_falpha_coeffs(al, 10).unwrap());
        }

        let two = DiscreteMeasure::from_pairs(&[(0.0, 0.5), (PI, 0.5)]).unwrap();
        let f = coeffs_from_measure(alpha(-0.5), &two, 3).unwrap();
        assert!(f.get(2).unwrap().norm() < 1e-15);
        assert!((f.get(3).unwrap() - re(2.0)).norm() < 1e-14);
    }

    #[test]
    fn fprime_examples() {
        let f = fprime_series_from_measure(alpha(0.0), &DiscreteMeasure::dirac(0.0), 3).unwrap();
        assert!(
            f.max_abs_diff(&TruncatedSeries::from_real(&[1.0, 2.0, 3.0, 4.0]).unwrap()) < 1e-15
        );

        let two = DiscreteMeasure::from_pairs(&[(0.0, 0.5), (PI, 0.5)]).unwrap();
        let f = fprime_series_from_measure(alpha(0.0), &two, 2).unwrap();
        assert!(f.max_abs_diff(&TruncatedSeries::from_real(&[1.0, 0.0, 3.0]).unwrap()) < 1e-14);

        let f = fprime_series_from_measure(alpha(0.5), &DiscreteMeasure::dirac(0.0), 2).unwrap();
        assert!(f.max_abs_diff(&TruncatedSeries::from_real(&[1.0, 1.0, 1.0]).unwrap()) < 1e-15);
    }

    #[test]
    fn measure_validation() {
        assert!(DiscreteMeasure::new(vec![]).is_err());
        assert!(DiscreteMeasure::from_pairs(&[(0.0, -0.1), (1.0, 1.1)]).is_err());
        assert!(DiscreteMeasure::from_pairs(&[(0.0, 0.5), (1.0, 0.6)]).is_err());
        assert!(DiscreteMeasure::from_pairs(&[(f64::INFINITY, 1.0)]).is_err());

        let m = DiscreteMeasure::from_pairs(&[(-PI, 0.5), (7.0 * PI, 0.5 + 5e-10)]).unwrap();
        assert!((m.total_weight() - 1.0).abs() < 1e-15);
        assert!(m.atoms().iter().all(|a| (0.0..2.0 * PI).contains(&a.theta)));
        assert!((m.atoms()[0].theta - PI).abs() < 1e-15);
    }

    #[test]
    fn measure_json_literal() {
        let m =
            DiscreteMeasure::from_json(r#"[{"theta": 0.0, "w": 0.25}, {"theta": 3.0, "w": 0.75}]"#)
                .unwrap();
        assert_eq!(m.len(), 2);
        let back = DiscreteMeasure::from_json(&m.to_json()).unwrap();
        assert_eq!(back, m);
        assert!(DiscreteMeasure::from_json(r#"[{"theta": 0.0}]"#).is_err());
    }

    #[test]
    fn rotation_mix_angles_for_n3() {
        let t = rotation_mix_angles(3);
        let expected = [PI / 4.0, 3.0 * PI / 4.0, 5.0 * PI / 4.0, 7.0 * PI / 4.0];
        for (a, b) in t.iter().zip(expected) {
            assert!((a - b).abs() < 1e-15);
        }
    }

    fn measure() -> impl Strategy<Value = DiscreteMeasure> {
        prop::collection::vec((0.0..(2.0 * PI), 0.01..1.0f64), 1..=8).prop_map(|raw| {
            let total: f64 = raw.iter().map(|p| p.1).sum();
            let pairs: Vec<(f64, f64)> = raw.iter().map(|&(t, w)| (t, w / total)).collect();
            DiscreteMeasure::from_pairs(&pairs).unwrap()
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(500))]

        #[test]
        fn measure_coefficients_obey_an_bound(a in -0.5..0.999f64, mu in measure()) {
            let al = alpha(a);
            let f = coeffs_from_measure(al, &mu, 25).unwrap();
            for n in 2..=25 {
                prop_assert!(f.get(n).unwrap().norm() <= compute_an(al, n) * (1.0 + 1e-12));
            }
        }

        #[test]
        fn fprime_integrates_to_measure_coefficients(a in -0.5..0.999f64, mu in measure()) {
            let al = alpha(a);
            let f = fprime_series_from_measure(al, &mu, 24).unwrap().antiderivative();
            let direct = coeffs_from_measure(al, &mu, 25).unwrap();
            for n in 1..=25 {
                prop_assert!((f.coeff(n) - direct.get(n).unwrap()).norm() <= 1e-12);
            }
        }

        #[test]
        fn recurrence_matches_gamma_ratio(a in -0.5..0.999f64, n in 1usize..=50) {
            let al = alpha(a);
            let lg = ln_gamma(n as f64 + 1.0 - 2.0 * a) - ln_gamma(n as f64 + 1.0) - ln_gamma(2.0 - 2.0 * a);
            let oracle = lg.exp();
            prop_assert!((compute_an(al, n) - oracle).abs() <= 1e-10 * oracle);
        }

        #[test]
        fn small_drift_is_renormalized(ws in prop::collection::vec(0.01..1.0f64, 1..8), eps in -1e-9..1e-9f64) {
            let total: f64 = ws.iter().sum();
            let mut pairs: Vec<(f64, f64)> = ws.iter().enumerate().map(|(k, w)| (k as f64, w / total)).collect();
            pairs[0].1 += eps * pairs[0].1.min(1.0);
            let m = DiscreteMeasure::from_pairs(&pairs).unwrap();
            prop_assert!((m.total_weight() - 1.0).abs() <= 1e-12);
        }
    }
}
