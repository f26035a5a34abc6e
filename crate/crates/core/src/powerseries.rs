//! Truncated power series with complex coefficients.
//!
//! A [`TruncatedSeries`] of order `N` stores `c_0..=c_N`; every binary
//! operation between two series of the same order returns a series of that
//! order. Coefficients past `N` are simply not tracked.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::falpha::{Alpha, CoeffSequence};

/// Largest truncation order accepted by the constructors.
pub const MAX_ORDER: usize = 512;

#[derive(Debug, Clone, PartialEq)]
pub struct TruncatedSeries {
    coeffs: Vec<Complex64>,
}

impl TruncatedSeries {
    pub fn new(coeffs: Vec<Complex64>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::InvalidSeries("a series needs at least c_0".into()));
        }
        if coeffs.len() - 1 > MAX_ORDER {
            return Err(Error::OrderTooLarge {
                got: coeffs.len() - 1,
                cap: MAX_ORDER,
            });
        }
        if let Some(k) = coeffs.iter().position(|c| !c.is_finite()) {
            return Err(Error::InvalidSeries(format!(
                "coefficient c_{k} is not finite"
            )));
        }
        Ok(Self { coeffs })
    }

    pub fn from_real(coeffs: &[f64]) -> Result<Self> {
        Self::new(coeffs.iter().map(|&x| Complex64::new(x, 0.0)).collect())
    }

    pub fn zero(order: usize) -> Result<Self> {
        Self::new(vec![Complex64::new(0.0, 0.0); order + 1])
    }

    pub fn one(order: usize) -> Result<Self> {
        let mut s = Self::zero(order)?;
        s.coeffs[0] = Complex64::new(1.0, 0.0);
        Ok(s)
    }

    /// Truncation order `N`.
    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<Complex64> {
        self.coeffs
    }

    pub fn coeff(&self, k: usize) -> Complex64 {
        self.coeffs.get(k).copied().unwrap_or_default()
    }

    /// Expansion of `(1 − e^{iθ} z)^{2α−2}` through `z^N`.
    ///
    /// The coefficient of `z^{n−1}` is `n A_n(α) e^{i(n−1)θ}`; it is built by
    /// the ratio recurrence `c_k = c_{k−1} e^{iθ} (k + 1 − 2α) / k`.
    pub fn binom_series(alpha: Alpha, theta: f64, order: usize) -> Result<Self> {
        if order > MAX_ORDER {
            return Err(Error::OrderTooLarge {
                got: order,
                cap: MAX_ORDER,
            });
        }
        let rot = Complex64::from_polar(1.0, theta);
        let two_a = 2.0 * alpha.value();
        let mut coeffs = Vec::with_capacity(order + 1);
        let mut c = Complex64::new(1.0, 0.0);
        coeffs.push(c);
        for k in 1..=order {
            let kf = k as f64;
            c = c * rot * ((kf + 1.0 - two_a) / kf);
            coeffs.push(c);
        }
        Ok(Self { coeffs })
    }

    fn check_same_order(&self, other: &Self) -> Result<()> {
        if self.order() != other.order() {
            return Err(Error::OrderMismatch {
                left: self.order(),
                right: other.order(),
            });
        }
        Ok(())
    }

    /// Cauchy product truncated at the common order.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_same_order(other)?;
        let n = self.order();
        let mut out = vec![Complex64::new(0.0, 0.0); n + 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == Complex64::new(0.0, 0.0) {
                continue;
            }
            for (j, &b) in other.coeffs[..=n - i].iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Ok(Self { coeffs: out })
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_same_order(other)?;
        Ok(Self {
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| a + b)
                .collect(),
        })
    }

    pub fn scale(&self, factor: Complex64) -> Self {
        Self {
            coeffs: self.coeffs.iter().map(|c| c * factor).collect(),
        }
    }

    /// `self + factor * other`, the accumulation step of weighted sums.
    pub fn add_scaled(&mut self, other: &Self, factor: Complex64) -> Result<()> {
        self.check_same_order(other)?;
        for (a, b) in self.coeffs.iter_mut().zip(&other.coeffs) {
            *a += b * factor;
        }
        Ok(())
    }

    /// Term-wise integral from 0; the result has order `N + 1` and `c_0 = 0`.
    pub fn antiderivative(&self) -> Self {
        let mut coeffs = Vec::with_capacity(self.coeffs.len() + 1);
        coeffs.push(Complex64::new(0.0, 0.0));
        coeffs.extend(
            self.coeffs
                .iter()
                .enumerate()
                .map(|(k, c)| c / (k as f64 + 1.0)),
        );
        Self { coeffs }
    }

    /// Formal derivative; the result has order `N − 1` (order 0 stays 0).
    pub fn derivative(&self) -> Self {
        if self.order() == 0 {
            return Self {
                coeffs: vec![Complex64::new(0.0, 0.0)],
            };
        }
        Self {
            coeffs: self
                .coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c * k as f64)
                .collect(),
        }
    }

    /// Series logarithm of a series with constant term 1.
    pub fn ln(&self) -> Result<Self> {
        let one = Complex64::new(1.0, 0.0);
        if (self.coeffs[0] - one).norm() > 1e-14 {
            return Err(Error::InvalidSeries(
                "series logarithm needs constant term 1".into(),
            ));
        }
        // k l_k = k u_k − Σ_{j=1}^{k−1} j l_j u_{k−j}
        let u = &self.coeffs;
        let n = self.order();
        let mut l = vec![Complex64::new(0.0, 0.0); n + 1];
        for k in 1..=n {
            let mut acc = u[k] * k as f64;
            for j in 1..k {
                acc -= l[j] * u[k - j] * j as f64;
            }
            l[k] = acc / k as f64;
        }
        Ok(Self { coeffs: l })
    }

    /// Series exponential of a series with constant term 0.
    pub fn exp(&self) -> Result<Self> {
        if self.coeffs[0].norm() > 1e-14 {
            return Err(Error::InvalidSeries(
                "series exponential needs constant term 0".into(),
            ));
        }
        // k e_k = Σ_{j=1}^{k} j l_j e_{k−j}
        let l = &self.coeffs;
        let n = self.order();
        let mut e = vec![Complex64::new(0.0, 0.0); n + 1];
        e[0] = Complex64::new(1.0, 0.0);
        for k in 1..=n {
            let mut acc = Complex64::new(0.0, 0.0);
            for j in 1..=k {
                acc += l[j] * e[k - j] * j as f64;
            }
            e[k] = acc / k as f64;
        }
        Ok(Self { coeffs: e })
    }

    /// Principal branch of `self^p` for a series with constant term 1.
    pub fn powf(&self, p: f64) -> Result<Self> {
        self.ln()?.scale(Complex64::new(p, 0.0)).exp()
    }

    /// Max-norm distance over coefficients; series of different order are
    /// compared as if padded with zeros.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        let n = self.coeffs.len().max(other.coeffs.len());
        (0..n)
            .map(|k| (self.coeff(k) - other.coeff(k)).norm())
            .fold(0.0, f64::max)
    }
}

/// Rotation `e^{−iθ} f(e^{iθ} z)`: `a_n ↦ e^{i(n−1)θ} a_n`.
pub fn rotate(f: &CoeffSequence, theta: f64) -> CoeffSequence {
    let a = f
        .coeffs()
        .iter()
        .enumerate()
        .map(|(k, &c)| {
            if k == 0 {
                c
            } else {
                c * Complex64::from_polar(1.0, k as f64 * theta)
            }
        })
        .collect();
    CoeffSequence::from_trusted(a)
}

/// `n`-th root transform `g(z) = z (f(z^n)/z^n)^{1/n}` through `z^order`.
///
/// Coefficients of `f` past `f.n_max()` are taken as zero, so polynomial
/// inputs are exact. The result is normalized and only exponents
/// `≡ 1 (mod n)` are populated.
pub fn nth_root_transform(f: &CoeffSequence, n: usize, order: usize) -> Result<CoeffSequence> {
    if n == 0 {
        return Err(Error::OrderTooSmall { got: 0, min: 1 });
    }
    if order < 2 * n + 1 {
        return Err(Error::OrderTooSmall {
            got: order,
            min: 2 * n + 1,
        });
    }
    if order > MAX_ORDER {
        return Err(Error::OrderTooLarge {
            got: order,
            cap: MAX_ORDER,
        });
    }
    // u(w) = f(w)/w, needed through w^m with 1 + m n <= order
    let m = (order - 1) / n;
    let u: Vec<Complex64> = (0..=m).map(|k| f.get(k + 1).unwrap_or_default()).collect();
    let root = TruncatedSeries::new(u)?.powf(1.0 / n as f64)?;
    let mut g = vec![Complex64::new(0.0, 0.0); order];
    for (k, c) in root.coeffs().iter().enumerate() {
        g[k * n] = *c;
    }
    g[0] = Complex64::new(1.0, 0.0);
    CoeffSequence::new(g)
}

/// Reduce an angle to `[0, 2π)`.
pub fn reduce_angle(theta: f64) -> f64 {
    let r = theta.rem_euclid(2.0 * PI);
    if r >= 2.0 * PI {
        0.0
    } else {
        r
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::falpha::compute_an;
    use proptest::prelude::*;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    fn assert_series(s: &TruncatedSeries, expected: &[f64]) {
        let e = TruncatedSeries::from_real(expected).unwrap();
        assert_eq!(s.order(), e.order());
        assert!(
            s.max_abs_diff(&e) <= 1e-10,
            "{:?} vs {:?}",
            s.coeffs(),
            expected
        );
    }

    fn alpha(a: f64) -> Alpha {
        Alpha::new(a).unwrap()
    }

    // generalized binomial coefficient binom(p, k) from the product definition
    fn binom(p: f64, k: usize) -> f64 {
        let mut num = 1.0;
        let mut fact = 1.0;
        for j in 0..k {
            num *= p - j as f64;
            fact *= (j + 1) as f64;
        }
        num / fact
    }

    #[test]
    fn binom_series_examples() {
        assert_series(
            &TruncatedSeries::binom_series(alpha(0.0), 0.0, 4).unwrap(),
            &[1.0, 2.0, 3.0, 4.0, 5.0],
        );
        assert_series(
            &TruncatedSeries::binom_series(alpha(0.5), 0.0, 3).unwrap(),
            &[1.0, 1.0, 1.0, 1.0],
        );
        // (1 + z)^{-3}: coefficient k is binom(-3, k)
        let oracle: Vec<f64> = (0..4).map(|k| binom(-3.0, k)).collect();
        assert_eq!(oracle, vec![1.0, -3.0, 6.0, -10.0]);
        assert_series(
            &TruncatedSeries::binom_series(alpha(-0.5), PI, 3).unwrap(),
            &oracle,
        );
    }

    #[test]
    fn binom_series_rejects_huge_order() {
        assert!(matches!(
            TruncatedSeries::binom_series(alpha(0.0), 0.0, MAX_ORDER + 1),
            Err(Error::OrderTooLarge { .. })
        ));
    }

    #[test]
    fn mul_examples() {
        let a = TruncatedSeries::from_real(&[1.0, 1.0, 0.0]).unwrap();
        assert_series(&a.mul(&a).unwrap(), &[1.0, 2.0, 1.0]);

        let geo = TruncatedSeries::from_real(&[1.0; 6]).unwrap();
        let lin = TruncatedSeries::from_real(&[1.0, -1.0, 0.0, 0.0, 0.0, 0.0]).unwrap();
        assert_series(&geo.mul(&lin).unwrap(), &[1.0, 0.0, 0.0, 0.0, 0.0, 0.0]);

        let b = TruncatedSeries::from_real(&[0.0, 1.0, 1.0]).unwrap();
        assert_series(&b.mul(&b).unwrap(), &[0.0, 0.0, 1.0]);
    }

    #[test]
    fn mul_rejects_mismatched_orders() {
        let a = TruncatedSeries::one(2).unwrap();
        let b = TruncatedSeries::one(3).unwrap();
        assert_eq!(a.mul(&b), Err(Error::OrderMismatch { left: 2, right: 3 }));
    }

    #[test]
    fn antiderivative_examples() {
        let s = TruncatedSeries::from_real(&[1.0, 2.0, 3.0]).unwrap();
        assert_series(&s.antiderivative(), &[0.0, 1.0, 1.0, 1.0]);
        let s = TruncatedSeries::from_real(&[1.0, 0.0, 0.0]).unwrap();
        assert_series(&s.antiderivative(), &[0.0, 1.0, 0.0, 0.0]);
        // z/(1-z) = z + z^2 + ...
        let s = TruncatedSeries::binom_series(alpha(0.0), 0.0, 3).unwrap();
        assert_series(&s.antiderivative(), &[0.0, 1.0, 1.0, 1.0, 1.0]);
    }

    #[test]
    fn new_rejects_non_finite() {
        assert!(TruncatedSeries::new(vec![c(1.0), c(f64::NAN)]).is_err());
        assert!(TruncatedSeries::new(vec![]).is_err());
    }

    #[test]
    fn rotate_examples() {
        let koebe = CoeffSequence::koebe(5);
        assert_eq!(rotate(&koebe, 0.0), koebe);

        let ones = CoeffSequence::new(vec![c(1.0); 6]).unwrap();
        let r = rotate(&ones, PI);
        for (k, a) in r.coeffs().iter().enumerate() {
            let expected = if k % 2 == 0 { 1.0 } else { -1.0 };
            assert!((a - c(expected)).norm() < 1e-15);
        }
        assert_eq!(r.coeffs()[0], c(1.0));

        let r = rotate(&koebe, PI / 2.0);
        assert!((r.get(3).unwrap() - c(-3.0)).norm() < 1e-14);
    }

    #[test]
    fn root_transform_of_koebe() {
        // sqrt(k(z^2)) = z / (1 - z^2)
        let g = nth_root_transform(&CoeffSequence::koebe(5), 2, 5).unwrap();
        let expected = [1.0, 0.0, 1.0, 0.0, 1.0];
        for (a, e) in g.coeffs().iter().zip(expected) {
            assert!((a - c(e)).norm() < 1e-12);
        }
    }

    #[test]
    fn root_transform_of_identity() {
        let id = CoeffSequence::new(vec![c(1.0)]).unwrap();
        for n in 1..5 {
            let g = nth_root_transform(&id, n, 2 * n + 3).unwrap();
            assert_eq!(g.coeffs()[0], c(1.0));
            assert!(g.coeffs()[1..].iter().all(|a| a.norm() < 1e-15));
        }
    }

    #[test]
    fn root_transform_of_half_plane_map() {
        // f(z) = z/(1-z); sqrt(f(z^2)) = z (1 - z^2)^{-1/2}
        // oracle: square root by the coefficient recurrence h^2 = u
        let u = [1.0; 3];
        let mut h = [0.0; 3];
        h[0] = 1.0;
        for k in 1..3 {
            let cross: f64 = (1..k).map(|j| h[j] * h[k - j]).sum();
            h[k] = (u[k] - cross) / 2.0;
        }
        assert_eq!(h, [1.0, 0.5, 0.375]);

        let f = CoeffSequence::new(vec![c(1.0); 5]).unwrap();
        let g = nth_root_transform(&f, 2, 5).unwrap();
        assert!((g.get(3).unwrap() - c(h[1])).norm() < 1e-12);
        assert!((g.get(5).unwrap() - c(h[2])).norm() < 1e-12);
    }

    #[test]
    fn root_transform_needs_room() {
        assert!(nth_root_transform(&CoeffSequence::koebe(5), 2, 4).is_err());
    }

    #[test]
    fn ln_exp_round_trip() {
        let s =
            TruncatedSeries::new(vec![c(1.0), Complex64::new(0.3, -0.2), c(0.1), c(-0.4)]).unwrap();
        let back = s.ln().unwrap().exp().unwrap();
        assert!(back.max_abs_diff(&s) < 1e-14);
        assert!(s.scale(c(2.0)).ln().is_err());
    }

    #[test]
    fn reduce_angle_wraps() {
        assert_eq!(reduce_angle(2.0 * PI), 0.0);
        assert!((reduce_angle(-PI / 2.0) - 1.5 * PI).abs() < 1e-15);
        assert!(reduce_angle(-1e-18) < 2.0 * PI);
    }

    fn complex_unit() -> impl Strategy<Value = Complex64> {
        (0.0..1.0f64, 0.0..(2.0 * PI)).prop_map(|(r, t)| Complex64::from_polar(r, t))
    }

    fn series(order: usize) -> impl Strategy<Value = TruncatedSeries> {
        prop::collection::vec(complex_unit(), order + 1)
            .prop_map(|v| TruncatedSeries::new(v).unwrap())
    }

    proptest! {
        #[test]
        fn binom_matches_coefficient_formula(a in -0.5..0.999f64, theta in 0.0..(2.0 * PI), order in 1usize..=30) {
            let al = alpha(a);
            let s = TruncatedSeries::binom_series(al, theta, order).unwrap();
            for n in 2..=order + 1 {
                let expected = Complex64::from_polar(n as f64 * compute_an(al, n), (n - 1) as f64 * theta);
                let got = s.coeff(n - 1);
                prop_assert!((got - expected).norm() <= 1e-12 * expected.norm().max(1e-300));
            }
        }

        #[test]
        fn mul_commutes_and_associates((a, b, c3) in (1usize..12).prop_flat_map(|n| (series(n), series(n), series(n)))) {
            let ab = a.mul(&b).unwrap();
            prop_assert!(ab.max_abs_diff(&b.mul(&a).unwrap()) <= 1e-14);
            let left = ab.mul(&c3).unwrap();
            let right = a.mul(&b.mul(&c3).unwrap()).unwrap();
            prop_assert!(left.max_abs_diff(&right) <= 1e-14);
        }

        #[test]
        fn antiderivative_inverts_derivative(s in (1usize..20).prop_flat_map(series)) {
            let mut coeffs = s.into_coeffs();
            coeffs[0] = Complex64::new(0.0, 0.0);
            let s = TruncatedSeries::new(coeffs).unwrap();
            let back = s.derivative().antiderivative();
            prop_assert!(back.max_abs_diff(&s) <= 1e-15);
        }

        #[test]
        fn root_transform_is_sparse(coeffs in prop::collection::vec(complex_unit(), 1..12), n in 2usize..5) {
            let mut a = vec![Complex64::new(1.0, 0.0)];
            a.extend(coeffs);
            let f = CoeffSequence::new(a).unwrap();
            let order = 4 * n + 1;
            let g = nth_root_transform(&f, n, order).unwrap();
            for (k, c) in g.coeffs().iter().enumerate() {
                // index k holds the coefficient of z^{k+1}
                if k % n != 0 {
                    prop_assert!(c.norm() <= 1e-12);
                }
            }
        }
    }
}
