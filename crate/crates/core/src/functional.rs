//! The generalized Zalcman functional `Φ_λ(n, f) = λ a_n² − a_{2n−1}`.

use num_complex::Complex64;
use serde::Serialize;

use crate::bounds::Lambda;
use crate::error::{Error, Result};
use crate::falpha::CoeffSequence;
use crate::powerseries::{nth_root_transform, rotate};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PhiValue {
    pub value: Complex64,
    pub modulus: f64,
    pub n: usize,
    pub lambda: f64,
}

/// `λ a_n² − a_{2n−1}` for any normalized coefficient sequence with at
/// least `2n − 1` terms. Membership in the class is not checked.
pub fn phi(lambda: Lambda, n: usize, f: &CoeffSequence) -> Result<PhiValue> {
    if n < 2 {
        return Err(Error::OrderTooSmall { got: n, min: 2 });
    }
    let need = 2 * n - 1;
    let (Some(a_n), Some(a_odd)) = (f.get(n), f.get(need)) else {
        return Err(Error::InsufficientCoefficients {
            need,
            have: f.n_max(),
        });
    };
    let value = a_n * a_n * lambda.value() - a_odd;
    Ok(PhiValue {
        value,
        modulus: value.norm(),
        n,
        lambda: lambda.value(),
    })
}

/// `|Φ(rotate(f, θ)) − e^{2(n−1)iθ} Φ(f)|`, zero up to rounding.
pub fn phi_rotation_check(lambda: Lambda, n: usize, f: &CoeffSequence, theta: f64) -> Result<f64> {
    let base = phi(lambda, n, f)?.value;
    let rotated = phi(lambda, n, &rotate(f, theta))?.value;
    let phase = Complex64::from_polar(1.0, 2.0 * (n - 1) as f64 * theta);
    Ok((rotated - phase * base).norm())
}

/// Parameter `μ` for which the Fekete–Szegő functional of the `n`-th root
/// transform reproduces `λ a_2² − a_3`: `μ = λn − (n−1)/2`.
pub fn root_transform_mu(lambda: Lambda, n: usize) -> f64 {
    lambda.value() * n as f64 - (n as f64 - 1.0) / 2.0
}

/// `|(λ a_2² − a_3) − n(μ c_{n+1}² − c_{2n+1})|` where `c_k` are the
/// coefficients of `g(z) = (f(z^n))^{1/n}`.
pub fn root_transform_identity_gap(lambda: Lambda, n: usize, f: &CoeffSequence) -> Result<f64> {
    if n < 1 {
        return Err(Error::OrderTooSmall { got: n, min: 1 });
    }
    if f.n_max() < 3 {
        return Err(Error::InsufficientCoefficients {
            need: 3,
            have: f.n_max(),
        });
    }
    let lhs = phi(lambda, 2, f)?.value;
    let g = nth_root_transform(f, n, 2 * n + 1)?;
    let c1 = g.get(n + 1).unwrap_or_default();
    let c2 = g.get(2 * n + 1).unwrap_or_default();
    let mu = root_transform_mu(lambda, n);
    let rhs = (c1 * c1 * mu - c2) * n as f64;
    Ok((lhs - rhs).norm())
}
