//! Sharp bounds for `|λ a_n² − a_{2n−1}|`.
//!
//! Everything reduces to one two-branch rule. With
//! `C_n(α) = 2 A_{2n−1} / A_n²`:
//!
//! ```text
//! bound = λ A_n² − A_{2n−1}   if λ ≥ C_n(α)   (attained by f_α)
//!       = A_{2n−1}            if λ ≤ C_n(α)   (attained by a rotation mix)
//! ```
//!
//! [`sharp_bound`] applies the rule directly; [`case_bound`] evaluates the
//! family-specific closed forms and thresholds instead, so the two can be
//! checked against each other.

use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::falpha::{an_table, compute_an, Alpha};

/// Positive real weight of `a_n²` in the functional.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize)]
#[serde(transparent)]
pub struct Lambda(f64);

impl Lambda {
    pub fn new(value: f64) -> Result<Self> {
        if value.is_finite() && value > 0.0 {
            Ok(Self(value))
        } else {
            Err(Error::InvalidLambda(value))
        }
    }

    pub fn value(self) -> f64 {
        self.0
    }
}

impl TryFrom<f64> for Lambda {
    type Error = Error;

    fn try_from(value: f64) -> Result<Self> {
        Self::new(value)
    }
}

/// `|λ − C_n|` at or below this (relative to `max(1, C_n)`) is a boundary case.
pub const BOUNDARY_TOLERANCE: f64 = 1e-12;

/// Upper limit for the forward scan in [`n0_threshold`].
pub const N0_SCAN_CAP: usize = 1_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Regime {
    LargeLambda,
    SmallLambda,
    Boundary,
}

impl fmt::Display for Regime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Regime::LargeLambda => "LargeLambda",
            Regime::SmallLambda => "SmallLambda",
            Regime::Boundary => "Boundary",
        })
    }
}

/// Which measure attains the bound.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Extremal {
    /// Point mass at 0, i.e. `f_α` itself.
    SingleAtom,
    /// Equal mix of `2n−2` rotations of `f_α`.
    RotationMix,
}

impl fmt::Display for Extremal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Extremal::SingleAtom => "SingleAtom",
            Extremal::RotationMix => "RotationMix",
        })
    }
}

/// Parameter families with their own published case analysis.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Family {
    /// `α = 0`, the convex functions.
    Convex,
    /// `α = −1/2`.
    MinusHalf,
    /// `−1/2 < α < 0`.
    NegativeOrder,
    /// `0 < α < 1`, `α ≠ 1/2`.
    PositiveOrder,
    /// `α = 1/2`.
    Half,
}

impl Family {
    pub fn of(alpha: Alpha) -> Self {
        let a = alpha.value();
        if a == 0.0 {
            Family::Convex
        } else if a == -0.5 {
            Family::MinusHalf
        } else if a == 0.5 {
            Family::Half
        } else if a < 0.0 {
            Family::NegativeOrder
        } else {
            Family::PositiveOrder
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Family::Convex => "alpha=0",
            Family::MinusHalf => "alpha=-1/2",
            Family::NegativeOrder => "-1/2<alpha<0",
            Family::PositiveOrder => "0<alpha<1",
            Family::Half => "alpha=1/2",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundResult {
    pub alpha: f64,
    pub lambda: f64,
    pub n: usize,
    pub a_n: f64,
    pub a_2n1: f64,
    pub c_n: f64,
    pub value: f64,
    pub regime: Regime,
    pub family: Family,
    /// Family plus the case of its analysis that governs `(λ, n)`.
    pub theorem_tag: String,
    pub extremal: Extremal,
}

fn check_order(n: usize) -> Result<()> {
    if n < 3 {
        Err(Error::OrderTooSmall { got: n, min: 3 })
    } else {
        Ok(())
    }
}

/// `C_n(α) = 2 A_{2n−1} / A_n²`, defined for `n ≥ 3`.
pub fn compute_cn(alpha: Alpha, n: usize) -> Result<f64> {
    check_order(n)?;
    let an = compute_an(alpha, n);
    Ok(2.0 * compute_an(alpha, 2 * n - 1) / (an * an))
}

/// Closed form `C_3(α) = (3/5)(2α−4)(2α−5) / ((2α−2)(2α−3))`.
pub fn c3_closed(alpha: Alpha) -> f64 {
    let t = 2.0 * alpha.value();
    0.6 * (t - 4.0) * (t - 5.0) / ((t - 2.0) * (t - 3.0))
}

/// Walks `n = 3, 4, …` keeping `A_n` and `A_{2n−1}` up to date in O(1) per step.
///
/// The multiplications happen in the same order as in [`compute_an`], so
/// the values are bit-identical to the direct evaluation.
struct CnScan {
    two_a: f64,
    n: usize,
    a_n: f64,
    a_2n1: f64,
}

impl CnScan {
    fn new(alpha: Alpha) -> Self {
        Self {
            two_a: 2.0 * alpha.value(),
            n: 3,
            a_n: compute_an(alpha, 3),
            a_2n1: compute_an(alpha, 5),
        }
    }

    fn step(&self, k: usize) -> f64 {
        let k1 = (k + 1) as f64;
        (k1 - self.two_a) / k1
    }

    fn c_n(&self) -> f64 {
        2.0 * self.a_2n1 / (self.a_n * self.a_n)
    }

    fn advance(&mut self) {
        let n = self.n;
        self.a_n *= self.step(n);
        self.a_2n1 *= self.step(2 * n - 1);
        self.a_2n1 *= self.step(2 * n);
        self.n += 1;
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Trend {
    Decreasing,
    Increasing,
    Constant,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MonotonicityReport {
    pub alpha: f64,
    pub n_min: usize,
    pub n_max: usize,
    pub expected: Trend,
    /// Largest step against the expected trend (0 when none).
    pub max_violation: f64,
    /// First `n` where `C_{n+1} − C_n` had the wrong sign beyond tolerance.
    pub first_violation: Option<usize>,
    pub passed: bool,
}

/// Checks that `C_n(α)` decreases for `α < 0`, increases for `α > 0` and is
/// identically 2 for `α = 0`, over `3 ≤ n ≤ n_max`.
pub fn check_monotonicity(alpha: Alpha, n_max: usize) -> Result<MonotonicityReport> {
    if n_max < 4 {
        return Err(Error::OrderTooSmall { got: n_max, min: 4 });
    }
    let a = alpha.value();
    let expected = if a < 0.0 {
        Trend::Decreasing
    } else if a > 0.0 {
        Trend::Increasing
    } else {
        Trend::Constant
    };
    let tol = 1e-12;
    let table = an_table(alpha, 2 * n_max - 1);
    let cn = |n: usize| 2.0 * table[2 * n - 1] / (table[n] * table[n]);

    let mut max_violation: f64 = 0.0;
    let mut first_violation = None;
    for n in 3..n_max {
        let (cur, next) = (cn(n), cn(n + 1));
        let violation = match expected {
            Trend::Decreasing => (next - cur).max(0.0),
            Trend::Increasing => (cur - next).max(0.0),
            Trend::Constant => (cur - 2.0).abs().max((next - 2.0).abs()),
        };
        // a zero step is also wrong for a strict trend
        let strict_fail = expected != Trend::Constant && next == cur;
        if (violation > tol || strict_fail) && first_violation.is_none() {
            first_violation = Some(n);
        }
        max_violation = max_violation.max(violation);
    }
    Ok(MonotonicityReport {
        alpha: a,
        n_min: 3,
        n_max,
        expected,
        max_violation,
        first_violation,
        passed: first_violation.is_none(),
    })
}

/// First `n ≥ 3` where the branch flips, scanning no further than `limit`.
fn scan_n0(alpha: Alpha, lambda: Lambda, limit: usize) -> Option<usize> {
    let lam = lambda.value();
    let negative = alpha.value() < 0.0;
    let mut scan = CnScan::new(alpha);
    while scan.n <= limit {
        let c = scan.c_n();
        let hit = if negative { lam >= c } else { lam <= c };
        if hit {
            return Some(scan.n);
        }
        scan.advance();
    }
    None
}

/// Index where the governing branch changes.
///
/// For `α < 0` this is the smallest `n ≥ 3` with `λ ≥ C_n(α)`; for `α > 0`
/// the smallest `n ≥ 3` with `λ ≤ C_n(α)`. `C_n(0) ≡ 2` has no such index
/// and yields `Ok(None)`. An index beyond [`N0_SCAN_CAP`] is reported as a
/// domain error.
pub fn n0_threshold(alpha: Alpha, lambda: Lambda) -> Result<Option<usize>> {
    if alpha.value() == 0.0 {
        return Ok(None);
    }
    scan_n0(alpha, lambda, N0_SCAN_CAP)
        .map(Some)
        .ok_or_else(|| {
            Error::Domain(format!(
                "threshold index for alpha={}, lambda={} exceeds {N0_SCAN_CAP}",
                alpha.value(),
                lambda.value()
            ))
        })
}

/// `(4 − λ + 2√(4 − 2λ)) / λ`: for `α = −1/2` and `λ < 3/2`, orders above it
/// are governed by the large-λ branch.
pub fn corollary_threshold(lambda: Lambda) -> Result<f64> {
    let l = lambda.value();
    if l > 2.0 {
        return Err(Error::Domain(format!(
            "threshold needs lambda <= 2, got {l}"
        )));
    }
    Ok((4.0 - l + 2.0 * (4.0 - 2.0 * l).sqrt()) / l)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct HalfThreshold {
    pub value: f64,
    /// False for `2 < λ ≤ 18/5`, where every `n ≥ 3` is already small-λ.
    pub applies: bool,
}

impl HalfThreshold {
    pub fn note(&self) -> &'static str {
        if self.applies {
            "threshold"
        } else {
            "below-C3, unused by theorem"
        }
    }
}

/// `(λ + √(λ² − 2λ)) / 2`, the larger root of `2n² − 2λn + λ` that separates
/// the two branches at `α = 1/2`.
pub fn alpha_half_threshold(lambda: Lambda) -> Result<HalfThreshold> {
    let l = lambda.value();
    if l <= 2.0 {
        return Err(Error::Domain(format!(
            "threshold needs lambda > 2, got {l}"
        )));
    }
    Ok(HalfThreshold {
        value: (l + (l * l - 2.0 * l).sqrt()) / 2.0,
        applies: l > 3.6,
    })
}

/// The sharp bound from the unified two-branch rule, tagged with the case
/// of the family analysis that covers `(α, λ, n)`.
pub fn sharp_bound(alpha: Alpha, lambda: Lambda, n: usize) -> Result<BoundResult> {
    check_order(n)?;
    let lam = lambda.value();
    let a_n = compute_an(alpha, n);
    let a_2n1 = compute_an(alpha, 2 * n - 1);
    let c_n = 2.0 * a_2n1 / (a_n * a_n);
    let large = lam * a_n * a_n - a_2n1;

    let regime = if (lam - c_n).abs() <= BOUNDARY_TOLERANCE * c_n.max(1.0) {
        Regime::Boundary
    } else if lam * a_n * a_n - 2.0 * a_2n1 >= 0.0 {
        Regime::LargeLambda
    } else {
        Regime::SmallLambda
    };
    let (value, extremal) = match regime {
        Regime::LargeLambda | Regime::Boundary => (large, Extremal::SingleAtom),
        Regime::SmallLambda => (a_2n1, Extremal::RotationMix),
    };
    let family = Family::of(alpha);
    let case = classify(alpha, lambda, n)?;
    Ok(BoundResult {
        alpha: alpha.value(),
        lambda: lam,
        n,
        a_n,
        a_2n1,
        c_n,
        value,
        regime,
        family,
        theorem_tag: format!("{family}: {}", case.label),
        extremal,
    })
}

struct Case {
    label: &'static str,
    large: bool,
}

/// Family case analysis, using the published thresholds rather than `C_n`.
fn classify(alpha: Alpha, lambda: Lambda, n: usize) -> Result<Case> {
    let lam = lambda.value();
    let case = |label, large| Case { label, large };
    Ok(match Family::of(alpha) {
        Family::Convex => {
            if lam >= 2.0 {
                case("lambda>=2", true)
            } else {
                case("0<lambda<2", false)
            }
        }
        Family::MinusHalf => {
            if lam >= 1.5 {
                case("lambda>=3/2", true)
            } else if n as f64 > corollary_threshold(lambda)? {
                case("lambda<3/2, n above threshold", true)
            } else {
                case("lambda<3/2, n at or below threshold", false)
            }
        }
        Family::Half => {
            if lam <= 3.6 {
                case("lambda<=18/5", false)
            } else if n as f64 >= alpha_half_threshold(lambda)?.value {
                case("lambda>18/5, n at or above threshold", false)
            } else {
                case("lambda>18/5, n below threshold", true)
            }
        }
        Family::NegativeOrder => {
            if lam >= c3_closed(alpha) {
                case("lambda>=C_3", true)
            } else if scan_n0(alpha, lambda, n).is_some() {
                case("lambda<C_3, n>=n0", true)
            } else {
                case("lambda<C_3, n<n0", false)
            }
        }
        Family::PositiveOrder => {
            if lam <= c3_closed(alpha) {
                case("lambda<=C_3", false)
            } else if scan_n0(alpha, lambda, n).is_some() {
                case("lambda>C_3, n>=n0", false)
            } else {
                case("lambda>C_3, n<n0", true)
            }
        }
    })
}

/// The bound from the family-specific closed forms, independent of the
/// unified rule used by [`sharp_bound`].
pub fn case_bound(alpha: Alpha, lambda: Lambda, n: usize) -> Result<f64> {
    check_order(n)?;
    let lam = lambda.value();
    let nf = n as f64;
    let large = classify(alpha, lambda, n)?.large;
    Ok(match Family::of(alpha) {
        Family::Convex => {
            if large {
                lam - 1.0
            } else {
                1.0
            }
        }
        Family::MinusHalf => {
            if large {
                (nf + 1.0) * (nf + 1.0) / 4.0 * lam - nf
            } else {
                nf
            }
        }
        Family::Half => {
            if large {
                lam / (nf * nf) - 1.0 / (2.0 * nf - 1.0)
            } else {
                1.0 / (2.0 * nf - 1.0)
            }
        }
        Family::NegativeOrder | Family::PositiveOrder => {
            let a_n = compute_an(alpha, n);
            let a_2n1 = compute_an(alpha, 2 * n - 1);
            if large {
                lam * a_n * a_n - a_2n1
            } else {
                a_2n1
            }
        }
    })
}

/// Fekete–Szegő bound `1 + 2 exp(−2λ/(1−λ))` for the univalent class,
/// `0 ≤ λ < 1`.
///
/// The exponent is `−2λ/(1−λ)`, not `−2λ(1−λ)`: only the former tends to 1
/// as `λ → 1⁻`.
pub fn fekete_szego_s(lambda: f64) -> Result<f64> {
    if !(0.0..1.0).contains(&lambda) {
        return Err(Error::Domain(format!(
            "Fekete-Szego bound needs 0 <= lambda < 1, got {lambda}"
        )));
    }
    Ok(1.0 + 2.0 * (-2.0 * lambda / (1.0 - lambda)).exp())
}
