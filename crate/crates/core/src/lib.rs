//! Sharp bounds for the generalized Zalcman functional `λ a_n² − a_{2n−1}`
//! over the class of convex functions of order α, `−1/2 ≤ α < 1`.
//!
//! The crate is organised bottom-up:
//!
//! * [`powerseries`] truncated complex power series arithmetic,
//! * [`falpha`] the class itself: parameters, extremal coefficients and
//!   construction of members from discrete Herglotz measures,
//! * [`bounds`] the sharp-bound oracle and regime classifier,
//! * [`functional`] evaluation of the functional and its structural identities,
//! * [`search`] derivative-free maximisation over discrete measures,
//! * [`selfcheck`] and [`report`] used by the `zalcman` binary.

pub mod bounds;
pub mod error;
pub mod falpha;
pub mod functional;
mod optim;
pub mod powerseries;
pub mod report;
pub mod search;
pub mod selfcheck;

pub use bounds::{
    alpha_half_threshold, c3_closed, case_bound, check_monotonicity, compute_cn,
    corollary_threshold, fekete_szego_s, n0_threshold, sharp_bound, BoundResult, Extremal, Family,
    Lambda, MonotonicityReport, Regime,
};
pub use error::{Error, Result};
pub use falpha::{
    coeffs_from_measure, compute_an, extremal_falpha_coeffs, fprime_series_from_measure, Alpha,
    Atom, CoeffSequence, DiscreteMeasure,
};
pub use functional::{phi, phi_rotation_check, root_transform_identity_gap, PhiValue};
pub use powerseries::{nth_root_transform, rotate, TruncatedSeries};
pub use search::{
    extremal_measure, falsification_sweep, maximize_phi, GridPoint, SearchConfig, SearchResult,
    SweepReport,
};

pub use num_complex::Complex64;
