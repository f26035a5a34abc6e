//! Two-atom search against a brute-force grid over the same family.

use std::f64::consts::PI;

use zalcman::{compute_an, maximize_phi, sharp_bound, Alpha, Complex64, Lambda, SearchConfig};

/// `|Φ|` for `w δ_0 + (1−w) δ_t`; rotation invariance pins the first atom.
fn two_atom(lambda: f64, a3: f64, a5: f64, t: f64, w: f64) -> f64 {
    let m2 = Complex64::new(w, 0.0) + Complex64::from_polar(1.0 - w, 2.0 * t);
    let m4 = Complex64::new(w, 0.0) + Complex64::from_polar(1.0 - w, 4.0 * t);
    (m2 * m2 * (lambda * a3 * a3) - m4 * a5).norm()
}

fn grid_max(f: impl Fn(f64, f64) -> f64) -> f64 {
    let (mut t0, mut t1, mut w0, mut w1) = (0.0, 2.0 * PI, 0.0, 1.0);
    let mut best = (f64::NEG_INFINITY, 0.0, 0.0);
    for _ in 0..6 {
        let steps = 400;
        for i in 0..=steps {
            let t = t0 + (t1 - t0) * i as f64 / steps as f64;
            for j in 0..=steps {
                let w = w0 + (w1 - w0) * j as f64 / steps as f64;
                let v = f(t, w);
                if v > best.0 {
                    best = (v, t, w);
                }
            }
        }
        let (dt, dw) = ((t1 - t0) / 20.0, (w1 - w0) / 20.0);
        (t0, t1) = (best.1 - dt, best.1 + dt);
        (w0, w1) = ((best.2 - dw).max(0.0), (best.2 + dw).min(1.0));
    }
    best.0
}

#[test]
fn two_atom_search_matches_grid() {
    let (a, l, n) = (0.25, 1.0, 3);
    let alpha = Alpha::new(a).unwrap();
    let lambda = Lambda::new(l).unwrap();
    let (a3, a5) = (compute_an(alpha, 3), compute_an(alpha, 5));
    let oracle = grid_max(|t, w| two_atom(l, a3, a5, t, w));

    let cfg = SearchConfig {
        atoms: Some(2),
        ..Default::default()
    };
    let r = maximize_phi(alpha, lambda, n, &cfg).unwrap();
    assert!(
        (r.best_modulus - oracle).abs() <= 1e-5,
        "{} vs {oracle}",
        r.best_modulus
    );
    assert!((r.unseeded_modulus.unwrap() - oracle).abs() <= 1e-5);

    // two atoms already reach the small-λ bound A_5
    let b = sharp_bound(alpha, lambda, n).unwrap().value;
    assert!((oracle - b).abs() <= 1e-5);
    assert!((b - a5).abs() < 1e-15);
}

#[test]
fn random_starts_alone_attain_the_default_sweep() {
    let cfg = SearchConfig::default();
    for p in zalcman::search::default_grid() {
        let alpha = Alpha::new(p.alpha).unwrap();
        let lambda = Lambda::new(p.lambda).unwrap();
        let r = maximize_phi(alpha, lambda, p.n, &cfg).unwrap();
        let unseeded = r.unseeded_modulus.unwrap();
        assert!(
            r.bound - unseeded <= 1e-5,
            "{p:?}: {unseeded} vs {}",
            r.bound
        );
        assert_eq!(r.violations, 0, "{p:?}");
    }
}
