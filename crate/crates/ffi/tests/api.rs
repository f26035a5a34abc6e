use std::ffi::{CStr, CString};
use std::ptr;

use zalcman_ffi::*;

fn last_error() -> String {
    let p = zalcman_last_error();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_str().unwrap().to_owned()
}

#[test]
fn coefficient_and_regime_values() {
    let mut x = 0.0;
    assert_eq!(unsafe { zalcman_an(-0.5, 6, &mut x) }, ZalcmanStatus::Ok);
    assert_eq!(x, 3.5);
    assert!(zalcman_last_error().is_null());
    assert_eq!(unsafe { zalcman_cn(0.0, 9, &mut x) }, ZalcmanStatus::Ok);
    assert_eq!(x, 2.0);
    assert_eq!(unsafe { zalcman_cn(0.5, 3, &mut x) }, ZalcmanStatus::Ok);
    assert!((x - 3.6).abs() < 1e-14);
}

#[test]
fn sharp_bound_struct() {
    let mut b = unsafe { std::mem::zeroed::<ZalcmanBound>() };
    assert_eq!(
        unsafe { zalcman_sharp_bound(-0.5, 1.0, 6, &mut b) },
        ZalcmanStatus::Ok
    );
    assert!((b.value - 6.25).abs() < 1e-12);
    assert_eq!(b.regime, ZalcmanRegime::LargeLambda);
    assert_eq!(b.extremal, ZalcmanExtremal::SingleAtom);
    assert_eq!(
        unsafe { zalcman_sharp_bound(-0.5, 1.0, 5, &mut b) },
        ZalcmanStatus::Ok
    );
    assert_eq!((b.value, b.regime), (5.0, ZalcmanRegime::SmallLambda));
}

#[test]
fn error_codes_and_messages() {
    let mut x = 0.0;
    assert_eq!(
        unsafe { zalcman_an(1.0, 3, &mut x) },
        ZalcmanStatus::InvalidAlpha
    );
    assert!(last_error().contains("alpha"));
    assert_eq!(
        unsafe { zalcman_an(0.0, 0, &mut x) },
        ZalcmanStatus::InvalidOrder
    );
    assert_eq!(
        unsafe { zalcman_cn(0.0, 2, &mut x) },
        ZalcmanStatus::InvalidOrder
    );
    assert_eq!(
        unsafe { zalcman_an(0.0, 3, ptr::null_mut()) },
        ZalcmanStatus::NullPointer
    );
    let mut b = unsafe { std::mem::zeroed::<ZalcmanBound>() };
    assert_eq!(
        unsafe { zalcman_sharp_bound(0.0, 0.0, 3, &mut b) },
        ZalcmanStatus::InvalidLambda
    );
    // a successful call clears the message
    assert_eq!(unsafe { zalcman_an(0.0, 3, &mut x) }, ZalcmanStatus::Ok);
    assert!(zalcman_last_error().is_null());
}

#[test]
fn measure_handles() {
    let q = std::f64::consts::FRAC_PI_4;
    let thetas = [q, 3.0 * q];
    let weights = [0.5, 0.5];
    let mut m = ptr::null_mut();
    let st = unsafe { zalcman_measure_new(thetas.as_ptr(), weights.as_ptr(), 2, &mut m) };
    assert_eq!(st, ZalcmanStatus::Ok);
    assert_eq!(unsafe { zalcman_measure_len(m) }, 2);
    let (mut t, mut w) = (0.0, 0.0);
    assert_eq!(
        unsafe { zalcman_measure_atom(m, 1, &mut t, &mut w) },
        ZalcmanStatus::Ok
    );
    assert_eq!((t, w), (3.0 * q, 0.5));
    assert_eq!(
        unsafe { zalcman_measure_atom(m, 2, &mut t, &mut w) },
        ZalcmanStatus::InvalidArgument
    );

    let (mut re, mut im) = (0.0, 0.0);
    assert_eq!(
        unsafe { zalcman_phi(0.0, 1.0, 3, m, &mut re, &mut im) },
        ZalcmanStatus::Ok
    );
    assert!((re - 1.0).abs() < 1e-15 && im.abs() < 1e-15);
    unsafe { zalcman_measure_free(m) };
    unsafe { zalcman_measure_free(ptr::null_mut()) };

    let bad = [0.3, 0.3];
    let st = unsafe { zalcman_measure_new(thetas.as_ptr(), bad.as_ptr(), 2, &mut m) };
    assert_eq!(st, ZalcmanStatus::InvalidMeasure);
    assert!(m.is_null());
    assert!(last_error().contains("sum"));

    let json = CString::new(r#"[{"theta": 0, "w": 1}]"#).unwrap();
    assert_eq!(
        unsafe { zalcman_measure_from_json(json.as_ptr(), &mut m) },
        ZalcmanStatus::Ok
    );
    assert_eq!(
        unsafe { zalcman_phi(-0.5, 1.0, 6, m, &mut re, &mut im) },
        ZalcmanStatus::Ok
    );
    assert!((re - 6.25).abs() < 1e-13);
    unsafe { zalcman_measure_free(m) };

    let junk = CString::new("not json").unwrap();
    assert_eq!(
        unsafe { zalcman_measure_from_json(junk.as_ptr(), &mut m) },
        ZalcmanStatus::InvalidMeasure
    );
}

#[test]
fn search_handle() {
    let mut cfg = zalcman_search_config_default();
    cfg.starts = 6;
    let mut s = ptr::null_mut();
    assert_eq!(
        unsafe { zalcman_search(-0.5, 2.0, 3, &cfg, &mut s) },
        ZalcmanStatus::Ok
    );
    let mut sum = unsafe { std::mem::zeroed::<ZalcmanSearchSummary>() };
    assert_eq!(
        unsafe { zalcman_search_summary(s, &mut sum) },
        ZalcmanStatus::Ok
    );
    assert!((sum.bound - 5.0).abs() < 1e-12);
    assert!(sum.gap.abs() <= 1e-5);
    assert_eq!((sum.violations, sum.starts_used), (0, 6));

    let mut m = ptr::null_mut();
    assert_eq!(
        unsafe { zalcman_search_best_measure(s, &mut m) },
        ZalcmanStatus::Ok
    );
    assert_eq!(unsafe { zalcman_measure_len(m) }, 4);
    unsafe {
        zalcman_measure_free(m);
        zalcman_search_free(s);
    }

    cfg.starts = 0;
    assert_eq!(
        unsafe { zalcman_search(0.0, 1.0, 3, &cfg, &mut s) },
        ZalcmanStatus::InvalidConfig
    );
    assert!(s.is_null());
    assert_eq!(
        unsafe { zalcman_search_summary(ptr::null(), &mut sum) },
        ZalcmanStatus::NullPointer
    );
}

#[test]
fn version_string() {
    let v = unsafe { CStr::from_ptr(zalcman_version()) };
    assert_eq!(v.to_str().unwrap(), env!("CARGO_PKG_VERSION"));
}
