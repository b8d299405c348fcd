use std::ffi::CStr;
use std::ptr;

use pinch_sop_ffi::*;

fn config(params: &PinchParams) -> *mut PinchConfig {
    let mut cfg = ptr::null_mut();
    assert_eq!(
        unsafe { pinch_config_new(params, &mut cfg) },
        PinchStatus::Ok
    );
    assert!(!cfg.is_null());
    cfg
}

fn last_error() -> String {
    let p = pinch_last_error_message();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned()
}

#[test]
fn defaults_round_trip() {
    let params = pinch_params_default();
    assert_eq!(params.region_side, 10.0);
    assert_eq!(params.height, 3.0);
    assert_eq!(params.carrier_freq, 28e9);
    let cfg = config(&params);
    let mut back = pinch_params_default();
    back.height = 0.0;
    assert_eq!(
        unsafe { pinch_config_params(cfg, &mut back) },
        PinchStatus::Ok
    );
    assert_eq!(back, params);
    let mut c = 0.0;
    assert_eq!(unsafe { pinch_config_c_th(cfg, &mut c) }, PinchStatus::Ok);
    assert!((c - 2f64.powf(0.1)).abs() < 1e-15);
    let mut g = 0.0;
    assert_eq!(
        unsafe { pinch_config_gamma_bar(cfg, &mut g) },
        PinchStatus::Ok
    );
    assert!(g > 0.0);
    unsafe { pinch_config_free(cfg) };
}

#[test]
fn evaluators_agree_with_core() {
    let cfg = config(&pinch_params_default());
    let core = pinch_sop::SystemConfig::new(pinch_sop::SystemParams::default()).unwrap();
    let (mut exact, mut cheb, mut asym) = (0.0, 0.0, 0.0);
    unsafe {
        assert_eq!(pinch_sop_exact(cfg, 1e-8, &mut exact), PinchStatus::Ok);
        assert_eq!(pinch_sop_chebyshev(cfg, 100, &mut cheb), PinchStatus::Ok);
        assert_eq!(pinch_sop_asymptotic(cfg, &mut asym), PinchStatus::Ok);
    }
    assert_eq!(exact, pinch_sop::sop::sop_exact(&core, 1e-8).unwrap().value);
    assert_eq!(
        cheb,
        pinch_sop::sop::sop_chebyshev(&core, 100).unwrap().value
    );
    assert!(asym <= exact + 1e-9);
    assert_eq!(
        pinch_sop_lower_bound_pas(),
        (2.0 * std::f64::consts::PI - 1.0) / 24.0
    );
    assert_eq!(pinch_sop_lower_bound_fpa(), 0.5);

    let mut v = 0.0;
    unsafe {
        assert_eq!(pinch_cdf_gamma_b(cfg, 1e9, &mut v), PinchStatus::Ok);
        assert_eq!(v, 1.0);
        assert_eq!(pinch_pdf_w(cfg, 0.0, &mut v), PinchStatus::Ok);
        assert!((v - std::f64::consts::PI / 100.0).abs() < 1e-15);
        assert_eq!(pinch_cdf_chi(cfg, 1e6, &mut v), PinchStatus::Ok);
        assert_eq!(v, 1.0);
        assert_eq!(pinch_pdf_gamma_e(cfg, 100.0, &mut v), PinchStatus::Ok);
        assert!(v > 0.0);
        pinch_config_free(cfg);
    }
}

#[test]
fn monte_carlo_is_worker_invariant() {
    let cfg = config(&pinch_params_default());
    let mut a = PinchMcResult::default();
    let mut b = PinchMcResult::default();
    unsafe {
        assert_eq!(pinch_mc_sop_pas(cfg, 30_000, 5, 1, &mut a), PinchStatus::Ok);
        assert_eq!(pinch_mc_sop_pas(cfg, 30_000, 5, 3, &mut b), PinchStatus::Ok);
    }
    assert_eq!(a, b);
    assert_eq!(a.trials, 30_000);
    let mut f = PinchMcResult::default();
    unsafe {
        assert_eq!(pinch_mc_sop_fpa(cfg, 30_000, 5, 2, &mut f), PinchStatus::Ok);
        assert_eq!(
            pinch_mc_sop_pas(cfg, 0, 5, 1, &mut a),
            PinchStatus::InvalidParameter
        );
        pinch_config_free(cfg);
    }
    assert!(f.estimate >= a.estimate);
    assert!(last_error().contains("trials"));
}

#[test]
fn errors_map_to_codes() {
    let mut params = pinch_params_default();
    params.region_side = -1.0;
    let mut cfg = ptr::null_mut();
    assert_eq!(
        unsafe { pinch_config_new(&params, &mut cfg) },
        PinchStatus::InvalidParameter
    );
    assert!(cfg.is_null());
    assert!(last_error().contains("region_side"));

    assert_eq!(
        unsafe { pinch_config_new(ptr::null(), &mut cfg) },
        PinchStatus::NullPointer
    );
    let good = config(&pinch_params_default());
    let mut v = 7.0;
    unsafe {
        assert_eq!(
            pinch_sop_exact(good, 0.5, &mut v),
            PinchStatus::InvalidParameter
        );
        assert_eq!(v, 7.0, "out untouched on failure");
        assert_eq!(pinch_pdf_gamma_e(good, 0.0, &mut v), PinchStatus::Domain);
        assert_eq!(
            pinch_sop_exact(good, 1e-8, ptr::null_mut()),
            PinchStatus::NullPointer
        );
        assert_eq!(
            pinch_sop_exact(ptr::null(), 1e-8, &mut v),
            PinchStatus::NullPointer
        );
        pinch_config_free(good);
        pinch_config_free(ptr::null_mut());
    }
}

#[test]
fn status_names() {
    let name = |s: i32| {
        unsafe { CStr::from_ptr(pinch_status_name(s)) }
            .to_str()
            .unwrap()
    };
    assert_eq!(name(PinchStatus::Ok as i32), "ok");
    assert_eq!(name(PinchStatus::NullPointer as i32), "null-pointer");
    assert_eq!(name(99), "unknown");
}

#[test]
fn header_declares_every_export() {
    let header = include_str!("../include/pinch_sop.h");
    for sym in [
        "pinch_params_default",
        "pinch_config_new",
        "pinch_config_free",
        "pinch_config_params",
        "pinch_config_gamma_bar",
        "pinch_config_c_th",
        "pinch_sop_exact",
        "pinch_sop_chebyshev",
        "pinch_sop_asymptotic",
        "pinch_sop_lower_bound_pas",
        "pinch_sop_lower_bound_fpa",
        "pinch_mc_sop_pas",
        "pinch_mc_sop_fpa",
        "pinch_cdf_gamma_b",
        "pinch_pdf_gamma_e",
        "pinch_pdf_w",
        "pinch_cdf_chi",
        "pinch_last_error_message",
        "pinch_status_name",
        "typedef struct PinchConfig PinchConfig;",
    ] {
        assert!(header.contains(sym), "header lacks {sym}");
    }
}
