use std::ffi::CStr;
use std::ptr;

use bayes_aggregate_ffi::*;

fn last_error() -> String {
    let p = ba_last_error_message();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned()
}

#[test]
fn dirichlet_draw_is_on_simplex_and_seeded() {
    let mut a = vec![0.0; 10];
    let mut b = vec![0.0; 10];
    unsafe {
        assert_eq!(ba_sample_dirichlet(1.0, 2.0, 10, 3, a.as_mut_ptr()), BaStatus::Ok);
        assert_eq!(ba_sample_dirichlet(1.0, 2.0, 10, 3, b.as_mut_ptr()), BaStatus::Ok);
    }
    assert_eq!(a, b);
    assert!((a.iter().sum::<f64>() - 1.0).abs() < 1e-10);
    assert!(a.iter().all(|v| *v >= 0.0));
}

#[test]
fn invalid_arguments_set_status_and_message() {
    let mut out = [0.0; 3];
    let s = unsafe { ba_sample_dirichlet(-1.0, 2.0, 3, 0, out.as_mut_ptr()) };
    assert_eq!(s, BaStatus::InvalidArgument);
    assert!(last_error().contains("alpha"));

    let s = unsafe { ba_sample_dirichlet(1.0, 2.0, 3, 0, ptr::null_mut()) };
    assert_eq!(s, BaStatus::NullPointer);
    assert!(last_error().contains("null"));
}

#[test]
fn concentration_matches_closed_form_at_m2() {
    // M = 2, γ = 0, α = 1: λ₁ ~ Beta(1, 1). With λ* = e₁, s = 1 and ε = 0.1 the tail
    // event is min(λ₁, λ₂) > 0.1, probability 0.8.
    let mut c = BaConcentration::default();
    let s = unsafe { ba_estimate_concentration(2, 1.0, 0.0, 1, 0.1, 20_000, 5, &mut c) };
    assert_eq!(s, BaStatus::Ok);
    assert!((c.p_tail - 0.8).abs() < 4.0 * c.se_tail + 1e-3, "{c:?}");
    let s = unsafe { ba_estimate_concentration(2, 1.0, 0.0, 3, 0.1, 20_000, 5, &mut c) };
    assert_eq!(s, BaStatus::InvalidArgument);
}

fn toy(n: usize) -> (Vec<f64>, Vec<f64>) {
    // y = 0.7 f1 + 0.3 f2 exactly, f1 and f2 not collinear
    let mut f = Vec::with_capacity(2 * n);
    let mut y = Vec::with_capacity(n);
    for i in 0..n {
        let a = (i as f64 * 0.37).sin() * 2.0;
        let b = (i as f64 * 0.11).cos();
        f.extend([a, b]);
        y.push(0.7 * a + 0.3 * b);
    }
    (y, f)
}

#[test]
fn chain_handle_lifecycle() {
    let (y, f) = toy(60);
    let mut cfg = ba_chain_config_default(BaMode::Convex);
    cfg.n_iter = 600;
    cfg.burn_in = 300;
    let mut h: *mut BaPosterior = ptr::null_mut();
    unsafe {
        assert_eq!(ba_run_chain(y.as_ptr(), f.as_ptr(), 60, 2, &cfg, 9, &mut h), BaStatus::Ok);
        assert!(!h.is_null());
        let (mut draws, mut dim) = (0usize, 0usize);
        assert_eq!(ba_posterior_shape(h, &mut draws, &mut dim), BaStatus::Ok);
        assert_eq!((draws, dim), (300, 2));

        let mut est = [0.0; 2];
        assert_eq!(ba_posterior_estimate(h, est.as_mut_ptr(), 2), BaStatus::Ok);
        assert!((est[0] - 0.7).abs() < 0.02, "{est:?}");
        assert!((est[0] + est[1] - 1.0).abs() < 1e-9);

        let mut all = vec![0.0; draws * dim];
        assert_eq!(ba_posterior_draws(h, all.as_mut_ptr(), all.len()), BaStatus::Ok);
        assert_eq!(ba_posterior_draws(h, all.as_mut_ptr(), 3), BaStatus::DimensionMismatch);

        let mut acc = BaAcceptance::default();
        assert_eq!(ba_posterior_acceptance(h, &mut acc), BaStatus::Ok);
        assert!(acc.weights > 0.0 && acc.scale == -1.0);

        let mut mode = BaMode::Linear;
        assert_eq!(ba_posterior_mode(h, &mut mode), BaStatus::Ok);
        assert_eq!(mode, BaMode::Convex);

        ba_posterior_free(h);
        ba_posterior_free(ptr::null_mut());
    }
}

#[test]
fn chain_rejects_bad_input() {
    let (y, mut f) = toy(20);
    f[5] = f64::NAN;
    let cfg = ba_chain_config_default(BaMode::Linear);
    let mut h: *mut BaPosterior = ptr::null_mut();
    let s = unsafe { ba_run_chain(y.as_ptr(), f.as_ptr(), 20, 2, &cfg, 0, &mut h) };
    assert_eq!(s, BaStatus::NonFinite);
    assert!(h.is_null());
    assert!(last_error().contains("(2, 1)"), "{}", last_error());
}

#[test]
fn header_declares_the_api() {
    let header = include_str!("../include/bayes_aggregate.h");
    for name in [
        "ba_last_error_message",
        "ba_sample_dirichlet",
        "ba_estimate_concentration",
        "ba_run_chain",
        "ba_posterior_free",
        "ba_posterior_estimate",
        "typedef struct BaPosterior BaPosterior",
        "BA_STATUS_OK = 0",
    ] {
        assert!(header.contains(name), "header lacks {name}");
    }
}
