mod common;

use approx::assert_abs_diff_eq;
use common::{chi_cdf_closed_form, config};
use pinch_sop::distributions::{cdf_chi, cdf_x_squared, ChiCdf, PiecewiseDensity};
use pinch_sop::monte_carlo::{sample_chi, sample_gamma_e};
use pinch_sop::stats::{chi_square_gof, ks_critical_value, ks_statistic};
use pinch_sop::McConfig;

#[test]
fn closed_form_chi_cdf_reaches_one() {
    for d in [1.0, 10.0, 30.0] {
        let d2: f64 = d * d;
        assert_abs_diff_eq!(
            chi_cdf_closed_form(1.25 * d2 * (1.0 - 1e-15), d),
            1.0,
            epsilon = 1e-12
        );
        assert_abs_diff_eq!(
            chi_cdf_closed_form(0.25 * d2, d),
            (3.0 * std::f64::consts::PI - 2.0) / 12.0,
            epsilon = 1e-14
        );
    }
}

#[test]
fn quadrature_chi_cdf_matches_closed_form() {
    for d in [10.0, 30.0] {
        let chi = ChiCdf::new(d).unwrap();
        let end = 1.25 * d * d;
        let mut worst: f64 = 0.0;
        for k in 0..=2000 {
            let t = end * k as f64 / 2000.0;
            worst = worst.max((chi.cdf(t) - chi_cdf_closed_form(t, d)).abs());
        }
        assert!(worst <= 1e-8, "D={d}: max diff {worst:e}");
        assert_eq!(chi.cdf(-1.0), 0.0);
        assert_eq!(chi.cdf(2.0 * end), 1.0);
    }
}

#[test]
fn cdf_chi_is_monotone() {
    let cfg = config(10.0, 20.0, 0.1);
    let mut prev = 0.0;
    for k in 0..=500 {
        let v = cdf_chi(125.0 * k as f64 / 500.0, &cfg).unwrap();
        assert!(v >= prev - 1e-15);
        prev = v;
    }
}

#[test]
fn empirical_chi_cdf_at_first_breakpoint() {
    let cfg = config(10.0, 20.0, 0.1);
    let mc = McConfig::new(200_000, 11, 2).unwrap();
    let samples = sample_chi(&cfg, &mc).unwrap();
    let p = samples.iter().filter(|&&c| c <= 25.0).count() as f64 / samples.len() as f64;
    let exact = chi_cdf_closed_form(25.0, 10.0);
    let se = (exact * (1.0 - exact) / samples.len() as f64).sqrt();
    assert!((p - exact).abs() <= 4.0 * se, "{p} vs {exact}");
}

#[test]
fn x_squared_cdf_matches_triangular_distance() {
    // X = x1 - x2 is triangular on [-D, D]; P(X^2 <= t) = 1 - (1 - sqrt(t)/D)^2
    let d: f64 = 10.0;
    for t in [0.0f64, 1.0, 25.0, 64.0, 100.0] {
        let r = 1.0 - t.sqrt() / d;
        assert_abs_diff_eq!(cdf_x_squared(t, d).unwrap(), 1.0 - r * r, epsilon = 1e-14);
    }
}

#[test]
fn gamma_e_samples_fit_density() {
    for d in [10.0, 30.0] {
        let cfg = config(d, 20.0, 0.5);
        let mc = McConfig::new(1_000_000, 3, 4).unwrap();
        let samples = sample_gamma_e(&cfg, &mc).unwrap();
        let dens = PiecewiseDensity::gamma_e_pdf(&cfg);
        let t = chi_square_gof(
            &samples,
            |z| dens.evaluate(z),
            dens.support_lo,
            dens.support_hi,
            &dens.breakpoints,
            200,
            0.01,
        )
        .unwrap();
        assert!(t.passes(), "D={d}: {t:?}");
    }
}

#[test]
fn chi_samples_pass_ks_at_two_sizes() {
    let cfg = config(30.0, 20.0, 0.1);
    let chi = ChiCdf::for_config(&cfg).unwrap();
    for n in [100_000u64, 1_000_000] {
        let mc = McConfig::new(n, 17, 4).unwrap();
        let mut s = sample_chi(&cfg, &mc).unwrap();
        let stat = ks_statistic(&mut s, |t| chi.cdf(t));
        assert!(
            stat <= ks_critical_value(n as usize, 0.01),
            "n={n}: D={stat}"
        );
    }
}

#[test]
fn ks_detects_wrong_distribution() {
    // chi samples for D = 10 against the CDF for D = 11
    let cfg = config(10.0, 20.0, 0.1);
    let wrong = ChiCdf::new(11.0).unwrap();
    let mut s = sample_chi(&cfg, &McConfig::new(100_000, 1, 2).unwrap()).unwrap();
    let stat = ks_statistic(&mut s, |t| wrong.cdf(t));
    assert!(stat > ks_critical_value(s.len(), 0.01));
}
