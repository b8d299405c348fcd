//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! nonzero if any criterion fails.

mod common;

use std::f64::consts::PI;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::{Command, ExitCode};

use common::{chi_cdf_closed_form, config, grid};
use pinch_sop::distributions::{
    gamma_e_edges, pdf_gamma_e, pdf_gamma_e_branch, pdf_gamma_e_via_w, ChiCdf, PiecewiseDensity,
};
use pinch_sop::monte_carlo::{
    sample_chi, sample_gamma_e, simulate_lower_bound_event, simulate_sop_fpa, simulate_sop_pas,
};
use pinch_sop::sop::{
    lower_bound_pas_by_quadrature, sop_asymptotic, sop_chebyshev, sop_exact, sop_lower_bound_fpa,
    sop_lower_bound_pas, InnerIntegrals,
};
use pinch_sop::stats::{chi_square_gof, ks_critical_value, ks_statistic};
use pinch_sop::{McConfig, SystemConfig, SystemParams};

const SEED: u64 = 20_250_302;

type Outcome = (bool, String);
type Criterion = (&'static str, fn() -> Outcome);

fn bound() -> f64 {
    (2.0 * PI - 1.0) / 24.0
}

fn mc(trials: u64) -> McConfig {
    McConfig::new(trials, SEED, 4).unwrap()
}

fn ac1_constants() -> Outcome {
    let pas = sop_lower_bound_pas().value;
    let quad = lower_bound_pas_by_quadrature(10.0, InnerIntegrals::ClosedForm).unwrap();
    let quad30 = lower_bound_pas_by_quadrature(30.0, InnerIntegrals::ClosedForm).unwrap();
    let fpa = sop_lower_bound_fpa().value;
    let exact = (pas - bound()).abs() <= f64::EPSILON;
    let q_err = (quad - bound()).abs().max((quad30 - bound()).abs());
    (
        exact && q_err <= 1e-12 && fpa == 0.5,
        format!("pas={pas:.16} quadrature err={q_err:.1e} fpa={fpa}"),
    )
}

fn ac2_chebyshev_vs_exact() -> Outcome {
    let mut worst: f64 = 0.0;
    for cfg in grid() {
        let c = sop_chebyshev(&cfg, 100).unwrap().value;
        let e = sop_exact(&cfg, 1e-8).unwrap().value;
        worst = worst.max((c - e).abs());
    }
    (
        worst <= 1e-3,
        format!("54 points, max|cheb-exact|={worst:.3e} (limit 1e-3)"),
    )
}

fn ac3_mc_vs_chebyshev() -> Outcome {
    let mc = mc(100_000);
    let mut worst: f64 = 0.0;
    for cfg in grid() {
        let c = sop_chebyshev(&cfg, 100).unwrap().value;
        let r = simulate_sop_pas(&cfg, &mc).unwrap();
        worst = worst.max((r.estimate - c).abs() / (3.0 * r.stderr).max(0.01));
    }
    (
        worst <= 1.0,
        format!("54 points x 1e5 trials, max |mc-cheb|/max(3se,0.01)={worst:.3}"),
    )
}

fn ac4_floors() -> Outcome {
    let mc1 = mc(100_000);
    let mut pas_margin = f64::INFINITY;
    let mut fpa_margin = f64::INFINITY;
    for cfg in grid() {
        let c = sop_chebyshev(&cfg, 100).unwrap().value;
        let e = sop_exact(&cfg, 1e-8).unwrap().value;
        let p = simulate_sop_pas(&cfg, &mc1).unwrap();
        let f = simulate_sop_fpa(&cfg, &mc1).unwrap();
        pas_margin = pas_margin
            .min(c - bound())
            .min(e - bound())
            .min(p.estimate - (bound() - 3.0 * p.stderr));
        fpa_margin = fpa_margin.min(f.estimate - (0.5 - 3.0 * f.stderr));
    }
    let mut event_ok = true;
    let mut zs = Vec::new();
    for (k, (d, h)) in [(10.0, 3.0), (30.0, 6.0)].into_iter().enumerate() {
        let cfg = SystemConfig::new(SystemParams {
            region_side: d,
            height: h,
            ..SystemParams::default()
        })
        .unwrap();
        let r = simulate_lower_bound_event(
            &cfg,
            &McConfig::new(1_000_000, SEED + 1 + k as u64, 4).unwrap(),
        )
        .unwrap();
        let z = (r.estimate - bound()) / r.stderr;
        event_ok &= z.abs() <= 3.0;
        zs.push(format!("D={d},h={h} z={z:+.2}"));
    }
    (
        pas_margin >= 0.0 && fpa_margin >= 0.0 && event_ok,
        format!(
            "min margin pas={pas_margin:.4} fpa={fpa_margin:.4}; event 1e6: {}",
            zs.join(", ")
        ),
    )
}

fn ac5_plateau() -> Outcome {
    let mut worst: f64 = 0.0;
    let mut identical = true;
    for d in [10.0, 30.0] {
        for r in [0.1, 1.0] {
            let e = sop_exact(&config(d, 60.0, r), 1e-8).unwrap().value;
            let a = sop_asymptotic(&config(d, 60.0, r)).unwrap().value;
            worst = worst.max((e - a).abs());
            let lo = sop_asymptotic(&config(d, 0.0, r)).unwrap().value;
            let hi = sop_asymptotic(&config(d, 50.0, r)).unwrap().value;
            identical &= lo.to_bits() == hi.to_bits();
        }
    }
    (
        worst <= 1e-2 && identical,
        format!("max|exact(60dBm)-asym|={worst:.2e}, bit-identical 0 vs 50 dBm={identical}"),
    )
}

fn ac6_distributions() -> Outcome {
    let mut notes = Vec::new();
    let mut ok = true;

    let mut mass_err: f64 = 0.0;
    for d in [10.0, 30.0] {
        let cfg = config(d, 20.0, 0.1);
        for dens in [
            PiecewiseDensity::gamma_e_pdf(&cfg),
            PiecewiseDensity::w_pdf(&cfg),
        ] {
            mass_err = mass_err.max((dens.total_mass(1e-10).unwrap() - 1.0).abs());
        }
        let chi = ChiCdf::new(d).unwrap();
        mass_err = mass_err.max((chi.total_mass() - 1.0).abs());
        mass_err = mass_err.max((chi_cdf_closed_form(1.25 * d * d * (1.0 - 1e-16), d) - 1.0).abs());
    }
    ok &= mass_err <= 1e-6;
    notes.push(format!("mass err={mass_err:.1e}"));

    // 10^4 pseudo-random support points from a fixed LCG
    let mut state: u64 = 0x9E37_79B9_7F4A_7C15;
    let mut next = || {
        state = state
            .wrapping_mul(6_364_136_223_846_793_005)
            .wrapping_add(1_442_695_040_888_963_407);
        (state >> 11) as f64 / (1u64 << 53) as f64
    };
    let mut cov: f64 = 0.0;
    for d in [10.0, 30.0] {
        let cfg = config(d, 20.0, 0.1);
        let [lo, _, _, hi] = gamma_e_edges(&cfg);
        for _ in 0..5_000 {
            let z = lo + (hi - lo) * next();
            let a = pdf_gamma_e(z, &cfg).unwrap();
            let b = pdf_gamma_e_via_w(z, &cfg).unwrap();
            if a != b {
                cov = cov.max((a - b).abs() / a.abs().max(b.abs()));
            }
        }
    }
    ok &= cov <= 1e-9;
    notes.push(format!("change of variables rel={cov:.1e}"));

    let mut jump: f64 = 0.0;
    for d in [10.0, 30.0] {
        let cfg = config(d, 20.0, 0.1);
        let [_, e1, e2, _] = gamma_e_edges(&cfg);
        for (z, l, r) in [(e1, 2, 1), (e2, 1, 0)] {
            let a = pdf_gamma_e_branch(z, &cfg, l);
            let b = pdf_gamma_e_branch(z, &cfg, r);
            jump = jump.max((a - b).abs() / a.max(b));
        }
    }
    ok &= jump <= 1e-9;
    notes.push(format!("continuity rel={jump:.1e}"));

    let cfg = config(10.0, 20.0, 0.1);
    let samples = sample_gamma_e(&cfg, &mc(1_000_000)).unwrap();
    let dens = PiecewiseDensity::gamma_e_pdf(&cfg);
    let gof = chi_square_gof(
        &samples,
        |z| dens.evaluate(z),
        dens.support_lo,
        dens.support_hi,
        &dens.breakpoints,
        200,
        0.01,
    )
    .unwrap();
    ok &= gof.passes();
    notes.push(format!(
        "chi2={:.1}/{:.1}",
        gof.statistic, gof.critical_value
    ));

    let chi = ChiCdf::for_config(&cfg).unwrap();
    let mut s = sample_chi(&cfg, &mc(1_000_000)).unwrap();
    let ks = ks_statistic(&mut s, |t| chi.cdf(t));
    let crit = ks_critical_value(s.len(), 0.01);
    ok &= ks <= crit;
    notes.push(format!("ks={ks:.1e}/{crit:.1e}"));

    (ok, notes.join(", "))
}

fn ac7_fpa_ordering() -> Outcome {
    let mc = mc(100_000);
    let mut worst = f64::INFINITY;
    let mut n = 0;
    let rates = (1..=20).map(|k| config(30.0, 20.0, 0.1 * k as f64));
    let powers = (0..=8).map(|k| config(30.0, 5.0 * k as f64, 0.1));
    for cfg in rates.chain(powers) {
        let fpa = simulate_sop_fpa(&cfg, &mc).unwrap().estimate;
        let cheb = sop_chebyshev(&cfg, 100).unwrap().value;
        let pas = simulate_sop_pas(&cfg, &mc).unwrap().estimate;
        worst = worst.min(fpa - cheb.max(pas));
        n += 1;
    }
    (
        worst >= 0.0,
        format!("{n} points, min(fpa - pas)={worst:.4}"),
    )
}

fn sweep_csv(workers: &str, extra: &[&str], env_seed: Option<&str>) -> Vec<u8> {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_pinch-sop"));
    cmd.args(["sweep", "--workers", workers]).args(extra);
    cmd.env_remove("PINCH_SEED");
    if let Some(s) = env_seed {
        cmd.env("PINCH_SEED", s);
    }
    let out = cmd.output().expect("CLI runs");
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    out.stdout
}

fn ac8_determinism() -> Outcome {
    let power = [
        "--seed",
        "99",
        "--x-axis",
        "power",
        "--min",
        "0",
        "--max",
        "40",
        "--step",
        "10",
        "--methods",
        "mc,mc-fpa,chebyshev",
        "--trials",
        "50000",
    ];
    let rate = [
        "--seed",
        "99",
        "--x-axis",
        "rate",
        "--values",
        "0.1,0.5,1,2",
        "--region",
        "30",
        "--methods",
        "mc,exact",
        "--trials",
        "20000",
    ];
    let mut ok = true;
    let mut bytes = 0;
    for args in [&power[..], &rate[..]] {
        let one = sweep_csv("1", args, None);
        let four = sweep_csv("4", args, None);
        let seven = sweep_csv("7", args, None);
        ok &= one == four && one == seven;
        bytes += one.len();
    }
    // the seed may come from the environment instead of the flag
    let via_env = sweep_csv("3", &power[2..], Some("99"));
    ok &= via_env == sweep_csv("1", &power, None);
    (
        ok,
        format!("2 sweeps at 1/4/7 workers, {bytes} bytes, identical={ok}"),
    )
}

fn main() -> ExitCode {
    let criteria: [Criterion; 8] = [
        ("lower-bound constants", ac1_constants),
        ("Gauss-Chebyshev vs exact integral", ac2_chebyshev_vs_exact),
        ("Monte Carlo agreement", ac3_mc_vs_chebyshev),
        ("lower bounds as floors", ac4_floors),
        ("high-power plateau", ac5_plateau),
        ("distribution validity", ac6_distributions),
        ("PAS below FPA", ac7_fpa_ordering),
        ("worker-count determinism", ac8_determinism),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.into_iter().enumerate() {
        let (ok, detail) =
            catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|_| (false, "panicked".to_string()));
        if !ok {
            failed += 1;
        }
        let tag = if ok { "PASS" } else { "FAIL" };
        println!("AC{} {tag} {name}: {detail}", i + 1);
    }
    println!("acceptance: {} passed, {failed} failed", 8 - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
