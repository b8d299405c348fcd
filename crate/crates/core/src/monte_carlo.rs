//! Seeded Monte Carlo simulation of the downlink geometry.
//!
//! Trial `i` draws `(x1, y1, x2, y2)` uniformly on `[-D/2, D/2]` from a
//! ChaCha8 keystream keyed by the seed, starting at word offset
//! `i * WORDS_PER_TRIAL`. The keystream is counter based, so any trial can be
//! reached directly and the result of a run depends only on `(seed, trials)`,
//! never on how trials are split across workers. Work is cut into fixed
//! chunks of [`CHUNK_TRIALS`] trials; counts are summed as integers.

use rand_chacha::rand_core::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{invalid, Error, Result};
use crate::system_model::{snr_bob_pinching, snr_eve_pinching, snr_fpa, SystemConfig};

/// 32-bit keystream words consumed per trial (four `u64` draws).
const WORDS_PER_TRIAL: u128 = 8;

/// Trials per work unit.
pub const CHUNK_TRIALS: u64 = 8192;

pub const DEFAULT_SEED: u64 = 20_250_302;
pub const DEFAULT_TRIALS: u64 = 100_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct McConfig {
    pub trials: u64,
    pub seed: u64,
    /// Worker threads. Has no effect on results.
    pub workers: usize,
}

impl Default for McConfig {
    fn default() -> Self {
        Self {
            trials: DEFAULT_TRIALS,
            seed: DEFAULT_SEED,
            workers: 1,
        }
    }
}

impl McConfig {
    pub fn new(trials: u64, seed: u64, workers: usize) -> Result<Self> {
        let mc = Self {
            trials,
            seed,
            workers,
        };
        mc.validate()?;
        Ok(mc)
    }

    pub fn validate(&self) -> Result<()> {
        if self.trials == 0 {
            return Err(invalid("trials", "must be >= 1"));
        }
        if self.workers == 0 {
            return Err(invalid("workers", "must be >= 1"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct McResult {
    pub estimate: f64,
    /// `sqrt(p (1 - p) / trials)`.
    pub stderr: f64,
    pub trials: u64,
    pub seed: u64,
    /// Number of trials in which the event occurred.
    pub hits: u64,
}

impl McResult {
    fn from_hits(hits: u64, mc: &McConfig) -> Self {
        let n = mc.trials as f64;
        let p = hits as f64 / n;
        Self {
            estimate: p,
            stderr: (p * (1.0 - p) / n).sqrt(),
            trials: mc.trials,
            seed: mc.seed,
            hits,
        }
    }
}

/// One trial's ground positions.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Draw {
    pub x1: f64,
    pub y1: f64,
    pub x2: f64,
    pub y2: f64,
}

/// Positions of a single trial, for inspection and tests.
pub fn draw_for_trial(seed: u64, trial: u64, region_side: f64) -> Draw {
    let mut rng = stream_at(seed, trial);
    next_draw(&mut rng, region_side)
}

fn stream_at(seed: u64, trial: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_word_pos(trial as u128 * WORDS_PER_TRIAL);
    rng
}

/// 53-bit uniform on `[0, 1)` mapped affinely onto `[-D/2, D/2)`.
#[inline]
fn coord(rng: &mut ChaCha8Rng, d: f64) -> f64 {
    let u = (rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64);
    d * (u - 0.5)
}

#[inline]
fn next_draw(rng: &mut ChaCha8Rng, d: f64) -> Draw {
    let x1 = coord(rng, d);
    let y1 = coord(rng, d);
    let x2 = coord(rng, d);
    let y2 = coord(rng, d);
    Draw { x1, y1, x2, y2 }
}

fn chunks(trials: u64) -> impl IndexedParallelIterator<Item = (u64, u64)> {
    let n_chunks = trials.div_ceil(CHUNK_TRIALS) as usize;
    (0..n_chunks).into_par_iter().map(move |c| {
        let start = c as u64 * CHUNK_TRIALS;
        (start, (start + CHUNK_TRIALS).min(trials))
    })
}

fn run_in_pool<T: Send>(workers: usize, job: impl FnOnce() -> T + Send) -> Result<T> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| Error::Usage(format!("cannot build worker pool: {e}")))?;
    Ok(pool.install(job))
}

/// Counts trials whose draw satisfies `event`.
fn count_hits<F>(mc: &McConfig, region_side: f64, event: F) -> Result<u64>
where
    F: Fn(&Draw) -> bool + Sync,
{
    mc.validate()?;
    let seed = mc.seed;
    run_in_pool(mc.workers, || {
        chunks(mc.trials)
            .map(|(start, end)| {
                let mut rng = stream_at(seed, start);
                let mut hits = 0u64;
                for _ in start..end {
                    if event(&next_draw(&mut rng, region_side)) {
                        hits += 1;
                    }
                }
                hits
            })
            .sum()
    })
}

/// Maps every trial to a value, preserving trial order.
fn collect_samples<F>(mc: &McConfig, region_side: f64, map: F) -> Result<Vec<f64>>
where
    F: Fn(&Draw) -> f64 + Sync,
{
    mc.validate()?;
    let seed = mc.seed;
    let per_chunk: Vec<Vec<f64>> = run_in_pool(mc.workers, || {
        chunks(mc.trials)
            .map(|(start, end)| {
                let mut rng = stream_at(seed, start);
                (start..end)
                    .map(|_| map(&next_draw(&mut rng, region_side)))
                    .collect()
            })
            .collect()
    })?;
    Ok(per_chunk.concat())
}

/// `(1 + gamma_B) <= C (1 + gamma_E)`, i.e. secrecy rate at or below `Rth`.
#[inline]
fn in_outage(gamma_b: f64, gamma_e: f64, c_th: f64) -> bool {
    1.0 + gamma_b <= c_th * (1.0 + gamma_e)
}

/// Empirical SOP of the pinching-antenna system.
pub fn simulate_sop_pas(cfg: &SystemConfig, mc: &McConfig) -> Result<McResult> {
    let c = cfg.c_th();
    let hits = count_hits(mc, cfg.region_side(), |p| {
        let gb = snr_bob_pinching(p.y1, cfg);
        let ge = snr_eve_pinching(p.x1, p.x2, p.y2, cfg);
        in_outage(gb, ge, c)
    })?;
    Ok(McResult::from_hits(hits, mc))
}

/// Empirical SOP of the fixed-position antenna at the region centre.
pub fn simulate_sop_fpa(cfg: &SystemConfig, mc: &McConfig) -> Result<McResult> {
    let c = cfg.c_th();
    let hits = count_hits(mc, cfg.region_side(), |p| {
        let gb = snr_fpa(p.x1, p.y1, cfg);
        let ge = snr_fpa(p.x2, p.y2, cfg);
        in_outage(gb, ge, c)
    })?;
    Ok(McResult::from_hits(hits, mc))
}

/// Eve's SNR per trial, in trial order.
pub fn sample_gamma_e(cfg: &SystemConfig, mc: &McConfig) -> Result<Vec<f64>> {
    collect_samples(mc, cfg.region_side(), |p| {
        snr_eve_pinching(p.x1, p.x2, p.y2, cfg)
    })
}

/// `chi = (x1 - x2)^2 + y2^2` per trial, in trial order.
pub fn sample_chi(cfg: &SystemConfig, mc: &McConfig) -> Result<Vec<f64>> {
    collect_samples(mc, cfg.region_side(), |p| {
        let dx = p.x1 - p.x2;
        dx * dx + p.y2 * p.y2
    })
}

/// Estimates `P((x1 - x2)^2 + y2^2 <= y1^2)`, the event `gamma_B <= gamma_E`.
/// Parameter free.
pub fn simulate_lower_bound_event(cfg: &SystemConfig, mc: &McConfig) -> Result<McResult> {
    lower_bound_event(cfg, mc, false)
}

fn lower_bound_event(cfg: &SystemConfig, mc: &McConfig, strict: bool) -> Result<McResult> {
    let hits = count_hits(mc, cfg.region_side(), |p| {
        let dx = p.x1 - p.x2;
        let eve = dx * dx + p.y2 * p.y2;
        let bob = p.y1 * p.y1;
        if strict {
            eve < bob
        } else {
            eve <= bob
        }
    })?;
    Ok(McResult::from_hits(hits, mc))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sop::lower_bound_pas_value;
    use crate::system_model::{dbm_to_watts, SystemParams};

    fn cfg(d: f64) -> SystemConfig {
        SystemConfig::new(SystemParams {
            region_side: d,
            ..Default::default()
        })
        .unwrap()
    }

    #[test]
    fn rejects_zero_trials_and_workers() {
        assert!(McConfig::new(0, 1, 1).is_err());
        assert!(McConfig::new(1, 1, 0).is_err());
        let mc = McConfig {
            trials: 0,
            ..Default::default()
        };
        assert!(simulate_sop_pas(&cfg(10.0), &mc).is_err());
    }

    #[test]
    fn draws_inside_region() {
        for t in 0..2000 {
            let p = draw_for_trial(9, t, 10.0);
            for v in [p.x1, p.y1, p.x2, p.y2] {
                assert!((-5.0..=5.0).contains(&v));
            }
        }
    }

    #[test]
    fn chunked_stream_equals_direct_seek() {
        // trial k inside a chunk, reached sequentially vs by direct seek
        let d = 10.0;
        let mut rng = stream_at(5, 0);
        for t in 0..100 {
            let seq = next_draw(&mut rng, d);
            assert_eq!(seq, draw_for_trial(5, t, d));
        }
    }

    #[test]
    fn worker_count_does_not_change_results() {
        let c = cfg(10.0);
        let base = simulate_sop_pas(&c, &McConfig::new(50_001, 3, 1).unwrap()).unwrap();
        for w in [2, 3, 8] {
            let r = simulate_sop_pas(&c, &McConfig::new(50_001, 3, w).unwrap()).unwrap();
            assert_eq!(r, base);
        }
        let s1 = sample_chi(&c, &McConfig::new(20_000, 4, 1).unwrap()).unwrap();
        let s4 = sample_chi(&c, &McConfig::new(20_000, 4, 4).unwrap()).unwrap();
        assert_eq!(s1, s4);
    }

    #[test]
    fn saturated_rate_gives_certain_outage() {
        let c = cfg(10.0);
        let rate = (2.0 + c.gamma_bar() / 9.0).log2();
        let c = c.with_target_rate(rate).unwrap();
        let mc = McConfig::new(10_000, 1, 2).unwrap();
        assert_eq!(simulate_sop_pas(&c, &mc).unwrap().estimate, 1.0);
        assert_eq!(simulate_sop_fpa(&c, &mc).unwrap().estimate, 1.0);
    }

    #[test]
    fn stderr_formula() {
        let c = cfg(10.0);
        let mc = McConfig::new(10_000, 2, 1).unwrap();
        let r = simulate_sop_pas(&c, &mc).unwrap();
        let p = r.hits as f64 / 1e4;
        assert_eq!(r.estimate, p);
        assert_eq!(r.stderr, (p * (1.0 - p) / 1e4).sqrt());
        assert!(r.stderr <= 0.5 / 100.0);
    }

    #[test]
    fn gamma_e_samples_in_support() {
        let c = cfg(30.0);
        let s = sample_gamma_e(&c, &McConfig::new(100_000, 11, 4).unwrap()).unwrap();
        let g = c.gamma_bar();
        let (lo, hi) = (g / (9.0 + 1.25 * 900.0), g / 9.0);
        assert!(s.iter().all(|&z| z >= lo && z <= hi));
    }

    #[test]
    fn strict_and_nonstrict_events_agree() {
        let c = cfg(10.0);
        let mc = McConfig::new(200_000, 8, 4).unwrap();
        let a = lower_bound_event(&c, &mc, false).unwrap();
        let b = lower_bound_event(&c, &mc, true).unwrap();
        assert_eq!(a.hits, b.hits);
        assert!((a.estimate - lower_bound_pas_value()).abs() <= 3.0 * a.stderr + 1e-12);
    }

    #[test]
    fn lower_bound_event_is_parameter_free() {
        let mc = McConfig::new(200_000, 21, 4).unwrap();
        let a = simulate_lower_bound_event(&cfg(10.0), &mc).unwrap();
        let other = SystemConfig::new(SystemParams {
            region_side: 30.0,
            height: 7.0,
            transmit_power: dbm_to_watts(40.0),
            ..Default::default()
        })
        .unwrap();
        let b = simulate_lower_bound_event(&other, &McConfig { seed: 22, ..mc }).unwrap();
        let se = (a.stderr.powi(2) + b.stderr.powi(2)).sqrt();
        assert!((a.estimate - b.estimate).abs() <= 6.0 * se);
    }
}
