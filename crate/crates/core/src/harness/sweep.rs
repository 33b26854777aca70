//! Monte Carlo BLER sweeps.

use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;

use crate::analysis::{bler_upper_bound, BoundParams};
use crate::channel::{
    sample_channel, snr_to_sigma2, svc_snr_to_sigma2, svc_transmit, transmit_comp,
};
use crate::codec::{capacity_bits, smc_encode, svc_encode, Payload};
use crate::decoder::{
    block_mp_decode_with, comp_combine, dual_decode_with, fused_decode, svc_mp_decode, DecodeResult,
};
use crate::dictionary::Dictionary;
use crate::error::Result;
use crate::harness::config::{Scheme, SimConfig};
use crate::rng::{stream_rng, trial_seed, Stream};

/// Aggregated outcome at one SNR.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BlerPoint {
    pub snr_db: f64,
    pub sigma2: f64,
    pub trials: u64,
    pub frame_errors: u64,
    pub bler: f64,
    pub user1_errors: u64,
    pub user2_errors: u64,
    /// `None` where the bound does not apply (SVC, or coherence 1).
    pub bound_bler: Option<f64>,
    pub wall_time_seconds: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepResult {
    pub config: SimConfig,
    pub coherence: f64,
    pub points: Vec<BlerPoint>,
}

/// Per-trial error flags.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct TrialOutcome {
    pub user1_error: bool,
    pub user2_error: bool,
}

impl TrialOutcome {
    pub fn frame_error(&self) -> bool {
        self.user1_error || self.user2_error
    }
}

/// Dictionary a config transmits with.
pub fn config_dictionary(cfg: &SimConfig) -> Result<Dictionary> {
    if cfg.allow_expansion {
        Dictionary::generate_bernoulli_expanded(cfg.m, cfg.n, cfg.seed)
    } else {
        Dictionary::generate_bernoulli(cfg.m, cfg.n, cfg.seed)
    }
}

/// Noise variance at `snr_db` under the config's scheme.
pub fn config_sigma2(cfg: &SimConfig, a: &Dictionary, snr_db: f64) -> f64 {
    if cfg.scheme.is_smc() {
        snr_to_sigma2(snr_db, a, cfg.k)
    } else {
        svc_snr_to_sigma2(snr_db, a, cfg.k)
    }
}

/// One frame: fresh payloads, fading and noise keyed on the trial seed.
pub fn run_trial(cfg: &SimConfig, a: &Dictionary, sigma2: f64, seed: u64) -> Result<TrialOutcome> {
    let bits = capacity_bits(cfg.n, cfg.k)?;
    let mut prng = stream_rng(seed, 0, Stream::Payload);
    let p1 = Payload::random(bits, &mut prng);
    if cfg.scheme == Scheme::Svc {
        let cw = svc_encode(&p1, cfg.n, cfg.k)?;
        let ch = sample_channel(cfg.m, cfg.channel, seed, 0).with_sigma2(sigma2)?;
        let y = svc_transmit(&cw, a, &ch, seed, 0)?;
        let dec = svc_mp_decode(&y, a, &ch.h, cfg.k)?;
        return Ok(TrialOutcome {
            user1_error: dec.payload != Some(p1),
            user2_error: false,
        });
    }
    let p2 = Payload::random(bits, &mut prng);
    let x = smc_encode(&p1, &p2, cfg.n, cfg.k)?;
    let frame = transmit_comp(&x, a, cfg.channel, sigma2, cfg.comp_points, seed, 0)?;
    let h = &frame.channel.h;
    let dec: DecodeResult = match cfg.scheme {
        Scheme::Smc if cfg.comp_points > 1 => comp_combine(&frame.comp_views, a, cfg.k)?,
        Scheme::Smc => block_mp_decode_with(&frame.y, a, h, cfg.k, cfg.score_rule)?,
        Scheme::SmcDual => dual_decode_with(&frame.y, a, h, cfg.k, cfg.score_rule)?,
        Scheme::SmcFused => fused_decode(&frame.y, a, h, cfg.k)?,
        Scheme::Svc => unreachable!(),
    };
    Ok(TrialOutcome {
        user1_error: dec.payload1 != Some(p1),
        user2_error: dec.payload2 != Some(p2),
    })
}

fn with_pool<T: Send>(workers: usize, f: impl FnOnce() -> T + Send) -> T {
    if workers == 0 {
        return f();
    }
    match rayon::ThreadPoolBuilder::new().num_threads(workers).build() {
        Ok(pool) => pool.install(f),
        Err(_) => f(),
    }
}

/// Runs the sweep. Counts depend only on the config, never on `workers`.
pub fn run_sweep(cfg: &SimConfig) -> Result<SweepResult> {
    cfg.validate()?;
    let a = config_dictionary(cfg)?;
    let mu = if a.cols() >= 2 { a.coherence()? } else { 0.0 };
    let mut points = Vec::with_capacity(cfg.snr_db.len());
    for (si, &snr_db) in cfg.snr_db.iter().enumerate() {
        let started = Instant::now();
        let sigma2 = config_sigma2(cfg, &a, snr_db);
        let outcomes: Vec<TrialOutcome> = with_pool(cfg.workers, || {
            (0..cfg.trials)
                .into_par_iter()
                .map(|t| run_trial(cfg, &a, sigma2, trial_seed(cfg.seed, si, t)))
                .collect::<Result<Vec<_>>>()
        })?;
        let frame_errors = outcomes.iter().filter(|o| o.frame_error()).count() as u64;
        let user1_errors = outcomes.iter().filter(|o| o.user1_error).count() as u64;
        let user2_errors = outcomes.iter().filter(|o| o.user2_error).count() as u64;
        let bound_bler = if cfg.scheme.is_smc() && mu < 1.0 {
            let p = BoundParams::unit_values(cfg.m, cfg.n, cfg.k, mu, sigma2, cfg.bound_variant)?;
            Some(bler_upper_bound(&p))
        } else {
            None
        };
        points.push(BlerPoint {
            snr_db,
            sigma2,
            trials: cfg.trials,
            frame_errors,
            bler: frame_errors as f64 / cfg.trials as f64,
            user1_errors,
            user2_errors,
            bound_bler,
            wall_time_seconds: started.elapsed().as_secs_f64(),
        });
    }
    Ok(SweepResult {
        config: cfg.clone(),
        coherence: mu,
        points,
    })
}

pub const CSV_COLUMNS: [&str; 15] = [
    "scheme",
    "m",
    "n",
    "K",
    "channel",
    "seed",
    "snr_db",
    "trials",
    "frame_errors",
    "bler",
    "user1_errors",
    "user2_errors",
    "bound_bler",
    "bound_variant",
    "wall_time_seconds",
];

impl SweepResult {
    pub fn to_csv(&self) -> String {
        let c = &self.config;
        let mut out = CSV_COLUMNS.join(",");
        out.push('\n');
        for p in &self.points {
            let bound = p.bound_bler.map(|b| b.to_string()).unwrap_or_default();
            out.push_str(&format!(
                "{},{},{},{},{},{},{},{},{},{},{},{},{},{},{:.6}\n",
                c.scheme,
                c.m,
                c.n,
                c.k,
                c.channel,
                c.seed,
                p.snr_db,
                p.trials,
                p.frame_errors,
                p.bler,
                p.user1_errors,
                p.user2_errors,
                bound,
                c.bound_variant,
                p.wall_time_seconds
            ));
        }
        out
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("sweep results serialize")
    }

    /// `(frame_errors, trials)` per SNR point.
    pub fn error_counts(&self) -> Vec<(u64, u64)> {
        self.points
            .iter()
            .map(|p| (p.frame_errors, p.trials))
            .collect()
    }
}

/// CSV text with the wall-time column removed, for determinism checks.
pub fn strip_wall_time(csv: &str) -> String {
    csv.lines()
        .map(|l| l.rsplit_once(',').map_or(l, |(head, _)| head))
        .collect::<Vec<_>>()
        .join("\n")
}

/// SMC against SVC at equal per-user payload and equal total channel uses.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ComparisonRow {
    pub snr_db: f64,
    pub smc_bler: f64,
    pub svc_bler: f64,
    pub bits_per_user: u32,
    pub smc_channel_uses: usize,
    pub svc_channel_uses_per_user: usize,
}

/// SMC sends both users on an `m x m` grid; each SVC user gets half of it,
/// `m^2 / 2` resources, with the same `(n, K)` and therefore the same payload.
pub fn run_comparison(base: &SimConfig) -> Result<Vec<ComparisonRow>> {
    let smc_cfg = SimConfig {
        scheme: Scheme::Smc,
        comp_points: 1,
        ..base.clone()
    };
    let svc_m = (base.m * base.m / 2).max(1);
    let svc_cfg = SimConfig {
        scheme: Scheme::Svc,
        m: svc_m,
        comp_points: 1,
        allow_expansion: true,
        ..base.clone()
    };
    let smc = run_sweep(&smc_cfg)?;
    let svc = run_sweep(&svc_cfg)?;
    let bits = capacity_bits(base.n, base.k)?;
    Ok(smc
        .points
        .iter()
        .zip(&svc.points)
        .map(|(a, b)| ComparisonRow {
            snr_db: a.snr_db,
            smc_bler: a.bler,
            svc_bler: b.bler,
            bits_per_user: bits,
            smc_channel_uses: base.m * base.m,
            svc_channel_uses_per_user: svc_m,
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small(scheme: Scheme) -> SimConfig {
        SimConfig {
            scheme,
            m: 8,
            n: 16,
            k: 2,
            snr_db: vec![f64::INFINITY, 0.0, 10.0],
            trials: 200,
            ..SimConfig::default()
        }
    }

    #[test]
    fn noiseless_points_have_no_errors() {
        for scheme in [Scheme::Svc, Scheme::Smc, Scheme::SmcDual, Scheme::SmcFused] {
            let res = run_sweep(&SimConfig {
                m: 16,
                n: 32,
                snr_db: vec![f64::INFINITY],
                ..small(scheme)
            })
            .unwrap();
            assert_eq!(res.points[0].sigma2, 0.0);
            assert_eq!(res.points[0].frame_errors, 0, "{scheme}");
        }
    }

    #[test]
    fn smc_noiseless_at_high_coherence() {
        for scheme in [Scheme::Smc, Scheme::SmcDual, Scheme::SmcFused] {
            let res = run_sweep(&SimConfig {
                snr_db: vec![f64::INFINITY],
                ..small(scheme)
            })
            .unwrap();
            assert_eq!(res.points[0].frame_errors, 0, "{scheme}");
        }
    }

    #[test]
    fn counts_are_consistent() {
        let res = run_sweep(&small(Scheme::Smc)).unwrap();
        for p in &res.points {
            assert!(p.frame_errors <= p.trials);
            assert!(p.user1_errors.max(p.user2_errors) <= p.frame_errors);
            assert!(p.frame_errors <= p.user1_errors + p.user2_errors);
            assert!((0.0..=1.0).contains(&p.bler));
            assert!(p.bound_bler.is_some());
        }
        let svc = run_sweep(&small(Scheme::Svc)).unwrap();
        assert!(svc
            .points
            .iter()
            .all(|p| p.bound_bler.is_none() && p.user2_errors == 0));
    }

    #[test]
    fn csv_layout_and_worker_independence() {
        let one = run_sweep(&SimConfig {
            workers: 1,
            ..small(Scheme::SmcFused)
        })
        .unwrap();
        let many = run_sweep(&SimConfig {
            workers: 4,
            ..small(Scheme::SmcFused)
        })
        .unwrap();
        let csv = one.to_csv();
        assert_eq!(csv.lines().next().unwrap().split(',').count(), 15);
        assert_eq!(csv.lines().count(), 4);
        // Only the worker count (not part of the CSV) and timing differ.
        assert_eq!(strip_wall_time(&csv), strip_wall_time(&many.to_csv()));
        let json: serde_json::Value = serde_json::from_str(&one.to_json()).unwrap();
        assert_eq!(json["points"].as_array().unwrap().len(), 3);
    }

    #[test]
    fn invalid_config_rejected_before_running() {
        let bad = SimConfig {
            trials: 0,
            comp_points: 0,
            ..small(Scheme::Smc)
        };
        assert!(matches!(run_sweep(&bad), Err(crate::SmcError::Config(p)) if p.len() == 2));
    }

    #[test]
    fn comparison_reports_equal_payloads() {
        let rows = run_comparison(&SimConfig {
            snr_db: vec![0.0],
            trials: 50,
            ..small(Scheme::Smc)
        })
        .unwrap();
        assert_eq!(rows.len(), 1);
        assert_eq!(rows[0].bits_per_user, 6);
        assert_eq!(rows[0].smc_channel_uses, 64);
        assert_eq!(rows[0].svc_channel_uses_per_user * 2, 64);
    }
}
