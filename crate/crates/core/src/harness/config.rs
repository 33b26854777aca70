//! Simulation configuration and its flat `key = value` file format.
//!
//! ```text
//! # comments start with '#'
//! scheme = smc            # svc | smc | smc-dual | smc-fused
//! m = 16
//! n = 32
//! k = 2
//! snr_db = 0, 5, 10, 15   # 'inf' gives a noiseless point
//! trials = 10000
//! channel = rayleigh      # rayleigh | awgn | real-gaussian
//! seed = 1
//! comp_points = 1         # > 1 only with scheme = smc
//! bound_variant = exact-expectation
//! score_rule = energy     # energy | signed-sum
//! workers = 0             # 0 = all cores
//! allow_expansion = false # permit m > n
//! ```

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::analysis::BoundVariant;
use crate::channel::ChannelMode;
use crate::codec::capacity_bits;
use crate::decoder::ScoreRule;
use crate::error::{Result, SmcError};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Scheme {
    Svc,
    Smc,
    SmcDual,
    SmcFused,
}

impl Scheme {
    pub fn as_str(&self) -> &'static str {
        match self {
            Scheme::Svc => "svc",
            Scheme::Smc => "smc",
            Scheme::SmcDual => "smc-dual",
            Scheme::SmcFused => "smc-fused",
        }
    }

    pub fn is_smc(&self) -> bool {
        !matches!(self, Scheme::Svc)
    }
}

impl fmt::Display for Scheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Scheme {
    type Err = SmcError;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "svc" => Ok(Scheme::Svc),
            "smc" => Ok(Scheme::Smc),
            "smc-dual" | "smc_dual" => Ok(Scheme::SmcDual),
            "smc-fused" | "smc_fused" => Ok(Scheme::SmcFused),
            other => Err(SmcError::Validation(format!("unknown scheme {other:?}"))),
        }
    }
}

impl FromStr for ScoreRule {
    type Err = SmcError;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "energy" => Ok(ScoreRule::Energy),
            "signed-sum" | "signed_sum" => Ok(ScoreRule::SignedSum),
            other => Err(SmcError::Validation(format!(
                "unknown score rule {other:?}"
            ))),
        }
    }
}

impl fmt::Display for ScoreRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ScoreRule::Energy => "energy",
            ScoreRule::SignedSum => "signed-sum",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SimConfig {
    pub scheme: Scheme,
    pub m: usize,
    pub n: usize,
    pub k: usize,
    pub snr_db: Vec<f64>,
    pub trials: u64,
    pub channel: ChannelMode,
    pub seed: u64,
    pub comp_points: usize,
    pub bound_variant: BoundVariant,
    pub score_rule: ScoreRule,
    /// Worker threads, `0` for the rayon default.
    pub workers: usize,
    pub allow_expansion: bool,
}

impl Default for SimConfig {
    fn default() -> Self {
        Self {
            scheme: Scheme::Smc,
            m: 16,
            n: 32,
            k: 2,
            snr_db: vec![0.0, 5.0, 10.0, 15.0, 20.0],
            trials: 10_000,
            channel: ChannelMode::Rayleigh,
            seed: 1,
            comp_points: 1,
            bound_variant: BoundVariant::ExactExpectation,
            score_rule: ScoreRule::Energy,
            workers: 0,
            allow_expansion: false,
        }
    }
}

impl SimConfig {
    /// Every violated constraint, not just the first.
    pub fn problems(&self) -> Vec<String> {
        let mut out = Vec::new();
        if self.m == 0 {
            out.push("m must be positive".to_string());
        }
        if self.n == 0 {
            out.push("n must be positive".to_string());
        }
        if self.k == 0 || self.k > self.n {
            out.push(format!(
                "k = {} must satisfy 1 <= k <= n = {}",
                self.k, self.n
            ));
        } else {
            match capacity_bits(self.n, self.k) {
                Ok(0) => out.push(format!(
                    "C({}, {}) = 1 carries no payload bits",
                    self.n, self.k
                )),
                Ok(_) => {}
                Err(e) => out.push(e.to_string()),
            }
        }
        if self.m > self.n && !self.allow_expansion {
            out.push(format!(
                "m = {} exceeds n = {}; set allow_expansion = true to permit it",
                self.m, self.n
            ));
        }
        if self.trials == 0 {
            out.push("trials must be at least 1".to_string());
        }
        if self.snr_db.is_empty() {
            out.push("snr_db list is empty".to_string());
        }
        if self.snr_db.iter().any(|s| s.is_nan()) {
            out.push("snr_db contains NaN".to_string());
        }
        if self.comp_points == 0 {
            out.push("comp_points must be at least 1".to_string());
        }
        if self.comp_points > 1 && self.scheme != Scheme::Smc {
            out.push(format!(
                "comp_points = {} requires scheme = smc, got {}",
                self.comp_points, self.scheme
            ));
        }
        out
    }

    pub fn validate(&self) -> Result<()> {
        let problems = self.problems();
        if problems.is_empty() {
            Ok(())
        } else {
            Err(SmcError::Config(problems))
        }
    }

    /// Parses the flat key/value format; unknown keys and bad values are
    /// collected and reported together.
    pub fn parse(text: &str) -> Result<Self> {
        let mut cfg = SimConfig::default();
        let mut problems = Vec::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let Some((key, value)) = line.split_once('=').or_else(|| line.split_once(':')) else {
                problems.push(format!("line {}: expected key = value", lineno + 1));
                continue;
            };
            let key = key.trim().to_ascii_lowercase();
            let value = value.trim();
            if let Err(e) = cfg.set(&key, value) {
                problems.push(format!("line {}: {e}", lineno + 1));
            }
        }
        if !problems.is_empty() {
            return Err(SmcError::Config(problems));
        }
        cfg.validate()?;
        Ok(cfg)
    }

    fn set(&mut self, key: &str, value: &str) -> std::result::Result<(), String> {
        fn num<T: FromStr>(key: &str, v: &str) -> std::result::Result<T, String> {
            v.parse().map_err(|_| format!("{key}: cannot parse {v:?}"))
        }
        match key {
            "scheme" => self.scheme = value.parse().map_err(|e: SmcError| e.to_string())?,
            "m" => self.m = num(key, value)?,
            "n" => self.n = num(key, value)?,
            "k" => self.k = num(key, value)?,
            "snr_db" | "snr_db_list" => {
                self.snr_db = value
                    .split([',', ' '])
                    .filter(|s| !s.trim().is_empty())
                    .map(|s| num::<f64>(key, s.trim()))
                    .collect::<std::result::Result<_, _>>()?
            }
            "trials" | "trials_per_point" => self.trials = num(key, value)?,
            "channel" => self.channel = value.parse().map_err(|e: SmcError| e.to_string())?,
            "seed" | "master_seed" => self.seed = num(key, value)?,
            "comp_points" | "j" => self.comp_points = num(key, value)?,
            "bound_variant" => {
                self.bound_variant = value.parse().map_err(|e: SmcError| e.to_string())?
            }
            "score_rule" => self.score_rule = value.parse().map_err(|e: SmcError| e.to_string())?,
            "workers" => self.workers = num(key, value)?,
            "allow_expansion" => self.allow_expansion = num(key, value)?,
            other => return Err(format!("unknown key {other:?}")),
        }
        Ok(())
    }

    /// Round-trippable text form.
    pub fn to_text(&self) -> String {
        let snr: Vec<String> = self.snr_db.iter().map(|s| s.to_string()).collect();
        format!(
            "scheme = {}\nm = {}\nn = {}\nk = {}\nsnr_db = {}\ntrials = {}\nchannel = {}\nseed = {}\n\
             comp_points = {}\nbound_variant = {}\nscore_rule = {}\nworkers = {}\nallow_expansion = {}\n",
            self.scheme,
            self.m,
            self.n,
            self.k,
            snr.join(", "),
            self.trials,
            self.channel,
            self.seed,
            self.comp_points,
            self.bound_variant,
            self.score_rule,
            self.workers,
            self.allow_expansion
        )
    }
}
