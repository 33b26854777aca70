//! Transmission model `Y = diag(h) A X A^H + N` and channel sampling.

use std::fmt;
use std::str::FromStr;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::codec::{SmcCodeword, SvcCodeword};
use crate::dictionary::Dictionary;
use crate::error::{Result, SmcError};
use crate::rng::{hash_words, stream_rng, Stream};

/// Fading model for the per-resource gains `h`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ChannelMode {
    /// `h_i ~ CN(0, 1)`, complex noise.
    Rayleigh,
    /// `h = 1`, complex noise.
    Awgn,
    /// `h_i ~ N(0, 1)` real, real noise of variance `sigma2 / 2`.
    RealGaussian,
}

impl ChannelMode {
    pub fn as_str(&self) -> &'static str {
        match self {
            ChannelMode::Rayleigh => "rayleigh",
            ChannelMode::Awgn => "awgn",
            ChannelMode::RealGaussian => "real-gaussian",
        }
    }

    pub fn is_real(&self) -> bool {
        matches!(self, ChannelMode::RealGaussian)
    }
}

impl fmt::Display for ChannelMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ChannelMode {
    type Err = SmcError;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "rayleigh" => Ok(ChannelMode::Rayleigh),
            "awgn" => Ok(ChannelMode::Awgn),
            "real-gaussian" | "real_gaussian" | "realgaussian" => Ok(ChannelMode::RealGaussian),
            other => Err(SmcError::Validation(format!(
                "unknown channel mode {other:?}"
            ))),
        }
    }
}

/// Fading gains and noise level seen by one receiver.
#[derive(Debug, Clone, PartialEq)]
pub struct ChannelRealization {
    pub h: Vec<Complex64>,
    pub sigma2: f64,
    pub mode: ChannelMode,
}

impl ChannelRealization {
    pub fn new(h: Vec<Complex64>, sigma2: f64, mode: ChannelMode) -> Result<Self> {
        if sigma2.is_nan() || sigma2 < 0.0 {
            return Err(SmcError::Domain(format!("sigma2 = {sigma2} must be >= 0")));
        }
        Ok(Self { h, sigma2, mode })
    }

    /// All-ones gains.
    pub fn flat(m: usize, sigma2: f64) -> Result<Self> {
        Self::new(vec![Complex64::new(1.0, 0.0); m], sigma2, ChannelMode::Awgn)
    }

    pub fn with_sigma2(mut self, sigma2: f64) -> Result<Self> {
        if sigma2.is_nan() || sigma2 < 0.0 {
            return Err(SmcError::Domain(format!("sigma2 = {sigma2} must be >= 0")));
        }
        self.sigma2 = sigma2;
        Ok(self)
    }

    pub fn len(&self) -> usize {
        self.h.len()
    }

    pub fn is_empty(&self) -> bool {
        self.h.is_empty()
    }

    pub fn gain_energy(&self) -> f64 {
        self.h.iter().map(|z| z.norm_sqr()).sum()
    }
}

/// One coordinated point's observation of the shared codeword.
#[derive(Debug, Clone, PartialEq)]
pub struct CompView {
    pub y: DMatrix<Complex64>,
    pub h: Vec<Complex64>,
}

/// Received `m x m` observation with the CSI the decoder is given.
#[derive(Debug, Clone, PartialEq)]
pub struct ReceivedFrame {
    pub y: DMatrix<Complex64>,
    pub channel: ChannelRealization,
    /// Extra views in CoMP mode; empty otherwise. The first view duplicates `y`.
    pub comp_views: Vec<CompView>,
}

impl ReceivedFrame {
    /// All views, the primary one first.
    pub fn views(&self) -> Vec<CompView> {
        if self.comp_views.is_empty() {
            vec![CompView {
                y: self.y.clone(),
                h: self.channel.h.clone(),
            }]
        } else {
            self.comp_views.clone()
        }
    }
}

fn std_normal<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    rng.sample::<f64, _>(StandardNormal)
}

/// Fading gains for `(seed, trial)`, sigma2 set to zero.
pub fn sample_channel(m: usize, mode: ChannelMode, seed: u64, trial: u64) -> ChannelRealization {
    let mut rng = stream_rng(seed, trial, Stream::Channel);
    let half = std::f64::consts::FRAC_1_SQRT_2;
    let h = (0..m)
        .map(|_| match mode {
            ChannelMode::Awgn => Complex64::new(1.0, 0.0),
            ChannelMode::Rayleigh => {
                let re = std_normal(&mut rng) * half;
                let im = std_normal(&mut rng) * half;
                Complex64::new(re, im)
            }
            ChannelMode::RealGaussian => Complex64::new(std_normal(&mut rng), 0.0),
        })
        .collect();
    ChannelRealization {
        h,
        sigma2: 0.0,
        mode,
    }
}

/// Noise sample of variance `sigma2`: complex with `sigma2 / 2` per part, or
/// real with variance `sigma2 / 2` in the real model.
pub fn noise_sample<R: Rng + ?Sized>(rng: &mut R, sigma2: f64, real: bool) -> Complex64 {
    let sd = (sigma2 / 2.0).sqrt();
    if real {
        Complex64::new(std_normal(rng) * sd, 0.0)
    } else {
        let re = std_normal(rng) * sd;
        let im = std_normal(rng) * sd;
        Complex64::new(re, im)
    }
}

/// Noiseless image `diag(h) A X A^H`.
pub fn noiseless_image(
    x: &SmcCodeword,
    a: &Dictionary,
    h: &[Complex64],
) -> Result<DMatrix<Complex64>> {
    let (m, n) = (a.rows(), a.cols());
    if x.dim != n {
        return Err(SmcError::Dimension(format!(
            "codeword dimension {} does not match dictionary columns {n}",
            x.dim
        )));
    }
    if h.len() != m {
        return Err(SmcError::Dimension(format!(
            "channel length {} does not match dictionary rows {m}",
            h.len()
        )));
    }
    let mut y = DMatrix::<Complex64>::zeros(m, m);
    for &(r, c, v) in &x.entries {
        let left: DVector<Complex64> = DVector::from_fn(m, |i, _| h[i] * a.get(i, r) * v);
        let right = a.matrix().column(c);
        y += left * right.adjoint();
    }
    Ok(y)
}

fn add_noise(y: &mut DMatrix<Complex64>, sigma2: f64, real: bool, seed: u64, trial: u64) {
    if sigma2 == 0.0 {
        return;
    }
    let mut rng = stream_rng(seed, trial, Stream::Noise);
    // Row-major order so the stream layout does not depend on storage order.
    for i in 0..y.nrows() {
        for j in 0..y.ncols() {
            y[(i, j)] += noise_sample(&mut rng, sigma2, real);
        }
    }
}

/// Single-receiver SMC transmission.
pub fn transmit(
    x: &SmcCodeword,
    a: &Dictionary,
    ch: &ChannelRealization,
    seed: u64,
    trial: u64,
) -> Result<ReceivedFrame> {
    let mut y = noiseless_image(x, a, &ch.h)?;
    add_noise(&mut y, ch.sigma2, ch.mode.is_real(), seed, trial);
    Ok(ReceivedFrame {
        y,
        channel: ch.clone(),
        comp_views: Vec::new(),
    })
}

/// Seed of CoMP view `view`; view 0 keeps the base seed.
pub fn view_seed(seed: u64, view: usize) -> u64 {
    if view == 0 {
        seed
    } else {
        hash_words(&[seed, view as u64])
    }
}

/// `points` independent fading and noise views of the same codeword.
pub fn transmit_comp(
    x: &SmcCodeword,
    a: &Dictionary,
    mode: ChannelMode,
    sigma2: f64,
    points: usize,
    seed: u64,
    trial: u64,
) -> Result<ReceivedFrame> {
    if points == 0 {
        return Err(SmcError::Validation("CoMP needs at least one point".into()));
    }
    let mut views = Vec::with_capacity(points);
    let mut first = None;
    for j in 0..points {
        let s = view_seed(seed, j);
        let ch = sample_channel(a.rows(), mode, s, trial).with_sigma2(sigma2)?;
        let frame = transmit(x, a, &ch, s, trial)?;
        views.push(CompView {
            y: frame.y.clone(),
            h: ch.h.clone(),
        });
        if first.is_none() {
            first = Some(frame);
        }
    }
    let mut frame = first.expect("points >= 1");
    if points > 1 {
        frame.comp_views = views;
    }
    Ok(frame)
}

/// SVC transmission `y = h . (A s) + n`.
pub fn svc_transmit(
    s: &SvcCodeword,
    a: &Dictionary,
    ch: &ChannelRealization,
    seed: u64,
    trial: u64,
) -> Result<Vec<Complex64>> {
    let m = a.rows();
    if s.length != a.cols() || ch.h.len() != m {
        return Err(SmcError::Dimension(format!(
            "SVC codeword length {} / channel length {} vs dictionary {m} x {}",
            s.length,
            ch.h.len(),
            a.cols()
        )));
    }
    let mut y = vec![Complex64::new(0.0, 0.0); m];
    for (&j, &v) in s.support.iter().zip(&s.values) {
        for (i, yi) in y.iter_mut().enumerate() {
            *yi += ch.h[i] * a.get(i, j) * v;
        }
    }
    if ch.sigma2 > 0.0 {
        let mut rng = stream_rng(seed, trial, Stream::Noise);
        for yi in &mut y {
            *yi += noise_sample(&mut rng, ch.sigma2, ch.mode.is_real());
        }
    }
    Ok(y)
}

pub fn db_to_linear(db: f64) -> f64 {
    10f64.powf(db / 10.0)
}

/// Analytic mean received power per entry of `A X A^H` with unit values and
/// unit-power fading: `K * (mean |a_ij|^2)^2`, i.e. `K / m^2` for `+-1/sqrt(m)`.
pub fn smc_rx_power(a: &Dictionary, k: usize) -> f64 {
    let p = a.mean_entry_power();
    k as f64 * p * p
}

/// Analytic mean received power per entry of `A s`: `K * mean |a_ij|^2`.
pub fn svc_rx_power(a: &Dictionary, k: usize) -> f64 {
    k as f64 * a.mean_entry_power()
}

/// Noise variance for a per-entry SNR of `snr_db` on an SMC frame.
pub fn snr_to_sigma2(snr_db: f64, a: &Dictionary, k: usize) -> f64 {
    smc_rx_power(a, k) / db_to_linear(snr_db)
}

/// Noise variance for a per-entry SNR of `snr_db` on an SVC vector.
pub fn svc_snr_to_sigma2(snr_db: f64, a: &Dictionary, k: usize) -> f64 {
    svc_rx_power(a, k) / db_to_linear(snr_db)
}

#[cfg(test)]
#[allow(clippy::needless_range_loop)]
mod tests {
    use super::*;
    use crate::codec::{capacity_bits, smc_encode, Payload};
    use crate::rng::stream_rng;

    /// Triple product by explicit index loops, independent of nalgebra.
    fn naive_image(x: &SmcCodeword, a: &Dictionary, h: &[Complex64]) -> Vec<Vec<Complex64>> {
        let (m, n) = (a.rows(), a.cols());
        let xd = x.to_dense();
        let zero = Complex64::new(0.0, 0.0);
        let mut ax = vec![vec![zero; n]; m];
        for i in 0..m {
            for j in 0..n {
                for l in 0..n {
                    ax[i][j] += a.get(i, l) * xd[(l, j)];
                }
            }
        }
        let mut out = vec![vec![zero; m]; m];
        for i in 0..m {
            for j in 0..m {
                for l in 0..n {
                    out[i][j] += ax[i][l] * a.get(j, l).conj();
                }
                out[i][j] *= h[i];
            }
        }
        out
    }

    fn random_codeword(n: usize, k: usize, seed: u64) -> SmcCodeword {
        let mut rng = stream_rng(seed, 0, Stream::Payload);
        let bits = capacity_bits(n, k).unwrap();
        let p1 = Payload::random(bits, &mut rng);
        let p2 = Payload::random(bits, &mut rng);
        smc_encode(&p1, &p2, n, k).unwrap()
    }

    #[test]
    fn awgn_gains_are_ones_and_sampling_is_deterministic() {
        let ch = sample_channel(4, ChannelMode::Awgn, 3, 9);
        assert_eq!(ch.h, vec![Complex64::new(1.0, 0.0); 4]);
        let a = sample_channel(6, ChannelMode::Rayleigh, 3, 9);
        let b = sample_channel(6, ChannelMode::Rayleigh, 3, 9);
        assert_eq!(a, b);
        assert_ne!(a, sample_channel(6, ChannelMode::Rayleigh, 3, 10));
        let r = sample_channel(6, ChannelMode::RealGaussian, 3, 9);
        assert!(r.h.iter().all(|z| z.im == 0.0));
    }

    #[test]
    fn rayleigh_mean_energy_oracle() {
        let trials = 100_000u64;
        let mean = (0..trials)
            .map(|t| sample_channel(2, ChannelMode::Rayleigh, 11, t).gain_energy())
            .sum::<f64>()
            / trials as f64;
        assert!((mean - 2.0).abs() / 2.0 < 0.02, "mean {mean}");
    }

    #[test]
    fn zero_codeword_without_noise_gives_zero() {
        let a = Dictionary::generate_bernoulli(4, 8, 1).unwrap();
        let x = SmcCodeword {
            dim: 8,
            entries: vec![],
            payload1: Payload::new(0, 0).unwrap(),
            payload2: Payload::new(0, 0).unwrap(),
        };
        let ch = ChannelRealization::flat(4, 0.0).unwrap();
        let frame = transmit(&x, &a, &ch, 0, 0).unwrap();
        assert!(frame.y.iter().all(|z| *z == Complex64::new(0.0, 0.0)));
    }

    #[test]
    fn noiseless_transmit_matches_naive_oracle() {
        for inst in 0..100u64 {
            let a = Dictionary::generate_bernoulli(8, 12, inst).unwrap();
            let x = random_codeword(12, 1 + (inst as usize % 3), inst);
            let ch = sample_channel(8, ChannelMode::Rayleigh, inst, 1);
            let frame = transmit(&x, &a, &ch, inst, 1).unwrap();
            let oracle = naive_image(&x, &a, &ch.h);
            let mut diff = 0.0;
            let mut norm = 0.0;
            for i in 0..8 {
                for j in 0..8 {
                    diff += (frame.y[(i, j)] - oracle[i][j]).norm_sqr();
                    norm += oracle[i][j].norm_sqr();
                }
            }
            assert!(diff.sqrt() <= 1e-12 * norm.sqrt());
        }
    }

    #[test]
    fn single_entry_is_outer_product_of_columns() {
        let a = Dictionary::generate_bernoulli(4, 8, 5).unwrap();
        let x = SmcCodeword::from_supports(8, &[2], &[5]).unwrap();
        let ch = ChannelRealization::flat(4, 0.0).unwrap();
        let y = transmit(&x, &a, &ch, 0, 0).unwrap().y;
        for i in 0..4 {
            for j in 0..4 {
                assert!((y[(i, j)] - a.get(i, 2) * a.get(j, 5).conj()).norm() < 1e-15);
            }
        }
    }

    #[test]
    fn dimension_mismatch_rejected() {
        let a = Dictionary::generate_bernoulli(4, 8, 5).unwrap();
        let x = SmcCodeword::from_supports(6, &[2], &[3]).unwrap();
        let ch = ChannelRealization::flat(4, 0.0).unwrap();
        assert!(matches!(
            transmit(&x, &a, &ch, 0, 0),
            Err(SmcError::Dimension(_))
        ));
        let x = SmcCodeword::from_supports(8, &[2], &[5]).unwrap();
        let ch = ChannelRealization::flat(3, 0.0).unwrap();
        assert!(matches!(
            transmit(&x, &a, &ch, 0, 0),
            Err(SmcError::Dimension(_))
        ));
    }

    #[test]
    fn transmit_is_linear_in_the_codeword() {
        let a = Dictionary::generate_bernoulli(6, 10, 2).unwrap();
        let ch = sample_channel(6, ChannelMode::Rayleigh, 2, 4);
        let x1 = SmcCodeword::from_supports(10, &[1, 4], &[0, 7]).unwrap();
        let x2 = SmcCodeword::from_supports(10, &[3], &[2]).unwrap();
        let mut sum = x1.clone();
        sum.entries.extend(x2.entries.iter().copied());
        let y1 = noiseless_image(&x1, &a, &ch.h).unwrap();
        let y2 = noiseless_image(&x2, &a, &ch.h).unwrap();
        let ys = noiseless_image(&sum, &a, &ch.h).unwrap();
        assert!((ys - (y1 + y2)).norm() < 1e-14);
    }

    #[test]
    fn noise_statistics() {
        let sigma2 = 0.7;
        let mut rng = stream_rng(5, 0, Stream::Noise);
        let samples: Vec<Complex64> = (0..100_000)
            .map(|_| noise_sample(&mut rng, sigma2, false))
            .collect();
        let n = samples.len() as f64;
        let mean = samples.iter().sum::<Complex64>() / n;
        let var = samples.iter().map(|z| (z - mean).norm_sqr()).sum::<f64>() / (n - 1.0);
        assert!((var - sigma2).abs() / sigma2 < 0.03, "var {var}");
        let mre = samples.iter().map(|z| z.re).sum::<f64>() / n;
        let mim = samples.iter().map(|z| z.im).sum::<f64>() / n;
        let cov = samples
            .iter()
            .map(|z| (z.re - mre) * (z.im - mim))
            .sum::<f64>()
            / n;
        let sre = (samples.iter().map(|z| (z.re - mre).powi(2)).sum::<f64>() / n).sqrt();
        let sim = (samples.iter().map(|z| (z.im - mim).powi(2)).sum::<f64>() / n).sqrt();
        assert!((cov / (sre * sim)).abs() < 0.02);
    }

    #[test]
    fn transmit_noise_is_deterministic() {
        let a = Dictionary::generate_bernoulli(4, 8, 5).unwrap();
        let x = SmcCodeword::from_supports(8, &[2], &[5]).unwrap();
        let ch = sample_channel(4, ChannelMode::Rayleigh, 1, 1)
            .with_sigma2(0.3)
            .unwrap();
        let f1 = transmit(&x, &a, &ch, 1, 1).unwrap();
        let f2 = transmit(&x, &a, &ch, 1, 1).unwrap();
        assert_eq!(f1, f2);
        assert_ne!(f1.y, transmit(&x, &a, &ch, 1, 2).unwrap().y);
    }

    #[test]
    fn snr_conversions() {
        assert!((1.0 / db_to_linear(0.0) - 1.0).abs() < 1e-15);
        assert!((1.0 / db_to_linear(10.0) - 0.1).abs() < 1e-15);
        let a = Dictionary::generate_bernoulli(16, 32, 1).unwrap();
        assert!((smc_rx_power(&a, 2) - 2.0 / 256.0).abs() < 1e-15);
        assert!((snr_to_sigma2(10.0, &a, 2) - 2.0 / 2560.0).abs() < 1e-15);
        assert!((svc_snr_to_sigma2(0.0, &a, 2) - 2.0 / 16.0).abs() < 1e-15);
    }

    #[test]
    fn analytic_rx_power_matches_monte_carlo() {
        let a = Dictionary::generate_bernoulli(16, 32, 1).unwrap();
        let ones = vec![Complex64::new(1.0, 0.0); 16];
        let trials = 10_000u64;
        let mut acc = 0.0;
        for t in 0..trials {
            let x = random_codeword(32, 2, t);
            let y = noiseless_image(&x, &a, &ones).unwrap();
            acc += y.iter().map(|z| z.norm_sqr()).sum::<f64>() / 256.0;
        }
        let mc = acc / trials as f64;
        let analytic = smc_rx_power(&a, 2);
        assert!(
            (mc - analytic).abs() / analytic < 0.02,
            "mc {mc} analytic {analytic}"
        );
    }

    #[test]
    fn comp_views_share_codeword() {
        let a = Dictionary::generate_bernoulli(4, 8, 5).unwrap();
        let x = SmcCodeword::from_supports(8, &[2], &[5]).unwrap();
        let single = transmit_comp(&x, &a, ChannelMode::Rayleigh, 0.1, 1, 3, 4).unwrap();
        assert!(single.comp_views.is_empty());
        let multi = transmit_comp(&x, &a, ChannelMode::Rayleigh, 0.1, 3, 3, 4).unwrap();
        assert_eq!(multi.comp_views.len(), 3);
        assert_eq!(multi.comp_views[0].y, single.y);
        assert_ne!(multi.comp_views[1].h, multi.comp_views[0].h);
        assert!(transmit_comp(&x, &a, ChannelMode::Rayleigh, 0.1, 0, 3, 4).is_err());
    }
}
