//! Closed-form reliability bound for block-greedy SMC decoding, its
//! supporting identities, and code efficiency.
//!
//! For the selected block `t` and any competitor `i`, the matched and
//! mismatched block correlations are `beta_tt = m` and `beta_ti = m * mu`.
//! With `S = sum_k s_k`, define
//!
//! ```text
//! a = (beta_tt - beta_ti)^2 S^2 / (2 sigma^2)
//! c = beta_tt^2 S^2 / sigma^2
//! P(block) >= (1 - a^-m - c^-m)^n          (literal)
//! P(block) >= (1 - (1+a)^-m - (1+c)^-m)^n  (chi-squared expectation applied)
//! BLER     <= 1 - P(block)^K
//! ```

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use statrs::function::erf::erfc;

use crate::codec::capacity_bits;
use crate::dictionary::Dictionary;
use crate::error::{Result, SmcError};
use crate::harness::Scheme;

/// `E[exp(-alpha X)]` for `X ~ Gamma(m, 1)`, i.e. `||h||^2` with `h ~ CN(0, I_m)`.
pub fn chi_sq_exp(alpha: f64, m: u32) -> f64 {
    (1.0 + alpha).powi(-(m as i32))
}

/// Gaussian tail `Q(x) = P(Z > x)`.
pub fn q_function(x: f64) -> f64 {
    0.5 * erfc(x / std::f64::consts::SQRT_2)
}

/// Which form of the final expectation the bound uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BoundVariant {
    /// `a^-m`, `c^-m` without the `+1`; diverges for `a < 1` before clamping.
    Literal,
    /// `(1+a)^-m`, `(1+c)^-m` from the exact chi-squared expectation.
    #[default]
    ExactExpectation,
}

impl BoundVariant {
    pub fn as_str(&self) -> &'static str {
        match self {
            BoundVariant::Literal => "literal",
            BoundVariant::ExactExpectation => "exact-expectation",
        }
    }
}

impl fmt::Display for BoundVariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for BoundVariant {
    type Err = SmcError;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "literal" => Ok(BoundVariant::Literal),
            "exact-expectation" | "exact" => Ok(BoundVariant::ExactExpectation),
            other => Err(SmcError::Validation(format!(
                "unknown bound variant {other:?}"
            ))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BoundParams {
    pub m: usize,
    pub n: usize,
    pub k: usize,
    pub mu: f64,
    pub s_sum: f64,
    pub sigma2: f64,
    pub variant: BoundVariant,
}

impl BoundParams {
    pub fn new(
        m: usize,
        n: usize,
        k: usize,
        mu: f64,
        s_sum: f64,
        sigma2: f64,
        variant: BoundVariant,
    ) -> Result<Self> {
        let mut problems = Vec::new();
        if m == 0 || n == 0 {
            problems.push(format!("m = {m} and n = {n} must be positive"));
        }
        if !(0.0..1.0).contains(&mu) {
            problems.push(format!("mu = {mu} must lie in [0, 1)"));
        }
        if s_sum.is_nan() || s_sum < 0.0 {
            problems.push(format!("s_sum = {s_sum} must be non-negative"));
        }
        if sigma2.is_nan() || sigma2 < 0.0 {
            problems.push(format!("sigma2 = {sigma2} must be non-negative"));
        }
        if !problems.is_empty() {
            return Err(SmcError::Validation(problems.join("; ")));
        }
        Ok(Self {
            m,
            n,
            k,
            mu,
            s_sum,
            sigma2,
            variant,
        })
    }

    /// Unit sparse values, so `sum_k s_k = K`.
    pub fn unit_values(
        m: usize,
        n: usize,
        k: usize,
        mu: f64,
        sigma2: f64,
        variant: BoundVariant,
    ) -> Result<Self> {
        Self::new(m, n, k, mu, k as f64, sigma2, variant)
    }

    /// Matched block correlation `beta_tt = m`.
    pub fn beta_matched(&self) -> f64 {
        self.m as f64
    }

    /// Mismatched block correlation `beta_ti = m * mu`.
    pub fn beta_mismatched(&self) -> f64 {
        self.m as f64 * self.mu
    }

    /// `(a, c)` before the variant-specific exponent.
    pub fn exponent_terms(&self) -> (f64, f64) {
        let s2 = self.s_sum * self.s_sum;
        let gap = self.beta_matched() - self.beta_mismatched();
        let a = gap * gap * s2 / (2.0 * self.sigma2);
        let c = self.beta_matched().powi(2) * s2 / self.sigma2;
        (a, c)
    }
}

/// Per-block success probability lower bound, clamped to `[0, 1]`.
pub fn block_success_prob(p: &BoundParams) -> f64 {
    if p.sigma2 == 0.0 {
        return 1.0;
    }
    let (a, c) = p.exponent_terms();
    let m = p.m as i32;
    let (ta, tc) = match p.variant {
        BoundVariant::Literal => (a.powi(-m), c.powi(-m)),
        BoundVariant::ExactExpectation => (chi_sq_exp(a, p.m as u32), chi_sq_exp(c, p.m as u32)),
    };
    let base = (1.0 - ta - tc).clamp(0.0, 1.0);
    base.powi(p.n as i32).clamp(0.0, 1.0)
}

/// BLER upper bound `1 - P(block)^K`, i.e. the per-block exponent `n` times `K`.
pub fn bler_upper_bound(p: &BoundParams) -> f64 {
    if p.k == 0 {
        return 0.0;
    }
    (1.0 - block_success_prob(p).powi(p.k as i32)).clamp(0.0, 1.0)
}

/// Block inner product `sum_k <phi_i^(k), phi_j^(k)>` between blocks of the
/// expanded dictionary `(h . A) (x) I_m`. When `normalized`, each expanded
/// column is scaled to unit norm first. Only the `m` diagonal copies of the
/// atom pair contribute, so this is `m` times the atom inner product.
pub fn block_correlation(
    a: &Dictionary,
    h: &[Complex64],
    i: usize,
    j: usize,
    normalized: bool,
) -> Result<Complex64> {
    let m = a.rows();
    if h.len() != m || i >= a.cols() || j >= a.cols() {
        return Err(SmcError::Dimension(format!(
            "blocks ({i}, {j}) / channel length {} vs dictionary {m} x {}",
            h.len(),
            a.cols()
        )));
    }
    let ui: Vec<Complex64> = (0..m).map(|r| h[r] * a.get(r, i)).collect();
    let uj: Vec<Complex64> = (0..m).map(|r| h[r] * a.get(r, j)).collect();
    let mut dot: Complex64 = ui.iter().zip(&uj).map(|(x, y)| x.conj() * y).sum();
    if normalized {
        let ni = ui.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        let nj = uj.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if ni == 0.0 || nj == 0.0 {
            return Err(SmcError::DegenerateChannel(if ni == 0.0 { i } else { j }));
        }
        dot /= ni * nj;
    }
    Ok(dot * m as f64)
}

/// Payload size and spectral cost of one frame.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Efficiency {
    pub bits_per_user: u32,
    pub users: u32,
    pub total_bits: u32,
    pub channel_uses: usize,
    pub bits_per_use: f64,
}

/// SVC sends one user's `floor(log2 C(n,K))` bits over `m` resources; SMC
/// sends two users' bits over the `m x m` grid.
pub fn efficiency(n: usize, k: usize, m: usize, scheme: Scheme) -> Result<Efficiency> {
    if m == 0 {
        return Err(SmcError::Dimension("m must be positive".into()));
    }
    let bits = capacity_bits(n, k)?;
    let (users, uses) = match scheme {
        Scheme::Svc => (1, m),
        Scheme::Smc | Scheme::SmcDual | Scheme::SmcFused => (2, m * m),
    };
    let total = bits * users;
    Ok(Efficiency {
        bits_per_user: bits,
        users,
        total_bits: total,
        channel_uses: uses,
        bits_per_use: total as f64 / uses as f64,
    })
}
