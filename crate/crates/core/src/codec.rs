//! Payload to sparse-support mapping and codeword construction.
//!
//! Payload bits are read as an integer rank (most significant bit first) and
//! unranked into a lexicographically ordered `K`-subset of `[0, n)`. SVC uses
//! one subset as the support of a sparse vector. SMC pairs two users' subsets
//! by rank order into the nonzero positions of an `n x n` sparse matrix.

use std::fmt;

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::Rng;

use crate::error::{Result, SmcError};

/// Binomial coefficient `C(n, k)`, `None` on `u128` overflow.
pub fn binomial(n: usize, k: usize) -> Option<u128> {
    if k > n {
        return Some(0);
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        // acc * (n - i) / (i + 1) stays integral at every step.
        acc = acc.checked_mul((n - i) as u128)? / (i as u128 + 1);
    }
    Some(acc)
}

fn checked_binomial(n: usize, k: usize) -> Result<u128> {
    binomial(n, k).ok_or_else(|| SmcError::Domain(format!("C({n}, {k}) overflows u128")))
}

fn check_sparsity(n: usize, k: usize) -> Result<()> {
    if k == 0 || k > n {
        return Err(SmcError::Domain(format!(
            "sparsity K = {k} must satisfy 1 <= K <= n = {n}"
        )));
    }
    Ok(())
}

/// Payload bits per user, `floor(log2 C(n, K))`.
pub fn capacity_bits(n: usize, k: usize) -> Result<u32> {
    check_sparsity(n, k)?;
    let count = checked_binomial(n, k)?;
    Ok(127 - count.leading_zeros())
}

/// Lexicographic unranking of a `k`-subset of `[0, n)`.
pub fn rank_to_subset(rank: u128, n: usize, k: usize) -> Result<Vec<usize>> {
    check_sparsity(n, k)?;
    let count = checked_binomial(n, k)?;
    if rank >= count {
        return Err(SmcError::RankOutOfRange { rank, n, k, count });
    }
    let mut rest = rank;
    let mut subset = Vec::with_capacity(k);
    let mut next = 0usize;
    for slot in 0..k {
        let remaining = k - slot - 1;
        loop {
            // Subsets whose `slot`-th element is `next`.
            let block = binomial(n - next - 1, remaining).unwrap_or(u128::MAX);
            if rest < block {
                break;
            }
            rest -= block;
            next += 1;
        }
        subset.push(next);
        next += 1;
    }
    Ok(subset)
}

/// Lexicographic rank of a sorted `k`-subset of `[0, n)`.
pub fn subset_to_rank(support: &[usize], n: usize, k: usize) -> Result<u128> {
    check_sparsity(n, k)?;
    validate_support(support, n, k)?;
    checked_binomial(n, k)?;
    let mut rank = 0u128;
    let mut next = 0usize;
    for (slot, &idx) in support.iter().enumerate() {
        let remaining = k - slot - 1;
        for skipped in next..idx {
            rank += binomial(n - skipped - 1, remaining).expect("bounded by C(n, k)");
        }
        next = idx + 1;
    }
    Ok(rank)
}

fn validate_support(support: &[usize], n: usize, k: usize) -> Result<()> {
    if support.len() != k {
        return Err(SmcError::Validation(format!(
            "support has {} indices, expected {k}",
            support.len()
        )));
    }
    if support.windows(2).any(|w| w[0] >= w[1]) {
        return Err(SmcError::Validation(format!(
            "support {support:?} is not strictly increasing"
        )));
    }
    if let Some(&last) = support.last() {
        if last >= n {
            return Err(SmcError::Validation(format!(
                "support index {last} out of range for n = {n}"
            )));
        }
    }
    Ok(())
}

/// Fixed-width bit string, stored as an integer read most significant bit first.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Payload {
    value: u128,
    bits: u32,
}

impl Payload {
    pub fn new(value: u128, bits: u32) -> Result<Self> {
        if bits > 127 {
            return Err(SmcError::Validation(format!("{bits} bits exceeds 127")));
        }
        if bits < 128 && value >> bits != 0 {
            return Err(SmcError::Validation(format!(
                "value {value:#x} does not fit in {bits} bits"
            )));
        }
        Ok(Self { value, bits })
    }

    pub fn random<R: Rng + ?Sized>(bits: u32, rng: &mut R) -> Self {
        let raw: u128 = rng.random();
        let value = if bits == 0 { 0 } else { raw >> (128 - bits) };
        Self { value, bits }
    }

    pub fn value(&self) -> u128 {
        self.value
    }

    pub fn bits(&self) -> u32 {
        self.bits
    }

    /// Bits most significant first.
    pub fn to_bits(&self) -> Vec<bool> {
        (0..self.bits)
            .rev()
            .map(|b| (self.value >> b) & 1 == 1)
            .collect()
    }

    pub fn from_bits(bits: &[bool]) -> Result<Self> {
        let value = bits.iter().fold(0u128, |acc, &b| (acc << 1) | b as u128);
        Self::new(value, bits.len() as u32)
    }

    /// Hex string of `ceil(bits / 4)` digits.
    pub fn to_hex(&self) -> String {
        let digits = self.bits.div_ceil(4).max(1) as usize;
        format!("{:0width$x}", self.value, width = digits)
    }

    pub fn from_hex(hex: &str, bits: u32) -> Result<Self> {
        let trimmed = hex.trim().trim_start_matches("0x");
        let value = u128::from_str_radix(trimmed, 16)
            .map_err(|e| SmcError::Validation(format!("bad hex payload {hex:?}: {e}")))?;
        Self::new(value, bits)
    }

    /// Number of differing bits against `other` of the same width.
    pub fn bit_errors(&self, other: &Payload) -> u32 {
        (self.value ^ other.value).count_ones()
    }
}

impl serde::Serialize for Payload {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_hex())
    }
}

impl fmt::Display for Payload {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_hex())
    }
}

/// Unranks a payload into its support, rejecting width mismatches.
pub fn payload_to_support(payload: &Payload, n: usize, k: usize) -> Result<Vec<usize>> {
    let cap = capacity_bits(n, k)?;
    if payload.bits != cap {
        return Err(SmcError::Validation(format!(
            "payload has {} bits, C({n}, {k}) carries {cap}",
            payload.bits
        )));
    }
    rank_to_subset(payload.value, n, k)
}

/// Ranks a support back into a payload. `None` for ranks at or above
/// `2^capacity`, which the encoder never emits.
pub fn support_to_payload(support: &[usize], n: usize, k: usize) -> Result<Option<Payload>> {
    let cap = capacity_bits(n, k)?;
    let rank = subset_to_rank(support, n, k)?;
    if rank >> cap != 0 {
        return Ok(None);
    }
    Ok(Some(Payload {
        value: rank,
        bits: cap,
    }))
}

/// Sparse vector codeword.
#[derive(Debug, Clone, PartialEq)]
pub struct SvcCodeword {
    pub length: usize,
    pub support: Vec<usize>,
    pub values: Vec<Complex64>,
    pub payload: Payload,
}

impl SvcCodeword {
    pub fn sparsity(&self) -> usize {
        self.support.len()
    }

    pub fn to_dense(&self) -> Vec<Complex64> {
        let mut x = vec![Complex64::new(0.0, 0.0); self.length];
        for (&i, &v) in self.support.iter().zip(&self.values) {
            x[i] = v;
        }
        x
    }
}

/// Sparse `n x n` matrix codeword carrying two users' payloads.
#[derive(Debug, Clone, PartialEq)]
pub struct SmcCodeword {
    pub dim: usize,
    /// `(row, col, value)` triples, rows and cols each ascending.
    pub entries: Vec<(usize, usize, Complex64)>,
    pub payload1: Payload,
    pub payload2: Payload,
}

impl SmcCodeword {
    /// Pairs two sorted supports by rank order. Payloads are re-derived from
    /// the supports and must be representable.
    pub fn from_supports(dim: usize, rows: &[usize], cols: &[usize]) -> Result<Self> {
        let k = rows.len();
        validate_support(rows, dim, k)?;
        validate_support(cols, dim, k)?;
        let payload1 = support_to_payload(rows, dim, k)?
            .ok_or_else(|| SmcError::Validation(format!("row support {rows:?} is unused")))?;
        let payload2 = support_to_payload(cols, dim, k)?
            .ok_or_else(|| SmcError::Validation(format!("col support {cols:?} is unused")))?;
        let one = Complex64::new(1.0, 0.0);
        Ok(Self {
            dim,
            entries: rows.iter().zip(cols).map(|(&r, &c)| (r, c, one)).collect(),
            payload1,
            payload2,
        })
    }

    pub fn sparsity(&self) -> usize {
        self.entries.len()
    }

    pub fn rows(&self) -> Vec<usize> {
        self.entries.iter().map(|e| e.0).collect()
    }

    pub fn cols(&self) -> Vec<usize> {
        self.entries.iter().map(|e| e.1).collect()
    }

    pub fn to_dense(&self) -> DMatrix<Complex64> {
        let mut x = DMatrix::zeros(self.dim, self.dim);
        for &(r, c, v) in &self.entries {
            x[(r, c)] += v;
        }
        x
    }
}

/// SMC encoding: user 1 picks the rows, user 2 the columns.
pub fn smc_encode(
    payload1: &Payload,
    payload2: &Payload,
    n: usize,
    k: usize,
) -> Result<SmcCodeword> {
    let rows = payload_to_support(payload1, n, k)?;
    let cols = payload_to_support(payload2, n, k)?;
    let one = Complex64::new(1.0, 0.0);
    Ok(SmcCodeword {
        dim: n,
        entries: rows.iter().zip(&cols).map(|(&r, &c)| (r, c, one)).collect(),
        payload1: *payload1,
        payload2: *payload2,
    })
}

pub fn svc_encode(payload: &Payload, n: usize, k: usize) -> Result<SvcCodeword> {
    let support = payload_to_support(payload, n, k)?;
    Ok(SvcCodeword {
        length: n,
        values: vec![Complex64::new(1.0, 0.0); support.len()],
        support,
        payload: *payload,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    /// All k-subsets of [0, n) in lexicographic order, by recursion.
    fn enumerate(n: usize, k: usize) -> Vec<Vec<usize>> {
        fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
            if cur.len() == k {
                out.push(cur.clone());
                return;
            }
            for v in start..n {
                cur.push(v);
                go(v + 1, n, k, cur, out);
                cur.pop();
            }
        }
        let mut out = Vec::new();
        go(0, n, k, &mut Vec::new(), &mut out);
        out
    }

    #[test]
    fn binomial_values() {
        assert_eq!(binomial(8, 2), Some(28));
        assert_eq!(binomial(32, 2), Some(496));
        assert_eq!(binomial(5, 7), Some(0));
        assert_eq!(binomial(10, 0), Some(1));
    }

    #[test]
    fn unrank_examples() {
        assert_eq!(rank_to_subset(0, 8, 2).unwrap(), vec![0, 1]);
        let all = enumerate(8, 2);
        assert_eq!(all.len(), 28);
        assert_eq!(all[27], vec![6, 7]);
        assert_eq!(rank_to_subset(27, 8, 2).unwrap(), vec![6, 7]);
        assert_eq!(subset_to_rank(&[0, 1], 8, 2).unwrap(), 0);
        assert_eq!(subset_to_rank(&[6, 7], 8, 2).unwrap(), 27);
        assert_eq!(subset_to_rank(&[3], 16, 1).unwrap(), 3);
    }

    #[test]
    fn ranking_errors() {
        assert!(matches!(
            rank_to_subset(28, 8, 2),
            Err(SmcError::RankOutOfRange { count: 28, .. })
        ));
        assert!(matches!(
            subset_to_rank(&[3, 1], 8, 2),
            Err(SmcError::Validation(_))
        ));
        assert!(matches!(
            subset_to_rank(&[1, 1], 8, 2),
            Err(SmcError::Validation(_))
        ));
        assert!(matches!(
            subset_to_rank(&[1, 8], 8, 2),
            Err(SmcError::Validation(_))
        ));
        assert!(matches!(
            subset_to_rank(&[1], 8, 2),
            Err(SmcError::Validation(_))
        ));
        assert!(matches!(rank_to_subset(0, 4, 0), Err(SmcError::Domain(_))));
    }

    #[test]
    fn exhaustive_round_trip_small_configs() {
        for n in 1..=16 {
            for k in 1..=3.min(n) {
                let all = enumerate(n, k);
                assert_eq!(all.len() as u128, binomial(n, k).unwrap());
                for (r, subset) in all.iter().enumerate() {
                    assert_eq!(&rank_to_subset(r as u128, n, k).unwrap(), subset);
                    assert_eq!(subset_to_rank(subset, n, k).unwrap(), r as u128);
                }
            }
        }
    }

    #[test]
    fn capacity_examples() {
        assert_eq!(capacity_bits(32, 2).unwrap(), 8);
        assert_eq!(capacity_bits(2, 1).unwrap(), 1);
        assert_eq!(capacity_bits(8, 1).unwrap(), 3);
        assert_eq!(capacity_bits(4, 4).unwrap(), 0);
    }

    #[test]
    fn smc_pairs_sorted_supports_by_rank() {
        // Supports {4,7} and {3,6}. With n = 8 their ranks exceed 2^4, so
        // use n = 16 where both are valid payloads.
        let p1 = support_to_payload(&[4, 7], 16, 2).unwrap().unwrap();
        let p2 = support_to_payload(&[3, 6], 16, 2).unwrap().unwrap();
        let x = smc_encode(&p1, &p2, 16, 2).unwrap();
        let one = Complex64::new(1.0, 0.0);
        assert_eq!(x.entries, vec![(4, 3, one), (7, 6, one)]);
        assert_eq!(x, SmcCodeword::from_supports(16, &[4, 7], &[3, 6]).unwrap());
        assert!(SmcCodeword::from_supports(8, &[4, 7], &[3, 6]).is_err());
    }

    #[test]
    fn smc_single_entry() {
        let zero = Payload::new(0, 3).unwrap();
        let x = smc_encode(&zero, &zero, 8, 1).unwrap();
        assert_eq!(x.entries, vec![(0, 0, Complex64::new(1.0, 0.0))]);
    }

    #[test]
    fn payload_width_mismatch_rejected() {
        let p = Payload::new(0, 7).unwrap();
        let q = Payload::new(0, 8).unwrap();
        assert!(matches!(
            smc_encode(&p, &q, 32, 2),
            Err(SmcError::Validation(_))
        ));
        assert!(matches!(
            svc_encode(&p, 32, 2),
            Err(SmcError::Validation(_))
        ));
    }

    #[test]
    fn svc_examples() {
        let zero = Payload::new(0, 4).unwrap();
        assert_eq!(svc_encode(&zero, 8, 2).unwrap().support, vec![0, 1]);
        // C(8,2) = 28 carries 4 bits, so rank 27 is not a valid payload...
        assert!(Payload::new(27, 4).is_err());
        // ...but unranking it still gives {6,7}, and ranks >= 16 decode to None.
        assert_eq!(rank_to_subset(27, 8, 2).unwrap(), vec![6, 7]);
        assert_eq!(support_to_payload(&[6, 7], 8, 2).unwrap(), None);
        let p = Payload::new(15, 4).unwrap();
        let cw = svc_encode(&p, 8, 2).unwrap();
        assert_eq!(support_to_payload(&cw.support, 8, 2).unwrap(), Some(p));
    }

    #[test]
    fn payload_hex_and_bits() {
        let p = Payload::new(0xa5, 8).unwrap();
        assert_eq!(p.to_hex(), "a5");
        assert_eq!(Payload::from_hex("a5", 8).unwrap(), p);
        assert_eq!(Payload::from_hex("0x05", 3).unwrap().value(), 5);
        assert_eq!(Payload::new(5, 3).unwrap().to_hex(), "5");
        assert_eq!(
            p.to_bits(),
            vec![true, false, true, false, false, true, false, true]
        );
        assert_eq!(Payload::from_bits(&p.to_bits()).unwrap(), p);
        assert!(Payload::from_hex("1ff", 8).is_err());
        assert!(Payload::from_hex("zz", 8).is_err());
    }

    proptest! {
        #[test]
        fn unrank_then_rank_is_identity(n in 2usize..60, k in 1usize..5, seed in any::<u64>()) {
            prop_assume!(k <= n);
            let count = binomial(n, k).unwrap();
            let rank = (seed as u128) % count;
            let subset = rank_to_subset(rank, n, k).unwrap();
            prop_assert!(subset.windows(2).all(|w| w[0] < w[1]));
            prop_assert_eq!(subset_to_rank(&subset, n, k).unwrap(), rank);
        }

        #[test]
        fn smc_codewords_keep_pairing_invariant(a in any::<u64>(), b in any::<u64>(), k in 1usize..4) {
            let n = 16;
            let bits = capacity_bits(n, k).unwrap();
            let mask = (1u128 << bits) - 1;
            let p1 = Payload::new(a as u128 & mask, bits).unwrap();
            let p2 = Payload::new(b as u128 & mask, bits).unwrap();
            let x = smc_encode(&p1, &p2, n, k).unwrap();
            prop_assert_eq!(x.sparsity(), k);
            prop_assert!(x.rows().windows(2).all(|w| w[0] < w[1]));
            prop_assert!(x.cols().windows(2).all(|w| w[0] < w[1]));
            prop_assert_eq!(support_to_payload(&x.rows(), n, k).unwrap(), Some(p1));
            prop_assert_eq!(support_to_payload(&x.cols(), n, k).unwrap(), Some(p2));
        }
    }
}
