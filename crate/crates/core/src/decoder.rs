//! Block-greedy recovery of SMC frames.
//!
//! `Y = diag(h) A X A^H + N` is row-sparse when read against the channel
//! weighted atoms `h . a_j`: every nonzero `(r, c)` of `X` contributes the
//! rank-one term `(h . a_r) a_c^H`. After vectorizing `Y^H` each row of
//! `X A^H` becomes one contiguous block of length `m`, and the dictionary
//! splits into `n` blocks `Phi_j = (h . a_j) (x) I_m`. The decoder scores
//! blocks directly on `Y` without building `Phi`.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::Serialize;

use crate::channel::CompView;
use crate::codec::{binomial, capacity_bits, support_to_payload, Payload, SmcCodeword};
use crate::dictionary::Dictionary;
use crate::error::{Result, SmcError};

const ZERO: Complex64 = Complex64 { re: 0.0, im: 0.0 };

/// Maximum number of candidates the ML oracle will enumerate.
pub const ML_CANDIDATE_GUARD: u128 = 1_000_000;

/// Statistic used to rank blocks.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ScoreRule {
    /// `sum_k |<u_j, R[:, k]>|^2`, the energy captured by the block.
    #[default]
    Energy,
    /// `|sum_k <u_j, R[:, k]>| / ||R||_F`, the signed per-column sum.
    SignedSum,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum DecodePath {
    Primary,
    Dual,
    Fused,
    Comp,
    Oracle,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum DecodeStatus {
    /// Every greedy step had a unique winner.
    Decoded,
    /// The last pick was a tie, or some step saw an all-zero residual.
    Undetermined,
    /// Fewer than `K` blocks were selectable.
    Failed,
}

/// Winning and runner-up block score of one greedy iteration.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct IterationScore {
    pub block: usize,
    pub score: f64,
    pub runner_up: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DecodeResult {
    /// `(row, col)` pairs in recovery order.
    pub pairs: Vec<(usize, usize)>,
    pub payload1: Option<Payload>,
    pub payload2: Option<Payload>,
    pub scores: Vec<IterationScore>,
    pub path: DecodePath,
    pub status: DecodeStatus,
    /// Frobenius distance of the chosen candidate, oracle path only.
    pub distance: Option<f64>,
}

impl DecodeResult {
    pub fn rows(&self) -> Vec<usize> {
        let mut r: Vec<usize> = self.pairs.iter().map(|p| p.0).collect();
        r.sort_unstable();
        r
    }

    pub fn cols(&self) -> Vec<usize> {
        let mut c: Vec<usize> = self.pairs.iter().map(|p| p.1).collect();
        c.sort_unstable();
        c
    }

    pub fn total_score(&self) -> f64 {
        self.scores.iter().map(|s| s.score).sum()
    }

    /// Exact payload match for both users.
    pub fn matches(&self, x: &SmcCodeword) -> bool {
        self.payload1 == Some(x.payload1) && self.payload2 == Some(x.payload2)
    }

    pub fn same_payloads(&self, other: &DecodeResult) -> bool {
        self.payload1 == other.payload1 && self.payload2 == other.payload2
    }
}

/// Block scores for one residual.
#[derive(Debug, Clone, PartialEq)]
pub struct BlockScoreVector(pub Vec<f64>);

impl BlockScoreVector {
    pub fn scores(&self) -> &[f64] {
        &self.0
    }

    /// Lowest-index argmax over blocks not in `excluded`, with the runner-up.
    pub fn best(&self, excluded: &[usize]) -> Option<(usize, f64, f64)> {
        let mut best: Option<(usize, f64)> = None;
        let mut second = f64::NEG_INFINITY;
        for (j, &s) in self.0.iter().enumerate() {
            if excluded.contains(&j) {
                continue;
            }
            match best {
                None => best = Some((j, s)),
                Some((_, b)) if s > b => {
                    second = b;
                    best = Some((j, s));
                }
                Some(_) => second = second.max(s),
            }
        }
        best.map(|(j, s)| (j, s, if second.is_finite() { second } else { 0.0 }))
    }
}

fn check_square(y: &DMatrix<Complex64>) -> Result<()> {
    if y.nrows() != y.ncols() {
        return Err(SmcError::Dimension(format!(
            "expected a square observation, got {} x {}",
            y.nrows(),
            y.ncols()
        )));
    }
    Ok(())
}

fn check_shapes(y: &DMatrix<Complex64>, a: &Dictionary, h: &[Complex64]) -> Result<()> {
    check_square(y)?;
    if y.nrows() != a.rows() || h.len() != a.rows() {
        return Err(SmcError::Dimension(format!(
            "observation {} x {}, channel length {}, dictionary {} x {}",
            y.nrows(),
            y.ncols(),
            h.len(),
            a.rows(),
            a.cols()
        )));
    }
    Ok(())
}

/// `Vec(Y^H)`: column stacking of the conjugate transpose, so entry
/// `i * m + k` is `conj(Y[i][k])`.
pub fn vectorize(y: &DMatrix<Complex64>) -> Result<DVector<Complex64>> {
    check_square(y)?;
    let m = y.nrows();
    Ok(DVector::from_fn(m * m, |idx, _| {
        y[(idx / m, idx % m)].conj()
    }))
}

/// Block-sparse signal `Vec(A X^H)`; block `j` is column `j` of `A X^H`.
pub fn block_sparse_signal(x: &SmcCodeword, a: &Dictionary) -> DVector<Complex64> {
    let (m, n) = (a.rows(), a.cols());
    let mut out = DVector::zeros(n * m);
    for &(r, c, v) in &x.entries {
        // (A X^H)[:, r] += conj(v) a_c
        for i in 0..m {
            out[r * m + i] += v.conj() * a.get(i, c);
        }
    }
    out
}

/// Channel-weighted atoms `h . a_j` as columns, with their norms.
fn weighted_atoms(a: &Dictionary, h: &[Complex64]) -> (DMatrix<Complex64>, Vec<f64>) {
    let u = DMatrix::from_fn(a.rows(), a.cols(), |i, j| h[i] * a.get(i, j));
    let norms = u.column_iter().map(|c| c.norm()).collect();
    (u, norms)
}

/// Energy of `Y` captured by block `j`.
pub fn block_score(
    y: &DMatrix<Complex64>,
    a: &Dictionary,
    h: &[Complex64],
    j: usize,
) -> Result<f64> {
    check_shapes(y, a, h)?;
    if j >= a.cols() {
        return Err(SmcError::Dimension(format!(
            "block {j} out of range for {} blocks",
            a.cols()
        )));
    }
    let m = a.rows();
    let u: Vec<Complex64> = (0..m).map(|i| h[i] * a.get(i, j)).collect();
    let norm = u.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    if norm == 0.0 {
        return Err(SmcError::DegenerateChannel(j));
    }
    let mut energy = 0.0;
    for k in 0..m {
        let mut acc = ZERO;
        for i in 0..m {
            acc += u[i].conj() * y[(i, k)];
        }
        energy += (acc / norm).norm_sqr();
    }
    Ok(energy)
}

/// All `n` block scores under `rule`.
pub fn block_scores(
    y: &DMatrix<Complex64>,
    a: &Dictionary,
    h: &[Complex64],
    rule: ScoreRule,
) -> Result<BlockScoreVector> {
    check_shapes(y, a, h)?;
    let view = View::new(y.clone(), weighted_atoms(a, h))?;
    Ok(BlockScoreVector(view.scores(rule)))
}

/// Residual state of one observation during the greedy loop.
struct View {
    residual: DMatrix<Complex64>,
    atoms: DMatrix<Complex64>,
    norms: Vec<f64>,
}

impl View {
    fn new(y: DMatrix<Complex64>, (atoms, norms): (DMatrix<Complex64>, Vec<f64>)) -> Result<Self> {
        if let Some(j) = norms.iter().position(|&n| n == 0.0) {
            return Err(SmcError::DegenerateChannel(j));
        }
        Ok(Self {
            residual: y,
            atoms,
            norms,
        })
    }

    /// `atoms^H R`, one row per block.
    fn correlations(&self) -> DMatrix<Complex64> {
        self.atoms.adjoint() * &self.residual
    }

    fn scores(&self, rule: ScoreRule) -> Vec<f64> {
        let corr = self.correlations();
        match rule {
            ScoreRule::Energy => corr
                .row_iter()
                .zip(&self.norms)
                .map(|(row, &n)| row.norm_squared() / (n * n))
                .collect(),
            ScoreRule::SignedSum => {
                let total = self.residual.norm();
                corr.row_iter()
                    .zip(&self.norms)
                    .map(|(row, &n)| {
                        if total == 0.0 {
                            0.0
                        } else {
                            row.iter().sum::<Complex64>().norm() / (n * total)
                        }
                    })
                    .collect()
            }
        }
    }

    /// Per-column projection onto block `j` and removal of that rank-one
    /// term. Returns the estimated row `g` and the block energy weight.
    fn peel(&mut self, j: usize) -> (DVector<Complex64>, f64) {
        let atom = self.atoms.column(j).into_owned();
        let weight = self.norms[j] * self.norms[j];
        let g: DVector<Complex64> = (self.residual.adjoint() * &atom).map(|z| z.conj() / weight);
        self.residual -= &atom * g.transpose();
        (g, weight)
    }
}

/// Outcome of the shared greedy loop: selected blocks with partner
/// correlation profiles.
struct Greedy {
    blocks: Vec<usize>,
    partner_scores: Vec<Vec<f64>>,
    scores: Vec<IterationScore>,
    status: DecodeStatus,
}

fn greedy(views: &mut [View], partners: &DMatrix<Complex64>, k: usize, rule: ScoreRule) -> Greedy {
    let n = views[0].atoms.ncols();
    let partner_norms: Vec<f64> = partners.column_iter().map(|c| c.norm()).collect();
    let mut blocks = Vec::with_capacity(k);
    let mut partner_scores = Vec::with_capacity(k);
    let mut scores = Vec::with_capacity(k);
    let mut status = DecodeStatus::Decoded;
    for _ in 0..k.min(n) {
        let mut total = vec![0.0; n];
        for v in views.iter() {
            for (t, s) in total.iter_mut().zip(v.scores(rule)) {
                *t += s;
            }
        }
        let (j, best, runner_up) = BlockScoreVector(total)
            .best(&blocks)
            .expect("k <= n leaves a selectable block");
        // Early ties between two true blocks are harmless since both get
        // picked; a tie on the last pick or an empty residual is not.
        let last = blocks.len() + 1 == k.min(n);
        if best == 0.0 || (last && best <= runner_up && blocks.len() + 1 < n) {
            status = DecodeStatus::Undetermined;
        }
        // Combine per-view row estimates weighted by block energy.
        let mut g = DVector::<Complex64>::zeros(partners.nrows());
        let mut weight_sum = 0.0;
        for v in views.iter_mut() {
            let (gv, w) = v.peel(j);
            g += gv * Complex64::new(w, 0.0);
            weight_sum += w;
        }
        g /= Complex64::new(weight_sum, 0.0);
        let profile: Vec<f64> = partners
            .column_iter()
            .zip(&partner_norms)
            .map(|(col, &pn)| {
                let dot: Complex64 = col.iter().zip(g.iter()).map(|(a, b)| a * b).sum();
                if pn == 0.0 {
                    0.0
                } else {
                    dot.norm() / pn
                }
            })
            .collect();
        blocks.push(j);
        partner_scores.push(profile);
        scores.push(IterationScore {
            block: j,
            score: best,
            runner_up,
        });
    }
    if k > n {
        status = DecodeStatus::Failed;
    }
    Greedy {
        blocks,
        partner_scores,
        scores,
        status,
    }
}

/// Assigns one partner index per selected block, all distinct. Blocks with
/// the stronger best partner choose first; a block that loses its best
/// partner takes its best remaining one.
fn assign_partners(profiles: &[Vec<f64>]) -> Vec<usize> {
    let peak = |p: &Vec<f64>| p.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let mut order: Vec<usize> = (0..profiles.len()).collect();
    order.sort_by(|&a, &b| {
        peak(&profiles[b])
            .partial_cmp(&peak(&profiles[a]))
            .unwrap_or(std::cmp::Ordering::Equal)
            .then(a.cmp(&b))
    });
    let mut taken = vec![false; profiles.first().map_or(0, Vec::len)];
    let mut out = vec![usize::MAX; profiles.len()];
    for t in order {
        let mut best: Option<(usize, f64)> = None;
        for (c, &s) in profiles[t].iter().enumerate() {
            if taken[c] {
                continue;
            }
            if best.is_none_or(|(_, b)| s > b) {
                best = Some((c, s));
            }
        }
        if let Some((c, _)) = best {
            taken[c] = true;
            out[t] = c;
        }
    }
    out
}

fn finish(
    n: usize,
    k: usize,
    g: Greedy,
    block_is_row: bool,
    path: DecodePath,
) -> Result<DecodeResult> {
    let partners = assign_partners(&g.partner_scores);
    let pairs: Vec<(usize, usize)> = g
        .blocks
        .iter()
        .zip(&partners)
        .filter(|(_, &p)| p != usize::MAX)
        .map(|(&b, &p)| if block_is_row { (b, p) } else { (p, b) })
        .collect();
    let mut status = g.status;
    if pairs.len() < k {
        status = DecodeStatus::Failed;
    }
    let (payload1, payload2) = if status == DecodeStatus::Failed {
        (None, None)
    } else {
        let mut rows: Vec<usize> = pairs.iter().map(|p| p.0).collect();
        let mut cols: Vec<usize> = pairs.iter().map(|p| p.1).collect();
        rows.sort_unstable();
        cols.sort_unstable();
        (
            support_to_payload(&rows, n, k)?,
            support_to_payload(&cols, n, k)?,
        )
    };
    Ok(DecodeResult {
        pairs,
        payload1,
        payload2,
        scores: g.scores,
        path,
        status,
        distance: None,
    })
}

fn check_sparsity(k: usize) -> Result<()> {
    if k == 0 {
        return Err(SmcError::Domain("sparsity K must be at least 1".into()));
    }
    Ok(())
}

/// Primary path: blocks of `h . a_j` on `Y` recover user 1, the peeled rows
/// matched against `A` recover user 2.
pub fn block_mp_decode(
    y: &DMatrix<Complex64>,
    a: &Dictionary,
    h: &[Complex64],
    k: usize,
) -> Result<DecodeResult> {
    block_mp_decode_with(y, a, h, k, ScoreRule::Energy)
}

pub fn block_mp_decode_with(
    y: &DMatrix<Complex64>,
    a: &Dictionary,
    h: &[Complex64],
    k: usize,
    rule: ScoreRule,
) -> Result<DecodeResult> {
    check_sparsity(k)?;
    check_shapes(y, a, h)?;
    let mut views = [View::new(y.clone(), weighted_atoms(a, h))?];
    let g = greedy(&mut views, a.matrix(), k, rule);
    finish(a.cols(), k, g, true, DecodePath::Primary)
}

/// Dual path on `Y^H = A X^H (diag(h) A)^H`: plain atoms `a_j` recover user 2,
/// the peeled rows matched against `h . a_r` recover user 1.
pub fn dual_decode(
    y: &DMatrix<Complex64>,
    a: &Dictionary,
    h: &[Complex64],
    k: usize,
) -> Result<DecodeResult> {
    dual_decode_with(y, a, h, k, ScoreRule::Energy)
}

pub fn dual_decode_with(
    y: &DMatrix<Complex64>,
    a: &Dictionary,
    h: &[Complex64],
    k: usize,
    rule: ScoreRule,
) -> Result<DecodeResult> {
    check_sparsity(k)?;
    check_shapes(y, a, h)?;
    let ones = vec![Complex64::new(1.0, 0.0); a.rows()];
    let (weighted, _) = weighted_atoms(a, h);
    let mut views = [View::new(y.adjoint(), weighted_atoms(a, &ones))?];
    let g = greedy(&mut views, &weighted, k, rule);
    finish(a.cols(), k, g, false, DecodePath::Dual)
}

/// Runs both paths; on disagreement keeps the one with the larger total
/// winning block score (primary on ties).
pub fn fused_decode(
    y: &DMatrix<Complex64>,
    a: &Dictionary,
    h: &[Complex64],
    k: usize,
) -> Result<DecodeResult> {
    let primary = block_mp_decode(y, a, h, k)?;
    let dual = dual_decode(y, a, h, k)?;
    let mut out = if primary.same_payloads(&dual) || primary.total_score() >= dual.total_score() {
        primary
    } else {
        dual
    };
    out.path = DecodePath::Fused;
    Ok(out)
}

/// Multi-point decoding: block scores are summed over views at every greedy
/// step, each view keeps its own residual, and the per-view row estimates of
/// the selected block are energy-weighted before the partner search.
pub fn comp_combine(views: &[CompView], a: &Dictionary, k: usize) -> Result<DecodeResult> {
    check_sparsity(k)?;
    if views.is_empty() {
        return Err(SmcError::Validation("CoMP needs at least one view".into()));
    }
    let mut state = Vec::with_capacity(views.len());
    for v in views {
        check_shapes(&v.y, a, &v.h)?;
        state.push(View::new(v.y.clone(), weighted_atoms(a, &v.h))?);
    }
    let g = greedy(&mut state, a.matrix(), k, ScoreRule::Energy);
    let path = if views.len() == 1 {
        DecodePath::Primary
    } else {
        DecodePath::Comp
    };
    finish(a.cols(), k, g, true, path)
}

/// Exhaustive minimum-distance decoding over every valid codeword.
pub fn ml_oracle_decode(
    y: &DMatrix<Complex64>,
    a: &Dictionary,
    h: &[Complex64],
    k: usize,
) -> Result<DecodeResult> {
    check_sparsity(k)?;
    check_shapes(y, a, h)?;
    let n = a.cols();
    let per_user = binomial(n, k).unwrap_or(u128::MAX);
    let candidates = per_user.saturating_mul(per_user);
    if candidates > ML_CANDIDATE_GUARD {
        return Err(SmcError::TooManyCandidates {
            candidates,
            guard: ML_CANDIDATE_GUARD,
        });
    }
    let bits = capacity_bits(n, k)?;
    let valid = 1u128 << bits;
    let supports: Vec<Vec<usize>> = (0..valid)
        .map(|r| crate::codec::rank_to_subset(r, n, k))
        .collect::<Result<_>>()?;
    let (u, _) = weighted_atoms(a, h);
    let m = a.rows();
    // Rank-one images (h . a_r) a_c^H, cached per (r, c).
    let mut outer = vec![None::<DMatrix<Complex64>>; n * n];
    let mut image = |r: usize, c: usize| -> DMatrix<Complex64> {
        outer[r * n + c]
            .get_or_insert_with(|| u.column(r) * a.matrix().column(c).adjoint())
            .clone()
    };
    let mut best: Option<(f64, usize, usize)> = None;
    for (i1, rows) in supports.iter().enumerate() {
        for (i2, cols) in supports.iter().enumerate() {
            let mut diff = y.clone();
            for (&r, &c) in rows.iter().zip(cols) {
                diff -= image(r, c);
            }
            let d = diff.norm_squared();
            if best.is_none_or(|(b, _, _)| d < b) {
                best = Some((d, i1, i2));
            }
        }
    }
    let (d, i1, i2) = best.expect("at least one candidate");
    let rows = &supports[i1];
    let cols = &supports[i2];
    debug_assert_eq!(m, y.nrows());
    Ok(DecodeResult {
        pairs: rows.iter().copied().zip(cols.iter().copied()).collect(),
        payload1: Some(Payload::new(i1 as u128, bits)?),
        payload2: Some(Payload::new(i2 as u128, bits)?),
        scores: Vec::new(),
        path: DecodePath::Oracle,
        status: DecodeStatus::Decoded,
        distance: Some(d.sqrt()),
    })
}

/// SVC baseline decode.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SvcDecodeResult {
    pub support: Vec<usize>,
    pub payload: Option<Payload>,
    pub scores: Vec<IterationScore>,
    pub status: DecodeStatus,
}

/// Relative slack under which two correlations count as an exact tie.
const TIE_TOLERANCE: f64 = 1e-9;

/// Cap on explored tie branches per SVC decode.
const MAX_TIE_LEAVES: usize = 256;

struct SvcLeaf {
    support: Vec<usize>,
    scores: Vec<IterationScore>,
    residual: f64,
}

struct SvcSearch<'a> {
    atoms: &'a DMatrix<Complex64>,
    norms: &'a [f64],
    k: usize,
    leaves: Vec<SvcLeaf>,
}

impl SvcSearch<'_> {
    fn explore(
        &mut self,
        residual: DVector<Complex64>,
        support: Vec<usize>,
        scores: Vec<IterationScore>,
    ) {
        if support.len() == self.k {
            self.leaves.push(SvcLeaf {
                support,
                scores,
                residual: residual.norm_squared(),
            });
            return;
        }
        let corr = self.atoms.adjoint() * &residual;
        let mags: Vec<f64> = corr
            .iter()
            .zip(self.norms)
            .map(|(c, &nr)| c.norm() / nr)
            .collect();
        let (j, best, runner_up) = BlockScoreVector(mags.clone())
            .best(&support)
            .expect("k <= n leaves a selectable atom");
        let mut tied = vec![j];
        if best > 0.0 && self.leaves.len() < MAX_TIE_LEAVES {
            tied.extend((0..mags.len()).filter(|&i| {
                i != j && !support.contains(&i) && best - mags[i] <= TIE_TOLERANCE * best
            }));
        }
        for i in tied {
            let coef = corr[i] / (self.norms[i] * self.norms[i]);
            let next = &residual - self.atoms.column(i) * coef;
            let mut s = support.clone();
            s.push(i);
            let mut sc = scores.clone();
            sc.push(IterationScore {
                block: i,
                score: mags[i],
                runner_up: if i == j { runner_up } else { best },
            });
            self.explore(next, s, sc);
        }
    }
}

/// Matching pursuit over channel-weighted unit atoms, `K` picks, no reselection.
///
/// Unit sparse values make the true atoms tie exactly in noiseless frames, so
/// exact ties are branched on and the branch leaving the smallest residual
/// wins (lowest sorted support on equal residuals). Without exact ties this
/// is plain matching pursuit.
pub fn svc_mp_decode(
    y: &[Complex64],
    a: &Dictionary,
    h: &[Complex64],
    k: usize,
) -> Result<SvcDecodeResult> {
    check_sparsity(k)?;
    let (m, n) = (a.rows(), a.cols());
    if y.len() != m || h.len() != m {
        return Err(SmcError::Dimension(format!(
            "observation length {}, channel length {}, dictionary rows {m}",
            y.len(),
            h.len()
        )));
    }
    let (u, norms) = weighted_atoms(a, h);
    if let Some(j) = norms.iter().position(|&x| x == 0.0) {
        return Err(SmcError::DegenerateChannel(j));
    }
    let mut search = SvcSearch {
        atoms: &u,
        norms: &norms,
        k: k.min(n),
        leaves: Vec::new(),
    };
    search.explore(
        DVector::from_column_slice(y),
        Vec::with_capacity(k),
        Vec::with_capacity(k),
    );
    let mut leaves = search.leaves;
    for leaf in &mut leaves {
        leaf.support.sort_unstable();
    }
    let floor = leaves
        .iter()
        .map(|l| l.residual)
        .fold(f64::INFINITY, f64::min);
    let slack = TIE_TOLERANCE * floor.max(f64::MIN_POSITIVE) + 1e-24;
    let mut best: Vec<&SvcLeaf> = leaves
        .iter()
        .filter(|l| l.residual <= floor + slack)
        .collect();
    best.sort_by(|x, y| x.support.cmp(&y.support));
    let chosen = best[0];
    let ambiguous = best.iter().any(|l| l.support != chosen.support);
    let zero_input = chosen.scores.first().is_some_and(|s| s.score == 0.0);
    let status = if k > n {
        DecodeStatus::Failed
    } else if ambiguous || zero_input {
        DecodeStatus::Undetermined
    } else {
        DecodeStatus::Decoded
    };
    let payload = if status == DecodeStatus::Failed {
        None
    } else {
        support_to_payload(&chosen.support, n, k)?
    };
    Ok(SvcDecodeResult {
        support: chosen.support.clone(),
        payload,
        scores: chosen.scores.clone(),
        status,
    })
}
