//! Spreading dictionaries.
//!
//! A spreading dictionary `A` is an `m x n` matrix with unit-norm columns. The
//! two-sided transmission `A X A^H` uses `A` on the left and its conjugate
//! transpose (the time-spreading dictionary) on the right.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::Rng;

use crate::error::{Result, SmcError};
use crate::rng::{stream_rng, Stream};

/// Relative tolerance of the unit-norm invariant.
pub const NORM_TOLERANCE: f64 = 1e-12;

/// Which dimension of the matrix carries the unit-norm atoms.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Orientation {
    /// Spreading dictionary: unit-norm columns.
    Columns,
    /// Time-spreading dictionary: unit-norm rows.
    Rows,
}

/// Dense spreading dictionary with the seed it was drawn from.
#[derive(Debug, Clone, PartialEq)]
pub struct Dictionary {
    entries: DMatrix<Complex64>,
    seed: Option<u64>,
    orientation: Orientation,
}

impl Dictionary {
    /// Bernoulli dictionary with entries `+-1/sqrt(m)`, compression regime `m <= n`.
    pub fn generate_bernoulli(m: usize, n: usize, seed: u64) -> Result<Self> {
        if m > n {
            return Err(SmcError::Dimension(format!(
                "m = {m} exceeds n = {n}; use generate_bernoulli_expanded for m > n"
            )));
        }
        Self::generate_bernoulli_expanded(m, n, seed)
    }

    /// Bernoulli dictionary without the `m <= n` restriction.
    pub fn generate_bernoulli_expanded(m: usize, n: usize, seed: u64) -> Result<Self> {
        if m == 0 || n == 0 {
            return Err(SmcError::Dimension(format!(
                "dictionary dimensions must be positive, got {m} x {n}"
            )));
        }
        let mut rng = stream_rng(seed, ((m as u64) << 32) | n as u64, Stream::Dictionary);
        let amp = 1.0 / (m as f64).sqrt();
        // Column-major draw order, one bit per entry.
        let mut entries = DMatrix::<Complex64>::zeros(m, n);
        for j in 0..n {
            for i in 0..m {
                let sign = if rng.random::<bool>() { amp } else { -amp };
                entries[(i, j)] = Complex64::new(sign, 0.0);
            }
        }
        Ok(Self {
            entries,
            seed: Some(seed),
            orientation: Orientation::Columns,
        })
    }

    /// Wraps an explicit matrix; every column must already be unit-norm.
    pub fn from_matrix(entries: DMatrix<Complex64>) -> Result<Self> {
        if entries.nrows() == 0 || entries.ncols() == 0 {
            return Err(SmcError::Dimension("empty dictionary".into()));
        }
        for (j, col) in entries.column_iter().enumerate() {
            let norm = col.norm();
            if (norm - 1.0).abs() > NORM_TOLERANCE {
                return Err(SmcError::Validation(format!(
                    "column {j} has norm {norm}, expected 1"
                )));
            }
        }
        Ok(Self {
            entries,
            seed: None,
            orientation: Orientation::Columns,
        })
    }

    /// Wraps a real row-major matrix, see [`Dictionary::from_matrix`].
    pub fn from_real_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let m = rows.len();
        let n = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != n) {
            return Err(SmcError::Dimension("ragged rows".into()));
        }
        Self::from_matrix(DMatrix::from_fn(m, n, |i, j| {
            Complex64::new(rows[i][j], 0.0)
        }))
    }

    /// `n x n` identity dictionary.
    pub fn identity(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(SmcError::Dimension("empty dictionary".into()));
        }
        Self::from_matrix(DMatrix::identity(n, n))
    }

    /// Copy with every entry multiplied by `scale`, skipping the norm check.
    ///
    /// Exists only so validation suites can run negative controls.
    #[doc(hidden)]
    pub fn scaled_unchecked(&self, scale: f64) -> Self {
        Self {
            entries: self.entries.map(|z| z * scale),
            seed: self.seed,
            orientation: self.orientation,
        }
    }

    pub fn rows(&self) -> usize {
        self.entries.nrows()
    }

    pub fn cols(&self) -> usize {
        self.entries.ncols()
    }

    pub fn seed(&self) -> Option<u64> {
        self.seed
    }

    pub fn orientation(&self) -> Orientation {
        self.orientation
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.entries
    }

    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.entries[(i, j)]
    }

    /// Column `j` as an owned vector.
    pub fn column(&self, j: usize) -> Vec<Complex64> {
        self.entries.column(j).iter().copied().collect()
    }

    /// True when every entry has zero imaginary part.
    pub fn is_real(&self) -> bool {
        self.entries.iter().all(|z| z.im == 0.0)
    }

    /// Mean of `|a_ij|^2` over all entries.
    pub fn mean_entry_power(&self) -> f64 {
        self.entries.iter().map(|z| z.norm_sqr()).sum::<f64>() / self.entries.len() as f64
    }

    /// Maximum absolute inner product between distinct atoms.
    pub fn coherence(&self) -> Result<f64> {
        let gram = match self.orientation {
            Orientation::Columns => self.entries.adjoint() * &self.entries,
            Orientation::Rows => &self.entries * self.entries.adjoint(),
        };
        let atoms = gram.nrows();
        if atoms < 2 {
            return Err(SmcError::Domain(
                "coherence needs at least two atoms".into(),
            ));
        }
        let mut mu = 0.0f64;
        for i in 0..atoms {
            for j in (i + 1)..atoms {
                mu = mu.max(gram[(i, j)].norm());
            }
        }
        Ok(mu.min(1.0))
    }

    /// Time-spreading dictionary `B = A^H`.
    pub fn time_spreading(&self) -> Self {
        Self {
            entries: self.entries.adjoint(),
            seed: self.seed,
            orientation: match self.orientation {
                Orientation::Columns => Orientation::Rows,
                Orientation::Rows => Orientation::Columns,
            },
        }
    }
}
