use nalgebra::DMatrix;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::PyDict;

use smc_core::analysis::{bler_upper_bound, BoundParams, BoundVariant};
use smc_core::channel::{sample_channel, snr_to_sigma2, transmit as send, ChannelMode};
use smc_core::codec::{capacity_bits as bits_for, Payload, SmcCodeword};
use smc_core::decoder::{
    block_mp_decode, dual_decode, fused_decode, ml_oracle_decode, DecodeResult,
};
use smc_core::harness::{run_sweep, validate as run_validate, SimConfig};
use smc_core::{Complex64, SmcError};

fn err(e: SmcError) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn value<T: std::str::FromStr<Err = SmcError>>(s: &str) -> PyResult<T> {
    s.parse().map_err(err)
}

#[pyclass(name = "Dictionary", frozen)]
struct PyDictionary {
    inner: smc_core::Dictionary,
}

#[pymethods]
impl PyDictionary {
    /// Bernoulli dictionary with entries `+-1/sqrt(m)`.
    #[new]
    #[pyo3(signature = (m, n, seed, expand = false))]
    fn new(m: usize, n: usize, seed: u64, expand: bool) -> PyResult<Self> {
        let inner = if expand {
            smc_core::Dictionary::generate_bernoulli_expanded(m, n, seed)
        } else {
            smc_core::Dictionary::generate_bernoulli(m, n, seed)
        }
        .map_err(err)?;
        Ok(Self { inner })
    }

    #[staticmethod]
    fn identity(n: usize) -> PyResult<Self> {
        Ok(Self {
            inner: smc_core::Dictionary::identity(n).map_err(err)?,
        })
    }

    #[getter]
    fn rows(&self) -> usize {
        self.inner.rows()
    }

    #[getter]
    fn cols(&self) -> usize {
        self.inner.cols()
    }

    #[getter]
    fn seed(&self) -> Option<u64> {
        self.inner.seed()
    }

    fn coherence(&self) -> PyResult<f64> {
        self.inner.coherence().map_err(err)
    }

    fn matrix(&self) -> Vec<Vec<Complex64>> {
        rows_of(self.inner.matrix())
    }

    fn __repr__(&self) -> String {
        format!(
            "Dictionary(m={}, n={}, seed={:?})",
            self.inner.rows(),
            self.inner.cols(),
            self.inner.seed()
        )
    }
}

fn rows_of(m: &DMatrix<Complex64>) -> Vec<Vec<Complex64>> {
    m.row_iter().map(|r| r.iter().copied().collect()).collect()
}

fn matrix_of(rows: &[Vec<Complex64>]) -> PyResult<DMatrix<Complex64>> {
    let r = rows.len();
    let c = rows.first().map_or(0, Vec::len);
    if rows.iter().any(|row| row.len() != c) {
        return Err(PyValueError::new_err("ragged matrix"));
    }
    Ok(DMatrix::from_fn(r, c, |i, j| rows[i][j]))
}

#[pyfunction]
fn capacity_bits(n: usize, k: usize) -> PyResult<u32> {
    bits_for(n, k).map_err(err)
}

#[pyfunction]
fn rank_to_subset(rank: u128, n: usize, k: usize) -> PyResult<Vec<usize>> {
    smc_core::rank_to_subset(rank, n, k).map_err(err)
}

#[pyfunction]
fn subset_to_rank(support: Vec<usize>, n: usize, k: usize) -> PyResult<u128> {
    smc_core::subset_to_rank(&support, n, k).map_err(err)
}

/// Row and column supports of the codeword carrying two integer payloads.
#[pyfunction]
fn encode(
    payload1: u128,
    payload2: u128,
    n: usize,
    k: usize,
) -> PyResult<(Vec<usize>, Vec<usize>)> {
    let bits = bits_for(n, k).map_err(err)?;
    let p1 = Payload::new(payload1, bits).map_err(err)?;
    let p2 = Payload::new(payload2, bits).map_err(err)?;
    let x = smc_core::smc_encode(&p1, &p2, n, k).map_err(err)?;
    Ok((x.rows(), x.cols()))
}

/// Sends the codeword with the given supports; returns `(Y, h)`.
#[pyfunction]
#[pyo3(signature = (dictionary, rows, cols, snr_db = None, channel = "rayleigh", seed = 0, trial = 0))]
fn transmit(
    dictionary: &PyDictionary,
    rows: Vec<usize>,
    cols: Vec<usize>,
    snr_db: Option<f64>,
    channel: &str,
    seed: u64,
    trial: u64,
) -> PyResult<(Vec<Vec<Complex64>>, Vec<Complex64>)> {
    let a = &dictionary.inner;
    let x = SmcCodeword::from_supports(a.cols(), &rows, &cols).map_err(err)?;
    let sigma2 = snr_db.map_or(0.0, |s| snr_to_sigma2(s, a, rows.len()));
    let mode: ChannelMode = value(channel)?;
    let ch = sample_channel(a.rows(), mode, seed, trial)
        .with_sigma2(sigma2)
        .map_err(err)?;
    let frame = send(&x, a, &ch, seed, trial).map_err(err)?;
    Ok((rows_of(&frame.y), ch.h))
}

fn result_dict<'py>(py: Python<'py>, r: &DecodeResult) -> PyResult<Bound<'py, PyDict>> {
    let d = PyDict::new(py);
    d.set_item("pairs", r.pairs.clone())?;
    d.set_item("rows", r.rows())?;
    d.set_item("cols", r.cols())?;
    d.set_item("payload1", r.payload1.map(|p| p.value()))?;
    d.set_item("payload2", r.payload2.map(|p| p.value()))?;
    d.set_item(
        "scores",
        r.scores.iter().map(|s| s.score).collect::<Vec<_>>(),
    )?;
    d.set_item("status", format!("{:?}", r.status).to_lowercase())?;
    d.set_item("distance", r.distance)?;
    Ok(d)
}

/// Decodes `Y` along `path`: primary, dual, fused or ml.
#[pyfunction]
#[pyo3(signature = (dictionary, y, h, k, path = "primary"))]
fn decode<'py>(
    py: Python<'py>,
    dictionary: &PyDictionary,
    y: Vec<Vec<Complex64>>,
    h: Vec<Complex64>,
    k: usize,
    path: &str,
) -> PyResult<Bound<'py, PyDict>> {
    let a = &dictionary.inner;
    let y = matrix_of(&y)?;
    let r = match path {
        "primary" => block_mp_decode(&y, a, &h, k),
        "dual" => dual_decode(&y, a, &h, k),
        "fused" => fused_decode(&y, a, &h, k),
        "ml" => ml_oracle_decode(&y, a, &h, k),
        other => {
            return Err(PyValueError::new_err(format!(
                "unknown decode path {other:?}"
            )))
        }
    }
    .map_err(err)?;
    result_dict(py, &r)
}

#[pyfunction]
#[pyo3(signature = (m, n, k, mu, sigma2, variant = "exact-expectation"))]
fn bler_bound(m: usize, n: usize, k: usize, mu: f64, sigma2: f64, variant: &str) -> PyResult<f64> {
    let v: BoundVariant = value(variant)?;
    let p = BoundParams::unit_values(m, n, k, mu, sigma2, v).map_err(err)?;
    Ok(bler_upper_bound(&p))
}

/// Runs a sweep from key=value config text; returns CSV or JSON text.
#[pyfunction]
#[pyo3(signature = (config, format = "csv", workers = None))]
fn simulate(
    py: Python<'_>,
    config: &str,
    format: &str,
    workers: Option<usize>,
) -> PyResult<String> {
    let mut cfg = SimConfig::parse(config).map_err(err)?;
    if let Some(w) = workers {
        cfg.workers = w;
    }
    let res = py.detach(|| run_sweep(&cfg)).map_err(err)?;
    match format {
        "csv" => Ok(res.to_csv()),
        "json" => Ok(res.to_json()),
        other => Err(PyValueError::new_err(format!("unknown format {other:?}"))),
    }
}

/// `(passed, report)` from the built-in identity and statistics suites.
#[pyfunction]
fn validate(py: Python<'_>) -> PyResult<(bool, String)> {
    let report = py.detach(run_validate).map_err(err)?;
    Ok((report.passed(), report.to_string()))
}

#[pymodule]
fn smc_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyDictionary>()?;
    m.add_function(wrap_pyfunction!(capacity_bits, m)?)?;
    m.add_function(wrap_pyfunction!(rank_to_subset, m)?)?;
    m.add_function(wrap_pyfunction!(subset_to_rank, m)?)?;
    m.add_function(wrap_pyfunction!(encode, m)?)?;
    m.add_function(wrap_pyfunction!(transmit, m)?)?;
    m.add_function(wrap_pyfunction!(decode, m)?)?;
    m.add_function(wrap_pyfunction!(bler_bound, m)?)?;
    m.add_function(wrap_pyfunction!(simulate, m)?)?;
    m.add_function(wrap_pyfunction!(validate, m)?)?;
    Ok(())
}
