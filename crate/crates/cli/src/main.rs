use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use smc_core::analysis::{bler_upper_bound, efficiency, BoundParams, BoundVariant};
use smc_core::channel::{db_to_linear, sample_channel, transmit, ChannelMode};
use smc_core::codec::{capacity_bits, smc_encode, Payload};
use smc_core::decoder::{block_mp_decode, dual_decode, fused_decode};
use smc_core::harness::{run_comparison, run_sweep, validate, Scheme, SimConfig};
use smc_core::rng::{stream_rng, Stream};
use smc_core::{Dictionary, SmcError};

#[derive(Parser)]
#[command(name = "smc", version, about = "Sparse matrix coding link simulator")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Run a BLER sweep described by a key=value config file.
    Simulate {
        #[arg(long)]
        config: PathBuf,
        /// Output file; stdout when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "csv")]
        format: Format,
        /// Overrides the config's worker count.
        #[arg(long)]
        workers: Option<usize>,
    },
    /// SMC against SVC at equal payload and total channel uses.
    Compare {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Closed-form BLER bound at the given SNRs.
    Bound {
        #[arg(long)]
        m: usize,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        mu: f64,
        #[arg(long = "snr-db", num_args = 1.., required = true, allow_negative_numbers = true)]
        snr_db: Vec<f64>,
        #[arg(long, default_value = "exact-expectation")]
        variant: BoundVariant,
    },
    /// Identity and statistics suites; nonzero exit on any failure.
    Validate {
        #[arg(long)]
        json: bool,
    },
    /// Payload size and spectral efficiency of one frame.
    Capacity {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        m: usize,
        #[arg(long, default_value = "smc")]
        scheme: Scheme,
    },
    /// Encode, send noiselessly over Rayleigh fading and decode one frame.
    Roundtrip {
        #[arg(long)]
        m: usize,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// User 1 payload as MSB-first hex; random when omitted.
        #[arg(long)]
        payload1: Option<String>,
        #[arg(long)]
        payload2: Option<String>,
    },
}

fn emit(out: Option<&PathBuf>, text: &str) -> io::Result<()> {
    match out {
        Some(path) => fs::write(path, text),
        None => io::stdout().lock().write_all(text.as_bytes()),
    }
}

fn load_config(path: &PathBuf) -> Result<SimConfig, SmcError> {
    let text = fs::read_to_string(path)?;
    SimConfig::parse(&text)
}

fn simulate(
    config: &PathBuf,
    out: Option<&PathBuf>,
    format: Format,
    workers: Option<usize>,
) -> Result<(), SmcError> {
    let mut cfg = load_config(config)?;
    if let Some(w) = workers {
        cfg.workers = w;
    }
    let res = run_sweep(&cfg)?;
    let text = match format {
        Format::Csv => res.to_csv(),
        Format::Json => res.to_json() + "\n",
    };
    emit(out, &text)?;
    Ok(())
}

fn compare(config: &PathBuf, out: Option<&PathBuf>) -> Result<(), SmcError> {
    let cfg = load_config(config)?;
    let rows = run_comparison(&cfg)?;
    let mut text = String::from(
        "snr_db,smc_bler,svc_bler,bits_per_user,smc_channel_uses,svc_channel_uses_per_user\n",
    );
    for r in rows {
        text.push_str(&format!(
            "{},{},{},{},{},{}\n",
            r.snr_db,
            r.smc_bler,
            r.svc_bler,
            r.bits_per_user,
            r.smc_channel_uses,
            r.svc_channel_uses_per_user
        ));
    }
    emit(out, &text)?;
    Ok(())
}

fn bound(
    m: usize,
    n: usize,
    k: usize,
    mu: f64,
    snr_db: &[f64],
    variant: BoundVariant,
) -> Result<(), SmcError> {
    let mut text = String::from("snr_db,sigma2,variant,bler_bound\n");
    for &snr in snr_db {
        // Bernoulli entries have power 1/m, so the SMC receive power is K/m^2.
        let sigma2 = k as f64 / (m * m) as f64 / db_to_linear(snr);
        let p = BoundParams::unit_values(m, n, k, mu, sigma2, variant)?;
        text.push_str(&format!(
            "{snr},{sigma2},{variant},{}\n",
            bler_upper_bound(&p)
        ));
    }
    emit(None, &text)?;
    Ok(())
}

fn parse_payload(
    hex: Option<&String>,
    bits: u32,
    seed: u64,
    user: u64,
) -> Result<Payload, SmcError> {
    match hex {
        Some(h) => Payload::from_hex(h, bits),
        None => Ok(Payload::random(
            bits,
            &mut stream_rng(seed, user, Stream::Payload),
        )),
    }
}

fn roundtrip(
    m: usize,
    n: usize,
    k: usize,
    seed: u64,
    payload1: Option<&String>,
    payload2: Option<&String>,
) -> Result<bool, SmcError> {
    let a = Dictionary::generate_bernoulli(m, n, seed)?;
    let bits = capacity_bits(n, k)?;
    let p1 = parse_payload(payload1, bits, seed, 1)?;
    let p2 = parse_payload(payload2, bits, seed, 2)?;
    let x = smc_encode(&p1, &p2, n, k)?;
    let ch = sample_channel(m, ChannelMode::Rayleigh, seed, 0);
    let y = transmit(&x, &a, &ch, seed, 0)?.y;
    let mut ok = true;
    let mut paths = Vec::new();
    for dec in [
        block_mp_decode(&y, &a, &ch.h, k)?,
        dual_decode(&y, &a, &ch.h, k)?,
        fused_decode(&y, &a, &ch.h, k)?,
    ] {
        let hit = dec.matches(&x);
        ok &= hit;
        paths.push(json!({
            "path": dec.path,
            "status": dec.status,
            "payload1": dec.payload1.map(|p| p.to_hex()),
            "payload2": dec.payload2.map(|p| p.to_hex()),
            "rows": dec.rows(),
            "cols": dec.cols(),
            "ok": hit,
        }));
    }
    let report = json!({
        "m": m,
        "n": n,
        "k": k,
        "seed": seed,
        "bits_per_user": bits,
        "payload1": p1.to_hex(),
        "payload2": p2.to_hex(),
        "rows": x.rows(),
        "cols": x.cols(),
        "decoded": paths,
        "ok": ok,
    });
    println!("{}", serde_json::to_string_pretty(&report).expect("json"));
    Ok(ok)
}

fn run(cli: Cli) -> Result<bool, SmcError> {
    match cli.command {
        Command::Simulate {
            config,
            out,
            format,
            workers,
        } => simulate(&config, out.as_ref(), format, workers)?,
        Command::Compare { config, out } => compare(&config, out.as_ref())?,
        Command::Bound {
            m,
            n,
            k,
            mu,
            snr_db,
            variant,
        } => bound(m, n, k, mu, &snr_db, variant)?,
        Command::Validate { json } => {
            let report = validate()?;
            if json {
                println!("{}", serde_json::to_string_pretty(&report).expect("json"));
            } else {
                print!("{report}");
            }
            return Ok(report.passed());
        }
        Command::Capacity { n, k, m, scheme } => {
            let e = efficiency(n, k, m, scheme)?;
            let mut v = serde_json::to_value(e).expect("json");
            v["scheme"] = json!(scheme.as_str());
            println!("{}", serde_json::to_string_pretty(&v).expect("json"));
        }
        Command::Roundtrip {
            m,
            n,
            k,
            seed,
            payload1,
            payload2,
        } => {
            return roundtrip(m, n, k, seed, payload1.as_ref(), payload2.as_ref());
        }
    }
    Ok(true)
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::FAILURE,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
