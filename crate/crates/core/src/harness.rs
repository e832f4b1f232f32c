//! Experiment runner: sweeps a protocol over seeded or exhaustive instances
//! and aggregates bit counts, rounds and success rates into report rows.

use std::collections::BTreeMap;
use std::fmt;
use std::io::Write;
use std::path::Path;
use std::str::FromStr;
use std::sync::Arc;
use std::time::Instant;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bitword::{ball_volume, binary_entropy, log2_biguint, lower_bound_bits, Bounds, Word};
use crate::error::{Error, Result};
use crate::gf2codes::{hamming_7_4, random_linear_code, LinearCode, SyndromeDecoder, LIST_DECODE_MAX_N};
use crate::probproto::{composite_parties, one_round_parties, OneRoundSetup, ProbParams};
use crate::syncdet::{
    brute_parties, coloring_parties, listdec_parties, naive_parties, syndrome_parties, GreedyColoring,
    SyncInstance, COLORING_MAX_N,
};
use crate::transport::{run_remote, tcp_channel, Endpoint, PartyPair, ProtocolOutcome, Role, TcpLink};

/// Upper limit on `2^n Vol(r, n)` for enumerating every promise pair.
pub const EXHAUSTIVE_LIMIT: u64 = 1_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ProtocolId {
    Naive,
    Brute,
    Syndrome,
    Listdec,
    Coloring,
    Oneround,
    Smith,
}

impl ProtocolId {
    pub const ALL: [ProtocolId; 7] = [
        ProtocolId::Naive,
        ProtocolId::Brute,
        ProtocolId::Syndrome,
        ProtocolId::Listdec,
        ProtocolId::Coloring,
        ProtocolId::Oneround,
        ProtocolId::Smith,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ProtocolId::Naive => "naive",
            ProtocolId::Brute => "brute",
            ProtocolId::Syndrome => "syndrome",
            ProtocolId::Listdec => "listdec",
            ProtocolId::Coloring => "coloring",
            ProtocolId::Oneround => "oneround",
            ProtocolId::Smith => "smith",
        }
    }

    /// True when runs need no randomness beyond the instance.
    pub fn is_deterministic(self) -> bool {
        !matches!(self, ProtocolId::Oneround | ProtocolId::Smith)
    }
}

impl fmt::Display for ProtocolId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ProtocolId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        ProtocolId::ALL
            .into_iter()
            .find(|p| p.name() == s)
            .ok_or_else(|| {
                let names: Vec<_> = ProtocolId::ALL.iter().map(|p| p.name()).collect();
                Error::Config(format!("unknown protocol {s:?}; expected one of {}", names.join(", ")))
            })
    }
}

/// How instances are produced.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Sampling {
    /// Exhaustive for deterministic protocols within [`EXHAUSTIVE_LIMIT`],
    /// Monte Carlo otherwise.
    #[default]
    Auto,
    MonteCarlo,
    Exhaustive,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub enum TransportSpec {
    #[default]
    Loopback,
    /// Both parties in this process, talking over a real socket bound here.
    Tcp(String),
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Format {
    #[default]
    Csv,
    Json,
}

impl FromStr for Format {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            _ => Err(Error::Config(format!("unknown format {s:?}; use csv or json"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ExperimentConfig {
    pub protocol: ProtocolId,
    pub n: usize,
    pub alpha: f64,
    pub trials: usize,
    pub seed: u64,
    pub sampling: Sampling,
    pub transport: TransportSpec,
    /// Dimension of the code for `syndrome`, `listdec` and `oneround`.
    pub code_dim: Option<usize>,
    /// Oversampling factor of the `oneround` prime pool.
    pub oversampling: u64,
    /// Parameters of `smith`; derived from `n` when absent.
    pub smith: Option<ProbParams>,
    /// Use `X = Y` in every trial.
    pub force_equal: bool,
    /// Record wall time; off by default so reports are byte-stable.
    pub timing: bool,
}

impl ExperimentConfig {
    pub fn new(protocol: ProtocolId, n: usize, alpha: f64) -> Self {
        ExperimentConfig {
            protocol,
            n,
            alpha,
            trials: 100,
            seed: 0,
            sampling: Sampling::Auto,
            transport: TransportSpec::Loopback,
            code_dim: None,
            oversampling: 16,
            smith: None,
            force_equal: false,
            timing: false,
        }
    }

    pub fn bounds(&self) -> Result<Bounds> {
        Bounds::new(self.alpha, self.n).map_err(|e| Error::Config(e.to_string()))
    }

    fn smith_params(&self) -> ProbParams {
        self.smith.unwrap_or_else(|| ProbParams::defaults_for(self.n))
    }
}

/// One aggregated line of an experiment. Field order is the CSV column order.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReportRow {
    pub protocol: String,
    pub mode: String,
    pub n: usize,
    pub alpha: f64,
    pub trials: usize,
    pub mean_bits: f64,
    pub max_bits: usize,
    pub rounds: usize,
    pub success_rate: f64,
    pub reported_failure_rate: f64,
    pub silent_error_rate: f64,
    pub lower_bound_bits: f64,
    pub h2alpha_n: f64,
    /// Mean bits per protocol stage, `name=value` pairs joined by `;`.
    pub breakdown: String,
    pub wall_time_s: Option<f64>,
}

pub const CSV_HEADER: [&str; 15] = [
    "protocol",
    "mode",
    "n",
    "alpha",
    "trials",
    "mean_bits",
    "max_bits",
    "rounds",
    "success_rate",
    "reported_failure_rate",
    "silent_error_rate",
    "lower_bound_bits",
    "h2alpha_n",
    "breakdown",
    "wall_time_s",
];

/// Per-experiment artifacts built once and shared by every trial.
enum Prepared {
    Naive,
    Brute(LinearCode),
    Syndrome(LinearCode),
    Listdec { code: LinearCode, radius: usize },
    Coloring(Arc<GreedyColoring>),
    Oneround(OneRoundSetup),
    Smith(ProbParams),
}

fn config_err(e: Error) -> Error {
    match e {
        Error::Config(_) => e,
        other => Error::Config(other.to_string()),
    }
}

/// A code of length `n` and the largest dimension `<= max_dim` found (by
/// seeded sampling) that uniquely decodes `radius`.
fn unique_decoding_code(n: usize, max_dim: usize, radius: usize, rng: &mut ChaCha8Rng) -> Result<LinearCode> {
    if n == 7 && max_dim >= 4 && radius <= 1 {
        return Ok(hamming_7_4());
    }
    for dim in (1..=max_dim.min(n - 1)).rev() {
        if n - dim > 24 {
            break;
        }
        for _ in 0..64 {
            let code = random_linear_code(n, dim, rng)?;
            if SyndromeDecoder::new(&code, radius).is_ok() {
                return Ok(code);
            }
        }
    }
    Err(Error::Config(format!("no code of length {n} found that uniquely decodes radius {radius}")))
}

/// The shortest systematic extension `[n + c, n]` that uniquely decodes `radius`.
fn brute_code(n: usize, radius: usize, rng: &mut ChaCha8Rng) -> Result<LinearCode> {
    if n == 4 && radius <= 1 {
        return Ok(hamming_7_4());
    }
    for c in 1..=24 {
        for _ in 0..64 {
            let code = random_linear_code(n + c, n, rng)?;
            if SyndromeDecoder::new(&code, radius).is_ok() {
                return Ok(code);
            }
        }
    }
    Err(Error::Config(format!("no brute code found for n = {n}, radius {radius}")))
}

/// Default list-decoding dimension: `n - ceil(log2 Vol(r, n))`, at least 1.
pub fn default_list_dim(n: usize, radius: usize) -> usize {
    let vol = ball_volume(radius, n).expect("radius <= n");
    n.saturating_sub(log2_biguint(&vol).ceil() as usize).max(1).min(n - 1)
}

fn prepare(config: &ExperimentConfig) -> Result<Prepared> {
    let bounds = config.bounds()?;
    let (n, r) = (config.n, bounds.radius());
    if config.trials == 0 {
        return Err(Error::Config("trials must be at least 1".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    rng.set_stream(1);
    let list_code = |rng: &mut ChaCha8Rng| -> Result<LinearCode> {
        if !(2..=LIST_DECODE_MAX_N).contains(&n) {
            return Err(Error::Config(format!(
                "{} needs 2 <= n <= {LIST_DECODE_MAX_N}, got {n}",
                config.protocol
            )));
        }
        let dim = config.code_dim.unwrap_or_else(|| default_list_dim(n, r));
        random_linear_code(n, dim, rng).map_err(config_err)
    };
    Ok(match config.protocol {
        ProtocolId::Naive => Prepared::Naive,
        ProtocolId::Brute => {
            if n > 16 {
                return Err(Error::Config(format!("brute supports n <= 16, got {n}")));
            }
            Prepared::Brute(brute_code(n, r, &mut rng)?)
        }
        ProtocolId::Syndrome => {
            if !(2..=LIST_DECODE_MAX_N).contains(&n) {
                return Err(Error::Config(format!("syndrome needs 2 <= n <= {LIST_DECODE_MAX_N}")));
            }
            let max_dim = config.code_dim.unwrap_or(n - 1);
            Prepared::Syndrome(unique_decoding_code(n, max_dim, r, &mut rng)?)
        }
        ProtocolId::Listdec => Prepared::Listdec {
            code: list_code(&mut rng)?,
            radius: r,
        },
        ProtocolId::Coloring => {
            if n > COLORING_MAX_N {
                return Err(Error::Config(format!("coloring supports n <= {COLORING_MAX_N}")));
            }
            Prepared::Coloring(Arc::new(GreedyColoring::build(n, r).map_err(config_err)?))
        }
        ProtocolId::Oneround => {
            let code = list_code(&mut rng)?;
            Prepared::Oneround(OneRoundSetup::new(code, r, config.oversampling).map_err(config_err)?)
        }
        ProtocolId::Smith => {
            let params = config.smith_params();
            params.validate(config.alpha, n).map_err(config_err)?;
            Prepared::Smith(params)
        }
    })
}

impl Prepared {
    fn parties(&self, instance: &SyncInstance, rng: &mut ChaCha8Rng) -> Result<PartyPair> {
        match self {
            Prepared::Naive => Ok(naive_parties(instance)),
            Prepared::Brute(code) => brute_parties(code, instance),
            Prepared::Syndrome(code) => syndrome_parties(code, instance),
            Prepared::Listdec { code, radius } => listdec_parties(code, *radius, instance),
            Prepared::Coloring(c) => coloring_parties(c.clone(), instance),
            Prepared::Oneround(setup) => one_round_parties(setup, instance, rng),
            Prepared::Smith(params) => composite_parties(instance, params, rng),
        }
    }
}

fn trial_rng(seed: u64, trial: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(2 + trial as u64);
    rng
}

/// The instance and party randomness of trial `trial` under `config`.
fn trial_setup(config: &ExperimentConfig, trial: usize) -> Result<(SyncInstance, ChaCha8Rng)> {
    let bounds = config.bounds()?;
    let mut rng = trial_rng(config.seed, trial);
    let mut instance = SyncInstance::random(bounds, &mut rng)?;
    if config.force_equal {
        instance.x = instance.y.clone();
    }
    Ok((instance, rng))
}

fn exhaustive_count(n: usize, r: usize) -> Option<u64> {
    if n >= 40 {
        return None;
    }
    let vol = ball_volume(r, n).ok()?;
    let total = vol * (1u64 << n);
    u64::try_from(total).ok().filter(|&t| t <= EXHAUSTIVE_LIMIT)
}

/// Every promise pair `(X, Y)`, `X` in integer order, `Y` by flip pattern.
fn exhaustive_instances(bounds: Bounds) -> Result<Vec<SyncInstance>> {
    let (n, r) = (bounds.n(), bounds.radius());
    let masks: Vec<u64> = (0..1u64 << n)
        .filter(|m| (m.count_ones() as usize) <= r)
        .collect();
    let mut out = Vec::new();
    for x in 0..1u64 << n {
        for m in &masks {
            out.push(SyncInstance {
                x: Word::from_u64(x, n)?,
                y: Word::from_u64(x ^ m, n)?,
                bounds,
            });
        }
    }
    Ok(out)
}

#[derive(Clone, Debug)]
struct TrialResult {
    bits: usize,
    rounds: usize,
    success: bool,
    reported_failure: bool,
    breakdown: BTreeMap<String, f64>,
}

fn run_pair(pair: PartyPair, transport: &TransportSpec) -> Result<ProtocolOutcome> {
    match transport {
        TransportSpec::Loopback => pair.run_loopback(),
        TransportSpec::Tcp(addr) => pair.run(&mut tcp_channel(&Endpoint::Listen(addr.clone()))?),
    }
}

fn judge(instance: &SyncInstance, outcome: &ProtocolOutcome) -> TrialResult {
    TrialResult {
        bits: outcome.total_bits(),
        rounds: outcome.rounds(),
        success: outcome.recovered_equals(&instance.x),
        reported_failure: outcome.reported_failure,
        breakdown: outcome
            .diagnostics
            .iter()
            .filter(|(k, _)| k.starts_with("bits_"))
            .map(|(k, v)| (k.clone(), *v))
            .collect(),
    }
}

fn aggregate(config: &ExperimentConfig, mode: &str, results: &[TrialResult]) -> Result<ReportRow> {
    let bounds = config.bounds()?;
    let t = results.len().max(1) as f64;
    let rate = |f: &dyn Fn(&TrialResult) -> bool| results.iter().filter(|r| f(r)).count() as f64 / t;
    let mut stages: BTreeMap<String, f64> = BTreeMap::new();
    for r in results {
        for (k, v) in &r.breakdown {
            *stages.entry(k.clone()).or_default() += v;
        }
    }
    let breakdown = stages
        .iter()
        .map(|(k, v)| format!("{}={}", k.trim_start_matches("bits_"), v / t))
        .collect::<Vec<_>>()
        .join(";");
    Ok(ReportRow {
        protocol: config.protocol.name().to_string(),
        mode: mode.to_string(),
        n: config.n,
        alpha: config.alpha,
        trials: results.len(),
        mean_bits: results.iter().map(|r| r.bits as f64).sum::<f64>() / t,
        max_bits: results.iter().map(|r| r.bits).max().unwrap_or(0),
        rounds: results.iter().map(|r| r.rounds).max().unwrap_or(0),
        success_rate: rate(&|r| r.success),
        reported_failure_rate: rate(&|r| r.reported_failure),
        silent_error_rate: rate(&|r| !r.success && !r.reported_failure),
        lower_bound_bits: lower_bound_bits(&bounds),
        h2alpha_n: binary_entropy((2.0 * config.alpha).min(1.0))? * config.n as f64,
        breakdown,
        wall_time_s: None,
    })
}

/// Runs every trial of `config` and aggregates them into one row.
///
/// Deterministic under a fixed seed: each trial draws from its own stream of
/// the seed, and results are reduced in trial order.
pub fn run_experiment(config: &ExperimentConfig) -> Result<Vec<ReportRow>> {
    let start = Instant::now();
    let prepared = prepare(config)?;
    let bounds = config.bounds()?;
    let exhaustive_ok = config.protocol.is_deterministic()
        && !config.force_equal
        && exhaustive_count(bounds.n(), bounds.radius()).is_some();
    let exhaustive = match config.sampling {
        Sampling::Auto => exhaustive_ok,
        Sampling::MonteCarlo => false,
        Sampling::Exhaustive if exhaustive_ok => true,
        Sampling::Exhaustive => {
            return Err(Error::Config(format!(
                "exhaustive sampling needs a deterministic protocol and 2^n Vol(r, n) <= {EXHAUSTIVE_LIMIT}"
            )))
        }
    };

    let results: Vec<TrialResult> = if exhaustive {
        exhaustive_instances(bounds)?
            .par_iter()
            .map(|inst| {
                let mut rng = trial_rng(config.seed, 0);
                let outcome = run_pair(prepared.parties(inst, &mut rng)?, &config.transport)?;
                Ok(judge(inst, &outcome))
            })
            .collect::<Result<_>>()?
    } else {
        (0..config.trials)
            .into_par_iter()
            .map(|t| {
                let (inst, mut rng) = trial_setup(config, t)?;
                let outcome = run_pair(prepared.parties(&inst, &mut rng)?, &config.transport)?;
                Ok(judge(&inst, &outcome))
            })
            .collect::<Result<_>>()?
    };

    let mode = if exhaustive { "exhaustive" } else { "monte_carlo" };
    let mut row = aggregate(config, mode, &results)?;
    if config.timing {
        row.wall_time_s = Some(start.elapsed().as_secs_f64());
    }
    Ok(vec![row])
}

/// Runs one side of a two-process experiment over an established link.
///
/// Both processes must use the same config; each rebuilds every instance from
/// the seed and plays its own role. Only Bob sees complete transcripts, so
/// only Bob returns a report.
pub fn run_remote_side(config: &ExperimentConfig, role: Role, link: &mut TcpLink) -> Result<Option<Vec<ReportRow>>> {
    let start = Instant::now();
    let prepared = prepare(config)?;
    let mut results = Vec::with_capacity(config.trials);
    for t in 0..config.trials {
        let (inst, mut rng) = trial_setup(config, t)?;
        let mut party = prepared.parties(&inst, &mut rng)?.into_role(role);
        let report = run_remote(party.as_mut(), role, link)?;
        if role == Role::Bob {
            let reported_failure = report.finish.recovered.is_none();
            let outcome = ProtocolOutcome {
                recovered: report.finish.recovered,
                reported_failure,
                transcript: report.transcript,
                diagnostics: report.finish.diagnostics,
            };
            results.push(judge(&inst, &outcome));
        }
    }
    if role == Role::Alice {
        return Ok(None);
    }
    let mut row = aggregate(config, "monte_carlo", &results)?;
    if config.timing {
        row.wall_time_s = Some(start.elapsed().as_secs_f64());
    }
    Ok(Some(vec![row]))
}

/// Writes rows as CSV (fixed header, header-only when empty) or as a JSON
/// array of objects.
pub fn write_report<W: Write>(rows: &[ReportRow], format: Format, out: W) -> Result<()> {
    match format {
        Format::Csv => {
            let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(out);
            w.write_record(CSV_HEADER).map_err(report_err)?;
            for row in rows {
                w.serialize(row).map_err(report_err)?;
            }
            w.flush()?;
        }
        Format::Json => {
            let mut out = out;
            serde_json::to_writer_pretty(&mut out, rows).map_err(report_err)?;
            out.write_all(b"\n")?;
        }
    }
    Ok(())
}

fn report_err(e: impl fmt::Display) -> Error {
    Error::Report(e.to_string())
}

pub fn emit_report(rows: &[ReportRow], format: Format, path: &Path) -> Result<()> {
    let io_err = |source| Error::Io {
        path: path.to_path_buf(),
        source,
    };
    let mut buf = Vec::new();
    write_report(rows, format, &mut buf)?;
    std::fs::write(path, buf).map_err(io_err)
}

/// Reads rows written by [`write_report`].
pub fn read_report(text: &str, format: Format) -> Result<Vec<ReportRow>> {
    match format {
        Format::Json => serde_json::from_str(text).map_err(report_err),
        Format::Csv => csv::Reader::from_reader(text.as_bytes())
            .deserialize()
            .collect::<std::result::Result<_, _>>()
            .map_err(report_err),
    }
}

/// Reference quantities for the promise `(alpha, n)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundsReport {
    pub n: usize,
    pub alpha: f64,
    pub radius: usize,
    pub h_alpha_n: f64,
    pub h_2alpha_n: f64,
    pub log2_vol_r: f64,
    pub log2_vol_2r: f64,
}

pub fn bounds_report(n: usize, alpha: f64) -> Result<BoundsReport> {
    let bounds = Bounds::new(alpha, n)?;
    let r = bounds.radius();
    Ok(BoundsReport {
        n,
        alpha,
        radius: r,
        h_alpha_n: binary_entropy(alpha)? * n as f64,
        h_2alpha_n: binary_entropy((2.0 * alpha).min(1.0))? * n as f64,
        log2_vol_r: log2_biguint(&ball_volume(r, n)?),
        log2_vol_2r: log2_biguint(&ball_volume((2 * r).min(n), n)?),
    })
}

impl fmt::Display for BoundsReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "n              {}", self.n)?;
        writeln!(f, "alpha          {}", self.alpha)?;
        writeln!(f, "radius         {}", self.radius)?;
        writeln!(f, "H(a) n         {:.3}", self.h_alpha_n)?;
        writeln!(f, "H(2a) n        {:.3}", self.h_2alpha_n)?;
        writeln!(f, "log2 Vol(r)    {:.3}", self.log2_vol_r)?;
        write!(f, "log2 Vol(2r)   {:.3}", self.log2_vol_2r)
    }
}
