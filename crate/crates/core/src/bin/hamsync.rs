use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use hamsync::harness::{
    bounds_report, emit_report, run_experiment, run_remote_side, write_report, ExperimentConfig, Format,
    ProtocolId, ReportRow, Sampling, TransportSpec,
};
use hamsync::probproto::{InnerMode, ProbParams};
use hamsync::transport::{Role, TcpLink};
use hamsync::{Error, Result};

#[derive(Parser)]
#[command(name = "hamsync", version, about = "Synchronize bit strings that differ in few positions")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a protocol over many instances and report costs and success rates.
    Run(RunArgs),
    /// Print entropy and ball-volume reference values.
    Bounds {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        alpha: f64,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum TransportKind {
    Loopback,
    Tcp,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Csv,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum InnerArg {
    Nearest,
    Nba,
}

#[derive(Args)]
struct RunArgs {
    /// naive, brute, syndrome, listdec, coloring, oneround or smith.
    #[arg(long)]
    protocol: ProtocolId,
    #[arg(long)]
    n: usize,
    #[arg(long)]
    alpha: f64,
    #[arg(long, default_value_t = 100)]
    trials: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, value_enum, default_value = "loopback")]
    transport: TransportKind,
    /// Play Bob, waiting for Alice on this address.
    #[arg(long, conflicts_with = "connect")]
    listen: Option<String>,
    /// Play Alice, connecting to Bob at this address.
    #[arg(long)]
    connect: Option<String>,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "csv")]
    format: FormatArg,
    /// Never enumerate instances exhaustively.
    #[arg(long, conflicts_with = "exhaustive")]
    monte_carlo: bool,
    /// Enumerate every promise pair (small deterministic runs only).
    #[arg(long)]
    exhaustive: bool,
    /// Use X = Y in every trial.
    #[arg(long)]
    equal: bool,
    /// Add wall time to the report.
    #[arg(long)]
    timing: bool,
    /// Code dimension for syndrome, listdec and oneround.
    #[arg(long)]
    code_dim: Option<usize>,
    /// Prime-pool oversampling for oneround.
    #[arg(long, default_value_t = 16)]
    oversampling: u64,
    /// smith: block size.
    #[arg(long)]
    k: Option<usize>,
    /// smith: extra Reed-Solomon evaluations.
    #[arg(long)]
    s: Option<usize>,
    /// smith: slack added to alpha for the inner radius.
    #[arg(long)]
    delta: Option<f64>,
    /// smith: inner code dimension.
    #[arg(long)]
    inner_dim: Option<usize>,
    /// smith: how each block's candidate list is resolved.
    #[arg(long, value_enum)]
    inner: Option<InnerArg>,
}

impl RunArgs {
    fn config(&self) -> ExperimentConfig {
        let mut c = ExperimentConfig::new(self.protocol, self.n, self.alpha);
        c.trials = self.trials;
        c.seed = self.seed;
        c.sampling = match (self.monte_carlo, self.exhaustive) {
            (true, _) => Sampling::MonteCarlo,
            (_, true) => Sampling::Exhaustive,
            _ => Sampling::Auto,
        };
        if let TransportKind::Tcp = self.transport {
            c.transport = TransportSpec::Tcp("127.0.0.1:0".into());
        }
        c.code_dim = self.code_dim;
        c.oversampling = self.oversampling;
        c.force_equal = self.equal;
        c.timing = self.timing;
        if self.k.is_some() || self.s.is_some() || self.delta.is_some() || self.inner_dim.is_some() || self.inner.is_some() {
            let d = ProbParams::defaults_for(self.n);
            let mut p = ProbParams::new(self.k.unwrap_or(d.k), self.s.unwrap_or(d.s), self.delta.unwrap_or(d.delta));
            if let Some(dim) = self.inner_dim {
                p.inner_dim = dim;
            }
            if let Some(InnerArg::Nba) = self.inner {
                p.inner_mode = InnerMode::Nba;
            }
            c.smith = Some(p);
        }
        c
    }

    fn format(&self) -> Format {
        match self.format {
            FormatArg::Csv => Format::Csv,
            FormatArg::Json => Format::Json,
        }
    }
}

fn output(rows: &[ReportRow], args: &RunArgs) -> Result<()> {
    match &args.out {
        Some(path) => emit_report(rows, args.format(), path),
        None => write_report(rows, args.format(), std::io::stdout().lock()),
    }
}

fn run(args: RunArgs) -> Result<()> {
    let config = args.config();
    if (args.listen.is_some() || args.connect.is_some()) && matches!(args.transport, TransportKind::Loopback) {
        return Err(Error::Config("--listen and --connect need --transport tcp".into()));
    }
    let remote = match (&args.listen, &args.connect) {
        (Some(addr), _) => Some((Role::Bob, TcpLink::listen(addr.as_str())?)),
        (_, Some(addr)) => Some((Role::Alice, TcpLink::connect(addr.as_str())?)),
        _ => None,
    };
    match remote {
        None => output(&run_experiment(&config)?, &args),
        Some((role, mut link)) => match run_remote_side(&config, role, &mut link)? {
            Some(rows) => output(&rows, &args),
            None => {
                eprintln!("alice: finished {} trials", config.trials);
                Ok(())
            }
        },
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Run(args) => run(args),
        Command::Bounds { n, alpha } => bounds_report(n, alpha).map(|b| println!("{b}")),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
