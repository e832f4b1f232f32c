//! Runs a batch of trials through the harness and prints the CSV report.

use hamsync::harness::{run_experiment, write_report, ExperimentConfig, Format, ProtocolId};

fn main() -> hamsync::Result<()> {
    let mut rows = Vec::new();
    for (protocol, n, alpha) in [
        (ProtocolId::Naive, 256, 0.05),
        (ProtocolId::Syndrome, 7, 0.15),
        (ProtocolId::Listdec, 14, 0.22),
        (ProtocolId::Oneround, 14, 0.22),
        (ProtocolId::Smith, 1024, 0.05),
    ] {
        let mut config = ExperimentConfig::new(protocol, n, alpha);
        config.trials = 50;
        config.seed = 1;
        rows.extend(run_experiment(&config)?);
    }
    write_report(&rows, Format::Csv, std::io::stdout().lock())
}
