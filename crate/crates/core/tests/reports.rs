use std::process::Command;

use hamsync::harness::{
    emit_report, read_report, run_experiment, write_report, ExperimentConfig, Format, ProtocolId, Sampling,
    CSV_HEADER,
};

fn config(protocol: ProtocolId, n: usize, alpha: f64) -> ExperimentConfig {
    let mut c = ExperimentConfig::new(protocol, n, alpha);
    c.trials = 40;
    c.seed = 11;
    c
}

#[test]
fn csv_and_json_round_trip() {
    let rows = run_experiment(&config(ProtocolId::Listdec, 14, 0.22)).unwrap();
    for format in [Format::Csv, Format::Json] {
        let mut buf = Vec::new();
        write_report(&rows, format, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(read_report(&text, format).unwrap(), rows);
    }
}

#[test]
fn csv_header_is_fixed() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("empty.csv");
    emit_report(&[], Format::Csv, &path).unwrap();
    let text = std::fs::read_to_string(&path).unwrap();
    assert_eq!(text.trim_end(), CSV_HEADER.join(","));
}

#[test]
fn same_seed_same_report() {
    for (protocol, n, alpha) in [(ProtocolId::Oneround, 14, 0.22), (ProtocolId::Smith, 600, 0.05)] {
        let a = run_experiment(&config(protocol, n, alpha)).unwrap();
        let b = run_experiment(&config(protocol, n, alpha)).unwrap();
        assert_eq!(a, b);
    }
}

#[test]
fn small_deterministic_runs_are_exhaustive() {
    let row = &run_experiment(&config(ProtocolId::Syndrome, 7, 0.15)).unwrap()[0];
    assert_eq!(row.mode, "exhaustive");
    assert_eq!(row.trials, 128 * 8);
    assert_eq!(row.success_rate, 1.0);
    assert_eq!(row.max_bits, 3);

    let mut mc = config(ProtocolId::Syndrome, 7, 0.15);
    mc.sampling = Sampling::MonteCarlo;
    assert_eq!(run_experiment(&mc).unwrap()[0].mode, "monte_carlo");
}

#[test]
fn cli_output_is_byte_stable() {
    let dir = tempfile::tempdir().unwrap();
    let run = |name: &str| {
        let path = dir.path().join(name);
        let status = Command::new(env!("CARGO_BIN_EXE_hamsync"))
            .args(["run", "--protocol", "oneround", "--n", "14", "--alpha", "0.22", "--trials", "50", "--seed", "3"])
            .arg("--out")
            .arg(&path)
            .status()
            .unwrap();
        assert!(status.success());
        std::fs::read(path).unwrap()
    };
    assert_eq!(run("a.csv"), run("b.csv"));
}

#[test]
fn cli_rejects_bad_arguments() {
    let out = Command::new(env!("CARGO_BIN_EXE_hamsync"))
        .args(["run", "--protocol", "syndrome", "--n", "7", "--alpha", "0.1", "--listen", "127.0.0.1:0"])
        .output()
        .unwrap();
    assert!(!out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("--transport tcp"));

    let out = Command::new(env!("CARGO_BIN_EXE_hamsync"))
        .args(["run", "--protocol", "smith", "--n", "100", "--alpha", "0.7"])
        .output()
        .unwrap();
    assert!(!out.status.success());
}
