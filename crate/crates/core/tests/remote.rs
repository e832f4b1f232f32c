use std::net::TcpListener;
use std::thread;

use hamsync::harness::{run_experiment, run_remote_side, ExperimentConfig, ProtocolId};
use hamsync::transport::{Role, TcpLink};

fn split_run(config: ExperimentConfig) {
    let listener = TcpListener::bind("127.0.0.1:0").unwrap();
    let addr = listener.local_addr().unwrap();
    let alice_config = config.clone();
    let alice = thread::spawn(move || {
        let mut link = TcpLink::connect(addr).unwrap();
        run_remote_side(&alice_config, Role::Alice, &mut link).unwrap()
    });
    let mut link = TcpLink::accept(&listener).unwrap();
    let bob = run_remote_side(&config, Role::Bob, &mut link).unwrap().unwrap();
    assert!(alice.join().unwrap().is_none());

    let local = run_experiment(&config).unwrap();
    assert_eq!(bob, local, "{}", config.protocol);
}

#[test]
fn two_sockets_match_loopback() {
    for (protocol, n, alpha) in [
        (ProtocolId::Naive, 64, 0.1),
        (ProtocolId::Syndrome, 20, 0.1),
        (ProtocolId::Listdec, 14, 0.22),
        (ProtocolId::Oneround, 14, 0.22),
        (ProtocolId::Smith, 400, 0.05),
    ] {
        let mut config = ExperimentConfig::new(protocol, n, alpha);
        config.trials = 30;
        config.seed = 7;
        config.sampling = hamsync::harness::Sampling::MonteCarlo;
        split_run(config);
    }
}
