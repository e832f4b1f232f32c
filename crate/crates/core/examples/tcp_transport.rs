//! Runs the same syndrome exchange in memory and over a local TCP connection.

use hamsync::gf2codes::hamming_7_4;
use hamsync::syncdet::{syndrome_parties, SyncInstance};
use hamsync::transport::{tcp_channel, Endpoint};
use hamsync::Bounds;

fn main() -> hamsync::Result<()> {
    let code = hamming_7_4();
    let inst = SyncInstance::new("1100110".parse()?, "1100100".parse()?, Bounds::new(1.0 / 7.0, 7)?)?;

    let local = syndrome_parties(&code, &inst)?.run_loopback()?;
    let mut channel = tcp_channel(&Endpoint::Listen("127.0.0.1:0".into()))?;
    println!("tcp channel on {}", channel.local_addr());
    let remote = syndrome_parties(&code, &inst)?.run(&mut channel)?;

    for (name, out) in [("loopback", &local), ("tcp", &remote)] {
        let got = out.recovered.as_ref().map(ToString::to_string).unwrap_or_default();
        println!("{name:<9} recovered {got} in {} bits, {} round(s)", out.total_bits(), out.rounds());
    }
    assert_eq!(local, remote);
    Ok(())
}
