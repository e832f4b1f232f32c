//! The randomized protocols: a one-message list-decoding scheme and the
//! block-wise scheme with a Reed-Solomon repair layer.

use hamsync::gf2codes::random_linear_code;
use hamsync::probproto::{composite_audit, composite_prob_sync, one_round_prob_sync, OneRoundSetup, ProbParams};
use hamsync::syncdet::SyncInstance;
use hamsync::Bounds;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> hamsync::Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(9);

    let setup = OneRoundSetup::new(random_linear_code(14, 5, &mut rng)?, 3, 16)?;
    let inst = SyncInstance::random(Bounds::new(3.0 / 14.0, 14)?, &mut rng)?;
    let out = one_round_prob_sync(&setup, &inst, &mut rng)?;
    println!("oneround: {} bits, ok = {}, {:?}", out.total_bits(), out.recovered_equals(&inst.x), out.diagnostics);

    let n = 2048;
    let params = ProbParams::defaults_for(n);
    let inst = SyncInstance::random(Bounds::new(0.05, n)?, &mut rng)?;
    let out = composite_prob_sync(&inst, &params, &mut rng)?;
    println!(
        "composite: n = {n}, d = {}, {} bits, ok = {}",
        inst.distance(),
        out.total_bits(),
        out.recovered_equals(&inst.x)
    );
    for (key, value) in &out.diagnostics {
        println!("  {key:<16} {value}");
    }
    let audit = composite_audit(&inst, &params, &out.transcript)?;
    println!("  {audit:?}");
    Ok(())
}
