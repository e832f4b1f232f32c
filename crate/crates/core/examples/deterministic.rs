//! The deterministic protocols side by side on small instances.

use std::sync::Arc;

use hamsync::gf2codes::{hamming_7_4, random_linear_code};
use hamsync::syncdet::{
    brute_sync, coloring_oracle_sync, listdec_sync, naive_sync, syndrome_sync, GreedyColoring, SyncInstance,
};
use hamsync::{Bounds, ProtocolOutcome};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn show(name: &str, inst: &SyncInstance, out: &ProtocolOutcome) {
    println!(
        "{name:<9} n = {:<3} d = {} bits = {:<3} rounds = {} ok = {}",
        inst.x.len(),
        inst.distance(),
        out.total_bits(),
        out.rounds(),
        out.recovered_equals(&inst.x)
    );
}

fn main() -> hamsync::Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let hamming = hamming_7_4();

    let inst = SyncInstance::random(Bounds::new(1.0 / 7.0, 7)?, &mut rng)?;
    show("naive", &inst, &naive_sync(&inst)?);
    show("syndrome", &inst, &syndrome_sync(&hamming, &inst)?);

    let inst = SyncInstance::random(Bounds::new(0.25, 4)?, &mut rng)?;
    show("brute", &inst, &brute_sync(&hamming, &inst)?);

    let code = random_linear_code(14, 5, &mut rng)?;
    let inst = SyncInstance::random(Bounds::new(3.0 / 14.0, 14)?, &mut rng)?;
    show("listdec", &inst, &listdec_sync(&code, 3, &inst)?);

    let coloring = Arc::new(GreedyColoring::build(10, 1)?);
    let inst = SyncInstance::random(Bounds::new(0.1, 10)?, &mut rng)?;
    println!("coloring of the 10-cube at distance 2 uses {} colors", coloring.color_count());
    show("coloring", &inst, &coloring_oracle_sync(coloring, &inst)?);
    Ok(())
}
