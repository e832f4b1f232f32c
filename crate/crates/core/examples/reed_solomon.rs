//! Block values as evaluations of a polynomial over GF(2^8); extra
//! evaluations let the receiver fix a few wrong blocks.

use hamsync::gf2k_rs::{rs_correct, rs_extra_evals, FieldElem, Gf2k};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn main() -> hamsync::Result<()> {
    let f = Gf2k::new(8)?;
    println!("GF(2^8) modulus {:#x}", f.modulus());
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let blocks: Vec<FieldElem> = (0..32).map(|_| FieldElem(rng.gen_range(0..256))).collect();
    let extra = rs_extra_evals(&f, &blocks, 16)?;

    for errors in [0, 3, 7, 9] {
        let mut received = blocks.clone();
        for i in rand::seq::index::sample(&mut rng, blocks.len(), errors) {
            received[i] = FieldElem(received[i].0 ^ rng.gen_range(1..256));
        }
        let verdict = match rs_correct(&f, &received, &extra)? {
            Some(fixed) if fixed == blocks => "corrected",
            Some(_) => "wrong answer",
            None => "gave up",
        };
        println!("{errors} wrong blocks: {verdict}");
    }
    Ok(())
}
