//! Bob holds a short list of candidates; Alice's word is one of them.

use hamsync::hashing::{multi_nba_protocol, nba_protocol};
use hamsync::Word;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> hamsync::Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let n = 64;
    let ys: Vec<Word> = (0..6).map(|_| Word::random(n, &mut rng)).collect::<Result<_, _>>()?;
    let x = ys[4].clone();

    let out = nba_protocol(&x, &ys, n)?;
    println!("single: {} bits, recovered = {}", out.total_bits(), out.recovered_equals(&x));
    for m in out.transcript.messages() {
        println!("  {:?} {} bits", m.direction, m.payload.len());
    }

    let ys: Vec<Word> = (0..8).map(|_| Word::random(256, &mut rng)).collect::<Result<_, _>>()?;
    let xs: Vec<Word> = ys.choose_multiple(&mut rng, 4).cloned().collect();
    let out = multi_nba_protocol(&xs, &ys, 256, &mut rng)?;
    println!(
        "batch of 4: {} bits total, {} in the answer round, recovered = {}",
        out.total_bits(),
        out.transcript.bits_in_round(2),
        out.recovered == Some(Word::concat(&xs)?)
    );
    Ok(())
}
