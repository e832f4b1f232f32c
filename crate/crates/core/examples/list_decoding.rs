//! Random linear codes, syndromes and exhaustive list decoding.

use hamsync::gf2codes::{list_decode_exhaustive, max_list_size, random_linear_code, syndrome, SyndromeDecoder};
use hamsync::Word;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> hamsync::Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let code = random_linear_code(14, 5, &mut rng)?;
    println!("[14, 5] code, minimum distance {}", code.min_distance()?);
    println!("largest list at radius 3: {}", max_list_size(&code, 3)?);

    let c = code.encode(&Word::random(5, &mut rng)?)?;
    let mut y = c.clone();
    for i in rand::seq::index::sample(&mut rng, 14, 3) {
        y.flip(i);
    }
    let list = list_decode_exhaustive(&code, &y, 3)?;
    println!("codeword {c}\nreceived {y}\n{} codewords within 3:", list.len());
    for w in &list {
        println!("  {w}{}", if *w == c { "  <- sent" } else { "" });
    }
    println!("syndrome of received word: {}", syndrome(&code, &y)?);

    let small = random_linear_code(12, 4, &mut rng)?;
    match SyndromeDecoder::new(&small, 1) {
        Ok(dec) => println!("[12, 4] code decodes radius {} uniquely", dec.radius()),
        Err(e) => println!("[12, 4] code: {e}"),
    }
    Ok(())
}
