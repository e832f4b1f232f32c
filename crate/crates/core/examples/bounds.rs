//! Ball volumes, entropy estimates and the communication floor for a promise.

use hamsync::bitword::{ball_volume, binary_entropy, hamming_distance, log2_biguint, lower_bound_bits};
use hamsync::{Bounds, Word};

fn main() -> hamsync::Result<()> {
    let x: Word = "1011001110".parse()?;
    let y: Word = "1001001010".parse()?;
    println!("x = {x}\ny = {y}\nd(x, y) = {}", hamming_distance(&x, &y)?);

    for alpha in [0.05, 0.1, 0.25] {
        let b = Bounds::new(alpha, 1000)?;
        let exact = log2_biguint(&ball_volume(b.radius(), b.n())?);
        println!(
            "alpha {alpha:<5} r = {:<4} log2 Vol = {exact:8.2}  H(alpha) n = {:8.2}  floor = {:8.2}",
            b.radius(),
            binary_entropy(alpha)? * 1000.0,
            lower_bound_bits(&b),
        );
    }
    Ok(())
}
