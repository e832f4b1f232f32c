//! Fixed-length bit strings, the Hamming metric, and the ball-volume and
//! entropy calculators used to report communication lower bounds.
//!
//! A [`Word`] stores bit `i` at position `i % 64` of limb `i / 64`. When a word
//! is read as an integer (for mod-prime hashing or field packing) bit `i` has
//! weight `2^i`.

use std::fmt;

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive};
use rand::seq::index;
use rand::Rng;

use crate::error::{contract, Error, Result};

/// Largest supported word length in bits.
pub const MAX_WORD_BITS: usize = 1 << 20;

/// A fixed-length bit string.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Word {
    len: usize,
    limbs: Vec<u64>,
}

impl Word {
    pub fn zeros(len: usize) -> Result<Self> {
        check_len(len)?;
        Ok(Word {
            len,
            limbs: vec![0; len.div_ceil(64)],
        })
    }

    pub fn from_bits<I: IntoIterator<Item = bool>>(bits: I) -> Result<Self> {
        let mut limbs = Vec::new();
        let mut len = 0;
        for b in bits {
            if len % 64 == 0 {
                limbs.push(0);
            }
            if b {
                limbs[len / 64] |= 1 << (len % 64);
            }
            len += 1;
        }
        check_len(len)?;
        Ok(Word { len, limbs })
    }

    /// Low `len` bits of `value`, bit `i` of the word being bit `i` of `value`.
    pub fn from_u64(value: u64, len: usize) -> Result<Self> {
        if len > 64 {
            return Err(contract(format!("from_u64 length {len} exceeds 64")));
        }
        let mut w = Word::zeros(len)?;
        w.limbs[0] = if len == 64 { value } else { value & ((1u64 << len) - 1) };
        Ok(w)
    }

    pub fn random<R: Rng + ?Sized>(len: usize, rng: &mut R) -> Result<Self> {
        let mut w = Word::zeros(len)?;
        for limb in &mut w.limbs {
            *limb = rng.gen();
        }
        w.clear_tail();
        Ok(w)
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn get(&self, i: usize) -> bool {
        assert!(i < self.len, "bit index {i} out of range for length {}", self.len);
        (self.limbs[i / 64] >> (i % 64)) & 1 == 1
    }

    pub fn set(&mut self, i: usize, bit: bool) {
        assert!(i < self.len, "bit index {i} out of range for length {}", self.len);
        let mask = 1u64 << (i % 64);
        if bit {
            self.limbs[i / 64] |= mask;
        } else {
            self.limbs[i / 64] &= !mask;
        }
    }

    pub fn flip(&mut self, i: usize) {
        assert!(i < self.len, "bit index {i} out of range for length {}", self.len);
        self.limbs[i / 64] ^= 1 << (i % 64);
    }

    pub fn count_ones(&self) -> usize {
        self.limbs.iter().map(|l| l.count_ones() as usize).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.limbs.iter().all(|&l| l == 0)
    }

    pub fn iter(&self) -> impl Iterator<Item = bool> + '_ {
        (0..self.len).map(move |i| self.get(i))
    }

    pub fn limbs(&self) -> &[u64] {
        &self.limbs
    }

    pub fn xor(&self, other: &Word) -> Result<Word> {
        same_len(self, other)?;
        let limbs = self
            .limbs
            .iter()
            .zip(&other.limbs)
            .map(|(a, b)| a ^ b)
            .collect();
        Ok(Word { len: self.len, limbs })
    }

    pub fn xor_assign(&mut self, other: &Word) -> Result<()> {
        same_len(self, other)?;
        for (a, b) in self.limbs.iter_mut().zip(&other.limbs) {
            *a ^= b;
        }
        Ok(())
    }

    /// Parity of the bitwise AND, i.e. the GF(2) inner product.
    pub fn dot(&self, other: &Word) -> Result<bool> {
        same_len(self, other)?;
        let ones: u32 = self
            .limbs
            .iter()
            .zip(&other.limbs)
            .map(|(a, b)| (a & b).count_ones())
            .sum();
        Ok(ones % 2 == 1)
    }

    /// Integer value, for words of at most 64 bits.
    pub fn to_u64(&self) -> Option<u64> {
        if self.len > 64 {
            None
        } else {
            Some(self.limbs.first().copied().unwrap_or(0))
        }
    }

    /// Integer value of the word reduced modulo `q`.
    pub fn mod_small(&self, q: u64) -> u64 {
        assert!(q > 0, "modulus must be positive");
        let q = q as u128;
        let mut acc: u128 = 0;
        for &limb in self.limbs.iter().rev() {
            // acc * 2^64 + limb, split to stay within u128.
            acc = ((acc << 32) | (limb >> 32) as u128) % q;
            acc = ((acc << 32) | (limb & 0xffff_ffff) as u128) % q;
        }
        acc as u64
    }

    pub fn to_biguint(&self) -> BigUint {
        let mut digits = Vec::with_capacity(self.limbs.len() * 2);
        for &l in &self.limbs {
            digits.push(l as u32);
            digits.push((l >> 32) as u32);
        }
        BigUint::new(digits)
    }

    /// `len` bits starting at `start`; positions past the end read as zero.
    pub fn slice_padded(&self, start: usize, len: usize) -> Result<Word> {
        let mut out = Word::zeros(len)?;
        for i in 0..len {
            let j = start + i;
            if j < self.len && self.get(j) {
                out.set(i, true);
            }
        }
        Ok(out)
    }

    /// Copy of this word zero-extended (or truncated) to `len` bits.
    pub fn resized(&self, len: usize) -> Result<Word> {
        self.slice_padded(0, len)
    }

    pub fn concat(parts: &[Word]) -> Result<Word> {
        Word::from_bits(parts.iter().flat_map(|w| w.iter()))
    }

    /// Serialized form: 8-byte little-endian bit length, then `ceil(n/8)`
    /// bytes with bits packed LSB-first.
    pub fn to_bytes(&self) -> Vec<u8> {
        let mut out = Vec::with_capacity(8 + self.len.div_ceil(8));
        out.extend_from_slice(&(self.len as u64).to_le_bytes());
        out.extend_from_slice(&self.packed_bytes());
        out
    }

    pub fn from_bytes(bytes: &[u8]) -> Result<Word> {
        if bytes.len() < 8 {
            return Err(Error::Malformed("word header shorter than 8 bytes".into()));
        }
        let len = u64::from_le_bytes(bytes[..8].try_into().unwrap()) as usize;
        check_len(len)?;
        let body = &bytes[8..];
        if body.len() != len.div_ceil(8) {
            return Err(Error::Malformed(format!(
                "word of {len} bits needs {} payload bytes, got {}",
                len.div_ceil(8),
                body.len()
            )));
        }
        Word::from_packed(body, len)
    }

    /// Bits packed LSB-first into `ceil(n/8)` bytes, without a header.
    pub fn packed_bytes(&self) -> Vec<u8> {
        let nbytes = self.len.div_ceil(8);
        let mut out = Vec::with_capacity(nbytes);
        for i in 0..nbytes {
            out.push((self.limbs[i / 8] >> ((i % 8) * 8)) as u8);
        }
        out
    }

    /// Inverse of [`Word::packed_bytes`]; bits beyond `len` are ignored.
    pub fn from_packed(bytes: &[u8], len: usize) -> Result<Word> {
        if bytes.len() < len.div_ceil(8) {
            return Err(Error::Malformed("packed payload too short".into()));
        }
        let mut w = Word::zeros(len)?;
        for (i, &b) in bytes.iter().take(len.div_ceil(8)).enumerate() {
            w.limbs[i / 8] |= (b as u64) << ((i % 8) * 8);
        }
        w.clear_tail();
        Ok(w)
    }

    fn clear_tail(&mut self) {
        let rem = self.len % 64;
        if rem != 0 {
            if let Some(last) = self.limbs.last_mut() {
                *last &= (1u64 << rem) - 1;
            }
        }
    }
}

/// Lexicographic order of the bit sequence (bit 0 first, `0 < 1`); shorter
/// words sort before longer ones.
impl Ord for Word {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.len.cmp(&other.len).then_with(|| {
            for (a, b) in self.limbs.iter().zip(&other.limbs) {
                let diff = a ^ b;
                if diff != 0 {
                    let low = diff & diff.wrapping_neg();
                    return if a & low == 0 {
                        std::cmp::Ordering::Less
                    } else {
                        std::cmp::Ordering::Greater
                    };
                }
            }
            std::cmp::Ordering::Equal
        })
    }
}

impl PartialOrd for Word {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Word({self})")
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for b in self.iter() {
            f.write_str(if b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl std::str::FromStr for Word {
    type Err = Error;

    /// Parses a string of `0`/`1` characters; the first character is bit 0.
    fn from_str(s: &str) -> Result<Self> {
        let bits = s
            .chars()
            .map(|c| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                other => Err(contract(format!("invalid bit character {other:?}"))),
            })
            .collect::<Result<Vec<_>>>()?;
        Word::from_bits(bits)
    }
}

fn check_len(len: usize) -> Result<()> {
    if len == 0 {
        Err(contract("word length must be positive"))
    } else if len > MAX_WORD_BITS {
        Err(Error::Capability(format!(
            "word length {len} exceeds the supported maximum of {MAX_WORD_BITS} bits"
        )))
    } else {
        Ok(())
    }
}

fn same_len(a: &Word, b: &Word) -> Result<()> {
    if a.len != b.len {
        Err(contract(format!("length mismatch: {} vs {}", a.len, b.len)))
    } else {
        Ok(())
    }
}

pub fn hamming_distance(a: &Word, b: &Word) -> Result<usize> {
    same_len(a, b)?;
    Ok(a.limbs
        .iter()
        .zip(&b.limbs)
        .map(|(x, y)| (x ^ y).count_ones() as usize)
        .sum())
}

/// Number of words of length `n` within Hamming distance `r` of a fixed centre.
pub fn ball_volume(r: usize, n: usize) -> Result<BigUint> {
    if r > n {
        return Err(contract(format!("ball radius {r} exceeds length {n}")));
    }
    let mut term = BigUint::one();
    let mut total = BigUint::one();
    for i in 1..=r {
        term = term * BigUint::from(n - i + 1) / BigUint::from(i);
        total += &term;
    }
    Ok(total)
}

pub fn binary_entropy(p: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&p) {
        return Err(contract(format!("entropy argument {p} outside [0, 1]")));
    }
    if p == 0.0 || p == 1.0 {
        return Ok(0.0);
    }
    Ok(-p * p.log2() - (1.0 - p) * (1.0 - p).log2())
}

/// Base-2 logarithm of a positive big integer, accurate to double precision.
pub fn log2_biguint(x: &BigUint) -> f64 {
    let bits = x.bits();
    if bits <= 64 {
        return (x.to_u64().unwrap() as f64).log2();
    }
    let shift = bits - 64;
    let top = (x >> shift).to_u64().unwrap() as f64;
    top.log2() + shift as f64
}

/// The promise parameters `(alpha, n)`: Alice's and Bob's words differ in at
/// most `floor(alpha * n)` positions.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Bounds {
    alpha: f64,
    n: usize,
}

impl Bounds {
    pub fn new(alpha: f64, n: usize) -> Result<Self> {
        if !(0.0..=0.5).contains(&alpha) {
            return Err(contract(format!("alpha {alpha} outside [0, 1/2]")));
        }
        if n == 0 {
            return Err(contract("n must be positive"));
        }
        Ok(Bounds { alpha, n })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// `floor(alpha * n)`, tolerant of binary rounding in products such as
    /// `(1/7) * 7`.
    pub fn radius(&self) -> usize {
        floor_scaled(self.alpha, self.n)
    }
}

pub(crate) fn floor_scaled(frac: f64, n: usize) -> usize {
    let x = frac * n as f64;
    let r = x.round();
    if (x - r).abs() < 1e-9 {
        r as usize
    } else {
        x.floor() as usize
    }
}

/// `log2 Vol(floor(alpha n), n)`: the deterministic one-way lower bound, and
/// up to `o(n)` the probabilistic one as well.
pub fn lower_bound_bits(bounds: &Bounds) -> f64 {
    let vol = ball_volume(bounds.radius(), bounds.n()).expect("radius never exceeds n");
    log2_biguint(&vol)
}

/// A word at distance exactly `d` from `y`, with `d` uniform on `0..=r` and
/// the flipped positions a uniform `d`-subset.
pub fn random_word_within<R: Rng + ?Sized>(y: &Word, r: usize, rng: &mut R) -> Result<Word> {
    if r > y.len() {
        return Err(contract(format!("radius {r} exceeds length {}", y.len())));
    }
    let d = rng.gen_range(0..=r);
    let mut x = y.clone();
    for i in index::sample(rng, y.len(), d) {
        x.flip(i);
    }
    Ok(x)
}

/// Number of bits needed to write any integer in `0..=max`.
pub fn width_for(max: u64) -> usize {
    (64 - max.leading_zeros()) as usize
}

/// Packs fixed-width unsigned fields and whole words into one bit string.
#[derive(Default, Debug, Clone)]
pub struct BitWriter {
    bits: Vec<bool>,
}

impl BitWriter {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push_uint(&mut self, value: u64, width: usize) {
        debug_assert!(width == 64 || value < (1u64 << width), "{value} does not fit in {width} bits");
        for i in 0..width {
            self.bits.push((value >> i) & 1 == 1);
        }
    }

    pub fn push_word(&mut self, w: &Word) {
        self.bits.extend(w.iter());
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    pub fn finish(self) -> Result<Word> {
        Word::from_bits(self.bits)
    }
}

/// Reads back fields written by [`BitWriter`].
#[derive(Debug)]
pub struct BitReader<'a> {
    word: &'a Word,
    pos: usize,
}

impl<'a> BitReader<'a> {
    pub fn new(word: &'a Word) -> Self {
        BitReader { word, pos: 0 }
    }

    pub fn read_uint(&mut self, width: usize) -> Result<u64> {
        self.need(width)?;
        let mut v = 0u64;
        for i in 0..width {
            if self.word.get(self.pos + i) {
                v |= 1 << i;
            }
        }
        self.pos += width;
        Ok(v)
    }

    pub fn read_word(&mut self, len: usize) -> Result<Word> {
        self.need(len)?;
        let w = self.word.slice_padded(self.pos, len)?;
        self.pos += len;
        Ok(w)
    }

    pub fn remaining(&self) -> usize {
        self.word.len() - self.pos
    }

    fn need(&self, width: usize) -> Result<()> {
        if self.pos + width > self.word.len() {
            Err(Error::Malformed(format!(
                "message too short: need {width} more bits at offset {}, have {}",
                self.pos,
                self.remaining()
            )))
        } else {
            Ok(())
        }
    }
}
