//! Prime sieving, mod-prime hashing, FKS-style secondary hashing, and the
//! NBA protocols built on them.
//!
//! In the NBA problem Bob holds `k` candidate words of length `n` and Alice
//! holds one of them. Bob picks a prime `q` under which his candidates have
//! distinct residues; Alice answers with her residue. Every integer goes on
//! the wire at a fixed width derived from a bound both sides already know.

use std::collections::{HashMap, HashSet};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::bitword::{width_for, BitReader, BitWriter, Word};
use crate::error::{contract, Error, Result};
use crate::transport::{Finish, Party, PartyPair, ProtocolOutcome, Step};

/// All primes up to and including `limit`, ascending.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PrimeTable {
    limit: u64,
    primes: Vec<u64>,
}

impl PrimeTable {
    pub fn limit(&self) -> u64 {
        self.limit
    }

    pub fn primes(&self) -> &[u64] {
        &self.primes
    }

    pub fn len(&self) -> usize {
        self.primes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.primes.is_empty()
    }
}

pub fn sieve_primes(limit: u64) -> Result<PrimeTable> {
    if limit < 2 {
        return Err(contract(format!("sieve limit {limit} is below 2")));
    }
    let size = usize::try_from(limit)
        .ok()
        .and_then(|l| l.checked_add(1))
        .ok_or_else(|| Error::Capability(format!("sieve limit {limit} too large")))?;
    let mut composite = vec![false; size];
    let mut primes = Vec::new();
    for i in 2..size {
        if composite[i] {
            continue;
        }
        primes.push(i as u64);
        let mut j = i.saturating_mul(i);
        while j < size {
            composite[j] = true;
            j += i;
        }
    }
    Ok(PrimeTable { limit, primes })
}

/// The first `count` primes; the last one is the smallest `A` with
/// `pi(A) >= count`.
pub fn first_primes(count: usize) -> Result<PrimeTable> {
    if count == 0 {
        return Err(contract("prime count must be positive"));
    }
    // p_n < n (ln n + ln ln n) for n >= 6.
    let nf = count.max(6) as f64;
    let mut limit = (nf * (nf.ln() + nf.ln().ln())).ceil() as u64 + 16;
    loop {
        let mut table = sieve_primes(limit)?;
        if table.primes.len() >= count {
            table.primes.truncate(count);
            table.limit = *table.primes.last().unwrap();
            return Ok(table);
        }
        limit *= 2;
    }
}

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Deterministic Miller-Rabin, exact for every `u64`.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    const BASES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    for &p in &BASES {
        if n.is_multiple_of(p) {
            return n == p;
        }
    }
    let mut d = n - 1;
    let mut r = 0;
    while d.is_multiple_of(2) {
        d /= 2;
        r += 1;
    }
    'witness: for &a in &BASES {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..r {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// `x -> x mod q` for a prime `q`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct ModHash {
    q: u64,
}

impl ModHash {
    pub fn new(q: u64) -> Result<Self> {
        if !is_prime(q) {
            return Err(contract(format!("{q} is not prime")));
        }
        Ok(ModHash { q })
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    pub fn apply(&self, x: &Word) -> u64 {
        x.mod_small(self.q)
    }

    pub fn is_injective_on(&self, set: &[Word]) -> bool {
        let mut seen = HashSet::with_capacity(set.len());
        set.iter().all(|x| seen.insert(self.apply(x)))
    }
}

/// `max(2, k^2 n)`, the range in which an injective prime is guaranteed.
pub fn injective_prime_bound(k: usize, n: usize) -> u64 {
    ((k as u64).saturating_mul(k as u64).saturating_mul(n as u64)).max(2)
}

fn check_distinct(set: &[Word], n: usize) -> Result<()> {
    if set.is_empty() {
        return Err(contract("candidate set is empty"));
    }
    let mut seen = HashSet::with_capacity(set.len());
    for w in set {
        if w.len() != n {
            return Err(contract(format!("candidate of length {} where {n} expected", w.len())));
        }
        if !seen.insert(w) {
            return Err(contract("candidate set contains duplicates"));
        }
    }
    Ok(())
}

/// Smallest prime `q <= max(2, k^2 n)` whose residues separate `set`.
pub fn find_injective_prime(set: &[Word], n: usize) -> Result<ModHash> {
    check_distinct(set, n)?;
    smallest_injective_prime(set, injective_prime_bound(set.len(), n))
}

fn smallest_injective_prime(set: &[Word], bound: u64) -> Result<ModHash> {
    let table = sieve_primes(bound.max(2))?;
    table
        .primes()
        .iter()
        .map(|&q| ModHash { q })
        .find(|h| h.is_injective_on(set))
        .ok_or_else(|| {
            Error::Invariant(format!(
                "no prime up to {bound} separates {} distinct words",
                set.len()
            ))
        })
}

/// `x -> (s x mod v) mod 2k^2`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SecondaryHash {
    v: u64,
    s: u64,
    k: usize,
}

impl SecondaryHash {
    pub fn new(v: u64, s: u64, k: usize) -> Result<Self> {
        if !is_prime(v) {
            return Err(contract(format!("{v} is not prime")));
        }
        if s >= v {
            return Err(contract(format!("multiplier {s} not below {v}")));
        }
        if k == 0 {
            return Err(contract("k must be positive"));
        }
        Ok(SecondaryHash { v, s, k })
    }

    pub fn v(&self) -> u64 {
        self.v
    }

    pub fn s(&self) -> u64 {
        self.s
    }

    pub fn range(&self) -> u64 {
        2 * (self.k as u64) * (self.k as u64)
    }

    pub fn apply(&self, x: u64) -> u64 {
        mul_mod(self.s, x, self.v) % self.range()
    }

    pub fn is_injective_on(&self, set: &[u64]) -> bool {
        let mut seen = HashSet::with_capacity(set.len());
        set.iter().all(|&x| seen.insert(self.apply(x)))
    }
}

/// Draws `s` uniformly until `h_s` separates `reduced`; gives up after
/// `64 k` draws.
pub fn find_secondary_hash<R: Rng + ?Sized>(
    reduced: &[u64],
    v: u64,
    k: usize,
    rng: &mut R,
) -> Result<SecondaryHash> {
    if reduced.len() != k {
        return Err(contract(format!("expected {k} reduced values, got {}", reduced.len())));
    }
    if !is_prime(v) {
        return Err(contract(format!("{v} is not prime")));
    }
    let mut seen = HashSet::new();
    if reduced.iter().any(|&x| x >= v || !seen.insert(x)) {
        return Err(contract("reduced values must be distinct and below v"));
    }
    let cap = 64 * k.max(1);
    for _ in 0..cap {
        let h = SecondaryHash {
            v,
            s: rng.gen_range(0..v),
            k,
        };
        if h.is_injective_on(reduced) {
            return Ok(h);
        }
    }
    Err(Error::ProbabilisticFailure(format!(
        "no collision-free secondary hash after {cap} draws (v = {v}, k = {k})"
    )))
}

/// Uniform sampler over the first `a n k^2` primes.
#[derive(Clone, Debug)]
pub struct RandomPrimeSource {
    table: PrimeTable,
}

impl RandomPrimeSource {
    pub fn new(n: usize, k: usize, a: u64) -> Result<Self> {
        if a < 2 {
            return Err(contract(format!("oversampling factor {a} below 2")));
        }
        let count = (a as usize)
            .checked_mul(n)
            .and_then(|c| c.checked_mul(k * k))
            .filter(|&c| c > 0)
            .ok_or_else(|| contract("n and k must be positive"))?;
        Ok(RandomPrimeSource {
            table: first_primes(count)?,
        })
    }

    /// `A`: every sampled prime is at most this.
    pub fn bound(&self) -> u64 {
        self.table.limit()
    }

    pub fn prime_count(&self) -> usize {
        self.table.len()
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> ModHash {
        let primes = self.table.primes();
        ModHash {
            q: primes[rng.gen_range(0..primes.len())],
        }
    }
}

/// A uniformly random prime from `[1, A]`, where `A` is the smallest integer
/// with at least `a n k^2` primes below it.
pub fn random_prime_hash<R: Rng + ?Sized>(n: usize, k: usize, a: u64, rng: &mut R) -> Result<ModHash> {
    Ok(RandomPrimeSource::new(n, k, a)?.sample(rng))
}

/// Alice's side of the single-word NBA exchange: wait for `q`, answer with
/// `x mod q`.
#[derive(Debug)]
pub(crate) struct NbaAnswer {
    x: Word,
    width: usize,
}

impl NbaAnswer {
    pub(crate) fn new(x: Word, width: usize) -> Self {
        NbaAnswer { x, width }
    }

    /// Reads a prime from `msg` and returns the residue message.
    pub(crate) fn answer(&self, reader: &mut BitReader<'_>, out: &mut BitWriter) -> Result<()> {
        let q = reader.read_uint(self.width)?;
        if q < 2 {
            return Err(Error::Malformed(format!("NBA modulus {q}")));
        }
        out.push_uint(self.x.mod_small(q), self.width);
        Ok(())
    }
}

/// Bob's side: choose the separating prime, later match the residue.
#[derive(Debug)]
pub(crate) struct NbaQuery {
    candidates: Vec<Word>,
    hash: ModHash,
    width: usize,
}

impl NbaQuery {
    /// `cap` is the candidate-count bound Alice also knows; it fixes the width.
    pub(crate) fn new(candidates: Vec<Word>, n: usize, cap: usize) -> Result<Self> {
        if candidates.len() > cap {
            return Err(contract(format!(
                "{} candidates exceed the agreed cap {cap}",
                candidates.len()
            )));
        }
        check_distinct(&candidates, n)?;
        let bound = injective_prime_bound(cap, n);
        let hash = smallest_injective_prime(&candidates, injective_prime_bound(candidates.len(), n))?;
        Ok(NbaQuery {
            candidates,
            hash,
            width: width_for(bound),
        })
    }

    pub(crate) fn write_prime(&self, out: &mut BitWriter) {
        out.push_uint(self.hash.q(), self.width);
    }

    /// The candidate whose residue matches, if any.
    pub(crate) fn resolve(&self, reader: &mut BitReader<'_>) -> Result<Option<Word>> {
        let residue = reader.read_uint(self.width)?;
        Ok(self
            .candidates
            .iter()
            .find(|c| self.hash.apply(c) == residue)
            .cloned())
    }

    pub(crate) fn prime(&self) -> u64 {
        self.hash.q()
    }

    pub(crate) fn candidates(&self) -> &[Word] {
        &self.candidates
    }
}

pub(crate) fn nba_width(cap: usize, n: usize) -> usize {
    width_for(injective_prime_bound(cap, n))
}

struct NbaAlice {
    answer: NbaAnswer,
    sent: bool,
}

impl Party for NbaAlice {
    fn resume(&mut self, incoming: Option<Word>) -> Result<Step> {
        if self.sent {
            return Ok(Step::Finish(Finish::done()));
        }
        match incoming {
            None => Ok(Step::Recv),
            Some(msg) => {
                let mut out = BitWriter::new();
                self.answer.answer(&mut BitReader::new(&msg), &mut out)?;
                self.sent = true;
                Ok(Step::Send(out.finish()?))
            }
        }
    }
}

enum NbaBobState {
    Start,
    AwaitResidue,
}

struct NbaBob {
    query: NbaQuery,
    state: NbaBobState,
}

impl Party for NbaBob {
    fn resume(&mut self, incoming: Option<Word>) -> Result<Step> {
        match self.state {
            NbaBobState::Start => {
                let mut out = BitWriter::new();
                self.query.write_prime(&mut out);
                self.state = NbaBobState::AwaitResidue;
                Ok(Step::Send(out.finish()?))
            }
            NbaBobState::AwaitResidue => match incoming {
                None => Ok(Step::Recv),
                Some(msg) => {
                    let found = self.query.resolve(&mut BitReader::new(&msg))?;
                    let finish = Finish {
                        recovered: found,
                        ..Finish::default()
                    };
                    Ok(Step::Finish(
                        finish
                            .with("q", self.query.prime() as f64)
                            .with("candidates", self.query.candidates.len() as f64),
                    ))
                }
            },
        }
    }
}

pub fn nba_parties(x_alice: &Word, y_bob: &[Word], n: usize) -> Result<PartyPair> {
    if x_alice.len() != n {
        return Err(contract(format!("Alice's word has length {}, expected {n}", x_alice.len())));
    }
    let k = y_bob.len();
    let query = NbaQuery::new(y_bob.to_vec(), n, k)?;
    let width = nba_width(k, n);
    Ok(PartyPair::new(
        NbaAlice {
            answer: NbaAnswer::new(x_alice.clone(), width),
            sent: false,
        },
        NbaBob {
            query,
            state: NbaBobState::Start,
        },
    ))
}

/// Two rounds, zero error when `x_alice` is among `y_bob`; costs
/// `2 ceil(log2(k^2 n + 1))` bits.
///
/// A promise violation is only noticed when no candidate matches; otherwise
/// Bob may output a wrong word.
pub fn nba_protocol(x_alice: &Word, y_bob: &[Word], n: usize) -> Result<ProtocolOutcome> {
    nba_parties(x_alice, y_bob, n)?.run_loopback()
}

struct MultiNbaAlice {
    xs: Vec<Word>,
    prime_width: usize,
    value_width: usize,
    k: usize,
    sent: bool,
}

impl Party for MultiNbaAlice {
    fn resume(&mut self, incoming: Option<Word>) -> Result<Step> {
        if self.sent {
            return Ok(Step::Finish(Finish::done()));
        }
        let Some(msg) = incoming else {
            return Ok(Step::Recv);
        };
        let mut rd = BitReader::new(&msg);
        let q = rd.read_uint(self.prime_width)?;
        let s = rd.read_uint(self.prime_width)?;
        let h = SecondaryHash::new(q, s, self.k).map_err(|e| Error::Malformed(e.to_string()))?;
        let mut out = BitWriter::new();
        for x in &self.xs {
            out.push_uint(h.apply(x.mod_small(q)), self.value_width);
        }
        self.sent = true;
        Ok(Step::Send(out.finish()?))
    }
}

struct MultiNbaBob {
    candidates: Vec<Word>,
    n: usize,
    l: usize,
    prime_width: usize,
    value_width: usize,
    rng: ChaCha8Rng,
    lookup: Option<HashMap<u64, usize>>,
}

impl Party for MultiNbaBob {
    fn resume(&mut self, incoming: Option<Word>) -> Result<Step> {
        let Some(lookup) = &self.lookup else {
            let k = self.candidates.len();
            let q = find_injective_prime(&self.candidates, self.n)?;
            let reduced: Vec<u64> = self.candidates.iter().map(|c| q.apply(c)).collect();
            let h = find_secondary_hash(&reduced, q.q(), k, &mut self.rng)?;
            self.lookup = Some(
                reduced
                    .iter()
                    .enumerate()
                    .map(|(i, &r)| (h.apply(r), i))
                    .collect(),
            );
            let mut out = BitWriter::new();
            out.push_uint(q.q(), self.prime_width);
            out.push_uint(h.s(), self.prime_width);
            return Ok(Step::Send(out.finish()?));
        };
        let Some(msg) = incoming else {
            return Ok(Step::Recv);
        };
        let mut rd = BitReader::new(&msg);
        let mut words = Vec::with_capacity(self.l);
        for _ in 0..self.l {
            let v = rd.read_uint(self.value_width)?;
            match lookup.get(&v) {
                Some(&i) => words.push(self.candidates[i].clone()),
                None => return Ok(Step::Finish(Finish::failed())),
            }
        }
        Ok(Step::Finish(
            Finish::recovered(Word::concat(&words)?).with("round2_bits", msg.len() as f64),
        ))
    }
}

pub fn multi_nba_parties<R: Rng + ?Sized>(
    xs_alice: &[Word],
    y_bob: &[Word],
    n: usize,
    rng: &mut R,
) -> Result<PartyPair> {
    check_distinct(y_bob, n)?;
    if xs_alice.is_empty() {
        return Err(contract("Alice must hold at least one word"));
    }
    if let Some(x) = xs_alice.iter().find(|x| x.len() != n) {
        return Err(contract(format!("Alice's word has length {}, expected {n}", x.len())));
    }
    let k = y_bob.len();
    let prime_width = width_for(injective_prime_bound(k, n));
    let value_width = width_for(2 * (k as u64) * (k as u64) - 1);
    Ok(PartyPair::new(
        MultiNbaAlice {
            xs: xs_alice.to_vec(),
            prime_width,
            value_width,
            k,
            sent: false,
        },
        MultiNbaBob {
            candidates: y_bob.to_vec(),
            n,
            l: xs_alice.len(),
            prime_width,
            value_width,
            rng: ChaCha8Rng::seed_from_u64(rng.gen()),
            lookup: None,
        },
    ))
}

/// Bob learns all `l` of Alice's words. Round 1 carries `(q, s)`; round 2
/// carries `l` secondary-hash values of `ceil(log2(2k^2))` bits each.
///
/// On success `recovered` is the concatenation of Alice's words in order.
pub fn multi_nba_protocol<R: Rng + ?Sized>(
    xs_alice: &[Word],
    y_bob: &[Word],
    n: usize,
    rng: &mut R,
) -> Result<ProtocolOutcome> {
    multi_nba_parties(xs_alice, y_bob, n, rng)?.run_loopback()
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::seq::SliceRandom;

    fn trial_division(n: u64) -> bool {
        n >= 2 && (2..).take_while(|d| d * d <= n).all(|d| !n.is_multiple_of(d))
    }

    fn distinct_words(k: usize, n: usize, rng: &mut ChaCha8Rng) -> Vec<Word> {
        let mut set = HashSet::new();
        while set.len() < k {
            set.insert(Word::random(n, rng).unwrap());
        }
        let mut v: Vec<Word> = set.into_iter().collect();
        v.sort();
        v
    }

    #[test]
    fn sieve_examples() {
        assert_eq!(sieve_primes(10).unwrap().primes(), &[2, 3, 5, 7]);
        assert_eq!(sieve_primes(2).unwrap().primes(), &[2]);
        assert!(sieve_primes(1).is_err());
    }

    #[test]
    fn sieve_matches_trial_division() {
        let table = sieve_primes(10_000).unwrap();
        let oracle: Vec<u64> = (2..=10_000).filter(|&n| trial_division(n)).collect();
        assert_eq!(table.primes(), oracle.as_slice());
        assert_eq!(table.len(), 1229);
    }

    #[test]
    fn miller_rabin_matches_sieve() {
        let table = sieve_primes(100_000).unwrap();
        let set: HashSet<u64> = table.primes().iter().copied().collect();
        for n in 0..=100_000 {
            assert_eq!(is_prime(n), set.contains(&n), "n = {n}");
        }
        assert!(is_prime(18_446_744_073_709_551_557));
        assert!(!is_prime(3_215_031_751)); // strong pseudoprime to 2, 3, 5, 7
    }

    #[test]
    fn first_primes_counts() {
        let t = first_primes(1229).unwrap();
        assert_eq!(t.len(), 1229);
        assert_eq!(t.limit(), 9973);
    }

    #[test]
    fn injective_prime_examples() {
        let set: Vec<Word> = [1u64, 2, 3].iter().map(|&v| Word::from_u64(v, 4).unwrap()).collect();
        assert_eq!(find_injective_prime(&set, 4).unwrap().q(), 3);
        let single = vec![Word::from_u64(9, 4).unwrap()];
        assert_eq!(find_injective_prime(&single, 4).unwrap().q(), 2);
        let dup = vec![set[0].clone(), set[0].clone()];
        assert!(find_injective_prime(&dup, 4).is_err());
    }

    #[test]
    fn injective_prime_within_bound_random_sets() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..500 {
            let set = distinct_words(8, 16, &mut rng);
            let h = find_injective_prime(&set, 16).unwrap();
            assert!(h.q() <= 8 * 8 * 16);
            assert!(h.is_injective_on(&set));
        }
    }

    #[test]
    fn secondary_hash_examples() {
        let h = SecondaryHash::new(7, 1, 2).unwrap();
        assert_eq!(h.range(), 8);
        assert_eq!((h.apply(1), h.apply(2)), (1, 2));
        assert!(h.is_injective_on(&[1, 2]));
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let one = find_secondary_hash(&[3], 7, 1, &mut rng).unwrap();
        assert!(one.is_injective_on(&[3]));
        assert!(SecondaryHash::new(8, 1, 2).is_err());
        assert!(SecondaryHash::new(7, 7, 2).is_err());
    }

    #[test]
    fn secondary_hash_half_of_family_is_injective() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let k = 8usize;
        let v = 1021u64; // largest prime below k^2 n with n = 16
        let mut fractions = Vec::new();
        for _ in 0..1000 {
            let mut pool: Vec<u64> = (0..v).collect();
            pool.shuffle(&mut rng);
            let set = &pool[..k];
            let good = (0..v)
                .filter(|&s| SecondaryHash { v, s, k }.is_injective_on(set))
                .count();
            fractions.push(good as f64 / v as f64);
        }
        let mean = fractions.iter().sum::<f64>() / fractions.len() as f64;
        assert!(mean >= 0.45, "mean injective fraction {mean}");
    }

    #[test]
    fn random_prime_is_prime_and_bounded() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let src = RandomPrimeSource::new(16, 4, 8).unwrap();
        assert_eq!(src.prime_count(), 8 * 16 * 16);
        assert!(random_prime_hash(16, 4, 2, &mut rng).is_ok());
        assert!(RandomPrimeSource::new(16, 4, 1).is_err());
        for _ in 0..1000 {
            let q = src.sample(&mut rng).q();
            assert!(is_prime(q) && q <= src.bound());
        }
    }

    fn collision_fraction(a: u64, draws: usize, rng: &mut ChaCha8Rng) -> f64 {
        let set = distinct_words(4, 16, rng);
        let src = RandomPrimeSource::new(16, 4, a).unwrap();
        let bad = (0..draws)
            .filter(|_| !src.sample(rng).is_injective_on(&set))
            .count();
        bad as f64 / draws as f64
    }

    #[test]
    fn random_prime_collision_rate() {
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        assert!(collision_fraction(8, 10_000, &mut rng) <= 1.0 / 8.0 + 0.05);
        // Larger oversampling never does worse than the 1/a guarantee.
        for a in [2u64, 8, 32] {
            assert!(collision_fraction(a, 4000, &mut rng) <= 1.0 / a as f64 + 0.02);
        }
    }

    #[test]
    fn nba_single_candidate() {
        let y = vec![Word::from_u64(0xbeef, 16).unwrap()];
        let out = nba_protocol(&y[0], &y, 16).unwrap();
        assert_eq!(out.recovered, Some(y[0].clone()));
        assert_eq!(out.transcript.messages().len(), 2);
        assert_eq!(out.rounds(), 2);
    }

    #[test]
    fn nba_bound_and_correctness() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for _ in 0..1000 {
            let k = rng.gen_range(1..=8);
            let ys = distinct_words(k, 16, &mut rng);
            let x = ys.choose(&mut rng).unwrap().clone();
            let out = nba_protocol(&x, &ys, 16).unwrap();
            assert_eq!(out.recovered, Some(x));
            assert_eq!(out.rounds(), 2);
            assert_eq!(out.total_bits(), 2 * width_for((k * k * 16) as u64));
        }
    }

    #[test]
    fn nba_reports_failure_when_no_candidate_matches() {
        // {0, 2} collide mod 2, so Bob picks q = 3; Alice's 7 leaves residue 1.
        let ys: Vec<Word> = [0u64, 2].iter().map(|&v| Word::from_u64(v, 8).unwrap()).collect();
        let out = nba_protocol(&Word::from_u64(7, 8).unwrap(), &ys, 8).unwrap();
        assert_eq!(out.diagnostics["q"], 3.0);
        assert!(out.reported_failure);
        assert!(out.recovered.is_none());
    }

    #[test]
    fn multi_nba_round_two_payload() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let ys = distinct_words(8, 256, &mut rng);
        let xs: Vec<Word> = ys.choose_multiple(&mut rng, 4).cloned().collect();
        let out = multi_nba_protocol(&xs, &ys, 256, &mut rng).unwrap();
        assert_eq!(out.recovered, Some(Word::concat(&xs).unwrap()));
        assert_eq!(out.transcript.bits_in_round(2), 28);
        assert_eq!(4 * width_for(8 * 8 * 256), 60);
        assert_eq!(out.rounds(), 2);
    }

    #[test]
    fn multi_nba_single_word_cost() {
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        let ys = distinct_words(5, 32, &mut rng);
        let out = multi_nba_protocol(&ys[2..3], &ys, 32, &mut rng).unwrap();
        assert_eq!(out.transcript.bits_in_round(2), width_for(2 * 25 - 1));
        assert_eq!(out.recovered, Some(ys[2].clone()));
    }

    #[test]
    fn multi_nba_zero_error() {
        let mut rng = ChaCha8Rng::seed_from_u64(10);
        for _ in 0..1000 {
            let ys = distinct_words(8, 64, &mut rng);
            let xs: Vec<Word> = (0..3).map(|_| ys.choose(&mut rng).unwrap().clone()).collect();
            let out = multi_nba_protocol(&xs, &ys, 64, &mut rng).unwrap();
            assert_eq!(out.recovered, Some(Word::concat(&xs).unwrap()));
            assert!(out.total_bits() <= 2 * width_for(64 * 64) + 3 * width_for(127));
        }
    }
}
