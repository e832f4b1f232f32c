//! Deterministic synchronization protocols.
//!
//! Every protocol comes as a `*_parties` constructor, which yields a
//! [`PartyPair`] runnable over any channel, and a `*_sync` shortcut that runs
//! it over loopback.

use std::sync::Arc;

use rand::Rng;

use crate::bitword::{hamming_distance, random_word_within, width_for, BitReader, BitWriter, Bounds, Word};
use crate::error::{contract, Error, Result};
use crate::gf2codes::{list_decode_exhaustive, max_list_size, solve_affine, syndrome, LinearCode, SyndromeDecoder};
use crate::hashing::{nba_width, NbaAnswer, NbaQuery};
use crate::transport::{Announcer, Collector, Finish, Party, PartyPair, ProtocolOutcome, Step};

/// Alice's `x` and Bob's `y` under the promise `d(x, y) <= floor(alpha n)`.
#[derive(Clone, Debug, PartialEq)]
pub struct SyncInstance {
    pub x: Word,
    pub y: Word,
    pub bounds: Bounds,
}

impl SyncInstance {
    pub fn new(x: Word, y: Word, bounds: Bounds) -> Result<Self> {
        if x.len() != bounds.n() || y.len() != bounds.n() {
            return Err(contract(format!(
                "words of length {} and {} for n = {}",
                x.len(),
                y.len(),
                bounds.n()
            )));
        }
        let d = hamming_distance(&x, &y)?;
        if d > bounds.radius() {
            return Err(contract(format!(
                "distance {d} breaks the promise radius {}",
                bounds.radius()
            )));
        }
        Ok(SyncInstance { x, y, bounds })
    }

    /// Uniform `y`, and `x` at a uniform distance `0..=radius` from it.
    pub fn random<R: Rng + ?Sized>(bounds: Bounds, rng: &mut R) -> Result<Self> {
        let y = Word::random(bounds.n(), rng)?;
        let x = random_word_within(&y, bounds.radius(), rng)?;
        Ok(SyncInstance { x, y, bounds })
    }

    pub fn distance(&self) -> usize {
        hamming_distance(&self.x, &self.y).expect("lengths checked on construction")
    }
}

fn one_way(
    messages: Vec<Word>,
    bob: impl FnOnce(Vec<Word>) -> Result<Finish> + Send + 'static,
) -> PartyPair {
    let count = messages.len();
    PartyPair::new(Announcer::new(messages), Collector::new(count, bob))
}

fn check_block_length(code: &LinearCode, n: usize) -> Result<()> {
    if code.n() != n {
        return Err(contract(format!(
            "code block length {} does not match n = {n}",
            code.n()
        )));
    }
    Ok(())
}

/// Alice sends `X` verbatim.
pub fn naive_parties(instance: &SyncInstance) -> PartyPair {
    one_way(vec![instance.x.clone()], |mut m| Ok(Finish::recovered(m.remove(0))))
}

pub fn naive_sync(instance: &SyncInstance) -> Result<ProtocolOutcome> {
    naive_parties(instance).run_loopback()
}

/// Alice encodes `X` as the message of `code` and sends only the check bits;
/// Bob decodes `Y` followed by those bits.
///
/// `code` must have dimension `n` and uniquely decode the promise radius.
pub fn brute_parties(code: &LinearCode, instance: &SyncInstance) -> Result<PartyPair> {
    let n = instance.bounds.n();
    if code.k() != n {
        return Err(contract(format!("code dimension {} does not match n = {n}", code.k())));
    }
    let decoder = SyndromeDecoder::new(code, instance.bounds.radius())?;
    let info: Vec<usize> = code.info_set().to_vec();
    let check: Vec<usize> = (0..code.n()).filter(|i| !info.contains(i)).collect();

    let c = code.encode(&instance.x)?;
    let sent = Word::from_bits(check.iter().map(|&i| c.get(i)))?;
    let y = instance.y.clone();
    let code_n = code.n();
    Ok(one_way(vec![sent], move |m| {
        let mut w = Word::zeros(code_n)?;
        for (j, &i) in info.iter().enumerate() {
            w.set(i, y.get(j));
        }
        for (j, &i) in check.iter().enumerate() {
            w.set(i, m[0].get(j));
        }
        Ok(match decoder.decode(&w)? {
            Some(z) => Finish::recovered(Word::from_bits(info.iter().map(|&i| z.get(i)))?),
            None => Finish::failed(),
        })
    }))
}

pub fn brute_sync(code: &LinearCode, instance: &SyncInstance) -> Result<ProtocolOutcome> {
    brute_parties(code, instance)?.run_loopback()
}

/// Bob's `y'`: some solution of `H t = h + H Y`.
pub fn syndrome_offset(code: &LinearCode, h_alice: &Word, y: &Word) -> Result<Word> {
    let target = h_alice.xor(&syndrome(code, y)?)?;
    solve_affine(code.parity_check(), &target)?
        .ok_or_else(|| Error::Invariant("full-rank parity check has no solution".into()))
}

/// Alice sends `H X`; Bob solves for `y'`, decodes it to `z` and outputs
/// `y' + Y + z`.
pub fn syndrome_parties(code: &LinearCode, instance: &SyncInstance) -> Result<PartyPair> {
    check_block_length(code, instance.bounds.n())?;
    let decoder = SyndromeDecoder::new(code, instance.bounds.radius())?;
    let h = syndrome(code, &instance.x)?;
    let code = code.clone();
    let y = instance.y.clone();
    Ok(one_way(vec![h], move |m| {
        let y_prime = syndrome_offset(&code, &m[0], &y)?;
        Ok(match decoder.decode(&y_prime)? {
            Some(z) => Finish::recovered(y_prime.xor(&y)?.xor(&z)?),
            None => Finish::failed(),
        })
    }))
}

pub fn syndrome_sync(code: &LinearCode, instance: &SyncInstance) -> Result<ProtocolOutcome> {
    syndrome_parties(code, instance)?.run_loopback()
}

/// Words `y' + Y + z` over the codewords `z` within `radius` of `y'`, where
/// `y'` solves the syndrome equation. Contains `X` whenever
/// `d(X, Y) <= radius`.
pub fn listdec_candidates(
    code: &LinearCode,
    radius: usize,
    h_alice: &Word,
    y: &Word,
) -> Result<Vec<Word>> {
    let y_prime = syndrome_offset(code, h_alice, y)?;
    let shift = y_prime.xor(y)?;
    let mut out = list_decode_exhaustive(code, &y_prime, radius)?
        .iter()
        .map(|z| shift.xor(z))
        .collect::<Result<Vec<_>>>()?;
    out.sort();
    Ok(out)
}

/// Candidate-list cap shared by both sides: the largest list any `y'` can
/// produce at `radius`.
pub fn listdec_cap(code: &LinearCode, radius: usize) -> Result<usize> {
    max_list_size(code, radius)
}

struct ListDecAlice {
    syndrome: Option<Word>,
    answer: NbaAnswer,
    answered: bool,
}

impl Party for ListDecAlice {
    fn resume(&mut self, incoming: Option<Word>) -> Result<Step> {
        if let Some(h) = self.syndrome.take() {
            return Ok(Step::Send(h));
        }
        if self.answered {
            return Ok(Step::Finish(Finish::done()));
        }
        match incoming {
            None => Ok(Step::Recv),
            Some(msg) => {
                let mut out = BitWriter::new();
                self.answer.answer(&mut BitReader::new(&msg), &mut out)?;
                self.answered = true;
                Ok(Step::Send(out.finish()?))
            }
        }
    }
}

struct ListDecBob {
    code: LinearCode,
    radius: usize,
    cap: usize,
    y: Word,
    query: Option<NbaQuery>,
}

impl Party for ListDecBob {
    fn resume(&mut self, incoming: Option<Word>) -> Result<Step> {
        let Some(msg) = incoming else {
            return Ok(Step::Recv);
        };
        match &self.query {
            None => {
                let cands = listdec_candidates(&self.code, self.radius, &msg, &self.y)?;
                let query = NbaQuery::new(cands, self.code.n(), self.cap)?;
                let mut out = BitWriter::new();
                query.write_prime(&mut out);
                self.query = Some(query);
                Ok(Step::Send(out.finish()?))
            }
            Some(query) => {
                let found = query.resolve(&mut BitReader::new(&msg))?;
                let finish = Finish {
                    recovered: found,
                    ..Finish::default()
                };
                Ok(Step::Finish(
                    finish
                        .with("list_size", query.candidates().len() as f64)
                        .with("q", query.prime() as f64),
                ))
            }
        }
    }
}

/// Three rounds: Alice's syndrome, then an NBA exchange over Bob's decoded
/// candidate list.
pub fn listdec_parties(code: &LinearCode, radius: usize, instance: &SyncInstance) -> Result<PartyPair> {
    let n = instance.bounds.n();
    check_block_length(code, n)?;
    let cap = listdec_cap(code, radius)?;
    let width = nba_width(cap, n);
    Ok(PartyPair::new(
        ListDecAlice {
            syndrome: Some(syndrome(code, &instance.x)?),
            answer: NbaAnswer::new(instance.x.clone(), width),
            answered: false,
        },
        ListDecBob {
            code: code.clone(),
            radius,
            cap,
            y: instance.y.clone(),
            query: None,
        },
    ))
}

pub fn listdec_sync(code: &LinearCode, radius: usize, instance: &SyncInstance) -> Result<ProtocolOutcome> {
    listdec_parties(code, radius, instance)?.run_loopback()
}

pub const COLORING_MAX_N: usize = 14;

/// Greedy proper coloring of `{0,1}^n` where words within `2 radius` of each
/// other are adjacent. Vertices are visited in increasing integer order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GreedyColoring {
    n: usize,
    radius: usize,
    colors: Vec<u32>,
    count: u32,
}

fn masks_up_to(n: usize, weight: usize) -> Vec<u32> {
    (1u32..(1 << n))
        .filter(|m| (m.count_ones() as usize) <= weight)
        .collect()
}

impl GreedyColoring {
    pub fn build(n: usize, radius: usize) -> Result<Self> {
        if n == 0 || n > COLORING_MAX_N {
            return Err(Error::Capability(format!(
                "coloring enumerates 2^n words; need 1 <= n <= {COLORING_MAX_N}, got {n}"
            )));
        }
        let masks = masks_up_to(n, 2 * radius);
        let size = 1usize << n;
        let mut colors = vec![0u32; size];
        let mut stamp: Vec<u32> = Vec::new();
        let mut count = 0u32;
        for v in 0..size as u32 {
            // stamp[c] == v + 1 marks color c as taken by an earlier neighbour.
            for &m in &masks {
                let u = v ^ m;
                if u < v {
                    stamp[colors[u as usize] as usize] = v + 1;
                }
            }
            let c = (0..count).find(|&c| stamp[c as usize] != v + 1).unwrap_or(count);
            if c == count {
                count += 1;
                stamp.push(0);
            }
            colors[v as usize] = c;
        }
        Ok(GreedyColoring {
            n,
            radius,
            colors,
            count,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn radius(&self) -> usize {
        self.radius
    }

    pub fn color_count(&self) -> u32 {
        self.count
    }

    pub fn color_of(&self, w: &Word) -> u32 {
        self.colors[w.to_u64().expect("n <= 14") as usize]
    }

    /// Bits per color on the wire; at least one so the message is nonempty.
    pub fn width(&self) -> usize {
        width_for(u64::from(self.count.saturating_sub(1))).max(1)
    }

    /// The unique word within `radius` of `y` with the given color.
    pub fn find_near(&self, y: &Word, color: u32) -> Option<Word> {
        let y = y.to_u64()? as u32;
        std::iter::once(0)
            .chain(masks_up_to(self.n, self.radius))
            .map(|m| y ^ m)
            .find(|&v| self.colors[v as usize] == color)
            .map(|v| Word::from_u64(u64::from(v), self.n).expect("n >= 1"))
    }
}

/// Alice sends the color of `X`; Bob finds the word of that color in his ball.
pub fn coloring_parties(coloring: Arc<GreedyColoring>, instance: &SyncInstance) -> Result<PartyPair> {
    if coloring.n() != instance.bounds.n() || coloring.radius() < instance.bounds.radius() {
        return Err(contract(format!(
            "coloring for n = {}, radius {} cannot serve n = {}, radius {}",
            coloring.n(),
            coloring.radius(),
            instance.bounds.n(),
            instance.bounds.radius()
        )));
    }
    let width = coloring.width();
    let msg = Word::from_u64(u64::from(coloring.color_of(&instance.x)), width)?;
    let y = instance.y.clone();
    Ok(one_way(vec![msg], move |m| {
        let color = m[0].to_u64().expect("color width <= 32") as u32;
        let colors = coloring.color_count();
        Ok(match coloring.find_near(&y, color) {
            Some(x) => Finish::recovered(x),
            None => Finish::failed(),
        }
        .with("colors", f64::from(colors)))
    }))
}

pub fn coloring_oracle_sync(coloring: Arc<GreedyColoring>, instance: &SyncInstance) -> Result<ProtocolOutcome> {
    coloring_parties(coloring, instance)?.run_loopback()
}
