//! Randomized protocols: affine permutation mixing, block partitioning, the
//! one-round hashed list-decoding protocol and the three-stage composite
//! protocol with a Reed-Solomon outer layer.

use std::collections::VecDeque;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::bitword::{floor_scaled, hamming_distance, width_for, BitReader, BitWriter, Word};
use crate::error::{contract, Error, Result};
use crate::gf2codes::{random_linear_code, syndrome, BitMatrix, LinearCode};
use crate::gf2k_rs::{rs_correct, rs_extra_evals, FieldElem, Gf2k};
use crate::hashing::{is_prime, nba_width, ModHash, NbaAnswer, NbaQuery, RandomPrimeSource};
use crate::syncdet::{listdec_candidates, listdec_cap, SyncInstance};
use crate::transport::{Announcer, Collector, Finish, Party, PartyPair, ProtocolOutcome, Step, Transcript};

/// Smallest prime `>= n`.
pub fn next_prime_at_least(n: u64) -> Result<u64> {
    if n < 2 {
        return Err(contract(format!("next prime requested for {n} < 2")));
    }
    (n..=u64::MAX)
        .find(|&c| is_prime(c))
        .ok_or_else(|| Error::Capability(format!("no prime found from {n}")))
}

/// `i -> (a i + b) mod p` on `0..p`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct AffinePermutation {
    p: u64,
    a: u64,
    b: u64,
}

fn mod_inverse(a: u64, p: u64) -> u64 {
    // Fermat: a^(p-2) mod p.
    let (mut base, mut exp, mut acc) = (a as u128 % p as u128, p - 2, 1u128);
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * base % p as u128;
        }
        base = base * base % p as u128;
        exp >>= 1;
    }
    acc as u64
}

impl AffinePermutation {
    pub fn new(p: u64, a: u64, b: u64) -> Result<Self> {
        if !is_prime(p) {
            return Err(contract(format!("permutation modulus {p} is not prime")));
        }
        if a == 0 || a >= p || b >= p {
            return Err(contract(format!("need 1 <= a < {p} and b < {p}, got a = {a}, b = {b}")));
        }
        Ok(AffinePermutation { p, a, b })
    }

    pub fn identity(p: u64) -> Result<Self> {
        Self::new(p, 1, 0)
    }

    /// Uniform `a` in `1..p`, uniform `b` in `0..p`.
    pub fn sample<R: Rng + ?Sized>(p: u64, rng: &mut R) -> Result<Self> {
        let a = rng.gen_range(1..p.max(2));
        let b = rng.gen_range(0..p);
        Self::new(p, a, b)
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn a(&self) -> u64 {
        self.a
    }

    pub fn b(&self) -> u64 {
        self.b
    }

    pub fn image(&self, i: u64) -> u64 {
        ((self.a as u128 * i as u128 + self.b as u128) % self.p as u128) as u64
    }

    pub fn preimage(&self, j: u64) -> u64 {
        let shifted = (j + self.p - self.b) % self.p;
        ((shifted as u128 * mod_inverse(self.a, self.p) as u128) % self.p as u128) as u64
    }

    fn check_len(&self, w: &Word) -> Result<()> {
        if w.len() as u64 != self.p {
            return Err(contract(format!("word of length {} for a permutation of {}", w.len(), self.p)));
        }
        Ok(())
    }

    /// `out[i] = w[pi(i)]`.
    pub fn apply(&self, w: &Word) -> Result<Word> {
        self.check_len(w)?;
        Word::from_bits((0..self.p).map(|i| w.get(self.image(i) as usize)))
    }

    /// Inverse of [`apply`](Self::apply): `out[pi(i)] = w[i]`.
    pub fn invert(&self, w: &Word) -> Result<Word> {
        self.check_len(w)?;
        let mut out = Word::zeros(w.len())?;
        for i in 0..self.p {
            out.set(self.image(i) as usize, w.get(i as usize));
        }
        Ok(out)
    }
}

/// A padded word cut into `m = ceil(len / k)` blocks of `k` bits; the last
/// block is zero-filled.
#[derive(Clone, Debug, PartialEq)]
pub struct BlockView {
    word: Word,
    k: usize,
}

impl BlockView {
    pub fn new(word: Word, k: usize) -> Result<Self> {
        if k == 0 {
            return Err(contract("block size must be positive"));
        }
        Ok(BlockView { word, k })
    }

    pub fn word(&self) -> &Word {
        &self.word
    }

    pub fn block_size(&self) -> usize {
        self.k
    }

    pub fn block_count(&self) -> usize {
        self.word.len().div_ceil(self.k)
    }

    pub fn block(&self, i: usize) -> Word {
        self.word
            .slice_padded(i * self.k, self.k)
            .expect("block size is positive")
    }

    pub fn blocks(&self) -> Vec<Word> {
        (0..self.block_count()).map(|i| self.block(i)).collect()
    }

    /// Reassembles blocks into a word of length `len`.
    pub fn join(blocks: &[Word], len: usize) -> Result<Word> {
        Word::concat(blocks)?.resized(len)
    }
}

/// Number of blocks in which the permuted words differ in at least
/// `threshold_frac * k` positions (and in at least one).
pub fn dangerous_blocks(
    x: &Word,
    y: &Word,
    perm: &AffinePermutation,
    k: usize,
    threshold_frac: f64,
) -> Result<usize> {
    let diff = perm.apply(&x.xor(y)?)?;
    let view = BlockView::new(diff, k)?;
    let threshold = threshold_frac * k as f64;
    Ok(view
        .blocks()
        .iter()
        .map(Word::count_ones)
        .filter(|&c| c > 0 && c as f64 >= threshold - 1e-9)
        .count())
}

/// How Bob settles each block once he holds its candidate list.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum InnerMode {
    /// Keep the candidate closest to his own block; costs nothing extra.
    #[default]
    Nearest,
    /// Resolve the list with a per-block NBA exchange; zero error on safe
    /// blocks, two extra rounds.
    Nba,
}

impl std::str::FromStr for InnerMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "nearest" => Ok(InnerMode::Nearest),
            "nba" => Ok(InnerMode::Nba),
            _ => Err(Error::Config(format!("unknown inner mode {s:?}; use nearest or nba"))),
        }
    }
}

pub const INNER_MAX_K: usize = 14;

/// Parameters of the composite protocol.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ProbParams {
    /// Block size and field degree.
    pub k: usize,
    /// Number of extra Reed-Solomon evaluations.
    pub s: usize,
    pub delta: f64,
    /// Dimension of the inner `[k, inner_dim]` code.
    pub inner_dim: usize,
    pub inner_mode: InnerMode,
}

impl ProbParams {
    pub fn new(k: usize, s: usize, delta: f64) -> Self {
        ProbParams {
            k,
            s,
            delta,
            inner_dim: (k / 2).max(1),
            inner_mode: InnerMode::Nearest,
        }
    }

    /// `k ~ log2 n`, `s ~ n / (k log2 k)`, `delta = 0.15`.
    pub fn defaults_for(n: usize) -> Self {
        let k = (usize::BITS - n.max(4).leading_zeros()) as usize - 1;
        let k = k.clamp(2, INNER_MAX_K);
        let s = ((n as f64) / (k as f64 * (k as f64).log2())).round().max(2.0) as usize;
        Self::new(k, s, 0.15)
    }

    /// Padded length and block count for words of length `n`.
    pub fn layout(&self, n: usize) -> Result<(u64, usize)> {
        let p = next_prime_at_least((n as u64).max(2))?;
        Ok((p, (p as usize).div_ceil(self.k)))
    }

    /// Inner list-decoding radius `floor((alpha + delta) k)`.
    pub fn inner_radius(&self, alpha: f64) -> usize {
        floor_scaled(alpha + self.delta, self.k)
    }

    pub fn validate(&self, alpha: f64, n: usize) -> Result<()> {
        if self.k < 2 || self.k > INNER_MAX_K {
            return Err(Error::Capability(format!(
                "block size {} outside 2..={INNER_MAX_K}",
                self.k
            )));
        }
        if self.s < 2 {
            return Err(contract(format!("s = {} below 2", self.s)));
        }
        if !(self.delta > 0.0 && self.delta < 0.5 - alpha) {
            return Err(contract(format!(
                "delta {} outside (0, 1/2 - alpha) for alpha {alpha}",
                self.delta
            )));
        }
        if self.inner_dim == 0 || self.inner_dim >= self.k {
            return Err(contract(format!(
                "inner dimension {} outside 1..{}",
                self.inner_dim, self.k
            )));
        }
        let (_, m) = self.layout(n)?;
        if m + self.s >= 1 << self.k {
            return Err(contract(format!(
                "m + s = {} must stay below the field size 2^{}",
                m + self.s,
                self.k
            )));
        }
        Ok(())
    }
}

/// Shared, reusable setup of the one-round protocol: the code, its list
/// radius and the prime pool sized for the list cap.
#[derive(Clone, Debug)]
pub struct OneRoundSetup {
    code: LinearCode,
    radius: usize,
    primes: Arc<RandomPrimeSource>,
}

impl OneRoundSetup {
    /// Collision probability on any candidate list is at most `1 / a`.
    pub fn new(code: LinearCode, radius: usize, a: u64) -> Result<Self> {
        let primes = RandomPrimeSource::new(code.n(), listdec_cap(&code, radius)?, a)?;
        Ok(OneRoundSetup {
            code,
            radius,
            primes: Arc::new(primes),
        })
    }

    pub fn code(&self) -> &LinearCode {
        &self.code
    }

    pub fn hash_width(&self) -> usize {
        width_for(self.primes.bound())
    }
}

/// One message: syndrome, a random prime `q` and `X mod q`. Bob refuses to
/// answer if `q` collides on his list.
pub fn one_round_parties<R: Rng + ?Sized>(
    setup: &OneRoundSetup,
    instance: &SyncInstance,
    rng: &mut R,
) -> Result<PartyPair> {
    let n = instance.bounds.n();
    if setup.code.n() != n {
        return Err(contract(format!("code block length {} does not match n = {n}", setup.code.n())));
    }
    let width = setup.hash_width();
    let hash = setup.primes.sample(rng);
    let mut msg = BitWriter::new();
    msg.push_word(&syndrome(&setup.code, &instance.x)?);
    msg.push_uint(hash.q(), width);
    msg.push_uint(hash.apply(&instance.x), width);

    let code = setup.code.clone();
    let radius = setup.radius;
    let y = instance.y.clone();
    let bob = move |m: Vec<Word>| -> Result<Finish> {
        let mut r = BitReader::new(&m[0]);
        let h = r.read_word(code.n() - code.k())?;
        let hash = ModHash::new(r.read_uint(width)?)?;
        let residue = r.read_uint(width)?;
        let cands = listdec_candidates(&code, radius, &h, &y)?;
        let list_size = cands.len() as f64;
        let finish = if !hash.is_injective_on(&cands) {
            Finish::failed().with("collision", 1.0)
        } else {
            match cands.into_iter().find(|c| hash.apply(c) == residue) {
                Some(x) => Finish::recovered(x).with("collision", 0.0),
                None => Finish::failed().with("collision", 0.0),
            }
        };
        Ok(finish.with("list_size", list_size).with("q", hash.q() as f64))
    };
    Ok(PartyPair::new(
        Announcer::new([msg.finish()?]),
        Collector::new(1, bob),
    ))
}

pub fn one_round_prob_sync<R: Rng + ?Sized>(
    setup: &OneRoundSetup,
    instance: &SyncInstance,
    rng: &mut R,
) -> Result<ProtocolOutcome> {
    one_round_parties(setup, instance, rng)?.run_loopback()
}

/// Public, per-run layout of the composite protocol.
#[derive(Clone, Debug)]
struct Layout {
    n: usize,
    p: u64,
    m: usize,
    k: usize,
    s: usize,
    check: usize,
    radius: usize,
    mode: InnerMode,
    perm_width: usize,
}

impl Layout {
    fn new(n: usize, alpha: f64, params: &ProbParams) -> Result<Self> {
        params.validate(alpha, n)?;
        let (p, m) = params.layout(n)?;
        Ok(Layout {
            n,
            p,
            m,
            k: params.k,
            s: params.s,
            check: params.k - params.inner_dim,
            radius: params.inner_radius(alpha),
            mode: params.inner_mode,
            perm_width: width_for(p - 1),
        })
    }

    /// Width of each per-block prime and residue, from the inner code's
    /// worst-case list size.
    fn nba_width(&self, code: &LinearCode) -> Result<usize> {
        Ok(nba_width(listdec_cap(code, self.radius)?, self.k))
    }

    fn bits_perm(&self) -> usize {
        2 * self.perm_width
    }

    fn bits_matrix(&self) -> usize {
        self.check * self.k
    }

    fn bits_syndromes(&self) -> usize {
        self.m * self.check
    }

    fn bits_nba(&self, width: usize) -> usize {
        2 * self.m * width
    }

    fn bits_rs(&self) -> usize {
        self.s * self.k
    }

    fn blocks_of(&self, w: &Word, perm: &AffinePermutation) -> Result<Vec<Word>> {
        Ok(BlockView::new(perm.apply(&w.resized(self.p as usize)?)?, self.k)?.blocks())
    }

    fn read_perm(&self, msg: &Word) -> Result<AffinePermutation> {
        let mut r = BitReader::new(msg);
        let a = r.read_uint(self.perm_width)?;
        let b = r.read_uint(self.perm_width)?;
        AffinePermutation::new(self.p, a, b).map_err(|e| Error::Malformed(e.to_string()))
    }

    fn read_inner(&self, msg: &Word) -> Result<(LinearCode, Vec<Word>)> {
        let mut r = BitReader::new(msg);
        let rows = (0..self.check)
            .map(|_| r.read_word(self.k))
            .collect::<Result<Vec<_>>>()?;
        let code = LinearCode::from_parity_check(BitMatrix::from_rows(rows)?)
            .map_err(|e| Error::Malformed(e.to_string()))?;
        let syndromes = (0..self.m)
            .map(|_| r.read_word(self.check))
            .collect::<Result<Vec<_>>>()?;
        Ok((code, syndromes))
    }

    fn to_field(&self, blocks: &[Word]) -> Vec<FieldElem> {
        blocks
            .iter()
            .map(|b| FieldElem(b.to_u64().expect("k <= 14") as u32))
            .collect()
    }
}

/// Block candidates `y' + Y_i + z` for one block.
fn block_candidates(code: &LinearCode, radius: usize, h: &Word, y_block: &Word) -> Result<Vec<Word>> {
    listdec_candidates(code, radius, h, y_block)
}

/// The candidate closest to `y_block`, or `y_block` itself if the list is empty.
fn nearest_candidate(cands: &[Word], y_block: &Word) -> Result<Word> {
    let mut best: Option<(usize, &Word)> = None;
    for c in cands {
        let d = hamming_distance(c, y_block)?;
        if best.is_none_or(|(bd, _)| d < bd) {
            best = Some((d, c));
        }
    }
    Ok(best.map_or_else(|| y_block.clone(), |(_, c)| c.clone()))
}

struct CompositeAlice {
    outbox: VecDeque<Word>,
    answers: Option<Vec<NbaAnswer>>,
    rs_msg: Option<Word>,
}

impl Party for CompositeAlice {
    fn resume(&mut self, incoming: Option<Word>) -> Result<Step> {
        if let Some(m) = self.outbox.pop_front() {
            return Ok(Step::Send(m));
        }
        if let Some(answers) = &self.answers {
            let Some(msg) = incoming else {
                return Ok(Step::Recv);
            };
            let mut reader = BitReader::new(&msg);
            let mut out = BitWriter::new();
            for a in answers {
                a.answer(&mut reader, &mut out)?;
            }
            self.answers = None;
            self.outbox.push_back(out.finish()?);
            if let Some(rs) = self.rs_msg.take() {
                self.outbox.push_back(rs);
            }
            return Ok(Step::Send(self.outbox.pop_front().expect("just pushed")));
        }
        if let Some(rs) = self.rs_msg.take() {
            return Ok(Step::Send(rs));
        }
        Ok(Step::Finish(Finish::done()))
    }
}

#[allow(clippy::enum_variant_names)]
enum BobStage {
    AwaitPerm,
    AwaitInner,
    AwaitResidues {
        queries: Vec<Option<NbaQuery>>,
        y_blocks: Vec<Word>,
    },
    AwaitRs {
        inner: Vec<Word>,
    },
}

struct CompositeBob {
    layout: Layout,
    y: Word,
    perm: Option<AffinePermutation>,
    field: Gf2k,
    stage: BobStage,
    /// List cap and field width of the NBA exchange, once the code is known.
    nba: (usize, usize),
}

impl CompositeBob {
    fn settle(&mut self, msg: &Word) -> Result<Step> {
        let l = &self.layout;
        let perm = self.perm.expect("permutation arrives first");
        let (code, syndromes) = l.read_inner(msg)?;
        let y_blocks = l.blocks_of(&self.y, &perm)?;
        let lists = syndromes
            .iter()
            .zip(&y_blocks)
            .map(|(h, yb)| block_candidates(&code, l.radius, h, yb))
            .collect::<Result<Vec<_>>>()?;
        match l.mode {
            InnerMode::Nearest => {
                let inner = lists
                    .iter()
                    .zip(&y_blocks)
                    .map(|(c, yb)| nearest_candidate(c, yb))
                    .collect::<Result<Vec<_>>>()?;
                self.stage = BobStage::AwaitRs { inner };
                Ok(Step::Recv)
            }
            InnerMode::Nba => {
                let cap = listdec_cap(&code, l.radius)?;
                let width = nba_width(cap, l.k);
                self.nba = (cap, width);
                let mut out = BitWriter::new();
                let mut queries = Vec::with_capacity(l.m);
                for cands in lists {
                    if cands.is_empty() {
                        out.push_uint(2, width);
                        queries.push(None);
                    } else {
                        let q = NbaQuery::new(cands, l.k, cap)?;
                        q.write_prime(&mut out);
                        queries.push(Some(q));
                    }
                }
                self.stage = BobStage::AwaitResidues { queries, y_blocks };
                Ok(Step::Send(out.finish()?))
            }
        }
    }

    fn finish(&self, inner: &[Word], msg: &Word) -> Result<Step> {
        let l = &self.layout;
        let mut r = BitReader::new(msg);
        let extra = (0..l.s)
            .map(|_| r.read_uint(l.k).map(|v| FieldElem(v as u32)))
            .collect::<Result<Vec<_>>>()?;
        let received = l.to_field(inner);
        let base = Finish::done()
            .with("stages", 3.0)
            .with("bits_perm", l.bits_perm() as f64)
            .with("bits_matrix", l.bits_matrix() as f64)
            .with("bits_syndromes", l.bits_syndromes() as f64)
            .with("bits_nba", l.bits_nba(self.nba.1) as f64)
            .with("bits_rs", l.bits_rs() as f64)
            .with("blocks", l.m as f64);
        let Some(fixed) = rs_correct(&self.field, &received, &extra)? else {
            return Ok(Step::Finish(base.with("rs_failure", 1.0)));
        };
        let corrections = fixed.iter().zip(&received).filter(|(a, b)| a != b).count();
        let blocks = fixed
            .iter()
            .map(|v| Word::from_u64(u64::from(v.0), l.k))
            .collect::<Result<Vec<_>>>()?;
        let permuted = BlockView::join(&blocks, l.p as usize)?;
        let x = self.perm.expect("permutation arrives first").invert(&permuted)?.resized(l.n)?;
        Ok(Step::Finish(Finish {
            recovered: Some(x),
            ..base.with("rs_failure", 0.0).with("rs_corrections", corrections as f64)
        }))
    }
}

impl Party for CompositeBob {
    fn resume(&mut self, incoming: Option<Word>) -> Result<Step> {
        let Some(msg) = incoming else {
            return Ok(Step::Recv);
        };
        match std::mem::replace(&mut self.stage, BobStage::AwaitPerm) {
            BobStage::AwaitPerm => {
                self.perm = Some(self.layout.read_perm(&msg)?);
                self.stage = BobStage::AwaitInner;
                Ok(Step::Recv)
            }
            BobStage::AwaitInner => self.settle(&msg),
            BobStage::AwaitResidues { queries, y_blocks } => {
                let mut r = BitReader::new(&msg);
                let width = self.nba.1;
                let mut inner = Vec::with_capacity(queries.len());
                for (q, yb) in queries.iter().zip(y_blocks) {
                    let found = match q {
                        Some(q) => q.resolve(&mut r)?,
                        None => {
                            r.read_uint(width)?;
                            None
                        }
                    };
                    inner.push(found.unwrap_or(yb));
                }
                self.stage = BobStage::AwaitRs { inner };
                Ok(Step::Recv)
            }
            BobStage::AwaitRs { inner } => self.finish(&inner, &msg),
        }
    }
}

/// Three stages: a shared random permutation, per-block syndrome list
/// decoding against one random inner code, and Reed-Solomon repair of the
/// blocks that came out wrong.
///
/// Alice's randomness is drawn from `rng`; Bob's side is deterministic.
pub fn composite_parties<R: Rng + ?Sized>(
    instance: &SyncInstance,
    params: &ProbParams,
    rng: &mut R,
) -> Result<PartyPair> {
    let layout = Layout::new(instance.bounds.n(), instance.bounds.alpha(), params)?;
    let field = Gf2k::new(layout.k as u32)?;
    let mut alice_rng = ChaCha8Rng::seed_from_u64(rng.gen());

    let perm = AffinePermutation::sample(layout.p, &mut alice_rng)?;
    let code = random_linear_code(layout.k, params.inner_dim, &mut alice_rng)?;
    let x_blocks = layout.blocks_of(&instance.x, &perm)?;

    let mut stage1 = BitWriter::new();
    stage1.push_uint(perm.a(), layout.perm_width);
    stage1.push_uint(perm.b(), layout.perm_width);

    let mut stage2 = BitWriter::new();
    for r in 0..layout.check {
        stage2.push_word(code.parity_check().row(r));
    }
    for b in &x_blocks {
        stage2.push_word(&syndrome(&code, b)?);
    }

    let mut stage3 = BitWriter::new();
    for v in rs_extra_evals(&field, &layout.to_field(&x_blocks), layout.s)? {
        stage3.push_uint(u64::from(v.0), layout.k);
    }

    let answers = match layout.mode {
        InnerMode::Nearest => None,
        InnerMode::Nba => {
            let width = layout.nba_width(&code)?;
            Some(x_blocks.iter().map(|b| NbaAnswer::new(b.clone(), width)).collect())
        }
    };
    let alice = CompositeAlice {
        outbox: VecDeque::from([stage1.finish()?, stage2.finish()?]),
        answers,
        rs_msg: Some(stage3.finish()?),
    };
    let bob = CompositeBob {
        layout,
        y: instance.y.clone(),
        perm: None,
        field,
        stage: BobStage::AwaitPerm,
        nba: (0, 0),
    };
    Ok(PartyPair::new(alice, bob))
}

pub fn composite_prob_sync<R: Rng + ?Sized>(
    instance: &SyncInstance,
    params: &ProbParams,
    rng: &mut R,
) -> Result<ProtocolOutcome> {
    composite_parties(instance, params, rng)?.run_loopback()
}

/// Ground truth about one composite run, reconstructed from the instance and
/// the transcript.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CompositeAudit {
    pub blocks: usize,
    pub dangerous: usize,
    /// Blocks Bob got wrong before the outer layer.
    pub inner_errors: usize,
    /// Of those, the ones that were not dangerous.
    pub safe_inner_errors: usize,
}

pub fn composite_audit(
    instance: &SyncInstance,
    params: &ProbParams,
    transcript: &Transcript,
) -> Result<CompositeAudit> {
    let l = Layout::new(instance.bounds.n(), instance.bounds.alpha(), params)?;
    let msgs = transcript.messages();
    if msgs.len() < 2 {
        return Err(Error::Malformed("composite transcript is too short".into()));
    }
    let perm = l.read_perm(&msgs[0].payload)?;
    let (code, syndromes) = l.read_inner(&msgs[1].payload)?;
    let x_blocks = l.blocks_of(&instance.x, &perm)?;
    let y_blocks = l.blocks_of(&instance.y, &perm)?;
    let threshold = (instance.bounds.alpha() + params.delta) * l.k as f64;

    let mut audit = CompositeAudit {
        blocks: l.m,
        dangerous: 0,
        inner_errors: 0,
        safe_inner_errors: 0,
    };
    for ((xb, yb), h) in x_blocks.iter().zip(&y_blocks).zip(&syndromes) {
        let diff = hamming_distance(xb, yb)?;
        let dangerous = diff > 0 && diff as f64 >= threshold - 1e-9;
        let cands = block_candidates(&code, l.radius, h, yb)?;
        let wrong = match l.mode {
            InnerMode::Nearest => nearest_candidate(&cands, yb)? != *xb,
            // The NBA exchange is exact whenever the list holds the block.
            InnerMode::Nba => !cands.contains(xb),
        };
        audit.dangerous += usize::from(dangerous);
        audit.inner_errors += usize::from(wrong);
        audit.safe_inner_errors += usize::from(wrong && !dangerous);
    }
    Ok(audit)
}
