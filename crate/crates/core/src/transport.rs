//! Two-party execution with exact bit accounting.
//!
//! A protocol is a pair of [`Party`] step machines. The driver in
//! [`run_protocol`] resumes whichever party can make progress, moves every
//! emitted payload through a [`Channel`], and records it in a [`Transcript`].
//! Only payload bits are counted; TCP framing is free.
//!
//! The same party objects run unchanged over the in-process
//! [`LoopbackChannel`], over a [`TcpChannel`] whose two ends live in one
//! process, or split across processes with [`run_remote`].

use std::collections::{BTreeMap, VecDeque};
use std::io::{BufReader, BufWriter, Read, Write};
use std::net::{SocketAddr, TcpListener, TcpStream, ToSocketAddrs};
use std::sync::{Arc, Condvar, Mutex};

use serde::{Deserialize, Serialize};

use crate::bitword::Word;
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Direction {
    AliceToBob,
    BobToAlice,
}

impl Direction {
    fn index(self) -> usize {
        match self {
            Direction::AliceToBob => 0,
            Direction::BobToAlice => 1,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Role {
    Alice,
    Bob,
}

impl Role {
    pub fn outgoing(self) -> Direction {
        match self {
            Role::Alice => Direction::AliceToBob,
            Role::Bob => Direction::BobToAlice,
        }
    }

    pub fn incoming(self) -> Direction {
        match self {
            Role::Alice => Direction::BobToAlice,
            Role::Bob => Direction::AliceToBob,
        }
    }

    fn name(self) -> &'static str {
        match self {
            Role::Alice => "alice",
            Role::Bob => "bob",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Message {
    pub direction: Direction,
    pub payload: Word,
    /// 1-based round this message belongs to.
    pub round: usize,
}

/// Every message of one run, in send order.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Transcript {
    messages: Vec<Message>,
}

impl Transcript {
    pub fn new() -> Self {
        Self::default()
    }

    /// Appends a message; consecutive messages in one direction share a round.
    pub fn record(&mut self, direction: Direction, payload: Word) {
        let round = match self.messages.last() {
            None => 1,
            Some(last) if last.direction == direction => last.round,
            Some(last) => last.round + 1,
        };
        self.messages.push(Message {
            direction,
            payload,
            round,
        });
    }

    pub fn messages(&self) -> &[Message] {
        &self.messages
    }

    pub fn total_bits(&self) -> usize {
        self.messages.iter().map(|m| m.payload.len()).sum()
    }

    pub fn bits_in(&self, direction: Direction) -> usize {
        self.messages
            .iter()
            .filter(|m| m.direction == direction)
            .map(|m| m.payload.len())
            .sum()
    }

    pub fn bits_in_round(&self, round: usize) -> usize {
        self.messages
            .iter()
            .filter(|m| m.round == round)
            .map(|m| m.payload.len())
            .sum()
    }

    /// Direction alternations plus one; zero for an empty transcript.
    pub fn rounds(&self) -> usize {
        self.messages.last().map_or(0, |m| m.round)
    }
}

pub type Diagnostics = BTreeMap<String, f64>;

/// Result of one Alice/Bob run.
#[derive(Clone, Debug, PartialEq)]
pub struct ProtocolOutcome {
    pub recovered: Option<Word>,
    pub reported_failure: bool,
    pub transcript: Transcript,
    pub diagnostics: Diagnostics,
}

impl ProtocolOutcome {
    pub fn total_bits(&self) -> usize {
        self.transcript.total_bits()
    }

    pub fn rounds(&self) -> usize {
        self.transcript.rounds()
    }

    pub fn recovered_equals(&self, x: &Word) -> bool {
        self.recovered.as_ref() == Some(x)
    }
}

/// What a party produces when it stops.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Finish {
    /// Bob's answer; `None` signals a detected failure. Ignored for Alice.
    pub recovered: Option<Word>,
    pub diagnostics: Diagnostics,
}

impl Finish {
    pub fn done() -> Self {
        Self::default()
    }

    pub fn recovered(word: Word) -> Self {
        Finish {
            recovered: Some(word),
            diagnostics: Diagnostics::new(),
        }
    }

    pub fn failed() -> Self {
        Self::default()
    }

    pub fn with(mut self, key: &str, value: f64) -> Self {
        self.diagnostics.insert(key.to_string(), value);
        self
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Step {
    Send(Word),
    Recv,
    Finish(Finish),
}

/// A resumable protocol participant.
///
/// `resume` is called with `None` at start and after each `Send`, and with
/// the next inbound payload after a `Recv`.
pub trait Party {
    fn resume(&mut self, incoming: Option<Word>) -> Result<Step>;
}

/// Both participants of one protocol run, ready to execute.
pub struct PartyPair {
    pub alice: Box<dyn Party + Send>,
    pub bob: Box<dyn Party + Send>,
}

impl PartyPair {
    pub fn new(alice: impl Party + Send + 'static, bob: impl Party + Send + 'static) -> Self {
        PartyPair {
            alice: Box::new(alice),
            bob: Box::new(bob),
        }
    }

    pub fn run(mut self, channel: &mut dyn Channel) -> Result<ProtocolOutcome> {
        run_protocol(self.alice.as_mut(), self.bob.as_mut(), channel)
    }

    pub fn run_loopback(self) -> Result<ProtocolOutcome> {
        self.run(&mut loopback_channel())
    }

    pub fn into_role(self, role: Role) -> Box<dyn Party + Send> {
        match role {
            Role::Alice => self.alice,
            Role::Bob => self.bob,
        }
    }
}

/// Sends a fixed sequence of messages, then finishes.
#[derive(Debug)]
pub struct Announcer {
    messages: VecDeque<Word>,
}

impl Announcer {
    pub fn new(messages: impl IntoIterator<Item = Word>) -> Self {
        Announcer {
            messages: messages.into_iter().collect(),
        }
    }
}

impl Party for Announcer {
    fn resume(&mut self, _incoming: Option<Word>) -> Result<Step> {
        Ok(match self.messages.pop_front() {
            Some(m) => Step::Send(m),
            None => Step::Finish(Finish::done()),
        })
    }
}

type Decision = Box<dyn FnOnce(Vec<Word>) -> Result<Finish> + Send>;

/// Waits for a fixed number of messages and finishes with `decide(messages)`.
pub struct Collector {
    expected: usize,
    received: Vec<Word>,
    decide: Option<Decision>,
}

impl Collector {
    pub fn new(
        expected: usize,
        decide: impl FnOnce(Vec<Word>) -> Result<Finish> + Send + 'static,
    ) -> Self {
        Collector {
            expected,
            received: Vec::with_capacity(expected),
            decide: Some(Box::new(decide)),
        }
    }
}

impl Party for Collector {
    fn resume(&mut self, incoming: Option<Word>) -> Result<Step> {
        if let Some(w) = incoming {
            self.received.push(w);
        }
        if self.received.len() < self.expected {
            return Ok(Step::Recv);
        }
        let decide = self
            .decide
            .take()
            .ok_or_else(|| Error::Invariant("collector resumed after finishing".into()))?;
        Ok(Step::Finish(decide(std::mem::take(&mut self.received))?))
    }
}

/// A reliable, ordered, bidirectional message pipe.
///
/// `recv` blocks until a message in the given direction is available.
pub trait Channel {
    fn send(&mut self, direction: Direction, payload: &Word) -> Result<()>;
    fn recv(&mut self, direction: Direction) -> Result<Word>;
}

enum PartyState {
    Ready(Option<Word>),
    Waiting,
    Finished,
}

/// Drives both parties to completion, strictly sequentially, until Bob
/// finishes.
pub fn run_protocol(
    alice: &mut dyn Party,
    bob: &mut dyn Party,
    channel: &mut dyn Channel,
) -> Result<ProtocolOutcome> {
    let mut transcript = Transcript::new();
    let mut in_flight = [0usize; 2];
    let mut states = [PartyState::Ready(None), PartyState::Ready(None)];
    let mut diagnostics = Diagnostics::new();
    let roles = [Role::Alice, Role::Bob];

    loop {
        let mut progressed = false;
        for (slot, &role) in roles.iter().enumerate() {
            let party: &mut dyn Party = if slot == 0 { &mut *alice } else { &mut *bob };
            loop {
                let input = match &mut states[slot] {
                    PartyState::Finished => break,
                    PartyState::Waiting => {
                        let inbound = role.incoming();
                        if in_flight[inbound.index()] == 0 {
                            break;
                        }
                        in_flight[inbound.index()] -= 1;
                        Some(channel.recv(inbound)?)
                    }
                    PartyState::Ready(input) => input.take(),
                };
                progressed = true;
                let step = party.resume(input).map_err(|e| Error::Party {
                    party: role.name(),
                    source: Box::new(e),
                })?;
                match step {
                    Step::Send(payload) => {
                        let dir = role.outgoing();
                        channel.send(dir, &payload)?;
                        in_flight[dir.index()] += 1;
                        transcript.record(dir, payload);
                        states[slot] = PartyState::Ready(None);
                    }
                    Step::Recv => states[slot] = PartyState::Waiting,
                    Step::Finish(finish) => {
                        diagnostics.extend(finish.diagnostics);
                        if role == Role::Bob {
                            let reported_failure = finish.recovered.is_none();
                            return Ok(ProtocolOutcome {
                                recovered: finish.recovered,
                                reported_failure,
                                transcript,
                                diagnostics,
                            });
                        }
                        states[slot] = PartyState::Finished;
                    }
                }
            }
        }
        if !progressed {
            return Err(Error::Deadlock(
                "both parties are waiting and no message is in flight".into(),
            ));
        }
    }
}

type Queues = (Mutex<[VecDeque<Word>; 2]>, Condvar);

/// In-process FIFO channel. Clones share the same queues, so one clone may be
/// handed to another thread.
#[derive(Clone, Default)]
pub struct LoopbackChannel {
    inner: Arc<Queues>,
}

pub fn loopback_channel() -> LoopbackChannel {
    LoopbackChannel::default()
}

impl Channel for LoopbackChannel {
    fn send(&mut self, direction: Direction, payload: &Word) -> Result<()> {
        let (lock, cv) = &*self.inner;
        lock.lock().unwrap()[direction.index()].push_back(payload.clone());
        cv.notify_all();
        Ok(())
    }

    fn recv(&mut self, direction: Direction) -> Result<Word> {
        let (lock, cv) = &*self.inner;
        let mut queues = lock.lock().unwrap();
        loop {
            if let Some(w) = queues[direction.index()].pop_front() {
                return Ok(w);
            }
            queues = cv.wait(queues).unwrap();
        }
    }
}

/// Frame layout: 4-byte big-endian payload bit count, then the payload packed
/// LSB-first into `ceil(bits/8)` bytes. Padding bits are zero on write and
/// ignored on read.
pub fn write_frame<W: Write>(w: &mut W, payload: &Word) -> Result<()> {
    let bits = u32::try_from(payload.len())
        .map_err(|_| Error::Capability("payload longer than 2^32 bits".into()))?;
    w.write_all(&bits.to_be_bytes())?;
    w.write_all(&payload.packed_bytes())?;
    w.flush()?;
    Ok(())
}

pub fn read_frame<R: Read>(r: &mut R) -> Result<Word> {
    let mut header = [0u8; 4];
    r.read_exact(&mut header)?;
    let bits = u32::from_be_bytes(header) as usize;
    if bits == 0 {
        return Err(Error::Malformed("zero-length frame".into()));
    }
    let mut body = vec![0u8; bits.div_ceil(8)];
    r.read_exact(&mut body)?;
    Word::from_packed(&body, bits)
}

/// One end of a framed TCP connection.
pub struct TcpLink {
    reader: BufReader<TcpStream>,
    writer: BufWriter<TcpStream>,
}

impl TcpLink {
    pub fn from_stream(stream: TcpStream) -> Result<Self> {
        stream.set_nodelay(true)?;
        let reader = BufReader::new(stream.try_clone()?);
        Ok(TcpLink {
            reader,
            writer: BufWriter::new(stream),
        })
    }

    /// Accepts one connection on `addr`.
    pub fn listen<A: ToSocketAddrs>(addr: A) -> Result<Self> {
        let listener = TcpListener::bind(addr)?;
        let (stream, _) = listener.accept()?;
        Self::from_stream(stream)
    }

    pub fn accept(listener: &TcpListener) -> Result<Self> {
        let (stream, _) = listener.accept()?;
        Self::from_stream(stream)
    }

    pub fn connect<A: ToSocketAddrs>(addr: A) -> Result<Self> {
        Self::from_stream(TcpStream::connect(addr)?)
    }

    pub fn send(&mut self, payload: &Word) -> Result<()> {
        write_frame(&mut self.writer, payload)
    }

    pub fn recv(&mut self) -> Result<Word> {
        read_frame(&mut self.reader)
    }
}

/// Where a TCP channel should come from.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Endpoint {
    /// Bind here and connect both ends in-process.
    Listen(String),
    /// Connect to a relay that pairs this socket with a second one
    /// (see [`relay_pair`]).
    Connect(String),
}

/// Both ends of a TCP connection, held by one process. Alice's payloads are
/// written on her end and read on Bob's, and vice versa.
pub struct TcpChannel {
    alice_end: TcpLink,
    bob_end: TcpLink,
    local_addr: SocketAddr,
}

impl TcpChannel {
    pub fn local_addr(&self) -> SocketAddr {
        self.local_addr
    }

    fn ends(&mut self, direction: Direction) -> (&mut TcpLink, &mut TcpLink) {
        match direction {
            Direction::AliceToBob => (&mut self.alice_end, &mut self.bob_end),
            Direction::BobToAlice => (&mut self.bob_end, &mut self.alice_end),
        }
    }
}

impl Channel for TcpChannel {
    fn send(&mut self, direction: Direction, payload: &Word) -> Result<()> {
        self.ends(direction).0.send(payload)
    }

    fn recv(&mut self, direction: Direction) -> Result<Word> {
        self.ends(direction).1.recv()
    }
}

pub fn tcp_channel(endpoint: &Endpoint) -> Result<TcpChannel> {
    match endpoint {
        Endpoint::Listen(addr) => {
            let listener = TcpListener::bind(addr.as_str())?;
            let local_addr = listener.local_addr()?;
            let alice_end = TcpLink::connect(local_addr)?;
            let bob_end = TcpLink::accept(&listener)?;
            Ok(TcpChannel {
                alice_end,
                bob_end,
                local_addr,
            })
        }
        Endpoint::Connect(addr) => {
            let alice_end = TcpLink::connect(addr.as_str())?;
            let bob_end = TcpLink::connect(addr.as_str())?;
            let local_addr = alice_end.writer.get_ref().peer_addr()?;
            Ok(TcpChannel {
                alice_end,
                bob_end,
                local_addr,
            })
        }
    }
}

/// Accepts two connections on `listener` and forwards frames between them
/// until either side closes. Serves [`Endpoint::Connect`].
pub fn relay_pair(listener: &TcpListener) -> Result<()> {
    let (a, _) = listener.accept()?;
    let (b, _) = listener.accept()?;
    let pump = |from: TcpStream, to: TcpStream| {
        std::thread::spawn(move || {
            let mut r = BufReader::new(from);
            let mut w = BufWriter::new(to);
            while let Ok(frame) = read_frame(&mut r) {
                if write_frame(&mut w, &frame).is_err() {
                    break;
                }
            }
        })
    };
    let t1 = pump(a.try_clone()?, b.try_clone()?);
    let t2 = pump(b, a);
    let _ = t1.join();
    let _ = t2.join();
    Ok(())
}

/// What one side of a split run observed.
#[derive(Clone, Debug, PartialEq)]
pub struct RemoteReport {
    pub finish: Finish,
    pub transcript: Transcript,
}

/// Runs a single party against a peer reached through `link`.
///
/// The returned transcript holds both directions as seen from this side; for
/// Alice it ends at her last message, so Bob's transcript is the complete one.
pub fn run_remote(party: &mut dyn Party, role: Role, link: &mut TcpLink) -> Result<RemoteReport> {
    let mut transcript = Transcript::new();
    let mut input = None;
    loop {
        let step = party.resume(input.take()).map_err(|e| Error::Party {
            party: role.name(),
            source: Box::new(e),
        })?;
        match step {
            Step::Send(payload) => {
                link.send(&payload)?;
                transcript.record(role.outgoing(), payload);
            }
            Step::Recv => {
                let payload = link.recv()?;
                transcript.record(role.incoming(), payload.clone());
                input = Some(payload);
            }
            Step::Finish(finish) => return Ok(RemoteReport { finish, transcript }),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::time::Duration;

    fn w(s: &str) -> Word {
        s.parse().unwrap()
    }

    /// Alice sends her word; Bob outputs it.
    struct Naive(Option<Word>);

    impl Party for Naive {
        fn resume(&mut self, incoming: Option<Word>) -> Result<Step> {
            match (self.0.take(), incoming) {
                (Some(x), _) => Ok(Step::Send(x)),
                (None, None) => Ok(Step::Finish(Finish::done())),
                (None, Some(_)) => unreachable!(),
            }
        }
    }

    struct Receiver;

    impl Party for Receiver {
        fn resume(&mut self, incoming: Option<Word>) -> Result<Step> {
            Ok(match incoming {
                None => Step::Recv,
                Some(x) => Step::Finish(Finish::recovered(x)),
            })
        }
    }

    struct Stuck;

    impl Party for Stuck {
        fn resume(&mut self, _: Option<Word>) -> Result<Step> {
            Ok(Step::Recv)
        }
    }

    struct Faulty;

    impl Party for Faulty {
        fn resume(&mut self, _: Option<Word>) -> Result<Step> {
            Err(Error::Invariant("boom".into()))
        }
    }

    #[test]
    fn naive_protocol_counts_payload_bits() {
        let x = w("10110010");
        let out = PartyPair::new(Naive(Some(x.clone())), Receiver)
            .run_loopback()
            .unwrap();
        assert_eq!(out.recovered, Some(x));
        assert!(!out.reported_failure);
        assert_eq!(out.total_bits(), 8);
        assert_eq!(out.rounds(), 1);
    }

    #[test]
    fn deadlock_and_party_errors() {
        let err = PartyPair::new(Stuck, Stuck).run_loopback().unwrap_err();
        assert!(matches!(err, Error::Deadlock(_)));
        let err = PartyPair::new(Faulty, Receiver).run_loopback().unwrap_err();
        assert!(matches!(err, Error::Party { party: "alice", .. }));
    }

    #[test]
    fn rounds_follow_alternations() {
        let mut t = Transcript::new();
        t.record(Direction::AliceToBob, w("1"));
        t.record(Direction::AliceToBob, w("11"));
        t.record(Direction::BobToAlice, w("111"));
        t.record(Direction::AliceToBob, w("1"));
        assert_eq!(t.rounds(), 3);
        assert_eq!(t.total_bits(), 7);
        assert_eq!(t.bits_in_round(1), 3);
        assert_eq!(t.bits_in(Direction::BobToAlice), 3);
    }

    #[test]
    fn loopback_fifo_per_direction() {
        let mut ch = loopback_channel();
        ch.send(Direction::AliceToBob, &w("1")).unwrap();
        ch.send(Direction::BobToAlice, &w("01")).unwrap();
        ch.send(Direction::AliceToBob, &w("001")).unwrap();
        assert_eq!(ch.recv(Direction::AliceToBob).unwrap(), w("1"));
        assert_eq!(ch.recv(Direction::BobToAlice).unwrap(), w("01"));
        assert_eq!(ch.recv(Direction::AliceToBob).unwrap(), w("001"));
    }

    #[test]
    fn loopback_recv_blocks_until_send() {
        let mut rx = loopback_channel();
        let mut tx = rx.clone();
        let h = std::thread::spawn(move || {
            std::thread::sleep(Duration::from_millis(50));
            tx.send(Direction::BobToAlice, &w("11")).unwrap();
        });
        assert_eq!(rx.recv(Direction::BobToAlice).unwrap(), w("11"));
        h.join().unwrap();
    }

    #[test]
    fn frame_preserves_13_bits_and_ignores_padding() {
        let x = w("1011001110101");
        let mut buf = Vec::new();
        write_frame(&mut buf, &x).unwrap();
        assert_eq!(&buf[..4], &13u32.to_be_bytes());
        assert_eq!(buf.len(), 4 + 2);
        // Dirty the three padding bits; the reader must drop them.
        buf[5] |= 0b1110_0000;
        assert_eq!(read_frame(&mut buf.as_slice()).unwrap(), x);
    }

    #[test]
    fn tcp_channel_round_trip() {
        let mut ch = tcp_channel(&Endpoint::Listen("127.0.0.1:0".into())).unwrap();
        let x = w("1011001110101");
        ch.send(Direction::AliceToBob, &x).unwrap();
        ch.send(Direction::BobToAlice, &w("0")).unwrap();
        assert_eq!(ch.recv(Direction::AliceToBob).unwrap(), x);
        assert_eq!(ch.recv(Direction::BobToAlice).unwrap(), w("0"));
    }

    #[test]
    fn refused_connection_is_a_transport_error() {
        let listener = TcpListener::bind("127.0.0.1:0").unwrap();
        let addr = listener.local_addr().unwrap();
        drop(listener);
        let err = TcpLink::connect(addr).err().unwrap();
        assert!(matches!(err, Error::Transport(_)));
    }

    proptest::proptest! {
        #[test]
        fn loopback_interleaving_preserves_order(
            ops in proptest::collection::vec((proptest::bool::ANY, 1u64..1000), 1..40)
        ) {
            let mut ch = loopback_channel();
            let mut expect: [Vec<Word>; 2] = [Vec::new(), Vec::new()];
            for (to_bob, v) in &ops {
                let dir = if *to_bob { Direction::AliceToBob } else { Direction::BobToAlice };
                let word = Word::from_u64(*v, 10).unwrap();
                ch.send(dir, &word).unwrap();
                expect[dir.index()].push(word);
            }
            for dir in [Direction::AliceToBob, Direction::BobToAlice] {
                for word in &expect[dir.index()] {
                    proptest::prop_assert_eq!(&ch.recv(dir).unwrap(), word);
                }
            }
        }
    }
}
