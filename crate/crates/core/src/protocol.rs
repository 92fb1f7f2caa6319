//! Wire format and the one-round session: framing, transports, digest
//! serialization, and the hex set-file format.

use std::collections::BTreeSet;
use std::io::{self, Read, Write};
use std::net::TcpStream;
use std::sync::mpsc::{channel, Receiver, Sender};

use crate::bounds::baseline_bits;
use crate::gf2::{BitVector, FieldElement};
use crate::params::{Params, Scheme};
use crate::recon1::{decode1, encode1, Digest1, ReconError, SymmetricDifference};
use crate::recont::{decode_t, encode_t, DigestT};

pub const MAGIC: [u8; 4] = *b"THLR";
pub const VERSION: u8 = 0x01;
/// Magic, version, type and the 4-byte length.
pub const FRAME_OVERHEAD: usize = 10;
pub const MAX_PAYLOAD: usize = 64 << 20;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[repr(u8)]
pub enum MsgType {
    Hello = 0x01,
    Digest = 0x02,
    Result = 0x03,
    Error = 0x7F,
}

impl MsgType {
    pub fn from_byte(b: u8) -> Option<MsgType> {
        match b {
            0x01 => Some(MsgType::Hello),
            0x02 => Some(MsgType::Digest),
            0x03 => Some(MsgType::Result),
            0x7F => Some(MsgType::Error),
            _ => None,
        }
    }
}

#[derive(Debug, thiserror::Error)]
pub enum ProtocolError {
    #[error("transport: {0}")]
    Io(#[from] io::Error),
    #[error("peer closed the connection")]
    Closed,
    #[error("bad frame magic")]
    BadMagic,
    #[error("unsupported protocol version {0:#04x}")]
    BadVersion(u8),
    #[error("unknown message type {0:#04x}")]
    UnknownType(u8),
    #[error("frame payload of {0} bytes exceeds the limit")]
    PayloadTooLarge(usize),
    #[error("expected {expected:?} frame, got {got:?}")]
    Unexpected { expected: MsgType, got: MsgType },
    #[error("parameter fingerprints differ")]
    ParamMismatch,
    #[error("peer reported: {0}")]
    Peer(String),
    #[error("malformed payload: {0}")]
    Malformed(String),
    #[error(transparent)]
    Recon(#[from] ReconError),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Frame {
    pub msg_type: MsgType,
    pub payload: Vec<u8>,
}

impl Frame {
    pub fn new(msg_type: MsgType, payload: Vec<u8>) -> Frame {
        Frame { msg_type, payload }
    }

    pub fn encode(&self) -> Vec<u8> {
        let mut out = Vec::with_capacity(FRAME_OVERHEAD + self.payload.len());
        out.extend_from_slice(&MAGIC);
        out.push(VERSION);
        out.push(self.msg_type as u8);
        out.extend_from_slice(&(self.payload.len() as u32).to_be_bytes());
        out.extend_from_slice(&self.payload);
        out
    }

    pub fn wire_len(&self) -> usize {
        FRAME_OVERHEAD + self.payload.len()
    }

    /// Reads exactly one frame. A clean EOF before the header is `Closed`.
    pub fn read_from(r: &mut impl Read) -> Result<Frame, ProtocolError> {
        let mut header = [0u8; FRAME_OVERHEAD];
        if let Err(e) = r.read_exact(&mut header) {
            return Err(if e.kind() == io::ErrorKind::UnexpectedEof {
                ProtocolError::Closed
            } else {
                e.into()
            });
        }
        if header[..4] != MAGIC {
            return Err(ProtocolError::BadMagic);
        }
        if header[4] != VERSION {
            return Err(ProtocolError::BadVersion(header[4]));
        }
        let msg_type = MsgType::from_byte(header[5]).ok_or(ProtocolError::UnknownType(header[5]))?;
        let len = u32::from_be_bytes(header[6..10].try_into().expect("4 bytes")) as usize;
        if len > MAX_PAYLOAD {
            return Err(ProtocolError::PayloadTooLarge(len));
        }
        let mut payload = vec![0u8; len];
        r.read_exact(&mut payload)?;
        Ok(Frame { msg_type, payload })
    }

    /// Parses a buffer holding exactly one frame.
    pub fn decode(bytes: &[u8]) -> Result<Frame, ProtocolError> {
        let mut cur = io::Cursor::new(bytes);
        let f = Frame::read_from(&mut cur)?;
        if cur.position() as usize != bytes.len() {
            return Err(ProtocolError::Malformed("trailing bytes after frame".into()));
        }
        Ok(f)
    }
}

/// A bidirectional frame channel.
pub trait Transport {
    fn send_frame(&mut self, frame: &Frame) -> Result<(), ProtocolError>;
    fn recv_frame(&mut self) -> Result<Frame, ProtocolError>;
}

/// One end of an in-process queue pair; frames travel as encoded bytes.
pub struct MemoryTransport {
    tx: Sender<Vec<u8>>,
    rx: Receiver<Vec<u8>>,
}

/// Two connected in-memory endpoints.
pub fn memory_pair() -> (MemoryTransport, MemoryTransport) {
    let (tx_a, rx_b) = channel();
    let (tx_b, rx_a) = channel();
    (MemoryTransport { tx: tx_a, rx: rx_a }, MemoryTransport { tx: tx_b, rx: rx_b })
}

impl Transport for MemoryTransport {
    fn send_frame(&mut self, frame: &Frame) -> Result<(), ProtocolError> {
        self.tx.send(frame.encode()).map_err(|_| ProtocolError::Closed)
    }

    fn recv_frame(&mut self) -> Result<Frame, ProtocolError> {
        let bytes = self.rx.recv().map_err(|_| ProtocolError::Closed)?;
        Frame::decode(&bytes)
    }
}

pub struct TcpTransport {
    stream: TcpStream,
}

impl TcpTransport {
    pub fn new(stream: TcpStream) -> TcpTransport {
        TcpTransport { stream }
    }

    pub fn into_inner(self) -> TcpStream {
        self.stream
    }
}

impl Transport for TcpTransport {
    fn send_frame(&mut self, frame: &Frame) -> Result<(), ProtocolError> {
        self.stream.write_all(&frame.encode())?;
        self.stream.flush()?;
        Ok(())
    }

    fn recv_frame(&mut self) -> Result<Frame, ProtocolError> {
        Frame::read_from(&mut self.stream)
    }
}

/// A digest of either scheme.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Digest {
    Single(Digest1),
    Multi(DigestT),
}

/// Encodes `set` with whichever scheme `params` selects.
pub fn encode<'a>(params: &Params, set: impl IntoIterator<Item = &'a BitVector>) -> Result<Digest, ReconError> {
    Ok(match params.scheme() {
        Scheme::Single(_) => Digest::Single(encode1(params, set)?),
        Scheme::General(_) => Digest::Multi(encode_t(params, set)?),
    })
}

pub fn decode(params: &Params, a: &Digest, b: &Digest) -> Result<SymmetricDifference, ReconError> {
    match (a, b) {
        (Digest::Single(a), Digest::Single(b)) => decode1(params, a, b),
        (Digest::Multi(a), Digest::Multi(b)) => decode_t(params, a, b),
        _ => Err(ReconError::DigestShape),
    }
}

/// Serialized digest size in bytes.
pub fn digest_len(params: &Params) -> usize {
    match params.scheme() {
        Scheme::Single(s) => s.comp.redundancy().div_ceil(8) + s.digest_field.degree().div_ceil(8),
        Scheme::General(_) => params.digest_bits().div_ceil(8),
    }
}

fn pack(elems: &[&FieldElement]) -> Vec<u8> {
    let total: usize = elems.iter().map(|e| e.degree()).sum();
    let mut bits = BitVector::zeros(total);
    let mut off = 0;
    for e in elems {
        bits.write_at(off, &e.to_bits());
        off += e.degree();
    }
    bits.to_bytes_msb()
}

fn malformed(msg: impl Into<String>) -> ProtocolError {
    ProtocolError::Malformed(msg.into())
}

/// Digest1: `w1` then `w2`, each padded to whole bytes. DigestT: every
/// symbol back to back, padded once at the end. Pad bits are zero.
pub fn serialize_digest(params: &Params, d: &Digest) -> Result<Vec<u8>, ProtocolError> {
    match (params.scheme(), d) {
        (Scheme::Single(s), Digest::Single(d)) => {
            if d.w1.len() != s.comp.redundancy() || !s.digest_field.contains(&d.w2) {
                return Err(ReconError::DigestShape.into());
            }
            let mut out = d.w1.to_bytes_msb();
            out.extend(d.w2.to_bits().to_bytes_msb());
            Ok(out)
        }
        (Scheme::General(g), Digest::Multi(d)) => {
            let t = params.t();
            let ok = d.w1.len() == g.rs.redundancy()
                && d.w1.iter().all(|e| g.rs.field().contains(e))
                && d.w2.len() == t * t
                && d.w2.iter().all(|e| g.big.contains(e));
            if !ok {
                return Err(ReconError::DigestShape.into());
            }
            Ok(pack(&d.w1.iter().chain(&d.w2).collect::<Vec<_>>()))
        }
        _ => Err(ReconError::DigestShape.into()),
    }
}

pub fn parse_digest(params: &Params, bytes: &[u8]) -> Result<Digest, ProtocolError> {
    let expected = digest_len(params);
    if bytes.len() != expected {
        return Err(malformed(format!("digest is {} bytes, expected {expected}", bytes.len())));
    }
    match params.scheme() {
        Scheme::Single(s) => {
            let u = s.comp.redundancy();
            let split = u.div_ceil(8);
            let w1 = BitVector::from_bytes_msb(u, &bytes[..split]).ok_or_else(|| malformed("nonzero pad bits in w1"))?;
            let w2_bits = BitVector::from_bytes_msb(s.digest_field.degree(), &bytes[split..])
                .ok_or_else(|| malformed("nonzero pad bits in w2"))?;
            let w2 = s.digest_field.from_bits(&w2_bits).expect("exact width");
            Ok(Digest::Single(Digest1 { w1, w2 }))
        }
        Scheme::General(g) => {
            let total = params.digest_bits();
            let bits = BitVector::from_bytes_msb(total, bytes).ok_or_else(|| malformed("nonzero pad bits"))?;
            let a = g.rs.field().degree();
            let mut off = 0;
            let mut take = |field: &crate::gf2::Field, width: usize| {
                let e = field.from_bits(&bits.slice(off, width)).expect("exact width");
                off += width;
                e
            };
            let w1 = (0..g.rs.redundancy()).map(|_| take(g.rs.field(), a)).collect();
            let w2 = (0..params.t() * params.t()).map(|_| take(&g.big, g.nbar)).collect();
            Ok(Digest::Multi(DigestT { w1, w2 }))
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Outcome {
    Success,
    Inconsistent,
    ParamMismatch,
    Failed,
}

/// Wire accounting for one session; byte counts include framing.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SessionStats {
    pub bytes_sent: usize,
    pub bytes_received: usize,
    pub frames_sent: usize,
    pub frames_received: usize,
    pub digest_bits: usize,
    pub baseline_bits: usize,
    pub outcome: Outcome,
    /// Payload of the DIGEST frame this host sent, if any.
    pub digest_payload: Option<Vec<u8>>,
}

/// A failed session together with what went over the wire before it failed.
#[derive(Debug, thiserror::Error)]
#[error("{error}")]
pub struct SessionError {
    #[source]
    pub error: ProtocolError,
    pub stats: SessionStats,
}

struct Session<'t, T: Transport> {
    transport: &'t mut T,
    stats: SessionStats,
}

impl<'t, T: Transport> Session<'t, T> {
    fn new(transport: &'t mut T, params: &Params) -> Self {
        Session {
            transport,
            stats: SessionStats {
                bytes_sent: 0,
                bytes_received: 0,
                frames_sent: 0,
                frames_received: 0,
                digest_bits: params.digest_bits(),
                baseline_bits: baseline_bits(params.n(), params.t(), params.h()),
                outcome: Outcome::Failed,
                digest_payload: None,
            },
        }
    }

    fn send(&mut self, frame: Frame) -> Result<(), ProtocolError> {
        self.transport.send_frame(&frame)?;
        self.stats.bytes_sent += frame.wire_len();
        self.stats.frames_sent += 1;
        if frame.msg_type == MsgType::Digest {
            self.stats.digest_payload = Some(frame.payload);
        }
        Ok(())
    }

    fn recv(&mut self, expected: MsgType) -> Result<Frame, ProtocolError> {
        let f = self.transport.recv_frame()?;
        self.stats.bytes_received += f.wire_len();
        self.stats.frames_received += 1;
        if f.msg_type == MsgType::Error {
            return Err(ProtocolError::Peer(String::from_utf8_lossy(&f.payload).into_owned()));
        }
        if f.msg_type != expected {
            return Err(ProtocolError::Unexpected {
                expected,
                got: f.msg_type,
            });
        }
        Ok(f)
    }

    fn handshake(&mut self, params: &Params) -> Result<(), ProtocolError> {
        self.send(Frame::new(MsgType::Hello, params.fingerprint().to_vec()))?;
        let hello = self.recv(MsgType::Hello)?;
        if hello.payload != params.fingerprint() {
            self.stats.outcome = Outcome::ParamMismatch;
            let _ = self.send(Frame::new(MsgType::Error, b"parameter fingerprint mismatch".to_vec()));
            return Err(ProtocolError::ParamMismatch);
        }
        Ok(())
    }

    fn finish<R>(self, r: Result<R, ProtocolError>) -> Result<(R, SessionStats), SessionError> {
        let mut stats = self.stats;
        match r {
            Ok(v) => {
                stats.outcome = Outcome::Success;
                Ok((v, stats))
            }
            Err(error) => {
                if let ProtocolError::Recon(ReconError::InconsistentDigests(_)) = error {
                    stats.outcome = Outcome::Inconsistent;
                }
                Err(SessionError { error, stats })
            }
        }
    }
}

/// Symmetric exchange: send HELLO and DIGEST, read the peer's, decode
/// locally.
pub fn session_run<'a, T: Transport>(
    transport: &mut T,
    params: &Params,
    local: impl IntoIterator<Item = &'a BitVector>,
) -> Result<(SymmetricDifference, SessionStats), SessionError> {
    let mut s = Session::new(transport, params);
    let r = (|| {
        let mine = encode(params, local)?;
        s.handshake(params)?;
        s.send(Frame::new(MsgType::Digest, serialize_digest(params, &mine)?))?;
        let theirs = parse_digest(params, &s.recv(MsgType::Digest)?.payload)?;
        Ok(decode(params, &mine, &theirs)?)
    })();
    s.finish(r)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Role {
    /// Sends its digest and receives the difference.
    Sender,
    /// Decodes and replies with the difference.
    Receiver,
}

/// One-directional exchange: the sender transmits its digest, the receiver
/// replies with the difference in a RESULT frame.
pub fn session_run_asymmetric<'a, T: Transport>(
    transport: &mut T,
    params: &Params,
    local: impl IntoIterator<Item = &'a BitVector>,
    role: Role,
) -> Result<(SymmetricDifference, SessionStats), SessionError> {
    let mut s = Session::new(transport, params);
    let r = (|| {
        let mine = encode(params, local)?;
        s.handshake(params)?;
        match role {
            Role::Sender => {
                s.send(Frame::new(MsgType::Digest, serialize_digest(params, &mine)?))?;
                let res = s.recv(MsgType::Result)?;
                parse_elements(params.n(), &res.payload)
            }
            Role::Receiver => {
                let theirs = parse_digest(params, &s.recv(MsgType::Digest)?.payload)?;
                match decode(params, &theirs, &mine) {
                    Ok(delta) => {
                        s.send(Frame::new(MsgType::Result, serialize_elements(&delta)))?;
                        Ok(delta)
                    }
                    Err(e) => {
                        let _ = s.send(Frame::new(MsgType::Error, e.to_string().into_bytes()));
                        Err(e.into())
                    }
                }
            }
        }
    })();
    s.finish(r)
}

/// Elements back to back, `⌈n/8⌉` bytes each, in set order.
pub fn serialize_elements<'a>(set: impl IntoIterator<Item = &'a BitVector>) -> Vec<u8> {
    set.into_iter().flat_map(|x| x.to_bytes_msb()).collect()
}

pub fn parse_elements(n: usize, bytes: &[u8]) -> Result<SymmetricDifference, ProtocolError> {
    let w = n.div_ceil(8);
    if w == 0 || bytes.len() % w != 0 {
        return Err(malformed(format!("result payload of {} bytes is not a multiple of {w}", bytes.len())));
    }
    bytes
        .chunks(w)
        .map(|c| BitVector::from_bytes_msb(n, c).ok_or_else(|| malformed("nonzero pad bits in element")))
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("line {line}: {msg}")]
pub struct SetFileError {
    pub line: usize,
    pub msg: String,
}

/// Hex digits per element: whole bytes, high bit of the first is position 1.
pub fn hex_width(n: usize) -> usize {
    2 * n.div_ceil(8)
}

pub fn element_to_hex(x: &BitVector) -> String {
    x.to_bytes_msb().iter().map(|b| format!("{b:02x}")).collect()
}

pub fn element_from_hex(n: usize, s: &str) -> Result<BitVector, String> {
    if s.len() != hex_width(n) {
        return Err(format!("expected {} hex digits, got {}", hex_width(n), s.len()));
    }
    let bytes = (0..s.len())
        .step_by(2)
        .map(|i| u8::from_str_radix(s.get(i..i + 2).ok_or("invalid hex")?, 16).map_err(|_| "invalid hex digit"))
        .collect::<Result<Vec<u8>, _>>()?;
    BitVector::from_bytes_msb(n, &bytes).ok_or_else(|| format!("bits beyond position {n} are set"))
}

/// One element per line; blank lines and `#` comments are ignored.
pub fn parse_set(n: usize, text: &str) -> Result<BTreeSet<BitVector>, SetFileError> {
    let mut out = BTreeSet::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let x = element_from_hex(n, line).map_err(|msg| SetFileError { line: i + 1, msg })?;
        out.insert(x);
    }
    Ok(out)
}

pub fn format_set<'a>(set: impl IntoIterator<Item = &'a BitVector>) -> String {
    set.into_iter().map(|x| element_to_hex(x) + "\n").collect()
}
