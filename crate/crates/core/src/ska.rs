//! Two-party secret key agreement protocols run exhaustively over the uniform
//! edge distribution, and the audit of their key quality and communication.
//!
//! Alice holds a point, Bob a polynomial through it. Turns alternate starting
//! with Alice; each turn either sends a (possibly empty) bit string or halts.
//! Both parties then output a key, which must agree on every branch.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{guard, Error, Result};
use crate::field::{FieldElement, PolyCoeffs};
use crate::graph::GraphSpec;
use crate::info::JointTable;

/// Cap on private coins per party and on public coins.
pub const MAX_RANDOM_BITS: u32 = 8;
/// Cap on executed branches.
pub const MAX_BRANCHES: u128 = 1 << 24;

/// Variables of an execution table, in column order.
pub const VARIABLES: [&str; 7] = ["X", "Y", "R_pub", "R_A", "R_B", "T", "Z"];

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Role {
    Alice,
    Bob,
}

impl Role {
    pub fn tag(self) -> char {
        match self {
            Role::Alice => 'A',
            Role::Bob => 'B',
        }
    }

    pub fn other(self) -> Role {
        match self {
            Role::Alice => Role::Bob,
            Role::Bob => Role::Alice,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Step {
    Send(Vec<bool>),
    Halt,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Message {
    pub sender: Role,
    pub bits: Vec<bool>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Transcript {
    messages: Vec<Message>,
}

impl Transcript {
    pub fn messages(&self) -> &[Message] {
        &self.messages
    }

    pub fn rounds(&self) -> usize {
        self.messages.len()
    }

    /// Whose turn it is next.
    pub fn turn(&self) -> Role {
        if self.messages.len().is_multiple_of(2) {
            Role::Alice
        } else {
            Role::Bob
        }
    }

    pub fn push(&mut self, bits: Vec<bool>) {
        let sender = self.turn();
        self.messages.push(Message { sender, bits });
    }

    /// Payload bits sent by `role`, framing excluded.
    pub fn bits_sent(&self, role: Role) -> usize {
        self.messages.iter().filter(|m| m.sender == role).map(|m| m.bits.len()).sum()
    }

    /// Bits of the `i`-th message, if sent.
    pub fn message(&self, i: usize) -> Option<&[bool]> {
        self.messages.get(i).map(|m| m.bits.as_slice())
    }
}

/// `A3:010|B0:` framing: sender tag, payload length, payload.
impl fmt::Display for Transcript {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, m) in self.messages.iter().enumerate() {
            if i > 0 {
                f.write_str("|")?;
            }
            write!(f, "{}{}:", m.sender.tag(), m.bits.len())?;
            for &b in &m.bits {
                f.write_str(if b { "1" } else { "0" })?;
            }
        }
        Ok(())
    }
}

/// Big-endian `width`-bit encoding of `value`.
pub fn encode_bits(value: u64, width: u32) -> Vec<bool> {
    (0..width).rev().map(|i| value >> i & 1 == 1).collect()
}

pub fn decode_bits(bits: &[bool]) -> u64 {
    bits.iter().fold(0, |acc, &b| acc << 1 | u64::from(b))
}

/// What one party knows when it moves: its own vertex id (point id for
/// Alice, polynomial id for Bob), its private coins, the public coins and the
/// transcript so far.
#[derive(Clone, Copy, Debug)]
pub struct PartyView<'a> {
    pub graph: &'a GraphSpec,
    pub role: Role,
    pub input: u64,
    pub private: u64,
    pub public: u64,
    pub transcript: &'a Transcript,
}

pub trait Protocol: Send + Sync {
    fn name(&self) -> String;

    /// Messages allowed before the protocol must have halted.
    fn max_rounds(&self) -> usize;

    fn private_bits(&self) -> u32 {
        0
    }

    fn public_bits(&self) -> u32 {
        0
    }

    fn next_message(&self, view: &PartyView<'_>) -> Step;

    fn key(&self, view: &PartyView<'_>) -> u64;
}

type MessageFn = dyn Fn(&PartyView<'_>) -> Step + Send + Sync;
type KeyFn = dyn Fn(&PartyView<'_>) -> u64 + Send + Sync;

/// A protocol assembled from closures.
#[derive(Clone)]
pub struct ClosureProtocol {
    pub name: String,
    pub max_rounds: usize,
    pub private_bits: u32,
    pub public_bits: u32,
    pub next_message: Arc<MessageFn>,
    pub key: Arc<KeyFn>,
}

impl ClosureProtocol {
    pub fn new<M, K>(name: impl Into<String>, max_rounds: usize, next_message: M, key: K) -> Self
    where
        M: Fn(&PartyView<'_>) -> Step + Send + Sync + 'static,
        K: Fn(&PartyView<'_>) -> u64 + Send + Sync + 'static,
    {
        ClosureProtocol {
            name: name.into(),
            max_rounds,
            private_bits: 0,
            public_bits: 0,
            next_message: Arc::new(next_message),
            key: Arc::new(key),
        }
    }

    pub fn with_randomness(mut self, private_bits: u32, public_bits: u32) -> Self {
        self.private_bits = private_bits;
        self.public_bits = public_bits;
        self
    }
}

impl fmt::Debug for ClosureProtocol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ClosureProtocol")
            .field("name", &self.name)
            .field("max_rounds", &self.max_rounds)
            .field("private_bits", &self.private_bits)
            .field("public_bits", &self.public_bits)
            .finish_non_exhaustive()
    }
}

impl Protocol for ClosureProtocol {
    fn name(&self) -> String {
        self.name.clone()
    }
    fn max_rounds(&self) -> usize {
        self.max_rounds
    }
    fn private_bits(&self) -> u32 {
        self.private_bits
    }
    fn public_bits(&self) -> u32 {
        self.public_bits
    }
    fn next_message(&self, view: &PartyView<'_>) -> Step {
        (self.next_message)(view)
    }
    fn key(&self, view: &PartyView<'_>) -> u64 {
        (self.key)(view)
    }
}

fn width(g: &GraphSpec) -> u32 {
    g.field().bits_per_element()
}

fn elem(g: &GraphSpec, bits: &[bool]) -> FieldElement {
    let v = decode_bits(bits);
    g.field().element(v).unwrap_or(FieldElement::ZERO)
}

fn coords(g: &GraphSpec, point: u64) -> (FieldElement, FieldElement) {
    let pt = g.point(point).expect("point id from the executor");
    (pt.x1, pt.x2)
}

fn coeffs(g: &GraphSpec, poly: u64) -> PolyCoeffs {
    g.poly(poly).expect("poly id from the executor")
}

/// Alice announces `x1`; the key is `x2`.
#[derive(Clone, Copy, Debug, Default)]
pub struct PointFirst;

impl Protocol for PointFirst {
    fn name(&self) -> String {
        "point_first".into()
    }
    fn max_rounds(&self) -> usize {
        1
    }
    fn next_message(&self, v: &PartyView<'_>) -> Step {
        match (v.role, v.transcript.rounds()) {
            (Role::Alice, 0) => Step::Send(encode_bits(u64::from(coords(v.graph, v.input).0.idx()), width(v.graph))),
            _ => Step::Halt,
        }
    }
    fn key(&self, v: &PartyView<'_>) -> u64 {
        point_first_key(v, 0)
    }
}

fn point_first_key(v: &PartyView<'_>, round: usize) -> u64 {
    match v.role {
        Role::Alice => u64::from(coords(v.graph, v.input).1.idx()),
        Role::Bob => {
            let x1 = elem(v.graph, v.transcript.message(round).unwrap_or(&[]));
            u64::from(v.graph.field().eval_poly(&coeffs(v.graph, v.input), x1).idx())
        }
    }
}

/// Alice passes; Bob announces `s_1 .. s_d`; the key is `s_0`.
#[derive(Clone, Copy, Debug, Default)]
pub struct PolyCoeffsFirst;

impl Protocol for PolyCoeffsFirst {
    fn name(&self) -> String {
        "poly_coeffs".into()
    }
    fn max_rounds(&self) -> usize {
        2
    }
    fn next_message(&self, v: &PartyView<'_>) -> Step {
        poly_coeffs_step(v, 0)
    }
    fn key(&self, v: &PartyView<'_>) -> u64 {
        poly_coeffs_key(v, 0)
    }
}

fn poly_coeffs_step(v: &PartyView<'_>, offset: usize) -> Step {
    match (v.role, v.transcript.rounds() - offset) {
        (Role::Alice, 0) => Step::Send(Vec::new()),
        (Role::Bob, 1) => {
            let w = width(v.graph);
            let c = coeffs(v.graph, v.input);
            Step::Send(c.coeffs()[1..].iter().flat_map(|s| encode_bits(u64::from(s.idx()), w)).collect())
        }
        _ => Step::Halt,
    }
}

fn poly_coeffs_key(v: &PartyView<'_>, offset: usize) -> u64 {
    let f = v.graph.field();
    match v.role {
        Role::Bob => u64::from(coeffs(v.graph, v.input).coeffs()[0].idx()),
        Role::Alice => {
            let (x1, x2) = coords(v.graph, v.input);
            let w = width(v.graph) as usize;
            let sent = v.transcript.message(offset + 1).unwrap_or(&[]);
            // s0 = x2 - sum_{i >= 1} s_i x1^i
            let mut rest = FieldElement::ZERO;
            for (i, chunk) in sent.chunks(w.max(1)).enumerate() {
                let term = f.mul(elem(v.graph, chunk), f.pow(x1, i as u64 + 1));
                rest = f.add(rest, term);
            }
            u64::from(f.sub(x2, rest).idx())
        }
    }
}

/// One public coin picks `point_first` (0) or `poly_coeffs` (1).
#[derive(Clone, Copy, Debug, Default)]
pub struct Timeshare;

impl Protocol for Timeshare {
    fn name(&self) -> String {
        "timeshare".into()
    }
    fn max_rounds(&self) -> usize {
        2
    }
    fn public_bits(&self) -> u32 {
        1
    }
    fn next_message(&self, v: &PartyView<'_>) -> Step {
        if v.public & 1 == 0 {
            PointFirst.next_message(v)
        } else {
            poly_coeffs_step(v, 0)
        }
    }
    fn key(&self, v: &PartyView<'_>) -> u64 {
        if v.public & 1 == 0 {
            point_first_key(v, 0)
        } else {
            poly_coeffs_key(v, 0)
        }
    }
}

/// Alice announces `x1` and both use it as the key.
#[derive(Clone, Copy, Debug, Default)]
pub struct LeakyKey;

impl Protocol for LeakyKey {
    fn name(&self) -> String {
        "leaky_key".into()
    }
    fn max_rounds(&self) -> usize {
        1
    }
    fn next_message(&self, v: &PartyView<'_>) -> Step {
        PointFirst.next_message(v)
    }
    fn key(&self, v: &PartyView<'_>) -> u64 {
        decode_bits(v.transcript.message(0).unwrap_or(&[]))
    }
}

/// No messages, constant key.
#[derive(Clone, Copy, Debug, Default)]
pub struct Silent;

impl Protocol for Silent {
    fn name(&self) -> String {
        "silent".into()
    }
    fn max_rounds(&self) -> usize {
        0
    }
    fn next_message(&self, _: &PartyView<'_>) -> Step {
        Step::Halt
    }
    fn key(&self, _: &PartyView<'_>) -> u64 {
        0
    }
}

fn splitmix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Seeded pseudo-random protocol: a fixed number of rounds, each message a
/// hash of the sender's whole view truncated to a seed-dependent width. The
/// key is a hash of the transcript and public coins, so both sides agree.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RandomProtocol {
    pub seed: u64,
    rounds: usize,
    widths: [u32; 4],
    private_bits: u32,
    public_bits: u32,
}

impl RandomProtocol {
    pub fn new(seed: u64) -> Self {
        let h = splitmix(seed);
        let rounds = 1 + (h % 4) as usize;
        let widths = [(h >> 8) % 4, (h >> 12) % 4, (h >> 16) % 4, (h >> 20) % 4].map(|w| w as u32);
        RandomProtocol { seed, rounds, widths, private_bits: ((h >> 24) % 3) as u32, public_bits: ((h >> 28) % 3) as u32 }
    }

    fn view_hash(&self, v: &PartyView<'_>) -> u64 {
        let mut h = splitmix(self.seed ^ (v.role as u64) << 63);
        for x in [v.input, v.private, v.public] {
            h = splitmix(h ^ x);
        }
        for m in v.transcript.messages() {
            h = splitmix(h ^ decode_bits(&m.bits) ^ (m.bits.len() as u64) << 32);
        }
        h
    }
}

impl Protocol for RandomProtocol {
    fn name(&self) -> String {
        format!("random_{}", self.seed)
    }
    fn max_rounds(&self) -> usize {
        self.rounds
    }
    fn private_bits(&self) -> u32 {
        self.private_bits
    }
    fn public_bits(&self) -> u32 {
        self.public_bits
    }
    fn next_message(&self, v: &PartyView<'_>) -> Step {
        let r = v.transcript.rounds();
        if r >= self.rounds {
            return Step::Halt;
        }
        Step::Send(encode_bits(self.view_hash(v), self.widths[r]))
    }
    fn key(&self, v: &PartyView<'_>) -> u64 {
        let mut h = splitmix(self.seed ^ v.public);
        for m in v.transcript.messages() {
            h = splitmix(h ^ decode_bits(&m.bits));
        }
        h % v.graph.q()
    }
}

/// Declarative choice of a built-in protocol, e.g. `{"kind": "timeshare"}` or
/// `{"kind": "random", "seed": 3}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum ProtocolDescription {
    PointFirst,
    PolyCoeffs,
    Timeshare,
    LeakyKey,
    Silent,
    Random { seed: u64 },
}

impl ProtocolDescription {
    pub fn build(self) -> Box<dyn Protocol> {
        match self {
            ProtocolDescription::PointFirst => Box::new(PointFirst),
            ProtocolDescription::PolyCoeffs => Box::new(PolyCoeffsFirst),
            ProtocolDescription::Timeshare => Box::new(Timeshare),
            ProtocolDescription::LeakyKey => Box::new(LeakyKey),
            ProtocolDescription::Silent => Box::new(Silent),
            ProtocolDescription::Random { seed } => Box::new(RandomProtocol::new(seed)),
        }
    }

    /// Parses a built-in name (`point_first`, `poly_coeffs`, ...).
    pub fn from_name(name: &str) -> Result<Self> {
        let name = name.replace('-', "_");
        serde_json::from_value(serde_json::json!({ "kind": name }))
            .map_err(|_| Error::InvalidParameter(format!("unknown protocol {name:?}")))
    }
}

/// The three protocols of the asymmetry comparison.
pub fn builtin_protocols() -> Vec<Box<dyn Protocol>> {
    vec![Box::new(PointFirst), Box::new(PolyCoeffsFirst), Box::new(Timeshare)]
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Branch {
    /// `[point id, poly id]`
    pub input: [u64; 2],
    /// `[public, Alice private, Bob private]`
    pub rand: [u64; 3],
    #[serde(rename = "bits_A")]
    pub bits_a: usize,
    #[serde(rename = "bits_B")]
    pub bits_b: usize,
    pub transcript: String,
    #[serde(skip)]
    pub key: u64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Execution {
    pub protocol: String,
    pub public_bits: u32,
    pub private_bits: u32,
    /// Uniform over branches, variables as in [`VARIABLES`]; `T` is an index
    /// into `transcripts`.
    pub table: JointTable<i128>,
    /// Distinct transcripts in sorted order.
    pub transcripts: Vec<String>,
    pub branches: Vec<Branch>,
}

fn run_branch(
    spec: &GraphSpec,
    protocol: &dyn Protocol,
    (x, y): (u64, u64),
    rand: [u64; 3],
) -> Result<Branch> {
    let mut transcript = Transcript::default();
    fn view<'a>(spec: &'a GraphSpec, (x, y): (u64, u64), rand: [u64; 3], role: Role, t: &'a Transcript) -> PartyView<'a> {
        let alice = role == Role::Alice;
        PartyView {
            graph: spec,
            role,
            input: if alice { x } else { y },
            private: if alice { rand[1] } else { rand[2] },
            public: rand[0],
            transcript: t,
        }
    }
    let max = protocol.max_rounds();
    loop {
        let step = protocol.next_message(&view(spec, (x, y), rand, transcript.turn(), &transcript));
        match step {
            Step::Halt => break,
            Step::Send(bits) => {
                if transcript.rounds() >= max {
                    return Err(Error::NonHalting { max_rounds: max });
                }
                transcript.push(bits);
            }
        }
    }
    let ka = protocol.key(&view(spec, (x, y), rand, Role::Alice, &transcript));
    let kb = protocol.key(&view(spec, (x, y), rand, Role::Bob, &transcript));
    let rendered = transcript.to_string();
    if ka != kb {
        return Err(Error::KeyDisagreement(format!(
            "input (point {x}, poly {y}), rand {rand:?}, transcript {rendered:?}: Alice {ka}, Bob {kb}"
        )));
    }
    Ok(Branch {
        input: [x, y],
        rand,
        bits_a: transcript.bits_sent(Role::Alice),
        bits_b: transcript.bits_sent(Role::Bob),
        transcript: rendered,
        key: ka,
    })
}

/// Runs `protocol` on every (edge, public coins, private coins) branch.
/// Errors report the first failing branch in enumeration order.
pub fn execute_all(spec: &GraphSpec, protocol: &dyn Protocol) -> Result<Execution> {
    if spec.m() != 0 {
        return Err(Error::InvalidParameter(
            "protocols run on the base graph; private coins come from the protocol".into(),
        ));
    }
    let (pb, rb) = (protocol.public_bits(), protocol.private_bits());
    for (what, bits) in [("public", pb), ("private", rb)] {
        if bits > MAX_RANDOM_BITS {
            return Err(Error::InvalidParameter(format!("{bits} {what} random bits exceed {MAX_RANDOM_BITS}")));
        }
    }
    let per_edge = 1u128 << (pb + 2 * rb);
    guard("protocol branches", spec.num_edges() * per_edge, MAX_BRANCHES)?;
    let edges = spec.edge_ids()?;
    let (npub, npriv) = (1u64 << pb, 1u64 << rb);
    let results: Vec<Result<Branch>> = (0..edges.len() as u64 * per_edge as u64)
        .into_par_iter()
        .map(|i| {
            let rb_coin = i % npriv;
            let ra_coin = i / npriv % npriv;
            let pub_coin = i / (npriv * npriv) % npub;
            let edge = edges[(i / per_edge as u64) as usize];
            run_branch(spec, protocol, edge, [pub_coin, ra_coin, rb_coin])
        })
        .collect();
    let branches = results.into_iter().collect::<Result<Vec<_>>>()?;

    let mut ids: BTreeMap<&str, u64> = branches.iter().map(|b| (b.transcript.as_str(), 0)).collect();
    for (i, v) in ids.values_mut().enumerate() {
        *v = i as u64;
    }
    let rows = branches.iter().map(|b| {
        let t = ids[b.transcript.as_str()];
        (vec![b.input[0], b.input[1], b.rand[0], b.rand[1], b.rand[2], t, b.key], 1i128)
    });
    let table = JointTable::from_counts(VARIABLES, rows)?;
    let transcripts = ids.keys().map(|s| s.to_string()).collect();
    Ok(Execution {
        protocol: protocol.name(),
        public_bits: pb,
        private_bits: rb,
        table,
        transcripts,
        branches,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct AuditParams {
    /// Information tolerance in bits.
    pub eps: f64,
    /// Communication slack in bits.
    pub delta: f64,
}

impl Default for AuditParams {
    fn default() -> Self {
        AuditParams { eps: 0.01, delta: 1.0 }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Verdict {
    Pass,
    Fail,
    SecurityFail,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AuditSettings {
    pub n: f64,
    pub d: u32,
    pub eps: f64,
    pub delta: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProtocolAudit {
    pub protocol: String,
    pub correct: bool,
    #[serde(rename = "H_key")]
    pub h_key: f64,
    /// `I(Z : T, R_pub)`
    pub leakage_bits: f64,
    pub leakage_exact_independent: bool,
    /// `I(T, R_pub : X : Y)`
    #[serde(rename = "triple_info_T")]
    pub triple_info_t: f64,
    #[serde(rename = "expected_bits_A")]
    pub expected_bits_a: f64,
    #[serde(rename = "expected_bits_B")]
    pub expected_bits_b: f64,
    #[serde(rename = "max_bits_A")]
    pub max_bits_a: usize,
    #[serde(rename = "max_bits_B")]
    pub max_bits_b: usize,
    pub branch_coverage: f64,
    pub verdict: Verdict,
    pub params: AuditSettings,
    pub branches: Vec<Branch>,
}

/// Audits an execution. `n` is the per-element entropy scale (`log2 q`) and
/// the communication thresholds are `n - delta` for Alice, `d n - delta` for
/// Bob. The eavesdropper sees the transcript and the public coins.
pub fn audit(exec: &Execution, n: f64, d: u32, params: AuditParams) -> Result<ProtocolAudit> {
    let t = &exec.table;
    for v in VARIABLES {
        t.index_of(v).map_err(|_| Error::MissingVariable(v.to_string()))?;
    }
    let eve = ["T", "R_pub"];
    let h_key = t.entropy(&["Z"], &[])?;
    let leakage = t.mutual_info(&["Z"], &eve, &[])?.max(0.0);
    let independent = t.exact_independent(&["Z"], &eve, &[])?;
    let triple = t.triple_info(&eve, &["X"], &["Y"])?;

    let total = exec.branches.len() as f64;
    let (ta, tb) = (n - params.delta, f64::from(d) * n - params.delta);
    let covered = exec
        .branches
        .iter()
        .filter(|b| b.bits_a as f64 >= ta || b.bits_b as f64 >= tb)
        .count();
    let branch_coverage = covered as f64 / total;
    let expected_bits_a = exec.branches.iter().map(|b| b.bits_a as f64).sum::<f64>() / total;
    let expected_bits_b = exec.branches.iter().map(|b| b.bits_b as f64).sum::<f64>() / total;

    let verdict = if leakage > params.eps {
        Verdict::SecurityFail
    } else if h_key >= n - params.eps && branch_coverage < 1.0 - params.eps {
        Verdict::Fail
    } else {
        Verdict::Pass
    };
    Ok(ProtocolAudit {
        protocol: exec.protocol.clone(),
        correct: true,
        h_key,
        leakage_bits: leakage,
        leakage_exact_independent: independent,
        triple_info_t: triple,
        expected_bits_a,
        expected_bits_b,
        max_bits_a: exec.branches.iter().map(|b| b.bits_a).max().unwrap_or(0),
        max_bits_b: exec.branches.iter().map(|b| b.bits_b).max().unwrap_or(0),
        branch_coverage,
        verdict,
        params: AuditSettings { n, d, eps: params.eps, delta: params.delta },
        branches: exec.branches.clone(),
    })
}

/// `execute_all` followed by `audit` with `n = log2 q`.
pub fn run_audit(spec: &GraphSpec, protocol: &dyn Protocol, params: AuditParams) -> Result<ProtocolAudit> {
    let exec = execute_all(spec, protocol)?;
    audit(&exec, spec.field().log2_q(), spec.d(), params)
}
