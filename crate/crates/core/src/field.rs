//! Exact arithmetic in GF(p^k).
//!
//! Elements are canonically indexed: for k > 1 an element is the polynomial
//! `c_0 + c_1 t + ... + c_{k-1} t^{k-1}` over GF(p), stored as the integer
//! `c_0 + c_1 p + ... + c_{k-1} p^{k-1}`. Index 0 is the additive identity and
//! index 1 the multiplicative identity in every field.

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest supported field order.
pub const MAX_ORDER: u32 = 1 << 16;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct FieldElement(u32);

impl FieldElement {
    pub const ZERO: FieldElement = FieldElement(0);
    pub const ONE: FieldElement = FieldElement(1);

    pub fn idx(self) -> u32 {
        self.0
    }

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Coefficients `s_0, ..., s_d` of a polynomial of degree at most `d`.
/// Leading zeros are kept: the length is always `d + 1`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct PolyCoeffs(Vec<FieldElement>);

impl PolyCoeffs {
    pub fn new(coeffs: Vec<FieldElement>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::InvalidParameter(
                "a polynomial needs at least one coefficient".into(),
            ));
        }
        Ok(PolyCoeffs(coeffs))
    }

    pub fn zero(d: u32) -> Self {
        PolyCoeffs(vec![FieldElement::ZERO; d as usize + 1])
    }

    /// The degree bound `d` (number of coefficients minus one).
    pub fn degree_bound(&self) -> u32 {
        (self.0.len() - 1) as u32
    }

    pub fn coeffs(&self) -> &[FieldElement] {
        &self.0
    }
}

/// Operations accepted by [`FieldSpec::arith`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ArithOp {
    Add(FieldElement, FieldElement),
    Neg(FieldElement),
    Mul(FieldElement, FieldElement),
    Inv(FieldElement),
    Pow(FieldElement, u64),
}

/// Serializable description of a field: `{p, k, modulus, q}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FieldDescriptor {
    pub p: u32,
    pub k: u32,
    pub modulus: Vec<u32>,
    pub q: u32,
}

enum Ops {
    Prime,
    Extension { exp: Vec<u32>, log: Vec<u32> },
}

/// A validated finite field GF(p^k). Cheap to clone; immutable.
#[derive(Clone, Serialize, Deserialize)]
#[serde(into = "FieldDescriptor", try_from = "FieldDescriptor")]
pub struct FieldSpec {
    p: u32,
    k: u32,
    /// Monic modulus, lowest coefficient first, length k + 1. Empty when k = 1.
    modulus: Vec<u32>,
    q: u32,
    ops: Arc<Ops>,
}

impl fmt::Debug for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FieldSpec")
            .field("p", &self.p)
            .field("k", &self.k)
            .field("modulus", &self.modulus)
            .field("q", &self.q)
            .finish()
    }
}

impl PartialEq for FieldSpec {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p && self.k == other.k && self.modulus == other.modulus
    }
}

impl Eq for FieldSpec {}

impl From<FieldSpec> for FieldDescriptor {
    fn from(spec: FieldSpec) -> Self {
        spec.descriptor()
    }
}

impl TryFrom<FieldDescriptor> for FieldSpec {
    type Error = Error;

    fn try_from(desc: FieldDescriptor) -> Result<Self> {
        let modulus = if desc.k > 1 { Some(desc.modulus.as_slice()) } else { None };
        let spec = make_field(u64::from(desc.p), desc.k, modulus)?;
        if spec.q != desc.q {
            return Err(Error::InvalidParameter(format!(
                "descriptor q = {} but p^k = {}",
                desc.q, spec.q
            )));
        }
        Ok(spec)
    }
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut f = 2u64;
    while f * f <= n {
        if n.is_multiple_of(f) {
            return false;
        }
        f += 1;
    }
    true
}

/// Builds GF(p^k). For k > 1 without an explicit modulus the lexicographically
/// smallest monic irreducible polynomial (comparing `c_0` first) is used.
pub fn make_field(p: u64, k: u32, modulus: Option<&[u32]>) -> Result<FieldSpec> {
    if p > u64::from(MAX_ORDER) {
        return Err(Error::FieldTooLarge { p: p.min(u64::from(u32::MAX)) as u32, k });
    }
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    if k == 0 {
        return Err(Error::InvalidParameter("extension degree k must be at least 1".into()));
    }
    let too_large = || Error::FieldTooLarge { p: p as u32, k };
    let q = (p as u128)
        .checked_pow(k)
        .filter(|&q| q <= u128::from(MAX_ORDER))
        .ok_or_else(too_large)? as u32;
    let p = p as u32;

    if k == 1 {
        return Ok(FieldSpec { p, k, modulus: Vec::new(), q, ops: Arc::new(Ops::Prime) });
    }

    let modulus = match modulus {
        Some(given) => {
            let degree = given.iter().rposition(|&c| c % p != 0);
            if given.len() != k as usize + 1 || degree != Some(k as usize) {
                return Err(Error::DegreeMismatch {
                    expected: k,
                    found: degree.unwrap_or(0),
                });
            }
            if let Some(&c) = given.iter().find(|&&c| c >= p) {
                return Err(Error::InvalidParameter(format!(
                    "modulus coefficient {c} is not reduced mod {p}"
                )));
            }
            let lead_inv = pow_mod(given[k as usize], p - 2, p);
            let monic: Vec<u32> = given.iter().map(|&c| mul_mod(c, lead_inv, p)).collect();
            if !is_irreducible(&monic, p) {
                return Err(Error::ReducibleModulus { p });
            }
            monic
        }
        None => smallest_irreducible(p, k),
    };

    let (exp, log) = build_log_tables(&modulus, p, q);
    Ok(FieldSpec { p, k, modulus, q, ops: Arc::new(Ops::Extension { exp, log }) })
}

fn mul_mod(a: u32, b: u32, p: u32) -> u32 {
    ((u64::from(a) * u64::from(b)) % u64::from(p)) as u32
}

fn pow_mod(mut base: u32, mut e: u32, p: u32) -> u32 {
    let mut acc = 1 % p;
    base %= p;
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_mod(acc, base, p);
        }
        base = mul_mod(base, base, p);
        e >>= 1;
    }
    acc
}

/// Remainder of `a` modulo the monic polynomial `m` over GF(p).
fn poly_rem(a: &[u32], m: &[u32], p: u32) -> Vec<u32> {
    let dm = m.len() - 1;
    let mut r = a.to_vec();
    while r.len() > dm {
        let lead = r.pop().unwrap();
        if lead != 0 {
            let shift = r.len() - dm;
            for (i, &c) in m[..dm].iter().enumerate() {
                let sub = mul_mod(lead, c, p);
                r[shift + i] = (r[shift + i] + p - sub) % p;
            }
        }
    }
    r
}

fn is_irreducible(monic: &[u32], p: u32) -> bool {
    let k = monic.len() - 1;
    for deg in 1..=k / 2 {
        let count = (p as usize).pow(deg as u32);
        for code in 0..count {
            let mut g = digits(code as u64, p, deg);
            g.push(1);
            if poly_rem(monic, &g, p).iter().all(|&c| c == 0) {
                return false;
            }
        }
    }
    true
}

fn smallest_irreducible(p: u32, k: u32) -> Vec<u32> {
    let k = k as usize;
    let count = (p as u64).pow(k as u32);
    for code in 0..count {
        // c_0 is the most significant digit of the counter: lexicographic order.
        let mut coeffs = digits(code, p, k);
        coeffs.reverse();
        coeffs.push(1);
        if is_irreducible(&coeffs, p) {
            return coeffs;
        }
    }
    unreachable!("irreducible polynomials exist in every degree")
}

/// Base-p digits of `value`, least significant first, exactly `len` of them.
fn digits(mut value: u64, p: u32, len: usize) -> Vec<u32> {
    let mut out = Vec::with_capacity(len);
    for _ in 0..len {
        out.push((value % u64::from(p)) as u32);
        value /= u64::from(p);
    }
    out
}

fn undigits(ds: &[u32], p: u32) -> u32 {
    ds.iter().rev().fold(0u32, |acc, &d| acc * p + d)
}

fn poly_mulmod(a: u32, b: u32, modulus: &[u32], p: u32) -> u32 {
    let k = modulus.len() - 1;
    let da = digits(u64::from(a), p, k);
    let db = digits(u64::from(b), p, k);
    let mut prod = vec![0u32; 2 * k - 1];
    for (i, &x) in da.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in db.iter().enumerate() {
            prod[i + j] = (prod[i + j] + mul_mod(x, y, p)) % p;
        }
    }
    undigits(&poly_rem(&prod, modulus, p), p)
}

fn build_log_tables(modulus: &[u32], p: u32, q: u32) -> (Vec<u32>, Vec<u32>) {
    let order = (q - 1) as usize;
    for g in 2..q {
        let mut exp = Vec::with_capacity(2 * order);
        let mut x = 1u32;
        let mut primitive = true;
        for i in 0..order {
            if i > 0 && x == 1 {
                primitive = false;
                break;
            }
            exp.push(x);
            x = poly_mulmod(x, g, modulus, p);
        }
        if !primitive || x != 1 {
            continue;
        }
        let mut log = vec![0u32; q as usize];
        for (i, &e) in exp.iter().enumerate() {
            log[e as usize] = i as u32;
        }
        exp.extend_from_within(..order);
        return (exp, log);
    }
    unreachable!("the multiplicative group of a finite field is cyclic")
}

impl FieldSpec {
    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    /// Monic modulus, lowest coefficient first (empty for prime fields).
    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    /// `n = log2 q`, possibly non-integral.
    pub fn log2_q(&self) -> f64 {
        f64::from(self.q).log2()
    }

    /// Bits needed to write one element: `ceil(log2 q)`.
    pub fn bits_per_element(&self) -> u32 {
        32 - (self.q - 1).leading_zeros()
    }

    pub fn descriptor(&self) -> FieldDescriptor {
        FieldDescriptor { p: self.p, k: self.k, modulus: self.modulus.clone(), q: self.q }
    }

    pub fn element(&self, idx: u64) -> Result<FieldElement> {
        if idx < u64::from(self.q) {
            Ok(FieldElement(idx as u32))
        } else {
            Err(Error::InvalidElement { idx, q: self.q })
        }
    }

    pub fn elements(&self) -> impl Iterator<Item = FieldElement> + '_ {
        (0..self.q).map(FieldElement)
    }

    pub fn add(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        match *self.ops {
            Ops::Prime => FieldElement(((u64::from(a.0) + u64::from(b.0)) % u64::from(self.p)) as u32),
            Ops::Extension { .. } if self.p == 2 => FieldElement(a.0 ^ b.0),
            Ops::Extension { .. } => {
                let (mut x, mut y, mut place, mut out) = (a.0, b.0, 1u32, 0u32);
                for _ in 0..self.k {
                    out += ((x % self.p + y % self.p) % self.p) * place;
                    x /= self.p;
                    y /= self.p;
                    place *= self.p;
                }
                FieldElement(out)
            }
        }
    }

    pub fn neg(&self, a: FieldElement) -> FieldElement {
        match *self.ops {
            Ops::Prime => FieldElement((self.p - a.0) % self.p),
            Ops::Extension { .. } if self.p == 2 => a,
            Ops::Extension { .. } => {
                let (mut x, mut place, mut out) = (a.0, 1u32, 0u32);
                for _ in 0..self.k {
                    out += ((self.p - x % self.p) % self.p) * place;
                    x /= self.p;
                    place *= self.p;
                }
                FieldElement(out)
            }
        }
    }

    pub fn sub(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        self.add(a, self.neg(b))
    }

    pub fn mul(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        match &*self.ops {
            Ops::Prime => FieldElement(mul_mod(a.0, b.0, self.p)),
            Ops::Extension { exp, log } => {
                if a.0 == 0 || b.0 == 0 {
                    FieldElement::ZERO
                } else {
                    FieldElement(exp[(log[a.0 as usize] + log[b.0 as usize]) as usize])
                }
            }
        }
    }

    pub fn inv(&self, a: FieldElement) -> Result<FieldElement> {
        if a.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(match &*self.ops {
            Ops::Prime => FieldElement(pow_mod(a.0, self.p - 2, self.p)),
            Ops::Extension { exp, log } => {
                let order = self.q - 1;
                FieldElement(exp[((order - log[a.0 as usize]) % order) as usize])
            }
        })
    }

    /// `a^e`, with `0^0 = 1`.
    pub fn pow(&self, a: FieldElement, e: u64) -> FieldElement {
        if e == 0 {
            return FieldElement::ONE;
        }
        if a.is_zero() {
            return FieldElement::ZERO;
        }
        let order = u64::from(self.q - 1);
        match &*self.ops {
            Ops::Prime => match e % order {
                0 => FieldElement::ONE,
                r => FieldElement(pow_mod(a.0, r as u32, self.p)),
            },
            Ops::Extension { exp, log } => {
                let l = (u128::from(log[a.0 as usize]) * u128::from(e)) % u128::from(order);
                FieldElement(exp[l as usize])
            }
        }
    }

    /// Validating front end over the individual operations.
    pub fn arith(&self, op: ArithOp) -> Result<FieldElement> {
        let check = |e: FieldElement| self.element(u64::from(e.0)).map(|_| ());
        match op {
            ArithOp::Add(a, b) => {
                check(a)?;
                check(b)?;
                Ok(self.add(a, b))
            }
            ArithOp::Neg(a) => {
                check(a)?;
                Ok(self.neg(a))
            }
            ArithOp::Mul(a, b) => {
                check(a)?;
                check(b)?;
                Ok(self.mul(a, b))
            }
            ArithOp::Inv(a) => {
                check(a)?;
                self.inv(a)
            }
            ArithOp::Pow(a, e) => {
                check(a)?;
                Ok(self.pow(a, e))
            }
        }
    }

    /// Horner evaluation of `S(point)`.
    pub fn eval_poly(&self, poly: &PolyCoeffs, point: FieldElement) -> FieldElement {
        poly.0
            .iter()
            .rev()
            .fold(FieldElement::ZERO, |acc, &c| self.add(self.mul(acc, point), c))
    }
}
