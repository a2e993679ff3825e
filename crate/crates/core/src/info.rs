//! Exact joint distributions over named discrete variables, with entropy and
//! (conditional, triple) mutual information in bits.
//!
//! A table stores integer weights over a common denominator, so probabilities
//! stay exact rationals and pushforwards and marginals are plain integer sums.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::{Debug, Display};
use std::str::FromStr;

use num_bigint::{BigInt, ToBigInt};
use num_integer::Integer;
use num_rational::Ratio;
use num_traits::{FromPrimitive, Signed, ToPrimitive};
use serde::ser::SerializeMap;
use serde::{Deserialize, Serialize, Serializer};

use crate::error::{guard, Error, Result};
use crate::graph::GraphSpec;

/// Largest number of stored outcomes.
pub const MAX_OUTCOMES: u128 = 1 << 24;

/// Integer types usable as exact table weights.
///
/// Fixed-width types are fast but panic on overflow in debug builds; `BigInt`
/// never overflows.
pub trait ExactInt:
    Integer + Signed + Clone + Debug + Display + FromStr + ToBigInt + ToPrimitive + FromPrimitive + Send + Sync + 'static
{
}

impl<T> ExactInt for T where
    T: Integer + Signed + Clone + Debug + Display + FromStr + ToBigInt + ToPrimitive + FromPrimitive + Send + Sync + 'static
{
}

fn log2_int<I: ExactInt>(v: &I) -> f64 {
    match v.to_f64() {
        Some(f) if f.is_finite() => f.log2(),
        _ => {
            let big = v.to_bigint().expect("integer converts to BigInt");
            let bits = big.bits();
            let shift = bits.saturating_sub(64);
            let top = (big >> shift).to_f64().unwrap_or(f64::MAX);
            top.log2() + shift as f64
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JointTable<I: ExactInt = BigInt> {
    variables: Vec<String>,
    weights: BTreeMap<Vec<u64>, I>,
    total: I,
}

impl<I: ExactInt> JointTable<I> {
    fn check_names(variables: &[String]) -> Result<()> {
        let mut seen = BTreeSet::new();
        for v in variables {
            if !seen.insert(v.as_str()) {
                return Err(Error::DuplicateVariable(v.clone()));
            }
        }
        Ok(())
    }

    /// Table proportional to the given nonnegative weights. Repeated tuples
    /// accumulate; zero weights are dropped.
    pub fn from_counts<S: Into<String>>(
        variables: impl IntoIterator<Item = S>,
        counts: impl IntoIterator<Item = (Vec<u64>, I)>,
    ) -> Result<Self> {
        let variables: Vec<String> = variables.into_iter().map(Into::into).collect();
        Self::check_names(&variables)?;
        let mut weights: BTreeMap<Vec<u64>, I> = BTreeMap::new();
        let mut total = I::zero();
        for (tuple, w) in counts {
            if tuple.len() != variables.len() {
                return Err(Error::InvalidTable(format!(
                    "outcome of arity {} for {} variables",
                    tuple.len(),
                    variables.len()
                )));
            }
            if w.is_negative() {
                return Err(Error::InvalidTable(format!("negative weight {w}")));
            }
            if w.is_zero() {
                continue;
            }
            total = total + w.clone();
            match weights.get_mut(&tuple) {
                Some(slot) => *slot = slot.clone() + w,
                None => {
                    weights.insert(tuple, w);
                    guard("joint table outcomes", weights.len() as u128, MAX_OUTCOMES)?;
                }
            }
        }
        if total.is_zero() {
            return Err(Error::InvalidTable("no outcome with positive weight".into()));
        }
        Ok(JointTable { variables, weights, total })
    }

    /// Uniform distribution over distinct outcomes.
    pub fn uniform<S: Into<String>>(
        variables: impl IntoIterator<Item = S>,
        outcomes: impl IntoIterator<Item = Vec<u64>>,
    ) -> Result<Self> {
        let mut seen = BTreeSet::new();
        let mut counts = Vec::new();
        for o in outcomes {
            if !seen.insert(o.clone()) {
                return Err(Error::InvalidTable(format!("repeated outcome {o:?} in uniform table")));
            }
            counts.push((o, I::one()));
        }
        Self::from_counts(variables, counts)
    }

    /// Table with explicit probabilities, which must sum to exactly one.
    pub fn from_probabilities<S: Into<String>>(
        variables: impl IntoIterator<Item = S>,
        probabilities: impl IntoIterator<Item = (Vec<u64>, Ratio<I>)>,
    ) -> Result<Self> {
        let probabilities: Vec<(Vec<u64>, Ratio<I>)> = probabilities.into_iter().collect();
        let mut sum = Ratio::from_integer(I::zero());
        let mut den = I::one();
        for (_, p) in &probabilities {
            if p.is_negative() {
                return Err(Error::InvalidTable(format!("negative probability {p}")));
            }
            sum = sum + p.clone();
            den = den.lcm(p.denom());
        }
        if sum != Ratio::from_integer(I::one()) {
            return Err(Error::InvalidTable(format!("probabilities sum to {sum}, not 1")));
        }
        let counts = probabilities.into_iter().map(|(o, p)| {
            let w = p.numer().clone() * (den.clone() / p.denom().clone());
            (o, w)
        });
        Self::from_counts(variables, counts)
    }

    pub fn variables(&self) -> &[String] {
        &self.variables
    }

    /// Number of stored (positive-probability) outcomes.
    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn index_of(&self, name: &str) -> Result<usize> {
        self.variables
            .iter()
            .position(|v| v == name)
            .ok_or_else(|| Error::UnknownVariable(name.to_string()))
    }

    fn indices(&self, names: &[&str]) -> Result<Vec<usize>> {
        let mut out: Vec<usize> = names.iter().map(|n| self.index_of(n)).collect::<Result<_>>()?;
        out.sort_unstable();
        out.dedup();
        Ok(out)
    }

    pub fn probability(&self, outcome: &[u64]) -> Ratio<I> {
        match self.weights.get(outcome) {
            Some(w) => Ratio::new(w.clone(), self.total.clone()),
            None => Ratio::from_integer(I::zero()),
        }
    }

    pub fn outcomes(&self) -> impl Iterator<Item = (&[u64], Ratio<I>)> + '_ {
        self.weights
            .iter()
            .map(|(o, w)| (o.as_slice(), Ratio::new(w.clone(), self.total.clone())))
    }

    /// Sum of weights over tuples projected onto `idx`.
    fn grouped(&self, idx: &[usize]) -> BTreeMap<Vec<u64>, I> {
        let mut out: BTreeMap<Vec<u64>, I> = BTreeMap::new();
        for (o, w) in &self.weights {
            let key: Vec<u64> = idx.iter().map(|&i| o[i]).collect();
            match out.get_mut(&key) {
                Some(slot) => *slot = slot.clone() + w.clone(),
                None => {
                    out.insert(key, w.clone());
                }
            }
        }
        out
    }

    /// Marginal on the named variables, in the order given.
    pub fn marginal(&self, names: &[&str]) -> Result<Self> {
        let idx: Vec<usize> = names.iter().map(|n| self.index_of(n)).collect::<Result<_>>()?;
        let variables: Vec<String> = names.iter().map(|s| s.to_string()).collect();
        Self::check_names(&variables)?;
        Ok(JointTable { variables, weights: self.grouped(&idx), total: self.total.clone() })
    }

    /// Appends `name = f(outcome)`; `f` sees the full outcome tuple in
    /// variable order and must be defined on the whole support.
    pub fn map_variable<F>(&self, name: &str, f: F) -> Result<Self>
    where
        F: Fn(&[u64]) -> Option<u64>,
    {
        if self.variables.iter().any(|v| v == name) {
            return Err(Error::DuplicateVariable(name.to_string()));
        }
        let mut weights = BTreeMap::new();
        for (o, w) in &self.weights {
            let v = f(o).ok_or(Error::PartialFunction)?;
            let mut t = o.clone();
            t.push(v);
            weights.insert(t, w.clone());
        }
        let mut variables = self.variables.clone();
        variables.push(name.to_string());
        Ok(JointTable { variables, weights, total: self.total.clone() })
    }

    fn entropy_of(&self, idx: &[usize]) -> f64 {
        if idx.is_empty() {
            return 0.0;
        }
        let log_total = log2_int(&self.total);
        let total = self.total.to_f64().unwrap_or(f64::INFINITY);
        let mut h = 0.0;
        for w in self.grouped(idx).values() {
            let p = if total.is_finite() {
                w.to_f64().unwrap_or(0.0) / total
            } else {
                (log2_int(w) - log_total).exp2()
            };
            h += p * (log_total - log2_int(w));
        }
        h.max(0.0)
    }

    /// `H(of | given)` in bits.
    pub fn entropy(&self, of: &[&str], given: &[&str]) -> Result<f64> {
        let of = self.indices(of)?;
        let given = self.indices(given)?;
        let mut joint: Vec<usize> = of.iter().chain(&given).copied().collect();
        joint.sort_unstable();
        joint.dedup();
        Ok(self.entropy_of(&joint) - self.entropy_of(&given))
    }

    /// `I(a : b | given)` in bits.
    pub fn mutual_info(&self, a: &[&str], b: &[&str], given: &[&str]) -> Result<f64> {
        let ag: Vec<&str> = a.iter().chain(given).copied().collect();
        let bg: Vec<&str> = b.iter().chain(given).copied().collect();
        let abg: Vec<&str> = a.iter().chain(b).chain(given).copied().collect();
        Ok(self.entropy(&ag, &[])? + self.entropy(&bg, &[])? - self.entropy(&abg, &[])? - self.entropy(given, &[])?)
    }

    /// `I(a : b : c) = I(a : b) - I(a : b | c)`; may be negative.
    pub fn triple_info(&self, a: &[&str], b: &[&str], c: &[&str]) -> Result<f64> {
        Ok(self.mutual_info(a, b, &[])? - self.mutual_info(a, b, c)?)
    }

    /// Exact test of `p(a, b | g) = p(a | g) p(b | g)` on every outcome,
    /// i.e. `w(a,b,g) w(g) = w(a,g) w(b,g)` for all value combinations.
    pub fn exact_independent(&self, a: &[&str], b: &[&str], given: &[&str]) -> Result<bool> {
        let g = self.indices(given)?;
        let a: Vec<usize> = self.indices(a)?.into_iter().filter(|i| !g.contains(i)).collect();
        let b: Vec<usize> = self.indices(b)?.into_iter().filter(|i| !g.contains(i)).collect();
        if a.iter().any(|i| b.contains(i)) {
            // shared variable: independent only if it is constant given g
            let shared: Vec<usize> = a.iter().filter(|i| b.contains(i)).copied().collect();
            let mut with_g = shared.clone();
            with_g.extend(&g);
            with_g.sort_unstable();
            if self.grouped(&with_g).len() != self.grouped(&g).len() {
                return Ok(false);
            }
        }
        let cat = |x: &[usize], y: &[usize]| -> Vec<usize> {
            let mut v: Vec<usize> = x.iter().chain(y).copied().collect();
            v.sort_unstable();
            v.dedup();
            v
        };
        let ag = cat(&a, &g);
        let bg = cat(&b, &g);
        let abg = cat(&ag, &b);
        let big = |m: BTreeMap<Vec<u64>, I>| -> BTreeMap<Vec<u64>, BigInt> {
            m.into_iter().map(|(k, v)| (k, v.to_bigint().expect("integer converts to BigInt"))).collect()
        };
        let w_g = big(self.grouped(&g));
        let w_ag = big(self.grouped(&ag));
        let w_bg = big(self.grouped(&bg));
        let w_abg = big(self.grouped(&abg));
        let project = |key: &[u64], from: &[usize], to: &[usize]| -> Vec<u64> {
            to.iter().map(|t| key[from.iter().position(|f| f == t).expect("subset")]).collect()
        };
        // every (a, g) x (b, g) combination with matching g must factor,
        // including those absent from the support
        let mut by_g_a: BTreeMap<Vec<u64>, Vec<(&Vec<u64>, &BigInt)>> = BTreeMap::new();
        for (k, w) in &w_ag {
            by_g_a.entry(project(k, &ag, &g)).or_default().push((k, w));
        }
        let mut by_g_b: BTreeMap<Vec<u64>, Vec<(&Vec<u64>, &BigInt)>> = BTreeMap::new();
        for (k, w) in &w_bg {
            by_g_b.entry(project(k, &bg, &g)).or_default().push((k, w));
        }
        let zero = BigInt::from(0);
        for (gv, wg) in &w_g {
            let (Some(av), Some(bv)) = (by_g_a.get(gv), by_g_b.get(gv)) else {
                continue;
            };
            for (ka, wa) in av {
                for (kb, wb) in bv {
                    let key: Vec<u64> = abg
                        .iter()
                        .map(|i| match ag.iter().position(|x| x == i) {
                            Some(pos) => ka[pos],
                            None => kb[bg.iter().position(|x| x == i).expect("index in a, b or g")],
                        })
                        .collect();
                    let wab = w_abg.get(&key).unwrap_or(&zero);
                    if wab * wg != *wa * *wb {
                        return Ok(false);
                    }
                }
            }
        }
        Ok(true)
    }

    /// Same distribution with weights in another integer type.
    pub fn convert<J: ExactInt>(&self) -> Result<JointTable<J>> {
        let conv = |v: &I| -> Result<J> {
            let big = v.to_bigint().expect("integer converts to BigInt");
            J::from_str(&big.to_string())
                .map_err(|_| Error::InvalidTable(format!("weight {big} does not fit the target type")))
        };
        let weights = self.weights.iter().map(|(k, v)| Ok((k.clone(), conv(v)?))).collect::<Result<_>>()?;
        Ok(JointTable { variables: self.variables.clone(), weights, total: conv(&self.total)? })
    }

    /// Evaluates the listed quantities into a profile.
    pub fn profile(&self, quantities: &[Quantity]) -> Result<InfoProfile> {
        let mut values = BTreeMap::new();
        let mut independent = BTreeMap::new();
        for q in quantities {
            let label = q.label();
            match q {
                Quantity::Entropy { of, given } => {
                    values.insert(label, self.entropy(&as_refs(of), &as_refs(given))?);
                }
                Quantity::MutualInfo { a, b, given } => {
                    let (a, b, g) = (as_refs(a), as_refs(b), as_refs(given));
                    values.insert(label.clone(), self.mutual_info(&a, &b, &g)?);
                    independent.insert(label, self.exact_independent(&a, &b, &g)?);
                }
                Quantity::TripleInfo { a, b, c } => {
                    values.insert(label, self.triple_info(&as_refs(a), &as_refs(b), &as_refs(c))?);
                }
            }
        }
        Ok(InfoProfile { values, independent })
    }
}

fn as_refs(v: &[String]) -> Vec<&str> {
    v.iter().map(String::as_str).collect()
}

fn format_key(o: &[u64]) -> String {
    o.iter().map(u64::to_string).collect::<Vec<_>>().join(",")
}

impl<I: ExactInt> Serialize for JointTable<I> {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        struct Outcomes<'a, I: ExactInt>(&'a JointTable<I>);
        impl<I: ExactInt> Serialize for Outcomes<'_, I> {
            fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
                let mut map = s.serialize_map(Some(self.0.weights.len()))?;
                for (o, p) in self.0.outcomes() {
                    map.serialize_entry(&format_key(o), &format!("{}/{}", p.numer(), p.denom()))?;
                }
                map.end()
            }
        }
        let mut map = s.serialize_map(Some(2))?;
        map.serialize_entry("variables", &self.variables)?;
        map.serialize_entry("outcomes", &Outcomes(self))?;
        map.end()
    }
}

#[derive(Deserialize)]
struct RawTable {
    variables: Vec<String>,
    outcomes: BTreeMap<String, String>,
}

impl<'de, I: ExactInt> Deserialize<'de> for JointTable<I> {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let raw = RawTable::deserialize(d)?;
        let parse_int = |s: &str| I::from_str(s.trim()).map_err(|_| D::Error::custom(format!("bad integer {s:?}")));
        let mut probs = Vec::with_capacity(raw.outcomes.len());
        for (key, value) in &raw.outcomes {
            let tuple = if key.is_empty() {
                Vec::new()
            } else {
                key.split(',')
                    .map(|v| v.trim().parse::<u64>().map_err(D::Error::custom))
                    .collect::<std::result::Result<Vec<_>, _>>()?
            };
            let (n, m) = value.split_once('/').unwrap_or((value, "1"));
            let m = parse_int(m)?;
            if m.is_zero() {
                return Err(D::Error::custom("zero denominator"));
            }
            probs.push((tuple, Ratio::new(parse_int(n)?, m)));
        }
        JointTable::from_probabilities(raw.variables, probs).map_err(D::Error::custom)
    }
}

/// An information quantity over variable sets.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Quantity {
    Entropy { of: Vec<String>, given: Vec<String> },
    MutualInfo { a: Vec<String>, b: Vec<String>, given: Vec<String> },
    TripleInfo { a: Vec<String>, b: Vec<String>, c: Vec<String> },
}

fn owned(v: &[&str]) -> Vec<String> {
    v.iter().map(|s| s.to_string()).collect()
}

impl Quantity {
    pub fn entropy(of: &[&str], given: &[&str]) -> Self {
        Quantity::Entropy { of: owned(of), given: owned(given) }
    }

    pub fn mutual_info(a: &[&str], b: &[&str], given: &[&str]) -> Self {
        Quantity::MutualInfo { a: owned(a), b: owned(b), given: owned(given) }
    }

    pub fn triple_info(a: &[&str], b: &[&str], c: &[&str]) -> Self {
        Quantity::TripleInfo { a: owned(a), b: owned(b), c: owned(c) }
    }

    /// `H(X,Y|Z)`, `I(X:Y|Z)`, `I(X:Y:Z)`.
    pub fn label(&self) -> String {
        let cond = |g: &[String]| if g.is_empty() { String::new() } else { format!("|{}", g.join(",")) };
        match self {
            Quantity::Entropy { of, given } => format!("H({}{})", of.join(","), cond(given)),
            Quantity::MutualInfo { a, b, given } => format!("I({}:{}{})", a.join(","), b.join(","), cond(given)),
            Quantity::TripleInfo { a, b, c } => format!("I({}:{}:{})", a.join(","), b.join(","), c.join(",")),
        }
    }
}

/// Named quantities in bits, plus exact independence flags for every
/// requested mutual information.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct InfoProfile {
    pub values: BTreeMap<String, f64>,
    pub independent: BTreeMap<String, bool>,
}

/// Entropy profile of a uniformly random edge.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct EdgeProfile {
    #[serde(rename = "H_X")]
    pub h_x: f64,
    #[serde(rename = "H_Y")]
    pub h_y: f64,
    #[serde(rename = "H_XY")]
    pub h_xy: f64,
    #[serde(rename = "I")]
    pub i_xy: f64,
    /// `log2 q`
    pub n: f64,
}

/// Uniform distribution on the edges, over variables `X` (point id) and
/// `Y` (polynomial id).
pub fn edge_joint<I: ExactInt>(spec: &GraphSpec) -> Result<JointTable<I>> {
    if spec.m() != 0 {
        return Err(Error::InvalidParameter("edge_joint takes the base graph (m = 0)".into()));
    }
    guard("edge table", spec.num_edges(), MAX_OUTCOMES)?;
    let counts = spec.edge_ids()?.into_iter().map(|(x, y)| (vec![x, y], I::one()));
    JointTable::from_counts(["X", "Y"], counts)
}

pub fn edge_profile(spec: &GraphSpec) -> Result<EdgeProfile> {
    let t: JointTable<i128> = edge_joint(spec)?;
    Ok(EdgeProfile {
        h_x: t.entropy(&["X"], &[])?,
        h_y: t.entropy(&["Y"], &[])?,
        h_xy: t.entropy(&["X", "Y"], &[])?,
        i_xy: t.mutual_info(&["X"], &["Y"], &[])?,
        n: spec.field().log2_q(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::make_field;
    use proptest::prelude::*;

    fn graph(p: u64, k: u32, d: u32) -> GraphSpec {
        GraphSpec::new(make_field(p, k, None).unwrap(), d, 0).unwrap()
    }

    /// Oracle: entropy straight from a probability list.
    fn shannon(ps: &[f64]) -> f64 {
        ps.iter().filter(|&&p| p > 0.0).map(|&p| -p * p.log2()).sum()
    }

    #[test]
    fn edge_joint_counts() {
        let t: JointTable<i64> = edge_joint(&graph(2, 1, 1)).unwrap();
        assert_eq!(t.len(), 8);
        assert!(t.outcomes().all(|(_, p)| p == Ratio::new(1, 8)));
        let x = t.marginal(&["X"]).unwrap();
        assert_eq!(x.len(), 4);
        assert!(x.outcomes().all(|(_, p)| p == Ratio::new(1, 4)));
        assert_eq!(t.marginal(&["Y"]).unwrap().len(), 4);
    }

    #[test]
    fn edge_profile_matches_counts() {
        for (p, k, d) in [(2u64, 1u32, 1u32), (3, 1, 1), (2, 2, 1), (5, 1, 1), (2, 1, 2), (3, 1, 2), (2, 2, 2)] {
            let g = graph(p, k, d);
            let n = g.field().log2_q();
            let prof = edge_profile(&g).unwrap();
            let df = f64::from(d);
            assert!((prof.h_x - 2.0 * n).abs() < 1e-10);
            assert!((prof.h_y - (df + 1.0) * n).abs() < 1e-10);
            assert!((prof.h_xy - (df + 2.0) * n).abs() < 1e-10);
            assert!((prof.i_xy - n).abs() < 1e-10);
        }
    }

    #[test]
    fn map_variable_cases() {
        let g = graph(2, 1, 1);
        let t: JointTable = edge_joint(&g).unwrap();
        let c = t.map_variable("C", |_| Some(7)).unwrap();
        assert_eq!(c.entropy(&["C"], &[]).unwrap(), 0.0);
        assert!(c.exact_independent(&["C"], &["X"], &[]).unwrap());
        let dup = t.map_variable("X2", |o| Some(o[0])).unwrap();
        let hx = dup.entropy(&["X"], &[]).unwrap();
        assert!((dup.mutual_info(&["X2"], &["X"], &[]).unwrap() - hx).abs() < 1e-12);
        // first coordinate of the point id x1 * q + x2
        let x1 = t.map_variable("x1", |o| Some(o[0] / 2)).unwrap();
        let m = x1.marginal(&["x1"]).unwrap();
        assert_eq!(m.probability(&[0]), Ratio::new(BigInt::from(1), BigInt::from(2)));
        assert_eq!(m.probability(&[1]), Ratio::new(BigInt::from(1), BigInt::from(2)));
        assert_eq!(t.map_variable("P", |o| (o[0] == 0).then_some(1)), Err(Error::PartialFunction));
        assert_eq!(t.map_variable("X", |_| Some(0)), Err(Error::DuplicateVariable("X".into())));
    }

    #[test]
    fn entropy_basics() {
        let t: JointTable<i64> = edge_joint(&graph(3, 1, 1)).unwrap();
        assert_eq!(t.entropy(&["X"], &["X"]).unwrap(), 0.0);
        assert!((t.mutual_info(&["X"], &["X"], &[]).unwrap() - t.entropy(&["X"], &[]).unwrap()).abs() < 1e-12);
        assert!(!t.exact_independent(&["X"], &["Y"], &[]).unwrap());
        assert_eq!(t.entropy(&["W"], &[]), Err(Error::UnknownVariable("W".into())));
    }

    #[test]
    fn independence_of_product_table() {
        let counts = (0..3u64).flat_map(|a| (0..4u64).map(move |b| (vec![a, b], (a + 1) as i64 * (b + 2) as i64)));
        let t = JointTable::from_counts(["A", "B"], counts).unwrap();
        assert!(t.exact_independent(&["A"], &["B"], &[]).unwrap());
        assert!(t.mutual_info(&["A"], &["B"], &[]).unwrap().abs() < 1e-12);
        // missing cell breaks factorization
        let holes = JointTable::<i64>::from_counts(["A", "B"], vec![(vec![0, 0], 1), (vec![1, 1], 1), (vec![0, 1], 1)]).unwrap();
        assert!(!holes.exact_independent(&["A"], &["B"], &[]).unwrap());
    }

    #[test]
    fn conditional_independence_xor() {
        // A, B uniform bits, C = A xor B: pairwise independent, dependent given C
        let t = JointTable::<i64>::uniform(["A", "B"], (0..4u64).map(|v| vec![v & 1, v >> 1]))
            .unwrap()
            .map_variable("C", |o| Some(o[0] ^ o[1]))
            .unwrap();
        assert!(t.exact_independent(&["A"], &["B"], &[]).unwrap());
        assert!(!t.exact_independent(&["A"], &["B"], &["C"]).unwrap());
        assert!((t.mutual_info(&["A"], &["B"], &["C"]).unwrap() - 1.0).abs() < 1e-12);
        assert!((t.triple_info(&["A"], &["B"], &["C"]).unwrap() + 1.0).abs() < 1e-12);
    }

    #[test]
    fn probabilities_must_sum_to_one() {
        let bad = JointTable::<i64>::from_probabilities(["A"], vec![(vec![0], Ratio::new(1, 3))]);
        assert!(matches!(bad, Err(Error::InvalidTable(_))));
        let ok = JointTable::<i64>::from_probabilities(
            ["A"],
            vec![(vec![0], Ratio::new(1, 3)), (vec![1], Ratio::new(1, 6)), (vec![2], Ratio::new(1, 2)), (vec![3], Ratio::new(0, 1))],
        )
        .unwrap();
        assert_eq!(ok.len(), 3);
        let h = ok.entropy(&["A"], &[]).unwrap();
        assert!((h - shannon(&[1.0 / 3.0, 1.0 / 6.0, 0.5])).abs() < 1e-12);
    }

    #[test]
    fn json_round_trip() {
        let t = JointTable::<i64>::from_counts(["A", "B"], vec![(vec![0, 1], 1), (vec![2, 3], 3)]).unwrap();
        let s = serde_json::to_string(&t).unwrap();
        assert_eq!(s, r#"{"variables":["A","B"],"outcomes":{"0,1":"1/4","2,3":"3/4"}}"#);
        let back: JointTable<i64> = serde_json::from_str(&s).unwrap();
        assert_eq!(back, t);
        let big: JointTable<BigInt> = serde_json::from_str(&s).unwrap();
        assert_eq!(big.convert::<i64>().unwrap(), t);
    }

    #[test]
    fn profile_labels() {
        let t: JointTable<i64> = edge_joint(&graph(2, 1, 1)).unwrap();
        let prof = t
            .profile(&[Quantity::entropy(&["X"], &[]), Quantity::mutual_info(&["X"], &["Y"], &[]), Quantity::entropy(&["Y"], &["X"])])
            .unwrap();
        assert_eq!(prof.values["H(X)"], 2.0);
        assert_eq!(prof.values["I(X:Y)"], 1.0);
        assert_eq!(prof.values["H(Y|X)"], 1.0);
        assert!(!prof.independent["I(X:Y)"]);
    }

    #[test]
    fn huge_weights_keep_entropy() {
        let big = BigInt::from(1u8) << 2000usize;
        let t = JointTable::<BigInt>::from_counts(["A"], vec![(vec![0], big.clone()), (vec![1], big)]).unwrap();
        assert!((t.entropy(&["A"], &[]).unwrap() - 1.0).abs() < 1e-12);
    }

    fn table_strategy() -> impl Strategy<Value = JointTable<i64>> {
        proptest::collection::vec(((0u64..3, 0u64..3, 0u64..2), 0i64..6), 1..20).prop_filter_map("positive mass", |cells| {
            JointTable::from_counts(["A", "B", "C"], cells.into_iter().map(|((a, b, c), w)| (vec![a, b, c], w))).ok()
        })
    }

    proptest! {
        #[test]
        fn chain_rule(t in table_strategy()) {
            let hab = t.entropy(&["A", "B"], &[]).unwrap();
            let ha = t.entropy(&["A"], &[]).unwrap();
            let hb_a = t.entropy(&["B"], &["A"]).unwrap();
            prop_assert!((hab - ha - hb_a).abs() < 1e-10);
            let probs: Vec<f64> = t.marginal(&["A", "B"]).unwrap().outcomes().map(|(_, p)| p.to_f64().unwrap()).collect();
            prop_assert!((hab - shannon(&probs)).abs() < 1e-10);
        }

        #[test]
        fn nonnegative_information(t in table_strategy()) {
            for (a, b, g) in [(["A"], ["B"], vec!["C"]), (["A"], ["C"], vec![]), (["B"], ["C"], vec!["A"])] {
                prop_assert!(t.mutual_info(&a, &b, &g).unwrap() >= -1e-10);
                prop_assert!(t.entropy(&a, &g).unwrap() >= -1e-10);
            }
        }

        #[test]
        fn independence_implies_zero_information(t in table_strategy()) {
            for g in [vec![], vec!["C"]] {
                if t.exact_independent(&["A"], &["B"], &g).unwrap() {
                    prop_assert!(t.mutual_info(&["A"], &["B"], &g).unwrap().abs() <= 1e-12);
                }
            }
        }

        #[test]
        fn product_tables_are_independent(wa in proptest::collection::vec(1i64..5, 1..4), wb in proptest::collection::vec(1i64..5, 1..4)) {
            let cells = wa.iter().enumerate().flat_map(|(i, a)| wb.iter().enumerate().map(move |(j, b)| (vec![i as u64, j as u64], a * b)));
            let t = JointTable::from_counts(["A", "B"], cells).unwrap();
            prop_assert!(t.exact_independent(&["A"], &["B"], &[]).unwrap());
        }
    }
}
