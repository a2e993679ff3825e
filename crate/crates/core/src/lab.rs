//! Exhaustive experiments on tiny graphs: useful/useless encoders of a clear
//! message given a key (with the polynomial as the adversary's side
//! information), and the gap of the inequality
//! `I(W:X,Y) <= 2 I(W:X|Y) + 2 I(W:Y|X)` over functions `W` of an edge.

use std::io::Write;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::GraphSpec;
use crate::info::{edge_joint, JointTable};

/// Largest number of encoders (`a^(q^2)`) per alphabet size.
pub const MAX_ENCODERS: u128 = 10_000_000;

/// How the encoder `P` depends on the clear message `x1` and key `x2`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Encoder {
    Constant,
    /// `P = x1`
    Cleartext,
    /// `P = x1 + x2` in the field.
    OneTimePad,
    /// Value per point id `x1 q + x2`.
    Table { values: Vec<u32> },
}

impl Encoder {
    /// Values per point id.
    pub fn values(&self, spec: &GraphSpec) -> Vec<u32> {
        let f = spec.field();
        (0..spec.num_points())
            .map(|id| {
                let pt = spec.point(id).expect("point id in range");
                match self {
                    Encoder::Constant => 0,
                    Encoder::Cleartext => pt.x1.idx(),
                    Encoder::OneTimePad => f.add(pt.x1, pt.x2).idx(),
                    Encoder::Table { values } => values[id as usize],
                }
            })
            .collect()
    }
}

/// Clear message `X = x1`, key `Y = x2`, adversary side information `Z` = a
/// uniformly random polynomial through `(x1, x2)`, and the encoder `P`.
#[derive(Clone, Debug, PartialEq)]
pub struct MuchnikScenario {
    encoder: Vec<u32>,
    table: JointTable<i64>,
}

impl MuchnikScenario {
    pub fn new(spec: &GraphSpec, encoder: &Encoder) -> Result<Self> {
        if spec.m() != 0 {
            return Err(Error::InvalidParameter("scenario takes the base graph (m = 0)".into()));
        }
        if let Encoder::Table { values } = encoder {
            if values.len() as u64 != spec.num_points() {
                return Err(Error::InvalidParameter(format!(
                    "encoder table has {} entries for {} points",
                    values.len(),
                    spec.num_points()
                )));
            }
        }
        let encoder = encoder.values(spec);
        let q = spec.q();
        let rows = spec
            .edge_ids()?
            .into_iter()
            .map(|(pt, poly)| (vec![pt / q, pt % q, poly, u64::from(encoder[pt as usize])], 1i64));
        let table = JointTable::from_counts(["X", "Y", "Z", "P"], rows)?;
        Ok(MuchnikScenario { encoder, table })
    }

    pub fn encoder(&self) -> &[u32] {
        &self.encoder
    }

    /// Joint table over `X, Y, Z, P`.
    pub fn table(&self) -> &JointTable<i64> {
        &self.table
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MuchnikVerdict {
    /// `H(X | P, Y) = 0`
    pub useful: bool,
    /// `P` independent of `X` given `Z`
    pub useless: bool,
    /// Number of distinct encoder values.
    pub alphabet_size: u32,
}

pub fn muchnik_classify(scenario: &MuchnikScenario) -> Result<MuchnikVerdict> {
    let t = scenario.table();
    // X is a function of (P, Y) iff adding X does not split any (P, Y) cell
    let useful = t.marginal(&["P", "Y", "X"])?.len() == t.marginal(&["P", "Y"])?.len();
    let useless = t.exact_independent(&["P"], &["X"], &["Z"])?;
    let mut symbols = scenario.encoder.clone();
    symbols.sort_unstable();
    symbols.dedup();
    Ok(MuchnikVerdict { useful, useless, alphabet_size: symbols.len() as u32 })
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct AlphabetRow {
    pub a: u32,
    /// `a^(q^2)` encoders.
    pub total: u128,
    /// Classes under renaming of symbols.
    pub orbits: u64,
    pub useful_only: u128,
    pub useless_only: u128,
    pub both: u128,
    pub neither: u128,
    /// Canonical encoder table (values per point id) of the first encoder
    /// found to be both useful and useless.
    pub min_both_witness: Option<Vec<u32>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MuchnikSearchReport {
    pub q: u64,
    pub d: u32,
    pub max_alphabet: u32,
    pub rows: Vec<AlphabetRow>,
    /// Smallest alphabet with an encoder that is both useful and useless.
    pub min_alphabet_both: Option<u32>,
}

/// Restricted growth strings of length `len` with at most `max_blocks`
/// symbols: one canonical encoder per orbit under symbol renaming.
fn restricted_growth_strings(len: usize, max_blocks: u32) -> Vec<Vec<u32>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(len);
    fn rec(cur: &mut Vec<u32>, len: usize, used: u32, max_blocks: u32, out: &mut Vec<Vec<u32>>) {
        if cur.len() == len {
            out.push(cur.clone());
            return;
        }
        for s in 0..=used.min(max_blocks - 1) {
            cur.push(s);
            rec(cur, len, used.max(s + 1), max_blocks, out);
            cur.pop();
        }
    }
    if max_blocks > 0 {
        rec(&mut cur, len, 0, max_blocks, &mut out);
    }
    out
}

/// Encoders into `a` symbols that are renamings of one with `k` distinct
/// symbols: `a! / (a - k)!`.
fn orbit_size(a: u32, k: u32) -> u128 {
    (a - k + 1..=a).map(u128::from).product()
}

/// Classifies every encoder `F^2 -> {0..a-1}` for each `a` in
/// `1..=max_alphabet`, one representative per renaming orbit, with counts
/// weighted by orbit size.
pub fn muchnik_exhaustive_search(spec: &GraphSpec, max_alphabet: u32) -> Result<MuchnikSearchReport> {
    let q = spec.q();
    if q > 3 || spec.d() != 1 || spec.m() != 0 {
        return Err(Error::InvalidParameter("encoder search needs q <= 3, d = 1, m = 0".into()));
    }
    let cells = spec.num_points();
    if max_alphabet == 0 || u64::from(max_alphabet) > cells {
        return Err(Error::InvalidParameter(format!("alphabet bound {max_alphabet} outside 1..={cells}")));
    }
    let total = |a: u32| u128::from(a).checked_pow(cells as u32).unwrap_or(u128::MAX);
    if total(max_alphabet) > MAX_ENCODERS {
        return Err(Error::SearchSpaceTooLarge { size: total(max_alphabet), limit: MAX_ENCODERS });
    }

    // verdicts per canonical encoder, shared by all alphabet sizes
    let reps = restricted_growth_strings(cells as usize, max_alphabet);
    let verdicts: Vec<(u32, MuchnikVerdict)> = reps
        .par_iter()
        .map(|enc| {
            let s = MuchnikScenario::new(spec, &Encoder::Table { values: enc.clone() })?;
            let v = muchnik_classify(&s)?;
            Ok((v.alphabet_size, v))
        })
        .collect::<Result<_>>()?;

    let mut rows = Vec::new();
    for a in 1..=max_alphabet {
        let mut row = AlphabetRow { a, total: total(a), ..Default::default() };
        for (enc, (k, v)) in reps.iter().zip(&verdicts) {
            if *k > a {
                continue;
            }
            let weight = orbit_size(a, *k);
            row.orbits += 1;
            match (v.useful, v.useless) {
                (true, true) => {
                    row.both += weight;
                    if row.min_both_witness.is_none() {
                        row.min_both_witness = Some(enc.clone());
                    }
                }
                (true, false) => row.useful_only += weight,
                (false, true) => row.useless_only += weight,
                (false, false) => row.neither += weight,
            }
        }
        debug_assert_eq!(row.useful_only + row.useless_only + row.both + row.neither, row.total);
        rows.push(row);
    }
    let min_alphabet_both = rows.iter().find(|r| r.both > 0).map(|r| r.a);
    Ok(MuchnikSearchReport { q, d: spec.d(), max_alphabet, rows, min_alphabet_both })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GapRow {
    #[serde(rename = "W_id")]
    pub w_id: String,
    pub i_wxy: f64,
    pub i_wx_given_y: f64,
    pub i_wy_given_x: f64,
    /// `I(W:X,Y) - 2 I(W:X|Y) - 2 I(W:Y|X)`; positive means the inequality fails.
    pub gap: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GapReport {
    pub seed: u64,
    pub samples: u64,
    pub max_gap: f64,
    pub max_gap_w: String,
    pub rows: Vec<GapRow>,
}

impl GapReport {
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let err = |e: csv::Error| Error::InvalidParameter(format!("csv output failed: {e}"));
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["W_id", "I_wxy", "I_wx_given_y", "I_wy_given_x", "gap"]).map_err(err)?;
        for r in &self.rows {
            w.write_record([
                r.w_id.clone(),
                r.i_wxy.to_string(),
                r.i_wx_given_y.to_string(),
                r.i_wy_given_x.to_string(),
                r.gap.to_string(),
            ])
            .map_err(err)?;
        }
        w.flush().map_err(|e| Error::InvalidParameter(format!("csv output failed: {e}")))
    }
}

fn gap_row(base: &JointTable<i64>, w_id: &str, w: impl Fn(u64, u64) -> u64) -> Result<GapRow> {
    let t = base.map_variable("W", |o| Some(w(o[0], o[1])))?;
    let i_wxy = t.mutual_info(&["W"], &["X", "Y"], &[])?;
    let i_wx_given_y = t.mutual_info(&["W"], &["X"], &["Y"])?;
    let i_wy_given_x = t.mutual_info(&["W"], &["Y"], &["X"])?;
    Ok(GapRow {
        w_id: w_id.to_string(),
        gap: i_wxy - 2.0 * i_wx_given_y - 2.0 * i_wy_given_x,
        i_wxy,
        i_wx_given_y,
        i_wy_given_x,
    })
}

fn require_lines(spec: &GraphSpec) -> Result<()> {
    if spec.d() != 1 || spec.m() != 0 {
        return Err(Error::InvalidParameter("gap exploration needs d = 1, m = 0".into()));
    }
    Ok(())
}

/// Gap for one function `W(point id, poly id)` of a uniformly random edge.
pub fn inequality_gap(spec: &GraphSpec, w_id: &str, w: impl Fn(u64, u64) -> u64) -> Result<GapRow> {
    require_lines(spec)?;
    gap_row(&edge_joint(spec)?, w_id, w)
}

/// Gaps for `W` = constant, `X`, `Y`, then `samples` random functions of the
/// edge. Random `W` number `i` draws from ChaCha stream `i` of `seed`: an
/// alphabet size in `2..=8`, then a uniform symbol per edge.
pub fn gap_explore(spec: &GraphSpec, samples: u64, seed: u64) -> Result<GapReport> {
    require_lines(spec)?;
    let base: JointTable<i64> = edge_joint(spec)?;
    let mut rows = vec![
        gap_row(&base, "const", |_, _| 0)?,
        gap_row(&base, "X", |x, _| x)?,
        gap_row(&base, "Y", |_, y| y)?,
    ];
    let edges = spec.edge_ids()?;
    let index = |x: u64, y: u64| edges.binary_search_by_key(&(y, x), |&(a, b)| (b, a)).expect("edge of the graph");
    let random: Vec<GapRow> = (0..samples)
        .into_par_iter()
        .map(|i| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(i);
            let alphabet = rng.random_range(2..=8u64);
            let values: Vec<u64> = (0..edges.len()).map(|_| rng.random_range(0..alphabet)).collect();
            gap_row(&base, &format!("random_{i}"), |x, y| values[index(x, y)])
        })
        .collect::<Result<_>>()?;
    rows.extend(random);
    let (max_gap, max_gap_w) = rows
        .iter()
        .fold((f64::NEG_INFINITY, String::new()), |(m, id), r| if r.gap > m { (r.gap, r.w_id.clone()) } else { (m, id) });
    Ok(GapReport { seed, samples, max_gap, max_gap_w, rows })
}
