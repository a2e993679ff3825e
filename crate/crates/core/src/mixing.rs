//! Mixing-lemma checks, the inclusion-exclusion union bound and exhaustive
//! biclique search on the incidence graph.
//!
//! Subsets of the amplified graph are given as cluster weights: a base vertex
//! with weight `w` stands for `w` of its `2^m` tagged copies. Since every
//! copy has the same neighborhood, induced edge counts factor as
//! `sum w(x) w(y)` over base edges.

use std::collections::{BTreeMap, HashSet};
use std::io::Write;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::ToPrimitive;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{guard, Error, Result};
use crate::graph::GraphSpec;

/// Slack added to the spectral side of the mixing inequality.
pub const MIXING_TOLERANCE: f64 = 1e-12;
/// Vertex budget for the fully exhaustive biclique scan.
pub const EXHAUSTIVE_BICLIQUE_VERTICES: u64 = 20;

/// Exact rationals serialize as `"num/den"`.
pub(crate) mod ratio_string {
    use num_bigint::BigInt;
    use num_rational::BigRational;
    use serde::{de::Error as _, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(r: &BigRational, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&format!("{}/{}", r.numer(), r.denom()))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigRational, D::Error> {
        let text = String::deserialize(d)?;
        let (n, m) = text.split_once('/').unwrap_or((&text, "1"));
        let n: BigInt = n.parse().map_err(D::Error::custom)?;
        let m: BigInt = m.parse().map_err(D::Error::custom)?;
        if m == BigInt::from(0) {
            return Err(D::Error::custom("zero denominator"));
        }
        Ok(BigRational::new(n, m))
    }
}

fn validate_ids(ids: &[u64], limit: u64, side: &'static str) -> Result<Vec<u64>> {
    let mut seen = HashSet::with_capacity(ids.len());
    for &id in ids {
        if id >= limit {
            return Err(Error::InvalidVertexId { id, side });
        }
        if !seen.insert(id) {
            return Err(Error::DuplicateVertex(id));
        }
    }
    let mut sorted = ids.to_vec();
    sorted.sort_unstable();
    Ok(sorted)
}

/// A pair of vertex subsets `(L_w, R_w)` of the base graph.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SubsetPair {
    left: Vec<u64>,
    right: Vec<u64>,
}

impl SubsetPair {
    pub fn new(spec: &GraphSpec, left: &[u64], right: &[u64]) -> Result<Self> {
        Ok(SubsetPair {
            left: validate_ids(left, spec.num_points(), "point")?,
            right: validate_ids(right, spec.num_polys(), "poly")?,
        })
    }

    pub fn full(spec: &GraphSpec) -> Self {
        SubsetPair { left: (0..spec.num_points()).collect(), right: (0..spec.num_polys()).collect() }
    }

    pub fn left(&self) -> &[u64] {
        &self.left
    }

    pub fn right(&self) -> &[u64] {
        &self.right
    }

    /// Every member with cluster weight one.
    pub fn weighted(&self) -> WeightedSubsetPair {
        WeightedSubsetPair {
            left: self.left.iter().map(|&id| (id, 1)).collect(),
            right: self.right.iter().map(|&id| (id, 1)).collect(),
        }
    }
}

/// Subsets of the amplified graph as `base id -> number of tagged copies`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct WeightedSubsetPair {
    pub left: BTreeMap<u64, u64>,
    pub right: BTreeMap<u64, u64>,
}

impl WeightedSubsetPair {
    pub fn validate(&self, spec: &GraphSpec) -> Result<()> {
        let cluster = spec.cluster_size();
        let check = |map: &BTreeMap<u64, u64>, limit: u64, side| -> Result<()> {
            for (&id, &w) in map {
                if id >= limit {
                    return Err(Error::InvalidVertexId { id, side });
                }
                if w == 0 || u128::from(w) > cluster {
                    return Err(Error::InvalidParameter(format!(
                        "cluster weight {w} of {side} {id} outside 1..={cluster}"
                    )));
                }
            }
            Ok(())
        };
        check(&self.left, spec.num_points(), "point")?;
        check(&self.right, spec.num_polys(), "poly")
    }

    pub fn left_size(&self) -> u128 {
        self.left.values().map(|&w| u128::from(w)).sum()
    }

    pub fn right_size(&self) -> u128 {
        self.right.values().map(|&w| u128::from(w)).sum()
    }
}

/// Number of base edges with both ends in the pair.
pub fn induced_edge_count(spec: &GraphSpec, pair: &SubsetPair) -> Result<u64> {
    Ok(weighted_induced_edges(spec, &pair.weighted())? as u64)
}

/// `sum w(x) w(y)` over base edges `(x, y)` inside the weighted pair. Walks
/// the neighbor lists of whichever side is cheaper to expand.
pub fn weighted_induced_edges(spec: &GraphSpec, pair: &WeightedSubsetPair) -> Result<u128> {
    pair.validate(spec)?;
    let left_cost = pair.left.len() as u128 * u128::from(spec.left_degree());
    let right_cost = pair.right.len() as u128 * u128::from(spec.right_degree());
    let mut total = 0u128;
    if left_cost <= right_cost {
        for (&x, &wx) in &pair.left {
            for y in spec.point_neighbor_ids(x)? {
                if let Some(&wy) = pair.right.get(&y) {
                    total += u128::from(wx) * u128::from(wy);
                }
            }
        }
    } else {
        for (&y, &wy) in &pair.right {
            for x in spec.poly_neighbor_ids(y)? {
                if let Some(&wx) = pair.left.get(&x) {
                    total += u128::from(wx) * u128::from(wy);
                }
            }
        }
    }
    Ok(total)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MixingReport {
    pub edges_induced: u128,
    /// `|E_w| / |E|`
    #[serde(with = "ratio_string")]
    pub lhs: BigRational,
    /// `|L_w| |R_w| / (|L| |R|)`
    #[serde(with = "ratio_string")]
    pub rhs_main: BigRational,
    /// `lambda2 sqrt(|L_w| |R_w|) / |E|`
    pub rhs_spectral: f64,
    pub holds: bool,
    /// `rhs_main + rhs_spectral - lhs`
    pub slack: f64,
}

fn ratio(n: u128, d: u128) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

fn to_f64(r: &BigRational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

/// Evaluates the expander mixing inequality on a (weighted) subset pair of the
/// graph described by `spec`, including its amplification. `lambda2` must be
/// the second eigenvalue of that graph (`2^m` times the base value).
pub fn mixing_check(spec: &GraphSpec, pair: &WeightedSubsetPair, lambda2: f64) -> Result<MixingReport> {
    let counts = spec.counts();
    let edges_induced = weighted_induced_edges(spec, pair)?;
    let (lw, rw) = (pair.left_size(), pair.right_size());
    let lhs = ratio(edges_induced, counts.edges_bar);
    let rhs_main = BigRational::new(
        BigInt::from(lw) * BigInt::from(rw),
        BigInt::from(counts.left_bar) * BigInt::from(counts.right_bar),
    );
    let rhs_spectral = lambda2 * ((lw as f64) * (rw as f64)).sqrt() / counts.edges_bar as f64;
    // exact combinatorial excess, floating point only for the spectral term
    let excess = to_f64(&(lhs.clone() - rhs_main.clone()));
    let holds = excess <= rhs_spectral + MIXING_TOLERANCE;
    Ok(MixingReport {
        edges_induced,
        slack: rhs_spectral - excess,
        lhs,
        rhs_main,
        rhs_spectral,
        holds,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FuzzRow {
    pub trial: u64,
    pub left_size: u128,
    pub right_size: u128,
    pub edges_induced: u128,
    #[serde(with = "ratio_string")]
    pub lhs: BigRational,
    pub rhs: f64,
    pub slack: f64,
    pub holds: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FuzzSummary {
    pub seed: u64,
    pub trials: u64,
    pub m: u32,
    pub lambda2: f64,
    pub violations: u64,
    pub min_slack: f64,
    pub rows: Vec<FuzzRow>,
}

impl FuzzSummary {
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        let err = |e: csv::Error| Error::InvalidParameter(format!("csv output failed: {e}"));
        w.write_record(["trial", "L_w", "R_w", "E_w", "lhs", "rhs", "slack"]).map_err(err)?;
        for r in &self.rows {
            w.write_record([
                r.trial.to_string(),
                r.left_size.to_string(),
                r.right_size.to_string(),
                r.edges_induced.to_string(),
                format!("{}/{}", r.lhs.numer(), r.lhs.denom()),
                r.rhs.to_string(),
                r.slack.to_string(),
            ])
            .map_err(err)?;
        }
        w.flush().map_err(|e| Error::InvalidParameter(format!("csv output failed: {e}")))
    }
}

/// Random weighted subset pair: each side draws an inclusion probability from
/// {1/2, 1/4, 1/8}; included vertices get a uniform cluster weight in `1..=2^m`.
pub fn random_subset_pair<R: Rng + ?Sized>(spec: &GraphSpec, rng: &mut R) -> WeightedSubsetPair {
    let cluster = spec.cluster_size() as u64;
    let mut side = |n: u64| {
        let shift = rng.random_range(1..=3u32);
        let mut out = BTreeMap::new();
        for id in 0..n {
            if rng.random_range(0..(1u32 << shift)) == 0 {
                out.insert(id, rng.random_range(1..=cluster));
            }
        }
        out
    };
    let left = side(spec.num_points());
    let right = side(spec.num_polys());
    WeightedSubsetPair { left, right }
}

/// Runs `trials` seeded mixing checks. Trial `t` uses ChaCha stream `t` of
/// `seed`, so results do not depend on scheduling.
pub fn mixing_fuzz(spec: &GraphSpec, lambda2: f64, trials: u64, seed: u64) -> Result<FuzzSummary> {
    let rows = (0..trials)
        .into_par_iter()
        .map(|trial| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(trial);
            let pair = random_subset_pair(spec, &mut rng);
            let report = mixing_check(spec, &pair, lambda2)?;
            Ok(FuzzRow {
                trial,
                left_size: pair.left_size(),
                right_size: pair.right_size(),
                edges_induced: report.edges_induced,
                rhs: to_f64(&report.rhs_main) + report.rhs_spectral,
                slack: report.slack,
                holds: report.holds,
                lhs: report.lhs,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(FuzzSummary {
        seed,
        trials,
        m: spec.m(),
        lambda2,
        violations: rows.iter().filter(|r| !r.holds).count() as u64,
        min_slack: rows.iter().map(|r| r.slack).fold(f64::INFINITY, f64::min),
        rows,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct UnionBound {
    /// `|Γ(y_1) ∪ ... ∪ Γ(y_k)|` in the (amplified) graph.
    pub actual_union: u128,
    /// `k D_R - C(k, 2) cap` with `D_R = q 2^m`.
    pub ie_bound: i128,
}

/// Inclusion-exclusion lower bound on the neighborhood union of `k` right
/// vertices from distinct clusters. `cap` must bound every pairwise common
/// neighborhood (`d` for the base graph, `d 2^m` for the amplified one).
pub fn union_lower_bound(spec: &GraphSpec, right_vertices: &[u64], cap: u64) -> Result<UnionBound> {
    let ids = validate_ids(right_vertices, spec.num_polys(), "poly")?;
    let k = ids.len() as u128;
    guard("neighborhood union", k * u128::from(spec.q()), 1 << 24)?;
    let mut union = HashSet::new();
    for &y in &ids {
        union.extend(spec.poly_neighbor_ids(y)?);
    }
    let cluster = spec.cluster_size();
    let degree = i128::from(spec.q() as i64) * cluster as i128;
    let pairs = (k * k.saturating_sub(1) / 2) as i128;
    Ok(UnionBound {
        actual_union: union.len() as u128 * cluster,
        ie_bound: k as i128 * degree - pairs * i128::from(cap),
    })
}

/// An induced complete bipartite subgraph: every point in `left` lies on every
/// polynomial in `right`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Biclique {
    pub left: Vec<u64>,
    pub right: Vec<u64>,
}

impl Biclique {
    pub fn a(&self) -> usize {
        self.left.len()
    }

    pub fn b(&self) -> usize {
        self.right.len()
    }

    pub fn edges(&self) -> usize {
        self.a() * self.b()
    }
}

/// Finds a maximum-edge biclique with at least `min_a` points and `min_b`
/// polynomials, or `None` if there is none.
///
/// Graphs with at most 20 vertices are scanned over every subset of the smaller
/// side. Larger graphs support only `(2, 2)`: any such biclique has its points
/// inside the common neighborhood of two polynomials, so it suffices to expand
/// every subset of size >= 2 of every pairwise common neighborhood.
pub fn exhaustive_biclique_search(spec: &GraphSpec, min_a: usize, min_b: usize) -> Result<Option<Biclique>> {
    if spec.m() != 0 {
        return Err(Error::InvalidParameter("biclique search runs on the base graph (m = 0)".into()));
    }
    let (min_a, min_b) = (min_a.max(1), min_b.max(1));
    let total = u128::from(spec.num_points()) + u128::from(spec.num_polys());
    if total <= u128::from(EXHAUSTIVE_BICLIQUE_VERTICES) {
        return exhaustive_small(spec, min_a, min_b);
    }
    if (min_a, min_b) != (2, 2) {
        return Err(Error::TooLargeToMaterialize {
            what: "exhaustive biclique scan (vertices)",
            size: total,
            limit: u128::from(EXHAUSTIVE_BICLIQUE_VERTICES),
        });
    }
    pairwise_two_two(spec)
}

fn exhaustive_small(spec: &GraphSpec, min_a: usize, min_b: usize) -> Result<Option<Biclique>> {
    let (np, ny) = (spec.num_points() as usize, spec.num_polys() as usize);
    // adjacency bitmasks: points -> polys
    let mut point_masks = vec![0u64; np];
    for y in 0..ny {
        for x in spec.poly_neighbor_ids(y as u64)? {
            point_masks[x as usize] |= 1 << y;
        }
    }
    let poly_masks: Vec<u64> = (0..ny)
        .map(|y| (0..np).filter(|&x| point_masks[x] >> y & 1 == 1).fold(0u64, |m, x| m | 1 << x))
        .collect();
    let enumerate_points = np <= ny;
    let (masks, side_n, other_n) =
        if enumerate_points { (&point_masks, np, ny) } else { (&poly_masks, ny, np) };
    let full = if other_n == 64 { u64::MAX } else { (1u64 << other_n) - 1 };

    let mut best: Option<(usize, u64, u64)> = None;
    for subset in 1u64..(1u64 << side_n) {
        let common = (0..side_n)
            .filter(|&i| subset >> i & 1 == 1)
            .fold(full, |acc, i| acc & masks[i]);
        let (here, there) = (subset.count_ones() as usize, common.count_ones() as usize);
        let (a, b) = if enumerate_points { (here, there) } else { (there, here) };
        if a < min_a || b < min_b {
            continue;
        }
        if best.is_none_or(|(e, _, _)| a * b > e) {
            best = Some((a * b, subset, common));
        }
    }
    let bits = |m: u64, n: usize| (0..n as u64).filter(|&i| m >> i & 1 == 1).collect::<Vec<_>>();
    Ok(best.map(|(_, subset, common)| {
        if enumerate_points {
            Biclique { left: bits(subset, np), right: bits(common, ny) }
        } else {
            Biclique { left: bits(common, np), right: bits(subset, ny) }
        }
    }))
}

fn pairwise_two_two(spec: &GraphSpec) -> Result<Option<Biclique>> {
    guard("right side for pair scan", u128::from(spec.num_polys()), crate::graph::MAX_RIGHT_PAIR_SCAN)?;
    let n = spec.num_polys();
    let neighborhoods: Vec<Vec<u64>> = (0..n).map(|y| spec.poly_neighbor_ids(y)).collect::<Result<_>>()?;
    let candidates: Vec<Vec<u64>> = (0..n)
        .into_par_iter()
        .flat_map_iter(|a| {
            let na: HashSet<u64> = neighborhoods[a as usize].iter().copied().collect();
            let neighborhoods = &neighborhoods;
            (a + 1..n).filter_map(move |b| {
                let common: Vec<u64> =
                    neighborhoods[b as usize].iter().copied().filter(|x| na.contains(x)).collect();
                (common.len() >= 2).then_some(common)
            })
        })
        .collect();
    let mut best: Option<Biclique> = None;
    let mut seen = HashSet::new();
    for common in candidates {
        let k = common.len();
        for mask in 1u64..(1u64 << k) {
            if mask.count_ones() < 2 {
                continue;
            }
            let pts: Vec<u64> = (0..k).filter(|&i| mask >> i & 1 == 1).map(|i| common[i]).collect();
            if !seen.insert(pts.clone()) {
                continue;
            }
            let mut polys: Vec<u64> = spec.point_neighbor_ids(pts[0])?;
            for &x in &pts[1..] {
                let through: HashSet<u64> = spec.point_neighbor_ids(x)?.into_iter().collect();
                polys.retain(|y| through.contains(y));
            }
            polys.sort_unstable();
            if polys.len() < 2 {
                continue;
            }
            let cand = Biclique { left: pts, right: polys };
            let better = match &best {
                None => true,
                Some(b) => cand.edges() > b.edges() || (cand.edges() == b.edges() && (&cand.left, &cand.right) < (&b.left, &b.right)),
            };
            if better {
                best = Some(cand);
            }
        }
    }
    Ok(best)
}
