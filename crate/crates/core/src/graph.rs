//! The point/polynomial incidence graph and its private-randomness amplification.
//!
//! Left vertices are points `(x1, x2)` of the affine plane over the field, right
//! vertices are polynomials of degree at most `d`. A point and a polynomial are
//! adjacent iff `x2 = S(x1)`. The amplified graph tags every vertex with an
//! `m`-bit string and connects tagged vertices whenever their bases are
//! adjacent; it is never materialized.

use std::io::Write;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{guard, Error, Result};
use crate::field::{FieldElement, FieldSpec, PolyCoeffs};

/// Neighbor lists longer than this are not materialized.
pub const MAX_NEIGHBORS: u128 = 1 << 20;
/// Edge enumeration limit.
pub const MAX_EDGES: u128 = 1 << 24;
/// Right-side limit for exhaustive pair scans.
pub const MAX_RIGHT_PAIR_SCAN: u128 = 1 << 14;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct PointVertex {
    pub x1: FieldElement,
    pub x2: FieldElement,
}

pub type PolyVertex = PolyCoeffs;

/// A vertex of the amplified graph: a base vertex plus an `m`-bit tag.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct AmplifiedVertex<V> {
    pub base: V,
    pub tag: u64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphCounts {
    #[serde(rename = "L")]
    pub left: u128,
    #[serde(rename = "R")]
    pub right: u128,
    #[serde(rename = "E")]
    pub edges: u128,
    #[serde(rename = "L_bar")]
    pub left_bar: u128,
    #[serde(rename = "R_bar")]
    pub right_bar: u128,
    #[serde(rename = "E_bar")]
    pub edges_bar: u128,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AmplifiedStats {
    pub left_bar: u128,
    pub right_bar: u128,
    pub edges_bar: u128,
    pub cluster_size: u128,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphDescriptor {
    pub field: FieldSpec,
    pub d: u32,
    pub m: u32,
    pub counts: GraphCounts,
}

/// Result of the exhaustive common-neighborhood scan.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CommonNeighborhood {
    pub max: u64,
    /// Lexicographically smallest pair of poly ids attaining `max`.
    pub witness: (u64, u64),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(into = "GraphDescriptor", try_from = "GraphDescriptor")]
pub struct GraphSpec {
    field: FieldSpec,
    d: u32,
    m: u32,
    q: u64,
    num_polys: u64,
}

impl From<GraphSpec> for GraphDescriptor {
    fn from(g: GraphSpec) -> Self {
        g.descriptor()
    }
}

impl TryFrom<GraphDescriptor> for GraphSpec {
    type Error = Error;

    fn try_from(desc: GraphDescriptor) -> Result<Self> {
        let g = GraphSpec::new(desc.field, desc.d, desc.m)?;
        if g.counts() != desc.counts {
            return Err(Error::InvalidParameter("graph counts do not match parameters".into()));
        }
        Ok(g)
    }
}

impl GraphSpec {
    /// Validates that every count (including the amplified ones) fits in `u128`
    /// and that vertex ids fit in `u64`.
    pub fn new(field: FieldSpec, d: u32, m: u32) -> Result<Self> {
        let q = u64::from(field.q());
        let overflow = || Error::InvalidParameter(format!("graph with q={q}, d={d}, m={m} is too large to count"));
        let num_polys = q.checked_pow(d + 1).ok_or_else(overflow)?;
        let edges = u128::from(q).checked_pow(d + 2).ok_or_else(overflow)?;
        let tags = 1u128.checked_shl(m).filter(|_| m < 64).ok_or_else(overflow)?;
        edges
            .checked_mul(tags)
            .and_then(|e| e.checked_mul(tags))
            .ok_or_else(overflow)?;
        Ok(GraphSpec { field, d, m, q, num_polys })
    }

    pub fn field(&self) -> &FieldSpec {
        &self.field
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    pub fn d(&self) -> u32 {
        self.d
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    /// Same base graph without amplification.
    pub fn base(&self) -> GraphSpec {
        GraphSpec { m: 0, ..self.clone() }
    }

    pub fn num_points(&self) -> u64 {
        self.q * self.q
    }

    pub fn num_polys(&self) -> u64 {
        self.num_polys
    }

    pub fn num_edges(&self) -> u128 {
        u128::from(self.num_polys) * u128::from(self.q)
    }

    /// `D_L = q^d`.
    pub fn left_degree(&self) -> u64 {
        self.num_polys / self.q
    }

    /// `D_R = q`.
    pub fn right_degree(&self) -> u64 {
        self.q
    }

    pub fn cluster_size(&self) -> u128 {
        1u128 << self.m
    }

    pub fn counts(&self) -> GraphCounts {
        let c = self.cluster_size();
        let left = u128::from(self.num_points());
        let right = u128::from(self.num_polys);
        let edges = self.num_edges();
        GraphCounts {
            left,
            right,
            edges,
            left_bar: left * c,
            right_bar: right * c,
            edges_bar: edges * c * c,
        }
    }

    pub fn amplified_stats(&self) -> AmplifiedStats {
        let c = self.counts();
        AmplifiedStats {
            left_bar: c.left_bar,
            right_bar: c.right_bar,
            edges_bar: c.edges_bar,
            cluster_size: self.cluster_size(),
        }
    }

    pub fn descriptor(&self) -> GraphDescriptor {
        GraphDescriptor { field: self.field.clone(), d: self.d, m: self.m, counts: self.counts() }
    }

    // ---- vertex ids ----

    pub fn point_id(&self, v: &PointVertex) -> u64 {
        u64::from(v.x1.idx()) * self.q + u64::from(v.x2.idx())
    }

    pub fn point(&self, id: u64) -> Result<PointVertex> {
        if id >= self.num_points() {
            return Err(Error::InvalidVertexId { id, side: "point" });
        }
        Ok(PointVertex {
            x1: self.field.element(id / self.q)?,
            x2: self.field.element(id % self.q)?,
        })
    }

    pub fn poly_id(&self, v: &PolyVertex) -> u64 {
        v.coeffs().iter().rev().fold(0u64, |acc, c| acc * self.q + u64::from(c.idx()))
    }

    pub fn poly(&self, id: u64) -> Result<PolyVertex> {
        if id >= self.num_polys {
            return Err(Error::InvalidVertexId { id, side: "poly" });
        }
        let mut rest = id;
        let coeffs = (0..=self.d)
            .map(|_| {
                let c = rest % self.q;
                rest /= self.q;
                self.field.element(c)
            })
            .collect::<Result<Vec<_>>>()?;
        PolyCoeffs::new(coeffs)
    }

    fn check_point(&self, v: &PointVertex) -> Result<()> {
        self.field.element(u64::from(v.x1.idx()))?;
        self.field.element(u64::from(v.x2.idx()))?;
        Ok(())
    }

    fn check_poly(&self, v: &PolyVertex) -> Result<()> {
        if v.degree_bound() != self.d {
            return Err(Error::InvalidParameter(format!(
                "polynomial has {} coefficients, expected {}",
                v.coeffs().len(),
                self.d + 1
            )));
        }
        for c in v.coeffs() {
            self.field.element(u64::from(c.idx()))?;
        }
        Ok(())
    }

    // ---- adjacency ----

    pub fn is_edge(&self, point: &PointVertex, poly: &PolyVertex) -> bool {
        self.field.eval_poly(poly, point.x1) == point.x2
    }

    pub fn is_edge_ids(&self, point: u64, poly: u64) -> Result<bool> {
        Ok(self.is_edge(&self.point(point)?, &self.poly(poly)?))
    }

    /// The `q^d` polynomials through a point.
    pub fn point_neighbors(&self, point: &PointVertex) -> Result<Vec<PolyVertex>> {
        self.check_point(point)?;
        self.point_neighbor_ids(self.point_id(point))?
            .into_iter()
            .map(|id| self.poly(id))
            .collect()
    }

    /// The `q` points on the graph of a polynomial, ordered by `x1`.
    pub fn poly_neighbors(&self, poly: &PolyVertex) -> Result<Vec<PointVertex>> {
        self.check_poly(poly)?;
        Ok(self
            .field
            .elements()
            .map(|x1| PointVertex { x1, x2: self.field.eval_poly(poly, x1) })
            .collect())
    }

    /// Poly ids adjacent to a point id, ascending in `(s_1, ..., s_d)` order.
    pub fn point_neighbor_ids(&self, point: u64) -> Result<Vec<u64>> {
        let pt = self.point(point)?;
        let degree = self.left_degree();
        guard("point neighborhood", u128::from(degree), MAX_NEIGHBORS)?;
        let f = &self.field;
        let powers: Vec<FieldElement> = (0..=self.d).map(|i| f.pow(pt.x1, u64::from(i))).collect();
        let mut out = Vec::with_capacity(degree as usize);
        for code in 0..degree {
            // code enumerates (s_1, ..., s_d); s_0 is forced by the point.
            let mut rest = code;
            let mut acc = FieldElement::ZERO;
            let mut id_tail = 0u64;
            let mut place = self.q;
            for power in &powers[1..] {
                let s = f.element(rest % self.q)?;
                rest /= self.q;
                acc = f.add(acc, f.mul(s, *power));
                id_tail += u64::from(s.idx()) * place;
                place = place.wrapping_mul(self.q);
            }
            let s0 = f.sub(pt.x2, acc);
            out.push(id_tail + u64::from(s0.idx()));
        }
        Ok(out)
    }

    /// Point ids adjacent to a poly id, ordered by `x1`.
    pub fn poly_neighbor_ids(&self, poly: u64) -> Result<Vec<u64>> {
        let s = self.poly(poly)?;
        Ok(self
            .field
            .elements()
            .map(|x1| u64::from(x1.idx()) * self.q + u64::from(self.field.eval_poly(&s, x1).idx()))
            .collect())
    }

    // ---- edges ----

    /// All `q^{d+2}` edges, grouped by polynomial then ordered by `x1`.
    pub fn edges(&self) -> Result<impl Iterator<Item = (PointVertex, PolyVertex)> + '_> {
        guard("edge list", self.num_edges(), MAX_EDGES)?;
        Ok((0..self.num_polys).flat_map(move |id| {
            let poly = self.poly(id).expect("id in range");
            self.field
                .elements()
                .map(|x1| (PointVertex { x1, x2: self.field.eval_poly(&poly, x1) }, poly.clone()))
                .collect::<Vec<_>>()
        }))
    }

    /// Edges as `(point_id, poly_id)`, same order as [`GraphSpec::edges`].
    pub fn edge_ids(&self) -> Result<Vec<(u64, u64)>> {
        guard("edge list", self.num_edges(), MAX_EDGES)?;
        let mut out = Vec::with_capacity(self.num_edges() as usize);
        for id in 0..self.num_polys {
            for pt in self.poly_neighbor_ids(id)? {
                out.push((pt, id));
            }
        }
        Ok(out)
    }

    /// A uniform edge: uniform polynomial, uniform `x1`, then `x2 = S(x1)`.
    pub fn sample_edge(&self, seed: u64) -> (PointVertex, PolyVertex) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        self.sample_edge_with(&mut rng)
    }

    pub fn sample_edge_with<R: Rng + ?Sized>(&self, rng: &mut R) -> (PointVertex, PolyVertex) {
        let q = self.field.q();
        let coeffs = (0..=self.d)
            .map(|_| self.field.element(u64::from(rng.random_range(0..q))).expect("in range"))
            .collect();
        let poly = PolyCoeffs::new(coeffs).expect("d + 1 >= 1 coefficients");
        let x1 = self.field.element(u64::from(rng.random_range(0..q))).expect("in range");
        let x2 = self.field.eval_poly(&poly, x1);
        (PointVertex { x1, x2 }, poly)
    }

    pub fn write_edges_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        let io = |e: csv::Error| Error::InvalidParameter(format!("csv output failed: {e}"));
        w.write_record(["point_id", "poly_id"]).map_err(io)?;
        for (pt, poly) in self.edge_ids()? {
            w.write_record([pt.to_string(), poly.to_string()]).map_err(io)?;
        }
        w.flush().map_err(|e| Error::InvalidParameter(format!("csv output failed: {e}")))?;
        Ok(())
    }

    // ---- common neighborhoods ----

    /// Maximum number of common points over all unordered pairs of distinct
    /// polynomials, scanned exhaustively. Ties resolve to the lexicographically
    /// smallest `(a, b)` with `a < b`.
    pub fn common_neighborhood_max(&self) -> Result<CommonNeighborhood> {
        guard("right side for pair scan", u128::from(self.num_polys), MAX_RIGHT_PAIR_SCAN)?;
        let n = self.num_polys;
        if n < 2 {
            return Err(Error::InvalidParameter("need at least two polynomials".into()));
        }
        let q = self.q as usize;
        // values[id * q + x] = S_id(x)
        let values: Vec<u32> = (0..n)
            .flat_map(|id| {
                let s = self.poly(id).expect("id in range");
                self.field.elements().map(move |x| self.field.eval_poly(&s, x).idx()).collect::<Vec<_>>()
            })
            .collect();
        let best = (0..n)
            .into_par_iter()
            .map(|a| {
                let va = &values[a as usize * q..(a as usize + 1) * q];
                let mut best = (0u64, (a, a + 1));
                for b in a + 1..n {
                    let vb = &values[b as usize * q..(b as usize + 1) * q];
                    let common = va.iter().zip(vb).filter(|(x, y)| x == y).count() as u64;
                    if common > best.0 {
                        best = (common, (a, b));
                    }
                }
                best
            })
            .filter(|&(_, (a, b))| b < n && a < b)
            .reduce(
                || (0, (u64::MAX, u64::MAX)),
                |x, y| if y.0 > x.0 || (y.0 == x.0 && y.1 < x.1) { y } else { x },
            );
        Ok(CommonNeighborhood { max: best.0, witness: best.1 })
    }

    // ---- amplified graph ----

    pub fn is_amplified_edge(
        &self,
        point: &AmplifiedVertex<PointVertex>,
        poly: &AmplifiedVertex<PolyVertex>,
    ) -> bool {
        self.is_edge(&point.base, &poly.base)
    }

    /// Neighbors of a tagged point: every tag of every base neighbor.
    pub fn amplified_point_neighbors(
        &self,
        v: &AmplifiedVertex<PointVertex>,
    ) -> Result<Vec<AmplifiedVertex<PolyVertex>>> {
        self.check_tag(v.tag)?;
        let size = u128::from(self.left_degree()) * self.cluster_size();
        guard("amplified neighborhood", size, MAX_NEIGHBORS)?;
        let tags = self.cluster_size() as u64;
        Ok(self
            .point_neighbors(&v.base)?
            .into_iter()
            .flat_map(|base| (0..tags).map(move |tag| AmplifiedVertex { base: base.clone(), tag }))
            .collect())
    }

    pub fn amplified_poly_neighbors(
        &self,
        v: &AmplifiedVertex<PolyVertex>,
    ) -> Result<Vec<AmplifiedVertex<PointVertex>>> {
        self.check_tag(v.tag)?;
        let size = u128::from(self.q) * self.cluster_size();
        guard("amplified neighborhood", size, MAX_NEIGHBORS)?;
        let tags = self.cluster_size() as u64;
        Ok(self
            .poly_neighbors(&v.base)?
            .into_iter()
            .flat_map(|base| (0..tags).map(move |tag| AmplifiedVertex { base, tag }))
            .collect())
    }

    fn check_tag(&self, tag: u64) -> Result<()> {
        if u128::from(tag) >= self.cluster_size() {
            return Err(Error::InvalidParameter(format!("tag {tag} needs more than {} bits", self.m)));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::make_field;
    use std::collections::{BTreeSet, HashSet};

    fn graph(p: u64, k: u32, d: u32, m: u32) -> GraphSpec {
        GraphSpec::new(make_field(p, k, None).unwrap(), d, m).unwrap()
    }

    fn poly(g: &GraphSpec, cs: &[u32]) -> PolyVertex {
        PolyCoeffs::new(cs.iter().map(|&c| g.field().element(u64::from(c)).unwrap()).collect()).unwrap()
    }

    fn pt(g: &GraphSpec, x1: u32, x2: u32) -> PointVertex {
        PointVertex {
            x1: g.field().element(u64::from(x1)).unwrap(),
            x2: g.field().element(u64::from(x2)).unwrap(),
        }
    }

    #[test]
    fn is_edge_examples() {
        let g = graph(2, 1, 1, 0);
        assert!(g.is_edge(&pt(&g, 0, 0), &PolyCoeffs::zero(1)));
        assert!(g.is_edge(&pt(&g, 0, 1), &poly(&g, &[1, 1])));
        assert!(!g.is_edge(&pt(&g, 1, 0), &poly(&g, &[1, 0])));
    }

    #[test]
    fn neighbors_of_origin_gf2() {
        let g = graph(2, 1, 1, 0);
        let ns: BTreeSet<_> = g.point_neighbors(&pt(&g, 0, 0)).unwrap().into_iter().collect();
        let brute: BTreeSet<_> = (0..g.num_polys())
            .map(|id| g.poly(id).unwrap())
            .filter(|s| g.is_edge(&pt(&g, 0, 0), s))
            .collect();
        assert_eq!(ns, brute);
        assert_eq!(ns, [poly(&g, &[0, 0]), poly(&g, &[0, 1])].into_iter().collect());
    }

    #[test]
    fn biregular_and_handshake() {
        for (p, k) in [(2u64, 1u32), (3, 1), (2, 2), (5, 1)] {
            for d in 0..=2 {
                let g = graph(p, k, d, 0);
                let mut right_deg = vec![0u64; g.num_polys() as usize];
                let mut left_total = 0u128;
                for x in 0..g.num_points() {
                    let ns = g.point_neighbor_ids(x).unwrap();
                    assert_eq!(ns.len() as u64, g.left_degree());
                    assert_eq!(ns.iter().collect::<HashSet<_>>().len(), ns.len());
                    for &y in &ns {
                        assert!(g.is_edge_ids(x, y).unwrap());
                        right_deg[y as usize] += 1;
                    }
                    left_total += ns.len() as u128;
                }
                assert!(right_deg.iter().all(|&r| r == g.q()));
                assert_eq!(left_total, g.num_edges());
                assert_eq!(g.num_edges(), u128::from(g.q()).pow(d + 2));
            }
        }
    }

    #[test]
    fn edge_enumeration_counts() {
        assert_eq!(graph(2, 1, 1, 0).edges().unwrap().count(), 8);
        let g = graph(3, 1, 1, 0);
        let all: HashSet<_> = g.edges().unwrap().collect();
        assert_eq!(all.len(), 27);
        assert!(all.iter().all(|(p, s)| g.is_edge(p, s)));
        let ids: HashSet<_> = g.edge_ids().unwrap().into_iter().collect();
        assert_eq!(ids.len(), 27);
    }

    #[test]
    fn enumeration_guard() {
        let g = graph(2, 16, 1, 0); // q^3 = 2^48 edges
        assert!(matches!(g.edge_ids(), Err(Error::TooLargeToMaterialize { .. })));
        // sampling has no guard
        let (p, s) = g.sample_edge(3);
        assert!(g.is_edge(&p, &s));
    }

    #[test]
    fn sampling_is_deterministic() {
        let g = graph(5, 1, 2, 0);
        assert_eq!(g.sample_edge(42), g.sample_edge(42));
        let (p, s) = g.sample_edge(42);
        assert!(g.is_edge(&p, &s));
    }

    #[test]
    fn sampling_is_uniform_on_small_graph() {
        let g = graph(2, 1, 1, 0);
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let mut counts = std::collections::HashMap::new();
        let trials = 80_000;
        for _ in 0..trials {
            let (p, s) = g.sample_edge_with(&mut rng);
            *counts.entry((g.point_id(&p), g.poly_id(&s))).or_insert(0u32) += 1;
        }
        assert_eq!(counts.len(), 8);
        for &c in counts.values() {
            let freq = f64::from(c) / f64::from(trials);
            assert!((freq - 0.125).abs() < 0.01, "{freq}");
        }
    }

    #[test]
    fn ids_round_trip() {
        let g = graph(3, 1, 2, 0);
        for id in 0..g.num_polys() {
            assert_eq!(g.poly_id(&g.poly(id).unwrap()), id);
        }
        for id in 0..g.num_points() {
            assert_eq!(g.point_id(&g.point(id).unwrap()), id);
        }
        assert!(matches!(g.poly(27), Err(Error::InvalidVertexId { .. })));
        assert!(matches!(g.point(9), Err(Error::InvalidVertexId { .. })));
    }

    /// Independent route: two polynomials share exactly the roots of their difference.
    fn max_roots_of_nonzero_difference(g: &GraphSpec) -> u64 {
        (1..g.num_polys())
            .map(|id| {
                let diff = g.poly(id).unwrap();
                g.field().elements().filter(|&x| g.field().eval_poly(&diff, x).is_zero()).count() as u64
            })
            .max()
            .unwrap()
    }

    #[test]
    fn common_neighborhood_bounded_by_d() {
        for (p, k) in [(2u64, 1u32), (3, 1), (2, 2), (5, 1)] {
            for d in 0..=2 {
                let g = graph(p, k, d, 0);
                let cn = g.common_neighborhood_max().unwrap();
                assert!(cn.max <= u64::from(d));
                assert_eq!(cn.max, max_roots_of_nonzero_difference(&g));
                let (a, b) = cn.witness;
                let na: HashSet<_> = g.poly_neighbor_ids(a).unwrap().into_iter().collect();
                let nb: HashSet<_> = g.poly_neighbor_ids(b).unwrap().into_iter().collect();
                assert_eq!(na.intersection(&nb).count() as u64, cn.max);
            }
        }
    }

    #[test]
    fn common_neighborhood_examples() {
        assert_eq!(graph(3, 1, 1, 0).common_neighborhood_max().unwrap().max, 1);
        assert!(graph(3, 1, 2, 0).common_neighborhood_max().unwrap().max <= 2);
        // polys differing only in s_0 share no point
        let g = graph(3, 1, 2, 0);
        let a: HashSet<_> = g.poly_neighbors(&poly(&g, &[0, 1, 2])).unwrap().into_iter().collect();
        let b: HashSet<_> = g.poly_neighbors(&poly(&g, &[2, 1, 2])).unwrap().into_iter().collect();
        assert_eq!(a.intersection(&b).count(), 0);
    }

    #[test]
    fn amplified_counts() {
        let g = graph(2, 1, 1, 0);
        let c = g.counts();
        assert_eq!((c.left, c.right, c.edges), (c.left_bar, c.right_bar, c.edges_bar));
        let g3 = graph(2, 1, 1, 3);
        let s = g3.amplified_stats();
        assert_eq!(s.edges_bar, 512);
        assert_eq!(s.cluster_size, 8);
        assert_eq!(s.left_bar, 4 * 8);
        assert_eq!(s.right_bar, 4 * 8);
    }

    #[test]
    fn cluster_members_share_neighborhoods() {
        let g = graph(3, 1, 1, 2);
        for id in 0..g.num_points() {
            let base = g.point(id).unwrap();
            let sets: Vec<BTreeSet<_>> = (0..4)
                .map(|tag| {
                    g.amplified_point_neighbors(&AmplifiedVertex { base, tag })
                        .unwrap()
                        .into_iter()
                        .collect()
                })
                .collect();
            assert!(sets.windows(2).all(|w| w[0] == w[1]));
            assert_eq!(sets[0].len() as u64, g.left_degree() * 4);
        }
        let s = AmplifiedVertex { base: poly(&g, &[1, 2]), tag: 3 };
        let ns = g.amplified_poly_neighbors(&s).unwrap();
        assert_eq!(ns.len(), 12);
        assert!(ns.iter().all(|v| g.is_amplified_edge(v, &s)));
        assert!(g.amplified_poly_neighbors(&AmplifiedVertex { base: poly(&g, &[1, 2]), tag: 4 }).is_err());
    }

    #[test]
    fn descriptor_json() {
        let g = graph(2, 1, 1, 3);
        let json = serde_json::to_string(&g).unwrap();
        assert_eq!(
            json,
            r#"{"field":{"p":2,"k":1,"modulus":[],"q":2},"d":1,"m":3,"counts":{"L":4,"R":4,"E":8,"L_bar":32,"R_bar":32,"E_bar":512}}"#
        );
        let back: GraphSpec = serde_json::from_str(&json).unwrap();
        assert_eq!(back, g);
    }

    #[test]
    fn edge_csv() {
        let g = graph(2, 1, 1, 0);
        let mut buf = Vec::new();
        g.write_edges_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(text.lines().count(), 9);
        assert_eq!(text.lines().next(), Some("point_id,poly_id"));
    }
}
