//! Level-wise construction of the approximating graphs and closed-form
//! statistics that never build them.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{Pow, ToPrimitive, Zero};

use super::graph::Multigraph;
use super::schema::SubstitutionSchema;
use crate::algebra::integer::{factor_integer, FactoredRational};
use crate::error::{Error, Result};

/// Default limit on the number of vertices of an explicitly built graph.
pub const DEFAULT_VERTEX_CAP: usize = 2_000_000;

/// Environment variable overriding the vertex caps.
pub const CAP_ENV: &str = "FRACTAL_TREES_ORACLE_CAP";

/// `default`, unless the cap environment variable holds a number.
pub fn cap_from_env(default: usize) -> usize {
    std::env::var(CAP_ENV).ok().and_then(|v| v.trim().parse().ok()).unwrap_or(default)
}

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind { parent: (0..n).collect() }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            // keep the smaller index as root
            let (lo, hi) = (ra.min(rb), ra.max(rb));
            self.parent[hi] = lo;
        }
    }
}

/// For every `v1` vertex, the (cell, boundary index) pairs placed on it.
fn junctions(s: &SubstitutionSchema) -> Vec<Vec<(usize, usize)>> {
    let mut out = vec![Vec::new(); s.v1().vertex_count()];
    for (i, map) in s.cell_maps().iter().enumerate() {
        for (x, &w) in map.iter().enumerate() {
            out[w].push((i, x));
        }
    }
    out
}

/// One gluing step: `m` copies of `prev` identified along the cell maps.
///
/// Vertices are numbered in order of the smallest `(cell, vertex)` member of
/// their class.
pub fn glue(s: &SubstitutionSchema, prev: &Multigraph) -> Result<Multigraph> {
    let m = s.num_cells();
    let size = prev.vertex_count();
    let id = |cell: usize, v: usize| cell * size + v;
    let mut uf = UnionFind::new(m * size);
    for members in junctions(s) {
        if let Some(&(i0, x0)) = members.first() {
            for &(i, x) in &members[1..] {
                uf.union(id(i0, prev.boundary()[x0]), id(i, prev.boundary()[x]));
            }
        }
    }
    let mut label = vec![usize::MAX; m * size];
    let mut next = 0;
    for k in 0..m * size {
        let r = uf.find(k);
        if label[r] == usize::MAX {
            label[r] = next;
            next += 1;
        }
        label[k] = label[r];
    }
    let fixed = s.fixed_points();
    let boundary: Vec<usize> = (0..s.boundary_size())
        .map(|x| label[id(fixed[x][0], prev.boundary()[x])])
        .collect();
    let mut g = Multigraph::new(next, boundary)?;
    for cell in 0..m {
        for (u, v, mult) in prev.edges() {
            g.add_edge(label[id(cell, u)], label[id(cell, v)], mult)?;
        }
    }
    Ok(g)
}

/// The level-`n` approximating graph, refusing when its vertex count would
/// exceed `cap`.
pub fn build_graph_capped(s: &SubstitutionSchema, n: usize, cap: usize) -> Result<Multigraph> {
    let count = vertex_count(s, n);
    if count > BigInt::from(cap) {
        return Err(Error::CapExceeded(format!(
            "level {n} of '{}' has {count} vertices, above the cap of {cap}",
            s.name()
        )));
    }
    let mut g = Multigraph::complete(s.boundary_size());
    for _ in 0..n {
        g = glue(s, &g)?;
    }
    Ok(g)
}

/// `build_graph_capped` with the default cap (or its environment override).
pub fn build_graph(s: &SubstitutionSchema, n: usize) -> Result<Multigraph> {
    build_graph_capped(s, n, cap_from_env(DEFAULT_VERTEX_CAP))
}

/// Number of boundary points identified away per gluing step:
/// `m * N0 - |V_1|`.
pub fn junction_loss(s: &SubstitutionSchema) -> usize {
    s.num_cells() * s.boundary_size() - s.v1().vertex_count()
}

/// `|V_n|` from `|V_n| = m |V_{n-1}| - J`.
pub fn vertex_count(s: &SubstitutionSchema, n: usize) -> BigInt {
    let j = BigInt::from(junction_loss(s));
    let m = BigInt::from(s.num_cells());
    let mut v = BigInt::from(s.boundary_size());
    for _ in 0..n {
        v = &v * &m - &j;
    }
    v
}

/// `|E_n| = m^n * C(N0, 2)`, counting multiplicity.
pub fn edge_count(s: &SubstitutionSchema, n: usize) -> BigInt {
    let n0 = s.boundary_size();
    BigInt::from(s.num_cells()).pow(n as u32) * BigInt::from(n0 * (n0 - 1) / 2)
}

/// Degree census of `V_n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DegreeStats {
    pub level: usize,
    pub histogram: BTreeMap<BigInt, BigInt>,
    pub boundary_degrees: Vec<BigInt>,
    pub vertex_count: BigInt,
    pub edge_count: BigInt,
}

impl DegreeStats {
    fn check(&self) -> Result<()> {
        let total: BigInt = self.histogram.values().sum();
        let degree_sum: BigInt = self.histogram.iter().map(|(d, c)| d * c).sum();
        if total != self.vertex_count || degree_sum != &self.edge_count * 2 {
            return Err(Error::Invariant(format!("degree census inconsistent at level {}", self.level)));
        }
        Ok(())
    }
}

/// Degree census by a level recursion: interior vertices of each copy keep
/// their degree, and each junction gets the sum of the boundary degrees of
/// the copies meeting there.
pub fn degree_stats(s: &SubstitutionSchema, n: usize) -> Result<DegreeStats> {
    let n0 = s.boundary_size();
    let mut hist: BTreeMap<BigInt, BigInt> = BTreeMap::new();
    hist.insert(BigInt::from(n0 - 1), BigInt::from(n0));
    let mut bdeg: Vec<BigInt> = vec![BigInt::from(n0 - 1); n0];
    let m = BigInt::from(s.num_cells());
    let junc = junctions(s);
    for _ in 0..n {
        let mut next: BTreeMap<BigInt, BigInt> = BTreeMap::new();
        let mut interior = hist.clone();
        for d in &bdeg {
            let c = interior.get_mut(d).expect("boundary degree in histogram");
            *c -= 1;
        }
        for (d, c) in interior {
            if !c.is_zero() {
                *next.entry(d).or_insert_with(BigInt::zero) += c * &m;
            }
        }
        let junction_degree: Vec<BigInt> =
            junc.iter().map(|members| members.iter().map(|&(_, x)| &bdeg[x]).sum()).collect();
        for d in &junction_degree {
            *next.entry(d.clone()).or_insert_with(BigInt::zero) += 1;
        }
        bdeg = s.v1().boundary().iter().map(|&b| junction_degree[b].clone()).collect();
        hist = next;
    }
    let stats = DegreeStats {
        level: n,
        histogram: hist,
        boundary_degrees: bdeg,
        vertex_count: vertex_count(s, n),
        edge_count: edge_count(s, n),
    };
    stats.check()?;
    Ok(stats)
}

/// `prod_j d_j / sum_j d_j` over all vertices of `V_n`, in factored form.
pub fn degree_ratio(s: &SubstitutionSchema, n: usize) -> Result<FactoredRational> {
    degree_ratio_of(&degree_stats(s, n)?)
}

pub fn degree_ratio_of(stats: &DegreeStats) -> Result<FactoredRational> {
    let mut exps: BTreeMap<BigInt, BigInt> = BTreeMap::new();
    for (d, c) in &stats.histogram {
        for (p, e) in factor_integer(d)? {
            *exps.entry(p).or_insert_with(BigInt::zero) += c * BigInt::from(e);
        }
    }
    let sum = &stats.edge_count * 2;
    for (p, e) in factor_integer(&sum)? {
        *exps.entry(p).or_insert_with(BigInt::zero) -= BigInt::from(e);
    }
    FactoredRational::from_prime_powers(exps)
}

/// Degree histogram of an explicit graph, in the same shape as `DegreeStats`.
pub fn census(g: &Multigraph) -> BTreeMap<BigInt, BigInt> {
    let mut hist: BTreeMap<BigInt, BigInt> = BTreeMap::new();
    for d in g.degrees() {
        *hist.entry(BigInt::from(d)).or_insert_with(BigInt::zero) += 1;
    }
    hist
}

/// `|V_n|` as a machine integer, when it fits.
pub fn vertex_count_usize(s: &SubstitutionSchema, n: usize) -> Option<usize> {
    vertex_count(s, n).to_usize()
}
