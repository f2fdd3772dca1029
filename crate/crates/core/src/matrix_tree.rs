//! Spanning-tree counts from the matrix-tree theorem.
//!
//! Two exact oracles: a principal cofactor of the graph Laplacian `G = D - A`,
//! and the product of nonzero eigenvalues of the probabilistic Laplacian
//! `P = D^{-1} G` read off its characteristic polynomial.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::algebra::matrix::{char_poly, RatMatrix};
use crate::error::{Error, Result};
use crate::fractal::graph::Multigraph;

/// Largest graph accepted by the characteristic-polynomial oracle.
pub const DEFAULT_PROBABILISTIC_CAP: usize = 400;

/// The graph Laplacian and the probabilistic Laplacian of a multigraph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LaplacianPair {
    pub g: Vec<Vec<i64>>,
    pub p: RatMatrix,
    pub degrees: Vec<u64>,
}

pub fn laplacians(g: &Multigraph) -> Result<LaplacianPair> {
    let n = g.vertex_count();
    let degrees = g.degrees();
    if let Some(v) = degrees.iter().position(|&d| d == 0) {
        return Err(Error::IsolatedVertex(v));
    }
    let mut lap = vec![vec![0i64; n]; n];
    for (i, row) in lap.iter_mut().enumerate() {
        row[i] = degrees[i] as i64;
    }
    for (u, v, m) in g.edges() {
        lap[u][v] -= m as i64;
        lap[v][u] -= m as i64;
    }
    let p = RatMatrix::from_fn(n, n, |i, j| BigRational::new(BigInt::from(lap[i][j]), BigInt::from(degrees[i])));
    Ok(LaplacianPair { g: lap, p, degrees })
}

/// Kirchhoff count together with a connectivity flag. A disconnected graph
/// has no spanning tree and yields `(0, false)`.
pub fn tau_cofactor_flagged(g: &Multigraph) -> (BigInt, bool) {
    if !g.is_connected() {
        return (BigInt::zero(), false);
    }
    if g.vertex_count() <= 1 {
        return (BigInt::one(), true);
    }
    (cofactor(g, g.vertex_count() - 1), true)
}

/// Number of spanning trees by the matrix-tree theorem.
pub fn tau_cofactor(g: &Multigraph) -> BigInt {
    tau_cofactor_flagged(g).0
}

/// Determinant of the Laplacian with row and column `removed` deleted.
///
/// The reduced Laplacian of a connected graph is positive definite, so
/// symmetric elimination needs no pivot search; vertices are eliminated in a
/// minimum-degree order to limit fill, with fraction-free (Bareiss) updates
/// on sparse rows.
pub fn cofactor(g: &Multigraph, removed: usize) -> BigInt {
    let n = g.vertex_count();
    assert!(removed < n);
    if n == 1 {
        return BigInt::one();
    }
    let degrees = g.degrees();
    let adj = g.adjacency();
    let keep: Vec<usize> = (0..n).filter(|&v| v != removed).collect();
    let order = min_degree_order(&adj, removed);
    let mut pos = vec![usize::MAX; n];
    for (k, &v) in order.iter().enumerate() {
        pos[v] = k;
    }
    let size = keep.len();
    let mut rows: Vec<BTreeMap<usize, BigInt>> = vec![BTreeMap::new(); size];
    for &v in &keep {
        let r = &mut rows[pos[v]];
        r.insert(pos[v], BigInt::from(degrees[v]));
        for &(w, m) in &adj[v] {
            if w != removed {
                r.insert(pos[w], -BigInt::from(m));
            }
        }
    }
    sparse_bareiss(rows)
}

/// Greedy minimum-degree elimination order of all vertices except `skip`.
fn min_degree_order(adj: &[Vec<(usize, u64)>], skip: usize) -> Vec<usize> {
    let n = adj.len();
    let mut nbrs: Vec<BTreeSet<usize>> = adj
        .iter()
        .map(|a| a.iter().map(|&(w, _)| w).filter(|&w| w != skip).collect())
        .collect();
    nbrs[skip].clear();
    let mut queue: BTreeSet<(usize, usize)> = (0..n).filter(|&v| v != skip).map(|v| (nbrs[v].len(), v)).collect();
    let mut order = Vec::with_capacity(n - 1);
    while let Some((_, v)) = queue.pop_first() {
        order.push(v);
        let around: Vec<usize> = nbrs[v].iter().copied().collect();
        for &a in &around {
            queue.remove(&(nbrs[a].len(), a));
            nbrs[a].remove(&v);
        }
        for (i, &a) in around.iter().enumerate() {
            for &b in &around[i + 1..] {
                nbrs[a].insert(b);
                nbrs[b].insert(a);
            }
        }
        for &a in &around {
            queue.insert((nbrs[a].len(), a));
        }
        nbrs[v].clear();
    }
    order
}

/// Bareiss elimination of a symmetric positive definite integer matrix given
/// by sparse rows, eliminating in index order. Rows untouched at a step keep
/// a stamp and are rescaled lazily.
fn sparse_bareiss(mut rows: Vec<BTreeMap<usize, BigInt>>) -> BigInt {
    let n = rows.len();
    let mut pivots: Vec<BigInt> = Vec::with_capacity(n + 1);
    pivots.push(BigInt::one());
    let mut stamp = vec![0usize; n];

    fn catch_up(row: &mut BTreeMap<usize, BigInt>, stamp: &mut usize, target: usize, pivots: &[BigInt]) {
        if *stamp == target {
            return;
        }
        let (num, den) = (&pivots[target], &pivots[*stamp]);
        for v in row.values_mut() {
            *v = &*v * num / den;
        }
        *stamp = target;
    }

    for k in 0..n {
        let mut pivot_row = std::mem::take(&mut rows[k]);
        catch_up(&mut pivot_row, &mut stamp[k], k, &pivots);
        let pk = pivot_row.remove(&k).unwrap_or_default();
        if pk.is_zero() {
            return BigInt::zero();
        }
        let prev = pivots[k].clone();
        let targets: Vec<usize> = pivot_row.keys().copied().filter(|&j| j > k).collect();
        for j in targets {
            let row = &mut rows[j];
            catch_up(row, &mut stamp[j], k, &pivots);
            let ajk = row.remove(&k).unwrap_or_default();
            for v in row.values_mut() {
                *v *= &pk;
            }
            if !ajk.is_zero() {
                for (&c, akc) in pivot_row.range(k + 1..) {
                    let e = row.entry(c).or_insert_with(BigInt::zero);
                    *e -= &ajk * akc;
                }
            }
            row.retain(|_, v| {
                if v.is_zero() {
                    return false;
                }
                *v = &*v / &prev;
                true
            });
            stamp[j] = k + 1;
        }
        pivots.push(pk);
    }
    pivots.pop().unwrap()
}

/// Spanning-tree count through the probabilistic Laplacian:
/// `|(prod d / sum d) * prod of nonzero eigenvalues of P|`, where the
/// eigenvalue product is the negated linear coefficient of `det(P - xI)`.
pub fn tau_probabilistic(g: &Multigraph) -> Result<BigInt> {
    tau_probabilistic_capped(g, DEFAULT_PROBABILISTIC_CAP)
}

pub fn tau_probabilistic_capped(g: &Multigraph, cap: usize) -> Result<BigInt> {
    if g.vertex_count() > cap {
        return Err(Error::CapExceeded(format!(
            "characteristic polynomial oracle limited to {cap} vertices, graph has {}",
            g.vertex_count()
        )));
    }
    if g.vertex_count() == 1 {
        return Ok(BigInt::one());
    }
    let lp = laplacians(g)?;
    let chi = char_poly(&lp.p)?;
    let eig_product = -chi.coeff(1);
    let prod_d = lp.degrees.iter().fold(BigInt::one(), |acc, &d| acc * BigInt::from(d));
    let sum_d: BigInt = lp.degrees.iter().map(|&d| BigInt::from(d)).sum();
    let tau = BigRational::new(prod_d, sum_d) * eig_product;
    if !tau.is_integer() {
        return Err(Error::Invariant(format!("probabilistic tree count {tau} is not an integer")));
    }
    Ok(tau.to_integer().abs())
}

/// `n^(n-2)`, the number of labelled trees on `n` vertices.
pub fn cayley(n: usize) -> BigInt {
    if n <= 1 {
        return BigInt::one();
    }
    num_traits::pow(BigInt::from(n), n - 2)
}

/// Count by deletion-contraction on edge `{u, v}`:
/// `tau(G) = tau(G - e) + tau(G / e)`.
pub fn tau_deletion_contraction(g: &Multigraph, u: usize, v: usize) -> Result<BigInt> {
    let del = g.delete_edge(u, v)?;
    let con = g.contract_edge(u, v)?;
    Ok(tau_cofactor(&del) + tau_cofactor(&con))
}
