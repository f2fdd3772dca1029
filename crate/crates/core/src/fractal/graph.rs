//! Loopless multigraphs with a distinguished ordered boundary.

use std::collections::{BTreeMap, VecDeque};
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A finite loopless multigraph. Parallel edges are stored as a
/// multiplicity on the unordered pair `(u, v)` with `u < v`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Multigraph {
    vertex_count: usize,
    edges: BTreeMap<(usize, usize), u64>,
    boundary: Vec<usize>,
}

/// The on-disk form shared by schema files and graph exports.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphJson {
    pub vertex_count: usize,
    pub boundary: Vec<usize>,
    pub edges: Vec<[u64; 3]>,
}

/// A graph export: the graph object plus the construction level.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LevelGraphJson {
    pub vertex_count: usize,
    pub boundary: Vec<usize>,
    pub edges: Vec<[u64; 3]>,
    pub level: usize,
}

impl Multigraph {
    pub fn new(vertex_count: usize, boundary: Vec<usize>) -> Result<Self> {
        let mut seen = vec![false; vertex_count];
        for &b in &boundary {
            if b >= vertex_count {
                return Err(Error::MalformedSchema(format!("boundary vertex {b} out of range")));
            }
            if std::mem::replace(&mut seen[b], true) {
                return Err(Error::MalformedSchema(format!("boundary vertex {b} repeated")));
            }
        }
        Ok(Multigraph { vertex_count, edges: BTreeMap::new(), boundary })
    }

    /// The complete graph on `n` vertices, all of them boundary.
    pub fn complete(n: usize) -> Self {
        let mut g = Multigraph::new(n, (0..n).collect()).unwrap();
        for u in 0..n {
            for v in u + 1..n {
                g.add_edge(u, v, 1).unwrap();
            }
        }
        g
    }

    pub fn add_edge(&mut self, u: usize, v: usize, mult: u64) -> Result<()> {
        if u == v {
            return Err(Error::MalformedSchema(format!("loop at vertex {u}")));
        }
        if u >= self.vertex_count || v >= self.vertex_count {
            return Err(Error::MalformedSchema(format!("edge ({u}, {v}) out of range")));
        }
        if mult == 0 {
            return Ok(());
        }
        *self.edges.entry((u.min(v), u.max(v))).or_insert(0) += mult;
        Ok(())
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn boundary(&self) -> &[usize] {
        &self.boundary
    }

    pub fn set_boundary(&mut self, boundary: Vec<usize>) -> Result<()> {
        let g = Multigraph::new(self.vertex_count, boundary)?;
        self.boundary = g.boundary;
        Ok(())
    }

    /// Total number of edges counted with multiplicity.
    pub fn edge_count(&self) -> u64 {
        self.edges.values().sum()
    }

    /// Distinct adjacent pairs `(u, v, multiplicity)` with `u < v`, sorted.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize, u64)> + '_ {
        self.edges.iter().map(|(&(u, v), &m)| (u, v, m))
    }

    pub fn multiplicity(&self, u: usize, v: usize) -> u64 {
        self.edges.get(&(u.min(v), u.max(v))).copied().unwrap_or(0)
    }

    pub fn degrees(&self) -> Vec<u64> {
        let mut d = vec![0u64; self.vertex_count];
        for (&(u, v), &m) in &self.edges {
            d[u] += m;
            d[v] += m;
        }
        d
    }

    /// Neighbour lists with multiplicities, each sorted by neighbour id.
    pub fn adjacency(&self) -> Vec<Vec<(usize, u64)>> {
        let mut adj = vec![Vec::new(); self.vertex_count];
        for (&(u, v), &m) in &self.edges {
            adj[u].push((v, m));
            adj[v].push((u, m));
        }
        for a in &mut adj {
            a.sort_unstable();
        }
        adj
    }

    pub fn is_connected(&self) -> bool {
        if self.vertex_count == 0 {
            return true;
        }
        let adj = self.adjacency();
        let mut seen = vec![false; self.vertex_count];
        let mut queue = VecDeque::from([0]);
        seen[0] = true;
        let mut count = 1;
        while let Some(u) = queue.pop_front() {
            for &(v, _) in &adj[u] {
                if !seen[v] {
                    seen[v] = true;
                    count += 1;
                    queue.push_back(v);
                }
            }
        }
        count == self.vertex_count
    }

    /// Removes one copy of the edge `{u, v}`.
    pub fn delete_edge(&self, u: usize, v: usize) -> Result<Multigraph> {
        let key = (u.min(v), u.max(v));
        let mut g = self.clone();
        match g.edges.get_mut(&key) {
            None => return Err(Error::Dimension(format!("no edge ({u}, {v})"))),
            Some(m) if *m > 1 => *m -= 1,
            Some(_) => {
                g.edges.remove(&key);
            }
        }
        Ok(g)
    }

    /// Identifies `v` with `u`, drops the resulting loops and renumbers the
    /// vertices above `v` down by one.
    pub fn contract_edge(&self, u: usize, v: usize) -> Result<Multigraph> {
        if u == v || self.multiplicity(u, v) == 0 {
            return Err(Error::Dimension(format!("no edge ({u}, {v})")));
        }
        let relabel = |w: usize| {
            let w = if w == v { u } else { w };
            if w > v {
                w - 1
            } else {
                w
            }
        };
        let mut boundary: Vec<usize> = Vec::new();
        for &b in &self.boundary {
            let nb = relabel(b);
            if !boundary.contains(&nb) {
                boundary.push(nb);
            }
        }
        let mut g = Multigraph::new(self.vertex_count - 1, boundary)?;
        for (a, b, m) in self.edges() {
            let (a, b) = (relabel(a), relabel(b));
            if a != b {
                g.add_edge(a, b, m)?;
            }
        }
        Ok(g)
    }

    /// One-point union: vertex `at_other` of `other` is glued onto vertex
    /// `at_self` of `self`. The result keeps the boundary of `self`.
    pub fn wedge(&self, other: &Multigraph, at_self: usize, at_other: usize) -> Result<Multigraph> {
        if at_self >= self.vertex_count || at_other >= other.vertex_count {
            return Err(Error::Dimension("wedge point out of range".into()));
        }
        let n = self.vertex_count + other.vertex_count - 1;
        let map = |w: usize| {
            if w == at_other {
                at_self
            } else if w < at_other {
                self.vertex_count + w
            } else {
                self.vertex_count + w - 1
            }
        };
        let mut g = Multigraph::new(n, self.boundary.clone())?;
        g.edges = self.edges.clone();
        for (a, b, m) in other.edges() {
            g.add_edge(map(a), map(b), m)?;
        }
        Ok(g)
    }

    pub fn to_json(&self) -> GraphJson {
        GraphJson {
            vertex_count: self.vertex_count,
            boundary: self.boundary.clone(),
            edges: self.edges().map(|(u, v, m)| [u as u64, v as u64, m]).collect(),
        }
    }

    pub fn from_json(j: &GraphJson) -> Result<Self> {
        let mut g = Multigraph::new(j.vertex_count, j.boundary.clone())?;
        for &[u, v, m] in &j.edges {
            if m == 0 {
                return Err(Error::MalformedSchema(format!("edge ({u}, {v}) has multiplicity 0")));
            }
            g.add_edge(u as usize, v as usize, m)?;
        }
        Ok(g)
    }

    pub fn to_level_json(&self, level: usize) -> LevelGraphJson {
        let GraphJson { vertex_count, boundary, edges } = self.to_json();
        LevelGraphJson { vertex_count, boundary, edges, level }
    }

    /// Graphviz rendering; boundary vertices are drawn as boxes and parallel
    /// edges carry their multiplicity as a label.
    pub fn to_dot(&self, name: &str) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "graph \"{}\" {{", name.replace('"', "'"));
        for (i, b) in self.boundary.iter().enumerate() {
            let _ = writeln!(s, "  {b} [shape=box, label=\"{b} (x{i})\"];");
        }
        for (u, v, m) in self.edges() {
            if m == 1 {
                let _ = writeln!(s, "  {u} -- {v};");
            } else {
                let _ = writeln!(s, "  {u} -- {v} [label=\"{m}\"];");
            }
        }
        s.push_str("}\n");
        s
    }
}
