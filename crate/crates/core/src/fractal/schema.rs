//! Substitution schemas: the first-level graph plus the maps that place each
//! cell's copy of the boundary inside it.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use super::graph::{GraphJson, Multigraph};
use crate::error::{Error, Result};

/// Declarative description of a self-similar structure.
///
/// `cell_maps[i][x]` is the first-level vertex onto which boundary point `x`
/// of cell `i` is placed. Boundary vertices of `v1` come first in its
/// numbering and appear in `v1.boundary()` in boundary-index order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubstitutionSchema {
    name: String,
    num_cells: usize,
    boundary_size: usize,
    v1: Multigraph,
    cell_maps: Vec<Vec<usize>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SchemaJson {
    pub name: String,
    pub num_cells: usize,
    pub boundary_size: usize,
    pub v1: GraphJson,
    pub cell_maps: Vec<Vec<usize>>,
}

impl SubstitutionSchema {
    /// Builds a schema after checking that it is structurally well formed:
    /// sizes, id ranges and injectivity of every cell map.
    pub fn new(name: &str, num_cells: usize, boundary_size: usize, v1: Multigraph, cell_maps: Vec<Vec<usize>>) -> Result<Self> {
        if num_cells < 2 {
            return Err(Error::MalformedSchema(format!("num_cells = {num_cells}, need at least 2")));
        }
        if boundary_size < 2 {
            return Err(Error::MalformedSchema(format!("boundary_size = {boundary_size}, need at least 2")));
        }
        if v1.boundary().len() != boundary_size {
            return Err(Error::MalformedSchema(format!(
                "v1 boundary has {} vertices, expected {boundary_size}",
                v1.boundary().len()
            )));
        }
        if cell_maps.len() != num_cells {
            return Err(Error::MalformedSchema(format!(
                "{} cell maps given, expected {num_cells}",
                cell_maps.len()
            )));
        }
        for (i, map) in cell_maps.iter().enumerate() {
            if map.len() != boundary_size {
                return Err(Error::MalformedSchema(format!("cell {i} maps {} points, expected {boundary_size}", map.len())));
            }
            let mut seen = BTreeSet::new();
            for &w in map {
                if w >= v1.vertex_count() {
                    return Err(Error::MalformedSchema(format!("cell {i} maps onto vertex {w}, out of range")));
                }
                if !seen.insert(w) {
                    return Err(Error::MalformedSchema(format!("cell {i} map is not injective")));
                }
            }
        }
        Ok(SubstitutionSchema { name: name.to_string(), num_cells, boundary_size, v1, cell_maps })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    /// Number of cells, the branching factor of the construction.
    pub fn num_cells(&self) -> usize {
        self.num_cells
    }

    /// Number of boundary points, `|V_0|`.
    pub fn boundary_size(&self) -> usize {
        self.boundary_size
    }

    pub fn v1(&self) -> &Multigraph {
        &self.v1
    }

    pub fn cell_maps(&self) -> &[Vec<usize>] {
        &self.cell_maps
    }

    /// For each boundary index `x`, the cells `i` with `cell_maps[i][x]`
    /// equal to boundary vertex `x` of `v1`.
    pub fn fixed_points(&self) -> Vec<Vec<usize>> {
        (0..self.boundary_size)
            .map(|x| {
                let b = self.v1.boundary()[x];
                (0..self.num_cells).filter(|&i| self.cell_maps[i][x] == b).collect()
            })
            .collect()
    }

    /// Vertex sets of the cells inside `v1`.
    pub fn cell_sets(&self) -> Vec<BTreeSet<usize>> {
        self.cell_maps.iter().map(|m| m.iter().copied().collect()).collect()
    }

    pub fn to_json(&self) -> SchemaJson {
        SchemaJson {
            name: self.name.clone(),
            num_cells: self.num_cells,
            boundary_size: self.boundary_size,
            v1: self.v1.to_json(),
            cell_maps: self.cell_maps.clone(),
        }
    }

    pub fn from_json(j: &SchemaJson) -> Result<Self> {
        let v1 = Multigraph::from_json(&j.v1)?;
        SubstitutionSchema::new(&j.name, j.num_cells, j.boundary_size, v1, j.cell_maps.clone())
    }

    pub fn from_json_str(s: &str) -> Result<Self> {
        let j: SchemaJson = serde_json::from_str(s)?;
        Self::from_json(&j)
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string_pretty(&self.to_json()).expect("schema serializes")
    }
}

/// Outcome of the structural checks on a schema.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub cell_cover: bool,
    pub fixed_points: bool,
    pub connected: bool,
    pub full_symmetry: bool,
    pub boundary_first: bool,
    pub messages: Vec<String>,
}

impl ValidationReport {
    /// All checks that make the schema a valid self-similar structure.
    pub fn is_valid(&self) -> bool {
        self.cell_cover && self.fixed_points && self.connected
    }

    /// Spectral decimation additionally needs full symmetry and the
    /// boundary-first vertex numbering.
    pub fn decimation_eligible(&self) -> bool {
        self.is_valid() && self.full_symmetry && self.boundary_first
    }
}

/// Runs the cell-cover, fixed-point, connectivity and full-symmetry checks.
pub fn validate_schema(s: &SubstitutionSchema) -> ValidationReport {
    let mut messages = Vec::new();

    let mut glued = Multigraph::new(s.v1.vertex_count(), s.v1.boundary().to_vec()).unwrap();
    for map in &s.cell_maps {
        for a in 0..map.len() {
            for b in a + 1..map.len() {
                glued.add_edge(map[a], map[b], 1).unwrap();
            }
        }
    }
    let cell_cover = glued == s.v1;
    if !cell_cover {
        messages.push("edge multiset of v1 differs from the union of the cells' complete graphs".into());
    }

    let fixed = s.fixed_points();
    let fixed_points = fixed.iter().all(|f| !f.is_empty());
    for (x, f) in fixed.iter().enumerate() {
        if f.is_empty() {
            messages.push(format!("boundary vertex {x} is not the image of boundary point {x} in any cell"));
        }
    }

    let connected = s.v1.is_connected();
    if !connected {
        messages.push("v1 is not connected".into());
    }

    let boundary_first = s.v1.boundary().iter().enumerate().all(|(i, &b)| i == b);
    if !boundary_first {
        messages.push("boundary vertices are not numbered first in order".into());
    }

    let full_symmetry = cell_cover && connected && check_full_symmetry(s, &mut messages);
    ValidationReport { cell_cover, fixed_points, connected, full_symmetry, boundary_first, messages }
}

/// Every permutation of the boundary must extend to an automorphism of `v1`
/// that permutes the cells. Checking adjacent transpositions suffices since
/// they generate the symmetric group.
fn check_full_symmetry(s: &SubstitutionSchema, messages: &mut Vec<String>) -> bool {
    let n0 = s.boundary_size;
    let mut ok = true;
    for x in 0..n0 - 1 {
        let mut perm: Vec<usize> = (0..n0).collect();
        perm.swap(x, x + 1);
        if find_extension(s, &perm).is_none() {
            messages.push(format!("swapping boundary points {x} and {} does not extend to a symmetry", x + 1));
            ok = false;
        }
    }
    ok
}

/// Searches for an automorphism of `v1` that sends boundary vertex `x` to
/// boundary vertex `perm[x]` and maps cell vertex sets onto cell vertex sets.
pub fn find_extension(s: &SubstitutionSchema, perm: &[usize]) -> Option<Vec<usize>> {
    let g = &s.v1;
    let n = g.vertex_count();
    let deg = g.degrees();
    let mut mult = vec![vec![0u64; n]; n];
    for (u, v, m) in g.edges() {
        mult[u][v] = m;
        mult[v][u] = m;
    }
    let cells: BTreeSet<BTreeSet<usize>> = s.cell_sets().into_iter().collect();
    let mut map = vec![usize::MAX; n];
    let mut used = vec![false; n];
    for (x, &b) in g.boundary().iter().enumerate() {
        let target = g.boundary()[perm[x]];
        if deg[b] != deg[target] {
            return None;
        }
        map[b] = target;
        used[target] = true;
    }
    for &b in g.boundary() {
        for &c in g.boundary() {
            if mult[b][c] != mult[map[b]][map[c]] {
                return None;
            }
        }
    }
    // assign the remaining vertices in breadth-first order from the boundary
    let adj = g.adjacency();
    let mut order = Vec::new();
    let mut queued = vec![false; n];
    let mut queue: std::collections::VecDeque<usize> = g.boundary().iter().copied().collect();
    for &b in g.boundary() {
        queued[b] = true;
    }
    while let Some(u) = queue.pop_front() {
        if map[u] == usize::MAX {
            order.push(u);
        }
        for &(v, _) in &adj[u] {
            if !queued[v] {
                queued[v] = true;
                queue.push_back(v);
            }
        }
    }
    order.extend((0..n).filter(|&v| !queued[v]));

    fn search(
        k: usize,
        order: &[usize],
        map: &mut Vec<usize>,
        used: &mut Vec<bool>,
        deg: &[u64],
        mult: &[Vec<u64>],
        accept: &dyn Fn(&[usize]) -> bool,
    ) -> bool {
        if k == order.len() {
            return accept(map);
        }
        let u = order[k];
        for t in 0..map.len() {
            if used[t] || deg[t] != deg[u] {
                continue;
            }
            let consistent = (0..map.len()).all(|w| map[w] == usize::MAX || mult[u][w] == mult[t][map[w]]);
            if !consistent {
                continue;
            }
            map[u] = t;
            used[t] = true;
            if search(k + 1, order, map, used, deg, mult, accept) {
                return true;
            }
            map[u] = usize::MAX;
            used[t] = false;
        }
        false
    }

    let accept = |m: &[usize]| {
        cells.iter().all(|c| {
            let image: BTreeSet<usize> = c.iter().map(|&v| m[v]).collect();
            cells.contains(&image)
        })
    };
    if search(0, &order, &mut map, &mut used, &deg, &mult, &accept) {
        Some(map)
    } else {
        None
    }
}

fn schema_from_cells(name: &str, n0: usize, vertex_count: usize, cells: Vec<Vec<usize>>) -> SubstitutionSchema {
    let mut v1 = Multigraph::new(vertex_count, (0..n0).collect()).unwrap();
    for map in &cells {
        for a in 0..n0 {
            for b in a + 1..n0 {
                v1.add_edge(map[a], map[b], 1).unwrap();
            }
        }
    }
    SubstitutionSchema::new(name, cells.len(), n0, v1, cells).unwrap()
}

/// Sierpinski gasket: three triangles glued at the edge midpoints
/// (3 = m01, 4 = m12, 5 = m02).
pub fn sierpinski() -> SubstitutionSchema {
    schema_from_cells("sierpinski", 3, 6, vec![vec![0, 3, 5], vec![3, 1, 4], vec![5, 4, 2]])
}

/// Barycentric subdivision of a triangle into six cells, each spanned by a
/// corner, an adjacent edge midpoint and the centroid. Corner-centroid and
/// midpoint-centroid edges are doubled; the centroid has degree 12.
pub fn nonpcf() -> SubstitutionSchema {
    // corners 0, 1, 2; midpoints 3 = m01, 4 = m12, 5 = m02; centroid 6
    let mid = |i: usize, j: usize| match (i.min(j), i.max(j)) {
        (0, 1) => 3,
        (1, 2) => 4,
        _ => 5,
    };
    let mut cells = Vec::new();
    for i in 0..3 {
        for j in 0..3 {
            if i == j {
                continue;
            }
            let k = 3 - i - j;
            let mut map = vec![0; 3];
            map[i] = i;
            map[j] = mid(i, j);
            map[k] = 6;
            cells.push(map);
        }
    }
    schema_from_cells("nonpcf", 3, 7, cells)
}

/// Diamond fractal: a 4-cycle, two parallel paths of length two.
pub fn diamond() -> SubstitutionSchema {
    schema_from_cells("diamond", 2, 4, vec![vec![0, 2], vec![2, 1], vec![0, 3], vec![3, 1]])
}

/// Hexagasket: a ring of six triangles. Triangle `t` has outer corner
/// `o_t` and shares `s_{t-1}`, `s_t` with its neighbours; the outer corners
/// of triangles 0, 2, 4 form the boundary.
pub fn hexagasket() -> SubstitutionSchema {
    // outer corners: t0 = 0, t2 = 1, t4 = 2, t1 = 3, t3 = 4, t5 = 5; s_t = 6 + t
    let cells = vec![
        vec![0, 11, 6],
        vec![3, 6, 7],
        vec![7, 1, 8],
        vec![4, 8, 9],
        vec![9, 10, 2],
        vec![5, 10, 11],
    ];
    schema_from_cells("hexagasket", 3, 12, cells)
}

pub const BUILTIN_NAMES: [&str; 4] = ["sierpinski", "nonpcf", "diamond", "hexagasket"];

pub fn builtin_schemas() -> Vec<SubstitutionSchema> {
    vec![sierpinski(), nonpcf(), diamond(), hexagasket()]
}

pub fn builtin(name: &str) -> Result<SubstitutionSchema> {
    match name {
        "sierpinski" => Ok(sierpinski()),
        "nonpcf" => Ok(nonpcf()),
        "diamond" => Ok(diamond()),
        "hexagasket" => Ok(hexagasket()),
        other => Err(Error::UnknownSchema(other.to_string())),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builtins_validate() {
        for s in builtin_schemas() {
            let r = validate_schema(&s);
            assert!(r.decimation_eligible(), "{}: {:?}", s.name(), r.messages);
        }
    }

    #[test]
    fn builtin_shapes() {
        let sg = sierpinski();
        assert_eq!((sg.num_cells(), sg.boundary_size(), sg.v1().edge_count()), (3, 3, 9));
        let d = diamond();
        assert_eq!((d.num_cells(), d.boundary_size(), d.v1().vertex_count()), (4, 2, 4));
        assert_eq!(d.v1().degrees(), vec![2, 2, 2, 2]);
        let h = hexagasket();
        assert_eq!((h.num_cells(), h.v1().vertex_count(), h.v1().edge_count()), (6, 12, 18));
        let np = nonpcf();
        assert_eq!(np.v1().degrees(), vec![4, 4, 4, 4, 4, 4, 12]);
        assert_eq!(np.num_cells(), 6);
    }

    #[test]
    fn asymmetric_boundary_fails_symmetry() {
        let s = schema_from_cells("lopsided", 3, 7, vec![vec![0, 3, 4], vec![0, 1, 5], vec![3, 6, 2]]);
        let r = validate_schema(&s);
        assert!(r.cell_cover && r.fixed_points && r.connected);
        assert!(!r.full_symmetry);
        assert!(!r.decimation_eligible());
    }

    #[test]
    fn broken_cover_is_reported() {
        let mut v1 = sierpinski().v1().clone();
        v1.add_edge(0, 4, 1).unwrap();
        let s = SubstitutionSchema::new("bad", 3, 3, v1, sierpinski().cell_maps().to_vec()).unwrap();
        let r = validate_schema(&s);
        assert!(!r.cell_cover);
    }

    #[test]
    fn malformed_maps_are_rejected() {
        let v1 = sierpinski().v1().clone();
        let e = SubstitutionSchema::new("x", 3, 3, v1.clone(), vec![vec![0, 0, 5], vec![3, 1, 4], vec![5, 4, 2]]);
        assert!(matches!(e, Err(Error::MalformedSchema(_))));
        let e = SubstitutionSchema::new("x", 3, 3, v1, vec![vec![0, 9, 5], vec![3, 1, 4], vec![5, 4, 2]]);
        assert!(matches!(e, Err(Error::MalformedSchema(_))));
    }

    #[test]
    fn json_field_names_and_roundtrip() {
        let s = diamond();
        let text = serde_json::to_string(&s.to_json()).unwrap();
        assert_eq!(
            text,
            "{\"name\":\"diamond\",\"num_cells\":4,\"boundary_size\":2,\"v1\":{\"vertex_count\":4,\"boundary\":[0,1],\
             \"edges\":[[0,2,1],[0,3,1],[1,2,1],[1,3,1]]},\"cell_maps\":[[0,2],[2,1],[0,3],[3,1]]}"
        );
        assert_eq!(SubstitutionSchema::from_json_str(&text).unwrap(), s);
        assert!(matches!(builtin("koch"), Err(Error::UnknownSchema(_))));
    }
}
