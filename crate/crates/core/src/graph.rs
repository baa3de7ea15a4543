//! Bipartite graphs carrying the blockade constraint.

use std::collections::HashSet;
use std::fmt;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Side of the bipartition a vertex belongs to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Partition {
    A,
    B,
}

impl Partition {
    pub fn other(self) -> Self {
        match self {
            Partition::A => Partition::B,
            Partition::B => Partition::A,
        }
    }
}

/// Which constructor produced a graph.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum GraphKind {
    CompleteBipartite { side: usize },
    Ring { n: usize },
    Torus { rows: usize, cols: usize },
    Custom,
}

impl fmt::Display for GraphKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GraphKind::CompleteBipartite { side } => write!(f, "cbg(side={side})"),
            GraphKind::Ring { n } => write!(f, "ring(n={n})"),
            GraphKind::Torus { rows, cols } => write!(f, "torus({rows}x{cols})"),
            GraphKind::Custom => write!(f, "custom"),
        }
    }
}

/// Undirected bipartite graph with A/B labels.
///
/// Edges are stored normalised as `(min, max)` and sorted; vertex numbering
/// follows the constructor conventions (A first for the complete bipartite
/// graph, sequential around the ring, row-major on the torus).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BipartiteGraph {
    n_vertices: usize,
    edges: Vec<(usize, usize)>,
    partition: Vec<Partition>,
    kind: GraphKind,
}

impl BipartiteGraph {
    /// Complete bipartite graph with `side` vertices in each partition.
    pub fn complete_bipartite(side: usize) -> Result<Self> {
        if side == 0 {
            return Err(Error::SizeConstraint("complete bipartite side must be >= 1".into()));
        }
        let n = 2 * side;
        let partition = (0..n).map(|v| if v < side { Partition::A } else { Partition::B }).collect();
        let mut edges = Vec::with_capacity(side * side);
        for a in 0..side {
            for b in side..n {
                edges.push((a, b));
            }
        }
        Ok(Self { n_vertices: n, edges, partition, kind: GraphKind::CompleteBipartite { side } })
    }

    /// Periodic chain of `n` sites; even sites belong to A.
    pub fn ring(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::SizeConstraint("ring length must be positive".into()));
        }
        if !n.is_multiple_of(2) {
            return Err(Error::SizeConstraint(format!("ring length must be even, got {n}")));
        }
        if n < 4 {
            // n = 2 would double the single bond
            return Err(Error::SizeConstraint(format!("ring length must be >= 4, got {n}")));
        }
        let partition = (0..n).map(|v| if v % 2 == 0 { Partition::A } else { Partition::B }).collect();
        let mut edges: Vec<(usize, usize)> = (0..n).map(|i| normalise(i, (i + 1) % n)).collect();
        edges.sort_unstable();
        Ok(Self { n_vertices: n, edges, partition, kind: GraphKind::Ring { n } })
    }

    /// Periodic square lattice, row-major numbering, checkerboard partition.
    pub fn torus(rows: usize, cols: usize) -> Result<Self> {
        for (name, d) in [("rows", rows), ("cols", cols)] {
            if d < 4 || d % 2 != 0 {
                return Err(Error::SizeConstraint(format!("torus {name} must be even and >= 4, got {d}")));
            }
        }
        let n = rows * cols;
        let idx = |r: usize, c: usize| r * cols + c;
        let partition =
            (0..n).map(|v| if (v / cols + v % cols).is_multiple_of(2) { Partition::A } else { Partition::B }).collect();
        let mut edges = Vec::with_capacity(2 * n);
        for r in 0..rows {
            for c in 0..cols {
                edges.push(normalise(idx(r, c), idx(r, (c + 1) % cols)));
                edges.push(normalise(idx(r, c), idx((r + 1) % rows, c)));
            }
        }
        edges.sort_unstable();
        Ok(Self { n_vertices: n, edges, partition, kind: GraphKind::Torus { rows, cols } })
    }

    /// Graph from an explicit edge list and per-vertex labels.
    pub fn custom(partition: Vec<Partition>, edges: Vec<(usize, usize)>) -> Result<Self> {
        let n = partition.len();
        if n == 0 {
            return Err(Error::SizeConstraint("graph must have at least one vertex".into()));
        }
        if let Some(&(u, v)) = edges.iter().find(|&&(u, v)| u >= n || v >= n) {
            return Err(Error::InvalidGraph { u, v, reason: "vertex index out of range".into() });
        }
        validate_bipartite(&edges, &partition)?;
        let mut edges: Vec<_> = edges.into_iter().map(|(u, v)| normalise(u, v)).collect();
        edges.sort_unstable();
        Ok(Self { n_vertices: n, edges, partition, kind: GraphKind::Custom })
    }

    /// Reads a custom graph: `u v` edge lines, one `A: ...` partition line,
    /// `#` comments. Vertices not listed under A are assigned to B.
    pub fn from_edge_list_str(text: &str) -> Result<Self> {
        let mut edges = Vec::new();
        let mut a_vertices: Option<Vec<usize>> = None;
        let mut max_vertex = None::<usize>;
        let parse = |tok: &str, lineno: usize| {
            tok.parse::<usize>()
                .map_err(|_| Error::Argument(format!("line {lineno}: expected vertex index, got '{tok}'")))
        };
        for (lineno, raw) in text.lines().enumerate().map(|(i, l)| (i + 1, l)) {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            if let Some(rest) = line.strip_prefix("A:") {
                if a_vertices.is_some() {
                    return Err(Error::Argument(format!("line {lineno}: duplicate partition line")));
                }
                let vs = rest.split_whitespace().map(|t| parse(t, lineno)).collect::<Result<Vec<_>>>()?;
                for &v in &vs {
                    max_vertex = Some(max_vertex.map_or(v, |m| m.max(v)));
                }
                a_vertices = Some(vs);
                continue;
            }
            let toks: Vec<&str> = line.split_whitespace().collect();
            if toks.len() != 2 {
                return Err(Error::Argument(format!("line {lineno}: expected 'u v' edge, got '{line}'")));
            }
            let (u, v) = (parse(toks[0], lineno)?, parse(toks[1], lineno)?);
            max_vertex = Some(max_vertex.map_or(u.max(v), |m| m.max(u).max(v)));
            edges.push((u, v));
        }
        let a_vertices = a_vertices.ok_or_else(|| Error::Argument("missing partition line 'A: ...'".into()))?;
        let n = max_vertex.map_or(0, |m| m + 1);
        let mut partition = vec![Partition::B; n];
        for v in a_vertices {
            partition[v] = Partition::A;
        }
        Self::custom(partition, edges)
    }

    pub fn from_edge_list_file(path: impl AsRef<Path>) -> Result<Self> {
        Self::from_edge_list_str(&std::fs::read_to_string(path)?)
    }

    pub fn n_vertices(&self) -> usize {
        self.n_vertices
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn partition(&self) -> &[Partition] {
        &self.partition
    }

    pub fn label(&self, v: usize) -> Partition {
        self.partition[v]
    }

    pub fn kind(&self) -> GraphKind {
        self.kind
    }

    /// Vertices of one side, ascending.
    pub fn vertices_in(&self, side: Partition) -> Vec<usize> {
        (0..self.n_vertices).filter(|&v| self.partition[v] == side).collect()
    }

    /// Sorted neighbour lists.
    pub fn neighbors(&self) -> Vec<Vec<usize>> {
        let mut nbrs = vec![Vec::new(); self.n_vertices];
        for &(u, v) in &self.edges {
            nbrs[u].push(v);
            nbrs[v].push(u);
        }
        for list in &mut nbrs {
            list.sort_unstable();
        }
        nbrs
    }

    pub fn degree(&self, v: usize) -> usize {
        self.edges.iter().filter(|&&(a, b)| a == v || b == v).count()
    }

    /// Coordination number used by the lattice squeezing convention.
    pub fn coordination(&self) -> Option<usize> {
        match self.kind {
            GraphKind::Ring { .. } => Some(2),
            GraphKind::Torus { .. } => Some(4),
            GraphKind::CompleteBipartite { side } => Some(side),
            GraphKind::Custom => None,
        }
    }
}

fn normalise(u: usize, v: usize) -> (usize, usize) {
    if u <= v {
        (u, v)
    } else {
        (v, u)
    }
}

/// Checks that every edge crosses the partition, with no self-loops or
/// duplicates. Reports the first violating edge.
pub fn validate_bipartite(edges: &[(usize, usize)], partition: &[Partition]) -> Result<()> {
    let mut seen = HashSet::with_capacity(edges.len());
    for &(u, v) in edges {
        if u == v {
            return Err(Error::InvalidGraph { u, v, reason: "self-loop".into() });
        }
        let (Some(pu), Some(pv)) = (partition.get(u), partition.get(v)) else {
            return Err(Error::InvalidGraph { u, v, reason: "vertex has no partition label".into() });
        };
        if pu == pv {
            return Err(Error::InvalidGraph { u, v, reason: "edge within one partition".into() });
        }
        if !seen.insert(normalise(u, v)) {
            return Err(Error::InvalidGraph { u, v, reason: "duplicate edge".into() });
        }
    }
    Ok(())
}
