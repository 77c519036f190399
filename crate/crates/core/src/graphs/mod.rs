//! Simple undirected graphs on at most 64 vertices, stored as adjacency
//! bitsets.

mod canon;
mod enumerate;
mod graph6;
mod orbit;
mod triangle;

pub use canon::{canonical_form, CanonicalForm};
pub use enumerate::{connected_graphs, nonisomorphic_graphs};
pub use graph6::{format_graph6, parse_graph6};
pub use orbit::{lc_orbit, walk_lc_orbit, LcOrbit, LcWalk, OrbitMember, DEFAULT_ORBIT_CAP};
pub use triangle::{triangle_decomposition, TriangleCase, TriangleDecomposition};

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};

pub const MAX_VERTICES: usize = 64;

/// Iterate the set bits of a mask in increasing order.
pub fn bits(mut mask: u64) -> impl Iterator<Item = usize> {
    core::iter::from_fn(move || {
        if mask == 0 {
            None
        } else {
            let b = mask.trailing_zeros() as usize;
            mask &= mask - 1;
            Some(b)
        }
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Graph {
    n: usize,
    adj: Vec<u64>,
}

impl Graph {
    pub fn empty(n: usize) -> Result<Self> {
        if n > MAX_VERTICES {
            return Err(Error::TooManyQubits { n, max: MAX_VERTICES });
        }
        Ok(Self { n, adj: vec![0; n] })
    }

    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let mut g = Self::empty(n)?;
        for &(u, v) in edges {
            g.add_edge(u, v)?;
        }
        Ok(g)
    }

    /// Build from adjacency rows; the rows must be symmetric and loop free.
    pub fn from_adjacency(adj: Vec<u64>) -> Result<Self> {
        let n = adj.len();
        let g = Self { n, adj };
        Self::empty(n)?;
        let full = vertex_mask(n);
        for v in 0..n {
            if g.adj[v] & !full != 0 {
                return Err(Error::VertexOutOfRange { vertex: 64 - g.adj[v].leading_zeros() as usize - 1, n });
            }
            if g.adj[v] >> v & 1 == 1 {
                return Err(Error::SelfLoop(v));
            }
            for u in bits(g.adj[v]) {
                if g.adj[u] >> v & 1 == 0 {
                    return Err(Error::Graph6(alloc::format!("asymmetric adjacency between {u} and {v}")));
                }
            }
        }
        Ok(g)
    }

    pub fn complete(n: usize) -> Result<Self> {
        let mut g = Self::empty(n)?;
        let full = vertex_mask(n);
        for v in 0..n {
            g.adj[v] = full & !(1 << v);
        }
        Ok(g)
    }

    pub fn cycle(n: usize) -> Result<Self> {
        let edges: Vec<_> = (0..n).map(|i| (i, (i + 1) % n)).collect();
        Self::from_edges(n, &edges)
    }

    pub fn path(n: usize) -> Result<Self> {
        let edges: Vec<_> = (1..n).map(|i| (i - 1, i)).collect();
        Self::from_edges(n, &edges)
    }

    /// `rows x cols` square lattice, vertex `r * cols + c`.
    pub fn grid(rows: usize, cols: usize) -> Result<Self> {
        let mut g = Self::empty(rows * cols)?;
        for r in 0..rows {
            for c in 0..cols {
                let v = r * cols + c;
                if c + 1 < cols {
                    g.add_edge(v, v + 1)?;
                }
                if r + 1 < rows {
                    g.add_edge(v, v + cols)?;
                }
            }
        }
        Ok(g)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn adjacency(&self) -> &[u64] {
        &self.adj
    }

    pub fn all_vertices(&self) -> u64 {
        vertex_mask(self.n)
    }

    fn check_vertex(&self, v: usize) -> Result<()> {
        if v >= self.n {
            return Err(Error::VertexOutOfRange { vertex: v, n: self.n });
        }
        Ok(())
    }

    pub fn add_edge(&mut self, u: usize, v: usize) -> Result<()> {
        self.check_vertex(u)?;
        self.check_vertex(v)?;
        if u == v {
            return Err(Error::SelfLoop(u));
        }
        self.adj[u] |= 1 << v;
        self.adj[v] |= 1 << u;
        Ok(())
    }

    pub fn remove_edge(&mut self, u: usize, v: usize) -> Result<()> {
        self.check_vertex(u)?;
        self.check_vertex(v)?;
        self.adj[u] &= !(1 << v);
        self.adj[v] &= !(1 << u);
        Ok(())
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u < self.n && v < self.n && self.adj[u] >> v & 1 == 1
    }

    /// Neighbourhood of `v` as a mask.
    pub fn neighbors(&self, v: usize) -> u64 {
        self.adj[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].count_ones() as usize
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(|r| r.count_ones() as usize).sum::<usize>() / 2
    }

    /// Edges `(u, v)` with `u < v`, sorted.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for u in 0..self.n {
            for v in bits(self.adj[u] >> (u + 1)) {
                out.push((u, u + 1 + v));
            }
        }
        out
    }

    pub fn complement(&self) -> Self {
        let full = vertex_mask(self.n);
        let adj = (0..self.n).map(|v| !self.adj[v] & full & !(1 << v)).collect();
        Self { n: self.n, adj }
    }

    /// Induced subgraph on `vertices`, relabelled `0..vertices.len()` in the
    /// given order.
    pub fn induced(&self, vertices: &[usize]) -> Result<Self> {
        let mut g = Self::empty(vertices.len())?;
        for (i, &u) in vertices.iter().enumerate() {
            self.check_vertex(u)?;
            for (j, &v) in vertices.iter().enumerate().skip(i + 1) {
                if u == v {
                    return Err(Error::WrongVertexSet { expected: vertices.len() });
                }
                if self.has_edge(u, v) {
                    g.add_edge(i, j)?;
                }
            }
        }
        Ok(g)
    }

    /// Relabel so that old vertex `v` becomes `perm[v]`.
    pub fn permuted(&self, perm: &[usize]) -> Self {
        let mut adj = vec![0u64; self.n];
        for u in 0..self.n {
            for v in bits(self.adj[u]) {
                adj[perm[u]] |= 1 << perm[v];
            }
        }
        Self { n: self.n, adj }
    }

    /// Connected components as vertex masks, ordered by smallest vertex.
    pub fn components(&self) -> Vec<u64> {
        let mut seen = 0u64;
        let mut out = Vec::new();
        for start in 0..self.n {
            if seen >> start & 1 == 1 {
                continue;
            }
            let mut comp = 1u64 << start;
            let mut frontier = comp;
            while frontier != 0 {
                let mut next = 0u64;
                for v in bits(frontier) {
                    next |= self.adj[v];
                }
                frontier = next & !comp;
                comp |= next;
            }
            seen |= comp;
            out.push(comp);
        }
        out
    }

    pub fn is_connected(&self) -> bool {
        self.n <= 1 || self.components().len() == 1
    }

    /// Complement the subgraph induced by the neighbourhood of `v`.
    pub fn local_complement(&self, v: usize) -> Result<Self> {
        self.check_vertex(v)?;
        let mut g = self.clone();
        g.local_complement_in_place(v);
        Ok(g)
    }

    pub(crate) fn local_complement_in_place(&mut self, v: usize) {
        let nb = self.adj[v];
        for u in bits(nb) {
            self.adj[u] ^= nb & !(1 << u);
        }
    }

    /// Apply local complementations in order.
    pub fn apply_lc_sequence(&self, seq: &[usize]) -> Result<Self> {
        let mut g = self.clone();
        for &v in seq {
            g.check_vertex(v)?;
            g.local_complement_in_place(v);
        }
        Ok(g)
    }

    /// All triangles `(a, b, c)` with `a < b < c`, lexicographic.
    pub fn triangles(&self) -> Vec<(usize, usize, usize)> {
        let mut out = Vec::new();
        for a in 0..self.n {
            for b in bits(self.adj[a] >> (a + 1)).map(|x| x + a + 1) {
                for c in bits(self.adj[a] & self.adj[b] >> (b + 1) << (b + 1)) {
                    out.push((a, b, c));
                }
            }
        }
        out
    }

    pub fn min_degree(&self) -> Option<usize> {
        (0..self.n).map(|v| self.degree(v)).min()
    }
}

pub(crate) fn vertex_mask(n: usize) -> u64 {
    if n >= 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

/// `true` iff the subgraph induced by the four `vertices` is a path on four
/// vertices.
pub fn is_path4(g: &Graph, vertices: &[usize]) -> Result<bool> {
    if vertices.len() != 4 {
        return Err(Error::WrongVertexSet { expected: 4 });
    }
    let h = g.induced(vertices)?;
    if h.edge_count() != 3 || !h.is_connected() {
        return Ok(false);
    }
    let mut degs: Vec<usize> = (0..4).map(|v| h.degree(v)).collect();
    degs.sort_unstable();
    Ok(degs == [1, 1, 2, 2])
}

#[cfg(test)]
mod tests {
    use super::*;

    fn k3() -> Graph {
        Graph::complete(3).unwrap()
    }

    #[test]
    fn lc_on_triangle() {
        // vertices 1,2,3 of the text are 0,1,2 here
        let g = k3().local_complement(0).unwrap();
        assert_eq!(g.edges(), [(0, 1), (0, 2)]);
        assert_eq!(g.local_complement(0).unwrap(), k3());
    }

    #[test]
    fn lc_on_square_adds_diagonal() {
        let c4 = Graph::cycle(4).unwrap();
        let g = c4.local_complement(0).unwrap();
        assert!(g.has_edge(1, 3));
        assert_eq!(g.edge_count(), 5);
        assert!(c4.local_complement(4).is_err());
    }

    #[test]
    fn path4_detection() {
        let p4 = Graph::path(4).unwrap();
        assert!(is_path4(&p4, &[0, 1, 2, 3]).unwrap());
        assert!(is_path4(&p4.complement(), &[0, 1, 2, 3]).unwrap());
        assert!(!is_path4(&Graph::cycle(4).unwrap(), &[0, 1, 2, 3]).unwrap());
        let star = Graph::from_edges(4, &[(0, 1), (0, 2), (0, 3)]).unwrap();
        assert!(!is_path4(&star, &[0, 1, 2, 3]).unwrap());
        assert!(is_path4(&p4, &[0, 1, 2]).is_err());
    }

    #[test]
    fn components_and_triangles() {
        let g = Graph::from_edges(6, &[(0, 1), (1, 2), (0, 2), (3, 4)]).unwrap();
        assert_eq!(g.components(), [0b000111, 0b011000, 0b100000]);
        assert!(!g.is_connected());
        assert_eq!(g.triangles(), [(0, 1, 2)]);
        assert_eq!(Graph::complete(4).unwrap().triangles().len(), 4);
    }

    #[test]
    fn rejects_loops_and_range() {
        assert!(Graph::from_edges(3, &[(1, 1)]).is_err());
        assert!(Graph::from_edges(3, &[(0, 3)]).is_err());
        assert!(Graph::empty(65).is_err());
        assert!(Graph::from_adjacency(alloc::vec![0b10, 0]).is_err());
    }
}
