//! Small graph helpers shared across the crate: union-find, multigraph
//! connectivity, and topological cut-point tests.

/// Plain union-find over `0..n`.
#[derive(Clone, Debug)]
pub struct UnionFind {
    parent: Vec<u32>,
    rank: Vec<u8>,
}

impl UnionFind {
    pub fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n as u32).collect(),
            rank: vec![0; n],
        }
    }

    pub fn find(&mut self, x: usize) -> usize {
        let mut r = x as u32;
        while self.parent[r as usize] != r {
            r = self.parent[r as usize];
        }
        let mut c = x as u32;
        while self.parent[c as usize] != r {
            let next = self.parent[c as usize];
            self.parent[c as usize] = r;
            c = next;
        }
        r as usize
    }

    pub fn len(&self) -> usize {
        self.parent.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parent.is_empty()
    }

    /// Append a fresh singleton and return its index.
    pub fn push(&mut self) -> usize {
        let i = self.parent.len();
        self.parent.push(i as u32);
        self.rank.push(0);
        i
    }

    /// Whether `i` is currently its own root (no find compression).
    pub fn is_root(&self, i: usize) -> bool {
        self.parent[i] == i as u32
    }

    pub fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        let (hi, lo) = if self.rank[ra] >= self.rank[rb] {
            (ra, rb)
        } else {
            (rb, ra)
        };
        self.parent[lo] = hi as u32;
        if self.rank[hi] == self.rank[lo] {
            self.rank[hi] += 1;
        }
        true
    }

    /// Component labels in `0..k`, numbered by first appearance.
    pub fn canonical_labels(&mut self) -> (Vec<u32>, usize) {
        let n = self.parent.len();
        let mut label = vec![u32::MAX; n];
        let mut next = 0u32;
        let mut out = vec![0u32; n];
        for i in 0..n {
            let r = self.find(i);
            if label[r] == u32::MAX {
                label[r] = next;
                next += 1;
            }
            out[i] = label[r];
        }
        (out, next as usize)
    }
}

/// An undirected multigraph on vertices `0..n`. Loops and parallel edges are
/// allowed; edges are identified by their index in `edges`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MultiGraph {
    pub n: usize,
    pub edges: Vec<(u32, u32)>,
}

impl MultiGraph {
    pub fn new(n: usize) -> Self {
        MultiGraph { n, edges: Vec::new() }
    }

    pub fn add_edge(&mut self, a: usize, b: usize) -> usize {
        self.edges.push((a as u32, b as u32));
        self.edges.len() - 1
    }

    pub fn degree(&self, v: usize) -> usize {
        let v = v as u32;
        self.edges
            .iter()
            .map(|&(a, b)| (a == v) as usize + (b == v) as usize)
            .sum()
    }

    pub fn component_labels(&self) -> (Vec<u32>, usize) {
        let mut uf = UnionFind::new(self.n);
        for &(a, b) in &self.edges {
            uf.union(a as usize, b as usize);
        }
        uf.canonical_labels()
    }

    pub fn component_count(&self) -> usize {
        self.component_labels().1
    }

    pub fn is_connected(&self) -> bool {
        self.n <= 1 || self.component_count() == 1
    }

    /// Components after deleting a set of vertices together with their
    /// incident edges. Surviving vertices keep their indices; returns
    /// `(labels, count)` with deleted vertices labelled `u32::MAX`.
    pub fn components_without_vertices(&self, gone: &[bool]) -> (Vec<u32>, usize) {
        let mut uf = UnionFind::new(self.n);
        for &(a, b) in &self.edges {
            if !gone[a as usize] && !gone[b as usize] {
                uf.union(a as usize, b as usize);
            }
        }
        let mut label = vec![u32::MAX; self.n];
        let mut next = 0u32;
        for v in 0..self.n {
            if gone[v] {
                continue;
            }
            let r = uf.find(v);
            if label[r] == u32::MAX {
                label[r] = next;
                next += 1;
            }
            label[v] = label[r];
        }
        (label, next as usize)
    }

    fn connected_after_vertex_deletion(&self, v: usize) -> bool {
        let mut gone = vec![false; self.n];
        gone[v] = true;
        let (_, k) = self.components_without_vertices(&gone);
        k <= 1
    }

    fn connected_after_edge_deletion(&self, e: usize) -> bool {
        let mut uf = UnionFind::new(self.n);
        for (i, &(a, b)) in self.edges.iter().enumerate() {
            if i != e {
                uf.union(a as usize, b as usize);
            }
        }
        let (_, k) = uf.canonical_labels();
        k <= 1
    }

    /// Graph-theoretic check used by the Brady-Meier condition: connected,
    /// and still connected after deleting any single vertex or single edge.
    /// Returns the offending simplex on failure.
    pub fn connected_after_any_simplex_deletion(&self) -> Result<(), SimplexWitness> {
        if !self.is_connected() {
            return Err(SimplexWitness::AlreadyDisconnected);
        }
        for v in 0..self.n {
            if !self.connected_after_vertex_deletion(v) {
                return Err(SimplexWitness::Vertex(v));
            }
        }
        for e in 0..self.edges.len() {
            if !self.connected_after_edge_deletion(e) {
                return Err(SimplexWitness::Edge(e));
            }
        }
        Ok(())
    }

    /// Number of connected pieces of the geometric realisation minus the
    /// point `v`. Open edges incident to `v` stay attached to their other
    /// endpoint; loops at `v` each become a separate arc.
    pub fn pieces_minus_point(&self, v: usize) -> usize {
        let mut gone = vec![false; self.n];
        gone[v] = true;
        let (_, k) = self.components_without_vertices(&gone);
        let loops = self
            .edges
            .iter()
            .filter(|&&(a, b)| a as usize == v && b as usize == v)
            .count();
        k + loops
    }

    /// A point of the realisation whose removal disconnects it, if any.
    /// Checks all vertices and all mid-edge points (an interior point of a
    /// non-loop edge cuts exactly when the edge is a bridge between its
    /// endpoints).
    pub fn cut_point(&self) -> Option<CutPoint> {
        for v in 0..self.n {
            if self.pieces_minus_point(v) >= 2 {
                return Some(CutPoint::Vertex(v));
            }
        }
        for (i, &(a, b)) in self.edges.iter().enumerate() {
            if a == b {
                continue;
            }
            let mut uf = UnionFind::new(self.n);
            for (j, &(x, y)) in self.edges.iter().enumerate() {
                if j != i {
                    uf.union(x as usize, y as usize);
                }
            }
            if uf.find(a as usize) != uf.find(b as usize) {
                return Some(CutPoint::EdgeInterior(i));
            }
        }
        None
    }

    pub fn has_no_cut_points(&self) -> bool {
        self.cut_point().is_none()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SimplexWitness {
    AlreadyDisconnected,
    Vertex(usize),
    Edge(usize),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CutPoint {
    Vertex(usize),
    EdgeInterior(usize),
}

#[cfg(test)]
mod tests {
    use super::*;

    fn path(n: usize) -> MultiGraph {
        let mut g = MultiGraph::new(n);
        for i in 1..n {
            g.add_edge(i - 1, i);
        }
        g
    }

    fn cycle(n: usize) -> MultiGraph {
        let mut g = path(n);
        if n > 1 {
            g.add_edge(n - 1, 0);
        } else if n == 1 {
            g.add_edge(0, 0);
        }
        g
    }

    #[test]
    fn cycle_has_no_cut_points() {
        assert!(cycle(5).has_no_cut_points());
        assert!(cycle(2).has_no_cut_points()); // dipole of order 2
        assert!(cycle(1).has_no_cut_points()); // a loop is a circle
    }

    #[test]
    fn path_has_cut_points() {
        assert_eq!(path(3).cut_point(), Some(CutPoint::Vertex(1)));
        // a single edge cuts at its interior
        assert_eq!(path(2).cut_point(), Some(CutPoint::EdgeInterior(0)));
    }

    #[test]
    fn dipole_simplex_deletion() {
        let mut dip1 = MultiGraph::new(2);
        dip1.add_edge(0, 1);
        assert!(dip1.connected_after_any_simplex_deletion().is_err());
        let mut dip3 = MultiGraph::new(2);
        for _ in 0..3 {
            dip3.add_edge(0, 1);
        }
        assert!(dip3.connected_after_any_simplex_deletion().is_ok());
    }

    #[test]
    fn point_removal_with_loops() {
        // figure eight: one vertex, two loops
        let mut g = MultiGraph::new(1);
        g.add_edge(0, 0);
        g.add_edge(0, 0);
        assert_eq!(g.pieces_minus_point(0), 2);
        assert_eq!(g.cut_point(), Some(CutPoint::Vertex(0)));
    }
}
