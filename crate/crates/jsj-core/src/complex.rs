//! Tubular graphs of graphs and their square complexes.
//!
//! A tubular graph of graphs is a graph of spaces whose vertex spaces are
//! finite connected simplicial graphs and whose edge spaces are circles,
//! attached by simplicial immersions. Its geometric realisation is a
//! nonpositively curved VH square complex: vertical edges are the edges of
//! the vertex graphs, horizontal edges come from the circle vertices of the
//! tubes, and each tube of length `n` contributes `n` squares.
//!
//! [`SquareComplex`] is the realised cell structure (it also represents
//! ad-hoc VH complexes such as grid patches that carry no tube structure);
//! [`TubularComplex`] couples the declarative tube data with its
//! realisation.

use crate::util::{MultiGraph, SimplexWitness};
use std::collections::BTreeMap;
use std::fmt;

pub type Vert = u32;
pub type VEdge = u32;
pub type HEdge = u32;
pub type SquareId = u32;

/// A vertical edge with a direction of traversal.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SignedEdge {
    pub edge: VEdge,
    pub forward: bool,
}

impl SignedEdge {
    pub fn new(edge: VEdge, forward: bool) -> Self {
        SignedEdge { edge, forward }
    }

    pub fn inverse(self) -> Self {
        SignedEdge { edge: self.edge, forward: !self.forward }
    }
}

impl fmt::Debug for SignedEdge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", if self.forward { "+" } else { "-" }, self.edge)
    }
}

/// One end of a vertical edge: `end` is 0 at the `from` vertex, 1 at `to`.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct VEnd {
    pub edge: VEdge,
    pub end: u8,
}

/// One end of a horizontal edge: 0 on the A side, 1 on the B side.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct HEnd {
    pub edge: HEdge,
    pub end: u8,
}

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Side {
    A,
    B,
}

/// An occurrence of a vertical edge as one side of a square.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct SideOcc {
    pub square: SquareId,
    pub side: Side,
}

/// A square corner: the `which` end (0 = start, 1 = end) of the given side,
/// in the direction the side word traverses its vertical edge.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Corner {
    pub square: SquareId,
    pub side: Side,
    pub which: u8,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Square {
    pub a: SignedEdge,
    pub b: SignedEdge,
    pub left: HEdge,
    pub right: HEdge,
}

/// A realised VH square complex.
#[derive(Clone, Debug)]
pub struct SquareComplex {
    vedge_ends: Vec<[Vert; 2]>,
    hedge_ends: Vec<[Vert; 2]>,
    squares: Vec<Square>,
    n_verts: usize,
    /// vertical component of each vertex / vertical edge
    graph_of_vert: Vec<u16>,
    graph_of_vedge: Vec<u16>,
    n_graphs: usize,
    // derived incidence tables
    vends_at: Vec<Vec<VEnd>>,
    hends_at: Vec<Vec<HEnd>>,
    side_occs: Vec<Vec<SideOcc>>,
    hedge_squares: Vec<Vec<SquareId>>,
    vert_names: Vec<String>,
    vedge_names: Vec<String>,
}

impl SquareComplex {
    /// Assemble a complex from raw cells. Vertical components are computed;
    /// names default to indices when empty vectors are passed.
    pub fn assemble(
        n_verts: usize,
        vedge_ends: Vec<[Vert; 2]>,
        hedge_ends: Vec<[Vert; 2]>,
        squares: Vec<Square>,
        vert_names: Vec<String>,
        vedge_names: Vec<String>,
    ) -> Result<Self, String> {
        for (i, s) in squares.iter().enumerate() {
            let a = [s.a, s.b];
            for se in a {
                if se.edge as usize >= vedge_ends.len() {
                    return Err(format!("square {i}: vertical side out of range"));
                }
            }
            for h in [s.left, s.right] {
                if h as usize >= hedge_ends.len() {
                    return Err(format!("square {i}: horizontal side out of range"));
                }
            }
        }
        let mut cx = SquareComplex {
            n_verts,
            vedge_ends,
            hedge_ends,
            squares,
            graph_of_vert: Vec::new(),
            graph_of_vedge: Vec::new(),
            n_graphs: 0,
            vends_at: Vec::new(),
            hends_at: Vec::new(),
            side_occs: Vec::new(),
            hedge_squares: Vec::new(),
            vert_names: if vert_names.is_empty() {
                (0..n_verts).map(|i| i.to_string()).collect()
            } else {
                vert_names
            },
            vedge_names: Vec::new(),
        };
        cx.vedge_names = if vedge_names.is_empty() {
            (0..cx.vedge_ends.len()).map(|i| i.to_string()).collect()
        } else {
            vedge_names
        };
        cx.rebuild_tables()?;
        Ok(cx)
    }

    fn rebuild_tables(&mut self) -> Result<(), String> {
        let mut uf = crate::util::UnionFind::new(self.n_verts);
        for &[u, v] in &self.vedge_ends {
            uf.union(u as usize, v as usize);
        }
        let (labels, k) = uf.canonical_labels();
        self.graph_of_vert = labels.iter().map(|&l| l as u16).collect();
        self.graph_of_vedge = self
            .vedge_ends
            .iter()
            .map(|&[u, _]| self.graph_of_vert[u as usize])
            .collect();
        self.n_graphs = k;

        self.vends_at = vec![Vec::new(); self.n_verts];
        for (e, &[u, v]) in self.vedge_ends.iter().enumerate() {
            self.vends_at[u as usize].push(VEnd { edge: e as VEdge, end: 0 });
            self.vends_at[v as usize].push(VEnd { edge: e as VEdge, end: 1 });
        }
        self.hends_at = vec![Vec::new(); self.n_verts];
        for (h, &[u, v]) in self.hedge_ends.iter().enumerate() {
            self.hends_at[u as usize].push(HEnd { edge: h as HEdge, end: 0 });
            self.hends_at[v as usize].push(HEnd { edge: h as HEdge, end: 1 });
        }
        self.side_occs = vec![Vec::new(); self.vedge_ends.len()];
        self.hedge_squares = vec![Vec::new(); self.hedge_ends.len()];
        for (i, s) in self.squares.iter().enumerate() {
            let sq = i as SquareId;
            self.side_occs[s.a.edge as usize].push(SideOcc { square: sq, side: Side::A });
            self.side_occs[s.b.edge as usize].push(SideOcc { square: sq, side: Side::B });
            self.hedge_squares[s.left as usize].push(sq);
            self.hedge_squares[s.right as usize].push(sq);
            // incidence constraints: left joins the two start corners,
            // right joins the two end corners
            let a0 = self.signed_start(s.a);
            let a1 = self.signed_end(s.a);
            let b0 = self.signed_start(s.b);
            let b1 = self.signed_end(s.b);
            if self.hedge_ends[s.left as usize] != [a0, b0] {
                return Err(format!("square {i}: left horizontal edge does not join the side start vertices"));
            }
            if self.hedge_ends[s.right as usize] != [a1, b1] {
                return Err(format!("square {i}: right horizontal edge does not join the side end vertices"));
            }
        }
        Ok(())
    }

    pub fn n_verts(&self) -> usize {
        self.n_verts
    }
    pub fn n_vedges(&self) -> usize {
        self.vedge_ends.len()
    }
    pub fn n_hedges(&self) -> usize {
        self.hedge_ends.len()
    }
    pub fn n_squares(&self) -> usize {
        self.squares.len()
    }
    pub fn n_graphs(&self) -> usize {
        self.n_graphs
    }
    pub fn square(&self, s: SquareId) -> &Square {
        &self.squares[s as usize]
    }
    pub fn squares(&self) -> &[Square] {
        &self.squares
    }
    pub fn vedge_endpoints(&self, e: VEdge) -> [Vert; 2] {
        self.vedge_ends[e as usize]
    }
    pub fn hedge_endpoints(&self, h: HEdge) -> [Vert; 2] {
        self.hedge_ends[h as usize]
    }
    pub fn graph_of_vertex(&self, v: Vert) -> u16 {
        self.graph_of_vert[v as usize]
    }
    pub fn graph_of_edge(&self, e: VEdge) -> u16 {
        self.graph_of_vedge[e as usize]
    }
    pub fn vends_at(&self, v: Vert) -> &[VEnd] {
        &self.vends_at[v as usize]
    }
    pub fn hends_at(&self, v: Vert) -> &[HEnd] {
        &self.hends_at[v as usize]
    }
    pub fn side_occs(&self, e: VEdge) -> &[SideOcc] {
        &self.side_occs[e as usize]
    }
    pub fn squares_at_hedge(&self, h: HEdge) -> &[SquareId] {
        &self.hedge_squares[h as usize]
    }
    pub fn vert_name(&self, v: Vert) -> &str {
        &self.vert_names[v as usize]
    }
    pub fn vedge_name(&self, e: VEdge) -> &str {
        &self.vedge_names[e as usize]
    }

    pub fn vend_vertex(&self, ve: VEnd) -> Vert {
        self.vedge_ends[ve.edge as usize][ve.end as usize]
    }
    pub fn hend_vertex(&self, he: HEnd) -> Vert {
        self.hedge_ends[he.edge as usize][he.end as usize]
    }

    pub fn signed_start(&self, se: SignedEdge) -> Vert {
        let [u, v] = self.vedge_ends[se.edge as usize];
        if se.forward {
            u
        } else {
            v
        }
    }
    pub fn signed_end(&self, se: SignedEdge) -> Vert {
        let [u, v] = self.vedge_ends[se.edge as usize];
        if se.forward {
            v
        } else {
            u
        }
    }
    /// The end of the edge at the start vertex of the traversal.
    pub fn start_end(&self, se: SignedEdge) -> VEnd {
        VEnd { edge: se.edge, end: if se.forward { 0 } else { 1 } }
    }
    /// The end of the edge at the arrival vertex of the traversal.
    pub fn arrival_end(&self, se: SignedEdge) -> VEnd {
        VEnd { edge: se.edge, end: if se.forward { 1 } else { 0 } }
    }

    /// Side word of a square as a signed edge, per side.
    pub fn side_word(&self, occ: SideOcc) -> SignedEdge {
        let s = &self.squares[occ.square as usize];
        match occ.side {
            Side::A => s.a,
            Side::B => s.b,
        }
    }

    /// The vertex at a square corner.
    pub fn corner_vertex(&self, c: Corner) -> Vert {
        let se = self.side_word(SideOcc { square: c.square, side: c.side });
        if c.which == 0 {
            self.signed_start(se)
        } else {
            self.signed_end(se)
        }
    }

    /// The vertical end a corner pairs.
    pub fn corner_vend(&self, c: Corner) -> VEnd {
        let se = self.side_word(SideOcc { square: c.square, side: c.side });
        if c.which == 0 {
            self.start_end(se)
        } else {
            self.arrival_end(se)
        }
    }

    /// The horizontal end a corner pairs.
    pub fn corner_hend(&self, c: Corner) -> HEnd {
        let s = &self.squares[c.square as usize];
        let edge = if c.which == 0 { s.left } else { s.right };
        let end = match c.side {
            Side::A => 0,
            Side::B => 1,
        };
        HEnd { edge, end }
    }

    /// All square corners at a vertex, in deterministic order.
    pub fn corners_at(&self, v: Vert) -> Vec<Corner> {
        let mut out = Vec::new();
        for (i, s) in self.squares.iter().enumerate() {
            for (side, se) in [(Side::A, s.a), (Side::B, s.b)] {
                if self.signed_start(se) == v {
                    out.push(Corner { square: i as SquareId, side, which: 0 });
                }
                if self.signed_end(se) == v {
                    out.push(Corner { square: i as SquareId, side, which: 1 });
                }
            }
        }
        out
    }

    /// Number of squares containing the vertical edge `e`, counted with
    /// multiplicity (a square whose two sides both run over `e` counts
    /// twice).
    pub fn thickness(&self, e: VEdge) -> usize {
        self.side_occs[e as usize].len()
    }

    pub fn hedge_thickness(&self, h: HEdge) -> usize {
        self.hedge_squares[h as usize].len()
    }

    pub fn max_thickness(&self) -> usize {
        let v = (0..self.n_vedges()).map(|e| self.thickness(e as VEdge)).max().unwrap_or(0);
        let h = (0..self.n_hedges()).map(|h| self.hedge_thickness(h as HEdge)).max().unwrap_or(0);
        v.max(h)
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.n_verts as i64 - (self.n_vedges() + self.n_hedges()) as i64 + self.n_squares() as i64
    }

    /// Vertices of a given vertical component, ascending.
    pub fn graph_vertices(&self, g: u16) -> Vec<Vert> {
        (0..self.n_verts as Vert).filter(|&v| self.graph_of_vert[v as usize] == g).collect()
    }

    /// Vertical edges of a given vertical component, ascending.
    pub fn graph_edges(&self, g: u16) -> Vec<VEdge> {
        (0..self.n_vedges() as VEdge).filter(|&e| self.graph_of_vedge[e as usize] == g).collect()
    }

    /// Whether a vertical component is a circle (connected, every vertex of
    /// valence two, at least one edge).
    pub fn graph_is_circle(&self, g: u16) -> bool {
        let vs = self.graph_vertices(g);
        if vs.is_empty() || self.graph_edges(g).is_empty() {
            return false;
        }
        vs.iter().all(|&v| self.vends_at(v).len() == 2)
    }
}

/// Link of a vertex: bipartite multigraph between the vertical and
/// horizontal half-edges at the vertex, with one edge per square corner.
#[derive(Clone, Debug)]
pub struct LinkGraph {
    pub vertical: Vec<VEnd>,
    pub horizontal: Vec<HEnd>,
    /// edges as (vertical index, horizontal index, corner)
    pub corners: Vec<(usize, usize, Corner)>,
}

impl LinkGraph {
    pub fn as_multigraph(&self) -> MultiGraph {
        let n = self.vertical.len() + self.horizontal.len();
        let mut g = MultiGraph::new(n);
        for &(vi, hi, _) in &self.corners {
            g.add_edge(vi, self.vertical.len() + hi);
        }
        g
    }

    /// Pairs of corners joining the same two half-edges.
    pub fn bigons(&self) -> Vec<(Corner, Corner)> {
        let mut seen: BTreeMap<(usize, usize), Corner> = BTreeMap::new();
        let mut out = Vec::new();
        for &(vi, hi, c) in &self.corners {
            if let Some(&prev) = seen.get(&(vi, hi)) {
                out.push((prev, c));
            } else {
                seen.insert((vi, hi), c);
            }
        }
        out
    }
}

pub fn link_of(cx: &SquareComplex, v: Vert) -> LinkGraph {
    let vertical = cx.vends_at(v).to_vec();
    let horizontal = cx.hends_at(v).to_vec();
    let vidx: BTreeMap<VEnd, usize> = vertical.iter().enumerate().map(|(i, &e)| (e, i)).collect();
    let hidx: BTreeMap<HEnd, usize> = horizontal.iter().enumerate().map(|(i, &e)| (e, i)).collect();
    let mut corners = Vec::new();
    for c in cx.corners_at(v) {
        let vi = vidx[&cx.corner_vend(c)];
        let hi = hidx[&cx.corner_hend(c)];
        corners.push((vi, hi, c));
    }
    LinkGraph { vertical, horizontal, corners }
}

/// A Brady-Meier failure witness.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BmWitness {
    DisconnectedLink { vertex: Vert },
    LinkVertex { vertex: Vert, removed: String },
    LinkEdge { vertex: Vert, corner: Corner },
}

/// Every vertex link must be connected and stay connected after deleting
/// any single link vertex or link edge.
pub fn brady_meier_check(cx: &SquareComplex) -> Result<(), BmWitness> {
    for v in 0..cx.n_verts() as Vert {
        let link = link_of(cx, v);
        let g = link.as_multigraph();
        match g.connected_after_any_simplex_deletion() {
            Ok(()) => {}
            Err(SimplexWitness::AlreadyDisconnected) => {
                return Err(BmWitness::DisconnectedLink { vertex: v })
            }
            Err(SimplexWitness::Vertex(i)) => {
                let removed = if i < link.vertical.len() {
                    format!("vertical end {:?}", link.vertical[i])
                } else {
                    format!("horizontal end {:?}", link.horizontal[i - link.vertical.len()])
                };
                return Err(BmWitness::LinkVertex { vertex: v, removed });
            }
            Err(SimplexWitness::Edge(i)) => {
                return Err(BmWitness::LinkEdge { vertex: v, corner: link.corners[i].2 })
            }
        }
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// Declarative tubular graphs of graphs
// ---------------------------------------------------------------------------

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GraphDecl {
    pub name: String,
    pub verts: Vec<String>,
    /// (edge name, endpoint names)
    pub edges: Vec<(String, String, String)>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AttachingDecl {
    pub graph: String,
    /// tokens: (edge name, forward)
    pub word: Vec<(String, bool)>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TubeDecl {
    pub name: String,
    pub len: usize,
    pub end_a: AttachingDecl,
    pub end_b: AttachingDecl,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ComplexDecl {
    pub graphs: Vec<GraphDecl>,
    pub tubes: Vec<TubeDecl>,
    pub assert_hyperbolic: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    UnknownGraph { tube: String, graph: String },
    UnknownEdge { graph: String, edge: String },
    UnknownVertex { graph: String, vertex: String },
    LoopEdge { graph: String, edge: String },
    DisconnectedVertexGraph { graph: String },
    TubeLengthMismatch { tube: String, end_a: usize, end_b: usize, declared: usize },
    WordNotConnected { tube: String, graph: String, position: usize },
    NotImmersed { tube: String, graph: String, position: usize },
    EmptyWord { tube: String },
    DisconnectedUnderlyingGraph,
    LinkBigon { vertex: String },
    NoVertexGraphs,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::UnknownGraph { tube, graph } => write!(f, "tube {tube}: unknown vertex graph {graph}"),
            Violation::UnknownEdge { graph, edge } => write!(f, "graph {graph}: unknown edge {edge}"),
            Violation::UnknownVertex { graph, vertex } => write!(f, "graph {graph}: unknown vertex {vertex}"),
            Violation::LoopEdge { graph, edge } => write!(f, "graph {graph}: loop edge {edge} (not simplicial)"),
            Violation::DisconnectedVertexGraph { graph } => write!(f, "vertex graph {graph} is not connected"),
            Violation::TubeLengthMismatch { tube, end_a, end_b, declared } => {
                write!(f, "tube {tube}: tube length mismatch (declared {declared}, end words {end_a} and {end_b})")
            }
            Violation::WordNotConnected { tube, graph, position } => {
                write!(f, "tube {tube}: attaching word in {graph} breaks at position {position} (edges do not share the required endpoint)")
            }
            Violation::NotImmersed { tube, graph, position } => {
                write!(f, "tube {tube}: attaching word in {graph} is not an immersion at position {position}")
            }
            Violation::EmptyWord { tube } => write!(f, "tube {tube}: empty attaching word"),
            Violation::DisconnectedUnderlyingGraph => write!(f, "underlying graph of the graph of spaces is not connected"),
            Violation::LinkBigon { vertex } => write!(f, "link of vertex {vertex} contains a bigon"),
            Violation::NoVertexGraphs => write!(f, "complex has no vertex graphs"),
        }
    }
}

#[derive(Clone, Debug, Default)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

/// The realised complex together with its declarative description and name
/// tables. Immutable after construction.
#[derive(Clone, Debug)]
pub struct TubularComplex {
    pub decl: ComplexDecl,
    cx: SquareComplex,
    /// name -> graph id, per declared vertex graph (graph ids match the
    /// vertical components of the realisation)
    graph_ids: BTreeMap<String, u16>,
    vert_ids: BTreeMap<(String, String), Vert>,
    edge_ids: BTreeMap<(String, String), VEdge>,
    /// square -> (tube index, position)
    square_origin: Vec<(usize, usize)>,
    /// set when the loader subdivided a non-simplicial declaration;
    /// original edge name -> the two replacement names
    pub normalized_from: Option<BTreeMap<(String, String), [String; 2]>>,
}

impl TubularComplex {
    /// Validate a declaration without realising it.
    pub fn validate(decl: &ComplexDecl) -> ValidationReport {
        let mut report = ValidationReport::default();
        if decl.graphs.is_empty() {
            report.violations.push(Violation::NoVertexGraphs);
            return report;
        }
        // vertex graphs: loop-free (the loader's subdivision guarantees
        // this; parallel edges are tolerated since all cell bookkeeping is
        // edge-end based) and connected
        let mut graph_index: BTreeMap<&str, &GraphDecl> = BTreeMap::new();
        for g in &decl.graphs {
            graph_index.insert(&g.name, g);
            let vset: BTreeMap<&str, usize> =
                g.verts.iter().enumerate().map(|(i, v)| (v.as_str(), i)).collect();
            let mut mg = MultiGraph::new(g.verts.len());
            for (e, u, v) in &g.edges {
                let (ui, vi) = match (vset.get(u.as_str()), vset.get(v.as_str())) {
                    (Some(&a), Some(&b)) => (a, b),
                    _ => {
                        let missing = if vset.contains_key(u.as_str()) { v } else { u };
                        report.violations.push(Violation::UnknownVertex {
                            graph: g.name.clone(),
                            vertex: missing.clone(),
                        });
                        continue;
                    }
                };
                if ui == vi {
                    report
                        .violations
                        .push(Violation::LoopEdge { graph: g.name.clone(), edge: e.clone() });
                    continue;
                }
                mg.add_edge(ui, vi);
            }
            if !g.verts.is_empty() && !mg.is_connected() {
                report.violations.push(Violation::DisconnectedVertexGraph { graph: g.name.clone() });
            }
        }
        // tubes
        for t in &decl.tubes {
            for end in [&t.end_a, &t.end_b] {
                if !graph_index.contains_key(end.graph.as_str()) {
                    report.violations.push(Violation::UnknownGraph {
                        tube: t.name.clone(),
                        graph: end.graph.clone(),
                    });
                }
            }
            if t.end_a.word.len() != t.len || t.end_b.word.len() != t.len {
                report.violations.push(Violation::TubeLengthMismatch {
                    tube: t.name.clone(),
                    end_a: t.end_a.word.len(),
                    end_b: t.end_b.word.len(),
                    declared: t.len,
                });
            }
            for end in [&t.end_a, &t.end_b] {
                let Some(g) = graph_index.get(end.graph.as_str()) else { continue };
                if end.word.is_empty() {
                    report.violations.push(Violation::EmptyWord { tube: t.name.clone() });
                    continue;
                }
                let edge_of: BTreeMap<&str, (&str, &str)> =
                    g.edges.iter().map(|(e, u, v)| (e.as_str(), (u.as_str(), v.as_str()))).collect();
                let mut ok = true;
                for (name, _) in &end.word {
                    if !edge_of.contains_key(name.as_str()) {
                        report.violations.push(Violation::UnknownEdge {
                            graph: g.name.clone(),
                            edge: name.clone(),
                        });
                        ok = false;
                    }
                }
                if !ok {
                    continue;
                }
                let n = end.word.len();
                let ends = |i: usize| -> (&str, &str) {
                    let (name, fwd) = &end.word[i];
                    let (u, v) = edge_of[name.as_str()];
                    if *fwd {
                        (u, v)
                    } else {
                        (v, u)
                    }
                };
                for i in 0..n {
                    let j = (i + 1) % n;
                    if ends(i).1 != ends(j).0 {
                        report.violations.push(Violation::WordNotConnected {
                            tube: t.name.clone(),
                            graph: g.name.clone(),
                            position: j,
                        });
                    } else {
                        // immersion: the arriving and departing half-edges
                        // must be distinct, i.e. no immediate backtrack
                        let (ei, fi) = &end.word[i];
                        let (ej, fj) = &end.word[j];
                        if ei == ej && fi != fj {
                            report.violations.push(Violation::NotImmersed {
                                tube: t.name.clone(),
                                graph: g.name.clone(),
                                position: j,
                            });
                        }
                    }
                }
            }
        }
        // underlying graph connectivity
        if report.violations.iter().all(|v| !matches!(v, Violation::UnknownGraph { .. })) {
            let idx: BTreeMap<&str, usize> =
                decl.graphs.iter().enumerate().map(|(i, g)| (g.name.as_str(), i)).collect();
            let mut mg = MultiGraph::new(decl.graphs.len());
            for t in &decl.tubes {
                mg.add_edge(idx[t.end_a.graph.as_str()], idx[t.end_b.graph.as_str()]);
            }
            if !mg.is_connected() {
                report.violations.push(Violation::DisconnectedUnderlyingGraph);
            }
        }
        report
    }

    /// Whether any vertex graph carries a loop or parallel edges (these make
    /// the loader subdivide).
    pub fn decl_needs_normalization(decl: &ComplexDecl) -> bool {
        !decl.graphs.iter().all(|g| {
            let mut pairs = std::collections::BTreeSet::new();
            g.edges.iter().all(|(_, u, v)| {
                u != v && pairs.insert(if u < v { (u.clone(), v.clone()) } else { (v.clone(), u.clone()) })
            })
        })
    }

    /// Two-fold edge subdivision of every vertex graph, rewriting attaching
    /// words. Each edge `e: u -> v` becomes `e.0: u -> e.m` and
    /// `e.m -> v` named `e.1`.
    pub fn subdivide_decl_vertical(decl: &ComplexDecl) -> ComplexDecl {
        let mut out = ComplexDecl { graphs: Vec::new(), tubes: Vec::new(), assert_hyperbolic: decl.assert_hyperbolic };
        for g in &decl.graphs {
            let mut verts = g.verts.clone();
            let mut edges = Vec::new();
            for (e, u, v) in &g.edges {
                let mid = format!("{e}.m");
                verts.push(mid.clone());
                edges.push((format!("{e}.0"), u.clone(), mid.clone()));
                edges.push((format!("{e}.1"), mid, v.clone()));
            }
            out.graphs.push(GraphDecl { name: g.name.clone(), verts, edges });
        }
        for t in &decl.tubes {
            let rewrite = |end: &AttachingDecl| AttachingDecl {
                graph: end.graph.clone(),
                word: end
                    .word
                    .iter()
                    .flat_map(|(e, fwd)| {
                        if *fwd {
                            vec![(format!("{e}.0"), true), (format!("{e}.1"), true)]
                        } else {
                            vec![(format!("{e}.1"), false), (format!("{e}.0"), false)]
                        }
                    })
                    .collect(),
            };
            out.tubes.push(TubeDecl {
                name: t.name.clone(),
                len: t.len * 2,
                end_a: rewrite(&t.end_a),
                end_b: rewrite(&t.end_b),
            });
        }
        out
    }

    /// Realise a declaration that passed validation. When a vertex graph has
    /// a loop or parallel edges the declaration is first normalised by a
    /// two-fold vertical subdivision.
    pub fn realize(decl: ComplexDecl) -> Result<TubularComplex, ValidationReport> {
        let (decl, normalized_from) = if !Self::decl_needs_normalization(&decl) {
            (decl, None)
        } else {
            let mut map = BTreeMap::new();
            for g in &decl.graphs {
                for (e, _, _) in &g.edges {
                    map.insert(
                        (g.name.clone(), e.clone()),
                        [format!("{e}.0"), format!("{e}.1")],
                    );
                }
            }
            (Self::subdivide_decl_vertical(&decl), Some(map))
        };
        let report = Self::validate(&decl);
        if !report.is_valid() {
            return Err(report);
        }
        let mut vert_ids = BTreeMap::new();
        let mut edge_ids = BTreeMap::new();
        let mut graph_ids = BTreeMap::new();
        let mut vert_names = Vec::new();
        let mut vedge_names = Vec::new();
        let mut vedge_ends = Vec::new();
        for g in &decl.graphs {
            for v in &g.verts {
                let id = vert_names.len() as Vert;
                vert_ids.insert((g.name.clone(), v.clone()), id);
                vert_names.push(format!("{}:{}", g.name, v));
            }
        }
        for g in &decl.graphs {
            for (e, u, v) in &g.edges {
                let id = vedge_names.len() as VEdge;
                edge_ids.insert((g.name.clone(), e.clone()), id);
                vedge_names.push(format!("{}:{}", g.name, e));
                vedge_ends.push([
                    vert_ids[&(g.name.clone(), u.clone())],
                    vert_ids[&(g.name.clone(), v.clone())],
                ]);
            }
        }
        let mut hedge_ends = Vec::new();
        let mut squares = Vec::new();
        let mut square_origin = Vec::new();
        for (ti, t) in decl.tubes.iter().enumerate() {
            let n = t.len;
            let signed = |end: &AttachingDecl, i: usize| -> SignedEdge {
                let (e, fwd) = &end.word[i];
                SignedEdge::new(edge_ids[&(end.graph.clone(), e.clone())], *fwd)
            };
            let base = hedge_ends.len() as HEdge;
            // horizontal edge i joins the start vertices of position i
            let mut tmp_cx_starts = Vec::with_capacity(n);
            for i in 0..n {
                let sa = signed(&t.end_a, i);
                let sb = signed(&t.end_b, i);
                tmp_cx_starts.push((sa, sb));
            }
            for i in 0..n {
                let (sa, sb) = tmp_cx_starts[i];
                let a_start = {
                    let [u, v] = vedge_ends[sa.edge as usize];
                    if sa.forward { u } else { v }
                };
                let b_start = {
                    let [u, v] = vedge_ends[sb.edge as usize];
                    if sb.forward { u } else { v }
                };
                hedge_ends.push([a_start, b_start]);
                let _ = i;
            }
            for i in 0..n {
                let (sa, sb) = tmp_cx_starts[i];
                squares.push(Square {
                    a: sa,
                    b: sb,
                    left: base + i as HEdge,
                    right: base + ((i + 1) % n) as HEdge,
                });
                square_origin.push((ti, i));
            }
        }
        let n_verts = vert_names.len();
        let cx = SquareComplex::assemble(n_verts, vedge_ends, hedge_ends, squares, vert_names, vedge_names)
            .map_err(|e| ValidationReport {
                violations: vec![Violation::WordNotConnected {
                    tube: e,
                    graph: String::new(),
                    position: 0,
                }],
            })?;
        // graph name -> vertical component id, via any vertex of the graph
        for g in &decl.graphs {
            if let Some(v0) = g.verts.first() {
                let vid = vert_ids[&(g.name.clone(), v0.clone())];
                graph_ids.insert(g.name.clone(), cx.graph_of_vertex(vid));
            }
        }
        let tc = TubularComplex {
            decl,
            cx,
            graph_ids,
            vert_ids,
            edge_ids,
            square_origin,
            normalized_from,
        };
        // bigons cannot arise from immersed attaching words, but check anyway
        let mut report = ValidationReport::default();
        for v in 0..tc.cx.n_verts() as Vert {
            if !link_of(&tc.cx, v).bigons().is_empty() {
                report
                    .violations
                    .push(Violation::LinkBigon { vertex: tc.cx.vert_name(v).to_string() });
            }
        }
        if !report.is_valid() {
            return Err(report);
        }
        Ok(tc)
    }

    pub fn complex(&self) -> &SquareComplex {
        &self.cx
    }

    pub fn graph_id(&self, name: &str) -> Option<u16> {
        self.graph_ids.get(name).copied()
    }

    pub fn graph_names(&self) -> Vec<&str> {
        self.decl.graphs.iter().map(|g| g.name.as_str()).collect()
    }

    pub fn edge_id(&self, graph: &str, edge: &str) -> Option<VEdge> {
        self.edge_ids.get(&(graph.to_string(), edge.to_string())).copied()
    }

    pub fn vert_id(&self, graph: &str, vert: &str) -> Option<Vert> {
        self.vert_ids.get(&(graph.to_string(), vert.to_string())).copied()
    }

    pub fn tube_count(&self) -> usize {
        self.decl.tubes.len()
    }

    pub fn square_origin(&self, s: SquareId) -> (usize, usize) {
        self.square_origin[s as usize]
    }

    /// The attaching words of every tube as signed-edge words in the
    /// realised complex, paired with the tube index and end.
    pub fn attaching_words(&self) -> Vec<(usize, Side, u16, Vec<SignedEdge>)> {
        let mut out = Vec::new();
        for (ti, t) in self.decl.tubes.iter().enumerate() {
            for (side, end) in [(Side::A, &t.end_a), (Side::B, &t.end_b)] {
                let word: Vec<SignedEdge> = end
                    .word
                    .iter()
                    .map(|(e, fwd)| SignedEdge::new(self.edge_ids[&(end.graph.clone(), e.clone())], *fwd))
                    .collect();
                let gid = self.graph_ids[&end.graph];
                out.push((ti, side, gid, word));
            }
        }
        out
    }

    /// Translate a user-facing word in declaration edge names (possibly
    /// pre-normalisation names) into realised signed edges.
    pub fn translate_word(&self, graph: &str, word: &[(String, bool)]) -> Result<Vec<SignedEdge>, String> {
        let mut out = Vec::new();
        for (e, fwd) in word {
            if let Some(id) = self.edge_id(graph, e) {
                out.push(SignedEdge::new(id, *fwd));
                continue;
            }
            if let Some(map) = &self.normalized_from {
                if let Some([e0, e1]) = map.get(&(graph.to_string(), e.clone())) {
                    let i0 = self
                        .edge_id(graph, e0)
                        .ok_or_else(|| format!("internal: missing subdivided edge {e0}"))?;
                    let i1 = self
                        .edge_id(graph, e1)
                        .ok_or_else(|| format!("internal: missing subdivided edge {e1}"))?;
                    if *fwd {
                        out.push(SignedEdge::new(i0, true));
                        out.push(SignedEdge::new(i1, true));
                    } else {
                        out.push(SignedEdge::new(i1, false));
                        out.push(SignedEdge::new(i0, false));
                    }
                    continue;
                }
            }
            return Err(format!("unknown edge {e} in graph {graph}"));
        }
        Ok(out)
    }

    /// Full cubical subdivision applied `n` times. Multiplies the square
    /// count by `4^n`.
    pub fn subdivide(&self, n: usize) -> TubularComplex {
        let mut decl = self.decl.clone();
        for _ in 0..n {
            decl = cubical_subdivision_decl(&decl);
        }
        TubularComplex::realize(decl).expect("cubical subdivision preserves validity")
    }
}

/// One full cubical subdivision at the declarative level: vertex graphs are
/// subdivided, each tube acquires a mid circle and splits into two tubes of
/// doubled length.
pub fn cubical_subdivision_decl(decl: &ComplexDecl) -> ComplexDecl {
    let mut out = TubularComplex::subdivide_decl_vertical(decl);
    let halved_tubes = std::mem::take(&mut out.tubes);
    for t in halved_tubes {
        let n = t.len; // already doubled by the vertical rewrite
        let mid_name = format!("{}.mid", t.name);
        let verts: Vec<String> = (0..n).map(|i| format!("v{i}")).collect();
        let edges: Vec<(String, String, String)> = (0..n)
            .map(|i| (format!("c{i}"), format!("v{i}"), format!("v{}", (i + 1) % n)))
            .collect();
        out.graphs.push(GraphDecl { name: mid_name.clone(), verts, edges });
        let mid_word = AttachingDecl {
            graph: mid_name.clone(),
            word: (0..n).map(|i| (format!("c{i}"), true)).collect(),
        };
        out.tubes.push(TubeDecl {
            name: format!("{}.lo", t.name),
            len: n,
            end_a: t.end_a,
            end_b: mid_word.clone(),
        });
        out.tubes.push(TubeDecl {
            name: format!("{}.hi", t.name),
            len: n,
            end_a: mid_word,
            end_b: t.end_b,
        });
    }
    out
}

/// Cubical subdivision of a raw square complex (used for complexes that do
/// not carry tube structure).
pub fn cubical_subdivision_raw(cx: &SquareComplex) -> SquareComplex {
    // new vertices: old verts, then one per vertical edge, one per
    // horizontal edge, one per square
    let nv = cx.n_verts();
    let ne = cx.n_vedges();
    let nh = cx.n_hedges();
    let vmid = |e: usize| (nv + e) as Vert;
    let hmid = |h: usize| (nv + ne + h) as Vert;
    let center = |s: usize| (nv + ne + nh + s) as Vert;
    let n_verts = nv + ne + nh + cx.n_squares();

    // vertical edges: halves of old vertical edges + the vertical halves of
    // each square's centre cross (centre to the two horizontal midpoints is
    // *vertical*? no: the segment from a horizontal-edge midpoint to the
    // square centre is parallel to the vertical sides, hence vertical).
    let mut vedge_ends: Vec<[Vert; 2]> = Vec::new();
    let mut vedge_names = Vec::new();
    let vhalf0 = |e: usize| e * 2;
    let vhalf1 = |e: usize| e * 2 + 1;
    for e in 0..ne {
        let [u, v] = cx.vedge_endpoints(e as VEdge);
        vedge_ends.push([u, vmid(e)]);
        vedge_names.push(format!("{}.0", cx.vedge_name(e as VEdge)));
        vedge_ends.push([vmid(e), v]);
        vedge_names.push(format!("{}.1", cx.vedge_name(e as VEdge)));
    }
    let vcross_base = vedge_ends.len();
    // per square: left-mid to centre, centre to right-mid (oriented with a)
    for s in 0..cx.n_squares() {
        let sq = cx.square(s as SquareId);
        vedge_ends.push([hmid(sq.left as usize), center(s)]);
        vedge_names.push(format!("s{s}.lv"));
        vedge_ends.push([center(s), hmid(sq.right as usize)]);
        vedge_names.push(format!("s{s}.rv"));
    }

    // horizontal edges: halves of old horizontal edges + the horizontal
    // halves of each square's centre cross
    let mut hedge_ends: Vec<[Vert; 2]> = Vec::new();
    let hhalf = |h: usize, end: usize| h * 2 + end;
    for h in 0..nh {
        let [u, v] = cx.hedge_endpoints(h as HEdge);
        hedge_ends.push([u, hmid(h)]);
        hedge_ends.push([hmid(h), v]);
    }
    let hcross_base = hedge_ends.len();
    for s in 0..cx.n_squares() {
        let sq = cx.square(s as SquareId);
        // from a-mid to centre and centre to b-mid
        hedge_ends.push([vmid(sq.a.edge as usize), center(s)]);
        hedge_ends.push([center(s), vmid(sq.b.edge as usize)]);
    }

    // each square splits into four
    let mut squares = Vec::new();
    for s in 0..cx.n_squares() {
        let sq = cx.square(s as SquareId);
        let (a, b) = (sq.a, sq.b);
        // halves of side a in traversal order
        let a_first = SignedEdge::new(if a.forward { vhalf0(a.edge as usize) } else { vhalf1(a.edge as usize) } as VEdge, a.forward);
        let a_second = SignedEdge::new(if a.forward { vhalf1(a.edge as usize) } else { vhalf0(a.edge as usize) } as VEdge, a.forward);
        let b_first = SignedEdge::new(if b.forward { vhalf0(b.edge as usize) } else { vhalf1(b.edge as usize) } as VEdge, b.forward);
        let b_second = SignedEdge::new(if b.forward { vhalf1(b.edge as usize) } else { vhalf0(b.edge as usize) } as VEdge, b.forward);
        let mid_a = SignedEdge::new((vcross_base + s * 2) as VEdge, true); // left-mid -> centre
        let mid_b = SignedEdge::new((vcross_base + s * 2 + 1) as VEdge, true); // centre -> right-mid
        // horizontal halves near the a side and b side
        let left = sq.left as usize;
        let right = sq.right as usize;
        // ends of old hedges: end 0 at the a-side vertex
        let left_a = hhalf(left, 0) as HEdge;
        let left_b = hhalf(left, 1) as HEdge;
        let right_a = hhalf(right, 0) as HEdge;
        let right_b = hhalf(right, 1) as HEdge;
        let cross_a = (hcross_base + s * 2) as HEdge; // a-mid -> centre
        let cross_b = (hcross_base + s * 2 + 1) as HEdge; // centre -> b-mid
        // quadrant squares: (a-first, mid_a), (a-second, mid_b) along a;
        // (mid_a, b-first), (mid_b, b-second) along b
        squares.push(Square { a: a_first, b: mid_a, left: left_a, right: cross_a });
        squares.push(Square { a: a_second, b: mid_b, left: cross_a, right: right_a });
        squares.push(Square { a: mid_a, b: b_first, left: left_b, right: cross_b });
        squares.push(Square { a: mid_b, b: b_second, left: cross_b, right: right_b });
    }

    let mut vert_names: Vec<String> = (0..nv).map(|v| cx.vert_name(v as Vert).to_string()).collect();
    for e in 0..ne {
        vert_names.push(format!("{}.m", cx.vedge_name(e as VEdge)));
    }
    for h in 0..nh {
        vert_names.push(format!("h{h}.m"));
    }
    for s in 0..cx.n_squares() {
        vert_names.push(format!("s{s}.c"));
    }
    SquareComplex::assemble(n_verts, vedge_ends, hedge_ends, squares, vert_names, vedge_names)
        .expect("cubical subdivision of a valid complex is valid")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn dcomm_is_valid_and_brady_meier() {
        let x = fixtures::dcomm();
        assert_eq!(x.decl.graphs.len(), 2);
        assert_eq!(x.tube_count(), 1);
        // loader subdivides the rose: each side has 3 vertices, 4 edges
        assert_eq!(x.complex().n_squares(), 8);
        assert!(brady_meier_check(x.complex()).is_ok());
    }

    #[test]
    fn tube_length_mismatch_reported() {
        let mut decl = fixtures::dcomm_decl();
        decl.tubes[0].end_b.word.pop();
        let report = TubularComplex::validate(&decl);
        assert!(report
            .violations
            .iter()
            .any(|v| matches!(v, Violation::TubeLengthMismatch { .. })));
    }

    #[test]
    fn backtracking_word_not_immersed() {
        // a a- b b- around the rose
        let decl = fixtures::double_of_rose_decl(&[("a", true), ("a", false), ("b", true), ("b", false)]);
        let report = TubularComplex::validate(&TubularComplex::subdivide_decl_vertical(&decl));
        assert!(report.violations.iter().any(|v| matches!(v, Violation::NotImmersed { .. })));
    }

    #[test]
    fn thickness_of_petal_edges() {
        let x = fixtures::dcomm();
        // each petal half-edge is traversed twice by the attaching word
        let e = x.edge_id("L", "a.0").unwrap();
        assert_eq!(x.complex().thickness(e), 2);
        let x33 = fixtures::d33();
        let e = x33.edge_id("L", "a.0").unwrap();
        assert_eq!(x33.complex().thickness(e), 3);
        // horizontal tube edges always lie in exactly two squares
        for h in 0..x.complex().n_hedges() {
            assert_eq!(x.complex().hedge_thickness(h as HEdge), 2);
        }
    }

    #[test]
    fn grid_interior_link_is_4_cycle() {
        let g = fixtures::grid33();
        let v = fixtures::grid_vertex(1, 1);
        let link = link_of(&g, v);
        let mg = link.as_multigraph();
        assert_eq!(mg.n, 4);
        assert_eq!(mg.edges.len(), 4);
        assert!(mg.is_connected());
        assert!(mg.has_no_cut_points());
    }

    #[test]
    fn dcomm_rose_vertex_link_pre_subdivision() {
        // the unnormalised model keeps the rose with loops
        let decl = fixtures::dcomm_decl();
        let x = TubularComplex::realize(TubularComplex::subdivide_decl_vertical(&decl)).unwrap();
        // post-subdivision the old rose vertex has 4 vertical and 4
        // horizontal half-edges with 8 corners
        let v = x.vert_id("L", "v").unwrap();
        let link = link_of(x.complex(), v);
        assert_eq!(link.vertical.len(), 4);
        assert_eq!(link.horizontal.len(), 4);
        assert_eq!(link.corners.len(), 8);
    }

    #[test]
    fn euler_characteristics() {
        assert_eq!(fixtures::dcomm().complex().euler_characteristic(), -2);
        assert_eq!(fixtures::grid33().euler_characteristic(), 1);
        let single = SquareComplex::assemble(1, vec![], vec![], vec![], vec![], vec![]).unwrap();
        assert_eq!(single.euler_characteristic(), 1);
    }

    #[test]
    fn subdivision_multiplies_squares_and_preserves_chi() {
        let x = fixtures::dcomm();
        let y = x.subdivide(1);
        assert_eq!(y.complex().n_squares(), 4 * x.complex().n_squares());
        assert_eq!(y.complex().euler_characteristic(), x.complex().euler_characteristic());
        assert!(brady_meier_check(y.complex()).is_ok());

        let g = fixtures::grid33();
        let g1 = cubical_subdivision_raw(&g);
        assert_eq!(g1.n_squares(), 36);
        assert_eq!(g1.euler_characteristic(), 1);
    }

    #[test]
    fn brady_meier_fails_on_unused_petal() {
        // rose(a, b) with a single tube along a only: the b edge lies in no
        // square
        let decl = fixtures::rose_with_tube_along_a_decl();
        let x = TubularComplex::realize(decl).unwrap();
        let err = brady_meier_check(x.complex()).unwrap_err();
        match err {
            BmWitness::DisconnectedLink { .. } | BmWitness::LinkVertex { .. } => {}
            other => panic!("unexpected witness {other:?}"),
        }
    }

    #[test]
    fn brady_meier_invariant_under_subdivision() {
        for x in [fixtures::dcomm(), fixtures::d33()] {
            let sub = x.subdivide(1);
            assert_eq!(
                brady_meier_check(x.complex()).is_ok(),
                brady_meier_check(sub.complex()).is_ok()
            );
        }
    }
}
