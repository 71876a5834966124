//! Regular neighbourhoods and regular spheres of immersed combinatorial
//! paths and cycles.
//!
//! The regular sphere `∂N(P)` of an immersed path is an abstract graph: it
//! is the boundary of the abstract regular neighbourhood of `P`, built here
//! position by position. Around a single vertex it is the first barycentric
//! subdivision of the vertex link; splicing along each traversed edge glues
//! consecutive vertex spheres through the squares containing the edge. For
//! every square occurrence at a traversed edge the sphere carries a strip
//! cell (the pre-image of the square around that edge occurrence), the
//! mechanism later used to partition squares into half-space labels.
//!
//! The independent from-definition construction over the second cubical
//! subdivision lives in [`oracle`].

pub mod oracle;

use crate::complex::{Corner, HEnd, SideOcc, SignedEdge, SquareComplex, VEnd, Vert};
use crate::util::{MultiGraph, UnionFind};
use std::collections::BTreeMap;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SphereError {
    #[error("path is empty")]
    EmptyPath,
    #[error("path is not connected at position {0}")]
    NotConnected(usize),
    #[error("path is not an immersion at position {0}")]
    NotImmersed(usize),
    #[error("not a cyclic path: {0}")]
    NotCyclicPath(String),
    #[error("valence mismatch in splice: {0} vs {1}")]
    ValenceMismatch(usize, usize),
    #[error("splice vertices coincide")]
    SpliceVerticesEqual,
    #[error("splice labelling refers to a removed vertex")]
    SpliceLabelRemoved,
    #[error("cell is not on the sphere")]
    CellNotOnSphere,
    #[error("trace: {0}")]
    Trace(String),
}

/// One end of an edge of the ambient complex, vertical or horizontal.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum CellEnd {
    V(VEnd),
    Hor(HEnd),
}

/// A sphere vertex with its provenance: which cell of the complex it comes
/// from, at which position along the carrier path.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum SCell {
    /// Quarter point of an edge end at path position `pos`.
    H { pos: u32, end: CellEnd },
    /// A square corner at path position `pos` whose vertical end is not
    /// traversed there.
    Corner { pos: u32, corner: Corner },
    /// Pre-image of a square occurrence around the traversed edge at
    /// position `edge_pos`.
    Strip { edge_pos: u32, occ: SideOcc },
}

impl SCell {
    pub fn pos(&self) -> u32 {
        match *self {
            SCell::H { pos, .. } => pos,
            SCell::Corner { pos, .. } => pos,
            SCell::Strip { edge_pos, .. } => edge_pos,
        }
    }
}

/// What the sphere was built around.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Carrier {
    Vertex(Vert),
    /// An immersed non-cyclic path.
    Path(Vec<SignedEdge>),
    /// An immersed cyclic word; positions are taken modulo its length.
    Cycle(Vec<SignedEdge>),
}

#[derive(Clone, Debug)]
pub struct SphereGraph {
    pub carrier: Carrier,
    cells: Vec<SCell>,
    index: BTreeMap<SCell, u32>,
    edges: Vec<(u32, u32)>,
    adj: Vec<Vec<u32>>,
    comp_of: Vec<u32>,
    n_comps: usize,
}

impl SphereGraph {
    fn from_cells(carrier: Carrier, cells: Vec<SCell>, edges: Vec<(u32, u32)>) -> Self {
        let index: BTreeMap<SCell, u32> = cells.iter().enumerate().map(|(i, &c)| (c, i as u32)).collect();
        debug_assert_eq!(index.len(), cells.len());
        let mut adj = vec![Vec::new(); cells.len()];
        for &(a, b) in &edges {
            adj[a as usize].push(b);
            adj[b as usize].push(a);
        }
        let mut uf = UnionFind::new(cells.len());
        for &(a, b) in &edges {
            uf.union(a as usize, b as usize);
        }
        let (comp_of, n_comps) = uf.canonical_labels();
        SphereGraph { carrier, cells, index, edges, adj, comp_of, n_comps }
    }

    pub fn cells(&self) -> &[SCell] {
        &self.cells
    }
    pub fn edges(&self) -> &[(u32, u32)] {
        &self.edges
    }
    pub fn cell_index(&self, c: &SCell) -> Option<u32> {
        self.index.get(c).copied()
    }
    pub fn neighbors(&self, i: u32) -> &[u32] {
        &self.adj[i as usize]
    }
    pub fn component_count(&self) -> usize {
        self.n_comps
    }
    /// Component of a cell; components are numbered deterministically by
    /// first appearance in cell order.
    pub fn component_of(&self, c: &SCell) -> Option<u32> {
        self.cell_index(c).map(|i| self.comp_of[i as usize])
    }
    pub fn component_of_index(&self, i: u32) -> u32 {
        self.comp_of[i as usize]
    }

    pub fn as_multigraph(&self) -> MultiGraph {
        MultiGraph { n: self.cells.len(), edges: self.edges.clone() }
    }

    pub fn is_connected(&self) -> bool {
        self.cells.len() <= 1 || self.n_comps == 1
    }

    /// Components after deleting the given cells (as points of the
    /// realisation, so incident open edges keep hanging from the other
    /// side). Returns a label per surviving cell index and the count.
    pub fn components_without(&self, removed: &[u32]) -> (Vec<Option<u32>>, usize) {
        let mut gone = vec![false; self.cells.len()];
        for &r in removed {
            gone[r as usize] = true;
        }
        let g = self.as_multigraph();
        let (labels, k) = g.components_without_vertices(&gone);
        let out = labels
            .iter()
            .map(|&l| if l == u32::MAX { None } else { Some(l) })
            .collect();
        (out, k)
    }
}

fn path_vertices(cx: &SquareComplex, word: &[SignedEdge], cyclic: bool) -> Result<Vec<Vert>, SphereError> {
    if word.is_empty() {
        return Err(SphereError::EmptyPath);
    }
    let mut vs = Vec::with_capacity(word.len() + 1);
    vs.push(cx.signed_start(word[0]));
    for i in 0..word.len() {
        if cx.signed_start(word[i]) != *vs.last().unwrap() {
            return Err(SphereError::NotConnected(i));
        }
        vs.push(cx.signed_end(word[i]));
    }
    let k = word.len();
    for i in 1..k {
        if word[i] == word[i - 1].inverse() {
            return Err(SphereError::NotImmersed(i));
        }
    }
    if cyclic {
        if vs[k] != vs[0] {
            return Err(SphereError::NotConnected(0));
        }
        if k >= 1 && word[0] == word[k - 1].inverse() {
            return Err(SphereError::NotImmersed(0));
        }
    }
    Ok(vs)
}

/// Check that a word is an immersed cyclic word (closed, no backtracking
/// including around the wrap).
pub fn check_cyclic_word(cx: &SquareComplex, word: &[SignedEdge]) -> Result<(), SphereError> {
    if word.len() < 2 {
        return Err(SphereError::NotCyclicPath(format!(
            "cyclic words need length at least 2, got {}",
            word.len()
        )));
    }
    path_vertices(cx, word, true).map(|_| ())
}

struct Builder<'a> {
    cx: &'a SquareComplex,
    cells: Vec<SCell>,
    index: BTreeMap<SCell, u32>,
    edges: Vec<(u32, u32)>,
}

impl<'a> Builder<'a> {
    fn new(cx: &'a SquareComplex) -> Self {
        Builder { cx, cells: Vec::new(), index: BTreeMap::new(), edges: Vec::new() }
    }

    fn cell(&mut self, c: SCell) -> u32 {
        if let Some(&i) = self.index.get(&c) {
            return i;
        }
        let i = self.cells.len() as u32;
        self.cells.push(c);
        self.index.insert(c, i);
        i
    }

    fn edge(&mut self, a: SCell, b: SCell) {
        let ia = self.cell(a);
        let ib = self.cell(b);
        self.edges.push((ia, ib));
    }

    /// Emit the sphere cells contributed by path position `pos` at vertex
    /// `v`. `arriving`/`departing` are the traversed vertical ends there.
    fn vertex_position(&mut self, pos: u32, v: Vert, arriving: Option<(u32, VEnd)>, departing: Option<(u32, VEnd)>) {
        let cx = self.cx;
        for &ve in cx.vends_at(v) {
            if arriving.map(|(_, a)| a) == Some(ve) || departing.map(|(_, d)| d) == Some(ve) {
                continue;
            }
            self.cell(SCell::H { pos, end: CellEnd::V(ve) });
        }
        for &he in cx.hends_at(v) {
            self.cell(SCell::H { pos, end: CellEnd::Hor(he) });
        }
        for c in cx.corners_at(v) {
            let ve = cx.corner_vend(c);
            let he = cx.corner_hend(c);
            let strip = if arriving.map(|(_, a)| a) == Some(ve) {
                let (i, _) = arriving.unwrap();
                Some(SCell::Strip { edge_pos: i, occ: SideOcc { square: c.square, side: c.side } })
            } else if departing.map(|(_, d)| d) == Some(ve) {
                let (i, _) = departing.unwrap();
                Some(SCell::Strip { edge_pos: i, occ: SideOcc { square: c.square, side: c.side } })
            } else {
                None
            };
            match strip {
                Some(s) => {
                    // the square's pre-image around the traversed edge runs
                    // from the horizontal quarter point at one endpoint to
                    // the one at the other; both connect to the strip cell
                    self.edge(s, SCell::H { pos, end: CellEnd::Hor(he) });
                }
                None => {
                    let c_cell = SCell::Corner { pos, corner: c };
                    self.edge(c_cell, SCell::H { pos, end: CellEnd::V(ve) });
                    self.edge(c_cell, SCell::H { pos, end: CellEnd::Hor(he) });
                }
            }
        }
    }
}

/// Regular sphere around a single vertex: isomorphic to the first
/// barycentric subdivision of the vertex link.
pub fn vertex_sphere(cx: &SquareComplex, v: Vert) -> SphereGraph {
    let mut b = Builder::new(cx);
    b.vertex_position(0, v, None, None);
    SphereGraph::from_cells(Carrier::Vertex(v), b.cells, b.edges)
}

/// Regular sphere around an immersed non-cyclic path in the vertical
/// 1-skeleton, built incrementally by splicing vertex spheres along the
/// traversed edges.
pub fn regular_sphere(cx: &SquareComplex, word: &[SignedEdge]) -> Result<SphereGraph, SphereError> {
    let vs = path_vertices(cx, word, false)?;
    let k = word.len();
    let mut b = Builder::new(cx);
    for (j, &v) in vs.iter().enumerate() {
        let arriving = if j > 0 { Some(((j - 1) as u32, cx.arrival_end(word[j - 1]))) } else { None };
        let departing = if j < k { Some((j as u32, cx.start_end(word[j]))) } else { None };
        b.vertex_position(j as u32, v, arriving, departing);
    }
    Ok(SphereGraph::from_cells(Carrier::Path(word.to_vec()), b.cells, b.edges))
}

/// Regular sphere around an immersed cycle (the quotient of the orthogonal
/// sphere of a fundamental domain under the deck identification; built
/// directly with cyclic positions, which realises the self-splice).
pub fn quotient_sphere(cx: &SquareComplex, word: &[SignedEdge]) -> Result<SphereGraph, SphereError> {
    check_cyclic_word(cx, word)?;
    let vs = path_vertices(cx, word, true)?;
    let k = word.len();
    let mut b = Builder::new(cx);
    for j in 0..k {
        let prev = (j + k - 1) % k;
        let arriving = Some((prev as u32, cx.arrival_end(word[prev])));
        let departing = Some((j as u32, cx.start_end(word[j])));
        b.vertex_position(j as u32, vs[j], arriving, departing);
    }
    Ok(SphereGraph::from_cells(Carrier::Cycle(word.to_vec()), b.cells, b.edges))
}

/// The two carrier-exit cells of the sphere of a cyclic path: the quarter
/// points where the line through the fundamental domain leaves the sphere
/// (`b_u` at the initial vertex, `a_v` at the terminal one).
pub fn cyclic_path_exits(cx: &SquareComplex, word: &[SignedEdge]) -> (SCell, SCell) {
    let k = word.len();
    let b_u = SCell::H { pos: 0, end: CellEnd::V(cx.arrival_end(word[k - 1])) };
    let a_v = SCell::H { pos: k as u32, end: CellEnd::V(cx.start_end(word[0])) };
    (b_u, a_v)
}

/// Orthogonal sphere of a cyclic path: the closure of the regular sphere
/// with the second cubical neighbourhoods of the two carrier exits removed.
pub fn orthogonal_sphere(cx: &SquareComplex, word: &[SignedEdge]) -> Result<SphereGraph, SphereError> {
    check_cyclic_word(cx, word)?;
    let full = regular_sphere(cx, word)?;
    let (b_u, a_v) = cyclic_path_exits(cx, word);
    let bi = full.cell_index(&b_u).ok_or(SphereError::CellNotOnSphere)?;
    let ai = full.cell_index(&a_v).ok_or(SphereError::CellNotOnSphere)?;

    // distance-1 vertices from either exit
    let mut dist1 = vec![false; full.cells.len()];
    let mut dist2 = vec![false; full.cells.len()];
    for &x in &[bi, ai] {
        dist2[x as usize] = true;
        for &n in full.neighbors(x) {
            dist1[n as usize] = true;
            dist2[n as usize] = true;
        }
    }
    for v in 0..full.cells.len() {
        if dist1[v] {
            for &n in full.neighbors(v as u32) {
                dist2[n as usize] = true;
            }
        }
    }
    dist1[bi as usize] = true;
    dist1[ai as usize] = true;
    // removed edges: those with an endpoint at distance <= 1; removed
    // vertices: distance <= 2, unless re-added as an endpoint of a
    // surviving edge (taking the closure)
    let mut keep_vert = vec![false; full.cells.len()];
    let mut edges = Vec::new();
    for &(x, y) in full.edges() {
        if dist1[x as usize] || dist1[y as usize] {
            continue;
        }
        keep_vert[x as usize] = true;
        keep_vert[y as usize] = true;
        edges.push((x, y));
    }
    for v in 0..full.cells.len() {
        if !dist2[v] {
            keep_vert[v] = true;
        }
    }
    let mut remap = vec![u32::MAX; full.cells.len()];
    let mut cells = Vec::new();
    for (v, &keep) in keep_vert.iter().enumerate() {
        if keep {
            remap[v] = cells.len() as u32;
            cells.push(full.cells[v]);
        }
    }
    let edges = edges.into_iter().map(|(x, y)| (remap[x as usize], remap[y as usize])).collect();
    Ok(SphereGraph::from_cells(Carrier::Path(word.to_vec()), cells, edges))
}

/// Sphere around the midpoint of a vertical edge: a dipole of order equal
/// to the thickness, subdivided once (one middle vertex per square
/// occurrence).
pub fn edge_midpoint_sphere(cx: &SquareComplex, e: crate::complex::VEdge) -> MultiGraph {
    let d = cx.thickness(e);
    // vertices: 0 = near end 0, 1 = near end 1, then one per occurrence
    let mut g = MultiGraph::new(2 + d);
    for i in 0..d {
        g.add_edge(0, 2 + i);
        g.add_edge(2 + i, 1);
    }
    g
}

// ---------------------------------------------------------------------------
// Generic splicing of labelled graphs
// ---------------------------------------------------------------------------

/// A splice site: the vertex to remove and a labelling of its adjacent
/// vertex slots (one entry per incident edge end, in labelling order).
#[derive(Clone, Debug)]
pub struct SpliceSite {
    pub vertex: usize,
    pub slots: Vec<usize>,
}

fn splice_check(g: &MultiGraph, s: &SpliceSite) -> Result<(), SphereError> {
    let mut adj = Vec::new();
    for &(a, b) in &g.edges {
        if a as usize == s.vertex && b as usize == s.vertex {
            return Err(SphereError::SpliceLabelRemoved);
        }
        if a as usize == s.vertex {
            adj.push(b as usize);
        } else if b as usize == s.vertex {
            adj.push(a as usize);
        }
    }
    if adj.len() != s.slots.len() {
        return Err(SphereError::ValenceMismatch(adj.len(), s.slots.len()));
    }
    let mut want = s.slots.clone();
    adj.sort_unstable();
    want.sort_unstable();
    if adj != want {
        return Err(SphereError::SpliceLabelRemoved);
    }
    Ok(())
}

/// Splice two graphs: remove the open stars of the two sites and identify
/// their adjacent vertices slotwise. Returns the spliced graph together
/// with the vertex maps of the two inputs (removed vertices map to `None`).
pub fn splice(
    g1: &MultiGraph,
    s1: &SpliceSite,
    g2: &MultiGraph,
    s2: &SpliceSite,
) -> Result<(MultiGraph, Vec<Option<usize>>, Vec<Option<usize>>), SphereError> {
    splice_check(g1, s1)?;
    splice_check(g2, s2)?;
    if s1.slots.len() != s2.slots.len() {
        return Err(SphereError::ValenceMismatch(s1.slots.len(), s2.slots.len()));
    }
    let n = g1.n + g2.n;
    let mut uf = UnionFind::new(n);
    for (j, &a) in s1.slots.iter().enumerate() {
        uf.union(a, g1.n + s2.slots[j]);
    }
    let mut alive = vec![true; n];
    alive[s1.vertex] = false;
    alive[g1.n + s2.vertex] = false;
    let mut rep = vec![usize::MAX; n];
    let mut count = 0usize;
    for v in 0..n {
        if !alive[v] {
            continue;
        }
        let r = uf.find(v);
        if rep[r] == usize::MAX {
            rep[r] = count;
            count += 1;
        }
    }
    let lookup = |uf: &mut UnionFind, v: usize| -> Option<usize> {
        if !alive[v] {
            None
        } else {
            Some(rep[uf.find(v)])
        }
    };
    let mut out = MultiGraph::new(count);
    for &(a, b) in &g1.edges {
        if let (Some(x), Some(y)) = (lookup(&mut uf, a as usize), lookup(&mut uf, b as usize)) {
            out.add_edge(x, y);
        }
    }
    for &(a, b) in &g2.edges {
        if let (Some(x), Some(y)) =
            (lookup(&mut uf, g1.n + a as usize), lookup(&mut uf, g1.n + b as usize))
        {
            out.add_edge(x, y);
        }
    }
    let map1 = (0..g1.n).map(|v| lookup(&mut uf, v)).collect();
    let map2 = (0..g2.n).map(|v| lookup(&mut uf, g1.n + v)).collect();
    Ok((out, map1, map2))
}

/// Self-splice: remove the open stars of two distinct vertices of the same
/// graph and identify their adjacent vertices slotwise. Rejects sites whose
/// stars interact (an edge joining the two vertices would leave loose
/// edges, not a graph).
pub fn self_splice(
    g: &MultiGraph,
    s1: &SpliceSite,
    s2: &SpliceSite,
) -> Result<(MultiGraph, Vec<Option<usize>>), SphereError> {
    if s1.vertex == s2.vertex {
        return Err(SphereError::SpliceVerticesEqual);
    }
    splice_check(g, s1)?;
    splice_check(g, s2)?;
    if s1.slots.len() != s2.slots.len() {
        return Err(SphereError::ValenceMismatch(s1.slots.len(), s2.slots.len()));
    }
    if s1.slots.contains(&s2.vertex) || s2.slots.contains(&s1.vertex) {
        return Err(SphereError::SpliceLabelRemoved);
    }
    let mut uf = UnionFind::new(g.n);
    for (j, &a) in s1.slots.iter().enumerate() {
        uf.union(a, s2.slots[j]);
    }
    let mut alive = vec![true; g.n];
    alive[s1.vertex] = false;
    alive[s2.vertex] = false;
    let mut rep = vec![usize::MAX; g.n];
    let mut count = 0usize;
    for v in 0..g.n {
        if !alive[v] {
            continue;
        }
        let r = uf.find(v);
        if rep[r] == usize::MAX {
            rep[r] = count;
            count += 1;
        }
    }
    let mut out = MultiGraph::new(count);
    for &(a, b) in &g.edges {
        let (a, b) = (a as usize, b as usize);
        if alive[a] && alive[b] {
            out.add_edge(rep[uf.find(a)], rep[uf.find(b)]);
        }
    }
    let map = (0..g.n)
        .map(|v| if alive[v] { Some(rep[uf.find(v)]) } else { None })
        .collect();
    Ok((out, map))
}

// ---------------------------------------------------------------------------
// Component tracing between nested path spheres
// ---------------------------------------------------------------------------

/// Map a cell of the sphere of a subpath to the corresponding cell of the
/// sphere of a superpath containing it at `offset`. Cells that land on the
/// carrier of the superpath (the traversed quarter points at the subpath's
/// boundary positions) have no image.
pub fn trace_cell(
    cx: &SquareComplex,
    cell: &SCell,
    full: &Carrier,
    offset: usize,
) -> Option<SCell> {
    let (word, cyclic) = match full {
        Carrier::Path(w) => (w.as_slice(), false),
        Carrier::Cycle(w) => (w.as_slice(), true),
        Carrier::Vertex(_) => return Some(*cell),
    };
    let k = word.len();
    let norm = |p: usize| -> u32 {
        if cyclic {
            (p % k) as u32
        } else {
            p as u32
        }
    };
    let traversed = |p: usize| -> (Option<(u32, VEnd)>, Option<(u32, VEnd)>) {
        let arr = if cyclic || p > 0 {
            let i = if cyclic { (p + k - 1) % k } else { p - 1 };
            Some((i as u32, cx.arrival_end(word[i])))
        } else {
            None
        };
        let dep = if cyclic || p < k {
            let i = if cyclic { p % k } else { p };
            Some((i as u32, cx.start_end(word[i])))
        } else {
            None
        };
        (arr, dep)
    };
    match *cell {
        SCell::H { pos, end } => {
            let p = pos as usize + offset;
            if let CellEnd::V(ve) = end {
                let (arr, dep) = traversed(p);
                if arr.map(|(_, a)| a) == Some(ve) || dep.map(|(_, d)| d) == Some(ve) {
                    return None; // lies on the carrier of the superpath
                }
            }
            Some(SCell::H { pos: norm(p), end })
        }
        SCell::Corner { pos, corner } => {
            let p = pos as usize + offset;
            let ve = cx.corner_vend(corner);
            let (arr, dep) = traversed(p);
            if let Some((i, a)) = arr {
                if a == ve {
                    return Some(SCell::Strip {
                        edge_pos: i,
                        occ: SideOcc { square: corner.square, side: corner.side },
                    });
                }
            }
            if let Some((i, d)) = dep {
                if d == ve {
                    return Some(SCell::Strip {
                        edge_pos: i,
                        occ: SideOcc { square: corner.square, side: corner.side },
                    });
                }
            }
            Some(SCell::Corner { pos: norm(p), corner })
        }
        SCell::Strip { edge_pos, occ } => Some(SCell::Strip { edge_pos: norm(edge_pos as usize + offset), occ }),
    }
}

/// Trace the components of the sphere of a subpath into the components of
/// the sphere of a superpath. The subpath must sit inside the superpath's
/// word at the given offset; the map is defined on each component by any of
/// its cells that have images, and all images of one component must agree.
pub fn trace_components(
    cx: &SquareComplex,
    sub: &SphereGraph,
    full: &SphereGraph,
    offset: usize,
) -> Result<Vec<Option<u32>>, SphereError> {
    // verify the word inclusion
    let sub_word: &[SignedEdge] = match &sub.carrier {
        Carrier::Path(w) => w,
        Carrier::Vertex(_) => &[],
        Carrier::Cycle(_) => {
            return Err(SphereError::Trace("subpath must be non-cyclic".to_string()))
        }
    };
    let (full_word, cyclic): (&[SignedEdge], bool) = match &full.carrier {
        Carrier::Path(w) => (w, false),
        Carrier::Cycle(w) => (w, true),
        Carrier::Vertex(_) => (&[], false),
    };
    for (i, &se) in sub_word.iter().enumerate() {
        let p = offset + i;
        let q = if cyclic { p % full_word.len() } else { p };
        if q >= full_word.len() || full_word[q] != se {
            return Err(SphereError::Trace(format!("subpath does not match superpath at position {i}")));
        }
    }
    let mut out: Vec<Option<u32>> = vec![None; sub.component_count()];
    for (i, cell) in sub.cells().iter().enumerate() {
        let Some(img) = trace_cell(cx, cell, &full.carrier, offset) else { continue };
        let Some(fc) = full.component_of(&img) else {
            // the image cell may have been cut away (orthogonal spheres)
            continue;
        };
        let sc = sub.component_of_index(i as u32) as usize;
        match out[sc] {
            None => out[sc] = Some(fc),
            Some(prev) if prev == fc => {}
            Some(prev) => {
                return Err(SphereError::Trace(format!(
                    "component {sc} maps to both {prev} and {fc}"
                )))
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::VEdge;
    use crate::fixtures;

    #[test]
    fn grid_interior_vertex_sphere_is_8_cycle() {
        let g = fixtures::grid33();
        let s = vertex_sphere(&g, fixtures::grid_vertex(1, 1));
        assert_eq!(s.cells().len(), 8);
        assert_eq!(s.edges().len(), 8);
        assert!(s.is_connected());
        assert!(s.as_multigraph().has_no_cut_points());
    }

    #[test]
    fn single_edge_sphere_is_splice_of_endpoint_spheres() {
        // in the grid, the sphere of a single interior edge is a circle of
        // length (sphere(u) - star) + (sphere(v) - star) glued over the two
        // squares at the edge
        let g = fixtures::grid33();
        // vertical edge from (1,1) to (2,1): index 3 * 1 + 1 = 4
        let word = [SignedEdge::new(4 as VEdge, true)];
        let s = regular_sphere(&g, &word).unwrap();
        assert!(s.is_connected());
        assert!(s.as_multigraph().has_no_cut_points());
        // it contains one strip cell per square at the edge
        let strips = s.cells().iter().filter(|c| matches!(c, SCell::Strip { .. })).count();
        assert_eq!(strips, 2);
    }

    #[test]
    fn spheres_in_brady_meier_fixtures_have_no_cut_points() {
        for x in [fixtures::dcomm(), fixtures::d33()] {
            let cx = x.complex();
            for v in 0..cx.n_verts() as u32 {
                let s = vertex_sphere(cx, v);
                assert!(s.is_connected(), "vertex sphere disconnected at {v}");
                assert!(s.as_multigraph().has_no_cut_points(), "cut point in sphere at {v}");
            }
        }
    }

    #[test]
    fn triangles_splice_to_dipole() {
        let mut tri = MultiGraph::new(3);
        tri.add_edge(0, 1);
        tri.add_edge(1, 2);
        tri.add_edge(2, 0);
        let site = SpliceSite { vertex: 0, slots: vec![1, 2] };
        let (g, _, _) = splice(&tri, &site, &tri, &site).unwrap();
        assert_eq!(g.n, 2);
        assert_eq!(g.edges.len(), 2);
        assert!(g.has_no_cut_points());
    }

    #[test]
    fn splice_valence_mismatch_rejected() {
        let mut tri = MultiGraph::new(3);
        tri.add_edge(0, 1);
        tri.add_edge(1, 2);
        tri.add_edge(2, 0);
        let mut star3 = MultiGraph::new(4);
        star3.add_edge(0, 1);
        star3.add_edge(0, 2);
        star3.add_edge(0, 3);
        let s1 = SpliceSite { vertex: 0, slots: vec![1, 2] };
        let s2 = SpliceSite { vertex: 0, slots: vec![1, 2, 3] };
        assert!(matches!(splice(&tri, &s1, &star3, &s2), Err(SphereError::ValenceMismatch(..))));
    }

    #[test]
    fn dipole_self_splice_rejected() {
        let mut dip = MultiGraph::new(2);
        for _ in 0..3 {
            dip.add_edge(0, 1);
        }
        let s1 = SpliceSite { vertex: 0, slots: vec![1, 1, 1] };
        let s2 = SpliceSite { vertex: 1, slots: vec![0, 0, 0] };
        assert!(self_splice(&dip, &s1, &s2).is_err());
    }

    #[test]
    fn splice_of_cut_point_free_graphs_has_no_cut_points() {
        // two 4-cycles spliced at valence-2 vertices
        let mut c4 = MultiGraph::new(4);
        for i in 0..4 {
            c4.add_edge(i, (i + 1) % 4);
        }
        let site = SpliceSite { vertex: 0, slots: vec![1, 3] };
        let (g, _, _) = splice(&c4, &site, &c4, &site).unwrap();
        assert!(g.is_connected());
        assert!(g.has_no_cut_points());
    }

    #[test]
    fn orthogonal_sphere_of_dcomm_tube_cycle_has_two_components() {
        let x = fixtures::dcomm();
        let cx = x.complex();
        let word: Vec<SignedEdge> = x.attaching_words()[0].3.clone();
        let orth = orthogonal_sphere(cx, &word).unwrap();
        assert_eq!(orth.component_count(), 2);
    }

    #[test]
    fn degenerate_cyclic_path_rejected() {
        let x = fixtures::dcomm();
        let cx = x.complex();
        let e = x.edge_id("L", "a.0").unwrap();
        let word = [SignedEdge::new(e, true)];
        assert!(matches!(
            orthogonal_sphere(cx, &word),
            Err(SphereError::NotCyclicPath(_))
        ));
    }

    #[test]
    fn trace_identity_on_same_path() {
        let x = fixtures::dcomm();
        let cx = x.complex();
        let word: Vec<SignedEdge> = x.attaching_words()[0].3.clone();
        let s = regular_sphere(cx, &word).unwrap();
        let map = trace_components(cx, &s, &s, 0).unwrap();
        for (i, m) in map.iter().enumerate() {
            assert_eq!(*m, Some(i as u32));
        }
    }

    #[test]
    fn trace_composes_along_nested_subpaths() {
        let x = fixtures::d33();
        let cx = x.complex();
        let word: Vec<SignedEdge> = x.attaching_words()[0].3.clone();
        // S ⊂ T ⊂ P: prefixes of the tube attaching word
        let p = regular_sphere(cx, &word).unwrap();
        let t = regular_sphere(cx, &word[2..10]).unwrap();
        let s = regular_sphere(cx, &word[4..8]).unwrap();
        let st = trace_components(cx, &s, &t, 2).unwrap();
        let tp = trace_components(cx, &t, &p, 2).unwrap();
        let sp = trace_components(cx, &s, &p, 4).unwrap();
        for (c, &m) in st.iter().enumerate() {
            let via = m.and_then(|mt| tp[mt as usize]);
            assert_eq!(sp[c], via, "composition mismatch at sub component {c}");
        }
    }
}
