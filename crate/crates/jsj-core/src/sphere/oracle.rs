//! From-definition construction of regular spheres.
//!
//! The regular neighbourhood of an immersed path is defined over the second
//! cubical subdivision of the ambient complex: one copy of each cell per
//! component of the pre-image of its closure under the path map, with cell
//! copies glued exactly where their arcs meet. The regular sphere is the
//! union of the closed cells of the neighbourhood disjoint from the
//! embedded path.
//!
//! This module realises that definition literally and reduces the result to
//! the cell vocabulary of the incremental construction (each square
//! pre-image strip, a three-vertex chain here, collapses to the single
//! strip cell). It exists as the independent reference the incremental
//! splice construction is checked against.

use super::{CellEnd, SCell};
use crate::complex::{Corner, HEdge, SideOcc, Side, SignedEdge, SquareComplex, SquareId, VEdge, Vert};
use crate::util::UnionFind;
use std::collections::BTreeMap;

/// Points of the second cubical subdivision (only those that can meet a
/// vertical path's neighbourhood).
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Debug)]
enum P2 {
    Orig(Vert),
    /// quarter point of a vertical edge, `q` in 1..=3 measured from end 0
    Vq(VEdge, u8),
    Hq(HEdge, u8),
    /// interior grid point of a square at `(x, y)`, both in 1..=3, with `x`
    /// along the traversal of side `a` and `y` from side `a` to side `b`
    Sp(SquareId, u8, u8),
}

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Debug)]
enum E2 {
    /// segment of a vertical edge from `q/4` to `(q+1)/4`, `q` in 0..=3
    VSeg(VEdge, u8),
    HSeg(HEdge, u8),
    /// x-direction interior segment from `(x, y)` to `(x+1, y)`, `y` in 1..=3
    Sx(SquareId, u8, u8),
    /// y-direction interior segment from `(x, y)` to `(x, y+1)`, `x` in 1..=3
    Sy(SquareId, u8, u8),
}

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Debug)]
enum C2 {
    P(P2),
    E(E2),
    /// closed subsquare `[x, x+1] x [y, y+1]`, both in 0..=3
    Q(SquareId, u8, u8),
}

/// Point of a square in grid coordinates, resolving boundary points to the
/// cells of the sides.
fn sq_point(cx: &SquareComplex, s: SquareId, x: u8, y: u8) -> P2 {
    let sq = cx.square(s);
    debug_assert!(x <= 4 && y <= 4);
    let on_edge = |se: SignedEdge, t: u8| -> P2 {
        let q = if se.forward { t } else { 4 - t };
        match q {
            0 => P2::Orig(cx.vedge_endpoints(se.edge)[0]),
            4 => P2::Orig(cx.vedge_endpoints(se.edge)[1]),
            q => P2::Vq(se.edge, q),
        }
    };
    match (x, y) {
        (x, 0) => on_edge(sq.a, x),
        (x, 4) => on_edge(sq.b, x),
        (0, y) => match y {
            0 | 4 => unreachable!(),
            y => P2::Hq(sq.left, y),
        },
        (4, y) => P2::Hq(sq.right, y),
        (x, y) => P2::Sp(s, x, y),
    }
}

/// x-direction segment of a square from `(x, y)` to `(x+1, y)`.
fn sq_edge_x(cx: &SquareComplex, s: SquareId, x: u8, y: u8) -> E2 {
    let sq = cx.square(s);
    match y {
        0 => E2::VSeg(sq.a.edge, if sq.a.forward { x } else { 3 - x }),
        4 => E2::VSeg(sq.b.edge, if sq.b.forward { x } else { 3 - x }),
        y => E2::Sx(s, x, y),
    }
}

/// y-direction segment of a square from `(x, y)` to `(x, y+1)`.
fn sq_edge_y(cx: &SquareComplex, s: SquareId, x: u8, y: u8) -> E2 {
    let sq = cx.square(s);
    match x {
        0 => E2::HSeg(sq.left, y),
        4 => E2::HSeg(sq.right, y),
        x => E2::Sy(s, x, y),
    }
}

fn endpoints_of(cx: &SquareComplex, e: E2) -> [P2; 2] {
    match e {
        E2::VSeg(ed, q) => {
            let pt = |q: u8| match q {
                0 => P2::Orig(cx.vedge_endpoints(ed)[0]),
                4 => P2::Orig(cx.vedge_endpoints(ed)[1]),
                q => P2::Vq(ed, q),
            };
            [pt(q), pt(q + 1)]
        }
        E2::HSeg(h, q) => {
            let pt = |q: u8| match q {
                0 => P2::Orig(cx.hedge_endpoints(h)[0]),
                4 => P2::Orig(cx.hedge_endpoints(h)[1]),
                q => P2::Hq(h, q),
            };
            [pt(q), pt(q + 1)]
        }
        E2::Sx(s, x, y) => [sq_point(cx, s, x, y), sq_point(cx, s, x + 1, y)],
        E2::Sy(s, x, y) => [sq_point(cx, s, x, y), sq_point(cx, s, x, y + 1)],
    }
}

/// All cells of the closure of a cell, including itself.
fn closure_cells(cx: &SquareComplex, c: C2) -> Vec<C2> {
    match c {
        C2::P(p) => vec![C2::P(p)],
        C2::E(e) => {
            let [a, b] = endpoints_of(cx, e);
            vec![C2::E(e), C2::P(a), C2::P(b)]
        }
        C2::Q(s, x, y) => {
            let mut out = vec![C2::Q(s, x, y)];
            out.push(C2::E(sq_edge_x(cx, s, x, y)));
            out.push(C2::E(sq_edge_x(cx, s, x, y + 1)));
            out.push(C2::E(sq_edge_y(cx, s, x, y)));
            out.push(C2::E(sq_edge_y(cx, s, x + 1, y)));
            for (px, py) in [(x, y), (x + 1, y), (x, y + 1), (x + 1, y + 1)] {
                out.push(C2::P(sq_point(cx, s, px, py)));
            }
            out
        }
    }
}

/// Cells (of any dimension) whose closure contains the given point.
fn cells_containing_point(cx: &SquareComplex, p: P2) -> Vec<C2> {
    let mut out = vec![C2::P(p)];
    match p {
        P2::Orig(v) => {
            for &ve in cx.vends_at(v) {
                out.push(C2::E(E2::VSeg(ve.edge, if ve.end == 0 { 0 } else { 3 })));
            }
            for &he in cx.hends_at(v) {
                out.push(C2::E(E2::HSeg(he.edge, if he.end == 0 { 0 } else { 3 })));
            }
            for c in cx.corners_at(v) {
                // square coordinates are traversal-aligned: the start
                // corner of a side sits at x = 0 whatever the direction of
                // the stored signed edge
                let (qx, qy) = match (c.side, c.which) {
                    (Side::A, 0) => (0, 0),
                    (Side::A, _) => (3, 0),
                    (Side::B, 0) => (0, 3),
                    (Side::B, _) => (3, 3),
                };
                out.push(C2::Q(c.square, qx, qy));
            }
        }
        P2::Vq(e, q) => {
            out.push(C2::E(E2::VSeg(e, q - 1)));
            out.push(C2::E(E2::VSeg(e, q)));
            for occ in cx.side_occs(e) {
                let sq = cx.square(occ.square);
                let se = if occ.side == Side::A { sq.a } else { sq.b };
                let x = if se.forward { q } else { 4 - q };
                let row = if occ.side == Side::A { 0 } else { 3 };
                let yedge = if occ.side == Side::A { 0 } else { 3 };
                out.push(C2::Q(occ.square, x - 1, row));
                out.push(C2::Q(occ.square, x, row));
                out.push(C2::E(sq_edge_y(cx, occ.square, x, yedge)));
            }
        }
        P2::Hq(h, q) => {
            out.push(C2::E(E2::HSeg(h, q - 1)));
            out.push(C2::E(E2::HSeg(h, q)));
            for &s in cx.squares_at_hedge(h) {
                let sq = cx.square(s);
                let x = if sq.left == h && sq.right == h {
                    // a square whose left and right sides coincide cannot
                    // occur in a valid complex (it would force a length-one
                    // tube with a single vertex circle)
                    unreachable!("degenerate square with equal horizontal sides")
                } else if sq.left == h {
                    0
                } else {
                    4
                };
                let col = if x == 0 { 0 } else { 3 };
                out.push(C2::Q(s, col, q - 1));
                out.push(C2::Q(s, col, q));
                out.push(C2::E(sq_edge_x(cx, s, col, q)));
            }
        }
        P2::Sp(..) => {}
    }
    out.sort_unstable();
    out.dedup();
    out
}

/// The oracle sphere, reduced to the incremental construction's cell
/// vocabulary.
pub struct OracleSphere {
    pub cells: Vec<SCell>,
    pub edges: Vec<(SCell, SCell)>,
}

/// Linear index of path cells: even = subdivided path vertex `t/2`, odd =
/// subdivided path edge.
fn build_oracle(cx: &SquareComplex, word: &[SignedEdge], base: Option<Vert>) -> OracleSphere {
    // --- the subdivided path -------------------------------------------
    let k = word.len();
    let mut pv: Vec<P2> = Vec::with_capacity(4 * k + 1);
    let mut pe: Vec<E2> = Vec::with_capacity(4 * k);
    if k == 0 {
        pv.push(P2::Orig(base.expect("vertex sphere needs a base vertex")));
    } else {
        pv.push(P2::Orig(cx.signed_start(word[0])));
        for &se in word {
            for r in 0..4u8 {
                pe.push(E2::VSeg(se.edge, if se.forward { r } else { 3 - r }));
                if r < 3 {
                    pv.push(P2::Vq(se.edge, if se.forward { r + 1 } else { 3 - r }));
                } else {
                    pv.push(P2::Orig(cx.signed_end(se)));
                }
            }
        }
    }
    // linear indices: vertices at even positions, edges at odd

    // --- supports -------------------------------------------------------
    let mut supp: BTreeMap<C2, Vec<usize>> = BTreeMap::new();
    for (t, &p) in pv.iter().enumerate() {
        for c in cells_containing_point(cx, p) {
            supp.entry(c).or_default().push(2 * t);
        }
    }
    for (t, &e) in pe.iter().enumerate() {
        // cells whose closure contains the open segment: the segment itself
        // and subsquares along it
        let mut cs = vec![C2::E(e)];
        if let E2::VSeg(ed, q) = e {
            for occ in cx.side_occs(ed) {
                let sq = cx.square(occ.square);
                let se = if occ.side == Side::A { sq.a } else { sq.b };
                let x = if se.forward { q } else { 3 - q };
                let row = if occ.side == Side::A { 0 } else { 3 };
                cs.push(C2::Q(occ.square, x, row));
            }
        }
        for c in cs {
            supp.entry(c).or_default().push(2 * t + 1);
        }
    }
    for v in supp.values_mut() {
        v.sort_unstable();
        v.dedup();
    }

    // --- components of supports (maximal runs of consecutive indices) ----
    // run id = (cell, first linear index of the run)
    let runs = |v: &[usize]| -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        let mut start = v[0];
        let mut prev = v[0];
        for &x in &v[1..] {
            if x == prev + 1 {
                prev = x;
            } else {
                out.push((start, prev));
                start = x;
                prev = x;
            }
        }
        out.push((start, prev));
        out
    };
    let run_of = |cell: C2, idx: usize, supp: &BTreeMap<C2, Vec<usize>>| -> Option<(usize, usize)> {
        let v = supp.get(&cell)?;
        if !v.binary_search(&idx).is_ok() {
            return None;
        }
        runs(v).into_iter().find(|&(a, b)| a <= idx && idx <= b)
    };

    // --- tops and instances ----------------------------------------------
    #[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Debug)]
    enum Key {
        Global(C2, usize), // run start
        Private(C2, usize), // owning top id
    }
    let mut tops: Vec<(C2, (usize, usize))> = Vec::new();
    for (&cell, v) in &supp {
        for r in runs(v) {
            tops.push((cell, r));
        }
    }
    let mut key_ids: BTreeMap<Key, usize> = BTreeMap::new();
    let mut keys: Vec<Key> = Vec::new();
    let intern = |k: Key, keys: &mut Vec<Key>, key_ids: &mut BTreeMap<Key, usize>| -> usize {
        *key_ids.entry(k).or_insert_with(|| {
            keys.push(k);
            keys.len() - 1
        })
    };
    // instance table: per top, cell of closure -> key id
    let mut inst: Vec<BTreeMap<C2, usize>> = Vec::with_capacity(tops.len());
    for (ti, &(cell, (a, b))) in tops.iter().enumerate() {
        let mut m = BTreeMap::new();
        for c in closure_cells(cx, cell) {
            let sv = supp.get(&c);
            let hit = sv.and_then(|v| v.iter().find(|&&i| a <= i && i <= b).copied());
            let key = match hit {
                Some(i) => {
                    let r = run_of(c, i, &supp).expect("support run");
                    Key::Global(c, r.0)
                }
                None => Key::Private(c, ti),
            };
            m.insert(c, intern(key, &mut keys, &mut key_ids));
        }
        inst.push(m);
    }

    // --- gluing: tops sharing a global cell share its whole closure ------
    let mut uf = UnionFind::new(keys.len());
    let mut by_global: BTreeMap<usize, Vec<usize>> = BTreeMap::new(); // key id -> top ids
    for (ti, m) in inst.iter().enumerate() {
        for (&c, &kid) in m {
            if matches!(keys[kid], Key::Global(..)) {
                let _ = c;
                by_global.entry(kid).or_default().push(ti);
            }
        }
    }
    for (&kid, tids) in &by_global {
        let Key::Global(cell, _) = keys[kid] else { unreachable!() };
        let sub = closure_cells(cx, cell);
        let first = tids[0];
        for &t in &tids[1..] {
            for &c in &sub {
                if let (Some(&k1), Some(&k2)) = (inst[first].get(&c), inst[t].get(&c)) {
                    uf.union(k1, k2);
                }
            }
        }
    }

    // --- on-path classes --------------------------------------------------
    let mut on_path = vec![false; keys.len()];
    let mark = |cell: C2, idx: usize, uf: &mut UnionFind, on_path: &mut Vec<bool>| {
        let r = run_of(cell, idx, &supp).expect("path cell has support");
        if let Some(&kid) = key_ids.get(&Key::Global(cell, r.0)) {
            let root = uf.find(kid);
            on_path[root] = true;
        }
    };
    for (t, &p) in pv.iter().enumerate() {
        mark(C2::P(p), 2 * t, &mut uf, &mut on_path);
    }
    for (t, &e) in pe.iter().enumerate() {
        mark(C2::E(e), 2 * t + 1, &mut uf, &mut on_path);
    }

    // --- evidence per class (union of owner runs) -------------------------
    let mut evidence: Vec<Vec<usize>> = vec![Vec::new(); keys.len()];
    for (ti, m) in inst.iter().enumerate() {
        let (_, (a, b)) = tops[ti];
        for &kid in m.values() {
            let root = uf.find(kid);
            evidence[root].push(a);
            evidence[root].push(b);
        }
    }

    // --- collect sphere cells ---------------------------------------------
    // class -> representative (cell kind); classes of points and edges
    let mut class_cell: BTreeMap<usize, C2> = BTreeMap::new();
    for (ti, m) in inst.iter().enumerate() {
        let _ = ti;
        for (&c, &kid) in m {
            class_cell.insert(uf.find(kid), c);
        }
    }
    let visit_pos = |root: usize, v: Vert| -> u32 {
        // the unique path vertex linear index in the evidence range whose
        // image is v (evidence stores run endpoints)
        let mut idxs: Vec<usize> = evidence[root].clone();
        idxs.sort_unstable();
        idxs.dedup();
        let (&lo, &hi) = (idxs.first().unwrap(), idxs.last().unwrap());
        let mut found = None;
        for t in lo..=hi {
            if t % 2 == 0 && matches!(pv[t / 2], P2::Orig(w) if w == v) {
                found = Some((t / 2) / 4);
                break;
            }
        }
        found.expect("sphere cell has a visit position") as u32
    };

    // vertex classes off path -> SCell labels (strip interiors handled by
    // contraction below)
    let mut vert_label: BTreeMap<usize, SCell> = BTreeMap::new();
    let mut strip_mid: BTreeMap<usize, (SquareId, Side, u32)> = BTreeMap::new();
    for (&root, &c) in &class_cell {
        if on_path[root] {
            continue;
        }
        let C2::P(p) = c else { continue };
        match p {
            P2::Vq(e, q) if q == 1 || q == 3 => {
                let end = if q == 1 { 0u8 } else { 1 };
                let v = cx.vedge_endpoints(e)[end as usize];
                let pos = visit_pos(root, v);
                vert_label.insert(
                    root,
                    SCell::H { pos, end: CellEnd::V(crate::complex::VEnd { edge: e, end }) },
                );
            }
            P2::Hq(h, q) if q == 1 || q == 3 => {
                let end = if q == 1 { 0u8 } else { 1 };
                let v = cx.hedge_endpoints(h)[end as usize];
                let pos = visit_pos(root, v);
                vert_label.insert(
                    root,
                    SCell::H { pos, end: CellEnd::Hor(crate::complex::HEnd { edge: h, end }) },
                );
            }
            P2::Sp(s, x, y) if (x == 1 || x == 3) && (y == 1 || y == 3) => {
                // corner interior point; coordinates are traversal-aligned,
                // so x == 1 is the start corner of the side
                let side = if y == 1 { Side::A } else { Side::B };
                let which = if x == 1 { 0u8 } else { 1 };
                let corner = Corner { square: s, side, which };
                let v = cx.corner_vertex(corner);
                let pos = visit_pos(root, v);
                vert_label.insert(root, SCell::Corner { pos, corner });
            }
            P2::Sp(s, 2, y) if y == 1 || y == 3 => {
                let side = if y == 1 { Side::A } else { Side::B };
                let mut idxs = evidence[root].clone();
                idxs.sort_unstable();
                let edge_pos = (idxs[0] / 2) as u32 / 4;
                strip_mid.insert(root, (s, side, edge_pos));
            }
            _ => {
                panic!("unexpected off-path sphere point {p:?}");
            }
        }
    }

    // sphere edges: edge classes off path with both endpoints off path
    let mut raw_edges: Vec<(usize, usize)> = Vec::new();
    let mut endpoint_roots: BTreeMap<usize, [usize; 2]> = BTreeMap::new();
    for (ti, m) in inst.iter().enumerate() {
        for (&c, &kid) in m {
            let C2::E(e) = c else { continue };
            let root = uf.find(kid);
            if on_path[root] || endpoint_roots.contains_key(&root) {
                continue;
            }
            let [a, b] = endpoints_of(cx, e);
            let (Some(&ka), Some(&kb)) = (inst[ti].get(&C2::P(a)), inst[ti].get(&C2::P(b))) else {
                continue;
            };
            let (ra, rb) = (uf.find(ka), uf.find(kb));
            if on_path[ra] || on_path[rb] {
                continue;
            }
            endpoint_roots.insert(root, [ra, rb]);
            raw_edges.push((ra, rb));
        }
    }

    // contract strip chains: replace the mid vertex and its two corner
    // neighbours by a single strip cell
    let mut relabel: BTreeMap<usize, SCell> = vert_label.clone();
    for (&mid, &(s, side, edge_pos)) in &strip_mid {
        let strip = SCell::Strip { edge_pos, occ: SideOcc { square: s, side } };
        relabel.insert(mid, strip);
        for &(a, b) in &raw_edges {
            if a == mid {
                relabel.insert(b, strip);
            } else if b == mid {
                relabel.insert(a, strip);
            }
        }
    }
    let mut cells: Vec<SCell> = relabel.values().copied().collect();
    cells.sort_unstable();
    cells.dedup();
    let mut edges: Vec<(SCell, SCell)> = Vec::new();
    for &(a, b) in &raw_edges {
        let la = relabel[&a];
        let lb = relabel[&b];
        if la == lb {
            continue; // interior edge of a contracted strip
        }
        let (x, y) = if la <= lb { (la, lb) } else { (lb, la) };
        edges.push((x, y));
    }
    edges.sort_unstable();
    // also keep isolated vertices (they stay in `cells`)
    OracleSphere { cells, edges }
}

/// Regular sphere of an immersed non-cyclic vertical path, built from the
/// definition over the second cubical subdivision.
pub fn oracle_regular_sphere(cx: &SquareComplex, word: &[SignedEdge]) -> OracleSphere {
    build_oracle(cx, word, None)
}

/// Regular sphere of a vertex, from the definition.
pub fn oracle_vertex_sphere(cx: &SquareComplex, v: Vert) -> OracleSphere {
    build_oracle(cx, &[], Some(v))
}

/// Compare the incremental sphere with the from-definition construction as
/// labelled graphs; returns a description of the first discrepancy.
pub fn compare_with_incremental(
    cx: &SquareComplex,
    sphere: &super::SphereGraph,
    oracle: &OracleSphere,
) -> Result<(), String> {
    let _ = cx;
    let mut inc_cells: Vec<SCell> = sphere.cells().to_vec();
    inc_cells.sort_unstable();
    if inc_cells != oracle.cells {
        for c in &inc_cells {
            if !oracle.cells.contains(c) {
                return Err(format!("incremental cell {c:?} missing from oracle"));
            }
        }
        for c in &oracle.cells {
            if !inc_cells.contains(c) {
                return Err(format!("oracle cell {c:?} missing from incremental"));
            }
        }
        return Err("cell multiset mismatch".to_string());
    }
    let mut inc_edges: Vec<(SCell, SCell)> = sphere
        .edges()
        .iter()
        .map(|&(a, b)| {
            let (a, b) = (sphere.cells()[a as usize], sphere.cells()[b as usize]);
            if a <= b {
                (a, b)
            } else {
                (b, a)
            }
        })
        .collect();
    inc_edges.sort_unstable();
    if inc_edges != oracle.edges {
        return Err(format!(
            "edge multiset mismatch: incremental has {} edges, oracle {}",
            inc_edges.len(),
            oracle.edges.len()
        ));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::sphere::{regular_sphere, vertex_sphere};

    #[test]
    fn oracle_matches_vertex_sphere_on_grid() {
        let g = fixtures::grid33();
        for v in 0..g.n_verts() as Vert {
            let inc = vertex_sphere(&g, v);
            let orc = oracle_vertex_sphere(&g, v);
            compare_with_incremental(&g, &inc, &orc).unwrap();
        }
    }

    #[test]
    fn oracle_matches_on_grid_paths() {
        let g = fixtures::grid33();
        // a row path of length 3
        let word: Vec<SignedEdge> =
            (0..3).map(|x| SignedEdge::new((3 + x) as VEdge, true)).collect();
        for len in 1..=3 {
            let w = &word[..len];
            let inc = regular_sphere(&g, w).unwrap();
            let orc = oracle_regular_sphere(&g, w);
            compare_with_incremental(&g, &inc, &orc).unwrap();
        }
    }

    #[test]
    fn oracle_matches_on_dcomm_vertex_and_edges() {
        let x = fixtures::dcomm();
        let cx = x.complex();
        for v in 0..cx.n_verts() as Vert {
            let inc = vertex_sphere(cx, v);
            let orc = oracle_vertex_sphere(cx, v);
            compare_with_incremental(cx, &inc, &orc).unwrap();
        }
        let word = &x.attaching_words()[0].3;
        for len in 1..=word.len() {
            let inc = regular_sphere(cx, &word[..len]).unwrap();
            let orc = oracle_regular_sphere(cx, &word[..len]);
            compare_with_incremental(cx, &inc, &orc).unwrap();
        }
    }
}
