//! Half-space counting, UC-separation, the crossing criterion, and the
//! splitting-cycle classifier.
//!
//! The number of half-spaces of a lift of a vertical cycle equals the
//! stabilised component count of the orthogonal spheres of doubled
//! fundamental domains. All separation decisions are made from this local
//! data; the finite-ball development in [`crate::cover`] exists as the
//! independent oracle.

use crate::complex::{SideOcc, SignedEdge, SquareComplex};
use crate::cycle::{self, CycleRecord, SelfIntersection};
use crate::sphere::{self, SCell, SphereGraph};
use std::collections::BTreeMap;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SeparationError {
    #[error("sphere error: {0}")]
    Sphere(#[from] sphere::SphereError),
    #[error("cycle error: {0}")]
    Cycle(#[from] cycle::CycleError),
    #[error("component counts failed to stabilise (complex is not Brady-Meier?)")]
    NoStabilization,
    #[error("deck translation does not permute the stable components")]
    DeckInconsistent,
    #[error("cycle is not UC-separating")]
    NotUcSeparating,
    #[error("exit cell is not on the sphere")]
    ExitNotOnSphere,
    #[error("complex is not Brady-Meier: {0}")]
    NotBradyMeier(String),
    #[error("resource cap: {0}")]
    ResourceCap(String),
}

/// Stable half-space labels of the lift of a primitive root cycle.
///
/// Labels are the components of the orthogonal sphere of a long window
/// (`2s + 1` copies of the root, where `s` doubling steps stabilised the
/// count), read off at the middle copy. The deck permutation records how
/// the positive generator of the cycle's fundamental group permutes them.
#[derive(Clone, Debug)]
pub struct HalfspaceLabeling {
    pub root: CycleRecord,
    /// number of half-spaces
    pub k: usize,
    /// stabilised number of root copies (a power of two)
    pub stabilized_copies: usize,
    /// component counts of the doubling sequence `P_1, P_2, P_4, ...`
    pub doubling_counts: Vec<usize>,
    /// the long window `root^(2s+1)` as a path word
    pub window: Vec<SignedEdge>,
    /// orthogonal sphere of the window; its components are the labels
    pub orth: SphereGraph,
    /// start of the middle copy inside the window
    pub mid: usize,
    /// label -> label under translation by one root period
    pub deck: Vec<u32>,
}

impl HalfspaceLabeling {
    /// Label of the pre-image of a square occurrence around the edge at
    /// local root position `pos` (read at the middle copy).
    pub fn strip_label(&self, pos: usize, occ: SideOcc) -> Option<u32> {
        let cell = SCell::Strip { edge_pos: (self.mid + pos) as u32, occ };
        self.orth.component_of(&cell)
    }

    /// The partition of square occurrences at the edge of local position
    /// `pos` into labels.
    pub fn occurrence_square_partition(
        &self,
        cx: &SquareComplex,
        pos: usize,
    ) -> Vec<(SideOcc, u32)> {
        let e = self.root.word[pos % self.root.word.len()].edge;
        cx.side_occs(e)
            .iter()
            .map(|&occ| (occ, self.strip_label(pos, occ).expect("strips survive in the orthogonal sphere")))
            .collect()
    }

    /// Apply the deck permutation `n` times.
    pub fn deck_power(&self, n: usize) -> Vec<u32> {
        let mut p: Vec<u32> = (0..self.k as u32).collect();
        for _ in 0..n {
            p = p.iter().map(|&x| self.deck[x as usize]).collect();
        }
        p
    }

    /// Trace the components of a sphere built over a subword of the window
    /// into the stable labels. `offset` is the absolute window position of
    /// the subword's start.
    pub fn trace_into_labels(
        &self,
        cx: &SquareComplex,
        sub: &SphereGraph,
        offset: usize,
    ) -> Result<Vec<Option<u32>>, SeparationError> {
        Ok(sphere::trace_components(cx, sub, &self.orth, offset)?)
    }
}

fn orbit_count(perm: &[u32]) -> usize {
    let mut seen = vec![false; perm.len()];
    let mut n = 0;
    for s in 0..perm.len() {
        if seen[s] {
            continue;
        }
        n += 1;
        let mut x = s as u32;
        while !seen[x as usize] {
            seen[x as usize] = true;
            x = perm[x as usize];
        }
    }
    n
}

fn is_transitive(perm: &[u32]) -> bool {
    orbit_count(perm) == 1
}

fn repeat_word(word: &[SignedEdge], n: usize) -> Vec<SignedEdge> {
    let mut out = Vec::with_capacity(word.len() * n);
    for _ in 0..n {
        out.extend_from_slice(word);
    }
    out
}

/// Compute the stable half-space labeling of a cycle. The labeling lives on
/// the primitive root: a cycle and its powers share the same lift, hence
/// the same half-spaces.
pub fn halfspace_labels(cx: &SquareComplex, c: &CycleRecord) -> Result<HalfspaceLabeling, SeparationError> {
    let root = CycleRecord {
        graph: c.graph,
        word: c.root.clone(),
        root: c.root.clone(),
        exponent: 1,
    };
    let ell = root.word.len();
    // component counts of doubled fundamental domains until two consecutive
    // counts agree
    let n_max = cx.max_thickness().max(2);
    let mut doubling_counts = Vec::new();
    let mut copies = 1usize;
    let mut prev: Option<usize> = None;
    let mut stabilized = None;
    loop {
        let w = repeat_word(&root.word, copies);
        let orth = sphere::orthogonal_sphere(cx, &w)?;
        let count = orth.component_count();
        doubling_counts.push(count);
        if prev == Some(count) {
            stabilized = Some(copies / 2);
            break;
        }
        prev = Some(count);
        if copies > (1 << (n_max + 1)) {
            break;
        }
        copies *= 2;
    }
    let s = stabilized.ok_or(SeparationError::NoStabilization)?;
    let window = repeat_word(&root.word, 2 * s + 1);
    let orth = sphere::orthogonal_sphere(cx, &window)?;
    let k = orth.component_count();
    if k != *doubling_counts.last().unwrap() {
        return Err(SeparationError::NoStabilization);
    }
    // deck permutation: the component containing a cell at position t maps
    // to the component containing the same local cell at position t + ell;
    // read over the interior band and require consistency
    let mut deck = vec![u32::MAX; k];
    for (i, cell) in orth.cells().iter().enumerate() {
        let t = cell.pos() as usize;
        if t < ell || t + ell >= window.len() {
            continue;
        }
        let shifted = match *cell {
            SCell::H { pos, end } => SCell::H { pos: pos + ell as u32, end },
            SCell::Corner { pos, corner } => SCell::Corner { pos: pos + ell as u32, corner },
            SCell::Strip { edge_pos, occ } => SCell::Strip { edge_pos: edge_pos + ell as u32, occ },
        };
        let Some(img) = orth.component_of(&shifted) else { continue };
        let src = orth.component_of_index(i as u32);
        if deck[src as usize] == u32::MAX {
            deck[src as usize] = img;
        } else if deck[src as usize] != img {
            return Err(SeparationError::DeckInconsistent);
        }
    }
    if deck.iter().any(|&x| x == u32::MAX) {
        return Err(SeparationError::DeckInconsistent);
    }
    {
        let mut seen = vec![false; k];
        for &x in &deck {
            if seen[x as usize] {
                return Err(SeparationError::DeckInconsistent);
            }
            seen[x as usize] = true;
        }
    }
    Ok(HalfspaceLabeling {
        root,
        k,
        stabilized_copies: s,
        doubling_counts,
        window,
        orth,
        mid: s * ell,
        deck,
    })
}

/// Permutation induced on the stable labels by translating one fundamental
/// domain of the primitive root. `π₁(C)` for `C = root^m` acts by its m-th
/// power.
pub fn deck_permutation(cx: &SquareComplex, c: &CycleRecord) -> Result<Vec<u32>, SeparationError> {
    Ok(halfspace_labels(cx, c)?.deck)
}

/// A cycle is UC-separating when its lift separates the cover: at least two
/// stable half-spaces.
pub fn is_uc_separating(cx: &SquareComplex, c: &CycleRecord) -> Result<bool, SeparationError> {
    Ok(halfspace_labels(cx, c)?.k >= 2)
}

/// Strongly UC-separating: the regular sphere of the cycle itself is
/// disconnected, i.e. the cyclic group of the cycle does not act
/// transitively on the half-spaces.
pub fn is_strongly_uc_separating(cx: &SquareComplex, c: &CycleRecord) -> Result<bool, SeparationError> {
    let q = sphere::quotient_sphere(cx, &c.word)?;
    Ok(q.component_count() >= 2)
}

/// Smallest `n` such that the n-th power of the cycle is strongly
/// UC-separating. Requires the cycle to be UC-separating.
pub fn separating_power(
    cx: &SquareComplex,
    c: &CycleRecord,
) -> Result<(usize, CycleRecord), SeparationError> {
    let labeling = halfspace_labels(cx, c)?;
    if labeling.k < 2 {
        return Err(SeparationError::NotUcSeparating);
    }
    for n in 1..=labeling.k {
        let p = labeling.deck_power(c.exponent * n);
        if !is_transitive(&p) {
            let rep = cycle::power_of(cx, c, n)?;
            return Ok((n, rep));
        }
    }
    Err(SeparationError::NotUcSeparating)
}

/// The data of a potential crossing: the exits of the two lines on the
/// sphere of their shared segment.
#[derive(Clone, Debug)]
pub struct CrossingInstance {
    pub a_exits: [SCell; 2],
    pub b_exits: [SCell; 2],
}

/// Crossing criterion on a sphere with no cut points: the lines cross if
/// and only if the exits of one separate the exits of the other.
pub fn crossing_test(sphere: &SphereGraph, inst: &CrossingInstance) -> Result<bool, SeparationError> {
    let a0 = sphere.cell_index(&inst.a_exits[0]).ok_or(SeparationError::ExitNotOnSphere)?;
    let a1 = sphere.cell_index(&inst.a_exits[1]).ok_or(SeparationError::ExitNotOnSphere)?;
    let b0 = sphere.cell_index(&inst.b_exits[0]).ok_or(SeparationError::ExitNotOnSphere)?;
    let b1 = sphere.cell_index(&inst.b_exits[1]).ok_or(SeparationError::ExitNotOnSphere)?;
    let (labels, _) = sphere.components_without(&[a0, a1]);
    let (c0, c1) = (labels[b0 as usize], labels[b1 as usize]);
    match (c0, c1) {
        (Some(x), Some(y)) => Ok(x != y),
        // an exit of B equal to an exit of A would mean the lines share
        // more than the segment
        _ => Err(SeparationError::ExitNotOnSphere),
    }
}

/// Sphere of the shared segment of a self-intersection together with the
/// two lines' exits.
pub fn self_intersection_instance(
    cx: &SquareComplex,
    c: &CycleRecord,
    si: &SelfIntersection,
) -> Result<(SphereGraph, CrossingInstance), SeparationError> {
    let root = &c.root;
    let n = root.len();
    let at = |i: i64| -> SignedEdge { root[((i % n as i64) + n as i64) as usize % n] };
    let m = si.segment.len();
    let sphere = if m == 0 {
        sphere::vertex_sphere(cx, si.base_vertex)
    } else {
        sphere::regular_sphere(cx, &si.segment)?
    };
    let a = si.occ_a.offset as i64;
    let a_exits = [
        SCell::H { pos: 0, end: sphere::CellEnd::V(cx.arrival_end(at(a - 1))) },
        SCell::H { pos: m as u32, end: sphere::CellEnd::V(cx.start_end(at(a + m as i64))) },
    ];
    let b = si.occ_b.offset as i64;
    let b_exits = if si.occ_b.forward {
        [
            SCell::H { pos: 0, end: sphere::CellEnd::V(cx.arrival_end(at(b - 1))) },
            SCell::H { pos: m as u32, end: sphere::CellEnd::V(cx.start_end(at(b + m as i64))) },
        ]
    } else {
        // lift B runs against the segment direction: at the segment start
        // it continues along its forward edge, at the end it arrives
        [
            SCell::H { pos: 0, end: sphere::CellEnd::V(cx.start_end(at(b))) },
            SCell::H { pos: m as u32, end: sphere::CellEnd::V(cx.arrival_end(at(b - m as i64 - 1))) },
        ]
    };
    Ok((sphere, CrossingInstance { a_exits, b_exits }))
}

/// Whether some translate of the lift crosses the lift itself. Computed on
/// the primitive root (the line and its translates are those of the root).
pub fn has_self_crossing(cx: &SquareComplex, c: &CycleRecord) -> Result<bool, SeparationError> {
    for si in cycle::self_intersection_components(cx, c) {
        let (sphere, inst) = self_intersection_instance(cx, c, &si)?;
        if crossing_test(&sphere, &inst)? {
            return Ok(true);
        }
    }
    Ok(false)
}

/// Outcome of the splitting-cycle test.
#[derive(Clone, Debug)]
pub struct ClassificationRecord {
    pub cycle: CycleRecord,
    /// number of half-spaces of the lift
    pub k: usize,
    /// condition (1): the regular sphere of the cycle is disconnected
    pub strongly_uc_separating: bool,
    /// condition (2): the cycle group is the stabiliser of a proper subset
    /// of the half-spaces
    pub stabilizer_of_proper_subset: bool,
    /// condition (3)
    pub no_self_crossing: bool,
    pub is_splitting: bool,
    /// smallest power of the primitive root that is a splitting cycle,
    /// when one exists (the minimal commensurable splitting representative)
    pub minimal_splitting_power: Option<usize>,
    pub splitting_representative: Option<CycleRecord>,
}

/// Smallest exact period of a proper nonempty label subset under the deck
/// permutation, if any.
fn minimal_proper_subset_period(deck: &[u32], k: usize) -> Option<usize> {
    if k < 2 || k > 24 {
        return if k >= 2 { Some(1).filter(|_| false) } else { None };
    }
    let mut best: Option<usize> = None;
    for mask in 1u32..(1 << k) - 1 {
        // period of the subset under the permutation
        let apply = |m: u32| -> u32 {
            let mut out = 0u32;
            for i in 0..k {
                if m & (1 << i) != 0 {
                    out |= 1 << deck[i];
                }
            }
            out
        };
        let mut d = 1;
        let mut cur = apply(mask);
        while cur != mask {
            cur = apply(cur);
            d += 1;
            if d > k * k {
                break;
            }
        }
        if cur == mask && best.map_or(true, |b| d < b) {
            best = Some(d);
            if d == 1 {
                break;
            }
        }
    }
    best
}

fn classify_inner(cx: &SquareComplex, c: &CycleRecord) -> Result<ClassificationRecord, SeparationError> {
    let labeling = halfspace_labels(cx, c)?;
    let k = labeling.k;
    let m = c.exponent;
    let strongly = k >= 2 && !is_transitive(&labeling.deck_power(m));
    let no_self_crossing = !has_self_crossing(cx, c)?;
    let min_period = minimal_proper_subset_period(&labeling.deck, k);
    let stabilizer_proper = min_period.is_some() && {
        // exists a proper subset whose exact period equals the exponent
        let deck = &labeling.deck;
        let mut found = false;
        if k >= 2 && k <= 24 {
            'outer: for mask in 1u32..(1 << k) - 1 {
                let apply = |mm: u32| -> u32 {
                    let mut out = 0u32;
                    for i in 0..k {
                        if mm & (1 << i) != 0 {
                            out |= 1 << deck[i];
                        }
                    }
                    out
                };
                let mut d = 1;
                let mut cur = apply(mask);
                while cur != mask && d <= k * k {
                    cur = apply(cur);
                    d += 1;
                }
                if cur == mask && d == m {
                    found = true;
                    break 'outer;
                }
            }
        }
        found
    };
    let is_splitting = strongly && stabilizer_proper && no_self_crossing;
    let (minimal_splitting_power, splitting_representative) = match (no_self_crossing, min_period) {
        (true, Some(p)) => {
            let rep_word = repeat_word(&c.root, p);
            let rep = cycle::normalize_cycle(cx, &rep_word)?;
            (Some(p), Some(rep))
        }
        _ => (None, None),
    };
    Ok(ClassificationRecord {
        cycle: c.clone(),
        k,
        strongly_uc_separating: strongly,
        stabilizer_of_proper_subset: stabilizer_proper,
        no_self_crossing,
        is_splitting,
        minimal_splitting_power,
        splitting_representative,
    })
}

/// Classify a cycle. Requires a Brady-Meier complex.
pub fn is_splitting_cycle(cx: &SquareComplex, c: &CycleRecord) -> Result<ClassificationRecord, SeparationError> {
    if let Err(w) = crate::complex::brady_meier_check(cx) {
        return Err(SeparationError::NotBradyMeier(format!("{w:?}")));
    }
    classify_inner(cx, c)
}

/// Result of the splitting-cycle search.
#[derive(Clone, Debug)]
pub struct SplittingList {
    /// splitting representatives, deduplicated by primitive root, sorted
    pub cycles: Vec<CycleRecord>,
    /// whether the enumeration was truncated below the theoretical bound
    pub truncated: bool,
    pub max_len_used: usize,
    pub theoretical_cap: Option<u128>,
}

/// Enumerate splitting cycles of length at most `max_len` over every vertex
/// graph, deduplicated by primitive root. Tube attaching cycles are always
/// included in the search regardless of length.
pub fn splitting_cycle_list(
    tc: &crate::complex::TubularComplex,
    max_len: usize,
    class_cap: usize,
) -> Result<SplittingList, SeparationError> {
    let cx = tc.complex();
    if let Err(w) = crate::complex::brady_meier_check(cx) {
        return Err(SeparationError::NotBradyMeier(format!("{w:?}")));
    }
    let e = cx.n_vedges() as u64;
    let f = cx.n_squares() as u64;
    let theoretical_cap = cycle::repetitive_length_bound(e, f, 3).ok().map(|b| b.cap);
    let truncated = theoretical_cap.map_or(true, |cap| (max_len as u128) < cap);

    // deduplicate by primitive root
    let mut roots: BTreeMap<Vec<SignedEdge>, CycleRecord> = BTreeMap::new();
    for g in 0..cx.n_graphs() as u16 {
        let cycles = enumerate_capped(cx, g, max_len, class_cap)?;
        for c in cycles {
            roots.entry(c.root.clone()).or_insert_with(|| CycleRecord {
                graph: c.graph,
                word: c.root.clone(),
                root: c.root.clone(),
                exponent: 1,
            });
        }
    }
    for (_, _, _, word) in tc.attaching_words() {
        let c = cycle::normalize_cycle(cx, &word)?;
        roots.entry(c.root.clone()).or_insert_with(|| CycleRecord {
            graph: c.graph,
            word: c.root.clone(),
            root: c.root.clone(),
            exponent: 1,
        });
    }

    let mut out = Vec::new();
    for (_, root) in roots {
        let record = classify_inner(cx, &root)?;
        if let Some(rep) = record.splitting_representative {
            out.push(rep);
        }
    }
    out.sort();
    out.dedup();
    Ok(SplittingList { cycles: out, truncated, max_len_used: max_len, theoretical_cap })
}

fn enumerate_capped(
    cx: &SquareComplex,
    g: u16,
    max_len: usize,
    class_cap: usize,
) -> Result<Vec<CycleRecord>, SeparationError> {
    cycle::enumerate_cycles(cx, g, max_len, class_cap).map_err(|e| match e {
        cycle::CycleError::EnumerationCap(n) => {
            SeparationError::ResourceCap(format!("cycle enumeration exceeded {n} classes"))
        }
        other => SeparationError::Cycle(other),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    fn tube_cycle(x: &crate::complex::TubularComplex) -> CycleRecord {
        let word = x.attaching_words()[0].3.clone();
        cycle::normalize_cycle(x.complex(), &word).unwrap()
    }

    #[test]
    fn dcomm_tube_cycle_has_two_halfspaces() {
        let x = fixtures::dcomm();
        let c = tube_cycle(&x);
        let l = halfspace_labels(x.complex(), &c).unwrap();
        assert_eq!(l.k, 2);
        // the surface cover preserves the two sides
        assert_eq!(l.deck, vec![0, 1]);
        // doubling counts are non-increasing and end in a repeat
        for w in l.doubling_counts.windows(2) {
            assert!(w[0] >= w[1]);
        }
    }

    #[test]
    fn k_bounded_by_thickness_along_cycle() {
        for x in [fixtures::dcomm(), fixtures::d33(), fixtures::g2_double()] {
            let cx = x.complex();
            let c = tube_cycle(&x);
            let l = halfspace_labels(cx, &c).unwrap();
            let min_th = c.root.iter().map(|se| cx.thickness(se.edge)).min().unwrap();
            assert!(l.k >= 1 && l.k <= min_th, "K = {}, min thickness {}", l.k, min_th);
        }
    }

    #[test]
    fn dcomm_tube_cycle_is_strongly_separating() {
        let x = fixtures::dcomm();
        let c = tube_cycle(&x);
        assert!(is_strongly_uc_separating(x.complex(), &c).unwrap());
        let (n, rep) = separating_power(x.complex(), &c).unwrap();
        assert_eq!(n, 1);
        assert_eq!(rep, c);
    }

    #[test]
    fn strongly_separating_agrees_with_deck_action() {
        for x in [fixtures::dcomm(), fixtures::d33()] {
            let cx = x.complex();
            let g = x.graph_id("L").unwrap();
            for c in cycle::enumerate_cycles(cx, g, 6, 10_000).unwrap() {
                let l = halfspace_labels(cx, &c).unwrap();
                let strong = is_strongly_uc_separating(cx, &c).unwrap();
                let via_deck = l.k >= 2 && !is_transitive(&l.deck_power(c.exponent));
                assert_eq!(strong, via_deck, "cycle {:?}", c.word);
            }
        }
    }

    #[test]
    fn grid_central_vertex_crossing() {
        // A enters and leaves the central vertex along the row, B along the
        // column: their exits alternate on the 8-cycle sphere
        let g = fixtures::grid33();
        let v = fixtures::grid_vertex(1, 1);
        let s = sphere::vertex_sphere(&g, v);
        use crate::complex::{HEnd, VEnd};
        use sphere::CellEnd;
        // row edges at v: vedge 4 (to the east), vedge 3 (to the west)
        let a_exits = [
            SCell::H { pos: 0, end: CellEnd::V(VEnd { edge: 4, end: 0 }) },
            SCell::H { pos: 0, end: CellEnd::V(VEnd { edge: 3, end: 1 }) },
        ];
        // column edges at v: hedges 5 (north) end 0 and 1 (south) end 1
        let b_exits = [
            SCell::H { pos: 0, end: CellEnd::Hor(HEnd { edge: 5, end: 0 }) },
            SCell::H { pos: 0, end: CellEnd::Hor(HEnd { edge: 1, end: 1 }) },
        ];
        let inst = CrossingInstance { a_exits, b_exits };
        assert!(crossing_test(&s, &inst).unwrap());
        // same side: no crossing
        let inst2 = CrossingInstance {
            a_exits,
            b_exits: [
                SCell::H { pos: 0, end: CellEnd::Hor(HEnd { edge: 5, end: 0 }) },
                SCell::H { pos: 0, end: CellEnd::Hor(HEnd { edge: 5, end: 0 }) },
            ],
        };
        assert!(!crossing_test(&s, &inst2).unwrap());
        // symmetry
        let sym = CrossingInstance { a_exits: inst.b_exits, b_exits: inst.a_exits };
        assert_eq!(crossing_test(&s, &inst).unwrap(), crossing_test(&s, &sym).unwrap());
    }

    #[test]
    fn tube_cycles_are_splitting() {
        for x in [fixtures::dcomm(), fixtures::d33(), fixtures::g2_double()] {
            let cx = x.complex();
            for (_, _, _, word) in x.attaching_words() {
                let c = cycle::normalize_cycle(cx, &word).unwrap();
                let r = is_splitting_cycle(cx, &c).unwrap();
                assert!(r.is_splitting, "attaching cycle {:?} must split", c.word);
            }
        }
    }

    #[test]
    fn splitting_list_contains_tube_class() {
        let x = fixtures::dcomm();
        let list = splitting_cycle_list(&x, 8, 100_000).unwrap();
        let c = tube_cycle(&x);
        assert!(list.cycles.iter().any(|r| r.root == c.root));
        let x33 = fixtures::d33();
        let list = splitting_cycle_list(&x33, 12, 100_000).unwrap();
        let c33 = tube_cycle(&x33);
        assert!(list.cycles.iter().any(|r| r.root == c33.root));
    }

    #[test]
    fn splitting_list_on_non_brady_meier_rejected() {
        let x = crate::complex::TubularComplex::realize(fixtures::rose_with_tube_along_a_decl()).unwrap();
        assert!(matches!(
            splitting_cycle_list(&x, 4, 1000),
            Err(SeparationError::NotBradyMeier(_))
        ));
    }
}
