//! Canonical test fixtures used across the crate.
//!
//! - `dcomm`: double of the rose on `a, b` along `a b a- b-` (a closed
//!   genus-two surface complex),
//! - `d33`: double of the rose on `a, b` along `a a a b b b`,
//! - `grid33`: a flat 3x3 grid patch, realised directly as a square complex
//!   (it carries no tube structure and is used for local operations only),
//! - `g2`: the rose on `a, b, c, d` with the boundary word of the genus-two
//!   surface with one boundary component.

use crate::complex::*;

/// Double of a rose along the given word: two rose copies `L` and `R`, one
/// tube attaching by the same word on both sides.
pub fn double_of_rose_decl(word: &[(&str, bool)]) -> ComplexDecl {
    let mut letters: Vec<&str> = word.iter().map(|(e, _)| *e).collect();
    letters.sort_unstable();
    letters.dedup();
    let rose = |name: &str| GraphDecl {
        name: name.to_string(),
        verts: vec!["v".to_string()],
        edges: letters.iter().map(|e| (e.to_string(), "v".to_string(), "v".to_string())).collect(),
    };
    let attach = |graph: &str| AttachingDecl {
        graph: graph.to_string(),
        word: word.iter().map(|(e, f)| (e.to_string(), *f)).collect(),
    };
    ComplexDecl {
        graphs: vec![rose("L"), rose("R")],
        tubes: vec![TubeDecl { name: "t".to_string(), len: word.len(), end_a: attach("L"), end_b: attach("R") }],
        assert_hyperbolic: true,
    }
}

pub fn dcomm_decl() -> ComplexDecl {
    double_of_rose_decl(&[("a", true), ("b", true), ("a", false), ("b", false)])
}

pub fn dcomm() -> TubularComplex {
    TubularComplex::realize(dcomm_decl()).expect("dcomm is valid")
}

pub fn d33_decl() -> ComplexDecl {
    double_of_rose_decl(&[("a", true), ("a", true), ("a", true), ("b", true), ("b", true), ("b", true)])
}

pub fn d33() -> TubularComplex {
    TubularComplex::realize(d33_decl()).expect("d33 is valid")
}

/// Rose on `a, b` with one tube attached along `a` on both ends; the `b`
/// petal lies in no square, so the complex is not Brady-Meier.
pub fn rose_with_tube_along_a_decl() -> ComplexDecl {
    let rose = GraphDecl {
        name: "L".to_string(),
        verts: vec!["v".to_string()],
        edges: vec![
            ("a".to_string(), "v".to_string(), "v".to_string()),
            ("b".to_string(), "v".to_string(), "v".to_string()),
        ],
    };
    let attach = AttachingDecl { graph: "L".to_string(), word: vec![("a".to_string(), true)] };
    ComplexDecl {
        graphs: vec![rose],
        tubes: vec![TubeDecl { name: "t".to_string(), len: 1, end_a: attach.clone(), end_b: attach }],
        assert_hyperbolic: false,
    }
}

/// Vertex id of the grid vertex at `(x, y)`, `0 <= x, y <= 3`.
pub fn grid_vertex(x: u32, y: u32) -> Vert {
    y * 4 + x
}

/// A flat 3x3 grid patch. The x-direction edges are vertical, the
/// y-direction edges horizontal, so rows are vertical paths.
pub fn grid33() -> SquareComplex {
    let n_verts = 16;
    let mut vert_names = Vec::new();
    for y in 0..4u32 {
        for x in 0..4u32 {
            let _ = x;
            let _ = y;
        }
    }
    for v in 0..16u32 {
        vert_names.push(format!("{},{}", v % 4, v / 4));
    }
    // vertical edges: (x, y) -> (x + 1, y), index 3 * y + x
    let mut vedge_ends = Vec::new();
    let mut vedge_names = Vec::new();
    for y in 0..4u32 {
        for x in 0..3u32 {
            vedge_ends.push([grid_vertex(x, y), grid_vertex(x + 1, y)]);
            vedge_names.push(format!("r{},{}", x, y));
        }
    }
    let vedge = |x: u32, y: u32| (3 * y + x) as VEdge;
    // horizontal edges: (x, y) -> (x, y + 1), index 4 * y + x
    let mut hedge_ends = Vec::new();
    for y in 0..3u32 {
        for x in 0..4u32 {
            hedge_ends.push([grid_vertex(x, y), grid_vertex(x, y + 1)]);
        }
    }
    let hedge = |x: u32, y: u32| (4 * y + x) as HEdge;
    let mut squares = Vec::new();
    for y in 0..3u32 {
        for x in 0..3u32 {
            squares.push(Square {
                a: SignedEdge::new(vedge(x, y), true),
                b: SignedEdge::new(vedge(x, y + 1), true),
                left: hedge(x, y),
                right: hedge(x + 1, y),
            });
        }
    }
    SquareComplex::assemble(n_verts, vedge_ends, hedge_ends, squares, vert_names, vedge_names)
        .expect("grid is a valid square complex")
}

/// The rose on four petals.
pub fn g2_rose_decl() -> GraphDecl {
    GraphDecl {
        name: "S".to_string(),
        verts: vec!["v".to_string()],
        edges: ["a", "b", "c", "d"]
            .iter()
            .map(|e| (e.to_string(), "v".to_string(), "v".to_string()))
            .collect(),
    }
}

/// Boundary word of the once-punctured genus-two surface carried by the
/// four-petal rose: `a b a- b- c d c- d-`.
pub fn g2_boundary_word() -> Vec<(String, bool)> {
    [
        ("a", true),
        ("b", true),
        ("a", false),
        ("b", false),
        ("c", true),
        ("d", true),
        ("c", false),
        ("d", false),
    ]
    .iter()
    .map(|(e, f)| (e.to_string(), *f))
    .collect()
}

/// The double of the four-petal rose along the genus-two boundary word: a
/// closed genus-three surface complex, Brady-Meier.
pub fn g2_double() -> TubularComplex {
    let word: Vec<(&str, bool)> = vec![
        ("a", true),
        ("b", true),
        ("a", false),
        ("b", false),
        ("c", true),
        ("d", true),
        ("c", false),
        ("d", false),
    ];
    TubularComplex::realize(double_of_rose_decl(&word)).expect("g2 double is valid")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_shape() {
        let g = grid33();
        assert_eq!(g.n_verts(), 16);
        assert_eq!(g.n_vedges(), 12);
        assert_eq!(g.n_hedges(), 12);
        assert_eq!(g.n_squares(), 9);
        // rows are vertical components
        assert_eq!(g.n_graphs(), 4);
    }

    #[test]
    fn fixtures_realize() {
        assert_eq!(dcomm().complex().n_squares(), 8);
        assert_eq!(d33().complex().n_squares(), 12);
        assert_eq!(g2_double().complex().n_squares(), 16);
    }
}
