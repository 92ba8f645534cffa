//! Small reference embeddings used by tests, the CLI and the acceptance suite.

use std::collections::BTreeMap;

use crate::surface_map::{Dart, EmbeddedGraph, Edge, Sign};

/// Boundary of the tetrahedron on the sphere.
pub fn tetrahedron() -> EmbeddedGraph {
    let faces = [[0, 1, 2], [0, 2, 3], [0, 3, 1], [1, 3, 2]].map(|f| f.to_vec());
    EmbeddedGraph::from_faces(4, &faces).expect("tetrahedron")
}

/// One vertex with one loop. A positive loop gives the sphere, a negative
/// loop the projective plane.
pub fn single_loop(sign: Sign) -> EmbeddedGraph {
    EmbeddedGraph::new(
        vec![Edge { ends: [0, 0], sign }],
        vec![vec![Dart(0), Dart(1)]],
        None,
    )
    .expect("single loop")
}

/// Complete graph on `n` vertices with every rotation a shift of the one at
/// vertex 0, given as neighbour offsets.
pub fn circulant_scheme(n: usize, offsets: &[usize]) -> EmbeddedGraph {
    let mut ids = BTreeMap::new();
    let mut edges = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            ids.insert((i, j), edges.len());
            edges.push(Edge {
                ends: [i, j],
                sign: Sign::Plus,
            });
        }
    }
    let rotations = (0..n)
        .map(|v| {
            offsets
                .iter()
                .map(|&o| {
                    let w = (v + o) % n;
                    let id = ids[&(v.min(w), v.max(w))];
                    Dart::new(id, usize::from(v > w))
                })
                .collect()
        })
        .collect();
    EmbeddedGraph::new(edges, rotations, None).expect("circulant scheme")
}

/// K7 triangulating the torus: rotation at `i` is `i+1, i+3, i+2, i+6, i+4, i+5`.
pub fn k7_torus() -> EmbeddedGraph {
    circulant_scheme(7, &[1, 3, 2, 6, 4, 5])
}

/// K6 triangulating the projective plane (the half-icosahedron).
pub fn k6_projective() -> EmbeddedGraph {
    let faces = [
        [0, 1, 2],
        [0, 2, 3],
        [0, 3, 4],
        [0, 4, 5],
        [0, 5, 1],
        [1, 2, 4],
        [2, 3, 5],
        [3, 4, 1],
        [4, 5, 2],
        [5, 1, 3],
    ]
    .map(|f| f.to_vec());
    EmbeddedGraph::from_faces(6, &faces).expect("K6 on the projective plane")
}

/// Looks up a catalogue entry by name.
pub fn by_name(name: &str) -> Option<EmbeddedGraph> {
    match name {
        "tetrahedron" => Some(tetrahedron()),
        "k7-torus" => Some(k7_torus()),
        "k6-projective" => Some(k6_projective()),
        "loop" => Some(single_loop(Sign::Plus)),
        "twisted-loop" => Some(single_loop(Sign::Minus)),
        _ => None,
    }
}

pub const NAMES: [&str; 5] = ["tetrahedron", "k7-torus", "k6-projective", "loop", "twisted-loop"];
