//! Cellularly embedded graphs encoded as rotation systems with edge signs.
//!
//! Edge `e` owns darts `2e` (at `ends[0]`) and `2e + 1` (at `ends[1]`). Every
//! vertex stores the cyclic order of its darts; an edge with sign `Minus`
//! reverses the local orientation when it is crossed. Faces are traced with
//! the usual generalized face-traversal procedure, which makes the rotation
//! system define a closed surface on its own.

use std::collections::VecDeque;

use serde::{Deserialize, Serialize};
use thiserror::Error;

mod format;
mod surgery;

pub use format::{parse_map, write_map};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MapError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("invalid map: {0}")]
    Structure(String),
    #[error("map is disconnected")]
    Disconnected,
    #[error("face {0} not found")]
    FaceNotFound(usize),
    #[error("edge {0} not found")]
    EdgeNotFound(usize),
    #[error("dart {dart} does not lie on face {face}")]
    DartNotOnFace { dart: usize, face: usize },
    #[error("face {face} has length {len}, expected {expected}")]
    FaceLength {
        face: usize,
        len: usize,
        expected: usize,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Dart(pub usize);

impl Dart {
    pub fn new(edge: usize, end: usize) -> Self {
        debug_assert!(end < 2);
        Dart(2 * edge + end)
    }

    pub fn edge(self) -> usize {
        self.0 / 2
    }

    pub fn end(self) -> usize {
        self.0 & 1
    }

    pub fn opposite(self) -> Self {
        Dart(self.0 ^ 1)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn from_agreement(same: bool) -> Self {
        if same {
            Sign::Plus
        } else {
            Sign::Minus
        }
    }

    pub fn is_plus(self) -> bool {
        self == Sign::Plus
    }

    pub fn value(self) -> i32 {
        match self {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Edge {
    pub ends: [usize; 2],
    pub sign: Sign,
}

impl Edge {
    pub fn is_loop(&self) -> bool {
        self.ends[0] == self.ends[1]
    }
}

/// A state of the face traversal: the walk leaves `tail(dart)` along `dart`
/// while the local orientation is `positive`. Each state also names the
/// corner of the face at `tail(dart)` just before the dart.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Corner {
    pub dart: Dart,
    pub positive: bool,
}

impl Corner {
    fn index(self) -> usize {
        2 * self.dart.0 + usize::from(!self.positive)
    }
}

/// Closed boundary walk of one face.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FaceWalk {
    pub corners: Vec<Corner>,
}

impl FaceWalk {
    pub fn len(&self) -> usize {
        self.corners.len()
    }

    pub fn is_empty(&self) -> bool {
        self.corners.is_empty()
    }

    pub fn darts(&self) -> impl Iterator<Item = Dart> + '_ {
        self.corners.iter().map(|c| c.dart)
    }

    pub fn vertices(&self, map: &EmbeddedGraph) -> Vec<usize> {
        self.corners.iter().map(|c| map.tail(c.dart)).collect()
    }

    pub fn position_of(&self, dart: Dart) -> Option<usize> {
        self.corners.iter().position(|c| c.dart == dart)
    }
}

/// All faces of a map together with lookup tables from traversal states,
/// corner gaps and edge sides back to face indices.
#[derive(Debug, Clone)]
pub struct FaceTable {
    pub walks: Vec<FaceWalk>,
    corner_face: Vec<usize>,
}

impl FaceTable {
    pub fn len(&self) -> usize {
        self.walks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.walks.is_empty()
    }

    pub fn face_of(&self, corner: Corner) -> usize {
        self.corner_face[corner.index()]
    }

    /// Face containing the angle between `dart` and its rotation successor.
    pub fn gap_face(&self, dart: Dart) -> usize {
        // A negative corner at `dart` sits between `dart` and its successor.
        self.face_of(Corner {
            dart,
            positive: false,
        })
    }

    /// The two faces on either side of an edge (equal when the edge is a
    /// bridge of its face or borders the same face twice).
    pub fn edge_sides(&self, edge: usize) -> [usize; 2] {
        let d = Dart::new(edge, 0);
        [
            self.face_of(Corner {
                dart: d,
                positive: true,
            }),
            self.face_of(Corner {
                dart: d,
                positive: false,
            }),
        ]
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SurfaceInfo {
    pub chi: i64,
    pub orientable: bool,
    pub genus_or_crosscaps: u64,
    pub vertex_count: usize,
    pub edge_count: usize,
    pub face_count: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EmbeddedGraph {
    edges: Vec<Edge>,
    rotations: Vec<Vec<Dart>>,
    position: Vec<usize>,
    disk: Option<Corner>,
}

impl EmbeddedGraph {
    /// Builds and validates a map. `disk`, when given, is any traversal state
    /// of the distinguished face.
    pub fn new(
        edges: Vec<Edge>,
        rotations: Vec<Vec<Dart>>,
        disk: Option<Corner>,
    ) -> Result<Self, MapError> {
        let dart_count = 2 * edges.len();
        for (id, e) in edges.iter().enumerate() {
            for &v in &e.ends {
                if v >= rotations.len() {
                    return Err(MapError::Structure(format!(
                        "edge {id} references missing vertex {v}"
                    )));
                }
            }
        }
        let mut position = vec![usize::MAX; dart_count];
        for (v, rot) in rotations.iter().enumerate() {
            if rot.is_empty() {
                return Err(MapError::Structure(format!(
                    "vertex {v} has an empty rotation"
                )));
            }
            for (i, &d) in rot.iter().enumerate() {
                if d.0 >= dart_count {
                    return Err(MapError::Structure(format!(
                        "vertex {v} lists dangling dart {}",
                        d.0
                    )));
                }
                if position[d.0] != usize::MAX {
                    return Err(MapError::Structure(format!(
                        "dart {} appears twice in the rotations",
                        d.0
                    )));
                }
                if edges[d.edge()].ends[d.end()] != v {
                    return Err(MapError::Structure(format!(
                        "dart {} is listed at vertex {v} but belongs to vertex {}",
                        d.0,
                        edges[d.edge()].ends[d.end()]
                    )));
                }
                position[d.0] = i;
            }
        }
        if let Some(d) = position.iter().position(|&p| p == usize::MAX) {
            return Err(MapError::Structure(format!(
                "dart {d} of edge {} is missing from every rotation",
                d / 2
            )));
        }
        if let Some(c) = disk {
            if c.dart.0 >= dart_count {
                return Err(MapError::Structure("disk face dart out of range".into()));
            }
        }
        Ok(Self {
            edges,
            rotations,
            position,
            disk,
        })
    }

    pub fn vertex_count(&self) -> usize {
        self.rotations.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge(&self, e: usize) -> &Edge {
        &self.edges[e]
    }

    pub fn rotation(&self, v: usize) -> &[Dart] {
        &self.rotations[v]
    }

    pub fn rotations(&self) -> &[Vec<Dart>] {
        &self.rotations
    }

    pub fn degree(&self, v: usize) -> usize {
        self.rotations[v].len()
    }

    pub fn tail(&self, d: Dart) -> usize {
        self.edges[d.edge()].ends[d.end()]
    }

    pub fn head(&self, d: Dart) -> usize {
        self.tail(d.opposite())
    }

    pub fn sign(&self, d: Dart) -> Sign {
        self.edges[d.edge()].sign
    }

    pub fn succ(&self, d: Dart) -> Dart {
        let rot = &self.rotations[self.tail(d)];
        rot[(self.position[d.0] + 1) % rot.len()]
    }

    pub fn pred(&self, d: Dart) -> Dart {
        let rot = &self.rotations[self.tail(d)];
        rot[(self.position[d.0] + rot.len() - 1) % rot.len()]
    }

    pub fn disk_corner(&self) -> Option<Corner> {
        self.disk
    }

    pub fn with_disk(mut self, disk: Option<Corner>) -> Self {
        self.disk = disk;
        self
    }

    /// One step of the face traversal.
    pub fn step(&self, c: Corner) -> Corner {
        let positive = c.positive == self.sign(c.dart).is_plus();
        let arrival = c.dart.opposite();
        let dart = if positive {
            self.succ(arrival)
        } else {
            self.pred(arrival)
        };
        Corner { dart, positive }
    }

    /// The state that walks the same face side in the opposite direction.
    pub fn reverse(&self, c: Corner) -> Corner {
        let positive = c.positive == self.sign(c.dart).is_plus();
        Corner {
            dart: c.dart.opposite(),
            positive: !positive,
        }
    }

    /// Face walks in deterministic order: faces are discovered by scanning
    /// darts by increasing id, positive orientation first.
    pub fn trace_faces(&self) -> Vec<FaceWalk> {
        self.face_table().walks
    }

    pub fn face_table(&self) -> FaceTable {
        let states = 4 * self.edges.len();
        let mut corner_face = vec![usize::MAX; states];
        let mut walks = Vec::new();
        for s in 0..states {
            if corner_face[s] != usize::MAX {
                continue;
            }
            let start = Corner {
                dart: Dart(s / 2),
                positive: s % 2 == 0,
            };
            let face = walks.len();
            let mut corners = Vec::new();
            let mut c = start;
            loop {
                corners.push(c);
                corner_face[c.index()] = face;
                corner_face[self.reverse(c).index()] = face;
                c = self.step(c);
                if c == start {
                    break;
                }
            }
            walks.push(FaceWalk { corners });
        }
        FaceTable { walks, corner_face }
    }

    pub fn face_count(&self) -> usize {
        self.face_table().len()
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.vertex_count() as i64 - self.edge_count() as i64 + self.face_count() as i64
    }

    /// Index of the distinguished face in `table`, if any.
    pub fn disk_face(&self, table: &FaceTable) -> Option<usize> {
        self.disk.map(|c| table.face_of(c))
    }

    pub fn is_connected(&self) -> bool {
        let n = self.vertex_count();
        if n == 0 {
            return true;
        }
        let mut seen = vec![false; n];
        let mut queue = VecDeque::from([0]);
        seen[0] = true;
        let mut count = 1;
        while let Some(v) = queue.pop_front() {
            for &d in &self.rotations[v] {
                let w = self.head(d);
                if !seen[w] {
                    seen[w] = true;
                    count += 1;
                    queue.push_back(w);
                }
            }
        }
        count == n
    }

    /// Local orientation flips making every sign positive, if they exist.
    pub fn orientation_switching(&self) -> Option<Vec<bool>> {
        let n = self.vertex_count();
        let mut flip: Vec<Option<bool>> = vec![None; n];
        for root in 0..n {
            if flip[root].is_some() {
                continue;
            }
            flip[root] = Some(false);
            let mut queue = VecDeque::from([root]);
            while let Some(v) = queue.pop_front() {
                let fv = flip[v].unwrap();
                for &d in &self.rotations[v] {
                    let w = self.head(d);
                    let want = fv ^ !self.sign(d).is_plus();
                    match flip[w] {
                        None => {
                            flip[w] = Some(want);
                            queue.push_back(w);
                        }
                        Some(fw) if fw != want => return None,
                        Some(_) => {}
                    }
                }
            }
        }
        Some(flip.into_iter().map(|f| f.unwrap()).collect())
    }

    pub fn classify_surface(&self) -> Result<SurfaceInfo, MapError> {
        if !self.is_connected() {
            return Err(MapError::Disconnected);
        }
        let face_count = self.face_count();
        let chi = self.vertex_count() as i64 - self.edge_count() as i64 + face_count as i64;
        let orientable = self.orientation_switching().is_some();
        let genus_or_crosscaps = if orientable { (2 - chi) / 2 } else { 2 - chi };
        Ok(SurfaceInfo {
            chi,
            orientable,
            genus_or_crosscaps: genus_or_crosscaps as u64,
            vertex_count: self.vertex_count(),
            edge_count: self.edge_count(),
            face_count,
        })
    }

    /// No loops, no parallel edges, every face a triangle on three distinct
    /// vertices; the distinguished face, if set, must instead be a simple
    /// cycle of length at least three.
    pub fn is_simplicial(&self) -> bool {
        let mut pairs = std::collections::HashSet::new();
        for e in &self.edges {
            if e.is_loop() {
                return false;
            }
            let key = (e.ends[0].min(e.ends[1]), e.ends[0].max(e.ends[1]));
            if !pairs.insert(key) {
                return false;
            }
        }
        let table = self.face_table();
        let disk = self.disk_face(&table);
        table.walks.iter().enumerate().all(|(i, w)| {
            let mut verts = w.vertices(self);
            let len = verts.len();
            verts.sort_unstable();
            verts.dedup();
            if Some(i) == disk {
                len >= 3 && verts.len() == len
            } else {
                len == 3 && verts.len() == 3
            }
        })
    }

    /// Neighbour lists of the underlying simple graph (loops dropped,
    /// parallel edges merged), sorted by vertex id.
    pub fn simple_adjacency(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.vertex_count()];
        for e in &self.edges {
            let [a, b] = e.ends;
            if a != b {
                adj[a].push(b);
                adj[b].push(a);
            }
        }
        for list in &mut adj {
            list.sort_unstable();
            list.dedup();
        }
        adj
    }

    /// Builds a map from oriented polygons glued along equal vertex pairs.
    /// Every vertex pair may occur in at most one edge and every edge must
    /// border exactly two polygon sides; vertex links must be single cycles.
    pub fn from_faces(vertex_count: usize, faces: &[Vec<usize>]) -> Result<Self, MapError> {
        surgery::from_faces(vertex_count, faces)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;

    #[test]
    fn tetrahedron_is_a_sphere() {
        let map = catalog::tetrahedron();
        assert_eq!(map.trace_faces().len(), 4);
        assert!(map.trace_faces().iter().all(|w| w.len() == 3));
        assert_eq!(map.euler_characteristic(), 2);
        let info = map.classify_surface().unwrap();
        assert!(info.orientable);
        assert_eq!(info.genus_or_crosscaps, 0);
        assert!(map.is_simplicial());
    }

    #[test]
    fn single_loops() {
        let plus = catalog::single_loop(Sign::Plus);
        assert_eq!(plus.trace_faces().len(), 2);
        assert_eq!(plus.euler_characteristic(), 2);
        assert!(!plus.is_simplicial());

        let minus = catalog::single_loop(Sign::Minus);
        let faces = minus.trace_faces();
        assert_eq!(faces.len(), 1);
        assert_eq!(faces[0].len(), 2);
        let info = minus.classify_surface().unwrap();
        assert_eq!(info.chi, 1);
        assert!(!info.orientable);
        assert_eq!(info.genus_or_crosscaps, 1);
    }

    #[test]
    fn k7_torus_scheme() {
        let map = catalog::k7_torus();
        assert_eq!(map.face_count(), 14);
        assert_eq!(map.euler_characteristic(), 0);
        let info = map.classify_surface().unwrap();
        assert!(info.orientable);
        assert_eq!(info.genus_or_crosscaps, 1);
        assert!(map.is_simplicial());
    }

    #[test]
    fn k6_projective_scheme() {
        let map = catalog::k6_projective();
        assert_eq!(
            (map.vertex_count(), map.edge_count(), map.face_count()),
            (6, 15, 10)
        );
        let info = map.classify_surface().unwrap();
        assert_eq!(info.chi, 1);
        assert!(!info.orientable);
        assert!(map.is_simplicial());
    }

    #[test]
    fn every_dart_side_on_exactly_one_face() {
        for map in [catalog::k7_torus(), catalog::k6_projective()] {
            let table = map.face_table();
            let total: usize = table.walks.iter().map(FaceWalk::len).sum();
            assert_eq!(total, 2 * map.edge_count());
            for (i, w) in table.walks.iter().enumerate() {
                for &c in &w.corners {
                    assert_eq!(table.face_of(c), i);
                    assert_eq!(table.face_of(map.reverse(c)), i);
                }
            }
        }
    }

    #[test]
    fn rejects_broken_structure() {
        let edges = vec![Edge {
            ends: [0, 1],
            sign: Sign::Plus,
        }];
        let missing = EmbeddedGraph::new(edges.clone(), vec![vec![Dart(0)], vec![]], None);
        assert!(matches!(missing, Err(MapError::Structure(_))));
        let wrong_vertex =
            EmbeddedGraph::new(edges.clone(), vec![vec![Dart(1)], vec![Dart(0)]], None);
        assert!(matches!(wrong_vertex, Err(MapError::Structure(_))));
        let dangling = EmbeddedGraph::new(edges, vec![vec![Dart(0)], vec![Dart(1), Dart(2)]], None);
        assert!(matches!(dangling, Err(MapError::Structure(_))));
    }

    #[test]
    fn disconnected_map_cannot_be_classified() {
        let edges = vec![
            Edge {
                ends: [0, 0],
                sign: Sign::Plus,
            },
            Edge {
                ends: [1, 1],
                sign: Sign::Plus,
            },
        ];
        let map = EmbeddedGraph::new(
            edges,
            vec![vec![Dart(0), Dart(1)], vec![Dart(2), Dart(3)]],
            None,
        )
        .unwrap();
        assert_eq!(map.classify_surface(), Err(MapError::Disconnected));
    }
}
