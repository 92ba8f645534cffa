//! Refining an embedded graph into a simplicial triangulation of the surface
//! minus a disk, with a prescribed boundary length and edgewidth.

use std::collections::{BTreeMap, HashSet, VecDeque};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::filling::{isometric_filling, DiskComplex, FillingError};
use crate::homotopy;
use crate::surface_map::{Corner, EmbeddedGraph, MapError};

#[derive(Debug, Error)]
pub enum RefineError {
    #[error(transparent)]
    Map(#[from] MapError),
    #[error(transparent)]
    Filling(#[from] FillingError),
    #[error("sphere excluded: the input surface is a sphere")]
    Sphere,
    #[error("k >= {min} required, got {got}")]
    KTooSmall { min: usize, got: usize },
    #[error("face {face} has length {len} < 3")]
    ShortFace { face: usize, len: usize },
    #[error("map has no distinguished disk face")]
    NoDisk,
    #[error("the disk boundary is not a simple cycle")]
    DiskNotSimple,
    #[error("refinement check failed: {0}")]
    Check(String),
}

/// Branch sets and branch paths witnessing `G` as a minor of `H`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MinorModel {
    pub branch_vertices: Vec<Vec<usize>>,
    /// Vertex sequence of `H` realizing each edge of `G`, from the branch
    /// set of its first end to that of its second.
    pub branch_edges: Vec<Vec<usize>>,
}

#[derive(Debug, Clone)]
pub struct RefinedTriangulation {
    pub h: EmbeddedGraph,
    pub k: usize,
    pub model: MinorModel,
    pub h_prime: EmbeddedGraph,
}

impl RefinedTriangulation {
    /// Vertices of the boundary cycle of the disk face of `h`, in walk order.
    pub fn disk_boundary(&self) -> Vec<usize> {
        disk_walk_vertices(&self.h).unwrap_or_default()
    }
}

fn disk_walk_vertices(map: &EmbeddedGraph) -> Option<Vec<usize>> {
    let table = map.face_table();
    let f = map.disk_face(&table)?;
    Some(table.walks[f].vertices(map))
}

/// Puts a pendant vertex carrying a loop inside `face`; the inside of the
/// loop becomes the distinguished disk face. The pendant edge goes to the
/// lowest-id vertex on the face walk.
pub fn attach_boundary_loop(map: &EmbeddedGraph, face: usize) -> Result<EmbeddedGraph, RefineError> {
    let table = map.face_table();
    let walk = table.walks.get(face).ok_or(MapError::FaceNotFound(face))?;
    let corner = (0..walk.len())
        .min_by_key(|&i| (map.tail(walk.corners[i].dart), i))
        .ok_or(MapError::FaceNotFound(face))?;
    let (out, _, _) = map.add_loop_in_face(face, corner)?;
    Ok(out)
}

/// Replaces every edge by a path of `k` edges. The second value lists, for
/// each original edge, the vertices of its path from its first end.
pub fn subdivide_all(map: &EmbeddedGraph, k: usize) -> (EmbeddedGraph, Vec<Vec<usize>>) {
    let mut out = map.clone();
    let mut paths = Vec::with_capacity(map.edge_count());
    for e in 0..map.edge_count() {
        let [a, b] = map.edge(e).ends;
        let mut path = vec![a];
        let mut last = e;
        for _ in 1..k.max(1) {
            let (w, f) = out
                .subdivide_in_place(last)
                .expect("edge ids below the original count exist");
            path.push(w);
            last = f;
        }
        path.push(b);
        paths.push(path);
    }
    (out, paths)
}

/// Glues an isometric filling into every face other than the disk face.
pub fn fill_all_faces(map: &EmbeddedGraph) -> Result<EmbeddedGraph, RefineError> {
    let table = map.face_table();
    let disk = map.disk_face(&table);
    let mut fillings: BTreeMap<usize, DiskComplex> = BTreeMap::new();
    for (f, walk) in table.walks.iter().enumerate() {
        if Some(f) == disk {
            continue;
        }
        if walk.len() < 3 {
            return Err(RefineError::ShortFace {
                face: f,
                len: walk.len(),
            });
        }
        if walk.len() > 3 && !fillings.contains_key(&walk.len()) {
            fillings.insert(walk.len(), isometric_filling(walk.len())?);
        }
    }
    let jobs: Vec<(Vec<Corner>, &DiskComplex)> = table
        .walks
        .iter()
        .enumerate()
        .filter(|&(f, w)| Some(f) != disk && w.len() > 3)
        .map(|(_, w)| (w.corners.clone(), &fillings[&w.len()]))
        .collect();
    Ok(map.glue_disks(&jobs)?)
}

/// Triangulates the disk face by a fan from its lowest-id vertex. The
/// result has no distinguished face.
pub fn triangulate_disk_d(map: &EmbeddedGraph) -> Result<EmbeddedGraph, RefineError> {
    let table = map.face_table();
    let f = map.disk_face(&table).ok_or(RefineError::NoDisk)?;
    let verts = table.walks[f].vertices(map);
    let distinct: HashSet<usize> = verts.iter().copied().collect();
    if verts.len() < 3 || distinct.len() != verts.len() {
        return Err(RefineError::DiskNotSimple);
    }
    let offset = (0..verts.len()).min_by_key(|&i| verts[i]).unwrap();
    let (out, _) = map.glue_disk(f, &DiskComplex::fan_polygon(verts.len()), offset)?;
    Ok(out)
}

/// Builds `H`: loop in `face`, `k`-subdivision, isometric fillings. Checks
/// simpliciality, the length of the disk boundary and the edgewidth.
pub fn build_prescribed_edgewidth(
    map: &EmbeddedGraph,
    face: usize,
    k: usize,
) -> Result<RefinedTriangulation, RefineError> {
    if k < 3 {
        return Err(RefineError::KTooSmall { min: 3, got: k });
    }
    if map.classify_surface()?.chi == 2 {
        return Err(RefineError::Sphere);
    }
    let base = map.clone().with_disk(None);
    let looped = attach_boundary_loop(&base, face)?;
    let (subdivided, paths) = subdivide_all(&looped, k);
    let h = fill_all_faces(&subdivided)?;

    let model = MinorModel {
        branch_vertices: (0..map.vertex_count()).map(|v| vec![v]).collect(),
        branch_edges: paths[..map.edge_count()].to_vec(),
    };
    if !h.is_simplicial() {
        return Err(RefineError::Check("H is not simplicial".into()));
    }
    let boundary = disk_walk_vertices(&h).ok_or(RefineError::NoDisk)?;
    if boundary.len() != k {
        return Err(RefineError::Check(format!(
            "disk boundary has length {}",
            boundary.len()
        )));
    }
    match homotopy::shortest_noncontractible(&h, k).map(|c| c.len()) {
        Some(w) if w == k => {}
        other => {
            return Err(RefineError::Check(format!(
                "shortest non-contractible cycle {other:?}, expected {k}"
            )))
        }
    }
    if !verify_minor_model(map, &h, &model) {
        return Err(RefineError::Check("minor model is invalid".into()));
    }
    let h_prime = triangulate_disk_d(&h)?;
    Ok(RefinedTriangulation {
        h,
        k,
        model,
        h_prime,
    })
}

/// Structural check of a minor model: disjoint connected branch sets and
/// internally disjoint branch paths joining the right sets.
pub fn verify_minor_model(g: &EmbeddedGraph, h: &EmbeddedGraph, model: &MinorModel) -> bool {
    let n = h.vertex_count();
    if model.branch_vertices.len() != g.vertex_count() || model.branch_edges.len() != g.edge_count()
    {
        return false;
    }
    let adj = h.simple_adjacency();
    let adjacent = |a: usize, b: usize| adj[a].contains(&b);
    let mut owner = vec![usize::MAX; n];
    for (v, set) in model.branch_vertices.iter().enumerate() {
        if set.is_empty() {
            return false;
        }
        for &x in set {
            if x >= n || owner[x] != usize::MAX {
                return false;
            }
            owner[x] = v;
        }
        // connectivity inside the set
        let mut seen = HashSet::from([set[0]]);
        let mut queue = VecDeque::from([set[0]]);
        while let Some(x) = queue.pop_front() {
            for &y in &adj[x] {
                if owner[y] == v && seen.insert(y) {
                    queue.push_back(y);
                }
            }
        }
        if seen.len() != set.len() {
            return false;
        }
    }
    let mut used = HashSet::new();
    for (e, path) in model.branch_edges.iter().enumerate() {
        let [a, b] = g.edge(e).ends;
        if path.len() < 2 || path.iter().any(|&x| x >= n) {
            return false;
        }
        if owner[path[0]] != a || owner[path[path.len() - 1]] != b {
            return false;
        }
        if path.windows(2).any(|w| !adjacent(w[0], w[1])) {
            return false;
        }
        for &x in &path[1..path.len() - 1] {
            if owner[x] != usize::MAX || !used.insert(x) {
                return false;
            }
        }
    }
    true
}
