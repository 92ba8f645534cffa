//! Map surgeries. All public operations return a new map; the in-place
//! helpers are crate-private so long constructions avoid re-cloning.

use std::collections::{BTreeMap, HashMap};

use super::{Corner, Dart, EmbeddedGraph, Edge, MapError, Sign};
use crate::filling::DiskComplex;

impl EmbeddedGraph {
    fn rebuild_positions(&mut self) {
        self.position = vec![usize::MAX; 2 * self.edges.len()];
        for rot in &self.rotations {
            for (i, d) in rot.iter().enumerate() {
                self.position[d.0] = i;
            }
        }
    }

    /// Splits edge `e` by a new vertex. Edge `e` keeps its id and sign and now
    /// ends at the new vertex; the returned edge id continues to the old head.
    pub(crate) fn subdivide_in_place(&mut self, e: usize) -> Result<(usize, usize), MapError> {
        if e >= self.edges.len() {
            return Err(MapError::EdgeNotFound(e));
        }
        let w = self.rotations.len();
        let f = self.edges.len();
        let b = self.edges[e].ends[1];
        let old = Dart::new(e, 1);
        let moved = Dart::new(f, 1);
        self.edges[e].ends[1] = w;
        self.edges.push(Edge {
            ends: [w, b],
            sign: Sign::Plus,
        });
        let pos = self.position[old.0];
        self.rotations[b][pos] = moved;
        self.rotations.push(vec![old, Dart::new(f, 0)]);
        self.position.extend([usize::MAX, usize::MAX]);
        self.position[moved.0] = pos;
        self.position[old.0] = 0;
        self.position[Dart::new(f, 0).0] = 1;
        if let Some(c) = self.disk {
            if c.dart == old {
                self.disk = Some(Corner {
                    dart: moved,
                    positive: c.positive,
                });
            }
        }
        Ok((w, f))
    }

    /// Returns the map with edge `e` subdivided, and the new vertex.
    pub fn subdivide_edge(&self, e: usize) -> Result<(EmbeddedGraph, usize), MapError> {
        let mut map = self.clone();
        let (w, _) = map.subdivide_in_place(e)?;
        Ok((map, w))
    }

    /// Adds a new vertex inside face `face`, joined by one edge to the corner
    /// at position `corner` of the face walk.
    pub fn add_vertex_in_face(
        &self,
        face: usize,
        corner: usize,
    ) -> Result<(EmbeddedGraph, usize), MapError> {
        let table = self.face_table();
        let walk = table.walks.get(face).ok_or(MapError::FaceNotFound(face))?;
        let c = *walk.corners.get(corner).ok_or(MapError::Structure(format!(
            "face {face} has no corner {corner}"
        )))?;
        let u = self.tail(c.dart);
        let w = self.vertex_count();
        let e = self.edge_count();
        let mut map = self.clone();
        map.edges.push(Edge {
            ends: [u, w],
            sign: Sign::from_agreement(c.positive),
        });
        map.rotations.push(vec![Dart::new(e, 1)]);
        let after = if c.positive { self.pred(c.dart) } else { c.dart };
        let pos = self.position[after.0];
        map.rotations[u].insert(pos + 1, Dart::new(e, 0));
        map.rebuild_positions();
        Ok((map, w))
    }

    /// Adds a pendant vertex at corner `corner` of `face` carrying a loop,
    /// and marks the one-sided face inside the loop as the disk face.
    /// Returns the map, the new vertex and the loop edge.
    pub fn add_loop_in_face(
        &self,
        face: usize,
        corner: usize,
    ) -> Result<(EmbeddedGraph, usize, usize), MapError> {
        let (mut map, w) = self.add_vertex_in_face(face, corner)?;
        let l = map.edges.len();
        map.edges.push(Edge {
            ends: [w, w],
            sign: Sign::Plus,
        });
        map.rotations[w].extend([Dart::new(l, 0), Dart::new(l, 1)]);
        map.position.extend([usize::MAX, usize::MAX]);
        map.rebuild_positions();
        let table = map.face_table();
        let inside = [Dart::new(l, 0), Dart::new(l, 1)]
            .into_iter()
            .flat_map(|dart| [true, false].map(|positive| Corner { dart, positive }))
            .find(|&c| table.walks[table.face_of(c)].len() == 1)
            .ok_or_else(|| MapError::Structure("loop bounds no 1-gon".into()))?;
        Ok((map.with_disk(Some(inside)), w, l))
    }

    /// Joins corners `i` and `j` of the walk of `face` by a new edge,
    /// splitting the face in two. Positions rather than darts, because on a
    /// non-orientable surface a dart can occur twice in one walk.
    pub fn add_edge_in_face(
        &self,
        face: usize,
        i: usize,
        j: usize,
    ) -> Result<EmbeddedGraph, MapError> {
        let table = self.face_table();
        let walk = table.walks.get(face).ok_or(MapError::FaceNotFound(face))?;
        if i >= walk.len() || j >= walk.len() || i == j {
            return Err(MapError::Structure(format!(
                "a face chord needs two distinct corners, got {i} and {j} of {}",
                walk.len()
            )));
        }
        let n = walk.len();
        // Polygon with one chord: boundary 0..n, chord between i and j.
        let (lo, hi) = (i.min(j), i.max(j));
        let first: Vec<usize> = (lo..=hi).collect();
        let second: Vec<usize> = (hi..n).chain(0..=lo).collect();
        let disk = DiskComplex::from_faces(n, vec![first, second], (0..n).collect())
            .map_err(|e| MapError::Structure(e.to_string()))?;
        Ok(self.glue_disk(face, &disk, 0)?.0)
    }

    /// Inserts a new vertex in `face` joined to every corner; the face needs
    /// at least three sides.
    pub fn star_face(&self, face: usize) -> Result<(EmbeddedGraph, usize), MapError> {
        let table = self.face_table();
        let n = table
            .walks
            .get(face)
            .ok_or(MapError::FaceNotFound(face))?
            .len();
        if n < 3 {
            return Err(MapError::FaceLength {
                face,
                len: n,
                expected: 3,
            });
        }
        let disk = DiskComplex::starred_polygon(n);
        let (map, vmap) = self.glue_disk(face, &disk, 0)?;
        Ok((map, vmap[n]))
    }

    /// Glues a disk into `face`, identifying disk boundary vertex `boundary[j]`
    /// with the corner at walk position `(offset + j) mod len`. Boundary edges
    /// of the disk are the existing face edges; all other disk edges and the
    /// interior vertices are created. Repeated corners of the face walk are
    /// identified, realizing the quotient of the disk boundary.
    ///
    /// Returns the new map and the image of every disk vertex. Gluing into
    /// the distinguished face clears it.
    pub fn glue_disk(
        &self,
        face: usize,
        disk: &DiskComplex,
        offset: usize,
    ) -> Result<(EmbeddedGraph, Vec<usize>), MapError> {
        let table = self.face_table();
        let walk = table.walks.get(face).ok_or(MapError::FaceNotFound(face))?;
        let n = walk.len();
        if disk.boundary.len() != n {
            return Err(MapError::FaceLength {
                face,
                len: n,
                expected: disk.boundary.len(),
            });
        }
        let mut patch = Patch::new(self);
        let corners: Vec<Corner> = (0..n).map(|j| walk.corners[(offset + j) % n]).collect();
        let vmap = patch.glue(disk, &corners)?;
        let mut map = patch.finish()?;
        if self.disk_face(&table) == Some(face) {
            map.disk = None;
        }
        Ok((map, vmap))
    }

    /// Glues one disk per listed face in a single pass. Faces must be
    /// distinct; the corner lists come from the current map.
    pub(crate) fn glue_disks(
        &self,
        jobs: &[(Vec<Corner>, &DiskComplex)],
    ) -> Result<EmbeddedGraph, MapError> {
        let mut patch = Patch::new(self);
        for (corners, disk) in jobs {
            patch.glue(disk, corners)?;
        }
        patch.finish()
    }
}

/// Pending insertions into a map: new edges, new vertices and darts to be
/// spliced into existing rotations right after a given dart.
struct Patch<'a> {
    base: &'a EmbeddedGraph,
    edges: Vec<Edge>,
    new_rotations: Vec<Vec<Dart>>,
    inserts: HashMap<Dart, Vec<Dart>>,
}

impl<'a> Patch<'a> {
    fn new(base: &'a EmbeddedGraph) -> Self {
        Self {
            base,
            edges: base.edges.clone(),
            new_rotations: Vec::new(),
            inserts: HashMap::new(),
        }
    }

    fn glue(&mut self, disk: &DiskComplex, corners: &[Corner]) -> Result<Vec<usize>, MapError> {
        let base = self.base;
        let n = corners.len();
        let mut boundary_pos = vec![None; disk.vertex_count];
        for (j, &b) in disk.boundary.iter().enumerate() {
            boundary_pos[b] = Some(j);
        }
        // Disk orientation is taken to agree with the walk orientation at
        // each corner; interior vertices carry the positive orientation.
        let mut vmap = vec![0; disk.vertex_count];
        let mut positive = vec![true; disk.vertex_count];
        let first_new = base.vertex_count() + self.new_rotations.len();
        let mut next = first_new;
        for x in 0..disk.vertex_count {
            match boundary_pos[x] {
                Some(j) => {
                    vmap[x] = base.tail(corners[j].dart);
                    positive[x] = corners[j].positive;
                }
                None => {
                    vmap[x] = next;
                    next += 1;
                }
            }
        }
        let mut dart_of: HashMap<(usize, usize), Dart> = HashMap::new();
        for &[x, y] in &disk.edges {
            if let (Some(i), Some(j)) = (boundary_pos[x], boundary_pos[y]) {
                if (i + 1) % n == j || (j + 1) % n == i {
                    continue;
                }
            }
            let id = self.edges.len();
            self.edges.push(Edge {
                ends: [vmap[x], vmap[y]],
                sign: Sign::from_agreement(positive[x] == positive[y]),
            });
            dart_of.insert((x, y), Dart::new(id, 0));
            dart_of.insert((y, x), Dart::new(id, 1));
        }
        let ccw = disk.ccw_successors();
        let dart = |x: usize, y: usize| -> Result<Dart, MapError> {
            dart_of.get(&(x, y)).copied().ok_or_else(|| {
                MapError::Structure(format!("disk edge {x}-{y} collides with the face boundary"))
            })
        };
        self.new_rotations
            .resize(next - base.vertex_count(), Vec::new());
        for x in 0..disk.vertex_count {
            match boundary_pos[x] {
                None => {
                    // Map orientation at interior vertices is clockwise in the disk.
                    let start = *ccw[x].keys().next().ok_or_else(|| {
                        MapError::Structure(format!("isolated disk vertex {x}"))
                    })?;
                    let mut order = vec![start];
                    let mut y = ccw[x][&start];
                    while y != start {
                        order.push(y);
                        y = ccw[x][&y];
                    }
                    order.reverse();
                    let rot = order
                        .into_iter()
                        .map(|y| dart(x, y))
                        .collect::<Result<Vec<_>, _>>()?;
                    self.new_rotations[vmap[x] - base.vertex_count()] = rot;
                }
                Some(j) => {
                    let next_b = disk.boundary[(j + 1) % n];
                    let prev_b = disk.boundary[(j + n - 1) % n];
                    let mut between = Vec::new();
                    let mut y = *ccw[x].get(&next_b).ok_or_else(|| {
                        MapError::Structure(format!("disk boundary is not oriented at {x}"))
                    })?;
                    while y != prev_b {
                        between.push(dart(x, y)?);
                        y = ccw[x][&y];
                        if between.len() > disk.vertex_count {
                            return Err(MapError::Structure("disk rotation does not close".into()));
                        }
                    }
                    let c = corners[j];
                    let anchor = if c.positive {
                        // walk rotation: incoming, inserted (clockwise), outgoing
                        between.reverse();
                        corners[(j + n - 1) % n].dart.opposite()
                    } else {
                        c.dart
                    };
                    let slot = self.inserts.entry(anchor).or_default();
                    if !slot.is_empty() {
                        return Err(MapError::Structure("corner glued twice".into()));
                    }
                    *slot = between;
                }
            }
        }
        Ok(vmap)
    }

    fn finish(self) -> Result<EmbeddedGraph, MapError> {
        let mut rotations: Vec<Vec<Dart>> = self
            .base
            .rotations
            .iter()
            .map(|rot| {
                let mut out = Vec::with_capacity(rot.len());
                for d in rot {
                    out.push(*d);
                    if let Some(ins) = self.inserts.get(d) {
                        out.extend(ins.iter().copied());
                    }
                }
                out
            })
            .collect();
        rotations.extend(self.new_rotations);
        EmbeddedGraph::new(self.edges, rotations, self.base.disk)
    }
}

pub(super) fn from_faces(vertex_count: usize, faces: &[Vec<usize>]) -> Result<EmbeddedGraph, MapError> {
    let structure = |msg: String| MapError::Structure(msg);
    let mut edge_ids: BTreeMap<(usize, usize), usize> = BTreeMap::new();
    let mut side_count: BTreeMap<(usize, usize), usize> = BTreeMap::new();
    for face in faces {
        if face.len() < 3 {
            return Err(structure("polygon with fewer than three sides".into()));
        }
        for i in 0..face.len() {
            let (a, b) = (face[i], face[(i + 1) % face.len()]);
            if a >= vertex_count || b >= vertex_count || a == b {
                return Err(structure(format!("bad polygon side {a}-{b}")));
            }
            *side_count.entry((a.min(b), a.max(b))).or_default() += 1;
        }
    }
    for (&key, &count) in &side_count {
        if count != 2 {
            return Err(structure(format!(
                "edge {}-{} borders {count} polygon sides",
                key.0, key.1
            )));
        }
        let id = edge_ids.len();
        edge_ids.insert(key, id);
    }
    let mut edges: Vec<Edge> = vec![
        Edge {
            ends: [0, 0],
            sign: Sign::Plus
        };
        edge_ids.len()
    ];
    for (&(a, b), &id) in &edge_ids {
        edges[id].ends = [a, b];
    }
    let dart = |from: usize, to: usize| -> Dart {
        let id = edge_ids[&(from.min(to), from.max(to))];
        Dart::new(id, usize::from(from > to))
    };

    // corners[v] = (prev, next) neighbour pairs of polygon corners at v
    let mut corners: Vec<Vec<(usize, usize)>> = vec![Vec::new(); vertex_count];
    for face in faces {
        let n = face.len();
        for i in 0..n {
            corners[face[i]].push((face[(i + n - 1) % n], face[(i + 1) % n]));
        }
    }
    let mut rotations = Vec::with_capacity(vertex_count);
    for (v, list) in corners.iter().enumerate() {
        if list.is_empty() {
            return Err(structure(format!("vertex {v} lies on no polygon")));
        }
        let mut used = vec![false; list.len()];
        let mut order = vec![list[0].0];
        used[0] = true;
        let mut current = list[0].1;
        while current != list[0].0 {
            order.push(current);
            let k = (0..list.len())
                .find(|&k| !used[k] && (list[k].0 == current || list[k].1 == current))
                .ok_or_else(|| structure(format!("link of vertex {v} is not a cycle")))?;
            used[k] = true;
            current = if list[k].0 == current {
                list[k].1
            } else {
                list[k].0
            };
        }
        if used.iter().any(|u| !u) {
            return Err(structure(format!("link of vertex {v} is not a single cycle")));
        }
        rotations.push(order.into_iter().map(|w| dart(v, w)).collect::<Vec<_>>());
    }
    let mut map = EmbeddedGraph::new(edges.clone(), rotations, None)?;

    // Sign of u-v from one polygon p -> u -> v -> w: the walk enters u from p
    // and must leave towards v, then leave v towards w.
    let mut signed = vec![false; edges.len()];
    for face in faces {
        let n = face.len();
        for i in 0..n {
            let (p, u, v, w) = (
                face[(i + n - 1) % n],
                face[i],
                face[(i + 1) % n],
                face[(i + 2) % n],
            );
            let d = dart(u, v);
            if signed[d.edge()] {
                continue;
            }
            signed[d.edge()] = true;
            let o_u = map.succ(dart(u, p)) == d;
            let o_v = map.succ(dart(v, u)) == dart(v, w);
            edges[d.edge()].sign = Sign::from_agreement(o_u == o_v);
        }
    }
    map.edges = edges;
    Ok(map)
}
