//! Sign classes of kernel vectors, the zero-set complex on a triangulated
//! surface, its blowup and contraction, and the Euler characteristic chain.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::fmt::Write as _;

use num_integer::Roots;
use serde::Serialize;
use thiserror::Error;

use crate::homotopy::{CutContext, CycleWalk};
use crate::spectral::{SignedVector, SimpleGraph};
use crate::surface_map::{Dart, EmbeddedGraph};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum NodalError {
    #[error("face {0} is not a triangle")]
    NotTriangle(usize),
    #[error("vector has {got} entries, map has {expected} vertices")]
    Dimension { expected: usize, got: usize },
    #[error("the zero vector has no sign classes")]
    ZeroVector,
    #[error("the vector does not vanish on the disk boundary")]
    DiskNotSolid,
    #[error("the triangulated map has no disk face")]
    NoDisk,
    #[error("heawood number needs chi <= 2, got {0}")]
    HeawoodDomain(i64),
    #[error("insufficient kernel: no nonzero kernel vector vanishes on the disk boundary")]
    InsufficientKernel,
}

/// Vertex lists `(V+, V0, V-)`.
pub type SignPartition = (Vec<usize>, Vec<usize>, Vec<usize>);

pub fn sign_partition(f: &SignedVector) -> Result<SignPartition, NodalError> {
    if f.is_zero_vector() {
        return Err(NodalError::ZeroVector);
    }
    Ok((f.plus(), f.zero(), f.minus()))
}

/// Every zero vertex has a positive neighbour iff it has a negative one.
pub fn check_plus_minus(g: &SimpleGraph, f: &SignedVector) -> bool {
    let s = f.signs();
    (0..g.vertex_count()).filter(|&v| s[v] == 0).all(|v| {
        let plus = g.neighbours(v).iter().any(|&u| s[u] > 0);
        let minus = g.neighbours(v).iter().any(|&u| s[u] < 0);
        plus == minus
    })
}

/// Positive and negative classes are nonempty and induce connected
/// subgraphs.
pub fn check_nodal(g: &SimpleGraph, f: &SignedVector) -> bool {
    let s = f.signs();
    let plus: Vec<bool> = s.iter().map(|&x| x > 0).collect();
    let minus: Vec<bool> = s.iter().map(|&x| x < 0).collect();
    g.induces_connected(&plus) && g.induces_connected(&minus)
}

/// Intersection of the zero set with one triangle, by corner signs.
/// Corners are indexed 0..3; a crossing lies on an edge whose ends have
/// strictly opposite signs.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TriangleCase {
    Empty,
    CornerVertex(usize),
    CornerEdge(usize, usize),
    CornerToCrossing { corner: usize, edge: (usize, usize) },
    CrossingToCrossing((usize, usize), (usize, usize)),
    Solid,
}

pub fn triangle_trace(s: [i8; 3]) -> TriangleCase {
    let zeros: Vec<usize> = (0..3).filter(|&i| s[i] == 0).collect();
    match zeros.len() {
        3 => TriangleCase::Solid,
        2 => TriangleCase::CornerEdge(zeros[0], zeros[1]),
        1 => {
            let z = zeros[0];
            let (a, b) = ((z + 1) % 3, (z + 2) % 3);
            if s[a] == s[b] {
                TriangleCase::CornerVertex(z)
            } else {
                TriangleCase::CornerToCrossing {
                    corner: z,
                    edge: (a.min(b), a.max(b)),
                }
            }
        }
        _ => {
            let odd = (0..3).find(|&i| s[i] != s[(i + 1) % 3] && s[i] != s[(i + 2) % 3]);
            match odd {
                None => TriangleCase::Empty,
                Some(i) => {
                    let (a, b) = ((i + 1) % 3, (i + 2) % 3);
                    TriangleCase::CrossingToCrossing((i.min(a), i.max(a)), (i.min(b), i.max(b)))
                }
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum NodeKey {
    Vertex(usize),
    /// Interior point of the host edge between two vertices, smaller first.
    Crossing(usize, usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum SegmentKey {
    /// Along a host edge between two zero vertices.
    Host(usize, usize),
    /// Across the interior of a host face.
    InFace(usize),
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct ZeroComplex {
    pub nodes: Vec<NodeKey>,
    pub edges: Vec<([usize; 2], SegmentKey)>,
    /// Corner nodes and host face of each solid triangle.
    pub triangles: Vec<([usize; 3], usize)>,
}

impl ZeroComplex {
    pub fn euler_characteristic(&self) -> i64 {
        self.nodes.len() as i64 - self.edges.len() as i64 + self.triangles.len() as i64
    }
}

fn check_len(map: &EmbeddedGraph, f: &SignedVector) -> Result<(), NodalError> {
    if f.len() != map.vertex_count() {
        return Err(NodalError::Dimension {
            expected: map.vertex_count(),
            got: f.len(),
        });
    }
    Ok(())
}

fn triangle_vertices(map: &EmbeddedGraph) -> Result<Vec<[usize; 3]>, NodalError> {
    map.trace_faces()
        .iter()
        .enumerate()
        .map(|(i, w)| {
            let v = w.vertices(map);
            if v.len() == 3 {
                Ok([v[0], v[1], v[2]])
            } else {
                Err(NodalError::NotTriangle(i))
            }
        })
        .collect()
}

#[derive(Default)]
struct Builder {
    node_ids: HashMap<NodeKey, usize>,
    edge_ids: HashMap<SegmentKey, usize>,
    out: ZeroComplex,
}

impl Builder {
    fn node(&mut self, key: NodeKey) -> usize {
        let next = self.out.nodes.len();
        *self.node_ids.entry(key).or_insert_with(|| {
            self.out.nodes.push(key);
            next
        })
    }

    fn edge(&mut self, a: NodeKey, b: NodeKey, key: SegmentKey) {
        let (na, nb) = (self.node(a), self.node(b));
        if !self.edge_ids.contains_key(&key) {
            self.edge_ids.insert(key, self.out.edges.len());
            self.out.edges.push(([na, nb], key));
        }
    }
}

fn crossing(a: usize, b: usize) -> NodeKey {
    NodeKey::Crossing(a.min(b), a.max(b))
}

fn host(a: usize, b: usize) -> SegmentKey {
    SegmentKey::Host(a.min(b), a.max(b))
}

/// Zero set of the piecewise-linear extension of `f` over the triangles
/// of `map`.
pub fn build_zero_complex(map: &EmbeddedGraph, f: &SignedVector) -> Result<ZeroComplex, NodalError> {
    check_len(map, f)?;
    let s = f.signs();
    let mut b = Builder::default();
    for (face, t) in triangle_vertices(map)?.into_iter().enumerate() {
        let v = |i: usize| NodeKey::Vertex(t[i]);
        match triangle_trace([s[t[0]], s[t[1]], s[t[2]]]) {
            TriangleCase::Empty => {}
            TriangleCase::CornerVertex(i) => {
                b.node(v(i));
            }
            TriangleCase::CornerEdge(i, j) => b.edge(v(i), v(j), host(t[i], t[j])),
            TriangleCase::CornerToCrossing { corner, edge: (i, j) } => {
                b.edge(v(corner), crossing(t[i], t[j]), SegmentKey::InFace(face))
            }
            TriangleCase::CrossingToCrossing((i, j), (k, l)) => b.edge(
                crossing(t[i], t[j]),
                crossing(t[k], t[l]),
                SegmentKey::InFace(face),
            ),
            TriangleCase::Solid => {
                for (i, j) in [(0, 1), (1, 2), (2, 0)] {
                    b.edge(v(i), v(j), host(t[i], t[j]));
                }
                let corners = [b.node(v(0)), b.node(v(1)), b.node(v(2))];
                b.out.triangles.push((corners, face));
            }
        }
    }
    Ok(b.out)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum BlownNode {
    Original(usize),
    /// Copy of an original node for one fan of solid triangles.
    Copy { of: usize, fan: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BlowupRecord {
    pub node: usize,
    /// Host faces of each contiguous fan, in rotation order.
    pub fans: Vec<Vec<usize>>,
    /// Copy node per fan; each is joined to the retained original node.
    pub copies: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BlownUpComplex {
    pub nodes: Vec<BlownNode>,
    /// Endpoints and whether the edge bounds a solid triangle.
    pub edges: Vec<([usize; 2], bool)>,
    pub triangles: Vec<([usize; 3], usize)>,
    pub records: Vec<BlowupRecord>,
}

impl BlownUpComplex {
    pub fn euler_characteristic(&self) -> i64 {
        self.nodes.len() as i64 - self.edges.len() as i64 + self.triangles.len() as i64
    }

    pub fn component_count(&self) -> usize {
        let mut uf: Vec<usize> = (0..self.nodes.len()).collect();
        fn find(uf: &mut [usize], mut x: usize) -> usize {
            while uf[x] != x {
                uf[x] = uf[uf[x]];
                x = uf[x];
            }
            x
        }
        for &([a, b], _) in &self.edges {
            let (ra, rb) = (find(&mut uf, a), find(&mut uf, b));
            uf[ra] = rb;
        }
        (0..uf.len()).filter(|&x| find(&mut uf, x) == x).count()
    }
}

/// Cyclic runs of solid faces around vertex `v`.
fn fans_at(map: &EmbeddedGraph, table: &crate::surface_map::FaceTable, v: usize, solid: &HashSet<usize>) -> Vec<Vec<usize>> {
    let around: Vec<usize> = map.rotation(v).iter().map(|&d: &Dart| table.gap_face(d)).collect();
    let m = around.len();
    let is_solid: Vec<bool> = around.iter().map(|f| solid.contains(f)).collect();
    if is_solid.iter().all(|&x| x) {
        return vec![around];
    }
    let start = (0..m).find(|&i| !is_solid[i]).unwrap();
    let mut fans = Vec::new();
    let mut current: Vec<usize> = Vec::new();
    for step in 1..=m {
        let i = (start + step) % m;
        if is_solid[i] {
            current.push(around[i]);
        } else if !current.is_empty() {
            fans.push(std::mem::take(&mut current));
        }
    }
    if !current.is_empty() {
        fans.push(current);
    }
    fans
}

/// Splits every node where solid triangles form two or more separate fans
/// into one copy per fan; the original node stays as the hub of a star
/// joining the copies and keeps the segments.
pub fn blowup(map: &EmbeddedGraph, z: &ZeroComplex) -> BlownUpComplex {
    let table = map.face_table();
    let solid: HashSet<usize> = z.triangles.iter().map(|t| t.1).collect();
    let mut nodes: Vec<BlownNode> = (0..z.nodes.len()).map(BlownNode::Original).collect();
    let mut edges: Vec<([usize; 2], bool)> = Vec::new();
    let mut records = Vec::new();
    // (node, host face) -> copy serving that face
    let mut copy_of: HashMap<(usize, usize), usize> = HashMap::new();
    for (id, key) in z.nodes.iter().enumerate() {
        let NodeKey::Vertex(v) = *key else { continue };
        let fans = fans_at(map, &table, v, &solid);
        if fans.len() < 2 {
            continue;
        }
        let mut copies = Vec::new();
        for (i, fan) in fans.iter().enumerate() {
            let c = nodes.len();
            nodes.push(BlownNode::Copy { of: id, fan: i });
            edges.push(([id, c], false));
            for &f in fan {
                copy_of.insert((id, f), c);
            }
            copies.push(c);
        }
        records.push(BlowupRecord {
            node: id,
            fans,
            copies,
        });
    }
    let rebind = |n: usize, face: usize| *copy_of.get(&(n, face)).unwrap_or(&n);
    let mut faces_on_edge: HashMap<SegmentKey, usize> = HashMap::new();
    for &(_, face) in &z.triangles {
        let t = table.walks[face].vertices(map);
        for (i, j) in [(0, 1), (1, 2), (2, 0)] {
            faces_on_edge.entry(host(t[i], t[j])).or_insert(face);
        }
    }
    for &([a, b], key) in &z.edges {
        match faces_on_edge.get(&key) {
            Some(&face) => edges.push(([rebind(a, face), rebind(b, face)], true)),
            None => edges.push(([a, b], false)),
        }
    }
    let triangles = z
        .triangles
        .iter()
        .map(|&([a, b, c], face)| ([rebind(a, face), rebind(b, face), rebind(c, face)], face))
        .collect();
    BlownUpComplex {
        nodes,
        edges,
        triangles,
        records,
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum GammaVertex {
    Node(usize),
    /// Contracted solid component with its host faces.
    Component { faces: Vec<usize> },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ContractionGraph {
    pub vertices: Vec<GammaVertex>,
    pub edges: Vec<[usize; 2]>,
    /// Vertex for the component containing the disk.
    pub v_k: Option<usize>,
}

impl ContractionGraph {
    pub fn euler_characteristic(&self) -> i64 {
        self.vertices.len() as i64 - self.edges.len() as i64
    }

    pub fn degrees(&self) -> Vec<usize> {
        let mut d = vec![0; self.vertices.len()];
        for &[a, b] in &self.edges {
            d[a] += 1;
            d[b] += 1;
        }
        d
    }

    pub fn to_dot(&self) -> String {
        let mut out = String::from("graph gamma {\n");
        for (i, v) in self.vertices.iter().enumerate() {
            let attrs = match v {
                _ if Some(i) == self.v_k => "shape=doublecircle,color=red".to_string(),
                GammaVertex::Component { faces } => format!("shape=box,label=\"C{i} ({})\"", faces.len()),
                GammaVertex::Node(_) => "shape=point".to_string(),
            };
            writeln!(out, "  {i} [{attrs}];").unwrap();
        }
        for &[a, b] in &self.edges {
            writeln!(out, "  {a} -- {b};").unwrap();
        }
        out.push_str("}\n");
        out
    }
}

/// Contracts each connected union of solid triangles to one vertex.
/// `disk_faces` are host faces of the disk; the component holding them is
/// marked as `v_k`.
pub fn contract_2d(zb: &BlownUpComplex, disk_faces: &[usize]) -> Result<ContractionGraph, NodalError> {
    let n = zb.nodes.len();
    let mut uf: Vec<usize> = (0..n).collect();
    fn find(uf: &mut [usize], mut x: usize) -> usize {
        while uf[x] != x {
            uf[x] = uf[uf[x]];
            x = uf[x];
        }
        x
    }
    let mut in_solid = vec![false; n];
    for &([a, b, c], _) in &zb.triangles {
        for x in [a, b, c] {
            in_solid[x] = true;
        }
        for (x, y) in [(a, b), (b, c)] {
            let (rx, ry) = (find(&mut uf, x), find(&mut uf, y));
            uf[rx] = ry;
        }
    }
    let mut vertices = Vec::new();
    let mut index = vec![usize::MAX; n];
    let mut comp_index: BTreeMap<usize, usize> = BTreeMap::new();
    for x in 0..n {
        if in_solid[x] {
            let r = find(&mut uf, x);
            let id = *comp_index.entry(r).or_insert_with(|| {
                vertices.push(GammaVertex::Component { faces: Vec::new() });
                vertices.len() - 1
            });
            index[x] = id;
        } else {
            index[x] = vertices.len();
            vertices.push(GammaVertex::Node(x));
        }
    }
    let mut v_k = None;
    for &([a, _, _], face) in &zb.triangles {
        let id = index[a];
        if let GammaVertex::Component { faces } = &mut vertices[id] {
            faces.push(face);
        }
        if disk_faces.contains(&face) {
            v_k = Some(id);
        }
    }
    if !disk_faces.is_empty() && v_k.is_none() {
        return Err(NodalError::DiskNotSolid);
    }
    let edges = zb
        .edges
        .iter()
        .filter(|(_, solid)| !solid)
        .map(|&([a, b], _)| [index[a], index[b]])
        .collect();
    Ok(ContractionGraph { vertices, edges, v_k })
}

/// Euler characteristic and connectivity of the full subcomplex on the
/// vertices where `keep` holds.
fn induced_chi(map: &EmbeddedGraph, triangles: &[[usize; 3]], keep: &[bool]) -> (i64, bool) {
    let v = keep.iter().filter(|&&x| x).count() as i64;
    let e = SimpleGraph::from_map(map)
        .edges()
        .filter(|&(a, b)| keep[a] && keep[b])
        .count() as i64;
    let t = triangles
        .iter()
        .filter(|t| t.iter().all(|&x| keep[x]))
        .count() as i64;
    let connected = SimpleGraph::from_map(map).induces_connected(keep);
    (v - e + t, connected)
}

/// `(chi_P, chi_N, connected_P, connected_N)` from the full subcomplexes on
/// the positive and negative vertices.
pub fn chi_open_regions(map: &EmbeddedGraph, f: &SignedVector) -> Result<(i64, i64, bool, bool), NodalError> {
    check_len(map, f)?;
    let triangles = triangle_vertices(map)?;
    let s = f.signs();
    let plus: Vec<bool> = s.iter().map(|&x| x > 0).collect();
    let minus: Vec<bool> = s.iter().map(|&x| x < 0).collect();
    let (cp, kp) = induced_chi(map, &triangles, &plus);
    let (cn, kn) = induced_chi(map, &triangles, &minus);
    Ok((cp, cn, kp, kn))
}

/// `floor((7 + sqrt(49 - 24 chi)) / 2)`.
pub fn heawood_number(chi: i64) -> Result<i64, NodalError> {
    if chi > 2 {
        return Err(NodalError::HeawoodDomain(chi));
    }
    Ok((7 + (49 - 24 * chi).sqrt()) / 2)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Check {
    pub name: String,
    pub lhs: i64,
    pub relation: String,
    pub rhs: i64,
    pub holds: bool,
}

impl Check {
    fn new(name: &str, lhs: i64, relation: &str, rhs: i64) -> Self {
        let holds = match relation {
            "==" => lhs == rhs,
            "<=" => lhs <= rhs,
            ">=" => lhs >= rhs,
            _ => unreachable!("unknown relation"),
        };
        Self {
            name: name.to_string(),
            lhs,
            relation: relation.to_string(),
            rhs,
            holds,
        }
    }

    fn flag(name: &str, holds: bool) -> Self {
        Self::new(name, holds as i64, "==", 1)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BoundaryComponent {
    pub vertices: Vec<usize>,
    pub simple: bool,
    /// `None` when the boundary is not a simple cycle and was not tested.
    pub contractible: Option<bool>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AnalysisReport {
    pub chi_s: i64,
    pub k: usize,
    pub corank: usize,
    pub chi_z: i64,
    pub chi_blowup: i64,
    pub chi_gamma: i64,
    pub chi_p: i64,
    pub chi_n: i64,
    pub connected_p: bool,
    pub connected_n: bool,
    pub gamma_vertices: usize,
    pub gamma_edges: usize,
    pub min_degree_gamma: usize,
    pub deg_vk: usize,
    pub singular_vertices: usize,
    pub boundary_components_of_k: Vec<BoundaryComponent>,
    pub checks: Vec<Check>,
    pub all_pass: bool,
}

/// Inputs of one run: `h` carries the disk face, `h_prime` is `h` with the
/// disk triangulated on the same vertices.
pub struct ChainInput<'a> {
    pub h: &'a EmbeddedGraph,
    pub h_prime: &'a EmbeddedGraph,
    pub k: usize,
    pub corank: usize,
    pub f: &'a SignedVector,
}

fn sorted_triple(t: [usize; 3]) -> [usize; 3] {
    let mut t = t;
    t.sort_unstable();
    t
}

/// Faces of `h_prime` that triangulate the disk face of `h`.
pub fn disk_faces(h: &EmbeddedGraph, h_prime: &EmbeddedGraph) -> Result<Vec<usize>, NodalError> {
    let table = h.face_table();
    let disk = h.disk_face(&table).ok_or(NodalError::NoDisk)?;
    let mut outside: HashMap<[usize; 3], usize> = HashMap::new();
    for (i, w) in table.walks.iter().enumerate() {
        if i != disk {
            let v = w.vertices(h);
            if v.len() == 3 {
                *outside.entry(sorted_triple([v[0], v[1], v[2]])).or_insert(0) += 1;
            }
        }
    }
    let mut out = Vec::new();
    for (i, t) in triangle_vertices(h_prime)?.into_iter().enumerate() {
        match outside.get_mut(&sorted_triple(t)) {
            Some(c) if *c > 0 => *c -= 1,
            _ => out.push(i),
        }
    }
    Ok(out)
}

/// Boundary cycles of the union of the given host faces.
fn boundary_cycles(map: &EmbeddedGraph, faces: &[usize]) -> Vec<(Vec<usize>, bool)> {
    let table = map.face_table();
    let mut count: HashMap<(usize, usize), usize> = HashMap::new();
    for &f in faces {
        let v = table.walks[f].vertices(map);
        for i in 0..v.len() {
            let (a, b) = (v[i], v[(i + 1) % v.len()]);
            *count.entry((a.min(b), a.max(b))).or_insert(0) += 1;
        }
    }
    let mut adj: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for (&(a, b), &c) in &count {
        if c == 1 {
            adj.entry(a).or_default().push(b);
            adj.entry(b).or_default().push(a);
        }
    }
    for l in adj.values_mut() {
        l.sort_unstable();
    }
    let simple = adj.values().all(|l| l.len() == 2);
    let mut seen: HashSet<usize> = HashSet::new();
    let mut out = Vec::new();
    for &start in adj.keys() {
        if seen.contains(&start) {
            continue;
        }
        let mut cycle = vec![start];
        seen.insert(start);
        let mut prev = usize::MAX;
        let mut cur = start;
        loop {
            let next = adj[&cur].iter().copied().find(|&x| x != prev && !seen.contains(&x));
            match next {
                Some(x) => {
                    seen.insert(x);
                    cycle.push(x);
                    prev = cur;
                    cur = x;
                }
                None => break,
            }
        }
        out.push((cycle, simple));
    }
    out
}

/// Dot rendering of the contraction graph of `f` on `h_prime`.
pub fn gamma_dot(h: &EmbeddedGraph, h_prime: &EmbeddedGraph, f: &SignedVector) -> Result<String, NodalError> {
    let dfaces = disk_faces(h, h_prime)?;
    let z = build_zero_complex(h_prime, f)?;
    Ok(contract_2d(&blowup(h_prime, &z), &dfaces)?.to_dot())
}

/// Builds the zero complex of `f` on `h_prime` and evaluates every
/// inequality of the chain with exact integers.
pub fn evaluate_chain(input: &ChainInput<'_>) -> Result<AnalysisReport, NodalError> {
    let ChainInput { h, h_prime, k, corank, f } = *input;
    check_len(h_prime, f)?;
    if f.is_zero_vector() {
        return Err(NodalError::InsufficientKernel);
    }
    let dfaces = disk_faces(h, h_prime)?;
    let table = h_prime.face_table();
    let disk_vertices: HashSet<usize> = dfaces
        .iter()
        .flat_map(|&d| table.walks[d].vertices(h_prime))
        .collect();
    let signs = f.signs();
    if disk_vertices.iter().any(|&v| signs[v] != 0) {
        return Err(NodalError::DiskNotSolid);
    }

    let chi_s = h_prime.euler_characteristic();
    let z = build_zero_complex(h_prime, f)?;
    let zb = blowup(h_prime, &z);
    let gamma = contract_2d(&zb, &dfaces)?;
    let (chi_p, chi_n, connected_p, connected_n) = chi_open_regions(h_prime, f)?;
    let chi_z = z.euler_characteristic();
    let chi_blowup = zb.euler_characteristic();
    let chi_gamma = gamma.euler_characteristic();
    let degrees = gamma.degrees();
    let min_degree_gamma = degrees.iter().copied().min().unwrap_or(0);
    let v_k = gamma.v_k.ok_or(NodalError::DiskNotSolid)?;
    let deg_vk = degrees[v_k];

    let k_faces = match &gamma.vertices[v_k] {
        GammaVertex::Component { faces } => faces.clone(),
        GammaVertex::Node(_) => Vec::new(),
    };
    let ctx = CutContext::new(h);
    let boundary_components_of_k: Vec<BoundaryComponent> = boundary_cycles(h_prime, &k_faces)
        .into_iter()
        .map(|(vertices, simple)| {
            let contractible = if simple {
                CycleWalk::from_vertices(h, &vertices).and_then(|c| ctx.is_contractible(&c).ok())
            } else {
                None
            };
            BoundaryComponent {
                vertices,
                simple,
                contractible,
            }
        })
        .collect();

    let k_i = k as i64;
    let boundary_ok = !boundary_components_of_k.is_empty()
        && boundary_components_of_k
            .iter()
            .all(|b| b.contractible == Some(false) && b.vertices.len() >= k);
    let shortest_boundary = boundary_components_of_k
        .iter()
        .map(|b| b.vertices.len() as i64)
        .min()
        .unwrap_or(0);
    let checks = vec![
        Check::new("chi_S = chi_Z + chi_P + chi_N", chi_s, "==", chi_z + chi_p + chi_n),
        Check::new("chi_P <= 1", chi_p, "<=", 1),
        Check::new("chi_N <= 1", chi_n, "<=", 1),
        Check::flag("P and N nonempty and connected", connected_p && connected_n),
        Check::new("chi(blowup) = chi_Z", chi_blowup, "==", chi_z),
        Check::new("chi(Gamma) >= chi_Z", chi_gamma, ">=", chi_z),
        Check::new("min degree of Gamma >= 2", min_degree_gamma as i64, ">=", 2),
        Check::flag("boundary of K non-contractible in S minus D", boundary_ok),
        Check::new("shortest boundary component of K >= k", shortest_boundary, ">=", k_i),
        Check::new("deg(v_K) >= k", deg_vk as i64, ">=", k_i),
        Check::new("2 chi(Gamma) <= 2 - k", 2 * chi_gamma, "<=", 2 - k_i),
        Check::new("k <= 6 - 2 chi_S", k_i, "<=", 6 - 2 * chi_s),
    ];
    let all_pass = checks.iter().all(|c| c.holds);
    Ok(AnalysisReport {
        chi_s,
        k,
        corank,
        chi_z,
        chi_blowup,
        chi_gamma,
        chi_p,
        chi_n,
        connected_p,
        connected_n,
        gamma_vertices: gamma.vertices.len(),
        gamma_edges: gamma.edges.len(),
        min_degree_gamma,
        deg_vk,
        singular_vertices: zb.records.len(),
        boundary_components_of_k,
        checks,
        all_pass,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;

    #[test]
    fn sign_partitions() {
        let f = SignedVector::from_integers(&[1, 0, -1]);
        assert_eq!(sign_partition(&f).unwrap(), (vec![0], vec![1], vec![2]));
        assert_eq!(
            sign_partition(&SignedVector::from_integers(&[0, 0])),
            Err(NodalError::ZeroVector)
        );
    }

    #[test]
    fn plus_minus_examples() {
        let p3 = SimpleGraph::path(3);
        assert!(check_plus_minus(&p3, &SignedVector::from_integers(&[1, 0, -1])));
        assert!(!check_plus_minus(&p3, &SignedVector::from_integers(&[1, 0, 1])));
        assert!(check_plus_minus(&p3, &SignedVector::from_integers(&[1, 2, -1])));
        assert!(check_nodal(&p3, &SignedVector::from_integers(&[1, 0, -1])));
        assert!(!check_nodal(&p3, &SignedVector::from_integers(&[1, -1, 1])));
    }

    #[test]
    fn triangle_cases() {
        assert_eq!(triangle_trace([0, 0, 0]), TriangleCase::Solid);
        assert_eq!(triangle_trace([1, 1, 1]), TriangleCase::Empty);
        assert_eq!(
            triangle_trace([1, -1, 0]),
            TriangleCase::CornerToCrossing {
                corner: 2,
                edge: (0, 1)
            }
        );
        assert_eq!(triangle_trace([0, 1, 1]), TriangleCase::CornerVertex(0));
        assert_eq!(triangle_trace([0, -1, 0]), TriangleCase::CornerEdge(0, 2));
        assert_eq!(
            triangle_trace([1, 1, -1]),
            TriangleCase::CrossingToCrossing((0, 2), (1, 2))
        );
    }

    #[test]
    fn heawood_values() {
        assert_eq!(heawood_number(2), Ok(4));
        assert_eq!(heawood_number(0), Ok(7));
        assert_eq!(heawood_number(1), Ok(6));
        assert_eq!(heawood_number(-1), Ok(7));
        assert_eq!(heawood_number(-2), Ok(8));
        assert_eq!(heawood_number(3), Err(NodalError::HeawoodDomain(3)));
    }

    #[test]
    fn nowhere_zero_same_sign_is_empty() {
        let t = catalog::tetrahedron();
        let z = build_zero_complex(&t, &SignedVector::from_integers(&[1, 2, 3, 4])).unwrap();
        assert!(z.nodes.is_empty() && z.edges.is_empty());
        let (cp, cn, kp, kn) = chi_open_regions(&t, &SignedVector::from_integers(&[1, 2, 3, 4])).unwrap();
        assert_eq!((cp, cn, kp, kn), (2, 0, true, false));
    }

    #[test]
    fn zero_vertex_with_mixed_neighbours() {
        let t = catalog::tetrahedron();
        let f = SignedVector::from_integers(&[0, 1, -1, 1]);
        let z = build_zero_complex(&t, &f).unwrap();
        // a closed curve: vertex 0, crossings on 1-2 and 2-3, and a segment
        // across the face 1-2-3
        assert_eq!(z.nodes.len(), 3);
        assert_eq!(z.edges.len(), 3);
        assert_eq!(z.euler_characteristic(), 0);
        let (cp, cn, _, _) = chi_open_regions(&t, &f).unwrap();
        assert_eq!(t.euler_characteristic(), z.euler_characteristic() + cp + cn);
    }

    #[test]
    fn two_triangles_meeting_at_a_vertex_blow_up() {
        // octahedron with apex 0 and opposite apex 5
        let faces = vec![
            vec![0, 1, 2],
            vec![0, 2, 3],
            vec![0, 3, 4],
            vec![0, 4, 1],
            vec![5, 2, 1],
            vec![5, 3, 2],
            vec![5, 4, 3],
            vec![5, 1, 4],
        ];
        let oct = EmbeddedGraph::from_faces(6, &faces).unwrap();
        assert_eq!(oct.euler_characteristic(), 2);
        // vertex signs cannot make only two opposite faces at 0 solid, so
        // the zero complex is written out by hand
        let table = oct.face_table();
        let find = |t: [usize; 3]| {
            (0..table.len())
                .find(|&i| sorted_triple({
                    let v = table.walks[i].vertices(&oct);
                    [v[0], v[1], v[2]]
                }) == sorted_triple(t))
                .unwrap()
        };
        let (fa, fb) = (find([0, 1, 2]), find([0, 3, 4]));
        let key = |v| NodeKey::Vertex(v);
        let z = ZeroComplex {
            nodes: (0..5).map(key).collect(),
            edges: vec![
                ([0, 1], host(0, 1)),
                ([1, 2], host(1, 2)),
                ([0, 2], host(0, 2)),
                ([0, 3], host(0, 3)),
                ([3, 4], host(3, 4)),
                ([0, 4], host(0, 4)),
            ],
            triangles: vec![([0, 1, 2], fa), ([0, 3, 4], fb)],
        };
        let zb = blowup(&oct, &z);
        assert_eq!(zb.records.len(), 1);
        assert_eq!(zb.records[0].copies.len(), 2);
        assert_eq!(zb.euler_characteristic(), z.euler_characteristic());
        assert_eq!(zb.nodes.len(), z.nodes.len() + 2);
        assert_eq!(zb.component_count(), 1);
        let g = contract_2d(&zb, &[fa]).unwrap();
        // two disks joined through the hub: a path of three vertices
        assert_eq!((g.vertices.len(), g.edges.len()), (3, 2));
        assert_eq!(g.euler_characteristic(), 1);
        assert!(g.to_dot().contains("doublecircle"));
    }

    #[test]
    fn no_solid_cells_contract_to_themselves() {
        let t = catalog::tetrahedron();
        let f = SignedVector::from_integers(&[0, 1, -1, 1]);
        let z = build_zero_complex(&t, &f).unwrap();
        let zb = blowup(&t, &z);
        assert_eq!(zb.nodes.len(), z.nodes.len());
        let g = contract_2d(&zb, &[]).unwrap();
        assert_eq!((g.vertices.len(), g.edges.len()), (3, 3));
        assert!(contract_2d(&zb, &[0]).is_err());
    }

    #[test]
    fn cell_counts() {
        let single = ZeroComplex {
            nodes: (0..3).map(NodeKey::Vertex).collect(),
            edges: vec![
                ([0, 1], host(0, 1)),
                ([1, 2], host(1, 2)),
                ([0, 2], host(0, 2)),
            ],
            triangles: vec![([0, 1, 2], 0)],
        };
        assert_eq!(single.euler_characteristic(), 1);
    }
}
