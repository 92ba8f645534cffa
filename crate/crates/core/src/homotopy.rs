//! Contractibility of simple cycles in `S∖D` by cutting and classifying the
//! pieces, and edgewidth by breadth-first lollipop search.

use std::collections::{HashSet, VecDeque};
use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::surface_map::{Dart, EmbeddedGraph, FaceTable};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum HomotopyError {
    #[error("walk is not closed at dart {0}")]
    NotClosed(usize),
    #[error("cycle is not simple")]
    NotSimple,
    #[error("empty walk")]
    Empty,
}

/// A closed walk given by its darts; each dart leaves the vertex the
/// previous one arrived at.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CycleWalk {
    pub darts: Vec<Dart>,
}

impl CycleWalk {
    pub fn new(map: &EmbeddedGraph, darts: Vec<Dart>) -> Result<Self, HomotopyError> {
        if darts.is_empty() {
            return Err(HomotopyError::Empty);
        }
        let n = darts.len();
        for i in 0..n {
            if map.head(darts[i]) != map.tail(darts[(i + 1) % n]) {
                return Err(HomotopyError::NotClosed(darts[i].0));
            }
        }
        Ok(Self { darts })
    }

    /// Closed walk through the given vertices, using the lowest-id edge
    /// between consecutive ones.
    pub fn from_vertices(map: &EmbeddedGraph, vertices: &[usize]) -> Option<Self> {
        let n = vertices.len();
        let mut darts = Vec::with_capacity(n);
        for i in 0..n {
            let (a, b) = (vertices[i], vertices[(i + 1) % n]);
            let d = map
                .rotation(a)
                .iter()
                .copied()
                .filter(|&d| map.head(d) == b)
                .min_by_key(|d| d.edge())?;
            darts.push(d);
        }
        Self::new(map, darts).ok()
    }

    pub fn len(&self) -> usize {
        self.darts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.darts.is_empty()
    }

    pub fn vertices(&self, map: &EmbeddedGraph) -> Vec<usize> {
        self.darts.iter().map(|&d| map.tail(d)).collect()
    }

    pub fn is_simple(&self, map: &EmbeddedGraph) -> bool {
        let vs: HashSet<usize> = self.darts.iter().map(|&d| map.tail(d)).collect();
        let es: HashSet<usize> = self.darts.iter().map(|d| d.edge()).collect();
        vs.len() == self.len() && es.len() == self.len()
    }

    /// Orientation-preserving iff the product of edge signs is +1.
    pub fn is_two_sided(&self, map: &EmbeddedGraph) -> bool {
        self.darts.iter().filter(|&&d| !map.sign(d).is_plus()).count() % 2 == 0
    }
}

/// One piece of the surface cut along a cycle.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CutComponent {
    pub chi: i64,
    /// Boundary circles formed by copies of the cycle.
    pub boundary_copies: usize,
    pub contains_disk: bool,
    pub face_count: usize,
}

impl CutComponent {
    pub fn is_disk(&self) -> bool {
        self.chi == 1 && self.boundary_copies == 1
    }
}

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn new(n: usize) -> Self {
        Self((0..n).collect())
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.0[x] != x {
            self.0[x] = self.0[self.0[x]];
            x = self.0[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.0[ra.max(rb)] = ra.min(rb);
        }
    }
}

/// Face table and disk face of a map, computed once for many cuts.
pub struct CutContext<'a> {
    map: &'a EmbeddedGraph,
    table: FaceTable,
    disk: Option<usize>,
}

impl<'a> CutContext<'a> {
    pub fn new(map: &'a EmbeddedGraph) -> Self {
        let table = map.face_table();
        let disk = map.disk_face(&table);
        Self { map, table, disk }
    }

    pub fn cut(&self, cycle: &CycleWalk) -> Result<Vec<CutComponent>, HomotopyError> {
        let map = self.map;
        if !cycle.is_simple(map) {
            return Err(HomotopyError::NotSimple);
        }
        let faces = self.table.len();
        let mut on_cycle_edge = vec![false; map.edge_count()];
        let mut on_cycle_vertex = vec![false; map.vertex_count()];
        for &d in &cycle.darts {
            on_cycle_edge[d.edge()] = true;
            on_cycle_vertex[map.tail(d)] = true;
        }
        let mut uf = UnionFind::new(faces);
        for e in 0..map.edge_count() {
            if !on_cycle_edge[e] {
                let [a, b] = self.table.edge_sides(e);
                uf.union(a, b);
            }
        }
        let mut index = vec![usize::MAX; faces];
        let mut comps: Vec<CutComponent> = Vec::new();
        for f in 0..faces {
            let r = uf.find(f);
            if index[r] == usize::MAX {
                index[r] = comps.len();
                comps.push(CutComponent {
                    chi: 0,
                    boundary_copies: 0,
                    contains_disk: false,
                    face_count: 0,
                });
            }
            let c = &mut comps[index[r]];
            c.chi += 1;
            c.face_count += 1;
            if Some(f) == self.disk {
                c.contains_disk = true;
            }
        }
        let comp_of = |f: usize, uf: &mut UnionFind| index[uf.find(f)];
        for e in 0..map.edge_count() {
            if !on_cycle_edge[e] {
                let c = comp_of(self.table.edge_sides(e)[0], &mut uf);
                comps[c].chi -= 1;
            }
        }
        for v in 0..map.vertex_count() {
            if !on_cycle_vertex[v] {
                if let Some(&d) = map.rotation(v).first() {
                    let c = comp_of(self.table.gap_face(d), &mut uf);
                    comps[c].chi += 1;
                }
            }
        }
        let first = cycle.darts[0].edge();
        let [left, right] = self.table.edge_sides(first);
        let (cl, cr) = (comp_of(left, &mut uf), comp_of(right, &mut uf));
        if cycle.is_two_sided(map) {
            comps[cl].boundary_copies += 1;
            comps[cr].boundary_copies += 1;
        } else {
            comps[cl].boundary_copies += 1;
        }
        Ok(comps)
    }

    /// True iff the cycle bounds a disk avoiding the distinguished face.
    pub fn is_contractible(&self, cycle: &CycleWalk) -> Result<bool, HomotopyError> {
        if !cycle.is_two_sided(self.map) {
            return Ok(false);
        }
        Ok(self
            .cut(cycle)?
            .iter()
            .any(|c| c.is_disk() && !c.contains_disk))
    }
}

pub fn cut_along_cycle(
    map: &EmbeddedGraph,
    cycle: &CycleWalk,
) -> Result<Vec<CutComponent>, HomotopyError> {
    CutContext::new(map).cut(cycle)
}

pub fn is_contractible(map: &EmbeddedGraph, cycle: &CycleWalk) -> Result<bool, HomotopyError> {
    CutContext::new(map).is_contractible(cycle)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Edgewidth {
    Finite(usize),
    Infinite,
}

impl fmt::Display for Edgewidth {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Edgewidth::Finite(w) => write!(f, "{w}"),
            Edgewidth::Infinite => write!(f, "infinite"),
        }
    }
}

struct BfsTree {
    dist: Vec<usize>,
    /// Dart arriving at each vertex from its parent.
    parent: Vec<Option<Dart>>,
    /// Child of the root whose subtree contains the vertex.
    top: Vec<usize>,
}

fn bfs_tree(map: &EmbeddedGraph, root: usize) -> BfsTree {
    let n = map.vertex_count();
    let mut dist = vec![usize::MAX; n];
    let mut parent = vec![None; n];
    let mut top = vec![usize::MAX; n];
    dist[root] = 0;
    top[root] = root;
    let mut queue = VecDeque::from([root]);
    while let Some(v) = queue.pop_front() {
        for &d in map.rotation(v) {
            let w = map.head(d);
            if dist[w] == usize::MAX {
                dist[w] = dist[v] + 1;
                parent[w] = Some(d);
                top[w] = if v == root { w } else { top[v] };
                queue.push_back(w);
            }
        }
    }
    BfsTree { dist, parent, top }
}

impl BfsTree {
    fn is_tree_edge(&self, map: &EmbeddedGraph, e: usize) -> bool {
        let [a, b] = map.edge(e).ends;
        [a, b]
            .iter()
            .any(|&x| self.parent[x].is_some_and(|d| d.edge() == e))
    }

    /// Darts from the root down to `v`.
    fn path_to(&self, map: &EmbeddedGraph, mut v: usize) -> Vec<Dart> {
        let mut out = Vec::new();
        while let Some(d) = self.parent[v] {
            out.push(d);
            v = map.tail(d);
        }
        out.reverse();
        out
    }

    fn lollipop(&self, map: &EmbeddedGraph, d: Dart) -> Vec<Dart> {
        let mut walk = self.path_to(map, map.tail(d));
        walk.push(d);
        walk.extend(
            self.path_to(map, map.head(d))
                .into_iter()
                .rev()
                .map(Dart::opposite),
        );
        walk
    }

    /// Non-tree edge through which the lollipop closes into a simple cycle.
    fn closes_simply(&self, map: &EmbeddedGraph, root: usize, e: usize) -> bool {
        let [a, b] = map.edge(e).ends;
        if self.dist[a] == usize::MAX || self.is_tree_edge(map, e) {
            return false;
        }
        if a == b {
            return a == root;
        }
        self.top[a] != self.top[b]
    }
}

/// Shortest simple non-contractible cycle of length at most `max_len`,
/// found among the fundamental cycles of breadth-first trees from every
/// vertex.
pub fn shortest_noncontractible(map: &EmbeddedGraph, max_len: usize) -> Option<CycleWalk> {
    let n = map.vertex_count();
    let mut buckets: Vec<Vec<(usize, usize)>> = Vec::new();
    for root in 0..n {
        let tree = bfs_tree(map, root);
        for e in 0..map.edge_count() {
            if !tree.closes_simply(map, root, e) {
                continue;
            }
            let [a, b] = map.edge(e).ends;
            let len = tree.dist[a] + tree.dist[b] + 1;
            if len <= max_len {
                if buckets.len() <= len {
                    buckets.resize(len + 1, Vec::new());
                }
                buckets[len].push((root, e));
            }
        }
    }
    let ctx = CutContext::new(map);
    let mut seen: HashSet<Vec<usize>> = HashSet::new();
    for bucket in &buckets {
        let mut current: Option<(usize, BfsTree)> = None;
        for &(root, e) in bucket {
            if current.as_ref().map(|c| c.0) != Some(root) {
                current = Some((root, bfs_tree(map, root)));
            }
            let tree = &current.as_ref().unwrap().1;
            let darts = tree.lollipop(map, Dart::new(e, 0));
            let mut key: Vec<usize> = darts.iter().map(|d| d.edge()).collect();
            key.sort_unstable();
            if !seen.insert(key) {
                continue;
            }
            let cycle = CycleWalk::new(map, darts).expect("lollipops are closed");
            if !ctx.is_contractible(&cycle).expect("lollipops are simple") {
                return Some(cycle);
            }
        }
    }
    None
}

pub fn edgewidth(map: &EmbeddedGraph) -> Edgewidth {
    match shortest_noncontractible(map, map.vertex_count()) {
        Some(c) => Edgewidth::Finite(c.len()),
        None => Edgewidth::Infinite,
    }
}

/// Exhaustive search over all simple cycles of length at most `max_len`.
/// `None` when every such cycle is contractible.
pub fn edgewidth_bruteforce(map: &EmbeddedGraph, max_len: usize) -> Option<usize> {
    let ctx = CutContext::new(map);
    let mut seen: HashSet<Vec<usize>> = HashSet::new();
    for len in 1..=max_len {
        for start in 0..map.vertex_count() {
            let mut path = Vec::new();
            let mut used = vec![false; map.vertex_count()];
            used[start] = true;
            if search(map, &ctx, start, start, len, &mut path, &mut used, &mut seen) {
                return Some(len);
            }
        }
    }
    None
}

/// Extends `path` from `v` through vertices above `start`; true once a
/// non-contractible cycle of exactly `len` edges closes at `start`.
#[allow(clippy::too_many_arguments)]
fn search(
    map: &EmbeddedGraph,
    ctx: &CutContext<'_>,
    start: usize,
    v: usize,
    len: usize,
    path: &mut Vec<Dart>,
    used: &mut [bool],
    seen: &mut HashSet<Vec<usize>>,
) -> bool {
    for &d in map.rotation(v) {
        if path.iter().any(|p| p.edge() == d.edge()) {
            continue;
        }
        let w = map.head(d);
        if path.len() + 1 == len {
            if w != start {
                continue;
            }
            path.push(d);
            let mut key: Vec<usize> = path.iter().map(|p| p.edge()).collect();
            key.sort_unstable();
            let found = seen.insert(key) && {
                let cycle = CycleWalk::new(map, path.clone()).expect("closed by construction");
                !ctx.is_contractible(&cycle).expect("simple by construction")
            };
            path.pop();
            if found {
                return true;
            }
        } else if w > start && !used[w] {
            used[w] = true;
            path.push(d);
            let found = search(map, ctx, start, w, len, path, used, seen);
            path.pop();
            used[w] = false;
            if found {
                return true;
            }
        }
    }
    false
}
