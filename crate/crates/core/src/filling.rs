//! Triangulated isometric fillings of cycle graphs.
//!
//! For `n = 2m` the filling is the union of the bounded cells of the dual of a
//! simple arrangement of `m` lines, one quadrilateral per crossing, with every
//! quadrilateral starred from a new interior vertex. Odd lengths insert one
//! vertex on a boundary edge first, which turns one quadrilateral into a
//! pentagon before starring. Coordinates are exact rationals throughout.

use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};

use num_rational::BigRational;
use num_traits::{Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::surface_map::{EmbeddedGraph, MapError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FillingError {
    #[error("a filling needs at least {min}, got {got}")]
    TooSmall { min: usize, got: usize },
    #[error("could not sample a generic arrangement of {0} lines")]
    RetryBudgetExhausted(usize),
    #[error("degenerate arrangement: {0}")]
    Degenerate(String),
    #[error("face with {0} sides cannot be starred")]
    FaceTooLarge(usize),
    #[error("invalid disk complex: {0}")]
    InvalidDisk(String),
}

const RETRY_BUDGET: usize = 1000;

/// Line `a x + b y = c`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Line {
    pub a: BigRational,
    pub b: BigRational,
    pub c: BigRational,
}

impl Line {
    fn side(&self, x: &BigRational, y: &BigRational) -> BigRational {
        &self.a * x + &self.b * y - &self.c
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LineArrangement {
    pub lines: Vec<Line>,
}

fn det2(l: &Line, k: &Line) -> BigRational {
    &l.a * &k.b - &k.a * &l.b
}

fn det3(l: &Line, k: &Line, h: &Line) -> BigRational {
    &l.a * (&k.b * &h.c - &h.b * &k.c) - &l.b * (&k.a * &h.c - &h.a * &k.c)
        + &l.c * (&k.a * &h.b - &h.a * &k.b)
}

impl LineArrangement {
    /// Every pair of lines crosses and no three lines share a point.
    pub fn is_generic(&self) -> bool {
        let n = self.lines.len();
        for i in 0..n {
            for j in i + 1..n {
                if det2(&self.lines[i], &self.lines[j]).is_zero() {
                    return false;
                }
                for k in j + 1..n {
                    if det3(&self.lines[i], &self.lines[j], &self.lines[k]).is_zero() {
                        return false;
                    }
                }
            }
        }
        true
    }

    pub fn crossing(&self, i: usize, j: usize) -> (BigRational, BigRational) {
        let (l, k) = (&self.lines[i], &self.lines[j]);
        let d = det2(l, k);
        let x = (&l.c * &k.b - &k.c * &l.b) / &d;
        let y = (&l.a * &k.c - &k.a * &l.c) / &d;
        (x, y)
    }

    /// Number of cells of the arrangement, counted from its sign vectors.
    pub fn face_count(&self) -> usize {
        self.sign_vectors().len()
    }

    fn sign_vectors(&self) -> BTreeSet<Vec<bool>> {
        let mut out = BTreeSet::new();
        let m = self.lines.len();
        for i in 0..m {
            for j in i + 1..m {
                for quad in self.quadrant_cells(i, j) {
                    out.insert(quad);
                }
            }
        }
        out
    }

    /// Sign vectors of the four cells around crossing `(i, j)`, counter-clockwise.
    fn quadrant_cells(&self, i: usize, j: usize) -> [Vec<bool>; 4] {
        let (x, y) = self.crossing(i, j);
        let base: Vec<bool> = self
            .lines
            .iter()
            .map(|l| l.side(&x, &y).is_positive())
            .collect();
        let ccw = if det2(&self.lines[i], &self.lines[j]).is_positive() {
            [(true, true), (false, true), (false, false), (true, false)]
        } else {
            [(true, true), (true, false), (false, false), (false, true)]
        };
        ccw.map(|(si, sj)| {
            let mut v = base.clone();
            v[i] = si;
            v[j] = sj;
            v
        })
    }
}

fn small_rational(rng: &mut ChaCha8Rng, range: i64) -> BigRational {
    let num = rng.gen_range(-range..=range);
    let den = rng.gen_range(1..=7);
    BigRational::new(num.into(), den.into())
}

fn random_line(rng: &mut ChaCha8Rng) -> Line {
    loop {
        let line = Line {
            a: small_rational(rng, 40),
            b: small_rational(rng, 40),
            c: small_rational(rng, 60),
        };
        if !(line.a.is_zero() && line.b.is_zero()) {
            return line;
        }
    }
}

/// Samples `m` exact-rational lines in general position. Lines that break
/// genericity are resampled, within a bounded budget.
pub fn random_generic_arrangement(m: usize, seed: u64) -> Result<LineArrangement, FillingError> {
    if m < 2 {
        return Err(FillingError::TooSmall { min: 2, got: m });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut arr = LineArrangement { lines: Vec::new() };
    let mut retries = 0;
    while arr.lines.len() < m {
        arr.lines.push(random_line(&mut rng));
        if !arr.is_generic() {
            arr.lines.pop();
            retries += 1;
            if retries > RETRY_BUDGET {
                return Err(FillingError::RetryBudgetExhausted(m));
            }
        }
    }
    Ok(arr)
}

/// A subdivided disk: polygons listed counter-clockwise and the boundary
/// cycle listed counter-clockwise (interior on the left).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DiskComplex {
    pub vertex_count: usize,
    pub edges: Vec<[usize; 2]>,
    pub faces: Vec<Vec<usize>>,
    pub boundary: Vec<usize>,
}

impl DiskComplex {
    pub fn from_faces(
        vertex_count: usize,
        faces: Vec<Vec<usize>>,
        boundary: Vec<usize>,
    ) -> Result<Self, FillingError> {
        let mut sides: BTreeMap<(usize, usize), usize> = BTreeMap::new();
        for f in &faces {
            if f.len() < 3 {
                return Err(FillingError::InvalidDisk("face with < 3 sides".into()));
            }
            for i in 0..f.len() {
                let (a, b) = (f[i], f[(i + 1) % f.len()]);
                if a >= vertex_count || b >= vertex_count || a == b {
                    return Err(FillingError::InvalidDisk(format!("bad side {a}-{b}")));
                }
                if sides.insert((a, b), i).is_some() {
                    return Err(FillingError::InvalidDisk(format!(
                        "directed side {a}->{b} used twice"
                    )));
                }
            }
        }
        let n = boundary.len();
        let boundary_sides: BTreeSet<(usize, usize)> = (0..n)
            .map(|j| (boundary[j], boundary[(j + 1) % n]))
            .collect();
        for &(a, b) in sides.keys() {
            let interior = sides.contains_key(&(b, a));
            let on_boundary = boundary_sides.contains(&(a, b));
            if interior == on_boundary {
                return Err(FillingError::InvalidDisk(format!(
                    "side {a}->{b} is neither interior nor a boundary side"
                )));
            }
        }
        if boundary_sides.iter().any(|s| !sides.contains_key(s)) {
            return Err(FillingError::InvalidDisk(
                "boundary side missing from faces".into(),
            ));
        }
        let edges: BTreeSet<[usize; 2]> = sides.keys().map(|&(a, b)| [a.min(b), a.max(b)]).collect();
        Ok(Self {
            vertex_count,
            edges: edges.into_iter().collect(),
            faces,
            boundary,
        })
    }

    /// Polygon `0..n` starred from vertex `n`.
    pub fn starred_polygon(n: usize) -> Self {
        let faces = (0..n).map(|i| vec![i, (i + 1) % n, n]).collect();
        Self::from_faces(n + 1, faces, (0..n).collect()).expect("starred polygon is a disk")
    }

    /// Polygon `0..n` triangulated by a fan from vertex 0.
    pub fn fan_polygon(n: usize) -> Self {
        let faces = (1..n - 1).map(|i| vec![0, i, i + 1]).collect();
        Self::from_faces(n, faces, (0..n).collect()).expect("fan is a disk")
    }

    pub fn triangle() -> Self {
        Self::from_faces(3, vec![vec![0, 1, 2]], vec![0, 1, 2]).expect("triangle is a disk")
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.vertex_count as i64 - self.edges.len() as i64 + self.faces.len() as i64
    }

    /// Counter-clockwise neighbour successor at every vertex. Boundary
    /// vertices get a path running from the next boundary vertex to the
    /// previous one.
    pub fn ccw_successors(&self) -> Vec<BTreeMap<usize, usize>> {
        let mut succ = vec![BTreeMap::new(); self.vertex_count];
        for f in &self.faces {
            let n = f.len();
            for i in 0..n {
                let (x, v, y) = (f[(i + n - 1) % n], f[i], f[(i + 1) % n]);
                succ[v].insert(y, x);
            }
        }
        succ
    }

    pub fn neighbours(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.vertex_count];
        for &[a, b] in &self.edges {
            adj[a].push(b);
            adj[b].push(a);
        }
        adj
    }

    /// Number of boundary cycles formed by sides used by a single face.
    pub fn boundary_component_count(&self) -> usize {
        let mut next: HashMap<usize, usize> = HashMap::new();
        let all: BTreeSet<(usize, usize)> = self
            .faces
            .iter()
            .flat_map(|f| (0..f.len()).map(move |i| (f[i], f[(i + 1) % f.len()])))
            .collect();
        for &(a, b) in &all {
            if !all.contains(&(b, a)) {
                next.insert(a, b);
            }
        }
        let mut seen = BTreeSet::new();
        let mut count = 0;
        for &start in next.keys() {
            if seen.contains(&start) {
                continue;
            }
            count += 1;
            let mut v = start;
            while seen.insert(v) {
                v = next[&v];
            }
        }
        count
    }

    pub fn all_triangles(&self) -> bool {
        self.faces.iter().all(|f| f.len() == 3)
    }

    /// Triangular faces on distinct vertices, no two faces on the same
    /// vertex triple.
    pub fn is_simplicial(&self) -> bool {
        let mut triples = BTreeSet::new();
        self.faces.iter().all(|f| {
            let mut t = f.clone();
            t.sort_unstable();
            t.dedup();
            f.len() == 3 && t.len() == 3 && triples.insert(t)
        })
    }

    /// The disk on the sphere: its faces plus the outer face, which is
    /// marked as the distinguished face.
    pub fn to_sphere_map(&self) -> Result<EmbeddedGraph, MapError> {
        let mut faces = self.faces.clone();
        let mut outer = self.boundary.clone();
        outer.reverse();
        faces.push(outer.clone());
        let map = EmbeddedGraph::from_faces(self.vertex_count, &faces)?;
        let table = map.face_table();
        let n = outer.len();
        let target: BTreeSet<(usize, usize)> =
            (0..n).map(|i| (outer[i], outer[(i + 1) % n])).collect();
        let corner = table
            .walks
            .iter()
            .find(|w| {
                let vs = w.vertices(&map);
                w.len() == n
                    && (0..n).all(|i| target.contains(&(vs[i], vs[(i + 1) % n])))
            })
            .or_else(|| table.walks.iter().find(|w| w.len() == n))
            .map(|w| w.corners[0]);
        Ok(map.with_disk(corner))
    }
}

/// The union of the bounded cells of the dual subdivision of a generic
/// arrangement: one quadrilateral per crossing.
pub fn dual_quadrangulation(arr: &LineArrangement) -> Result<DiskComplex, FillingError> {
    let m = arr.lines.len();
    if m < 2 {
        return Err(FillingError::TooSmall { min: 2, got: m });
    }
    if !arr.is_generic() {
        return Err(FillingError::Degenerate("lines are not in general position".into()));
    }
    let mut ids: HashMap<Vec<bool>, usize> = HashMap::new();
    let mut faces = Vec::new();
    for i in 0..m {
        for j in i + 1..m {
            let quad = arr.quadrant_cells(i, j).map(|cell| {
                let next = ids.len();
                *ids.entry(cell).or_insert(next)
            });
            faces.push(quad.to_vec());
        }
    }
    let directed: BTreeSet<(usize, usize)> = faces
        .iter()
        .flat_map(|f| (0..4).map(move |k| (f[k], f[(k + 1) % 4])))
        .collect();
    let mut next: BTreeMap<usize, usize> = BTreeMap::new();
    for &(a, b) in &directed {
        if !directed.contains(&(b, a)) && next.insert(a, b).is_some() {
            return Err(FillingError::Degenerate("boundary is not a simple cycle".into()));
        }
    }
    let start = *next
        .keys()
        .next()
        .ok_or_else(|| FillingError::Degenerate("no boundary".into()))?;
    let mut boundary = vec![start];
    let mut v = next[&start];
    while v != start {
        boundary.push(v);
        v = *next
            .get(&v)
            .ok_or_else(|| FillingError::Degenerate("open boundary".into()))?;
        if boundary.len() > next.len() {
            return Err(FillingError::Degenerate("boundary does not close".into()));
        }
    }
    if boundary.len() != next.len() || boundary.len() != 2 * m {
        return Err(FillingError::Degenerate(format!(
            "boundary has {} vertices, expected {}",
            boundary.len(),
            2 * m
        )));
    }
    DiskComplex::from_faces(ids.len(), faces, boundary)
}

/// Replaces every face with more than three sides by a fan from a new
/// interior vertex.
pub fn star_faces(disk: &DiskComplex) -> Result<DiskComplex, FillingError> {
    let mut faces = Vec::new();
    let mut next = disk.vertex_count;
    for f in &disk.faces {
        if f.len() == 3 {
            faces.push(f.clone());
            continue;
        }
        if f.len() > 5 {
            return Err(FillingError::FaceTooLarge(f.len()));
        }
        let n = f.len();
        for i in 0..n {
            faces.push(vec![f[i], f[(i + 1) % n], next]);
        }
        next += 1;
    }
    DiskComplex::from_faces(next, faces, disk.boundary.clone())
}

/// Deletes the lowest-id boundary vertex of degree 2 and closes its quad
/// into a triangle, shortening the boundary by one.
fn remove_boundary_corner(disk: &DiskComplex) -> Result<DiskComplex, FillingError> {
    let mut degree = vec![0usize; disk.vertex_count];
    for &[a, b] in &disk.edges {
        degree[a] += 1;
        degree[b] += 1;
    }
    let v = disk
        .boundary
        .iter()
        .copied()
        .filter(|&v| degree[v] == 2)
        .min()
        .ok_or_else(|| FillingError::Degenerate("no boundary vertex of degree 2".into()))?;
    let relabel = |u: usize| if u > v { u - 1 } else { u };
    let mut faces = Vec::with_capacity(disk.faces.len());
    for f in &disk.faces {
        let kept: Vec<usize> = f.iter().copied().filter(|&u| u != v).map(relabel).collect();
        faces.push(kept);
    }
    let boundary = disk
        .boundary
        .iter()
        .copied()
        .filter(|&u| u != v)
        .map(relabel)
        .collect();
    DiskComplex::from_faces(disk.vertex_count - 1, faces, boundary)
}

/// Triangulated isometric filling of the cycle of length `n`, using seed 0
/// for the arrangement.
pub fn isometric_filling(n: usize) -> Result<DiskComplex, FillingError> {
    isometric_filling_seeded(n, 0)
}

pub fn isometric_filling_seeded(n: usize, seed: u64) -> Result<DiskComplex, FillingError> {
    match n {
        0..=2 => Err(FillingError::TooSmall { min: 3, got: n }),
        3 => Ok(DiskComplex::triangle()),
        4 | 5 => Ok(DiskComplex::starred_polygon(n)),
        _ => {
            let arr = random_generic_arrangement(n.div_ceil(2), seed)?;
            let mut quads = dual_quadrangulation(&arr)?;
            if n % 2 == 1 {
                quads = remove_boundary_corner(&quads)?;
            }
            star_faces(&quads)
        }
    }
}

/// Breadth-first distances from `source` in the 1-skeleton.
fn bfs(adj: &[Vec<usize>], source: usize) -> Vec<usize> {
    let mut dist = vec![usize::MAX; adj.len()];
    dist[source] = 0;
    let mut queue = VecDeque::from([source]);
    while let Some(v) = queue.pop_front() {
        for &w in &adj[v] {
            if dist[w] == usize::MAX {
                dist[w] = dist[v] + 1;
                queue.push_back(w);
            }
        }
    }
    dist
}

/// True iff graph distances between boundary vertices equal their cyclic
/// distances along the boundary.
pub fn verify_isometric(disk: &DiskComplex) -> bool {
    let adj = disk.neighbours();
    let n = disk.boundary.len();
    (0..n).all(|i| {
        let dist = bfs(&adj, disk.boundary[i]);
        (0..n).all(|j| {
            let along = (i.abs_diff(j)).min(n - i.abs_diff(j));
            dist[disk.boundary[j]] == along
        })
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn binom2(m: usize) -> usize {
        m * (m - 1) / 2
    }

    #[test]
    fn two_lines_cross_once() {
        let arr = random_generic_arrangement(2, 11).unwrap();
        assert_eq!(arr.face_count(), 4);
        let q = dual_quadrangulation(&arr).unwrap();
        assert_eq!(q.faces.len(), 1);
        assert_eq!(q.boundary.len(), 4);
    }

    #[test]
    fn three_lines_give_seven_cells() {
        let arr = random_generic_arrangement(3, 5).unwrap();
        assert_eq!(arr.face_count(), 7);
        let q = dual_quadrangulation(&arr).unwrap();
        assert_eq!((q.vertex_count, q.faces.len(), q.boundary.len()), (7, 3, 6));
        let s = star_faces(&q).unwrap();
        assert_eq!((s.vertex_count, s.faces.len()), (10, 12));
    }

    #[test]
    fn four_lines_dual_counts() {
        let q = dual_quadrangulation(&random_generic_arrangement(4, 2).unwrap()).unwrap();
        assert_eq!((q.vertex_count, q.faces.len(), q.boundary.len()), (11, 6, 8));
    }

    #[test]
    fn concurrent_lines_are_rejected() {
        let int = |v: i64| BigRational::from_integer(v.into());
        let line = |a, b, c| Line {
            a: int(a),
            b: int(b),
            c: int(c),
        };
        // x = 0, y = 0, x + y = 0 all pass through the origin
        let arr = LineArrangement {
            lines: vec![line(1, 0, 0), line(0, 1, 0), line(1, 1, 0), line(1, -2, 5)],
        };
        assert!(!arr.is_generic());
        assert!(matches!(
            dual_quadrangulation(&arr),
            Err(FillingError::Degenerate(_))
        ));
        let mut fixed = arr.clone();
        fixed.lines[2].c = int(3);
        assert!(fixed.is_generic());
    }

    #[test]
    fn sampler_is_deterministic() {
        let a = random_generic_arrangement(6, 99).unwrap();
        let b = random_generic_arrangement(6, 99).unwrap();
        assert_eq!(a, b);
        assert!(a.is_generic());
    }

    #[test]
    fn small_fillings() {
        let t = isometric_filling(3).unwrap();
        assert_eq!((t.vertex_count, t.faces.len()), (3, 1));
        let q = isometric_filling(4).unwrap();
        assert_eq!((q.vertex_count, q.faces.len()), (5, 4));
        let p = isometric_filling(5).unwrap();
        assert_eq!((p.vertex_count, p.faces.len()), (6, 5));
        assert!(matches!(
            isometric_filling(2),
            Err(FillingError::TooSmall { .. })
        ));
    }

    #[test]
    fn nine_cycle_from_five_lines() {
        let d = isometric_filling(9).unwrap();
        // 16 dual vertices, one corner removed, 9 quads starred
        assert_eq!(d.vertex_count, 16 - 1 + 9);
        assert_eq!(d.boundary.len(), 9);
        assert!(verify_isometric(&d));
        assert!(d.is_simplicial());
    }

    #[test]
    fn fillings_are_isometric_disks() {
        for n in 3..=31 {
            let d = isometric_filling(n).unwrap();
            assert_eq!(d.boundary.len(), n);
            assert!(verify_isometric(&d), "n = {n}");
            assert!(d.is_simplicial(), "n = {n}");
            assert_eq!(d.euler_characteristic(), 1, "n = {n}");
            assert_eq!(d.boundary_component_count(), 1, "n = {n}");
            if n >= 6 && n % 2 == 0 {
                let m = n / 2;
                assert_eq!(d.vertex_count, 1 + m + binom2(m) + binom2(m));
            }
        }
    }

    #[test]
    fn isometry_oracle_rejects_shortcuts() {
        assert!(verify_isometric(&DiskComplex::triangle()));
        assert!(verify_isometric(&DiskComplex::starred_polygon(4)));
        // a centre joined to all six boundary vertices puts opposite vertices at distance 2
        assert!(!verify_isometric(&DiskComplex::starred_polygon(6)));
        // a diagonal chord of a square is a shortcut
        let chord = DiskComplex::from_faces(4, vec![vec![0, 1, 2], vec![0, 2, 3]], vec![0, 1, 2, 3])
            .unwrap();
        assert!(!verify_isometric(&chord));
    }

    #[test]
    fn sphere_map_of_a_filling() {
        let d = isometric_filling(7).unwrap();
        let map = d.to_sphere_map().unwrap();
        assert_eq!(map.euler_characteristic(), 2);
        let table = map.face_table();
        let outer = map.disk_face(&table).unwrap();
        assert_eq!(table.walks[outer].len(), 7);
        assert!(map.is_simplicial());
    }
}
