//! End-to-end runs: refinement, an operator on the refined triangulation,
//! a kernel vector vanishing on the disk boundary, and the chain report.

use std::collections::{HashSet, VecDeque};

use rand::seq::{index, SliceRandom};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

use crate::nodal::{self, AnalysisReport, ChainInput, NodalError};
use crate::refine::{build_prescribed_edgewidth, RefineError, RefinedTriangulation};
use crate::spectral::{
    constrained_kernel_vector, designed_kernel_instance, kernel_exact, minimize_support,
    one_negative_report, validate_operator, OneNegative, SchrodingerOperator, SignedVector,
    SimpleGraph, SpectralError, DEFAULT_TOL,
};
use crate::surface_map::EmbeddedGraph;

const PATTERN_ATTEMPTS: usize = 256;

#[derive(Debug, Error)]
pub enum PipelineError {
    #[error("refine: {0}")]
    Refine(#[from] RefineError),
    #[error("spectral: {0}")]
    Spectral(#[from] SpectralError),
    #[error("nodal: {0}")]
    Nodal(#[from] NodalError),
    #[error("spectral: operator does not match the refined graph")]
    OperatorMismatch,
    #[error("spectral: operator does not have exactly one negative eigenvalue")]
    NotOneNegative,
    #[error("pipeline: no sign pattern found around the disk boundary")]
    NoPattern,
}

#[derive(Debug, Clone)]
pub enum OperatorSource {
    /// Operator on the vertices of the triangulated refinement.
    Given(SchrodingerOperator),
    /// Designed around a sign pattern that vanishes on the disk boundary.
    Designed { seed: u64 },
}

#[derive(Debug, Clone)]
pub struct PipelineRun {
    pub refined: RefinedTriangulation,
    pub operator: SchrodingerOperator,
    pub spectrum: OneNegative,
    pub f: SignedVector,
    pub report: AnalysisReport,
    pub gamma_dot: String,
}

/// Outer neighbours of the boundary cycle in cyclic order, with the ring
/// index range contributed by each boundary vertex.
fn outer_ring(map: &EmbeddedGraph, boundary: &[usize]) -> Option<(Vec<usize>, Vec<Vec<usize>>)> {
    let k = boundary.len();
    let on_boundary: HashSet<usize> = boundary.iter().copied().collect();
    let adjacent = |a: usize, b: usize| map.rotation(a).iter().any(|&d| map.head(d) == b);
    let mut lists = Vec::with_capacity(k);
    for (i, &d) in boundary.iter().enumerate() {
        let around: Vec<usize> = map.rotation(d).iter().map(|&x| map.head(x)).collect();
        let m = around.len();
        let start = (0..m).find(|&j| on_boundary.contains(&around[j]) && !on_boundary.contains(&around[(j + 1) % m]))?;
        let mut list: Vec<usize> = (1..m)
            .map(|j| around[(start + j) % m])
            .take_while(|u| !on_boundary.contains(u))
            .collect();
        if (1..m).filter(|&j| !on_boundary.contains(&around[(start + j) % m])).count() != list.len() {
            return None;
        }
        let prev = boundary[(i + k - 1) % k];
        if !adjacent(*list.first()?, prev) {
            list.reverse();
        }
        lists.push(list);
    }
    let mut ring: Vec<usize> = Vec::new();
    let mut ranges = Vec::with_capacity(k);
    for list in &lists {
        let mut idx = Vec::new();
        for &u in list {
            if ring.last() == Some(&u) {
                idx.push(ring.len() - 1);
            } else if ring.first() == Some(&u) && idx.len() + 1 == list.len() && ranges.len() + 1 == k {
                idx.push(0);
            } else {
                idx.push(ring.len());
                ring.push(u);
            }
        }
        ranges.push(idx);
    }
    let distinct: HashSet<usize> = ring.iter().copied().collect();
    (distinct.len() == ring.len()).then_some((ring, ranges))
}

/// Shortest path inside `allowed` from `from` to `to`, with neighbour
/// order shuffled by `rng`; includes both end vertices.
fn random_shortest_path(
    g: &SimpleGraph,
    allowed: &[bool],
    from: &[usize],
    to: &HashSet<usize>,
    rng: &mut ChaCha8Rng,
) -> Option<Vec<usize>> {
    let n = g.vertex_count();
    let mut parent = vec![usize::MAX; n];
    let mut seen = vec![false; n];
    let mut queue = VecDeque::new();
    for &s in from {
        seen[s] = true;
        queue.push_back(s);
    }
    while let Some(v) = queue.pop_front() {
        if to.contains(&v) {
            let mut path = vec![v];
            let mut x = v;
            while parent[x] != usize::MAX {
                x = parent[x];
                path.push(x);
            }
            return Some(path);
        }
        let mut next: Vec<usize> = g.neighbours(v).to_vec();
        next.shuffle(rng);
        for u in next {
            if allowed[u] && !seen[u] {
                seen[u] = true;
                parent[u] = v;
                queue.push_back(u);
            }
        }
    }
    None
}

fn try_pattern(g: &SimpleGraph, boundary: &[usize], ring: &[usize], ranges: &[Vec<usize>], rng: &mut ChaCha8Rng) -> Option<Vec<i8>> {
    let n = g.vertex_count();
    let r = ring.len();
    if r < 4 {
        return None;
    }
    let mut cuts = index::sample(rng, r, 4).into_vec();
    cuts.sort_unstable();
    let arc_of = |i: usize| cuts.iter().rposition(|&c| c <= i).unwrap_or(3);
    let ring_sign = |i: usize| if arc_of(i) % 2 == 0 { 1i8 } else { -1 };
    if !ranges
        .iter()
        .all(|idx| idx.windows(2).any(|w| ring_sign(w[0]) != ring_sign(w[1])))
    {
        return None;
    }
    let on_boundary: HashSet<usize> = boundary.iter().copied().collect();
    let on_ring: HashSet<usize> = ring.iter().copied().collect();
    let first: Vec<usize> = (0..r).filter(|&i| arc_of(i) == 0).map(|i| ring[i]).collect();
    let second: HashSet<usize> = (0..r).filter(|&i| arc_of(i) == 2).map(|i| ring[i]).collect();
    let allowed: Vec<bool> = (0..n)
        .map(|v| !on_boundary.contains(&v) && (!on_ring.contains(&v) || second.contains(&v)))
        .collect();
    // a detour through a random waypoint, so the path can wind around a
    // handle instead of hugging the ring
    let inner: Vec<usize> = (0..n).filter(|&v| allowed[v] && !second.contains(&v)).collect();
    let waypoint = *inner.choose(rng)?;
    let mut path = random_shortest_path(g, &allowed, &first, &HashSet::from([waypoint]), rng)?;
    let mut rest = allowed.clone();
    for &v in &path {
        rest[v] = false;
    }
    rest[waypoint] = true;
    path.extend(random_shortest_path(g, &rest, &[waypoint], &second, rng)?);

    let mut pattern: Vec<i8> = (0..n)
        .map(|v| if on_boundary.contains(&v) { 0 } else { -1 })
        .collect();
    for i in 0..r {
        pattern[ring[i]] = ring_sign(i);
    }
    for v in path {
        pattern[v] = 1;
    }
    let sees = |v: usize, s: i8| g.neighbours(v).iter().any(|&u| pattern[u] == s);
    let valid = boundary.iter().all(|&d| sees(d, 1) && sees(d, -1))
        && g.induces_connected(&pattern.iter().map(|&s| s > 0).collect::<Vec<_>>())
        && g.induces_connected(&pattern.iter().map(|&s| s < 0).collect::<Vec<_>>());
    valid.then_some(pattern)
}

/// Sign pattern that is zero exactly on `boundary`, with connected positive
/// and negative classes and both signs next to every boundary vertex. The
/// ring around the boundary is cut into four alternating arcs; the two
/// positive arcs are joined by a path avoiding the ring, and everything
/// else is negative.
pub fn designed_boundary_pattern(map: &EmbeddedGraph, boundary: &[usize], seed: u64) -> Option<Vec<i8>> {
    if boundary.is_empty() {
        return None;
    }
    let g = SimpleGraph::from_map(map);
    let (ring, ranges) = outer_ring(map, boundary)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..PATTERN_ATTEMPTS).find_map(|_| try_pattern(&g, boundary, &ring, &ranges, &mut rng))
}

/// Refines `map` around `face`, builds or checks the operator on the
/// triangulated refinement, extracts an inclusion-minimal kernel vector
/// vanishing on the disk boundary, and evaluates the chain.
pub fn run_pipeline(
    map: &EmbeddedGraph,
    face: usize,
    k: usize,
    source: &OperatorSource,
) -> Result<PipelineRun, PipelineError> {
    let refined = build_prescribed_edgewidth(map, face, k)?;
    let boundary = refined.disk_boundary();
    let g = SimpleGraph::from_map(&refined.h_prime);
    let operator = match source {
        OperatorSource::Given(op) => {
            if !validate_operator(&g, op)? {
                return Err(PipelineError::OperatorMismatch);
            }
            op.clone()
        }
        OperatorSource::Designed { seed } => {
            let pattern =
                designed_boundary_pattern(&refined.h_prime, &boundary, *seed).ok_or(PipelineError::NoPattern)?;
            designed_kernel_instance(&g, &pattern, *seed)?.0
        }
    };
    let spectrum = one_negative_report(&operator, DEFAULT_TOL)?;
    if !spectrum.passes {
        return Err(PipelineError::NotOneNegative);
    }
    let basis = kernel_exact(&operator);
    let f = constrained_kernel_vector(&basis, &boundary).ok_or(NodalError::InsufficientKernel)?;
    let f = minimize_support(&basis, &f, &boundary);
    let report = nodal::evaluate_chain(&ChainInput {
        h: &refined.h,
        h_prime: &refined.h_prime,
        k,
        corank: basis.corank(),
        f: &f,
    })?;
    let gamma_dot = nodal::gamma_dot(&refined.h, &refined.h_prime, &f)?;
    Ok(PipelineRun {
        refined,
        operator,
        spectrum,
        f,
        report,
        gamma_dot,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct BoundCheck {
    pub holds: bool,
    /// `7 - 2 chi - mu`; negative when the bound is violated.
    pub slack: i64,
}

/// `mu <= 7 - 2 chi`.
pub fn check_bound(mu: i64, chi: i64) -> Result<BoundCheck, NodalError> {
    if chi > 2 {
        return Err(NodalError::HeawoodDomain(chi));
    }
    let slack = 7 - 2 * chi - mu;
    Ok(BoundCheck {
        holds: slack >= 0,
        slack,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct KnownMuEntry {
    pub graph: String,
    pub mu: i64,
    pub note: String,
}

pub fn known_mu_table() -> Vec<KnownMuEntry> {
    (1..=10)
        .map(|n| KnownMuEntry {
            graph: format!("K{n}"),
            mu: n as i64 - 1,
            note: "complete graph, mu(K_n) = n - 1".into(),
        })
        .collect()
}

pub fn known_mu(graph: &str) -> Option<i64> {
    known_mu_table().into_iter().find(|e| e.graph == graph).map(|e| e.mu)
}
