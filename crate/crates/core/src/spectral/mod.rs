//! Schrodinger operators on graphs: symmetric rational matrices that are
//! negative exactly on edges.

mod design;
mod eigen;
mod exact;

use std::fmt::Write as _;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::surface_map::EmbeddedGraph;

pub use design::{designed_kernel_instance, random_sign_pattern};
pub use eigen::{check_one_negative, eigen_symmetric, one_negative_report, OneNegative, Spectrum, DEFAULT_TOL};
pub use exact::{constrained_kernel_vector, kernel_exact, minimize_support, rational_kernel, KernelBasis};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SpectralError {
    #[error("matrix has dimension {got}, graph has {expected} vertices")]
    Dimension { expected: usize, got: usize },
    #[error("operator file line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("eigensolver did not converge within {0} rotations")]
    NoConvergence(usize),
    #[error("numeric zero cluster of size {numeric} disagrees with exact corank {exact}")]
    Ambiguous { numeric: usize, exact: usize },
    #[error("infeasible sign pattern: {0}")]
    Infeasible(String),
    #[error("no instance found within {0} attempts")]
    BudgetExhausted(usize),
}

/// Simple undirected graph with sorted adjacency lists.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SimpleGraph {
    adj: Vec<Vec<usize>>,
}

impl SimpleGraph {
    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Self {
        let mut adj = vec![Vec::new(); n];
        for &(a, b) in edges {
            if a != b {
                adj[a].push(b);
                adj[b].push(a);
            }
        }
        for list in &mut adj {
            list.sort_unstable();
            list.dedup();
        }
        Self { adj }
    }

    pub fn from_map(map: &EmbeddedGraph) -> Self {
        let edges: Vec<(usize, usize)> = map.edges().iter().map(|e| (e.ends[0], e.ends[1])).collect();
        Self::from_edges(map.vertex_count(), &edges)
    }

    pub fn complete(n: usize) -> Self {
        let edges: Vec<_> = (0..n).flat_map(|a| (a + 1..n).map(move |b| (a, b))).collect();
        Self::from_edges(n, &edges)
    }

    pub fn path(n: usize) -> Self {
        let edges: Vec<_> = (1..n).map(|i| (i - 1, i)).collect();
        Self::from_edges(n, &edges)
    }

    /// Random spanning tree plus each remaining pair with probability `p`.
    pub fn random_connected<R: Rng>(n: usize, p: f64, rng: &mut R) -> Self {
        let mut edges = Vec::new();
        for v in 1..n {
            edges.push((rng.gen_range(0..v), v));
        }
        for a in 0..n {
            for b in a + 1..n {
                if rng.gen_bool(p) {
                    edges.push((a, b));
                }
            }
        }
        Self::from_edges(n, &edges)
    }

    pub fn vertex_count(&self) -> usize {
        self.adj.len()
    }

    pub fn neighbours(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        self.adj[a].binary_search(&b).is_ok()
    }

    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.adj
            .iter()
            .enumerate()
            .flat_map(|(a, l)| l.iter().filter(move |&&b| b > a).map(move |&b| (a, b)))
    }

    /// True iff the subgraph induced by `set` is nonempty and connected.
    pub fn induces_connected(&self, set: &[bool]) -> bool {
        let Some(start) = set.iter().position(|&x| x) else {
            return false;
        };
        let mut seen = vec![false; self.adj.len()];
        seen[start] = true;
        let mut stack = vec![start];
        let mut count = 1;
        while let Some(v) = stack.pop() {
            for &w in &self.adj[v] {
                if set[w] && !seen[w] {
                    seen[w] = true;
                    count += 1;
                    stack.push(w);
                }
            }
        }
        count == set.iter().filter(|&&x| x).count()
    }

    pub fn is_connected(&self) -> bool {
        self.adj.is_empty() || self.induces_connected(&vec![true; self.adj.len()])
    }
}

/// Dense symmetric rational matrix indexed by vertices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SchrodingerOperator {
    pub matrix: Vec<Vec<BigRational>>,
}

pub fn rat(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

impl SchrodingerOperator {
    pub fn new(matrix: Vec<Vec<BigRational>>) -> Self {
        Self { matrix }
    }

    pub fn from_integers(rows: &[Vec<i64>]) -> Self {
        Self::new(rows.iter().map(|r| r.iter().map(|&x| rat(x)).collect()).collect())
    }

    /// `-(A + I)` on the graph.
    pub fn negative_adjacency_plus_identity(g: &SimpleGraph) -> Self {
        let n = g.vertex_count();
        let mut m = vec![vec![BigRational::zero(); n]; n];
        for (v, row) in m.iter_mut().enumerate() {
            row[v] = rat(-1);
            for &w in g.neighbours(v) {
                row[w] = rat(-1);
            }
        }
        Self::new(m)
    }

    pub fn dimension(&self) -> usize {
        self.matrix.len()
    }

    pub fn apply(&self, f: &[BigRational]) -> Vec<BigRational> {
        self.matrix
            .iter()
            .map(|row| {
                row.iter()
                    .zip(f)
                    .filter(|(a, b)| !a.is_zero() && !b.is_zero())
                    .fold(BigRational::zero(), |acc, (a, b)| acc + a * b)
            })
            .collect()
    }

    pub fn to_f64(&self) -> Vec<Vec<f64>> {
        use num_traits::ToPrimitive;
        self.matrix
            .iter()
            .map(|r| r.iter().map(|x| x.to_f64().unwrap_or(f64::NAN)).collect())
            .collect()
    }
}

/// Checks symmetry and the sign pattern: negative on edges, zero on other
/// off-diagonal pairs.
pub fn validate_operator(g: &SimpleGraph, op: &SchrodingerOperator) -> Result<bool, SpectralError> {
    let n = g.vertex_count();
    if op.dimension() != n || op.matrix.iter().any(|r| r.len() != n) {
        return Err(SpectralError::Dimension {
            expected: n,
            got: op.dimension(),
        });
    }
    for i in 0..n {
        for j in 0..n {
            if i == j {
                continue;
            }
            let x = &op.matrix[i][j];
            if *x != op.matrix[j][i] {
                return Ok(false);
            }
            let ok = if g.has_edge(i, j) { x.is_negative() } else { x.is_zero() };
            if !ok {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Exact rational vector with its sign classes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SignedVector {
    pub values: Vec<BigRational>,
}

impl SignedVector {
    pub fn new(values: Vec<BigRational>) -> Self {
        Self { values }
    }

    pub fn from_integers(values: &[i64]) -> Self {
        Self::new(values.iter().map(|&x| rat(x)).collect())
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn plus(&self) -> Vec<usize> {
        (0..self.len()).filter(|&i| self.values[i].is_positive()).collect()
    }

    pub fn zero(&self) -> Vec<usize> {
        (0..self.len()).filter(|&i| self.values[i].is_zero()).collect()
    }

    pub fn minus(&self) -> Vec<usize> {
        (0..self.len()).filter(|&i| self.values[i].is_negative()).collect()
    }

    pub fn support(&self) -> Vec<usize> {
        (0..self.len()).filter(|&i| !self.values[i].is_zero()).collect()
    }

    pub fn is_zero_vector(&self) -> bool {
        self.values.iter().all(Zero::is_zero)
    }

    pub fn scaled(&self, c: &BigRational) -> Self {
        Self::new(self.values.iter().map(|x| x * c).collect())
    }

    /// -1, 0 or 1 per vertex.
    pub fn signs(&self) -> Vec<i8> {
        self.values
            .iter()
            .map(|x| if x.is_positive() { 1 } else if x.is_negative() { -1 } else { 0 })
            .collect()
    }
}

/// Reads a matrix written one row per line as `p/q` or integer tokens.
pub fn parse_operator(text: &str) -> Result<SchrodingerOperator, SpectralError> {
    let mut rows = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let row = content
            .split_whitespace()
            .map(|tok| {
                tok.parse::<BigRational>().map_err(|_| SpectralError::Parse {
                    line: idx + 1,
                    message: format!("invalid rational `{tok}`"),
                })
            })
            .collect::<Result<Vec<_>, _>>()?;
        rows.push((idx + 1, row));
    }
    let n = rows.len();
    if let Some((line, r)) = rows.iter().find(|(_, r)| r.len() != n) {
        return Err(SpectralError::Parse {
            line: *line,
            message: format!("row has {} entries, expected {n}", r.len()),
        });
    }
    Ok(SchrodingerOperator::new(rows.into_iter().map(|(_, r)| r).collect()))
}

pub fn write_operator(op: &SchrodingerOperator) -> String {
    let mut out = String::new();
    for row in &op.matrix {
        let toks: Vec<String> = row.iter().map(|x| x.to_string()).collect();
        writeln!(out, "{}", toks.join(" ")).unwrap();
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn validation_examples() {
        let k2 = SimpleGraph::complete(2);
        let good = SchrodingerOperator::from_integers(&[vec![-1, -1], vec![-1, -1]]);
        assert!(validate_operator(&k2, &good).unwrap());
        let zero = SchrodingerOperator::from_integers(&[vec![-1, 0], vec![0, -1]]);
        assert!(!validate_operator(&k2, &zero).unwrap());
        let p3 = SimpleGraph::path(3);
        let pos = SchrodingerOperator::from_integers(&[vec![0, 1, 0], vec![1, 0, 1], vec![0, 1, 0]]);
        assert!(!validate_operator(&p3, &pos).unwrap());
        assert!(matches!(
            validate_operator(&p3, &good),
            Err(SpectralError::Dimension { .. })
        ));
    }

    #[test]
    fn operator_text_round_trip() {
        let op = SchrodingerOperator::new(vec![
            vec![BigRational::new(3.into(), 2.into()), rat(-1)],
            vec![rat(-1), BigRational::new((-7).into(), 3.into())],
        ]);
        let text = write_operator(&op);
        assert_eq!(text, "3/2 -1\n-1 -7/3\n");
        assert_eq!(parse_operator(&text).unwrap(), op);
        assert!(matches!(
            parse_operator("1 2\n3\n"),
            Err(SpectralError::Parse { line: 2, .. })
        ));
        assert!(matches!(
            parse_operator("1 x\n1 1\n"),
            Err(SpectralError::Parse { line: 1, .. })
        ));
    }

    #[test]
    fn sign_classes_and_scaling() {
        let f = SignedVector::from_integers(&[1, 0, -1]);
        assert_eq!((f.plus(), f.zero(), f.minus()), (vec![0], vec![1], vec![2]));
        let g = f.scaled(&rat(-3));
        assert_eq!((g.plus(), g.minus()), (vec![2], vec![0]));
        let h = SignedVector::from_integers(&[2, 3]);
        assert_eq!((h.plus(), h.zero(), h.minus()), (vec![0, 1], vec![], vec![]));
    }
}
