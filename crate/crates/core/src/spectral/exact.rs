//! Exact kernels by fraction-free sparse elimination over the integers.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::{SchrodingerOperator, SignedVector};

/// Basis of the kernel; each vector is a primitive integer vector whose
/// first nonzero entry is positive.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KernelBasis {
    pub vectors: Vec<Vec<BigRational>>,
}

impl KernelBasis {
    pub fn corank(&self) -> usize {
        self.vectors.len()
    }
}

type SparseRow = BTreeMap<usize, BigInt>;

fn remove_content(row: &mut SparseRow) {
    let g = row.values().fold(BigInt::zero(), |g, x| g.gcd(x));
    if !g.is_zero() && !g.is_one() {
        for x in row.values_mut() {
            *x /= &g;
        }
    }
}

fn integer_row(row: &[BigRational]) -> SparseRow {
    let l = row
        .iter()
        .filter(|x| !x.is_zero())
        .fold(BigInt::one(), |l, x| l.lcm(x.denom()));
    let mut out: SparseRow = row
        .iter()
        .enumerate()
        .filter(|(_, x)| !x.is_zero())
        .map(|(j, x)| (j, x.numer() * (&l / x.denom())))
        .collect();
    remove_content(&mut out);
    out
}

/// `target := p * target - a * pivot_row`, where `a` is the entry of
/// `target` in column `col` and `p` the pivot.
fn eliminate(target: &mut SparseRow, pivot_row: &SparseRow, col: usize) {
    let Some(a) = target.remove(&col) else {
        return;
    };
    let p = &pivot_row[&col];
    for x in target.values_mut() {
        *x *= p;
    }
    for (&j, y) in pivot_row {
        if j == col {
            continue;
        }
        let entry = target.entry(j).or_insert_with(BigInt::zero);
        *entry -= &a * y;
        if entry.is_zero() {
            target.remove(&j);
        }
    }
    remove_content(target);
}

fn primitive(v: Vec<BigRational>) -> Vec<BigRational> {
    let l = v
        .iter()
        .filter(|x| !x.is_zero())
        .fold(BigInt::one(), |l, x| l.lcm(x.denom()));
    let ints: Vec<BigInt> = v.iter().map(|x| x.numer() * (&l / x.denom())).collect();
    let mut g = ints.iter().fold(BigInt::zero(), |g, x| g.gcd(x));
    if g.is_zero() {
        return v;
    }
    if ints.iter().find(|x| !x.is_zero()).is_some_and(|x| x.is_negative()) {
        g = -g;
    }
    ints.into_iter()
        .map(|x| BigRational::from_integer(x / &g))
        .collect()
}

/// Kernel of a rational matrix with `cols` columns.
pub fn rational_kernel(rows: &[Vec<BigRational>], cols: usize) -> Vec<Vec<BigRational>> {
    let mut active: Vec<SparseRow> = rows
        .iter()
        .map(|r| integer_row(r))
        .filter(|r| !r.is_empty())
        .collect();
    let mut pivots: Vec<(usize, SparseRow)> = Vec::new();
    while !active.is_empty() {
        let mut col_count = vec![0usize; cols];
        for r in &active {
            for &j in r.keys() {
                col_count[j] += 1;
            }
        }
        // Markowitz-style choice: sparsest row, then its sparsest column
        let ri = (0..active.len()).min_by_key(|&i| (active[i].len(), i)).unwrap();
        let row = active.swap_remove(ri);
        let col = *row.keys().min_by_key(|&&j| (col_count[j], j)).unwrap();
        for r in active.iter_mut() {
            eliminate(r, &row, col);
        }
        active.retain(|r| !r.is_empty());
        pivots.push((col, row));
    }
    let mut is_pivot = vec![false; cols];
    for (c, _) in &pivots {
        is_pivot[*c] = true;
    }
    // back substitution: each pivot row only involves its own column and
    // columns pivoted later or free
    (0..cols)
        .filter(|&j| !is_pivot[j])
        .map(|free| {
            let mut v = vec![BigRational::zero(); cols];
            v[free] = BigRational::one();
            for (c, r) in pivots.iter().rev() {
                let s = r
                    .iter()
                    .filter(|(j, _)| *j != c)
                    .fold(BigRational::zero(), |acc, (&j, a)| {
                        if v[j].is_zero() {
                            acc
                        } else {
                            acc + &v[j] * BigRational::from_integer(a.clone())
                        }
                    });
                v[*c] = -s / BigRational::from_integer(r[c].clone());
            }
            primitive(v)
        })
        .collect()
}

pub fn kernel_exact(op: &SchrodingerOperator) -> KernelBasis {
    KernelBasis {
        vectors: rational_kernel(&op.matrix, op.dimension()),
    }
}

/// A nonzero kernel vector vanishing on `zero_set`, if one exists.
pub fn constrained_kernel_vector(basis: &KernelBasis, zero_set: &[usize]) -> Option<SignedVector> {
    let r = basis.corank();
    if r == 0 {
        return None;
    }
    let rows: Vec<Vec<BigRational>> = zero_set
        .iter()
        .map(|&z| basis.vectors.iter().map(|v| v[z].clone()).collect())
        .collect();
    let coeffs = rational_kernel(&rows, r).into_iter().next()?;
    let n = basis.vectors[0].len();
    let mut f = vec![BigRational::zero(); n];
    for (c, v) in coeffs.iter().zip(&basis.vectors) {
        if c.is_zero() {
            continue;
        }
        for (x, y) in f.iter_mut().zip(v) {
            *x += c * y;
        }
    }
    Some(SignedVector::new(primitive(f)))
}

/// Greedy support reduction: for each support vertex in ascending order,
/// replace `f` by a kernel vector that also vanishes there (and outside the
/// current support) whenever one exists.
pub fn minimize_support(basis: &KernelBasis, f: &SignedVector, zero_set: &[usize]) -> SignedVector {
    let mut current = f.clone();
    let n = f.len();
    for v in 0..n {
        if current.values[v].is_zero() {
            continue;
        }
        let mut constraints: Vec<usize> = zero_set.to_vec();
        constraints.extend((0..n).filter(|&u| u == v || current.values[u].is_zero()));
        constraints.sort_unstable();
        constraints.dedup();
        if let Some(g) = constrained_kernel_vector(basis, &constraints) {
            current = g;
        }
    }
    current
}
