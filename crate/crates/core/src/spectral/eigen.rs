//! Cyclic Jacobi diagonalization, used only to locate eigenvalues relative
//! to zero.

use serde::Serialize;

use super::{kernel_exact, SchrodingerOperator, SpectralError};

pub const DEFAULT_TOL: f64 = 1.0 / (1u64 << 40) as f64;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Spectrum {
    /// Ascending.
    pub values: Vec<f64>,
    /// Representative value and multiplicity of each cluster.
    pub clusters: Vec<(f64, usize)>,
    /// Frobenius norm of the remaining off-diagonal part.
    pub residual: f64,
    pub norm: f64,
}

fn frobenius(a: &[Vec<f64>]) -> f64 {
    a.iter().flatten().map(|x| x * x).sum::<f64>().sqrt()
}

fn off_diagonal(a: &[Vec<f64>]) -> f64 {
    let mut s = 0.0;
    for (i, row) in a.iter().enumerate() {
        for (j, x) in row.iter().enumerate() {
            if i != j {
                s += x * x;
            }
        }
    }
    s.sqrt()
}

pub fn eigen_symmetric(matrix: &[Vec<f64>], tol: f64) -> Result<Spectrum, SpectralError> {
    let n = matrix.len();
    let mut a: Vec<Vec<f64>> = matrix.to_vec();
    let norm = frobenius(&a);
    let target = tol * norm;
    let budget = 100 * n * n;
    let mut rotations = 0;
    // one sweep past the target leaves a margin below the zero window
    let mut extra = 1;
    loop {
        if off_diagonal(&a) <= target {
            if extra == 0 {
                break;
            }
            extra -= 1;
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = a[p][q];
                if apq.abs() <= f64::MIN_POSITIVE {
                    continue;
                }
                if rotations == budget {
                    return Err(SpectralError::NoConvergence(budget));
                }
                rotations += 1;
                let theta = (a[q][q] - a[p][p]) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let (akp, akq) = (a[k][p], a[k][q]);
                    a[k][p] = c * akp - s * akq;
                    a[k][q] = s * akp + c * akq;
                }
                for k in 0..n {
                    let (apk, aqk) = (a[p][k], a[q][k]);
                    a[p][k] = c * apk - s * aqk;
                    a[q][k] = s * apk + c * aqk;
                }
            }
        }
    }
    let residual = off_diagonal(&a);
    let mut values: Vec<f64> = (0..n).map(|i| a[i][i]).collect();
    values.sort_by(|x, y| x.total_cmp(y));
    let mut clusters: Vec<(f64, usize)> = Vec::new();
    for &v in &values {
        match clusters.last_mut() {
            Some((rep, m)) if (v - *rep).abs() <= target => *m += 1,
            _ => clusters.push((v, 1)),
        }
    }
    Ok(Spectrum {
        values,
        clusters,
        residual,
        norm,
    })
}

/// Eigenvalue positions relative to zero, next to the exact corank.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OneNegative {
    pub negatives: usize,
    pub numeric_zeros: usize,
    pub corank: usize,
    pub lambda1: f64,
    pub passes: bool,
}

pub fn one_negative_report(op: &SchrodingerOperator, tol: f64) -> Result<OneNegative, SpectralError> {
    let spectrum = eigen_symmetric(&op.to_f64(), tol)?;
    let corank = kernel_exact(op).corank();
    let window = tol * spectrum.norm;
    let negatives = spectrum.values.iter().filter(|&&x| x < -window).count();
    let numeric_zeros = spectrum.values.iter().filter(|&&x| x.abs() <= window).count();
    if numeric_zeros != corank {
        return Err(SpectralError::Ambiguous {
            numeric: numeric_zeros,
            exact: corank,
        });
    }
    Ok(OneNegative {
        negatives,
        numeric_zeros,
        corank,
        lambda1: spectrum.values.first().copied().unwrap_or(0.0),
        passes: negatives == 1 && corank >= 1,
    })
}

/// Exactly one negative eigenvalue and a nontrivial kernel whose dimension
/// matches the numeric zero cluster.
pub fn check_one_negative(op: &SchrodingerOperator) -> Result<bool, SpectralError> {
    Ok(one_negative_report(op, DEFAULT_TOL)?.passes)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::SimpleGraph;

    #[test]
    fn all_ones_spectrum() {
        let op = SchrodingerOperator::negative_adjacency_plus_identity(&SimpleGraph::complete(5));
        let s = eigen_symmetric(&op.to_f64(), DEFAULT_TOL).unwrap();
        assert!((s.values[0] + 5.0).abs() < 1e-9);
        assert!(s.values[1..].iter().all(|x| x.abs() < 1e-9));
        assert_eq!(s.clusters.len(), 2);
        assert_eq!(s.clusters[1].1, 4);
        assert!(check_one_negative(&op).unwrap());
    }

    #[test]
    fn path_spectrum() {
        let op = SchrodingerOperator::from_integers(&[vec![0, -1, 0], vec![-1, 0, -1], vec![0, -1, 0]]);
        let s = eigen_symmetric(&op.to_f64(), DEFAULT_TOL).unwrap();
        let r = 2f64.sqrt();
        for (x, y) in s.values.iter().zip([-r, 0.0, r]) {
            assert!((x - y).abs() < 1e-10);
        }
        assert!(check_one_negative(&op).unwrap());
    }

    #[test]
    fn diagonal_and_no_kernel() {
        let d = vec![vec![3.0, 0.0, 0.0], vec![0.0, -1.0, 0.0], vec![0.0, 0.0, 2.0]];
        assert_eq!(eigen_symmetric(&d, DEFAULT_TOL).unwrap().values, vec![-1.0, 2.0, 3.0]);
        let neg = SchrodingerOperator::from_integers(&[vec![-1, -1], vec![-1, -1]]);
        assert!(check_one_negative(&neg).unwrap());
        let minus_i = SchrodingerOperator::from_integers(&[vec![-1, -1], vec![-1, -3]]);
        assert!(!check_one_negative(&minus_i).unwrap());
    }
}
