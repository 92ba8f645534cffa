//! Operators built around a prescribed kernel vector.

use num_rational::BigRational;
use num_traits::{Signed, Zero};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{check_one_negative, eigen_symmetric, rat, DEFAULT_TOL, SchrodingerOperator, SignedVector, SimpleGraph, SpectralError};

const ATTEMPTS: usize = 24;

fn check_pattern(g: &SimpleGraph, pattern: &[i8]) -> Result<(), SpectralError> {
    if pattern.len() != g.vertex_count() {
        return Err(SpectralError::Dimension {
            expected: g.vertex_count(),
            got: pattern.len(),
        });
    }
    if !pattern.contains(&1) || !pattern.contains(&-1) {
        return Err(SpectralError::Infeasible("needs both signs".into()));
    }
    for (v, &s) in pattern.iter().enumerate() {
        if s != 0 {
            continue;
        }
        let plus = g.neighbours(v).iter().any(|&u| pattern[u] > 0);
        let minus = g.neighbours(v).iter().any(|&u| pattern[u] < 0);
        if plus != minus {
            return Err(SpectralError::Infeasible(format!(
                "zero vertex {v} sees only one sign"
            )));
        }
    }
    Ok(())
}

/// Samples a vector with the given signs (-1, 0, 1 per vertex) and negative
/// edge weights, then solves for the diagonal so the vector is in the
/// kernel. Edges inside a sign class are heavier than edges across, with
/// the ratio growing over retries, until exactly one eigenvalue is
/// negative.
pub fn designed_kernel_instance(
    g: &SimpleGraph,
    pattern: &[i8],
    seed: u64,
) -> Result<(SchrodingerOperator, SignedVector), SpectralError> {
    check_pattern(g, pattern)?;
    let n = g.vertex_count();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    // large graphs need heavier in-class weights from the start
    let start = match n / 100 {
        0 => 1,
        h => 3 + h.ilog10(),
    };
    for attempt in 0..ATTEMPTS {
        let ratio = 10i64.pow(start + (attempt / 4) as u32);
        let f: Vec<BigRational> = pattern
            .iter()
            .map(|&s| rat(s as i64 * rng.gen_range(1..=5)))
            .collect();
        let mut m = vec![vec![BigRational::zero(); n]; n];
        for (a, b) in g.edges() {
            let w = match pattern[a] * pattern[b] {
                1 => -ratio * rng.gen_range(1..=3),
                -1 => -rng.gen_range(1..=2),
                _ => -rng.gen_range(1..=3),
            };
            m[a][b] = rat(w);
            m[b][a] = rat(w);
        }
        for z in (0..n).filter(|&z| pattern[z] == 0) {
            let side = |sign: i8, m: &Vec<Vec<BigRational>>| {
                g.neighbours(z)
                    .iter()
                    .filter(|&&u| pattern[u] == sign)
                    .fold(BigRational::zero(), |acc, &u| acc + &m[z][u] * &f[u])
            };
            let (sp, sm) = (side(1, &m), side(-1, &m));
            if sp.is_zero() {
                continue;
            }
            let (a, b) = (sp.abs(), sm.abs());
            for &u in g.neighbours(z) {
                let scale = match pattern[u] {
                    1 => &b,
                    -1 => &a,
                    _ => continue,
                };
                let w = &m[z][u] * scale;
                m[z][u] = w.clone();
                m[u][z] = w;
            }
        }
        for v in 0..n {
            if pattern[v] != 0 {
                let s = g
                    .neighbours(v)
                    .iter()
                    .fold(BigRational::zero(), |acc, &u| acc + &m[v][u] * &f[u]);
                m[v][v] = -s / &f[v];
            } else {
                let weight = g
                    .neighbours(v)
                    .iter()
                    .fold(BigRational::zero(), |acc, &u| acc + m[v][u].abs());
                m[v][v] = weight * rat(ratio) + rat(1);
            }
        }
        let op = SchrodingerOperator::new(m);
        // the numeric count is cheap; the exact kernel is only needed after
        let negatives = eigen_symmetric(&op.to_f64(), DEFAULT_TOL).map(|sp| {
            let window = DEFAULT_TOL * sp.norm;
            sp.values.iter().filter(|&&x| x < -window).count()
        });
        if negatives != Ok(1) {
            continue;
        }
        if check_one_negative(&op).unwrap_or(false) {
            return Ok((op, SignedVector::new(f)));
        }
    }
    Err(SpectralError::BudgetExhausted(ATTEMPTS))
}

/// Random sign pattern whose positive and negative classes each induce a
/// connected subgraph and whose zero vertices see both signs or neither.
pub fn random_sign_pattern<R: Rng>(g: &SimpleGraph, rng: &mut R) -> Option<Vec<i8>> {
    let n = g.vertex_count();
    if n < 2 {
        return None;
    }
    let mut pattern = vec![0i8; n];
    let p = rng.gen_range(0..n);
    let q = *g.neighbours(p).choose(rng)?;
    pattern[p] = 1;
    pattern[q] = -1;
    let target = rng.gen_range(2..=n);
    let mut assigned = 2;
    while assigned < target {
        let frontier: Vec<(usize, i8)> = (0..n)
            .filter(|&v| pattern[v] == 0)
            .flat_map(|v| {
                let pat = &pattern;
                g.neighbours(v)
                    .iter()
                    .filter(move |&&u| pat[u] != 0)
                    .map(move |&u| (v, pat[u]))
            })
            .collect();
        let Some(&(v, s)) = frontier.choose(rng) else {
            break;
        };
        pattern[v] = s;
        assigned += 1;
    }
    // zero vertices seeing a single sign join that sign
    loop {
        let mut changed = false;
        for v in 0..n {
            if pattern[v] != 0 {
                continue;
            }
            let plus = g.neighbours(v).iter().any(|&u| pattern[u] > 0);
            let minus = g.neighbours(v).iter().any(|&u| pattern[u] < 0);
            if plus != minus {
                pattern[v] = if plus { 1 } else { -1 };
                changed = true;
            }
        }
        if !changed {
            break;
        }
    }
    Some(pattern)
}
