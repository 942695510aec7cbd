//! LLL reduction with an integer transform, and Fincke–Pohst enumeration of
//! lattice points in a Euclidean ball.

use crate::error::{Error, Result};

pub const LLL_DELTA: f64 = 0.99;
const LLL_MAX_SWAPS: usize = 1_000_000;

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Gram–Schmidt data: squared lengths of the orthogonalized vectors and the
/// coefficients `mu[i][j] = <b_i, b*_j> / |b*_j|^2` for `j < i`.
#[derive(Clone, Debug)]
pub struct GramSchmidt {
    pub bstar_sq: Vec<f64>,
    pub mu: Vec<Vec<f64>>,
}

impl GramSchmidt {
    pub fn new(cols: &[Vec<f64>]) -> Self {
        let k = cols.len();
        let mut bstar: Vec<Vec<f64>> = Vec::with_capacity(k);
        let mut bstar_sq = vec![0.0; k];
        let mut mu = vec![vec![0.0; k]; k];
        for i in 0..k {
            let mut v = cols[i].clone();
            for j in 0..i {
                let m = if bstar_sq[j] > 0.0 { dot(&cols[i], &bstar[j]) / bstar_sq[j] } else { 0.0 };
                mu[i][j] = m;
                for (vi, bj) in v.iter_mut().zip(&bstar[j]) {
                    *vi -= m * bj;
                }
            }
            mu[i][i] = 1.0;
            bstar_sq[i] = dot(&v, &v);
            bstar.push(v);
        }
        GramSchmidt { bstar_sq, mu }
    }
}

/// LLL-reduce the columns `cols` (linearly independent, any rank `k ≤ d`).
///
/// Returns the reduced columns and, for each, its integer coefficient vector
/// with respect to the input columns.
pub fn lll(cols: &[Vec<f64>]) -> Result<(Vec<Vec<f64>>, Vec<Vec<i64>>)> {
    let k = cols.len();
    let mut b: Vec<Vec<f64>> = cols.to_vec();
    let mut u: Vec<Vec<i64>> = (0..k).map(|i| (0..k).map(|j| (i == j) as i64).collect()).collect();
    if k <= 1 {
        return Ok((b, u));
    }
    let mut gs = GramSchmidt::new(&b);
    if gs.bstar_sq.iter().any(|&x| !(x > 0.0) || !x.is_finite()) {
        return Err(Error::domain("lattice generators are dependent or not finite"));
    }
    let mut idx = 1usize;
    let mut swaps = 0usize;
    while idx < k {
        for j in (0..idx).rev() {
            let m = gs.mu[idx][j];
            if m.abs() > 0.5 {
                let r = m.round();
                let ri = r as i64;
                if r.abs() > 9.0e15 {
                    return Err(Error::Overflow("LLL size-reduction coefficient".into()));
                }
                let (head, tail) = b.split_at_mut(idx);
                for (x, y) in tail[0].iter_mut().zip(&head[j]) {
                    *x -= r * y;
                }
                let (uh, ut) = u.split_at_mut(idx);
                for (x, y) in ut[0].iter_mut().zip(&uh[j]) {
                    *x = y.checked_mul(ri).and_then(|p| x.checked_sub(p)).ok_or_else(|| Error::Overflow("LLL transform".into()))?;
                }
                for l in 0..=j {
                    let mjl = if l == j { 1.0 } else { gs.mu[j][l] };
                    gs.mu[idx][l] -= r * mjl;
                }
            }
        }
        let m = gs.mu[idx][idx - 1];
        if gs.bstar_sq[idx] >= (LLL_DELTA - m * m) * gs.bstar_sq[idx - 1] {
            idx += 1;
        } else {
            b.swap(idx, idx - 1);
            u.swap(idx, idx - 1);
            gs = GramSchmidt::new(&b);
            idx = (idx - 1).max(1);
            swaps += 1;
            if swaps > LLL_MAX_SWAPS {
                return Err(Error::resource("LLL did not terminate within the swap budget"));
            }
        }
    }
    Ok((b, u))
}

/// Visit every nonzero integer combination `Σ c_j b_j` with Euclidean norm at
/// most `radius`. Both `c` and `-c` are visited. Fails with a resource error
/// once more than `node_cap` search nodes have been expanded.
pub fn enumerate_ball(cols: &[Vec<f64>], radius: f64, node_cap: u64, mut visit: impl FnMut(&[i64])) -> Result<()> {
    let k = cols.len();
    if k == 0 {
        return Ok(());
    }
    let gs = GramSchmidt::new(cols);
    let r2 = radius * radius * (1.0 + 1e-9) + f64::MIN_POSITIVE;
    let mut coeffs = vec![0i64; k];
    let mut nodes = 0u64;
    fn rec(
        level: usize,
        rem: f64,
        gs: &GramSchmidt,
        coeffs: &mut Vec<i64>,
        nodes: &mut u64,
        cap: u64,
        visit: &mut dyn FnMut(&[i64]),
    ) -> Result<()> {
        let k = coeffs.len();
        let center: f64 = -(level + 1..k).map(|i| gs.mu[i][level] * coeffs[i] as f64).sum::<f64>();
        let b = gs.bstar_sq[level];
        let half = (rem / b).max(0.0).sqrt();
        if !half.is_finite() || half > 1e15 {
            return Err(Error::resource("enumeration radius overflow"));
        }
        let lo = (center - half).ceil() as i64;
        let hi = (center + half).floor() as i64;
        for x in lo..=hi {
            *nodes += 1;
            if *nodes > cap {
                return Err(Error::resource(format!("lattice enumeration exceeded {cap} nodes")));
            }
            let d = x as f64 - center;
            let left = rem - d * d * b;
            if left < 0.0 {
                continue;
            }
            coeffs[level] = x;
            if level == 0 {
                if coeffs.iter().any(|&c| c != 0) {
                    visit(coeffs);
                }
            } else {
                rec(level - 1, left, gs, coeffs, nodes, cap, visit)?;
            }
        }
        coeffs[level] = 0;
        Ok(())
    }
    rec(k - 1, r2, &gs, &mut coeffs, &mut nodes, node_cap, &mut visit)
}
