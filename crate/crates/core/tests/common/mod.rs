//! Oracles written from the definitions, sharing no code with the engine
//! beyond plain data types.

#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};

/// Grid resolution of the brute-force scans.
pub const GRID: usize = 10_000;

/// Moment curve over `[0.5, 1.5]`, traced over `[0, 1]`.
pub fn moment_point(n: usize, s: f64) -> Vec<f64> {
    let u = 0.5 + s;
    (1..=n).map(|i| u.powi(i as i32)).collect()
}

/// `b` with `b^{1 + r₁} = R`.
pub fn base(subdivision: u32, r1: f64) -> f64 {
    (subdivision as f64).powf(1.0 / (1.0 + r1))
}

/// `‖diag(b^q, b^{−r_i q}) · (a₀ + a·φ, a)‖_∞`.
pub fn flowed_norm(b: f64, r: &[f64], q: f64, a: &[i64], phi: &[f64]) -> f64 {
    let lin = a[0] as f64 + a[1..].iter().zip(phi).map(|(ai, p)| *ai as f64 * p).sum::<f64>();
    let mut m = b.powf(q) * lin.abs();
    for (ai, ri) in a[1..].iter().zip(r) {
        m = m.max(b.powf(-ri * q) * (*ai as f64).abs());
    }
    m
}

/// All integer vectors in `[−k, k]^d`.
pub fn int_box(d: usize, k: i64) -> Vec<Vec<i64>> {
    let mut out = vec![vec![]];
    for _ in 0..d {
        out = out.into_iter().flat_map(|v| (-k..=k).map(move |x| [v.clone(), vec![x]].concat())).collect();
    }
    out
}

pub fn gcd(a: i64, b: i64) -> i64 {
    if b == 0 {
        a.abs()
    } else {
        gcd(b, a % b)
    }
}

/// Rank of a set of integer vectors, by fraction-free elimination in i128.
pub fn int_rank(rows: &[Vec<i64>]) -> usize {
    let mut m: Vec<Vec<i128>> = rows.iter().map(|r| r.iter().map(|&x| x as i128).collect()).collect();
    let cols = m.first().map_or(0, |r| r.len());
    let mut rank = 0;
    for c in 0..cols {
        let Some(p) = (rank..m.len()).find(|&i| m[i][c] != 0) else { continue };
        m.swap(rank, p);
        for i in rank + 1..m.len() {
            let (f, g) = (m[i][c], m[rank][c]);
            let pivot = m[rank].clone();
            for (x, p) in m[i].iter_mut().zip(&pivot) {
                *x = *x * g - p * f;
            }
            let h = m[i].iter().fold(0i128, |acc, &x| {
                let (mut a, mut b) = (acc.abs(), x.abs());
                while b != 0 {
                    (a, b) = (b, a % b);
                }
                a
            });
            if h > 1 {
                m[i].iter_mut().for_each(|x| *x /= h);
            }
        }
        rank += 1;
    }
    rank
}

/// Sup-norm successive minima by sorting every lattice point of a
/// coefficient box and taking vectors greedily while they raise the rank.
pub fn naive_minima(cols: &[Vec<f64>], k: i64) -> Vec<f64> {
    let d = cols.len();
    let mut pts: Vec<(f64, Vec<i64>)> = int_box(d, k)
        .into_iter()
        .filter(|c| c.iter().any(|&x| x != 0))
        .map(|c| {
            let v: Vec<f64> = (0..d).map(|i| (0..d).map(|j| cols[j][i] * c[j] as f64).sum()).collect();
            (v.iter().fold(0.0f64, |m, x| m.max(x.abs())), c)
        })
        .collect();
    pts.sort_by(|a, b| a.0.total_cmp(&b.0));
    let mut chosen: Vec<Vec<i64>> = vec![];
    let mut minima = vec![];
    for (norm, c) in pts {
        let mut trial = chosen.clone();
        trial.push(c);
        if int_rank(&trial) > chosen.len() {
            chosen = trial;
            minima.push(norm);
            if minima.len() == d {
                break;
            }
        }
    }
    minima
}

/// Dangerous windows by brute force: centres at level-`q` midpoints, peak
/// taken over the grid points of the window and its endpoints, windows for
/// each `a` chosen greedily from the left.
pub fn brute_dangerous(subdivision: u32, rho: f64, q: u32, l: u32) -> BTreeSet<(Vec<i64>, u64)> {
    let b = base(subdivision, 0.5);
    let t = q as f64;
    let cells = (subdivision as u64).pow(q);
    let len = 1.0 / cells as f64;
    let radius = (subdivision as f64).powi(l as i32 - q as i32);
    let centres: Vec<(u64, f64, f64)> = (0..cells)
        .map(|k| {
            let x = (k as f64 + 0.5) * len;
            (k, x - radius, x + radius)
        })
        .filter(|(_, lo, hi)| *lo >= -1e-12 && *hi <= 1.0 + 1e-12)
        .collect();
    let k_box = (rho * b.powf(0.5 * t)).floor() as i64 + 1;
    let mut out = BTreeSet::new();
    for tail in int_box(2, k_box) {
        let first = tail.iter().find(|&&x| x != 0);
        if first.is_some_and(|&x| x < 0) {
            continue;
        }
        let mut last_hi: BTreeMap<i64, f64> = BTreeMap::new();
        for &(k, lo, hi) in &centres {
            let x = 0.5 * (lo + hi);
            let phi_x = moment_point(2, x);
            let lin: f64 = tail.iter().zip(&phi_x).map(|(a, p)| *a as f64 * p).sum();
            let centre_a0 = (-lin).round() as i64;
            let mut samples: Vec<f64> = (0..=GRID).map(|j| j as f64 / GRID as f64).filter(|s| *s >= lo && *s <= hi).collect();
            samples.extend([lo.max(0.0), hi.min(1.0)]);
            for a0 in centre_a0 - 2..=centre_a0 + 2 {
                if first.is_none() && a0 <= 0 {
                    continue;
                }
                if last_hi.get(&a0).is_some_and(|&h| h >= lo) {
                    continue;
                }
                let a: Vec<i64> = std::iter::once(a0).chain(tail.iter().copied()).collect();
                let peak = samples.iter().map(|&s| flowed_norm(b, &[0.5, 0.5], t, &a, &moment_point(2, s))).fold(0.0, f64::max);
                if rho / 2.0 <= peak && peak <= rho {
                    last_hi.insert(a0, hi);
                    out.insert((a, k));
                }
            }
        }
    }
    out
}

