//! Exact integer linear algebra for sublattice bookkeeping: rank, kernels,
//! saturation and the row Hermite normal form.

use num_integer::Integer;
use num_rational::Ratio;
use num_traits::{Signed, Zero};

use crate::error::{Error, Result};

fn overflow() -> Error {
    Error::Overflow("integer matrix entry exceeded i64".into())
}

fn narrow(x: i128) -> Result<i64> {
    i64::try_from(x).map_err(|_| overflow())
}

/// Rank over `Q` of a list of integer vectors.
pub fn rank(rows: &[Vec<i64>]) -> usize {
    let mut tracker = IndependenceTracker::default();
    rows.iter().filter(|r| tracker.try_add(r)).count()
}

/// Incremental linear-independence test over `Q`.
#[derive(Clone, Debug, Default)]
pub struct IndependenceTracker {
    // reduced rows with their pivot column
    rows: Vec<(usize, Vec<Ratio<i128>>)>,
}

impl IndependenceTracker {
    /// Add `v` if it is independent of the rows seen so far.
    pub fn try_add(&mut self, v: &[i64]) -> bool {
        match self.reduce(v) {
            Some((pivot, reduced)) => {
                self.rows.push((pivot, reduced));
                true
            }
            None => false,
        }
    }

    pub fn is_independent(&self, v: &[i64]) -> bool {
        self.reduce(v).is_some()
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    fn reduce(&self, v: &[i64]) -> Option<(usize, Vec<Ratio<i128>>)> {
        let mut w: Vec<Ratio<i128>> = v.iter().map(|&x| Ratio::from_integer(x as i128)).collect();
        for (pivot, row) in &self.rows {
            if w[*pivot].is_zero() {
                continue;
            }
            let f = w[*pivot] / row[*pivot];
            for (wi, ri) in w.iter_mut().zip(row) {
                *wi -= f * ri;
            }
        }
        let pivot = w.iter().position(|x| !x.is_zero())?;
        Some((pivot, w))
    }
}

/// Column operations bringing `rows` (k×d) to lower echelon form `A·V`,
/// returning the unimodular `V` (as rows of a d×d matrix) and the rank.
fn column_echelon(rows: &[Vec<i64>], d: usize) -> Result<(Vec<Vec<i128>>, usize)> {
    let mut a: Vec<Vec<i128>> = rows.iter().map(|r| r.iter().map(|&x| x as i128).collect()).collect();
    let mut v: Vec<Vec<i128>> = (0..d).map(|i| (0..d).map(|j| (i == j) as i128).collect()).collect();
    let mut pivot_col = 0usize;
    let combine = |m: &mut Vec<Vec<i128>>, c1: usize, c2: usize, coeffs: [i128; 4]| -> Result<()> {
        // (col c1, col c2) <- (col c1, col c2) * [[p, q], [r, s]]
        let [p, q, r, s] = coeffs;
        for row in m.iter_mut() {
            let (x, y) = (row[c1], row[c2]);
            let nx = x.checked_mul(p).and_then(|a| y.checked_mul(r).and_then(|b| a.checked_add(b)));
            let ny = x.checked_mul(q).and_then(|a| y.checked_mul(s).and_then(|b| a.checked_add(b)));
            match (nx, ny) {
                (Some(nx), Some(ny)) => {
                    row[c1] = nx;
                    row[c2] = ny;
                }
                _ => return Err(overflow()),
            }
        }
        Ok(())
    };
    for i in 0..a.len() {
        if pivot_col >= d {
            break;
        }
        for c in pivot_col + 1..d {
            let (x, y) = (a[i][pivot_col], a[i][c]);
            if y == 0 {
                continue;
            }
            let eg = x.extended_gcd(&y);
            // [x y] * [[s, -y/g], [t, x/g]] = [g, 0]
            let coeffs = [eg.x, -y / eg.gcd, eg.y, x / eg.gcd];
            combine(&mut a, pivot_col, c, coeffs)?;
            combine(&mut v, pivot_col, c, coeffs)?;
        }
        if a[i][pivot_col] == 0 {
            // row already dependent on previous pivots; find any nonzero column
            if let Some(c) = (pivot_col + 1..d).find(|&c| a[i][c] != 0) {
                combine(&mut a, pivot_col, c, [0, 1, 1, 0])?;
                combine(&mut v, pivot_col, c, [0, 1, 1, 0])?;
            } else {
                continue;
            }
        }
        pivot_col += 1;
    }
    Ok((v, pivot_col))
}

/// A `Z`-basis of `{y ∈ Z^d : A y = 0}` for integer rows `A`.
pub fn integer_kernel(rows: &[Vec<i64>], d: usize) -> Result<Vec<Vec<i64>>> {
    let (v, rank) = column_echelon(rows, d)?;
    (rank..d).map(|c| (0..d).map(|r| narrow(v[r][c])).collect()).collect()
}

/// Basis of `span_R(rows) ∩ Z^d`, the primitive sublattice containing `rows`.
pub fn saturate(rows: &[Vec<i64>], d: usize) -> Result<Vec<Vec<i64>>> {
    let kernel = integer_kernel(rows, d)?;
    if kernel.is_empty() {
        return Ok((0..d).map(|i| (0..d).map(|j| (i == j) as i64).collect()).collect());
    }
    integer_kernel(&kernel, d)
}

/// Row-style Hermite normal form: echelon rows, positive pivots, entries
/// above each pivot reduced into `[0, pivot)`. Zero rows are dropped, so the
/// result is the unique canonical basis of the row lattice.
pub fn hermite_normal_form(rows: &[Vec<i64>]) -> Result<Vec<Vec<i64>>> {
    let d = rows.first().map_or(0, |r| r.len());
    let mut a: Vec<Vec<i128>> = rows.iter().map(|r| r.iter().map(|&x| x as i128).collect()).collect();
    let mut top = 0usize;
    for col in 0..d {
        if top >= a.len() {
            break;
        }
        for r in top + 1..a.len() {
            if a[r][col] == 0 {
                continue;
            }
            let (x, y) = (a[top][col], a[r][col]);
            let eg = x.extended_gcd(&y);
            let (p, q, rr, s) = (eg.x, eg.y, -y / eg.gcd, x / eg.gcd);
            for c in 0..d {
                let (u, w) = (a[top][c], a[r][c]);
                a[top][c] = p.checked_mul(u).and_then(|m| q.checked_mul(w).and_then(|n| m.checked_add(n))).ok_or_else(overflow)?;
                a[r][c] = rr.checked_mul(u).and_then(|m| s.checked_mul(w).and_then(|n| m.checked_add(n))).ok_or_else(overflow)?;
            }
        }
        if a[top][col] == 0 {
            continue;
        }
        if a[top][col] < 0 {
            a[top].iter_mut().for_each(|x| *x = -*x);
        }
        let pivot = a[top][col];
        for r in 0..top {
            let f = Integer::div_floor(&a[r][col], &pivot);
            if f != 0 {
                for c in 0..d {
                    a[r][c] -= f * a[top][c];
                }
            }
        }
        top += 1;
    }
    a.truncate(top);
    a.into_iter().map(|r| r.into_iter().map(narrow).collect()).collect()
}

pub fn gcd_all(values: &[i64]) -> i64 {
    values.iter().fold(0i64, |g, &x| g.gcd(&x))
}

/// Flip sign so the first nonzero entry is positive.
pub fn normalize_sign<T: Signed + Clone>(v: &mut [T]) {
    if let Some(first) = v.iter().find(|x| !x.is_zero()) {
        if first.is_negative() {
            v.iter_mut().for_each(|x| *x = -x.clone());
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dot(a: &[i64], b: &[i64]) -> i64 {
        a.iter().zip(b).map(|(x, y)| x * y).sum()
    }

    #[test]
    fn rank_counts_independent_rows() {
        assert_eq!(rank(&[vec![1, 2, 3], vec![2, 4, 6], vec![0, 1, 0]]), 2);
        assert_eq!(rank(&[vec![0, 0]]), 0);
    }

    #[test]
    fn kernel_is_orthogonal_and_complete() {
        let a = vec![vec![2, 4, 6], vec![1, 1, 1]];
        let k = integer_kernel(&a, 3).unwrap();
        assert_eq!(k.len(), 1);
        for row in &a {
            assert_eq!(dot(row, &k[0]), 0);
        }
        assert_eq!(gcd_all(&k[0]), 1);
    }

    #[test]
    fn saturation_of_scaled_vector() {
        let s = saturate(&[vec![2, 4, 0]], 3).unwrap();
        assert_eq!(hermite_normal_form(&s).unwrap(), vec![vec![1, 2, 0]]);
        let s = saturate(&[vec![2, 0, 0], vec![0, 3, 0]], 3).unwrap();
        assert_eq!(hermite_normal_form(&s).unwrap(), vec![vec![1, 0, 0], vec![0, 1, 0]]);
    }

    #[test]
    fn hnf_is_canonical_for_the_row_lattice() {
        let a = hermite_normal_form(&[vec![1, 1, 0], vec![0, 1, 2]]).unwrap();
        let b = hermite_normal_form(&[vec![1, 2, 2], vec![-1, -1, 0]]).unwrap();
        assert_eq!(a, b);
        assert_eq!(a, vec![vec![1, 0, -2], vec![0, 1, 2]]);
    }

    #[test]
    fn hnf_reduces_above_pivots() {
        let h = hermite_normal_form(&[vec![3, 5], vec![0, 4]]).unwrap();
        assert_eq!(h, vec![vec![3, 1], vec![0, 4]]);
    }
}
