//! Exterior powers of `V = R^{n+1}` with the supremum norm.
//!
//! Coordinates are indexed `0..=n`; index 0 is the `w₊` direction and indices
//! `1..=n` span the complement `W` (basis `w₁, …, w_n`). A [`MultiVector`] of
//! grade `i` stores one coefficient per `i`-element index subset, laid out in
//! lexicographic order of the subsets, so `e₀∧e₁, e₀∧e₂, …, e₁∧e₂, …`.
//!
//! Everything is generic over the coefficient ring: `f64` for sweeps, `i64`
//! for Plücker coordinates of integer sublattices and `Ratio<i64>` when an
//! identity has to hold exactly.

use std::fmt::Debug;

use nalgebra::DMatrix;
use num_traits::{Num, Signed};

use crate::error::{Error, Result};

/// Largest ambient dimension supported by the subset bitmasks.
pub const MAX_DIM: usize = 12;

/// Coefficient ring for multivectors and matrices.
pub trait Coeff: Clone + Debug + PartialEq + PartialOrd + Num + Signed + 'static {}

impl<T> Coeff for T where T: Clone + Debug + PartialEq + PartialOrd + Num + Signed + 'static {}

pub fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc = 1usize;
    for j in 0..k {
        acc = acc * (n - j) / (j + 1);
    }
    acc
}

/// All `grade`-element subsets of `0..dim` as bitmasks, in lexicographic order.
pub fn subsets(dim: usize, grade: usize) -> Vec<u16> {
    fn rec(start: usize, dim: usize, left: usize, mask: u16, out: &mut Vec<u16>) {
        if left == 0 {
            out.push(mask);
            return;
        }
        for e in start..=dim - left {
            rec(e + 1, dim, left - 1, mask | (1 << e), out);
        }
    }
    let mut out = Vec::with_capacity(binomial(dim, grade));
    if grade <= dim {
        rec(0, dim, grade, 0, &mut out);
    }
    out
}

/// Lexicographic rank of a subset among all subsets of the same size.
pub fn subset_rank(dim: usize, mask: u16) -> usize {
    let mut remaining = mask.count_ones() as usize;
    let mut rank = 0;
    let mut next = 0usize;
    for e in 0..dim {
        if mask & (1 << e) == 0 {
            continue;
        }
        for skipped in next..e {
            rank += binomial(dim - 1 - skipped, remaining - 1);
        }
        next = e + 1;
        remaining -= 1;
    }
    rank
}

pub fn mask_indices(mask: u16) -> Vec<usize> {
    (0..16).filter(|e| mask & (1 << e) != 0).collect()
}

// Sign of the permutation sorting the concatenation of two disjoint subsets.
fn shuffle_sign(left: u16, right: u16) -> bool {
    let mut inversions = 0u32;
    for e in mask_indices(right) {
        inversions += (left >> (e + 1)).count_ones();
    }
    inversions % 2 == 1
}

/// Element of `⋀^grade R^dim`.
#[derive(Clone, Debug, PartialEq)]
pub struct MultiVector<T = f64> {
    dim: usize,
    grade: usize,
    comps: Vec<T>,
}

impl<T: Coeff> MultiVector<T> {
    pub fn zero(dim: usize, grade: usize) -> Result<Self> {
        if dim == 0 || dim > MAX_DIM {
            return Err(Error::domain(format!("ambient dimension {dim} outside 1..={MAX_DIM}")));
        }
        if grade > dim {
            return Err(Error::domain(format!("grade {grade} exceeds dimension {dim}")));
        }
        Ok(Self { dim, grade, comps: vec![T::zero(); binomial(dim, grade)] })
    }

    /// Grade-1 element with the given coordinates.
    pub fn from_vector(coords: &[T]) -> Result<Self> {
        let mut v = Self::zero(coords.len(), 1)?;
        v.comps.clone_from_slice(coords);
        Ok(v)
    }

    /// Basis element `e_S` for an index list (any order; the sign of the
    /// sorting permutation is applied).
    pub fn basis(dim: usize, indices: &[usize]) -> Result<Self> {
        let mut acc = MultiVector::scalar(dim, T::one())?;
        for &i in indices {
            if i >= dim {
                return Err(Error::domain(format!("index {i} outside 0..{dim}")));
            }
            let mut e = Self::zero(dim, 1)?;
            e.comps[i] = T::one();
            acc = acc.wedge(&e)?;
        }
        Ok(acc)
    }

    pub fn scalar(dim: usize, value: T) -> Result<Self> {
        let mut v = Self::zero(dim, 0)?;
        v.comps[0] = value;
        Ok(v)
    }

    /// `w₊ = e₀`.
    pub fn w_plus(dim: usize) -> Self {
        Self::basis(dim, &[0]).expect("dim >= 1")
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn grade(&self) -> usize {
        self.grade
    }

    pub fn components(&self) -> &[T] {
        &self.comps
    }

    /// `(subset mask, coefficient)` pairs in storage order.
    pub fn terms(&self) -> impl Iterator<Item = (u16, &T)> + '_ {
        subsets(self.dim, self.grade).into_iter().zip(self.comps.iter())
    }

    pub fn get(&self, indices: &[usize]) -> T {
        let mask = indices.iter().fold(0u16, |m, &i| m | (1 << i));
        if mask.count_ones() as usize != self.grade || indices.len() != self.grade {
            return T::zero();
        }
        self.comps[subset_rank(self.dim, mask)].clone()
    }

    pub fn set(&mut self, indices: &[usize], value: T) {
        let mut sorted = indices.to_vec();
        sorted.sort_unstable();
        let mask = sorted.iter().fold(0u16, |m, &i| m | (1 << i));
        assert_eq!(mask.count_ones() as usize, self.grade, "index set must match grade");
        self.comps[subset_rank(self.dim, mask)] = value;
    }

    pub fn is_zero(&self) -> bool {
        self.comps.iter().all(|c| c.is_zero())
    }

    /// Max of absolute component values.
    pub fn sup_norm(&self) -> T {
        self.comps.iter().map(|c| c.abs()).fold(T::zero(), |m, c| if c > m { c } else { m })
    }

    pub fn scale(&self, s: &T) -> Self {
        Self { dim: self.dim, grade: self.grade, comps: self.comps.iter().map(|c| c.clone() * s.clone()).collect() }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_same_space(other)?;
        Ok(Self {
            dim: self.dim,
            grade: self.grade,
            comps: self.comps.iter().zip(&other.comps).map(|(a, b)| a.clone() + b.clone()).collect(),
        })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check_same_space(other)?;
        Ok(Self {
            dim: self.dim,
            grade: self.grade,
            comps: self.comps.iter().zip(&other.comps).map(|(a, b)| a.clone() - b.clone()).collect(),
        })
    }

    fn check_same_space(&self, other: &Self) -> Result<()> {
        if self.dim != other.dim || self.grade != other.grade {
            return Err(Error::domain(format!(
                "mismatched multivectors: dim {} grade {} vs dim {} grade {}",
                self.dim, self.grade, other.dim, other.grade
            )));
        }
        Ok(())
    }

    /// Exterior product.
    pub fn wedge(&self, other: &Self) -> Result<Self> {
        if self.dim != other.dim {
            return Err(Error::domain("wedge of multivectors over different spaces"));
        }
        let grade = self.grade + other.grade;
        if grade > self.dim {
            return Err(Error::domain(format!(
                "grade overflow: {} + {} > {}",
                self.grade, other.grade, self.dim
            )));
        }
        let mut out = Self::zero(self.dim, grade)?;
        let right: Vec<(u16, &T)> = other.terms().filter(|(_, c)| !c.is_zero()).collect();
        for (lm, lc) in self.terms() {
            if lc.is_zero() {
                continue;
            }
            for &(rm, rc) in &right {
                if lm & rm != 0 {
                    continue;
                }
                let prod = lc.clone() * rc.clone();
                let slot = &mut out.comps[subset_rank(self.dim, lm | rm)];
                if shuffle_sign(lm, rm) {
                    *slot = slot.clone() - prod;
                } else {
                    *slot = slot.clone() + prod;
                }
            }
        }
        Ok(out)
    }

    /// Convert coefficients, e.g. `i64 → f64`.
    pub fn map<U: Coeff>(&self, f: impl Fn(&T) -> U) -> MultiVector<U> {
        MultiVector { dim: self.dim, grade: self.grade, comps: self.comps.iter().map(f).collect() }
    }

    /// Decompose `v = w₊ ∧ head + tail` with `head ∈ ⋀^{i−1}W`, `tail ∈ ⋀^i W`.
    ///
    /// Both parts live in the same ambient space as `v` and have no component
    /// on subsets containing index 0. Since 0 is the smallest index,
    /// `e₀ ∧ e_S = e_{{0}∪S}` with sign `+1`, so the head coefficients are copied
    /// verbatim.
    pub fn split_wplus(&self) -> Result<(Self, Self)> {
        if self.grade == 0 || self.grade >= self.dim {
            return Err(Error::domain(format!(
                "split_wplus needs 1 <= grade <= n, got grade {} in dimension {}",
                self.grade, self.dim
            )));
        }
        let mut head = Self::zero(self.dim, self.grade - 1)?;
        let mut tail = Self::zero(self.dim, self.grade)?;
        for (mask, c) in self.terms() {
            if mask & 1 == 1 {
                head.comps[subset_rank(self.dim, mask & !1)] = c.clone();
            } else {
                tail.comps[subset_rank(self.dim, mask)] = c.clone();
            }
        }
        Ok((head, tail))
    }
}

/// Square matrix acting on `R^{n+1}` and, through [`act`], on every exterior power.
#[derive(Clone, Debug, PartialEq)]
pub struct SquareMatrix<T: Coeff = f64>(DMatrix<T>);

impl<T: Coeff> SquareMatrix<T> {
    pub fn identity(dim: usize) -> Self {
        Self(DMatrix::from_fn(dim, dim, |i, j| if i == j { T::one() } else { T::zero() }))
    }

    pub fn from_fn(dim: usize, f: impl FnMut(usize, usize) -> T) -> Self {
        Self(DMatrix::from_fn(dim, dim, f))
    }

    pub fn from_rows(rows: &[Vec<T>]) -> Result<Self> {
        let dim = rows.len();
        if dim == 0 || rows.iter().any(|r| r.len() != dim) {
            return Err(Error::domain("matrix rows must form a nonempty square"));
        }
        Ok(Self(DMatrix::from_fn(dim, dim, |i, j| rows[i][j].clone())))
    }

    pub fn diagonal(entries: &[T]) -> Self {
        let dim = entries.len();
        Self(DMatrix::from_fn(dim, dim, |i, j| if i == j { entries[i].clone() } else { T::zero() }))
    }

    pub fn dim(&self) -> usize {
        self.0.nrows()
    }

    pub fn get(&self, row: usize, col: usize) -> T {
        self.0[(row, col)].clone()
    }

    pub fn column(&self, col: usize) -> Vec<T> {
        (0..self.dim()).map(|r| self.0[(r, col)].clone()).collect()
    }

    pub fn matmul(&self, other: &Self) -> Self {
        let d = self.dim();
        Self(DMatrix::from_fn(d, d, |i, j| {
            (0..d).fold(T::zero(), |acc, k| acc + self.0[(i, k)].clone() * other.0[(k, j)].clone())
        }))
    }

    pub fn apply(&self, v: &[T]) -> Vec<T> {
        let d = self.dim();
        (0..d).map(|i| (0..d).fold(T::zero(), |acc, k| acc + self.0[(i, k)].clone() * v[k].clone())).collect()
    }

    pub fn transpose(&self) -> Self {
        Self(self.0.transpose())
    }

    pub fn as_inner(&self) -> &DMatrix<T> {
        &self.0
    }
}

impl SquareMatrix<f64> {
    pub fn determinant(&self) -> f64 {
        self.0.clone().determinant()
    }

    pub fn inverse(&self) -> Option<Self> {
        self.0.clone().try_inverse().map(Self)
    }

    /// Unimodularity flag with the given tolerance on `|det − 1|`.
    pub fn is_unimodular(&self, tol: f64) -> bool {
        (self.determinant() - 1.0).abs() <= tol
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().all(|x| x.is_finite())
    }

    /// Entrywise max difference.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.0.iter().zip(other.0.iter()).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max)
    }

    pub fn max_abs(&self) -> f64 {
        self.0.iter().map(|a| a.abs()).fold(0.0, f64::max)
    }
}

impl<T: Coeff> From<DMatrix<T>> for SquareMatrix<T> {
    fn from(m: DMatrix<T>) -> Self {
        assert_eq!(m.nrows(), m.ncols(), "square matrix required");
        Self(m)
    }
}

/// Canonical action `g·(v₁∧⋯∧v_i) = (g v₁)∧⋯∧(g v_i)`.
pub fn act<T: Coeff>(g: &SquareMatrix<T>, v: &MultiVector<T>) -> Result<MultiVector<T>> {
    if g.dim() != v.dim() {
        return Err(Error::domain(format!("matrix of size {} acting on dimension {}", g.dim(), v.dim())));
    }
    let dim = v.dim();
    let columns: Vec<MultiVector<T>> =
        (0..dim).map(|j| MultiVector::from_vector(&g.column(j))).collect::<Result<_>>()?;
    let mut out = MultiVector::zero(dim, v.grade())?;
    for (mask, c) in v.terms() {
        if c.is_zero() {
            continue;
        }
        let mut image = MultiVector::scalar(dim, c.clone())?;
        for j in mask_indices(mask) {
            image = image.wedge(&columns[j])?;
        }
        out = out.add(&image)?;
    }
    Ok(out)
}

/// Wedge of the given vectors (`v₁∧⋯∧v_k`).
pub fn wedge_all<T: Coeff>(dim: usize, vectors: &[Vec<T>]) -> Result<MultiVector<T>> {
    let mut acc = MultiVector::scalar(dim, T::one())?;
    for v in vectors {
        if v.len() != dim {
            return Err(Error::domain("vector length does not match ambient dimension"));
        }
        acc = acc.wedge(&MultiVector::from_vector(v)?)?;
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::Ratio;

    type Q = Ratio<i64>;

    fn e(dim: usize, idx: &[usize]) -> MultiVector<f64> {
        MultiVector::basis(dim, idx).unwrap()
    }

    #[test]
    fn subset_ranks_follow_storage_order() {
        for dim in 1..=6 {
            for k in 0..=dim {
                for (r, mask) in subsets(dim, k).into_iter().enumerate() {
                    assert_eq!(subset_rank(dim, mask), r);
                }
            }
        }
    }

    #[test]
    fn wedge_of_basis_vectors_is_signed() {
        let e0 = e(3, &[0]);
        let e1 = e(3, &[1]);
        let w = e0.wedge(&e1).unwrap();
        assert_eq!(w.get(&[0, 1]), 1.0);
        let w = e1.wedge(&e0).unwrap();
        assert_eq!(w.get(&[0, 1]), -1.0);
    }

    #[test]
    fn wedge_is_alternating() {
        let v = MultiVector::from_vector(&[1.5, -2.0, 0.25]).unwrap();
        assert!(v.wedge(&v).unwrap().is_zero());
    }

    #[test]
    fn grade_overflow_is_a_domain_error() {
        let a = e(3, &[0, 1]);
        let b = e(3, &[1, 2]);
        assert!(matches!(a.wedge(&b), Err(Error::Domain(_))));
    }

    #[test]
    fn sup_norm_examples() {
        assert_eq!(MultiVector::<f64>::zero(3, 2).unwrap().sup_norm(), 0.0);
        let v = e(3, &[0, 1]).scale(&3.0).sub(&e(3, &[1, 2]).scale(&5.0)).unwrap();
        assert_eq!(v.sup_norm(), 5.0);
    }

    #[test]
    fn diagonal_action_on_bivector() {
        // minors of diag(2, 2, 1/4) on e0∧e1: 2·2 = 4
        let g = SquareMatrix::diagonal(&[2.0, 2.0, 0.25]);
        let v = act(&g, &e(3, &[0, 1])).unwrap();
        assert_eq!(v.sup_norm(), 4.0);
    }

    #[test]
    fn identity_action_is_trivial() {
        let v = MultiVector::from_vector(&[1.0, 2.0, 3.0]).unwrap().wedge(&e(3, &[2])).unwrap();
        assert_eq!(act(&SquareMatrix::identity(3), &v).unwrap(), v);
    }

    #[test]
    fn split_examples() {
        let (head, tail) = e(3, &[0, 1]).split_wplus().unwrap();
        assert_eq!(head, e(3, &[1]));
        assert!(tail.is_zero());

        let (head, tail) = e(3, &[1, 2]).split_wplus().unwrap();
        assert!(head.is_zero());
        assert_eq!(tail, e(3, &[1, 2]));

        let v = e(3, &[0, 2]).scale(&2.0).add(&e(3, &[1, 2]).scale(&3.0)).unwrap();
        let (head, tail) = v.split_wplus().unwrap();
        assert_eq!(head, e(3, &[2]).scale(&2.0));
        assert_eq!(tail, e(3, &[1, 2]).scale(&3.0));
        let back = MultiVector::w_plus(3).wedge(&head).unwrap().add(&tail).unwrap();
        assert_eq!(back, v);
    }

    #[test]
    fn split_rejects_top_grade() {
        assert!(e(3, &[0, 1, 2]).split_wplus().is_err());
        assert!(MultiVector::<f64>::scalar(3, 1.0).unwrap().split_wplus().is_err());
    }

    #[test]
    fn exact_action_composes() {
        let g = SquareMatrix::<Q>::from_rows(&[
            vec![Q::new(1, 2), Q::from(3), Q::from(0)],
            vec![Q::from(0), Q::from(2), Q::new(-1, 3)],
            vec![Q::from(1), Q::from(0), Q::from(1)],
        ])
        .unwrap();
        let h = SquareMatrix::<Q>::from_rows(&[
            vec![Q::from(1), Q::from(1), Q::from(0)],
            vec![Q::from(0), Q::from(1), Q::from(0)],
            vec![Q::new(2, 5), Q::from(0), Q::from(1)],
        ])
        .unwrap();
        let v = MultiVector::<Q>::basis(3, &[0, 2]).unwrap().add(&MultiVector::basis(3, &[1, 2]).unwrap()).unwrap();
        let lhs = act(&g.matmul(&h), &v).unwrap();
        let rhs = act(&g, &act(&h, &v).unwrap()).unwrap();
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn integer_plucker_coordinates() {
        let p = wedge_all(3, &[vec![1i64, 1, 0], vec![0, 1, 2]]).unwrap();
        assert_eq!(p.components(), &[1, 2, 2]);
    }
}
