//! Lattices in `R^d` measured in the sup norm.
//!
//! Minima are computed by LLL reduction followed by exhaustive enumeration in
//! the Euclidean ball of radius `√d·ρ`, which contains the sup-norm ball of
//! radius `ρ`. Reduced bases satisfy `‖v_j‖ ≤ C_RED·λ_j` with
//! `C_RED = 2^d`.

pub mod integer;
pub mod reduce;

use std::collections::HashSet;

use num_traits::FromPrimitive;

use crate::error::{Error, Result};
use crate::exterior::{binomial, wedge_all, Coeff, MultiVector, SquareMatrix};
use integer::{gcd_all, hermite_normal_form, normalize_sign, saturate, IndependenceTracker};

/// Relative tolerance under which two norms count as tied.
pub const TIE_REL: f64 = 1e-12;
/// Default budget of search nodes for a single enumeration.
pub const ENUM_NODE_CAP: u64 = 50_000_000;
/// Default cap on the number of sublattices returned by one enumeration.
pub const SUBLATTICE_CAP: usize = 1_000_000;

pub fn c_red(dim: usize) -> f64 {
    2f64.powi(dim as i32)
}

pub fn sup_norm(v: &[f64]) -> f64 {
    v.iter().fold(0.0, |m, x| m.max(x.abs()))
}

#[derive(Clone, Debug, PartialEq)]
pub struct LatticeBasis {
    basis: SquareMatrix,
    unimodular: bool,
}

impl LatticeBasis {
    pub fn new(basis: SquareMatrix) -> Result<Self> {
        if !basis.is_finite() {
            return Err(Error::domain("basis has non-finite entries"));
        }
        let det = basis.determinant();
        if !(det.abs() > 1e-12) {
            return Err(Error::domain(format!("basis is singular (det = {det:e})")));
        }
        let unimodular = (det - 1.0).abs() <= 1e-9;
        Ok(LatticeBasis { basis, unimodular })
    }

    /// Require determinant one.
    pub fn unimodular(basis: SquareMatrix) -> Result<Self> {
        let l = Self::new(basis)?;
        if !l.unimodular {
            return Err(Error::domain(format!("basis has det {} != 1", l.basis.determinant())));
        }
        Ok(l)
    }

    pub fn standard(dim: usize) -> Self {
        LatticeBasis { basis: SquareMatrix::identity(dim), unimodular: true }
    }

    pub fn from_columns(cols: &[Vec<f64>]) -> Result<Self> {
        let d = cols.len();
        if cols.iter().any(|c| c.len() != d) {
            return Err(Error::domain("basis must be square"));
        }
        Self::new(SquareMatrix::from_fn(d, |i, j| cols[j][i]))
    }

    pub fn dim(&self) -> usize {
        self.basis.dim()
    }

    pub fn basis(&self) -> &SquareMatrix {
        &self.basis
    }

    pub fn is_unimodular(&self) -> bool {
        self.unimodular
    }

    pub fn columns(&self) -> Vec<Vec<f64>> {
        (0..self.dim()).map(|j| self.basis.column(j)).collect()
    }

    /// The lattice vector with integer coordinates `c`.
    pub fn embed(&self, c: &[i64]) -> Vec<f64> {
        let d = self.dim();
        (0..d).map(|i| (0..d).map(|j| self.basis.get(i, j) * c[j] as f64).sum()).collect()
    }
}

/// Integer coordinates (in the ambient lattice basis) of `k` independent vectors.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Sublattice {
    vectors: Vec<Vec<i64>>,
}

impl Sublattice {
    pub fn new(vectors: Vec<Vec<i64>>) -> Result<Self> {
        let d = vectors.first().map(|v| v.len()).ok_or_else(|| Error::domain("empty sublattice"))?;
        if vectors.iter().any(|v| v.len() != d) || vectors.len() > d {
            return Err(Error::domain("sublattice vectors have inconsistent dimensions"));
        }
        if integer::rank(&vectors) != vectors.len() {
            return Err(Error::domain("sublattice vectors are dependent"));
        }
        Ok(Sublattice { vectors })
    }

    pub fn rank(&self) -> usize {
        self.vectors.len()
    }

    pub fn dim(&self) -> usize {
        self.vectors[0].len()
    }

    pub fn vectors(&self) -> &[Vec<i64>] {
        &self.vectors
    }

    /// Canonical generator matrix: Hermite normal form of the rows.
    pub fn canonical(&self) -> Result<Self> {
        Ok(Sublattice { vectors: hermite_normal_form(&self.vectors)? })
    }

    /// Integer Plücker coordinates of the generators.
    pub fn plucker(&self) -> Result<MultiVector<i64>> {
        wedge_all(self.dim(), &self.vectors)
    }

    fn embedded(&self, l: &LatticeBasis) -> Vec<Vec<f64>> {
        self.vectors.iter().map(|c| l.embed(c)).collect()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ShortestVector {
    /// Integer coordinates with respect to the generators that were searched.
    pub coeffs: Vec<i64>,
    pub vector: Vec<f64>,
    pub norm: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct MinimaProfile {
    pub minima: Vec<f64>,
    pub witnesses: Vec<Vec<i64>>,
    pub vectors: Vec<Vec<f64>>,
}

/// Order among tied shortest vectors: smaller coefficient L1 norm first, then
/// lexicographically larger coefficients (so `e₁` precedes `e₂` in `Z^d`).
fn tie_key(c: &[i64]) -> (i64, Vec<i64>) {
    (c.iter().map(|x| x.abs()).sum(), c.iter().map(|x| -x).collect())
}

struct Candidate {
    coeffs: Vec<i64>,
    vector: Vec<f64>,
    norm: f64,
}

/// All lattice points of sup norm at most `bound`, one per `±` pair, with
/// coefficients in terms of `cols`, sorted by norm (ties within `TIE_REL`
/// broken by [`tie_key`]).
fn short_vectors(cols: &[Vec<f64>], reduced: &[Vec<f64>], transform: &[Vec<i64>], bound: f64) -> Result<Vec<Candidate>> {
    let d = cols.first().map_or(0, |c| c.len());
    let k = cols.len();
    let cut = bound * (1.0 + 1e-9);
    let mut out = Vec::new();
    let mut overflow = false;
    reduce::enumerate_ball(reduced, cut * (d as f64).sqrt(), ENUM_NODE_CAP, |c| {
        let vector: Vec<f64> = (0..d).map(|i| c.iter().zip(reduced).map(|(ci, b)| *ci as f64 * b[i]).sum()).collect();
        let norm = sup_norm(&vector);
        if norm > cut {
            return;
        }
        let mut coeffs = vec![0i64; k];
        for (ci, u) in c.iter().zip(transform) {
            for (x, uj) in coeffs.iter_mut().zip(u) {
                match uj.checked_mul(*ci).and_then(|p| x.checked_add(p)) {
                    Some(v) => *x = v,
                    None => overflow = true,
                }
            }
        }
        let mut normalized = coeffs.clone();
        normalize_sign(&mut normalized);
        if normalized == coeffs {
            out.push(Candidate { coeffs, vector, norm });
        }
    })?;
    if overflow {
        return Err(Error::Overflow("coefficient of a short vector".into()));
    }
    sort_candidates(&mut out);
    Ok(out)
}

fn sort_candidates(c: &mut [Candidate]) {
    c.sort_by(|a, b| a.norm.total_cmp(&b.norm));
    // cluster near-equal norms, then order each cluster by the tie key
    let mut start = 0;
    while start < c.len() {
        let base = c[start].norm;
        let mut end = start + 1;
        while end < c.len() && c[end].norm <= base * (1.0 + TIE_REL) + f64::MIN_POSITIVE {
            end += 1;
        }
        c[start..end].sort_by(|a, b| tie_key(&a.coeffs).cmp(&tie_key(&b.coeffs)));
        start = end;
    }
}

/// Shortest nonzero vector of the lattice generated by independent `cols`.
pub fn shortest_vector_of_generators(cols: &[Vec<f64>]) -> Result<ShortestVector> {
    let (reduced, transform) = reduce::lll(cols)?;
    let bound = reduced.iter().map(|v| sup_norm(v)).fold(f64::INFINITY, f64::min);
    let mut cands = short_vectors(cols, &reduced, &transform, bound)?;
    let best = cands.swap_remove(0);
    Ok(ShortestVector { coeffs: best.coeffs, vector: best.vector, norm: best.norm })
}

pub fn shortest_vector(l: &LatticeBasis) -> Result<ShortestVector> {
    shortest_vector_of_generators(&l.columns())
}

/// Successive minima of the lattice generated by independent `cols`.
pub fn minima_of_generators(cols: &[Vec<f64>]) -> Result<MinimaProfile> {
    let (reduced, transform) = reduce::lll(cols)?;
    let bound = reduced.iter().map(|v| sup_norm(v)).fold(0.0, f64::max);
    let cands = short_vectors(cols, &reduced, &transform, bound)?;
    let mut tracker = IndependenceTracker::default();
    let mut profile = MinimaProfile { minima: vec![], witnesses: vec![], vectors: vec![] };
    for c in cands {
        if profile.minima.len() == cols.len() {
            break;
        }
        if tracker.try_add(&c.coeffs) {
            profile.minima.push(c.norm);
            profile.witnesses.push(c.coeffs);
            profile.vectors.push(c.vector);
        }
    }
    if profile.minima.len() != cols.len() {
        return Err(Error::domain("enumeration found fewer independent vectors than the rank"));
    }
    Ok(profile)
}

pub fn successive_minima(l: &LatticeBasis) -> Result<MinimaProfile> {
    minima_of_generators(&l.columns())
}

/// Successive minima of `S` inside `L`; witnesses are given in `L`'s coordinates.
pub fn sublattice_minima(s: &Sublattice, l: &LatticeBasis) -> Result<MinimaProfile> {
    let mut p = minima_of_generators(&s.embedded(l))?;
    p.witnesses = p
        .witnesses
        .iter()
        .map(|c| (0..s.dim()).map(|i| c.iter().zip(&s.vectors).map(|(cj, v)| cj * v[i]).sum()).collect())
        .collect();
    Ok(p)
}

/// LLL followed by greedy pairwise sup-norm reduction; columns are sorted by
/// norm and each has its first nonzero coordinate positive.
pub fn reduced_basis(l: &LatticeBasis) -> Result<LatticeBasis> {
    let (mut b, _) = reduce::lll(&l.columns())?;
    let k = b.len();
    let mut rounds = 0;
    loop {
        let mut improved = false;
        for i in 0..k {
            for j in 0..k {
                if i == j {
                    continue;
                }
                for s in [1.0, -1.0] {
                    let cand: Vec<f64> = b[i].iter().zip(&b[j]).map(|(x, y)| x - s * y).collect();
                    if sup_norm(&cand) < sup_norm(&b[i]) * (1.0 - 1e-12) {
                        b[i] = cand;
                        improved = true;
                    }
                }
            }
        }
        rounds += 1;
        if !improved || rounds > 1000 {
            break;
        }
    }
    for v in b.iter_mut() {
        if let Some(x) = v.iter().find(|x| x.abs() > 0.0) {
            if *x < 0.0 {
                v.iter_mut().for_each(|y| *y = -*y);
            }
        }
    }
    b.sort_by(|x, y| sup_norm(x).total_cmp(&sup_norm(y)));
    let mut out = LatticeBasis::from_columns(&b)?;
    out.unimodular = l.unimodular;
    Ok(out)
}

/// `‖v₁ ∧ ⋯ ∧ v_k‖` for the embedded generators, over any coefficient type.
pub fn sublattice_covolume_in<T: Coeff + FromPrimitive>(s: &Sublattice, basis: &SquareMatrix<T>) -> Result<T> {
    let d = basis.dim();
    let embedded: Vec<Vec<T>> = s
        .vectors
        .iter()
        .map(|c| {
            let cv: Vec<T> = c.iter().map(|&x| T::from_i64(x).expect("i64 fits coefficient type")).collect();
            basis.apply(&cv)
        })
        .collect();
    Ok(wedge_all(d, &embedded)?.sup_norm())
}

pub fn sublattice_covolume(s: &Sublattice, l: &LatticeBasis) -> Result<f64> {
    sublattice_covolume_in(s, l.basis())
}

/// Closed-ball convention: a vector of norm exactly `eps` excludes `L`.
pub fn in_k_eps(l: &LatticeBasis, eps: f64) -> Result<bool> {
    if !(eps > 0.0) {
        return Err(Error::domain("eps must be positive"));
    }
    Ok(shortest_vector(l)?.norm > eps)
}

/// True iff all elementary divisors are 1, i.e. the maximal minors are coprime.
pub fn is_primitive(s: &Sublattice) -> Result<bool> {
    Ok(gcd_all(s.plucker()?.components()) == 1)
}

/// Volume of the Euclidean unit ball in `R^k`.
fn unit_ball_volume(k: usize) -> f64 {
    match k {
        0 => 1.0,
        1 => 2.0,
        _ => unit_ball_volume(k - 2) * 2.0 * std::f64::consts::PI / k as f64,
    }
}

pub fn enumerate_primitive_sublattices(l: &LatticeBasis, k: usize, rho: f64) -> Result<Vec<Sublattice>> {
    enumerate_primitive_sublattices_capped(l, k, rho, SUBLATTICE_CAP)
}

/// Every primitive rank-`k` sublattice of `L` with covolume at most `rho`,
/// as canonical (HNF) generators sorted lexicographically.
///
/// Each such sublattice has successive minima `λ_1 ≤ ⋯ ≤ λ_k` with
/// `λ_j ≥ λ_j(L)` and `λ_1⋯λ_k ≤ Π := 2^k·√C(d,k)·ρ / ω_k` (Minkowski's second
/// theorem applied to the slice of the unit cube in its span). That bounds
/// the j-th witness and makes the search over short vectors exhaustive.
pub fn enumerate_primitive_sublattices_capped(l: &LatticeBasis, k: usize, rho: f64, cap: usize) -> Result<Vec<Sublattice>> {
    let d = l.dim();
    if k == 0 || k > d {
        return Err(Error::domain(format!("rank {k} outside 1..={d}")));
    }
    if !(rho > 0.0) {
        return Err(Error::domain("rho must be positive"));
    }
    if k == 1 {
        return primitive_vectors(l, rho, cap);
    }
    if k + 1 == d {
        return corank_one_sublattices(l, rho, cap);
    }
    minkowski_search(l, k, rho, cap)
}

// Witness-by-witness search under the Minkowski bound.
fn minkowski_search(l: &LatticeBasis, k: usize, rho: f64, cap: usize) -> Result<Vec<Sublattice>> {
    let d = l.dim();
    let lam = successive_minima(l)?.minima;
    let pi_bound = if k == 1 {
        rho
    } else {
        2f64.powi(k as i32) * (binomial(d, k) as f64).sqrt() * rho / unit_ball_volume(k)
    };
    let mut bounds = Vec::with_capacity(k);
    let mut prefix = 1.0;
    for j in 0..k {
        bounds.push((pi_bound / prefix).powf(1.0 / (k - j) as f64));
        prefix *= lam[j];
    }
    // later witnesses are at least as long as earlier ones
    for j in 1..k {
        if bounds[j] < bounds[j - 1] {
            bounds[j - 1] = bounds[j - 1].min(bounds[j]);
        }
    }
    let top = bounds.iter().cloned().fold(0.0, f64::max);
    if top < lam[0] * (1.0 - 1e-9) {
        return Ok(vec![]);
    }
    let cols = l.columns();
    let (reduced, transform) = reduce::lll(&cols)?;
    let cands = short_vectors(&cols, &reduced, &transform, top)?;

    let mut seen: HashSet<Vec<i64>> = HashSet::new();
    let mut found: Vec<Sublattice> = Vec::new();
    let mut leaves = 0u64;
    let mut chosen: Vec<usize> = Vec::with_capacity(k);
    search(&cands, &bounds, k, 0, &mut chosen, &IndependenceTracker::default(), &mut |idx: &[usize]| {
        leaves += 1;
        if leaves > ENUM_NODE_CAP {
            return Err(Error::resource("sublattice search exceeded its node budget"));
        }
        let rows: Vec<Vec<i64>> = idx.iter().map(|&i| cands[i].coeffs.clone()).collect();
        let mut key: Vec<i64> = wedge_all(d, &rows)?.components().to_vec();
        let g = gcd_all(&key);
        key.iter_mut().for_each(|x| *x /= g);
        normalize_sign(&mut key);
        if !seen.insert(key) {
            return Ok(());
        }
        let sat = Sublattice { vectors: hermite_normal_form(&saturate(&rows, d)?)? };
        if sublattice_covolume(&sat, l)? <= rho * (1.0 + 1e-9) {
            found.push(sat);
            if found.len() > cap {
                return Err(Error::resource(format!("more than {cap} sublattices")));
            }
        }
        Ok(())
    })?;
    found.sort_by(|a, b| a.vectors.cmp(&b.vectors));
    Ok(found)
}

// Rank one: primitive short vectors, one per sign pair.
fn primitive_vectors(l: &LatticeBasis, rho: f64, cap: usize) -> Result<Vec<Sublattice>> {
    let cols = l.columns();
    let (reduced, transform) = reduce::lll(&cols)?;
    let mut found: Vec<Sublattice> = short_vectors(&cols, &reduced, &transform, rho)?
        .into_iter()
        .filter(|c| gcd_all(&c.coeffs) == 1)
        .map(|c| Sublattice { vectors: vec![c.coeffs] })
        .collect();
    if found.len() > cap {
        return Err(Error::resource(format!("more than {cap} sublattices")));
    }
    found.sort_by(|a, b| a.vectors.cmp(&b.vectors));
    Ok(found)
}

/// Rank-`(d−1)` primitive sublattices are the kernels `y^⊥` of primitive
/// integer vectors `y`. The coordinates of `Bc₁∧⋯∧Bc_{d−1}` are, up to sign
/// and order, those of `det(B)·B^{−T}(c₁×⋯×c_{d−1})`, so their covolume is the
/// sup norm of `y` in the scaled dual lattice and a single short-vector
/// enumeration there is exhaustive, however small `λ₁(L)` is.
fn corank_one_sublattices(l: &LatticeBasis, rho: f64, cap: usize) -> Result<Vec<Sublattice>> {
    let d = l.dim();
    let det = l.basis.determinant().abs();
    let inv = l.basis.inverse().ok_or_else(|| Error::domain("basis is not invertible"))?;
    let dual: Vec<Vec<f64>> = (0..d).map(|j| (0..d).map(|i| det * inv.get(j, i)).collect()).collect();
    let (reduced, transform) = reduce::lll(&dual)?;
    let mut found = Vec::new();
    for c in short_vectors(&dual, &reduced, &transform, rho)? {
        if gcd_all(&c.coeffs) != 1 {
            continue;
        }
        let sat = Sublattice { vectors: hermite_normal_form(&integer::integer_kernel(&[c.coeffs], d)?)? };
        if sublattice_covolume(&sat, l)? <= rho * (1.0 + 1e-9) {
            found.push(sat);
            if found.len() > cap {
                return Err(Error::resource(format!("more than {cap} sublattices")));
            }
        }
    }
    found.sort_by(|a, b| a.vectors.cmp(&b.vectors));
    Ok(found)
}

fn search(
    cands: &[Candidate],
    bounds: &[f64],
    k: usize,
    from: usize,
    chosen: &mut Vec<usize>,
    tracker: &IndependenceTracker,
    leaf: &mut dyn FnMut(&[usize]) -> Result<()>,
) -> Result<()> {
    let level = chosen.len();
    if level == k {
        return leaf(chosen);
    }
    let limit = bounds[level] * (1.0 + 1e-9);
    for i in from..cands.len() {
        if cands[i].norm > limit {
            break;
        }
        if !tracker.is_independent(&cands[i].coeffs) {
            continue;
        }
        let mut next = tracker.clone();
        next.try_add(&cands[i].coeffs);
        chosen.push(i);
        search(cands, bounds, k, i + 1, chosen, &next, leaf)?;
        chosen.pop();
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::Ratio;

    fn diag(e: &[f64]) -> LatticeBasis {
        LatticeBasis::new(SquareMatrix::diagonal(e)).unwrap()
    }

    fn sub(v: Vec<Vec<i64>>) -> Sublattice {
        Sublattice::new(v).unwrap()
    }

    #[test]
    fn shortest_vector_examples() {
        let sv = shortest_vector(&LatticeBasis::standard(3)).unwrap();
        assert_eq!(sv.norm, 1.0);
        assert_eq!(sv.coeffs, vec![1, 0, 0]);
        let sv = shortest_vector(&diag(&[2.0, 2.0, 0.25])).unwrap();
        assert_eq!(sv.norm, 0.25);
        assert_eq!(sv.vector, vec![0.0, 0.0, 0.25]);
    }

    #[test]
    fn shortest_vector_of_unipotent_matches_box_search() {
        let x = [0.618, 0.382];
        let l = LatticeBasis::new(crate::flows::unipotent_u(&x)).unwrap();
        let mut best = f64::INFINITY;
        for a in -3i64..=3 {
            for b in -3i64..=3 {
                for c in -3i64..=3 {
                    if (a, b, c) != (0, 0, 0) {
                        best = best.min(sup_norm(&l.embed(&[a, b, c])));
                    }
                }
            }
        }
        let sv = shortest_vector(&l).unwrap();
        assert!((sv.norm - best).abs() < 1e-12);
        assert!((sv.norm - 1.0).abs() < 1e-12);
    }

    #[test]
    fn minima_examples() {
        let p = successive_minima(&LatticeBasis::standard(4)).unwrap();
        assert_eq!(p.minima, vec![1.0; 4]);
        let p = successive_minima(&diag(&[3.0, 1.0 / 3.0, 1.0])).unwrap();
        assert!((p.minima[0] - 1.0 / 3.0).abs() < 1e-15);
        assert_eq!(&p.minima[1..], &[1.0, 3.0]);
    }

    #[test]
    fn reduced_basis_examples() {
        let r = reduced_basis(&diag(&[3.0, 1.0 / 3.0, 1.0])).unwrap();
        let cols = r.columns();
        assert_eq!(cols[0], vec![0.0, 1.0 / 3.0, 0.0]);
        assert_eq!(cols[1], vec![0.0, 0.0, 1.0]);
        assert_eq!(cols[2], vec![3.0, 0.0, 0.0]);
        let r = reduced_basis(&LatticeBasis::from_columns(&[vec![1.0, 0.0], vec![10.0, 1.0]]).unwrap()).unwrap();
        for c in r.columns() {
            assert_eq!(sup_norm(&c), 1.0);
        }
    }

    #[test]
    fn covolume_examples() {
        let z3 = LatticeBasis::standard(3);
        assert_eq!(sublattice_covolume(&sub(vec![vec![1, 0, 0], vec![0, 1, 0]]), &z3).unwrap(), 1.0);
        assert_eq!(sublattice_covolume(&sub(vec![vec![1, 1, 0], vec![0, 1, 0]]), &z3).unwrap(), 1.0);
        assert_eq!(sublattice_covolume(&sub(vec![vec![1, 1, 0], vec![0, 1, 2]]), &z3).unwrap(), 2.0);
    }

    #[test]
    fn covolume_is_exact_in_rational_mode() {
        let third = Ratio::new(1i64, 3);
        let m = SquareMatrix::diagonal(&[third, Ratio::from_integer(3), Ratio::from_integer(1)]);
        let a = sublattice_covolume_in(&sub(vec![vec![1, 0, 0], vec![0, 1, 0]]), &m).unwrap();
        let b = sublattice_covolume_in(&sub(vec![vec![1, 1, 0], vec![2, 3, 0]]), &m).unwrap();
        assert_eq!(a, Ratio::from_integer(1));
        assert_eq!(a, b);
    }

    #[test]
    fn k_eps_boundary_is_closed() {
        let z3 = LatticeBasis::standard(3);
        assert!(in_k_eps(&z3, 0.5).unwrap());
        assert!(!in_k_eps(&z3, 1.0).unwrap());
        // shortest vector has norm 1/4, so the ball of radius 0.2 is empty
        assert!(in_k_eps(&diag(&[2.0, 2.0, 0.25]), 0.2).unwrap());
        assert!(!in_k_eps(&diag(&[2.0, 2.0, 0.25]), 0.25).unwrap());
    }

    #[test]
    fn primitivity_examples() {
        assert!(!is_primitive(&sub(vec![vec![2, 0, 0]])).unwrap());
        assert!(is_primitive(&sub(vec![vec![1, 1, 0]])).unwrap());
        assert!(!is_primitive(&sub(vec![vec![2, 0, 0], vec![0, 3, 0]])).unwrap());
    }

    #[test]
    fn vector_paths_match_direct_search() {
        let mats = [
            vec![vec![1.0, 0.3, -0.2], vec![0.0, 1.1, 0.4], vec![0.0, 0.0, 1.0 / 1.1]],
            vec![vec![0.5, 0.0, 0.0], vec![0.2, 2.0, 0.0], vec![-0.1, 0.7, 1.0]],
            vec![vec![0.9, 0.1, 0.2, 0.0], vec![0.0, 1.2, 0.3, 0.1], vec![0.1, 0.0, 1.0, 0.2], vec![0.0, 0.2, 0.0, 1.0]],
        ];
        for m in mats {
            let l = LatticeBasis::new(SquareMatrix::from_rows(&m).unwrap()).unwrap();
            let d = l.dim();
            let rhos: &[f64] = if d == 3 { &[0.5, 1.0, 1.7] } else { &[0.5] };
            for &rho in rhos {
                for k in [1, d - 1] {
                    let a = enumerate_primitive_sublattices(&l, k, rho).unwrap();
                    let b = minkowski_search(&l, k, rho, SUBLATTICE_CAP).unwrap();
                    assert_eq!(a, b);
                }
            }
        }
    }

    #[test]
    fn sublattice_counts_in_z3() {
        let z3 = LatticeBasis::standard(3);
        assert_eq!(enumerate_primitive_sublattices(&z3, 1, 1.0).unwrap().len(), 13);
        assert_eq!(enumerate_primitive_sublattices(&z3, 2, 1.0).unwrap().len(), 13);
        assert_eq!(enumerate_primitive_sublattices(&z3, 3, 1.0).unwrap().len(), 1);
        assert!(enumerate_primitive_sublattices(&z3, 1, 0.5).unwrap().is_empty());
    }

    #[test]
    fn sublattice_cap_is_a_resource_error() {
        let err = enumerate_primitive_sublattices_capped(&LatticeBasis::standard(3), 1, 1.0, 5).unwrap_err();
        assert!(err.is_resource());
    }
}
