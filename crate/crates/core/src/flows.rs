//! Weights, diagonal flows and unipotent embeddings in `SL(n+1, R)`.
//!
//! Two families of diagonal flows appear: the base-`e` flows `a_r(t)`, `d_r(t)`
//! used by the orbit correspondence, and the base-`b` flow `g_r(t)` (with
//! `b^{1+r₁} = R`) that drives the interval construction.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exterior::SquareMatrix;

/// Tolerance for `Σ r_i = 1`.
pub const WEIGHT_SUM_TOL: f64 = 1e-12;

/// Below this residual a Gram–Schmidt candidate is treated as parallel.
pub const FRAME_PARALLEL_TOL: f64 = 1e-6;

/// An `n`-dimensional weight: nonnegative entries summing to one.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct Weight(Vec<f64>);

impl Weight {
    pub fn new(r: Vec<f64>) -> Result<Self> {
        if r.is_empty() {
            return Err(Error::domain("weight must have at least one entry"));
        }
        if r.iter().any(|x| !x.is_finite() || *x < 0.0) {
            return Err(Error::domain(format!("weight entries must be finite and nonnegative: {r:?}")));
        }
        let sum: f64 = r.iter().sum();
        if (sum - 1.0).abs() > WEIGHT_SUM_TOL {
            return Err(Error::domain(format!("weight entries sum to {sum}, expected 1")));
        }
        Ok(Self(r))
    }

    /// Equal weight `(1/n, …, 1/n)`.
    pub fn uniform(n: usize) -> Self {
        Self(vec![1.0 / n as f64; n])
    }

    pub fn n(&self) -> usize {
        self.0.len()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    /// Largest entry `r₁` (first entry for a standard weight).
    pub fn r1(&self) -> f64 {
        self.0[0]
    }

    /// Sorted nonincreasing with a positive last entry.
    pub fn is_standard(&self) -> bool {
        self.0.windows(2).all(|w| w[0] >= w[1]) && *self.0.last().unwrap() > 0.0
    }

    pub fn require_standard(&self) -> Result<()> {
        if self.is_standard() {
            Ok(())
        } else {
            Err(Error::domain(format!(
                "weight {:?} must be sorted nonincreasing with positive last entry",
                self.0
            )))
        }
    }
}

impl TryFrom<Vec<f64>> for Weight {
    type Error = Error;
    fn try_from(r: Vec<f64>) -> Result<Self> {
        Weight::new(r)
    }
}

impl From<Weight> for Vec<f64> {
    fn from(w: Weight) -> Self {
        w.0
    }
}

/// Fixed construction constants derived from the subdivision factor `R`,
/// the depth exponent `m` and a weight.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FlowParams {
    pub subdivision: u32,
    pub m: u32,
    /// `b` with `b^{1+r₁} = R`.
    pub b: f64,
    pub ln_b: f64,
    /// `κ = R^{−m}`.
    pub kappa: f64,
    /// `λ_i = (1+r_i)/(1+r₁)`.
    pub lambda: Vec<f64>,
}

impl FlowParams {
    pub fn new(subdivision: u32, m: u32, weight: &Weight) -> Result<Self> {
        if subdivision < 2 {
            return Err(Error::domain(format!("subdivision factor R must be >= 2, got {subdivision}")));
        }
        if m == 0 {
            return Err(Error::domain("m must be a positive integer"));
        }
        let r1 = weight.r1();
        let ln_r = (subdivision as f64).ln();
        let ln_b = ln_r / (1.0 + r1);
        let lambda = weight.as_slice().iter().map(|ri| (1.0 + ri) / (1.0 + r1)).collect();
        Ok(Self {
            subdivision,
            m,
            b: ln_b.exp(),
            ln_b,
            kappa: (-(m as f64) * ln_r).exp(),
            lambda,
        })
    }

    pub fn r(&self) -> f64 {
        self.subdivision as f64
    }

    /// `b^e` evaluated as `exp(e·ln b)`.
    pub fn b_pow(&self, e: f64) -> f64 {
        (e * self.ln_b).exp()
    }

    /// `R^e`.
    pub fn r_pow(&self, e: f64) -> f64 {
        (e * self.r().ln()).exp()
    }
}

fn checked_diag(exponents: impl Iterator<Item = f64>) -> Result<SquareMatrix> {
    let entries: Vec<f64> = exponents.map(f64::exp).collect();
    if entries.iter().any(|x| !x.is_finite() || *x == 0.0) {
        return Err(Error::Overflow("flow entry outside the representable range".into()));
    }
    Ok(SquareMatrix::diagonal(&entries))
}

/// `a_r(t) = diag(e^{r₁t}, …, e^{r_n t}, e^{−t})`.
pub fn flow_a(w: &Weight, t: f64) -> Result<SquareMatrix> {
    checked_diag(w.as_slice().iter().map(|r| r * t).chain(std::iter::once(-t)))
}

/// `d_r(t) = diag(e^t, e^{−r₁t}, …, e^{−r_n t})`.
pub fn flow_d(w: &Weight, t: f64) -> Result<SquareMatrix> {
    checked_diag(std::iter::once(t).chain(w.as_slice().iter().map(|r| -r * t)))
}

/// `g_r(t) = diag(b^t, b^{−r₁t}, …, b^{−r_n t})`.
pub fn flow_g(p: &FlowParams, w: &Weight, t: f64) -> Result<SquareMatrix> {
    checked_diag(std::iter::once(t * p.ln_b).chain(w.as_slice().iter().map(|r| -r * t * p.ln_b)))
}

/// Diagonal matrix `diag(b^{e₀t}, …, b^{e_n t})` for exponents summing to zero.
pub fn aux_flow(p: &FlowParams, exponents: &[f64], t: f64) -> Result<SquareMatrix> {
    let sum: f64 = exponents.iter().sum();
    if sum.abs() > WEIGHT_SUM_TOL {
        return Err(Error::domain(format!("auxiliary flow exponents sum to {sum}, expected 0")));
    }
    checked_diag(exponents.iter().map(|e| e * t * p.ln_b))
}

/// Exponents of `g^η(t) = diag(b^{−ηt}, b^{ηt/n} I_n)`.
pub fn g_eta_exponents(n: usize, eta: f64) -> Vec<f64> {
    std::iter::once(-eta).chain(std::iter::repeat(eta / n as f64).take(n)).collect()
}

/// Exponents of `ξ(t)`: `−β` on `w₊`, `0` on `w_j` for `j < n₁`, `r_j` for
/// `j ≥ n₁`, where `β = Σ_{j≥n₁} r_j`. `n₁` is 1-based.
pub fn xi_exponents(w: &Weight, n1: usize) -> Result<Vec<f64>> {
    check_split(w, n1)?;
    let r = w.as_slice();
    let beta: f64 = r[n1 - 1..].iter().sum();
    Ok(std::iter::once(-beta)
        .chain(r.iter().enumerate().map(|(j, rj)| if j + 1 < n1 { 0.0 } else { *rj }))
        .collect())
}

/// Exponents of `g′(t) = ξ(t) g_r(t)`: `χ = Σ_{j<n₁} r_j` on `w₊`, `−r_j` for
/// `j < n₁`, `0` afterwards.
pub fn g_prime_exponents(w: &Weight, n1: usize) -> Result<Vec<f64>> {
    check_split(w, n1)?;
    let r = w.as_slice();
    let chi: f64 = r[..n1 - 1].iter().sum();
    Ok(std::iter::once(chi)
        .chain(r.iter().enumerate().map(|(j, rj)| if j + 1 < n1 { -rj } else { 0.0 }))
        .collect())
}

fn check_split(w: &Weight, n1: usize) -> Result<()> {
    if n1 == 0 || n1 > w.n() {
        return Err(Error::domain(format!("split index n1 = {n1} outside 1..={}", w.n())));
    }
    Ok(())
}

/// `U(x) = [[1, xᵀ], [0, I_n]]`.
pub fn unipotent_u(x: &[f64]) -> SquareMatrix {
    let d = x.len() + 1;
    SquareMatrix::from_fn(d, |i, j| match (i, j) {
        (0, 0) => 1.0,
        (0, j) => x[j - 1],
        (i, j) if i == j => 1.0,
        _ => 0.0,
    })
}

/// `V(x) = [[I_n, x], [0, 1]]`.
pub fn unipotent_v(x: &[f64]) -> SquareMatrix {
    let n = x.len();
    SquareMatrix::from_fn(n + 1, |i, j| {
        if i == j {
            1.0
        } else if j == n && i < n {
            x[i]
        } else {
            0.0
        }
    })
}

/// `ξ₁(r) = diag(r, r⁻¹, 1, …, 1)` in dimension `n+1`.
pub fn xi_one(n: usize, r: f64) -> SquareMatrix {
    let mut d = vec![1.0; n + 1];
    d[0] = r;
    d[1] = 1.0 / r;
    SquareMatrix::diagonal(&d)
}

/// `u₁(r) = U(r e₁)`.
pub fn u_one(n: usize, r: f64) -> SquareMatrix {
    let mut x = vec![0.0; n];
    x[0] = r;
    unipotent_u(&x)
}

/// Rotation `k ∈ SO(n)` with `k e₁ = x/‖x‖₂`.
///
/// The remaining columns come from Gram–Schmidt against `e₁, …, e_n` in order,
/// skipping candidates whose residual is below [`FRAME_PARALLEL_TOL`]; the last
/// column is negated if needed to make the determinant `+1`.
pub fn rotation_k(x: &[f64]) -> Result<Vec<Vec<f64>>> {
    let n = x.len();
    let norm = x.iter().map(|v| v * v).sum::<f64>().sqrt();
    if norm == 0.0 || !norm.is_finite() {
        return Err(Error::domain("rotation frame needs a nonzero finite vector"));
    }
    if n == 1 && x[0] < 0.0 {
        // SO(1) is trivial
        return Err(Error::domain("no rotation of R^1 maps e1 to a negative multiple"));
    }
    let mut cols: Vec<Vec<f64>> = vec![x.iter().map(|v| v / norm).collect()];
    for cand in 0..n {
        if cols.len() == n {
            break;
        }
        let mut v = vec![0.0; n];
        v[cand] = 1.0;
        for c in &cols {
            let dot: f64 = c.iter().zip(&v).map(|(a, b)| a * b).sum();
            v.iter_mut().zip(c).for_each(|(vi, ci)| *vi -= dot * ci);
        }
        let res = v.iter().map(|t| t * t).sum::<f64>().sqrt();
        if res < FRAME_PARALLEL_TOL {
            continue;
        }
        cols.push(v.into_iter().map(|t| t / res).collect());
    }
    let k = SquareMatrix::from_fn(n, |i, j| cols[j][i]);
    if k.determinant() < 0.0 {
        cols[n - 1].iter_mut().for_each(|v| *v = -*v);
    }
    Ok(cols)
}

/// Block-diagonal frame `z(k) = 1 ⊕ k` with `k e₁ = x/‖x‖₂`.
pub fn rotation_frame(x: &[f64]) -> Result<SquareMatrix> {
    let cols = rotation_k(x)?;
    Ok(SquareMatrix::from_fn(x.len() + 1, |i, j| match (i, j) {
        (0, 0) => 1.0,
        (0, _) | (_, 0) => 0.0,
        (i, j) => cols[j - 1][i - 1],
    }))
}

/// `ξ_x(r) = z(k) ξ₁(r) z(k)⁻¹`, the diagonal element of the `SL(2, x)` copy.
pub fn xi_x(x: &[f64], r: f64) -> Result<SquareMatrix> {
    let z = rotation_frame(x)?;
    Ok(z.matmul(&xi_one(x.len(), r)).matmul(&z.transpose()))
}

/// `y′` with `g_r(t) U(y) g_r(−t) = U(y′)`, i.e. `y′_i = b^{(1+r_i)t} y_i`.
pub fn conjugate_unipotent_by_flow(p: &FlowParams, w: &Weight, t: f64, y: &[f64]) -> Result<Vec<f64>> {
    if y.len() != w.n() {
        return Err(Error::domain("vector length does not match weight dimension"));
    }
    let out: Vec<f64> =
        w.as_slice().iter().zip(y).map(|(ri, yi)| p.b_pow((1.0 + ri) * t) * yi).collect();
    if out.iter().any(|v| !v.is_finite()) {
        return Err(Error::Overflow("conjugated unipotent outside the representable range".into()));
    }
    Ok(out)
}
