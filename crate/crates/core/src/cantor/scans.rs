//! Empirical counterparts of the covering, non-divergence and
//! representation lower-bound statements, evaluated on parameter grids.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::enclosure::{Decision, Enclosure, LinearFamily};
use super::{half_box, ConstructionConfig};
use crate::error::{Error, Result};
use crate::exterior::{binomial, MultiVector};
use crate::lattice::{enumerate_primitive_sublattices, shortest_vector};

/// Integer `a ≠ 0` with `|a_i| < ρb^{r_i q}`, `|f(s)| < ρb^{−q}` and
/// `|f′(s)| < b^{(r₁−η)q}` where `f = a₀ + Σ a_iφ_i`, first found in
/// lexicographic order (first nonzero coordinate positive).
pub fn eq_membership(cfg: &ConstructionConfig, s: f64, q: u32) -> Result<Option<Vec<i64>>> {
    if !(0.0..=1.0).contains(&s) {
        return Err(Error::domain(format!("parameter {s} outside [0, 1]")));
    }
    let t = q as f64;
    let rho = cfg.rho;
    let bounds: Vec<f64> = cfg.weight.as_slice().iter().map(|r| rho * cfg.params.b_pow(r * t)).collect();
    // strict inequalities: the largest admissible integer is ⌈B⌉ − 1
    let ints: Vec<i64> = bounds.iter().map(|b| (b.ceil() as i64 - 1).max(0)).collect();
    let thr_f = rho * cfg.params.b_pow(-t);
    let thr_df = cfg.params.b_pow((cfg.weight.r1() - cfg.eta) * t);
    let (phi, dphi) = (cfg.curve.eval(s), cfg.curve.deriv(s));
    let mut hit = None;
    let mut check = |tail: &[i64]| {
        let g: f64 = tail.iter().zip(&phi).map(|(a, p)| *a as f64 * p).sum();
        let dg: f64 = tail.iter().zip(&dphi).map(|(a, p)| *a as f64 * p).sum();
        if dg.abs() >= thr_df {
            return true;
        }
        let a0 = (-g).round();
        if (a0 + g).abs() < thr_f && (a0 != 0.0 || tail.iter().any(|&x| x != 0)) {
            hit = Some(std::iter::once(a0 as i64).chain(tail.iter().copied()).collect());
            return false;
        }
        true
    };
    // a' = 0 needs |a₀| < ρb^{−q} < 1, impossible for a₀ ≠ 0
    half_box(&ints, &mut check);
    Ok(hit)
}

/// Fraction of the `grid + 1` equally spaced parameters of `[0, 1]` that
/// belong to the covering set at level `q`.
pub fn eq_fraction(cfg: &ConstructionConfig, q: u32, grid: usize) -> Result<f64> {
    if grid == 0 {
        return Err(Error::domain("grid must be positive"));
    }
    let hits: Vec<bool> =
        (0..=grid).into_par_iter().map(|k| eq_membership(cfg, k as f64 / grid as f64, q).map(|w| w.is_some())).collect::<Result<_>>()?;
    Ok(hits.iter().filter(|h| **h).count() as f64 / (grid + 1) as f64)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct NondivergenceReport {
    pub t: f64,
    pub interval: (f64, f64),
    pub eps: f64,
    pub grid: usize,
    /// Share of grid parameters whose flowed lattice has a nonzero vector of norm `≤ ε`.
    pub fraction: f64,
    /// Whether every rank-`j` primitive sublattice has window maximum `≥ ρ^j`;
    /// `None` when some comparison was undecidable.
    pub hypothesis: Option<bool>,
}

/// Shortest-vector norms of `g_r(t)U(φ(s))Z^{n+1}` on a grid of `J`.
pub fn shortest_profile(cfg: &ConstructionConfig, t: f64, interval: (f64, f64), grid: usize) -> Result<Vec<f64>> {
    let (lo, hi) = interval;
    if !(0.0 <= lo && lo < hi && hi <= 1.0) || grid == 0 {
        return Err(Error::domain("need 0 <= lo < hi <= 1 and a positive grid"));
    }
    (0..=grid)
        .into_par_iter()
        .map(|k| Ok(shortest_vector(&cfg.lattice_at(t, lo + (hi - lo) * k as f64 / grid as f64)?)?.norm))
        .collect()
}

pub fn nondivergence_fraction(cfg: &ConstructionConfig, t: f64, interval: (f64, f64), eps: f64, grid: usize) -> Result<NondivergenceReport> {
    if !(eps > 0.0) {
        return Err(Error::domain("eps must be positive"));
    }
    let norms = shortest_profile(cfg, t, interval, grid)?;
    Ok(NondivergenceReport {
        t,
        interval,
        eps,
        grid,
        fraction: fraction_below(&norms, eps),
        hypothesis: wedge_hypothesis(cfg, t, interval)?,
    })
}

pub fn fraction_below(norms: &[f64], eps: f64) -> f64 {
    norms.iter().filter(|v| **v <= eps).count() as f64 / norms.len() as f64
}

/// Every rank-`j` primitive sublattice with window maximum below `ρ^j` has
/// covolume below `ρ^j` at the midpoint, so checking those candidates decides
/// the hypothesis.
pub fn wedge_hypothesis(cfg: &ConstructionConfig, t: f64, interval: (f64, f64)) -> Result<Option<bool>> {
    let x = 0.5 * (interval.0 + interval.1);
    let lattice = cfg.lattice_at(t, x)?;
    let mut unknown = false;
    for j in 1..=cfg.n() {
        let thr = cfg.rho.powi(j as i32);
        for s in enumerate_primitive_sublattices(&lattice, j, thr)? {
            let f = LinearFamily::for_integer_multivector(&s.plucker()?, &cfg.params, &cfg.weight, t)?;
            match f.compare_max(&cfg.curve, interval.0, interval.1, thr, &cfg.refinement) {
                Decision::Below => return Ok(Some(false)),
                Decision::Unknown => unknown = true,
                Decision::Above => {}
            }
        }
    }
    Ok(if unknown { None } else { Some(true) })
}

/// Enclosure of `max_{x ∈ [0, 1]} ‖g_r(t)U(φ(x))v‖`.
pub fn shah_lower_bound_scan(cfg: &ConstructionConfig, v: &MultiVector<f64>, t: f64) -> Result<Enclosure> {
    if v.is_zero() {
        return Err(Error::domain("v must be nonzero"));
    }
    let f = LinearFamily::for_multivector(v, &cfg.params, &cfg.weight, t)?;
    let tol = 1e-9 * v.sup_norm();
    Ok(f.max_enclosure(&cfg.curve, 0.0, 1.0, tol, &cfg.refinement))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ShahSweep {
    pub grade: usize,
    pub t: f64,
    pub samples: usize,
    pub seed: u64,
    /// Smallest certified lower bound of `scan(v)/‖v‖`.
    pub c_empirical: f64,
    /// `ρ^{n+1} > c_empirical`.
    pub rho_warning: bool,
}

/// Sweep `scan(v)/‖v‖` over random grade-`grade` multivectors with
/// coefficients uniform in `[−1, 1]`.
pub fn empirical_shah_constant(cfg: &ConstructionConfig, grade: usize, t: f64, samples: usize, seed: u64) -> Result<ShahSweep> {
    let d = cfg.n() + 1;
    if grade == 0 || grade > d || samples == 0 {
        return Err(Error::domain("need 1 <= grade <= n+1 and at least one sample"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let vs: Vec<Vec<f64>> = (0..samples).map(|_| (0..binomial(d, grade)).map(|_| rng.gen_range(-1.0..=1.0)).collect()).collect();
    let ratios: Vec<f64> = vs
        .par_iter()
        .map(|c| {
            let mut v = MultiVector::zero(d, grade)?;
            for (k, idx) in crate::exterior::subsets(d, grade).into_iter().enumerate() {
                v.set(&crate::exterior::mask_indices(idx), c[k]);
            }
            Ok(shah_lower_bound_scan(cfg, &v, t)?.lower / v.sup_norm())
        })
        .collect::<Result<_>>()?;
    let c = ratios.into_iter().fold(f64::INFINITY, f64::min);
    Ok(ShahSweep { grade, t, samples, seed, c_empirical: c, rho_warning: cfg.rho.powi(d as i32) > c })
}
