//! The interval-survival construction on `[0, 1]` (the curve is reparametrized
//! to unit length) and the accounting built on top of it.
//!
//! Generation `q` consists of the `R`-fold subdivisions of the surviving
//! generation-`q−1` intervals; a child dies when some nonzero integer vector
//! `a` has `‖g_r(q)U(φ(s))a‖ ≤ κ` for a parameter `s` in it. Node `k` of
//! generation `q` is `[k·R^{−q}, (k+1)·R^{−q}]`.

pub mod enclosure;
pub mod scans;
pub mod taxonomy;

use rayon::prelude::*;
use serde::Serialize;

use crate::curve::Curve;
use crate::diophantine::{badness_constant_direct, dual_only_zero_solution, Point};
use crate::error::{Error, Result};
use crate::flows::{flow_g, unipotent_u, FlowParams, Weight};
use crate::lattice::{shortest_vector, LatticeBasis};
pub use enclosure::{Decision, Enclosure, LinearFamily, Refinement};
pub use taxonomy::{classify_dead, Bucket, Classified};

/// Default cap on the number of nodes in one construction tree.
pub const NODE_CAP: usize = 2_000_000;
/// Relative safety margin of the independent survivor recheck.
pub const RECHECK_MARGIN: f64 = 0.02;

#[derive(Clone, Debug)]
pub struct ConstructionConfig {
    pub weight: Weight,
    /// The curve reparametrized over `[0, 1]`.
    pub curve: Curve,
    pub params: FlowParams,
    pub rho: f64,
    pub rho1: f64,
    pub eta: f64,
    pub eta_prime: f64,
    pub depth: u32,
    pub l_min: u32,
    /// `None` means `⌊2η′q⌋`.
    pub l_max: Option<u32>,
    pub l_gen: u32,
    pub refinement: Refinement,
    /// Target width of reported enclosures, as a fraction of `κ`.
    pub tol_frac: f64,
    pub node_cap: usize,
}

/// Serializable view of a configuration.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ConfigSummary {
    pub curve: String,
    pub domain: (f64, f64),
    pub weight: Vec<f64>,
    #[serde(rename = "R")]
    pub subdivision: u32,
    pub m: u32,
    pub kappa: f64,
    pub b: f64,
    pub rho: f64,
    pub rho1: f64,
    pub eta: f64,
    pub eta_prime: f64,
    pub depth: u32,
    pub l_min: u32,
    pub l_max: Option<u32>,
    pub l_gen: u32,
    pub refinement: Refinement,
    pub tol_frac: f64,
    pub node_cap: usize,
}

impl ConstructionConfig {
    /// Defaults: `ρ = 0.25`, `ρ₁ = 0.05`, `η = 1/(100n²)`, `l_min = l_gen = 1`.
    pub fn new(curve: &Curve, weight: Weight, subdivision: u32, m: u32, depth: u32) -> Result<Self> {
        if curve.n() != weight.n() {
            return Err(Error::domain(format!("curve in R^{} with a weight of length {}", curve.n(), weight.n())));
        }
        let params = FlowParams::new(subdivision, m, &weight)?;
        let n = weight.n() as f64;
        let eta = 1.0 / (100.0 * n * n);
        let cfg = ConstructionConfig {
            eta_prime: eta / (1.0 + weight.r1()),
            weight,
            curve: curve.unit_reparametrized(),
            params,
            rho: 0.25,
            rho1: 0.05,
            eta,
            depth,
            l_min: 1,
            l_max: None,
            l_gen: 1,
            refinement: Refinement::default(),
            tol_frac: 0.01,
            node_cap: NODE_CAP,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn with_rho(mut self, rho: f64) -> Result<Self> {
        self.rho = rho;
        self.validate()?;
        Ok(self)
    }

    /// Override `η`; `η′` follows.
    pub fn with_eta(mut self, eta: f64) -> Result<Self> {
        self.eta = eta;
        self.eta_prime = eta / (1.0 + self.weight.r1());
        self.validate()?;
        Ok(self)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.rho > 0.0 && self.rho < 1.0) || !(self.rho1 > 0.0 && self.rho1 < 1.0) {
            return Err(Error::domain("rho and rho1 must lie in (0, 1)"));
        }
        if !(self.eta > 0.0) || (self.eta_prime - self.eta / (1.0 + self.weight.r1())).abs() > 1e-15 {
            return Err(Error::domain("eta must be positive with eta' = eta/(1+r1)"));
        }
        if self.l_min == 0 || self.l_gen == 0 {
            return Err(Error::domain("l_min and l_gen must be at least 1"));
        }
        if self.refinement.initial_cells == 0 || self.refinement.cell_cap == 0 {
            return Err(Error::domain("refinement budget must be positive"));
        }
        Ok(())
    }

    pub fn kappa(&self) -> f64 {
        self.params.kappa
    }

    pub fn n(&self) -> usize {
        self.weight.n()
    }

    pub fn l_max_at(&self, q: u32) -> u32 {
        self.l_max.unwrap_or((2.0 * self.eta_prime * q as f64).floor() as u32)
    }

    /// `R^{−q}`.
    pub fn cell_length(&self, q: u32) -> f64 {
        self.params.r_pow(-(q as f64))
    }

    pub fn node_bounds(&self, q: u32, index: u64) -> (f64, f64) {
        let len = self.cell_length(q);
        (index as f64 * len, ((index + 1) as f64 * len).min(1.0))
    }

    /// Basis `g_r(t)U(φ(s))` of the flowed lattice.
    pub fn lattice_at(&self, t: f64, s: f64) -> Result<LatticeBasis> {
        let g = flow_g(&self.params, &self.weight, t)?;
        LatticeBasis::new(g.matmul(&unipotent_u(&self.curve.eval(s))))
    }

    pub fn summary(&self) -> ConfigSummary {
        ConfigSummary {
            curve: self.curve.name().to_string(),
            domain: (0.0, 1.0),
            weight: self.weight.as_slice().to_vec(),
            subdivision: self.params.subdivision,
            m: self.params.m,
            kappa: self.params.kappa,
            b: self.params.b,
            rho: self.rho,
            rho1: self.rho1,
            eta: self.eta,
            eta_prime: self.eta_prime,
            depth: self.depth,
            l_min: self.l_min,
            l_max: self.l_max,
            l_gen: self.l_gen,
            refinement: self.refinement,
            tol_frac: self.tol_frac,
            node_cap: self.node_cap,
        }
    }
}

/// The `R` equal closed pieces of `[lo, hi]`.
pub fn par_r(interval: (f64, f64), subdivision: u32) -> Result<Vec<(f64, f64)>> {
    if subdivision < 2 {
        return Err(Error::domain("R must be at least 2"));
    }
    let (lo, hi) = interval;
    if !(lo < hi) {
        return Err(Error::domain("empty interval"));
    }
    let r = subdivision as f64;
    Ok((0..subdivision)
        .map(|k| {
            let a = lo + (hi - lo) * k as f64 / r;
            let b = if k + 1 == subdivision { hi } else { lo + (hi - lo) * (k + 1) as f64 / r };
            (a, b)
        })
        .collect())
}

/// Enclosure of `max_{s ∈ [lo, hi]} ‖g_r(q)U(φ(s))a‖`, refined until its width
/// drops under `tol_frac·κ`.
pub fn certified_max_norm(cfg: &ConstructionConfig, a: &[i64], q: f64, interval: (f64, f64)) -> Result<Enclosure> {
    if a.iter().all(|&x| x == 0) {
        return Err(Error::domain("the zero vector has no meaningful norm profile"));
    }
    let f = LinearFamily::for_vector(a, &cfg.params, &cfg.weight, q)?;
    Ok(f.max_enclosure(&cfg.curve, interval.0, interval.1, cfg.tol_frac * cfg.kappa(), &cfg.refinement))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum Survival {
    Alive,
    /// `witness` attains norm `norm ≤ κ` at the parameter `at`.
    Dead { witness: Vec<i64>, norm: f64, at: f64 },
    /// No witness was certified but some candidate could not be excluded.
    Indeterminate { witness: Vec<i64> },
}

impl Survival {
    pub fn is_alive(&self) -> bool {
        matches!(self, Survival::Alive)
    }
}

/// Odometer over the box `Π [−B_i, B_i]`, keeping one of each `±a` pair.
pub(crate) fn half_box(bounds: &[i64], mut visit: impl FnMut(&[i64]) -> bool) {
    let mut a: Vec<i64> = bounds.iter().map(|b| -b).collect();
    if bounds.is_empty() {
        return;
    }
    loop {
        if a.iter().find(|x| **x != 0).is_some_and(|x| *x > 0) && !visit(&a) {
            return;
        }
        let mut k = a.len();
        loop {
            if k == 0 {
                return;
            }
            k -= 1;
            if a[k] < bounds[k] {
                a[k] += 1;
                break;
            }
            a[k] = -bounds[k];
        }
    }
}

/// Integer `a₀` values with `|a₀ + a·φ(s)| ≤ slack` attainable on `[lo, hi]`.
pub(crate) fn constant_range(cfg: &ConstructionConfig, a: &[i64], lo: f64, hi: f64, slack: f64) -> std::ops::RangeInclusive<i64> {
    let d: Vec<f64> = a.iter().map(|&x| x as f64).collect();
    let (gmin, gmax) = LinearFamily::row0_range(&d, &cfg.curve, lo, hi);
    ((-gmax - slack).ceil() as i64)..=((-gmin + slack).floor() as i64)
}

pub(crate) fn box_bounds(cfg: &ConstructionConfig, radius: f64, q: f64) -> Vec<i64> {
    cfg.weight
        .as_slice()
        .iter()
        .map(|r| (radius * cfg.params.b_pow(r * q) * (1.0 + enclosure::TIE_REL)).floor() as i64)
        .collect()
}

/// Whether the generation-`q` node `[lo, hi]` contains a parameter whose
/// flowed lattice has a nonzero vector of norm at most `κ`.
pub fn survival_test(cfg: &ConstructionConfig, q: u32, interval: (f64, f64)) -> Result<Survival> {
    let (lo, hi) = interval;
    let t = q as f64;
    let kappa = cfg.kappa();
    let thr0 = kappa * cfg.params.b_pow(-t);
    if thr0 >= 1.0 {
        let mut w = vec![0; cfg.n() + 1];
        w[0] = 1;
        return Ok(Survival::Dead { witness: w, norm: cfg.params.b_pow(t), at: lo });
    }
    let bounds = box_bounds(cfg, kappa, t);
    let mut out = Survival::Alive;
    let mut err = None;
    half_box(&bounds, |tail| {
        for a0 in constant_range(cfg, tail, lo, hi, thr0) {
            let a: Vec<i64> = std::iter::once(a0).chain(tail.iter().copied()).collect();
            let f = match LinearFamily::for_vector(&a, &cfg.params, &cfg.weight, t) {
                Ok(f) => f,
                Err(e) => {
                    err = Some(e);
                    return false;
                }
            };
            match f.find_below(&cfg.curve, lo, hi, kappa, &cfg.refinement) {
                (Decision::Below, Some((at, norm))) => {
                    out = Survival::Dead { witness: a, norm, at };
                    return false;
                }
                (Decision::Unknown, _) if out.is_alive() => out = Survival::Indeterminate { witness: a },
                _ => {}
            }
        }
        true
    });
    match err {
        Some(e) => Err(e),
        None => Ok(out),
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct IntervalNode {
    pub level: u32,
    pub index: u64,
    pub lo: f64,
    pub hi: f64,
    pub survival: Survival,
    /// Present on dead nodes once the taxonomy has run.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub classification: Option<Classified>,
}

impl IntervalNode {
    pub fn is_alive(&self) -> bool {
        self.survival.is_alive()
    }

    pub fn midpoint(&self) -> f64 {
        0.5 * (self.lo + self.hi)
    }

    /// Index of the generation-`p` ancestor.
    pub fn ancestor(&self, p: u32, subdivision: u32) -> u64 {
        self.index / (subdivision as u64).pow(self.level - p)
    }
}

/// Generations `0..=Q`; generation `q` lists the tested children of the
/// surviving generation-`q−1` nodes, sorted by index.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ConstructionTree {
    #[serde(rename = "R")]
    pub subdivision: u32,
    pub generations: Vec<Vec<IntervalNode>>,
}

impl ConstructionTree {
    pub fn depth(&self) -> u32 {
        self.generations.len() as u32 - 1
    }

    pub fn survivors(&self) -> impl Iterator<Item = &IntervalNode> {
        self.generations.last().into_iter().flatten().filter(|n| n.is_alive())
    }

    pub fn dead(&self, q: u32) -> impl Iterator<Item = &IntervalNode> {
        self.generations.get(q as usize).into_iter().flatten().filter(|n| !n.is_alive())
    }

    pub fn node_count(&self) -> usize {
        self.generations.iter().map(Vec::len).sum()
    }
}

/// Grow the tree generation by generation. Nodes of one generation are
/// tested in parallel on the current rayon pool; the order is by index.
pub fn build_sequence(cfg: &ConstructionConfig) -> Result<ConstructionTree> {
    let root = IntervalNode { level: 0, index: 0, lo: 0.0, hi: 1.0, survival: survival_test(cfg, 0, (0.0, 1.0))?, classification: None };
    let mut generations = vec![vec![root]];
    let mut total = 1usize;
    let r = cfg.params.subdivision as u64;
    for q in 1..=cfg.depth {
        let parents: Vec<u64> = generations[q as usize - 1].iter().filter(|n| n.is_alive()).map(|n| n.index).collect();
        total += parents.len() * r as usize;
        if total > cfg.node_cap {
            return Err(Error::resource(format!("construction tree exceeds {} nodes at generation {q}", cfg.node_cap)));
        }
        let indices: Vec<u64> = parents.iter().flat_map(|p| (0..r).map(move |k| p * r + k)).collect();
        let nodes: Vec<IntervalNode> = indices
            .par_iter()
            .map(|&index| {
                let (lo, hi) = cfg.node_bounds(q, index);
                Ok(IntervalNode { level: q, index, lo, hi, survival: survival_test(cfg, q, (lo, hi))?, classification: None })
            })
            .collect::<Result<_>>()?;
        generations.push(nodes);
    }
    Ok(ConstructionTree { subdivision: cfg.params.subdivision, generations })
}

/// Classify every dead node in place.
pub fn classify_tree(cfg: &ConstructionConfig, tree: &mut ConstructionTree) -> Result<()> {
    for gen in tree.generations.iter_mut() {
        let classes: Vec<Option<Classified>> = gen
            .par_iter()
            .map(|n| if n.is_alive() { Ok(None) } else { classify_dead(cfg, n.level, (n.lo, n.hi)).map(Some) })
            .collect::<Result<_>>()?;
        for (n, c) in gen.iter_mut().zip(classes) {
            n.classification = c;
        }
    }
    Ok(())
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SurvivorRecord {
    pub index: u64,
    pub lo: f64,
    pub hi: f64,
    pub midpoint: f64,
    /// `φ` at the midpoint.
    pub point: Vec<f64>,
    /// Shortest-vector norm of `g_r(q)U(φ(x))Z^{n+1}` for `q = 0..=Q`.
    pub norms: Vec<f64>,
    pub recheck_pass: bool,
}

/// Independent check of every survivor midpoint: full shortest-vector
/// searches on the flowed lattices, compared with `κ(1 − RECHECK_MARGIN)`.
pub fn recheck_survivors(cfg: &ConstructionConfig, tree: &ConstructionTree) -> Result<Vec<SurvivorRecord>> {
    let eps = cfg.kappa() * (1.0 - RECHECK_MARGIN);
    let depth = tree.depth();
    let nodes: Vec<&IntervalNode> = tree.survivors().collect();
    nodes
        .par_iter()
        .map(|n| {
            let x = n.midpoint();
            let norms: Vec<f64> =
                (0..=depth).map(|q| Ok(shortest_vector(&cfg.lattice_at(q as f64, x)?)?.norm)).collect::<Result<_>>()?;
            Ok(SurvivorRecord {
                index: n.index,
                lo: n.lo,
                hi: n.hi,
                midpoint: x,
                point: cfg.curve.eval(x),
                recheck_pass: norms.iter().all(|v| *v > eps),
                norms,
            })
        })
        .collect()
}

/// Direct badness constant of `φ(x)` up to `⌊b^Q⌋`.
pub fn survivor_badness(cfg: &ConstructionConfig, record: &SurvivorRecord) -> Result<f64> {
    let horizon = cfg.params.b_pow(cfg.depth as f64).floor().max(1.0) as u64;
    Ok(badness_constant_direct(&Point::from_f64(&record.point), &cfg.weight, horizon)?.constant)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DualShadow {
    pub c: f64,
    /// Largest `N` covered; below 1 when the depth is too small to say anything.
    pub n_max: f64,
    /// `N` values tested: the integers in `[1, n_max]` and `n_max` itself.
    pub tested: Vec<f64>,
    pub holds: bool,
}

/// Dual form of survival. A solution of `|a₀ + a·x| < c/N`, `|a_i| < N^{r_i}`
/// would give `‖g_r(q)U(x)(a₀, a)‖ < κ′` at `q = ⌈log_b(N κ′^{−1/r_min})⌉`,
/// where `κ′ = κ(1 − RECHECK_MARGIN)`, so with `c = κ′^{1+1/r_min}/b` only the
/// zero solution exists for `N ≤ κ′^{1/r_min} b^Q`.
pub fn survivor_dual_shadow(cfg: &ConstructionConfig, record: &SurvivorRecord) -> Result<DualShadow> {
    let r_min = cfg.weight.as_slice().iter().cloned().fold(f64::INFINITY, f64::min);
    if !(r_min > 0.0) {
        return Err(Error::domain("dual shadow needs every weight entry positive"));
    }
    let k = cfg.kappa() * (1.0 - RECHECK_MARGIN);
    let c = k.powf(1.0 + 1.0 / r_min) / cfg.params.b_pow(1.0);
    let n_max = k.powf(1.0 / r_min) * cfg.params.b_pow(cfg.depth as f64);
    let mut tested: Vec<f64> = (1..=n_max.floor().max(0.0) as u64).map(|v| v as f64).collect();
    if n_max >= 1.0 && n_max.fract() != 0.0 {
        tested.push(n_max);
    }
    let x = Point::from_f64(&record.point);
    let mut holds = true;
    for &big_n in &tested {
        if !dual_only_zero_solution(&x, &cfg.weight, c, big_n)? {
            holds = false;
            break;
        }
    }
    Ok(DualShadow { c, n_max, tested, holds })
}
