//! Accounting buckets for dead intervals, the removal score `d_q`, and the
//! dangerous-window detector.
//!
//! `Small(i, l)` at a centre `x` means some primitive rank-`i` sublattice
//! `Δ ⊂ Z^{n+1}` keeps `‖g_r(q)U(φ(s'))Δ‖ ≤ ρ^i` on the whole window
//! `[x − R^{−q+l}, x + R^{−q+l}] ∩ [0, 1]`. Any such `Δ` already has covolume
//! at most `ρ^i` at `x`, so candidates come from an exhaustive sublattice
//! enumeration at the centre. Larger `l` means a wider window, so `Small` is
//! antitone in `l` and the first-match order below yields a partition.

use std::collections::{BTreeMap, BTreeSet};

use rayon::prelude::*;
use serde::Serialize;

use super::enclosure::{Decision, LinearFamily};
use super::{box_bounds, constant_range, half_box, ConstructionConfig, ConstructionTree};
use crate::error::{Error, Result};
use crate::lattice::enumerate_primitive_sublattices;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Bucket {
    Generic { p: u32 },
    Dangerous { i: usize, l: u32, p: u32 },
    ExtremelyDangerous { i: usize, p: u32 },
    Unclassified,
}

impl Bucket {
    pub fn p(&self) -> Option<u32> {
        match self {
            Bucket::Generic { p } | Bucket::Dangerous { p, .. } | Bucket::ExtremelyDangerous { p, .. } => Some(*p),
            Bucket::Unclassified => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Classified {
    pub bucket: Bucket,
    /// Plücker coordinates of the small sublattice behind a non-generic bucket.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Vec<i64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub window: Option<(f64, f64)>,
}

struct Candidate {
    grade: usize,
    plucker: Vec<i64>,
    family: LinearFamily,
}

enum Small {
    Yes(usize),
    No,
    Unknown,
}

struct NodeContext<'a> {
    cfg: &'a ConstructionConfig,
    q: u32,
    x: f64,
    candidates: Vec<Candidate>,
}

impl NodeContext<'_> {
    fn window(&self, l: f64) -> (f64, f64) {
        let h = self.cfg.params.r_pow(l - self.q as f64);
        ((self.x - h).max(0.0), (self.x + h).min(1.0))
    }

    /// `Small` restricted to grade `grade` (or all grades for `None`).
    fn small(&self, grade: Option<usize>, l: f64) -> Small {
        let (lo, hi) = self.window(l);
        let mut unknown = false;
        for (k, c) in self.candidates.iter().enumerate() {
            if grade.is_some_and(|g| g != c.grade) {
                continue;
            }
            let thr = self.cfg.rho.powi(c.grade as i32);
            match c.family.compare_max(&self.cfg.curve, lo, hi, thr, &self.cfg.refinement) {
                Decision::Below => return Small::Yes(k),
                Decision::Unknown => unknown = true,
                Decision::Above => {}
            }
        }
        if unknown {
            Small::Unknown
        } else {
            Small::No
        }
    }

    fn classified(&self, bucket: Bucket, k: usize, l: f64) -> Classified {
        Classified { bucket, witness: Some(self.candidates[k].plucker.clone()), window: Some(self.window(l)) }
    }
}

fn unclassified() -> Classified {
    Classified { bucket: Bucket::Unclassified, witness: None, window: None }
}

/// Bucket of the dead generation-`q` node `[lo, hi]`, tested at its midpoint.
/// Order: generic at `l_gen`; dangerous by increasing `l` then `i`; extremely
/// dangerous at `l = 2η′q`; an undecidable test stops with `Unclassified`.
pub fn classify_dead(cfg: &ConstructionConfig, q: u32, interval: (f64, f64)) -> Result<Classified> {
    let x = 0.5 * (interval.0 + interval.1);
    let lattice = cfg.lattice_at(q as f64, x)?;
    let mut candidates = vec![];
    for grade in 1..=cfg.n() {
        let found = match enumerate_primitive_sublattices(&lattice, grade, cfg.rho.powi(grade as i32)) {
            Ok(f) => f,
            Err(e) if e.is_resource() => return Ok(unclassified()),
            Err(e) => return Err(e),
        };
        for s in found {
            let mv = s.plucker()?;
            candidates.push(Candidate {
                grade,
                plucker: mv.components().to_vec(),
                family: LinearFamily::for_integer_multivector(&mv, &cfg.params, &cfg.weight, q as f64)?,
            });
        }
    }
    let ctx = NodeContext { cfg, q, x, candidates };

    match ctx.small(None, cfg.l_gen as f64) {
        Small::No => {
            let p = q.saturating_sub(2 * cfg.l_gen);
            return Ok(Classified { bucket: Bucket::Generic { p }, witness: None, window: Some(ctx.window(cfg.l_gen as f64)) });
        }
        Small::Unknown => return Ok(unclassified()),
        Small::Yes(_) => {}
    }
    let l_top = cfg.l_max_at(q).min(q / 2);
    for l in cfg.l_min..=l_top {
        let wider = ctx.small(None, (l + 1) as f64);
        for i in 1..=cfg.n() {
            match (ctx.small(Some(i), l as f64), &wider) {
                (Small::Yes(k), Small::No) => {
                    return Ok(ctx.classified(Bucket::Dangerous { i, l, p: q - 2 * l }, k, l as f64));
                }
                (Small::Unknown, _) | (Small::Yes(_), Small::Unknown) => return Ok(unclassified()),
                _ => {}
            }
        }
    }
    let l_ext = 2.0 * cfg.eta_prime * q as f64;
    for i in 1..=cfg.n() {
        match ctx.small(Some(i), l_ext) {
            Small::Yes(k) => return Ok(ctx.classified(Bucket::ExtremelyDangerous { i, p: 0 }, k, l_ext)),
            Small::Unknown => return Ok(unclassified()),
            Small::No => {}
        }
    }
    Ok(unclassified())
}

/// Where unclassified nodes are charged: the heaviest bucket `p = q − 1`.
fn charged_p(bucket: &Bucket, q: u32) -> u32 {
    bucket.p().unwrap_or(q.saturating_sub(1))
}

fn bucket_of(node: &super::IntervalNode) -> Result<&Bucket> {
    node.classification
        .as_ref()
        .map(|c| &c.bucket)
        .ok_or_else(|| Error::domain(format!("dead node {} of generation {} is unclassified; run classify_tree first", node.index, node.level)))
}

/// `F(Î_{q,p}, I_p)`: dead generation-`q` nodes charged to bucket `p` inside
/// the generation-`p` interval with index `parent`.
pub fn f_count(tree: &ConstructionTree, q: u32, p: u32, parent: u64) -> Result<usize> {
    if p >= q.max(1) {
        return Err(Error::domain(format!("bucket p = {p} outside 0..{q}")));
    }
    let r = subdivision_of(tree)?;
    let mut count = 0;
    for n in tree.dead(q) {
        if charged_p(bucket_of(n)?, q) == p && n.ancestor(p, r) == parent {
            count += 1;
        }
    }
    Ok(count)
}

fn subdivision_of(tree: &ConstructionTree) -> Result<u32> {
    Ok(tree.subdivision)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BucketCount {
    pub p: u32,
    pub nodes: usize,
    /// `max_{I_p} F(Î_{q,p}, I_p)`.
    pub max_f: usize,
    /// Index of the first generation-`p` interval attaining `max_f`.
    pub argmax: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GenerationRichness {
    pub q: u32,
    pub tested: usize,
    pub dead: usize,
    pub indeterminate: usize,
    pub generic: usize,
    pub dangerous: usize,
    pub extremely_dangerous: usize,
    pub unclassified: usize,
    pub buckets: Vec<BucketCount>,
    /// Score of the canonical partition.
    pub d_q_upper: f64,
    /// Minimum over all partitions, when the generation is small enough.
    pub d_q_min: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RichnessReport {
    pub generations: Vec<GenerationRichness>,
    /// `max_q d_q_upper`.
    pub d_upper: f64,
    pub survivors: Vec<(f64, f64)>,
}

/// Most dead nodes for which the minimum over partitions is searched.
pub const EXACT_MIN_NODES: usize = 20;

fn weight(subdivision: u32, q: u32, p: u32) -> f64 {
    (4.0 / subdivision as f64).powi((q - p) as i32)
}

/// `Σ_p (4/R)^{q−p} max_{I_p} F` for the canonical partition.
pub fn d_q_upper(tree: &ConstructionTree, q: u32) -> Result<f64> {
    let r = subdivision_of(tree)?;
    Ok(generation_buckets(tree, q)?.iter().map(|b| weight(r, q, b.p) * b.max_f as f64).fold(0.0, |a, x| a + x))
}

fn generation_buckets(tree: &ConstructionTree, q: u32) -> Result<Vec<BucketCount>> {
    let r = subdivision_of(tree)?;
    let mut groups: BTreeMap<u32, BTreeMap<u64, usize>> = BTreeMap::new();
    for n in tree.dead(q) {
        let p = charged_p(bucket_of(n)?, q);
        *groups.entry(p).or_default().entry(n.ancestor(p, r)).or_default() += 1;
    }
    Ok(groups
        .into_iter()
        .map(|(p, by_parent)| {
            let (argmax, max_f) = by_parent.iter().fold((0u64, 0usize), |best, (k, c)| if *c > best.1 { (*k, *c) } else { best });
            BucketCount { p, nodes: by_parent.values().sum(), max_f, argmax }
        })
        .collect())
}

/// Exact `min` over every partition of the dead generation-`q` nodes into
/// buckets `0..q`, by depth-first search with pruning. `None` above
/// [`EXACT_MIN_NODES`] dead nodes.
pub fn d_q_exact_min(tree: &ConstructionTree, q: u32) -> Result<Option<f64>> {
    let dead: Vec<_> = tree.dead(q).collect();
    if dead.is_empty() {
        return Ok(Some(0.0));
    }
    if dead.len() > EXACT_MIN_NODES || q == 0 {
        return Ok(None);
    }
    let r = subdivision_of(tree)?;
    let ancestors: Vec<Vec<u64>> = dead.iter().map(|n| (0..q).map(|p| n.ancestor(p, r)).collect()).collect();
    let weights: Vec<f64> = (0..q).map(|p| weight(r, q, p)).collect();
    let mut counts: Vec<BTreeMap<u64, usize>> = vec![BTreeMap::new(); q as usize];
    let mut maxes = vec![0usize; q as usize];
    let mut best = d_q_upper(tree, q)?;
    fn dfs(k: usize, anc: &[Vec<u64>], w: &[f64], counts: &mut [BTreeMap<u64, usize>], maxes: &mut [usize], best: &mut f64) {
        let cost: f64 = maxes.iter().zip(w).map(|(m, w)| *m as f64 * w).sum();
        if cost >= *best - 1e-15 {
            return;
        }
        if k == anc.len() {
            *best = cost;
            return;
        }
        for p in 0..w.len() {
            let c = counts[p].entry(anc[k][p]).or_default();
            *c += 1;
            let (new, old) = (*c, maxes[p]);
            maxes[p] = old.max(new);
            dfs(k + 1, anc, w, counts, maxes, best);
            maxes[p] = old;
            *counts[p].get_mut(&anc[k][p]).expect("inserted") -= 1;
        }
    }
    dfs(0, &ancestors, &weights, &mut counts, &mut maxes, &mut best);
    Ok(Some(best))
}

pub fn richness_report(tree: &ConstructionTree) -> Result<RichnessReport> {
    let mut generations = vec![];
    for q in 1..=tree.depth() {
        let gen = &tree.generations[q as usize];
        let mut g = GenerationRichness {
            q,
            tested: gen.len(),
            dead: 0,
            indeterminate: 0,
            generic: 0,
            dangerous: 0,
            extremely_dangerous: 0,
            unclassified: 0,
            buckets: generation_buckets(tree, q)?,
            d_q_upper: d_q_upper(tree, q)?,
            d_q_min: d_q_exact_min(tree, q)?,
        };
        for n in tree.dead(q) {
            g.dead += 1;
            if matches!(n.survival, super::Survival::Indeterminate { .. }) {
                g.indeterminate += 1;
            }
            match bucket_of(n)? {
                Bucket::Generic { .. } => g.generic += 1,
                Bucket::Dangerous { .. } => g.dangerous += 1,
                Bucket::ExtremelyDangerous { .. } => g.extremely_dangerous += 1,
                Bucket::Unclassified => g.unclassified += 1,
            }
        }
        generations.push(g);
    }
    Ok(RichnessReport {
        d_upper: generations.iter().map(|g| g.d_q_upper).fold(0.0, f64::max),
        generations,
        survivors: tree.survivors().map(|n| (n.lo, n.hi)).collect(),
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum WindowKind {
    /// Radius `R^{−q+l}`, peak taken over the window itself.
    Dangerous { l: u32 },
    /// Radius `R^{−q+l′}`, peak taken over the doubled window.
    ExtremelyDangerous { l_prime: f64 },
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DangerousRecord {
    pub kind: WindowKind,
    pub q: u32,
    pub witness: Vec<i64>,
    pub interval: (f64, f64),
    /// Enclosure of the peak norm; both ends lie in `[ρ/2, ρ]`.
    pub peak: (f64, f64),
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DangerousScan {
    pub records: Vec<DangerousRecord>,
    /// `(a, centre)` pairs whose peak could not be placed relative to `ρ/2` or `ρ`.
    pub undecided: usize,
}

/// Cap on `(a, centre)` pairs examined by one scan.
pub const DANGEROUS_PAIR_CAP: u64 = 200_000_000;

/// Windows centred at generation-`q` midpoints inside `region`, contained in
/// `[0, 1]`, covering at least one node of `dead` (any node when `None`), on which the
/// peak of `‖g_r(q)U(φ(s'))a‖` is certified to lie in `[ρ/2, ρ]`. One of `±a`
/// is kept (first nonzero of `a₁, …, a_n` positive). For each `a` the windows are taken greedily
/// from the left and pairwise disjoint.
pub fn detect_dangerous(
    cfg: &ConstructionConfig,
    dead: Option<&BTreeSet<u64>>,
    q: u32,
    kind: WindowKind,
    region: (f64, f64),
) -> Result<DangerousScan> {
    let (radius, peak_factor) = match kind {
        WindowKind::Dangerous { l } => {
            if l == 0 || l > q {
                return Err(Error::domain(format!("l = {l} outside 1..={q}")));
            }
            (cfg.params.r_pow(l as f64 - q as f64), 1.0)
        }
        WindowKind::ExtremelyDangerous { l_prime } => {
            if !(l_prime > cfg.eta_prime * q as f64) || l_prime > q as f64 {
                return Err(Error::domain("l' must exceed eta'*q and not exceed q"));
            }
            (cfg.params.r_pow(l_prime - q as f64), 2.0)
        }
    };
    let t = q as f64;
    let len = cfg.cell_length(q);
    let cells = cfg.params.r_pow(t).round() as u64;
    let edge = 1e-12;
    // centres whose window fits in [0, 1] and covers a dead node
    let centres: Vec<(u64, f64, f64)> = (0..cells)
        .filter_map(|k| {
            let x = (k as f64 + 0.5) * len;
            let (lo, hi) = (x - radius, x + radius);
            let fits = lo >= -edge && hi <= 1.0 + edge && x >= region.0 && x <= region.1;
            let covers = dead.is_none_or(|dead| {
                dead.range((((lo / len) - edge).ceil().max(0.0) as u64)..).next().is_some_and(|&j| (j + 1) as f64 * len <= hi + edge)
            });
            (fits && covers).then_some((k, lo.max(0.0), hi.min(1.0)))
        })
        .collect();
    let rho = cfg.rho;
    let thr0 = rho * cfg.params.b_pow(-t);
    let mut tails = vec![];
    half_box(&box_bounds(cfg, rho, t), |a| {
        tails.push(a.to_vec());
        true
    });
    if thr0 >= 1.0 {
        tails.push(vec![0; cfg.n()]);
    }
    if tails.len() as u64 * centres.len() as u64 > DANGEROUS_PAIR_CAP {
        return Err(Error::resource("dangerous-window scan exceeds its pair budget"));
    }
    let per_tail: Vec<(Vec<DangerousRecord>, usize)> = tails
        .par_iter()
        .map(|tail| {
            let mut found: BTreeMap<Vec<i64>, Vec<DangerousRecord>> = BTreeMap::new();
            let mut undecided = 0usize;
            for &(_, lo, hi) in &centres {
                let x = 0.5 * (lo + hi);
                let (plo, phi) = ((x - peak_factor * radius).max(0.0), (x + peak_factor * radius).min(1.0));
                for a0 in constant_range(cfg, tail, plo, phi, thr0) {
                    let a: Vec<i64> = std::iter::once(a0).chain(tail.iter().copied()).collect();
                    if tail.iter().all(|&v| v == 0) && a0 <= 0 {
                        continue;
                    }
                    if found.get(&a).and_then(|v| v.last()).is_some_and(|r| r.interval.1 >= lo) {
                        continue;
                    }
                    let f = LinearFamily::for_vector(&a, &cfg.params, &cfg.weight, t)?;
                    let lower = f.compare_max(&cfg.curve, plo, phi, rho / 2.0, &cfg.refinement);
                    let upper = f.compare_max(&cfg.curve, plo, phi, rho, &cfg.refinement);
                    match (lower, upper) {
                        (Decision::Above, Decision::Below) => {
                            let e = f.max_enclosure(&cfg.curve, plo, phi, cfg.tol_frac * cfg.kappa(), &cfg.refinement);
                            let peak = (e.lower.max(rho / 2.0), e.upper.min(rho));
                            found.entry(a.clone()).or_default().push(DangerousRecord { kind, q, witness: a, interval: (lo, hi), peak });
                        }
                        (Decision::Below, _) | (_, Decision::Above) => {}
                        _ => undecided += 1,
                    }
                }
            }
            Ok((found.into_values().flatten().collect(), undecided))
        })
        .collect::<Result<_>>()?;
    let mut records: Vec<DangerousRecord> = per_tail.iter().flat_map(|(r, _)| r.iter().cloned()).collect();
    records.sort_by(|a, b| a.witness.cmp(&b.witness).then(a.interval.0.total_cmp(&b.interval.0)));
    Ok(DangerousScan { records, undecided: per_tail.iter().map(|(_, u)| u).sum() })
}

/// Dead generation-`q` node indices of a tree.
pub fn dead_indices(tree: &ConstructionTree, q: u32) -> BTreeSet<u64> {
    tree.dead(q).map(|n| n.index).collect()
}
