//! Certified extrema of `s ↦ ‖g_r(t)U(φ(s))v‖` over parameter windows.
//!
//! `U(y)` is `I + N(y)` with `N(y)` supported on row 0, so on every exterior
//! power `U(y)v = v + Σ_j y_j D_j v` holds exactly. Each component of the
//! flowed multivector is therefore `scale·(c + d·φ(s))`, and a cell of
//! half-width `h` around `s₀` is enclosed by the smaller of the first-order
//! Taylor bound `|d·φ'(s₀)|h + ½·M₂·Σ|d_j|·h²` and the Lipschitz bound
//! `C₁·Σ|d_j|·h`.

use std::cmp::Ordering;
use std::collections::{BinaryHeap, VecDeque};

use serde::Serialize;

use crate::curve::Curve;
use crate::error::{Error, Result};
use crate::exterior::{act, mask_indices, MultiVector, SquareMatrix};
use crate::flows::{FlowParams, Weight};

/// Relative width of the band treated as a tie with a threshold.
pub const TIE_REL: f64 = 1e-12;
// rounding allowance on each component value
const ROUND_REL: f64 = 1e-13;

#[derive(Clone, Debug, PartialEq)]
struct Component {
    scale: f64,
    c: f64,
    d: Vec<f64>,
    d_l1: f64,
}

/// The curve `s ↦ g_r(t)U(φ(s))v` in coordinates.
#[derive(Clone, Debug, PartialEq)]
pub struct LinearFamily {
    comps: Vec<Component>,
}

/// Outcome of comparing an extremum against a threshold.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Decision {
    Above,
    Below,
    /// Within the tie band or the refinement budget ran out.
    Unknown,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Enclosure {
    pub lower: f64,
    pub upper: f64,
    pub certified: bool,
}

impl Enclosure {
    pub fn contains(&self, x: f64) -> bool {
        self.lower <= x && x <= self.upper
    }
}

/// Refinement settings shared by every query.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Refinement {
    /// Cells the window is split into before refining.
    pub initial_cells: usize,
    /// Total cell evaluations allowed per query.
    pub cell_cap: usize,
}

impl Default for Refinement {
    fn default() -> Self {
        Refinement { initial_cells: 4, cell_cap: 1 << 14 }
    }
}

struct CellEval {
    sample: f64,
    upper: f64,
    lower: f64,
}

fn scale_for(mask: u16, params: &FlowParams, w: &Weight, t: f64) -> f64 {
    let r = w.as_slice();
    let e: f64 = mask_indices(mask).into_iter().map(|k| if k == 0 { 1.0 } else { -r[k - 1] }).sum();
    params.b_pow(e * t)
}

fn unit_column_shift(d: usize, j: usize) -> SquareMatrix<i64> {
    SquareMatrix::from_fn(d, |r, c| (r == c || (r == 0 && c == j)) as i64)
}

impl LinearFamily {
    /// `g_r(t)U(φ(s))a` for an integer column vector `a`.
    pub fn for_vector(a: &[i64], params: &FlowParams, w: &Weight, t: f64) -> Result<Self> {
        let mv = MultiVector::from_vector(a)?;
        Self::for_integer_multivector(&mv, params, w, t)
    }

    pub fn for_integer_multivector(v: &MultiVector<i64>, params: &FlowParams, w: &Weight, t: f64) -> Result<Self> {
        let d = v.dim();
        check_dim(d, w)?;
        let shifts: Vec<MultiVector<i64>> =
            (1..d).map(|j| act(&unit_column_shift(d, j), v).and_then(|u| u.sub(v))).collect::<Result<_>>()?;
        let comps = v
            .terms()
            .enumerate()
            .map(|(k, (mask, c))| {
                let dv: Vec<f64> = shifts.iter().map(|s| s.components()[k] as f64).collect();
                Component::new(scale_for(mask, params, w, t), *c as f64, dv)
            })
            .collect();
        Ok(LinearFamily { comps })
    }

    pub fn for_multivector(v: &MultiVector<f64>, params: &FlowParams, w: &Weight, t: f64) -> Result<Self> {
        let d = v.dim();
        check_dim(d, w)?;
        let shifts: Vec<MultiVector<f64>> = (1..d)
            .map(|j| act(&SquareMatrix::from_fn(d, |r, c| (r == c || (r == 0 && c == j)) as u8 as f64), v).and_then(|u| u.sub(v)))
            .collect::<Result<_>>()?;
        let comps = v
            .terms()
            .enumerate()
            .map(|(k, (mask, c))| {
                let dv: Vec<f64> = shifts.iter().map(|s| s.components()[k]).collect();
                Component::new(scale_for(mask, params, w, t), *c, dv)
            })
            .collect();
        Ok(LinearFamily { comps })
    }

    pub fn value(&self, curve: &Curve, s: f64) -> f64 {
        let phi = curve.eval(s);
        self.comps.iter().map(|c| c.at(&phi).abs()).fold(0.0, f64::max)
    }

    fn cell(&self, curve: &Curve, lo: f64, hi: f64) -> CellEval {
        let mid = 0.5 * (lo + hi);
        let h = 0.5 * (hi - lo);
        let phi = curve.eval(mid);
        let dphi = curve.deriv(mid);
        let (m2, c1) = (curve.deriv2_bound(), curve.big_c1());
        let (mut sample, mut upper, mut lower) = (0.0f64, 0.0f64, 0.0f64);
        for comp in &self.comps {
            let v = comp.at(&phi).abs();
            let round = ROUND_REL * comp.scale.abs() * (comp.c.abs() + comp.d.iter().zip(&phi).map(|(d, p)| (d * p).abs()).sum::<f64>());
            let err = if comp.d_l1 == 0.0 {
                round
            } else {
                let slope = comp.d.iter().zip(&dphi).map(|(d, p)| d * p).sum::<f64>().abs();
                let taylor = slope * h + 0.5 * m2 * comp.d_l1 * h * h;
                comp.scale.abs() * taylor.min(c1 * comp.d_l1 * h) + round
            };
            sample = sample.max(v);
            upper = upper.max(v + err);
            lower = lower.max(v - err);
        }
        CellEval { sample, upper, lower: lower.max(0.0) }
    }

    fn initial(lo: f64, hi: f64, r: &Refinement) -> Vec<(f64, f64)> {
        let k = r.initial_cells.max(1);
        (0..k).map(|i| (lo + (hi - lo) * i as f64 / k as f64, lo + (hi - lo) * (i + 1) as f64 / k as f64)).collect()
    }

    /// Compare `max_{s ∈ [lo, hi]}` of the norm with `thr`.
    pub fn compare_max(&self, curve: &Curve, lo: f64, hi: f64, thr: f64, r: &Refinement) -> Decision {
        let tie = TIE_REL * thr.abs();
        let mut queue: VecDeque<(f64, f64)> = Self::initial(lo, hi, r).into();
        let mut used = 0usize;
        while let Some((a, b)) = queue.pop_front() {
            let e = self.cell(curve, a, b);
            used += 1;
            if e.sample > thr + tie {
                return Decision::Above;
            }
            if e.upper < thr - tie {
                continue;
            }
            if used >= r.cell_cap {
                return Decision::Unknown;
            }
            let m = 0.5 * (a + b);
            queue.push_back((a, m));
            queue.push_back((m, b));
        }
        Decision::Below
    }

    /// Compare `min_{s ∈ [lo, hi]}` of the norm with `thr`. `Below` means some
    /// sampled parameter has norm at most `thr` (up to the tie band).
    pub fn compare_min(&self, curve: &Curve, lo: f64, hi: f64, thr: f64, r: &Refinement) -> Decision {
        self.find_below(curve, lo, hi, thr, r).0
    }

    /// Like [`compare_min`](Self::compare_min), also returning the sampled
    /// parameter and norm that settled a `Below` verdict.
    pub fn find_below(&self, curve: &Curve, lo: f64, hi: f64, thr: f64, r: &Refinement) -> (Decision, Option<(f64, f64)>) {
        let tie = TIE_REL * thr.abs();
        let mut queue: VecDeque<(f64, f64)> = Self::initial(lo, hi, r).into();
        let mut used = 0usize;
        while let Some((a, b)) = queue.pop_front() {
            let e = self.cell(curve, a, b);
            used += 1;
            if e.sample <= thr + tie {
                return (Decision::Below, Some((0.5 * (a + b), e.sample)));
            }
            if e.lower > thr + tie {
                continue;
            }
            if used >= r.cell_cap {
                return (Decision::Unknown, None);
            }
            let m = 0.5 * (a + b);
            queue.push_back((a, m));
            queue.push_back((m, b));
        }
        (Decision::Above, None)
    }

    /// Best-first enclosure of the maximum, refined until its width is below `tol`.
    pub fn max_enclosure(&self, curve: &Curve, lo: f64, hi: f64, tol: f64, r: &Refinement) -> Enclosure {
        let mut heap = BinaryHeap::new();
        let mut lower = 0.0f64;
        let mut used = 0usize;
        for (a, b) in Self::initial(lo, hi, r) {
            let e = self.cell(curve, a, b);
            used += 1;
            lower = lower.max(e.sample);
            heap.push(HeapCell { upper: e.upper, lo: a, hi: b });
        }
        while let Some(top) = heap.peek() {
            if top.upper - lower < tol {
                return Enclosure { lower, upper: top.upper.max(lower), certified: true };
            }
            if used >= r.cell_cap {
                return Enclosure { lower, upper: top.upper.max(lower), certified: false };
            }
            let c = heap.pop().expect("peeked");
            let m = 0.5 * (c.lo + c.hi);
            for (a, b) in [(c.lo, m), (m, c.hi)] {
                let e = self.cell(curve, a, b);
                used += 1;
                lower = lower.max(e.sample);
                heap.push(HeapCell { upper: e.upper, lo: a, hi: b });
            }
        }
        Enclosure { lower, upper: lower, certified: true }
    }

    /// Range of `Σ_j a_j φ_j` over `[lo, hi]` for the row-0 component, used to
    /// localize the constant coordinate.
    pub(crate) fn row0_range(d: &[f64], curve: &Curve, lo: f64, hi: f64) -> (f64, f64) {
        let mid = 0.5 * (lo + hi);
        let h = 0.5 * (hi - lo);
        let phi = curve.eval(mid);
        let v: f64 = d.iter().zip(&phi).map(|(a, p)| a * p).sum();
        let l1: f64 = d.iter().map(|x| x.abs()).sum();
        let w = curve.big_c1() * l1 * h + ROUND_REL * (v.abs() + l1 * phi.iter().fold(0.0f64, |m, p| m.max(p.abs())));
        (v - w, v + w)
    }
}

impl Component {
    fn new(scale: f64, c: f64, d: Vec<f64>) -> Self {
        let d_l1 = d.iter().map(|x| x.abs()).sum();
        Component { scale, c, d, d_l1 }
    }

    fn at(&self, phi: &[f64]) -> f64 {
        self.scale * (self.c + self.d.iter().zip(phi).map(|(d, p)| d * p).sum::<f64>())
    }
}

fn check_dim(d: usize, w: &Weight) -> Result<()> {
    if d != w.n() + 1 {
        return Err(Error::domain(format!("multivector dimension {d} does not match weight of length {}", w.n())));
    }
    Ok(())
}

struct HeapCell {
    upper: f64,
    lo: f64,
    hi: f64,
}

impl PartialEq for HeapCell {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for HeapCell {}

impl PartialOrd for HeapCell {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for HeapCell {
    fn cmp(&self, other: &Self) -> Ordering {
        self.upper.total_cmp(&other.upper).then_with(|| other.lo.total_cmp(&self.lo)).then_with(|| other.hi.total_cmp(&self.hi))
    }
}
