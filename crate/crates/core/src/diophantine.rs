//! Direct and dual badness tests, Dirichlet witnesses, and lattice orbits
//! `a_r(t)V(x)Z^{n+1}` / `d_r(t)U(x)Z^{n+1}` with certified floors.
//!
//! Points are held in double-double precision: orbit samples at `t = 30`
//! involve `q ≈ e^{30}`, where `q·x` in plain `f64` has no correct fractional
//! digits left.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use twofloat::TwoFloat;

use crate::error::{Error, Result};
use crate::flows::Weight;
use crate::lattice::{self, reduce};

/// Default cap on the number of boxes points scanned by the dual test.
pub const DUAL_BOX_CAP: u64 = 200_000_000;
/// Verdicts within this factor of the predicted bound are inconclusive.
pub const SLACK_BAND: f64 = 4.0;
const ACCEPT_TOL: f64 = 1e-12;

/// A point of `R^n` in double-double precision, remembering its spelling.
#[derive(Clone, Debug, PartialEq)]
pub struct Point {
    coords: Vec<TwoFloat>,
    spec: Vec<String>,
}

/// `x / y` to double-double accuracy. The crate's own `TwoFloat / TwoFloat`
/// and `recip` only reach `f64` accuracy, while division by an `f64` is
/// accurate, so two correction steps recover the missing half.
pub fn dd_div(x: TwoFloat, y: TwoFloat) -> TwoFloat {
    let mut q = TwoFloat::from(x.hi() / y.hi());
    for _ in 0..2 {
        q += (x - y * q) / y.hi();
    }
    q
}

fn parse_decimal(s: &str) -> Option<TwoFloat> {
    let (neg, body) = match s.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, s.strip_prefix('+').unwrap_or(s)),
    };
    let (mant, exp10) = match body.find(['e', 'E']) {
        Some(i) => (&body[..i], body[i + 1..].parse::<i32>().ok()?),
        None => (body, 0),
    };
    let (int, frac) = mant.split_once('.').unwrap_or((mant, ""));
    if int.is_empty() && frac.is_empty() {
        return None;
    }
    let digits = format!("{int}{frac}");
    if !digits.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    let digits = digits.trim_start_matches('0');
    // keep 36 significant digits, which is beyond double-double precision
    let keep = digits.len().min(36);
    let m: i128 = if keep == 0 { 0 } else { digits[..keep].parse().ok()? };
    let shift = exp10 - frac.len() as i32 + (digits.len() - keep) as i32;
    let mut v = TwoFloat::from(m);
    let ten = TwoFloat::from(10.0);
    if shift >= 0 {
        v *= ten.powi(shift);
    } else {
        let s = -shift;
        let den = if s <= 30 { TwoFloat::from(10i128.pow(s as u32)) } else { ten.powi(s) };
        v = dd_div(v, den);
    }
    Some(if neg { -v } else { v })
}

/// `Σ_{k=1}^{K} 10^{−k!}`.
pub fn liouville(k: u32) -> TwoFloat {
    let mut sum = TwoFloat::from(0.0);
    let mut fact = 1i64;
    for j in 1..=k as i64 {
        fact *= j;
        if fact > 400 {
            break;
        }
        sum += dd_div(TwoFloat::from(1.0), TwoFloat::from(10.0).powi(fact as i32));
    }
    sum
}

pub fn golden() -> TwoFloat {
    (TwoFloat::from(5.0).sqrt() - 1.0) / 2.0
}

/// Parse one coordinate: a decimal, `a/b`, `golden`, `sqrt:N` (fractional
/// part of `√N`) or `liouville:K`.
pub fn parse_coordinate(s: &str) -> Result<TwoFloat> {
    let s = s.trim();
    let bad = || Error::domain(format!("cannot parse coordinate '{s}'"));
    if s == "golden" {
        return Ok(golden());
    }
    if let Some(k) = s.strip_prefix("liouville:") {
        return Ok(liouville(k.parse().map_err(|_| bad())?));
    }
    if let Some(n) = s.strip_prefix("sqrt:") {
        let n: u32 = n.parse().map_err(|_| bad())?;
        let r = TwoFloat::from(n as f64).sqrt();
        return Ok(r - r.floor());
    }
    if let Some((a, b)) = s.split_once('/') {
        let a: i64 = a.trim().parse().map_err(|_| bad())?;
        let b: i64 = b.trim().parse().map_err(|_| bad())?;
        if b == 0 {
            return Err(bad());
        }
        return Ok(dd_div(TwoFloat::from(a), TwoFloat::from(b)));
    }
    parse_decimal(s).ok_or_else(bad)
}

impl Point {
    pub fn parse(coords: &[impl AsRef<str>]) -> Result<Self> {
        if coords.is_empty() {
            return Err(Error::domain("point needs at least one coordinate"));
        }
        let parsed = coords.iter().map(|c| parse_coordinate(c.as_ref())).collect::<Result<Vec<_>>>()?;
        Ok(Point { coords: parsed, spec: coords.iter().map(|c| c.as_ref().trim().to_string()).collect() })
    }

    pub fn from_f64(x: &[f64]) -> Self {
        Point { coords: x.iter().map(|&v| TwoFloat::from(v)).collect(), spec: x.iter().map(|v| format!("{v:?}")).collect() }
    }

    pub fn n(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[TwoFloat] {
        &self.coords
    }

    pub fn to_f64(&self) -> Vec<f64> {
        self.coords.iter().map(|c| c.hi() + c.lo()).collect()
    }

    pub fn spec(&self) -> &[String] {
        &self.spec
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})", self.spec.join(", "))
    }
}

impl FromStr for Point {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Point::parse(&s.split(',').collect::<Vec<_>>())
    }
}

fn check_dims(x: &Point, w: &Weight) -> Result<()> {
    if x.n() != w.n() {
        return Err(Error::domain(format!("point has {} coordinates but weight has {}", x.n(), w.n())));
    }
    Ok(())
}

/// Residues below this multiple of `|q|` are rounding noise of the
/// double-double representation and count as exact hits.
const EXACT_HIT: f64 = 1e-29;

/// `q·x_i + p_i` with `p_i` the nearest integer to `−q·x_i`.
fn residue(q: i64, xi: TwoFloat) -> (i64, f64) {
    let y = TwoFloat::from(q) * xi;
    let p = -y.round();
    let r = y + p;
    let r = r.hi() + r.lo();
    let r = if r.abs() <= EXACT_HIT * (q as f64).abs() { 0.0 } else { r };
    (i64::try_from(p).unwrap_or(i64::MAX), r)
}

/// `|y − round(y)|`.
pub fn dist_to_z(y: TwoFloat) -> f64 {
    let r = y - y.round();
    (r.hi() + r.lo()).abs()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Witness {
    pub p: Vec<i64>,
    pub q: i64,
}

/// Among `1 ≤ q ≤ ⌊N⌋` satisfying `|q x_i + p_i| ≤ N^{−r_i}`, the one that
/// minimizes `max_i |q x_i + p_i|·N^{r_i}` (smallest `q` on ties).
pub fn dirichlet_witness(x: &Point, w: &Weight, big_n: f64) -> Result<Witness> {
    check_dims(x, w)?;
    if !(big_n > 1.0) {
        return Err(Error::domain("Dirichlet bound N must exceed 1"));
    }
    let scale: Vec<f64> = w.as_slice().iter().map(|r| big_n.powf(*r)).collect();
    let mut best: Option<(f64, Witness)> = None;
    for q in 1..=big_n.floor() as i64 {
        let mut p = Vec::with_capacity(x.n());
        let mut score = 0.0f64;
        for (xi, s) in x.coords().iter().zip(&scale) {
            let (pi, r) = residue(q, *xi);
            p.push(pi);
            score = score.max(r.abs() * s);
        }
        if score <= 1.0 + ACCEPT_TOL && best.as_ref().is_none_or(|(b, _)| score < *b) {
            best = Some((score, Witness { p, q }));
        }
    }
    best.map(|(_, wt)| wt).ok_or_else(|| Error::domain("no Dirichlet witness found (numerical failure)"))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BadnessReport {
    pub constant: f64,
    /// `(p_1, …, p_n, q)`.
    pub witness: Vec<i64>,
    pub horizon: u64,
}

/// `min_{1 ≤ q ≤ Q} max_i q^{r_i}·dist(q x_i, Z)`.
pub fn badness_constant_direct(x: &Point, w: &Weight, horizon: u64) -> Result<BadnessReport> {
    check_dims(x, w)?;
    if horizon == 0 {
        return Err(Error::domain("horizon must be at least 1"));
    }
    if horizon > i64::MAX as u64 / 4 {
        return Err(Error::resource("horizon too large"));
    }
    let r = w.as_slice();
    let mut best = f64::INFINITY;
    let mut witness = vec![];
    for q in 1..=horizon as i64 {
        let qf = q as f64;
        let mut v = 0.0f64;
        for (xi, ri) in x.coords().iter().zip(r) {
            v = v.max(qf.powf(*ri) * residue(q, *xi).1.abs());
            if v >= best {
                break;
            }
        }
        if v < best {
            best = v;
            witness = x.coords().iter().map(|xi| residue(q, *xi).0).chain([q]).collect();
            if best == 0.0 {
                break;
            }
        }
    }
    Ok(BadnessReport { constant: best, witness, horizon })
}

/// True iff no integer `(a_0, a) ≠ 0` has `|a_0 + a·x| < c/N` and `|a_i| < N^{r_i}`.
pub fn dual_only_zero_solution(x: &Point, w: &Weight, c: f64, big_n: f64) -> Result<bool> {
    dual_only_zero_solution_capped(x, w, c, big_n, DUAL_BOX_CAP)
}

pub fn dual_only_zero_solution_capped(x: &Point, w: &Weight, c: f64, big_n: f64, cap: u64) -> Result<bool> {
    check_dims(x, w)?;
    if !(c > 0.0) || !(big_n >= 1.0) {
        return Err(Error::domain("dual test needs c > 0 and N >= 1"));
    }
    let target = c / big_n;
    if target > 1.0 {
        // a = (1, 0, …, 0)
        return Ok(false);
    }
    // largest |a_i| strictly below N^{r_i}
    let bounds: Vec<i64> = w
        .as_slice()
        .iter()
        .map(|r| {
            let b = big_n.powf(*r);
            let f = b.floor();
            (if f == b { f - 1.0 } else { f }) as i64
        })
        .collect();
    let size = bounds.iter().try_fold(1u64, |acc, b| acc.checked_mul(2 * *b as u64 + 1));
    match size {
        Some(s) if s <= cap => {}
        _ => return Err(Error::resource(format!("dual box exceeds {cap} points"))),
    }
    let n = x.n();
    let mut a: Vec<i64> = bounds.iter().map(|b| -b).collect();
    loop {
        // a and −a give the same residue; scan only the lexicographically positive half
        if let Some(first) = a.iter().find(|v| **v != 0) {
            if *first > 0 {
                let mut y = TwoFloat::from(0.0);
                for (ai, xi) in a.iter().zip(x.coords()) {
                    y += TwoFloat::from(*ai) * *xi;
                }
                if dist_to_z(y) < target {
                    return Ok(false);
                }
            }
        }
        let mut i = 0;
        loop {
            if i == n {
                return Ok(true);
            }
            if a[i] < bounds[i] {
                a[i] += 1;
                break;
            }
            a[i] = -bounds[i];
            i += 1;
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Convention {
    /// `a_r(t)V(x)Z^{n+1}`
    #[serde(rename = "aV")]
    AV,
    /// `d_r(t)U(x)Z^{n+1}`
    #[serde(rename = "dU")]
    DU,
}

impl FromStr for Convention {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "aV" | "a_V" | "av" => Ok(Convention::AV),
            "dU" | "d_U" | "du" => Ok(Convention::DU),
            _ => Err(Error::domain(format!("unknown convention '{s}' (expected aV or dU)"))),
        }
    }
}

impl fmt::Display for Convention {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Convention::AV => "aV",
            Convention::DU => "dU",
        })
    }
}

/// The flowed lattice evaluated in double-double before rounding to `f64`.
struct OrbitLattice<'a> {
    x: &'a Point,
    r: &'a [f64],
    convention: Convention,
}

impl OrbitLattice<'_> {
    /// Image of the integer vector `m` (standard coordinates of `Z^{n+1}`).
    fn eval(&self, t: f64, m: &[i128]) -> Vec<f64> {
        let n = self.r.len();
        match self.convention {
            Convention::AV => {
                let q = m[n];
                let mut v: Vec<f64> = (0..n)
                    .map(|i| {
                        let y = TwoFloat::from(q) * self.x.coords()[i] + TwoFloat::from(m[i]);
                        (self.r[i] * t).exp() * (y.hi() + y.lo())
                    })
                    .collect();
                v.push((-t).exp() * q as f64);
                v
            }
            Convention::DU => {
                let mut y = TwoFloat::from(m[0]);
                for j in 0..n {
                    y += TwoFloat::from(m[j + 1]) * self.x.coords()[j];
                }
                let mut v = vec![t.exp() * (y.hi() + y.lo())];
                v.extend((0..n).map(|i| (-self.r[i] * t).exp() * m[i + 1] as f64));
                v
            }
        }
    }
}

/// Columns of `M·U`, where column `j` of `U` is `u[j]`.
fn basis_change(m: &[Vec<i128>], u: &[Vec<i64>]) -> Result<Vec<Vec<i128>>> {
    let d = m[0].len();
    u.iter()
        .map(|uj| {
            (0..d)
                .map(|row| {
                    uj.iter()
                        .zip(m)
                        .try_fold(0i128, |acc, (c, col)| (*c as i128).checked_mul(col[row]).and_then(|p| acc.checked_add(p)))
                })
                .collect::<Option<Vec<i128>>>()
                .ok_or_else(|| Error::Overflow("orbit basis change".into()))
        })
        .collect()
}

/// Rounds of re-evaluation and reduction per sample. Far out along the orbit
/// the longest basis vectors involve `q` beyond double-double resolution and
/// their size reduction can oscillate; the shortest vector does not depend
/// on them, so the search proceeds with the basis reached at this point.
const SETTLE_ROUNDS: usize = 8;

/// Shortest vector of the flowed lattice at time `t`, warm-starting from the
/// integer basis `m` (columns), which is updated in place.
fn orbit_shortest(lat: &OrbitLattice<'_>, t: f64, m: &mut Vec<Vec<i128>>) -> Result<(f64, Vec<i64>)> {
    let mut cols: Vec<Vec<f64>> = m.iter().map(|c| lat.eval(t, c)).collect();
    for _ in 0..SETTLE_ROUNDS {
        let (_, u) = reduce::lll(&cols)?;
        let identity = u.iter().enumerate().all(|(i, row)| row.iter().enumerate().all(|(j, v)| *v == (i == j) as i64));
        if identity {
            break;
        }
        *m = basis_change(m, &u)?;
        cols = m.iter().map(|c| lat.eval(t, c)).collect();
    }
    let sv = lattice::shortest_vector_of_generators(&cols)?;
    let witness = basis_change(m, &[sv.coeffs])?.remove(0);
    let norm = lattice::sup_norm(&lat.eval(t, &witness));
    let witness = witness
        .into_iter()
        .map(|v| i64::try_from(v).map_err(|_| Error::Overflow("orbit witness exceeds i64".into())))
        .collect::<Result<Vec<i64>>>()?;
    Ok((norm, witness))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OrbitTrace {
    pub convention: Convention,
    pub times: Vec<f64>,
    pub lambda1: Vec<f64>,
    /// Integer vector (standard coordinates) realizing each sample.
    pub witnesses: Vec<Vec<i64>>,
    /// Certified lower bound for `λ₁` on `[0, times[k]]`.
    pub floor_so_far: Vec<f64>,
    pub certified_floor: f64,
}

impl OrbitTrace {
    pub fn min_lambda1(&self) -> f64 {
        self.lambda1.iter().cloned().fold(f64::INFINITY, f64::min)
    }
}

/// Lower bound for `λ₁` on `[t, t+Δ]` from both endpoint samples, using
/// `λ₁(s) ≥ λ₁(t)·e^{−c|s−t|}` with `c = 1 + r₁`.
pub fn interval_floor(a: f64, b: f64, delta: f64, c: f64) -> f64 {
    // the two one-sided bounds cross where a·e^{−cu} = b·e^{−c(Δ−u)}
    let u = ((a / b).ln() + c * delta) / (2.0 * c);
    let u = u.clamp(0.0, delta);
    (a * (-c * u).exp()).max(b * (-c * (delta - u)).exp()).min(a).min(b)
}

pub fn orbit_trace(x: &Point, w: &Weight, convention: Convention, big_t: f64, step: f64) -> Result<OrbitTrace> {
    check_dims(x, w)?;
    if !(big_t > 0.0) || !(step > 0.0 && step <= 0.1) {
        return Err(Error::domain("orbit trace needs T > 0 and 0 < step <= 0.1"));
    }
    let k = (big_t / step - 1e-9).ceil() as usize;
    let times: Vec<f64> = (0..=k).map(|i| (i as f64 * step).min(big_t)).collect();
    let lat = OrbitLattice { x, r: w.as_slice(), convention };
    let d = x.n() + 1;
    let mut m: Vec<Vec<i128>> = (0..d).map(|i| (0..d).map(|j| (i == j) as i128).collect()).collect();
    let mut lambda1 = Vec::with_capacity(times.len());
    let mut witnesses = Vec::with_capacity(times.len());
    for &t in &times {
        let (norm, wv) = orbit_shortest(&lat, t, &mut m)?;
        lambda1.push(norm);
        witnesses.push(wv);
    }
    let c = 1.0 + w.r1();
    let mut floor = lambda1[0];
    let mut floor_so_far = vec![floor];
    for i in 1..times.len() {
        let bound = interval_floor(lambda1[i - 1], lambda1[i], times[i] - times[i - 1], c);
        floor = floor.min(bound).min(lambda1[i]);
        floor_so_far.push(floor * (1.0 - 1e-9));
    }
    floor_so_far[0] *= 1.0 - 1e-9;
    let certified_floor = *floor_so_far.last().unwrap();
    Ok(OrbitTrace { convention, times, lambda1, witnesses, floor_so_far, certified_floor })
}

/// Constants in the proof that a bounded orbit forces badness: for an orbit
/// floor `c`, the time `t₀` with `e^{t₀} = 2|q|/c`, `ξ = 2/c`, and
/// `ε = max_i ξ^{r_i}`, giving the direct bound `c/ε`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProofChain {
    pub c: f64,
    pub xi: f64,
    pub eps: f64,
    pub direct_bound: f64,
}

impl ProofChain {
    pub fn new(c: f64, w: &Weight) -> Self {
        let xi = 2.0 / c;
        let eps = w.as_slice().iter().map(|r| xi.powf(*r)).fold(0.0, f64::max);
        ProofChain { c, xi, eps, direct_bound: c / eps }
    }

    pub fn t0(&self, q: f64) -> f64 {
        (2.0 * q.abs() / self.c).ln()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Consistent,
    Inconclusive,
    Violation,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CorrespondenceReport {
    pub direct: BadnessReport,
    pub orbit_horizon: f64,
    pub orbit_floor: f64,
    pub orbit_min: f64,
    pub chain: Option<ProofChain>,
    pub threshold: f64,
    pub direct_bad: bool,
    pub orbit_bad: bool,
    pub verdict: Verdict,
}

pub const CORRESPONDENCE_THRESHOLD: f64 = 1e-3;

/// Run both tests at finite scale and check the implication
/// `orbit floor ≥ c ⇒ direct constant ≥ c/ε` with a factor-4 slack band.
///
/// The orbit is followed up to `ln Q + ln(2/D)`, clipped to `[1, t_max]`,
/// where `D` is the direct constant; a point is "bad at this scale" under a
/// test when its constant is at least [`CORRESPONDENCE_THRESHOLD`].
pub fn correspondence_check(x: &Point, w: &Weight, horizon: u64, t_max: f64) -> Result<CorrespondenceReport> {
    let direct = badness_constant_direct(x, w, horizon)?;
    let d = direct.constant;
    let t = if d > 0.0 { (horizon as f64).ln() + (2.0 / d).ln() } else { t_max };
    let t = t.clamp(1.0, t_max.max(1.0));
    let trace = orbit_trace(x, w, Convention::AV, t, 0.01)?;
    let floor = trace.certified_floor;
    let threshold = CORRESPONDENCE_THRESHOLD;
    let direct_bad = d >= threshold;
    let orbit_bad = floor >= threshold;
    let chain = (floor > 0.0).then(|| ProofChain::new(floor, w));
    let mut verdict = Verdict::Consistent;
    if let Some(ch) = chain {
        // the implication only covers q with e^{t₀(q)} inside the traced window
        let covered = ((floor * t.exp() / 2.0).floor() as u64).min(horizon);
        let d_cov = if covered >= 1 { badness_constant_direct(x, w, covered)?.constant } else { f64::INFINITY };
        if d_cov < ch.direct_bound / SLACK_BAND {
            verdict = Verdict::Violation;
        } else if d_cov < ch.direct_bound {
            verdict = Verdict::Inconclusive;
        }
    }
    if verdict == Verdict::Consistent && direct_bad != orbit_bad {
        let near = |v: f64| v >= threshold / SLACK_BAND && v < threshold * SLACK_BAND;
        verdict = if near(d) || near(floor) { Verdict::Inconclusive } else { Verdict::Violation };
    }
    Ok(CorrespondenceReport {
        direct,
        orbit_horizon: t,
        orbit_floor: floor,
        orbit_min: trace.min_lambda1(),
        chain,
        threshold,
        direct_bad,
        orbit_bad,
        verdict,
    })
}

/// One entry of the curated sample set.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CuratedSample {
    pub name: String,
    pub coords: Vec<String>,
    pub weight: Vec<f64>,
    pub horizon: u64,
    pub dual_n_max: f64,
    pub orbit_threshold: f64,
    pub direct_constant: f64,
    pub expected_direct_bad: bool,
    pub expected_dual_bad: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Classification {
    pub threshold: f64,
    pub direct_constant: f64,
    pub direct_bad: bool,
    pub dual_bad: bool,
    /// First `N` (powers of two) at which the dual system has a nonzero solution.
    pub dual_failure_at: Option<f64>,
}

/// Classify `x` by the direct test at horizon `Q` and the dual test at
/// `N = 2, 4, …, ≤ N_max`, both at the threshold `c/ε` derived from the orbit
/// threshold `c`.
pub fn classify(x: &Point, w: &Weight, horizon: u64, dual_n_max: f64, orbit_threshold: f64) -> Result<Classification> {
    let threshold = ProofChain::new(orbit_threshold, w).direct_bound;
    let direct = badness_constant_direct(x, w, horizon)?;
    let mut dual_failure_at = None;
    let mut n = 2.0;
    while n <= dual_n_max {
        if !dual_only_zero_solution(x, w, threshold, n)? {
            dual_failure_at = Some(n);
            break;
        }
        n *= 2.0;
    }
    Ok(Classification {
        threshold,
        direct_constant: direct.constant,
        direct_bad: direct.constant >= threshold,
        dual_bad: dual_failure_at.is_none(),
        dual_failure_at,
    })
}

pub fn load_curated(json: &str) -> Result<Vec<CuratedSample>> {
    serde_json::from_str(json).map_err(|e| Error::domain(format!("curated sample file: {e}")))
}

/// The curated sample set shipped with the crate.
pub const CURATED_JSON: &str = include_str!("../data/curated_points.json");

#[cfg(test)]
mod tests {
    use super::*;

    fn one() -> Weight {
        Weight::new(vec![1.0]).unwrap()
    }

    #[test]
    fn parses_coordinates_precisely() {
        let x = parse_coordinate("0.1").unwrap();
        let err = x * 10.0 - TwoFloat::from(1.0);
        assert!(err.hi().abs() < 1e-31);
        let y = parse_coordinate("2/7").unwrap() * 7.0 - TwoFloat::from(2.0);
        assert!(y.hi().abs() < 1e-31);
        assert_eq!(parse_coordinate("3/4").unwrap(), TwoFloat::from(0.75));
        assert_eq!(parse_coordinate("-2.5e1").unwrap(), TwoFloat::from(-25.0));
        let g = golden();
        assert!(((g * g + g) - TwoFloat::from(1.0)).hi().abs() < 1e-30);
        assert!(parse_coordinate("abc").is_err());
        let l = liouville(5);
        assert!((l.hi() - 0.110001).abs() < 1e-15);
    }

    #[test]
    fn dirichlet_examples() {
        let w = one();
        assert_eq!(dirichlet_witness(&Point::from_f64(&[0.0]), &w, 10.0).unwrap(), Witness { p: vec![0], q: 1 });
        let g = Point::parse(&["golden"]).unwrap();
        assert_eq!(dirichlet_witness(&g, &w, 5.0).unwrap(), Witness { p: vec![-3], q: 5 });
        let h = Point::parse(&["1/2"]).unwrap();
        assert_eq!(dirichlet_witness(&h, &w, 2.0).unwrap(), Witness { p: vec![-1], q: 2 });
    }

    #[test]
    fn direct_constant_examples() {
        let w = one();
        let r = badness_constant_direct(&Point::parse(&["2/7"]).unwrap(), &w, 10).unwrap();
        assert_eq!(r.constant, 0.0);
        assert_eq!(r.witness, vec![-2, 7]);
        let r = badness_constant_direct(&Point::parse(&["golden"]).unwrap(), &w, 200).unwrap();
        assert!((r.constant - (1.0 - 0.6180339887498949)).abs() < 1e-12);
        assert_eq!(r.witness, vec![-1, 1]);
    }

    #[test]
    fn dual_examples() {
        let w = one();
        let g = Point::parse(&["golden"]).unwrap();
        assert!(dual_only_zero_solution(&g, &w, 0.2, 10.0).unwrap());
        let h = Point::parse(&["1/2"]).unwrap();
        assert!(!dual_only_zero_solution(&h, &w, 0.1, 3.0).unwrap());
        assert!(dual_only_zero_solution(&g, &w, 1e-9, 10.0).unwrap());
        assert!(dual_only_zero_solution_capped(&g, &w, 0.1, 1e9, 1000).unwrap_err().is_resource());
    }

    #[test]
    fn zero_orbit_is_closed_form() {
        let tr = orbit_trace(&Point::from_f64(&[0.0]), &one(), Convention::AV, 3.0, 0.1).unwrap();
        for (t, l) in tr.times.iter().zip(&tr.lambda1) {
            assert!((l - (-t).exp().min(1.0)).abs() < 1e-12, "t={t}: {l}");
        }
        assert!(tr.certified_floor <= tr.min_lambda1());
    }

    #[test]
    fn interval_floor_is_below_both_ends() {
        let f = interval_floor(0.7, 0.6, 0.01, 2.0);
        assert!(f <= 0.6 && f > 0.59);
        assert_eq!(interval_floor(1.0, 1.0, 0.0, 2.0), 1.0);
    }

    #[test]
    fn proof_chain_constants() {
        let ch = ProofChain::new(0.5, &one());
        assert_eq!(ch.xi, 4.0);
        assert_eq!(ch.eps, 4.0);
        assert_eq!(ch.direct_bound, 0.125);
        assert!((ch.t0(3.0) - 12f64.ln()).abs() < 1e-15);
    }
}
