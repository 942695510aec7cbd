mod common;

use std::collections::{BTreeMap, BTreeSet};

use badflow::cantor::scans::eq_membership;
use badflow::cantor::taxonomy::{detect_dangerous, WindowKind};
use badflow::cantor::{build_sequence, ConstructionConfig, Decision, LinearFamily, Survival};
use badflow::curve::moment_curve;
use badflow::flows::Weight;
use common::{base, brute_dangerous, flowed_norm, int_box, moment_point, GRID};
use proptest::prelude::*;

fn frozen(depth: u32) -> ConstructionConfig {
    ConstructionConfig::new(&moment_curve(2).unwrap(), Weight::new(vec![0.5, 0.5]).unwrap(), 16, 1, depth).unwrap()
}

fn small(depth: u32) -> ConstructionConfig {
    ConstructionConfig::new(&moment_curve(2).unwrap(), Weight::new(vec![0.5, 0.5]).unwrap(), 4, 1, depth).unwrap().with_rho(0.5).unwrap()
}

/// Smallest flowed norm over `a′ ∈ [−8, 8]²` and the best few `a₀`.
fn brute_min_norm(b: f64, q: f64, s: f64) -> (f64, Vec<i64>) {
    let phi = moment_point(2, s);
    let mut best = (f64::INFINITY, vec![]);
    for tail in int_box(2, 8) {
        let lin: f64 = tail.iter().zip(&phi).map(|(a, p)| *a as f64 * p).sum();
        for a0 in [(-lin).round() as i64 - 1, (-lin).round() as i64, (-lin).round() as i64 + 1] {
            let a: Vec<i64> = std::iter::once(a0).chain(tail.iter().copied()).collect();
            if a.iter().all(|&x| x == 0) {
                continue;
            }
            let v = flowed_norm(b, &[0.5, 0.5], q, &a, &phi);
            if v < best.0 {
                best = (v, a);
            }
        }
    }
    best
}

#[test]
fn grid_deaths_are_engine_deaths() {
    let cfg = frozen(4);
    let tree = build_sequence(&cfg).unwrap();
    let b = base(16, 0.5);
    let kappa = 1.0 / 16.0;
    for q in 1..=4u32 {
        let len = 16f64.powi(-(q as i32));
        let nodes: BTreeMap<u64, &Survival> = tree.generations[q as usize].iter().map(|n| (n.index, &n.survival)).collect();
        let mut brute_dead = 0;
        for k in 0..GRID {
            let s = (k as f64 + 0.5) / GRID as f64;
            let Some(status) = nodes.get(&((s / len) as u64)) else { continue };
            let (norm, a) = brute_min_norm(b, q as f64, s);
            if norm <= kappa * (1.0 - 1e-9) {
                brute_dead += 1;
                assert!(!status.is_alive(), "q={q} s={s}: a={a:?} has norm {norm} but the node survived");
            }
        }
        // q = 3 deaths sit exactly on κ·b^{3/2} = 1, invisible to a strict grid test
        match q {
            1..=3 => assert_eq!(brute_dead, 0, "q={q}"),
            _ => assert!(brute_dead > 0, "q={q}"),
        }
    }
}

#[test]
fn engine_witnesses_check_out() {
    let cfg = frozen(4);
    let tree = build_sequence(&cfg).unwrap();
    let b = base(16, 0.5);
    let mut checked = 0;
    for q in 1..=4u32 {
        for n in tree.dead(q) {
            if let Survival::Dead { witness, norm, at } = &n.survival {
                assert!(n.lo <= *at && *at <= n.hi);
                let v = flowed_norm(b, &[0.5, 0.5], q as f64, witness, &moment_point(2, *at));
                assert!(v <= 0.0625 * (1.0 + 1e-9), "witness {witness:?} has norm {v}");
                assert!((v - norm).abs() <= 1e-9 * v.max(1e-3));
                checked += 1;
            }
        }
    }
    assert!(checked > 700);
}

fn engine_dangerous(cfg: &ConstructionConfig, q: u32, l: u32) -> (BTreeSet<(Vec<i64>, u64)>, usize) {
    let scan = detect_dangerous(cfg, None, q, WindowKind::Dangerous { l }, (0.0, 1.0)).unwrap();
    let len = 4f64.powi(-(q as i32));
    let set = scan
        .records
        .iter()
        .map(|r| {
            let mid = 0.5 * (r.interval.0 + r.interval.1);
            (r.witness.clone(), (mid / len - 0.5).round() as u64)
        })
        .collect();
    (set, scan.undecided)
}

#[test]
fn dangerous_detector_matches_brute_force() {
    for (q, l) in [(2, 1), (4, 1), (4, 2), (5, 1), (5, 2)] {
        let cfg = small(q);
        let (engine, undecided) = engine_dangerous(&cfg, q, l);
        assert_eq!(undecided, 0, "q={q} l={l}");
        let brute = brute_dangerous(4, 0.5, q, l);
        assert_eq!(engine, brute, "q={q} l={l}");
    }
}

#[test]
fn dangerous_peaks_lie_in_band() {
    let cfg = small(5);
    let scan = detect_dangerous(&cfg, None, 5, WindowKind::Dangerous { l: 1 }, (0.0, 1.0)).unwrap();
    assert!(!scan.records.is_empty());
    for r in &scan.records {
        assert!(0.25 <= r.peak.0 && r.peak.0 <= r.peak.1 && r.peak.1 <= 0.5);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn enclosure_decisions_are_sound(
        a in prop::collection::vec(-5i64..=5, 3),
        t in 0.0f64..4.0,
        lo in 0.0f64..0.9,
        width in 1e-3f64..0.1,
        thr_frac in 0.2f64..1.5,
    ) {
        prop_assume!(a.iter().any(|&x| x != 0));
        let cfg = frozen(4);
        let b = base(16, 0.5);
        let hi = (lo + width).min(1.0);
        let f = LinearFamily::for_vector(&a, &cfg.params, &cfg.weight, t).unwrap();
        let pts = 2000;
        let h = (hi - lo) / pts as f64;
        let grid_max = (0..=pts)
            .map(|k| flowed_norm(b, &[0.5, 0.5], t, &a, &moment_point(2, lo + k as f64 * h)))
            .fold(0.0, f64::max);
        let lip = b.powf(t) * a[1..].iter().map(|x| x.abs() as f64).sum::<f64>() * 3.0;
        let slack = lip * h / 2.0 + 1e-12 * grid_max.max(1.0);
        let e = f.max_enclosure(&cfg.curve, lo, hi, 1e-6, &cfg.refinement);
        prop_assert!(grid_max <= e.upper * (1.0 + 1e-12) + 1e-15);
        prop_assert!(e.lower <= grid_max + slack);
        let thr = thr_frac * grid_max;
        match f.compare_max(&cfg.curve, lo, hi, thr, &cfg.refinement) {
            Decision::Above => prop_assert!(thr < grid_max + slack),
            Decision::Below => prop_assert!(grid_max < thr * (1.0 + 1e-12)),
            Decision::Unknown => {}
        }
    }

    #[test]
    fn covering_membership_matches_box_search(s in 0.0f64..1.0, q in 2u32..=4) {
        let cfg = frozen(4);
        let b = base(16, 0.5);
        let t = q as f64;
        let (rho, eta) = (cfg.rho, cfg.eta);
        let phi = moment_point(2, s);
        let dphi = [1.0, 2.0 * (0.5 + s)];
        let bound = rho * b.powf(0.5 * t);
        let mut brute = false;
        for tail in int_box(2, bound.ceil() as i64) {
            if tail.iter().any(|&x| (x as f64).abs() >= bound) || tail.iter().all(|&x| x == 0) {
                continue;
            }
            let lin: f64 = tail.iter().zip(&phi).map(|(a, p)| *a as f64 * p).sum();
            let dlin: f64 = tail.iter().zip(&dphi).map(|(a, p)| *a as f64 * p).sum();
            let a0 = (-lin).round();
            if (a0 + lin).abs() < rho * b.powf(-t) && dlin.abs() < b.powf((0.5 - eta) * t) {
                brute = true;
            }
        }
        let engine = eq_membership(&cfg, s, q).unwrap();
        prop_assert_eq!(engine.is_some(), brute);
        if let Some(a) = engine {
            let lin = a[0] as f64 + a[1] as f64 * phi[0] + a[2] as f64 * phi[1];
            prop_assert!(lin.abs() < rho * b.powf(-t));
        }
    }
}
