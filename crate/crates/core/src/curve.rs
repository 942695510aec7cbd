//! Nondegenerate analytic curves `φ: [a, b] → R^n`, supplied as paired
//! closures for the value and first derivative plus a bound on `‖φ''‖`.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

type VecFn = Arc<dyn Fn(f64) -> Vec<f64> + Send + Sync>;

#[derive(Clone)]
pub struct Curve {
    n: usize,
    domain: (f64, f64),
    eval: VecFn,
    deriv: VecFn,
    deriv2_bound: f64,
    c1: f64,
    big_c1: f64,
    name: String,
}

impl fmt::Debug for Curve {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Curve")
            .field("name", &self.name)
            .field("n", &self.n)
            .field("domain", &self.domain)
            .field("deriv2_bound", &self.deriv2_bound)
            .field("c1", &self.c1)
            .field("C1", &self.big_c1)
            .finish()
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct A2Check {
    pub c1_measured: f64,
    pub big_c1_measured: f64,
    /// `c1_measured` minus the second-derivative widening.
    pub c1_certified: f64,
    pub big_c1_certified: f64,
    pub pass: bool,
}

impl Curve {
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        name: impl Into<String>,
        n: usize,
        domain: (f64, f64),
        eval: impl Fn(f64) -> Vec<f64> + Send + Sync + 'static,
        deriv: impl Fn(f64) -> Vec<f64> + Send + Sync + 'static,
        deriv2_bound: f64,
        c1: f64,
        big_c1: f64,
    ) -> Result<Self> {
        if n == 0 {
            return Err(Error::domain("curve dimension must be positive"));
        }
        if !(domain.0 < domain.1) || !domain.0.is_finite() || !domain.1.is_finite() {
            return Err(Error::domain(format!("bad curve domain [{}, {}]", domain.0, domain.1)));
        }
        if !(deriv2_bound >= 0.0) || !(c1 > 0.0) || !(big_c1 >= c1) {
            return Err(Error::domain("curve bounds must satisfy 0 < c1 <= C1 and deriv2_bound >= 0"));
        }
        Ok(Curve {
            n,
            domain,
            eval: Arc::new(eval),
            deriv: Arc::new(deriv),
            deriv2_bound,
            c1,
            big_c1,
            name: name.into(),
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn domain(&self) -> (f64, f64) {
        self.domain
    }

    pub fn length(&self) -> f64 {
        self.domain.1 - self.domain.0
    }

    pub fn eval(&self, s: f64) -> Vec<f64> {
        (self.eval)(s)
    }

    pub fn deriv(&self, s: f64) -> Vec<f64> {
        (self.deriv)(s)
    }

    /// Bound on `max_i |φ_i''|` over the domain.
    pub fn deriv2_bound(&self) -> f64 {
        self.deriv2_bound
    }

    pub fn c1(&self) -> f64 {
        self.c1
    }

    pub fn big_c1(&self) -> f64 {
        self.big_c1
    }

    /// The same image traced over `[0, 1]`.
    pub fn unit_reparametrized(&self) -> Curve {
        let (a, len) = (self.domain.0, self.length());
        if len == 1.0 && a == 0.0 {
            return self.clone();
        }
        let (e, d) = (self.eval.clone(), self.deriv.clone());
        Curve {
            n: self.n,
            domain: (0.0, 1.0),
            eval: Arc::new(move |u| e(a + u * len)),
            deriv: Arc::new(move |u| d(a + u * len).into_iter().map(|x| x * len).collect()),
            deriv2_bound: self.deriv2_bound * len * len,
            c1: self.c1 * len,
            big_c1: self.big_c1 * len,
            name: self.name.clone(),
        }
    }

    /// Grid sweep of `|φ_i'|`; every point of the domain lies within half a
    /// grid step of a sample, so the range widens by `deriv2_bound·h/2`.
    pub fn check_a2(&self, grid: usize) -> Result<A2Check> {
        if grid < 2 {
            return Err(Error::domain("A2 grid needs at least two points"));
        }
        let h = self.length() / (grid - 1) as f64;
        let (mut lo, mut hi) = (f64::INFINITY, 0.0f64);
        for k in 0..grid {
            let s = self.domain.0 + k as f64 * h;
            for d in self.deriv(s) {
                lo = lo.min(d.abs());
                hi = hi.max(d.abs());
            }
        }
        let widen = self.deriv2_bound * h / 2.0;
        Ok(A2Check {
            c1_measured: lo,
            big_c1_measured: hi,
            c1_certified: lo - widen,
            big_c1_certified: hi + widen,
            pass: lo - widen > 0.0,
        })
    }

    /// `‖φ(x+h) − φ(x) − h·φ'(x)‖` in the sup norm.
    pub fn taylor_linearization_error(&self, x: f64, h: f64) -> Result<f64> {
        let (a, b) = self.domain;
        let inside = |s: f64| s >= a - 1e-12 && s <= b + 1e-12;
        if !inside(x) || !inside(x + h) {
            return Err(Error::domain(format!("[{x}, {}] leaves the curve domain", x + h)));
        }
        let (p, q, d) = (self.eval(x), self.eval(x + h), self.deriv(x));
        Ok(p.iter().zip(&q).zip(&d).map(|((p, q), d)| (q - p - h * d).abs()).fold(0.0, f64::max))
    }
}

/// `s ↦ (s, s², …, s^n)` on `[0.5, 1.5]` with exact derivative bounds.
pub fn moment_curve(n: usize) -> Result<Curve> {
    if n == 0 {
        return Err(Error::domain("moment curve needs n >= 1"));
    }
    let c1 = (1..=n).map(|i| i as f64 * 0.5f64.powi(i as i32 - 1)).fold(f64::INFINITY, f64::min);
    let big_c1 = (1..=n).map(|i| i as f64 * 1.5f64.powi(i as i32 - 1)).fold(0.0, f64::max);
    let d2 = (2..=n).map(|i| (i * (i - 1)) as f64 * 1.5f64.powi(i as i32 - 2)).fold(0.0, f64::max);
    Curve::new(
        "moment",
        n,
        (0.5, 1.5),
        move |s| (1..=n).map(|i| s.powi(i as i32)).collect(),
        move |s| (1..=n).map(|i| i as f64 * s.powi(i as i32 - 1)).collect(),
        d2,
        c1,
        big_c1,
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn moment_curve_values() {
        let c = moment_curve(2).unwrap();
        assert_eq!(c.eval(1.0), vec![1.0, 1.0]);
        assert_eq!(c.deriv(1.0), vec![1.0, 2.0]);
        assert_eq!((c.c1(), c.big_c1()), (1.0, 3.0));
        assert_eq!(moment_curve(3).unwrap().deriv(0.5), vec![1.0, 1.0, 0.75]);
    }

    #[test]
    fn a2_passes_for_moment_and_fails_on_critical_point() {
        let r = moment_curve(2).unwrap().check_a2(100).unwrap();
        assert!(r.pass && r.c1_measured >= 1.0 - 1e-12);
        assert!(moment_curve(3).unwrap().check_a2(1000).unwrap().pass);
        let para = Curve::new("parabola", 2, (-1.0, 1.0), |s| vec![s, s * s], |s| vec![1.0, 2.0 * s], 2.0, 1.0, 2.0).unwrap();
        assert!(!para.check_a2(101).unwrap().pass);
        assert!(!para.check_a2(100).unwrap().pass);
    }

    #[test]
    fn linearization_remainder() {
        let c = moment_curve(2).unwrap();
        assert_eq!(c.taylor_linearization_error(1.0, 0.0).unwrap(), 0.0);
        assert!((c.taylor_linearization_error(1.0, 0.1).unwrap() - 0.01).abs() < 1e-15);
        let c3 = moment_curve(3).unwrap();
        let e = c3.taylor_linearization_error(1.0, 0.01).unwrap();
        assert!(e <= 0.5 * c3.deriv2_bound() * 1e-4);
        assert!(c.taylor_linearization_error(1.4, 0.2).is_err());
    }

    #[test]
    fn unit_reparametrization_keeps_image() {
        let c = Curve::new("cubic", 1, (2.0, 5.0), |s| vec![s * s * s], |s| vec![3.0 * s * s], 30.0, 12.0, 75.0).unwrap();
        let u = c.unit_reparametrized();
        assert_eq!(u.domain(), (0.0, 1.0));
        for k in 0..=10 {
            let t = k as f64 / 10.0;
            assert!((u.eval(t)[0] - c.eval(2.0 + 3.0 * t)[0]).abs() < 1e-12);
        }
        assert!(u.check_a2(50).unwrap().pass);
    }
}
