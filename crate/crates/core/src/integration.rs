//! The n,q-integral
//!
//! ```text
//! ∫_0^x f = Σ_k (h^k(x) - h^{k+1}(x)) f(h^k(x)),     ∫_a^b f = ∫_0^b f - ∫_0^a f
//! ```
//!
//! and the identities built on it.

use serde::Serialize;

use crate::calculus::{d_nq, derivative_fn, DiffConfig};
use crate::error::{Error, Result};
use crate::expr::RealFunction;
use crate::lattice::{QuantumParams, MAX_LATTICE_ITERATIONS};
use crate::scalar::Scalar;
use crate::series::KahanSum;

/// Truncation policy for the integral series.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesConfig<T> {
    pub rel_tol: T,
    pub abs_tol: T,
    pub min_terms: usize,
    pub max_terms: usize,
    /// How many successive small terms end the summation.
    pub consecutive_small: usize,
}

impl<T: Scalar> Default for SeriesConfig<T> {
    fn default() -> Self {
        Self {
            rel_tol: T::default_series_rel_tol(),
            abs_tol: T::default_series_abs_tol(),
            min_terms: 8,
            max_terms: 100_000,
            consecutive_small: 3,
        }
    }
}

impl<T: Scalar> SeriesConfig<T> {
    pub fn validate(&self) -> Result<()> {
        if !(self.rel_tol > T::zero() && self.abs_tol > T::zero()) {
            return Err(Error::InvalidParams("series tolerances must be positive".into()));
        }
        if !(1 <= self.min_terms && self.min_terms <= self.max_terms && self.max_terms <= 1_000_000) {
            return Err(Error::InvalidParams("need 1 <= min_terms <= max_terms <= 1000000".into()));
        }
        if self.consecutive_small == 0 {
            return Err(Error::InvalidParams("consecutive_small must be at least 1".into()));
        }
        Ok(())
    }

    pub fn with_rel_tol(mut self, rel_tol: T) -> Self {
        self.rel_tol = rel_tol;
        self
    }

    pub fn with_max_terms(mut self, max_terms: usize) -> Self {
        self.max_terms = max_terms;
        self
    }
}

/// A summed series.
///
/// For a definite integral the two legs are summed separately; `terms_used`
/// adds them and `last_term` is the larger of the two tails.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct IntegralResult<T> {
    pub value: T,
    pub terms_used: usize,
    pub last_term: T,
    pub converged: bool,
}

impl<T: Scalar> IntegralResult<T> {
    fn zero() -> Self {
        Self { value: T::zero(), terms_used: 0, last_term: T::zero(), converged: true }
    }

    /// The value, or [`Error::NonConvergence`] when the cap was hit.
    pub fn converged_value(&self) -> Result<T> {
        if self.converged {
            Ok(self.value)
        } else {
            Err(Error::NonConvergence { terms: self.terms_used })
        }
    }
}

/// The first `count` terms `(h^k(x) - h^{k+1}(x)) f(h^k(x))`.
pub fn series_terms<T: Scalar>(params: &QuantumParams<T>, f: &RealFunction<T>, x: T, count: usize) -> Result<Vec<T>> {
    params.require_inside(x)?;
    let mut out = Vec::with_capacity(count);
    let mut xk = x;
    for _ in 0..count {
        let next = params.h(xk);
        out.push(if xk.is_zero() { T::zero() } else { (xk - next) * f.eval(xk)? });
        xk = next;
    }
    Ok(out)
}

/// `∫_0^t f`, the n,q-antiderivative of `f` vanishing at `0`.
pub fn antiderivative_at<T: Scalar>(
    params: &QuantumParams<T>,
    f: &RealFunction<T>,
    t: T,
    cfg: &SeriesConfig<T>,
) -> Result<IntegralResult<T>> {
    cfg.validate()?;
    params.require_inside(t)?;
    if t.is_zero() {
        return Ok(IntegralResult::zero());
    }

    let mut acc = KahanSum::new();
    let mut x = t;
    let mut small = 0;
    let mut last = T::zero();
    for k in 0..cfg.max_terms {
        let next = params.h(x);
        let term = (x - next) * f.eval(x)?;
        if !term.is_finite() {
            return Err(Error::Numeric { what: "series term".into(), location: x.to_f64().unwrap_or(f64::NAN) });
        }
        acc.add(term);
        last = term;
        if next.is_zero() {
            return Ok(IntegralResult { value: acc.value(), terms_used: k + 1, last_term: term, converged: true });
        }
        if term.abs() <= cfg.abs_tol + cfg.rel_tol * acc.value().abs() {
            small += 1;
        } else {
            small = 0;
        }
        if k + 1 >= cfg.min_terms && small >= cfg.consecutive_small {
            return Ok(IntegralResult { value: acc.value(), terms_used: k + 1, last_term: term, converged: true });
        }
        x = next;
    }
    Ok(IntegralResult { value: acc.value(), terms_used: cfg.max_terms, last_term: last, converged: false })
}

/// `∫_a^b f = ∫_0^b f - ∫_0^a f`.
pub fn integral<T: Scalar>(
    params: &QuantumParams<T>,
    f: &RealFunction<T>,
    a: T,
    b: T,
    cfg: &SeriesConfig<T>,
) -> Result<IntegralResult<T>> {
    params.require_inside(a)?;
    params.require_inside(b)?;
    if a == b {
        cfg.validate()?;
        return Ok(IntegralResult::zero());
    }
    let upper = antiderivative_at(params, f, b, cfg)?;
    let lower = antiderivative_at(params, f, a, cfg)?;
    let last_term = if upper.last_term.abs() >= lower.last_term.abs() { upper.last_term } else { lower.last_term };
    Ok(IntegralResult {
        value: upper.value - lower.value,
        terms_used: upper.terms_used + lower.terms_used,
        last_term,
        converged: upper.converged && lower.converged,
    })
}

/// `|∫_a^b D f - (f(b) - f(a))|`.
pub fn ftc_residual<T: Scalar>(
    params: &QuantumParams<T>,
    f: &RealFunction<T>,
    a: T,
    b: T,
    cfg: &SeriesConfig<T>,
    diff_cfg: &DiffConfig<T>,
) -> Result<T> {
    let df = derivative_fn(params, f, diff_cfg);
    let lhs = integral(params, &df, a, b, cfg)?.converged_value()?;
    Ok((lhs - (f.eval(b)? - f.eval(a)?)).abs())
}

/// Both sides of `∫_t^{q t^n} f = (q t^n - t) f(t)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct IdentitySides<T> {
    pub lhs: T,
    pub rhs: T,
}

pub fn short_integral_identity<T: Scalar>(
    params: &QuantumParams<T>,
    f: &RealFunction<T>,
    t: T,
    cfg: &SeriesConfig<T>,
) -> Result<IdentitySides<T>> {
    let ht = params.h(t);
    let lhs = integral(params, f, t, ht, cfg)?.converged_value()?;
    Ok(IdentitySides { lhs, rhs: (ht - t) * f.eval(t)? })
}

/// `|∫ f Dg + ∫ Df (g∘h) - (f(b) g(b) - f(a) g(a))|` over `[a, b]`.
pub fn by_parts_residual<T: Scalar>(
    params: &QuantumParams<T>,
    f: &RealFunction<T>,
    g: &RealFunction<T>,
    a: T,
    b: T,
    cfg: &SeriesConfig<T>,
    diff_cfg: &DiffConfig<T>,
) -> Result<T> {
    let (p, dc) = (*params, *diff_cfg);
    let (f1, g1) = (f.clone(), g.clone());
    let first = RealFunction::native(move |s| Ok(f1.eval(s)? * d_nq(&p, &g1, s, &dc)?));
    let (f2, g2) = (f.clone(), g.clone());
    let second = RealFunction::native(move |s| Ok(d_nq(&p, &f2, s, &dc)? * g2.eval(p.h(s))?));
    let i1 = integral(params, &first, a, b, cfg)?.converged_value()?;
    let i2 = integral(params, &second, a, b, cfg)?.converged_value()?;
    let boundary = f.eval(b)? * g.eval(b)? - f.eval(a)? * g.eval(a)?;
    Ok((i1 + i2 - boundary).abs())
}

/// Position of `x` on the forward orbit of `s`.
fn orbit_index<T: Scalar>(params: &QuantumParams<T>, s: T, x: T) -> Option<usize> {
    let tol = T::of(1e-12);
    let mut y = s;
    for k in 0..MAX_LATTICE_ITERATIONS {
        if (y - x).abs() <= tol * T::one().max(x.abs()) {
            return Some(k);
        }
        let next = params.h(y);
        if next == y {
            return None;
        }
        y = next;
    }
    None
}

/// Comparison of integrals on a single orbit: with `a = h^i(s)`, `b = h^j(s)`
/// and `|f| <= g` on the orbit, checks `|∫_a^b f| <= ∫_a^b g` and
/// `∫_a^b g >= 0`.
///
/// The pointwise bound is sampled on the orbit from `a` or `b` onwards;
/// a violation is a domain error, as is an endpoint off the orbit.
pub fn monotonicity_check<T: Scalar>(
    params: &QuantumParams<T>,
    f: &RealFunction<T>,
    g: &RealFunction<T>,
    s: T,
    a: T,
    b: T,
    cfg: &SeriesConfig<T>,
) -> Result<bool> {
    if !(a < b) {
        return Err(Error::Domain(format!("need a < b, got a = {a}, b = {b}")));
    }
    params.require_inside(s)?;
    let off_orbit = |x: T| Error::Domain(format!("{x} is not on the forward orbit of {s}"));
    let i = orbit_index(params, s, a).ok_or_else(|| off_orbit(a))?;
    let j = orbit_index(params, s, b).ok_or_else(|| off_orbit(b))?;

    let mut x = params.h_iterate(s, i.min(j) as i64);
    for _ in 0..cfg.max_terms {
        if x.is_zero() {
            break;
        }
        let (fx, gx) = (f.eval(x)?, g.eval(x)?);
        if fx.abs() > gx + T::of(1e-12) * T::one().max(gx.abs()) {
            return Err(Error::Domain(format!("bound |f| <= g fails at {x}: |f| = {}, g = {gx}", fx.abs())));
        }
        let next = params.h(x);
        if (next - x).abs() <= cfg.abs_tol {
            break;
        }
        x = next;
    }

    let int_f = integral(params, f, a, b, cfg)?.converged_value()?;
    let int_g = integral(params, g, a, b, cfg)?.converged_value()?;
    let tol = T::of(100.0) * cfg.rel_tol * T::one().max(int_g.abs()) + cfg.abs_tol;
    Ok(int_f.abs() <= int_g + tol && int_g >= -tol)
}

/// The piecewise-linear function on `[0, 1]` (with `n = 1`) for which
/// `|∫ f| > ∫ |f|`: it is `-1` at every `q^m` and `1` at every
/// `q^m (1+q)/2`, linear in between, and `0` at `0`.
pub fn counterexample_function<T: Scalar>(q: T) -> Result<RealFunction<T>> {
    if !(q > T::zero() && q < T::one()) {
        return Err(Error::InvalidParams(format!("q must lie strictly inside (0, 1), got {q}")));
    }
    const MAX_BREAKPOINTS: usize = 1 << 20;
    let mut powers = vec![T::one()];
    loop {
        let next = *powers.last().expect("nonempty") * q;
        if next.is_zero() || powers.len() >= MAX_BREAKPOINTS {
            break;
        }
        powers.push(next);
    }
    let one_minus_q = T::one() - q;
    let mid_factor = (T::one() + q) * T::half();
    let four = T::of(4.0);
    let left_offset = T::one() + T::of(3.0) * q;

    Ok(RealFunction::native(move |x: T| {
        if !(x >= T::zero() && x <= T::one()) {
            return Err(Error::Domain(format!("the counterexample is defined on [0, 1], got {x}")));
        }
        if x.is_zero() {
            return Ok(T::zero());
        }
        // largest m with x <= q^m, so that q^{m+1} <= x <= q^m
        let m = powers.partition_point(|&p| p >= x).saturating_sub(1);
        let (pm, rescaled) = if m + 1 < powers.len() || x >= powers[m] * q {
            (powers[m], x / powers[m])
        } else {
            let m = (x.ln() / q.ln()).floor();
            let pm = q.powf(m);
            (pm, x / pm)
        };
        let mid = pm * mid_factor;
        Ok(if x <= mid {
            (four * rescaled - left_offset) / one_minus_q
        } else {
            four * (T::one() - rescaled) / one_minus_q - T::one()
        })
    }))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(n: u32, q: f64) -> QuantumParams<f64> {
        QuantumParams::new(n, q).unwrap()
    }

    fn f(text: &str) -> RealFunction<f64> {
        RealFunction::parse(text).unwrap()
    }

    fn cfg() -> SeriesConfig<f64> {
        SeriesConfig::default()
    }

    #[test]
    fn config_validation() {
        assert!(cfg().validate().is_ok());
        assert!(SeriesConfig { min_terms: 0, ..cfg() }.validate().is_err());
        assert!(SeriesConfig { max_terms: 2_000_000, ..cfg() }.validate().is_err());
        assert!(SeriesConfig { rel_tol: 0.0, ..cfg() }.validate().is_err());
        assert!(SeriesConfig { consecutive_small: 0, ..cfg() }.validate().is_err());
    }

    #[test]
    fn antiderivative_examples() {
        for params in [p(1, 0.5), p(3, 0.5), p(5, 0.9)] {
            assert_eq!(antiderivative_at(&params, &f("0"), 0.7, &cfg()).unwrap().value, 0.0);
        }
        let r = antiderivative_at(&p(1, 0.5), &f("1"), 0.8, &cfg()).unwrap();
        assert!(r.converged && (r.value - 0.8).abs() < 1e-12);
        let r = antiderivative_at(&p(1, 0.5), &f("t"), 1.0, &cfg()).unwrap();
        assert!(r.converged && (r.value - 2.0 / 3.0).abs() < 1e-12);
        assert!(r.last_term.abs() <= cfg().abs_tol + cfg().rel_tol * r.value.abs());
    }

    #[test]
    fn horizon_and_cap() {
        let params = p(3, 0.25);
        assert!(matches!(antiderivative_at(&params, &f("t"), 2.0, &cfg()), Err(Error::Horizon { .. })));
        assert!(matches!(antiderivative_at(&params, &f("t"), -2.5, &cfg()), Err(Error::Horizon { .. })));
        let tight = SeriesConfig { max_terms: 10, ..cfg() };
        let r = antiderivative_at(&p(1, 0.99), &f("1"), 1.0, &tight).unwrap();
        assert!(!r.converged && r.terms_used == 10);
        assert!(r.converged_value().is_err());
    }

    #[test]
    fn integral_examples() {
        let params = p(1, 0.5);
        assert_eq!(integral(&params, &f("exp(t)"), 0.3, 0.3, &cfg()).unwrap().value, 0.0);
        let r = integral(&params, &f("t"), 0.0, 1.0, &cfg()).unwrap();
        assert!((r.value - 2.0 / 3.0).abs() < 1e-12);
        let r = integral(&params, &f("t"), 1.0, 0.0, &cfg()).unwrap();
        assert!((r.value + 2.0 / 3.0).abs() < 1e-12);
    }

    #[test]
    fn ftc_examples() {
        let d = DiffConfig::default();
        assert!(ftc_residual(&p(3, 0.5), &f("t^2"), -0.5, 0.9, &cfg(), &d).unwrap() <= 1e-9);
        assert!(ftc_residual(&p(3, 0.5), &f("2.5"), -0.5, 0.9, &cfg(), &d).unwrap() <= 1e-15);
        assert!(ftc_residual(&p(1, 0.5), &f("t^3"), 0.0, 1.0, &cfg(), &d).unwrap() <= 1e-9);
    }

    #[test]
    fn short_integral_examples() {
        let s = short_integral_identity(&p(1, 0.5), &f("1"), 1.0, &cfg()).unwrap();
        assert!((s.lhs + 0.5).abs() < 1e-11 && s.rhs == -0.5);
        let s = short_integral_identity(&p(1, 0.5), &f("0"), 0.4, &cfg()).unwrap();
        assert_eq!((s.lhs, s.rhs), (0.0, 0.0));
        let s = short_integral_identity(&p(3, 0.5), &f("t^2"), 0.9, &cfg()).unwrap();
        assert!((s.lhs - s.rhs).abs() <= 1e-10);
    }

    #[test]
    fn by_parts_examples() {
        let d = DiffConfig::default();
        assert!(by_parts_residual(&p(1, 0.5), &f("1"), &f("t"), 0.0, 1.0, &cfg(), &d).unwrap() <= 1e-10);
        assert!(by_parts_residual(&p(1, 0.5), &f("t"), &f("t"), 0.0, 1.0, &cfg(), &d).unwrap() <= 1e-9);
        assert!(by_parts_residual(&p(3, 0.5), &f("t^2"), &f("t+1"), -0.5, 0.5, &cfg(), &d).unwrap() <= 1e-9);
    }

    #[test]
    fn monotonicity_examples() {
        let params = p(1, 0.5);
        let g = f("1 + t^2");
        assert!(monotonicity_check(&params, &g, &g, 1.0, 0.125, 1.0, &cfg()).unwrap());

        // ±1 alternating along the orbit of 1
        let alt = f("cos(3.141592653589793 * ln(t) / ln(2))");
        let abs_alt = RealFunction::native(|t: f64| Ok((std::f64::consts::PI * t.log2()).cos().abs()));
        assert!(monotonicity_check(&params, &alt, &abs_alt, 1.0, 0.03125, 1.0, &cfg()).unwrap());

        let s = 0.8;
        let a = params.h_iterate(s, 2);
        assert!(monotonicity_check(&params, &f("0.5"), &f("1"), s, a, s, &cfg()).unwrap());
        let r = integral(&params, &f("1"), a, s, &cfg()).unwrap();
        assert!((r.value - (s - a)).abs() < 1e-11);

        // negative seeds: orbit increases to 0
        assert!(monotonicity_check(&params, &f("t"), &f("abs(t)"), -1.0, -1.0, -0.25, &cfg()).unwrap());

        assert!(monotonicity_check(&params, &f("1"), &f("1"), 1.0, 0.3, 1.0, &cfg()).is_err());
        assert!(monotonicity_check(&params, &f("2"), &f("1"), 1.0, 0.5, 1.0, &cfg()).is_err());
    }

    #[test]
    fn counterexample_values() {
        assert!(counterexample_function(1.0).is_err());
        let q: f64 = 0.5;
        let c = counterexample_function(q).unwrap();
        for m in 1..=5 {
            let qm = q.powi(m);
            assert_eq!(c.eval(qm).unwrap(), -1.0);
            assert!((c.eval((1.0 + q) / 2.0 * qm).unwrap() - 1.0).abs() < 1e-12);
        }
        assert_eq!(c.eval(0.0).unwrap(), 0.0);
        assert_eq!(c.eval(1.0).unwrap(), -1.0);
        assert!(c.eval(1.5).is_err() && c.eval(-0.1).is_err());

        let params = p(1, q);
        let lo = (1.0 + q) / 2.0;
        let v = integral(&params, &c, lo, 1.0, &cfg()).unwrap().value;
        let abs_c = RealFunction::native(move |t| Ok(c.eval(t)?.abs()));
        let w = integral(&params, &abs_c, lo, 1.0, &cfg()).unwrap().value;
        assert!((v + 1.75).abs() < 1e-9 && (w - 0.25).abs() < 1e-9);
        assert!(v.abs() > w);
    }
}
