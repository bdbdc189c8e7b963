//! The n,q-power difference operator
//!
//! ```text
//! D f(t) = (f(q t^n) - f(t)) / (q t^n - t)    t ∉ S
//! D f(t) = f'(t)                              t ∈ S
//! ```
//!
//! together with its iterates, the algebraic rules, the Leibniz formula over
//! operator strings, and a witness for the mean-value chain rule.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::expr::{Bindings, RealFunction};
use crate::lattice::QuantumParams;
use crate::scalar::Scalar;

/// Floating-point realisation of the two-branch definition.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiffConfig<T> {
    /// Membership tolerance for the singular set, scaled by `max(1, θ)`.
    pub singular_atol: T,
    /// Below this `|q t^n - t|` the classical derivative is used instead of
    /// the quotient.
    pub degenerate_gap: T,
    /// Central-difference step is `fd_step_scale * max(1, |t|)`.
    pub fd_step_scale: T,
}

impl<T: Scalar> Default for DiffConfig<T> {
    fn default() -> Self {
        Self {
            singular_atol: T::of(1e-12).max(T::of(8.0) * T::epsilon()),
            degenerate_gap: T::default_degenerate_gap(),
            fd_step_scale: T::default_fd_step_scale(),
        }
    }
}

impl<T: Scalar> DiffConfig<T> {
    pub fn new(singular_atol: T, degenerate_gap: T, fd_step_scale: T) -> Result<Self> {
        let cfg = Self { singular_atol, degenerate_gap, fd_step_scale };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        let positive = |x: T| x > T::zero() && x.is_finite();
        if !(positive(self.singular_atol) && positive(self.degenerate_gap) && positive(self.fd_step_scale)) {
            return Err(Error::InvalidParams("difference configuration fields must be positive".into()));
        }
        if self.degenerate_gap < T::of(10.0) * T::epsilon() {
            return Err(Error::InvalidParams("degenerate_gap must be at least 10 machine epsilon".into()));
        }
        Ok(())
    }

    fn atol(&self, params: &QuantumParams<T>) -> T {
        let theta = params.theta();
        if theta.is_finite() {
            self.singular_atol * theta.max(T::one())
        } else {
            self.singular_atol
        }
    }

    /// True when the raw quotient is used at `t`.
    pub fn uses_quotient(&self, params: &QuantumParams<T>, t: T) -> bool {
        !params.is_singular(t, self.atol(params)) && (params.h(t) - t).abs() >= self.degenerate_gap
    }

    pub fn is_singular(&self, params: &QuantumParams<T>, t: T) -> bool {
        params.is_singular(t, self.atol(params))
    }
}

fn finite<T: Scalar>(x: T, what: &str, t: T) -> Result<T> {
    if x.is_finite() {
        Ok(x)
    } else {
        Err(Error::Numeric { what: what.to_string(), location: t.to_f64().unwrap_or(f64::NAN) })
    }
}

/// `D_{n,q} f(t)`.
pub fn d_nq<T: Scalar>(params: &QuantumParams<T>, f: &RealFunction<T>, t: T, cfg: &DiffConfig<T>) -> Result<T> {
    if cfg.uses_quotient(params, t) {
        let ht = params.h(t);
        let q = (f.eval(ht)? - f.eval(t)?) / (ht - t);
        finite(q, "difference quotient", t)
    } else {
        finite(f.classical_derivative(t, cfg.fd_step_scale)?, "classical derivative", t)
    }
}

/// `D_{n,q}` as a function, `t ↦ D f(t)`.
pub fn derivative_fn<T: Scalar>(
    params: &QuantumParams<T>,
    f: &RealFunction<T>,
    cfg: &DiffConfig<T>,
) -> RealFunction<T> {
    let (params, f, cfg) = (*params, f.clone(), *cfg);
    RealFunction::native(move |t| d_nq(&params, &f, t, &cfg))
}

/// `D^m_{n,q} f(t)`, memoised over the orbit `t, h(t), …, h^m(t)`.
pub fn d_nq_m<T: Scalar>(
    params: &QuantumParams<T>,
    f: &RealFunction<T>,
    t: T,
    m: usize,
    cfg: &DiffConfig<T>,
) -> Result<T> {
    if m == 0 {
        return f.eval(t);
    }
    let mut orbit = Vec::with_capacity(m + 1);
    let mut x = t;
    for _ in 0..=m {
        orbit.push(x);
        x = params.h(x);
    }
    let mut memo: Vec<Vec<Option<T>>> = vec![vec![None; m + 1]; m + 1];
    OrbitTable { params, f, cfg, orbit: &orbit }.value(m, 0, &mut memo)
}

struct OrbitTable<'a, T> {
    params: &'a QuantumParams<T>,
    f: &'a RealFunction<T>,
    cfg: &'a DiffConfig<T>,
    orbit: &'a [T],
}

impl<T: Scalar> OrbitTable<'_, T> {
    /// `D^order f` at `orbit[j]`.
    fn value(&self, order: usize, j: usize, memo: &mut [Vec<Option<T>>]) -> Result<T> {
        if let Some(v) = memo[order][j] {
            return Ok(v);
        }
        let x = self.orbit[j];
        let v = if order == 0 {
            self.f.eval(x)?
        } else if self.cfg.uses_quotient(self.params, x) {
            let upper = self.value(order - 1, j + 1, memo)?;
            let lower = self.value(order - 1, j, memo)?;
            finite((upper - lower) / (self.orbit[j + 1] - x), "difference quotient", x)?
        } else if order == 1 {
            finite(self.f.classical_derivative(x, self.cfg.fd_step_scale)?, "classical derivative", x)?
        } else {
            // classical derivative of D^{order-1} f by central differences
            let h = self.cfg.fd_step_scale * T::one().max(x.abs());
            let up = d_nq_m(self.params, self.f, x + h, order - 1, self.cfg)?;
            let down = d_nq_m(self.params, self.f, x - h, order - 1, self.cfg)?;
            finite((up - down) / (T::two() * h), "classical derivative", x)?
        };
        memo[order][j] = Some(v);
        Ok(v)
    }
}

/// The identity used for the scalar-multiple residual.
pub const RULE_SCALAR: f64 = -1.75;

/// `|LHS - RHS|` for each algebraic rule of the operator at one point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RuleResiduals<T> {
    /// `D(f+g) = Df + Dg`
    pub sum: T,
    /// `D(c f) = c Df` with `c = RULE_SCALAR`
    pub scalar: T,
    /// `D(fg) = Df g + f(qt^n) Dg`
    pub product1: T,
    /// `D(fg) = f Dg + Df g(qt^n)`
    pub product2: T,
    /// `D(f/g) = (Df g - f Dg) / (g g(qt^n))`; absent when `g g(qt^n) = 0`
    pub quotient: Option<T>,
    /// Magnitude of the quantities in the sum, scalar and product rules.
    pub scale: T,
    /// Magnitude of the quantities in the quotient rule.
    pub quotient_scale: Option<T>,
}

impl<T: Scalar> RuleResiduals<T> {
    pub fn max(&self) -> T {
        [self.sum, self.scalar, self.product1, self.product2, self.quotient.unwrap_or_else(T::zero)]
            .into_iter()
            .fold(T::zero(), T::max)
    }
}

pub fn rule_residuals<T: Scalar>(
    params: &QuantumParams<T>,
    f: &RealFunction<T>,
    g: &RealFunction<T>,
    t: T,
    cfg: &DiffConfig<T>,
) -> Result<RuleResiduals<T>> {
    let ht = params.h(t);
    let (ft, gt) = (f.eval(t)?, g.eval(t)?);
    let (fh, gh) = (f.eval(ht)?, g.eval(ht)?);
    let df = d_nq(params, f, t, cfg)?;
    let dg = d_nq(params, g, t, cfg)?;
    let c = T::of(RULE_SCALAR);

    let d_sum = d_nq(params, &f.add(g), t, cfg)?;
    let d_scaled = d_nq(params, &f.scale(c), t, cfg)?;
    let d_prod = d_nq(params, &f.mul(g), t, cfg)?;

    let rhs1 = df * gt + fh * dg;
    let rhs2 = ft * dg + df * gh;

    let (quotient, quotient_scale) = if (gt * gh).is_zero() {
        (None, None)
    } else {
        let d_quot = d_nq(params, &f.div(g), t, cfg)?;
        let denom = gt * gh;
        let rhs = (df * gt - ft * dg) / denom;
        let terms = [(df * gt / denom).abs(), (ft * dg / denom).abs()];
        let scale = [T::one(), d_quot.abs(), rhs.abs(), (ft / gt).abs(), (fh / gh).abs(), terms[0], terms[1]]
            .into_iter()
            .fold(T::zero(), T::max);
        (Some((d_quot - rhs).abs()), Some(scale))
    };

    let scale = [T::one(), ft.abs(), gt.abs(), fh.abs(), gh.abs(), df.abs(), dg.abs(), d_prod.abs()]
        .into_iter()
        .fold(T::zero(), T::max);

    Ok(RuleResiduals {
        sum: (d_sum - (df + dg)).abs(),
        scalar: (d_scaled - c * df).abs(),
        product1: (d_prod - rhs1).abs(),
        product2: (d_prod - rhs2).abs(),
        quotient,
        scale,
        quotient_scale,
    })
}

/// One letter of an operator string: `D` applies the difference operator,
/// `H` precomposes with `h`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum OpSymbol {
    D,
    H,
}

/// A word over `{D, H}`, applied right to left.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct OpString(pub Vec<OpSymbol>);

impl OpString {
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Number of `H` letters.
    pub fn h_count(&self) -> usize {
        self.0.iter().filter(|&&s| s == OpSymbol::H).count()
    }
}

impl fmt::Display for OpString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for s in &self.0 {
            f.write_str(match s {
                OpSymbol::D => "D",
                OpSymbol::H => "H",
            })?;
        }
        Ok(())
    }
}

impl FromStr for OpString {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        s.chars()
            .map(|c| match c {
                'D' => Ok(OpSymbol::D),
                'H' => Ok(OpSymbol::H),
                other => Err(Error::Domain(format!("operator strings use D and H, found {other:?}"))),
            })
            .collect::<Result<Vec<_>>>()
            .map(OpString)
    }
}

/// All strings of length `m` with exactly `k` letters `H`, in lexicographic
/// order (`D < H`).
pub fn leibniz_strings(m: usize, k: usize) -> Result<Vec<OpString>> {
    if k > m {
        return Err(Error::Domain(format!("need 0 <= k <= m, got k = {k}, m = {m}")));
    }
    fn go(prefix: &mut Vec<OpSymbol>, d_left: usize, h_left: usize, out: &mut Vec<OpString>) {
        if d_left == 0 && h_left == 0 {
            out.push(OpString(prefix.clone()));
            return;
        }
        if d_left > 0 {
            prefix.push(OpSymbol::D);
            go(prefix, d_left - 1, h_left, out);
            prefix.pop();
        }
        if h_left > 0 {
            prefix.push(OpSymbol::H);
            go(prefix, d_left, h_left - 1, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    go(&mut Vec::with_capacity(m), m - k, k, &mut out);
    Ok(out)
}

/// The function obtained by applying `s` to `f`, rightmost letter first.
pub fn op_string_fn<T: Scalar>(
    params: &QuantumParams<T>,
    s: &OpString,
    f: &RealFunction<T>,
    cfg: &DiffConfig<T>,
) -> RealFunction<T> {
    s.0.iter().rev().fold(f.clone(), |u, sym| match sym {
        OpSymbol::H => u.precompose_h(params),
        OpSymbol::D => derivative_fn(params, &u, cfg),
    })
}

/// `(L f)(t)` for the operator string `L = s`.
pub fn apply_op_string<T: Scalar>(
    params: &QuantumParams<T>,
    s: &OpString,
    f: &RealFunction<T>,
    t: T,
    cfg: &DiffConfig<T>,
) -> Result<T> {
    op_string_fn(params, s, f, cfg).eval(t)
}

fn binomial(m: usize, k: usize) -> u64 {
    (0..k).fold(1u64, |acc, i| acc * (m - i) as u64 / (i as u64 + 1))
}

/// Both sides of the Leibniz formula for `D^m (f g)(t)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LeibnizSides<T> {
    pub lhs: T,
    pub rhs: T,
    /// True when the binomial form on the singular set was used.
    pub singular: bool,
    /// Largest magnitude among the summands, for relative comparisons.
    pub scale: T,
}

/// Off the singular set: `D^m(fg) = Σ_k (Σ_{L ∈ S^m_k} L f) D^k g`.
///
/// On the singular set the binomial form is evaluated with classical
/// derivatives of every order, taken symbolically, and compared against
/// the classical `(fg)^{(m)}`; both `f` and `g` must then be expressions.
pub fn leibniz_lhs_rhs<T: Scalar>(
    params: &QuantumParams<T>,
    f: &RealFunction<T>,
    g: &RealFunction<T>,
    t: T,
    m: usize,
    cfg: &DiffConfig<T>,
) -> Result<LeibnizSides<T>> {
    if m == 0 {
        return Err(Error::Domain("Leibniz formula needs m >= 1".into()));
    }
    if cfg.is_singular(params, t) {
        return leibniz_on_singular(f, g, t, m);
    }

    let lhs = d_nq_m(params, &f.mul(g), t, m, cfg)?;
    let mut rhs = T::zero();
    let mut scale = T::one().max(lhs.abs());
    for k in 0..=m {
        let mut coeff = T::zero();
        for s in leibniz_strings(m, k)? {
            coeff = coeff + apply_op_string(params, &s, f, t, cfg)?;
        }
        let term = coeff * d_nq_m(params, g, t, k, cfg)?;
        scale = scale.max(term.abs());
        rhs = rhs + term;
    }
    Ok(LeibnizSides { lhs, rhs, singular: false, scale })
}

fn leibniz_on_singular<T: Scalar>(f: &RealFunction<T>, g: &RealFunction<T>, t: T, m: usize) -> Result<LeibnizSides<T>> {
    let symbolic = || Error::Domain("on the singular set the Leibniz check needs symbolic f and g".into());
    let at = Bindings::t(t);
    let lhs = f.mul(g).nth_derivative_expr(m).ok_or_else(symbolic)?.eval(&at)?;
    let mut rhs = T::zero();
    let mut scale = T::one().max(lhs.abs());
    for k in 0..=m {
        let fk = f.nth_derivative_expr(m - k).ok_or_else(symbolic)?.eval(&at)?;
        let gk = g.nth_derivative_expr(k).ok_or_else(symbolic)?.eval(&at)?;
        let term = T::of(binomial(m, k) as f64) * fk * gk;
        scale = scale.max(term.abs());
        rhs = rhs + term;
    }
    Ok(LeibnizSides { lhs, rhs, singular: true, scale })
}

/// Number of uniform subdivisions scanned for a sign change before
/// bisection.
pub const WITNESS_SUBDIVISIONS: usize = 64;

/// A point `c` between `q t^n` and `t` with `f'(g(c)) D g(t) = D (f∘g)(t)`.
pub fn chain_rule_witness<T: Scalar>(
    params: &QuantumParams<T>,
    outer: &RealFunction<T>,
    inner: &RealFunction<T>,
    t: T,
    tol: T,
    cfg: &DiffConfig<T>,
) -> Result<T> {
    if cfg.is_singular(params, t) {
        return Err(Error::Domain(format!("t = {t} is in the singular set; the classical chain rule applies")));
    }
    let ht = params.h(t);
    let (lo, hi) = if ht < t { (ht, t) } else { (t, ht) };
    let dg = d_nq(params, inner, t, cfg)?;
    let dfg = d_nq(params, &outer.compose(inner), t, cfg)?;
    if dg.is_zero() && dfg.is_zero() {
        return Ok(T::half() * (lo + hi));
    }

    let phi = |c: T| -> Result<T> { Ok(outer.classical_derivative(inner.eval(c)?, cfg.fd_step_scale)? * dg - dfg) };
    let not_found = || Error::WitnessNotLocated {
        lo: lo.to_f64().unwrap_or(f64::NAN),
        hi: hi.to_f64().unwrap_or(f64::NAN),
    };

    let steps = T::of(WITNESS_SUBDIVISIONS as f64);
    let node = |i: usize| lo + (hi - lo) * T::of(i as f64) / steps;
    let mut prev_c = node(0);
    let mut prev = phi(prev_c)?;
    if prev.abs() <= tol {
        return Ok(prev_c);
    }
    for i in 1..=WITNESS_SUBDIVISIONS {
        let c = node(i);
        let val = phi(c)?;
        if val.abs() <= tol {
            return Ok(c);
        }
        if prev.signum() != val.signum() {
            let (mut a, mut b, mut fa) = (prev_c, c, prev);
            for _ in 0..200 {
                let mid = T::half() * (a + b);
                let fm = phi(mid)?;
                if fm.abs() <= tol {
                    return Ok(mid);
                }
                if mid <= a || mid >= b {
                    break;
                }
                if fa.signum() == fm.signum() {
                    a = mid;
                    fa = fm;
                } else {
                    b = mid;
                }
            }
            return Err(not_found());
        }
        prev_c = c;
        prev = val;
    }
    Err(not_found())
}
