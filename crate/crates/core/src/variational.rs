//! Variational problems `L[y] = ∫_a^b f(t, y(q t^n), D y(t))` on the
//! n,q-lattice: functional values, first variations, Euler–Lagrange
//! residuals, closed-form extremals and Leitmann's direct method.

use std::fmt;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::calculus::{d_nq, DiffConfig};
use crate::error::{Error, Result};
use crate::expr::{Bindings, Expr, Lagrangian, RealFunction, Var};
use crate::integration::{antiderivative_at, integral, IntegralResult, SeriesConfig};
use crate::lattice::{LatticeInterval, QuantumParams};
use crate::scalar::Scalar;
use crate::series::KahanSum;

/// Tolerance on the boundary values of an admissible trajectory.
pub const BOUNDARY_TOL: f64 = 1e-10;

/// Tolerance on `p(a)` and `p(b)` for an admissible variation.
pub const VARIATION_TOL: f64 = 1e-12;

/// Default step for the central-difference first variation.
pub const DEFAULT_EPS_STEP: f64 = 1e-5;

/// Minimise `∫_a^b f(t, y(q t^n), D y(t))` subject to `y(a) = alpha`,
/// `y(b) = beta`.
#[derive(Debug, Clone)]
pub struct VariationalProblem<T: Scalar> {
    pub params: QuantumParams<T>,
    pub lagrangian: Lagrangian<T>,
    pub a: T,
    pub b: T,
    pub alpha: T,
    pub beta: T,
    pub series_cfg: SeriesConfig<T>,
    pub diff_cfg: DiffConfig<T>,
}

impl<T: Scalar> VariationalProblem<T> {
    pub fn new(params: QuantumParams<T>, lagrangian: Lagrangian<T>, a: T, b: T, alpha: T, beta: T) -> Result<Self> {
        if !(a < b) {
            return Err(Error::Domain(format!("need a < b, got a = {a}, b = {b}")));
        }
        params.require_inside(a)?;
        params.require_inside(b)?;
        Ok(Self {
            params,
            lagrangian,
            a,
            b,
            alpha,
            beta,
            series_cfg: SeriesConfig::default(),
            diff_cfg: DiffConfig::default(),
        })
    }

    pub fn with_series_cfg(mut self, cfg: SeriesConfig<T>) -> Self {
        self.series_cfg = cfg;
        self
    }

    pub fn with_diff_cfg(mut self, cfg: DiffConfig<T>) -> Self {
        self.diff_cfg = cfg;
        self
    }

    /// Whether `y` meets both boundary conditions.
    pub fn is_admissible(&self, y: &RealFunction<T>) -> Result<bool> {
        let tol = T::of(BOUNDARY_TOL);
        Ok((y.eval(self.a)? - self.alpha).abs() <= tol && (y.eval(self.b)? - self.beta).abs() <= tol)
    }

    /// `(y(q t^n), D y(t))` at `t`.
    fn arguments(&self, y: &RealFunction<T>, t: T) -> Result<(T, T)> {
        Ok((y.eval(self.params.h(t))?, d_nq(&self.params, y, t, &self.diff_cfg)?))
    }

    /// `t ↦ f(t, y(q t^n), D y(t))`.
    pub fn integrand(&self, y: &RealFunction<T>) -> RealFunction<T> {
        let prob = self.clone();
        let y = y.clone();
        RealFunction::native(move |t| {
            let (u, v) = prob.arguments(&y, t)?;
            prob.lagrangian.value(t, u, v)
        })
    }
}

/// An admissible variation: `p(a) = p(b) = 0`.
#[derive(Debug, Clone)]
pub struct Variation<T: Scalar> {
    p: RealFunction<T>,
}

impl<T: Scalar> Variation<T> {
    pub fn new(p: RealFunction<T>, a: T, b: T) -> Result<Self> {
        let tol = T::of(VARIATION_TOL);
        let (pa, pb) = (p.eval(a)?, p.eval(b)?);
        if pa.abs() > tol || pb.abs() > tol {
            return Err(Error::Domain(format!("variation must vanish at the endpoints, got p(a) = {pa}, p(b) = {pb}")));
        }
        Ok(Self { p })
    }

    pub fn zero() -> Self {
        Self { p: RealFunction::constant(T::zero()) }
    }

    pub fn p(&self) -> &RealFunction<T> {
        &self.p
    }

    /// `y + eps p`.
    pub fn perturb(&self, y: &RealFunction<T>, eps: T) -> RealFunction<T> {
        y.add(&self.p.scale(eps))
    }
}

/// `p(t) = (t - a)(b - t) r(t)` with `r` a polynomial of degree at most 3
/// whose coefficients are uniform in `[-1, 1]`, drawn from a seeded
/// generator.
pub fn random_variations<T: Scalar>(a: T, b: T, count: usize, seed: u64) -> Result<Vec<Variation<T>>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let t = || Expr::Var(Var::T);
    (0..count)
        .map(|_| {
            let degree = rng.gen_range(0..=3);
            let mut r = Expr::Lit(T::zero());
            for k in 0..=degree {
                let c = T::of(rng.gen_range(-1.0..=1.0));
                let monomial = Expr::pow(t(), Expr::Lit(T::of(k as f64)));
                r = Expr::add(r, Expr::mul(Expr::Lit(c), monomial));
            }
            let bump = Expr::mul(Expr::sub(t(), Expr::Lit(a)), Expr::sub(Expr::Lit(b), t()));
            Variation::new(RealFunction::from_expr(Expr::mul(bump, r))?, a, b)
        })
        .collect()
}

/// `L[y]`.
pub fn functional_value<T: Scalar>(prob: &VariationalProblem<T>, y: &RealFunction<T>) -> Result<IntegralResult<T>> {
    integral(&prob.params, &prob.integrand(y), prob.a, prob.b, &prob.series_cfg)
}

/// `δL[y, p] = ∫_a^b ∂₂f(·) p(q t^n) + ∂₃f(·) D p(t)`.
pub fn first_variation<T: Scalar>(prob: &VariationalProblem<T>, y: &RealFunction<T>, var: &Variation<T>) -> Result<T> {
    let (pr, y, p) = (prob.clone(), y.clone(), var.p.clone());
    let integrand = RealFunction::native(move |t| {
        let (u, v) = pr.arguments(&y, t)?;
        let (ph, dp) = pr.arguments(&p, t)?;
        Ok(pr.lagrangian.d2(t, u, v)? * ph + pr.lagrangian.d3(t, u, v)? * dp)
    });
    integral(&prob.params, &integrand, prob.a, prob.b, &prob.series_cfg)?.converged_value()
}

/// `(L[y + εp] - L[y - εp]) / 2ε`.
pub fn first_variation_fd<T: Scalar>(
    prob: &VariationalProblem<T>,
    y: &RealFunction<T>,
    var: &Variation<T>,
    eps_step: T,
) -> Result<T> {
    if !(eps_step > T::zero()) {
        return Err(Error::Domain(format!("eps_step must be positive, got {eps_step}")));
    }
    let plus = functional_value(prob, &var.perturb(y, eps_step))?.converged_value()?;
    let minus = functional_value(prob, &var.perturb(y, -eps_step))?.converged_value()?;
    Ok((plus - minus) / (T::two() * eps_step))
}

/// `D[s ↦ ∂₃f(s, y(q s^n), D y(s))](t) - ∂₂f(t, y(q t^n), D y(t))`.
pub fn el_residual<T: Scalar>(prob: &VariationalProblem<T>, y: &RealFunction<T>, t: T) -> Result<T> {
    let (pr, yc) = (prob.clone(), y.clone());
    let momentum = RealFunction::native(move |s| {
        let (u, v) = pr.arguments(&yc, s)?;
        pr.lagrangian.d3(s, u, v)
    });
    let (u, v) = prob.arguments(y, t)?;
    Ok(d_nq(&prob.params, &momentum, t, &prob.diff_cfg)? - prob.lagrangian.d2(t, u, v)?)
}

/// The Lagrangian `u + v²/2` of the model problem on `[0, 1]`.
pub fn example1_lagrangian<T: Scalar>() -> Lagrangian<T> {
    Lagrangian::parse("u + 0.5*v^2").expect("fixed Lagrangian parses")
}

/// The model problem `min ∫_0^1 y(q t^n) + (D y)²/2` with `y(0) = 0`,
/// `y(1) = beta`.
pub fn example1_problem<T: Scalar>(params: QuantumParams<T>, beta: T) -> Result<VariationalProblem<T>> {
    VariationalProblem::new(params, example1_lagrangian(), T::zero(), T::one(), T::zero(), beta)
}

/// The extremal of the model problem together with its constant `c`.
#[derive(Debug, Clone)]
pub struct Extremal<T: Scalar> {
    pub y: RealFunction<T>,
    pub c: T,
    pub converged: bool,
}

/// `y(t) = Σ_k (h^k(t) - h^{k+1}(t)) (h^k(t) + c)`, the n,q-antiderivative of
/// `t + c`, with `c` fixed by `y(1) = beta`.
pub fn example1_extremal<T: Scalar>(params: QuantumParams<T>, beta: T, cfg: &SeriesConfig<T>) -> Result<Extremal<T>> {
    cfg.validate()?;
    params.require_inside(T::one())?;

    let mut delta_sum = KahanSum::new();
    let mut weighted = KahanSum::new();
    let mut converged = false;
    let mut small = 0;
    let mut p = T::one();
    for k in 0..cfg.max_terms {
        let next = params.h(p);
        let delta = next - p;
        delta_sum.add(delta);
        weighted.add(delta * p);
        let tiny = |x: T, total: T| x.abs() <= cfg.abs_tol + cfg.rel_tol * total.abs();
        if tiny(delta, delta_sum.value()) && tiny(delta * p, weighted.value()) {
            small += 1;
        } else {
            small = 0;
        }
        if next.is_zero() || (k + 1 >= cfg.min_terms && small >= cfg.consecutive_small) {
            converged = true;
            break;
        }
        p = next;
    }
    let c = -(beta + weighted.value()) / delta_sum.value();

    let series = *cfg;
    let velocity = RealFunction::identity().add(&RealFunction::constant(c));
    let y = RealFunction::native(move |t| antiderivative_at(&params, &velocity, t, &series)?.converged_value());
    Ok(Extremal { y, c, converged })
}

/// `‖y‖₁ = max |y| + max |D y|` over the points of `interval`.
pub fn norm_e<T: Scalar>(
    params: &QuantumParams<T>,
    y: &RealFunction<T>,
    interval: &LatticeInterval<T>,
    diff_cfg: &DiffConfig<T>,
) -> Result<T> {
    let mut sup_y = T::zero();
    let mut sup_dy = T::zero();
    for &t in interval.points() {
        sup_y = sup_y.max(y.eval(t)?.abs());
        sup_dy = sup_dy.max(d_nq(params, y, t, diff_cfg)?.abs());
    }
    Ok(sup_y + sup_dy)
}

type Native2<T> = Arc<dyn Fn(T, T) -> Result<T> + Send + Sync>;

#[derive(Clone)]
enum BivariateRepr<T> {
    Symbolic(Expr<T>),
    Native(Native2<T>),
}

/// A real function of `(t, y)`, such as a change of variables `y = z(t, ȳ)`
/// or Leitmann's `G(t, ȳ)`. As an expression, `y` is written `u`.
#[derive(Clone)]
pub struct Bivariate<T> {
    repr: BivariateRepr<T>,
}

impl<T: Scalar> fmt::Debug for Bivariate<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.repr {
            BivariateRepr::Symbolic(e) => write!(f, "Bivariate({e})"),
            BivariateRepr::Native(_) => write!(f, "Bivariate(<native>)"),
        }
    }
}

impl<T: Scalar> Bivariate<T> {
    pub fn from_expr(body: Expr<T>) -> Result<Self> {
        if body.mentions(Var::V) {
            return Err(Error::UnboundVariable('v'));
        }
        Ok(Self { repr: BivariateRepr::Symbolic(body) })
    }

    pub fn parse(text: &str) -> Result<Self> {
        Self::from_expr(crate::expr::parse(text)?)
    }

    pub fn native(f: impl Fn(T, T) -> Result<T> + Send + Sync + 'static) -> Self {
        Self { repr: BivariateRepr::Native(Arc::new(f)) }
    }

    /// `(t, y) ↦ y`.
    pub fn identity() -> Self {
        Self { repr: BivariateRepr::Symbolic(Expr::Var(Var::U)) }
    }

    pub fn eval(&self, t: T, y: T) -> Result<T> {
        match &self.repr {
            BivariateRepr::Symbolic(e) => e.eval(&Bindings { t: Some(t), u: Some(y), v: None }),
            BivariateRepr::Native(f) => f(t, y),
        }
    }

    /// `s ↦ self(s, ybar(s))`; symbolic when both parts are.
    pub fn along(&self, ybar: &RealFunction<T>) -> RealFunction<T> {
        if let (BivariateRepr::Symbolic(e), Some(body)) = (&self.repr, ybar.expr()) {
            if let Ok(f) = RealFunction::from_expr(e.subst(Var::U, body)) {
                return f;
            }
        }
        let (this, ybar) = (self.clone(), ybar.clone());
        RealFunction::native(move |s| this.eval(s, ybar.eval(s)?))
    }
}

/// `|f(t, y(qt^n), Dy(t)) - f̄(t, ȳ(qt^n), Dȳ(t)) - D[s ↦ G(s, ȳ(s))](t)|`
/// with `y = z(·, ȳ)`.
#[allow(clippy::too_many_arguments)]
pub fn leitmann_residual<T: Scalar>(
    params: &QuantumParams<T>,
    f: &Lagrangian<T>,
    fbar: &Lagrangian<T>,
    g_fn: &Bivariate<T>,
    z: &Bivariate<T>,
    ybar: &RealFunction<T>,
    t: T,
    diff_cfg: &DiffConfig<T>,
) -> Result<T> {
    let y = z.along(ybar);
    let ht = params.h(t);
    let lhs = f.value(t, y.eval(ht)?, d_nq(params, &y, t, diff_cfg)?)?
        - fbar.value(t, ybar.eval(ht)?, d_nq(params, ybar, t, diff_cfg)?)?;
    let rhs = d_nq(params, &g_fn.along(ybar), t, diff_cfg)?;
    Ok((lhs - rhs).abs())
}

/// The minimiser `y = (A t + C) / g` of `∫_a^b [D(y g)]²` with
/// `y(a) = alpha`, `y(b) = beta`.
#[derive(Debug, Clone)]
pub struct Example4Solution<T: Scalar> {
    pub a_coef: T,
    pub c_coef: T,
    pub y: RealFunction<T>,
}

/// Requires `g` nonzero at every point of `[a,b]_{n,q}` truncated at
/// `truncation_tol`.
#[allow(clippy::too_many_arguments)]
pub fn example4_solution<T: Scalar>(
    params: QuantumParams<T>,
    a: T,
    b: T,
    alpha: T,
    beta: T,
    g: &RealFunction<T>,
    truncation_tol: T,
) -> Result<Example4Solution<T>> {
    let lattice = LatticeInterval::build(params, a, b, truncation_tol)?;
    for &t in lattice.points() {
        if g.eval(t)?.is_zero() {
            return Err(Error::Domain(format!("g vanishes at the lattice point {t}")));
        }
    }
    let (ga, gb) = (g.eval(a)?, g.eval(b)?);
    let a_coef = (alpha * ga - beta * gb) / (a - b);
    let c_coef = (a * beta * gb - b * alpha * ga) / (a - b);
    let line = RealFunction::identity().scale(a_coef).add(&RealFunction::constant(c_coef));
    Ok(Example4Solution { a_coef, c_coef, y: line.div(g) })
}

/// The Lagrangian `[D(y g)]² = (v g(t) + u D g(t))²`.
pub fn example4_lagrangian<T: Scalar>(params: QuantumParams<T>, g: &RealFunction<T>, diff_cfg: DiffConfig<T>) -> Lagrangian<T> {
    let inner = {
        let g = g.clone();
        move |t: T, u: T, v: T| -> Result<(T, T, T)> {
            let (gt, dg) = (g.eval(t)?, d_nq(&params, &g, t, &diff_cfg)?);
            Ok((v * gt + u * dg, gt, dg))
        }
    };
    let (i1, i2, i3) = (inner.clone(), inner.clone(), inner);
    Lagrangian::native(
        move |t, u, v| {
            let (w, _, _) = i1(t, u, v)?;
            Ok(w * w)
        },
        move |t, u, v| {
            let (w, _, dg) = i2(t, u, v)?;
            Ok(T::two() * w * dg)
        },
        move |t, u, v| {
            let (w, gt, _) = i3(t, u, v)?;
            Ok(T::two() * w * gt)
        },
    )
}

/// The change of variables `y = ȳ + (A t + B)/g` and the matching
/// `G(t, ȳ) = A (2 ȳ g(t) + A t + B)`, for which
/// `[D(y g)]² - [D(ȳ g)]² = D G(t, ȳ(t))`.
pub fn example4_transform<T: Scalar>(g: &RealFunction<T>, a_coef: T, b_coef: T) -> (Bivariate<T>, Bivariate<T>) {
    if let Some(ge) = g.expr() {
        let t = Expr::Var(Var::T);
        let u = Expr::Var(Var::U);
        let line = Expr::add(Expr::mul(Expr::Lit(a_coef), t), Expr::Lit(b_coef));
        let z = Expr::add(u.clone(), Expr::div(line.clone(), ge.clone()));
        let big_g = Expr::mul(Expr::Lit(a_coef), Expr::add(Expr::mul(Expr::mul(Expr::Lit(T::two()), u), ge.clone()), line));
        return (
            Bivariate::from_expr(z).expect("z uses t and u"),
            Bivariate::from_expr(big_g).expect("G uses t and u"),
        );
    }
    let (g1, g2) = (g.clone(), g.clone());
    let z = Bivariate::native(move |t, ybar| Ok(ybar + (a_coef * t + b_coef) / g1.eval(t)?));
    let big_g = Bivariate::native(move |t, ybar| Ok(a_coef * (T::two() * ybar * g2.eval(t)? + a_coef * t + b_coef)));
    (z, big_g)
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

    fn problem(l: &str) -> VariationalProblem<f64> {
        VariationalProblem::new(p(1, 0.5), Lagrangian::parse(l).unwrap(), 0.0, 1.0, 0.0, 2.0 / 3.0).unwrap()
    }

    #[test]
    fn problem_validation() {
        let l = example1_lagrangian::<f64>();
        assert!(VariationalProblem::new(p(1, 0.5), l.clone(), 1.0, 0.0, 0.0, 0.0).is_err());
        assert!(matches!(
            VariationalProblem::new(p(3, 0.25), l, 0.0, 2.0, 0.0, 0.0),
            Err(Error::Horizon { .. })
        ));
        assert!(Variation::new(f("t"), 0.0, 1.0).is_err());
        assert!(Variation::new(f("t*(1-t)"), 0.0, 1.0).is_ok());
    }

    #[test]
    fn functional_examples() {
        assert_eq!(functional_value(&problem("v^2"), &f("3")).unwrap().value, 0.0);
        let r = functional_value(&problem("1"), &f("t")).unwrap();
        assert!((r.value - 1.0).abs() < 1e-12);

        // y = t²/1.5: y(qt) = q²t²/1.5, Dy = t, integrand (q²/1.5 + 1/2) t², ∫_0^1 t² = 1/(1+q+q²)
        let r = functional_value(&problem("u + 0.5*v^2"), &f("t^2/1.5")).unwrap();
        let expect = (0.25 / 1.5 + 0.5) / 1.75;
        assert!(r.converged && (r.value - expect).abs() < 1e-12, "{}", r.value);
    }

    #[test]
    fn first_variation_examples() {
        let prob = problem("u + 0.5*v^2");
        assert_eq!(first_variation(&prob, &f("t"), &Variation::zero()).unwrap(), 0.0);
        assert_eq!(first_variation_fd(&prob, &f("t"), &Variation::zero(), 1e-5).unwrap(), 0.0);

        let var = Variation::new(f("t*(1-t)"), 0.0, 1.0).unwrap();
        let dv = first_variation(&prob, &f("0"), &var).unwrap();
        let expect = integral(&prob.params, &f("0.5*t*(1-0.5*t)"), 0.0, 1.0, &prob.series_cfg).unwrap().value;
        assert!((dv - expect).abs() < 1e-14);

        // φ is quadratic in ε, so the central difference is exact up to roundoff
        let y = f("sin(t) + t");
        let a = first_variation(&prob, &y, &var).unwrap();
        let b = first_variation_fd(&prob, &y, &var, DEFAULT_EPS_STEP).unwrap();
        assert!((a - b).abs() < 1e-9, "{a} vs {b}");
    }

    #[test]
    fn el_residual_examples() {
        let prob = problem("u + 0.5*v^2");
        assert!(el_residual(&prob, &f("t^2/1.5"), 0.5).unwrap().abs() < 1e-10);
        assert_eq!(el_residual(&problem("t^2"), &f("exp(t)"), 0.5).unwrap(), 0.0);
        let perturbed = f("t^2/1.5 + t*(1-t)");
        assert!(el_residual(&prob, &perturbed, 0.5).unwrap().abs() > 0.1);
    }

    #[test]
    fn extremal_examples() {
        let cfg = SeriesConfig::default();
        for q in [0.5, 0.9] {
            let beta = 1.0 / (1.0 + q);
            let ex = example1_extremal(p(1, q), beta, &cfg).unwrap();
            assert!(ex.converged && ex.c.abs() < 1e-10);
            for t in [1.0, 0.5, q, q * q, 0.1] {
                assert!((ex.y.eval(t).unwrap() - t * t / (1.0 + q)).abs() < 1e-8);
            }
        }
        let ex = example1_extremal(p(3, 0.5), 0.0, &cfg).unwrap();
        assert_eq!(ex.y.eval(0.0).unwrap(), 0.0);
        assert!(ex.y.eval(1.0).unwrap().abs() < 1e-10);
    }

    #[test]
    fn norm_examples() {
        let params = p(1, 0.5);
        let lat = LatticeInterval::build(params, 0.0, 1.0, 1e-3).unwrap();
        let d = DiffConfig::default();
        assert_eq!(norm_e(&params, &f("0"), &lat, &d).unwrap(), 0.0);
        assert_eq!(norm_e(&params, &f("t"), &lat, &d).unwrap(), 2.0);
        assert_eq!(norm_e(&params, &f("-2.5"), &lat, &d).unwrap(), 2.5);
    }

    #[test]
    fn example4_examples() {
        let params = p(1, 0.5);
        let s = example4_solution(params, 0.0, 1.0, 0.0, 1.0, &f("1"), 1e-6).unwrap();
        assert_eq!((s.a_coef, s.c_coef), (1.0, 0.0));
        let s = example4_solution(params, 0.0, 1.0, 2.0, 5.0, &f("1"), 1e-6).unwrap();
        assert_eq!((s.a_coef, s.c_coef), (3.0, 2.0));
        assert_eq!(s.y.eval(0.5).unwrap(), 3.5);
        let s = example4_solution(params, 0.0, 1.0, 1.0, 1.0, &f("1+t^2"), 1e-6).unwrap();
        assert_eq!((s.a_coef, s.c_coef), (1.0, 1.0));
        assert_eq!((s.y.eval(0.0).unwrap(), s.y.eval(1.0).unwrap()), (1.0, 1.0));
        let err = example4_solution(params, 0.0, 1.0, 1.0, 1.0, &f("t - 0.25"), 1e-6).unwrap_err();
        assert!(err.to_string().contains("0.25"));
    }

    #[test]
    fn leitmann_examples() {
        let params = p(1, 0.5);
        let d = DiffConfig::default();
        let l = Lagrangian::parse("t*u + v^2").unwrap();
        let zero = Bivariate::parse("0").unwrap();
        let r = leitmann_residual(&params, &l, &l, &zero, &Bivariate::identity(), &f("sin(t)"), 0.5, &d).unwrap();
        assert_eq!(r, 0.0);

        let shifted = Lagrangian::parse("t*u + v^2 + 2.5").unwrap();
        let slope = Bivariate::parse("2.5*t").unwrap();
        let r = leitmann_residual(&params, &shifted, &l, &slope, &Bivariate::identity(), &f("exp(t)"), 0.7, &d).unwrap();
        assert!(r < 1e-14);

        let g = f("exp(t)");
        let sol = example4_solution(params, 0.0, 1.0, 1.0, 2.0, &g, 1e-6).unwrap();
        let lag = example4_lagrangian(params, &g, d);
        let (z, big_g) = example4_transform(&g, sol.a_coef, sol.c_coef - 1.0);
        let ybar = RealFunction::constant(1.0).div(&g);
        let y = z.along(&ybar);
        for t in LatticeInterval::build(params, 0.0, 1.0, 1e-4).unwrap().points() {
            assert!((y.eval(*t).unwrap() - sol.y.eval(*t).unwrap()).abs() < 1e-14);
            let r = leitmann_residual(&params, &lag, &lag, &big_g, &z, &ybar, *t, &d).unwrap();
            assert!(r <= 1e-9, "{t}: {r}");
        }
    }
}
