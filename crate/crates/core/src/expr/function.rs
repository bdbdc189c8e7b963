use std::fmt;
use std::sync::Arc;

use super::{parse, Bindings, Expr, Var};
use crate::error::{Error, Result};
use crate::lattice::QuantumParams;
use crate::scalar::Scalar;

type Native1<T> = Arc<dyn Fn(T) -> Result<T> + Send + Sync>;
type Native3<T> = Arc<dyn Fn(T, T, T) -> Result<T> + Send + Sync>;

#[derive(Clone)]
enum Repr<T> {
    Symbolic { body: Expr<T>, derivative: Option<Expr<T>> },
    Native { f: Native1<T>, derivative: Option<Native1<T>> },
}

/// A real function of `t`, either an expression or a native closure, with
/// an optional classical derivative (needed on the singular set).
///
/// Cloning is cheap: closures are reference counted.
#[derive(Clone)]
pub struct RealFunction<T> {
    repr: Repr<T>,
}

impl<T: Scalar> fmt::Debug for RealFunction<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.repr {
            Repr::Symbolic { body, .. } => write!(f, "RealFunction({body})"),
            Repr::Native { derivative, .. } => {
                write!(f, "RealFunction(<native>, derivative: {})", derivative.is_some())
            }
        }
    }
}

impl<T: Scalar> RealFunction<T> {
    /// Wrap an expression in `t`. The symbolic derivative is computed up
    /// front; expressions using `abs` get none and fall back to central
    /// differences.
    pub fn from_expr(body: Expr<T>) -> Result<Self> {
        if let Some(&v) = body.free_vars().iter().find(|&&v| v != Var::T) {
            return Err(Error::UnboundVariable(v.name()));
        }
        let derivative = body.diff(Var::T).ok();
        Ok(Self { repr: Repr::Symbolic { body, derivative } })
    }

    pub fn parse(text: &str) -> Result<Self> {
        Self::from_expr(parse(text)?)
    }

    pub fn native(f: impl Fn(T) -> Result<T> + Send + Sync + 'static) -> Self {
        Self { repr: Repr::Native { f: Arc::new(f), derivative: None } }
    }

    pub fn native_with_derivative(
        f: impl Fn(T) -> Result<T> + Send + Sync + 'static,
        df: impl Fn(T) -> Result<T> + Send + Sync + 'static,
    ) -> Self {
        Self { repr: Repr::Native { f: Arc::new(f), derivative: Some(Arc::new(df)) } }
    }

    pub fn constant(c: T) -> Self {
        Self::from_expr(Expr::Lit(c)).expect("constant has no free variables")
    }

    pub fn identity() -> Self {
        Self::from_expr(Expr::Var(Var::T)).expect("t is allowed")
    }

    pub fn expr(&self) -> Option<&Expr<T>> {
        match &self.repr {
            Repr::Symbolic { body, .. } => Some(body),
            Repr::Native { .. } => None,
        }
    }

    pub fn derivative_expr(&self) -> Option<&Expr<T>> {
        match &self.repr {
            Repr::Symbolic { derivative, .. } => derivative.as_ref(),
            Repr::Native { .. } => None,
        }
    }

    pub fn has_classical_derivative(&self) -> bool {
        match &self.repr {
            Repr::Symbolic { derivative, .. } => derivative.is_some(),
            Repr::Native { derivative, .. } => derivative.is_some(),
        }
    }

    pub fn eval(&self, t: T) -> Result<T> {
        match &self.repr {
            Repr::Symbolic { body, .. } => body.eval(&Bindings::t(t)),
            Repr::Native { f, .. } => f(t),
        }
    }

    /// The supplied classical derivative at `t`, if any.
    pub fn known_derivative(&self, t: T) -> Option<Result<T>> {
        match &self.repr {
            Repr::Symbolic { derivative, .. } => derivative.as_ref().map(|d| d.eval(&Bindings::t(t))),
            Repr::Native { derivative, .. } => derivative.as_ref().map(|d| d(t)),
        }
    }

    /// Classical derivative: the known one when present, otherwise a central
    /// difference with step `step_scale * max(1, |t|)`.
    pub fn classical_derivative(&self, t: T, step_scale: T) -> Result<T> {
        if let Some(d) = self.known_derivative(t) {
            return d;
        }
        let h = step_scale * T::one().max(t.abs());
        Ok((self.eval(t + h)? - self.eval(t - h)?) / (T::two() * h))
    }

    /// The symbolic `m`-th classical derivative, when the body is an
    /// expression free of `abs`.
    pub fn nth_derivative_expr(&self, m: usize) -> Option<Expr<T>> {
        let mut e = self.expr()?.clone();
        for _ in 0..m {
            e = e.diff(Var::T).ok()?;
        }
        Some(e)
    }

    fn combine(
        &self,
        other: &Self,
        sym: fn(Expr<T>, Expr<T>) -> Expr<T>,
        val: fn(T, T) -> Result<T>,
        der: fn(T, T, T, T) -> T,
    ) -> Self {
        if let (Some(a), Some(b)) = (self.expr(), other.expr()) {
            return Self::from_expr(sym(a.clone(), b.clone())).expect("operands use t only");
        }
        let (f, g) = (self.clone(), other.clone());
        let value = move |t: T| val(f.eval(t)?, g.eval(t)?);
        if self.has_classical_derivative() && other.has_classical_derivative() {
            let (f, g) = (self.clone(), other.clone());
            let derivative = move |t: T| {
                let fd = f.known_derivative(t).expect("checked")?;
                let gd = g.known_derivative(t).expect("checked")?;
                Ok(der(f.eval(t)?, fd, g.eval(t)?, gd))
            };
            Self::native_with_derivative(value, derivative)
        } else {
            Self::native(value)
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        self.combine(other, Expr::add, |a, b| Ok(a + b), |_, fd, _, gd| fd + gd)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.combine(other, Expr::sub, |a, b| Ok(a - b), |_, fd, _, gd| fd - gd)
    }

    pub fn mul(&self, other: &Self) -> Self {
        self.combine(other, Expr::mul, |a, b| Ok(a * b), |f, fd, g, gd| fd * g + f * gd)
    }

    pub fn div(&self, other: &Self) -> Self {
        self.combine(
            other,
            Expr::div,
            |a, b| {
                if b.is_zero() {
                    Err(Error::EvalFault { what: "division by zero".into(), location: 0.0 })
                } else {
                    Ok(a / b)
                }
            },
            |f, fd, g, gd| (fd * g - f * gd) / (g * g),
        )
    }

    pub fn scale(&self, c: T) -> Self {
        Self::constant(c).mul(self)
    }

    /// `self ∘ inner`.
    pub fn compose(&self, inner: &Self) -> Self {
        if let (Some(outer), Some(inner)) = (self.expr(), inner.expr()) {
            return Self::from_expr(outer.subst(Var::T, inner)).expect("operands use t only");
        }
        let (f, g) = (self.clone(), inner.clone());
        let value = move |t: T| f.eval(g.eval(t)?);
        if self.has_classical_derivative() && inner.has_classical_derivative() {
            let (f, g) = (self.clone(), inner.clone());
            Self::native_with_derivative(value, move |t: T| {
                let gt = g.eval(t)?;
                Ok(f.known_derivative(gt).expect("checked")? * g.known_derivative(t).expect("checked")?)
            })
        } else {
            Self::native(value)
        }
    }

    /// `self ∘ h`, i.e. `t ↦ f(q t^n)`.
    pub fn precompose_h(&self, params: &QuantumParams<T>) -> Self {
        let h = Expr::mul(
            Expr::Lit(params.q()),
            Expr::pow(Expr::Var(Var::T), Expr::Lit(T::of(f64::from(params.n())))),
        );
        self.compose(&Self::from_expr(h).expect("t only"))
    }
}

#[derive(Clone)]
enum LagrangianRepr<T> {
    Symbolic { body: Expr<T>, d2: Expr<T>, d3: Expr<T> },
    Native { f: Native3<T>, d2: Native3<T>, d3: Native3<T> },
}

/// An integrand `f(t, u, v)` together with `∂f/∂u` and `∂f/∂v`.
///
/// In a functional, `u` receives `y(q t^n)` and `v` receives `D_{n,q} y(t)`.
#[derive(Clone)]
pub struct Lagrangian<T> {
    repr: LagrangianRepr<T>,
}

impl<T: Scalar> fmt::Debug for Lagrangian<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.repr {
            LagrangianRepr::Symbolic { body, .. } => write!(f, "Lagrangian({body})"),
            LagrangianRepr::Native { .. } => write!(f, "Lagrangian(<native>)"),
        }
    }
}

impl<T: Scalar> Lagrangian<T> {
    /// The partials are derived symbolically; `abs` in `u` or `v` is
    /// rejected since the partials must exist everywhere.
    pub fn from_expr(body: Expr<T>) -> Result<Self> {
        let d2 = body.diff(Var::U)?;
        let d3 = body.diff(Var::V)?;
        Ok(Self { repr: LagrangianRepr::Symbolic { body, d2, d3 } })
    }

    pub fn parse(text: &str) -> Result<Self> {
        Self::from_expr(parse(text)?)
    }

    pub fn native(
        f: impl Fn(T, T, T) -> Result<T> + Send + Sync + 'static,
        d2: impl Fn(T, T, T) -> Result<T> + Send + Sync + 'static,
        d3: impl Fn(T, T, T) -> Result<T> + Send + Sync + 'static,
    ) -> Self {
        Self { repr: LagrangianRepr::Native { f: Arc::new(f), d2: Arc::new(d2), d3: Arc::new(d3) } }
    }

    pub fn expr(&self) -> Option<&Expr<T>> {
        match &self.repr {
            LagrangianRepr::Symbolic { body, .. } => Some(body),
            LagrangianRepr::Native { .. } => None,
        }
    }

    pub fn value(&self, t: T, u: T, v: T) -> Result<T> {
        match &self.repr {
            LagrangianRepr::Symbolic { body, .. } => body.eval(&Bindings::tuv(t, u, v)),
            LagrangianRepr::Native { f, .. } => f(t, u, v),
        }
    }

    /// `∂f/∂u`.
    pub fn d2(&self, t: T, u: T, v: T) -> Result<T> {
        match &self.repr {
            LagrangianRepr::Symbolic { d2, .. } => d2.eval(&Bindings::tuv(t, u, v)),
            LagrangianRepr::Native { d2, .. } => d2(t, u, v),
        }
    }

    /// `∂f/∂v`.
    pub fn d3(&self, t: T, u: T, v: T) -> Result<T> {
        match &self.repr {
            LagrangianRepr::Symbolic { d3, .. } => d3.eval(&Bindings::tuv(t, u, v)),
            LagrangianRepr::Native { d3, .. } => d3(t, u, v),
        }
    }
}
