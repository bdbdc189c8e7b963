//! A small expression language over the variables `t`, `u`, `v`.
//!
//! Functions `f(t)` and Lagrangians `f(t, u, v)` are written as text, parsed
//! into an [`Expr`], evaluated, and differentiated symbolically. The grammar:
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := factor (('*' | '/') factor)*
//! factor := '-' factor | power
//! power  := atom ('^' factor)?
//! atom   := NUMBER | IDENT | IDENT '(' expr ')' | '(' expr ')'
//! ```

mod diff;
mod eval;
mod function;
mod parse;

use std::fmt;

pub use eval::Bindings;
pub use function::{Lagrangian, RealFunction};
pub use parse::parse;

use crate::scalar::Scalar;

/// A free variable.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Var {
    T,
    U,
    V,
}

impl Var {
    pub fn name(self) -> char {
        match self {
            Var::T => 't',
            Var::U => 'u',
            Var::V => 'v',
        }
    }
}

/// Unary built-in functions.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Func {
    Sin,
    Cos,
    Exp,
    Ln,
    Abs,
    Sqrt,
}

impl Func {
    pub fn name(self) -> &'static str {
        match self {
            Func::Sin => "sin",
            Func::Cos => "cos",
            Func::Exp => "exp",
            Func::Ln => "ln",
            Func::Abs => "abs",
            Func::Sqrt => "sqrt",
        }
    }

    pub(crate) fn from_name(name: &str) -> Option<Self> {
        Some(match name {
            "sin" => Func::Sin,
            "cos" => Func::Cos,
            "exp" => Func::Exp,
            "ln" => Func::Ln,
            "abs" => Func::Abs,
            "sqrt" => Func::Sqrt,
            _ => return None,
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Expr<T> {
    Lit(T),
    Var(Var),
    Neg(Box<Expr<T>>),
    Add(Box<Expr<T>>, Box<Expr<T>>),
    Sub(Box<Expr<T>>, Box<Expr<T>>),
    Mul(Box<Expr<T>>, Box<Expr<T>>),
    Div(Box<Expr<T>>, Box<Expr<T>>),
    Pow(Box<Expr<T>>, Box<Expr<T>>),
    Call(Func, Box<Expr<T>>),
}

impl<T: Scalar> Expr<T> {
    pub fn lit(x: T) -> Self {
        Expr::Lit(x)
    }

    pub fn var(v: Var) -> Self {
        Expr::Var(v)
    }

    /// True if any node mentions `v`.
    pub fn mentions(&self, v: Var) -> bool {
        match self {
            Expr::Lit(_) => false,
            Expr::Var(w) => *w == v,
            Expr::Neg(a) | Expr::Call(_, a) => a.mentions(v),
            Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) | Expr::Div(a, b) | Expr::Pow(a, b) => {
                a.mentions(v) || b.mentions(v)
            }
        }
    }

    /// Free variables in `t, u, v` order.
    pub fn free_vars(&self) -> Vec<Var> {
        [Var::T, Var::U, Var::V].into_iter().filter(|&v| self.mentions(v)).collect()
    }

    pub fn is_constant(&self) -> bool {
        self.free_vars().is_empty()
    }

    /// Replace every occurrence of `v` by `with`.
    pub fn subst(&self, v: Var, with: &Expr<T>) -> Expr<T> {
        let go = |e: &Expr<T>| Box::new(e.subst(v, with));
        match self {
            Expr::Lit(x) => Expr::Lit(*x),
            Expr::Var(w) if *w == v => with.clone(),
            Expr::Var(w) => Expr::Var(*w),
            Expr::Neg(a) => Expr::Neg(go(a)),
            Expr::Add(a, b) => Expr::Add(go(a), go(b)),
            Expr::Sub(a, b) => Expr::Sub(go(a), go(b)),
            Expr::Mul(a, b) => Expr::Mul(go(a), go(b)),
            Expr::Div(a, b) => Expr::Div(go(a), go(b)),
            Expr::Pow(a, b) => Expr::Pow(go(a), go(b)),
            Expr::Call(f, a) => Expr::Call(*f, go(a)),
        }
    }
}

// Constant-folding constructors used by differentiation and combinators.
impl<T: Scalar> Expr<T> {
    fn as_lit(&self) -> Option<T> {
        match self {
            Expr::Lit(x) => Some(*x),
            _ => None,
        }
    }

    fn folded(x: T) -> Option<Self> {
        x.is_finite().then_some(Expr::Lit(x))
    }

    pub(crate) fn add(a: Self, b: Self) -> Self {
        match (a.as_lit(), b.as_lit()) {
            (Some(x), _) if x.is_zero() => b,
            (_, Some(y)) if y.is_zero() => a,
            (Some(x), Some(y)) => Self::folded(x + y).unwrap_or(Expr::Add(Box::new(a), Box::new(b))),
            _ => Expr::Add(Box::new(a), Box::new(b)),
        }
    }

    pub(crate) fn sub(a: Self, b: Self) -> Self {
        match (a.as_lit(), b.as_lit()) {
            (_, Some(y)) if y.is_zero() => a,
            (Some(x), _) if x.is_zero() => Self::neg(b),
            (Some(x), Some(y)) => Self::folded(x - y).unwrap_or(Expr::Sub(Box::new(a), Box::new(b))),
            _ => Expr::Sub(Box::new(a), Box::new(b)),
        }
    }

    pub(crate) fn mul(a: Self, b: Self) -> Self {
        match (a.as_lit(), b.as_lit()) {
            (Some(x), _) | (_, Some(x)) if x.is_zero() => Expr::Lit(T::zero()),
            (Some(x), _) if x.is_one() => b,
            (_, Some(y)) if y.is_one() => a,
            (Some(x), Some(y)) => Self::folded(x * y).unwrap_or(Expr::Mul(Box::new(a), Box::new(b))),
            _ => Expr::Mul(Box::new(a), Box::new(b)),
        }
    }

    pub(crate) fn div(a: Self, b: Self) -> Self {
        match (a.as_lit(), b.as_lit()) {
            (_, Some(y)) if y.is_one() => a,
            (Some(x), Some(y)) if !y.is_zero() => {
                Self::folded(x / y).unwrap_or(Expr::Div(Box::new(a), Box::new(b)))
            }
            (Some(x), _) if x.is_zero() => Expr::Lit(T::zero()),
            _ => Expr::Div(Box::new(a), Box::new(b)),
        }
    }

    pub(crate) fn pow(a: Self, b: Self) -> Self {
        match (a.as_lit(), b.as_lit()) {
            (_, Some(y)) if y.is_one() => a,
            (_, Some(y)) if y.is_zero() => Expr::Lit(T::one()),
            _ => Expr::Pow(Box::new(a), Box::new(b)),
        }
    }

    pub(crate) fn neg(a: Self) -> Self {
        match a {
            Expr::Lit(x) => Expr::Lit(-x),
            Expr::Neg(inner) => *inner,
            other => Expr::Neg(Box::new(other)),
        }
    }

    pub(crate) fn call(f: Func, a: Self) -> Self {
        Expr::Call(f, Box::new(a))
    }
}

/// Canonical, fully parenthesised form; re-parses to the same tree.
impl<T: Scalar> fmt::Display for Expr<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Lit(x) if x.is_sign_negative() => write!(f, "(-{:?})", x.abs()),
            Expr::Lit(x) => write!(f, "{x:?}"),
            Expr::Var(v) => write!(f, "{}", v.name()),
            Expr::Neg(a) => write!(f, "(-{a})"),
            Expr::Add(a, b) => write!(f, "({a} + {b})"),
            Expr::Sub(a, b) => write!(f, "({a} - {b})"),
            Expr::Mul(a, b) => write!(f, "({a} * {b})"),
            Expr::Div(a, b) => write!(f, "({a} / {b})"),
            Expr::Pow(a, b) => write!(f, "({a} ^ {b})"),
            Expr::Call(func, a) => write!(f, "{}({a})", func.name()),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn free_vars_and_subst() {
        let e: Expr<f64> = parse("u + 0.5*v^2").unwrap();
        assert_eq!(e.free_vars(), vec![Var::U, Var::V]);
        let s = e.subst(Var::V, &Expr::Lit(2.0));
        assert_eq!(s.free_vars(), vec![Var::U]);
        assert_eq!(s.eval(&Bindings::tuv(0.0, 1.0, 0.0)).unwrap(), 3.0);
    }

    #[test]
    fn display_round_trips() {
        for text in ["t^2", "-t^2", "2^-t", "sin(t)/(1+t^2)", "u + 0.5*v^2", "1e-7*t"] {
            let e: Expr<f64> = parse(text).unwrap();
            assert_eq!(parse::<f64>(&e.to_string()).unwrap(), e, "{text} -> {e}");
        }
    }

    #[test]
    fn folding() {
        let x = Expr::<f64>::var(Var::T);
        assert_eq!(Expr::mul(Expr::Lit(1.0), x.clone()), x);
        assert_eq!(Expr::add(Expr::Lit(0.0), x.clone()), x);
        assert_eq!(Expr::mul(Expr::Lit(2.0), Expr::Lit(3.0)), Expr::Lit(6.0));
        assert_eq!(Expr::<f64>::div(Expr::Lit(1.0), Expr::Lit(0.0)).to_string(), "(1.0 / 0.0)");
        assert_eq!(Expr::neg(Expr::neg(x.clone())), x);
    }
}
