use super::{Expr, Func, Var};
use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Values for the free variables of an expression.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct Bindings<T> {
    pub t: Option<T>,
    pub u: Option<T>,
    pub v: Option<T>,
}

impl<T: Scalar> Bindings<T> {
    pub fn t(t: T) -> Self {
        Self { t: Some(t), u: None, v: None }
    }

    pub fn tuv(t: T, u: T, v: T) -> Self {
        Self { t: Some(t), u: Some(u), v: Some(v) }
    }

    fn get(&self, var: Var) -> Result<T> {
        match var {
            Var::T => self.t,
            Var::U => self.u,
            Var::V => self.v,
        }
        .ok_or(Error::UnboundVariable(var.name()))
    }
}

fn fault<T: Scalar>(what: &str, at: T) -> Error {
    Error::EvalFault { what: what.to_string(), location: at.to_f64().unwrap_or(f64::NAN) }
}

/// `base ^ exponent`; a negative base needs an integer-valued exponent.
pub(crate) fn checked_pow<T: Scalar>(base: T, exponent: T) -> Result<T> {
    let integral = exponent.fract().is_zero() && exponent.abs() <= T::of(f64::from(i32::MAX));
    if base.is_zero() && exponent < T::zero() {
        return Err(fault("zero raised to a negative power", base));
    }
    if integral {
        let k = exponent.to_i32().expect("integral exponent fits i32");
        return Ok(base.powi(k));
    }
    if base < T::zero() {
        return Err(fault("negative base with non-integer exponent", base));
    }
    Ok(base.powf(exponent))
}

impl<T: Scalar> Expr<T> {
    /// Evaluate with IEEE semantics for overflow; genuine domain violations
    /// (log of a nonpositive number, division by zero, …) are reported.
    pub fn eval(&self, b: &Bindings<T>) -> Result<T> {
        Ok(match self {
            Expr::Lit(x) => *x,
            Expr::Var(v) => b.get(*v)?,
            Expr::Neg(a) => -a.eval(b)?,
            Expr::Add(x, y) => x.eval(b)? + y.eval(b)?,
            Expr::Sub(x, y) => x.eval(b)? - y.eval(b)?,
            Expr::Mul(x, y) => x.eval(b)? * y.eval(b)?,
            Expr::Div(x, y) => {
                let num = x.eval(b)?;
                let den = y.eval(b)?;
                if den.is_zero() {
                    return Err(fault("division by zero", den));
                }
                num / den
            }
            Expr::Pow(x, y) => checked_pow(x.eval(b)?, y.eval(b)?)?,
            Expr::Call(f, a) => {
                let x = a.eval(b)?;
                match f {
                    Func::Sin => x.sin(),
                    Func::Cos => x.cos(),
                    Func::Exp => x.exp(),
                    Func::Abs => x.abs(),
                    Func::Ln => {
                        if x <= T::zero() {
                            return Err(fault("ln of a nonpositive number", x));
                        }
                        x.ln()
                    }
                    Func::Sqrt => {
                        if x < T::zero() {
                            return Err(fault("sqrt of a negative number", x));
                        }
                        x.sqrt()
                    }
                }
            }
        })
    }
}

#[cfg(test)]
mod tests {
    use super::super::parse;
    use super::*;

    fn ev(text: &str, b: Bindings<f64>) -> Result<f64> {
        parse::<f64>(text)?.eval(&b)
    }

    #[test]
    fn spec_examples() {
        assert_eq!(ev("t^2", Bindings::t(3.0)).unwrap(), 9.0);
        assert_eq!(ev("u+0.5*v^2", Bindings::tuv(0.0, 1.0, 2.0)).unwrap(), 3.0);
        assert!(matches!(ev("ln(t)", Bindings::t(-1.0)), Err(Error::EvalFault { .. })));
    }

    #[test]
    fn faults() {
        assert!(matches!(ev("t", Bindings::default()), Err(Error::UnboundVariable('t'))));
        assert!(matches!(ev("u", Bindings::t(1.0)), Err(Error::UnboundVariable('u'))));
        assert!(ev("0^(-1)", Bindings::default()).is_err());
        assert!(ev("(-2)^0.5", Bindings::default()).is_err());
        assert!(ev("sqrt(-1)", Bindings::default()).is_err());
        assert!(ev("1/t", Bindings::t(0.0)).is_err());
        assert!(ev("ln(0)", Bindings::default()).is_err());
    }

    #[test]
    fn odd_powers_of_negative_bases() {
        assert_eq!(ev("t^3", Bindings::t(-2.0)).unwrap(), -8.0);
        assert_eq!(ev("0.5*t^3", Bindings::t(-2.0)).unwrap(), -4.0);
        assert_eq!(ev("t^(-1)", Bindings::t(-4.0)).unwrap(), -0.25);
        assert!((ev("t^0.5", Bindings::t(4.0)).unwrap() - 2.0).abs() < 1e-15);
    }

    #[test]
    fn overflow_follows_ieee() {
        assert_eq!(ev("exp(t)", Bindings::t(1e4)).unwrap(), f64::INFINITY);
    }
}
