//! Symbolic classical differentiation. Only constant folding is performed;
//! results are judged by evaluation, not by normal form.

use super::{Expr, Func, Var};
use crate::error::{Error, Result};
use crate::scalar::Scalar;

impl<T: Scalar> Expr<T> {
    /// Exact derivative with respect to `var`.
    ///
    /// `abs` is refused with [`Error::WeaklyDifferentiable`]; use
    /// [`Expr::diff_weak`] to accept `d|a| = sign(a) a'`.
    pub fn diff(&self, var: Var) -> Result<Expr<T>> {
        self.diff_impl(var, false)
    }

    /// Like [`Expr::diff`] but differentiates `abs(a)` as `a / abs(a) * a'`,
    /// which faults at `a = 0`.
    pub fn diff_weak(&self, var: Var) -> Result<Expr<T>> {
        self.diff_impl(var, true)
    }

    fn diff_impl(&self, var: Var, weak: bool) -> Result<Expr<T>> {
        let d = |e: &Expr<T>| e.diff_impl(var, weak);
        Ok(match self {
            Expr::Lit(_) => Expr::Lit(T::zero()),
            Expr::Var(v) => Expr::Lit(if *v == var { T::one() } else { T::zero() }),
            Expr::Neg(a) => Expr::neg(d(a)?),
            Expr::Add(a, b) => Expr::add(d(a)?, d(b)?),
            Expr::Sub(a, b) => Expr::sub(d(a)?, d(b)?),
            Expr::Mul(a, b) => Expr::add(
                Expr::mul(d(a)?, (**b).clone()),
                Expr::mul((**a).clone(), d(b)?),
            ),
            Expr::Div(a, b) => {
                // (a' b - a b') / b^2
                let num = Expr::sub(
                    Expr::mul(d(a)?, (**b).clone()),
                    Expr::mul((**a).clone(), d(b)?),
                );
                Expr::div(num, Expr::pow((**b).clone(), Expr::Lit(T::two())))
            }
            Expr::Pow(a, b) => {
                if !b.mentions(var) {
                    // b a^(b-1) a'
                    let b_minus_1 = Expr::sub((**b).clone(), Expr::Lit(T::one()));
                    Expr::mul(
                        Expr::mul((**b).clone(), Expr::pow((**a).clone(), b_minus_1)),
                        d(a)?,
                    )
                } else if !a.mentions(var) {
                    // a^b ln(a) b'
                    Expr::mul(
                        Expr::mul(self.clone(), Expr::call(Func::Ln, (**a).clone())),
                        d(b)?,
                    )
                } else {
                    // a^b (b' ln a + b a' / a)
                    let inner = Expr::add(
                        Expr::mul(d(b)?, Expr::call(Func::Ln, (**a).clone())),
                        Expr::div(Expr::mul((**b).clone(), d(a)?), (**a).clone()),
                    );
                    Expr::mul(self.clone(), inner)
                }
            }
            Expr::Call(f, a) => {
                let inner = d(a)?;
                let a = (**a).clone();
                let outer = match f {
                    Func::Sin => Expr::call(Func::Cos, a),
                    Func::Cos => Expr::neg(Expr::call(Func::Sin, a)),
                    Func::Exp => Expr::call(Func::Exp, a),
                    Func::Ln => Expr::div(Expr::Lit(T::one()), a),
                    Func::Sqrt => {
                        Expr::div(Expr::Lit(T::one()), Expr::mul(Expr::Lit(T::two()), Expr::call(Func::Sqrt, a)))
                    }
                    Func::Abs if weak => Expr::div(a.clone(), Expr::call(Func::Abs, a)),
                    Func::Abs => return Err(Error::WeaklyDifferentiable(format!("abs({a})"))),
                };
                Expr::mul(outer, inner)
            }
        })
    }
}
