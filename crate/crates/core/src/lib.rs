//! Numerical n,q-power quantum calculus.
//!
//! Everything revolves around the map `h(t) = q t^n` (odd `n`, `0 < q < 1`)
//! and the difference operator
//!
//! ```text
//! D f(t) = (f(q t^n) - f(t)) / (q t^n - t)
//! ```
//!
//! with its inverse, the series integral, and variational problems posed on
//! the lattice of forward orbits. The library is generic over [`Scalar`]
//! (`f32` and `f64`); the aliases at the crate root fix `f64`.
//!
//! ```
//! use powerq::{d_nq, DiffConfig, Params, RealFunction};
//!
//! let params = Params::new(1, 0.5).unwrap();
//! let f = RealFunction::parse("t^2").unwrap();
//! assert_eq!(d_nq(&params, &f, 2.0, &DiffConfig::default()).unwrap(), 3.0);
//! ```

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod calculus;
pub mod check;
pub mod error;
pub mod expr;
pub mod integration;
pub mod lattice;
pub mod scalar;
pub mod series;
pub mod variational;

pub use calculus::{
    apply_op_string, chain_rule_witness, d_nq, d_nq_m, derivative_fn, leibniz_lhs_rhs, leibniz_strings, rule_residuals,
    DiffConfig, LeibnizSides, OpString, OpSymbol, RuleResiduals,
};
pub use error::{Error, Result};
pub use expr::{parse, Bindings, Expr, Lagrangian, RealFunction, Var};
pub use integration::{
    antiderivative_at, by_parts_residual, counterexample_function, ftc_residual, integral, monotonicity_check,
    series_terms, short_integral_identity, IdentitySides, IntegralResult, SeriesConfig,
};
pub use lattice::{bracket_k, LatticeInterval, LimitClass, QuantumParams};
pub use scalar::Scalar;
pub use variational::{
    el_residual, example1_extremal, example1_problem, example4_lagrangian, example4_solution, example4_transform,
    first_variation, first_variation_fd, functional_value, leitmann_residual, norm_e, random_variations, Bivariate,
    Example4Solution, Extremal, Variation, VariationalProblem,
};

pub type Params = QuantumParams<f64>;
pub type Interval = LatticeInterval<f64>;
pub type Function = RealFunction<f64>;
pub type Integrand = Lagrangian<f64>;
pub type Problem = VariationalProblem<f64>;
pub type DiffSettings = DiffConfig<f64>;
pub type SeriesSettings = SeriesConfig<f64>;
