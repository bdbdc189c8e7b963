//! Geometry of the map `h(t) = q t^n`: iteration, inversion, horizon, the
//! singular set, and the truncated n,q-lattice `[a,b]_{n,q}`.
//!
//! For odd `n` the map is an increasing bijection of the real line whose
//! fixed points are `0` and, when `n > 1`, `±θ` with `θ = q^{1/(1-n)}`.
//! Forward orbits started inside `(-θ, θ)` accumulate at `0`; outside they
//! run off to `±∞`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Hard cap on orbit length when generating a lattice.
pub const MAX_LATTICE_ITERATIONS: usize = 10_000;

/// The pair `(n, q)` governing every operator.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuantumParams<T> {
    n: u32,
    q: T,
}

impl<T: Scalar> QuantumParams<T> {
    /// `n` must be odd and positive, `q` strictly inside `(0, 1)`.
    pub fn new(n: u32, q: T) -> Result<Self> {
        if n == 0 || n.is_multiple_of(2) {
            return Err(Error::InvalidParams(format!("n must be an odd positive integer, got {n}")));
        }
        if n > i32::MAX as u32 {
            return Err(Error::InvalidParams(format!("n = {n} is too large")));
        }
        if !(q > T::zero() && q < T::one()) {
            return Err(Error::InvalidParams(format!(
                "q must lie strictly inside (0, 1), got {}",
                q
            )));
        }
        Ok(Self { n, q })
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn q(&self) -> T {
        self.q
    }

    /// The horizon θ: `+∞` for `n = 1`, else `q^{1/(1-n)}`.
    pub fn theta(&self) -> T {
        if self.n == 1 {
            T::infinity()
        } else {
            let exponent = T::one() / (T::one() - T::of(f64::from(self.n)));
            self.q.powf(exponent)
        }
    }

    /// Fixed points of `h`: `{0}` for `n = 1`, else `{-θ, 0, θ}`.
    pub fn singular_set(&self) -> Vec<T> {
        if self.n == 1 {
            vec![T::zero()]
        } else {
            let theta = self.theta();
            vec![-theta, T::zero(), theta]
        }
    }

    /// Default membership tolerance for the singular set: `1e-12 max(1, θ)`.
    pub fn default_singular_atol(&self) -> T {
        let floor = T::of(1e-12).max(T::of(8.0) * T::epsilon());
        let theta = self.theta();
        if theta.is_finite() {
            floor * theta.max(T::one())
        } else {
            floor
        }
    }

    /// `|t - s| <= atol` for some `s` in the singular set.
    pub fn is_singular(&self, t: T, atol: T) -> bool {
        self.singular_set().into_iter().any(|s| (t - s).abs() <= atol)
    }

    /// `t` strictly inside `(-θ, θ)`.
    pub fn inside_horizon(&self, t: T) -> bool {
        t.abs() < self.theta()
    }

    pub(crate) fn require_inside(&self, t: T) -> Result<()> {
        if self.inside_horizon(t) {
            Ok(())
        } else {
            Err(Error::Horizon {
                point: t.to_f64().unwrap_or(f64::NAN),
                theta: self.theta().to_f64().unwrap_or(f64::INFINITY),
            })
        }
    }

    /// `h(t) = q t^n`.
    #[inline]
    pub fn h(&self, t: T) -> T {
        self.q * t.powi(self.n as i32)
    }

    /// `h^{-1}(t) = sign(t) (|t| / q)^{1/n}`.
    #[inline]
    pub fn h_inverse(&self, t: T) -> T {
        let r = t.abs() / self.q;
        let root = match self.n {
            1 => r,
            3 => r.cbrt(),
            n => r.powf(T::one() / T::of(f64::from(n))),
        };
        root.copysign(t)
    }

    /// `h^k(t)` by repeated composition; negative `k` iterates `h^{-1}`.
    pub fn h_iterate(&self, t: T, k: i64) -> T {
        let mut x = t;
        if k >= 0 {
            for _ in 0..k {
                x = self.h(x);
            }
        } else {
            for _ in 0..k.unsigned_abs() {
                x = self.h_inverse(x);
            }
        }
        x
    }

    /// Which limit `h^k(t)` approaches as `k → ∞`.
    pub fn classify_limit(&self, t: T, atol: T) -> LimitClass {
        if self.is_singular(t, atol) {
            return LimitClass::Fixed;
        }
        let theta = self.theta();
        if t > theta {
            LimitClass::DivergesPos
        } else if t < -theta {
            LimitClass::DivergesNeg
        } else {
            LimitClass::ToZero
        }
    }

    /// Forward orbit `t, h(t), h²(t), …` while `|x| >= tol`, capped at
    /// `max_len` points.
    pub fn orbit(&self, t: T, tol: T, max_len: usize) -> Vec<T> {
        let mut out = Vec::new();
        let mut x = t;
        while out.len() < max_len && x.abs() >= tol && x.is_finite() {
            out.push(x);
            let next = self.h(x);
            if next == x {
                break;
            }
            x = next;
        }
        out
    }
}

/// `[k]_n = Σ_{i<k} n^i`, computed exactly; `0` for `k = 0`.
pub fn bracket_k(k: u32, n: u32) -> Result<u64> {
    let n = u64::from(n);
    let mut acc: u64 = 0;
    for _ in 0..k {
        acc = acc
            .checked_mul(n)
            .and_then(|v| v.checked_add(1))
            .ok_or_else(|| Error::Overflow(format!("[{k}]_{n}")))?;
    }
    Ok(acc)
}

/// Limiting behaviour of a forward orbit.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum LimitClass {
    DivergesPos,
    ToZero,
    DivergesNeg,
    Fixed,
}

/// The truncated n,q-interval `{h^k(a)} ∪ {h^k(b)} ∪ {0}`.
#[derive(Debug, Clone, PartialEq)]
pub struct LatticeInterval<T> {
    params: QuantumParams<T>,
    a: T,
    b: T,
    points: Vec<T>,
    truncation_tol: T,
}

impl<T: Scalar> LatticeInterval<T> {
    pub fn build(params: QuantumParams<T>, a: T, b: T, truncation_tol: T) -> Result<Self> {
        if !(a < b) {
            return Err(Error::Domain(format!("interval requires a < b, got a = {a}, b = {b}")));
        }
        params.require_inside(a)?;
        params.require_inside(b)?;
        if !(truncation_tol > T::zero()) {
            return Err(Error::Domain("truncation tolerance must be positive".into()));
        }

        let mut pts = params.orbit(a, truncation_tol, MAX_LATTICE_ITERATIONS);
        pts.extend(params.orbit(b, truncation_tol, MAX_LATTICE_ITERATIONS));
        pts.push(T::zero());
        pts.sort_by(|x, y| x.partial_cmp(y).expect("finite lattice points"));

        let merge = T::of(1e-14);
        let mut points: Vec<T> = Vec::with_capacity(pts.len());
        for p in pts {
            match points.last() {
                Some(&last) if (p - last).abs() <= merge * T::one().max(p.abs()) => {}
                _ => points.push(p),
            }
        }

        Ok(Self { params, a, b, points, truncation_tol })
    }

    pub fn params(&self) -> &QuantumParams<T> {
        &self.params
    }

    pub fn a(&self) -> T {
        self.a
    }

    pub fn b(&self) -> T {
        self.b
    }

    pub fn truncation_tol(&self) -> T {
        self.truncation_tol
    }

    /// Sorted ascending, duplicates merged.
    pub fn points(&self) -> &[T] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}
