//! Built-in invariant suites over a fixed corpus of functions and a fixed
//! `(n, q)` grid. Each property reports its largest residual; a property
//! passes when that residual is within tolerance and nothing faulted.

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::calculus::{d_nq, d_nq_m, leibniz_lhs_rhs, leibniz_strings, rule_residuals, DiffConfig};
use crate::error::{Error, Result};
use crate::expr::RealFunction;
use crate::integration::{
    antiderivative_at, by_parts_residual, counterexample_function, ftc_residual, integral, monotonicity_check,
    series_terms, short_integral_identity, SeriesConfig,
};
use crate::lattice::{LatticeInterval, QuantumParams};
use crate::variational::{
    el_residual, example1_extremal, example1_problem, example4_lagrangian, example4_solution, example4_transform,
    first_variation, first_variation_fd, functional_value, leitmann_residual, norm_e, random_variations,
    VariationalProblem, DEFAULT_EPS_STEP,
};

/// The `(n, q)` pairs every suite runs over.
pub const GRID: [(u32, f64); 3] = [(1, 0.5), (3, 0.5), (3, 0.9)];

/// Polynomials of degree 0 to 5, `exp`, `sin` and `1/(1+t²)`.
pub const CORPUS: [&str; 9] = [
    "1.5",
    "2*t - 1",
    "t^2 - 0.5*t + 0.25",
    "t^3 - t",
    "0.5*t^4 + t^3 - 2*t",
    "t^5 - 3*t^3 + t",
    "exp(t)",
    "sin(t)",
    "1/(1+t^2)",
];

/// Lattice samples never go below this magnitude (0 itself is added
/// separately where a property covers the singular set).
pub const SAMPLE_FLOOR: f64 = 1e-3;

/// Truncation of `[0, 1]_{n,q}` for the variational checks.
pub const VARIATIONAL_LATTICE_TOL: f64 = 1e-6;

/// Truncation of `[0, 1]_{1,q}` for the Leitmann identity; below about
/// `1e-5` the floating-point difference quotient of an `O(1)` function
/// carries roundoff above the `1e-9` tolerance.
pub const LEITMANN_LATTICE_TOL: f64 = 1e-4;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Suite {
    Rules,
    Leibniz,
    Ftc,
    IntegralProps,
    Counterexample,
    Variational,
    All,
}

impl Suite {
    pub const EACH: [Suite; 6] =
        [Suite::Rules, Suite::Leibniz, Suite::Ftc, Suite::IntegralProps, Suite::Counterexample, Suite::Variational];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Rules => "rules",
            Suite::Leibniz => "leibniz",
            Suite::Ftc => "ftc",
            Suite::IntegralProps => "integral-props",
            Suite::Counterexample => "counterexample",
            Suite::Variational => "variational",
            Suite::All => "all",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Suite::EACH
            .into_iter()
            .chain([Suite::All])
            .find(|suite| suite.name() == s)
            .ok_or_else(|| Error::Domain(format!("unknown suite `{s}`")))
    }
}

#[derive(Debug, Clone, Copy, Default)]
pub struct CheckOptions {
    pub seed: u64,
    /// Replace `f(q t^n)` by `f(t)` in the first product rule, to confirm
    /// that the suite notices.
    pub inject_fault: bool,
}

/// Outcome of one property.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PropertyOutcome {
    pub suite: &'static str,
    pub property: String,
    /// Largest residual, already divided by the property's scale when
    /// `relative` is set.
    pub max_residual: f64,
    pub tolerance: f64,
    pub relative: bool,
    pub samples: usize,
    pub passed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub failure: Option<String>,
}

struct Tally {
    suite: &'static str,
    property: String,
    tol: f64,
    relative: bool,
    max: f64,
    samples: usize,
    failure: Option<String>,
}

impl Tally {
    fn abs(suite: Suite, property: &str, tol: f64) -> Self {
        Self {
            suite: suite.name(),
            property: property.to_string(),
            tol,
            relative: false,
            max: 0.0,
            samples: 0,
            failure: None,
        }
    }

    fn rel(suite: Suite, property: &str, tol: f64) -> Self {
        Self { relative: true, ..Self::abs(suite, property, tol) }
    }

    fn fail(&mut self, msg: String) {
        if self.failure.is_none() {
            self.failure = Some(msg);
        }
    }

    /// Record a residual (already scaled for relative properties).
    fn record(&mut self, value: f64, context: impl FnOnce() -> String) {
        self.samples += 1;
        if value.is_nan() {
            self.max = f64::NAN;
            self.fail(format!("NaN residual at {}", context()));
        } else {
            if !self.max.is_nan() {
                self.max = self.max.max(value);
            }
            if value > self.tol {
                let tol = self.tol;
                self.fail(format!("residual {value:e} > {tol:e} at {}", context()));
            }
        }
    }

    fn record_result(&mut self, value: Result<f64>, context: impl FnOnce() -> String) {
        match value {
            Ok(v) => self.record(v, context),
            Err(e) => {
                self.samples += 1;
                self.fail(format!("{e} at {}", context()));
            }
        }
    }

    fn finish(self) -> PropertyOutcome {
        let passed = self.failure.is_none() && self.max <= self.tol;
        PropertyOutcome {
            suite: self.suite,
            property: self.property,
            max_residual: self.max,
            tolerance: self.tol,
            relative: self.relative,
            samples: self.samples,
            passed,
            failure: self.failure,
        }
    }
}

fn params(n: u32, q: f64) -> QuantumParams<f64> {
    QuantumParams::new(n, q).expect("grid parameters are valid")
}

fn corpus() -> Vec<(&'static str, RealFunction<f64>)> {
    CORPUS.iter().map(|&s| (s, RealFunction::parse(s).expect("corpus parses"))).collect()
}

/// Largest magnitude used for random endpoints and orbit seeds.
pub fn sample_radius(params: &QuantumParams<f64>) -> f64 {
    (0.95 * params.theta()).min(1.0)
}

/// `count` points drawn from forward orbits of seeded random starting
/// points in `[-r, r]`, keeping orbit points with `|x| >= SAMPLE_FLOOR`.
pub fn lattice_sample(params: &QuantumParams<f64>, count: usize, seed: u64) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let r = sample_radius(params);
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let s: f64 = rng.gen_range(-r..=r);
        for x in params.orbit(s, SAMPLE_FLOOR, 64) {
            if out.len() == count {
                break;
            }
            out.push(x);
        }
    }
    out
}

fn singular_points(params: &QuantumParams<f64>) -> Vec<f64> {
    params.singular_set()
}

fn mag(xs: &[f64]) -> f64 {
    xs.iter().fold(1.0_f64, |m, x| m.max(x.abs()))
}

/// Run one suite, or all of them.
pub fn run(suite: Suite, opts: &CheckOptions) -> Vec<PropertyOutcome> {
    match suite {
        Suite::Rules => rules(opts),
        Suite::Leibniz => leibniz(opts),
        Suite::Ftc => ftc(opts),
        Suite::IntegralProps => integral_props(opts),
        Suite::Counterexample => counterexample(opts),
        Suite::Variational => variational(opts),
        Suite::All => Suite::EACH.iter().flat_map(|&s| run(s, opts)).collect(),
    }
}

fn rules(opts: &CheckOptions) -> Vec<PropertyOutcome> {
    let s = Suite::Rules;
    let dc = DiffConfig::default();
    let fns = corpus();
    let mut oracle = Tally::rel(s, "pointwise oracles D t^2 and D 1/t", 1e-11);
    let mut sum = Tally::rel(s, "sum rule", 1e-10);
    let mut scalar = Tally::rel(s, "scalar rule", 1e-10);
    let mut product1 = Tally::rel(s, "product rule, first form", 1e-10);
    let mut product2 = Tally::rel(s, "product rule, second form", 1e-10);
    let mut quotient = Tally::rel(s, "quotient rule", 1e-10);
    let mut linear = Tally::rel(s, "linearity", 1e-11);
    let mut recovery = Tally::rel(s, "f(qt^n) = f(t) + (qt^n - t) Df(t)", 1e-12);
    let mut powers = Tally::rel(s, "D (t+b)^m as a geometric sum", 1e-10);
    let mut jackson = Tally::rel(s, "n = 1 reduces to the Jackson quotient", 1e-13);
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed ^ 0x5255_4c45);

    let square = RealFunction::parse("t^2").expect("parses");
    let reciprocal = RealFunction::parse("1/t").expect("parses");

    for (gi, &(n, q)) in GRID.iter().enumerate() {
        let p = params(n, q);
        let seed = opts.seed.wrapping_add(gi as u64);

        for &t in lattice_sample(&p, 200, seed).iter().chain(singular_points(&p).iter()) {
            let ctx = || format!("n={n} q={q} t={t}");
            let ht = p.h(t);
            let expect = t + ht;
            oracle.record_result(d_nq(&p, &square, t, &dc).map(|v| (v - expect).abs() / expect.abs().max(f64::MIN_POSITIVE)), ctx);
            if t != 0.0 {
                let expect = -1.0 / (q * t.powi(n as i32 + 1));
                oracle.record_result(d_nq(&p, &reciprocal, t, &dc).map(|v| (v - expect).abs() / expect.abs()), ctx);
            }
        }

        let points: Vec<f64> = lattice_sample(&p, 100, seed ^ 0x100).into_iter().chain(singular_points(&p)).collect();
        for (fname, f) in &fns {
            for (gname, g) in &fns {
                for &t in &points {
                    let ctx = || format!("n={n} q={q} f={fname} g={gname} t={t}");
                    match rule_residuals(&p, f, g, t, &dc) {
                        Ok(r) => {
                            sum.record(r.sum / r.scale, ctx);
                            scalar.record(r.scalar / r.scale, ctx);
                            let p1 = if opts.inject_fault { faulty_product(&p, f, g, t, &dc) } else { Ok(r.product1) };
                            product1.record_result(p1.map(|v| v / r.scale), ctx);
                            product2.record(r.product2 / r.scale, ctx);
                            if let (Some(qr), Some(qs)) = (r.quotient, r.quotient_scale) {
                                quotient.record(qr / qs, ctx);
                            }
                        }
                        Err(e) => sum.fail(format!("{e} at {}", ctx())),
                    }
                }
            }
        }

        for (fname, f) in &fns {
            let gname = CORPUS[(CORPUS.iter().position(|c| c == fname).expect("in corpus") + 1) % CORPUS.len()];
            let g = RealFunction::parse(gname).expect("parses");
            for &t in &points {
                let ctx = || format!("n={n} q={q} f={fname} g={gname} t={t}");
                let (alpha, beta): (f64, f64) = (rng.gen_range(-5.0..=5.0), rng.gen_range(-5.0..=5.0));
                let res = (|| {
                    let combo = f.scale(alpha).add(&g.scale(beta));
                    let lhs = d_nq(&p, &combo, t, &dc)?;
                    let (df, dg) = (d_nq(&p, f, t, &dc)?, d_nq(&p, &g, t, &dc)?);
                    Ok((lhs - alpha * df - beta * dg).abs() / mag(&[lhs, alpha * df, beta * dg]))
                })();
                linear.record_result(res, ctx);

                if !dc.is_singular(&p, t) {
                    let res = (|| {
                        let (ft, fh) = (f.eval(t)?, f.eval(p.h(t))?);
                        let rhs = ft + (p.h(t) - t) * d_nq(&p, f, t, &dc)?;
                        Ok((fh - rhs).abs() / mag(&[fh, ft]))
                    })();
                    recovery.record_result(res, ctx);
                }
                if n == 1 && t != 0.0 {
                    let res = (|| {
                        let jq = (f.eval(q * t)? - f.eval(t)?) / ((q - 1.0) * t);
                        let v = d_nq(&p, f, t, &dc)?;
                        Ok((v - jq).abs() / mag(&[jq]))
                    })();
                    jackson.record_result(res, ctx);
                }
            }
        }

        for m in 1..=6 {
            for b in [0.0, 1.0, -0.5] {
                let f = RealFunction::parse(&format!("(t + {b})^{m}")).expect("parses");
                for &t in &points {
                    let ctx = || format!("n={n} q={q} m={m} b={b} t={t}");
                    let ht = p.h(t);
                    let rhs: f64 = (0..m).map(|k| (ht + b).powi(k) * (t + b).powi(m - 1 - k)).sum();
                    powers.record_result(d_nq(&p, &f, t, &dc).map(|v| (v - rhs).abs() / mag(&[rhs])), ctx);
                }
            }
        }
    }

    vec![
        oracle.finish(),
        sum.finish(),
        scalar.finish(),
        product1.finish(),
        product2.finish(),
        quotient.finish(),
        linear.finish(),
        recovery.finish(),
        powers.finish(),
        jackson.finish(),
    ]
}

/// The first product rule with `f(t)` where `f(q t^n)` belongs.
fn faulty_product(
    p: &QuantumParams<f64>,
    f: &RealFunction<f64>,
    g: &RealFunction<f64>,
    t: f64,
    dc: &DiffConfig<f64>,
) -> Result<f64> {
    let lhs = d_nq(p, &f.mul(g), t, dc)?;
    let rhs = d_nq(p, f, t, dc)? * g.eval(t)? + f.eval(t)? * d_nq(p, g, t, dc)?;
    Ok((lhs - rhs).abs())
}

fn binomial(m: usize, k: usize) -> usize {
    (0..k).fold(1, |acc, i| acc * (m - i) / (i + 1))
}

/// Off the singular set, `D^m` divides by `m` successive orbit gaps, so
/// roundoff grows like `eps / |t - h(t)| ... |h^{m-1}(t) - h^m(t)|`. The
/// Leibniz check only uses points whose first `m` images stay at least this
/// far from 0.
pub const LEIBNIZ_ORBIT_FLOOR: f64 = 0.05;

fn resolves_orbit(p: &QuantumParams<f64>, t: f64, m: usize) -> bool {
    (0..m).fold(t, |x, _| p.h(x)).abs() >= LEIBNIZ_ORBIT_FLOOR
}

fn leibniz(opts: &CheckOptions) -> Vec<PropertyOutcome> {
    let s = Suite::Leibniz;
    let dc = DiffConfig::default();
    let fns = corpus();
    let mut counts = Tally::abs(s, "|S^m_k| = C(m, k) for m <= 8", 0.0);
    let mut off = Tally::rel(s, "Leibniz formula off the singular set", 1e-9);
    let mut on = Tally::rel(s, "Leibniz formula at t = 0 (binomial form)", 1e-9);

    for m in 0..=8 {
        for k in 0..=m {
            let got = leibniz_strings(m, k).map(|v| v.len()).unwrap_or(usize::MAX);
            counts.record((got as f64 - binomial(m, k) as f64).abs(), || format!("m={m} k={k}"));
        }
    }

    for (gi, &(n, q)) in GRID.iter().enumerate() {
        let p = params(n, q);
        let pool = lattice_sample(&p, 400, opts.seed.wrapping_add(0x1e1b + gi as u64));
        for (i, (fname, f)) in fns.iter().enumerate() {
            let (gname, g) = &fns[(i + 1) % fns.len()];
            for m in 1..=4 {
                let points = pool.iter().copied().filter(|&t| resolves_orbit(&p, t, m)).take(12);
                for t in points {
                    let ctx = || format!("n={n} q={q} f={fname} g={gname} m={m} t={t}");
                    off.record_result(
                        leibniz_lhs_rhs(&p, f, g, t, m, &dc).map(|r| (r.lhs - r.rhs).abs() / r.scale),
                        ctx,
                    );
                }
                if gi == 0 {
                    let ctx = || format!("f={fname} g={gname} m={m} t=0");
                    on.record_result(leibniz_lhs_rhs(&p, f, g, 0.0, m, &dc).map(|r| (r.lhs - r.rhs).abs() / r.scale), ctx);
                }
            }
        }
    }
    vec![counts.finish(), off.finish(), on.finish()]
}

fn endpoints(rng: &mut ChaCha8Rng, p: &QuantumParams<f64>) -> (f64, f64) {
    let r = sample_radius(p);
    (rng.gen_range(-r..=r), rng.gen_range(-r..=r))
}

fn ftc(opts: &CheckOptions) -> Vec<PropertyOutcome> {
    let s = Suite::Ftc;
    let dc = DiffConfig::default();
    let sc = SeriesConfig::default();
    let fns = corpus();
    let mut fundamental = Tally::abs(s, "fundamental theorem", 1e-8);
    let mut parts = Tally::abs(s, "integration by parts", 1e-9);
    let mut recovery = Tally::abs(s, "D of the antiderivative recovers f", 1e-8);
    let mut short = Tally::abs(s, "integral over [t, qt^n] equals (qt^n - t) f(t)", 1e-10);
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed ^ 0x0046_5443);

    for &(n, q) in &GRID {
        let p = params(n, q);
        let pairs: Vec<(f64, f64)> = (0..50).map(|_| endpoints(&mut rng, &p)).collect();
        for (i, (fname, f)) in fns.iter().enumerate() {
            let (gname, g) = &fns[(i + 1) % fns.len()];
            for &(a, b) in &pairs {
                let ctx = || format!("n={n} q={q} f={fname} g={gname} a={a} b={b}");
                fundamental.record_result(ftc_residual(&p, f, a, b, &sc, &dc), ctx);
                parts.record_result(by_parts_residual(&p, f, g, a, b, &sc, &dc), ctx);
            }
            let antiderivative = {
                let (f, sc) = (f.clone(), sc);
                RealFunction::native(move |t| antiderivative_at(&p, &f, t, &sc)?.converged_value())
            };
            for &t in &lattice_sample(&p, 20, rng.gen()) {
                let ctx = || format!("n={n} q={q} f={fname} t={t}");
                let res = (|| Ok((d_nq(&p, &antiderivative, t, &dc)? - f.eval(t)?).abs()))();
                recovery.record_result(res, ctx);
                let res = short_integral_identity(&p, f, t, &sc).map(|r| (r.lhs - r.rhs).abs());
                short.record_result(res, ctx);
            }
        }
    }
    vec![fundamental.finish(), parts.finish(), recovery.finish(), short.finish()]
}

fn integral_props(opts: &CheckOptions) -> Vec<PropertyOutcome> {
    let s = Suite::IntegralProps;
    let sc = SeriesConfig::default();
    let fns = corpus();
    let mut zero = Tally::rel(s, "integral over [a, a] vanishes", 1e-10);
    let mut homogeneous = Tally::rel(s, "homogeneity", 1e-10);
    let mut antisymmetric = Tally::rel(s, "antisymmetry in the endpoints", 1e-10);
    let mut additive_interval = Tally::rel(s, "additivity over a <= c <= b", 1e-10);
    let mut additive_integrand = Tally::rel(s, "additivity in the integrand", 1e-10);
    let mut jackson_closed = Tally::abs(s, "n = 1: integral of t over [0, 1] is 1/(1+q)", 1e-10);
    let mut jackson_terms = Tally::abs(s, "n = 1: term-by-term agreement with the Jackson series", 1e-12);
    let mut comparison = Tally::abs(s, "|integral f| <= integral g on one orbit", 0.0);
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed ^ 0x4950_5250);

    for &(n, q) in &GRID {
        let p = params(n, q);
        for (i, (fname, f)) in fns.iter().enumerate() {
            let (gname, g) = &fns[(i + 1) % fns.len()];
            for _ in 0..20 {
                let r = sample_radius(&p);
                let mut abc = [rng.gen_range(-r..=r), rng.gen_range(-r..=r), rng.gen_range(-r..=r)];
                abc.sort_by(f64::total_cmp);
                let [a, c, b] = abc;
                let alpha: f64 = rng.gen_range(-5.0..=5.0);
                let ctx = || format!("n={n} q={q} f={fname} g={gname} a={a} c={c} b={b}");
                let res = (|| -> Result<[f64; 5]> {
                    let int = |h: &RealFunction<f64>, x: f64, y: f64| integral(&p, h, x, y, &sc)?.converged_value();
                    let ab = int(f, a, b)?;
                    let scale = mag(&[ab]);
                    let z = int(f, a, a)?.abs() / scale;
                    let hom = (int(&f.scale(alpha), a, b)? - alpha * ab).abs() / mag(&[ab, alpha * ab]);
                    let anti = (int(f, b, a)? + ab).abs() / scale;
                    let (ac, cb) = (int(f, a, c)?, int(f, c, b)?);
                    let add = (ab - ac - cb).abs() / mag(&[ab, ac, cb]);
                    let gab = int(g, a, b)?;
                    let fg = int(&f.add(g), a, b)?;
                    let addf = (fg - ab - gab).abs() / mag(&[fg, ab, gab]);
                    Ok([z, hom, anti, add, addf])
                })();
                match res {
                    Ok([z, hom, anti, add, addf]) => {
                        zero.record(z, ctx);
                        homogeneous.record(hom, ctx);
                        antisymmetric.record(anti, ctx);
                        additive_interval.record(add, ctx);
                        additive_integrand.record(addf, ctx);
                    }
                    Err(e) => zero.fail(format!("{e} at {}", ctx())),
                }
            }
        }

        // monotonicity on single orbits, positive and negative seeds
        let seed = 0.9 * sample_radius(&p);
        for s0 in [seed, -seed] {
            let orbit = p.orbit(s0, 1e-6, 8);
            let (a, b) = if s0 > 0.0 { (orbit[orbit.len() - 1], orbit[0]) } else { (orbit[0], orbit[orbit.len() - 1]) };
            for (fname, f) in &fns {
                let bound = {
                    let f = f.clone();
                    RealFunction::native(move |t| Ok(f.eval(t)?.abs() + 0.5))
                };
                let ctx = || format!("n={n} q={q} f={fname} s={s0}");
                let ok = monotonicity_check(&p, f, &bound, s0, a, b, &sc).map(|ok| if ok { 0.0 } else { 1.0 });
                comparison.record_result(ok, ctx);
            }
        }
    }

    for q in [0.3, 0.5, 0.9] {
        let p = params(1, q);
        let t = RealFunction::parse("t").expect("parses");
        let ctx = || format!("q={q}");
        jackson_closed.record_result(integral(&p, &t, 0.0, 1.0, &sc).map(|r| (r.value - 1.0 / (1.0 + q)).abs()), ctx);
        for (fname, f) in &fns {
            for a in [1.0, 0.7, -0.4] {
                let ctx = || format!("q={q} f={fname} a={a}");
                let res = (|| {
                    let terms = series_terms(&p, f, a, 200)?;
                    let mut worst = 0.0_f64;
                    let (mut ours, mut theirs) = (0.0, 0.0);
                    for (k, term) in terms.iter().enumerate() {
                        let qk = q.powi(k as i32);
                        let jackson = a * (1.0 - q) * qk * f.eval(a * qk)?;
                        ours += term;
                        theirs += jackson;
                        worst = worst.max((term - jackson).abs()).max((ours - theirs).abs());
                    }
                    Ok(worst)
                })();
                jackson_terms.record_result(res, ctx);
            }
        }
    }

    vec![
        zero.finish(),
        homogeneous.finish(),
        antisymmetric.finish(),
        additive_interval.finish(),
        additive_integrand.finish(),
        comparison.finish(),
        jackson_closed.finish(),
        jackson_terms.finish(),
    ]
}

fn counterexample(_opts: &CheckOptions) -> Vec<PropertyOutcome> {
    let s = Suite::Counterexample;
    let sc = SeriesConfig::default();
    let mut signed = Tally::abs(s, "integral of f over [(1+q)/2, 1] is -(3+q)/2", 1e-9);
    let mut absolute = Tally::abs(s, "integral of |f| over [(1+q)/2, 1] is (1-q)/2", 1e-9);
    let mut strict = Tally::abs(s, "|integral f| > integral |f|", 0.0);
    for q in [0.3, 0.5, 0.7] {
        let ctx = || format!("q={q}");
        let res = (|| -> Result<(f64, f64)> {
            let p = params(1, q);
            let f = counterexample_function(q)?;
            let lo = (1.0 + q) / 2.0;
            let v = integral(&p, &f, lo, 1.0, &sc)?.converged_value()?;
            let abs_f = RealFunction::native(move |t| Ok(f.eval(t)?.abs()));
            let w = integral(&p, &abs_f, lo, 1.0, &sc)?.converged_value()?;
            Ok((v, w))
        })();
        match res {
            Ok((v, w)) => {
                signed.record((v + (3.0 + q) / 2.0).abs(), ctx);
                absolute.record((w - (1.0 - q) / 2.0).abs(), ctx);
                strict.record(if v.abs() > w { 0.0 } else { 1.0 }, ctx);
            }
            Err(e) => signed.fail(format!("{e} at {}", ctx())),
        }
    }
    vec![signed.finish(), absolute.finish(), strict.finish()]
}

/// Slack for direct comparisons of functional values.
pub const COMPARISON_SLACK: f64 = 1e-12;

fn variational(opts: &CheckOptions) -> Vec<PropertyOutcome> {
    let s = Suite::Variational;
    let sc = SeriesConfig::default();
    let dc = DiffConfig::default();
    let mut closed_form = Tally::abs(s, "n = 1 extremal equals t^2/(1+q)", 1e-8);
    let mut boundary = Tally::abs(s, "extremal meets y(0) = 0, y(1) = beta", 1e-8);
    let mut euler = Tally::abs(s, "Euler-Lagrange residual of the extremal", 1e-8);
    let mut necessary = Tally::abs(s, "first variation vanishes at the extremal", 1e-6);
    let mut cross = Tally::rel(s, "first variation agrees with the central difference", 1e-6);
    let mut minimal = Tally::abs(s, "extremal beats y + eps p", 0.0);
    let mut l_boundary = Tally::abs(s, "Leitmann minimiser meets the boundary conditions", 0.0);
    let mut l_identity = Tally::abs(s, "Leitmann identity residual", 1e-9);
    let mut l_minimal = Tally::abs(s, "Leitmann minimiser beats perturbed candidates", 0.0);
    let mut norm = Tally::abs(s, "norm homogeneity and triangle inequality", 1e-12);

    for (n, q) in [(1, 0.5), (1, 0.9), (3, 0.5)] {
        let p = params(n, q);
        let beta = 1.0 / (1.0 + q);
        let ctx = || format!("n={n} q={q}");
        let res = (|| -> Result<()> {
            let ex = example1_extremal(p, beta, &sc)?;
            if !ex.converged {
                return Err(Error::NonConvergence { terms: sc.max_terms });
            }
            let prob = example1_problem(p, beta)?;
            let y = &ex.y;
            boundary.record((y.eval(0.0)?).abs().max((y.eval(1.0)? - beta).abs()), ctx);
            let lattice = LatticeInterval::build(p, 0.0, 1.0, VARIATIONAL_LATTICE_TOL)?;
            for &t in lattice.points() {
                let ctx = || format!("n={n} q={q} t={t}");
                if n == 1 {
                    closed_form.record_result(y.eval(t).map(|v| (v - t * t / (1.0 + q)).abs()), ctx);
                }
                euler.record_result(el_residual(&prob, y, t).map(f64::abs), ctx);
            }
            let base = functional_value(&prob, y)?.converged_value()?;
            for (i, var) in random_variations(0.0, 1.0, 10, opts.seed.wrapping_add(n as u64 * 31 + (q * 10.0) as u64))?
                .iter()
                .enumerate()
            {
                let ctx = || format!("n={n} q={q} variation #{i}");
                let dl = first_variation(&prob, y, var);
                necessary.record_result(dl.clone().map(f64::abs), ctx);
                let fd = first_variation_fd(&prob, y, var, DEFAULT_EPS_STEP);
                cross.record_result(dl.and_then(|a| fd.map(|b| (a - b).abs() / mag(&[a, b]))), ctx);
                for eps in [0.1, -0.1, 0.01, -0.01] {
                    let ctx = || format!("n={n} q={q} variation #{i} eps={eps}");
                    let other = functional_value(&prob, &var.perturb(y, eps)).and_then(|r| r.converged_value());
                    minimal.record_result(other.map(|v| if base <= v + COMPARISON_SLACK { 0.0 } else { base - v }), ctx);
                }
            }
            Ok(())
        })();
        if let Err(e) = res {
            euler.fail(format!("{e} at {}", ctx()));
        }
    }

    let p = params(1, 0.5);
    let (alpha, beta) = (1.0, 2.0);
    for gtext in ["1", "1+t^2", "exp(t)"] {
        let ctx = || format!("g={gtext}");
        let res = (|| -> Result<()> {
            let g = RealFunction::parse(gtext)?;
            let sol = example4_solution(p, 0.0, 1.0, alpha, beta, &g, VARIATIONAL_LATTICE_TOL)?;
            let y = &sol.y;
            l_boundary.record((y.eval(0.0)? - alpha).abs().max((y.eval(1.0)? - beta).abs()), ctx);

            let lag = example4_lagrangian(p, &g, dc);
            let (z, big_g) = example4_transform(&g, sol.a_coef, sol.c_coef - 1.0);
            let ybar = RealFunction::constant(1.0).div(&g);
            for &t in LatticeInterval::build(p, 0.0, 1.0, LEITMANN_LATTICE_TOL)?.points() {
                let ctx = || format!("g={gtext} t={t}");
                l_identity.record_result(leitmann_residual(&p, &lag, &lag, &big_g, &z, &ybar, t, &dc), ctx);
            }

            let prob = VariationalProblem::new(p, lag, 0.0, 1.0, alpha, beta)?;
            let best = functional_value(&prob, y)?.converged_value()?;
            let mut rng = ChaCha8Rng::seed_from_u64(opts.seed ^ 0x4c45_4954);
            for (i, var) in random_variations(0.0, 1.0, 50, rng.gen())?.iter().enumerate() {
                let eps: f64 = rng.gen_range(-1.0..=1.0);
                let ctx = || format!("g={gtext} perturbation #{i}");
                let other = functional_value(&prob, &var.perturb(y, eps)).and_then(|r| r.converged_value());
                l_minimal.record_result(other.map(|v| if best <= v + COMPARISON_SLACK { 0.0 } else { best - v }), ctx);
            }
            Ok(())
        })();
        if let Err(e) = res {
            l_identity.fail(format!("{e} at {}", ctx()));
        }
    }

    let fns = corpus();
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed ^ 0x4e4f_524d);
    for &(n, q) in &GRID {
        let p = params(n, q);
        let lattice = match LatticeInterval::build(p, -sample_radius(&p), sample_radius(&p), SAMPLE_FLOOR) {
            Ok(l) => l,
            Err(e) => {
                norm.fail(e.to_string());
                continue;
            }
        };
        for (i, (fname, f)) in fns.iter().enumerate() {
            let (gname, g) = &fns[(i + 3) % fns.len()];
            let lambda: f64 = rng.gen_range(-5.0..=5.0);
            let ctx = || format!("n={n} q={q} f={fname} g={gname} lambda={lambda}");
            let res = (|| {
                let nf = norm_e(&p, f, &lattice, &dc)?;
                let ng = norm_e(&p, g, &lattice, &dc)?;
                let nl = norm_e(&p, &f.scale(lambda), &lattice, &dc)?;
                let nsum = norm_e(&p, &f.add(g), &lattice, &dc)?;
                let scale = mag(&[nf, ng, nl]);
                let homogeneity = (nl - lambda.abs() * nf).abs() / scale;
                let triangle = (nsum - nf - ng).max(0.0) / scale;
                Ok(homogeneity.max(triangle))
            })();
            norm.record_result(res, ctx);
        }
    }

    vec![
        closed_form.finish(),
        boundary.finish(),
        euler.finish(),
        necessary.finish(),
        cross.finish(),
        minimal.finish(),
        l_boundary.finish(),
        l_identity.finish(),
        l_minimal.finish(),
        norm.finish(),
    ]
}

/// `D^m` on the corpus at lattice points, exposed for diagnostics.
pub fn iterated_derivative(n: u32, q: f64, f: &str, t: f64, m: usize) -> Result<f64> {
    let p = QuantumParams::new(n, q)?;
    d_nq_m(&p, &RealFunction::parse(f)?, t, m, &DiffConfig::default())
}
