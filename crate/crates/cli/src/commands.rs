use powerq::check::{self, CheckOptions, Suite};
use powerq::{
    d_nq, d_nq_m, derivative_fn, el_residual, example1_extremal, example4_lagrangian, example4_solution,
    example4_transform, functional_value, integral, leitmann_residual, DiffConfig, Error, IntegralResult, Interval,
    Lagrangian, Params, Problem, RealFunction, SeriesConfig,
};

use crate::args::{Command, Common};
use crate::failure::Failure;
use crate::report::Report;

type Outcome = Result<Report, Failure>;

pub struct Context {
    common: Common,
    diff: DiffConfig<f64>,
}

impl Context {
    pub fn new(common: Common) -> Self {
        Self { common, diff: DiffConfig::default() }
    }

    fn params(&self) -> Result<Params, Failure> {
        let n = self.common.n.ok_or_else(|| Failure::Usage("--n is required".into()))?;
        let q = self.common.q.ok_or_else(|| Failure::Usage("--q is required".into()))?;
        Ok(Params::new(n, q)?)
    }

    fn series(&self) -> Result<SeriesConfig<f64>, Failure> {
        let mut cfg = SeriesConfig::default();
        if let Some(tol) = self.common.tol {
            cfg = cfg.with_rel_tol(tol);
        }
        if let Some(max) = self.common.max_terms {
            cfg = cfg.with_max_terms(max);
        }
        cfg.validate()?;
        Ok(cfg)
    }
}

pub fn run(ctx: &Context, command: &Command) -> Outcome {
    match command {
        Command::Derive { f, at, order } => derive(ctx, f, *at, *order),
        Command::Integrate { f, a, b } => integrate(ctx, f, *a, *b),
        Command::Ftc { f, a, b } => ftc(ctx, f, *a, *b),
        Command::Lattice { a, b, at, truncation, points } => lattice(ctx, *a, *b, *at, *truncation, *points),
        Command::EulerLagrange { lagrangian, f, a, b, boundary, truncation } => {
            euler_lagrange(ctx, lagrangian, f, *a, *b, boundary.alpha, boundary.beta, *truncation)
        }
        Command::Extremal { beta, emit_lattice, truncation } => extremal(ctx, *beta, *emit_lattice, *truncation),
        Command::Leitmann { g, a, b, alpha, beta, emit_lattice, truncation } => {
            leitmann(ctx, g, *a, *b, *alpha, *beta, *emit_lattice, *truncation)
        }
        Command::Check { suite, inject_fault } => run_check(ctx, suite, *inject_fault),
    }
}

fn derive(ctx: &Context, f: &str, at: f64, order: usize) -> Outcome {
    let params = ctx.params()?;
    let f = RealFunction::parse(f)?;
    let value = if order == 1 { d_nq(&params, &f, at, &ctx.diff)? } else { d_nq_m(&params, &f, at, order, &ctx.diff)? };
    Ok(Report::new().set("value", value).set("singular", ctx.diff.is_singular(&params, at)))
}

fn with_series(report: Report, result: &IntegralResult<f64>, cfg: &SeriesConfig<f64>) -> Report {
    let mut report = report
        .set("converged", result.converged)
        .set("terms_used", result.terms_used)
        .set("last_term", result.last_term);
    if !result.converged {
        report.trailing = Some(Error::NonConvergence { terms: cfg.max_terms }.into());
    }
    report
}

fn integrate(ctx: &Context, f: &str, a: f64, b: f64) -> Outcome {
    let (params, cfg) = (ctx.params()?, ctx.series()?);
    let f = RealFunction::parse(f)?;
    let result = integral(&params, &f, a, b, &cfg)?;
    Ok(with_series(Report::new().set("value", result.value), &result, &cfg))
}

fn ftc(ctx: &Context, f: &str, a: f64, b: f64) -> Outcome {
    let (params, cfg) = (ctx.params()?, ctx.series()?);
    let f = RealFunction::parse(f)?;
    let df = derivative_fn(&params, &f, &ctx.diff);
    let lhs = integral(&params, &df, a, b, &cfg)?;
    let rhs = f.eval(b)? - f.eval(a)?;
    let report = Report::new().set("lhs", lhs.value).set("rhs", rhs).set("residual", (lhs.value - rhs).abs());
    Ok(with_series(report, &lhs, &cfg))
}

fn lattice(
    ctx: &Context,
    a: Option<f64>,
    b: Option<f64>,
    at: Option<f64>,
    truncation: f64,
    points: Option<usize>,
) -> Outcome {
    let params = ctx.params()?;
    let mut report = Report::new().set("n", params.n()).set("q", params.q()).set("singular_set", params.singular_set());
    report = report.set("theta", if params.theta().is_finite() { Some(params.theta()) } else { None });
    let mut pts = match (a, b, at) {
        (_, _, Some(s)) => {
            if !params.inside_horizon(s) {
                return Err(Error::Horizon { point: s, theta: params.theta() }.into());
            }
            params.orbit(s, truncation, points.unwrap_or(20))
        }
        (Some(a), Some(b), None) => Interval::build(params, a, b, truncation)?.points().to_vec(),
        _ => return Err(Failure::Usage("lattice needs --a and --b, or --at".into())),
    };
    if let Some(cap) = points {
        pts.truncate(cap);
    }
    let rows = pts.iter().map(|&t| vec![t]).collect();
    Ok(report.set("lattice_points", &pts).table(vec!["t"], rows))
}

#[allow(clippy::too_many_arguments)]
fn euler_lagrange(
    ctx: &Context,
    lagrangian: &str,
    y: &str,
    a: f64,
    b: f64,
    alpha: Option<f64>,
    beta: Option<f64>,
    truncation: f64,
) -> Outcome {
    let (params, cfg) = (ctx.params()?, ctx.series()?);
    let lag = Lagrangian::parse(lagrangian)?;
    let y = RealFunction::parse(y)?;
    let alpha = alpha.map_or_else(|| y.eval(a), Ok)?;
    let beta = beta.map_or_else(|| y.eval(b), Ok)?;
    let prob = Problem::new(params, lag, a, b, alpha, beta)?.with_series_cfg(cfg).with_diff_cfg(ctx.diff);
    let points = Interval::build(params, a, b, truncation)?.points().to_vec();
    let residuals = points.iter().map(|&t| el_residual(&prob, &y, t)).collect::<Result<Vec<_>, _>>()?;
    let max = residuals.iter().fold(0.0_f64, |m, r| m.max(r.abs()));
    let rows = points.iter().zip(&residuals).map(|(&t, &r)| vec![t, r]).collect();
    Ok(Report::new()
        .set("admissible", prob.is_admissible(&y)?)
        .set("max_residual", max)
        .set("lattice_points", &points)
        .set("residuals", &residuals)
        .table(vec!["t", "residual"], rows))
}

fn extremal(ctx: &Context, beta: f64, emit_lattice: bool, truncation: f64) -> Outcome {
    let (params, cfg) = (ctx.params()?, ctx.series()?);
    let ex = example1_extremal(params, beta, &cfg)?;
    let mut report = Report::new().set("c", ex.c).set("converged", ex.converged);
    if !ex.converged {
        report.trailing = Some(Error::NonConvergence { terms: cfg.max_terms }.into());
    }
    if emit_lattice {
        let points = Interval::build(params, 0.0, 1.0, truncation)?.points().to_vec();
        let values = points.iter().map(|&t| ex.y.eval(t)).collect::<Result<Vec<_>, _>>()?;
        let rows = points.iter().zip(&values).map(|(&t, &y)| vec![t, y]).collect();
        report = report.set("lattice_points", &points).set("values", &values).table(vec!["t", "y"], rows);
    }
    Ok(report)
}

#[allow(clippy::too_many_arguments)]
fn leitmann(
    ctx: &Context,
    g: &str,
    a: f64,
    b: f64,
    alpha: f64,
    beta: f64,
    emit_lattice: bool,
    truncation: f64,
) -> Outcome {
    let (params, cfg) = (ctx.params()?, ctx.series()?);
    let g = RealFunction::parse(g)?;
    let sol = example4_solution(params, a, b, alpha, beta, &g, truncation)?;
    let lag = example4_lagrangian(params, &g, ctx.diff);
    let (z, big_g) = example4_transform(&g, sol.a_coef, sol.c_coef - 1.0);
    let ybar = RealFunction::constant(1.0).div(&g);

    let points = Interval::build(params, a, b, truncation)?.points().to_vec();
    let mut identity = 0.0_f64;
    for &t in &points {
        identity = identity.max(leitmann_residual(&params, &lag, &lag, &big_g, &z, &ybar, t, &ctx.diff)?);
    }
    let prob = Problem::new(params, lag, a, b, alpha, beta)?.with_series_cfg(cfg).with_diff_cfg(ctx.diff);
    let value = functional_value(&prob, &sol.y)?;

    let mut report = Report::new()
        .set("a_coef", sol.a_coef)
        .set("c_coef", sol.c_coef)
        .set("y_a", sol.y.eval(a)?)
        .set("y_b", sol.y.eval(b)?)
        .set("value", value.value)
        .set("identity_residual", identity);
    report = with_series(report, &value, &cfg);
    if emit_lattice {
        let values = points.iter().map(|&t| sol.y.eval(t)).collect::<Result<Vec<_>, _>>()?;
        let rows = points.iter().zip(&values).map(|(&t, &y)| vec![t, y]).collect();
        report = report.set("lattice_points", &points).set("values", &values).table(vec!["t", "y"], rows);
    }
    Ok(report)
}

fn run_check(ctx: &Context, suite: &str, inject_fault: bool) -> Outcome {
    let suite: Suite = suite.parse()?;
    let outcomes = check::run(suite, &CheckOptions { seed: ctx.common.seed, inject_fault });
    let passed = outcomes.iter().all(|o| o.passed);
    let failing: Vec<&str> = outcomes.iter().filter(|o| !o.passed).map(|o| o.property.as_str()).collect();
    let mut report = Report::new()
        .set("suite", suite.name())
        .set("passed", passed)
        .set("failing", &failing)
        .set("properties", &outcomes);
    report.status = if passed { 0 } else { 1 };
    Ok(report)
}
