//! End-to-end acceptance criteria. Prints one PASS/FAIL line per criterion
//! and exits non-zero if any fails.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use powerq::check::{self, CheckOptions, PropertyOutcome, Suite, GRID};
use powerq::{
    counterexample_function, d_nq, example1_extremal, integral, series_terms, DiffConfig, Function, Interval, Params,
    SeriesConfig,
};

struct Verdict {
    passed: bool,
    detail: String,
}

impl Verdict {
    fn from_outcomes(outcomes: &[PropertyOutcome], wanted: &[&str]) -> Self {
        let mut passed = true;
        let mut detail = Vec::new();
        for name in wanted {
            match outcomes.iter().find(|o| o.property == *name) {
                Some(o) => {
                    passed &= o.passed;
                    detail.push(format!("{}: {:.2e} <= {:.0e}", o.property, o.max_residual, o.tolerance));
                    if let Some(f) = &o.failure {
                        detail.push(format!("failure: {f}"));
                    }
                }
                None => {
                    passed = false;
                    detail.push(format!("missing property `{name}`"));
                }
            }
        }
        Verdict { passed, detail: detail.join("; ") }
    }

    fn within_time(mut self, elapsed: Duration, limit: Duration) -> Self {
        self.detail.push_str(&format!("; {:.3}s (limit {}s)", elapsed.as_secs_f64(), limit.as_secs_f64()));
        self.passed &= elapsed < limit;
        self
    }
}

fn timed<R>(f: impl FnOnce() -> R) -> (R, Duration) {
    let start = Instant::now();
    let r = f();
    (r, start.elapsed())
}

fn pointwise_oracles() -> Verdict {
    let (worst, elapsed) = timed(|| {
        let dc = DiffConfig::default();
        let square = Function::parse("t^2").unwrap();
        let recip = Function::parse("1/t").unwrap();
        let mut worst = 0.0_f64;
        let mut count = 0;
        for (i, &(n, q)) in GRID.iter().enumerate() {
            let p = Params::new(n, q).unwrap();
            for t in check::lattice_sample(&p, 200, 1000 + i as u64) {
                let ht = p.h(t);
                let d2 = d_nq(&p, &square, t, &dc).unwrap();
                worst = worst.max((d2 - (t + ht)).abs() / (t + ht).abs());
                let expect = -1.0 / (q * t.powi(n as i32 + 1));
                let dr = d_nq(&p, &recip, t, &dc).unwrap();
                worst = worst.max((dr - expect).abs() / expect.abs());
                count += 1;
            }
        }
        (worst, count)
    });
    let (worst, count) = worst;
    Verdict {
        passed: worst <= 1e-11 && count == 600,
        detail: format!("max relative error {worst:.2e} <= 1e-11 over {count} points"),
    }
    .within_time(elapsed, Duration::from_secs(1))
}

fn rule_residuals() -> Verdict {
    let (outcomes, elapsed) = timed(|| check::run(Suite::Rules, &CheckOptions::default()));
    Verdict::from_outcomes(
        &outcomes,
        &["sum rule", "scalar rule", "product rule, first form", "product rule, second form", "quotient rule"],
    )
    .within_time(elapsed, Duration::from_secs(5))
}

fn leibniz() -> Verdict {
    let outcomes = check::run(Suite::Leibniz, &CheckOptions::default());
    Verdict::from_outcomes(
        &outcomes,
        &[
            "|S^m_k| = C(m, k) for m <= 8",
            "Leibniz formula off the singular set",
            "Leibniz formula at t = 0 (binomial form)",
        ],
    )
}

fn fundamental_theorem() -> Verdict {
    let outcomes = check::run(Suite::Ftc, &CheckOptions::default());
    let mut v = Verdict::from_outcomes(&outcomes, &["fundamental theorem", "integration by parts"]);
    let pairs = outcomes.iter().find(|o| o.property == "fundamental theorem").map_or(0, |o| o.samples);
    let expected = 50 * GRID.len() * check::CORPUS.len();
    v.passed &= pairs == expected;
    v.detail.push_str(&format!("; {pairs} of {expected} (a, b, f) samples"));
    v
}

fn jackson_reduction() -> Verdict {
    let sc = SeriesConfig::default();
    let t = Function::parse("t").unwrap();
    let mut closed = 0.0_f64;
    let mut termwise = 0.0_f64;
    for q in [0.3, 0.5, 0.9] {
        let p = Params::new(1, q).unwrap();
        let r = integral(&p, &t, 0.0, 1.0, &sc).unwrap();
        closed = closed.max((r.value - 1.0 / (1.0 + q)).abs());
        for (k, term) in series_terms(&p, &t, 1.0, 100).unwrap().into_iter().enumerate() {
            let qk = q.powi(k as i32);
            termwise = termwise.max((term - (1.0 - q) * qk * qk).abs());
        }
    }
    let outcomes = check::run(Suite::IntegralProps, &CheckOptions::default());
    let mut v = Verdict::from_outcomes(&outcomes, &["n = 1: term-by-term agreement with the Jackson series"]);
    v.passed &= closed <= 1e-10 && termwise <= 1e-12;
    v.detail = format!("closed form {closed:.2e} <= 1e-10; integrand t term-by-term {termwise:.2e} <= 1e-12; {}", v.detail);
    v
}

fn counterexample() -> Verdict {
    let sc = SeriesConfig::default();
    let mut passed = true;
    let mut detail = Vec::new();
    for q in [0.3, 0.5, 0.7] {
        let p = Params::new(1, q).unwrap();
        let f = counterexample_function(q).unwrap();
        let lo = (1.0 + q) / 2.0;
        let signed = integral(&p, &f, lo, 1.0, &sc).unwrap().converged_value().unwrap();
        let g = f.clone();
        let abs_f = Function::native(move |t| Ok(g.eval(t)?.abs()));
        let unsigned = integral(&p, &abs_f, lo, 1.0, &sc).unwrap().converged_value().unwrap();
        let ok = (signed + (3.0 + q) / 2.0).abs() <= 1e-9 && (unsigned - (1.0 - q) / 2.0).abs() <= 1e-9;
        let strict = signed.abs() > unsigned;
        passed &= ok && strict;
        if q == 0.5 {
            passed &= (signed + 1.75).abs() <= 1e-9 && (unsigned - 0.25).abs() <= 1e-9;
        }
        detail.push(format!("q={q}: {signed:.12} vs {unsigned:.12}"));
    }
    Verdict { passed, detail: detail.join("; ") }
}

fn model_extremal() -> Verdict {
    let sc = SeriesConfig::default();
    let mut worst = 0.0_f64;
    for q in [0.5, 0.9] {
        let p = Params::new(1, q).unwrap();
        let ex = example1_extremal(p, 1.0 / (1.0 + q), &sc).unwrap();
        for &t in Interval::build(p, 0.0, 1.0, 1e-6).unwrap().points() {
            if t > 1e-6 {
                worst = worst.max((ex.y.eval(t).unwrap() - t * t / (1.0 + q)).abs());
            }
        }
    }
    let outcomes = check::run(Suite::Variational, &CheckOptions::default());
    let mut v = Verdict::from_outcomes(
        &outcomes,
        &[
            "n = 1 extremal equals t^2/(1+q)",
            "Euler-Lagrange residual of the extremal",
            "first variation vanishes at the extremal",
            "first variation agrees with the central difference",
            "extremal beats y + eps p",
        ],
    );
    v.passed &= worst <= 1e-8;
    v.detail = format!("closed form {worst:.2e} <= 1e-8; {}", v.detail);
    v
}

fn leitmann() -> Verdict {
    let outcomes = check::run(Suite::Variational, &CheckOptions::default());
    Verdict::from_outcomes(
        &outcomes,
        &[
            "Leitmann minimiser meets the boundary conditions",
            "Leitmann identity residual",
            "Leitmann minimiser beats perturbed candidates",
        ],
    )
}

fn full_suite() -> Verdict {
    let (outcomes, elapsed) = timed(|| check::run(Suite::All, &CheckOptions::default()));
    let failing: Vec<&str> = outcomes.iter().filter(|o| !o.passed).map(|o| o.property.as_str()).collect();
    Verdict {
        passed: failing.is_empty(),
        detail: format!("{} properties, failing: {:?}", outcomes.len(), failing),
    }
    .within_time(elapsed, Duration::from_secs(60))
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Verdict); 9] = [
        ("pointwise derivative oracles", pointwise_oracles),
        ("algebraic rule residuals", rule_residuals),
        ("Leibniz formula", leibniz),
        ("fundamental theorem and integration by parts", fundamental_theorem),
        ("n = 1 Jackson reduction", jackson_reduction),
        ("counterexample to the absolute-value bound", counterexample),
        ("model variational problem", model_extremal),
        ("Leitmann direct method", leitmann),
        ("full check suite", full_suite),
    ];
    let mut failures = 0;
    for (i, (name, criterion)) in criteria.iter().enumerate() {
        let v = criterion();
        let tag = if v.passed { "PASS" } else { "FAIL" };
        println!("{tag} criterion {}: {name} ({})", i + 1, v.detail);
        failures += usize::from(!v.passed);
    }
    println!("{} of {} criteria passed", criteria.len() - failures, criteria.len());
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
