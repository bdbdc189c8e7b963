use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(name = "powerq", version, about = "n,q-power quantum calculus from the command line")]
pub struct Cli {
    #[command(flatten)]
    pub common: Common,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct Common {
    /// Odd positive exponent of h(t) = q t^n
    #[arg(long, global = true)]
    pub n: Option<u32>,

    /// Base of h(t) = q t^n, strictly between 0 and 1
    #[arg(long, global = true)]
    pub q: Option<f64>,

    /// Relative tolerance for the series integral
    #[arg(long, global = true, env = "POWERQ_TOL")]
    pub tol: Option<f64>,

    /// Cap on the number of series terms
    #[arg(long, global = true)]
    pub max_terms: Option<usize>,

    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,

    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate D f (or D^m f) at a point
    Derive {
        #[arg(long)]
        f: String,
        #[arg(long, allow_negative_numbers = true)]
        at: f64,
        /// Order of the iterated derivative
        #[arg(long, default_value_t = 1)]
        order: usize,
    },

    /// Series integral of f over [a, b]
    Integrate {
        #[arg(long)]
        f: String,
        #[arg(long, allow_negative_numbers = true)]
        a: f64,
        #[arg(long, allow_negative_numbers = true)]
        b: f64,
    },

    /// Compare the integral of D f over [a, b] with f(b) - f(a)
    Ftc {
        #[arg(long)]
        f: String,
        #[arg(long, allow_negative_numbers = true)]
        a: f64,
        #[arg(long, allow_negative_numbers = true)]
        b: f64,
    },

    /// Lattice points of [a, b], or the forward orbit of --at
    Lattice {
        #[arg(long, allow_negative_numbers = true)]
        a: Option<f64>,
        #[arg(long, allow_negative_numbers = true)]
        b: Option<f64>,
        #[arg(long, allow_negative_numbers = true, conflicts_with_all = ["a", "b"])]
        at: Option<f64>,
        /// Orbit points closer to 0 than this are dropped
        #[arg(long, default_value_t = 1e-6)]
        truncation: f64,
        /// Maximum number of points to report
        #[arg(long)]
        points: Option<usize>,
    },

    /// Euler-Lagrange residual of a candidate y on the lattice of [a, b]
    EulerLagrange {
        #[arg(long)]
        lagrangian: String,
        /// Candidate y(t)
        #[arg(long)]
        f: String,
        #[arg(long, allow_negative_numbers = true)]
        a: f64,
        #[arg(long, allow_negative_numbers = true)]
        b: f64,
        #[command(flatten)]
        boundary: Boundary,
        #[arg(long, default_value_t = 1e-6)]
        truncation: f64,
    },

    /// Extremal of the integral of y(qt^n) + (Dy)^2 / 2 over [0, 1] with y(0) = 0, y(1) = beta
    Extremal {
        #[arg(long, allow_negative_numbers = true)]
        beta: f64,
        /// Emit (t, y(t)) on the lattice of [0, 1]
        #[arg(long)]
        emit_lattice: bool,
        #[arg(long, default_value_t = 1e-6)]
        truncation: f64,
    },

    /// Minimiser of the integral of [D(y g)]^2 by Leitmann's direct method
    Leitmann {
        #[arg(long)]
        g: String,
        #[arg(long, allow_negative_numbers = true)]
        a: f64,
        #[arg(long, allow_negative_numbers = true)]
        b: f64,
        #[arg(long, allow_negative_numbers = true)]
        alpha: f64,
        #[arg(long, allow_negative_numbers = true)]
        beta: f64,
        #[arg(long)]
        emit_lattice: bool,
        #[arg(long, default_value_t = 1e-4)]
        truncation: f64,
    },

    /// Run a built-in invariant suite
    Check {
        /// rules, leibniz, ftc, integral-props, counterexample, variational or all
        suite: String,
        #[arg(long, hide = true)]
        inject_fault: bool,
    },
}

#[derive(Debug, Args)]
pub struct Boundary {
    /// y(a); defaults to the candidate's value there
    #[arg(long, allow_negative_numbers = true)]
    pub alpha: Option<f64>,
    /// y(b); defaults to the candidate's value there
    #[arg(long, allow_negative_numbers = true)]
    pub beta: Option<f64>,
}
