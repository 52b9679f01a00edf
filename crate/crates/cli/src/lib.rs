//! Command-line driver: parses arguments, runs one computation and renders
//! the resulting records as JSON lines or long-form CSV.

use std::str::FromStr;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{Map, Number, Value};

use mapcycles::dde::{self, DdeSpec};
use mapcycles::distributions::{connected_cycle_cdf, LimitLaws, Regime};
use mapcycles::exact_enum::enumerate_all;
use mapcycles::gfseries::{count_table, weighted_sum_trend};
use mapcycles::laplace::{divisibility_report, invert_with, InversionOptions, Method, Transform, TransformSpec};
use mapcycles::mapping_sim::{simulate, Constraint, SimOptions, Stat};
use mapcycles::moments::{moment_table, MomentOptions};
use mapcycles::Error;

/// Environment variable holding the default worker count.
pub const WORKERS_ENV: &str = "MAPCYCLES_WORKERS";

#[derive(Debug, Parser)]
#[command(name = "mapcycles", version, about = "Limit laws for cycles and components of random mappings")]
pub struct Cli {
    /// Output encoding.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Print nothing on success; errors still go to stdout as records.
    #[arg(long, global = true)]
    pub quiet: bool,
    /// Add the wall time to each record (makes output run-dependent).
    #[arg(long, global = true)]
    pub timing: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate a delay-equation solution.
    Eval(EvalArgs),
    /// Limiting distribution functions.
    Cdf(CdfArgs),
    /// Moment constants, mode and median for one regime.
    Constants(ConstantsArgs),
    /// Numerical inverse Laplace transform.
    Invlaplace(InvArgs),
    /// Monte Carlo over random mappings.
    Simulate(SimArgs),
    /// Exhaustive tallies over all mappings of a small size.
    Enumerate(EnumArgs),
    /// Bounds and approximations for the half-normal and Rayleigh transforms.
    Divisibility(DivArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FnKind {
    Rho,
    Sigma,
    SigmaTilde,
    RhoR,
    G,
}

#[derive(Debug, Args)]
pub struct EvalArgs {
    #[arg(long = "fn", value_enum)]
    pub func: FnKind,
    #[arg(long, allow_negative_numbers = true)]
    pub x: f64,
    /// Rank for rho-r.
    #[arg(long)]
    pub r: Option<usize>,
    /// Parameter for g.
    #[arg(long)]
    pub theta: Option<f64>,
    #[arg(long, default_value_t = dde::DEFAULT_TOL)]
    pub tol: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum CdfKind {
    PermCycle,
    LargestComponent,
    MappingCycle,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum RegimeArg {
    Rayleigh,
    Halfnormal,
    Pavlov,
    Connected,
}

#[derive(Debug, Args)]
pub struct CdfArgs {
    #[arg(long, value_enum)]
    pub kind: CdfKind,
    #[arg(long, default_value_t = 1)]
    pub r: usize,
    #[arg(long, value_enum, default_value_t = RegimeArg::Rayleigh)]
    pub regime: RegimeArg,
    /// Parameter of the pavlov regime.
    #[arg(long)]
    pub c: Option<f64>,
    /// Fraction of n (perm-cycle, largest-component).
    #[arg(long)]
    pub a: Option<f64>,
    /// Multiple of √n (mapping-cycle).
    #[arg(long)]
    pub b: Option<f64>,
    /// Lower end: also report P{lo < X ≤ a or b}.
    #[arg(long)]
    pub lo: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MomentRegimeArg {
    Rayleigh,
    Halfnormal,
}

#[derive(Debug, Args)]
pub struct ConstantsArgs {
    #[arg(long, value_enum)]
    pub regime: MomentRegimeArg,
    #[arg(long, default_value_t = mapcycles::moments::DEFAULT_TOL)]
    pub tol: f64,
    /// Also compute corr(Λ_r, Λ_s).
    #[arg(long)]
    pub cross: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum TransformArg {
    Dickman,
    Watterson,
    Theta,
    CycleCdf,
    ErfcGauss,
    Halfnormal,
    Rayleigh,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MethodArg {
    Talbot,
    Bromwich,
}

#[derive(Debug, Args)]
pub struct InvArgs {
    #[arg(long, value_enum)]
    pub transform: TransformArg,
    #[arg(long)]
    pub theta: Option<f64>,
    #[arg(long)]
    pub b: Option<f64>,
    #[arg(long)]
    pub xi: f64,
    #[arg(long, value_enum)]
    pub method: Option<MethodArg>,
}

/// `none`, `connected` or `components=M`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ConstraintArg(pub Constraint);

impl FromStr for ConstraintArg {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "none" => Ok(Self(Constraint::None)),
            "connected" => Ok(Self(Constraint::Connected)),
            _ => {
                let m = s
                    .strip_prefix("components=")
                    .ok_or_else(|| format!("expected none, connected or components=M, got {s:?}"))?;
                let m: usize = m.parse().map_err(|e| format!("bad component count {m:?}: {e}"))?;
                if m == 0 {
                    return Err("component count must be >= 1".into());
                }
                Ok(Self(Constraint::Components(m)))
            }
        }
    }
}

#[derive(Debug, Args)]
pub struct SimArgs {
    #[arg(long)]
    pub n: usize,
    #[arg(long)]
    pub trials: u64,
    #[arg(long, default_value = "none")]
    pub constraint: ConstraintArg,
    #[arg(long)]
    pub seed: u64,
    /// Defaults to $MAPCYCLES_WORKERS, then to the number of CPUs.
    #[arg(long)]
    pub workers: Option<usize>,
    /// Cap on sampled mappings when rejecting.
    #[arg(long)]
    pub max_attempts: Option<u64>,
}

#[derive(Debug, Args)]
pub struct EnumArgs {
    #[arg(long)]
    pub n: usize,
    /// Compare the tallies with the generating-function counts.
    #[arg(long)]
    pub check_egf: bool,
}

#[derive(Debug, Args)]
pub struct DivArgs {
    #[arg(long)]
    pub eta_min: f64,
    #[arg(long)]
    pub eta_max: f64,
    #[arg(long)]
    pub steps: usize,
}

/// One output record.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Record {
    pub command: String,
    pub params: Vec<(String, Value)>,
    pub values: Vec<(String, Value)>,
    pub errors: Vec<(String, Value)>,
    pub seed: Option<u64>,
    pub wall_time: Option<f64>,
    pub error: Option<String>,
}

/// A float as a JSON number with 17 significant digits; non-finite values
/// become strings.
pub fn num(x: f64) -> Value {
    if x.is_finite() {
        Value::Number(Number::from_str(&format!("{x:.16e}")).expect("formatted float parses"))
    } else {
        Value::String(format!("{x}"))
    }
}

fn int(x: u64) -> Value {
    Value::Number(Number::from(x))
}

fn text(s: impl Into<String>) -> Value {
    Value::String(s.into())
}

impl Record {
    fn new(command: &str) -> Self {
        Self {
            command: command.into(),
            ..Self::default()
        }
    }

    fn param(&mut self, k: &str, v: Value) -> &mut Self {
        self.params.push((k.into(), v));
        self
    }

    fn value(&mut self, k: impl Into<String>, v: Value) -> &mut Self {
        self.values.push((k.into(), v));
        self
    }

    fn err_est(&mut self, k: impl Into<String>, v: f64) -> &mut Self {
        self.errors.push((k.into(), num(v)));
        self
    }

    pub fn to_json(&self) -> Value {
        let obj = |pairs: &[(String, Value)]| {
            Value::Object(pairs.iter().cloned().collect::<Map<String, Value>>())
        };
        let mut m = Map::new();
        m.insert("command".into(), text(&self.command));
        m.insert("status".into(), text(if self.error.is_some() { "error" } else { "ok" }));
        m.insert("params".into(), obj(&self.params));
        m.insert("values".into(), obj(&self.values));
        m.insert("errors".into(), obj(&self.errors));
        if let Some(s) = self.seed {
            m.insert("seed".into(), int(s));
        }
        if let Some(t) = self.wall_time {
            m.insert("wall_time_s".into(), num(t));
        }
        if let Some(e) = &self.error {
            m.insert("error".into(), text(e));
        }
        Value::Object(m)
    }

    // (section, name, value) rows
    fn rows(&self) -> Vec<(&'static str, String, String)> {
        let show = |v: &Value| match v {
            Value::String(s) => s.clone(),
            other => other.to_string(),
        };
        let mut out = vec![("meta", "status".to_string(), if self.error.is_some() { "error" } else { "ok" }.to_string())];
        out.extend(self.params.iter().map(|(k, v)| ("param", k.clone(), show(v))));
        out.extend(self.values.iter().map(|(k, v)| ("value", k.clone(), show(v))));
        out.extend(self.errors.iter().map(|(k, v)| ("error_estimate", k.clone(), show(v))));
        if let Some(s) = self.seed {
            out.push(("meta", "seed".into(), s.to_string()));
        }
        if let Some(t) = self.wall_time {
            out.push(("meta", "wall_time_s".into(), show(&num(t))));
        }
        if let Some(e) = &self.error {
            out.push(("meta", "error".into(), e.clone()));
        }
        out
    }
}

/// Renders records in the requested format.
pub fn render(records: &[Record], format: Format) -> String {
    match format {
        Format::Json => records
            .iter()
            .map(|r| format!("{}\n", r.to_json()))
            .collect(),
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record(["record", "command", "section", "name", "value"])
                .expect("in-memory write");
            for (i, r) in records.iter().enumerate() {
                for (section, name, value) in r.rows() {
                    w.write_record([i.to_string(), r.command.clone(), section.into(), name, value])
                        .expect("in-memory write");
                }
            }
            String::from_utf8(w.into_inner().expect("in-memory flush")).expect("csv is utf-8")
        }
    }
}

/// Runs the CLI on `argv` (program name first) and returns the exit code
/// with everything meant for stdout and stderr.
pub fn run<I, S>(argv: I) -> (i32, String, String)
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let msg = e.render().to_string();
            return if code == 0 { (0, msg, String::new()) } else { (2, String::new(), msg) };
        }
    };
    let start = Instant::now();
    let name = command_name(&cli.command);
    let outcome = dispatch(&cli.command);
    let elapsed = start.elapsed().as_secs_f64();
    let (mut records, code) = match outcome {
        Ok(recs) => (recs, 0),
        Err(CliError::Usage(msg)) => return (2, String::new(), format!("error: {msg}\n")),
        Err(CliError::Compute(e, partial)) => {
            let mut r = partial.unwrap_or_else(|| Record::new(name));
            r.error = Some(e.to_string());
            (vec![r], 1)
        }
    };
    if cli.timing {
        for r in &mut records {
            r.wall_time = Some(elapsed);
        }
    }
    let out = if cli.quiet && code == 0 {
        String::new()
    } else {
        render(&records, cli.format)
    };
    (code, out, String::new())
}

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::Eval(_) => "eval",
        Command::Cdf(_) => "cdf",
        Command::Constants(_) => "constants",
        Command::Invlaplace(_) => "invlaplace",
        Command::Simulate(_) => "simulate",
        Command::Enumerate(_) => "enumerate",
        Command::Divisibility(_) => "divisibility",
    }
}

enum CliError {
    Usage(String),
    Compute(Error, Option<Record>),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Compute(e, None)
    }
}

type Out = Result<Vec<Record>, CliError>;

fn usage<T>(msg: impl Into<String>) -> Result<T, CliError> {
    Err(CliError::Usage(msg.into()))
}

fn dispatch(c: &Command) -> Out {
    match c {
        Command::Eval(a) => eval_cmd(a),
        Command::Cdf(a) => cdf_cmd(a),
        Command::Constants(a) => constants_cmd(a),
        Command::Invlaplace(a) => inv_cmd(a),
        Command::Simulate(a) => sim_cmd(a),
        Command::Enumerate(a) => enum_cmd(a),
        Command::Divisibility(a) => div_cmd(a),
    }
}

fn x_max_for(x: f64) -> f64 {
    dde::DEFAULT_X_MAX.max(x.ceil() + 1.0)
}

fn eval_cmd(a: &EvalArgs) -> Out {
    let mut rec = Record::new("eval");
    let name = a.func.to_possible_value().expect("named variant").get_name().to_string();
    rec.param("fn", text(&name)).param("x", num(a.x)).param("tol", num(a.tol));
    let x_max = x_max_for(a.x);
    let spec = match a.func {
        FnKind::Rho => DdeSpec::rho(),
        FnKind::Sigma | FnKind::SigmaTilde => DdeSpec::sigma(),
        FnKind::RhoR => {
            let Some(r) = a.r else { return usage("--fn rho-r needs --r") };
            rec.param("r", int(r as u64));
            DdeSpec::generalized(r)
        }
        FnKind::G => {
            let Some(t) = a.theta else { return usage("--fn g needs --theta") };
            rec.param("theta", num(t));
            DdeSpec::theta(t)
        }
    }
    .with_x_max(x_max)
    .with_tol(a.tol);
    let sol = match spec.kind {
        dde::DdeKind::ThetaFamily { .. } => dde::solve_theta_dde(&spec)?,
        dde::DdeKind::GeneralizedDickman { .. } => dde::solve_generalized_dickman(&spec)?,
    };
    let v = if a.func == FnKind::SigmaTilde {
        dde::sigma_tilde(&sol, a.x)?
    } else {
        sol.eval(a.x)?
    };
    rec.value("value", num(v));
    Ok(vec![rec])
}

fn regime_of(a: &CdfArgs) -> Result<Option<Regime<f64>>, CliError> {
    Ok(match a.regime {
        RegimeArg::Rayleigh => Some(Regime::Rayleigh),
        RegimeArg::Halfnormal => Some(Regime::HalfNormal),
        RegimeArg::Pavlov => match a.c {
            Some(c) => Some(Regime::Pavlov(c)),
            None => return usage("--regime pavlov needs --c"),
        },
        RegimeArg::Connected => None,
    })
}

fn cdf_cmd(a: &CdfArgs) -> Out {
    let mut rec = Record::new("cdf");
    let kind = a.kind.to_possible_value().expect("named variant").get_name().to_string();
    rec.param("kind", text(kind));
    match a.kind {
        CdfKind::PermCycle | CdfKind::LargestComponent => {
            let Some(x) = a.a else { return usage("this kind needs --a") };
            rec.param("a", num(x));
            if let Some(lo) = a.lo {
                rec.param("lo", num(lo));
            }
            let smallest = a.lo.unwrap_or(x).min(x);
            let x_max = if smallest > 0.0 { x_max_for(1.0 / smallest) } else { dde::DEFAULT_X_MAX };
            let r = if a.kind == CdfKind::PermCycle { a.r } else { 1 };
            let laws = LimitLaws::with_range(r.max(1), x_max, dde::DEFAULT_TOL)?;
            let f = |v: f64| -> mapcycles::Result<f64> {
                if a.kind == CdfKind::PermCycle {
                    laws.perm_longest_cycle_cdf(v, r)
                } else {
                    laws.largest_component_cdf(v)
                }
            };
            if a.kind == CdfKind::PermCycle {
                rec.param("r", int(r as u64));
            }
            let hi = f(x)?;
            rec.value("cdf", num(hi));
            if let Some(lo) = a.lo {
                let low = f(lo)?;
                rec.value("cdf_lo", num(low)).value("probability", num(hi - low));
                if a.kind == CdfKind::LargestComponent && x < 1.0 {
                    let p = laws.largest_component_probability(lo, x)?;
                    rec.value("probability_by_density", num(p));
                }
            }
        }
        CdfKind::MappingCycle => {
            let Some(b) = a.b else { return usage("mapping-cycle needs --b") };
            let regime = regime_of(a)?;
            rec.param("b", num(b)).param("r", int(a.r as u64));
            let reg_name = match regime {
                Some(r) => r.name(),
                None => "connected".into(),
            };
            rec.param("regime", text(reg_name));
            if let Some(lo) = a.lo {
                rec.param("lo", num(lo));
            }
            let f = |v: f64, laws: Option<&LimitLaws<f64>>| -> mapcycles::Result<f64> {
                match (regime, laws) {
                    (Some(reg), Some(l)) => l.mapping_longest_cycle_cdf(v, a.r, reg),
                    _ => connected_cycle_cdf(v),
                }
            };
            let laws = match regime {
                Some(reg) => {
                    let smallest = a.lo.unwrap_or(b).min(b);
                    let reach = if smallest > 0.0 { reg.upper_cutoff() / smallest } else { 0.0 };
                    Some(LimitLaws::with_range(a.r.max(1), x_max_for(reach), dde::DEFAULT_TOL)?)
                }
                None => {
                    if a.r != 1 {
                        return usage("the connected regime has a single cycle; use --r 1");
                    }
                    None
                }
            };
            let hi = f(b, laws.as_ref())?;
            rec.value("cdf", num(hi));
            if let Some(lo) = a.lo {
                let low = f(lo, laws.as_ref())?;
                rec.value("cdf_lo", num(low)).value("probability", num(hi - low));
            }
        }
    }
    Ok(vec![rec])
}

fn constants_cmd(a: &ConstantsArgs) -> Out {
    let regime = match a.regime {
        MomentRegimeArg::Rayleigh => Regime::Rayleigh,
        MomentRegimeArg::Halfnormal => Regime::HalfNormal,
    };
    let mut rec = Record::new("constants");
    rec.param("regime", text(regime.name())).param("tol", num(a.tol));
    let laws = LimitLaws::new(4)?;
    let opts = MomentOptions {
        tol: a.tol,
        cross_correlations: a.cross,
        ..MomentOptions::default()
    };
    let rep = moment_table(&laws, regime, &opts)?;
    for r in &rep.ranks {
        let k = r.rank;
        rec.value(format!("G_{k}_1"), num(r.g1))
            .value(format!("G_{k}_2"), num(r.g2))
            .value(format!("mean_{k}"), num(r.mean))
            .value(format!("variance_{k}"), num(r.variance))
            .value(format!("corr_N_{k}"), num(r.correlation));
    }
    match rep.mode {
        Some(m) => rec.value("mode_1", num(m)),
        None => rec.value("mode_1", Value::Null),
    };
    rec.value("median_1", num(rep.median));
    for c in &rep.cross {
        rec.value(format!("corr_{}_{}", c.r, c.s), num(c.value));
    }
    Ok(vec![rec])
}

fn inv_cmd(a: &InvArgs) -> Out {
    let mut rec = Record::new("invlaplace");
    let name = a.transform.to_possible_value().expect("named variant").get_name().to_string();
    rec.param("transform", text(name)).param("xi", num(a.xi));
    let t = match a.transform {
        TransformArg::Dickman => Transform::Dickman,
        TransformArg::Watterson => Transform::Watterson,
        TransformArg::Theta => {
            let Some(th) = a.theta else { return usage("--transform theta needs --theta") };
            rec.param("theta", num(th));
            Transform::Theta(th)
        }
        TransformArg::CycleCdf => {
            let Some(b) = a.b else { return usage("--transform cycle-cdf needs --b") };
            rec.param("b", num(b));
            Transform::CycleCdf(b)
        }
        TransformArg::ErfcGauss => Transform::ErfcGauss,
        TransformArg::Halfnormal => Transform::HalfNormal,
        TransformArg::Rayleigh => Transform::Rayleigh,
    };
    let spec = TransformSpec::new(t)?;
    let method = a.method.map(|m| match m {
        MethodArg::Talbot => Method::Talbot,
        MethodArg::Bromwich => Method::Bromwich,
    });
    if let Some(m) = method {
        rec.param("method", text(m.to_string()));
    }
    let inv = invert_with(&spec, a.xi, method, &InversionOptions::default())?;
    rec.value("value", num(inv.value))
        .value("method", text(inv.method.to_string()))
        .err_est("value", inv.error);
    Ok(vec![rec])
}

fn default_workers() -> usize {
    std::env::var(WORKERS_ENV)
        .ok()
        .and_then(|v| v.trim().parse::<usize>().ok())
        .filter(|&w| w > 0)
        .unwrap_or_else(|| std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1))
}

fn sim_cmd(a: &SimArgs) -> Out {
    let workers = a.workers.unwrap_or_else(default_workers);
    let mut opts = SimOptions::new(a.n, a.trials, a.seed)
        .with_constraint(a.constraint.0)
        .with_workers(workers);
    if let Some(cap) = a.max_attempts {
        opts = opts.with_max_attempts(cap);
    }
    let mut rec = Record::new("simulate");
    rec.param("n", int(a.n as u64))
        .param("trials", int(a.trials))
        .param("constraint", text(a.constraint.0.name()))
        .param("workers", int(workers as u64))
        .param("max_attempts", int(opts.attempt_cap()));
    rec.seed = Some(a.seed);
    let stats = match simulate(&opts) {
        Ok(s) => s,
        Err(e) => return Err(CliError::Compute(e, Some(rec))),
    };
    rec.value("accepted", int(stats.accepted()))
        .value("attempts", int(stats.attempts))
        .value("acceptance_rate", num(stats.acceptance_rate()))
        .err_est("acceptance_rate", stats.acceptance_std_error());
    for s in Stat::ALL {
        let n = s.name();
        rec.value(format!("mean_{n}"), num(stats.mean(s)))
            .value(format!("var_{n}"), num(stats.variance(s)))
            .err_est(format!("mean_{n}"), stats.std_error(s));
    }
    for r in 1..=4 {
        rec.value(format!("corr_lambda{r}_N"), num(stats.correlation(Stat::Cycle(r), Stat::CyclicPoints)));
    }
    for r in 1..=4 {
        for s in (r + 1)..=4 {
            rec.value(format!("corr_lambda{r}_lambda{s}"), num(stats.correlation(Stat::Cycle(r), Stat::Cycle(s))));
        }
    }
    Ok(vec![rec])
}

fn enum_cmd(a: &EnumArgs) -> Out {
    let mut rec = Record::new("enumerate");
    rec.param("n", int(a.n as u64)).param("check_egf", Value::Bool(a.check_egf));
    let t = enumerate_all(a.n)?;
    rec.value("total", int(t.total()))
        .value("connected_count", int(t.connected_count))
        .value("connected_fraction", num(t.connected_fraction()))
        .value("mean_lambda1", num(t.mean_longest_cycle()))
        .value("largest_holds_longest", int(t.largest_holds_longest));
    for ((m, l), c) in &t.counts {
        rec.value(format!("a_{}_{m}_{l}", a.n), int(*c));
    }
    if a.check_egf {
        let egf = count_table(a.n)?;
        let matched = egf == t.counts;
        rec.value("match", Value::Bool(matched));
        if a.n >= 2 {
            for row in weighted_sum_trend(a.n, &[1, 2, 3])?.iter().filter(|r| r.n == a.n) {
                rec.value(format!("weighted_ratio_m{}", row.m), num(row.ratio));
            }
        }
    }
    Ok(vec![rec])
}

fn div_cmd(a: &DivArgs) -> Out {
    if !(a.eta_min > 0.0 && a.eta_max >= a.eta_min) || a.steps == 0 {
        return usage("need 0 < eta-min <= eta-max and steps >= 1");
    }
    let grid: Vec<f64> = if a.steps == 1 {
        vec![a.eta_min]
    } else {
        (0..a.steps)
            .map(|i| a.eta_min + (a.eta_max - a.eta_min) * i as f64 / (a.steps - 1) as f64)
            .collect()
    };
    let rep = divisibility_report(&grid);
    let mut rec = Record::new("divisibility");
    rec.param("eta_min", num(a.eta_min))
        .param("eta_max", num(a.eta_max))
        .param("steps", int(a.steps as u64));
    rec.value("rows", int(rep.rows.len() as u64))
        .value("chain_holds_everywhere", Value::Bool(rep.chain_holds_everywhere))
        .value("max_approx_rel_error", num(rep.max_approx_rel_error))
        .value("max_roundtrip_error", num(rep.max_roundtrip_error))
        .value("root_inverse_xi_0.01", num(rep.root_inverse_small.1))
        .value("root_inverse_xi_1", num(rep.root_inverse_one.1))
        .value("root_inverse_ratio", num(rep.root_inverse_ratio))
        .value("failures", int(rep.failures.len() as u64));
    for (i, f) in rep.failures.iter().enumerate() {
        rec.value(format!("failure_{i}"), text(f));
    }
    Ok(vec![rec])
}
