//! Command-line front end.
//!
//! Exit codes: 0 success, 2 invalid arguments, 3 resource limit,
//! 4 indistinguishable maxima, 1 anything else.

use std::ffi::OsString;
use std::io::Write;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{Map, Value};

use crate::argmax::{argmax_report, mn_table, CriticalKind, Location};
use crate::error::{invalid, Error, Result};
use crate::moments::{moment, MomentMethod};
use crate::montecarlo::mc_tail;
use crate::number::{parse_rational, render_decimal, render_rational};
use crate::planner::{
    asymptotic_profile, best_plan, bound_profile, cheb_bound, exact_tail, rule_of_thumb_order, PlanQuery,
    DEFAULT_M_CAP,
};
use crate::scalar::rational_to_f64;
use crate::ExactRational;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Table,
    Csv,
    Json,
}

#[derive(Debug, Parser)]
#[command(
    name = "chebmom",
    version,
    about = "Exact binomial central moments and moment-optimized Chebyshev sample sizes",
    after_help = "Numbers accept num/den, integers, or decimals (converted exactly).\n\
                  Example: a 95% confidence estimate within ±5 points is --eps 1/20 --delta 1/20."
)]
struct Args {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Table)]
    format: Format,

    /// Digits after the decimal point in decimal renderings.
    #[arg(long, global = true, default_value_t = 12)]
    digits: usize,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// E S_n^{2m}(p) by the chosen route.
    Moment {
        #[arg(long)]
        n: u64,
        #[arg(long)]
        m: u32,
        #[arg(long, default_value = "1/2")]
        p: String,
        #[arg(long, default_value = "binomsum")]
        method: String,
    },
    /// Order-2m Chebyshev bound E S_n^{2m}(1/2) / (n eps)^{2m}.
    Bound {
        #[arg(long)]
        n: u64,
        #[arg(long)]
        eps: String,
        #[arg(long)]
        m: u32,
    },
    /// Bounds for m = 1..m-cap and the best valid order.
    Profile {
        #[arg(long)]
        n: u64,
        #[arg(long)]
        eps: String,
        #[arg(long, default_value_t = DEFAULT_M_CAP)]
        m_cap: u32,
        /// Allow orders beyond m_n.
        #[arg(long)]
        no_strict: bool,
    },
    /// Smallest sample size meeting P(|S_n/n| > eps) <= delta.
    Plan {
        #[arg(long)]
        eps: String,
        #[arg(long)]
        delta: String,
        #[arg(long, conflicts_with = "m_cap")]
        m: Option<u32>,
        #[arg(long)]
        m_cap: Option<u32>,
        /// Allow orders beyond m_n.
        #[arg(long)]
        no_strict: bool,
    },
    /// Critical points and maximizers of p -> E S_n^{2m}(p).
    Argmax {
        #[arg(long)]
        n: u64,
        #[arg(long)]
        m: u32,
        #[arg(long, default_value = "1/1000000000000")]
        width: String,
    },
    /// m_n for every n in a range.
    MnTable {
        #[arg(long)]
        n_min: u64,
        #[arg(long)]
        n_max: u64,
        #[arg(long, default_value_t = 15)]
        m_cap: u32,
    },
    /// Exact (or Monte Carlo) P(|S_n(p)/n| > eps).
    Tail {
        #[arg(long)]
        n: u64,
        #[arg(long)]
        p: String,
        #[arg(long)]
        eps: String,
        #[arg(long)]
        mc: bool,
        #[arg(long, default_value_t = 100_000)]
        samples: u64,
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Large-n limits B_m at effective sample size ntilde = n eps^2.
    Asymptotic {
        #[arg(long)]
        ntilde: String,
        #[arg(long, default_value_t = DEFAULT_M_CAP)]
        m_cap: u32,
    },
}

/// What one invocation produced; rendered as a table, CSV or JSON.
#[derive(Debug, Clone, Default)]
pub struct OutputRecord {
    pub command: String,
    pub inputs: Map<String, Value>,
    pub results: Map<String, Value>,
    pub decimals: Map<String, Value>,
    /// Tabular part of the result, one map per row with identical keys.
    pub rows: Vec<Map<String, Value>>,
}

impl OutputRecord {
    fn new(command: &str) -> Self {
        OutputRecord { command: command.to_string(), ..Default::default() }
    }

    fn input(&mut self, key: &str, value: impl Into<Value>) -> &mut Self {
        self.inputs.insert(key.to_string(), value.into());
        self
    }

    fn input_q(&mut self, key: &str, value: &ExactRational) -> &mut Self {
        self.input(key, render_rational(value))
    }

    fn result(&mut self, key: &str, value: impl Into<Value>) -> &mut Self {
        self.results.insert(key.to_string(), value.into());
        self
    }

    fn result_q(&mut self, key: &str, value: &ExactRational, digits: usize) -> &mut Self {
        self.results.insert(key.to_string(), render_rational(value).into());
        self.decimals.insert(key.to_string(), render_decimal(value, digits).into());
        self
    }

    pub fn to_json(&self) -> Value {
        let mut results = self.results.clone();
        if !self.rows.is_empty() {
            results.insert("rows".to_string(), Value::Array(self.rows.iter().cloned().map(Value::Object).collect()));
        }
        let mut obj = Map::new();
        obj.insert("command".to_string(), self.command.clone().into());
        obj.insert("inputs".to_string(), Value::Object(self.inputs.clone()));
        obj.insert("results".to_string(), Value::Object(results));
        if !self.decimals.is_empty() {
            obj.insert("decimals".to_string(), Value::Object(self.decimals.clone()));
        }
        Value::Object(obj)
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Json => {
                let mut s = serde_json::to_string_pretty(&self.to_json()).expect("plain json values");
                s.push('\n');
                s
            }
            Format::Csv => self.render_csv(),
            Format::Table => self.render_table(),
        }
    }

    fn render_csv(&self) -> String {
        let mut out = String::new();
        if self.rows.is_empty() {
            let mut header: Vec<String> = self.results.keys().cloned().collect();
            let mut values: Vec<String> = self.results.values().map(cell).collect();
            for (k, v) in &self.decimals {
                header.push(format!("{k}_decimal"));
                values.push(cell(v));
            }
            out.push_str(&header.join(","));
            out.push('\n');
            out.push_str(&values.join(","));
            out.push('\n');
        } else {
            let header: Vec<&String> = self.rows[0].keys().collect();
            out.push_str(&header.iter().map(|s| s.as_str()).collect::<Vec<_>>().join(","));
            out.push('\n');
            for row in &self.rows {
                out.push_str(&row.values().map(cell).collect::<Vec<_>>().join(","));
                out.push('\n');
            }
        }
        out
    }

    fn render_table(&self) -> String {
        let mut out = format!("{}\n", self.command);
        let width = self
            .inputs
            .keys()
            .chain(self.results.keys())
            .map(String::len)
            .max()
            .unwrap_or(0);
        for (k, v) in &self.inputs {
            out.push_str(&format!("  {k:<width$}  {}\n", cell(v)));
        }
        if !self.inputs.is_empty() {
            out.push_str("  --\n");
        }
        for (k, v) in &self.results {
            match self.decimals.get(k) {
                Some(d) => out.push_str(&format!("  {k:<width$}  {}  (≈ {})\n", cell(v), cell(d))),
                None => out.push_str(&format!("  {k:<width$}  {}\n", cell(v))),
            }
        }
        if !self.rows.is_empty() {
            let header: Vec<&String> = self.rows[0].keys().collect();
            let cells: Vec<Vec<String>> = self.rows.iter().map(|r| r.values().map(cell).collect()).collect();
            let widths: Vec<usize> = header
                .iter()
                .enumerate()
                .map(|(i, h)| cells.iter().map(|r| r[i].len()).chain([h.len()]).max().unwrap_or(0))
                .collect();
            out.push('\n');
            let line = |vals: Vec<&str>| {
                vals.iter()
                    .zip(&widths)
                    .map(|(v, w)| format!("{v:>w$}"))
                    .collect::<Vec<_>>()
                    .join("  ")
            };
            out.push_str(&format!("  {}\n", line(header.iter().map(|s| s.as_str()).collect())));
            for r in &cells {
                out.push_str(&format!("  {}\n", line(r.iter().map(String::as_str).collect())));
            }
        }
        out
    }
}

fn cell(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Array(items) => items.iter().map(cell).collect::<Vec<_>>().join(";"),
        other => other.to_string(),
    }
}

fn exit_code(e: &Error) -> i32 {
    match e {
        Error::InvalidArgument(_) => 2,
        Error::ResourceLimit { .. } => 3,
        Error::IndistinguishableMaxima { .. } => 4,
        Error::Internal(_) => 1,
    }
}

/// Parses `argv` (program name first), runs the subcommand and writes the
/// result to `out`, diagnostics to `err`. Returns the process exit code.
pub fn run<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let args = match Args::try_parse_from(argv) {
        Ok(a) => a,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let sink: &mut dyn Write = if code == 0 { out } else { err };
            let _ = sink.write_all(text.as_bytes());
            return code;
        }
    };
    match execute(&args) {
        Ok(record) => {
            if out.write_all(record.render(args.format).as_bytes()).is_err() {
                return 1;
            }
            0
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            exit_code(&e)
        }
    }
}

fn execute(args: &Args) -> Result<OutputRecord> {
    let d = args.digits;
    match &args.command {
        Command::Moment { n, m, p, method } => {
            let p = parse_rational(p)?;
            let method: MomentMethod = method.parse()?;
            let v = moment(*n, *m, &p, method)?;
            let mut rec = OutputRecord::new("moment");
            rec.input("n", *n).input("m", *m).input_q("p", &p).input("method", method.as_str());
            rec.result("n", v.n)
                .result("m", v.m)
                .result("p", render_rational(&v.p))
                .result("method", v.method.as_str())
                .result_q("value", &v.value, d);
            Ok(rec)
        }
        Command::Bound { n, eps, m } => {
            let eps = parse_rational(eps)?;
            let b = cheb_bound(*n, &eps, *m)?;
            let mut rec = OutputRecord::new("bound");
            rec.input("n", *n).input_q("eps", &eps).input("m", *m);
            rec.result_q("bound", &b, d);
            Ok(rec)
        }
        Command::Profile { n, eps, m_cap, no_strict } => {
            let eps = parse_rational(eps)?;
            let prof = bound_profile(*n, &eps, *m_cap, !no_strict)?;
            let mut rec = OutputRecord::new("profile");
            rec.input("n", *n).input_q("eps", &eps).input("m_cap", *m_cap).input("strict", !no_strict);
            rec.result("n", prof.n).result("epsilon", render_rational(&prof.epsilon));
            rec.result("best_m", prof.best_m).result_q("best_bound", &prof.best_bound, d);
            rec.result("validity_cap", prof.validity_cap.map_or(Value::Null, Value::from));
            for row in &prof.rows {
                let mut r = Map::new();
                r.insert("m".into(), row.m.into());
                r.insert("bound".into(), render_rational(&row.bound).into());
                r.insert("bound_decimal".into(), render_decimal(&row.bound, d).into());
                r.insert("selectable".into(), row.selectable.into());
                rec.rows.push(r);
            }
            Ok(rec)
        }
        Command::Plan { eps, delta, m, m_cap, no_strict } => {
            let mut query = PlanQuery::new(parse_rational(eps)?, parse_rational(delta)?);
            query.m = *m;
            if let Some(cap) = m_cap {
                query.m_cap = *cap;
            }
            query.strict = !no_strict;
            let best = best_plan(&query)?;
            let mut rec = OutputRecord::new("plan");
            rec.input_q("eps", &query.epsilon).input_q("delta", &query.delta);
            rec.input("m", m.map_or(Value::Null, Value::from));
            rec.input("m_cap", query.m_cap).input("strict", query.strict);
            let plan = &best.plan;
            rec.result("n_star", plan.n_star)
                .result("m_used", plan.m_used)
                .result_q("achieved_bound", &plan.achieved_bound, d)
                .result_q("effective_sample_size", &plan.effective_sample_size, d)
                .result("validity_binding", best.validity_binding);
            if m.is_none() {
                for c in &best.candidates {
                    let mut r = Map::new();
                    r.insert("m".into(), c.m.into());
                    r.insert("n_star".into(), c.n_star.into());
                    r.insert("valid".into(), c.valid.into());
                    rec.rows.push(r);
                }
            }
            Ok(rec)
        }
        Command::Argmax { n, m, width } => {
            let width = parse_rational(width)?;
            let rep = argmax_report(*n, *m, &width)?;
            let mut rec = OutputRecord::new("argmax");
            rec.input("n", *n).input("m", *m).input_q("width", &width);
            rec.result("n", rep.n)
                .result("m", rep.m)
                .result("is_half_argmax", rep.is_half_argmax)
                .result("derivative_criterion", rep.derivative_criterion)
                .result_q("value_at_half", &rep.value_at_half, d)
                .result_q("max_value_lower", &rep.max_value_bounds.0, d)
                .result_q("max_value_upper", &rep.max_value_bounds.1, d);
            let maximizers: Vec<Value> = rep.maximizers.iter().map(|l| location_text(l).into()).collect();
            rec.result("maximizers", maximizers);
            rec.result("notes", rep.notes.iter().cloned().map(Value::from).collect::<Vec<_>>());
            for c in &rep.critical_points {
                let (lo, hi) = match &c.location {
                    Location::Exact(x) => (x.clone(), x.clone()),
                    Location::Interval(r) => (r.lo.clone(), r.hi.clone()),
                };
                let kind = match c.kind {
                    CriticalKind::LocalMax => "local_max",
                    CriticalKind::LocalMin => "local_min",
                    CriticalKind::Flat => "flat",
                };
                let mut r = Map::new();
                r.insert("kind".into(), kind.into());
                r.insert("exact".into(), matches!(c.location, Location::Exact(_)).into());
                r.insert("lo".into(), render_rational(&lo).into());
                r.insert("hi".into(), render_rational(&hi).into());
                r.insert("center_decimal".into(), render_decimal(&c.location.center(), d).into());
                rec.rows.push(r);
            }
            Ok(rec)
        }
        Command::MnTable { n_min, n_max, m_cap } => {
            let table = mn_table(*n_min, *n_max, *m_cap)?;
            let mut rec = OutputRecord::new("mn-table");
            rec.input("n_min", *n_min).input("n_max", *n_max).input("m_cap", *m_cap);
            for row in &table.rows {
                let mut r = Map::new();
                r.insert("n".into(), row.n.into());
                r.insert("m_n".into(), row.m_n.into());
                r.insert("capped".into(), row.capped.into());
                r.insert("warning".into(), row.warning.into());
                rec.rows.push(r);
            }
            Ok(rec)
        }
        Command::Tail { n, p, eps, mc, samples, seed } => {
            let p = parse_rational(p)?;
            let eps = parse_rational(eps)?;
            let mut rec = OutputRecord::new("tail");
            rec.input("n", *n).input_q("p", &p).input_q("eps", &eps);
            if *mc {
                let seed = seed.ok_or_else(|| invalid("--mc requires an explicit --seed"))?;
                rec.input("samples", *samples).input("seed", seed);
                let r = mc_tail(*n, rational_to_f64(&p), rational_to_f64(&eps), *samples, seed)?;
                rec.result("estimate", r.estimate)
                    .result("stderr", r.stderr)
                    .result("exceedances", r.exceedances)
                    .result("samples", r.samples);
            } else {
                if seed.is_some() {
                    return Err(invalid("--seed only applies with --mc"));
                }
                let t = exact_tail(*n, &p, &eps)?;
                rec.result_q("tail", &t, d);
            }
            Ok(rec)
        }
        Command::Asymptotic { ntilde, m_cap } => {
            let nt = parse_rational(ntilde)?;
            let prof = asymptotic_profile(&nt, *m_cap)?;
            let order = rule_of_thumb_order(&nt)?;
            let mut rec = OutputRecord::new("asymptotic");
            rec.input_q("ntilde", &nt).input("m_cap", *m_cap);
            rec.result("ntilde", render_rational(&prof.ntilde))
                .result("m_star", prof.m_star)
                .result_q("threshold", &prof.threshold, d)
                .result("rule_of_thumb_order", order);
            for (m, b) in &prof.rows {
                let mut r = Map::new();
                r.insert("m".into(), (*m).into());
                r.insert("b_m".into(), render_rational(b).into());
                r.insert("b_m_decimal".into(), render_decimal(b, d).into());
                rec.rows.push(r);
            }
            Ok(rec)
        }
    }
}

fn location_text(l: &Location) -> String {
    match l {
        Location::Exact(x) => render_rational(x),
        Location::Interval(r) => format!("({} .. {})", render_rational(&r.lo), render_rational(&r.hi)),
    }
}
