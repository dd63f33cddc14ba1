//! Job specifications, dispatch, and report rendering for the `wildmckay`
//! binary.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use wildmckay_core::covers::{enumerate_etale, uniformizer_disc_valuation, CoverError, CoverSpec};
use wildmckay_core::groups::{partitions, perm_exponents, LinearAction};
use wildmckay_core::motivic::{realize_e, realize_point_count, realize_poincare, Exponent, MotPoly, MotValue};
use wildmckay_core::stringy::{
    bhargava_lhs, bhargava_rhs, discrepancy, mckay_zp_integral, stringy_tame, Discrepancy, McKayOptions, StratumLabel,
    StringyError, StringyReport,
};
use wildmckay_core::tuning::{tame_v, v_invariant, TuningError, TuningOptions};

use crate::expr;
use crate::json::*;

pub const EXIT_OK: i32 = 0;
pub const EXIT_IO: i32 = 1;
pub const EXIT_INVALID: i32 = 2;
pub const EXIT_PRECISION: i32 = 3;

const DEFAULT_JUMP_CAP: u64 = 12;

#[derive(Debug, Clone)]
pub enum Failure {
    Invalid(String),
    Precision(String),
    Io(String),
}

impl Failure {
    pub fn code(&self) -> i32 {
        match self {
            Failure::Invalid(_) => EXIT_INVALID,
            Failure::Precision(_) => EXIT_PRECISION,
            Failure::Io(_) => EXIT_IO,
        }
    }

    pub fn message(&self) -> &str {
        match self {
            Failure::Invalid(m) | Failure::Precision(m) | Failure::Io(m) => m,
        }
    }
}

impl From<SchemaError> for Failure {
    fn from(e: SchemaError) -> Self {
        Failure::Invalid(e.to_string())
    }
}

impl From<expr::ExprError> for Failure {
    fn from(e: expr::ExprError) -> Self {
        Failure::Invalid(e.to_string())
    }
}

impl From<TuningError> for Failure {
    fn from(e: TuningError) -> Self {
        if e.is_precision() {
            Failure::Precision(e.to_string())
        } else {
            Failure::Invalid(e.to_string())
        }
    }
}

impl From<StringyError> for Failure {
    fn from(e: StringyError) -> Self {
        match e {
            StringyError::UndeterminedTail => Failure::Precision(e.to_string()),
            StringyError::Tuning(t) => t.into(),
            other => Failure::Invalid(other.to_string()),
        }
    }
}

impl From<CoverError> for Failure {
    fn from(e: CoverError) -> Self {
        match e {
            CoverError::Linalg(_) | CoverError::Series(_) => Failure::Precision(e.to_string()),
            other => Failure::Invalid(other.to_string()),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum, Default)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Json,
    Text,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Command {
    Stringy,
    Mckay,
    Vinv,
    Bhargava,
    Ring,
    Covers,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct JobOptions {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub precision: Option<i64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub jump_cap: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub q: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub out: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub format: Option<Format>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EvalJson {
    pub expr: String,
}

/// A fully described job; the subcommands build one from their flags.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct JobSpec {
    pub command: Command,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub action: Option<ActionJson>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cover: Option<CoverJson>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub eval: Option<EvalJson>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n: Option<u64>,
    #[serde(default)]
    pub options: JobOptions,
}

#[derive(Debug, Parser)]
#[command(name = "wildmckay", version, about = "Stringy motives of quotient singularities, exactly")]
pub struct Cli {
    #[command(subcommand)]
    pub command: CliCommand,
    #[command(flatten)]
    pub flags: Flags,
}

#[derive(Debug, Subcommand)]
pub enum CliCommand {
    /// Stringy motive of a linear action.
    Stringy,
    /// Wild McKay integral of a Z/p action, stratified by jump.
    Mckay,
    /// The v-invariant of an action against a cover.
    Vinv,
    /// Both sides of the Bhargava mass identity.
    Bhargava,
    /// Evaluate a motivic expression.
    Ring {
        /// `{"expr": "..."}`
        #[arg(long)]
        eval: String,
    },
    /// Enumerate étale algebras, or describe a single cover.
    Covers,
    /// Run a JSON job specification; flags override its options.
    Job {
        /// Inline JSON, or `@path`.
        #[arg(long)]
        spec: String,
    },
}

#[derive(Debug, Args, Default)]
pub struct Flags {
    /// Action JSON, e.g. `{"kind":"perm","n":2,"m":2}`.
    #[arg(long, global = true)]
    pub action: Option<String>,
    /// Cover JSON, e.g. `{"kind":"as","p":2,"f":{"3":1}}`.
    #[arg(long, global = true)]
    pub cover: Option<String>,
    #[arg(long, global = true)]
    pub n: Option<u64>,
    #[arg(long, global = true)]
    pub q: Option<u64>,
    #[arg(long = "jump-cap", global = true)]
    pub jump_cap: Option<u64>,
    /// Starting t-adic precision for the tuning computations.
    #[arg(long, global = true)]
    pub precision: Option<i64>,
    /// Write the report here instead of standard output.
    #[arg(long, global = true)]
    pub out: Option<String>,
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
}

fn parse_json<T: for<'de> Deserialize<'de>>(what: &str, s: &str) -> Result<T, Failure> {
    serde_json::from_str(s).map_err(|e| Failure::Invalid(format!("{what}: {e}")))
}

impl Cli {
    /// The job described by the command line.
    pub fn job(&self) -> Result<JobSpec, Failure> {
        let command = match &self.command {
            CliCommand::Stringy => Command::Stringy,
            CliCommand::Mckay => Command::Mckay,
            CliCommand::Vinv => Command::Vinv,
            CliCommand::Bhargava => Command::Bhargava,
            CliCommand::Ring { .. } => Command::Ring,
            CliCommand::Covers => Command::Covers,
            CliCommand::Job { spec } => {
                let text = match spec.strip_prefix('@') {
                    Some(path) => std::fs::read_to_string(path).map_err(|e| Failure::Io(format!("{path}: {e}")))?,
                    None => spec.clone(),
                };
                let mut job: JobSpec = parse_json("job", &text)?;
                self.apply_flags(&mut job)?;
                return Ok(job);
            }
        };
        let mut job = JobSpec { command, action: None, cover: None, eval: None, n: None, options: JobOptions::default() };
        if let CliCommand::Ring { eval } = &self.command {
            job.eval = Some(parse_json("eval", eval)?);
        }
        self.apply_flags(&mut job)?;
        Ok(job)
    }

    fn apply_flags(&self, job: &mut JobSpec) -> Result<(), Failure> {
        let f = &self.flags;
        if let Some(a) = &f.action {
            job.action = Some(parse_json("action", a)?);
        }
        if let Some(c) = &f.cover {
            job.cover = Some(parse_json("cover", c)?);
        }
        job.n = f.n.or(job.n);
        let o = &mut job.options;
        o.q = f.q.or(o.q);
        o.jump_cap = f.jump_cap.or(o.jump_cap);
        o.precision = f.precision.or(o.precision);
        o.out = f.out.clone().or(o.out.take());
        o.format = f.format.or(o.format);
        Ok(())
    }
}

/// A rendered report and its exit code.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub output: String,
    pub warning: Option<String>,
}

fn tuning_options(job: &JobSpec) -> TuningOptions {
    TuningOptions { start_precision: job.options.precision, ..TuningOptions::default() }
}

fn need<'a, T>(x: &'a Option<T>, what: &str) -> Result<&'a T, Failure> {
    x.as_ref().ok_or_else(|| Failure::Invalid(format!("missing --{what}")))
}

pub fn run(job: &JobSpec) -> Result<Outcome, Failure> {
    let format = job.options.format.unwrap_or_default();
    let mut warning = None;
    let output = match job.command {
        Command::Stringy | Command::Mckay => {
            let action = LinearAction::try_from(need(&job.action, "action")?)?;
            let report = match (&action, job.command) {
                (LinearAction::Modular(_), _) => wild_report(&action, job)?,
                (_, Command::Mckay) => return Err(Failure::Invalid("mckay needs a modp action".into())),
                _ => tame_report(&action, job)?,
            };
            if report.converges.is_none() {
                warning = Some("wild tail not closed below the jump cap; value is a partial sum".into());
            }
            render(&report, format, report_text)?
        }
        Command::Vinv => {
            let action = LinearAction::try_from(need(&job.action, "action")?)?;
            let opts = tuning_options(job);
            let r = match (&job.cover, &action) {
                (Some(c), _) => v_invariant(&action, &CoverSpec::try_from(c)?, &opts)?,
                (None, LinearAction::Tame(t)) => tame_v(t, &opts)?,
                (None, _) => return Err(Failure::Invalid("missing --cover".into())),
            };
            render(&TuningJson::from(&r), format, |t| format!("v = {}\ndivisors = {:?}\nprec = {}\n", t.v, t.divisors, t.prec))?
        }
        Command::Bhargava => {
            let n = *need(&job.n, "n")?;
            let q = *need(&job.options.q, "q")?;
            let lhs = bhargava_lhs(n, q)?;
            let rhs = bhargava_rhs(n, q);
            let b = BhargavaJson { equal: lhs == rhs, lhs: lhs.to_string(), rhs: rhs.to_string() };
            render(&b, format, |b| format!("lhs = {}\nrhs = {}\nequal = {}\n", b.lhs, b.rhs, b.equal))?
        }
        Command::Ring => {
            let value = expr::parse(&need(&job.eval, "eval")?.expr)?;
            let point_count = match job.options.q {
                Some(q) => Some(realize_point_count(&value, q).map_err(|e| Failure::Invalid(e.to_string()))?.to_string()),
                None => None,
            };
            let r = RingJson { value: MotValueJson::from(&value), q: job.options.q, point_count };
            match format {
                Format::Json => json_line(&r)?,
                Format::Text => match &r.point_count {
                    Some(c) => format!("{c}\n"),
                    None => format!("{value}\n"),
                },
            }
        }
        Command::Covers => match (&job.cover, job.n) {
            (Some(c), _) => {
                let spec = CoverSpec::try_from(c)?;
                let info = cover_info(&spec)?;
                render(&info, format, |i| {
                    let jump = i.jump.map_or(String::new(), |j| format!(", jump {j}"));
                    format!("degree {}{jump}, discriminant valuation {}\n", i.degree, i.disc)
                })?
            }
            (None, Some(n)) => {
                let q = *need(&job.options.q, "q")?;
                let n = u32::try_from(n).map_err(|_| Failure::Invalid(format!("degree {n}")))?;
                let fams: Vec<FamilyJson> = enumerate_etale(n, q)?.iter().map(|f| FamilyJson::new(f, q)).collect();
                render(&fams, format, |fs| {
                    let mut s = String::new();
                    for f in fs {
                        let _ = writeln!(s, "{}  aut {}  count {}  conductor {}  mass {}", f.factors.join(" x "), f.aut, f.count, f.conductor, f.mass);
                    }
                    s
                })?
            }
            (None, None) => return Err(Failure::Invalid("covers needs --cover or --n".into())),
        },
    };
    let code = if warning.is_some() { EXIT_PRECISION } else { EXIT_OK };
    Ok(Outcome { code, output, warning })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RingJson {
    pub value: MotValueJson,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub q: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub point_count: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CoverInfoJson {
    pub cover: CoverJson,
    pub degree: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub jump: Option<u64>,
    /// Discriminant valuation of the integral model.
    pub disc: i64,
}

fn cover_info(spec: &CoverSpec) -> Result<CoverInfoJson, Failure> {
    let (jump, prec) = match spec {
        CoverSpec::ArtinSchreier(a) => (Some(a.jump()), 8 * (a.jump() as i64 + 2)),
        CoverSpec::Kummer(_) => (None, 8),
    };
    let disc = uniformizer_disc_valuation(&spec.integral_model(prec)?)?;
    Ok(CoverInfoJson { cover: CoverJson::from(spec), degree: spec.degree(), jump, disc })
}

fn json_line<T: Serialize>(x: &T) -> Result<String, Failure> {
    let mut s = serde_json::to_string(x).map_err(|e| Failure::Io(e.to_string()))?;
    s.push('\n');
    Ok(s)
}

fn render<T: Serialize>(x: &T, format: Format, text: impl FnOnce(&T) -> String) -> Result<String, Failure> {
    match format {
        Format::Json => json_line(x),
        Format::Text => Ok(text(x)),
    }
}

fn realizations(value: &MotValue, q: Option<u64>) -> BTreeMap<String, String> {
    let mut out = BTreeMap::new();
    let mut qs = vec![2u64];
    qs.extend(q);
    for q in qs {
        if let Ok(x) = realize_point_count(value, q) {
            out.insert(format!("q={q}"), x.to_string());
        }
    }
    if let Some(p) = value.as_poly() {
        out.insert("poincare".into(), realize_poincare(p).to_string());
        out.insert("e".into(), realize_e(p).to_string());
    }
    out
}

fn fmt_discrepancy(d: Discrepancy) -> String {
    match d {
        Discrepancy::Finite(e) => fmt_rational(e),
        Discrepancy::NegInfinity => "-inf".into(),
    }
}

fn point_stratum(label: String, d: usize, age: Exponent) -> StratumJson {
    let e = Exponent::from_integer(d as i64) - age;
    StratumJson {
        label,
        class: MotValueJson::from(&MotPoly::one()),
        v: fmt_rational(age),
        dim: fmt_rational(e),
        contribution: MotValueJson::from(&MotPoly::l_pow(e)),
    }
}

fn tame_report(action: &LinearAction, job: &JobSpec) -> Result<ReportJson, Failure> {
    let value = MotValue::Poly(stringy_tame(action)?);
    let d = action.dim();
    let strata = match action {
        LinearAction::Tame(a) => {
            let a = a.effective();
            (0..a.order()).map(|k| point_stratum(format!("g^{k}"), d, a.age(k))).collect()
        }
        LinearAction::Perm(p) => partitions(p.n)
            .into_iter()
            .map(|l| {
                let age = perm_exponents(&l, p.m).age(1);
                let parts: Vec<String> = l.iter().map(|k| k.to_string()).collect();
                point_stratum(format!("({})", parts.join(",")), d, age)
            })
            .collect(),
        LinearAction::Modular(_) => unreachable!(),
    };
    let disc = discrepancy(action, 0, &McKayOptions::default()).ok().map(|r| fmt_discrepancy(r.discrepancy));
    Ok(ReportJson {
        dim: fmt_dim(value.dim()),
        realizations: realizations(&value, job.options.q),
        value: MotValueJson::from(&value),
        converges: Some(true),
        strata,
        discrepancy: disc,
    })
}

fn wild_report(action: &LinearAction, job: &JobSpec) -> Result<ReportJson, Failure> {
    let LinearAction::Modular(m) = action else { unreachable!() };
    let cap = job.options.jump_cap.unwrap_or(DEFAULT_JUMP_CAP);
    let opts = McKayOptions { tuning: tuning_options(job), ..McKayOptions::default() };
    let r: StringyReport = mckay_zp_integral(m, cap, &opts)?;
    let disc = match r.converges {
        Some(true) => discrepancy(action, cap, &opts).ok().map(|d| fmt_discrepancy(d.discrepancy)),
        Some(false) => Some(fmt_discrepancy(Discrepancy::NegInfinity)),
        None => None,
    };
    let strata = r
        .strata
        .iter()
        .map(|s| StratumJson {
            label: match &s.label {
                StratumLabel::Trivial => "trivial".into(),
                StratumLabel::Tame { l, k } => format!("tame l={l} k={k}"),
                StratumLabel::Wild { p, jump } => format!("p={p} j={jump}"),
                StratumLabel::WildTail { p, residue, from_jump } => {
                    format!("p={p} j={from_jump}+{p}k (j = {residue} mod {p})")
                }
            },
            class: MotValueJson::from(&s.coarse_class),
            v: fmt_rational(s.v),
            dim: fmt_rational(s.dim),
            contribution: MotValueJson::from(&s.contribution),
        })
        .collect();
    Ok(ReportJson {
        dim: fmt_dim(r.dim),
        realizations: realizations(&r.value, job.options.q),
        value: MotValueJson::from(&r.value),
        converges: r.converges,
        strata,
        discrepancy: disc,
    })
}

fn report_text(r: &ReportJson) -> String {
    let value = MotValue::try_from(&r.value).map(|v| v.to_string()).unwrap_or_default();
    let mut s = format!("value: {value}\ndim: {}\n", r.dim);
    let conv = match r.converges {
        Some(true) => "yes",
        Some(false) => "no",
        None => "undetermined",
    };
    let _ = writeln!(s, "converges: {conv}");
    if let Some(d) = &r.discrepancy {
        let _ = writeln!(s, "discrepancy: {d}");
    }
    for st in &r.strata {
        let c = MotValue::try_from(&st.contribution).map(|v| v.to_string()).unwrap_or_default();
        let _ = writeln!(s, "  {}: v = {}, contributes {c}", st.label, st.v);
    }
    for (k, v) in &r.realizations {
        let _ = writeln!(s, "{k}: {v}");
    }
    s
}
