//! `diophant`: builds continued fractions with prescribed quotient growth,
//! computes minima of the lattices `Λθ`, estimates weak uniform exponents
//! and checks the inequalities of the spectrum construction.
//!
//! [`run`] is the whole program; the binary only forwards its output and
//! exit code.

mod table;

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use diophant_core::cf::{CFNumber, QuotientRule, DEFAULT_MAX_DIGITS};
use diophant_core::exponents::{
    convergent_hyperbolic, direct_weak_profile, omega_hat_hat_lattice_of, omega_hat_hat_number,
    omega_hat_uniform, omega_regular, verify_classical_sandwich, verify_denominator_sandwich,
    verify_dirichlet, verify_empty_parallelogram, verify_lemma2_premise, verify_lemma3_growth,
    verify_product_bounds, verify_spectrum_point, ExponentEstimate, SpectrumOptions, Verdict,
    VerificationReport,
};
use diophant_core::json::{
    convergents_json, document, estimate_json, minima_json, profile_json, report_json,
};
use diophant_core::lattice::{
    brute_minima, class_difference, hyperbolic_from_relative, relative_minima_convergent,
    MinimaKind, MinimaSequence, DEFAULT_MAX_PREIMAGES,
};
use diophant_core::{rat, Error, Rat};
use serde_json::{json, Value};

use table::Table;

pub mod exit {
    pub const CERTIFIED: i32 = 0;
    pub const REFUTED: i32 = 1;
    pub const INCONCLUSIVE: i32 = 2;
    pub const FAILURE: i32 = 3;
    pub const USAGE: i32 = 64;
}

/// Overrides the default digit budget; `--max-digits` overrides both.
pub const MAX_DIGITS_ENV: &str = "DIOPHANT_MAX_DIGITS";

/// Preimage cap for the parallelogram sweeps behind `ω̂` in `exponents`.
const PARALLELOGRAM_PREIMAGES: u64 = 1_000_000;

#[derive(Debug, Parser)]
#[command(
    name = "diophant",
    version,
    about = "Continued fractions, lattice minima and certified Diophantine exponents"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// Write the artifact here (atomically) instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,

    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,

    /// Convergent table to resume from and to update.
    #[arg(long, global = true)]
    pub cache: Option<PathBuf>,

    /// Cap on the decimal digits of any convergent denominator.
    #[arg(long, global = true)]
    pub max_digits: Option<u64>,

    /// Cap on preimages examined by one exhaustive sweep.
    #[arg(long, global = true, default_value_t = DEFAULT_MAX_PREIMAGES)]
    pub max_preimages: u64,

    /// Accepted for compatibility; nothing here is random.
    #[arg(long, global = true, hide = true)]
    pub seed: Option<u64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    Brute,
    Convergent,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Kind {
    Relative,
    Hyperbolic,
}

impl From<Kind> for MinimaKind {
    fn from(k: Kind) -> Self {
        match k {
            Kind::Relative => MinimaKind::Relative,
            Kind::Hyperbolic => MinimaKind::Hyperbolic,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Claim {
    Lemma2Premise,
    Lemma3Growth,
    ProductBounds,
    DenominatorSandwich,
    ClassicalSandwich,
    Dirichlet,
    SpectrumPoint,
    EmptyParallelogram,
}

fn parse_rat(s: &str) -> Result<Rat, String> {
    s.trim()
        .parse::<Rat>()
        .map_err(|_| format!("`{s}` is not a rational (expected p/q or an integer)"))
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Quotients and convergents of a rule.
    Construct {
        #[arg(long)]
        rule: String,
        #[arg(long, default_value_t = 10)]
        depth: usize,
    },
    /// Traces and tail estimates of ω, ω̂, ω̂̂ of θ and ω̂̂ of Λθ.
    Exponents {
        #[arg(long)]
        rule: String,
        #[arg(long, default_value_t = 10)]
        depth: usize,
        /// Trailing trace entries the tail estimate is taken over.
        #[arg(long)]
        window: Option<usize>,
    },
    /// Relative or hyperbolic minima up to a sup-norm bound.
    Minima {
        #[arg(long)]
        rule: String,
        #[arg(long, value_parser = parse_rat)]
        bound: Rat,
        #[arg(long, value_enum, default_value_t = Mode::Convergent)]
        mode: Mode,
        #[arg(long, value_enum, default_value_t = Kind::Relative)]
        kind: Kind,
        /// Run both modes and compare the class sets.
        #[arg(long)]
        diff: bool,
    },
    /// Check a claim; exits 0 only when it is certified.
    Verify {
        #[arg(value_enum)]
        claim: Claim,
        #[arg(long)]
        rule: Option<String>,
        /// Growth exponents, comma separated.
        #[arg(long, value_parser = parse_rat, value_delimiter = ',')]
        gamma: Vec<Rat>,
        #[arg(long, default_value_t = 10)]
        depth: usize,
        #[arg(long, value_parser = parse_rat, default_value = "1/100")]
        tol: Rat,
        /// Sample points for `dirichlet`, comma separated.
        #[arg(long, value_parser = parse_rat, value_delimiter = ',')]
        t: Vec<Rat>,
        #[arg(long)]
        window: Option<usize>,
    },
    /// `f(t)`, the least Π over the lattice points with sup-norm at most `t`.
    Profile {
        #[arg(long)]
        rule: String,
        #[arg(long, value_parser = parse_rat, value_delimiter = ',', required = true)]
        t: Vec<Rat>,
    },
}

/// What a run printed and how it ended.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

#[derive(Debug)]
enum Failure {
    Core(Error),
    Io(String),
    Usage(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Core(e)
    }
}

impl Failure {
    fn code(&self) -> i32 {
        match self {
            Failure::Core(e) => core_code(e),
            Failure::Io(_) => exit::FAILURE,
            Failure::Usage(_) => exit::USAGE,
        }
    }

    fn message(&self) -> String {
        match self {
            Failure::Core(e) => e.to_string(),
            Failure::Io(m) | Failure::Usage(m) => m.clone(),
        }
    }
}

fn core_code(e: &Error) -> i32 {
    match e {
        Error::Budget { .. }
        | Error::Undecided(_)
        | Error::Tie(_)
        | Error::FormulaInapplicable(_) => exit::INCONCLUSIVE,
        Error::InvalidArgument(_) | Error::InvalidRule(..) => exit::USAGE,
        _ => exit::FAILURE,
    }
}

fn verdict_code(v: Verdict) -> i32 {
    match v {
        Verdict::Certified => exit::CERTIFIED,
        Verdict::Refuted => exit::REFUTED,
        Verdict::Inconclusive => exit::INCONCLUSIVE,
    }
}

struct Artifact {
    kind: &'static str,
    data: Value,
    table: Table,
    code: i32,
}

struct Context {
    max_digits: u64,
    max_preimages: u64,
    cache: Option<PathBuf>,
}

impl Context {
    fn number(&self, rule: &str) -> Result<CFNumber, Failure> {
        let fresh = CFNumber::parse(rule)?.with_max_digits(self.max_digits);
        let Some(path) = self.cache.as_deref().filter(|p| p.exists()) else {
            return Ok(fresh);
        };
        let text = std::fs::read_to_string(path)
            .map_err(|e| Failure::Io(format!("{}: {e}", path.display())))?;
        let value: Value = serde_json::from_str(&text)
            .map_err(|e| Failure::Core(Error::Cache(format!("{}: {e}", path.display()))))?;
        let cached = CFNumber::from_cache_json(&value, self.max_digits)?;
        if cached.rule() != fresh.rule() {
            return Err(Failure::Usage(format!(
                "cache {} holds {}, not {}",
                path.display(),
                cached.rule(),
                fresh.rule()
            )));
        }
        Ok(cached)
    }

    fn save(&self, cf: &CFNumber) -> Result<(), Failure> {
        match &self.cache {
            Some(path) => {
                let text =
                    serde_json::to_string(&cf.to_cache_json()).expect("JSON values serialize");
                write_atomic(path, &text)
            }
            None => Ok(()),
        }
    }
}

fn write_atomic(path: &Path, text: &str) -> Result<(), Failure> {
    let io = |e: std::io::Error| Failure::Io(format!("{}: {e}", path.display()));
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(io)?;
    tmp.write_all(text.as_bytes()).map_err(io)?;
    tmp.persist(path).map_err(|e| io(e.error))?;
    Ok(())
}

fn max_digits(flag: Option<u64>) -> Result<u64, Failure> {
    if let Some(d) = flag {
        return Ok(d);
    }
    match std::env::var(MAX_DIGITS_ENV) {
        Ok(s) => s
            .trim()
            .parse()
            .map_err(|_| Failure::Usage(format!("{MAX_DIGITS_ENV}=`{s}` is not a digit count"))),
        Err(_) => Ok(DEFAULT_MAX_DIGITS),
    }
}

/// Runs the program on `args` (including the program name).
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                Outcome {
                    code: exit::USAGE,
                    stdout: String::new(),
                    stderr: text,
                }
            } else {
                Outcome {
                    code: 0,
                    stdout: text,
                    stderr: String::new(),
                }
            };
        }
    };
    let result = max_digits(cli.max_digits).and_then(|max_digits| {
        let ctx = Context {
            max_digits,
            max_preimages: cli.max_preimages,
            cache: cli.cache.clone(),
        };
        execute(&cli.command, &ctx)
    });
    let (artifact, stderr) = match result {
        Ok(a) => (a, String::new()),
        Err(f) => {
            let message = f.message();
            let artifact = Artifact {
                kind: "error",
                data: json!({ "error": message, "exit_code": f.code() }),
                table: Table::new(&["error"]).row(vec![message.clone()]),
                code: f.code(),
            };
            (artifact, format!("error: {message}\n"))
        }
    };
    let text = match cli.format {
        Format::Json => {
            let doc = document(artifact.kind, artifact.data);
            serde_json::to_string_pretty(&doc).expect("JSON values serialize") + "\n"
        }
        Format::Csv => artifact.table.render(),
    };
    match &cli.out {
        None => Outcome {
            code: artifact.code,
            stdout: text,
            stderr,
        },
        Some(path) => match write_atomic(path, &text) {
            Ok(()) => Outcome {
                code: artifact.code,
                stdout: String::new(),
                stderr,
            },
            Err(f) => Outcome {
                code: exit::FAILURE,
                stdout: String::new(),
                stderr: format!("{stderr}error: {}\n", f.message()),
            },
        },
    }
}

fn execute(command: &Command, ctx: &Context) -> Result<Artifact, Failure> {
    match command {
        Command::Construct { rule, depth } => construct(ctx, rule, *depth),
        Command::Exponents {
            rule,
            depth,
            window,
        } => exponents(ctx, rule, *depth, *window),
        Command::Minima {
            rule,
            bound,
            mode,
            kind,
            diff,
        } => minima(ctx, rule, bound, *mode, *kind, *diff),
        Command::Verify {
            claim,
            rule,
            gamma,
            depth,
            tol,
            t,
            window,
        } => verify(ctx, *claim, rule.as_deref(), gamma, *depth, tol, t, *window),
        Command::Profile { rule, t } => profile(ctx, rule, t),
    }
}

fn construct(ctx: &Context, rule: &str, depth: usize) -> Result<Artifact, Failure> {
    let mut cf = ctx.number(rule)?;
    let extended = cf.extend_to(depth).map(|_| ());
    ctx.save(&cf)?;
    extended?;
    let mut data = convergents_json(&cf);
    data["convergents"]
        .as_array_mut()
        .expect("array")
        .truncate(depth + 1);
    Ok(Artifact {
        kind: "construct",
        table: table::convergents(&cf, depth),
        data,
        code: exit::CERTIFIED,
    })
}

/// Values the constructions are built to reach, keyed like [`Exponent::as_str`].
fn targets(rule: &QuotientRule) -> [Option<Rat>; 4] {
    let one = Rat::from_integer(1.into());
    match rule {
        QuotientRule::PowerGrowth(g) => {
            let lattice = g / (rat(2, 1) + g * rat(2, 1));
            [
                Some(&one + g),
                Some(one.clone()),
                Some(&one + &lattice * rat(2, 1)),
                Some(lattice),
            ]
        }
        QuotientRule::SuperGrowth => [None, Some(one), Some(rat(2, 1)), Some(rat(1, 2))],
        QuotientRule::Explicit(_) | QuotientRule::Periodic { .. } => [
            Some(one.clone()),
            Some(one.clone()),
            Some(one),
            Some(rat(0, 1)),
        ],
        QuotientRule::Rational(..) => [None, None, None, None],
    }
}

fn exponents(
    ctx: &Context,
    rule: &str,
    depth: usize,
    window: Option<usize>,
) -> Result<Artifact, Failure> {
    if depth < 3 {
        return Err(Failure::Usage(format!(
            "depth must be at least 3, got {depth}"
        )));
    }
    let mut cf = ctx.number(rule)?;
    let goals = targets(cf.rule());
    let results: [Result<ExponentEstimate, Error>; 4] = [
        omega_regular(&mut cf, depth, window),
        omega_hat_uniform(
            &mut cf,
            depth,
            ctx.max_preimages.min(PARALLELOGRAM_PREIMAGES),
        ),
        omega_hat_hat_number(&mut cf, depth, window),
        omega_hat_hat_lattice_of(&mut cf, depth, window),
    ];
    ctx.save(&cf)?;
    let mut code = exit::CERTIFIED;
    let mut estimates = serde_json::Map::new();
    let mut table = table::estimates_header();
    for (result, goal) in results.into_iter().zip(goals) {
        match result {
            Ok(mut e) => {
                if !e.infinite {
                    e.target = e.target.or(goal);
                }
                table = table::estimate_rows(table, &e);
                estimates.insert(e.exponent.as_str().to_string(), estimate_json(&e));
            }
            Err(err) => {
                code = code.max(core_code(&err));
                let name = format!("error_{}", estimates.len());
                estimates.insert(name, json!({ "error": err.to_string() }));
            }
        }
    }
    Ok(Artifact {
        kind: "exponents",
        data: json!({
            "rule": cf.rule().to_string(),
            "depth": depth,
            "estimates": estimates,
        }),
        table,
        code,
    })
}

fn convergent_sequence(
    cf: &mut CFNumber,
    bound: &Rat,
    kind: MinimaKind,
) -> Result<MinimaSequence, Error> {
    let rel = relative_minima_convergent(cf, bound)?;
    match kind {
        MinimaKind::Relative => Ok(rel),
        MinimaKind::Hyperbolic => hyperbolic_from_relative(&rel),
    }
}

fn minima(
    ctx: &Context,
    rule: &str,
    bound: &Rat,
    mode: Mode,
    kind: Kind,
    diff: bool,
) -> Result<Artifact, Failure> {
    if bound <= &rat(0, 1) {
        return Err(Failure::Usage(format!(
            "bound must be positive, got {bound}"
        )));
    }
    let mut cf = ctx.number(rule)?;
    let kind = MinimaKind::from(kind);
    let artifact = if diff {
        let brute = brute_minima(&mut cf, bound, kind, ctx.max_preimages)?;
        let conv = convergent_sequence(&mut cf, bound, kind)?;
        let (only_brute, only_conv) = class_difference(&brute, &conv);
        let equal = only_brute.is_empty() && only_conv.is_empty();
        Artifact {
            kind: "minima-diff",
            data: json!({
                "rule": cf.rule().to_string(),
                "equal": equal,
                "only_brute": key_list(&only_brute),
                "only_convergent": key_list(&only_conv),
                "brute": minima_json(&brute),
                "convergent": minima_json(&conv),
            }),
            table: table::minima(
                table::minima(table::minima_header(), "brute", &brute),
                "convergent",
                &conv,
            ),
            code: if equal {
                exit::CERTIFIED
            } else {
                exit::REFUTED
            },
        }
    } else {
        let seq = match mode {
            Mode::Brute => brute_minima(&mut cf, bound, kind, ctx.max_preimages)?,
            Mode::Convergent => convergent_sequence(&mut cf, bound, kind)?,
        };
        let source = match mode {
            Mode::Brute => "brute",
            Mode::Convergent => "convergent",
        };
        Artifact {
            kind: "minima",
            data: json!({
                "rule": cf.rule().to_string(),
                "mode": source,
                "minima": minima_json(&seq),
            }),
            table: table::minima(table::minima_header(), source, &seq),
            code: exit::CERTIFIED,
        }
    };
    ctx.save(&cf)?;
    Ok(artifact)
}

fn key_list<X: ToString>(keys: &[(X, X)]) -> Vec<Value> {
    keys.iter()
        .map(|(x, y)| json!([x.to_string(), y.to_string()]))
        .collect()
}

fn gammas_for(gamma: &[Rat], rule: Option<&str>) -> Result<Vec<Rat>, Failure> {
    if !gamma.is_empty() {
        return Ok(gamma.to_vec());
    }
    match rule.map(str::parse::<QuotientRule>).transpose()? {
        Some(QuotientRule::PowerGrowth(g)) => Ok(vec![g]),
        _ => Err(Failure::Usage(
            "this claim needs --gamma or --rule power:U/V".to_string(),
        )),
    }
}

fn need_rule(rule: Option<&str>) -> Result<&str, Failure> {
    rule.ok_or_else(|| Failure::Usage("this claim needs --rule".to_string()))
}

/// Runs `f` for every γ on its own thread, keeping the input order.
fn per_gamma<F>(gammas: &[Rat], f: F) -> Result<Vec<VerificationReport>, Failure>
where
    F: Fn(&Rat) -> Result<VerificationReport, Error> + Sync,
{
    std::thread::scope(|s| {
        let handles: Vec<_> = gammas.iter().map(|g| s.spawn(|| f(g))).collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("worker panicked").map_err(Failure::from))
            .collect()
    })
}

#[allow(clippy::too_many_arguments)]
fn verify(
    ctx: &Context,
    claim: Claim,
    rule: Option<&str>,
    gamma: &[Rat],
    depth: usize,
    tol: &Rat,
    t: &[Rat],
    window: Option<usize>,
) -> Result<Artifact, Failure> {
    let max_digits = ctx.max_digits;
    let reports = match claim {
        Claim::SpectrumPoint => {
            let opts = SpectrumOptions { window, max_digits };
            per_gamma(&gammas_for(gamma, rule)?, |g| {
                verify_spectrum_point(g, depth, tol, &opts)
            })?
        }
        Claim::ProductBounds => per_gamma(&gammas_for(gamma, rule)?, |g| {
            verify_product_bounds(g, depth, max_digits)
        })?,
        Claim::DenominatorSandwich => per_gamma(&gammas_for(gamma, rule)?, |g| {
            verify_denominator_sandwich(g, depth, max_digits)
        })?,
        Claim::Dirichlet => {
            if t.is_empty() {
                return Err(Failure::Usage("dirichlet needs --t".to_string()));
            }
            let g = match gamma {
                [] => Rat::from_integer(1.into()),
                [g] => g.clone(),
                _ => {
                    return Err(Failure::Usage(
                        "dirichlet takes a single --gamma".to_string(),
                    ))
                }
            };
            let mut cf = ctx.number(need_rule(rule)?)?;
            let report = verify_dirichlet(&mut cf, t, &g);
            ctx.save(&cf)?;
            vec![report?]
        }
        Claim::Lemma2Premise
        | Claim::Lemma3Growth
        | Claim::ClassicalSandwich
        | Claim::EmptyParallelogram => {
            let mut cf = ctx.number(need_rule(rule)?)?;
            let report = match claim {
                Claim::Lemma2Premise => verify_lemma2_premise(&mut cf, depth),
                Claim::Lemma3Growth => {
                    convergent_hyperbolic(&mut cf, depth).and_then(|seq| verify_lemma3_growth(&seq))
                }
                Claim::ClassicalSandwich => verify_classical_sandwich(&mut cf, depth),
                _ => verify_empty_parallelogram(&mut cf, depth, ctx.max_preimages),
            };
            ctx.save(&cf)?;
            vec![report?]
        }
    };
    let verdict = overall(&reports);
    let name = reports.first().map_or("", |r| r.claim);
    Ok(Artifact {
        kind: "verify",
        data: json!({
            "claim": name,
            "verdict": verdict.as_str(),
            "reports": reports.iter().map(report_json).collect::<Vec<_>>(),
        }),
        table: table::reports(&reports),
        code: verdict_code(verdict),
    })
}

fn overall(reports: &[VerificationReport]) -> Verdict {
    if reports.iter().any(|r| r.verdict == Verdict::Refuted) {
        Verdict::Refuted
    } else if reports.iter().all(|r| r.verdict == Verdict::Certified) {
        Verdict::Certified
    } else {
        Verdict::Inconclusive
    }
}

fn profile(ctx: &Context, rule: &str, t: &[Rat]) -> Result<Artifact, Failure> {
    let mut cf = ctx.number(rule)?;
    let f = direct_weak_profile(&mut cf, t, ctx.max_preimages)?;
    ctx.save(&cf)?;
    Ok(Artifact {
        kind: "profile",
        data: json!({ "rule": cf.rule().to_string(), "profile": profile_json(&f) }),
        table: table::profile(&f),
        code: exit::CERTIFIED,
    })
}
