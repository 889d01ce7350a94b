use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{ArgGroup, Parser, Subcommand, ValueEnum};
use lntest_core::{
    build_table, hoeffding_test, kendall_test, ln_test_permutation, load_table, pearson_test,
    permutation_from_sample, run_power_study, spearman_test, AssociationStatistic, Error,
    ExactLnTable, PValueVariant, PairedSample, PowerStudyConfig, TestReport, TiePolicy,
    TwDistribution, MAX_TABLE_N,
};

#[derive(Parser)]
#[command(
    name = "lntest",
    version,
    about = "Longest-increasing-subsequence test of independence"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Test independence of the x and y columns of a CSV file.
    Test(TestArgs),
    /// Build the exact null table of L_n.
    Table {
        #[arg(long, default_value_t = MAX_TABLE_N)]
        n_max: usize,
        /// Output file (stdout if omitted).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Evaluate the Tracy-Widom (beta = 2) distribution.
    #[command(group(ArgGroup::new("what").required(true).args(["quantile", "cdf"])))]
    Tw {
        #[arg(long)]
        quantile: Option<f64>,
        #[arg(long, allow_hyphen_values = true)]
        cdf: Option<f64>,
    },
    /// Run a Monte Carlo power study from a TOML config.
    Power {
        #[arg(long)]
        config: PathBuf,
        /// Output CSV (stdout if omitted).
        #[arg(long)]
        out: Option<PathBuf>,
        /// Overrides the seed in the config.
        #[arg(long)]
        seed: Option<u64>,
    },
}

#[derive(Parser)]
struct TestArgs {
    /// CSV with header `x,y`.
    input: PathBuf,
    #[arg(long, value_enum, default_value_t = TestMethod::Ln)]
    method: TestMethod,
    #[arg(long, default_value_t = 0.05)]
    alpha: f64,
    #[arg(long, value_enum, default_value_t = Ties::Reject)]
    ties: Ties,
    #[arg(long, default_value = "exclusive")]
    variant: PValueVariant,
    /// Exact table CSV (bundled n <= 100 table if omitted).
    #[arg(long)]
    table: Option<PathBuf>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Monte Carlo permutations for the Hoeffding null.
    #[arg(long, default_value_t = 2000)]
    mc_reps: usize,
    /// Multi-line readable output.
    #[arg(long)]
    human: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum TestMethod {
    Ln,
    Pearson,
    Spearman,
    Kendall,
    Hoeffding,
}

#[derive(Clone, Copy, ValueEnum)]
enum Ties {
    Reject,
    Random,
}

enum Failure {
    Usage(String),
    Core(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Core(e)
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Core(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(if e.is_numeric_failure() { 3 } else { 2 })
        }
    }
}

fn run(command: Command) -> Result<(), Failure> {
    match command {
        Command::Test(args) => run_test(&args),
        Command::Table { n_max, out } => {
            let table = build_table(n_max)?;
            emit(out.as_deref(), &table.to_csv())
        }
        Command::Tw { quantile, cdf } => {
            let tw = TwDistribution::shared()?;
            let v = match (quantile, cdf) {
                (Some(p), _) => tw.quantile(p)?,
                (_, Some(t)) if t.is_finite() => tw.cdf_saturating(t),
                (_, Some(t)) => {
                    return Err(Failure::Usage(format!(
                        "cdf argument must be finite, got {t}"
                    )))
                }
                _ => unreachable!("clap enforces the group"),
            };
            println!("{}", sig10(v));
            Ok(())
        }
        Command::Power { config, out, seed } => {
            let mut cfg = PowerStudyConfig::load(&config)?;
            if let Some(s) = seed {
                cfg.seed = s;
            }
            let table = ExactLnTable::bundled()?;
            let tw = TwDistribution::shared()?;
            let result = run_power_study(&cfg, &table, Some(tw))?;
            emit(out.as_deref(), &result.to_csv())
        }
    }
}

fn run_test(args: &TestArgs) -> Result<(), Failure> {
    let sample = read_sample(&args.input)?;
    if !(args.alpha > 0.0 && args.alpha < 1.0) {
        return Err(Failure::Usage(format!(
            "alpha must be in (0, 1), got {}",
            args.alpha
        )));
    }
    let line = match args.method {
        TestMethod::Ln => {
            let table = match &args.table {
                Some(p) => load_table(p)?,
                None => ExactLnTable::bundled()?,
            };
            let policy = match args.ties {
                Ties::Reject => TiePolicy::Reject,
                Ties::Random => TiePolicy::RandomBreak,
            };
            let perm = permutation_from_sample(&sample, policy, Some(args.seed))?;
            let tw = if perm.len() > table.n_max() {
                Some(TwDistribution::shared()?)
            } else {
                None
            };
            let report = ln_test_permutation(&perm, args.alpha, &table, tw, args.variant)?;
            format_ln(&report, args.human)
        }
        m => {
            let stat = match m {
                TestMethod::Pearson => pearson_test(&sample)?,
                TestMethod::Spearman => spearman_test(&sample)?,
                TestMethod::Kendall => kendall_test(&sample)?,
                _ => hoeffding_test(&sample, args.mc_reps, args.seed)?,
            };
            format_reference(&stat, args.alpha, args.human)
        }
    };
    println!("{line}");
    Ok(())
}

fn read_sample(path: &Path) -> Result<PairedSample, Failure> {
    let mut reader = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_path(path)
        .map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
    let headers = reader
        .headers()
        .map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?
        .clone();
    let col = |name: &str| {
        headers
            .iter()
            .position(|h| h.eq_ignore_ascii_case(name))
            .ok_or_else(|| Failure::Usage(format!("{}: missing column {name:?}", path.display())))
    };
    let (ix, iy) = (col("x")?, col("y")?);
    let mut pairs = Vec::new();
    for (i, record) in reader.records().enumerate() {
        let record = record.map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
        let field = |j: usize| -> Result<f64, Failure> {
            let raw = record.get(j).unwrap_or("");
            raw.parse().map_err(|_| {
                Failure::Usage(format!(
                    "{}: row {}: not a number: {raw:?}",
                    path.display(),
                    i + 2
                ))
            })
        };
        pairs.push((field(ix)?, field(iy)?));
    }
    Ok(PairedSample::new(pairs)?)
}

fn format_ln(r: &TestReport, human: bool) -> String {
    let p = r.p_value.map_or("NA".to_string(), sig10);
    let stat = if r.statistic.fract() == 0.0 {
        format!("{}", r.statistic)
    } else {
        sig10(r.statistic)
    };
    if human {
        format!(
            "L_n test of independence\n  n          {}\n  {:<10} {stat}\n  p-value    {p}\n  method     {}\n  alpha      {}\n  decision   {}",
            r.n,
            r.statistic_name,
            r.method,
            r.alpha,
            if r.reject { "reject independence" } else { "do not reject" }
        )
    } else {
        format!(
            "test=ln n={} stat={stat} p={p} method={} alpha={} reject={}",
            r.n, r.method, r.alpha, r.reject
        )
    }
}

fn format_reference(s: &AssociationStatistic, alpha: f64, human: bool) -> String {
    let method = match s.name.name() {
        "kendall" => "NormalApprox",
        "hoeffding" => "MonteCarlo",
        _ => "StudentT",
    };
    let reject = s.p_value <= alpha;
    if human {
        format!(
            "{} test of independence\n  n          {}\n  statistic  {}\n  p-value    {}\n  method     {method}\n  alpha      {alpha}\n  decision   {}",
            s.name,
            s.n,
            sig10(s.value),
            sig10(s.p_value),
            if reject { "reject independence" } else { "do not reject" }
        )
    } else {
        format!(
            "test={} n={} stat={} p={} method={method} alpha={alpha} reject={reject}",
            s.name.name(),
            s.n,
            sig10(s.value),
            sig10(s.p_value)
        )
    }
}

/// Ten significant digits, trailing zeros trimmed.
fn sig10(x: f64) -> String {
    if x == 0.0 || !x.is_finite() {
        return format!("{x}");
    }
    let mag = x.abs().log10().floor() as i32;
    if !(-5..=10).contains(&mag) {
        return format!("{x:.9e}");
    }
    let prec = (9 - mag).max(0) as usize;
    let s = format!("{x:.prec$}");
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s
    }
}

fn emit(out: Option<&Path>, text: &str) -> Result<(), Failure> {
    match out {
        Some(path) => fs::write(path, text).map_err(|source| {
            Failure::Core(Error::Io {
                path: path.to_path_buf(),
                source,
            })
        }),
        None => std::io::stdout()
            .write_all(text.as_bytes())
            .map_err(|e| Failure::Usage(e.to_string())),
    }
}
