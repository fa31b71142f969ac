use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use tsecon::causality::{toda_yamamoto, toda_yamamoto_all_pairs, RestrictionMode};
use tsecon::cointegration::{johansen_trace, JohansenCase};
use tsecon::mclab::{rejection_rate_with, write_csv, AdfTarget, DgpKind, DgpSpec, TestConfig};
use tsecon::series::align;
use tsecon::unitroot::{adf_test, DeterministicSpec, LagPolicy};
use tsecon::varmodel::{fit_var, residual_lm, select_lag, stability};
use tsecon::{Dataset, Execution};
use tsecon_cli::config::PipelineConfig;
use tsecon_cli::csvio::{header_columns, load_csv, write_csv as write_data_csv};
use tsecon_cli::demo::{demo_config, demo_dataset, DEMO_SEED};
use tsecon_cli::error::{CliError, Result};
use tsecon_cli::report::{fmt4, fmt_sci3};
use tsecon_cli::{emit_report, run_pipeline};

#[derive(Parser)]
#[command(name = "tsecon", version, about = "Time-series econometrics toolkit")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Augmented Dickey-Fuller test on one column
    Adf(AdfArgs),
    /// VAR lag order selection table
    VarSelect(VarSelectArgs),
    /// Fit a VAR(p) and report stability and residual LM tests
    VarFit(VarFitArgs),
    /// Johansen trace test
    Johansen(JohansenArgs),
    /// Toda-Yamamoto causality tests
    Ty(TyArgs),
    /// Monte Carlo size/power of a test
    Mc(McArgs),
    /// Run the full pipeline from a config file
    Pipeline(PipelineArgs),
    /// Write the synthetic demo dataset and config
    DemoData(DemoArgs),
}

#[derive(Args)]
struct DataArgs {
    /// CSV with a `date` column (YYYY-MM)
    #[arg(long)]
    input: PathBuf,
    /// Comma-separated variable columns (default: all)
    #[arg(long, value_delimiter = ',')]
    columns: Vec<String>,
    /// Print JSON instead of a table
    #[arg(long)]
    json: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum SpecArg {
    None,
    Constant,
    Trend,
}

impl From<SpecArg> for DeterministicSpec {
    fn from(s: SpecArg) -> Self {
        match s {
            SpecArg::None => DeterministicSpec::None,
            SpecArg::Constant => DeterministicSpec::Constant,
            SpecArg::Trend => DeterministicSpec::ConstantAndTrend,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum CaseArg {
    None,
    RestrictedConstant,
    UnrestrictedConstant,
}

impl From<CaseArg> for JohansenCase {
    fn from(c: CaseArg) -> Self {
        match c {
            CaseArg::None => JohansenCase::NoDeterministic,
            CaseArg::RestrictedConstant => JohansenCase::RestrictedConstant,
            CaseArg::UnrestrictedConstant => JohansenCase::UnrestrictedConstant,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    FirstP,
    AllLags,
}

impl From<ModeArg> for RestrictionMode {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::FirstP => RestrictionMode::FirstP,
            ModeArg::AllLags => RestrictionMode::AllLags,
        }
    }
}

#[derive(Args)]
struct AdfArgs {
    #[command(flatten)]
    data: DataArgs,
    #[arg(long, value_enum, default_value = "constant")]
    spec: SpecArg,
    /// Fixed lag count (default: Schwarz choice)
    #[arg(long)]
    lags: Option<usize>,
    #[arg(long)]
    max_lags: Option<usize>,
}

#[derive(Args)]
struct VarSelectArgs {
    #[command(flatten)]
    data: DataArgs,
    #[arg(long, default_value_t = 8)]
    max_p: usize,
}

#[derive(Args)]
struct VarFitArgs {
    #[command(flatten)]
    data: DataArgs,
    #[arg(long)]
    p: usize,
    #[arg(long, default_value_t = 12)]
    lm_lags: usize,
}

#[derive(Args)]
struct JohansenArgs {
    #[command(flatten)]
    data: DataArgs,
    #[arg(long, default_value_t = 1)]
    vecm_lag: usize,
    #[arg(long, value_enum, default_value = "restricted-constant")]
    case: CaseArg,
}

#[derive(Args)]
struct TyArgs {
    #[command(flatten)]
    data: DataArgs,
    #[arg(long)]
    p: usize,
    #[arg(long, default_value_t = 1)]
    d_max: usize,
    #[arg(long, value_enum, default_value = "first-p")]
    mode: ModeArg,
    /// Only this dependent variable (requires --cause)
    #[arg(long, requires = "cause")]
    target: Option<String>,
    #[arg(long, requires = "target")]
    cause: Option<String>,
}

#[derive(Clone, Copy, ValueEnum)]
enum McTest {
    Adf,
    Johansen,
    Ty,
}

#[derive(Clone, Copy, ValueEnum)]
enum McDgp {
    RandomWalk,
    Cointegrated,
    Causal,
    Independent,
}

#[derive(Args)]
struct McArgs {
    #[arg(long, value_enum)]
    test: McTest,
    #[arg(long, value_enum)]
    dgp: McDgp,
    /// Variables for random-walk / cointegrated processes
    #[arg(long, default_value_t = 2)]
    k: usize,
    #[arg(long, default_value_t = 250)]
    t: usize,
    #[arg(long, default_value_t = 1000)]
    reps: usize,
    #[arg(long, default_value_t = 0.05)]
    alpha: f64,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Causal coefficient, or AR coefficient of the equilibrium error
    #[arg(long, default_value_t = 0.5)]
    coefficient: f64,
    /// VAR order for Toda-Yamamoto, lagged differences for Johansen
    #[arg(long, default_value_t = 1)]
    lags: usize,
    /// Also write the report as CSV
    #[arg(long)]
    csv: Option<PathBuf>,
    #[arg(long)]
    sequential: bool,
}

#[derive(Args)]
struct PipelineArgs {
    #[arg(long)]
    config: PathBuf,
    /// Overrides the config's output_dir
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct DemoArgs {
    #[arg(long)]
    out: PathBuf,
    #[arg(long, default_value_t = DEMO_SEED)]
    seed: u64,
}

fn stage<T>(r: tsecon::Result<T>, stage: &'static str) -> Result<T> {
    r.map_err(|source| CliError::Stage { stage, source })
}

fn load(args: &DataArgs) -> Result<Dataset> {
    let columns = if args.columns.is_empty() {
        header_columns(&args.input)?
    } else {
        args.columns.clone()
    };
    let series = load_csv(&args.input, &columns)?;
    stage(align(&series), "load")
}

fn print_json<T: Serialize>(value: &T) {
    println!("{}", serde_json::to_string_pretty(value).expect("serializable"));
}

fn adf(args: AdfArgs) -> Result<()> {
    let ds = load(&args.data)?;
    if ds.nvars() != 1 {
        return Err(CliError::Config("adf takes exactly one column (use --columns)".into()));
    }
    let policy = match args.lags {
        Some(n) => LagPolicy::Fixed(n),
        None => LagPolicy::Schwarz {
            max_lags: args.max_lags,
        },
    };
    let res = stage(adf_test(&ds.column(0), args.spec.into(), policy), "adf")?;
    if args.data.json {
        print_json(&res);
    } else {
        println!("ADF {} ({:?}, {} lags, {} obs)", ds.names()[0], res.spec, res.lags, res.nobs);
        println!("t = {}  p = {}", fmt4(res.statistic), fmt4(res.p_value));
        let cv = res.critical_values;
        println!("critical values 1% {}  5% {}  10% {}", fmt4(cv.one), fmt4(cv.five), fmt4(cv.ten));
    }
    Ok(())
}

fn var_select(args: VarSelectArgs) -> Result<()> {
    if args.max_p == 0 {
        return Err(CliError::Config("lag selection needs max_p >= 1".into()));
    }
    let ds = load(&args.data)?;
    let table = stage(select_lag(&ds, args.max_p, true), "var_select")?;
    if args.data.json {
        print_json(&table);
        return Ok(());
    }
    println!("T = {}", table.t);
    println!("{:>4} {:>14} {:>12} {:>12} {:>10} {:>10} {:>10}", "Lag", "LogL", "LR", "FPE", "AIC", "SC", "HQ");
    let star = |b: bool| if b { "*" } else { "" };
    for r in &table.rows {
        println!(
            "{:>4} {:>14} {:>12} {:>12} {:>10} {:>10} {:>10}",
            r.p,
            fmt4(r.loglik),
            r.lr.map_or("NA".to_string(), |v| format!("{}{}", fmt4(v), star(r.flags.lr))),
            format!("{}{}", fmt_sci3(r.fpe), star(r.flags.fpe)),
            format!("{}{}", fmt4(r.aic), star(r.flags.aic)),
            format!("{}{}", fmt4(r.sc), star(r.flags.sc)),
            format!("{}{}", fmt4(r.hq), star(r.flags.hq)),
        );
    }
    Ok(())
}

#[derive(Serialize)]
struct VarFitOut {
    names: Vec<String>,
    p: usize,
    t_eff: usize,
    loglik: f64,
    constant: Vec<f64>,
    lag_matrices: Vec<Vec<Vec<f64>>>,
    stability: tsecon::varmodel::StabilityReport,
    lm: Vec<tsecon::varmodel::LmResult>,
}

fn var_fit(args: VarFitArgs) -> Result<()> {
    let ds = load(&args.data)?;
    let fit = stage(fit_var(&ds, args.p, true), "var_fit")?;
    let roots = stage(stability(&fit), "stability")?;
    let lm = stage((1..=args.lm_lags).map(|h| residual_lm(&fit, h)).collect(), "lm")?;
    let out = VarFitOut {
        names: fit.names.clone(),
        p: fit.p,
        t_eff: fit.t_eff,
        loglik: fit.loglik,
        constant: fit.constant.iter().copied().collect(),
        lag_matrices: fit
            .lag_matrices
            .iter()
            .map(|a| a.row_iter().map(|r| r.iter().copied().collect()).collect())
            .collect(),
        stability: roots,
        lm,
    };
    if args.data.json {
        print_json(&out);
        return Ok(());
    }
    println!("VAR({}) on {} observations, log-likelihood {}", out.p, out.t_eff, fmt4(out.loglik));
    for (l, a) in out.lag_matrices.iter().enumerate() {
        println!("A{}:", l + 1);
        for row in a {
            println!("  {}", row.iter().map(|v| format!("{:>10}", fmt4(*v))).collect::<String>());
        }
    }
    println!("max root modulus {} ({})", fmt4(out.stability.max_modulus()), if out.stability.stable { "stable" } else { "not stable" });
    for r in &out.lm {
        println!("LM({:>2}) = {:>10}  df {}  p {}", r.lag, fmt4(r.statistic), r.df, fmt4(r.p_value));
    }
    Ok(())
}

fn johansen(args: JohansenArgs) -> Result<()> {
    let ds = load(&args.data)?;
    let res = stage(johansen_trace(&ds, args.vecm_lag, args.case.into()), "johansen")?;
    if args.data.json {
        print_json(&res);
        return Ok(());
    }
    println!("{:<10} {:>10} {:>12} {:>10} {:>8}", "r", "Eigenvalue", "Trace", "5% cv", "Prob");
    for row in &res.rows {
        println!(
            "{:<10} {:>10} {:>12} {:>10} {:>8}",
            row.r,
            fmt4(row.eigenvalue),
            fmt4(row.trace),
            fmt4(row.critical_value_5),
            fmt4(row.p_value)
        );
    }
    println!("selected rank: {}", res.selected_rank);
    Ok(())
}

fn ty(args: TyArgs) -> Result<()> {
    let ds = load(&args.data)?;
    let results = match (&args.target, &args.cause) {
        (Some(t), Some(c)) => {
            let find = |n: &String| ds.index_of(n).ok_or_else(|| CliError::MissingColumn(n.clone()));
            let r = toda_yamamoto(&ds, find(t)?, find(c)?, args.p, args.d_max, args.mode.into());
            vec![stage(r, "toda_yamamoto")?]
        }
        _ => stage(
            toda_yamamoto_all_pairs(&ds, args.p, args.d_max, args.mode.into(), Execution::default()),
            "toda_yamamoto",
        )?,
    };
    if args.data.json {
        print_json(&results);
        return Ok(());
    }
    println!("{:<12} {:<12} {:>10} {:>4} {:>8}", "Dependent", "Excluded", "Chi-sq", "df", "Prob");
    for r in &results {
        println!("{:<12} {:<12} {:>10} {:>4} {:>8}", r.target, r.cause, fmt4(r.statistic), r.df, fmt4(r.p_value));
    }
    Ok(())
}

fn mc(args: McArgs) -> Result<()> {
    let kind = match args.dgp {
        McDgp::RandomWalk => DgpKind::RandomWalk { k: args.k },
        McDgp::Cointegrated => {
            let mut vector = vec![-1.0 / (args.k.max(2) - 1) as f64; args.k.max(2)];
            vector[0] = 1.0;
            DgpKind::CointegratedSystem {
                vector,
                error_ar: args.coefficient,
            }
        }
        McDgp::Causal => DgpKind::CausalBivariate {
            coefficient: args.coefficient,
        },
        McDgp::Independent => DgpKind::IndependentBivariate,
    };
    let dgp = DgpSpec::new(kind, args.t, args.seed).map_err(|e| CliError::Config(e.to_string()))?;
    let test = match args.test {
        McTest::Adf => TestConfig::Adf {
            target: AdfTarget::Column(0),
            spec: DeterministicSpec::Constant,
            policy: LagPolicy::default(),
        },
        McTest::Johansen => TestConfig::JohansenRankPositive {
            vecm_lag: args.lags,
            case: JohansenCase::RestrictedConstant,
        },
        McTest::Ty => TestConfig::TodaYamamoto {
            target: 1,
            cause: 0,
            p: args.lags,
            d_max: 1,
            mode: RestrictionMode::FirstP,
        },
    };
    let exec = if args.sequential { Execution::Sequential } else { Execution::Parallel };
    let report = rejection_rate_with(&test, &dgp, args.reps, args.alpha, exec)
        .map_err(|e| CliError::Config(e.to_string()))?;
    println!(
        "{} on {} (T = {}): {} of {} rejected at {} -> rate {} (se {}), {} failures",
        report.test,
        report.dgp,
        report.t,
        report.rejections,
        report.reps,
        report.alpha,
        fmt4(report.rate),
        fmt4(report.mc_se),
        report.failures
    );
    if let Some(path) = args.csv {
        let file = std::fs::File::create(&path).map_err(|e| CliError::io(&path, e))?;
        write_csv(&[report], file).map_err(|e| CliError::io(&path, e))?;
    }
    Ok(())
}

fn pipeline(args: PipelineArgs) -> Result<()> {
    let cfg = PipelineConfig::load(&args.config)?;
    let out = args.out.unwrap_or_else(|| cfg.output_path());
    let bundle = run_pipeline(&cfg)?;
    emit_report(&bundle, &out)?;
    print!("{}", bundle.report_text);
    eprintln!("wrote {}", out.display());
    Ok(())
}

fn demo_data(args: DemoArgs) -> Result<()> {
    let ds = demo_dataset(args.seed)?;
    std::fs::create_dir_all(&args.out).map_err(|e| CliError::io(&args.out, e))?;
    let csv_path = args.out.join("demo.csv");
    let file = std::fs::File::create(&csv_path).map_err(|e| CliError::io(&csv_path, e))?;
    write_data_csv(&ds, file).map_err(|e| CliError::io(&csv_path, e))?;
    let cfg_path: &Path = &args.out.join("demo.toml");
    std::fs::write(cfg_path, demo_config(args.seed).to_toml()).map_err(|e| CliError::io(cfg_path, e))?;
    eprintln!("wrote {} and {}", csv_path.display(), cfg_path.display());
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Adf(a) => adf(a),
        Command::VarSelect(a) => var_select(a),
        Command::VarFit(a) => var_fit(a),
        Command::Johansen(a) => johansen(a),
        Command::Ty(a) => ty(a),
        Command::Mc(a) => mc(a),
        Command::Pipeline(a) => pipeline(a),
        Command::DemoData(a) => demo_data(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
