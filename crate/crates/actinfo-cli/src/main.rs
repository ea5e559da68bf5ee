//! `actinfo`: exact tests, critical values, tables, goodness of fit, and
//! Monte Carlo cross-checks for the active-information statistic.
//!
//! Exit codes: 0 success (or "do not reject"), 1 rejection or a failed
//! Monte Carlo check, 2 usage or validation error.

use std::fs;
use std::path::PathBuf;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand};

use actinfo::table::{ONE_SIDED_TABLE_ALPHAS, TWO_SIDED_TABLE_ALPHAS};
use actinfo::{
    cdf_one_sided, cdf_two_sided, conservation_bound_check, critical_one_sided, critical_two_sided,
    empirical_cdf, empirical_critical, generate_table, gof_statistic, run_test, CriticalMode,
    DiscreteDist, GofInput, InfoUnit, InfoValue, Prior, ReferenceModel, Sidedness, TableFormat,
    TableSpec, TestSpec,
};

#[derive(Parser)]
#[command(
    name = "actinfo",
    version,
    about = "Exact hypothesis testing for the active-information statistic log(p/q)"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the critical value for a significance level
    Critical(CriticalArgs),
    /// Test an observed probability; prints the result as JSON
    Test(TestArgs),
    /// Evaluate the CDF (or tail) of the statistic at a threshold
    Cdf(CdfArgs),
    /// Generate a rejection-region table (CSV or Markdown)
    Table(TableArgs),
    /// Goodness-of-fit statistic between two distributions
    Gof(GofArgs),
    /// Monte Carlo cross-check of a closed form
    McCheck(McCheckArgs),
}

#[derive(Args)]
struct ModelFlags {
    /// Reference model: uniform:N or event:q
    #[arg(long = "ref", default_value = "uniform:2")]
    reference: String,
    /// Prior for p: uniform | beta:a,b | empirical:path.json
    #[arg(long, default_value = "uniform")]
    prior: String,
}

impl ModelFlags {
    fn reference(&self) -> Result<ReferenceModel> {
        Ok(self.reference.parse()?)
    }

    fn prior(&self) -> Result<Prior> {
        parse_prior(&self.prior)
    }
}

#[derive(Args)]
struct CriticalArgs {
    /// Significance level in (0, 1)
    #[arg(long)]
    alpha: f64,
    /// one | two
    #[arg(long)]
    sided: String,
    /// Output unit(s), comma separated: bits | nats | nits:N
    #[arg(long, default_value = "nats")]
    unit: String,
    /// Two-sided computation: exact | paper-table
    #[arg(long, default_value = "exact")]
    mode: String,
    #[command(flatten)]
    model: ModelFlags,
    /// Print full precision instead of 4 decimals
    #[arg(long)]
    raw: bool,
}

#[derive(Args)]
struct TestArgs {
    /// Observed exogenous probability in (0, 1]
    #[arg(long = "p-obs")]
    p_obs: f64,
    #[arg(long)]
    sided: String,
    #[arg(long)]
    alpha: f64,
    /// Unit for the reported statistic and critical value
    #[arg(long, default_value = "nats")]
    unit: String,
    #[arg(long, default_value = "exact")]
    mode: String,
    #[command(flatten)]
    model: ModelFlags,
}

#[derive(Args)]
struct CdfArgs {
    /// Threshold value (in --unit; magnitude in nats for two-sided)
    #[arg(long)]
    x: f64,
    #[arg(long)]
    sided: String,
    #[arg(long, default_value = "nats")]
    unit: String,
    /// Print the tail probability instead of the CDF
    #[arg(long)]
    tail: bool,
    #[command(flatten)]
    model: ModelFlags,
    #[arg(long)]
    raw: bool,
}

#[derive(Args)]
struct TableArgs {
    /// Built-in table: supp-table-1 (one-sided coin, bits+nats) or
    /// supp-table-2 (two-sided coin, nats+bits, paper-table mode)
    #[arg(long, conflicts_with_all = ["alphas", "sided", "units", "mode"])]
    preset: Option<String>,
    /// Comma-separated significance levels, e.g. 0.5,0.05,0.01
    #[arg(long)]
    alphas: Option<String>,
    #[arg(long)]
    sided: Option<String>,
    /// Comma-separated output units
    #[arg(long)]
    units: Option<String>,
    #[arg(long, default_value = "exact")]
    mode: String,
    #[command(flatten)]
    model: ModelFlags,
    /// csv | markdown
    #[arg(long, default_value = "csv")]
    format: String,
    /// Decimal places (default 4)
    #[arg(long)]
    precision: Option<usize>,
    /// Full-precision values
    #[arg(long)]
    raw: bool,
}

#[derive(Args)]
struct GofArgs {
    /// File with one p value per line
    #[arg(long, conflicts_with = "csv")]
    p: Option<PathBuf>,
    /// File with one q value per line
    #[arg(long, conflicts_with = "csv", requires = "p")]
    q: Option<PathBuf>,
    /// Two-column CSV file (p,q per row)
    #[arg(long)]
    csv: Option<PathBuf>,
    #[arg(long, default_value = "nats")]
    unit: String,
    /// Treat inputs as densities on a uniform grid with this step
    #[arg(long)]
    step: Option<f64>,
    #[arg(long)]
    raw: bool,
}

#[derive(Args)]
struct McCheckArgs {
    /// What to verify: cdf | critical | conservation
    #[arg(long)]
    target: String,
    #[arg(long)]
    seed: u64,
    #[arg(long)]
    samples: u64,
    /// Threshold for --target cdf (in --unit)
    #[arg(long)]
    threshold: Option<f64>,
    /// Significance level for --target critical
    #[arg(long)]
    alpha: Option<f64>,
    #[arg(long)]
    sided: Option<String>,
    #[arg(long, default_value = "nats")]
    unit: String,
    #[command(flatten)]
    model: ModelFlags,
    /// Probability file for --target conservation (one per line)
    #[arg(long)]
    dist: Option<PathBuf>,
    /// Specification values for --target conservation (one per line,
    /// defaults to all ones)
    #[arg(long)]
    v: Option<PathBuf>,
    /// Scale r (defaults to the sum of the specification values)
    #[arg(long)]
    r: Option<f64>,
    /// Comma-separated thresholds for --target conservation
    #[arg(long, default_value = "0,0.5,1,2")]
    x: String,
}

fn main() {
    std::process::exit(real_main());
}

fn real_main() -> i32 {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let ok = matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion);
            let _ = e.print();
            return if ok { 0 } else { 2 };
        }
    };
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            2
        }
    }
}

fn run(cli: Cli) -> Result<i32> {
    match cli.command {
        Command::Critical(args) => cmd_critical(args),
        Command::Test(args) => cmd_test(args),
        Command::Cdf(args) => cmd_cdf(args),
        Command::Table(args) => cmd_table(args),
        Command::Gof(args) => cmd_gof(args),
        Command::McCheck(args) => cmd_mc_check(args),
    }
}

// ---------------------------------------------------------------------------
// flag parsing helpers
// ---------------------------------------------------------------------------

fn parse_prior(s: &str) -> Result<Prior> {
    if s == "uniform" {
        return Ok(Prior::Uniform01);
    }
    if let Some(params) = s.strip_prefix("beta:") {
        let (a, b) = params
            .split_once(',')
            .ok_or_else(|| anyhow!("--prior beta wants beta:a,b, got {s:?}"))?;
        let a: f64 = a.trim().parse().context("bad beta parameter a")?;
        let b: f64 = b.trim().parse().context("bad beta parameter b")?;
        return Ok(Prior::beta(a, b)?);
    }
    if let Some(path) = s.strip_prefix("empirical:") {
        let text = fs::read_to_string(path).with_context(|| format!("reading {path}"))?;
        return Ok(Prior::from_json(&text)?);
    }
    bail!("--prior must be uniform, beta:a,b, or empirical:path.json, got {s:?}")
}

fn parse_units(s: &str) -> Result<Vec<InfoUnit>> {
    s.split(',')
        .map(|u| u.trim().parse::<InfoUnit>().map_err(Into::into))
        .collect()
}

fn parse_f64_list(s: &str, what: &str) -> Result<Vec<f64>> {
    s.split(',')
        .map(|v| {
            v.trim()
                .parse::<f64>()
                .with_context(|| format!("bad {what} entry {v:?}"))
        })
        .collect()
}

fn read_floats(path: &PathBuf) -> Result<Vec<f64>> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let mut values = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        values.push(
            line.parse::<f64>()
                .with_context(|| format!("{}:{}: {line:?}", path.display(), lineno + 1))?,
        );
    }
    Ok(values)
}

fn fmt_value(v: f64, raw: bool, places: usize) -> String {
    if raw {
        format!("{v}")
    } else {
        format!("{v:.places$}")
    }
}

// ---------------------------------------------------------------------------
// subcommands
// ---------------------------------------------------------------------------

fn cmd_critical(args: CriticalArgs) -> Result<i32> {
    let sided: Sidedness = args.sided.parse()?;
    let mode: CriticalMode = args.mode.parse()?;
    let reference = args.model.reference()?;
    let prior = args.model.prior()?;
    let units = parse_units(&args.unit)?;
    for unit in units {
        let value = match sided {
            Sidedness::OneSidedUpper => critical_one_sided(args.alpha, &reference, &prior, unit)?,
            Sidedness::TwoSided => {
                critical_two_sided(args.alpha, &reference, &prior, mode)?.convert(unit)
            }
        };
        println!("{}", fmt_value(value.value, args.raw, 4));
    }
    Ok(0)
}

fn cmd_test(args: TestArgs) -> Result<i32> {
    let spec = TestSpec::new(
        args.sided.parse()?,
        args.alpha,
        args.unit.parse()?,
        args.model.reference()?,
        args.model.prior()?,
        args.mode.parse()?,
    )?;
    let result = run_test(args.p_obs, &spec)?;
    let report = serde_json::json!({
        "statistic": result.statistic.value.value,
        "unit": spec.unit.to_string(),
        "p_value": result.p_value,
        "critical_value": result.critical_value.value,
        "alpha": result.alpha,
        "reject": result.reject,
    });
    println!("{report}");
    Ok(if result.reject { 1 } else { 0 })
}

fn cmd_cdf(args: CdfArgs) -> Result<i32> {
    let sided: Sidedness = args.sided.parse()?;
    let unit: InfoUnit = args.unit.parse()?;
    let reference = args.model.reference()?;
    let prior = args.model.prior()?;
    let threshold = InfoValue::new(args.x, unit);
    let cdf = match sided {
        Sidedness::OneSidedUpper => cdf_one_sided(threshold, &reference, &prior),
        Sidedness::TwoSided => cdf_two_sided(threshold.to_nats(), &reference, &prior)?,
    };
    let value = if args.tail { 1.0 - cdf } else { cdf };
    println!("{}", fmt_value(value, args.raw, 4));
    Ok(0)
}

fn cmd_table(args: TableArgs) -> Result<i32> {
    let format = match args.format.as_str() {
        "csv" => TableFormat::Csv,
        "markdown" | "md" => TableFormat::Markdown,
        other => bail!("--format must be csv or markdown, got {other:?}"),
    };
    let mut spec = match args.preset.as_deref() {
        Some("supp-table-1") => TableSpec::new(
            ONE_SIDED_TABLE_ALPHAS.to_vec(),
            Sidedness::OneSidedUpper,
            ReferenceModel::UniformN(2),
            Prior::Uniform01,
            CriticalMode::Exact,
            vec![InfoUnit::Bits, InfoUnit::Nats],
            format,
        ),
        Some("supp-table-2") => TableSpec::new(
            TWO_SIDED_TABLE_ALPHAS.to_vec(),
            Sidedness::TwoSided,
            ReferenceModel::UniformN(2),
            Prior::Uniform01,
            CriticalMode::PaperTable,
            vec![InfoUnit::Nats, InfoUnit::Bits],
            format,
        ),
        Some(other) => bail!("unknown preset {other:?} (supp-table-1, supp-table-2)"),
        None => {
            let alphas = parse_f64_list(
                args.alphas
                    .as_deref()
                    .ok_or_else(|| anyhow!("--alphas is required without a preset"))?,
                "alpha",
            )?;
            let sided: Sidedness = args
                .sided
                .as_deref()
                .ok_or_else(|| anyhow!("--sided is required without a preset"))?
                .parse()?;
            let units = parse_units(args.units.as_deref().unwrap_or("nats"))?;
            TableSpec::new(
                alphas,
                sided,
                args.model.reference()?,
                args.model.prior()?,
                args.mode.parse()?,
                units,
                format,
            )
        }
    };
    if args.raw {
        spec.precision = None;
    } else if let Some(p) = args.precision {
        spec.precision = Some(p);
    }
    print!("{}", generate_table(&spec)?);
    Ok(0)
}

fn cmd_gof(args: GofArgs) -> Result<i32> {
    let unit: InfoUnit = args.unit.parse()?;
    let (p_raw, q_raw) = if let Some(csv) = &args.csv {
        let text = fs::read_to_string(csv).with_context(|| format!("reading {}", csv.display()))?;
        let mut p = Vec::new();
        let mut q = Vec::new();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            let (a, b) = line
                .split_once(',')
                .ok_or_else(|| anyhow!("{}:{}: want p,q", csv.display(), lineno + 1))?;
            p.push(a.trim().parse::<f64>().context("bad p column")?);
            q.push(b.trim().parse::<f64>().context("bad q column")?);
        }
        (p, q)
    } else {
        let p_path = args
            .p
            .as_ref()
            .ok_or_else(|| anyhow!("need --p/--q or --csv"))?;
        let q_path = args
            .q
            .as_ref()
            .ok_or_else(|| anyhow!("need --q with --p"))?;
        (read_floats(p_path)?, read_floats(q_path)?)
    };
    let input = match args.step {
        Some(step) => GofInput::grid(p_raw, q_raw, step)?,
        None => GofInput::discrete(DiscreteDist::new(p_raw)?, DiscreteDist::new(q_raw)?)?,
    };
    let value = gof_statistic(&input, unit);
    println!("{}", fmt_value(value, args.raw, 6));
    Ok(0)
}

fn cmd_mc_check(args: McCheckArgs) -> Result<i32> {
    match args.target.as_str() {
        "cdf" => mc_check_cdf(&args),
        "critical" => mc_check_critical(&args),
        "conservation" => mc_check_conservation(&args),
        other => bail!("--target must be cdf, critical, or conservation, got {other:?}"),
    }
}

fn mc_check_cdf(args: &McCheckArgs) -> Result<i32> {
    let sided: Sidedness = args
        .sided
        .as_deref()
        .ok_or_else(|| anyhow!("--sided is required for --target cdf"))?
        .parse()?;
    let x = args
        .threshold
        .ok_or_else(|| anyhow!("--threshold is required for --target cdf"))?;
    let unit: InfoUnit = args.unit.parse()?;
    let reference = args.model.reference()?;
    let prior = args.model.prior()?;
    let threshold = InfoValue::new(x, unit);
    let exact = match sided {
        Sidedness::OneSidedUpper => cdf_one_sided(threshold, &reference, &prior),
        Sidedness::TwoSided => cdf_two_sided(threshold.to_nats(), &reference, &prior)?,
    };
    let est = empirical_cdf(
        threshold,
        sided,
        &reference,
        &prior,
        args.seed,
        args.samples,
    );
    let diff = (est.estimate - exact).abs();
    let pass = diff <= 4.0 * est.std_error;
    println!(
        "cdf threshold={x} {unit} sided={sided} ref={reference}: exact={exact:.6} estimate={:.6} se={:.6} {}",
        est.estimate,
        est.std_error,
        if pass { "PASS" } else { "FAIL" },
    );
    Ok(if pass { 0 } else { 1 })
}

fn mc_check_critical(args: &McCheckArgs) -> Result<i32> {
    let sided: Sidedness = args
        .sided
        .as_deref()
        .ok_or_else(|| anyhow!("--sided is required for --target critical"))?
        .parse()?;
    let alpha = args
        .alpha
        .ok_or_else(|| anyhow!("--alpha is required for --target critical"))?;
    let reference = args.model.reference()?;
    let prior = args.model.prior()?;
    let exact = match sided {
        Sidedness::OneSidedUpper => {
            critical_one_sided(alpha, &reference, &prior, InfoUnit::Nats)?.value
        }
        Sidedness::TwoSided => {
            critical_two_sided(alpha, &reference, &prior, CriticalMode::Exact)?.value
        }
    };
    let empirical = empirical_critical(alpha, sided, &reference, &prior, args.seed, args.samples)?;
    // quantile SE from the exact density, estimated by central difference
    let h = 1e-4;
    let cdf_at = |n: f64| match sided {
        Sidedness::OneSidedUpper => cdf_one_sided(InfoValue::nats(n), &reference, &prior),
        Sidedness::TwoSided => cdf_two_sided(n.max(0.0), &reference, &prior).unwrap_or(1.0),
    };
    let density = ((cdf_at(exact + h) - cdf_at(exact - h)) / (2.0 * h)).max(1e-9);
    let se = (alpha * (1.0 - alpha) / args.samples as f64).sqrt() / density;
    let diff = (empirical - exact).abs();
    let pass = diff <= 4.0 * se;
    println!(
        "critical alpha={alpha} sided={sided} ref={reference}: exact={exact:.6} empirical={empirical:.6} se={se:.6} {}",
        if pass { "PASS" } else { "FAIL" },
    );
    Ok(if pass { 0 } else { 1 })
}

fn mc_check_conservation(args: &McCheckArgs) -> Result<i32> {
    let dist_path = args
        .dist
        .as_ref()
        .ok_or_else(|| anyhow!("--dist is required for --target conservation"))?;
    let text = fs::read_to_string(dist_path)
        .with_context(|| format!("reading {}", dist_path.display()))?;
    let p = DiscreteDist::from_text(&text)?;
    let v = match &args.v {
        Some(path) => read_floats(path)?,
        None => vec![1.0; p.len()],
    };
    let r = args.r.unwrap_or_else(|| v.iter().sum());
    let x_grid = parse_f64_list(&args.x, "x")?;
    let checks = conservation_bound_check(&p, &v, r, &x_grid, args.seed, args.samples)?;
    let mut all_hold = true;
    for check in &checks {
        all_hold &= check.holds;
        println!(
            "conservation x={}: lhs={:.6} bound={:.6} se={:.6} {}",
            check.x,
            check.lhs_estimate,
            check.bound,
            check.std_error,
            if check.holds { "PASS" } else { "FAIL" },
        );
    }
    Ok(if all_hold { 0 } else { 1 })
}
