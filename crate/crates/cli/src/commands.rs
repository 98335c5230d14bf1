use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::Path;

use anyhow::{anyhow, Context, Result};
use serde::Serialize;
use wcrte_core::estimators::{normal_interval, EstimatorRequest};
use wcrte_core::gof::{self, GofResult, GofTest, PowerConfig, Simulation};
use wcrte_core::mc::{self, EstimatorPattern, McStudyConfig, WindowPattern};
use wcrte_core::reference::{self, ReferenceData, VerifySettings, VERIFIABLE_TABLES};
use wcrte_core::{AlternativeModel, EstimatorKind, Measure, Model, ParametricModel, Sample};

use crate::{Cli, Command, CriticalArgs, EstimateArgs, Format, GlobalArgs, MseStudyArgs, PowerArgs, VerifyArgs};

/// Unusable input data or configuration files.
#[derive(Debug)]
struct InputError(String);

impl std::fmt::Display for InputError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for InputError {}

/// 2 for unparseable input, 3 for out-of-domain values, 4 for numerical
/// failures, 1 otherwise.
pub fn exit_code(err: &anyhow::Error) -> u8 {
    for cause in err.chain() {
        if cause.downcast_ref::<InputError>().is_some() {
            return 2;
        }
        if let Some(e) = cause.downcast_ref::<wcrte_core::Error>() {
            use wcrte_core::Error as E;
            return match e {
                _ if e.is_parse() => 2,
                _ if e.is_numerical() => 4,
                E::Parameter(_) | E::Domain(_) | E::Divergent(_) | E::Spec(_) => 3,
                _ => 1,
            };
        }
    }
    1
}

pub fn run(cli: &Cli) -> Result<()> {
    let g = &cli.global;
    match &cli.command {
        Command::Estimate(a) => estimate(g, a),
        Command::MseStudy(a) => mse_study(g, a),
        Command::CriticalValues(a) => critical_values(g, a),
        Command::Power(a) => power(g, a),
        Command::VerifyTables(a) => verify_tables(g, a),
    }
}

fn output(g: &GlobalArgs) -> Result<Box<dyn Write>> {
    Ok(match &g.out {
        Some(path) => {
            Box::new(BufWriter::new(File::create(path).with_context(|| format!("cannot create {}", path.display()))?))
        }
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn write_json<T: Serialize + ?Sized>(g: &GlobalArgs, value: &T) -> Result<()> {
    let mut out = output(g)?;
    serde_json::to_writer_pretty(&mut out, value)?;
    writeln!(out)?;
    out.flush()?;
    Ok(())
}

fn read_sample(path: &Path) -> Result<Sample> {
    Sample::read_file(path).map_err(|e| anyhow!(InputError(format!("{}: {e}", path.display()))))
}

fn read_text(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| anyhow!(InputError(format!("{}: {e}", path.display()))))
}

fn parse_all<T>(items: &[String]) -> Result<Vec<T>>
where
    T: std::str::FromStr<Err = wcrte_core::Error>,
{
    Ok(items.iter().map(|s| s.parse()).collect::<wcrte_core::Result<_>>()?)
}

/// `auto` maps to `None`; numbers to fixed windows.
fn parse_windows(items: &[String]) -> Result<Vec<Option<usize>>> {
    items
        .iter()
        .map(|s| match s.parse::<WindowPattern>()? {
            WindowPattern::Auto => Ok(None),
            WindowPattern::Fixed(m) => Ok(Some(m)),
            WindowPattern::Sweep => Err(wcrte_core::Error::Parse("`sweep` is only meaningful for mse-study".into()).into()),
        })
        .collect()
}

#[derive(Debug, Serialize)]
struct EstimateRow {
    estimator: String,
    n: usize,
    estimate: f64,
    variance: Option<f64>,
    se: Option<f64>,
    level: Option<f64>,
    lower: Option<f64>,
    upper: Option<f64>,
    warnings: String,
}

fn estimate(g: &GlobalArgs, a: &EstimateArgs) -> Result<()> {
    let has_window = a.spec.split([':', ',']).any(|t| {
        let key = t.split('=').next().unwrap_or("").trim().to_ascii_lowercase();
        t.contains('=') && (key == "m" || key == "window")
    });
    let text = match &a.m {
        Some(m) if !has_window => format!("{},m={m}", a.spec),
        _ => a.spec.clone(),
    };
    let request: EstimatorRequest = match text.parse() {
        Err(wcrte_core::Error::Parse(msg)) if a.m.is_some() && !has_window && msg.contains("takes no window") => {
            a.spec.parse()?
        }
        other => other?,
    };
    let sample = read_sample(&a.file)?;
    let spec = request.resolve(sample.n())?;
    let est = spec.estimate(&sample)?;
    let mut warnings = est.warnings.clone();
    let mut row = EstimateRow {
        estimator: spec.to_string(),
        n: sample.n(),
        estimate: est.value,
        variance: None,
        se: None,
        level: None,
        lower: None,
        upper: None,
        warnings: String::new(),
    };
    if let Some(var) = spec.variance(&sample)? {
        row.variance = Some(var.value);
        warnings.extend(var.warnings.iter().copied());
        if var.value >= 0.0 {
            let (se, lower, upper) = normal_interval(est.value, var.value, sample.n(), a.level)?;
            row.se = Some(se);
            row.level = Some(a.level);
            row.lower = Some(lower);
            row.upper = Some(upper);
        }
    }
    row.warnings = warnings.iter().map(|w| format!("{w:?}")).collect::<Vec<_>>().join(";");
    match g.format() {
        Format::Json => write_json(g, &row),
        Format::Csv => {
            let mut w = csv::Writer::from_writer(output(g)?);
            w.serialize(&row)?;
            w.flush()?;
            Ok(())
        }
    }
}

fn mse_config(g: &GlobalArgs, a: &MseStudyArgs) -> Result<McStudyConfig> {
    let mut config = match &a.config {
        Some(path) => McStudyConfig::from_json(&read_text(path)?)?,
        None => {
            if a.model.is_empty() {
                return Err(anyhow!(InputError("mse-study needs --config or at least one --model".into())));
            }
            McStudyConfig {
                models: Vec::new(),
                sample_sizes: vec![10, 20, 30],
                alphas: vec![Measure::from_alpha(2.0)?],
                estimators: EstimatorKind::ALL.into_iter().map(EstimatorPattern::new).collect(),
                replications: g.reps(),
                seed: g.seed(),
                threads: None,
            }
        }
    };
    if !a.model.is_empty() {
        config.models = parse_all::<ParametricModel>(&a.model)?;
    }
    if !a.n.is_empty() {
        config.sample_sizes = a.n.clone();
    }
    if !a.alpha.is_empty() {
        config.alphas = parse_all::<Measure>(&a.alpha)?;
    }
    if !a.estimator.is_empty() {
        config.estimators = parse_all::<EstimatorKind>(&a.estimator)?.into_iter().map(EstimatorPattern::new).collect();
    }
    if !a.m.is_empty() {
        let windows = parse_all::<WindowPattern>(&a.m)?;
        config.estimators = config
            .estimators
            .iter()
            .flat_map(|p| -> Vec<EstimatorPattern> {
                if p.kind.uses_window() {
                    windows.iter().map(|&w| p.with_window(w)).collect()
                } else {
                    vec![*p]
                }
            })
            .collect();
    }
    if let Some(r) = g.reps {
        config.replications = r;
    }
    if let Some(s) = g.seed {
        config.seed = s;
    }
    if g.threads.is_some() {
        config.threads = g.threads;
    }
    config.validate()?;
    Ok(config)
}

fn mse_study(g: &GlobalArgs, a: &MseStudyArgs) -> Result<()> {
    let config = mse_config(g, a)?;
    let result = mc::run_study(&config)?;
    for s in &result.skipped {
        eprintln!("skipped: {} n={} alpha={} {} m={:?}: {}", s.model, s.n, s.alpha, s.estimator, s.m, s.reason);
    }
    match g.format() {
        Format::Json => write_json(g, &result),
        Format::Csv => Ok(mc::write_csv(&result.cells, output(g)?)?),
    }
}

/// Tests from `--alpha` and `--test`, with entropy tests expanded over `--m`.
fn gof_tests(alphas: &[String], tests: &[String], windows: &[String], defaults: Vec<GofTest>) -> Result<Vec<GofTest>> {
    let mut out: Vec<GofTest> = parse_all::<Measure>(alphas)?
        .into_iter()
        .map(|m| match m {
            Measure::Wcre => GofTest::Wcre,
            Measure::Wcrte(a) => GofTest::Wcrte(a),
        })
        .collect();
    out.extend(parse_all::<GofTest>(tests)?);
    if out.is_empty() {
        out = defaults;
    }
    if !windows.is_empty() {
        let windows = parse_windows(windows)?;
        out = out
            .into_iter()
            .flat_map(|t| match t {
                GofTest::Ent(None) => windows.iter().map(|&m| GofTest::Ent(m)).collect(),
                other => vec![other],
            })
            .collect();
    }
    let mut unique = Vec::with_capacity(out.len());
    for t in out {
        if !unique.contains(&t) {
            unique.push(t);
        }
    }
    Ok(unique)
}

fn simulation(g: &GlobalArgs, gamma: f64) -> Simulation {
    Simulation { gamma, replications: g.reps(), seed: g.seed(), threads: g.threads }
}

fn critical_values(g: &GlobalArgs, a: &CriticalArgs) -> Result<()> {
    let table7 = ["1", "2", "5", "10"].map(String::from);
    let tests = gof_tests(&a.alpha, &a.test, &a.m, gof_tests(&table7, &[], &[], Vec::new())?)?;
    let sim = simulation(g, a.gamma);
    if let Some(path) = &a.data {
        let sample = read_sample(path)?;
        let pairs = gof::critical_values_many(&tests, sample.n(), &sim)?;
        let mut results = Vec::with_capacity(tests.len());
        for (test, critical) in tests.iter().zip(pairs) {
            let (statistic, warning) = test.statistic(&sample)?;
            results.push(GofResult {
                statistic,
                critical,
                reject: critical.rejects(statistic),
                warnings: warning.into_iter().collect(),
            });
        }
        return match g.format() {
            Format::Json => write_json(g, &results),
            Format::Csv => Ok(gof::write_results_csv(&results, output(g)?)?),
        };
    }
    let sizes = if a.n.is_empty() { vec![10, 20, 50, 100] } else { a.n.clone() };
    let mut pairs = Vec::new();
    for n in sizes {
        pairs.extend(gof::critical_values_many(&tests, n, &sim)?);
    }
    match g.format() {
        Format::Json => write_json(g, &pairs),
        Format::Csv => Ok(gof::write_critical_csv(&pairs, output(g)?)?),
    }
}

fn power_config(g: &GlobalArgs, a: &PowerArgs) -> Result<PowerConfig> {
    let mut config = match &a.config {
        Some(path) => serde_json::from_str(&read_text(path)?).map_err(wcrte_core::Error::from)?,
        None => PowerConfig {
            alternatives: AlternativeModel::standard_set().into_iter().map(Model::from).collect(),
            sample_sizes: vec![10, 20, 30],
            tests: GofTest::standard_set(),
            simulation: simulation(g, 0.05),
            critical_replications: None,
        },
    };
    if !a.alternative.is_empty() {
        config.alternatives = parse_all::<Model>(&a.alternative)?;
    }
    if !a.n.is_empty() {
        config.sample_sizes = a.n.clone();
    }
    if !a.alpha.is_empty() || !a.test.is_empty() {
        let others: Vec<String> = if a.test.is_empty() {
            config.tests.iter().filter(|t| !matches!(t, GofTest::Wcrte(_) | GofTest::Wcre)).map(|t| t.to_string()).collect()
        } else {
            a.test.clone()
        };
        config.tests = gof_tests(&a.alpha, &others, &[], Vec::new())?;
    }
    if !a.m.is_empty() {
        config.tests = gof_tests(&[], &config.tests.iter().map(|t| t.to_string()).collect::<Vec<_>>(), &a.m, Vec::new())?;
    }
    if let Some(gamma) = a.gamma {
        config.simulation.gamma = gamma;
    }
    if let Some(r) = g.reps {
        config.simulation.replications = r;
    }
    if let Some(s) = g.seed {
        config.simulation.seed = s;
    }
    if g.threads.is_some() {
        config.simulation.threads = g.threads;
    }
    if a.critical_reps.is_some() {
        config.critical_replications = a.critical_reps;
    }
    Ok(config)
}

fn power(g: &GlobalArgs, a: &PowerArgs) -> Result<()> {
    let config = power_config(g, a)?;
    let rows = gof::power_study(&config)?;
    match g.format() {
        Format::Json => write_json(g, &rows),
        Format::Csv => Ok(gof::write_power_csv(&rows, output(g)?)?),
    }
}

fn verify_tables(g: &GlobalArgs, a: &VerifyArgs) -> Result<()> {
    let data = match &a.reference_dir {
        Some(dir) => ReferenceData::from_dir(dir).map_err(|e| anyhow!(InputError(e.to_string())))?,
        None => ReferenceData::embedded()?,
    };
    let tables = if a.table.is_empty() { VERIFIABLE_TABLES.to_vec() } else { a.table.clone() };
    let settings = VerifySettings { replications: g.reps(), seed: g.seed(), threads: g.threads };
    let mut rows = Vec::new();
    for t in tables {
        rows.extend(reference::verify_table(t, &data, &settings)?);
    }
    match g.format() {
        Format::Json => write_json(g, &rows),
        Format::Csv => Ok(reference::write_comparisons_csv(&rows, output(g)?)?),
    }
}
