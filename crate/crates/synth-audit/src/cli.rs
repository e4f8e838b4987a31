//! Command implementations behind the `synth-audit` binary.
//!
//! Subcommands: `score` (vulnerability ranking), `select` (target records),
//! `attack` (privacy-game experiment), `sweep` (epsilon / k / metric sweeps),
//! `report` (re-render an existing report). Exit codes: 0 success, 1 config
//! error, 2 data error, 3 runtime failure.

use std::path::{Path, PathBuf};
use std::time::{Instant, SystemTime, UNIX_EPOCH};

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::attack::{
    dp_sweep, run_record_experiment, selection_sweep, AttackKind, SelectionPlan, SweepPoint,
};
use crate::config::{EpsilonValue, ExperimentConfig, Preset, SweepSpec};
use crate::data::{load_dataset, Dataset, LoadOptions};
use crate::encoding::Metric;
use crate::error::{Error, Result};
use crate::report::ExperimentReport;
use crate::plot;
use crate::selection::{
    log_likelihoods, rare_value_qualifiers, vulnerability_scores, SelectionMethod,
    VulnerabilityRanking, DEFAULT_K, DEFAULT_LL_BUCKETS, DEFAULT_RARE_THRESHOLD,
};

#[derive(Debug, Parser)]
#[command(
    name = "synth-audit",
    about = "Identify and measure membership-inference-vulnerable records in tabular data",
    version
)]
pub struct Cli {
    /// Worker threads for parallel stages (default: all cores).
    #[arg(long, global = true)]
    pub threads: Option<usize>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct DataArgs {
    /// Data file (comma-separated, one record per line).
    #[arg(long)]
    pub data: PathBuf,
    /// Schema sidecar file (JSON).
    #[arg(long)]
    pub schema: PathBuf,
    /// Data file starts with a header line.
    #[arg(long)]
    pub header: bool,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum MethodArg {
    Distance,
    Random,
    RareValue,
    LogLikelihood,
    All,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum SweepKind {
    Epsilon,
    K,
    Metric,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Rank every record by its vulnerability score.
    Score {
        #[command(flatten)]
        data: DataArgs,
        /// Neighbor count for the vulnerability score.
        #[arg(long, default_value_t = DEFAULT_K)]
        k: usize,
        /// Distance metric: cosine or minkowski-p<order>.
        #[arg(long, default_value = "cosine")]
        metric: String,
        /// Output file (stdout when omitted).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Select target records with one method (or all four).
    Select {
        #[command(flatten)]
        data: DataArgs,
        #[arg(long, value_enum, default_value_t = MethodArg::All)]
        method: MethodArg,
        /// Records per method.
        #[arg(long, default_value_t = 10)]
        r: usize,
        #[arg(long, default_value_t = DEFAULT_K)]
        k: usize,
        #[arg(long, default_value = "cosine")]
        metric: String,
        #[arg(long, default_value_t = DEFAULT_RARE_THRESHOLD)]
        rare_threshold: f64,
        #[arg(long, default_value_t = DEFAULT_LL_BUCKETS)]
        ll_buckets: usize,
        /// Master seed (selection tie-breaks and sampling).
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run the shadow-modeling experiment described by a config file.
    Attack {
        /// Experiment config (JSON).
        #[arg(long)]
        config: PathBuf,
        /// Master seed; every random choice in the run derives from it.
        #[arg(long)]
        seed: u64,
        /// Output directory for the report and plots.
        #[arg(long)]
        out: PathBuf,
        /// Override the config's preset.
        #[arg(long, value_enum)]
        preset: Option<PresetArg>,
        /// Debug aid: dump the first target's (query subset, count) pairs,
        /// answered against the population, to this file.
        #[arg(long)]
        dump_queries: Option<PathBuf>,
    },
    /// Iterate the experiment over epsilon, k, or the distance metric.
    Sweep {
        #[arg(long)]
        config: PathBuf,
        /// Swept parameter; defaults to the sweep section of the config.
        #[arg(long, value_enum)]
        sweep: Option<SweepKind>,
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, value_enum)]
        preset: Option<PresetArg>,
    },
    /// Print the summary of an existing report and regenerate its plots.
    Report {
        /// Report file written by `attack` or `sweep`.
        #[arg(long)]
        input: PathBuf,
        /// Directory for regenerated plots (defaults to the report's).
        #[arg(long)]
        plots_out: Option<PathBuf>,
    },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum PresetArg {
    Desk,
    Paper,
}

impl From<PresetArg> for Preset {
    fn from(p: PresetArg) -> Self {
        match p {
            PresetArg::Desk => Preset::Desk,
            PresetArg::Paper => Preset::Paper,
        }
    }
}

/// Exit-code contract: 0 success, 1 config error, 2 data error, 3 runtime.
pub fn exit_code(error: &Error) -> i32 {
    match error {
        Error::InvalidConfig(_)
        | Error::InvalidGeneratorSpec(_)
        | Error::InvalidEpsilon(_)
        | Error::InvalidOrder(_) => 1,
        Error::MissingFile(_)
        | Error::SchemaParseError(_)
        | Error::RowArityMismatch { .. }
        | Error::UnknownCategoryValue { .. }
        | Error::NonNumericContinuous { .. }
        | Error::SampleTooLarge { .. }
        | Error::SchemaMismatch(_)
        | Error::EmptyDataset
        | Error::Io(_) => 2,
        _ => 3,
    }
}

/// Run a parsed command; returns the process exit code.
pub fn run(cli: Cli) -> i32 {
    if let Some(threads) = cli.threads {
        // Ignore the error when a pool already exists (tests call run twice).
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global();
    }
    match dispatch(cli.command) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}

fn dispatch(command: Command) -> Result<()> {
    match command {
        Command::Score {
            data,
            k,
            metric,
            out,
        } => cmd_score(&data, k, &metric, out.as_deref()),
        Command::Select {
            data,
            method,
            r,
            k,
            metric,
            rare_threshold,
            ll_buckets,
            seed,
            out,
        } => cmd_select(
            &data,
            method,
            r,
            k,
            &metric,
            rare_threshold,
            ll_buckets,
            seed,
            out.as_deref(),
        ),
        Command::Attack {
            config,
            seed,
            out,
            preset,
            dump_queries,
        } => cmd_attack(&config, seed, &out, preset, dump_queries.as_deref()),
        Command::Sweep {
            config,
            sweep,
            seed,
            out,
            preset,
        } => cmd_sweep(&config, sweep, seed, &out, preset),
        Command::Report { input, plots_out } => cmd_report(&input, plots_out.as_deref()),
    }
}

fn load(data: &DataArgs) -> Result<Dataset> {
    load_dataset(
        &data.data,
        &data.schema,
        LoadOptions {
            has_header: data.header,
        },
    )
}

fn emit(text: &str, out: Option<&Path>) -> Result<()> {
    match out {
        Some(path) => std::fs::write(path, text)?,
        None => print!("{text}"),
    }
    Ok(())
}

/// Render the full ranking as structured text. Scores are printed in their
/// shortest round-trip form so the table parses back bit-identically.
pub fn render_score_table(
    ranking: &VulnerabilityRanking,
    qualifies: &[bool],
    lls: &[f64],
) -> String {
    let mut out = String::new();
    out.push_str("# vulnerability ranking\n");
    out.push_str(&format!("# k: {}\n", ranking.k));
    out.push_str(&format!("# metric: {}\n", ranking.metric_id));
    out.push_str("# columns: rank\trow\tscore\trare_value\tlog_likelihood\n");
    for (rank, &row) in ranking.order.iter().enumerate() {
        out.push_str(&format!(
            "{}\t{}\t{}\t{}\t{}\n",
            rank + 1,
            row,
            ranking.scores[row],
            u8::from(qualifies[row]),
            lls[row],
        ));
    }
    out
}

/// Parse a score table back into a ranking.
pub fn parse_score_table(text: &str) -> Result<VulnerabilityRanking> {
    let mut k = None;
    let mut metric_id = None;
    let mut rows: Vec<(usize, usize, f64)> = Vec::new();
    for line in text.lines() {
        if let Some(rest) = line.strip_prefix("# k: ") {
            k = rest.trim().parse().ok();
        } else if let Some(rest) = line.strip_prefix("# metric: ") {
            metric_id = Some(rest.trim().to_string());
        } else if line.starts_with('#') || line.trim().is_empty() {
            continue;
        } else {
            let mut fields = line.split('\t');
            let parse_err = || Error::InvalidConfig(format!("bad score row: {line:?}"));
            let rank: usize = fields.next().ok_or_else(parse_err)?.parse().map_err(|_| parse_err())?;
            let row: usize = fields.next().ok_or_else(parse_err)?.parse().map_err(|_| parse_err())?;
            let score: f64 = fields.next().ok_or_else(parse_err)?.parse().map_err(|_| parse_err())?;
            rows.push((rank, row, score));
        }
    }
    let k = k.ok_or_else(|| Error::InvalidConfig("score table missing k".into()))?;
    let metric_id =
        metric_id.ok_or_else(|| Error::InvalidConfig("score table missing metric".into()))?;
    rows.sort_unstable_by_key(|&(rank, _, _)| rank);
    let mut scores = vec![0.0; rows.len()];
    let mut order = Vec::with_capacity(rows.len());
    for &(_, row, score) in &rows {
        if row >= scores.len() {
            return Err(Error::InvalidConfig("score table rows not contiguous".into()));
        }
        scores[row] = score;
        order.push(row);
    }
    Ok(VulnerabilityRanking {
        scores,
        order,
        k,
        metric_id,
    })
}

fn cmd_score(data: &DataArgs, k: usize, metric: &str, out: Option<&Path>) -> Result<()> {
    let dataset = load(data)?;
    let metric = Metric::parse(metric)?;
    let ranking = vulnerability_scores(&dataset, k, metric)?;
    let qualifies = rare_value_qualifiers(&dataset, DEFAULT_RARE_THRESHOLD);
    let lls = log_likelihoods(&dataset, DEFAULT_LL_BUCKETS);
    emit(&render_score_table(&ranking, &qualifies, &lls), out)
}

#[allow(clippy::too_many_arguments)]
fn cmd_select(
    data: &DataArgs,
    method: MethodArg,
    r: usize,
    k: usize,
    metric: &str,
    rare_threshold: f64,
    ll_buckets: usize,
    seed: u64,
    out: Option<&Path>,
) -> Result<()> {
    let dataset = load(data)?;
    let plan = SelectionPlan {
        methods: vec![],
        r,
        k,
        metric: metric.to_string(),
        rare_threshold,
        ll_buckets,
    };
    let methods: Vec<SelectionMethod> = match method {
        MethodArg::Distance => vec![SelectionMethod::Distance],
        MethodArg::Random => vec![SelectionMethod::Random],
        MethodArg::RareValue => vec![SelectionMethod::RareValue],
        MethodArg::LogLikelihood => vec![SelectionMethod::LogLikelihood],
        MethodArg::All => vec![
            SelectionMethod::Distance,
            SelectionMethod::Random,
            SelectionMethod::RareValue,
            SelectionMethod::LogLikelihood,
        ],
    };
    let mut text = String::new();
    text.push_str("# target selection\n");
    text.push_str(&format!("# r: {r} seed: {seed}\n"));
    for (mi, m) in methods.iter().enumerate() {
        let result = plan.run_method(&dataset, *m, crate::seed::derive(seed, &[mi as u64]))?;
        text.push_str(&format!("method: {}\n", m.name()));
        for &row in &result.selected {
            let diag = result
                .diagnostics
                .get(row)
                .map_or("-".to_string(), |d| format!("{d}"));
            text.push_str(&format!("{row}\t{diag}\n"));
        }
    }
    emit(&text, out)
}

fn header_note(elapsed_secs: Option<f64>) -> String {
    let unix = SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .map(|d| d.as_secs())
        .unwrap_or(0);
    match elapsed_secs {
        Some(s) => format!("generated_unix: {unix}\nelapsed_secs: {s:.1}"),
        None => format!("generated_unix: {unix}"),
    }
}

/// Box/line plots for a report, as (file name, svg) pairs.
pub fn render_plots(report: &ExperimentReport) -> Vec<(String, String)> {
    let attacks: Vec<AttackKind> = {
        let mut seen = Vec::new();
        for e in &report.entries {
            if !seen.contains(&e.attack) {
                seen.push(e.attack);
            }
        }
        seen
    };
    let mut plots = Vec::new();
    if report.title == "attack" {
        for attack in attacks {
            let mut groups: Vec<(String, Vec<f64>)> = Vec::new();
            for e in report.entries.iter().filter(|e| e.attack == attack) {
                match groups.iter_mut().find(|(m, _)| *m == e.method.name()) {
                    Some((_, values)) => values.push(e.auc),
                    None => groups.push((e.method.name().to_string(), vec![e.auc])),
                }
            }
            plots.push((
                format!("auc_{}.svg", attack.name()),
                plot::box_plot(
                    &format!("per-record AUC by selection method ({})", attack.name()),
                    "AUC",
                    &groups,
                ),
            ));
        }
    } else {
        let x_label = report.title.strip_prefix("sweep:").unwrap_or("value");
        for attack in attacks {
            let mut series: Vec<plot::Series> = Vec::new();
            for g in report.groups.iter().filter(|g| g.attack == attack) {
                let value = g.value.unwrap_or(f64::NAN);
                match series.iter_mut().find(|(m, _)| *m == g.method.name()) {
                    Some((_, pts)) => pts.push((value, g.mean_auc, g.std_auc)),
                    None => series.push((
                        g.method.name().to_string(),
                        vec![(value, g.mean_auc, g.std_auc)],
                    )),
                }
            }
            plots.push((
                format!("sweep_{}.svg", attack.name()),
                plot::line_plot(
                    &format!("mean AUC by {x_label} ({})", attack.name()),
                    x_label,
                    "AUC",
                    &series,
                ),
            ));
        }
    }
    plots
}

fn write_report_and_plots(
    report: &ExperimentReport,
    out_dir: &Path,
    elapsed: f64,
) -> Result<PathBuf> {
    std::fs::create_dir_all(out_dir)?;
    let report_path = out_dir.join("report.txt");
    report.write(&report_path, &header_note(Some(elapsed)))?;
    for (name, svg) in render_plots(report) {
        std::fs::write(out_dir.join(name), svg)?;
    }
    Ok(report_path)
}

fn print_summary(report: &ExperimentReport) {
    println!("experiment: {}", report.title);
    println!("method\tattack\tvalue\tmean_auc\tstd_auc\tn");
    for g in &report.groups {
        let value = g
            .value
            .map_or("-".to_string(), |v| if v.is_infinite() { "inf".into() } else { format!("{v}") });
        println!(
            "{}\t{}\t{}\t{:.4}\t{:.4}\t{}",
            g.method.name(),
            g.attack.name(),
            value,
            g.mean_auc,
            g.std_auc,
            g.n_records
        );
    }
}

fn cmd_attack(
    config_path: &Path,
    seed: u64,
    out_dir: &Path,
    preset: Option<PresetArg>,
    dump_queries: Option<&Path>,
) -> Result<()> {
    let started = Instant::now();
    let mut config = ExperimentConfig::load(config_path)?;
    if let Some(p) = preset {
        config.preset = p.into();
    }
    let omega = config.load_population(seed)?;
    let game = config.game(seed)?;
    let outcome = run_record_experiment(
        &omega,
        (config.partition.n_aux, config.partition.n_test),
        &config.selection,
        &config.attacks,
        &game,
    )?;
    if let Some(dump_path) = dump_queries {
        if let Some(&row) = outcome.selections.first().and_then(|(_, rows)| rows.first()) {
            let target = omega.row(row).clone();
            let queries = crate::query::sample_queries(
                omega.schema(),
                &target,
                game.n_queries,
                crate::seed::derive(seed, &[crate::seed::phase::QUERIES]),
            )?;
            std::fs::write(dump_path, crate::query::render_query_dump(&omega, &queries)?)?;
        }
    }
    let report = ExperimentReport::from_outcome(config.echo(seed)?, &outcome);
    let path = write_report_and_plots(&report, out_dir, started.elapsed().as_secs_f64())?;
    print_summary(&report);
    println!("report: {}", path.display());
    Ok(())
}

fn default_sweep_values(kind: SweepKind) -> SweepSpec {
    match kind {
        SweepKind::Epsilon => SweepSpec::Epsilon {
            values: vec![
                EpsilonValue::Number(1.0),
                EpsilonValue::Number(10.0),
                EpsilonValue::Number(100.0),
                EpsilonValue::Text("inf".into()),
            ],
        },
        SweepKind::K => SweepSpec::K {
            values: vec![1, 2, 3, 4, 5, 10, 20, 50],
        },
        SweepKind::Metric => SweepSpec::Metric {
            values: vec![
                "cosine".into(),
                "minkowski-p1".into(),
                "minkowski-p2".into(),
                "minkowski-p3".into(),
                "minkowski-p4".into(),
            ],
        },
    }
}

fn cmd_sweep(
    config_path: &Path,
    kind: Option<SweepKind>,
    seed: u64,
    out_dir: &Path,
    preset: Option<PresetArg>,
) -> Result<()> {
    let started = Instant::now();
    let mut config = ExperimentConfig::load(config_path)?;
    if let Some(p) = preset {
        config.preset = p.into();
    }
    let spec = match (kind, config.sweep.clone()) {
        (None, Some(spec)) => spec,
        (None, None) => {
            return Err(Error::InvalidConfig(
                "no sweep in config and no --sweep flag".into(),
            ))
        }
        (Some(k), Some(spec)) if sweep_kind_matches(k, &spec) => spec,
        (Some(k), _) => default_sweep_values(k),
    };

    let omega = config.load_population(seed)?;
    let game = config.game(seed)?;
    let partition = (config.partition.n_aux, config.partition.n_test);

    let (kind_name, points): (&str, Vec<SweepPoint>) = match &spec {
        SweepSpec::Epsilon { values } => {
            let epsilons: Vec<f64> = values
                .iter()
                .map(|v| v.as_f64())
                .collect::<Result<_>>()?;
            (
                "epsilon",
                dp_sweep(
                    &omega,
                    partition,
                    &config.selection,
                    &config.attacks,
                    &game,
                    &epsilons,
                )?,
            )
        }
        SweepSpec::K { values } => {
            let plans: Vec<(f64, SelectionPlan)> = values
                .iter()
                .map(|&k| {
                    let mut plan = config.selection.clone();
                    plan.k = k;
                    (k as f64, plan)
                })
                .collect();
            (
                "k",
                selection_sweep(
                    &omega,
                    partition,
                    &plans,
                    &config.attacks,
                    &game,
                )?,
            )
        }
        SweepSpec::Metric { values } => {
            let plans: Vec<(f64, SelectionPlan)> = values
                .iter()
                .enumerate()
                .map(|(i, m)| {
                    let mut plan = config.selection.clone();
                    plan.metric = m.clone();
                    (i as f64, plan)
                })
                .collect();
            for (_, plan) in &plans {
                Metric::parse(&plan.metric)?;
            }
            (
                "metric",
                selection_sweep(
                    &omega,
                    partition,
                    &plans,
                    &config.attacks,
                    &game,
                )?,
            )
        }
    };

    let report = ExperimentReport::from_sweep(kind_name, config.echo(seed)?, &points);
    let path = write_report_and_plots(&report, out_dir, started.elapsed().as_secs_f64())?;
    print_summary(&report);
    // Soft trend flag for epsilon sweeps: expected to rise with the budget.
    if kind_name == "epsilon" {
        let mut methods: Vec<SelectionMethod> = Vec::new();
        for g in &report.groups {
            if !methods.contains(&g.method) {
                methods.push(g.method);
            }
        }
        for method in methods {
            let mut pts: Vec<(f64, f64)> = report
                .groups
                .iter()
                .filter(|g| g.method == method)
                .map(|g| (g.value.unwrap_or(f64::NAN), g.mean_auc))
                .collect();
            pts.sort_by(|a, b| a.0.total_cmp(&b.0));
            let monotone = pts.windows(2).all(|w| w[1].1 + 1e-9 >= w[0].1);
            if !monotone {
                println!(
                    "note: mean AUC for {} is not monotone in epsilon (sampling noise at desk scale)",
                    method.name()
                );
            }
        }
    }
    println!("report: {}", path.display());
    Ok(())
}

fn sweep_kind_matches(kind: SweepKind, spec: &SweepSpec) -> bool {
    matches!(
        (kind, spec),
        (SweepKind::Epsilon, SweepSpec::Epsilon { .. })
            | (SweepKind::K, SweepSpec::K { .. })
            | (SweepKind::Metric, SweepSpec::Metric { .. })
    )
}

fn cmd_report(input: &Path, plots_out: Option<&Path>) -> Result<()> {
    let report = ExperimentReport::load(input)?;
    print_summary(&report);
    let out_dir = plots_out
        .map(Path::to_path_buf)
        .or_else(|| input.parent().map(Path::to_path_buf))
        .unwrap_or_else(|| PathBuf::from("."));
    std::fs::create_dir_all(&out_dir)?;
    for (name, svg) in render_plots(&report) {
        std::fs::write(out_dir.join(name), svg)?;
    }
    Ok(())
}
