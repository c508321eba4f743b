//! `autoeda` command-line front end.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use autoeda::association::{associate_all, to_csv as assoc_csv};
use autoeda::categorical::frequency_table;
use autoeda::numeric::{numeric_summary, to_csv as numeric_csv, GroupBy};
use autoeda::query::{aggregate, apply_filter, parse_filter, AggSpec};
use autoeda::report::{collect_stats, render_report, stats_to_json, PlotFamily, ReportConfig, Section};
use autoeda::table::{infer_kinds, infer_kinds_with, overview, read_csv_path, CsvOptions, KindManifest};
use autoeda::viz::{self, SvgDocument};
use autoeda::{Error, ProfileConfig, Table};
use clap::{Args, Parser, Subcommand, ValueEnum};

const EXIT_USAGE: u8 = 2;
const EXIT_INPUT: u8 = 3;
const EXIT_EMPTY: u8 = 4;

#[derive(Parser)]
#[command(name = "autoeda", version, about = "Automated exploratory data analysis for delimited files")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Dataset overview: dimensions and variable kinds.
    Overview(Common),
    /// Summary statistics of continuous numeric variables.
    Numstat {
        #[command(flatten)]
        common: Common,
        /// A = overall, G = per group, GA = both.
        #[arg(long, value_enum, default_value = "a", ignore_case = true)]
        by: ByArg,
        /// Grouping variable for --by G or GA.
        #[arg(long)]
        group: Option<String>,
    },
    /// Frequency tables of categorical variables.
    Cattab(Common),
    /// Chi-squared, Cramér's V and information value against a target.
    Assoc {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        target: String,
    },
    /// Filtered, grouped custom statistics.
    Custom {
        #[command(flatten)]
        common: Common,
        /// Row filter, e.g. 'Price > 100 & US = "Yes"'.
        #[arg(long)]
        filter: Option<String>,
        /// Grouping variables (repeatable or comma separated).
        #[arg(long, value_delimiter = ',')]
        group: Vec<String>,
        /// Value variables (repeatable or comma separated).
        #[arg(long, value_delimiter = ',', required = true)]
        value: Vec<String>,
        /// Statistics: count, proportion, mean, median, mode, sum, min, max,
        /// sd, variance, iqr, ps, q<p> (e.g. q0.9).
        #[arg(long, value_delimiter = ',', default_value = "count")]
        stat: Vec<String>,
    },
    /// Write SVG plots of one family into the output directory.
    Viz {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_enum)]
        kind: VizKind,
        /// Target for scatter plots, grouping variable for box and
        /// parallel-coordinate plots.
        #[arg(long)]
        target: Option<String>,
        /// Stratified sample size per group level (parallel coordinates).
        #[arg(long, value_delimiter = ',')]
        strata: Vec<usize>,
        /// Variables on the parallel-coordinate axes.
        #[arg(long, value_delimiter = ',')]
        vars: Vec<String>,
    },
    /// Self-contained HTML report plus a JSON statistics sidecar.
    Report {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value = "Exploratory data analysis")]
        title: String,
        #[arg(long)]
        target: Option<String>,
        /// Sections to include; defaults to all (association only with a target).
        #[arg(long, value_delimiter = ',')]
        sections: Vec<String>,
        /// Plot families; defaults to every family that applies.
        #[arg(long, value_delimiter = ',')]
        families: Vec<String>,
        /// Maximum plots per family.
        #[arg(long, default_value_t = 6)]
        plot_budget: usize,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum ByArg {
    A,
    G,
    Ga,
}

#[derive(Clone, Copy, ValueEnum)]
enum VizKind {
    Scatter,
    Density,
    Bar,
    Box,
    Qq,
    Parcoord,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Args)]
struct Common {
    /// Input file (.csv, .tsv, optionally .gz).
    #[arg(long = "in", value_name = "PATH")]
    input: PathBuf,
    /// Output file, or directory for viz.
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
    /// Directory used when --out is not given.
    #[arg(long, env = "AUTOEDA_OUT_DIR", default_value = ".", value_name = "DIR")]
    out_dir: PathBuf,
    #[arg(long, value_enum, default_value = "csv")]
    format: Format,
    /// Field delimiter (single character; "\t" for tab).
    #[arg(long, default_value = ",")]
    delimiter: String,
    /// The first line is data, not a header.
    #[arg(long)]
    no_header: bool,
    /// Tokens read as missing (repeatable or comma separated).
    #[arg(long, value_delimiter = ',', default_values_t = [String::new(), "NA".to_string()])]
    na: Vec<String>,
    /// Manifest of `column = kind` lines overriding inference.
    #[arg(long, value_name = "PATH")]
    kinds: Option<PathBuf>,
    /// Text columns with at most this many distinct values become categorical.
    #[arg(long, default_value_t = autoeda::table::DEFAULT_MAX_CATEGORICAL_LEVELS)]
    max_levels: usize,
    #[command(flatten)]
    profile: ProfileArgs,
}

#[derive(Args)]
struct ProfileArgs {
    /// Decimals in reported values.
    #[arg(long, default_value_t = 2)]
    round: u32,
    /// Minimum distinct values for a numeric variable to count as continuous.
    #[arg(long, default_value_t = 10)]
    nlim: usize,
    /// Maximum levels for a variable to be tabulated.
    #[arg(long, default_value_t = 10)]
    clim: usize,
    /// Numeric variables with fewer distinct values are tabulated.
    #[arg(long, default_value_t = 4)]
    freq_nlim: usize,
    /// Extra quantile probabilities, e.g. 0.1,0.9.
    #[arg(long, value_delimiter = ',')]
    quantiles: Vec<f64>,
    /// Report Tukey outlier counts.
    #[arg(long)]
    outlier: bool,
    /// Report skewness and kurtosis.
    #[arg(long, default_value_t = true, action = clap::ArgAction::Set)]
    shape: bool,
    /// Plots per family (seeded choice).
    #[arg(long)]
    sample: Option<usize>,
    /// Positive class of the target.
    #[arg(long)]
    pclass: Option<String>,
    #[arg(long, default_value_t = 42)]
    seed: u64,
}

impl ProfileArgs {
    fn config(&self) -> ProfileConfig {
        ProfileConfig {
            nlim: self.nlim,
            clim: self.clim,
            freq_nlim: self.freq_nlim,
            round: self.round,
            qnt: (!self.quantiles.is_empty()).then(|| self.quantiles.clone()),
            mes_of_shape: self.shape,
            outlier: self.outlier,
            sample: self.sample,
            pclass: self.pclass.clone(),
            seed: self.seed,
        }
    }
}

struct Failure {
    code: u8,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match root(&e) {
            Error::Io { .. }
            | Error::EmptyInput
            | Error::Parse { .. }
            | Error::RaggedRow { .. }
            | Error::Manifest { .. } => EXIT_INPUT,
            Error::Degenerate { .. } | Error::Undefined(_) => EXIT_EMPTY,
            _ => EXIT_USAGE,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

fn root(e: &Error) -> &Error {
    match e {
        Error::Section { source, .. } => root(source),
        e => e,
    }
}

fn usage(message: impl Into<String>) -> Failure {
    Failure {
        code: EXIT_USAGE,
        message: message.into(),
    }
}

fn empty(message: impl Into<String>) -> Failure {
    Failure {
        code: EXIT_EMPTY,
        message: message.into(),
    }
}

type Outcome = Result<String, Failure>;

impl Common {
    fn load(&self) -> Result<Table, Failure> {
        let delimiter = match self.delimiter.as_str() {
            "\\t" | "\t" | "tab" => b'\t',
            d if d.len() == 1 => d.as_bytes()[0],
            d => return Err(usage(format!("delimiter must be a single byte, got {d:?}"))),
        };
        let opts = CsvOptions {
            delimiter,
            has_header: !self.no_header,
            missing_tokens: self.na.clone(),
        };
        let raw = read_csv_path(&self.input, &opts)?;
        let table = match &self.kinds {
            Some(path) => {
                let text = fs::read_to_string(path).map_err(|source| Error::Io {
                    path: path.display().to_string(),
                    source,
                })?;
                infer_kinds_with(raw, self.max_levels, &KindManifest::parse(&text)?)?
            }
            None => infer_kinds(raw, self.max_levels),
        };
        Ok(table)
    }

    fn destination(&self, stem: &str) -> PathBuf {
        let ext = match self.format {
            Format::Csv => "csv",
            Format::Json => "json",
        };
        self.out
            .clone()
            .unwrap_or_else(|| self.out_dir.join(format!("{stem}.{ext}")))
    }

    fn config(&self) -> Result<ProfileConfig, Failure> {
        let cfg = self.profile.config();
        cfg.validate()?;
        Ok(cfg)
    }
}

fn write(path: &Path, contents: &str) -> Result<(), Failure> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).map_err(|e| Failure {
            code: 1,
            message: format!("cannot create {}: {e}", dir.display()),
        })?;
    }
    fs::write(path, contents.replace("\r\n", "\n")).map_err(|e| Failure {
        code: 1,
        message: format!("cannot write {}: {e}", path.display()),
    })
}

fn json<T: serde::Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serializable output");
    s.push('\n');
    s
}

fn run(cli: Cli) -> Outcome {
    match cli.command {
        Command::Overview(common) => {
            let table = common.load()?;
            let o = overview(&table);
            let text = match common.format {
                Format::Csv => o.to_grid(common.profile.round).to_csv(),
                Format::Json => json(&o),
            };
            let path = common.destination("overview");
            write(&path, &text)?;
            Ok(format!(
                "overview: {} rows, {} columns ({} numeric, {} categorical, {} text, {} logical, {} date) -> {}",
                o.n_rows,
                o.n_cols,
                o.n_numeric,
                o.n_categorical,
                o.n_text,
                o.n_logical,
                o.n_date,
                path.display()
            ))
        }
        Command::Numstat { common, by, group } => {
            let table = common.load()?;
            let cfg = common.config()?;
            let by = match (by, group) {
                (ByArg::A, _) => GroupBy::Overall,
                (ByArg::G, Some(g)) => GroupBy::Group(g),
                (ByArg::Ga, Some(g)) => GroupBy::Both(g),
                (_, None) => return Err(usage("--by G and GA need --group")),
            };
            let rows = numeric_summary(&table, &by, &cfg)?;
            if rows.is_empty() {
                return Err(empty("no continuous numeric variables"));
            }
            let text = match common.format {
                Format::Csv => numeric_csv(&rows, cfg.round),
                Format::Json => json(&rows.iter().map(|r| r.rounded(cfg.round)).collect::<Vec<_>>()),
            };
            let path = common.destination("numstat");
            write(&path, &text)?;
            Ok(format!("numstat: {} rows -> {}", rows.len(), path.display()))
        }
        Command::Cattab(common) => {
            let table = common.load()?;
            let cfg = common.config()?;
            let ft = frequency_table(&table, &cfg);
            if ft.is_empty() {
                return Err(empty("no categorical variables within --clim levels"));
            }
            let text = match common.format {
                Format::Csv => ft.to_csv(cfg.round),
                Format::Json => json(&ft.rounded(cfg.round)),
            };
            let path = common.destination("cattab");
            write(&path, &text)?;
            Ok(format!("cattab: {} rows -> {}", ft.rows.len(), path.display()))
        }
        Command::Assoc { common, target } => {
            let table = common.load()?;
            let cfg = common.config()?;
            let rows = associate_all(&table, &target, &cfg)?;
            if rows.is_empty() {
                return Err(empty(format!("no variables to associate with {target}")));
            }
            let text = match common.format {
                Format::Csv => assoc_csv(&rows, cfg.round),
                Format::Json => json(&rows.iter().map(|r| r.rounded(cfg.round)).collect::<Vec<_>>()),
            };
            let path = common.destination("assoc");
            write(&path, &text)?;
            Ok(format!("assoc: {} rows against {target} -> {}", rows.len(), path.display()))
        }
        Command::Custom {
            common,
            filter,
            group,
            value,
            stat,
        } => {
            let stats = stat
                .iter()
                .map(|s| s.parse::<AggSpec>())
                .collect::<Result<Vec<_>, _>>()?;
            let table = common.load()?;
            let mask = match &filter {
                Some(f) => Some(apply_filter(&table, &parse_filter(f)?)?),
                None => None,
            };
            let result = aggregate(&table, mask.as_deref(), &group, &value, &stats, common.profile.round)?;
            if result.rows.is_empty() {
                return Err(empty("no rows satisfy the filter"));
            }
            let text = match common.format {
                Format::Csv => result.to_csv(),
                Format::Json => {
                    let mut s = result.to_json();
                    s.push('\n');
                    s
                }
            };
            let path = common.destination("custom");
            write(&path, &text)?;
            Ok(format!("custom: {} rows -> {}", result.rows.len(), path.display()))
        }
        Command::Viz {
            common,
            kind,
            target,
            strata,
            vars,
        } => {
            let table = common.load()?;
            let cfg = common.config()?;
            let need_target = || target.clone().ok_or_else(|| usage("this plot kind needs --target"));
            let docs: Vec<SvgDocument> = match kind {
                VizKind::Scatter => viz::scatter_plots(&table, &need_target()?, &cfg)?,
                VizKind::Density => viz::density_plots(&table, &cfg),
                VizKind::Bar => viz::bar_plots(&table, &cfg),
                VizKind::Box => viz::box_plots(&table, &need_target()?, &cfg)?,
                VizKind::Qq => viz::qq_plots(&table, &cfg),
                VizKind::Parcoord => vec![viz::parallel_coord(&table, &need_target()?, &strata, &vars, &cfg)?],
            };
            if docs.is_empty() {
                return Err(empty("no eligible variables for this plot kind"));
            }
            let dir = common.out.clone().unwrap_or_else(|| common.out_dir.clone());
            for d in &docs {
                write(&dir.join(&d.file_name), &d.xml_text)?;
            }
            Ok(format!("viz: {} plots -> {}", docs.len(), dir.display()))
        }
        Command::Report {
            common,
            title,
            target,
            sections,
            families,
            plot_budget,
        } => {
            let sections = if sections.is_empty() {
                Section::ALL
                    .into_iter()
                    .filter(|s| *s != Section::Association || target.is_some())
                    .collect()
            } else {
                sections.iter().map(|s| s.parse()).collect::<Result<_, _>>()?
            };
            let families = if families.is_empty() {
                None
            } else {
                Some(families.iter().map(|s| s.parse::<PlotFamily>()).collect::<Result<_, _>>()?)
            };
            let cfg = ReportConfig {
                title,
                target,
                pclass: None,
                sections,
                families,
                plot_budget,
                profile: common.config()?,
            };
            let table = common.load()?;
            let html = render_report(&table, &cfg)?;
            let stats = collect_stats(&table, &cfg)?;
            let path = common
                .out
                .clone()
                .unwrap_or_else(|| common.out_dir.join("report.html"));
            let sidecar = path.with_extension("json");
            write(&path, &html)?;
            let mut js = stats_to_json(&stats.overview, &stats.numeric, &stats.categorical, &stats.association, cfg.profile.round);
            js.push('\n');
            write(&sidecar, &js)?;
            Ok(format!("report: {} rows -> {} (+ {})", table.n_rows(), path.display(), sidecar.display()))
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(EXIT_USAGE) } else { ExitCode::SUCCESS };
        }
    };
    match run(cli) {
        Ok(summary) => {
            println!("{summary}");
            ExitCode::SUCCESS
        }
        Err(f) => {
            eprintln!("autoeda: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
