//! Single-file HTML report and JSON statistics export.

use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::association::{self, AssociationStat};
use crate::categorical::{frequency_table, FrequencyRow};
use crate::config::ProfileConfig;
use crate::error::{Error, Result};
use crate::format::Grid;
use crate::numeric::{self, numeric_summary, GroupBy, NumericSummary};
use crate::table::{overview, ColumnKind, OverviewSummary, Table};
use crate::viz::{self, SvgDocument};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Section {
    Overview,
    Numeric,
    Categorical,
    Association,
    Plots,
}

impl Section {
    pub const ALL: [Section; 5] = [
        Section::Overview,
        Section::Numeric,
        Section::Categorical,
        Section::Association,
        Section::Plots,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Section::Overview => "overview",
            Section::Numeric => "numeric",
            Section::Categorical => "categorical",
            Section::Association => "association",
            Section::Plots => "plots",
        }
    }
}

impl FromStr for Section {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Section::ALL
            .into_iter()
            .find(|x| x.as_str() == s.trim().to_ascii_lowercase())
            .ok_or_else(|| Error::Config(format!("unknown report section {s:?}")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PlotFamily {
    Scatter,
    Density,
    Bar,
    Box,
    Qq,
}

impl PlotFamily {
    pub const ALL: [PlotFamily; 5] = [
        PlotFamily::Scatter,
        PlotFamily::Density,
        PlotFamily::Bar,
        PlotFamily::Box,
        PlotFamily::Qq,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            PlotFamily::Scatter => "scatter",
            PlotFamily::Density => "density",
            PlotFamily::Bar => "bar",
            PlotFamily::Box => "box",
            PlotFamily::Qq => "qq",
        }
    }

    fn heading(self) -> &'static str {
        match self {
            PlotFamily::Scatter => "Scatter plots",
            PlotFamily::Density => "Density plots",
            PlotFamily::Bar => "Bar plots",
            PlotFamily::Box => "Box plots",
            PlotFamily::Qq => "Normality plots",
        }
    }
}

impl FromStr for PlotFamily {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        PlotFamily::ALL
            .into_iter()
            .find(|x| x.as_str() == s.trim().to_ascii_lowercase())
            .ok_or_else(|| Error::Config(format!("unknown plot family {s:?}")))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportConfig {
    pub title: String,
    pub target: Option<String>,
    /// Overrides `profile.pclass` when set.
    pub pclass: Option<String>,
    pub sections: BTreeSet<Section>,
    /// Families to draw; `None` draws every family that applies to the data.
    /// Scatter plots need a numeric target, box plots a categorical one.
    pub families: Option<BTreeSet<PlotFamily>>,
    /// Maximum plots per family.
    pub plot_budget: usize,
    pub profile: ProfileConfig,
}

impl Default for ReportConfig {
    fn default() -> Self {
        ReportConfig {
            title: "Exploratory data analysis".into(),
            target: None,
            pclass: None,
            sections: [Section::Overview, Section::Numeric, Section::Categorical, Section::Plots]
                .into_iter()
                .collect(),
            families: None,
            plot_budget: 6,
            profile: ProfileConfig::default(),
        }
    }
}

impl ReportConfig {
    pub fn validate(&self) -> Result<()> {
        self.profile.validate()?;
        if self.plot_budget < 1 {
            return Err(Error::Config("plot budget must be at least 1".into()));
        }
        if self.sections.contains(&Section::Association) && self.target.is_none() {
            return Err(Error::Config("the association section needs a target".into()));
        }
        Ok(())
    }

    fn effective_profile(&self) -> ProfileConfig {
        let mut p = self.profile.clone();
        if self.pclass.is_some() {
            p.pclass = self.pclass.clone();
        }
        p
    }
}

/// Every statistic of the report, unrounded.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StatsBundle {
    pub overview: OverviewSummary,
    pub numeric: Vec<NumericSummary>,
    pub categorical: Vec<FrequencyRow>,
    pub association: Vec<AssociationStat>,
}

impl StatsBundle {
    pub fn rounded(&self, digits: u32) -> Self {
        StatsBundle {
            overview: self.overview,
            numeric: self.numeric.iter().map(|r| r.rounded(digits)).collect(),
            categorical: crate::categorical::FrequencyTable {
                rows: self.categorical.clone(),
            }
            .rounded(digits)
            .rows,
            association: self.association.iter().map(|r| r.rounded(digits)).collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StatsDocument {
    #[serde(flatten)]
    pub stats: StatsBundle,
    pub round: u32,
    pub rounded: StatsBundle,
}

/// JSON object with keys `overview`, `numeric`, `categorical`,
/// `association`, then `round` and a `rounded` mirror.
pub fn stats_to_json(
    overview: &OverviewSummary,
    numeric: &[NumericSummary],
    categorical: &[FrequencyRow],
    association: &[AssociationStat],
    round: u32,
) -> String {
    let stats = StatsBundle {
        overview: *overview,
        numeric: numeric.to_vec(),
        categorical: categorical.to_vec(),
        association: association.to_vec(),
    };
    let doc = StatsDocument {
        rounded: stats.rounded(round),
        stats,
        round,
    };
    serde_json::to_string_pretty(&doc).expect("statistics serialize")
}

/// Compute the statistics behind the report sections. Sections that are not
/// requested stay empty.
pub fn collect_stats(table: &Table, config: &ReportConfig) -> Result<StatsBundle> {
    config.validate()?;
    let profile = config.effective_profile();
    let want = |s| config.sections.contains(&s);
    let numeric = if want(Section::Numeric) {
        numeric_summary(table, &GroupBy::Overall, &profile).map_err(|e| e.in_section("numeric"))?
    } else {
        Vec::new()
    };
    let categorical = if want(Section::Categorical) {
        frequency_table(table, &profile).rows
    } else {
        Vec::new()
    };
    let association = match (&config.target, want(Section::Association)) {
        (Some(t), true) => association::associate_all(table, t, &profile).map_err(|e| e.in_section("association"))?,
        _ => Vec::new(),
    };
    Ok(StatsBundle {
        overview: overview(table),
        numeric,
        categorical,
        association,
    })
}

const STYLE: &str = "body{font-family:sans-serif;margin:2em auto;max-width:72em;color:#222}\
h1{border-bottom:2px solid #1b9e77}\
table{border-collapse:collapse;margin:1em 0;font-size:0.85em}\
th,td{border:1px solid #bbb;padding:0.2em 0.5em;text-align:right}\
th{background:#eee}\
td:first-child,th:first-child{text-align:left}\
figure{display:inline-block;margin:0.5em}\
figcaption{font-size:0.8em;text-align:center}\
footer{margin-top:3em;font-size:0.8em;color:#555}\
pre{white-space:pre-wrap}";

fn escape(s: &str) -> String {
    crate::viz::escape_text(s)
}

fn html_table(out: &mut String, class: &str, grid: &Grid) {
    let _ = writeln!(out, "<table class=\"{class}\">");
    out.push_str("<thead><tr>");
    for h in &grid.header {
        let _ = write!(out, "<th>{}</th>", escape(h));
    }
    out.push_str("</tr></thead>\n<tbody>\n");
    for row in &grid.rows {
        out.push_str("<tr>");
        for c in row {
            let _ = write!(out, "<td>{}</td>", escape(c));
        }
        out.push_str("</tr>\n");
    }
    out.push_str("</tbody>\n</table>\n");
}

fn plots(table: &Table, config: &ReportConfig) -> Result<Vec<(PlotFamily, Vec<SvgDocument>)>> {
    let mut profile = config.effective_profile();
    profile.sample = Some(profile.sample.map_or(config.plot_budget, |s| s.min(config.plot_budget)));
    let target = match &config.target {
        Some(t) => Some(table.column(t)?),
        None => None,
    };
    let numeric_target = target.filter(|c| c.kind() == ColumnKind::Numeric && !c.profiled_kind(profile.nlim).is_categorical_like());
    let group_target = target.filter(|c| c.profiled_kind(profile.nlim).is_categorical_like());
    let families: Vec<PlotFamily> = match &config.families {
        Some(f) => f.iter().copied().collect(),
        None => PlotFamily::ALL
            .into_iter()
            .filter(|f| match f {
                PlotFamily::Scatter => numeric_target.is_some(),
                PlotFamily::Box => group_target.is_some(),
                _ => true,
            })
            .collect(),
    };
    let mut out = Vec::new();
    for f in families {
        let docs = match f {
            PlotFamily::Scatter => {
                let t = numeric_target
                    .ok_or_else(|| Error::Config("scatter plots need a numeric target".into()))?;
                viz::scatter_plots(table, t.name(), &profile)?
            }
            PlotFamily::Box => {
                let t = group_target
                    .ok_or_else(|| Error::Config("box plots need a categorical target".into()))?;
                viz::box_plots(table, t.name(), &profile)?
            }
            PlotFamily::Density => viz::density_plots(table, &profile),
            PlotFamily::Bar => viz::bar_plots(table, &profile),
            PlotFamily::Qq => viz::qq_plots(table, &profile),
        };
        out.push((f, docs));
    }
    Ok(out)
}

/// Self-contained HTML5 document (also well-formed XML) with the requested
/// sections in the order overview, numeric, categorical, association, plots.
pub fn render_report(table: &Table, config: &ReportConfig) -> Result<String> {
    let stats = collect_stats(table, config)?;
    let round = config.profile.round;
    let mut out = String::new();
    out.push_str("<!DOCTYPE html>\n<html xmlns=\"http://www.w3.org/1999/xhtml\" lang=\"en\">\n<head>\n");
    out.push_str("<meta charset=\"utf-8\"/>\n");
    let _ = writeln!(out, "<title>{}</title>", escape(&config.title));
    let _ = writeln!(out, "<style>{STYLE}</style>");
    out.push_str("</head>\n<body>\n");
    let _ = writeln!(
        out,
        "<header><h1>{}</h1><p>{} rows, {} columns</p></header>",
        escape(&config.title),
        table.n_rows(),
        table.n_cols()
    );
    for section in Section::ALL {
        if !config.sections.contains(&section) {
            continue;
        }
        let _ = writeln!(out, "<section id=\"{}\">", section.as_str());
        match section {
            Section::Overview => {
                out.push_str("<h2>Data overview</h2>\n");
                html_table(&mut out, "overview", &stats.overview.to_grid(round));
            }
            Section::Numeric => {
                out.push_str("<h2>Numeric variables</h2>\n");
                html_table(&mut out, "numeric", &numeric::to_grid(&stats.numeric, round));
            }
            Section::Categorical => {
                out.push_str("<h2>Categorical variables</h2>\n");
                let ft = crate::categorical::FrequencyTable {
                    rows: stats.categorical.clone(),
                };
                html_table(&mut out, "categorical", &ft.to_grid(round));
            }
            Section::Association => {
                let _ = writeln!(
                    out,
                    "<h2>Association with {}</h2>",
                    escape(config.target.as_deref().unwrap_or_default())
                );
                html_table(&mut out, "association", &association::to_grid(&stats.association, round));
            }
            Section::Plots => {
                out.push_str("<h2>Plots</h2>\n");
                for (family, docs) in plots(table, config).map_err(|e| e.in_section("plots"))? {
                    let _ = writeln!(out, "<h3 class=\"family-{}\">{}</h3>", family.as_str(), family.heading());
                    if docs.is_empty() {
                        out.push_str("<p>No eligible variables.</p>\n");
                    }
                    for doc in docs {
                        let _ = writeln!(out, "<figure class=\"plot-{}\">", family.as_str());
                        out.push_str(doc.inline());
                        let _ = writeln!(out, "<figcaption>{}</figcaption>\n</figure>", escape(&doc.title));
                    }
                }
            }
        }
        out.push_str("</section>\n");
    }
    let config_json = serde_json::to_string_pretty(config).expect("config serializes");
    let _ = writeln!(
        out,
        "<footer><p>Random seed {}.</p><pre>{}</pre></footer>",
        config.profile.seed,
        escape(&config_json)
    );
    out.push_str("</body>\n</html>\n");
    Ok(out)
}
