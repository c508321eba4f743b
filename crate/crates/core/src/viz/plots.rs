use std::collections::BTreeMap;

use rand::seq::index;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::svg::{choose, file_name, Canvas, Scale, SvgDocument, PALETTE};
use crate::categorical::{level_counts, tabulated_columns};
use crate::config::ProfileConfig;
use crate::error::{Error, Result};
use crate::format::fixed_text;
use crate::numeric::continuous_columns;
use crate::stats::{normal_quantile, quantile_sorted, sorted_finite, BoxStats, Kde, KDE_GRID_POINTS};
use crate::table::{Column, Table, NA_LEVEL};

fn numbers(col: &Column) -> Result<&[f64]> {
    col.numbers().ok_or_else(|| Error::TypeMismatch {
        column: col.name().to_string(),
        message: format!("expected a numeric column, found {}", col.kind()),
    })
}

fn require_grouping(col: &Column, nlim: usize) -> Result<()> {
    if col.profiled_kind(nlim).is_categorical_like() {
        Ok(())
    } else {
        Err(Error::TypeMismatch {
            column: col.name().to_string(),
            message: format!("grouping needs a categorical column, found {}", col.kind()),
        })
    }
}

/// Row indices per level in lexicographic level order; missing rows form an
/// `NA` level when `with_missing` is set.
fn group_rows(col: &Column, with_missing: bool) -> Vec<(String, Vec<usize>)> {
    let levels = col.levels();
    let mut map: BTreeMap<String, Vec<usize>> = BTreeMap::new();
    for (i, code) in levels.codes.iter().enumerate() {
        match code {
            Some(c) => map.entry(levels.labels[*c as usize].clone()).or_default().push(i),
            None if with_missing => map.entry(NA_LEVEL.to_string()).or_default().push(i),
            None => {}
        }
    }
    map.into_iter().collect()
}

fn finite_range(values: impl IntoIterator<Item = f64>) -> Option<(f64, f64)> {
    values
        .into_iter()
        .filter(|x| x.is_finite())
        .fold(None, |acc, x| match acc {
            None => Some((x, x)),
            Some((lo, hi)) => Some((lo.min(x), hi.max(x))),
        })
}

/// One scatter of `target` against each continuous numeric partner, over
/// rows where both values are finite.
pub fn scatter_plots(table: &Table, target: &str, config: &ProfileConfig) -> Result<Vec<SvgDocument>> {
    let tcol = table.column(target)?;
    let y = numbers(tcol)?;
    let partners: Vec<&Column> = continuous_columns(table, config.nlim)
        .filter(|c| c.name() != target)
        .collect();
    let mut out = Vec::new();
    for pcol in choose(partners, config.sample, config.seed) {
        let x = numbers(pcol)?;
        let pts: Vec<(f64, f64)> = x
            .iter()
            .zip(y)
            .filter(|(a, b)| a.is_finite() && b.is_finite())
            .map(|(&a, &b)| (a, b))
            .collect();
        let mut cv = Canvas::new();
        let (l, t, r, b) = cv.area();
        let (x0, x1) = finite_range(pts.iter().map(|p| p.0)).unwrap_or((0.0, 1.0));
        let (y0, y1) = finite_range(pts.iter().map(|p| p.1)).unwrap_or((0.0, 1.0));
        let sx = Scale::padded(x0, x1, l, r);
        let sy = Scale::padded(y0, y1, b, t);
        cv.axes(Some(&sx), Some(&sy), pcol.name(), target);
        cv.raw(r##"<g class="points" fill="#1b9e77" fill-opacity="0.6">"##);
        for (a, c) in &pts {
            cv.circle(sx.map(*a), sy.map(*c), 2.5, "");
        }
        cv.raw("</g>");
        let title = format!("Scatter plot of {target} vs. {}", pcol.name());
        out.push(cv.finish(&title, file_name("scatter", &[pcol.name(), target])));
    }
    Ok(out)
}

/// Kernel density curves for continuous numeric variables; variables with
/// fewer than two distinct finite values are skipped.
pub fn density_plots(table: &Table, config: &ProfileConfig) -> Vec<SvgDocument> {
    let candidates: Vec<(&Column, Kde<f64>)> = continuous_columns(table, config.nlim)
        .filter_map(|c| Some((c, Kde::estimate(c.numbers()?, KDE_GRID_POINTS)?)))
        .collect();
    choose(candidates, config.sample, config.seed)
        .into_iter()
        .map(|(col, kde)| {
            let mut cv = Canvas::new();
            let (l, t, r, b) = cv.area();
            let sx = Scale::exact(kde.grid[0], kde.grid[kde.grid.len() - 1], l, r);
            let top = kde.density.iter().copied().fold(0.0, f64::max);
            let sy = Scale::exact(0.0, top * 1.05, b, t);
            cv.axes(Some(&sx), Some(&sy), col.name(), "Density");
            let pts: Vec<(f64, f64)> = kde
                .grid
                .iter()
                .zip(&kde.density)
                .map(|(&g, &d)| (sx.map(g), sy.map(d)))
                .collect();
            let mut d = format!("M{:.2},{:.2}", pts[0].0, b);
            for (x, y) in &pts {
                d.push_str(&format!(" L{x:.2},{y:.2}"));
            }
            d.push_str(&format!(" L{:.2},{b:.2} Z", pts[pts.len() - 1].0));
            cv.path(&d, r##"class="density-area" fill="#7570b3" fill-opacity="0.3" stroke="none""##);
            cv.polyline(pts, r##"class="density" stroke="#7570b3" stroke-width="1.5""##);
            let title = format!("Density plot for {}", col.name());
            cv.finish(&title, file_name("density", &[col.name()]))
        })
        .collect()
}

/// One bar per level (missing as `NA`) with height equal to the level's
/// percent of the variable's rows, on a fixed 0 to 100 axis. Bars are the
/// only `rect` elements.
pub fn bar_plots(table: &Table, config: &ProfileConfig) -> Vec<SvgDocument> {
    let n = table.n_rows();
    if n == 0 {
        return Vec::new();
    }
    let cols = choose(tabulated_columns(table, config), config.sample, config.seed);
    cols.into_iter()
        .map(|col| {
            let counts = level_counts(col);
            let mut cv = Canvas::new();
            let (l, t, r, b) = cv.area();
            let sy = Scale::exact(0.0, 100.0, b, t);
            cv.axes(None, Some(&sy), col.name(), "Percent");
            let slot = (r - l) / counts.len() as f64;
            let width = slot * 0.7;
            for (i, (level, count)) in counts.iter().enumerate() {
                let pct = 100.0 * *count as f64 / n as f64;
                let x = l + slot * i as f64 + (slot - width) / 2.0;
                let y = sy.map(pct);
                cv.rect(
                    x,
                    y,
                    width,
                    b - y,
                    &format!(
                        r#"class="bar" fill="{}" data-level="{}" data-percent="{pct}""#,
                        PALETTE[i % PALETTE.len()],
                        super::svg::escape(level)
                    ),
                );
                let label = format!("{}%", fixed_text(Some(pct), config.round));
                cv.text(x + width / 2.0, y - 4.0, "middle", &label, r#"font-size="11""#);
                cv.text(x + width / 2.0, b + 18.0, "middle", level, r#"font-size="11""#);
            }
            let title = format!("Bar plot for {}", col.name());
            cv.finish(&title, file_name("bar", &[col.name()]))
        })
        .collect()
}

/// Tukey box plots of each continuous numeric variable split by the levels of
/// `group`.
pub fn box_plots(table: &Table, group: &str, config: &ProfileConfig) -> Result<Vec<SvgDocument>> {
    let gcol = table.column(group)?;
    require_grouping(gcol, config.nlim)?;
    let groups = group_rows(gcol, true);
    let vars: Vec<&Column> = continuous_columns(table, config.nlim)
        .filter(|c| c.name() != group)
        .collect();
    let mut out = Vec::new();
    for col in choose(vars, config.sample, config.seed) {
        let v = numbers(col)?;
        let boxes: Vec<(&str, BoxStats<f64>)> = groups
            .iter()
            .filter_map(|(level, rows)| {
                let vals: Vec<f64> = rows.iter().map(|&i| v[i]).collect();
                Some((level.as_str(), BoxStats::of(&vals)?))
            })
            .collect();
        let mut cv = Canvas::new();
        let (l, t, r, b) = cv.area();
        let (lo, hi) = finite_range(
            boxes
                .iter()
                .flat_map(|(_, s)| [s.lower_whisker, s.upper_whisker].into_iter().chain(s.outliers.iter().copied())),
        )
        .unwrap_or((0.0, 1.0));
        let sy = Scale::padded(lo, hi, b, t);
        cv.axes(None, Some(&sy), group, col.name());
        let slot = (r - l) / boxes.len().max(1) as f64;
        let width = slot * 0.5;
        for (i, (level, s)) in boxes.iter().enumerate() {
            let cx = l + slot * (i as f64 + 0.5);
            let (x0, x1) = (cx - width / 2.0, cx + width / 2.0);
            let color = PALETTE[i % PALETTE.len()];
            cv.raw(&format!(
                r#"<g class="box" data-level="{}" stroke="{color}">"#,
                super::svg::escape(level)
            ));
            cv.line(cx, sy.map(s.lower_whisker), cx, sy.map(s.q1), r#"class="whisker""#);
            cv.line(cx, sy.map(s.q3), cx, sy.map(s.upper_whisker), r#"class="whisker""#);
            cv.line(cx - width / 4.0, sy.map(s.lower_whisker), cx + width / 4.0, sy.map(s.lower_whisker), r#"class="whisker-cap""#);
            cv.line(cx - width / 4.0, sy.map(s.upper_whisker), cx + width / 4.0, sy.map(s.upper_whisker), r#"class="whisker-cap""#);
            let top = sy.map(s.q3);
            cv.rect(x0, top, width, sy.map(s.q1) - top, r#"fill="white" fill-opacity="0""#);
            cv.line(x0, sy.map(s.median), x1, sy.map(s.median), r#"class="median" stroke-width="2""#);
            for &o in &s.outliers {
                cv.circle(cx, sy.map(o), 2.5, r#"class="outlier" fill="none""#);
            }
            cv.raw("</g>");
            cv.text(cx, b + 18.0, "middle", level, r#"font-size="11""#);
        }
        let title = format!("Box plot for {} vs. {group}", col.name());
        out.push(cv.finish(&title, file_name("box", &[col.name(), group])));
    }
    Ok(out)
}

/// Normal probability plot coordinates.
#[derive(Debug, Clone, PartialEq)]
pub struct QqPoints {
    /// Standard normal quantiles at `(i - 0.5) / n`.
    pub theoretical: Vec<f64>,
    /// Sorted finite sample.
    pub sample: Vec<f64>,
    pub slope: f64,
    pub intercept: f64,
}

/// `None` with fewer than three finite values. The reference line passes
/// through the first and third quartiles of both coordinate sets.
pub fn qq_points(values: &[f64]) -> Option<QqPoints> {
    let sample = sorted_finite(values);
    let n = sample.len();
    if n < 3 {
        return None;
    }
    let theoretical: Vec<f64> = (1..=n)
        .map(|i| normal_quantile((i as f64 - 0.5) / n as f64).expect("probability inside (0, 1)"))
        .collect();
    let q = |s: &[f64], p: f64| quantile_sorted(s, p).expect("non-empty");
    let (t1, t3) = (q(&theoretical, 0.25), q(&theoretical, 0.75));
    let (s1, s3) = (q(&sample, 0.25), q(&sample, 0.75));
    let slope = (s3 - s1) / (t3 - t1);
    Some(QqPoints {
        intercept: s1 - slope * t1,
        theoretical,
        sample,
        slope,
    })
}

/// Above this many points a normal probability plot draws evenly spaced
/// order statistics only.
const QQ_DRAW_LIMIT: usize = 5000;
const QQ_DRAWN: usize = 1000;

fn drawn_ranks(n: usize) -> Vec<usize> {
    if n <= QQ_DRAW_LIMIT {
        return (0..n).collect();
    }
    (0..QQ_DRAWN)
        .map(|k| ((k as f64 * (n - 1) as f64 / (QQ_DRAWN - 1) as f64).round()) as usize)
        .collect()
}

/// Normal probability plots for continuous numeric variables.
pub fn qq_plots(table: &Table, config: &ProfileConfig) -> Vec<SvgDocument> {
    let candidates: Vec<(&Column, QqPoints)> = continuous_columns(table, config.nlim)
        .filter_map(|c| Some((c, qq_points(c.numbers()?)?)))
        .collect();
    choose(candidates, config.sample, config.seed)
        .into_iter()
        .map(|(col, qq)| {
            let mut cv = Canvas::new();
            let (l, t, r, b) = cv.area();
            let (tx0, tx1) = (qq.theoretical[0], qq.theoretical[qq.theoretical.len() - 1]);
            let (sy0, sy1) = (qq.sample[0], qq.sample[qq.sample.len() - 1]);
            let sx = Scale::padded(tx0, tx1, l, r);
            let sy = Scale::padded(sy0, sy1, b, t);
            cv.axes(Some(&sx), Some(&sy), "Theoretical quantiles", col.name());
            cv.raw(r##"<g class="points" fill="#d95f02" fill-opacity="0.6">"##);
            for i in drawn_ranks(qq.sample.len()) {
                cv.circle(sx.map(qq.theoretical[i]), sy.map(qq.sample[i]), 2.0, "");
            }
            cv.raw("</g>");
            // clip the reference line to the plotted y range
            let at = |x: f64| qq.intercept + qq.slope * x;
            let (mut xa, mut xb) = (tx0, tx1);
            if qq.slope != 0.0 {
                let lo_y = (sy0 - qq.intercept) / qq.slope;
                let hi_y = (sy1 - qq.intercept) / qq.slope;
                let (lo_x, hi_x) = if lo_y < hi_y { (lo_y, hi_y) } else { (hi_y, lo_y) };
                xa = xa.max(lo_x);
                xb = xb.min(hi_x);
            }
            cv.line(
                sx.map(xa),
                sy.map(at(xa)),
                sx.map(xb),
                sy.map(at(xb)),
                r##"class="reference" stroke="#333" stroke-dasharray="4 3""##,
            );
            let title = format!("Normality plot for {}", col.name());
            cv.finish(&title, file_name("qq", &[col.name()]))
        })
        .collect()
}

/// Parallel coordinates over `variables` for a stratified sample drawn without
/// replacement: `strata_sizes[i]` rows (capped at the level size) from the
/// i-th level of `group` in lexicographic order. Only rows with a group level
/// and finite values on every variable are eligible. Axes are min-max scaled
/// over the whole table; a constant axis sits at 0.5.
pub fn parallel_coord(
    table: &Table,
    group: &str,
    strata_sizes: &[usize],
    variables: &[String],
    config: &ProfileConfig,
) -> Result<SvgDocument> {
    let gcol = table.column(group)?;
    require_grouping(gcol, config.nlim)?;
    if variables.is_empty() {
        return Err(Error::Config("parallel coordinates need at least one variable".into()));
    }
    let cols = variables
        .iter()
        .map(|v| numbers(table.column(v)?))
        .collect::<Result<Vec<_>>>()?;
    let levels = group_rows(gcol, false);
    if levels.len() != strata_sizes.len() {
        return Err(Error::Config(format!(
            "{group} has {} levels but {} strata sizes were given",
            levels.len(),
            strata_sizes.len()
        )));
    }
    let ranges: Vec<Option<(f64, f64)>> = cols.iter().map(|c| finite_range(c.iter().copied())).collect();
    let scaled = |j: usize, x: f64| match ranges[j] {
        Some((lo, hi)) if hi > lo => (x - lo) / (hi - lo),
        _ => 0.5,
    };

    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let mut cv = Canvas::new();
    let (l, t, r, b) = cv.area();
    let step = if cols.len() > 1 { (r - l) / (cols.len() - 1) as f64 } else { 0.0 };
    let axis_x = |j: usize| if cols.len() > 1 { l + step * j as f64 } else { (l + r) / 2.0 };
    for (j, name) in variables.iter().enumerate() {
        let x = axis_x(j);
        cv.line(x, t, x, b, r##"class="axis" stroke="#333""##);
        cv.text(x, b + 18.0, "middle", name, r#"font-size="11""#);
    }
    for (i, ((level, rows), &size)) in levels.iter().zip(strata_sizes).enumerate() {
        let eligible: Vec<usize> = rows
            .iter()
            .copied()
            .filter(|&row| cols.iter().all(|c| c[row].is_finite()))
            .collect();
        let k = size.min(eligible.len());
        let mut picked = index::sample(&mut rng, eligible.len(), k).into_vec();
        picked.sort_unstable();
        let color = PALETTE[i % PALETTE.len()];
        cv.raw(&format!(
            r#"<g class="stratum" data-level="{}" stroke="{color}" stroke-opacity="0.7">"#,
            super::svg::escape(level)
        ));
        for p in picked {
            let row = eligible[p];
            cv.polyline(
                cols.iter()
                    .enumerate()
                    .map(|(j, c)| (axis_x(j), b - scaled(j, c[row]) * (b - t))),
                "",
            );
        }
        cv.raw("</g>");
        cv.text(r, t + 12.0 + 14.0 * i as f64, "end", level, &format!(r#"font-size="11" fill="{color}""#));
    }
    let title = format!("Parallel coordinates by {group}");
    Ok(cv.finish(&title, file_name("parcoord", &[group])))
}
