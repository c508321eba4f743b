//! Standalone SVG plots.

mod plots;
mod svg;

pub use self::plots::{
    bar_plots, box_plots, density_plots, parallel_coord, qq_plots, qq_points, scatter_plots, QqPoints,
};
pub use self::svg::{escape as escape_text, SvgDocument, DEFAULT_HEIGHT, DEFAULT_WIDTH};
