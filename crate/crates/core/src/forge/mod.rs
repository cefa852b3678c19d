//! Colorings of `{0,1,2,3}^N` by square classes, monochromatic line search,
//! and conversion of lines into curve points.

pub mod coloring;
pub mod pipeline;
pub mod scan;
pub mod search;

pub use coloring::{
    line_values, quadratic_weierstrass_point, r_v, s_w, xi_eval, ColorField, ColoringSpec, CombinatorialLine,
};
pub use pipeline::{forge, line_to_point, ForgeBudget, ForgeOutcome, ForgeReport, ForgeResult, RestartLog, SpecSummary};
pub use scan::{scan_linear_family, ScanRow};
pub use search::{find_monochromatic_line, is_monochromatic, search_lines, search_table, LineSearch};
