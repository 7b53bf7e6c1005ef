//! Truncated formal series in the transversal coordinate and the maps built
//! from them: cocycles, chart changes, composition, inversion, formal roots
//! and cyclic covers.

mod cocycle;
mod format;
mod map;
#[allow(clippy::module_inception)]
mod series;

pub use cocycle::{
    conjugate_transversal_scaling, cyclic_cover, deck_symmetric, ChartChange, ChartSide, Cocycle,
};
pub use format::{parse_cocycle, print_cocycle};
pub use map::{map_compose, map_compose_with, map_invert, CompositionLimits, TransversalMap, XBase};
pub use series::{series_root, JetSeries, TransversalSeries};
