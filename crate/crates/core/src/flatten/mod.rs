//! Local flattening of the jump set: chart fitting, cutoffs, the composed
//! diffeomorphism, the greedy ball cover and the flat pieces with μ*.

pub mod chart;
pub mod cover;
pub mod cutoff;
pub mod index;
pub mod map;
pub mod pieces;

pub use chart::{fit_chart, Chart, ChartRecord, LocalDiffeo, R_MIN};
pub use cover::{greedy_cover, Cover, CoverDump, CoverOptions, Uncovered};
pub use cutoff::Cutoff;
pub use index::BallIndex;
pub use map::{compose, FlatteningMap, MapBounds};
pub use pieces::{flat_pieces, polygon_sides, FlatPieces};
