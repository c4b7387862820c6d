//! Seed construction and Voronoi tessellation adapted to a set of flat pieces.

mod checks;
mod locate;
mod seeds;
mod voronoi;

pub use checks::{check_tessellation, face_cap, piece_samples, thin_separation_check, SeparationReport, TessellationReport};
pub use locate::{box_distance, PieceLocator};
pub use seeds::{build_graded_seed_set, build_seed_set, c_star, delta0, GradedOptions, SeedKind, SeedSet};
pub use voronoi::{brute_force_cell, voronoi, Tessellation};
