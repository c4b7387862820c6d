//! Analytic (input) and polyhedral (output) partitions and their jump measures.

pub mod analytic;
pub mod domain;
pub mod labels;
pub mod measure;
pub mod patch;
pub mod polyhedral;
pub mod sampling;
pub mod volumes;

pub use analytic::{AnalyticPartition, Classifier, PartitionSummary};
pub use domain::Domain;
pub use labels::LabelSet;
pub use measure::{jump_measure, measure_difference_tv, restricted_difference_tv, MeasureEntry, PolyhedralMeasure};
pub use patch::{Graph, InterfacePatch, Param, PatchDescriptor, PatchGeometry};
pub use polyhedral::{JumpFacet, PolyhedralPartition};
pub use volumes::{phase_volumes, symmetric_difference_volume};
