//! Extension of a partition of a bounded planar domain across its boundary.

mod reflect;
mod tube;

pub use reflect::{
    agrees_on_domain, created_jump_count, probe_sides, reflect_extend, Extension, ReflectedClassifier, ReflectedCurve, TubeCurve,
};
pub use tube::{TubularMap, RHO_FLOOR};
