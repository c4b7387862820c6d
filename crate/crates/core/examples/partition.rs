//! A hand-built analytic partition: a disc with scalar labels.
use polypart::geometry::Point;
use polypart::partition::patch::CircleArc;
use polypart::partition::{AnalyticPartition, InterfacePatch, LabelSet};
use std::sync::Arc;

fn main() -> anyhow::Result<()> {
    let c = Point::<2>::new(0.4, 0.6);
    let r = 0.25;
    let cls = move |x: &Point<2>| ((x - c).norm() >= r) as usize;
    let labels = LabelSet::scalars(&[0.0, 3.0])?;
    let patch = InterfacePatch::new(Arc::new(CircleArc::circle(c, r)), 1, 0);
    let u = AnalyticPartition::new(labels, Arc::new(cls), vec![patch], (Point::<2>::zeros(), Point::<2>::repeat(1.0)))?;
    u.validate()?;
    println!("|Du| = {:.6} (expected {:.6})", u.jump_mass(), 3.0 * std::f64::consts::TAU * r);
    println!("distance from the origin to the jump set: {:.6}", u.interface_distance(&Point::<2>::zeros()));
    println!("{}", serde_json::to_string_pretty(&u.summary())?);
    Ok(())
}
