//! Reflection of the triple junction across the unit circle.
use polypart::extend::{agrees_on_domain, created_jump_count, reflect_extend, TubularMap};
use polypart::geometry::Point;
use polypart::harness::triple_junction;
use std::sync::Arc;

fn main() -> anyhow::Result<()> {
    let u = triple_junction();
    let tube = Arc::new(TubularMap::new(u.domain().expect("disc domain"))?);
    let ext = reflect_extend(&u, tube)?;
    println!(
        "tube width {:.4}, outer phase {}, {} reflected and {} outer patches, {} patches in total",
        ext.tube.rho,
        ext.z0,
        ext.reflected,
        ext.outer,
        ext.partition.patches().len()
    );
    println!("jumps created on the boundary: {}", created_jump_count(&ext, 1000));
    println!("agrees with u inside the disc: {}", agrees_on_domain(&ext, &u, 200));
    for x in [Point::<2>::new(0.01, 1.02), Point::<2>::new(-0.01, 1.02), Point::<2>::new(-1.02, -0.2), Point::<2>::new(1.5, 1.5)] {
        println!("extended phase at {:?}: {}", x.as_slice(), ext.partition.phase(&x));
    }
    Ok(())
}
