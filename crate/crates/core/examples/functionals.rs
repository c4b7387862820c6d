//! Isotropic and anisotropic interface energies of an analytic partition
//! and of a polyhedral one.
use polypart::flatten::FlatteningMap;
use polypart::functionals::{energy_analytic, energy_polyhedral, energy_pullback, pairwise_perimeters, SurfaceEnergyDensity};
use polypart::geometry::{ConvexPolytope, Point};
use polypart::harness::circle;
use polypart::partition::PolyhedralPartition;

fn main() -> anyhow::Result<()> {
    let u = circle();
    let unit = SurfaceEnergyDensity::unit();
    let aniso = SurfaceEnergyDensity::anisotropic(0.5);
    println!("circle: perimeter {:.8}, anisotropic energy {:.8}", energy_analytic(&u, &unit)?, energy_analytic(&u, &aniso)?);
    let pb = energy_pullback(&u, &FlatteningMap::identity(0.1), &aniso)?;
    println!("pullback through the identity map: {pb:.8}");

    let rect = |x0: f64, x1: f64| ConvexPolytope::from_box(&Point::<2>::new(x0, 0.0), &Point::<2>::new(x1, 1.0));
    let w = PolyhedralPartition::from_cells(vec![rect(0.0, 0.3), rect(0.3, 0.7), rect(0.7, 1.0)], vec![0, 1, 0], 2)?;
    println!("two vertical interfaces: perimeter {:.4}, anisotropic {:.4}", energy_polyhedral(&w, &unit), energy_polyhedral(&w, &aniso));
    println!("pairwise perimeters {:?}", pairwise_perimeters(&w, None));
    Ok(())
}
