//! Greedy ball cover of the circle and the composed flattening map.
use polypart::flatten::{compose, flat_pieces, greedy_cover, CoverOptions};
use polypart::geometry::Point;
use polypart::harness::circle;

fn main() -> anyhow::Result<()> {
    let u = circle();
    for eps in [0.4, 0.2, 0.1] {
        let opts = CoverOptions { max_radius: 0.25, ..Default::default() };
        let cover = greedy_cover(&u, eps, &opts)?;
        let map = compose(cover.charts.clone(), eps)?;
        let b = map.sampled_bounds(12);
        let pieces = flat_pieces(&cover.charts, eps, u.labels())?;
        println!(
            "eps {eps}: {} balls, uncovered mass {:.3e} of {:.4}, sup|Df-Id| {:.3e}, sup|f-x| {:.3e}, {} flat pieces",
            cover.charts.len(),
            cover.uncovered_mass,
            cover.total_mass,
            b.sup_jacobian,
            b.sup_displacement,
            pieces.set.len()
        );
    }
    let eps = 0.1;
    let cover = greedy_cover(&u, eps, &CoverOptions { max_radius: 0.25, ..Default::default() })?;
    let map = compose(cover.charts, eps)?;
    let x = Point::<2>::new(0.8, 0.5);
    let y = map.forward(&x);
    println!("f({:?}) = {:?}, f^-1(f(x)) = {:?}", x.as_slice(), y.as_slice(), map.inverse(&y)?.as_slice());
    Ok(())
}
