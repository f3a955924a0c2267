//! Contact angle versus inclination for a few axis ratios, as a text table.
//!
//! ```text
//! cargo run --example contact_curve
//! ```

use egg_sim::geometry::EllipsoidShape;

fn main() -> egg_sim::Result<()> {
    let ratios = [1.0, 1.25, 1.5, 2.0];
    print!("{:>8}", "beta_v");
    for r in ratios {
        print!("{:>12}", format!("r={r}"));
    }
    println!();
    for deg in (0..=90).step_by(10) {
        print!("{deg:>8}");
        for r in ratios {
            let shape = EllipsoidShape::new(r, 1.0)?;
            let c = shape.contact_point((deg as f64).to_radians());
            print!("{:>12.4}", c.beta_p.to_degrees());
        }
        println!();
    }

    // lever arm and center height for the 2:1 shell
    let shape = EllipsoidShape::new(2.0, 1.0)?;
    println!("\n2:1 shell");
    for deg in [0.0, 30.0, 45.0, 60.0, 90.0_f64] {
        let c = shape.contact_point(deg.to_radians());
        println!(
            "  beta_v {deg:>4}: beta_p {:>8.4} deg, |r| {:.5}, center height {:.5}",
            c.beta_p.to_degrees(),
            c.radial_distance,
            shape.center_height(deg.to_radians())
        );
    }
    Ok(())
}
