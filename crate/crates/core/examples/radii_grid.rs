//! Achievable lattice distances and how many signature segments they yield.
//!
//!     cargo run --example radii_grid

use volrad::cloud::RadiiGrid;

fn main() -> volrad::Result<()> {
    println!("{:>6} {:>8} {:>10} {:>10}", "r_max", "points", "k (m=5)", "k (m=10)");
    for r_max in [1, 2, 5, 10, 15, 20, 30] {
        let grid = RadiiGrid::new(r_max)?;
        println!("{:>6} {:>8} {:>10} {:>10}", r_max, grid.len(), grid.len() / 5, grid.len() / 10);
    }
    let grid = RadiiGrid::new(4)?;
    let radii: Vec<String> = grid.radii().map(|r| format!("{r:.3}")).collect();
    println!("radii up to 4: {}", radii.join(" "));
    Ok(())
}
