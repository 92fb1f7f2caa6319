//! Exact lower and upper bounds on the bits any one-round scheme must send,
//! next to the asymptotic rate curves.

use thl_recon::bounds::{asymptotic_rates, chromatic_bounds, sphere_size, BoundsReport, CSV_HEADER};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    println!("V(63, 3) = {}", sphere_size(2, 63, 3));
    let (lo, up) = chromatic_bounds(127, 2, 4, 2, None)?;
    println!("n=127 t=2 h=4 ell=2: between {lo:.1} and {up:.1} bits\n");

    println!("{CSV_HEADER}");
    for n in [15, 31, 63] {
        for ell in 1..=3 {
            println!("{}", BoundsReport::compute(n, 1, 3, ell)?.csv_row());
        }
    }

    println!("\nlambda  lower(eta=0)  upper(eta=0)");
    for i in 1..10 {
        let lambda = i as f64 * 0.05;
        let (lo, up) = asymptotic_rates(2, lambda, 0.0)?;
        println!("{lambda:.2}    {lo:.4}        {up:.4}");
    }
    Ok(())
}
