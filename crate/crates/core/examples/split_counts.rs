//! Exact and log-space counts of split-like graphs N_{n,m}(ℓ), the location of
//! their maximum and the ratio identity between consecutive ℓ.
//!
//! ```bash
//! cargo run --release -p asym-containers --example split_counts
//! ```

use asym_containers::split_counts::{
    argmax_n_nm, ell_nm, feasible_range, grid_csv, location_grid, log_n_nm, n_nm, ratio_a, ratio_b, ratio_identity_holds,
    DEFAULT_LAMBDA,
};

fn main() -> asym_containers::Result<()> {
    let (n, m) = (12, 20);
    println!("N_{{{n},{m}}}(ℓ) for feasible ℓ:");
    for l in feasible_range(n, m) {
        println!("  ℓ = {l:2}  N = {:>14}  ln N = {}", n_nm(n, m, l), log_n_nm(n, m, l));
    }
    println!("argmax ℓ* = {}", argmax_n_nm(n, m)?);

    let l = 4;
    println!(
        "a({l}) = {}, b({l}) = {}, identity N(ℓ+1)/N(ℓ) = a·b holds: {}",
        ratio_a(n, m, l)?,
        ratio_b(n, m, l)?,
        ratio_identity_holds(n, m, l)?
    );

    let (n, m) = (100_000u64, 5_000_000u64);
    println!("\nn = {n}, m = {m}: ℓ_{{n,m}} = {:.4}, ℓ* = {}", ell_nm(n, m, DEFAULT_LAMBDA)?, argmax_n_nm(n, m)?);

    let rows = location_grid(&[10_000], 4, DEFAULT_LAMBDA)?;
    print!("\n{}", grid_csv(&rows));
    Ok(())
}
