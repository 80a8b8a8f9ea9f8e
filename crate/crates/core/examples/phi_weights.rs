//! φ(m) = |F_{n,m}(C4)| (p/(1-p))^m: exact values for small n next to the
//! trivial, deletion and fitted container bounds.
//!
//! ```bash
//! cargo run --release -p asym-containers --example phi_weights
//! ```

use asym_containers::tree::{phi_log, PhiMode, PHI_FITTED_LOWER_C, PHI_FITTED_UPPER_C};

fn main() -> asym_containers::Result<()> {
    let (n, p) = (8, 0.1);
    println!("n = {n}, p = {p}; natural logs; c = {PHI_FITTED_LOWER_C}, C = {PHI_FITTED_UPPER_C} (fitted)");
    println!("{:>3} {:>10} {:>10} {:>10} {:>10}", "m", "lower", "exact", "upper", "trivial");
    for m in [1, 4, 8, 12, 16, 20, 24, 28] {
        let lo = phi_log(n, m, p, PhiMode::Lower { c: PHI_FITTED_LOWER_C })?;
        let ex = phi_log(n, m, p, PhiMode::Exact)?;
        let hi = phi_log(n, m, p, PhiMode::Upper { c: PHI_FITTED_UPPER_C })?;
        let tr = phi_log(n, m, p, PhiMode::TrivialUpper)?;
        println!("{m:>3} {lo:>10.4} {ex:>10.4} {hi:>10.4} {tr:>10.4}");
    }
    Ok(())
}
