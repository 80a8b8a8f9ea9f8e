//! The deletion method: sample G(n, m') with m' = ⌊(1+δ)m⌋, delete one edge
//! from every 4-cycle, accept when at most m' - m edges went.
//!
//! ```bash
//! cargo run --release -p asym-containers --example deletion_sampler
//! ```

use asym_containers::experiment::task_rng;
use asym_containers::oracle::{count_c4_subgraphs, deletion_trial};

fn main() -> asym_containers::Result<()> {
    let n = 200;
    let m = (0.1 * (n as f64).powf(4.0 / 3.0)).floor() as usize;
    let trials = 200;
    let mut accepted = 0;
    let mut xs = Vec::new();
    for t in 0..trials {
        let trial = deletion_trial(n, m, 0.1, &mut task_rng(2024, t))?;
        xs.push(trial.x);
        if let Some(g) = trial.graph {
            assert_eq!(g.edge_count(), m);
            assert_eq!(count_c4_subgraphs(&g), 0);
            accepted += 1;
        }
    }
    let mean = xs.iter().sum::<u64>() as f64 / xs.len() as f64;
    println!("n = {n}, m = {m}: accepted {accepted}/{trials}, mean number of 4-cycles {mean:.3}");
    Ok(())
}
