//! Containers for independent sets of an ordinary 3-uniform hypergraph via its
//! (0,3) lift: every independent set I gets g(I) ⊆ I ⊆ f(g(I)).
//!
//! ```bash
//! cargo run --release -p asym-containers --example monotone_containers
//! ```

use std::collections::BTreeSet;

use asym_containers::container::{monotone_containers, monotone_engine, monotone_from_container};
use asym_containers::UniformHypergraph;
use itertools::Itertools;

fn main() -> asym_containers::Result<()> {
    // Fano plane
    let lines = [[0, 1, 2], [0, 3, 4], [0, 5, 6], [1, 3, 5], [1, 4, 6], [2, 3, 6], [2, 4, 5]];
    let lift = UniformHypergraph::lift_monotone(7, 3, lines)?;
    let engine = monotone_engine(lift, 1, 1, true)?;

    let independent: Vec<Vec<u32>> = (0..=7u32)
        .flat_map(|k| (0..7u32).combinations(k as usize))
        .filter(|s| lines.iter().all(|l| !l.iter().all(|v| s.contains(v))))
        .collect();
    println!("{} independent sets in the Fano plane", independent.len());

    let mut distinct = BTreeSet::new();
    for i in &independent {
        let mc = monotone_containers(&engine, i)?;
        assert!(mc.fingerprint.iter().all(|v| i.contains(v)));
        assert!(i.iter().all(|v| mc.container.contains(v)));
        distinct.insert((mc.fingerprint, mc.container));
    }
    println!("{} distinct (fingerprint, container) pairs:", distinct.len());
    for (g, f) in &distinct {
        println!("  g = {g:?}  f(g) = {f:?}");
    }

    // the same containers straight from the asymmetric enumeration
    let direct: BTreeSet<_> = engine
        .enumerate(7)
        .iter()
        .map(monotone_from_container)
        .map(|m| (m.fingerprint, m.container))
        .collect();
    println!("enumeration yields a superset: {}", distinct.is_subset(&direct));
    Ok(())
}
