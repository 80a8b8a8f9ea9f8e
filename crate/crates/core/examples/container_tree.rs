//! A full container tree at n = 7: build it, classify the leaves and confirm
//! that every induced-C4-free graph with m edges lands in some leaf.
//!
//! ```bash
//! cargo run --release -p asym-containers --example container_tree -- 10
//! ```

use std::collections::BTreeMap;

use asym_containers::tree::{build_tree, NodeStatus, TreeParams};

fn main() -> asym_containers::Result<()> {
    let m = std::env::args().nth(1).map_or(10, |s| s.parse().expect("m"));
    let params = TreeParams::new(7, m, 0.01, 0.25, 0.05)?;
    for w in &params.warnings {
        println!("warning: {w}");
    }
    let tree = build_tree(&params)?;
    let cls = tree.classify_leaves(params.eps)?;
    println!(
        "{} nodes, height {}; leaves: {} almost split, {} discarded, {} fallback",
        tree.nodes.len(),
        tree.height(),
        cls.almost_split.len(),
        cls.discarded.len(),
        cls.fallback.len()
    );
    let mut why: BTreeMap<&str, usize> = BTreeMap::new();
    for x in &tree.nodes {
        if let NodeStatus::Fallback(r) = &x.status {
            *why.entry(r.tag()).or_default() += 1;
        }
    }
    println!("fallback reasons: {why:?}");

    let cov = tree.coverage_exhaustive()?;
    println!("coverage: {}/{} graphs, {} escapes", cov.covered, cov.total, cov.escapes.len());
    print!("\nfirst lines of the tree file:\n{}", tree.to_text(false).lines().take(8).map(|l| format!("{l}\n")).collect::<String>());
    Ok(())
}
