//! Exhaustive |F_{n,m}(C4)| tables by two independent scans, plus split-graph
//! recognition and ex(n, C4) for small n.
//!
//! ```bash
//! cargo run --release -p asym-containers --example enumerate_c4_free
//! ```

use asym_containers::oracle::{ex_c4, fnm_c4_masks, fnm_table_by_extension, fnm_table_by_mask_scan, is_split};
use asym_containers::LabeledGraph;

fn main() -> asym_containers::Result<()> {
    for n in 4..=7 {
        let scan = fnm_table_by_mask_scan(n)?;
        let ext = fnm_table_by_extension(n)?;
        assert_eq!(scan, ext);
        println!("n = {n}: {:?}", scan);
    }
    let eight = fnm_table_by_extension(8)?;
    println!("n = 8: total {} induced-C4-free labelled graphs", eight.iter().sum::<u64>());

    let groups = fnm_c4_masks(6)?;
    let split = groups
        .iter()
        .flatten()
        .filter(|&&g| is_split(&LabeledGraph::from_pair_mask(6, g)).is_some())
        .count();
    println!("n = 6: {split} of {} induced-C4-free graphs are split", groups.iter().map(Vec::len).sum::<usize>());

    for n in 4..=8 {
        let k = LabeledGraph::complete(n);
        println!("ex({n}, C4) = {}", ex_c4(&k)?);
    }
    Ok(())
}
