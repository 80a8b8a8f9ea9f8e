//! Pregraph machinery: good copies of C4, the constraint hypergraphs H_0..H_2,
//! the permissible builder and the Caro–Wei / random-order independent sets.
//!
//! ```bash
//! cargo run --release -p asym-containers --example good_c4_stability
//! ```

use asym_containers::exact::to_f64;
use asym_containers::pregraph::{
    build_constraint_hypergraphs, build_permissible, caro_wei_bound, good_c4_enumerate, is_leaf_pregraph,
    random_order_independent_set, Pregraph,
};
use asym_containers::LabeledGraph;

fn main() -> asym_containers::Result<()> {
    let p = Pregraph::complete(6);
    let copies = good_c4_enumerate(&p);
    println!("K6 as a mixed pregraph has {} good C4s", copies.len());
    for c in copies.iter().take(3) {
        println!("  {:?} embedding {} cycle {:?} extra {:?}", c.vertices, c.embedding, c.cycle_edges, c.extra_mixed);
    }

    // fix a triangle: copies through two of its vertices stop being good
    let mut q = p.clone();
    for (u, v) in [(0, 1), (1, 2), (0, 2)] {
        q.fix_edge(u, v);
    }
    let hs = build_constraint_hypergraphs(&q);
    println!(
        "after fixing a triangle: e(H_0), e(H_1), e(H_2) = {}, {}, {} over {} pairs",
        hs.h[0].edge_count(),
        hs.h[1].edge_count(),
        hs.h[2].edge_count(),
        hs.v()
    );
    println!("leaf class at m = 8: {:?}", is_leaf_pregraph(&q, 8, 0.01, 0.25)?);

    for ell in [2, 3, 4] {
        let out = build_permissible(&q, ell, 1.0 / 16.0)?;
        match out.chosen() {
            Some((i, h)) => println!("ℓ = {ell}: H_{i} reached {} edges after {} insertions", h.edge_count(), out.insertions),
            None => println!("ℓ = {ell}: good copies exhausted after {} insertions", out.insertions),
        }
    }

    let c5 = LabeledGraph::from_edges(5, [(0, 1), (1, 2), (2, 3), (3, 4), (0, 4)])?;
    println!("\nCaro–Wei bound for C5: {}", caro_wei_bound(&c5));
    let mut total = 0;
    for seed in 0..1000 {
        total += random_order_independent_set(&c5, &[0.5; 5], &[0, 1, 2, 3, 4], seed)?.len();
    }
    println!(
        "random-order sets at keep = 1/2 average {:.3} (bound {:.3})",
        total as f64 / 1000.0,
        to_f64(&caro_wei_bound(&c5))
    );
    Ok(())
}
