//! Build the container of one assignment step by step, then enumerate every
//! container of a small (1,1)-uniform hypergraph and check the three container
//! properties by brute force.
//!
//! ```bash
//! cargo run --release -p asym-containers --example containers_demo
//! ```

use asym_containers::container::{ContainerEngine, ContainerParams};
use asym_containers::exact::int;
use asym_containers::{Assignment, Constraint, UniformHypergraph};

fn main() -> asym_containers::Result<()> {
    // three disjoint constraints "x_u = 0 and x_{u+3} = 1 is forbidden"
    let edges = (0..3u32).map(|u| (Constraint::new([u], [u + 3]).unwrap(), 1));
    let h = UniformHypergraph::from_edges(6, 1, 1, edges)?;
    println!("H:\n{}", h.to_text());

    let params = ContainerParams {
        k: int(6),
        b: 1,
        m: 3,
        r: 1,
        force: false,
    };
    let engine = ContainerEngine::new(h.clone(), &params)?;
    println!("hypothesis passes: {} (smallest K = {})", engine.report().passes(), engine.report().min_k);

    let x = Assignment::from_ones(6, [0, 1, 2])?;
    let (c, rounds) = engine.build_traced(&x)?;
    for (s, lines) in rounds.iter().enumerate() {
        println!("round {s}:");
        for l in lines {
            println!("  {l}");
        }
    }
    println!("fingerprint {} -> cylinder {}", c.fingerprint, c.cylinder);

    let all = engine.enumerate(3);
    println!("\n{} containers cover F(H) restricted to at most 3 ones", all.len());
    let (mut members, mut ok) = (0, true);
    for mask in 0..1u64 << 6 {
        let x = Assignment::from_mask(6, mask);
        if x.ones_count() > 3 || h.first_violated(&x).is_some() {
            continue;
        }
        members += 1;
        let c = engine.build(&x)?;
        let fp_ok = c.fingerprint.s0.iter().all(|&v| !x.get(v)) && c.fingerprint.s1.iter().all(|&v| x.get(v));
        ok &= c.cylinder.contains(&x) && fp_ok && engine.satisfies_size_bound(&c.cylinder);
        ok &= all.iter().any(|d| d.fingerprint == c.fingerprint && d.cylinder == c.cylinder);
    }
    println!("checked {members} assignments: properties hold = {ok}");
    Ok(())
}
