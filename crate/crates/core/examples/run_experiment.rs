//! Drive the experiment runner from code: configure a run, execute it, write
//! the artifacts and replay the manifest.
//!
//! ```bash
//! cargo run --release -p asym-containers --example run_experiment
//! ```

use asym_containers::experiment::{run, write_output, Command, ExperimentConfig, MANIFEST_NAME};

fn main() -> asym_containers::Result<()> {
    let dir = std::env::temp_dir().join("asymc-example");
    let mut cfg = ExperimentConfig::new(Command::Sampler).with("n", 60).with("trials", 40);
    cfg.seed = 11;
    cfg.output_path = Some(dir.join("first"));
    let out = run(&cfg)?;
    println!("{}", out.summary);
    for path in write_output(&cfg, &out)? {
        println!("  wrote {}", path.display());
    }

    let manifest = std::fs::read_to_string(dir.join("first").join(MANIFEST_NAME))?;
    let mut again = ExperimentConfig::from_kv_text(&manifest)?;
    again.output_path = Some(dir.join("replay"));
    let replay = run(&again)?;
    println!("replay identical: {}", replay.artifacts == out.artifacts);
    Ok(())
}
