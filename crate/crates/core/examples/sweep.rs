//! A parameter sweep driven by the same JSON configs the binary reads.

use morrey_embed::cli::{render, run_sweep, transitions, Format, JobConfig};

const CONFIG: &str = r#"{
    "task": "sweep",
    "source": {"scale": "n", "d": 1, "s": 1.0, "p": 1.0, "q": 2.0, "phi": {"family": "power", "u": 2.0}},
    "target": {"scale": "n", "d": 1, "s": 0.0, "p": 2.0, "q": 2.0, "phi": {"family": "power", "u": 4.0}},
    "sweep": {"parameter": "s2", "start": -0.5, "stop": 1.0, "step": 0.25}
}"#;

fn main() {
    let cfg = JobConfig::from_json(CONFIG).expect("valid config");
    let rows = run_sweep(&cfg).expect("sweep runs");
    println!("{} rows, {} verdict changes", rows.len(), transitions(&rows));
    print!("{}", render(&cfg, Some(Format::Csv)).expect("renders").body);
}
