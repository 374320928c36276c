//! Driving the experiment layer from a JSON config, as the binary does.
use horodisc::experiments::{reproduce, run, Command, ExperimentConfig};

fn main() -> horodisc::Result<()> {
    let cfg = ExperimentConfig::from_json_str(
        r#"{
            "experiment": "family-criteria",
            "map": { "kind": "example_family", "c": 3.0, "zeta": "-i" },
            "params": { "c": 3.0, "criteria": ["becker", "hv"] }
        }"#,
    )?;
    let report = run(Command::Criteria, &cfg)?;
    println!("config hash {}", report.config_hash);
    println!("becker holds: {}", report.result["becker"]["holds"]);
    println!("hv a(C) = {}, lemma max = {}", report.result["hv"]["a"], report.result["hv"]["lemma41_max"]);

    let r = reproduce("harmonic-reduction")?;
    for c in r.checks() {
        println!("{} {}: {}", if c.pass { "PASS" } else { "FAIL" }, c.name, c.value);
    }
    Ok(())
}
