//! All six diagnostics for an LR map against two of its upsamplings.
//!
//! cargo run --example diagnose_pair

use specprobe::synth::{generate, SynthSpec};
use specprobe::{diagnose_pair, upsample, Diagnostic, DiagnosticsConfig, UpsampleMethod};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let cfg = DiagnosticsConfig::default();
    let lr = generate(&SynthSpec::power_law(2.0, 16, 16, 7))?;
    println!("config fingerprint {}", cfg.fingerprint());
    for method in [UpsampleMethod::bicubic(-0.5), UpsampleMethod::nsm()] {
        let hr = upsample(&lr, &method, 64, 64)?;
        let rec = diagnose_pair(&lr, &hr, &cfg)?;
        print!("{:<8}", method.kind);
        for d in Diagnostic::ALL {
            match rec.get(d) {
                Some(v) => print!("  {d}={v:.4}"),
                None => print!("  {d}=undefined"),
            }
        }
        println!();
        for (field, why) in &rec.reasons {
            println!("    {field}: {why}");
        }
    }
    Ok(())
}
