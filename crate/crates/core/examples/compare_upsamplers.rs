//! Upsample one 16x16 feature map with every method and compare how much
//! high-frequency power each adds.
//!
//! cargo run --example compare_upsamplers

use specprobe::diagnostics::mcs;
use specprobe::spectrum::{dft2, power_spectrum, radial_spectrum};
use specprobe::synth::{generate, SynthSpec};
use specprobe::{upsample, DiagnosticsConfig, UpsampleKind, UpsampleMethod};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let cfg = DiagnosticsConfig::default();
    let lr = generate(&SynthSpec::power_law(2.0, 16, 8, 1))?;
    println!("{:<10} {:>10} {:>12}", "method", "mid-band", "power > 0.25");
    for kind in UpsampleKind::ALL {
        let hr = upsample(&lr, &UpsampleMethod::new(kind), 64, 64)?;
        let rs = radial_spectrum(&power_spectrum(&dft2(&hr)), &cfg);
        let high: f64 = rs
            .populated()
            .filter(|(_, r, _)| *r >= 0.25)
            .map(|(k, _, p)| p * rs.counts()[k] as f64)
            .sum();
        let total: f64 = rs
            .populated()
            .map(|(k, _, p)| p * rs.counts()[k] as f64)
            .sum();
        println!(
            "{:<10} {:>10.4} {:>12.2e}",
            kind,
            mcs(&rs, &cfg)?,
            high / total
        );
    }
    Ok(())
}
