//! Recover the spectral slope of synthetic power-law fields.
//!
//! cargo run --example power_law_slope

use specprobe::diagnostics::fit_slope;
use specprobe::spectrum::{dft2, power_spectrum, radial_spectrum};
use specprobe::synth::{generate, SynthSpec};
use specprobe::DiagnosticsConfig;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let cfg = DiagnosticsConfig::default();
    for beta in [0.5, 1.0, 2.0, 3.0] {
        let map = generate(&SynthSpec::power_law(beta, 128, 8, 42))?;
        let rs = radial_spectrum(&power_spectrum(&dft2(&map)), &cfg);
        let fit = fit_slope(&rs, cfg.hf_range, cfg.log_epsilon)?;
        println!(
            "target {beta:.1}  fitted {:.3}  ({} bins in {})",
            fit.beta, fit.n_points, fit.range
        );
    }
    Ok(())
}
