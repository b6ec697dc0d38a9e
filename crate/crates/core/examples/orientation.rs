//! Angular energy of gratings and the ADC between orientations.
//!
//! cargo run --example orientation

use specprobe::diagnostics::adc;
use specprobe::spectrum::{angular_spectrum, dft2, power_spectrum, AngularSpectrum};
use specprobe::synth::{generate, SynthSpec};
use specprobe::{upsample, DiagnosticsConfig, FeatureMap, UpsampleMethod};

fn angular(map: &FeatureMap, cfg: &DiagnosticsConfig) -> AngularSpectrum {
    angular_spectrum(&power_spectrum(&dft2(map)), cfg)
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let cfg = DiagnosticsConfig::default();
    let base = generate(&SynthSpec::grating(30f64.to_radians(), 0.125, 32, 2, 1))?;
    let a = angular(&base, &cfg);
    let peak = a
        .energies()
        .iter()
        .enumerate()
        .max_by(|x, y| x.1.total_cmp(y.1))
        .map(|(k, _)| k)
        .unwrap_or(0);
    println!(
        "30 deg grating: peak bin {peak} of {} ({:.1}% of energy)",
        a.bin_count(),
        100.0 * a.energies()[peak] / a.total()
    );

    let hr = upsample(&base, &UpsampleMethod::lanczos(3), 128, 128)?;
    println!(
        "ADC vs its Lanczos 4x upsampling: {:.4}",
        adc(&a, &angular(&hr, &cfg))?
    );
    for deg in [45.0f64, 75.0, 120.0] {
        let other = generate(&SynthSpec::grating(deg.to_radians(), 0.125, 32, 2, 1))?;
        println!(
            "ADC vs {deg:>5.1} deg grating: {:.4}",
            adc(&a, &angular(&other, &cfg))?
        );
    }
    Ok(())
}
