//! How the artificial-noise share trades legitimate rate against leakage.
//!
//! Sweeps α₁ = α₂ for one pair alone on a subcarrier and prints the
//! legitimate sum rate, the eavesdropper rate and the secrecy rate.

use noma_lab::channel::{generate_topology, rng_from_seed, sample_channels};
use noma_lab::rates::{secrecy_rate, Jamming, ScAllocation};
use noma_lab::SystemConfig;

fn main() -> noma_lab::Result<()> {
    // eavesdropper close in, so the leakage is visible
    let cfg = SystemConfig {
        eve_distance: 60.0,
        ..SystemConfig::default()
    };
    let mut rng = rng_from_seed(11);
    let ch = sample_channels(&generate_topology(&cfg, &mut rng), &cfg, &mut rng);
    let alloc = ScAllocation::with_uniform_uplink(0, vec![0], 4.0, 0.3, 0.3);

    println!("alpha   r_A+r_B      r_E          r_sec");
    let off = secrecy_rate(&alloc, &ch, 0, Jamming::Off, cfg.sc_bandwidth())?;
    println!(
        " off    {:.4e}  {:.4e}  {:.4e}",
        off.r_a + off.r_b,
        off.r_e,
        off.r_sec
    );
    for step in 0..=9 {
        let a = step as f64 / 10.0;
        let jam = Jamming::On {
            alpha1: a,
            alpha2: a,
            strict_leakage: false,
        };
        let r = secrecy_rate(&alloc, &ch, 0, jam, cfg.sc_bandwidth())?;
        println!(
            " {a:.1}    {:.4e}  {:.4e}  {:.4e}",
            r.r_a + r.r_b,
            r.r_e,
            r.r_sec
        );
    }
    Ok(())
}
