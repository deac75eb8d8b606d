//! Rates of three pairs sharing one subcarrier, with and without jamming.

use noma_lab::channel::{generate_topology, rng_from_seed, sample_channels};
use noma_lab::config::dbm_to_w;
use noma_lab::rates::{allocation_rates, Jamming, ScAllocation};
use noma_lab::SystemConfig;

fn main() -> noma_lab::Result<()> {
    let cfg = SystemConfig::default();
    let mut rng = rng_from_seed(3);
    let ch = sample_channels(&generate_topology(&cfg, &mut rng), &cfg, &mut rng);
    let b = cfg.sc_bandwidth();

    let members = vec![0, 1, 2];
    let relay = dbm_to_w(36.0);
    let alloc = ScAllocation::with_uniform_uplink(0, members.clone(), relay, 0.075, 0.075);

    let modes = [
        ("no jamming", Jamming::Off),
        (
            "jamming 0.5/0.5",
            Jamming::On {
                alpha1: 0.5,
                alpha2: 0.5,
                strict_leakage: false,
            },
        ),
    ];
    for (label, jam) in modes {
        println!("{label}:");
        for (m, r) in members.iter().zip(allocation_rates(&alloc, &ch, jam, b)) {
            println!(
                "  pair {m}: r_A {:>8.3e}  r_B {:>8.3e}  r_E {:>8.3e}  r_sec {:>8.3e} bit/s",
                r.r_a, r.r_b, r.r_e, r.r_sec
            );
        }
    }
    Ok(())
}
