//! Draw one network realization and look at path loss, fading and CRNNs.
//!
//! ```text
//! cargo run --example channel_realization
//! ```

use noma_lab::channel::{generate_topology, path_loss_db, rng_from_seed, sample_channels};
use noma_lab::config::w_to_dbm;
use noma_lab::SystemConfig;

fn main() -> noma_lab::Result<()> {
    let cfg = SystemConfig::default();
    let mut rng = rng_from_seed(7);
    let topo = generate_topology(&cfg, &mut rng);
    let ch = sample_channels(&topo, &cfg, &mut rng);

    println!("noise per SC: {:.2} dBm", w_to_dbm(ch.sigma2));
    for d in [1.0, 10.0, 30.0, 500.0] {
        println!("Hata loss at {d:>5} m: {:.2} dB", path_loss_db(d, &cfg)?);
    }

    println!("\npair  |A-RS| m  |B-RS| m  best SC  CRNN (dB)");
    for (m, (a, b)) in topo.user_positions.iter().enumerate() {
        let (sc, crnn) = (0..cfg.subcarriers)
            .map(|j| (j, ch.crnn_pair(m, j)))
            .max_by(|x, y| x.1.total_cmp(&y.1))
            .expect("at least one SC");
        println!(
            "{m:>4}  {:>8.2}  {:>8.2}  {sc:>7}  {:>9.2}",
            a.norm(),
            b.norm(),
            10.0 * crnn.log10()
        );
    }

    let eve: f64 = ch.g_e.iter().map(|g| g.norm_sqr()).sum::<f64>() / ch.g_e.len() as f64;
    println!("\nmean RS->eavesdropper gain: {:.2} dB", 10.0 * eve.log10());
    Ok(())
}
