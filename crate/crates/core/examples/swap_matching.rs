//! SCAS-1 and SCAS-2 against a random assignment on the same network.

use noma_lab::harness::{trial_channels, trial_random_matching};
use noma_lab::matching::{scas1, scas2};
use noma_lab::system::SystemView;
use noma_lab::SystemConfig;

fn main() -> noma_lab::Result<()> {
    let cfg = SystemConfig::default();
    let seed = 2024;
    let ch = trial_channels(&cfg, seed);
    let view = SystemView::new(&ch, &cfg);

    let random = trial_random_matching(&cfg, seed);
    println!(
        "random     EE {:.4e} bit/s/W",
        view.equal_split_ee(&random).ee
    );

    let s1 = scas1(&ch, &cfg)?;
    println!(
        "SCAS-1     EE {:.4e} after {} swaps ({} sweeps)",
        view.equal_split_ee(&s1.matching).ee,
        s1.swaps,
        s1.sweeps
    );

    let s2 = scas2(&ch, &cfg, random)?;
    println!(
        "SCAS-2     EE {:.4e} after {} swaps ({} sweeps)",
        view.equal_split_ee(&s2.matching).ee,
        s2.swaps,
        s2.sweeps
    );

    println!("\nSCAS-2 trajectory (every 5th swap):");
    for (k, ee) in s2.ee_trajectory.iter().enumerate().step_by(5) {
        println!("  {k:>3}  {ee:.4e}");
    }
    println!(
        "\nfinal SCAS-2 matching (SC pair: user pairs):\n{}",
        s2.matching.to_text()
    );
    Ok(())
}
