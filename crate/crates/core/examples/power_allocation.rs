//! Dinkelbach relay power allocation on a fixed matching, checked against
//! the equal split and a brute-force grid.

use noma_lab::harness::trial_channels;
use noma_lab::matching::scas1;
use noma_lab::power::{dinkelbach_allocate, grid_oracle};
use noma_lab::system::SystemView;
use noma_lab::SystemConfig;

fn main() -> noma_lab::Result<()> {
    // small enough for the grid: two pairs on at most four SCs
    let mut cfg = SystemConfig::default();
    cfg.set("M", "2")?;
    cfg.set("N", "4")?;
    cfg.set("H", "1")?;
    cfg.set("V", "2")?;

    let ch = trial_channels(&cfg, 5);
    let view = SystemView::new(&ch, &cfg);
    let matching = scas1(&ch, &cfg)?.matching;

    let equal = view.equal_split_ee(&matching);
    let (alloc, report) = dinkelbach_allocate(&matching, &ch, &cfg)?;
    let opt = view.ee(&matching, &alloc.relay);
    let (_, grid) = grid_oracle(&matching, &ch, &cfg, 50)?;

    println!("equal split  EE {:.6e}", equal.ee);
    println!(
        "Dinkelbach   EE {:.6e}  ({} iterations, converged: {})",
        opt.ee, report.iterations, report.converged
    );
    println!("grid (50)    EE {grid:.6e}");
    println!("u_E trajectory: {:?}", report.ee_trajectory);
    println!("relay budgets (W): {:?}", alloc.relay);
    Ok(())
}
