//! Run a reduced copy of a built-in scenario and summarize it per sweep point.
//!
//! ```text
//! cargo run --release --example scenario_sweep -- fig7 20
//! ```

use noma_lab::harness::{emit_csv, mean_ci, run_scenario, Scenario};

fn main() -> noma_lab::Result<()> {
    let mut args = std::env::args().skip(1);
    let name = args.next().unwrap_or_else(|| "fig6".into());
    let trials = args.next().and_then(|t| t.parse().ok()).unwrap_or(10);

    let mut sc = Scenario::builtin(&name)?;
    sc.trials = trials;
    let table = run_scenario(&sc)?;

    for v in table.sweep_values() {
        println!("{} = {v}", sc.sweep.param);
        for s in table.schemes() {
            let ci = mean_ci(&table.ee_values(s, v));
            println!("  {s:<8} {:.4e}  [{:.4e}, {:.4e}]", ci.mean, ci.lo, ci.hi);
        }
    }

    let path = std::env::temp_dir().join(format!("{name}.csv"));
    emit_csv(&table, &path)?;
    println!("\n{} rows written to {}", table.rows.len(), path.display());
    Ok(())
}
