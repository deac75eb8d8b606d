//! Compare SCAS-2 with exhaustive matching and Dinkelbach with a grid search
//! on a few 2×2 instances.

use noma_lab::cli::oracle_report;
use noma_lab::SystemConfig;

fn main() -> noma_lab::Result<()> {
    let cfg = SystemConfig::parse("M = 2\nN = 2\nH = 1\nV = 1\n")?;
    print!("{}", oracle_report(&cfg, 5)?);
    Ok(())
}
