//! Evolves bump data with kappa0 = 1e-3 to `t = lambda - 5` for
//! lambda in {20, 40, 80} and prints the sweep table.

use catenoid_flow::experiments::{existence_window, SweepConfig};

fn main() -> catenoid_flow::Result<()> {
    let cfg = SweepConfig::default();
    let result = existence_window(&cfg.specs(), &cfg.window)?;
    println!(
        "{:>6} {:>11} {:>8} {:>20} {:>10} {:>10} {:>10} {:>7} {:>10}",
        "lambda", "amplitude", "t_final", "termination", "b1/k0", "b2/k0", "b3/k0", "slack", "leak"
    );
    for r in &result.rows {
        println!(
            "{:>6} {:>11.3e} {:>8.2} {:>20} {:>10.3e} {:>10.3e} {:>10.3e} {:>7.4} {:>10.3e}",
            r.lambda,
            r.amplitude,
            r.t_final,
            r.termination.tag(),
            r.b1 / r.kappa0,
            r.b2 / r.kappa0,
            r.b3 / r.kappa0,
            r.min_slack,
            r.huygens_leak
        );
    }
    println!("all completed: {}", result.all_completed());
    Ok(())
}
