//! Observed orders of the line solver against d'Alembert and of the radial
//! solver against itself.

use catenoid_flow::experiments::{convergence_study, ConvergenceConfig, ConvergenceMode};

fn main() -> catenoid_flow::Result<()> {
    for (mode, amplitude) in [(ConvergenceMode::Line, 1.0), (ConvergenceMode::Radial, 1e-2)] {
        let cfg = ConvergenceConfig {
            mode,
            amplitude,
            ..ConvergenceConfig::default()
        };
        let table = convergence_study(&cfg)?;
        println!("{mode:?}:");
        for r in &table.rows {
            let order = r.order.map_or(String::from("-"), |o| format!("{o:.3}"));
            println!("  dr = {:<8} error = {:.4e}  order = {order}", r.dr, r.error);
        }
    }
    Ok(())
}
