//! Random audit of the symbol: the two-sided bound on `gamma(n, n)` and
//! the closed-form determinant of the cylindrical symbol.

use catenoid_flow::symbol::{cylindrical_symbol, gamma_bounds_check, metric_from_gradient, SpacetimeVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn main() -> catenoid_flow::Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let samples = 10_000;

    let mut worst_slack = f64::INFINITY;
    for _ in 0..samples {
        // timelike gradients: |X0| < |X'|
        let xp = [rng.gen_range(-3.0..3.0), rng.gen_range(-3.0..3.0), rng.gen_range(0.2..3.0)];
        let norm = xp.iter().map(|v: &f64| v * v).sum::<f64>().sqrt();
        let x0 = rng.gen_range(-0.99..0.99) * norm;
        let sym = metric_from_gradient(&SpacetimeVector::new(x0, xp))?;
        let n = [rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)];
        worst_slack = worst_slack.min(gamma_bounds_check(&sym, n)?.slack());
    }
    println!("gamma sandwich: smallest slack over {samples} samples = {worst_slack:.3e}");

    let mut worst_rel = 0.0_f64;
    for _ in 0..samples {
        let s = cylindrical_symbol(rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0));
        let exact = s.determinant_closed_form();
        worst_rel = worst_rel.max((s.determinant_scaled() - exact).abs() / exact.abs().max(1e-300));
    }
    println!("cylindrical determinant: largest relative error = {worst_rel:.3e}");
    Ok(())
}
