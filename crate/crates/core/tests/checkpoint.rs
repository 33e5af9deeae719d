use std::sync::Arc;

use catenoid_flow::solver::checkpoint::{load, save};
use catenoid_flow::solver::{RadialGrid, RadialState};
use proptest::prelude::*;

proptest! {
    #[test]
    fn save_and_load_round_trip_bit_for_bit(
        values in prop::collection::vec(prop::num::f64::NORMAL | prop::num::f64::SUBNORMAL | prop::num::f64::ZERO, 10..200),
        t in -1e6f64..1e6,
        r0 in 1.0f64..10.0,
        width in 0.5f64..100.0,
    ) {
        let n = values.len() / 2;
        prop_assume!(n >= 5);
        let grid = Arc::new(RadialGrid::new(r0, r0 + width, n).unwrap());
        let s = RadialState::new(t, values[..n].to_vec(), values[n..2 * n].to_vec(), grid).unwrap();
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("s.ckpt");
        save(&s, &path).unwrap();
        let back = load(&path).unwrap();
        prop_assert_eq!(back.t.to_bits(), s.t.to_bits());
        prop_assert!(back.eps.iter().zip(&s.eps).all(|(a, b)| a.to_bits() == b.to_bits()));
        prop_assert!(back.eps_t.iter().zip(&s.eps_t).all(|(a, b)| a.to_bits() == b.to_bits()));
        prop_assert_eq!(back.grid.points(), s.grid.points());
    }
}
