#![no_main]

use libfuzzer_sys::fuzz_target;
use qmimo::harness::grid::{parse_snr_grid, MAX_GRID_POINTS};

fuzz_target!(|text: &str| {
    if let Ok(grid) = parse_snr_grid(text) {
        assert!(!grid.is_empty());
        assert!(grid.len() <= MAX_GRID_POINTS);
        assert!(grid.iter().all(|x| x.is_finite()));
    }
});
