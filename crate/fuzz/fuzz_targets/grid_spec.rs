#![no_main]

use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    if let Ok(text) = std::str::from_utf8(data) {
        if let Ok(grid) = gaussrev_cli::parse_grid(text) {
            // Contract: nonempty, finite, strictly increasing, bounded.
            assert!(!grid.is_empty());
            assert!(grid.len() <= gaussrev_cli::gridspec::MAX_GRID_POINTS);
            assert!(grid.iter().all(|x| x.is_finite()));
            assert!(grid.windows(2).all(|w| w[1] > w[0]));
        }
        if let Ok(class) = gaussrev_cli::parse_class(text) {
            assert!(!class.is_empty());
            assert!(class.iter().all(|p| p.nu() >= 1.0 && p.r() >= 0.0));
        }
    }
});
