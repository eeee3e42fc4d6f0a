#![no_main]

use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    if let Ok(text) = std::str::from_utf8(data) {
        if let Ok(cfg) = gaussrev_cli::parse_config(text) {
            // Parsed configs must stay queryable without panicking.
            for section in cfg.sections() {
                let _ = cfg.get(section, "gamma");
                let _ = cfg.get(section, "out");
            }
        }
    }
});
