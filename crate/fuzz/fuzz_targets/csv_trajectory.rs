//! Fuzzes the trajectory CSV table reader against arbitrary input.

#![no_main]

use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    if let Ok(text) = std::str::from_utf8(data) {
        let _ = transport_core::formats::csv::read_trajectory(text);
    }
});
