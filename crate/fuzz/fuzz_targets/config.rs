//! Fuzzes the `key = value` run-configuration parser. Accepted inputs must
//! reach a textual fixpoint: the echo of a parsed configuration re-parses to
//! a configuration with the identical echo.

#![no_main]

use libfuzzer_sys::fuzz_target;
use transport_core::formats::parse_config;

fn echo(cfg: &transport_core::formats::RunConfig) -> String {
    cfg.echo_entries()
        .iter()
        .map(|(k, v)| format!("{k} = {v}\n"))
        .collect()
}

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(cfg) = parse_config(text) {
        let first = echo(&cfg);
        let again = parse_config(&first).expect("echo of an accepted config must parse");
        assert_eq!(first, echo(&again), "echo is not a fixpoint");
    }
});
