#![no_main]

use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    // The grid is the cross product of the n and alpha/p lists, so input
    // length bounds keep degenerate configs from exercising only the
    // allocator.
    if data.len() > 4096 {
        return;
    }
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(spec) = localsym::config::parse_experiment_config(text) {
        let _ = spec.validate();
    }
});
