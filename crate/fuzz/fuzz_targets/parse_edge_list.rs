#![no_main]

use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(file) = localsym::io::parse_edge_list(text) {
        // A tiny input can declare an enormous vertex count; cap it so
        // the fuzzer probes the parser and builder, not the allocator.
        if file.vertex_count() <= 100_000 {
            let n = file.vertex_count();
            let _ = localsym::Graph::from_edge_list(n, &file.edges, true);
            let _ = localsym::Graph::from_edge_list(n, &file.edges, false);
        }
    }
});
