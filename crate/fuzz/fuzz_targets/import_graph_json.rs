#![no_main]

use gridmono::export::{graph_to_json, import_graph_json};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else { return };
    if let Ok(g) = import_graph_json(s) {
        let again = import_graph_json(&graph_to_json(&g)).unwrap();
        assert_eq!(graph_to_json(&again), graph_to_json(&g));
    }
});
