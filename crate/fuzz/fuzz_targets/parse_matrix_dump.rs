#![no_main]

use gridmono::matrix::{dump_matrix, parse_matrix_dump};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else { return };
    if let Ok(m) = parse_matrix_dump(s) {
        assert_eq!(parse_matrix_dump(&dump_matrix(&m)).unwrap(), m);
    }
});
