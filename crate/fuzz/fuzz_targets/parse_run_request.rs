#![no_main]

use gridmono_cli::RunRequest;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else { return };
    if let Ok(r) = RunRequest::parse(s) {
        assert_eq!(RunRequest::parse(&r.to_line()).unwrap(), r);
    }
});
