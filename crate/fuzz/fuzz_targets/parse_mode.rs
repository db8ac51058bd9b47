#![no_main]

use gridmono::{GridSpec, Mode};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else { return };
    if let Ok(m) = s.parse::<Mode>() {
        assert_eq!(m.to_string().parse::<Mode>().unwrap(), m);
    }
    let (dims, mode) = s.split_once(';').unwrap_or((s, "free"));
    if let Ok(spec) = GridSpec::parse(dims, mode) {
        let again = GridSpec::parse(&spec.dims_arg(), &spec.mode_arg()).unwrap();
        assert_eq!(again, spec);
    }
});
