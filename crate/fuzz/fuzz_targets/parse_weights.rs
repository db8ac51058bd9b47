#![no_main]

use gridmono::weights::{format_rational, parse_rational, parse_rational_list};
use gridmono::WeightSpec;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else { return };
    if let Ok(q) = parse_rational(s) {
        assert_eq!(parse_rational(&format_rational(&q)).unwrap(), q);
    }
    if let Ok(v) = parse_rational_list(s) {
        let text: Vec<String> = v.iter().map(format_rational).collect();
        assert_eq!(parse_rational_list(&text.join(",")).unwrap(), v);
    }
    let (x, a) = s.split_once(';').unwrap_or(("1", s));
    let _ = WeightSpec::parse(x, a);
});
