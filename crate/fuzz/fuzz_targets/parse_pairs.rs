#![no_main]

use framecalc::format::parse_pairs;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    if let Ok(text) = std::str::from_utf8(data) {
        if let Ok(pairs) = parse_pairs(text) {
            let printed: Vec<String> = pairs.iter().map(|(a, b)| format!("{a},{b}")).collect();
            assert_eq!(parse_pairs(&printed.join(";")).unwrap(), pairs);
        }
    }
});
