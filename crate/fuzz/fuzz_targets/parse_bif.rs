#![no_main]

use framecalc::format::{parse_bif, write_bif};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    let Ok(doc) = parse_bif(text) else { return };
    if doc.lat.size > 64 {
        return;
    }
    for close in [false, true] {
        if let Ok(b) = doc.build(close) {
            let out = write_bif(&doc.lat.name, &b);
            let back = parse_bif(&out).unwrap().build(false).unwrap();
            assert_eq!(write_bif(&doc.lat.name, &back), out);
        }
    }
});
