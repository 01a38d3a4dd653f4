#![no_main]

use framecalc::format::{parse_lat, write_lat};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    let Ok(doc) = parse_lat(text) else { return };
    // building is quadratic in the declared size
    if doc.size > 64 {
        return;
    }
    if let Ok(frame) = doc.build() {
        let out = write_lat(&doc.name, &frame);
        let again = parse_lat(&out).expect("exported files re-parse");
        assert_eq!(write_lat(&again.name, &again.build().unwrap()), out);
    }
});
