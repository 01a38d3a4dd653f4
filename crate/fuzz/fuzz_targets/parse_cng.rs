#![no_main]

use framecalc::format::{parse_cng, write_cng};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    let Ok(doc) = parse_cng(text) else { return };
    if doc.lat.size > 64 {
        return;
    }
    if let Ok((_, Ok(c))) = doc.build() {
        let out = write_cng(&doc.lat.name, &c);
        let (_, back) = parse_cng(&out).unwrap().build().unwrap();
        assert_eq!(back.unwrap(), c);
    }
});
