#![no_main]

use framecalc::format::{parse_spc, write_spc};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    let Ok(doc) = parse_spc(text) else { return };
    if let Ok(space) = doc.build() {
        let out = write_spc(&doc.name, &space);
        assert_eq!(parse_spc(&out).unwrap().build().unwrap(), space);
    }
});
