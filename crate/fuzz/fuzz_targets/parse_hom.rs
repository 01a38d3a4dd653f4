#![no_main]

use std::sync::Arc;

use framecalc::format::{parse_hom, write_hom};
use framecalc::Frame;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    let Ok(doc) = parse_hom(text) else { return };
    let source = Arc::new(Frame::chain(3));
    let target = Arc::new(Frame::chain(2));
    if let Ok(f) = doc.build(source.clone(), target.clone()) {
        let out = write_hom(&doc.source, &doc.target, &f);
        let back = parse_hom(&out).unwrap().build(source, target).unwrap();
        assert_eq!(back.map(), f.map());
    }
});
