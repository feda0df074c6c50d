#![no_main]

use hyperdiv::basis::{canonicalize, Ambient, BasisElement};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else {
        return;
    };
    for marks in 1..=2u8 {
        if let Ok(e) = BasisElement::parse(s, marks) {
            assert_eq!(e.name(marks), s);
            for g in [2, 3, 4, 7, 10] {
                let amb = Ambient::new(g, marks).unwrap();
                if let Ok(c) = canonicalize(e, amb) {
                    assert_eq!(canonicalize(c, amb).unwrap(), c);
                }
            }
        }
    }
});
