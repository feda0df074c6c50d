#![no_main]

use hyperdiv::output::parse_csv;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else {
        return;
    };
    for marks in 1..=2u8 {
        if let Ok(rows) = parse_csv(s, marks) {
            for (_, v) in rows {
                assert!(v.denom() > &0.into());
            }
        }
    }
});
