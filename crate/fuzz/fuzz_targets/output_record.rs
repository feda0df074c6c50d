#![no_main]

use hyperdiv::output::{parse_json, render_json, OutputRecord};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(rec) = parse_json(s) {
        let expr = rec.to_expression().expect("validated");
        let again = OutputRecord::from_expression(rec.divisor, &expr);
        assert_eq!(again.terms, rec.terms);
        assert_eq!(parse_json(&render_json(&rec)).unwrap(), rec);
    }
});
