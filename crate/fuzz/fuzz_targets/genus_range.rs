#![no_main]

use hyperdiv::output::GenusRange;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(r) = s.parse::<GenusRange>() {
        assert!(2 <= r.start && r.start <= r.end);
        let shown = format!("{}..{}", r.start, r.end);
        assert_eq!(shown.parse::<GenusRange>(), Ok(r));
    }
});
