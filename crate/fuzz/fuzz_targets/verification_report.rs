#![no_main]

use hyperdiv::closedform::VerificationReport;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    if let Ok(reports) = serde_json::from_slice::<Vec<VerificationReport>>(data) {
        let text = serde_json::to_string(&reports).unwrap();
        let back: Vec<VerificationReport> = serde_json::from_str(&text).unwrap();
        assert_eq!(back, reports);
    }
});
