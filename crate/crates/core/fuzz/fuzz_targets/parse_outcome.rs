#![no_main]

use cms_core::fixtures::coauthors;
use cms_core::json::{parse_outcome, serialize_outcome};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    let profile = coauthors();
    if let Ok(outcome) = parse_outcome(text, &profile) {
        assert_eq!(outcome.len(), profile.m());
        let back = parse_outcome(&serialize_outcome(&profile, &outcome), &profile).unwrap();
        assert_eq!(back, outcome);
    }
});
