#![no_main]

use cms_core::json::{parse_profile, serialize_profile, serialize_profile_compact};
use cms_core::{total_cost, validate, Outcome};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    let Ok(profile) = parse_profile(text) else { return };

    let pretty = serialize_profile(&profile);
    let again = parse_profile(&pretty).expect("serialised profile parses");
    assert_eq!(again, profile);
    assert_eq!(serialize_profile(&again), pretty);
    assert_eq!(
        parse_profile(&serialize_profile_compact(&profile)).unwrap(),
        profile
    );

    if validate(&profile).iter().all(|v| !v.is_error()) {
        let cost = total_cost(&profile, &Outcome::all_false(profile.m())).unwrap();
        assert!(cost <= profile.total_weight().saturating_mul(profile.m() as u64));
    }
});
