#![no_main]

use cms_core::minsat::parse_assignment;
use libfuzzer_sys::fuzz_target;

// first byte picks the variable count, the rest is solver output
fuzz_target!(|data: &[u8]| {
    let Some((&n, rest)) = data.split_first() else {
        return;
    };
    let Ok(text) = std::str::from_utf8(rest) else {
        return;
    };
    let num_vars = usize::from(n % 64);
    if let Ok(values) = parse_assignment(text, num_vars) {
        assert_eq!(values.len(), num_vars);
        let line: Vec<String> = values
            .iter()
            .enumerate()
            .map(|(i, &b)| {
                if b {
                    format!("{}", i + 1)
                } else {
                    format!("-{}", i + 1)
                }
            })
            .collect();
        assert_eq!(
            parse_assignment(&format!("v {} 0\n", line.join(" ")), num_vars).unwrap(),
            values
        );
    }
});
