#![no_main]

use hpmp::bench::{parse_p_list, parse_seed_range};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(range) = parse_seed_range(text) {
        assert!(range.start() <= range.end());
    }
    if let Ok(list) = parse_p_list(text) {
        assert!(!list.is_empty() && list.iter().all(|&p| p >= 1));
    }
});
