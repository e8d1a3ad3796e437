#![no_main]

use hpmp::instance::{format_instance, parse_instance};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(inst) = parse_instance(text) {
        let formatted = format_instance(&inst);
        let again = parse_instance(&formatted).expect("formatted instance must parse");
        assert_eq!(format_instance(&again), formatted);
    }
});
