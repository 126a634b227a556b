#![no_main]

use checkers_core::BypassSet;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(set) = BypassSet::from_json_str(text) {
        let again = BypassSet::from_json_str(&set.to_json_string()).expect("serialized sets parse");
        assert_eq!(again, set);
        assert!(set.iter().all(|s| s.tau() >= 1));
    }
});
