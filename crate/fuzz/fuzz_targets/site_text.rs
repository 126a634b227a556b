#![no_main]

use checkers_core::Site;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(site) = text.parse::<Site>() {
        assert!(site.tau() >= 1);
        let _ = site.classify();
        let _ = site.to_rotated();
    }
});
