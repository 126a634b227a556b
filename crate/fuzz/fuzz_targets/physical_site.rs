#![no_main]

use checkers_core::Site;
use libfuzzer_sys::fuzz_target;

// Input is `x;t;eps`.
fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    let mut parts = text.splitn(3, ';');
    let (Some(x), Some(t), Some(eps)) = (parts.next(), parts.next(), parts.next()) else { return };
    if let Ok(site) = Site::from_physical(x, t, eps) {
        assert!(site.tau() >= 1);
    }
});
