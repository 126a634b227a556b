#![no_main]

use checkers_core::MassParam;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(mass) = text.parse::<MassParam>() {
        let m = mass.to_f64();
        assert!(m >= 0.0 && m.is_finite(), "{text:?} gave {m}");
        if let MassParam::Rational(_) = mass {
            assert_eq!(mass.to_string().parse::<MassParam>().unwrap(), mass);
        }
    }
});
