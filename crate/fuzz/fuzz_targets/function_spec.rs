#![no_main]

use circle_approx::spec::parse_function_spec;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    match parse_function_spec(text) {
        Ok(spec) => {
            // a parsed spec must be usable
            let f = spec.to_function();
            let _ = f.taylor(8);
        }
        Err(e) => assert!(e.position <= text.chars().count()),
    }
});
