#![no_main]

use circle_approx::spec::parse_complex_list;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(list) = parse_complex_list(text) {
        assert!(!list.is_empty());
        assert!(list.len() <= text.matches(',').count() + 1);
    }
});
