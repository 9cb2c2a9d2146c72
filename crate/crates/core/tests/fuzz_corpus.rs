use std::path::PathBuf;

use circle_approx::spec::{parse_complex, parse_complex_list, parse_function_spec};

fn seeds(target: &str) -> Vec<(PathBuf, String)> {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../fuzz/corpus")
        .join(target);
    let mut out: Vec<_> = std::fs::read_dir(&dir)
        .unwrap_or_else(|e| panic!("{}: {e}", dir.display()))
        .map(|e| e.unwrap().path())
        .filter_map(|p| {
            let bytes = std::fs::read(&p).unwrap();
            String::from_utf8(bytes).ok().map(|s| (p, s))
        })
        .collect();
    out.sort();
    assert!(!out.is_empty(), "empty corpus for {target}");
    out
}

#[test]
fn function_spec_corpus() {
    let mut accepted = 0;
    for (path, text) in seeds("function_spec") {
        match parse_function_spec(&text) {
            Ok(spec) => {
                spec.to_function().taylor(8).unwrap();
                accepted += 1;
            }
            Err(e) => assert!(e.position <= text.chars().count(), "{}", path.display()),
        }
    }
    assert!(accepted > 0);
}

#[test]
fn complex_token_corpus() {
    for (path, text) in seeds("complex_token") {
        if let Ok(z) = parse_complex(&text) {
            assert!(z.re.is_finite() && z.im.is_finite(), "{}", path.display());
            assert_eq!(parse_complex(&format!("{}{:+}i", z.re, z.im)).unwrap(), z);
        }
    }
}

#[test]
fn complex_list_corpus() {
    for (path, text) in seeds("complex_list") {
        if let Ok(list) = parse_complex_list(&text) {
            assert!(!list.is_empty(), "{}", path.display());
            assert!(list.len() <= text.matches(',').count() + 1);
        }
    }
}
