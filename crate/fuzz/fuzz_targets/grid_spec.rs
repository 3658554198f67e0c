#![no_main]

use libfuzzer_sys::fuzz_target;
use nhkitaev::config::GridSpec;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    let Ok(spec) = text.parse::<GridSpec>() else {
        return;
    };
    let again: GridSpec = spec.to_string().parse().expect("displayed spec parses");
    assert_eq!(spec, again);
    if let GridSpec::Range { min, max, step } = spec {
        let values = spec.values().expect("validated range expands");
        assert!(!values.is_empty());
        assert_eq!(values[0], min);
        assert!(values.iter().all(|v| *v <= max + step));
    }
});
