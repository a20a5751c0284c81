#![no_main]

use libfuzzer_sys::fuzz_target;
use supersinglet::protocol::ProtocolTimes;
use supersinglet::search::AxisRange;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(t) = text.parse::<ProtocolTimes>() {
        let back: ProtocolTimes = t.to_string().parse().expect("display output parses");
        assert_eq!(back, t);
    }
    if let Ok(r) = text.parse::<AxisRange>() {
        assert_eq!(r.values().len(), r.len());
    }
});
