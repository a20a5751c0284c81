#![no_main]

use libfuzzer_sys::fuzz_target;
use supersinglet::search::GridSpec;

fuzz_target!(|data: &[u8]| {
    if let Ok(Ok(grid)) = std::str::from_utf8(data).map(str::parse::<GridSpec>) {
        let _ = grid.num_points();
    }
});
