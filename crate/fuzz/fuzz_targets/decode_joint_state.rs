#![no_main]

use libfuzzer_sys::fuzz_target;
use supersinglet::protocol::JointState;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(state) = JointState::from_json(text) {
        let again = JointState::from_json(&state.to_json()).expect("re-encoded state decodes");
        assert_eq!(again, state);
    }
});
