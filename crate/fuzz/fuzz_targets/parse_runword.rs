//! Feeds arbitrary bytes to the run-word text parser. Accepted inputs must
//! be canonical after one round trip: display then reparse is the identity.

#![no_main]

use ietlab::RunWord;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    let Ok(word) = text.parse::<RunWord>() else {
        return;
    };
    let rendered = word.to_string();
    let reparsed: RunWord = rendered.parse().expect("canonical text must parse");
    assert_eq!(reparsed, word);
    assert_eq!(reparsed.to_string(), rendered);
    // canonical form never keeps adjacent runs of equal type or zero runs
    for pair in word.runs().windows(2) {
        assert_ne!(pair[0].0, pair[1].0);
    }
});
