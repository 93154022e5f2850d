//! Shared inputs for the criterion benches.

use std::path::PathBuf;

use repair_cascade::{Corpus, load_corpus};

/// The checked-in demo corpus.
pub fn demo_corpus() -> Corpus {
    let root = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../corpora/demo");
    load_corpus(&root).expect("demo corpus")
}

/// A reply shaped like a typical repair answer: prose, a fenced block, more prose.
pub fn repair_reply(source: &str) -> String {
    format!("Here is the corrected function.\n\n```c\n{source}```\n\nThe copy is now bounded by the destination size.\n")
}
