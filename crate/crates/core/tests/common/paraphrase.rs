//! A fixed, enumerated set of detection answers. Each item leads with an
//! affirmative token and names one keyword of its class, with the wording
//! around both varied.

use proptest::prelude::*;
use repair_cascade::Taxonomy;

const AFFIRM: [&str; 8] = [
    "YES: A security vulnerability detected.",
    "YES",
    "Yes",
    "yes",
    "**YES**",
    "(1) YES",
    "Answer: Yes.",
    "> YES -",
];

const LEAD: [&str; 7] = [
    "",
    "The code has a",
    "After reviewing the function, I see a",
    "This snippet suffers from a classic",
    "The problem is a potential",
    "Looking at the copy loop there is an obvious",
    "Issue type:",
];

const TAIL: [&str; 6] = [
    ".",
    " in the highlighted function.",
    " issue. No other issues were found.",
    "; it should be fixed before release.",
    "\n\nThe rest of the code looks fine.",
    " (see the loop on line 4).",
];

fn shape(keyword: &str, form: usize) -> String {
    match form % 6 {
        0 => keyword.to_string(),
        1 => keyword.to_uppercase(),
        2 => keyword.split(' ').map(title).collect::<Vec<_>>().join(" "),
        3 => keyword.replace(' ', "-"),
        4 => format!("**{keyword}**"),
        _ => format!("`{}`", keyword.replace(' ', "_")),
    }
}

fn title(w: &str) -> String {
    let mut c = w.chars();
    c.next().map(|f| f.to_uppercase().chain(c).collect()).unwrap_or_default()
}

#[derive(Debug, Clone)]
pub struct Paraphrase {
    pub cwe: u32,
    pub keyword: String,
    pub text: String,
}

/// `n` affirmative detection answers spread over every class and keyword.
pub fn detection_paraphrases(n: usize) -> Vec<Paraphrase> {
    let taxonomy = Taxonomy::builtin();
    let classes = taxonomy.classes();
    (0..n)
        .map(|i| {
            let class = &classes[i % classes.len()];
            let round = i / classes.len();
            let keyword = &class.keywords[round % class.keywords.len()];
            let sep = if i % 3 == 0 { "\n" } else { " " };
            let text = format!(
                "{}{sep}{} {}{}",
                AFFIRM[(i * 5 + round) % AFFIRM.len()],
                LEAD[(i + round) * 3 % LEAD.len()],
                shape(keyword, i + round),
                TAIL[(i * 7 + round) % TAIL.len()],
            );
            Paraphrase { cwe: class.id, keyword: keyword.clone(), text }
        })
        .collect()
}

/// The same answer with the leading affirmative replaced by a denial.
pub fn negated(p: &Paraphrase) -> String {
    format!("NO: No security vulnerability is present. Not a {} either.", p.keyword)
}

fn line() -> impl Strategy<Value = String> {
    prop_oneof![
        3 => "[a-z ;(){}=0-9]{0,24}",
        1 => "```[a-z]{0,3}",
        1 => " *```",
        1 => "[ -~]{0,16}",
    ]
}

/// Model replies built from prose, code-ish lines and stray fences.
pub fn response() -> impl Strategy<Value = String> {
    prop::collection::vec(line(), 0..30).prop_map(|lines| lines.join("\n"))
}
