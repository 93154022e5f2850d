mod common;

use proptest::prelude::*;
use repair_cascade::analysis::fenced_blocks;
use repair_cascade::{Answer, Stage, Taxonomy, extract_repair, parse_detection};

use common::paraphrase::{detection_paraphrases, negated, response};

#[test]
fn affirmative_paraphrases_are_correct_without_code_context() {
    let taxonomy = Taxonomy::builtin();
    let set = detection_paraphrases(500);
    assert_eq!(set.len(), 500);
    for p in &set {
        let class = taxonomy.get(p.cwe).unwrap();
        for stage in [Stage::S1, Stage::S2, Stage::S3] {
            let v = parse_detection(&p.text, class, stage, None, &taxonomy);
            assert_eq!(v.answer, Answer::Yes, "{:?}", p.text);
            assert!(v.correct, "{stage} {:?} -> {v:?}", p.text);
            assert_eq!(v, parse_detection(&p.text, class, stage, None, &taxonomy));
        }
        let v = parse_detection(&negated(p), class, Stage::S2, None, &taxonomy);
        assert_eq!((v.answer, v.correct), (Answer::No, false), "{}", negated(p));
    }
}

#[test]
fn paraphrases_are_distinct() {
    let set = detection_paraphrases(500);
    let unique: std::collections::HashSet<_> = set.iter().map(|p| &p.text).collect();
    assert_eq!(unique.len(), set.len());
}

#[test]
fn code_stages_need_the_focus_line() {
    let taxonomy = Taxonomy::builtin();
    for p in detection_paraphrases(120) {
        let class = taxonomy.get(p.cwe).unwrap();
        let v = parse_detection(&p.text, class, Stage::S4, None, &taxonomy);
        assert!(!v.correct, "{:?}", p.text);
    }
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 500, ..ProptestConfig::default() })]

    #[test]
    fn detection_parsing_is_total_and_deterministic(text in any::<String>(), cwe in prop::sample::select(common::CWES.to_vec()), ord in 1u8..=7) {
        let taxonomy = Taxonomy::builtin();
        let class = taxonomy.get(cwe).unwrap();
        let stage = Stage::from_ordinal(ord).unwrap();
        let a = parse_detection(&text, class, stage, None, &taxonomy);
        let b = parse_detection(&text, class, stage, None, &taxonomy);
        prop_assert_eq!(&a, &b);
        prop_assert!(!a.correct || a.answer == Answer::Yes);
    }

    #[test]
    fn chosen_block_is_one_of_the_blocks(text in response(), original_lines in 0usize..40) {
        let original = "x;\n".repeat(original_lines);
        let r = extract_repair(&text, &original);
        prop_assert_eq!(&r.blocks, &fenced_blocks(&text));
        match r.chosen {
            Some(i) => prop_assert!(i < r.blocks.len()),
            None => prop_assert!(r.blocks.is_empty()),
        }
        if let Some(code) = r.chosen_code() {
            prop_assert!(r.blocks.iter().any(|b| b.code == code));
        }
    }

    #[test]
    fn extraction_is_total(text in any::<String>(), original in any::<String>()) {
        let r = extract_repair(&text, &original);
        prop_assert!(r.chosen.is_none_or(|i| i < r.blocks.len()));
        prop_assert_eq!(r.raw, text);
    }
}
