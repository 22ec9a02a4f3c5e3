use std::collections::HashMap;

use sdro::corpus::{parse_conllu, Label};
use sdro::lexicon::Lexicon;
use sdro::transforms::{Category, Engine, ParaphraseTable, Polarity, Source, ALL_CATEGORIES};

const TABLE1: &str = include_str!("../resources/table1.conllu");
const PARA_TSV: &str = include_str!("../resources/table1_paraphrases.tsv");
const PARA_CONLLU: &str = include_str!("../resources/table1_paraphrases.conllu");
const EXPECTED: &str = include_str!("../resources/table1_expected.tsv");

fn engine() -> Engine {
    Engine::new(Lexicon::builtin().unwrap()).with_paraphrases(ParaphraseTable::parse(PARA_TSV, PARA_CONLLU).unwrap())
}

fn strip_period(s: &str) -> &str {
    s.strip_suffix('.').unwrap_or(s)
}

#[test]
fn reproduces_every_row_for_several_seeds() {
    let engine = engine();
    let sentences: HashMap<String, _> = parse_conllu(TABLE1).unwrap().into_iter().map(|s| (s.id.clone(), s)).collect();
    for s in sentences.values() {
        s.check_text().unwrap();
    }
    for line in EXPECTED.lines().filter(|l| !l.starts_with('#')) {
        let cols: Vec<&str> = line.split('\t').collect();
        let sentence = &sentences[cols[0]];
        let category = Category::parse(cols[1]).unwrap();
        for seed in [0, 1, 7, 42] {
            let src = Source::new(cols[0], sentence, Label::True);
            let out = engine.apply(category, &src, seed).unwrap_or_else(|| panic!("{} inapplicable", cols[1]));
            assert_eq!(strip_period(&out.text), strip_period(cols[2]), "{}", cols[1]);
            let expected_label = match category.polarity() {
                Polarity::SP => Label::True,
                Polarity::SI => Label::False,
            };
            assert_eq!(out.label, expected_label);
        }
    }
}

#[test]
fn negation_source_applicable_subset() {
    let engine = engine();
    let sentences = parse_conllu(TABLE1).unwrap();
    let s = sentences.iter().find(|s| s.id == "table1-06").unwrap();
    let src = Source::new(&s.id, s, Label::True);
    let out = engine.apply_all(&src, &ALL_CATEGORIES, 0);
    let cats: Vec<Category> = out.iter().map(|t| t.category()).collect();
    assert_eq!(cats, [Category::NounAntonym, Category::Negation, Category::NounSynonym]);
}
