//! The fourteen syntax prototypes used to probe the representation space.
//!
//! Placeholders: `+N` noun, `+Ns` plural noun, `+V` verb, `+Vs` third person
//! verb, `+Ving` present participle, `+A` adjective, `+D` adverb. Category 14
//! is a single space.

use alloc::string::String;
use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::corpus::{lexicon, CorpusError, SyntheticGrammar};

pub const CATEGORY_COUNT: usize = 14;

/// Templates in category order (index 0 is category 1).
pub const TEMPLATES: [&str; CATEGORY_COUNT] = [
    "The +N is +A.",
    "The +N +Vs.",
    "The +N has a +N.",
    "The +N +Vs a +N.",
    "The +N +Vs +D.",
    "No +N ever +Vs.",
    "Are +Ns +A?",
    "The +Ns of +N +D +V the +A +N, but some +Ns still +V their +N.",
    "In the +N of a +A +N, the +N will +V the +N of +Ving the +N.",
    "+Ns +V the +A +N of +Ns +Ving on the +N.",
    "In the +N of +N, +Ns would rather +V without +N than +V any +A +Ns.",
    "+N +Vs in order to +V on a +N.",
    "+A +Ns often +V like +Ns.",
    " ",
];

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Slot {
    Noun,
    PluralNoun,
    Verb,
    ThirdPersonVerb,
    Participle,
    Adjective,
    Adverb,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Piece {
    Literal(String),
    Slot(Slot),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PrototypeTemplate {
    pub category: usize,
    pub pattern: &'static str,
}

impl PrototypeTemplate {
    pub fn all() -> Vec<PrototypeTemplate> {
        TEMPLATES
            .iter()
            .enumerate()
            .map(|(i, pattern)| PrototypeTemplate { category: i + 1, pattern })
            .collect()
    }

    /// Splits the pattern into literal text and placeholders.
    pub fn pieces(&self) -> Vec<Piece> {
        let mut out = Vec::new();
        let mut literal = String::new();
        let mut chars = self.pattern.chars().peekable();
        while let Some(c) = chars.next() {
            let class = match (c, chars.peek()) {
                ('+', Some(&k @ ('N' | 'V' | 'A' | 'D'))) => k,
                _ => {
                    literal.push(c);
                    continue;
                }
            };
            chars.next();
            let mut suffix = String::new();
            while let Some(&s) = chars.peek() {
                if !s.is_ascii_lowercase() {
                    break;
                }
                suffix.push(s);
                chars.next();
            }
            let slot = match (class, suffix.as_str()) {
                ('N', "s") => Slot::PluralNoun,
                ('N', _) => Slot::Noun,
                ('V', "s") => Slot::ThirdPersonVerb,
                ('V', "ing") => Slot::Participle,
                ('V', _) => Slot::Verb,
                ('A', _) => Slot::Adjective,
                _ => Slot::Adverb,
            };
            if !literal.is_empty() {
                out.push(Piece::Literal(core::mem::take(&mut literal)));
            }
            out.push(Piece::Slot(slot));
        }
        if !literal.is_empty() {
            out.push(Piece::Literal(literal));
        }
        out
    }
}

/// A populated prototype and its category (1–14).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LabeledSentence {
    pub text: String,
    pub category: usize,
}

fn fill(slot: Slot, grammar: &SyntheticGrammar, rng: &mut ChaCha8Rng) -> String {
    let pick = |rng: &mut ChaCha8Rng, len: usize| rng.gen_range(0..len);
    match slot {
        Slot::Noun => String::from(grammar.nouns[pick(rng, grammar.nouns.len())].en),
        Slot::PluralNoun => lexicon::plural(grammar.nouns[pick(rng, grammar.nouns.len())].en),
        Slot::Verb => String::from(grammar.verbs[pick(rng, grammar.verbs.len())].en),
        Slot::ThirdPersonVerb => lexicon::third_person(grammar.verbs[pick(rng, grammar.verbs.len())].en),
        Slot::Participle => lexicon::present_participle(grammar.verbs[pick(rng, grammar.verbs.len())].en),
        Slot::Adjective => String::from(grammar.adjectives[pick(rng, grammar.adjectives.len())].en),
        Slot::Adverb => String::from(grammar.adverbs[pick(rng, grammar.adverbs.len())].en),
    }
}

/// Populates every template `per_category` times with words drawn (with
/// replacement) from the grammar's word lists. Output is grouped by category.
pub fn generate_prototype_sentences(
    grammar: &SyntheticGrammar,
    seed: u64,
    per_category: usize,
) -> Result<Vec<LabeledSentence>, CorpusError> {
    if per_category == 0 {
        return Err(CorpusError::Data("per_category must be at least 1".into()));
    }
    for (name, empty) in [
        ("noun", grammar.nouns.is_empty()),
        ("verb", grammar.verbs.is_empty()),
        ("adjective", grammar.adjectives.is_empty()),
        ("adverb", grammar.adverbs.is_empty()),
    ] {
        if empty {
            return Err(CorpusError::Grammar(alloc::format!("prototypes need a non-empty {name} list")));
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(CATEGORY_COUNT * per_category);
    for template in PrototypeTemplate::all() {
        let pieces = template.pieces();
        for _ in 0..per_category {
            let mut text = String::new();
            for piece in &pieces {
                match piece {
                    Piece::Literal(s) => text.push_str(s),
                    Piece::Slot(slot) => text.push_str(&fill(*slot, grammar, &mut rng)),
                }
            }
            out.push(LabeledSentence { text, category: template.category });
        }
    }
    Ok(out)
}

/// Text containing every character a prototype sentence or a default-grammar
/// sentence can contain.
pub fn covered_english_text() -> String {
    let mut out = String::new();
    for template in PrototypeTemplate::all() {
        for piece in template.pieces() {
            if let Piece::Literal(s) = piece {
                out.push_str(&s);
            }
        }
    }
    let words = lexicon::NOUNS
        .iter()
        .map(|n| n.en)
        .chain(lexicon::VERBS.iter().chain(lexicon::ADJECTIVES).chain(lexicon::ADVERBS).map(|w| w.en));
    for w in words {
        out.push(' ');
        out.push_str(w);
        out.push_str(&lexicon::plural(w));
        out.push_str(&lexicon::present_participle(w));
        let mut chars = w.chars();
        if let Some(c) = chars.next() {
            out.extend(c.to_uppercase());
        }
    }
    out
}

/// Tab-separated emission with a `category\tsentence` header.
pub fn write_prototypes_tsv(sentences: &[LabeledSentence]) -> String {
    let mut out = String::from("category\tsentence\n");
    for s in sentences {
        out.push_str(&alloc::format!("{}\t{}\n", s.category, s.text));
    }
    out
}
