//! Embedded word lists with their pseudo-German and pseudo-French renderings.

use alloc::string::String;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Gender {
    Masculine,
    Feminine,
    Neuter,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NounEntry {
    pub en: &'static str,
    pub de: &'static str,
    pub de_gender: Gender,
    pub fr: &'static str,
    pub fr_gender: Gender,
}

/// A word whose rendering does not depend on agreement.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WordEntry {
    pub en: &'static str,
    pub de: &'static str,
    pub fr: &'static str,
}

const fn noun(
    en: &'static str,
    de: &'static str,
    de_gender: Gender,
    fr: &'static str,
    fr_gender: Gender,
) -> NounEntry {
    NounEntry { en, de, de_gender, fr, fr_gender }
}

const fn word(en: &'static str, de: &'static str, fr: &'static str) -> WordEntry {
    WordEntry { en, de, fr }
}

use Gender::{Feminine as F, Masculine as M, Neuter as N};

pub static NOUNS: &[NounEntry] = &[
    noun("dog", "Hund", M, "chien", M),
    noun("cat", "Katze", F, "chat", M),
    noun("bird", "Vogel", M, "oiseau", M),
    noun("horse", "Pferd", N, "cheval", M),
    noun("child", "Kind", N, "enfant", M),
    noun("farmer", "Bauer", M, "fermier", M),
    noun("teacher", "Lehrer", M, "professeur", M),
    noun("doctor", "Arzt", M, "medecin", M),
    noun("king", "Koenig", M, "roi", M),
    noun("queen", "Koenigin", F, "reine", F),
    noun("house", "Haus", N, "maison", F),
    noun("car", "Auto", N, "voiture", F),
    noun("tree", "Baum", M, "arbre", M),
    noun("river", "Fluss", M, "riviere", F),
    noun("city", "Stadt", F, "ville", F),
    noun("book", "Buch", N, "livre", M),
    noun("letter", "Brief", M, "lettre", F),
    noun("song", "Lied", N, "chanson", F),
    noun("apple", "Apfel", M, "pomme", F),
    noun("garden", "Garten", M, "jardin", M),
    noun("window", "Fenster", N, "fenetre", F),
    noun("door", "Tuer", F, "porte", F),
    noun("table", "Tisch", M, "table", F),
    noun("road", "Strasse", F, "route", F),
    noun("ship", "Schiff", N, "navire", M),
    noun("train", "Zug", M, "train", M),
    noun("friend", "Freund", M, "ami", M),
    noun("student", "Student", M, "etudiant", M),
    noun("baker", "Baecker", M, "boulanger", M),
    noun("singer", "Saenger", M, "chanteur", M),
];

/// Verbs; the German and French forms are third person singular.
pub static VERBS: &[WordEntry] = &[
    word("see", "sieht", "voit"),
    word("like", "mag", "aime"),
    word("find", "findet", "trouve"),
    word("help", "hilft", "aide"),
    word("love", "liebt", "adore"),
    word("watch", "beobachtet", "regarde"),
    word("carry", "traegt", "porte"),
    word("open", "oeffnet", "ouvre"),
    word("visit", "besucht", "visite"),
    word("call", "ruft", "appelle"),
    word("paint", "malt", "peint"),
    word("read", "liest", "lit"),
    word("take", "nimmt", "prend"),
    word("build", "baut", "construit"),
    word("wash", "waescht", "lave"),
    word("push", "schiebt", "pousse"),
    word("greet", "gruesst", "salue"),
    word("stop", "stoppt", "arrete"),
    word("bark", "bellt", "aboie"),
    word("follow", "folgt", "suit"),
];

pub static ADJECTIVES: &[WordEntry] = &[
    word("red", "rot", "rouge"),
    word("big", "gross", "grand"),
    word("small", "klein", "petit"),
    word("old", "alt", "vieux"),
    word("young", "jung", "jeune"),
    word("happy", "froh", "heureux"),
    word("quiet", "leise", "calme"),
    word("green", "gruen", "vert"),
    word("warm", "warm", "chaud"),
    word("cold", "kalt", "froid"),
    word("bright", "hell", "clair"),
    word("dark", "dunkel", "sombre"),
    word("strong", "stark", "fort"),
    word("slow", "langsam", "lent"),
    word("fast", "schnell", "rapide"),
];

pub static ADVERBS: &[WordEntry] = &[
    word("quickly", "schnell", "vite"),
    word("slowly", "langsam", "lentement"),
    word("often", "oft", "souvent"),
    word("rarely", "selten", "rarement"),
    word("always", "immer", "toujours"),
    word("never", "nie", "jamais"),
    word("quietly", "leise", "doucement"),
    word("gladly", "gern", "volontiers"),
    word("early", "frueh", "tot"),
    word("here", "hier", "ici"),
];

/// Verbs that take a clause complement.
pub static REPORTING_VERBS: &[WordEntry] = &[
    word("know", "weiss", "sait"),
    word("say", "sagt", "dit"),
    word("think", "denkt", "pense"),
];

/// Irregular noun plurals.
static IRREGULAR_PLURALS: &[(&str, &str)] = &[("child", "children"), ("man", "men"), ("woman", "women")];

/// Verbs whose final consonant doubles before "-ing".
static DOUBLING_VERBS: &[&str] = &["stop", "run", "swim", "plan", "sit", "get"];

fn ends_with_sibilant(w: &str) -> bool {
    ["s", "sh", "ch", "x", "z"].iter().any(|s| w.ends_with(s))
}

fn consonant_y(w: &str) -> bool {
    let b = w.as_bytes();
    b.len() >= 2 && b[b.len() - 1] == b'y' && !b"aeiou".contains(&b[b.len() - 2])
}

/// English plural ("dog" → "dogs", "city" → "cities", "child" → "children").
pub fn plural(noun: &str) -> String {
    if let Some((_, p)) = IRREGULAR_PLURALS.iter().find(|(s, _)| *s == noun) {
        return String::from(*p);
    }
    s_form(noun)
}

/// Third person singular present ("bark" → "barks", "watch" → "watches").
pub fn third_person(verb: &str) -> String {
    s_form(verb)
}

fn s_form(w: &str) -> String {
    let mut out = String::from(w);
    if consonant_y(w) {
        out.pop();
        out.push_str("ies");
    } else if ends_with_sibilant(w) {
        out.push_str("es");
    } else {
        out.push('s');
    }
    out
}

/// Present participle ("see" → "seeing", "take" → "taking", "stop" → "stopping").
pub fn present_participle(verb: &str) -> String {
    let mut out = String::from(verb);
    if DOUBLING_VERBS.contains(&verb) {
        if let Some(last) = verb.chars().last() {
            out.push(last);
        }
    } else if verb.ends_with('e') && !verb.ends_with("ee") && verb.len() > 2 {
        out.pop();
    }
    out.push_str("ing");
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inflections() {
        assert_eq!(plural("dog"), "dogs");
        assert_eq!(plural("city"), "cities");
        assert_eq!(plural("child"), "children");
        assert_eq!(plural("day"), "days");
        assert_eq!(third_person("bark"), "barks");
        assert_eq!(third_person("watch"), "watches");
        assert_eq!(third_person("carry"), "carries");
        assert_eq!(third_person("push"), "pushes");
        assert_eq!(present_participle("see"), "seeing");
        assert_eq!(present_participle("take"), "taking");
        assert_eq!(present_participle("stop"), "stopping");
        assert_eq!(present_participle("carry"), "carrying");
        assert_eq!(present_participle("read"), "reading");
    }

    #[test]
    fn word_lists_have_no_duplicates() {
        let mut en: alloc::vec::Vec<&str> = NOUNS.iter().map(|n| n.en).collect();
        en.extend(VERBS.iter().map(|w| w.en));
        en.extend(ADJECTIVES.iter().map(|w| w.en));
        en.extend(ADVERBS.iter().map(|w| w.en));
        let n = en.len();
        en.sort_unstable();
        en.dedup();
        assert_eq!(en.len(), n);
    }
}
