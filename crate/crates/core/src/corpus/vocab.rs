use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

pub const PAD: usize = 0;
pub const START: usize = 1;
pub const END: usize = 2;
pub const UNK: usize = 3;
/// Number of reserved control ids preceding the data symbols.
pub const RESERVED: usize = 4;

const RESERVED_NAMES: [&str; RESERVED] = ["<pad>", "<s>", "</s>", "<unk>"];

/// How text is split into symbols.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SymbolKind {
    /// One symbol per Unicode scalar value.
    Chars,
    /// One symbol per space-separated token (tag sequences).
    Tokens,
}

/// Bijection between symbols and integer ids.
///
/// Ids 0..4 are reserved for PAD, START, END and UNK; data symbols follow in
/// sorted order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "VocabularyRepr", into = "VocabularyRepr")]
pub struct Vocabulary {
    kind: SymbolKind,
    symbols: Vec<String>,
    index: BTreeMap<String, usize>,
}

#[derive(Serialize, Deserialize)]
struct VocabularyRepr {
    kind: SymbolKind,
    symbols: Vec<String>,
}

impl From<Vocabulary> for VocabularyRepr {
    fn from(v: Vocabulary) -> Self {
        Self { kind: v.kind, symbols: v.symbols }
    }
}

impl TryFrom<VocabularyRepr> for Vocabulary {
    type Error = String;

    fn try_from(r: VocabularyRepr) -> Result<Self, String> {
        if r.kind == SymbolKind::Chars && r.symbols.iter().any(|s| s.chars().count() != 1) {
            return Err("character vocabulary holds a multi-character symbol".to_string());
        }
        let v = Self::from_symbols(r.kind, r.symbols.clone());
        if v.symbols.len() != r.symbols.len() {
            return Err("vocabulary symbols are not unique".to_string());
        }
        Ok(v)
    }
}

impl Vocabulary {
    fn from_symbols(kind: SymbolKind, symbols: impl IntoIterator<Item = String>) -> Self {
        let set: BTreeSet<String> = symbols.into_iter().collect();
        let symbols: Vec<String> = set.into_iter().collect();
        let index = symbols.iter().enumerate().map(|(i, s)| (s.clone(), i + RESERVED)).collect();
        Self { kind, symbols, index }
    }

    /// Character vocabulary over every character present in `texts`.
    pub fn build<'t>(texts: impl IntoIterator<Item = &'t str>) -> Self {
        let chars = texts.into_iter().flat_map(str::chars).map(String::from);
        Self::from_symbols(SymbolKind::Chars, chars)
    }

    /// Token vocabulary over every space-separated token present in `texts`.
    pub fn build_tokens<'t>(texts: impl IntoIterator<Item = &'t str>) -> Self {
        let tokens = texts.into_iter().flat_map(str::split_whitespace).map(String::from);
        Self::from_symbols(SymbolKind::Tokens, tokens)
    }

    pub fn kind(&self) -> SymbolKind {
        self.kind
    }

    /// Total id count including reserved ids.
    pub fn len(&self) -> usize {
        self.symbols.len() + RESERVED
    }

    /// True when only reserved ids exist.
    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    /// Data symbols in id order.
    pub fn symbols(&self) -> &[String] {
        &self.symbols
    }

    pub fn id(&self, symbol: &str) -> Option<usize> {
        self.index.get(symbol).copied()
    }

    pub fn symbol(&self, id: usize) -> Option<&str> {
        match id {
            i if i < RESERVED => Some(RESERVED_NAMES[i]),
            i => self.symbols.get(i - RESERVED).map(String::as_str),
        }
    }

    /// Splits `text` into this vocabulary's symbol units.
    pub fn units<'t>(&self, text: &'t str) -> Vec<&'t str> {
        match self.kind {
            SymbolKind::Chars => text.char_indices().map(|(i, c)| &text[i..i + c.len_utf8()]).collect(),
            SymbolKind::Tokens => text.split_whitespace().collect(),
        }
    }

    /// Maps `text` to ids, sending unknown symbols to UNK.
    pub fn encode(&self, text: &str) -> Vec<usize> {
        self.units(text).into_iter().map(|u| self.id(u).unwrap_or(UNK)).collect()
    }

    /// Maps `text` to ids, returning the first unknown symbol on failure.
    pub fn encode_strict(&self, text: &str) -> Result<Vec<usize>, String> {
        self.units(text)
            .into_iter()
            .map(|u| self.id(u).ok_or_else(|| u.to_string()))
            .collect()
    }

    /// Renders ids as text. PAD, START and END are dropped; UNK becomes U+FFFD.
    pub fn decode(&self, ids: &[usize]) -> String {
        let parts = ids.iter().filter_map(|&id| match id {
            PAD | START | END => None,
            UNK => Some("\u{FFFD}"),
            i => Some(self.symbols.get(i - RESERVED).map_or("\u{FFFD}", String::as_str)),
        });
        match self.kind {
            SymbolKind::Chars => parts.collect(),
            SymbolKind::Tokens => parts.collect::<Vec<_>>().join(" "),
        }
    }
}
