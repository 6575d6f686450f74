//! Vocabularies, aligned training tuples, the tab-separated corpus format, and
//! the synthetic corpus generator.

mod grammar;
pub mod lexicon;
mod vocab;

use alloc::collections::BTreeMap;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

pub use grammar::{
    generate_synthetic_corpus, render_frame, Determiner, Frame, NounPhrase, PosTag, SyntheticGrammar,
};
pub use vocab::{SymbolKind, Vocabulary, END, PAD, RESERVED, START, UNK};

use crate::task::Task;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CorpusError {
    #[error("line {line}: {reason}")]
    Parse { line: usize, reason: String },
    #[error("line {line}: expected {expected} columns, found {found}")]
    ColumnCount { line: usize, expected: usize, found: usize },
    #[error("bad corpus header: {0}")]
    Header(String),
    #[error("grammar error: {0}")]
    Grammar(String),
    #[error("data error: {0}")]
    Data(String),
}

/// One aligned record: the English input plus a target per decoder.
///
/// The replication target, when present, is the input itself.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExampleTuple {
    pub input: String,
    pub targets: BTreeMap<Task, String>,
}

impl ExampleTuple {
    /// A tuple carrying only the replication target.
    pub fn replicate(input: impl Into<String>) -> Self {
        let input = input.into();
        let mut targets = BTreeMap::new();
        targets.insert(Task::Rep, input.clone());
        Self { input, targets }
    }

    pub fn target(&self, task: Task) -> Option<&str> {
        self.targets.get(&task).map(String::as_str)
    }
}

/// Splits English text into words with punctuation as separate tokens, the
/// unit that POS tags align to.
pub fn english_tokens(text: &str) -> Vec<&str> {
    let mut out = Vec::new();
    for word in text.split_whitespace() {
        let core = word.trim_end_matches(['.', ',', '?', '!', ';', ':']);
        if !core.is_empty() {
            out.push(core);
        }
        let tail = &word[core.len()..];
        out.extend(tail.char_indices().map(|(i, c)| &tail[i..i + c.len_utf8()]));
    }
    out
}

/// Parses the tab-separated parallel corpus format.
///
/// The first line names the columns (`en` mandatory, plus any of `de`, `fr`,
/// `pos`). Every following line holds one aligned record. Line numbers in
/// errors are 1-based and count the header.
pub fn parse_parallel_corpus(bytes: &[u8]) -> Result<Vec<ExampleTuple>, CorpusError> {
    let mut lines = bytes.split(|&b| b == b'\n').enumerate().map(|(i, raw)| {
        let raw = raw.strip_suffix(b"\r").unwrap_or(raw);
        core::str::from_utf8(raw)
            .map(|s| (i + 1, s))
            .map_err(|_| CorpusError::Parse { line: i + 1, reason: "invalid UTF-8".into() })
    });
    let (_, header) = lines.next().transpose()?.ok_or_else(|| CorpusError::Header("empty file".into()))?;
    let columns = parse_header(header)?;
    let mut out = Vec::new();
    let mut pending_blank: Option<usize> = None;
    for item in lines {
        let (line, text) = item?;
        if text.is_empty() {
            // A single trailing newline is fine; blank lines inside the body are not.
            pending_blank.get_or_insert(line);
            continue;
        }
        if let Some(blank) = pending_blank {
            return Err(CorpusError::Parse { line: blank, reason: "blank line".into() });
        }
        let fields: Vec<&str> = text.split('\t').collect();
        if fields.len() != columns.len() {
            return Err(CorpusError::ColumnCount { line, expected: columns.len(), found: fields.len() });
        }
        let mut input = String::new();
        let mut targets = BTreeMap::new();
        for (task, field) in columns.iter().zip(fields) {
            if *task == Task::Rep {
                input = field.to_string();
            }
            targets.insert(*task, field.to_string());
        }
        out.push(ExampleTuple { input, targets });
    }
    Ok(out)
}

fn parse_header(header: &str) -> Result<Vec<Task>, CorpusError> {
    let mut columns = Vec::new();
    for name in header.split('\t') {
        let task = Task::ALL
            .into_iter()
            .find(|t| t.column() == name)
            .ok_or_else(|| CorpusError::Header(alloc::format!("unknown column `{name}`")))?;
        if columns.contains(&task) {
            return Err(CorpusError::Header(alloc::format!("duplicate column `{name}`")));
        }
        columns.push(task);
    }
    if !columns.contains(&Task::Rep) {
        return Err(CorpusError::Header("missing mandatory `en` column".into()));
    }
    Ok(columns)
}

/// Renders tuples in the parallel corpus format with the given target columns
/// (always led by `en`), in canonical column order.
pub fn write_parallel_corpus(tuples: &[ExampleTuple], tasks: &[Task]) -> Result<String, CorpusError> {
    let mut columns: Vec<Task> = tasks.iter().copied().filter(|t| *t != Task::Rep).collect();
    columns.sort_unstable();
    columns.dedup();
    let mut out = String::from("en");
    for t in &columns {
        out.push('\t');
        out.push_str(t.column());
    }
    out.push('\n');
    for (i, tuple) in tuples.iter().enumerate() {
        let mut fields = Vec::with_capacity(columns.len() + 1);
        fields.push(tuple.input.as_str());
        for t in &columns {
            fields.push(tuple.target(*t).ok_or_else(|| {
                CorpusError::Data(alloc::format!("tuple {i} has no {} target", t.column()))
            })?);
        }
        if fields.iter().any(|f| f.contains(['\t', '\n', '\r'])) {
            return Err(CorpusError::Data(alloc::format!("tuple {i} contains a tab or line break")));
        }
        out.push_str(&fields.join("\t"));
        out.push('\n');
    }
    Ok(out)
}

fn splitmix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9E37_79B9_7F4A_7C15);
    x = (x ^ (x >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    x ^ (x >> 31)
}

/// True when tuple `index` belongs to the held-out tenth.
pub fn is_test_index(index: usize) -> bool {
    splitmix64(index as u64) % 10 == 0
}

/// 90/10 train/test split keyed on a hash of each tuple's index.
pub fn split_train_test(tuples: &[ExampleTuple]) -> (Vec<ExampleTuple>, Vec<ExampleTuple>) {
    let mut train = Vec::new();
    let mut test = Vec::new();
    for (i, t) in tuples.iter().enumerate() {
        if is_test_index(i) {
            test.push(t.clone());
        } else {
            train.push(t.clone());
        }
    }
    (train, test)
}

/// One vocabulary per sequence role.
///
/// The English vocabulary serves both the encoder input and the replication
/// decoder.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Vocabularies {
    pub en: Vocabulary,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub de: Option<Vocabulary>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fr: Option<Vocabulary>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pos: Option<Vocabulary>,
}

impl Vocabularies {
    /// Builds vocabularies for `tasks` from a corpus.
    ///
    /// The English side also covers every word-list form and the literal text
    /// of the syntax prototypes, so prototype sentences are always encodable.
    pub fn from_corpus(tuples: &[ExampleTuple], tasks: &[Task]) -> Result<Self, CorpusError> {
        let extra = crate::prototypes::covered_english_text();
        let en = Vocabulary::build(tuples.iter().map(|t| t.input.as_str()).chain(core::iter::once(extra.as_str())));
        let build = |task: Task| -> Result<Option<Vocabulary>, CorpusError> {
            if !tasks.contains(&task) {
                return Ok(None);
            }
            let mut texts = Vec::with_capacity(tuples.len());
            for (i, t) in tuples.iter().enumerate() {
                texts.push(t.target(task).ok_or_else(|| {
                    CorpusError::Data(alloc::format!("tuple {i} has no {} target", task.column()))
                })?);
            }
            Ok(Some(match task {
                Task::Pos => Vocabulary::build_tokens(texts),
                _ => Vocabulary::build(texts),
            }))
        };
        Ok(Self { de: build(Task::De)?, fr: build(Task::Fr)?, pos: build(Task::Pos)?, en })
    }

    pub fn for_task(&self, task: Task) -> Option<&Vocabulary> {
        match task {
            Task::Rep => Some(&self.en),
            Task::De => self.de.as_ref(),
            Task::Fr => self.fr.as_ref(),
            Task::Pos => self.pos.as_ref(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    #[test]
    fn header_and_line() {
        let tuples = parse_parallel_corpus(b"en\tde\nHi .\tHallo .\n").unwrap();
        assert_eq!(tuples.len(), 1);
        assert_eq!(tuples[0].input, "Hi .");
        assert_eq!(tuples[0].target(Task::De), Some("Hallo ."));
        assert_eq!(tuples[0].target(Task::Rep), Some("Hi ."));
        assert_eq!(tuples[0].target(Task::Fr), None);
    }

    #[test]
    fn empty_body() {
        assert!(parse_parallel_corpus(b"en\tde\n").unwrap().is_empty());
        assert!(parse_parallel_corpus(b"en").unwrap().is_empty());
        assert!(matches!(parse_parallel_corpus(b""), Err(CorpusError::Header(_))));
    }

    #[test]
    fn column_count_mismatch_reports_line() {
        let err = parse_parallel_corpus(b"en\tde\nA\tB\nA\tB\tC\tD\n").unwrap_err();
        assert_eq!(err, CorpusError::ColumnCount { line: 3, expected: 2, found: 4 });
    }

    #[test]
    fn malformed_lines_report_line() {
        let err = parse_parallel_corpus(b"en\nok\n\xff\xfe\n").unwrap_err();
        assert!(matches!(err, CorpusError::Parse { line: 3, .. }));
        let err = parse_parallel_corpus(b"en\nok\n\nmore\n").unwrap_err();
        assert!(matches!(err, CorpusError::Parse { line: 3, .. }));
    }

    #[test]
    fn header_validation() {
        assert!(matches!(parse_parallel_corpus(b"de\nx\n"), Err(CorpusError::Header(_))));
        assert!(matches!(parse_parallel_corpus(b"en\txx\n"), Err(CorpusError::Header(_))));
        assert!(matches!(parse_parallel_corpus(b"en\ten\n"), Err(CorpusError::Header(_))));
    }

    #[test]
    fn write_then_parse_round_trips() {
        let g = SyntheticGrammar::default();
        let tuples = generate_synthetic_corpus(&g, 20, 3).unwrap();
        let text = write_parallel_corpus(&tuples, &Task::ALL).unwrap();
        assert!(text.starts_with("en\tde\tfr\tpos\n"));
        assert_eq!(parse_parallel_corpus(text.as_bytes()).unwrap(), tuples);
    }

    #[test]
    fn writing_rejects_tabs() {
        let t = ExampleTuple::replicate("a\tb");
        assert!(write_parallel_corpus(&[t], &[Task::Rep]).is_err());
    }

    #[test]
    fn english_tokens_split_punctuation() {
        assert_eq!(english_tokens("The dog barks."), vec!["The", "dog", "barks", "."]);
        assert_eq!(english_tokens("In the end, yes?"), vec!["In", "the", "end", ",", "yes", "?"]);
        assert!(english_tokens(" ").is_empty());
    }

    #[test]
    fn split_is_roughly_ninety_ten() {
        let g = SyntheticGrammar::default();
        let tuples = generate_synthetic_corpus(&g, 1000, 1).unwrap();
        let (train, test) = split_train_test(&tuples);
        assert_eq!(train.len() + test.len(), 1000);
        assert!((70..=130).contains(&test.len()), "{}", test.len());
    }

    #[test]
    fn vocabularies_cover_requested_tasks() {
        let g = SyntheticGrammar::default();
        let tuples = generate_synthetic_corpus(&g, 100, 1).unwrap();
        let v = Vocabularies::from_corpus(&tuples, &[Task::Rep, Task::Pos]).unwrap();
        assert!(v.de.is_none());
        assert_eq!(v.pos.as_ref().unwrap().len(), RESERVED + 6);
        let missing = vec![ExampleTuple::replicate("x")];
        assert!(Vocabularies::from_corpus(&missing, &[Task::Rep, Task::De]).is_err());
    }
}
