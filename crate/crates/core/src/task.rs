use core::fmt;
use core::str::FromStr;

use serde::{Deserialize, Serialize};

/// A decoder's task. The declaration order is the canonical column order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Task {
    /// Reconstruct the English input.
    #[serde(rename = "REP")]
    Rep,
    /// Pseudo-German translation.
    #[serde(rename = "DE")]
    De,
    /// Pseudo-French translation.
    #[serde(rename = "FR")]
    Fr,
    /// Part-of-speech tag sequence.
    #[serde(rename = "POS")]
    Pos,
}

impl Task {
    pub const ALL: [Task; 4] = [Task::Rep, Task::De, Task::Fr, Task::Pos];

    pub fn name(self) -> &'static str {
        match self {
            Task::Rep => "REP",
            Task::De => "DE",
            Task::Fr => "FR",
            Task::Pos => "POS",
        }
    }

    /// Corpus column holding this task's target ("en" for replication).
    pub fn column(self) -> &'static str {
        match self {
            Task::Rep => "en",
            Task::De => "de",
            Task::Fr => "fr",
            Task::Pos => "pos",
        }
    }
}

impl fmt::Display for Task {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Task {
    type Err = alloc::string::String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Task::ALL
            .into_iter()
            .find(|t| t.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| alloc::format!("unknown decoder `{s}` (expected REP, DE, FR or POS)"))
    }
}
