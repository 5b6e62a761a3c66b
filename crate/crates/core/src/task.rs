use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use serde::{Deserialize, Serialize};

/// The fifteen probing tasks, in the column order used by result tables.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Task {
    KTX,
    IDN,
    LEN,
    TYP,
    REA,
    JBL,
    SRI,
    SRK,
    SCK,
    OCU,
    VCU,
    CSC,
    MXN,
    CPX,
    NPT,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TaskFamily {
    Token,
    IncorrectCode,
    Metric,
}

impl Task {
    pub const ALL: [Task; 15] = [
        Task::KTX,
        Task::IDN,
        Task::LEN,
        Task::TYP,
        Task::REA,
        Task::JBL,
        Task::SRI,
        Task::SRK,
        Task::SCK,
        Task::OCU,
        Task::VCU,
        Task::CSC,
        Task::MXN,
        Task::CPX,
        Task::NPT,
    ];

    pub fn code(self) -> &'static str {
        match self {
            Task::KTX => "KTX",
            Task::IDN => "IDN",
            Task::LEN => "LEN",
            Task::TYP => "TYP",
            Task::REA => "REA",
            Task::JBL => "JBL",
            Task::SRI => "SRI",
            Task::SRK => "SRK",
            Task::SCK => "SCK",
            Task::OCU => "OCU",
            Task::VCU => "VCU",
            Task::CSC => "CSC",
            Task::MXN => "MXN",
            Task::CPX => "CPX",
            Task::NPT => "NPT",
        }
    }

    pub fn class_count(self) -> usize {
        match self {
            Task::KTX | Task::OCU | Task::VCU | Task::CSC | Task::CPX | Task::NPT => 10,
            Task::IDN => 4,
            Task::LEN | Task::MXN => 5,
            Task::TYP | Task::REA | Task::JBL | Task::SRI | Task::SRK | Task::SCK => 2,
        }
    }

    pub fn family(self) -> TaskFamily {
        match self {
            Task::KTX | Task::IDN | Task::LEN => TaskFamily::Token,
            Task::TYP | Task::REA | Task::JBL | Task::SRI | Task::SRK | Task::SCK => {
                TaskFamily::IncorrectCode
            }
            _ => TaskFamily::Metric,
        }
    }

    /// Accuracy of a uniform guess, in percent.
    pub fn chance_accuracy(self) -> f64 {
        100.0 / self.class_count() as f64
    }

    /// Human-readable class names, indexed by label.
    pub fn label_schema(self) -> Vec<String> {
        use alloc::format;
        use alloc::string::ToString;
        match self {
            Task::KTX => crate::lexer::KTX_CLASSES.iter().map(|c| c.name().to_string()).collect(),
            Task::IDN => ["package", "class", "method", "variable"].iter().map(|s| s.to_string()).collect(),
            Task::LEN => (0..5).map(|q| format!("length_quintile_{}", q + 1)).collect(),
            Task::OCU | Task::VCU | Task::CSC => (0..10).map(|v| format!("{v}")).collect(),
            Task::MXN => (0..5).map(|v| format!("depth_{v}")).collect(),
            Task::CPX => (1..=10).map(|v| format!("{v}")).collect(),
            Task::NPT => crate::taskgen::NPATH_BINS
                .iter()
                .map(|(lo, hi)| if lo == hi { format!("{lo}") } else { format!("{lo}-{hi}") })
                .collect(),
            _ => ["original", "mutated"].iter().map(|s| s.to_string()).collect(),
        }
    }
}

impl fmt::Display for Task {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.code())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("unknown task {0:?}")]
pub struct UnknownTask(pub String);

impl FromStr for Task {
    type Err = UnknownTask;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Task::ALL
            .into_iter()
            .find(|t| t.code().eq_ignore_ascii_case(s))
            .ok_or_else(|| UnknownTask(String::from(s)))
    }
}
