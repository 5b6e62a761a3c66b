//! File formats, parallel drivers and the command-line front end of the
//! INSPECT probing pipeline. The computation itself lives in
//! [`inspect_core`].

pub mod convert;
pub mod corpus;
pub mod dataset;
pub mod pipeline;
pub mod render;
pub mod store;
pub mod synth;

use std::path::{Path, PathBuf};

pub use inspect_core as core;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("{path}:{line}: {message}")]
    Parse { path: PathBuf, line: usize, message: String },
    #[error("{path}: {source}")]
    Embed { path: PathBuf, source: inspect_core::embedstore::EmbedError },
    #[error("{task}: {source}")]
    Dataset { task: inspect_core::Task, source: inspect_core::taskgen::DatasetError },
    #[error("{context}: {source}")]
    Probe { context: String, source: inspect_core::probe::ProbeError },
    #[error(transparent)]
    Report(#[from] inspect_core::report::ReportError),
    #[error("{0}")]
    Invalid(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl Error {
    pub(crate) fn io(path: &Path) -> impl FnOnce(std::io::Error) -> Error + '_ {
        move |source| Error::Io { path: path.to_path_buf(), source }
    }
}
