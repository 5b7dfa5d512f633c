mod compare;
mod equiv;
mod sample;
mod simulate;

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use serde::Serialize;

pub use compare::compare;
pub use equiv::{bundled_cases, mixture_equiv};
pub use sample::sample;
pub use simulate::simulate;

use crate::error::{CliError, EXIT_GATE, EXIT_OK};

/// Result of a command that ran to completion.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub code: u8,
    pub summary: String,
    /// Files written, relative to the output directory.
    pub files: Vec<String>,
}

impl Outcome {
    pub(crate) fn gate(passed: bool, summary: String, files: Vec<String>) -> Self {
        Self {
            code: if passed { EXIT_OK } else { EXIT_GATE },
            summary,
            files,
        }
    }
}

/// Output directory plus the list of files written into it, in order.
pub(crate) struct OutDir {
    root: PathBuf,
    pub files: Vec<String>,
}

impl OutDir {
    pub fn create(root: &Path) -> Result<Self, CliError> {
        std::fs::create_dir_all(root)?;
        Ok(Self {
            root: root.to_path_buf(),
            files: Vec::new(),
        })
    }

    pub fn writer(&mut self, name: &str) -> Result<BufWriter<File>, CliError> {
        self.files.push(name.to_string());
        Ok(BufWriter::new(File::create(self.root.join(name))?))
    }

    pub fn text(&mut self, name: &str, body: &str) -> Result<(), CliError> {
        let mut w = self.writer(name)?;
        w.write_all(body.as_bytes())?;
        w.flush()?;
        Ok(())
    }

    pub fn json<T: Serialize>(&mut self, name: &str, value: &T) -> Result<(), CliError> {
        let mut body = serde_json::to_string_pretty(value)?;
        body.push('\n');
        self.text(name, &body)
    }
}

/// Writes `failure.json` next to the partial outputs and passes the error on.
pub(crate) fn dump_failure(out: &mut OutDir, context: &str, err: CliError) -> CliError {
    #[derive(Serialize)]
    struct Failure<'a> {
        context: &'a str,
        error: String,
        exit_code: u8,
    }
    let f = Failure {
        context,
        error: err.to_string(),
        exit_code: err.code(),
    };
    if let Err(e) = out.json("failure.json", &f) {
        log::error!("could not write failure dump: {e}");
    }
    err
}
