//! Deterministic CSV assembly with round-trip-exact numbers.

use std::fmt::Write as _;
use std::io::Write as _;
use std::path::Path;

use crate::error::CliResult;

/// 17 significant digits; parses back to the identical `f64`.
pub fn num(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.16e}")
    } else {
        format!("{x}")
    }
}

pub struct Table {
    text: String,
}

impl Table {
    pub fn new(header: &[&str]) -> Self {
        let mut text = header.join(",");
        text.push('\n');
        Self { text }
    }

    pub fn row<S: AsRef<str>>(&mut self, cells: impl IntoIterator<Item = S>) {
        let mut first = true;
        for cell in cells {
            if !first {
                self.text.push(',');
            }
            first = false;
            let _ = write!(self.text, "{}", cell.as_ref());
        }
        self.text.push('\n');
    }

    pub fn as_str(&self) -> &str {
        &self.text
    }

    /// To the given file, or stdout.
    pub fn emit(&self, output: Option<&Path>) -> CliResult<()> {
        match output {
            Some(path) => std::fs::write(path, &self.text)?,
            None => {
                let mut out = std::io::stdout().lock();
                out.write_all(self.text.as_bytes())?;
                out.flush()?;
            }
        }
        Ok(())
    }
}
