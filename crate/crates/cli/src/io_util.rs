//! Small input/output helpers shared by the commands.

use std::fs::File;
use std::io::{self, BufRead, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};

/// Buffered writer to a file, or stdout when no path is given.
pub fn out_writer(path: Option<&PathBuf>) -> Result<Box<dyn Write>> {
    match path {
        Some(p) => {
            let file = File::create(p).with_context(|| format!("creating {}", p.display()))?;
            Ok(Box::new(BufWriter::new(file)))
        }
        None => Ok(Box::new(io::stdout().lock())),
    }
}

pub fn open_buffered(path: &Path) -> Result<BufReader<File>> {
    let file = File::open(path).with_context(|| format!("opening {}", path.display()))?;
    Ok(BufReader::new(file))
}

/// Write a two-column count histogram as CSV.
pub fn write_histogram<W: Write>(
    mut w: W,
    value_column: &str,
    rows: impl IntoIterator<Item = (u64, u64)>,
) -> Result<()> {
    writeln!(w, "{value_column},count")?;
    for (value, count) in rows {
        writeln!(w, "{value},{count}")?;
    }
    Ok(())
}

/// Read a two-column count histogram; the header line and blank lines are
/// skipped, separators may be a comma or a tab.
pub fn read_histogram<R: BufRead>(reader: R) -> Result<Vec<(u64, u64)>> {
    let mut rows = Vec::new();
    for (i, line) in reader.lines().enumerate() {
        let line = line?;
        let trimmed = line.trim();
        if trimmed.is_empty() {
            continue;
        }
        let mut parts = trimmed.split([',', '\t']);
        let (Some(a), Some(b)) = (parts.next(), parts.next()) else {
            anyhow::bail!("line {}: expected value,count", i + 1);
        };
        match (a.trim().parse::<u64>(), b.trim().parse::<u64>()) {
            (Ok(value), Ok(count)) => rows.push((value, count)),
            _ if i == 0 => continue, // header
            _ => anyhow::bail!("line {}: expected value,count, got {trimmed:?}", i + 1),
        }
    }
    Ok(rows)
}
