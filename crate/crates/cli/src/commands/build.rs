use std::io::Write;

use anyhow::Result;

use crate::args::{BuildArgs, OutputFormat};
use crate::index::{BuildReport, build_index};
use crate::io_util::out_writer;

pub fn run(args: &BuildArgs) -> Result<()> {
    let (_, report) = build_index(&args.index)?;
    let mut out = out_writer(args.out.as_ref())?;
    match args.format {
        OutputFormat::Json => {
            serde_json::to_writer_pretty(&mut out, &report)?;
            writeln!(out)?;
        }
        OutputFormat::Csv => {
            writeln!(out, "{}", BuildReport::csv_header())?;
            writeln!(out, "{}", report.csv_row())?;
        }
    }
    Ok(())
}
