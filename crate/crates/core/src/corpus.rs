//! Line-oriented input formats: corpora (`external_id<TAB>text`), query
//! sets (one whitespace-separated query per line), and ingestion helpers.

use std::io::BufRead;

use crate::error::{Error, Result};
use crate::query::Query;
use crate::segment::{Document, Segment};

/// Parse one corpus record. `line_no` is 1-based and only used for error
/// reporting.
pub fn parse_corpus_line(line: &str, line_no: u64) -> Result<Document> {
    let (external_id, text) = line.split_once('\t').ok_or_else(|| Error::Data {
        line: line_no,
        message: "expected external_id<TAB>text".into(),
    })?;
    Ok(Document::new(external_id, text))
}

/// Read a whole corpus into memory.
pub fn read_corpus<R: BufRead>(reader: R) -> Result<Vec<Document>> {
    let mut docs = Vec::new();
    for (i, line) in reader.lines().enumerate() {
        let line = line?;
        if line.is_empty() {
            continue;
        }
        docs.push(parse_corpus_line(&line, i as u64 + 1)?);
    }
    Ok(docs)
}

/// Ingest a corpus stream in file order. Returns the number of documents
/// indexed.
pub fn ingest_corpus<R: BufRead>(segment: &mut Segment, reader: R) -> Result<u64> {
    let mut count = 0u64;
    for (i, line) in reader.lines().enumerate() {
        let line = line?;
        if line.is_empty() {
            continue;
        }
        let doc = parse_corpus_line(&line, i as u64 + 1)?;
        segment.ingest_document(&doc)?;
        count += 1;
    }
    Ok(count)
}

/// Read a query file, skipping lines that tokenize to nothing.
pub fn read_queries<R: BufRead>(reader: R) -> Result<Vec<Query>> {
    let mut queries = Vec::new();
    for line in reader.lines() {
        let query = Query::parse(&line?);
        if !query.is_empty() {
            queries.push(query);
        }
    }
    Ok(queries)
}
