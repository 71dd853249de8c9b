//! Documents and corpus files.
//!
//! A document is its raw text, a blank line, then one clause per line.
//! Documents in a corpus file are separated by blank lines. Files that start
//! directly with a clause are read as clause-only corpora (empty raw text),
//! which is how parser output is usually written.

use std::fmt;
use std::io::{self, BufRead, Write};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::clause::{parse_clause_with, Clause, ClauseError, OperatorInventory};

#[derive(Debug, Error)]
pub enum DocumentError {
    #[error("line {line}: {source}")]
    Clause {
        line: usize,
        #[source]
        source: ClauseError,
    },
    #[error("document has no clauses")]
    EmptyDocument,
}

#[derive(Debug, Error)]
pub enum CorpusError {
    #[error("document {index}: {source}")]
    Document {
        index: usize,
        #[source]
        source: DocumentError,
    },
    #[error("id list has {ids} entries for {docs} documents")]
    IdCount { ids: usize, docs: usize },
    #[error(transparent)]
    Io(#[from] io::Error),
}

/// One document: raw text plus its clauses in file order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClausalForm {
    pub doc_id: String,
    pub raw_text: String,
    pub clauses: Vec<Clause>,
}

impl ClausalForm {
    pub fn new(doc_id: impl Into<String>, raw_text: impl Into<String>, clauses: Vec<Clause>) -> Self {
        ClausalForm {
            doc_id: doc_id.into(),
            raw_text: raw_text.into(),
            clauses,
        }
    }

    pub fn len(&self) -> usize {
        self.clauses.len()
    }

    pub fn is_empty(&self) -> bool {
        self.clauses.is_empty()
    }

    pub fn with_clauses(&self, clauses: Vec<Clause>) -> ClausalForm {
        ClausalForm {
            doc_id: self.doc_id.clone(),
            raw_text: self.raw_text.clone(),
            clauses,
        }
    }
}

/// Serializes the document block (no trailing blank line).
impl fmt::Display for ClausalForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if !self.raw_text.is_empty() {
            writeln!(f, "{}", self.raw_text)?;
            writeln!(f)?;
        }
        for clause in &self.clauses {
            writeln!(f, "{clause}")?;
        }
        Ok(())
    }
}

/// Parses one document block using the default operator inventory.
pub fn parse_document(block: &str) -> Result<ClausalForm, DocumentError> {
    parse_document_with(block, &OperatorInventory::default())
}

pub fn parse_document_with(block: &str, inventory: &OperatorInventory) -> Result<ClausalForm, DocumentError> {
    let lines: Vec<&str> = block.lines().collect();
    parse_lines(&lines, 0, "0", inventory)
}

fn is_blank(line: &str) -> bool {
    line.trim().is_empty()
}

fn is_comment(line: &str) -> bool {
    line.trim_start().starts_with('%')
}

/// `first_line` is the zero-based offset of `lines[0]` within the file, used
/// for error messages.
fn parse_lines(
    lines: &[&str],
    first_line: usize,
    doc_id: &str,
    inventory: &OperatorInventory,
) -> Result<ClausalForm, DocumentError> {
    let mut i = 0;
    while i < lines.len() && is_blank(lines[i]) {
        i += 1;
    }
    let mut raw = Vec::new();
    let clause_only = i < lines.len() && (is_comment(lines[i]) || parse_clause_with(lines[i], inventory).is_ok());
    if !clause_only {
        while i < lines.len() && !is_blank(lines[i]) {
            raw.push(lines[i].trim());
            i += 1;
        }
    }
    let mut clauses = Vec::new();
    for (offset, line) in lines.iter().enumerate().skip(i) {
        if is_blank(line) || is_comment(line) {
            continue;
        }
        let clause = parse_clause_with(line, inventory).map_err(|source| DocumentError::Clause {
            line: first_line + offset + 1,
            source,
        })?;
        clauses.push(clause);
    }
    if clauses.is_empty() {
        return Err(DocumentError::EmptyDocument);
    }
    Ok(ClausalForm::new(doc_id, raw.join("\n"), clauses))
}

/// Reads a corpus with the default operator inventory.
pub fn read_corpus<R: BufRead>(reader: R) -> Result<Vec<ClausalForm>, CorpusError> {
    read_corpus_with(reader, &OperatorInventory::default())
}

pub fn read_corpus_with<R: BufRead>(reader: R, inventory: &OperatorInventory) -> Result<Vec<ClausalForm>, CorpusError> {
    let lines = reader.lines().collect::<io::Result<Vec<String>>>()?;
    let lines: Vec<&str> = lines.iter().map(String::as_str).collect();
    parse_corpus_str(&lines, inventory)
}

/// Parses a corpus held in memory.
pub fn parse_corpus(text: &str) -> Result<Vec<ClausalForm>, CorpusError> {
    let lines: Vec<&str> = text.lines().collect();
    parse_corpus_str(&lines, &OperatorInventory::default())
}

fn parse_corpus_str(lines: &[&str], inventory: &OperatorInventory) -> Result<Vec<ClausalForm>, CorpusError> {
    let blocks = split_blocks(lines, inventory);
    blocks
        .into_iter()
        .enumerate()
        .map(|(index, (start, end))| {
            parse_lines(&lines[start..end], start, &index.to_string(), inventory)
                .map_err(|source| CorpusError::Document { index, source })
        })
        .collect()
}

/// Document boundaries as half-open line ranges.
fn split_blocks(lines: &[&str], inventory: &OperatorInventory) -> Vec<(usize, usize)> {
    let n = lines.len();
    let parses = |i: usize| is_comment(lines[i]) || parse_clause_with(lines[i], inventory).is_ok();
    let skip_blank = |mut i: usize| {
        while i < n && is_blank(lines[i]) {
            i += 1;
        }
        i
    };
    let skip_block = |mut i: usize| {
        while i < n && !is_blank(lines[i]) {
            i += 1;
        }
        i
    };

    let mut blocks = Vec::new();
    let mut i = skip_blank(0);
    if i >= n {
        return blocks;
    }
    if parses(i) {
        // clause-only corpus: every blank-separated block is a document
        while i < n {
            let end = skip_block(i);
            blocks.push((i, end));
            i = skip_blank(end);
        }
        return blocks;
    }
    while i < n {
        let start = i;
        // raw text, then the first clause group which always belongs to it
        i = skip_block(i);
        i = skip_blank(i);
        i = skip_block(i);
        // further clause groups after blank lines, until a line that is not a clause
        loop {
            let next = skip_blank(i);
            if next >= n || !parses(next) {
                blocks.push((start, i));
                i = next;
                break;
            }
            i = skip_block(next);
        }
    }
    blocks
}

/// Writes documents separated by blank lines.
pub fn write_corpus<W: Write>(mut out: W, docs: &[ClausalForm]) -> io::Result<()> {
    for (i, doc) in docs.iter().enumerate() {
        if i > 0 {
            writeln!(out)?;
        }
        write!(out, "{doc}")?;
    }
    Ok(())
}

pub fn corpus_to_string(docs: &[ClausalForm]) -> String {
    let mut buf = Vec::new();
    write_corpus(&mut buf, docs).expect("writing to a Vec cannot fail");
    String::from_utf8(buf).expect("clauses are UTF-8")
}

/// Overrides sequential document ids with a sidecar list, one id per line.
pub fn apply_ids(docs: &mut [ClausalForm], ids: &str) -> Result<(), CorpusError> {
    let ids: Vec<&str> = ids.lines().map(str::trim).filter(|l| !l.is_empty()).collect();
    if ids.len() != docs.len() {
        return Err(CorpusError::IdCount {
            ids: ids.len(),
            docs: docs.len(),
        });
    }
    for (doc, id) in docs.iter_mut().zip(ids) {
        doc.doc_id = id.to_string();
    }
    Ok(())
}

/// Whether the ids are the sequential defaults `0..n`.
pub fn has_default_ids(docs: &[ClausalForm]) -> bool {
    docs.iter().enumerate().all(|(i, d)| d.doc_id == i.to_string())
}
