//! RFC-4180 delimited text ingestion and export.

use std::fs::File;
use std::io::{BufReader, Read, Write};
use std::path::Path;

use flate2::read::MultiGzDecoder;

use super::{logical_text, Column, ColumnData, ColumnKind, Table, TextBuilder};
use crate::error::{Error, Result};
use crate::format::{csv_field, number_text};

#[derive(Debug, Clone, PartialEq)]
pub struct CsvOptions {
    pub delimiter: u8,
    pub has_header: bool,
    /// Cell tokens read as missing.
    pub missing_tokens: Vec<String>,
}

impl Default for CsvOptions {
    fn default() -> Self {
        Self {
            delimiter: b',',
            has_header: true,
            missing_tokens: vec![String::new(), "NA".to_string()],
        }
    }
}

impl CsvOptions {
    pub fn tsv() -> Self {
        Self {
            delimiter: b'\t',
            ..Self::default()
        }
    }
}

/// Parse delimited text into a table of raw text columns.
pub fn read_csv<R: Read>(mut source: R, options: &CsvOptions) -> Result<Table> {
    let mut bytes = Vec::new();
    source.read_to_end(&mut bytes).map_err(|e| Error::Io {
        path: "<input>".into(),
        source: e,
    })?;
    parse(&bytes, options)
}

/// Read a file, transparently decompressing `.gz`.
pub fn read_csv_path(path: impl AsRef<Path>, options: &CsvOptions) -> Result<Table> {
    let path = path.as_ref();
    let io_err = |e| Error::Io {
        path: path.display().to_string(),
        source: e,
    };
    let file = File::open(path).map_err(io_err)?;
    let mut bytes = Vec::new();
    if path.extension().is_some_and(|e| e == "gz") {
        MultiGzDecoder::new(BufReader::new(file))
            .read_to_end(&mut bytes)
            .map_err(io_err)?;
    } else {
        BufReader::new(file).read_to_end(&mut bytes).map_err(io_err)?;
    }
    parse(&bytes, options)
}

struct Record {
    line: usize,
    fields: Vec<String>,
}

struct Parser<'a> {
    input: &'a [u8],
    pos: usize,
    line: usize,
    delimiter: u8,
}

impl<'a> Parser<'a> {
    fn at_eol(&self) -> bool {
        self.pos >= self.input.len() || matches!(self.input[self.pos], b'\n' | b'\r')
    }

    fn skip_eol(&mut self) {
        if self.pos < self.input.len() && self.input[self.pos] == b'\r' {
            self.pos += 1;
        }
        if self.pos < self.input.len() && self.input[self.pos] == b'\n' {
            self.pos += 1;
        }
        self.line += 1;
    }

    fn utf8(&self, bytes: &[u8], line: usize) -> Result<String> {
        String::from_utf8(bytes.to_vec()).map_err(|_| Error::Parse {
            row: line,
            message: "invalid UTF-8".into(),
        })
    }

    /// Next record, skipping blank lines; `None` at end of input.
    fn next_record(&mut self) -> Result<Option<Record>> {
        while self.pos < self.input.len() && matches!(self.input[self.pos], b'\n' | b'\r') {
            self.skip_eol();
        }
        if self.pos >= self.input.len() {
            return Ok(None);
        }
        let start_line = self.line;
        let mut fields = Vec::new();
        loop {
            fields.push(self.field(start_line)?);
            if self.at_eol() {
                if self.pos < self.input.len() {
                    self.skip_eol();
                }
                break;
            }
            // delimiter
            self.pos += 1;
        }
        Ok(Some(Record {
            line: start_line,
            fields,
        }))
    }

    fn field(&mut self, record_line: usize) -> Result<String> {
        let input = self.input;
        if self.pos < input.len() && input[self.pos] == b'"' {
            let open_line = self.line;
            self.pos += 1;
            let mut buf = Vec::new();
            loop {
                let Some(&b) = input.get(self.pos) else {
                    return Err(Error::Parse {
                        row: open_line,
                        message: "unterminated quoted field".into(),
                    });
                };
                self.pos += 1;
                match b {
                    b'"' if input.get(self.pos) == Some(&b'"') => {
                        buf.push(b'"');
                        self.pos += 1;
                    }
                    b'"' => break,
                    b'\n' => {
                        self.line += 1;
                        buf.push(b);
                    }
                    _ => buf.push(b),
                }
            }
            if !self.at_eol() && input[self.pos] != self.delimiter {
                return Err(Error::Parse {
                    row: record_line,
                    message: "unexpected character after closing quote".into(),
                });
            }
            self.utf8(&buf, record_line)
        } else {
            let start = self.pos;
            while self.pos < input.len() {
                let b = input[self.pos];
                if b == self.delimiter || b == b'\n' || b == b'\r' {
                    break;
                }
                if b == b'"' {
                    return Err(Error::Parse {
                        row: record_line,
                        message: "quote inside unquoted field".into(),
                    });
                }
                self.pos += 1;
            }
            self.utf8(&input[start..self.pos], record_line)
        }
    }
}

fn parse(bytes: &[u8], options: &CsvOptions) -> Result<Table> {
    let bytes = bytes.strip_prefix(b"\xEF\xBB\xBF").unwrap_or(bytes);
    if bytes.iter().all(|b| b.is_ascii_whitespace()) {
        return Err(Error::EmptyInput);
    }
    let mut parser = Parser {
        input: bytes,
        pos: 0,
        line: 1,
        delimiter: options.delimiter,
    };
    let first = parser.next_record()?.ok_or(Error::EmptyInput)?;
    let width = first.fields.len();
    let mut builders: Vec<TextBuilder> = (0..width).map(|_| TextBuilder::default()).collect();
    let is_missing = |s: &str| options.missing_tokens.iter().any(|t| t == s);
    let push_row = |builders: &mut Vec<TextBuilder>, rec: Record| -> Result<()> {
        if rec.fields.len() != width {
            return Err(Error::RaggedRow {
                row: rec.line,
                found: rec.fields.len(),
                expected: width,
            });
        }
        for (b, f) in builders.iter_mut().zip(&rec.fields) {
            if is_missing(f) {
                b.push_missing();
            } else {
                b.push(f);
            }
        }
        Ok(())
    };
    let names: Vec<String> = if options.has_header {
        first.fields
    } else {
        let names = (1..=width).map(|i| format!("V{i}")).collect();
        push_row(&mut builders, first)?;
        names
    };
    while let Some(rec) = parser.next_record()? {
        push_row(&mut builders, rec)?;
    }
    let columns = names
        .into_iter()
        .zip(builders)
        .map(|(name, b)| Column::new(name, ColumnKind::Text, ColumnData::Text(b.finish())))
        .collect::<Result<Vec<_>>>()?;
    Table::new(columns)
}

/// Write a table as delimited text; missing cells become `NA`.
pub fn write_csv<W: Write>(table: &Table, mut out: W, delimiter: u8) -> std::io::Result<()> {
    let sep = [delimiter];
    let sep = std::str::from_utf8(&sep).unwrap_or(",");
    let header: Vec<String> = table
        .columns()
        .iter()
        .map(|c| csv_field(c.name(), delimiter))
        .collect();
    writeln!(out, "{}", header.join(sep))?;
    for i in 0..table.n_rows() {
        let row: Vec<String> = table
            .columns()
            .iter()
            .map(|c| match c.data() {
                ColumnData::Number(v) if v[i].is_nan() => "NA".to_string(),
                ColumnData::Number(v) => number_text(v[i]),
                ColumnData::Logical(v) => v[i].map_or("NA", logical_text).to_string(),
                _ => c
                    .cell_text(i)
                    .map_or_else(|| "NA".to_string(), |s| csv_field(&s, delimiter)),
            })
            .collect();
        writeln!(out, "{}", row.join(sep))?;
    }
    Ok(())
}
