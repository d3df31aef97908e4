//! Matrix files: the plain `rows cols` format with an optional leading
//! `# p=<prime>` line, or a JSON document `{"p": 3, "matrix": [[...], ...]}`.

use num_bigint::BigInt;
use serde::Deserialize;
use toroidal_core::{Error, IntMatrix, Result};

/// A parsed matrix file.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MatrixInput {
    pub matrix: IntMatrix,
    /// Prime named in the file, if any.
    pub p: Option<u64>,
}

#[derive(Deserialize)]
#[serde(untagged)]
enum Entry {
    Int(i64),
    Text(String),
}

#[derive(Deserialize)]
struct MatrixDoc {
    p: Option<u64>,
    matrix: Vec<Vec<Entry>>,
}

pub fn parse_matrix_file(text: &str) -> Result<MatrixInput> {
    if text.trim_start().starts_with('{') {
        return parse_json(text);
    }
    let mut p = None;
    let mut body = String::with_capacity(text.len());
    let mut seen_data = false;
    for (i, line) in text.lines().enumerate() {
        let trimmed = line.trim();
        if let Some(comment) = trimmed.strip_prefix('#') {
            if !seen_data {
                if let Some(v) = comment.trim().strip_prefix("p=") {
                    p = Some(v.trim().parse().map_err(|_| Error::Parse {
                        line: i + 1,
                        message: format!("bad prime {:?}", v.trim()),
                    })?);
                }
            }
            // Keep line numbers aligned for error messages.
            body.push('\n');
            continue;
        }
        if !trimmed.is_empty() {
            seen_data = true;
        }
        body.push_str(line);
        body.push('\n');
    }
    Ok(MatrixInput {
        matrix: body.parse()?,
        p,
    })
}

fn parse_json(text: &str) -> Result<MatrixInput> {
    let doc: MatrixDoc = serde_json::from_str(text).map_err(|e| Error::Parse {
        line: e.line(),
        message: e.to_string(),
    })?;
    let rows = doc
        .matrix
        .into_iter()
        .map(|row| {
            row.into_iter()
                .map(|e| match e {
                    Entry::Int(v) => Ok(BigInt::from(v)),
                    Entry::Text(s) => s.trim().parse::<BigInt>().map_err(|_| Error::Parse {
                        line: 1,
                        message: format!("bad integer {s:?}"),
                    }),
                })
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(MatrixInput {
        matrix: IntMatrix::from_rows(&rows)?,
        p: doc.p,
    })
}

/// Parse `r,s,t`.
pub fn parse_type(s: &str) -> std::result::Result<(usize, usize, usize), String> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    let [r, s, t] = parts[..] else {
        return Err(format!("expected r,s,t, got {s:?}"));
    };
    let num = |v: &str| v.parse::<usize>().map_err(|_| format!("bad count {v:?}"));
    Ok((num(r)?, num(s)?, num(t)?))
}
