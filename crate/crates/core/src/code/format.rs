//! Plain-text code files: one `{0,1}` word per line, `#` comments, blank
//! lines ignored.

use super::word::{format_word, parse_word, BinaryCode};
use crate::error::{Error, Result};

pub fn parse_code_file(text: &str) -> Result<BinaryCode> {
    let mut n = None;
    let mut words = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (word, len) = parse_word(line).map_err(|e| match e {
            Error::Parse { message, .. } => Error::Parse { line: i + 1, message },
            other => other,
        })?;
        match n {
            None => n = Some(len),
            Some(m) if m != len => {
                return Err(Error::Parse { line: i + 1, message: format!("word has length {len}, expected {m}") })
            }
            _ => {}
        }
        words.push(word);
    }
    let n = n.ok_or(Error::EmptyCode)?;
    BinaryCode::new(n, words).map_err(|e| match e {
        Error::DuplicateWord(w) => Error::Parse { line: 0, message: format!("duplicate word {w}") },
        other => other,
    })
}

pub fn format_code_file(code: &BinaryCode) -> String {
    let mut out = String::new();
    for &w in code.words() {
        out.push_str(&format_word(w, code.word_length()));
        out.push('\n');
    }
    out
}
