//! OEIS reference prefixes in b-file format ("index value" per line, `#`
//! comments). The bundled files hold only the terms quoted alongside the
//! construction; longer files can be supplied with `--bfile`.

use std::fs;
use std::path::Path;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ReferenceError {
    #[error("{file}:{line}: {message}")]
    Malformed {
        file: String,
        line: usize,
        message: String,
    },
    #[error("cannot read {path}: {message}")]
    Io { path: String, message: String },
    #[error("cannot infer an OEIS id from {0}; expected a name like b005836.txt")]
    UnknownId(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReferenceSequence {
    pub id: String,
    pub terms: Vec<(u64, u64)>,
    pub source: String,
}

impl ReferenceSequence {
    pub fn offset(&self) -> Option<u64> {
        self.terms.first().map(|&(i, _)| i)
    }

    pub fn values(&self) -> impl Iterator<Item = u64> + '_ {
        self.terms.iter().map(|&(_, v)| v)
    }
}

const BUNDLED: [(&str, &str); 4] = [
    ("A024629", include_str!("../assets/b024629.txt")),
    ("A005836", include_str!("../assets/b005836.txt")),
    ("A323398", include_str!("../assets/b323398.txt")),
    ("A265316", include_str!("../assets/b265316.txt")),
];

pub fn parse_bfile(id: &str, text: &str, source: &str) -> Result<ReferenceSequence, ReferenceError> {
    let malformed = |line: usize, message: String| ReferenceError::Malformed {
        file: source.to_string(),
        line,
        message,
    };
    let mut terms: Vec<(u64, u64)> = Vec::new();
    for (k, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let mut fields = line.split_whitespace();
        let (Some(index), Some(value), None) = (fields.next(), fields.next(), fields.next()) else {
            return Err(malformed(k + 1, format!("expected \"index value\", got {line:?}")));
        };
        let index: u64 = index
            .parse()
            .map_err(|_| malformed(k + 1, format!("bad index {index:?}")))?;
        let value: u64 = value
            .parse()
            .map_err(|_| malformed(k + 1, format!("bad value {value:?}")))?;
        if let Some(&(prev, _)) = terms.last() {
            if index != prev + 1 {
                return Err(malformed(k + 1, format!("index {index} does not follow {prev}")));
            }
        }
        terms.push((index, value));
    }
    Ok(ReferenceSequence {
        id: id.to_string(),
        terms,
        source: source.to_string(),
    })
}

pub fn bundled(id: &str) -> Option<ReferenceSequence> {
    BUNDLED.iter().find(|(name, _)| *name == id).map(|(name, text)| {
        parse_bfile(name, text, &format!("bundled:{name}")).expect("bundled b-files are well formed")
    })
}

pub fn bundled_all() -> Vec<ReferenceSequence> {
    BUNDLED.iter().filter_map(|(id, _)| bundled(id)).collect()
}

/// Reads a b-file named `bNNNNNN.txt`; the id is taken from the name.
pub fn load_bfile(path: &Path) -> Result<ReferenceSequence, ReferenceError> {
    let display = path.display().to_string();
    let name = path.file_name().and_then(|n| n.to_str()).unwrap_or_default();
    let id = name
        .strip_prefix('b')
        .and_then(|rest| rest.strip_suffix(".txt"))
        .filter(|digits| digits.len() == 6 && digits.bytes().all(|b| b.is_ascii_digit()))
        .map(|digits| format!("A{digits}"))
        .ok_or_else(|| ReferenceError::UnknownId(display.clone()))?;
    let text = fs::read_to_string(path).map_err(|e| ReferenceError::Io {
        path: display.clone(),
        message: e.to_string(),
    })?;
    parse_bfile(&id, &text, &display)
}

/// Bundled sequences with any user-supplied files replacing those of the
/// same id.
pub fn resolve(overrides: &[ReferenceSequence]) -> Vec<ReferenceSequence> {
    let mut out = bundled_all();
    for seq in overrides {
        match out.iter_mut().find(|s| s.id == seq.id) {
            Some(slot) => *slot = seq.clone(),
            None => out.push(seq.clone()),
        }
    }
    out
}
