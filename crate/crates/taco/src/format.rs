//! Format strings: whitespace-separated `-f=<name>:<modes>[:<layout>]`.

use std::fmt;

use indexmap::IndexMap;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ModeFormat {
    Dense,
    Sparse,
}

impl ModeFormat {
    pub fn letter(self) -> char {
        match self {
            ModeFormat::Dense => 'd',
            ModeFormat::Sparse => 's',
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FormatSpec {
    pub tensor: String,
    pub modes: Vec<ModeFormat>,
    /// A permutation of `0..modes.len()`.
    pub layout: Vec<usize>,
}

impl FormatSpec {
    pub fn is_all_dense(&self) -> bool {
        self.modes.iter().all(|m| *m == ModeFormat::Dense)
    }

    pub fn is_identity_layout(&self) -> bool {
        self.layout.iter().enumerate().all(|(i, &l)| i == l)
    }

    pub fn mode_string(&self) -> String {
        self.modes.iter().map(|m| m.letter()).collect()
    }
}

/// A format-string error at byte `offset` of the string.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FormatError {
    pub message: String,
    pub offset: usize,
}

impl fmt::Display for FormatError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}

impl std::error::Error for FormatError {}

fn err(message: String, offset: usize) -> FormatError {
    FormatError { message, offset }
}

fn is_ident(s: &str) -> bool {
    let mut chars = s.chars();
    chars.next().is_some_and(|c| c == '_' || c.is_ascii_alphabetic())
        && chars.all(|c| c == '_' || c.is_ascii_alphanumeric())
}

fn parse_entry(entry: &str, at: usize) -> Result<FormatSpec, FormatError> {
    let Some(rest) = entry.strip_prefix("-f=") else {
        return Err(err(format!("malformed format entry `{entry}`: expected `-f=<name>:<modes>`"), at));
    };
    let mut fields = rest.split(':');
    let name = fields.next().unwrap_or_default();
    if !is_ident(name) {
        return Err(err(format!("malformed format entry `{entry}`: bad tensor name"), at));
    }
    let Some(modes_text) = fields.next() else {
        return Err(err(format!("malformed format entry `{entry}`: missing modes"), at));
    };
    let modes = modes_text
        .chars()
        .map(|c| match c {
            'd' => Ok(ModeFormat::Dense),
            's' => Ok(ModeFormat::Sparse),
            _ => Err(err(format!("malformed format entry `{entry}`: unknown mode `{c}`"), at)),
        })
        .collect::<Result<Vec<_>, _>>()?;
    let layout = match fields.next() {
        None => (0..modes.len()).collect(),
        Some(text) => {
            let layout = text
                .split(',')
                .map(|n| n.parse::<usize>())
                .collect::<Result<Vec<_>, _>>()
                .map_err(|_| err(format!("malformed format entry `{entry}`: bad layout `{text}`"), at))?;
            let mut seen = vec![false; modes.len()];
            let is_perm = layout.len() == modes.len()
                && layout.iter().all(|&l| l < seen.len() && !std::mem::replace(&mut seen[l], true));
            if !is_perm {
                return Err(err(
                    format!("layout `{text}` of `{name}` is not a permutation of its {} modes", modes.len()),
                    at,
                ));
            }
            layout
        }
    };
    if fields.next().is_some() {
        return Err(err(format!("malformed format entry `{entry}`: too many fields"), at));
    }
    Ok(FormatSpec { tensor: name.to_string(), modes, layout })
}

/// Parses a whole format string into a map keyed by tensor name, in order
/// of appearance.
pub fn parse_format_string(text: &str) -> Result<IndexMap<String, FormatSpec>, FormatError> {
    let mut out = IndexMap::new();
    let mut pos = 0;
    for entry in text.split_ascii_whitespace() {
        let at = pos + text[pos..].find(entry).unwrap_or(0);
        pos = at + entry.len();
        let spec = parse_entry(entry, at)?;
        if out.contains_key(&spec.tensor) {
            return Err(err(format!("duplicate format entry for `{}`", spec.tensor), at));
        }
        out.insert(spec.tensor.clone(), spec);
    }
    Ok(out)
}
