//! Textual channel descriptions.

use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use polarforge_core::{BmsChannel, SymbolPair};

use crate::Error;

/// `bsc:<p>`, `bec:<e>` or `file:<path>`.
///
/// A channel file lists one conjugate pair `W(y|0) W(y'|0)` per line;
/// blank lines and text after `#` are ignored.
#[derive(Debug, Clone, PartialEq)]
pub enum ChannelSpec {
    Bsc(f64),
    Bec(f64),
    File(PathBuf),
}

impl FromStr for ChannelSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        let bad = |reason: &str| Error::ChannelSpec { spec: s.to_owned(), reason: reason.to_owned() };
        let (kind, arg) = s.split_once(':').ok_or_else(|| bad("expected `bsc:p`, `bec:e` or `file:path`"))?;
        let number = || arg.trim().parse::<f64>().map_err(|_| bad("parameter is not a number"));
        match kind.trim().to_ascii_lowercase().as_str() {
            "bsc" => Ok(ChannelSpec::Bsc(number()?)),
            "bec" => Ok(ChannelSpec::Bec(number()?)),
            "file" if !arg.is_empty() => Ok(ChannelSpec::File(PathBuf::from(arg))),
            "file" => Err(bad("missing path")),
            _ => Err(bad("unknown channel kind")),
        }
    }
}

impl fmt::Display for ChannelSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ChannelSpec::Bsc(p) => write!(f, "bsc:{p}"),
            ChannelSpec::Bec(e) => write!(f, "bec:{e}"),
            ChannelSpec::File(path) => write!(f, "file:{}", path.display()),
        }
    }
}

impl ChannelSpec {
    pub fn load(&self) -> Result<BmsChannel, Error> {
        let checked = |r: Result<BmsChannel, polarforge_core::Error>, what: &str| {
            r.map_err(|e| Error::ChannelSpec { spec: self.to_string(), reason: format!("{what}: {e}") })
        };
        match self {
            ChannelSpec::Bsc(p) => checked(BmsChannel::bsc(*p), "crossover probability p"),
            ChannelSpec::Bec(e) => checked(BmsChannel::bec(*e), "erasure probability e"),
            ChannelSpec::File(path) => read_channel_file(path),
        }
    }
}

pub fn read_channel_file(path: &Path) -> Result<BmsChannel, Error> {
    let text = fs::read_to_string(path).map_err(|source| Error::Io { path: path.to_owned(), source })?;
    let mut pairs = Vec::new();
    for (n, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let bad = |reason: &str| Error::ChannelFile { path: path.to_owned(), line: n + 1, reason: reason.to_owned() };
        let fields: Vec<&str> = line.split_whitespace().collect();
        let [a, b] = fields[..] else {
            return Err(bad("expected two numbers"));
        };
        let a: f64 = a.parse().map_err(|_| bad("not a number"))?;
        let b: f64 = b.parse().map_err(|_| bad("not a number"))?;
        pairs.push(SymbolPair::new(a, b));
    }
    BmsChannel::canonicalize(&pairs, true).map_err(|e| Error::ChannelFile {
        path: path.to_owned(),
        line: 0,
        reason: e.to_string(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_specs() {
        assert_eq!("bsc:0.11".parse::<ChannelSpec>().unwrap(), ChannelSpec::Bsc(0.11));
        assert_eq!("BEC:0.5".parse::<ChannelSpec>().unwrap(), ChannelSpec::Bec(0.5));
        assert_eq!("file:a b.txt".parse::<ChannelSpec>().unwrap(), ChannelSpec::File("a b.txt".into()));
        assert!("awgn:1".parse::<ChannelSpec>().is_err());
        assert!("bsc".parse::<ChannelSpec>().is_err());
        assert!("bsc:x".parse::<ChannelSpec>().is_err());
        let err = "bsc:1.5".parse::<ChannelSpec>().unwrap().load().unwrap_err().to_string();
        assert!(err.contains("crossover probability"), "{err}");
    }

    #[test]
    fn display_round_trips() {
        for s in ["bsc:0.11", "bec:0.5", "file:/tmp/x"] {
            assert_eq!(s.parse::<ChannelSpec>().unwrap().to_string(), s);
        }
    }

    #[test]
    fn reads_channel_files() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("w.txt");
        fs::write(&path, "# quantized AWGN\n0.1 0.4\n\n0.45 0.05  # strong\n").unwrap();
        let w = ChannelSpec::File(path.clone()).load().unwrap();
        assert_eq!(w.pairs(), &[SymbolPair::new(0.4, 0.1), SymbolPair::new(0.45, 0.05)]);

        fs::write(&path, "0.5 0.6\n").unwrap();
        assert!(read_channel_file(&path).is_err());
        fs::write(&path, "0.5\n").unwrap();
        assert!(matches!(read_channel_file(&path), Err(Error::ChannelFile { line: 1, .. })));
        assert!(matches!(read_channel_file(&dir.path().join("missing")), Err(Error::Io { .. })));
    }
}
