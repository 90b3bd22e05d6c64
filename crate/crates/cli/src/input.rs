use std::fmt;
use std::io::Read;

use ramification::formats::{parse_coefficients, parse_depth_function, parse_multiset, parse_polynomial};
use ramification::newton::depth_multiset_from_polynomial;
use ramification::presets::preset;
use ramification::rat::parse_rat;
use ramification::{DepthFunction, DepthMultiset, EisensteinPoly, Rat};

use crate::Source;

/// Anything that ends the run with exit code 2.
#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Io(String),
    Lib(ramification::Error),
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "usage: {m}"),
            CliError::Io(m) => f.write_str(m),
            CliError::Lib(e) => write!(f, "{e}"),
        }
    }
}

impl From<ramification::Error> for CliError {
    fn from(e: ramification::Error) -> Self {
        CliError::Lib(e)
    }
}

pub type CliResult<T> = Result<T, CliError>;

pub fn usage<T>(msg: impl Into<String>) -> CliResult<T> {
    Err(CliError::Usage(msg.into()))
}

/// File contents, or standard input for `-`.
pub fn read_text(path: &str) -> CliResult<String> {
    if path == "-" {
        let mut s = String::new();
        std::io::stdin()
            .read_to_string(&mut s)
            .map_err(|e| CliError::Io(format!("stdin: {e}")))?;
        Ok(s)
    } else {
        std::fs::read_to_string(path).map_err(|e| CliError::Io(format!("{path}: {e}")))
    }
}

pub fn read_bytes(path: &str) -> CliResult<Vec<u8>> {
    if path == "-" {
        let mut buf = Vec::new();
        std::io::stdin()
            .read_to_end(&mut buf)
            .map_err(|e| CliError::Io(format!("stdin: {e}")))?;
        Ok(buf)
    } else {
        std::fs::read(path).map_err(|e| CliError::Io(format!("{path}: {e}")))
    }
}

pub fn rat_arg(s: &str) -> CliResult<Rat> {
    Ok(parse_rat(s.trim())?)
}

/// Indices separated by spaces or commas.
pub fn index_list(s: &str) -> CliResult<Vec<usize>> {
    s.split(|c: char| c == ',' || c.is_whitespace())
        .filter(|t| !t.is_empty())
        .map(|t| {
            t.parse::<usize>()
                .map_err(|_| CliError::Usage(format!("bad index `{t}`")))
        })
        .collect()
}

/// A polynomial from `--poly` with `--p`, or from a `p; c0 ...` file.
pub fn polynomial(p: Option<u64>, coeffs: Option<&str>, file: Option<&str>) -> CliResult<EisensteinPoly> {
    match (coeffs, file) {
        (Some(c), None) => {
            let p = p.ok_or_else(|| CliError::Usage("--poly needs --p".into()))?;
            Ok(EisensteinPoly::new(parse_coefficients(c)?, p)?)
        }
        (None, Some(path)) => Ok(parse_polynomial(&read_text(path)?)?),
        _ => usage("give exactly one of --poly or --poly-file/--file"),
    }
}

/// Resolved depth data.
pub struct Resolved {
    pub label: String,
    pub multiset: DepthMultiset,
    pub function: Option<DepthFunction>,
}

impl Source {
    pub fn is_given(&self) -> bool {
        self.preset.is_some()
            || self.multiset.is_some()
            || self.group.is_some()
            || self.poly.is_some()
            || self.poly_file.is_some()
    }

    pub fn resolve(&self) -> CliResult<Resolved> {
        let given = [
            self.preset.is_some(),
            self.multiset.is_some(),
            self.group.is_some(),
            self.poly.is_some(),
            self.poly_file.is_some(),
        ]
        .iter()
        .filter(|&&b| b)
        .count();
        if given != 1 {
            return usage("give exactly one of --preset, --multiset, --group, --poly, --poly-file");
        }
        if let Some(name) = &self.preset {
            let p = preset(name)?;
            return Ok(Resolved {
                label: p.name,
                multiset: p.multiset,
                function: p.function,
            });
        }
        if let Some(path) = &self.multiset {
            let multiset = parse_multiset(&read_text(path)?, self.p, self.e)?;
            return Ok(Resolved {
                label: path.clone(),
                multiset,
                function: None,
            });
        }
        if let Some(path) = &self.group {
            let g = parse_depth_function(&read_text(path)?)?;
            return Ok(Resolved {
                label: path.clone(),
                multiset: g.multiset(),
                function: Some(g),
            });
        }
        let f = polynomial(self.p, self.poly.as_deref(), self.poly_file.as_deref())?;
        let n = f.degree() as u64;
        let per_root = depth_multiset_from_polynomial(&f, false)?.per_root();
        Ok(Resolved {
            label: ramification::formats::polynomial_text(&f),
            multiset: DepthMultiset::new(per_root, self.e.unwrap_or(n), f.p())?,
            function: None,
        })
    }
}
