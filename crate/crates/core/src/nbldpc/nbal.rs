//! Text format for weighted parity-check matrices.
//!
//! ```text
//! q L M
//! var:weight var:weight ...     (one line per check, weights in hex)
//! ```

use std::fmt::Write as _;
use std::path::Path;

use super::code::{Edge, NbLdpcCode};
use crate::error::{Error, Result};
use crate::gf::{GfField, GfSymbol};

/// Serializes the parity-check matrix of `code`.
pub fn to_nbal(code: &NbLdpcCode) -> String {
    let q = code.field().q();
    let width = (code.field().p() as usize).div_ceil(4);
    let mut out = format!("{} {} {}\n", q, code.len(), code.num_checks());
    for row in code.checks() {
        let line: Vec<String> = row
            .iter()
            .map(|e| format!("{}:{:0width$x}", e.var, e.weight.value(), width = width))
            .collect();
        let _ = writeln!(out, "{}", line.join(" "));
    }
    out
}

/// Parses an nbal document. The field polynomial is the built-in one for
/// the degree unless `field` is supplied.
pub fn from_nbal(text: &str, field: Option<&GfField>) -> Result<NbLdpcCode> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty());
    let (hline, header) = lines.next().ok_or(Error::Parse {
        line: 1,
        msg: "empty file".into(),
    })?;
    let nums: Vec<usize> = header
        .split_whitespace()
        .map(|t| t.parse::<usize>())
        .collect::<std::result::Result<_, _>>()
        .map_err(|e| Error::Parse {
            line: hline,
            msg: format!("bad header: {e}"),
        })?;
    let [q, len, m] = nums[..] else {
        return Err(Error::Parse {
            line: hline,
            msg: "header must be `q L M`".into(),
        });
    };
    if !q.is_power_of_two() || q < 4 {
        return Err(Error::Parse {
            line: hline,
            msg: format!("q={q} is not a supported power of two"),
        });
    }
    let field = match field {
        Some(f) if f.q() == q => f.clone(),
        Some(f) => {
            return Err(Error::Parse {
                line: hline,
                msg: format!("file q={q} does not match field order {}", f.q()),
            })
        }
        None => GfField::with_degree(q.trailing_zeros()).map_err(|e| Error::Parse {
            line: hline,
            msg: e.to_string(),
        })?,
    };

    let mut checks = Vec::with_capacity(m);
    for (lineno, line) in lines {
        if checks.len() == m {
            return Err(Error::Parse {
                line: lineno,
                msg: format!("more than {m} check rows"),
            });
        }
        let mut row = Vec::new();
        for tok in line.split_whitespace() {
            let bad = |msg: String| Error::Parse { line: lineno, msg };
            let (v, w) = tok
                .split_once(':')
                .ok_or_else(|| bad(format!("expected var:weight, got `{tok}`")))?;
            let var: usize = v.parse().map_err(|_| bad(format!("bad variable `{v}`")))?;
            let weight = usize::from_str_radix(w, 16).map_err(|_| bad(format!("bad weight `{w}`")))?;
            if var >= len {
                return Err(bad(format!("variable {var} out of range 0..{len}")));
            }
            if weight == 0 || weight >= q {
                return Err(bad(format!("weight {weight:#x} must lie in 1..{q}")));
            }
            row.push(Edge {
                var,
                weight: GfSymbol::new(weight as u16),
            });
        }
        checks.push(row);
    }
    if checks.len() != m {
        return Err(Error::Parse {
            line: 0,
            msg: format!("expected {m} check rows, found {}", checks.len()),
        });
    }
    NbLdpcCode::from_checks(field, len, checks)
}

pub fn load_nbal(path: impl AsRef<Path>, field: Option<&GfField>) -> Result<NbLdpcCode> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    from_nbal(&text, field)
}

pub fn save_nbal(code: &NbLdpcCode, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    std::fs::write(path, to_nbal(code)).map_err(|e| Error::io(path, e))
}
