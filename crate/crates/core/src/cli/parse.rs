//! Plain-text system files.
//!
//! ```text
//! # comment
//! p=5
//! n=3
//! m=2
//! A=
//! 4 3 4 1 0 4
//! ...            (n*m rows of n*m integers)
//! basis=         (optional: m rows of d integers, columns are W1 basis vectors)
//! 1 1
//! 2 0
//! ```
//!
//! Entries are reduced mod p; negative entries are rejected.

use thiserror::Error;

use crate::field::PrimeField;
use crate::linalg::Matrix;
use crate::network::NetworkSystem;
use crate::Error as CoreError;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("line {line}: {msg}")]
    Syntax { line: usize, msg: String },
    #[error("line {line}: negative entry `{token}`")]
    Negative { line: usize, token: String },
    #[error("line {line}: modulus not prime (p={p})")]
    NotPrime { line: usize, p: u64 },
    #[error("line {line}: modulus {p} is too large (p must be < 2^31)")]
    ModulusTooLarge { line: usize, p: u64 },
    #[error("line {line}: duplicate field `{key}`")]
    Duplicate { line: usize, key: String },
    #[error("missing field `{0}`")]
    Missing(&'static str),
    #[error("line {line}: `{key}` must be at least 1")]
    NonPositive { line: usize, key: &'static str },
    #[error("{block}: {msg}")]
    Dimension { block: &'static str, msg: String },
}

/// A parsed system together with its optional explicit `W1` basis.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SystemFile {
    pub system: NetworkSystem,
    pub basis: Option<Matrix>,
}

#[derive(Default)]
struct Block {
    header_line: usize,
    rows: Vec<(usize, Vec<u64>)>,
}

fn parse_value(line: usize, token: &str) -> Result<u64, ParseError> {
    if token.starts_with('-') && token[1..].chars().all(|c| c.is_ascii_digit()) && token.len() > 1 {
        return Err(ParseError::Negative {
            line,
            token: token.to_string(),
        });
    }
    token.parse::<u64>().map_err(|_| ParseError::Syntax {
        line,
        msg: format!("`{token}` is not a non-negative integer"),
    })
}

fn set_scalar(
    slot: &mut Option<(usize, u64)>,
    key: &str,
    line: usize,
    value: &str,
) -> Result<(), ParseError> {
    if slot.is_some() {
        return Err(ParseError::Duplicate {
            line,
            key: key.to_string(),
        });
    }
    let v = value.trim();
    if v.is_empty() {
        return Err(ParseError::Syntax {
            line,
            msg: format!("`{key}=` needs a value"),
        });
    }
    *slot = Some((line, parse_value(line, v)?));
    Ok(())
}

pub fn parse_system(text: &str) -> Result<SystemFile, ParseError> {
    let mut p = None;
    let mut n = None;
    let mut m = None;
    let mut a: Option<Block> = None;
    let mut basis: Option<Block> = None;
    // Which block subsequent numeric rows belong to.
    #[derive(Clone, Copy)]
    enum Open {
        None,
        A,
        Basis,
    }
    let mut open = Open::None;

    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        if let Some((key, value)) = content.split_once('=') {
            let key = key.trim();
            match key {
                "p" => set_scalar(&mut p, key, line, value)?,
                "n" => set_scalar(&mut n, key, line, value)?,
                "m" => set_scalar(&mut m, key, line, value)?,
                "A" | "basis" => {
                    if !value.trim().is_empty() {
                        return Err(ParseError::Syntax {
                            line,
                            msg: format!("rows of `{key}` start on the next line"),
                        });
                    }
                    let slot = if key == "A" { &mut a } else { &mut basis };
                    if slot.is_some() {
                        return Err(ParseError::Duplicate {
                            line,
                            key: key.to_string(),
                        });
                    }
                    *slot = Some(Block {
                        header_line: line,
                        rows: Vec::new(),
                    });
                    open = if key == "A" { Open::A } else { Open::Basis };
                    continue;
                }
                other => {
                    return Err(ParseError::Syntax {
                        line,
                        msg: format!("unknown field `{other}`"),
                    })
                }
            }
            open = Open::None;
            continue;
        }
        let row = content
            .split(|c: char| c.is_whitespace() || c == ',')
            .filter(|t| !t.is_empty())
            .map(|t| parse_value(line, t))
            .collect::<Result<Vec<_>, _>>()?;
        match open {
            Open::A => a.as_mut().expect("open block").rows.push((line, row)),
            Open::Basis => basis.as_mut().expect("open block").rows.push((line, row)),
            Open::None => {
                return Err(ParseError::Syntax {
                    line,
                    msg: "matrix row outside of an `A=` or `basis=` block".into(),
                })
            }
        }
    }

    let (p_line, p) = p.ok_or(ParseError::Missing("p"))?;
    let field = PrimeField::new(p).map_err(|e| match e {
        CoreError::ModulusTooLarge(p) => ParseError::ModulusTooLarge { line: p_line, p },
        _ => ParseError::NotPrime { line: p_line, p },
    })?;
    let check_pos = |v: Option<(usize, u64)>, key: &'static str| -> Result<usize, ParseError> {
        let (line, v) = v.ok_or(ParseError::Missing(key))?;
        if v == 0 {
            return Err(ParseError::NonPositive { line, key });
        }
        usize::try_from(v).map_err(|_| ParseError::Syntax {
            line,
            msg: format!("`{key}` is too large"),
        })
    };
    let n = check_pos(n, "n")?;
    let m = check_pos(m, "m")?;
    let nm = n.checked_mul(m).ok_or(ParseError::Dimension {
        block: "A",
        msg: "n*m overflows".into(),
    })?;

    let a = a.ok_or(ParseError::Missing("A"))?;
    let a = read_block(field, &a, "A", nm, Some(nm))?;
    let system = NetworkSystem::new(n, m, a).map_err(|e| ParseError::Dimension {
        block: "A",
        msg: e.to_string(),
    })?;
    let basis = basis
        .map(|b| read_block(field, &b, "basis", m, None))
        .transpose()?;
    Ok(SystemFile { system, basis })
}

fn read_block(
    field: PrimeField,
    block: &Block,
    name: &'static str,
    rows: usize,
    cols: Option<usize>,
) -> Result<Matrix, ParseError> {
    if block.rows.len() != rows {
        return Err(ParseError::Dimension {
            block: name,
            msg: format!(
                "block starting on line {} has {} rows, expected {rows}",
                block.header_line,
                block.rows.len()
            ),
        });
    }
    let width = cols.unwrap_or_else(|| block.rows.first().map_or(0, |r| r.1.len()));
    for (line, r) in &block.rows {
        if r.len() != width {
            return Err(ParseError::Dimension {
                block: name,
                msg: format!("line {line} has {} entries, expected {width}", r.len()),
            });
        }
    }
    let data: Vec<&[u64]> = block.rows.iter().map(|(_, r)| r.as_slice()).collect();
    Ok(if data.is_empty() {
        Matrix::zeros(field, 0, 0)
    } else {
        Matrix::from_rows(field, &data).expect("widths checked")
    })
}
