//! Mod-2 tables of the sequences s_j and r_j.

use std::fmt;

use serde::Serialize;

use crate::cyclotomic::Level;
use crate::error::{Error, Result};
use crate::real_basis::{seq_r, seq_s, special_mod2, BasisElem};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum TableKind {
    S,
    R,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SeqTable {
    pub n: u32,
    pub kind: TableKind,
    pub entries: Vec<String>,
}

/// s_j mod 2 for 0 ≤ j < 2^{n-1}, each entry a single s-basis element,
/// with s_{2^{n-3}} written √2.
pub fn s_table(level: Level) -> Result<SeqTable> {
    let t = level.sqrt2_index();
    let entries = (0..level.degree() as i64)
        .map(|j| {
            let bits = special_mod2(&seq_s(level, j))?.to_s_basis_bits();
            match bits.iter_ones().collect::<Vec<_>>()[..] {
                [] => Ok("0".to_string()),
                [k] if k == t => Ok("√2".to_string()),
                [k] if k > 0 => Ok(format!("s_{k}")),
                _ => Err(Error::InternalInconsistency(format!("s_{j} is not a single basis element mod 2"))),
            }
        })
        .collect::<Result<_>>()?;
    Ok(SeqTable { n: level.n(), kind: TableKind::S, entries })
}

/// r_j mod 2 for 0 ≤ j < 2^{n-2}.
pub fn r_table(level: Level) -> Result<SeqTable> {
    let entries = (0..level.real_degree() as i64)
        .map(|j| {
            let c = special_mod2(&seq_r(level, j))?;
            match c.terms()[..] {
                [] => Ok("0".to_string()),
                [BasisElem::R(k)] => Ok(format!("r_{k}")),
                _ => Err(Error::InternalInconsistency(format!("r_{j} is not a single basis element mod 2"))),
            }
        })
        .collect::<Result<_>>()?;
    Ok(SeqTable { n: level.n(), kind: TableKind::R, entries })
}

impl fmt::Display for SeqTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self.kind {
            TableKind::S => "s",
            TableKind::R => "r",
        };
        writeln!(f, "{name}_j mod 2, 2^n = {}", 1u64 << self.n)?;
        writeln!(f, "{}", self.entries.join(" "))
    }
}
