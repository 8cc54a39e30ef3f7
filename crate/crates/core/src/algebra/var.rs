use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// An indeterminate. Variants are ordered x < y < z < z_i, which is the
/// canonical print order of linear forms.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub enum VarId {
    /// Descent weight x_i, i in [n-1].
    X(u8),
    /// Inversion weight y_{i,j}, i < j.
    Y(u8, u8),
    /// Fixed-point weight z.
    Z,
    /// Per-point fixed weight z_i, used only by the mfix statistic.
    ZI(u8),
}

impl VarId {
    pub fn x(i: usize) -> VarId {
        assert!((1..256).contains(&i), "x index out of range");
        VarId::X(i as u8)
    }

    /// y_{i,j}; panics unless i < j.
    pub fn y(i: usize, j: usize) -> VarId {
        assert!(i >= 1 && i < j && j < 256, "y_{{{i},{j}}} requires 1 <= i < j");
        VarId::Y(i as u8, j as u8)
    }

    pub fn zi(i: usize) -> VarId {
        assert!((1..256).contains(&i), "z_i index out of range");
        VarId::ZI(i as u8)
    }

    /// Whether the variable belongs to the universe of degree `n`.
    pub fn valid_for(&self, n: usize) -> bool {
        match *self {
            VarId::X(i) => (i as usize) < n && i >= 1,
            VarId::Y(i, j) => i >= 1 && i < j && (j as usize) <= n,
            VarId::Z => true,
            VarId::ZI(i) => i >= 1 && (i as usize) <= n,
        }
    }
}

impl fmt::Display for VarId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            VarId::X(i) => write!(f, "x[{i}]"),
            VarId::Y(i, j) => write!(f, "y[{i},{j}]"),
            VarId::Z => write!(f, "z"),
            VarId::ZI(i) => write!(f, "z[{i}]"),
        }
    }
}

impl FromStr for VarId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Parse(format!("invalid variable {s:?}"));
        let s = s.trim();
        if s == "z" {
            return Ok(VarId::Z);
        }
        let (head, rest) = s.split_at(1);
        let inner = rest
            .strip_prefix('[')
            .and_then(|r| r.strip_suffix(']'))
            .ok_or_else(bad)?;
        let idx: Vec<u8> = inner
            .split(',')
            .map(|t| t.trim().parse::<u8>().map_err(|_| bad()))
            .collect::<Result<_>>()?;
        match (head, idx.as_slice()) {
            ("x", [i]) if *i >= 1 => Ok(VarId::X(*i)),
            ("y", [i, j]) if *i >= 1 && i < j => Ok(VarId::Y(*i, *j)),
            ("z", [i]) if *i >= 1 => Ok(VarId::ZI(*i)),
            _ => Err(bad()),
        }
    }
}
