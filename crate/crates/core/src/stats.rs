//! Descent, inversion and fixed-point sets and their multinomial statistics.

use std::fmt;
use std::str::FromStr;

use crate::algebra::{LinForm, Rational, VarId};
use crate::error::{Error, Result};
use crate::perm::{enumerate, Permutation};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum StatKind {
    /// `Σ_{i ∈ Des σ} x_i`
    DesX,
    /// `Σ_{(i,j) ∈ Inv σ} y_{i,j}`
    InvY,
    /// `#Fix(σ)·z`
    FixZ,
    /// `Σ_{i ∈ Fix σ} z_i`
    Mfix,
    DesXPlusInvYPlusFixZ,
    InvYPlusFixZ,
    /// Scalar `maj + inv + fix`.
    MajPlusInvPlusFix,
}

impl StatKind {
    pub const ALL: [StatKind; 7] = [
        StatKind::DesX,
        StatKind::InvY,
        StatKind::FixZ,
        StatKind::Mfix,
        StatKind::DesXPlusInvYPlusFixZ,
        StatKind::InvYPlusFixZ,
        StatKind::MajPlusInvPlusFix,
    ];

    pub fn name(self) -> &'static str {
        match self {
            StatKind::DesX => "DES_X",
            StatKind::InvY => "INV_Y",
            StatKind::FixZ => "FIX_Z",
            StatKind::Mfix => "MFIX",
            StatKind::DesXPlusInvYPlusFixZ => "DES_X_PLUS_INV_Y_PLUS_FIX_Z",
            StatKind::InvYPlusFixZ => "INV_Y_PLUS_FIX_Z",
            StatKind::MajPlusInvPlusFix => "MAJ_PLUS_INV_PLUS_FIX",
        }
    }
}

impl fmt::Display for StatKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for StatKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        StatKind::ALL
            .into_iter()
            .find(|k| k.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::Parse(format!("unknown statistic {s:?}")))
    }
}

/// `{i ∈ [n-1] : σ(i) > σ(i+1)}`
pub fn des_set(s: &Permutation) -> Vec<usize> {
    (1..s.n()).filter(|&i| s.apply(i) > s.apply(i + 1)).collect()
}

/// `{(i, j) : i < j, σ(i) > σ(j)}`
pub fn inv_set(s: &Permutation) -> Vec<(usize, usize)> {
    let n = s.n();
    let mut out = Vec::new();
    for i in 1..=n {
        for j in i + 1..=n {
            if s.apply(i) > s.apply(j) {
                out.push((i, j));
            }
        }
    }
    out
}

pub fn fix_set(s: &Permutation) -> Vec<usize> {
    s.fixed_points().collect()
}

pub fn maj(s: &Permutation) -> usize {
    des_set(s).into_iter().sum()
}

pub fn stat_value(kind: StatKind, s: &Permutation) -> LinForm {
    let one = Rational::one;
    match kind {
        StatKind::DesX => LinForm::from_terms(des_set(s).into_iter().map(|i| (VarId::x(i), one())), Rational::zero()),
        StatKind::InvY => {
            LinForm::from_terms(inv_set(s).into_iter().map(|(i, j)| (VarId::y(i, j), one())), Rational::zero())
        }
        StatKind::FixZ => LinForm::term(VarId::Z, s.fix_count() as i64),
        StatKind::Mfix => LinForm::from_terms(s.fixed_points().map(|i| (VarId::zi(i), one())), Rational::zero()),
        StatKind::InvYPlusFixZ => &stat_value(StatKind::InvY, s) + &stat_value(StatKind::FixZ, s),
        StatKind::DesXPlusInvYPlusFixZ => &stat_value(StatKind::DesX, s) + &stat_value(StatKind::InvYPlusFixZ, s),
        StatKind::MajPlusInvPlusFix => LinForm::constant((maj(s) + inv_set(s).len() + s.fix_count()) as i64),
    }
}

/// `Σ_σ stat_value(kind, σ)` by enumeration.
pub fn stat_total(kind: StatKind, n: usize) -> Result<LinForm> {
    Ok(enumerate(n)?.iter().map(|s| stat_value(kind, s)).sum())
}

/// `Σ_{i<j} y_{i,j}`
pub fn sum_y(n: usize) -> LinForm {
    LinForm::from_terms(
        (1..=n).flat_map(|i| (i + 1..=n).map(move |j| (VarId::y(i, j), Rational::one()))),
        Rational::zero(),
    )
}
