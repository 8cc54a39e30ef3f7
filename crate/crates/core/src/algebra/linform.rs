use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Neg, Sub, SubAssign};
use std::str::FromStr;

use super::{Assignment, Rational, VarId};
use crate::error::{Error, Result};

/// Sparse rational linear form `c + sum_v a_v * v`.
///
/// Terms are kept sorted by variable and never carry a zero coefficient, so
/// structural equality is numeric equality.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct LinForm {
    terms: Vec<(VarId, Rational)>,
    constant: Rational,
}

impl LinForm {
    pub fn zero() -> Self {
        LinForm::default()
    }

    pub fn constant(c: impl Into<Rational>) -> Self {
        LinForm { terms: Vec::new(), constant: c.into() }
    }

    pub fn var(v: VarId) -> Self {
        Self::term(v, Rational::one())
    }

    pub fn term(v: VarId, c: impl Into<Rational>) -> Self {
        let c = c.into();
        if c.is_zero() {
            return LinForm::zero();
        }
        LinForm { terms: vec![(v, c)], constant: Rational::zero() }
    }

    /// Builds a form from possibly repeated, unsorted terms.
    pub fn from_terms<I>(terms: I, constant: Rational) -> Self
    where
        I: IntoIterator<Item = (VarId, Rational)>,
    {
        let mut acc: BTreeMap<VarId, Rational> = BTreeMap::new();
        for (v, c) in terms {
            *acc.entry(v).or_default() += c;
        }
        LinForm {
            terms: acc.into_iter().filter(|(_, c)| !c.is_zero()).collect(),
            constant,
        }
    }

    pub fn terms(&self) -> &[(VarId, Rational)] {
        &self.terms
    }

    pub fn constant_term(&self) -> &Rational {
        &self.constant
    }

    pub fn coeff(&self, v: VarId) -> Rational {
        match self.terms.binary_search_by(|(w, _)| w.cmp(&v)) {
            Ok(i) => self.terms[i].1.clone(),
            Err(_) => Rational::zero(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty() && self.constant.is_zero()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn vars(&self) -> impl Iterator<Item = VarId> + '_ {
        self.terms.iter().map(|(v, _)| *v)
    }

    pub fn scale(&self, k: &Rational) -> LinForm {
        if k.is_zero() {
            return LinForm::zero();
        }
        LinForm {
            terms: self.terms.iter().map(|(v, c)| (*v, c * k)).collect(),
            constant: &self.constant * k,
        }
    }

    fn merge(&self, other: &LinForm, sign: &Rational) -> LinForm {
        let mut terms = Vec::with_capacity(self.terms.len() + other.terms.len());
        let (mut i, mut j) = (0, 0);
        while i < self.terms.len() || j < other.terms.len() {
            let take_left = j >= other.terms.len()
                || (i < self.terms.len() && self.terms[i].0 < other.terms[j].0);
            let take_right = i >= self.terms.len()
                || (j < other.terms.len() && other.terms[j].0 < self.terms[i].0);
            if take_left {
                terms.push(self.terms[i].clone());
                i += 1;
            } else if take_right {
                terms.push((other.terms[j].0, &other.terms[j].1 * sign));
                j += 1;
            } else {
                let c = &self.terms[i].1 + &(&other.terms[j].1 * sign);
                if !c.is_zero() {
                    terms.push((self.terms[i].0, c));
                }
                i += 1;
                j += 1;
            }
        }
        LinForm { terms, constant: &self.constant + &(&other.constant * sign) }
    }

    /// Replaces `v` by `replacement` everywhere.
    pub fn substitute(&self, v: VarId, replacement: &LinForm) -> LinForm {
        let c = self.coeff(v);
        if c.is_zero() {
            return self.clone();
        }
        let rest = LinForm {
            terms: self.terms.iter().filter(|(w, _)| *w != v).cloned().collect(),
            constant: self.constant.clone(),
        };
        rest + replacement.scale(&c)
    }

    /// Evaluates the form; every variable must be assigned.
    pub fn eval(&self, a: &Assignment) -> Result<Rational> {
        let mut acc = self.constant.clone();
        for (v, c) in &self.terms {
            let value = a.get(*v).ok_or(Error::MissingVariable(*v))?;
            acc += c * value;
        }
        Ok(acc)
    }
}

impl Add<&LinForm> for &LinForm {
    type Output = LinForm;
    fn add(self, rhs: &LinForm) -> LinForm {
        self.merge(rhs, &Rational::one())
    }
}

impl Add for LinForm {
    type Output = LinForm;
    fn add(self, rhs: LinForm) -> LinForm {
        self.merge(&rhs, &Rational::one())
    }
}

impl Sub<&LinForm> for &LinForm {
    type Output = LinForm;
    fn sub(self, rhs: &LinForm) -> LinForm {
        self.merge(rhs, &Rational::from_int(-1))
    }
}

impl Sub for LinForm {
    type Output = LinForm;
    fn sub(self, rhs: LinForm) -> LinForm {
        self.merge(&rhs, &Rational::from_int(-1))
    }
}

impl AddAssign<&LinForm> for LinForm {
    fn add_assign(&mut self, rhs: &LinForm) {
        *self = self.merge(rhs, &Rational::one());
    }
}

impl SubAssign<&LinForm> for LinForm {
    fn sub_assign(&mut self, rhs: &LinForm) {
        *self = self.merge(rhs, &Rational::from_int(-1));
    }
}

impl Neg for &LinForm {
    type Output = LinForm;
    fn neg(self) -> LinForm {
        self.scale(&Rational::from_int(-1))
    }
}

impl std::iter::Sum for LinForm {
    fn sum<I: Iterator<Item = LinForm>>(iter: I) -> Self {
        iter.fold(LinForm::zero(), |acc, x| acc + x)
    }
}

fn write_signed(
    f: &mut fmt::Formatter<'_>,
    first: bool,
    c: &Rational,
    body: Option<&dyn fmt::Display>,
) -> fmt::Result {
    let neg = c.is_negative();
    let mag = c.abs();
    match (first, neg) {
        (true, true) => write!(f, "-")?,
        (true, false) => {}
        (false, true) => write!(f, " - ")?,
        (false, false) => write!(f, " + ")?,
    }
    match body {
        Some(b) if mag.is_one() => write!(f, "{b}"),
        Some(b) => write!(f, "{mag}*{b}"),
        None => write!(f, "{mag}"),
    }
}

/// Canonical form: terms in variable order, constant last, unit
/// coefficients omitted, e.g. `3*y[1,2] - y[1,3] + 6*z`.
impl fmt::Display for LinForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (v, c) in &self.terms {
            write_signed(f, first, c, Some(v))?;
            first = false;
        }
        if !self.constant.is_zero() {
            write_signed(f, first, &self.constant, None)?;
        }
        Ok(())
    }
}

impl fmt::Debug for LinForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "LinForm({self})")
    }
}

/// Splits `a + b - c` into signed summands, ignoring signs inside brackets.
pub(crate) fn split_summands(s: &str) -> Vec<(bool, String)> {
    let mut out = Vec::new();
    let mut cur = String::new();
    let mut negative = false;
    let mut depth = 0usize;
    for ch in s.chars().filter(|c| !c.is_whitespace()) {
        match ch {
            '[' => {
                depth += 1;
                cur.push(ch);
            }
            ']' => {
                depth = depth.saturating_sub(1);
                cur.push(ch);
            }
            '+' | '-' if depth == 0 && !cur.ends_with('*') && !cur.ends_with('/') => {
                if !cur.is_empty() {
                    out.push((negative, std::mem::take(&mut cur)));
                }
                negative = ch == '-';
            }
            _ => cur.push(ch),
        }
    }
    if !cur.is_empty() {
        out.push((negative, cur));
    }
    out
}

impl FromStr for LinForm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut terms = Vec::new();
        let mut constant = Rational::zero();
        for (negative, summand) in split_summands(s) {
            let sign = if negative { Rational::from_int(-1) } else { Rational::one() };
            let (coeff, var) = match summand.rsplit_once('*') {
                Some((c, v)) => (c.parse::<Rational>()?, Some(v.parse::<VarId>()?)),
                None => match summand.parse::<VarId>() {
                    Ok(v) => (Rational::one(), Some(v)),
                    Err(_) => (summand.parse::<Rational>()?, None),
                },
            };
            match var {
                Some(v) => terms.push((v, &coeff * &sign)),
                None => constant += &coeff * &sign,
            }
        }
        Ok(LinForm::from_terms(terms, constant))
    }
}

impl serde::Serialize for LinForm {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn y(i: usize, j: usize) -> LinForm {
        LinForm::var(VarId::y(i, j))
    }

    #[test]
    fn prints_canonically() {
        let f = y(1, 3).scale(&3.into()) + y(1, 2).scale(&3.into()) + LinForm::term(VarId::Z, 6);
        assert_eq!(f.to_string(), "3*y[1,2] + 3*y[1,3] + 6*z");
        let g = &(-&y(1, 2)) + &LinForm::constant(Rational::new(-1, 2));
        assert_eq!(g.to_string(), "-y[1,2] - 1/2");
        assert_eq!(LinForm::zero().to_string(), "0");
    }

    #[test]
    fn cancellation_leaves_no_zero_terms() {
        let f = &y(1, 2) - &y(1, 2);
        assert!(f.is_zero());
        assert!(f.terms().is_empty());
    }

    #[test]
    fn substitution_touches_only_target() {
        let f = y(1, 2).scale(&2.into()) + LinForm::var(VarId::Z);
        let g = f.substitute(VarId::y(1, 2), &(LinForm::var(VarId::x(1)) + y(1, 2)));
        assert_eq!(g.to_string(), "2*x[1] + 2*y[1,2] + z");
    }

    #[test]
    fn eval_reports_missing_variable() {
        let a = Assignment::from_pairs([(VarId::Z, Rational::from_int(2))], 0);
        assert!(matches!(y(1, 2).eval(&a), Err(Error::MissingVariable(_))));
        assert_eq!(LinForm::term(VarId::Z, 3).eval(&a).unwrap(), Rational::from_int(6));
    }

    fn arb_form() -> impl Strategy<Value = LinForm> {
        let var = prop_oneof![
            (1usize..6).prop_map(VarId::x),
            (1usize..5, 1usize..4).prop_map(|(i, d)| VarId::y(i, i + d)),
            Just(VarId::Z),
        ];
        (
            proptest::collection::vec((var, -20i64..20, 1i64..4), 0..6),
            -5i64..5,
        )
            .prop_map(|(ts, c)| {
                LinForm::from_terms(
                    ts.into_iter().map(|(v, n, d)| (v, Rational::new(n, d))),
                    Rational::from_int(c),
                )
            })
    }

    proptest! {
        #[test]
        fn display_parse_round_trip(f in arb_form()) {
            let parsed: LinForm = f.to_string().parse().unwrap();
            prop_assert_eq!(parsed, f);
        }

        #[test]
        fn add_sub_inverse(f in arb_form(), g in arb_form()) {
            prop_assert_eq!(&(&f + &g) - &g, f.clone());
            prop_assert_eq!(&f + &g, &g + &f);
        }
    }
}
