use std::collections::BTreeMap;
use std::fmt;

use smallvec::SmallVec;

use super::{Assignment, LinForm, Rational, VarId};
use crate::error::{Error, Result};

/// A monomial as a sorted list of (variable, exponent > 0).
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Monomial(SmallVec<[(VarId, u8); 4]>);

impl Monomial {
    pub fn one() -> Self {
        Monomial::default()
    }

    pub fn var(v: VarId) -> Self {
        Monomial(smallvec::smallvec![(v, 1)])
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().map(|(_, e)| *e as u32).sum()
    }

    pub fn factors(&self) -> &[(VarId, u8)] {
        &self.0
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let (a, b) = (&self.0, &other.0);
        let mut out = SmallVec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            match a[i].0.cmp(&b[j].0) {
                std::cmp::Ordering::Less => {
                    out.push(a[i]);
                    i += 1;
                }
                std::cmp::Ordering::Greater => {
                    out.push(b[j]);
                    j += 1;
                }
                std::cmp::Ordering::Equal => {
                    out.push((a[i].0, a[i].1 + b[j].1));
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&a[i..]);
        out.extend_from_slice(&b[j..]);
        Monomial(out)
    }

    pub fn eval(&self, a: &Assignment) -> Result<Rational> {
        let mut acc = Rational::one();
        for (v, e) in &self.0 {
            let value = a.get(*v).ok_or(Error::MissingVariable(*v))?;
            acc = &acc * &value.pow(*e as u32);
        }
        Ok(acc)
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, (v, e)) in self.0.iter().enumerate() {
            if k > 0 {
                write!(f, "*")?;
            }
            if *e == 1 {
                write!(f, "{v}")?;
            } else {
                write!(f, "{v}^{e}")?;
            }
        }
        Ok(())
    }
}

/// Sparse multivariate polynomial with rational coefficients.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Poly {
    terms: BTreeMap<Monomial, Rational>,
}

impl Poly {
    pub fn zero() -> Self {
        Poly::default()
    }

    pub fn one() -> Self {
        Poly::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(Monomial::one(), c);
        }
        Poly { terms }
    }

    pub fn var(v: VarId) -> Self {
        Poly { terms: [(Monomial::var(v), Rational::one())].into() }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    pub fn coeff(&self, m: &Monomial) -> Rational {
        self.terms.get(m).cloned().unwrap_or_default()
    }

    pub fn degree(&self) -> u32 {
        self.terms.keys().map(Monomial::degree).max().unwrap_or(0)
    }

    fn add_term(&mut self, m: Monomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), -c);
        }
        out
    }

    pub fn neg(&self) -> Poly {
        Poly { terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect() }
    }

    pub fn scale(&self, k: &Rational) -> Poly {
        if k.is_zero() {
            return Poly::zero();
        }
        Poly { terms: self.terms.iter().map(|(m, c)| (m.clone(), c * k)).collect() }
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        let mut out = Poly::zero();
        out.add_mul_assign(self, other);
        out
    }

    /// `self += a * b` without materializing the product.
    pub fn add_mul_assign(&mut self, a: &Poly, b: &Poly) {
        for (ma, ca) in &a.terms {
            for (mb, cb) in &b.terms {
                self.add_term(ma.mul(mb), ca * cb);
            }
        }
    }

    pub fn eval(&self, a: &Assignment) -> Result<Rational> {
        let mut acc = Rational::zero();
        for (m, c) in &self.terms {
            acc += c * &m.eval(a)?;
        }
        Ok(acc)
    }
}

impl From<&LinForm> for Poly {
    fn from(f: &LinForm) -> Poly {
        let mut p = Poly::constant(f.constant_term().clone());
        for (v, c) in f.terms() {
            p.terms.insert(Monomial::var(*v), c.clone());
        }
        p
    }
}

impl From<Rational> for Poly {
    fn from(c: Rational) -> Poly {
        Poly::constant(c)
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        // Highest degree first reads naturally; ties keep map order.
        let mut terms: Vec<_> = self.terms.iter().collect();
        terms.sort_by(|a, b| b.0.degree().cmp(&a.0.degree()).then_with(|| a.0.cmp(b.0)));
        for (k, (m, c)) in terms.into_iter().enumerate() {
            let mag = c.abs();
            match (k == 0, c.is_negative()) {
                (true, true) => write!(f, "-")?,
                (true, false) => {}
                (false, true) => write!(f, " - ")?,
                (false, false) => write!(f, " + ")?,
            }
            if m.0.is_empty() {
                write!(f, "{mag}")?;
            } else if mag.is_one() {
                write!(f, "{m}")?;
            } else {
                write!(f, "{mag}*{m}")?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Poly({self})")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn arb_poly() -> impl Strategy<Value = Poly> {
        let var = prop_oneof![Just(VarId::Z), Just(VarId::y(1, 2)), Just(VarId::x(1))];
        let mono = proptest::collection::vec(var, 0..4);
        proptest::collection::vec((mono, -9i64..9, 1i64..4), 0..5).prop_map(|ts| {
            let mut p = Poly::zero();
            for (vs, n, d) in ts {
                let mut t = Poly::constant(Rational::new(n, d));
                for v in vs {
                    t = t.mul(&Poly::var(v));
                }
                p = p.add(&t);
            }
            p
        })
    }

    fn arb_point() -> impl Strategy<Value = Assignment> {
        (-50i64..50, -50i64..50, 1i64..50).prop_map(|(a, b, c)| {
            Assignment::from_pairs(
                [
                    (VarId::Z, Rational::from_int(a)),
                    (VarId::y(1, 2), Rational::from_int(b)),
                    (VarId::x(1), Rational::new(1, c)),
                ],
                0,
            )
        })
    }

    #[test]
    fn square_of_binomial() {
        let p = Poly::var(VarId::Z).add(&Poly::var(VarId::y(1, 2)));
        assert_eq!(p.mul(&p).to_string(), "2*y[1,2]*z + y[1,2]^2 + z^2");
        assert_eq!(p.sub(&p), Poly::zero());
    }

    proptest! {
        #[test]
        fn ring_laws(a in arb_poly(), b in arb_poly(), c in arb_poly()) {
            prop_assert_eq!(a.mul(&b), b.mul(&a));
            prop_assert_eq!(a.mul(&b.add(&c)), a.mul(&b).add(&a.mul(&c)));
            prop_assert!(a.mul(&b).degree() <= a.degree() + b.degree());
        }

        #[test]
        fn eval_is_a_homomorphism(a in arb_poly(), b in arb_poly(), pt in arb_point()) {
            prop_assert_eq!(a.mul(&b).eval(&pt).unwrap(), a.eval(&pt).unwrap() * b.eval(&pt).unwrap());
            prop_assert_eq!(a.add(&b).eval(&pt).unwrap(), a.eval(&pt).unwrap() + b.eval(&pt).unwrap());
        }
    }
}
