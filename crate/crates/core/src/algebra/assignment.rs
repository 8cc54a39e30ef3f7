use std::collections::{BTreeMap, BTreeSet};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{LinForm, Rational, VarId};
use crate::config::{ASSIGNMENT_MAX, ASSIGNMENT_RETRIES};
use crate::error::{Error, Result};

/// A specialization point: concrete rational values for indeterminates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Assignment {
    values: BTreeMap<VarId, Rational>,
    /// Seed the values were drawn from (0 for hand-built assignments).
    pub seed: u64,
}

impl Assignment {
    pub fn from_pairs<I>(pairs: I, seed: u64) -> Self
    where
        I: IntoIterator<Item = (VarId, Rational)>,
    {
        Assignment { values: pairs.into_iter().collect(), seed }
    }

    pub fn empty() -> Self {
        Assignment { values: BTreeMap::new(), seed: 0 }
    }

    pub fn get(&self, v: VarId) -> Option<&Rational> {
        self.values.get(&v)
    }

    pub fn insert(&mut self, v: VarId, value: Rational) {
        self.values.insert(v, value);
    }

    pub fn iter(&self) -> impl Iterator<Item = (&VarId, &Rational)> {
        self.values.iter()
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// x_i = i, y_{i,j} = 1, z = 1: turns des_x + inv_y + fix_z into
    /// maj + inv + fix.
    pub fn maj_inv_fix(n: usize) -> Self {
        let mut values = BTreeMap::new();
        for i in 1..n {
            values.insert(VarId::x(i), Rational::from(i));
        }
        for i in 1..=n {
            for j in i + 1..=n {
                values.insert(VarId::y(i, j), Rational::one());
            }
        }
        values.insert(VarId::Z, Rational::one());
        Assignment { values, seed: 0 }
    }
}

/// Draws each variable uniformly from `[1, 2^20]`, deterministically per
/// seed. If any two of `distinct` evaluate equal, the draw is repeated from
/// the same stream, up to a bounded number of attempts.
pub fn random_assignment(
    vars: &BTreeSet<VarId>,
    seed: u64,
    distinct: &[LinForm],
) -> Result<Assignment> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..ASSIGNMENT_RETRIES {
        let a = Assignment {
            values: vars
                .iter()
                .map(|v| (*v, Rational::from_int(rng.gen_range(1..=ASSIGNMENT_MAX))))
                .collect(),
            seed,
        };
        let mut seen = BTreeSet::new();
        let mut ok = true;
        for form in distinct {
            if !seen.insert(form.eval(&a)?) {
                ok = false;
                break;
            }
        }
        if ok {
            return Ok(a);
        }
    }
    Err(Error::CertificationSetup(format!(
        "no collision-free assignment after {ASSIGNMENT_RETRIES} draws (seed {seed})"
    )))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn same_seed_same_assignment() {
        let vars: BTreeSet<_> = [VarId::Z, VarId::y(1, 2), VarId::x(1)].into();
        let a = random_assignment(&vars, 42, &[]).unwrap();
        let b = random_assignment(&vars, 42, &[]).unwrap();
        assert_eq!(a, b);
        let c = random_assignment(&vars, 43, &[]).unwrap();
        assert_ne!(a, c);
    }

    #[test]
    fn values_in_range() {
        let vars: BTreeSet<_> = [VarId::Z].into();
        for seed in 0..50 {
            let a = random_assignment(&vars, seed, &[]).unwrap();
            let z = a.get(VarId::Z).unwrap().to_i64().unwrap();
            assert!((1..=ASSIGNMENT_MAX).contains(&z));
        }
    }

    #[test]
    fn unavoidable_collision_is_a_setup_error() {
        let vars: BTreeSet<_> = [VarId::Z].into();
        let z = LinForm::var(VarId::Z);
        let err = random_assignment(&vars, 1, &[z.clone(), z]).unwrap_err();
        assert!(matches!(err, Error::CertificationSetup(_)));
    }

    #[test]
    fn missing_variable_in_distinct_forms_is_reported() {
        let vars: BTreeSet<_> = [VarId::Z].into();
        let err = random_assignment(&vars, 1, &[LinForm::var(VarId::x(1))]).unwrap_err();
        assert!(matches!(err, Error::MissingVariable(_)));
    }
}
