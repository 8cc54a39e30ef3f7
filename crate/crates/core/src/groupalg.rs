//! Elements of the group algebra of `S_n`, convolution, and regular
//! representation matrices.

use std::io::Write;

use crate::algebra::{Assignment, LinForm, Matrix, Poly, Rational, Ring, VarId};
use crate::config::{MAX_CONVOLUTION_N, MAX_ENUM_N, MAX_MATRIX_N};
use crate::error::{Error, Result};
use crate::par;
use crate::perm::{enumerate, factorial, Permutation};
use crate::stats::{stat_value, StatKind};

/// Coefficients that can be summed.
pub trait Additive: Clone + Send + Sync {
    fn zero() -> Self;
    fn add_assign_ref(&mut self, other: &Self);
    fn sub_assign_ref(&mut self, other: &Self);
}

impl Additive for LinForm {
    fn zero() -> Self {
        LinForm::zero()
    }
    fn add_assign_ref(&mut self, other: &Self) {
        *self += other;
    }
    fn sub_assign_ref(&mut self, other: &Self) {
        *self -= other;
    }
}

macro_rules! additive_via_ring {
    ($t:ty) => {
        impl Additive for $t {
            fn zero() -> Self {
                <$t as Ring>::zero()
            }
            fn add_assign_ref(&mut self, other: &Self) {
                *self = Ring::add(self, other);
            }
            fn sub_assign_ref(&mut self, other: &Self) {
                *self = Ring::sub(self, other);
            }
        }
    };
}
additive_via_ring!(Poly);
additive_via_ring!(Rational);
additive_via_ring!(i128);

/// `Σ_σ c_σ σ`, coefficients indexed by lexicographic rank.
#[derive(Clone, Debug, PartialEq)]
pub struct GroupAlgebraElement<C> {
    n: usize,
    coeffs: Vec<C>,
}

impl<C> GroupAlgebraElement<C> {
    pub fn new(n: usize, coeffs: Vec<C>) -> Result<Self> {
        if n == 0 || n > MAX_ENUM_N {
            return Err(Error::ResourceCap(format!("group algebra supports 1 <= n <= {MAX_ENUM_N}, got {n}")));
        }
        if coeffs.len() != factorial(n) {
            return Err(Error::Usage(format!("{} coefficients for degree {n}", coeffs.len())));
        }
        Ok(GroupAlgebraElement { n, coeffs })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn coeffs(&self) -> &[C] {
        &self.coeffs
    }

    pub fn coeff(&self, s: &Permutation) -> &C {
        &self.coeffs[s.rank()]
    }

    pub fn map<T, F>(&self, f: F) -> GroupAlgebraElement<T>
    where
        C: Sync,
        T: Send,
        F: Fn(&C) -> T + Sync + Send,
    {
        GroupAlgebraElement { n: self.n, coeffs: par::map_slice(&self.coeffs, f) }
    }

    /// Regular representation: entry `(rank σ, rank τ)` is `c_{στ⁻¹}`.
    pub fn regular_matrix(&self) -> Result<Matrix<C>>
    where
        C: Clone + Send + Sync,
    {
        Ok(self.regular_matrix_with(&QuotientTable::new(self.n)?))
    }

    /// Same as [`Self::regular_matrix`] with a prebuilt table of matching degree.
    pub fn regular_matrix_with(&self, table: &QuotientTable) -> Matrix<C>
    where
        C: Clone + Send + Sync,
    {
        assert_eq!(table.size(), self.coeffs.len(), "quotient table degree mismatch");
        let size = self.coeffs.len();
        Matrix::from_fn(size, size, |i, j| self.coeffs[table.get(i, j)].clone())
    }

    /// Streams the regular matrix as CSV without materializing it.
    pub fn write_regular_csv<W: Write>(&self, w: W) -> Result<()>
    where
        C: std::fmt::Display,
    {
        let table = QuotientTable::new(self.n)?;
        let perms = enumerate(self.n)?;
        let mut out = csv::Writer::from_writer(w);
        let mut header = vec![String::new()];
        header.extend(perms.iter().map(Permutation::to_string));
        out.write_record(&header)?;
        for (i, s) in perms.iter().enumerate() {
            let mut rec = Vec::with_capacity(perms.len() + 1);
            rec.push(s.to_string());
            rec.extend((0..perms.len()).map(|j| self.coeffs[table.get(i, j)].to_string()));
            out.write_record(&rec)?;
        }
        out.flush()?;
        Ok(())
    }

    /// `{"n": 3, "coeffs": {"1,2,3": "3*z", ...}}`
    pub fn to_json(&self) -> Result<serde_json::Value>
    where
        C: std::fmt::Display,
    {
        let perms = enumerate(self.n)?;
        let coeffs: serde_json::Map<String, serde_json::Value> =
            perms.iter().zip(&self.coeffs).map(|(p, c)| (p.to_string(), c.to_string().into())).collect();
        Ok(serde_json::json!({ "n": self.n, "coeffs": coeffs }))
    }
}

impl<C: Additive> GroupAlgebraElement<C> {
    pub fn zero(n: usize) -> Result<Self> {
        Self::new(n, vec![C::zero(); factorial(n.min(MAX_ENUM_N + 1))])
    }

    /// `unit · ι`.
    pub fn delta_identity(n: usize, unit: C) -> Result<Self> {
        let mut e = Self::zero(n)?;
        e.coeffs[0] = unit;
        Ok(e)
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_degree(other)?;
        let mut out = self.clone();
        for (a, b) in out.coeffs.iter_mut().zip(&other.coeffs) {
            a.add_assign_ref(b);
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check_degree(other)?;
        let mut out = self.clone();
        for (a, b) in out.coeffs.iter_mut().zip(&other.coeffs) {
            a.sub_assign_ref(b);
        }
        Ok(out)
    }

    fn check_degree<T>(&self, other: &GroupAlgebraElement<T>) -> Result<()> {
        if self.n != other.n {
            return Err(Error::Usage(format!("degree mismatch: {} vs {}", self.n, other.n)));
        }
        Ok(())
    }
}

impl GroupAlgebraElement<LinForm> {
    pub fn specialize(&self, a: &Assignment) -> Result<GroupAlgebraElement<Rational>> {
        let coeffs = par::map_slice(&self.coeffs, |f| f.eval(a)).into_iter().collect::<Result<Vec<_>>>()?;
        Ok(GroupAlgebraElement { n: self.n, coeffs })
    }

    pub fn to_poly(&self) -> GroupAlgebraElement<Poly> {
        self.map(|f| Poly::from(f))
    }

    pub fn substitute(&self, v: VarId, replacement: &LinForm) -> Self {
        self.map(|f| f.substitute(v, replacement))
    }
}

/// `Σ_σ stat(σ) σ`.
pub fn element_of(kind: StatKind, n: usize) -> Result<GroupAlgebraElement<LinForm>> {
    let perms = enumerate(n)?;
    GroupAlgebraElement::new(n, par::map_slice(&perms, |s| stat_value(kind, s)))
}

/// Ranks of `στ⁻¹` for all pairs, row-major by `(rank σ, rank τ)`.
pub struct QuotientTable {
    size: usize,
    ranks: Vec<u32>,
}

impl QuotientTable {
    pub fn new(n: usize) -> Result<Self> {
        if n > MAX_MATRIX_N {
            return Err(Error::ResourceCap(format!("regular matrices support n <= {MAX_MATRIX_N}, got {n}")));
        }
        let perms = enumerate(n)?;
        let inverses: Vec<Permutation> = perms.iter().map(Permutation::inverse).collect();
        let size = perms.len();
        let rows = par::map_range(size, |i| {
            inverses.iter().map(|ti| perms[i].compose_unchecked(ti).rank() as u32).collect::<Vec<_>>()
        });
        Ok(QuotientTable { size, ranks: rows.concat() })
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> usize {
        self.ranks[i * self.size + j] as usize
    }

    pub fn size(&self) -> usize {
        self.size
    }
}

/// `(a·b)(τ) = Σ_σ a(σ) b(σ⁻¹τ)`.
pub fn convolve<C: Ring>(a: &GroupAlgebraElement<C>, b: &GroupAlgebraElement<C>) -> Result<GroupAlgebraElement<C>> {
    if a.n != b.n {
        return Err(Error::Usage(format!("degree mismatch: {} vs {}", a.n, b.n)));
    }
    convolve_capped(a, b, MAX_CONVOLUTION_N)
}

pub fn convolve_capped<C: Ring>(
    a: &GroupAlgebraElement<C>,
    b: &GroupAlgebraElement<C>,
    cap: usize,
) -> Result<GroupAlgebraElement<C>> {
    if a.n > cap {
        return Err(Error::ResourceCap(format!("convolution supports n <= {cap}, got {}", a.n)));
    }
    let perms = enumerate(a.n)?;
    let inverses: Vec<Permutation> = perms.iter().map(Permutation::inverse).collect();
    let coeffs = par::map_range(perms.len(), |t| {
        let tau = &perms[t];
        let mut acc = C::zero();
        for (s, sinv) in inverses.iter().enumerate() {
            if a.coeffs[s].is_zero() {
                continue;
            }
            let r = sinv.compose_unchecked(tau).rank();
            if !b.coeffs[r].is_zero() {
                acc.add_mul_assign(&a.coeffs[s], &b.coeffs[r]);
            }
        }
        acc
    });
    Ok(GroupAlgebraElement { n: a.n, coeffs })
}

/// Regular matrix of a statistic: entry `(rank σ, rank τ)` is `stat(στ⁻¹)`.
pub fn regular_matrix(kind: StatKind, n: usize) -> Result<Matrix<LinForm>> {
    element_of(kind, n)?.regular_matrix()
}

/// The substitution `y_{i,i+1} → x_i + y_{i,i+1}` for `i` in `[n-1]`.
pub fn descent_substitution(n: usize) -> Vec<(VarId, LinForm)> {
    (1..n)
        .map(|i| {
            let y = VarId::y(i, i + 1);
            (y, &LinForm::var(VarId::x(i)) + &LinForm::var(y))
        })
        .collect()
}

pub fn substitute_all(f: &LinForm, subs: &[(VarId, LinForm)]) -> LinForm {
    // The replacements only mention x_i and the substituted y, so one
    // pass per variable cannot cascade.
    subs.iter().fold(f.clone(), |acc, (v, r)| acc.substitute(*v, r))
}

/// `IF(n)` with the descent substitution applied entrywise.
pub fn dif_by_substitution(n: usize) -> Result<Matrix<LinForm>> {
    let subs = descent_substitution(n);
    Ok(regular_matrix(StatKind::InvYPlusFixZ, n)?.map(|f| substitute_all(f, &subs)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn z() -> LinForm {
        LinForm::var(VarId::Z)
    }

    fn random_element(n: usize, seed: u64) -> GroupAlgebraElement<Poly> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let vars = [VarId::Z, VarId::y(1, 2), VarId::x(1)];
        let coeffs = (0..factorial(n))
            .map(|_| {
                let terms: Vec<_> = vars.iter().map(|v| (*v, Rational::from_int(rng.gen_range(-3..=3)))).collect();
                Poly::from(&LinForm::from_terms(terms, Rational::from_int(rng.gen_range(-2..=2))))
            })
            .collect();
        GroupAlgebraElement::new(n, coeffs).unwrap()
    }

    #[test]
    fn elements_of_small_degree() {
        let f2 = element_of(StatKind::FixZ, 2).unwrap();
        assert_eq!(f2.coeffs(), &[z().scale(&2.into()), LinForm::zero()]);
        let i2 = element_of(StatKind::InvY, 2).unwrap();
        assert_eq!(i2.coeffs(), &[LinForm::zero(), LinForm::var(VarId::y(1, 2))]);
        let total: LinForm = element_of(StatKind::FixZ, 4).unwrap().coeffs().iter().cloned().sum();
        assert_eq!(total, z().scale(&24.into()));
    }

    #[test]
    fn json_dump() {
        let f3 = element_of(StatKind::FixZ, 3).unwrap();
        let v = f3.to_json().unwrap();
        assert_eq!(v["n"], 3);
        assert_eq!(v["coeffs"]["1,2,3"], "3*z");
        assert_eq!(v["coeffs"]["2,1,3"], "z");
        assert_eq!(v["coeffs"]["2,3,1"], "0");
    }

    #[test]
    fn regular_matrices() {
        let f2 = regular_matrix(StatKind::FixZ, 2).unwrap();
        assert_eq!(f2.entries(), &[z().scale(&2.into()), LinForm::zero(), LinForm::zero(), z().scale(&2.into())]);
        let if3 = regular_matrix(StatKind::InvYPlusFixZ, 3).unwrap();
        assert_eq!(if3.trace_form(), z().scale(&18.into()));
        let if4 = regular_matrix(StatKind::InvYPlusFixZ, 4).unwrap();
        let perron = &crate::stats::sum_y(4).scale(&12.into()) + &z().scale(&24.into());
        assert!(if4.row_sums().iter().all(|r| *r == perron));
    }

    #[test]
    fn entries_match_definition_directly() {
        let perms = enumerate(4).unwrap();
        let m = regular_matrix(StatKind::DesXPlusInvYPlusFixZ, 4).unwrap();
        for (i, s) in perms.iter().enumerate() {
            for (j, t) in perms.iter().enumerate() {
                let q = s.compose(&t.inverse()).unwrap();
                assert_eq!(m.get(i, j), &stat_value(StatKind::DesXPlusInvYPlusFixZ, &q));
            }
        }
    }

    #[test]
    fn fix_matrix_is_symmetric_inv_matrix_is_not() {
        for n in 2..=5 {
            let f = regular_matrix(StatKind::FixZ, n).unwrap();
            assert_eq!(f.transpose(), f);
        }
        let i3 = regular_matrix(StatKind::InvY, 3).unwrap();
        assert_ne!(i3.transpose(), i3);
    }

    /// Entries built from σ⁻¹τ instead of στ⁻¹ give the same matrix with
    /// both indices relabelled by σ ↦ σ⁻¹, a permutation similarity.
    #[test]
    fn other_orientation_is_similar() {
        for n in 3..=4 {
            let perms = enumerate(n).unwrap();
            let size = perms.len();
            let m = regular_matrix(StatKind::InvYPlusFixZ, n).unwrap();
            let other = Matrix::from_fn(size, size, |i, j| {
                stat_value(StatKind::InvYPlusFixZ, &perms[i].inverse().compose(&perms[j]).unwrap())
            });
            let inv: Vec<usize> = perms.iter().map(|p| p.inverse().rank()).collect();
            let relabelled = Matrix::from_fn(size, size, |i, j| m.get(inv[i], inv[j]).clone());
            assert_eq!(other, relabelled);
            assert_ne!(other, m.transpose());
        }
    }

    #[test]
    fn substitution_construction_matches_direct() {
        for n in 2..=5 {
            let direct = regular_matrix(StatKind::DesXPlusInvYPlusFixZ, n).unwrap();
            assert_eq!(dif_by_substitution(n).unwrap(), direct, "n={n}");
        }
        let d2 = dif_by_substitution(2).unwrap();
        assert_eq!(d2.get(0, 1).to_string(), "x[1] + y[1,2]");
        let if5 = regular_matrix(StatKind::InvYPlusFixZ, 5).unwrap();
        let d5 = dif_by_substitution(5).unwrap();
        for (a, b) in if5.entries().iter().zip(d5.entries()) {
            assert_eq!(a.coeff(VarId::Z), b.coeff(VarId::Z));
        }
    }

    #[test]
    fn convolution_identity_and_fix_square() {
        let fz = element_of(StatKind::FixZ, 4).unwrap().to_poly();
        let delta = GroupAlgebraElement::delta_identity(4, Poly::one()).unwrap();
        assert_eq!(convolve(&delta, &fz).unwrap(), fz);
        assert_eq!(convolve(&fz, &delta).unwrap(), fz);
        let sq = convolve(&fz, &fz).unwrap();
        assert_eq!(sq.coeffs()[0].to_string(), "48*z^2");
    }

    #[test]
    fn fix_element_is_central() {
        for n in 2..=4 {
            let fz = element_of(StatKind::FixZ, n).unwrap().to_poly();
            let iy = element_of(StatKind::InvY, n).unwrap().to_poly();
            assert_eq!(convolve(&iy, &fz).unwrap(), convolve(&fz, &iy).unwrap());
            for seed in 0..3 {
                let a = random_element(n, seed);
                assert_eq!(convolve(&a, &fz).unwrap(), convolve(&fz, &a).unwrap());
            }
        }
    }

    #[test]
    fn regular_matrix_acts_by_convolution() {
        for n in 2..=4 {
            for kind in [StatKind::InvYPlusFixZ, StatKind::DesX] {
                let e = element_of(kind, n).unwrap().to_poly();
                let b = random_element(n, n as u64 * 31);
                let m = e.regular_matrix().unwrap();
                let col = Matrix::from_vec(b.coeffs().len(), 1, b.coeffs().to_vec());
                let prod = crate::algebra::mat_mul(&m, &col).unwrap();
                assert_eq!(prod.entries(), convolve(&e, &b).unwrap().coeffs());
            }
        }
    }

    #[test]
    fn convolution_caps() {
        let a: GroupAlgebraElement<Rational> = GroupAlgebraElement::zero(6).unwrap();
        assert!(matches!(convolve(&a, &a), Err(Error::ResourceCap(_))));
        let b: GroupAlgebraElement<Rational> = GroupAlgebraElement::zero(3).unwrap();
        assert!(matches!(convolve(&a, &b), Err(Error::Usage(_))));
    }

    #[test]
    fn streaming_csv_matches_materialized() {
        let e = element_of(StatKind::InvYPlusFixZ, 3).unwrap();
        let mut streamed = Vec::new();
        e.write_regular_csv(&mut streamed).unwrap();
        let perms: Vec<String> = enumerate(3).unwrap().iter().map(|p| p.to_string()).collect();
        let mut direct = Vec::new();
        e.regular_matrix().unwrap().write_csv(&mut direct, &perms, &perms).unwrap();
        assert_eq!(streamed, direct);
    }
}
