//! The standard representation `S^(n-1,1)` with basis `v_i = e_1 - e_i`,
//! `i ∈ [n] ∖ {1}`, and the identities behind its `i_y + f_z` spectrum.
//!
//! Column `i` of an action matrix holds the `v`-coordinates of `e·v_i`;
//! entry `(j, i)` is `Σ_σ c_σ ([σ(i) = j] - [σ(1) = j])`.

use std::io::Write;

use serde::Serialize;

use crate::algebra::{LinForm, Matrix, Poly, Rational, Ring, VarId};
use crate::error::{Error, Result};
use crate::groupalg::{element_of, Additive, GroupAlgebraElement};
use crate::par;
use crate::perm::{enumerate, factorial};
use crate::spectra::{
    certify_source, predicted_spectrum, weighted_sum_y, CertificationReport, CheckFailure, MatrixKind, MatrixSource,
    SpectrumSpec,
};
use crate::stats::{stat_value, StatKind};

/// Action of `e` on `S^(n-1,1)`, rows and columns indexed by `v_2..v_n`.
pub fn specht_action<C: Additive + PartialEq>(e: &GroupAlgebraElement<C>) -> Result<Matrix<C>> {
    let n = e.n();
    if n < 2 {
        return Err(Error::Usage("the standard representation needs n >= 2".into()));
    }
    let perms = enumerate(n)?;
    let columns = par::map_range(n - 1, |col| {
        let i = col + 2;
        // Coordinates of e·(e_1 - e_i) on e_1..e_n.
        let mut image = vec![C::zero(); n];
        for (s, c) in perms.iter().zip(e.coeffs()) {
            image[s.apply(1) - 1].add_assign_ref(c);
            image[s.apply(i) - 1].sub_assign_ref(c);
        }
        let mut total = C::zero();
        for v in &image {
            total.add_assign_ref(v);
        }
        if total != C::zero() {
            return Err(Error::Internal(format!("image of v_{i} has nonzero coordinate sum")));
        }
        let mut coords = Vec::with_capacity(n - 1);
        for v in &image[1..] {
            let mut neg = C::zero();
            neg.sub_assign_ref(v);
            coords.push(neg);
        }
        Ok(coords)
    });
    let columns = columns.into_iter().collect::<Result<Vec<_>>>()?;
    let d = n - 1;
    let mut data = Vec::with_capacity(d * d);
    for j in 0..d {
        for col in &columns {
            data.push(col[j].clone());
        }
    }
    Ok(Matrix::from_vec(d, d, data))
}

pub fn basis_labels(n: usize) -> Vec<String> {
    (2..=n).map(|i| format!("v{i}")).collect()
}

pub fn write_specht_csv<W: Write, C: std::fmt::Display>(m: &Matrix<C>, n: usize, out: W) -> Result<()> {
    let labels = basis_labels(n);
    m.write_csv(out, &labels, &labels)
}

/// The four constrained permutation sets used to expand one action entry.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum LeyijItem {
    /// `σ(1) = 1, σ(i) = j`
    FixOneHitJ = 1,
    /// `σ(1) = j, σ(i) = 1`
    SwapThroughOne = 2,
    /// `σ(1) ≠ 1, σ(i) = j`
    MoveOneHitJ = 3,
    /// `σ(1) = j, σ(i) ≠ 1`
    OneToJ = 4,
}

impl LeyijItem {
    pub const ALL: [LeyijItem; 4] =
        [LeyijItem::FixOneHitJ, LeyijItem::SwapThroughOne, LeyijItem::MoveOneHitJ, LeyijItem::OneToJ];

    pub fn from_index(k: usize) -> Result<Self> {
        LeyijItem::ALL.get(k.wrapping_sub(1)).copied().ok_or_else(|| Error::Usage(format!("item must be 1..4, got {k}")))
    }

    fn contains(self, s1: usize, si: usize, j: usize) -> bool {
        match self {
            LeyijItem::FixOneHitJ => s1 == 1 && si == j,
            LeyijItem::SwapThroughOne => s1 == j && si == 1,
            LeyijItem::MoveOneHitJ => s1 != 1 && si == j,
            LeyijItem::OneToJ => s1 == j && si != 1,
        }
    }
}

fn check_indices(n: usize, i: usize, j: usize) -> Result<()> {
    if n < 4 {
        return Err(Error::Usage(format!("n must be at least 4, got {n}")));
    }
    if !(2..=n).contains(&i) || !(2..=n).contains(&j) {
        return Err(Error::Usage(format!("i and j must lie in 2..={n}, got ({i}, {j})")));
    }
    Ok(())
}

/// `Σ inv_y(σ)` over one constrained set, by enumeration.
pub fn leyij_sums(n: usize, i: usize, j: usize, item: LeyijItem) -> Result<LinForm> {
    check_indices(n, i, j)?;
    Ok(enumerate(n)?
        .iter()
        .filter(|s| item.contains(s.apply(1), s.apply(i), j))
        .map(|s| stat_value(StatKind::InvY, s))
        .sum())
}

/// Partial sums of the `y` variables that the closed forms are built from.
struct YBlocks {
    /// `Σ_{l ∈ [i-1]∖{1}} y_{l,i}`
    into_i: LinForm,
    /// `Σ_{m > i} y_{i,m}`
    out_of_i: LinForm,
    /// `Σ_{l<m, l,m ∉ {1,i}} y_{l,m}`
    away: LinForm,
    /// `Σ_{m ∉ {1,i}} y_{1,m}`
    from_one: LinForm,
    /// `y_{1,i}`
    one_i: LinForm,
}

fn y_blocks(n: usize, i: usize) -> YBlocks {
    let one = |_: usize, _: usize| Rational::one();
    let sub = |keep: &dyn Fn(usize, usize) -> bool| {
        weighted_sum_y(n, |l, m| if keep(l, m) { one(l, m) } else { Rational::zero() })
    };
    YBlocks {
        into_i: sub(&|l, m| m == i && l != 1),
        out_of_i: sub(&|l, _| l == i),
        away: sub(&|l, m| l != 1 && l != i && m != i),
        from_one: sub(&|l, m| l == 1 && m != i),
        one_i: LinForm::var(VarId::y(1, i)),
    }
}

/// Closed forms for the four constrained inversion sums.
pub fn leyij_closed(n: usize, i: usize, j: usize, item: LeyijItem) -> Result<LinForm> {
    check_indices(n, i, j)?;
    let b = y_blocks(n, i);
    let g2 = Rational::from(factorial(n - 2));
    let g3 = Rational::from(factorial(n - 3));
    let (ni, ji) = (n as i64, j as i64);
    let k = |v: i64| Rational::from_int(v);
    let c2 = |m: i64| Rational::from_int(m * (m - 1) / 2);
    let mixed = &k((ji - 1) * (ni - 4) + ji) * &g3;
    let half_g2 = &g2 / &k(2);
    let wide = &(&k(ni - 2) * &g2) / &k(2);
    let terms: Vec<(LinForm, Rational)> = match item {
        LeyijItem::FixOneHitJ => vec![
            (b.into_i, &k(ni - ji) * &g3),
            (b.out_of_i, &k(ji - 2) * &g3),
            (b.away, half_g2),
        ],
        LeyijItem::SwapThroughOne => vec![
            (b.one_i, g2.clone()),
            (b.from_one, &k(ji - 2) * &g3),
            (b.into_i, &k(ni - 2) * &g3),
            (b.away, half_g2),
        ],
        LeyijItem::MoveOneHitJ => vec![
            (b.one_i, &k(ni - ji) * &g2),
            (b.from_one, &c2(ni - 1) * &g3),
            (b.out_of_i, mixed),
            (b.into_i, &k((ni - ji) * (ni - 3)) * &g3),
            (b.away, wide),
        ],
        LeyijItem::OneToJ => vec![
            (b.one_i, &k(ji - 2) * &g2),
            (b.from_one, mixed),
            (b.into_i, &c2(ni - 2) * &g3),
            (b.out_of_i, &c2(ni - 1) * &g3),
            (b.away, wide),
        ],
    };
    Ok(terms.into_iter().map(|(f, c)| f.scale(&c)).sum())
}

/// `Σ_i (n-2i+1)/2 (n-2)! X_i`, expanded from its definition.
pub fn leg_defining_sum(n: usize) -> Result<LinForm> {
    let (lambda, x) = prinv_factorization(n)?;
    Ok(lambda.iter().zip(&x).map(|(l, f)| f.scale(l)).sum())
}

/// `-(n-2)! Σ_{i<j} (j-i) y_{i,j}`
pub fn leg_closed(n: usize) -> LinForm {
    let g2 = Rational::from(factorial(n - 2));
    weighted_sum_y(n, |i, j| -(&g2 * &Rational::from(j - i)))
}

/// `(λ_j, X_i)` for `j, i ∈ 2..=n` with `λ_j = (n-2j+1)/2 (n-2)!` and
/// `X_i = 2y_{1,i} + Σ_{m∉{1,i}} y_{1,m} + Σ_{1<l<i} y_{l,i} - Σ_{m>i} y_{i,m}`.
pub fn prinv_factorization(n: usize) -> Result<(Vec<Rational>, Vec<LinForm>)> {
    if n < 4 {
        return Err(Error::Usage(format!("n must be at least 4, got {n}")));
    }
    let g2 = Rational::from(factorial(n - 2));
    let lambda = (2..=n).map(|j| &(&Rational::from_int(n as i64 - 2 * j as i64 + 1) * &g2) / &Rational::from_int(2)).collect();
    let x = (2..=n)
        .map(|i| {
            let b = y_blocks(n, i);
            &(&(&b.one_i.scale(&Rational::from_int(2)) + &b.from_one) + &b.into_i) - &b.out_of_i
        })
        .collect();
    Ok((lambda, x))
}

/// Whether every 2×2 minor of `m` is the zero polynomial.
pub fn rank_at_most_one(m: &Matrix<LinForm>) -> Option<(usize, usize, usize, usize)> {
    let p = m.to_poly();
    let (r, c) = (m.rows(), m.cols());
    for a in 0..r {
        for b in a + 1..r {
            for x in 0..c {
                for y in x + 1..c {
                    let minor = Poly::mul(p.get(a, x), p.get(b, y)).sub(&Poly::mul(p.get(a, y), p.get(b, x)));
                    if !Ring::is_zero(&minor) {
                        return Some((a, b, x, y));
                    }
                }
            }
        }
    }
    None
}

/// `{Σ λ_i x_i: 1, 0: n-1}` for the matrix `(λ_j x_i)`; the two merge
/// when the trace vanishes.
pub fn lex_spectrum(lambda: &[Rational], x: &[LinForm]) -> Result<SpectrumSpec> {
    if lambda.len() != x.len() || x.is_empty() {
        return Err(Error::Usage("λ and x must be nonempty and of equal length".into()));
    }
    if x.iter().all(LinForm::is_zero) {
        return Err(Error::Precondition("x must have a nonzero entry".into()));
    }
    let n = x.len();
    let trace: LinForm = lambda.iter().zip(x).map(|(l, f)| f.scale(l)).sum();
    let pairs = if trace.is_zero() { vec![(trace, n)] } else { vec![(trace, 1), (LinForm::zero(), n - 1)] };
    Ok(SpectrumSpec::new(MatrixKind::RankOne, n, pairs, "rank-one lemma"))
}

/// The matrix `(λ_j x_i)`, row `j`, column `i`.
pub fn rank_one_matrix(lambda: &[Rational], x: &[LinForm]) -> Matrix<LinForm> {
    Matrix::from_fn(lambda.len(), x.len(), |j, i| x[i].scale(&lambda[j]))
}

#[derive(Clone, Debug, Serialize)]
pub struct ThspReport {
    pub n: usize,
    /// The `f_z` action equals `n(n-2)!z·I`.
    pub fix_scalar: bool,
    /// Every 2×2 minor of the `i_y` action vanishes.
    pub inv_rank_one: bool,
    pub inv_trace_is_leg: bool,
    /// Entry `(j, i)` of the `i_y` action equals `λ_j X_i`.
    pub inv_factorization: bool,
    pub certification: CertificationReport,
    pub verdict: &'static str,
    pub failures: Vec<CheckFailure>,
}

impl ThspReport {
    pub fn passed(&self) -> bool {
        self.verdict == "PASS"
    }
}

/// Certifies the `S^(n-1,1)` spectrum of `i_y + f_z` together with the
/// identities it rests on.
pub fn verify_thsp(n: usize, seeds: &[u64]) -> Result<ThspReport> {
    if !(4..=7).contains(&n) {
        return Err(Error::Usage(format!("Specht verification supports 4 <= n <= 7, got {n}")));
    }
    let mut failures = Vec::new();
    let fix = specht_action(&element_of(StatKind::FixZ, n)?)?;
    let inv = specht_action(&element_of(StatKind::InvY, n)?)?;

    let scalar = LinForm::term(VarId::Z, (n * factorial(n - 2)) as i64);
    let fix_witness = (0..n - 1)
        .flat_map(|r| (0..n - 1).map(move |c| (r, c)))
        .find(|&(r, c)| *fix.get(r, c) != if r == c { scalar.clone() } else { LinForm::zero() });
    if let Some((r, c)) = fix_witness {
        failures.push(CheckFailure {
            check: "fix_scalar".into(),
            detail: format!("entry (v{}, v{}) is {}", r + 2, c + 2, fix.get(r, c)),
        });
    }

    let minor = rank_at_most_one(&inv);
    if let Some((a, b, x, y)) = minor {
        failures.push(CheckFailure {
            check: "inv_rank_one".into(),
            detail: format!("minor rows v{},v{} cols v{},v{} is nonzero", a + 2, b + 2, x + 2, y + 2),
        });
    }

    let trace = inv.trace_form();
    let leg = leg_closed(n);
    if trace != leg {
        failures.push(CheckFailure { check: "inv_trace".into(), detail: format!("trace {trace} vs {leg}") });
    }

    let (lambda, x) = prinv_factorization(n)?;
    let factor_witness = (0..n - 1)
        .flat_map(|r| (0..n - 1).map(move |c| (r, c)))
        .find(|&(r, c)| *inv.get(r, c) != x[c].scale(&lambda[r]));
    if let Some((r, c)) = factor_witness {
        failures.push(CheckFailure {
            check: "inv_factorization".into(),
            detail: format!("entry (v{}, v{}) is {}, expected {}", r + 2, c + 2, inv.get(r, c), x[c].scale(&lambda[r])),
        });
    }

    let sum = Matrix::from_fn(n - 1, n - 1, |r, c| inv.get(r, c) + fix.get(r, c));
    let spec = predicted_spectrum(MatrixKind::SpechtIF, n)?;
    let certification = certify_source(&spec, &MatrixSource::Explicit(sum), seeds)?;
    failures.extend(certification.failures.iter().cloned());

    let verdict = if failures.is_empty() { "PASS" } else { "FAIL" };
    Ok(ThspReport {
        n,
        fix_scalar: fix_witness.is_none(),
        inv_rank_one: minor.is_none(),
        inv_trace_is_leg: trace == leg,
        inv_factorization: factor_witness.is_none(),
        certification,
        verdict,
        failures,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{kernel_dim, mat_mul, random_assignment};
    use crate::config::DEFAULT_SEEDS;
    use crate::groupalg::convolve;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn identity_acts_trivially() {
        for n in 2..=5 {
            let e = GroupAlgebraElement::<Rational>::delta_identity(n, Rational::one()).unwrap();
            assert_eq!(specht_action(&e).unwrap(), Matrix::identity(n - 1));
        }
    }

    #[test]
    fn fix_action_is_scalar() {
        for n in 4..=6 {
            let m = specht_action(&element_of(StatKind::FixZ, n).unwrap()).unwrap();
            let s = LinForm::term(VarId::Z, (n * factorial(n - 2)) as i64);
            assert_eq!(m, Matrix::from_fn(n - 1, n - 1, |r, c| if r == c { s.clone() } else { LinForm::zero() }));
        }
    }

    #[test]
    fn inv_action_factorizes() {
        for n in 4..=5 {
            let m = specht_action(&element_of(StatKind::InvY, n).unwrap()).unwrap();
            assert_eq!(rank_at_most_one(&m), None);
            let (lambda, x) = prinv_factorization(n).unwrap();
            assert_eq!(m, rank_one_matrix(&lambda, &x));
            assert_eq!(m.trace_form(), leg_closed(n));
        }
    }

    #[test]
    fn leyij_examples() {
        let f = leyij_sums(4, 2, 3, LeyijItem::FixOneHitJ).unwrap();
        assert_eq!(f.coeff(VarId::y(2, 4)), Rational::from_int(1));
        let f = leyij_sums(4, 2, 2, LeyijItem::SwapThroughOne).unwrap();
        assert_eq!(f.coeff(VarId::y(1, 2)), Rational::from_int(2));
        assert!(leyij_sums(4, 1, 2, LeyijItem::FixOneHitJ).is_err());
        assert!(LeyijItem::from_index(5).is_err());
    }

    #[test]
    fn leyij_closed_forms_match_enumeration() {
        for n in 4..=5 {
            for i in 2..=n {
                for j in 2..=n {
                    for item in LeyijItem::ALL {
                        assert_eq!(
                            leyij_sums(n, i, j, item).unwrap(),
                            leyij_closed(n, i, j, item).unwrap(),
                            "n={n} i={i} j={j} {item:?}"
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn entry_is_the_four_sum_combination() {
        let n = 5;
        let m = specht_action(&element_of(StatKind::InvY, n).unwrap()).unwrap();
        for i in 2..=n {
            for j in 2..=n {
                let s = |k| leyij_sums(n, i, j, k).unwrap();
                let combo = &(&(&s(LeyijItem::FixOneHitJ) - &s(LeyijItem::SwapThroughOne)) + &s(LeyijItem::MoveOneHitJ))
                    - &s(LeyijItem::OneToJ);
                assert_eq!(*m.get(j - 2, i - 2), combo);
            }
        }
    }

    #[test]
    fn leg_identity() {
        let g = leg_closed(4);
        assert_eq!(g.coeff(VarId::y(1, 2)), Rational::from_int(-2));
        assert_eq!(g.coeff(VarId::y(2, 4)), Rational::from_int(-4));
        for n in 4..=7 {
            assert_eq!(leg_defining_sum(n).unwrap(), leg_closed(n), "n={n}");
        }
    }

    #[test]
    fn lex_examples() {
        let y = |i, j| LinForm::var(VarId::y(i, j));
        let s = lex_spectrum(&[Rational::one(), Rational::one()], &[y(1, 2), y(1, 3)]).unwrap();
        assert_eq!(s.eigenpairs[0].value, &y(1, 2) + &y(1, 3));
        assert_eq!((s.eigenpairs[0].mult, s.eigenpairs[1].mult), (1, 1));
        let z = LinForm::var(VarId::Z);
        let s = lex_spectrum(&[Rational::one(), Rational::zero(), Rational::zero()], &[z.clone(), z.clone(), z]).unwrap();
        assert_eq!((s.eigenpairs[0].value.to_string(), s.eigenpairs[0].mult, s.eigenpairs[1].mult), ("z".into(), 1, 2));
        assert!(matches!(lex_spectrum(&[Rational::one()], &[LinForm::zero()]), Err(Error::Precondition(_))));
    }

    #[test]
    fn lex_random_rank_one_kernels() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let vars = [VarId::Z, VarId::y(1, 2), VarId::y(2, 3)];
        let lambda: Vec<Rational> = (0..5).map(|_| Rational::new(rng.gen_range(-9..=9), rng.gen_range(1..=4))).collect();
        let x: Vec<LinForm> = (0..5)
            .map(|_| {
                LinForm::from_terms(vars.iter().map(|v| (*v, Rational::from_int(rng.gen_range(-5..=5)))), Rational::zero())
            })
            .collect();
        let spec = lex_spectrum(&lambda, &x).unwrap();
        let m = rank_one_matrix(&lambda, &x);
        let a = random_assignment(&m.vars(), 3, &spec.values()).unwrap();
        let num = m.specialize(&a).unwrap();
        assert_eq!(kernel_dim(&num).unwrap(), 4);
        let tr = spec.eigenpairs[0].value.eval(&a).unwrap();
        assert_eq!(kernel_dim(&num.shift_diagonal(&tr).unwrap()).unwrap(), 1);
    }

    #[test]
    fn action_is_an_algebra_map() {
        let n = 4;
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let mut draw = || {
            let c: Vec<Rational> = (0..24).map(|_| Rational::from_int(rng.gen_range(-4..=4))).collect();
            GroupAlgebraElement::new(n, c).unwrap()
        };
        for _ in 0..4 {
            let (a, b) = (draw(), draw());
            let lhs = specht_action(&convolve(&a, &b).unwrap()).unwrap();
            let rhs = mat_mul(&specht_action(&a).unwrap(), &specht_action(&b).unwrap()).unwrap();
            assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn thsp_small() {
        for n in 4..=5 {
            let r = verify_thsp(n, &DEFAULT_SEEDS).unwrap();
            assert!(r.passed(), "{:?}", r.failures);
            let dims: Vec<Vec<usize>> = r.certification.eigen.iter().map(|e| e.kernel_dims.clone()).collect();
            assert_eq!(dims, vec![vec![1; 3], vec![n - 2; 3]]);
        }
        assert!(verify_thsp(3, &DEFAULT_SEEDS).is_err());
    }

    #[test]
    fn csv_labels() {
        let m = specht_action(&element_of(StatKind::FixZ, 4).unwrap()).unwrap();
        let mut out = Vec::new();
        write_specht_csv(&m, 4, &mut out).unwrap();
        let text = String::from_utf8(out).unwrap();
        assert!(text.starts_with(",v2,v3,v4\nv2,8*z,0,0\n"), "{text}");
    }
}
