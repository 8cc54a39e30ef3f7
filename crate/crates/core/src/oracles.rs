//! Brute-force verifiers for the counting lemmas and convolution identities,
//! and the errata ledger built from them.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::algebra::{kernel_dim, Assignment, LinForm, Poly, Rational, VarId};
use crate::characters::{character_sum_dichotomy, CharacterMemo, Partition};
use crate::config::{DEFAULT_SEEDS, MAX_CERTIFY_N};
use crate::error::{Error, Result};
use crate::groupalg::{convolve, element_of, GroupAlgebraElement};
use crate::par;
use crate::perm::{enumerate, factorial, Cycle, Permutation};
use crate::specht::{self, LeyijItem};
use crate::spectra::{self, MatrixKind, MatrixSource};
use crate::stats::StatKind;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    Pass,
    Fail,
    /// A mismatch with a printed statement that the ledger already explains.
    KnownErratum,
}

impl Serialize for Verdict {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(match self {
            Verdict::Pass => "PASS",
            Verdict::Fail => "FAIL",
            Verdict::KnownErratum => "KNOWN_ERRATUM",
        })
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct LemmaCheck {
    pub lemma: String,
    pub n: usize,
    pub params: Vec<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub item: Option<usize>,
    pub closed: String,
    pub brute: String,
    pub verdict: Verdict,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl LemmaCheck {
    fn compare<T: PartialEq + fmt::Display>(lemma: &str, n: usize, params: Vec<usize>, item: Option<usize>, closed: T, brute: T) -> Self {
        LemmaCheck {
            lemma: lemma.to_string(),
            n,
            params,
            item,
            verdict: if closed == brute { Verdict::Pass } else { Verdict::Fail },
            closed: closed.to_string(),
            brute: brute.to_string(),
            note: None,
        }
    }

    pub fn failed(&self) -> bool {
        self.verdict == Verdict::Fail
    }
}

fn check_range(what: &str, n: usize, lo: usize, hi: usize) -> Result<()> {
    if n < lo {
        return Err(Error::Usage(format!("{what} needs n >= {lo}, got {n}")));
    }
    if n > hi {
        return Err(Error::ResourceCap(format!("{what} supports n <= {hi}, got {n}")));
    }
    Ok(())
}

fn fact(n: usize) -> i64 {
    factorial(n) as i64
}

/// Ordered pairs of distinct points of `[n]`.
fn pairs(n: usize) -> Vec<(usize, usize)> {
    (1..=n).flat_map(|i| (1..=n).filter(move |&j| j != i).map(move |j| (i, j))).collect()
}

fn triples(n: usize) -> Vec<(usize, usize, usize)> {
    pairs(n)
        .into_iter()
        .flat_map(|(i, j)| (1..=n).filter(move |&k| k != i && k != j).map(move |k| (i, j, k)))
        .collect()
}

/// Fix-sums over the sets `{σ(i)=i, σ(j)=j}`, `{σ(i)=i, σ(j)≠j}`,
/// `{σ(i)=j, σ(j)=i}`, `{σ(i)=j, σ(j)≠i}` for every ordered pair.
pub fn leij_check(n: usize) -> Result<Vec<LemmaCheck>> {
    check_range("leij", n, 4, 7)?;
    let perms = enumerate(n)?;
    let g2 = fact(n - 2);
    let ni = n as i64;
    let closed = [3 * g2, (2 * ni - 5) * g2, g2, (ni - 3) * g2];
    let rows = par::map_slice(&pairs(n), |&(i, j)| {
        let mut sums = [0i64; 4];
        for s in &perms {
            let (si, sj, f) = (s.apply(i), s.apply(j), s.fix_count() as i64);
            let hit = [si == i && sj == j, si == i && sj != j, si == j && sj == i, si == j && sj != i];
            for (acc, h) in sums.iter_mut().zip(hit) {
                if h {
                    *acc += f;
                }
            }
        }
        (0..4).map(|k| LemmaCheck::compare("leij", n, vec![i, j], Some(k + 1), closed[k], sums[k])).collect::<Vec<_>>()
    });
    Ok(rows.concat())
}

/// The six constrained fix-sums over distinct triples `(i, j, k)`.
pub fn leijk_check(n: usize) -> Result<Vec<LemmaCheck>> {
    check_range("leijk", n, 4, 7)?;
    let perms = enumerate(n)?;
    let g3 = fact(n - 3);
    let ni = n as i64;
    let closed = [
        (2 * ni - 5) * g3,
        (ni * ni - 6 * ni + 9) * g3,
        (2 * ni * ni - 8 * ni + 9) * g3,
        (ni - 3) * g3,
        (ni * ni - 5 * ni + 7) * g3,
        (ni * ni - 5 * ni + 7) * g3,
    ];
    let rows = par::map_slice(&triples(n), |&(i, j, k)| {
        let mut sums = [0i64; 6];
        for s in &perms {
            let (si, sj, f) = (s.apply(i), s.apply(j), s.fix_count() as i64);
            let hit = [
                si == k && sj == j,
                si == k && sj != j,
                si != k && sj == j,
                si == j && sj == k,
                si == j && sj != k,
                si != j && sj == k,
            ];
            for (acc, h) in sums.iter_mut().zip(hit) {
                if h {
                    *acc += f;
                }
            }
        }
        (0..6).map(|t| LemmaCheck::compare("leijk", n, vec![i, j, k], Some(t + 1), closed[t], sums[t])).collect::<Vec<_>>()
    });
    Ok(rows.concat())
}

/// Constrained inversion sums against their closed forms, `i, j ∈ 2..=n`.
pub fn leyij_check(n: usize) -> Result<Vec<LemmaCheck>> {
    check_range("leyij", n, 4, 6)?;
    let params: Vec<(usize, usize)> = (2..=n).flat_map(|i| (2..=n).map(move |j| (i, j))).collect();
    let rows = par::map_slice(&params, |&(i, j)| {
        LeyijItem::ALL
            .iter()
            .map(|&item| {
                Ok(LemmaCheck::compare(
                    "leyij",
                    n,
                    vec![i, j],
                    Some(item as usize),
                    specht::leyij_closed(n, i, j, item)?,
                    specht::leyij_sums(n, i, j, item)?,
                ))
            })
            .collect::<Result<Vec<_>>>()
    });
    Ok(rows.into_iter().collect::<Result<Vec<_>>>()?.concat())
}

/// `S(ρ) = Σ_σ fix(σ) fix(σ⁻¹ρ)`.
fn fix_correlation(perms: &[Permutation], inverses: &[Permutation], rho: &Permutation) -> i64 {
    perms
        .iter()
        .zip(inverses)
        .map(|(s, si)| s.fix_count() as i64 * si.compose_unchecked(rho).fix_count() as i64)
        .sum()
}

/// `S(τ) = S(ι) - n(n-2)!(n - fix τ)` for every τ.
pub fn prfix_check(n: usize) -> Result<Vec<LemmaCheck>> {
    check_range("prfix", n, 4, 6)?;
    let perms = enumerate(n)?;
    let inverses: Vec<Permutation> = perms.iter().map(Permutation::inverse).collect();
    let base = fix_correlation(&perms, &inverses, &perms[0]);
    let c = (n as i64) * fact(n - 2);
    Ok(par::map_slice(&perms, |tau| {
        let lhs = fix_correlation(&perms, &inverses, tau);
        let rhs = base - c * (n as i64 - tau.fix_count() as i64);
        let mut check = LemmaCheck::compare("prfix", n, vec![tau.rank()], None, rhs, lhs);
        check.note = Some(format!("tau = {tau}"));
        check
    }))
}

/// Sum of `fix(σ)·(fix(σ⁻¹τ) - fix(σ⁻¹τ'))` over σ satisfying `pred`.
fn set_difference(
    perms: &[Permutation],
    inverses: &[Permutation],
    tau: &Permutation,
    tau2: &Permutation,
    pred: impl Fn(&Permutation) -> bool,
) -> i64 {
    perms
        .iter()
        .zip(inverses)
        .filter(|(s, _)| pred(s))
        .map(|(s, si)| {
            s.fix_count() as i64
                * (si.compose_unchecked(tau).fix_count() as i64 - si.compose_unchecked(tau2).fix_count() as i64)
        })
        .sum()
}

/// A named subset of the group, given by membership.
type SetPredicate<'a> = Box<dyn Fn(&Permutation) -> bool + 'a>;

/// The one-step recurrences `S(τ·(a b)) = S(τ) - n(n-2)!(fix τ - fix τ(a b))`
/// for both admissible shapes, together with the per-set differences that
/// add up to them.
pub fn transposition_recurrence_check(n: usize) -> Result<Vec<LemmaCheck>> {
    check_range("recurrence", n, 4, 5)?;
    let perms = enumerate(n)?;
    let inverses: Vec<Permutation> = perms.iter().map(Permutation::inverse).collect();
    let ni = n as i64;
    let (g2, g3) = (fact(n - 2), fact(n - 3));
    let c = ni * g2;

    struct Instance {
        tau: usize,
        a: usize,
        b: usize,
        /// `Some(i_1)` when `a = i_k` lies on a cycle with successor `i_1`.
        head: Option<usize>,
    }
    let mut instances = Vec::new();
    for (t, tau) in perms.iter().enumerate() {
        let fixed: Vec<usize> = tau.fixed_points().collect();
        for (x, &i) in fixed.iter().enumerate() {
            for &j in &fixed[x + 1..] {
                instances.push(Instance { tau: t, a: i, b: j, head: None });
            }
        }
        for cycle in tau.cycles() {
            for &ik in cycle.support() {
                for &j in &fixed {
                    instances.push(Instance { tau: t, a: ik as usize, b: j, head: Some(tau.apply(ik as usize)) });
                }
            }
        }
    }

    Ok(par::map_slice(&instances, |inst| {
        let tau = &perms[inst.tau];
        let tau2 = tau.compose_unchecked(&Cycle::transposition(inst.a, inst.b).to_permutation(n));
        let lhs = fix_correlation(&perms, &inverses, &tau2);
        let rhs = fix_correlation(&perms, &inverses, tau) - c * (tau.fix_count() as i64 - tau2.fix_count() as i64);
        let (a, b) = (inst.a, inst.b);
        let diff = |pred: &dyn Fn(&Permutation) -> bool| set_difference(&perms, &inverses, tau, &tau2, pred);
        let mut bad = Vec::new();
        let (lemma, params) = match inst.head {
            None => {
                let sets: [(&str, SetPredicate<'_>, i64); 7] = [
                    ("a->a,b->b", Box::new(|s: &Permutation| s.apply(a) == a && s.apply(b) == b), 6 * g2),
                    ("a->a,b-/>b", Box::new(|s: &Permutation| s.apply(a) == a && s.apply(b) != b), (2 * ni - 5) * g2),
                    ("b->b,a-/>a", Box::new(|s: &Permutation| s.apply(b) == b && s.apply(a) != a), (2 * ni - 5) * g2),
                    ("a->b,b-/>a", Box::new(|s: &Permutation| s.apply(a) == b && s.apply(b) != a), (3 - ni) * g2),
                    ("b->a,a-/>b", Box::new(|s: &Permutation| s.apply(b) == a && s.apply(a) != b), (3 - ni) * g2),
                    ("a->b,b->a", Box::new(|s: &Permutation| s.apply(a) == b && s.apply(b) == a), -2 * g2),
                    (
                        "a,b avoid {a,b}",
                        Box::new(|s: &Permutation| ![a, b].contains(&s.apply(a)) && ![a, b].contains(&s.apply(b))),
                        0,
                    ),
                ];
                for (name, pred, expected) in &sets {
                    let got = diff(pred.as_ref());
                    if got != *expected {
                        bad.push(format!("{name}: {got} vs {expected}"));
                    }
                }
                ("eqij", vec![inst.tau, a, b])
            }
            Some(h) => {
                let sets: [(&str, SetPredicate<'_>, i64); 7] = [
                    ("ik->i1,j->j", Box::new(|s: &Permutation| s.apply(a) == h && s.apply(b) == b), 2 * (2 * ni - 5) * g3),
                    (
                        "ik->i1,j-/>j",
                        Box::new(|s: &Permutation| s.apply(a) == h && s.apply(b) != b),
                        (ni * ni - 6 * ni + 9) * g3,
                    ),
                    (
                        "ik-/>i1,j->j",
                        Box::new(|s: &Permutation| s.apply(a) != h && s.apply(b) == b),
                        (2 * ni * ni - 8 * ni + 9) * g3,
                    ),
                    (
                        "ik->j,j-/>i1",
                        Box::new(|s: &Permutation| s.apply(a) == b && s.apply(b) != h),
                        -(ni * ni - 5 * ni + 7) * g3,
                    ),
                    (
                        "ik-/>j,j->i1",
                        Box::new(|s: &Permutation| s.apply(a) != b && s.apply(b) == h),
                        -(ni * ni - 5 * ni + 7) * g3,
                    ),
                    ("ik->j,j->i1", Box::new(|s: &Permutation| s.apply(a) == b && s.apply(b) == h), -2 * (ni - 3) * g3),
                    (
                        "ik,j avoid {i1,j}",
                        Box::new(|s: &Permutation| ![h, b].contains(&s.apply(a)) && ![h, b].contains(&s.apply(b))),
                        0,
                    ),
                ];
                for (name, pred, expected) in &sets {
                    let got = diff(pred.as_ref());
                    if got != *expected {
                        bad.push(format!("{name}: {got} vs {expected}"));
                    }
                }
                ("eqijk", vec![inst.tau, a, b])
            }
        };
        let mut check = LemmaCheck::compare(lemma, n, params, None, rhs, lhs);
        if !bad.is_empty() {
            check.verdict = Verdict::Fail;
        }
        check.note = Some(if bad.is_empty() {
            format!("tau = {tau}, transposition ({a} {b})")
        } else {
            format!("tau = {tau}, transposition ({a} {b}); set differences off: {}", bad.join("; "))
        });
        check
    }))
}

/// `Σ_σ fix(σ)²` by enumeration.
pub fn sum_fix_sq(n: usize) -> Result<u64> {
    check_range("sum_fix_sq", n, 1, 7)?;
    Ok(enumerate(n)?.iter().map(|s| (s.fix_count() * s.fix_count()) as u64).sum())
}

/// The value `n²(n-2)!((n-2)(n-1)! + 1)` that the closing remark of the
/// `F` section derives from the printed `Λ`.
pub fn printed_fix_sq(n: usize) -> u64 {
    let n64 = n as u64;
    n64 * n64 * factorial(n - 2) as u64 * ((n64 - 2) * factorial(n - 1) as u64 + 1)
}

pub fn fixsq_check(n: usize) -> Result<Vec<LemmaCheck>> {
    let brute = sum_fix_sq(n)?;
    let closed = if n == 1 { 1 } else { 2 * factorial(n) as u64 };
    let mut out = vec![LemmaCheck::compare("fixsq", n, vec![], None, closed, brute)];
    if n >= 4 {
        let printed = printed_fix_sq(n);
        let mut remark = LemmaCheck::compare("fixsq_remark", n, vec![], None, printed, brute);
        if remark.failed() {
            remark.verdict = Verdict::KnownErratum;
            remark.note = Some("printed remark value disagrees with enumeration; see errata entry fix-square-remark".into());
        }
        out.push(remark);
    }
    Ok(out)
}

#[derive(Clone, Debug, Serialize)]
pub struct LambdaReport {
    pub n: usize,
    /// Every coefficient of `f_z·(f_z - n(n-2)!z·ι)` is the same.
    pub constant_coefficients: bool,
    pub lambda: String,
    pub expected: String,
    /// `Λ + n²(n-2)!z² = (Σ fix²) z²`
    pub identity_cross_check: bool,
    /// `n!·Λ` equals the product of the top eigenvalues `n!z · n(n-2)(n-2)!z`.
    pub eigenvalue_reconciliation: bool,
    pub printed: String,
    pub verdict: bool,
}

fn z_squared(c: i64) -> Poly {
    Poly::var(VarId::Z).mul(&Poly::var(VarId::Z)).scale(&Rational::from_int(c))
}

pub fn lambda_report(n: usize) -> Result<LambdaReport> {
    check_range("lambda", n, 4, 5)?;
    let f = element_of(StatKind::FixZ, n)?.to_poly();
    let shift = Poly::from(&LinForm::term(VarId::Z, (n * factorial(n - 2)) as i64));
    let x = f.sub(&GroupAlgebraElement::delta_identity(n, shift)?)?;
    let prod = convolve(&f, &x)?;
    let lambda = prod.coeffs()[0].clone();
    let constant_coefficients = prod.coeffs().iter().all(|c| *c == lambda);
    let ni = n as i64;
    let expected = z_squared(ni * (ni - 2) * fact(n - 2));
    let identity_cross_check = lambda.add(&z_squared(ni * ni * fact(n - 2))) == z_squared(sum_fix_sq(n)? as i64);
    let top = z_squared(fact(n) * ni * (ni - 2) * fact(n - 2));
    let eigenvalue_reconciliation = lambda.scale(&Rational::from(factorial(n))) == top;
    let printed = z_squared(ni * (ni - 2) * fact(n - 2) * fact(n));
    let verdict = constant_coefficients && lambda == expected && identity_cross_check && eigenvalue_reconciliation;
    Ok(LambdaReport {
        n,
        constant_coefficients,
        lambda: lambda.to_string(),
        expected: expected.to_string(),
        identity_cross_check,
        eigenvalue_reconciliation,
        printed: printed.to_string(),
        verdict,
    })
}

pub fn lambda_check(n: usize) -> Result<Vec<LemmaCheck>> {
    let r = lambda_report(n)?;
    let mut check = LemmaCheck::compare("lambda", n, vec![], None, r.expected.clone(), r.lambda.clone());
    if !r.verdict {
        check.verdict = Verdict::Fail;
    }
    check.note = Some(format!(
        "constant coefficients {}, cross-check {}, eigenvalue reconciliation {}",
        r.constant_coefficients, r.identity_cross_check, r.eigenvalue_reconciliation
    ));
    let mut printed = LemmaCheck::compare("lambda_printed", n, vec![], None, r.printed.clone(), r.lambda.clone());
    if printed.failed() {
        printed.verdict = Verdict::KnownErratum;
        printed.note = Some("printed Λ carries an extra n! factor; see errata entry lambda-factor".into());
    }
    Ok(vec![check, printed])
}

pub fn leg_check(n: usize) -> Result<Vec<LemmaCheck>> {
    check_range("leg", n, 4, 8)?;
    Ok(vec![LemmaCheck::compare("leg", n, vec![], None, specht::leg_closed(n), specht::leg_defining_sum(n)?)])
}

pub fn lej_check(n: usize) -> Result<Vec<LemmaCheck>> {
    check_range("lej", n, 1, 5)?;
    let r = spectra::lej_spectrum_check(n, &LinForm::var(VarId::Z), &DEFAULT_SEEDS)?;
    let brute: Vec<String> = r.certification.eigen.iter().map(|e| format!("{}: {:?}", e.value, e.kernel_dims)).collect();
    let mut check = LemmaCheck::compare(
        "lej",
        n,
        vec![],
        None,
        format!("{}*z: 1, 0: {}", factorial(n), factorial(n) - 1),
        brute.join(", "),
    );
    check.verdict = if r.verdict { Verdict::Pass } else { Verdict::Fail };
    check.note = Some(format!(
        "perron vector {}, difference vectors {}",
        r.perron_vector, r.difference_vectors
    ));
    Ok(vec![check])
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Suite {
    Leij,
    Leijk,
    Leyij,
    Prfix,
    Recurrence,
    Leg,
    Lej,
    Lambda,
    Fixsq,
}

impl Suite {
    pub const ALL: [Suite; 9] = [
        Suite::Leij,
        Suite::Leijk,
        Suite::Leyij,
        Suite::Prfix,
        Suite::Recurrence,
        Suite::Leg,
        Suite::Lej,
        Suite::Lambda,
        Suite::Fixsq,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Leij => "leij",
            Suite::Leijk => "leijk",
            Suite::Leyij => "leyij",
            Suite::Prfix => "prfix",
            Suite::Recurrence => "recurrence",
            Suite::Leg => "leg",
            Suite::Lej => "lej",
            Suite::Lambda => "lambda",
            Suite::Fixsq => "fixsq",
        }
    }

    /// Degrees the suite accepts.
    pub fn range(self) -> (usize, usize) {
        match self {
            Suite::Leij | Suite::Leijk => (4, 7),
            Suite::Leyij | Suite::Prfix => (4, 6),
            Suite::Recurrence | Suite::Lambda => (4, 5),
            Suite::Leg => (4, 8),
            Suite::Lej => (1, 5),
            Suite::Fixsq => (1, 7),
        }
    }

    pub fn supports(self, n: usize) -> bool {
        let (lo, hi) = self.range();
        (lo..=hi).contains(&n)
    }

    pub fn run(self, n: usize) -> Result<Vec<LemmaCheck>> {
        match self {
            Suite::Leij => leij_check(n),
            Suite::Leijk => leijk_check(n),
            Suite::Leyij => leyij_check(n),
            Suite::Prfix => prfix_check(n),
            Suite::Recurrence => transposition_recurrence_check(n),
            Suite::Leg => leg_check(n),
            Suite::Lej => lej_check(n),
            Suite::Lambda => lambda_check(n),
            Suite::Fixsq => fixsq_check(n),
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL
            .into_iter()
            .find(|k| k.name().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| Error::Parse(format!("unknown suite {s:?}")))
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ErratumEntry {
    pub id: &'static str,
    pub statement: &'static str,
    pub printed: String,
    pub computed: String,
    pub witness_n: usize,
    /// The computation reproduces the discrepancy.
    pub confirmed: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct Unexpected {
    pub source: String,
    pub detail: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct ErrataReport {
    pub nmax: usize,
    pub entries: Vec<ErratumEntry>,
    pub unexpected: Vec<Unexpected>,
    pub verdict: &'static str,
}

impl ErrataReport {
    pub fn passed(&self) -> bool {
        self.verdict == "PASS"
    }
}

/// Inversions under the printed rule: pairs `i < j` with `σ(i) > σ(i+1)`.
fn literal_inv(s: &Permutation) -> LinForm {
    let n = s.n();
    LinForm::from_terms(
        (1..n)
            .filter(|&i| s.apply(i) > s.apply(i + 1))
            .flat_map(|i| (i + 1..=n).map(move |j| (VarId::y(i, j), Rational::one()))),
        Rational::zero(),
    )
}

fn inv_definition_entry() -> Result<ErratumEntry> {
    let n = 4;
    let perms = enumerate(n)?;
    for (i, j) in (2..=n).flat_map(|i| (2..=n).map(move |j| (i, j))) {
        for item in LeyijItem::ALL {
            let closed = specht::leyij_closed(n, i, j, item)?;
            let literal: LinForm = perms
                .iter()
                .filter(|s| match item {
                    LeyijItem::FixOneHitJ => s.apply(1) == 1 && s.apply(i) == j,
                    LeyijItem::SwapThroughOne => s.apply(1) == j && s.apply(i) == 1,
                    LeyijItem::MoveOneHitJ => s.apply(1) != 1 && s.apply(i) == j,
                    LeyijItem::OneToJ => s.apply(1) == j && s.apply(i) != 1,
                })
                .map(literal_inv)
                .sum();
            if literal != closed {
                let standard = specht::leyij_sums(n, i, j, item)?;
                return Ok(ErratumEntry {
                    id: "inv-definition",
                    statement: "The inversion set is defined by comparing σ(i) with σ(i+1) instead of σ(j); the inversion-sum closed forms only hold for the standard rule.",
                    printed: format!("item {} at (i,j)=({i},{j}) under the printed rule: {literal}", item as usize),
                    computed: format!("closed form {closed}; standard rule gives {standard}"),
                    witness_n: n,
                    confirmed: standard == closed,
                });
            }
        }
    }
    Err(Error::Internal("printed inversion rule agrees with every closed form at n = 4".into()))
}

fn fix_square_entry(nmax: usize) -> Result<ErratumEntry> {
    let witness = (4..=nmax.max(4)).find(|&n| sum_fix_sq(n).map(|v| v != printed_fix_sq(n)).unwrap_or(false)).unwrap_or(4);
    let brute = sum_fix_sq(witness)?;
    Ok(ErratumEntry {
        id: "fix-square-remark",
        statement: "The closing remark of the F section gives Σ fix(σ)² = n²(n-2)!((n-2)(n-1)! + 1); enumeration gives 2·n!.",
        printed: printed_fix_sq(witness).to_string(),
        computed: brute.to_string(),
        witness_n: witness,
        confirmed: brute != printed_fix_sq(witness) && brute == 2 * factorial(witness) as u64,
    })
}

fn lambda_entry() -> Result<ErratumEntry> {
    let r = lambda_report(4)?;
    Ok(ErratumEntry {
        id: "lambda-factor",
        statement: "Λ is stated as n(n-2)(n-2)!n!z²; the convolution gives n(n-2)(n-2)!z², the n! belonging to the eigenvalue n!·Λ of the all-Λ matrix.",
        printed: r.printed.clone(),
        computed: r.lambda.clone(),
        witness_n: 4,
        confirmed: r.verdict && r.printed != r.lambda,
    })
}

fn mif_entry() -> Result<ErratumEntry> {
    let n = 4;
    let m = MatrixSource::build(MatrixKind::MIF, n)?.specialize(&Assignment::empty(), None)?;
    let printed = Rational::from_int(-2 * fact(n) / 6);
    let corrected = Rational::from_int(-2 * fact(n) / 3);
    let d_printed = kernel_dim(&m.shift_diagonal(&printed)?)?;
    let d_corrected = kernel_dim(&m.shift_diagonal(&corrected)?)?;
    let want = (n - 1) * (n - 2) / 2;
    Ok(ErratumEntry {
        id: "mif-third-eigenvalue",
        statement: "The MIF spectrum set lists -2n!/6 while its multiplicity line uses -2n!/3; only -2n!/3 is an eigenvalue.",
        printed: format!("{printed}: kernel dim {d_printed}"),
        computed: format!("{corrected}: kernel dim {d_corrected}"),
        witness_n: n,
        confirmed: d_printed == 0 && d_corrected == want,
    })
}

fn if3_display_entry() -> Result<ErratumEntry> {
    let r = spectra::certify(&spectra::predicted_spectrum(MatrixKind::IF, 3)?, &DEFAULT_SEEDS)?;
    let e = &r.eigen[1];
    Ok(ErratumEntry {
        id: "if3-display-parenthesis",
        statement: "The n = 3 multiplicity line for -y[1,2] + y[1,3] - y[2,3] has an unbalanced parenthesis; read as multiplicity 1.",
        printed: "unbalanced multiplicity expression".into(),
        computed: format!("{}: kernel dims {:?}", e.value, e.kernel_dims),
        witness_n: 3,
        confirmed: r.passed() && e.kernel_dims.iter().all(|&d| d == 1),
    })
}

fn dichotomy_entry() -> Result<ErratumEntry> {
    let n = 4;
    let report = character_sum_dichotomy(n, &mut CharacterMemo::new())?;
    let sum_of = |p: Partition| report.entries.iter().find(|e| e.partition == p).map(|e| e.sum).unwrap_or(0);
    let sign = sum_of(Partition::new(vec![1; n])?);
    let trivial = sum_of(Partition::new(vec![n])?);
    Ok(ErratumEntry {
        id: "dichotomy-label",
        statement: "The character-sum dichotomy names (1,…,1) as a nonzero partition; the nonzero ones are (n) and (n-1,1).",
        printed: format!("S(1,1,1,1) = {} (claimed)", fact(n)),
        computed: format!("S(1,1,1,1) = {sign}, S(4) = {trivial}"),
        witness_n: n,
        confirmed: sign == 0 && trivial == fact(n) && report.verdict,
    })
}

fn prinv_entry() -> Result<ErratumEntry> {
    let n = 4;
    let m = specht::specht_action(&element_of(StatKind::InvY, n)?)?;
    let g = specht::leg_closed(n);
    let entry = m.get(0, 1).clone();
    Ok(ErratumEntry {
        id: "prinv-final-display",
        statement: "The last step of the i_y action computation equates a single entry with g; entries are λ_j X_i and only the trace equals g.",
        printed: g.to_string(),
        computed: format!("entry (v2, v3) = {entry}; trace = {}", m.trace_form()),
        witness_n: n,
        confirmed: entry != g && m.trace_form() == g,
    })
}

fn eqijk_label_entry() -> Result<ErratumEntry> {
    let checks = transposition_recurrence_check(4)?;
    let eqijk: Vec<&LemmaCheck> = checks.iter().filter(|c| c.lemma == "eqijk").collect();
    let ok = !eqijk.is_empty() && eqijk.iter().all(|c| c.verdict == Verdict::Pass);
    Ok(ErratumEntry {
        id: "eqijk-transposition-label",
        statement: "The cycle-case recurrence writes the transposition as (i j) on its left side and (i_k j) on its right; it holds with (i_k j) on both.",
        printed: "(i j) on the left side".into(),
        computed: format!("{} instances pass with (i_k j)", eqijk.len()),
        witness_n: 4,
        confirmed: ok,
    })
}

/// Every known erratum, each with a fresh witness computation.
pub fn known_errata(nmax: usize) -> Result<Vec<ErratumEntry>> {
    Ok(vec![
        inv_definition_entry()?,
        fix_square_entry(nmax)?,
        lambda_entry()?,
        mif_entry()?,
        if3_display_entry()?,
        dichotomy_entry()?,
        prinv_entry()?,
        eqijk_label_entry()?,
    ])
}

/// Runs every suite and registry certification for `n ≤ nmax`; any failure
/// not explained by a known erratum is reported as unexpected.
pub fn errata_ledger(nmax: usize) -> Result<ErrataReport> {
    check_range("errata", nmax, 4, MAX_CERTIFY_N)?;
    let entries = known_errata(nmax)?;
    let mut unexpected = Vec::new();
    for e in &entries {
        if !e.confirmed {
            unexpected.push(Unexpected {
                source: e.id.to_string(),
                detail: format!("known erratum not reproduced: printed {} vs computed {}", e.printed, e.computed),
            });
        }
    }
    for n in 1..=3 {
        let r = spectra::certify(&spectra::predicted_spectrum(MatrixKind::IF, n)?, &DEFAULT_SEEDS)?;
        for f in &r.failures {
            unexpected.push(Unexpected { source: format!("certify IF n={n}"), detail: f.detail.clone() });
        }
    }
    for n in 1..=nmax {
        for suite in Suite::ALL.into_iter().filter(|s| s.supports(n)) {
            for c in suite.run(n)?.into_iter().filter(LemmaCheck::failed) {
                unexpected.push(Unexpected {
                    source: format!("{suite} n={n}"),
                    detail: format!("params {:?} item {:?}: closed {} vs brute {}", c.params, c.item, c.closed, c.brute),
                });
            }
        }
        if n < 4 {
            continue;
        }
        for kind in [MatrixKind::F, MatrixKind::IF, MatrixKind::DIF, MatrixKind::MIF] {
            let r = spectra::certify(&spectra::predicted_spectrum(kind, n)?, &DEFAULT_SEEDS)?;
            for f in &r.failures {
                unexpected.push(Unexpected { source: format!("certify {kind} n={n}"), detail: f.detail.clone() });
            }
        }
        let sp = specht::verify_thsp(n, &DEFAULT_SEEDS)?;
        for f in &sp.failures {
            unexpected.push(Unexpected { source: format!("specht n={n}"), detail: f.detail.clone() });
        }
        let d = character_sum_dichotomy(n, &mut CharacterMemo::new())?;
        if !d.verdict {
            unexpected.push(Unexpected { source: format!("dichotomy n={n}"), detail: format!("nonzero {:?}", d.nonzero) });
        }
    }
    let verdict = if unexpected.is_empty() { "PASS" } else { "FAIL" };
    Ok(ErrataReport { nmax, entries, unexpected, verdict })
}

#[derive(Clone, Debug, Serialize)]
pub struct PropertyCheck {
    pub suite: &'static str,
    pub name: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    pub passed: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct PropertiesReport {
    pub seeds: Vec<u64>,
    pub checks: Vec<PropertyCheck>,
    pub verdict: &'static str,
}

impl PropertiesReport {
    pub fn passed(&self) -> bool {
        self.verdict == "PASS"
    }
}

fn prop(suite: &'static str, name: impl Into<String>, seed: Option<u64>, passed: bool) -> PropertyCheck {
    PropertyCheck { suite, name: name.into(), seed, passed }
}

fn group_axiom_checks(seeds: &[u64]) -> Result<Vec<PropertyCheck>> {
    use rand::{Rng, SeedableRng};
    let mut out = Vec::new();
    for n in 1..=4 {
        let perms = enumerate(n)?;
        let id = Permutation::identity(n);
        let identity = perms.iter().all(|s| s.compose_unchecked(&id) == *s && id.compose_unchecked(s) == *s);
        let inverse = perms.iter().all(|s| s.compose_unchecked(&s.inverse()).is_identity());
        let assoc = perms.iter().all(|a| {
            perms.iter().all(|b| {
                let ab = a.compose_unchecked(b);
                perms.iter().all(|c| ab.compose_unchecked(c) == a.compose_unchecked(&b.compose_unchecked(c)))
            })
        });
        let ranks = perms.iter().enumerate().all(|(r, s)| s.rank() == r && Permutation::unrank(n, r).ok().as_ref() == Some(s));
        out.push(prop("group_axioms", format!("identity n={n}"), None, identity));
        out.push(prop("group_axioms", format!("inverse n={n}"), None, inverse));
        out.push(prop("group_axioms", format!("associativity n={n}"), None, assoc));
        out.push(prop("group_axioms", format!("rank bijection n={n}"), None, ranks));
    }
    for &seed in seeds {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let n = 7;
        let size = factorial(n);
        let ok = (0..200).all(|_| {
            let [a, b, c] = [0; 3].map(|_| Permutation::unrank(n, rng.gen_range(0..size)).expect("rank in range"));
            a.compose_unchecked(&b).compose_unchecked(&c) == a.compose_unchecked(&b.compose_unchecked(&c))
                && a.compose_unchecked(&b).inverse() == b.inverse().compose_unchecked(&a.inverse())
        });
        out.push(prop("group_axioms", "sampled associativity and inverse of products n=7", Some(seed), ok));
    }
    Ok(out)
}

fn random_element(n: usize, rng: &mut rand_chacha::ChaCha8Rng) -> Result<GroupAlgebraElement<Rational>> {
    use rand::Rng;
    GroupAlgebraElement::new(n, (0..factorial(n)).map(|_| Rational::from_int(rng.gen_range(-5..=5))).collect())
}

fn representation_checks(seeds: &[u64]) -> Result<Vec<PropertyCheck>> {
    use rand::SeedableRng;
    let mut out = Vec::new();
    for &seed in seeds {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        for n in 3..=4 {
            let (a, b) = (random_element(n, &mut rng)?, random_element(n, &mut rng)?);
            let ab = convolve(&a, &b)?;
            let regular = ab.regular_matrix()? == crate::algebra::mat_mul(&a.regular_matrix()?, &b.regular_matrix()?)?;
            out.push(prop("representation", format!("regular matrix is multiplicative n={n}"), Some(seed), regular));
            let sp = specht::specht_action(&ab)?
                == crate::algebra::mat_mul(&specht::specht_action(&a)?, &specht::specht_action(&b)?)?;
            out.push(prop("representation", format!("standard action is multiplicative n={n}"), Some(seed), sp));
        }
    }
    Ok(out)
}

fn rank_checks(seeds: &[u64]) -> Result<Vec<PropertyCheck>> {
    use crate::algebra::{mat_mul, rank, rank_bareiss, rank_modular, Matrix};
    use rand::{Rng, SeedableRng};
    let mut out = Vec::new();
    for &seed in seeds {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let (rows, cols, r) = (14, 11, rng.gen_range(1..=9));
        let mut draw = |a: usize, b: usize| {
            Matrix::from_vec(a, b, (0..a * b).map(|_| Rational::new(rng.gen_range(-9..=9), rng.gen_range(1..=3))).collect())
        };
        let (left, right) = (draw(rows, r), draw(r, cols));
        let m = mat_mul(&left, &right)?;
        let mut unit = draw(rows, rows);
        for i in 0..rows {
            for j in 0..=i {
                unit.set(i, j, if i == j { Rational::one() } else { Rational::zero() });
            }
        }
        let mixed = mat_mul(&unit, &m)?;
        let base = rank(&m);
        out.push(prop("rank", format!("planted rank {r} is found"), Some(seed), base == r && rank(&left) == r && rank(&right) == r));
        out.push(prop("rank", "rank of transpose", Some(seed), rank(&m.transpose()) == base));
        out.push(prop("rank", "invariant under unit-triangular row mixing", Some(seed), rank(&mixed) == base));
        out.push(prop("rank", "fraction-free and multi-modular routes agree", Some(seed), rank_bareiss(&m) == rank_modular(&m)));
    }
    Ok(out)
}

fn character_checks() -> Result<Vec<PropertyCheck>> {
    let mut out = Vec::new();
    let mut memo = CharacterMemo::new();
    for n in 1..=7 {
        let t = crate::characters::CharacterTable::compute(n, &mut memo)?;
        out.push(prop("characters", format!("column orthogonality n={n}"), None, t.column_orthogonality()));
        out.push(prop("characters", format!("row orthogonality n={n}"), None, t.row_orthogonality()));
        let dims: u64 = t.dims.iter().map(|d| d * d).sum();
        out.push(prop("characters", format!("sum of squared dimensions n={n}"), None, dims == factorial(n) as u64));
    }
    Ok(out)
}

/// Group axioms, representation compatibility, rank metamorphic relations
/// and character orthogonality in one run.
pub fn property_suite(seeds: &[u64]) -> Result<PropertiesReport> {
    let mut checks = group_axiom_checks(seeds)?;
    checks.extend(representation_checks(seeds)?);
    checks.extend(rank_checks(seeds)?);
    checks.extend(character_checks()?);
    let verdict = if checks.iter().all(|c| c.passed) { "PASS" } else { "FAIL" };
    Ok(PropertiesReport { seeds: seeds.to_vec(), checks, verdict })
}
