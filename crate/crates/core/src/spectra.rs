//! Predicted spectra and the engine that certifies them against the
//! brute-force matrices.
//!
//! A multiplicity is certified at a specialization `a` as
//! `kernel_dim(M(a) - λ(a) I)`. Every certified identity has degree at most
//! 5 in the variables, so a random integer point from `[1, 2^20]` is a
//! false witness with probability at most `5 / 2^20` per check; three
//! independent seeds are used. When the kernel dimensions sum to the matrix
//! dimension at a point, `M(a)` is diagonalizable there.

use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use serde::Serialize;

use crate::algebra::{
    kernel_dim, mat_mul, random_assignment, Assignment, LinForm, Matrix, Poly, Rational, Ring, VarId,
};
use crate::config::{Caps, MAX_SYMBOLIC_MULTIVAR_N, MAX_SYMBOLIC_SCALAR_N};
use crate::error::{Error, Result};
use crate::groupalg::{element_of, GroupAlgebraElement, QuotientTable};
use crate::par;
use crate::perm::factorial;
use crate::stats::{sum_y, StatKind};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum MatrixKind {
    /// `(fix_z(στ⁻¹))`
    F,
    /// `(inv_y + fix_z)(στ⁻¹)`
    IF,
    /// `(des_x + inv_y + fix_z)(στ⁻¹)`
    DIF,
    /// `(maj + inv + fix)(στ⁻¹)`
    MIF,
    /// Every entry equal to `z`.
    J,
    /// `i_y + f_z` acting on the standard representation.
    SpechtIF,
    /// A caller-built `(λ_j x_i)` matrix; not in the registry.
    RankOne,
}

impl MatrixKind {
    pub const ALL: [MatrixKind; 6] =
        [MatrixKind::F, MatrixKind::IF, MatrixKind::DIF, MatrixKind::MIF, MatrixKind::J, MatrixKind::SpechtIF];

    pub fn name(self) -> &'static str {
        match self {
            MatrixKind::F => "F",
            MatrixKind::IF => "IF",
            MatrixKind::DIF => "DIF",
            MatrixKind::MIF => "MIF",
            MatrixKind::J => "J",
            MatrixKind::SpechtIF => "SPECHT_IF",
            MatrixKind::RankOne => "RANK_ONE",
        }
    }

    /// Nonnegative entries with constant row sums.
    pub fn perron(self) -> bool {
        !matches!(self, MatrixKind::SpechtIF | MatrixKind::RankOne)
    }

    pub fn stat(self) -> Option<StatKind> {
        match self {
            MatrixKind::F => Some(StatKind::FixZ),
            MatrixKind::IF => Some(StatKind::InvYPlusFixZ),
            MatrixKind::DIF => Some(StatKind::DesXPlusInvYPlusFixZ),
            MatrixKind::MIF => Some(StatKind::MajPlusInvPlusFix),
            MatrixKind::J | MatrixKind::SpechtIF | MatrixKind::RankOne => None,
        }
    }

    pub fn dim(self, n: usize) -> usize {
        match self {
            MatrixKind::SpechtIF => n - 1,
            MatrixKind::RankOne => n,
            _ => factorial(n),
        }
    }
}

impl fmt::Display for MatrixKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for MatrixKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        MatrixKind::ALL
            .into_iter()
            .find(|k| k.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::Parse(format!("unknown matrix kind {s:?}")))
    }
}

impl Serialize for MatrixKind {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(self.name())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Eigenpair {
    pub value: LinForm,
    pub mult: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SpectrumSpec {
    pub kind: MatrixKind,
    pub n: usize,
    pub eigenpairs: Vec<Eigenpair>,
    pub provenance: String,
}

impl SpectrumSpec {
    pub fn new(kind: MatrixKind, n: usize, pairs: Vec<(LinForm, usize)>, provenance: &str) -> Self {
        SpectrumSpec {
            kind,
            n,
            eigenpairs: pairs.into_iter().map(|(value, mult)| Eigenpair { value, mult }).collect(),
            provenance: provenance.to_string(),
        }
    }

    pub fn total_multiplicity(&self) -> usize {
        self.eigenpairs.iter().map(|e| e.mult).sum()
    }

    pub fn values(&self) -> Vec<LinForm> {
        self.eigenpairs.iter().map(|e| e.value.clone()).collect()
    }

    /// `Σ m_k λ_k`
    pub fn weighted_trace(&self) -> LinForm {
        self.eigenpairs.iter().map(|e| e.value.scale(&Rational::from(e.mult))).sum()
    }

    pub fn pairwise_distinct(&self) -> bool {
        let v = self.values();
        (0..v.len()).all(|a| (a + 1..v.len()).all(|b| v[a] != v[b]))
    }

    /// Applies `f` to every eigenvalue.
    pub fn map_values(&self, kind: MatrixKind, f: impl Fn(&LinForm) -> LinForm, provenance: &str) -> SpectrumSpec {
        SpectrumSpec {
            kind,
            n: self.n,
            eigenpairs: self.eigenpairs.iter().map(|e| Eigenpair { value: f(&e.value), mult: e.mult }).collect(),
            provenance: provenance.to_string(),
        }
    }
}

fn y(i: usize, j: usize) -> LinForm {
    LinForm::var(VarId::y(i, j))
}

fn z() -> LinForm {
    LinForm::var(VarId::Z)
}

fn q(v: i64) -> Rational {
    Rational::from_int(v)
}

fn fact(n: usize) -> Rational {
    Rational::from(factorial(n))
}

/// `Σ_{i<j} w(i, j) y_{i,j}`
pub fn weighted_sum_y(n: usize, w: impl Fn(usize, usize) -> Rational) -> LinForm {
    LinForm::from_terms(
        (1..=n).flat_map(|i| (i + 1..=n).map(move |j| (i, j))).map(|(i, j)| (VarId::y(i, j), w(i, j))),
        Rational::zero(),
    )
}

/// `Σ_{i ∈ [n-1]} x_i`
pub fn sum_x(n: usize) -> LinForm {
    LinForm::from_terms((1..n).map(|i| (VarId::x(i), Rational::one())), Rational::zero())
}

fn dist_sum(n: usize) -> LinForm {
    weighted_sum_y(n, |i, j| q((j - i) as i64))
}

fn binom2(m: usize) -> usize {
    m * m.saturating_sub(1) / 2
}

/// Multiplicities of the five-eigenvalue families for `n >= 4`.
fn five_mults(n: usize) -> [usize; 5] {
    let nf = factorial(n);
    [1, n - 1, binom2(n - 1), (n - 1) * (n - 2), nf - n * (3 * n - 7) / 2 - 3]
}

fn if_spectrum(n: usize) -> Result<SpectrumSpec> {
    let pairs = match n {
        1 => vec![(z(), 1)],
        2 => vec![(&y(1, 2) + &z().scale(&q(2)), 1), (&(-&y(1, 2)) + &z().scale(&q(2)), 1)],
        3 => vec![
            (
                &(&(&y(1, 2) + &y(1, 3)) + &y(2, 3)).scale(&q(3)) + &z().scale(&q(6)),
                1,
            ),
            (&(&y(1, 3) - &y(1, 2)) - &y(2, 3), 1),
            (&(&(&(-&y(1, 2)) - &y(1, 3).scale(&q(2))) - &y(2, 3)) + &z().scale(&q(3)), 2),
            (z().scale(&q(3)), 2),
        ],
        _ => {
            let (nf, g2, g3) = (fact(n), fact(n - 2), fact(n - 3));
            let m = five_mults(n);
            let nq = Rational::from(n);
            vec![
                (&sum_y(n).scale(&(&nf / &q(2))) + &z().scale(&nf), m[0]),
                (&z().scale(&(&g2 * &nq)) - &dist_sum(n).scale(&g2), m[1]),
                (weighted_sum_y(n, |i, j| -(&g3 * &q(n as i64 - 2 * (j - i) as i64))), m[2]),
                (z().scale(&(&g2 * &nq)), m[3]),
                (LinForm::zero(), m[4]),
            ]
        }
    };
    let provenance = if n <= 3 { "small-case list" } else { "IF spectrum theorem" };
    Ok(SpectrumSpec::new(MatrixKind::IF, n, pairs, provenance))
}

fn dif_spectrum(n: usize) -> SpectrumSpec {
    let (nf, g2, g3) = (fact(n), fact(n - 2), fact(n - 3));
    let nq = Rational::from(n);
    let m = five_mults(n);
    let top = &(&sum_x(n) + &sum_y(n)).scale(&(&nf / &q(2))) + &z().scale(&nf);
    let second = (&(&sum_x(n) + &dist_sum(n)) - &z().scale(&nq)).scale(&-&g2);
    let third = &sum_x(n).scale(&-&g2) + &weighted_sum_y(n, |i, j| -(&g3 * &q(n as i64 - 2 * (j - i) as i64)));
    SpectrumSpec::new(
        MatrixKind::DIF,
        n,
        vec![(top, m[0]), (second, m[1]), (third, m[2]), (z().scale(&(&g2 * &nq)), m[3]), (LinForm::zero(), m[4])],
        "DIF corollary",
    )
}

fn mif_spectrum(n: usize) -> SpectrumSpec {
    let (nf, g2) = (fact(n), fact(n - 2));
    let ni = n as i64;
    let m = five_mults(n);
    let values = [
        &(&nf * &Rational::from(binom2(n))) + &nf,
        &(&q(ni * (2 - ni) * (ni + 5)) * &g2) / &q(6),
        // Corrected value; the set display prints -2n!/6.
        &(&q(-2) * &nf) / &q(3),
        &q(ni) * &g2,
        Rational::zero(),
    ];
    SpectrumSpec::new(
        MatrixKind::MIF,
        n,
        values.into_iter().zip(m).map(|(v, k)| (LinForm::constant(v), k)).collect(),
        "MIF corollary (third eigenvalue -2n!/3)",
    )
}

fn f_spectrum(n: usize) -> SpectrumSpec {
    let nf = factorial(n);
    let mid = n * factorial(n - 2);
    SpectrumSpec::new(
        MatrixKind::F,
        n,
        vec![
            (z().scale(&Rational::from(nf)), 1),
            (z().scale(&Rational::from(mid)), (n - 1) * (n - 1)),
            (LinForm::zero(), nf - (n - 1) * (n - 1) - 1),
        ],
        "F spectrum theorem",
    )
}

fn specht_spectrum(n: usize) -> SpectrumSpec {
    let g2 = fact(n - 2);
    let nq = Rational::from(n);
    SpectrumSpec::new(
        MatrixKind::SpechtIF,
        n,
        vec![
            ((&z().scale(&nq) - &dist_sum(n)).scale(&g2), 1),
            (z().scale(&(&g2 * &nq)), n - 2),
        ],
        "Specht spectrum theorem",
    )
}

/// `{n!·p: 1, 0: n! - 1}` for the matrix with every entry `p`.
pub fn j_spectrum(n: usize, p: &LinForm) -> SpectrumSpec {
    let nf = factorial(n);
    SpectrumSpec::new(
        MatrixKind::J,
        n,
        vec![(p.scale(&Rational::from(nf)), 1), (LinForm::zero(), nf - 1)],
        "constant-matrix lemma",
    )
}

pub fn predicted_spectrum(kind: MatrixKind, n: usize) -> Result<SpectrumSpec> {
    let registry_err = || Error::Registry { kind: kind.name().to_string(), n };
    let spec = match kind {
        MatrixKind::IF if (1..=crate::config::MAX_ENUM_N).contains(&n) => if_spectrum(n)?,
        MatrixKind::F if (4..=crate::config::MAX_ENUM_N).contains(&n) => f_spectrum(n),
        MatrixKind::DIF if (4..=crate::config::MAX_ENUM_N).contains(&n) => dif_spectrum(n),
        MatrixKind::MIF if (4..=crate::config::MAX_ENUM_N).contains(&n) => mif_spectrum(n),
        MatrixKind::SpechtIF if (4..=crate::config::MAX_ENUM_N).contains(&n) => specht_spectrum(n),
        MatrixKind::J if (1..=crate::config::MAX_ENUM_N).contains(&n) => j_spectrum(n, &z()),
        _ => return Err(registry_err()),
    };
    Ok(spec)
}

/// Where certification gets its matrix from.
pub enum MatrixSource {
    /// Regular representation of a group-algebra element.
    Regular(GroupAlgebraElement<LinForm>),
    Explicit(Matrix<LinForm>),
}

impl MatrixSource {
    pub fn build(kind: MatrixKind, n: usize) -> Result<Self> {
        Ok(match kind {
            MatrixKind::SpechtIF => {
                let e = element_of(StatKind::InvYPlusFixZ, n)?;
                MatrixSource::Explicit(crate::specht::specht_action(&e)?)
            }
            MatrixKind::RankOne => {
                return Err(Error::Usage("rank-one matrices are built by the caller".into()));
            }
            MatrixKind::J => {
                let size = factorial(n);
                MatrixSource::Regular(GroupAlgebraElement::new(n, vec![z(); size])?)
            }
            other => MatrixSource::Regular(element_of(other.stat().expect("statistic kind"), n)?),
        })
    }

    pub fn dim(&self) -> usize {
        match self {
            MatrixSource::Regular(e) => e.coeffs().len(),
            MatrixSource::Explicit(m) => m.rows(),
        }
    }

    pub fn vars(&self) -> std::collections::BTreeSet<VarId> {
        match self {
            MatrixSource::Regular(e) => e.coeffs().iter().flat_map(|f| f.vars()).collect(),
            MatrixSource::Explicit(m) => m.vars(),
        }
    }

    pub fn specialize(&self, a: &Assignment, table: Option<&QuotientTable>) -> Result<Matrix<Rational>> {
        match self {
            MatrixSource::Regular(e) => {
                let spec = e.specialize(a)?;
                Ok(match table {
                    Some(t) => spec.regular_matrix_with(t),
                    None => spec.regular_matrix()?,
                })
            }
            MatrixSource::Explicit(m) => m.specialize(a),
        }
    }

    pub fn symbolic(&self) -> Result<Matrix<LinForm>> {
        match self {
            MatrixSource::Regular(e) => e.regular_matrix(),
            MatrixSource::Explicit(m) => Ok(m.clone()),
        }
    }

    pub fn trace_form(&self) -> LinForm {
        match self {
            // Every diagonal entry is the coefficient of the identity.
            MatrixSource::Regular(e) => e.coeffs()[0].scale(&Rational::from(e.coeffs().len())),
            MatrixSource::Explicit(m) => m.trace_form(),
        }
    }

    /// Distinct row sums.
    pub fn row_sums(&self, table: Option<&QuotientTable>) -> Result<Vec<LinForm>> {
        let sums = match self {
            MatrixSource::Regular(e) => {
                let owned;
                let t = match table {
                    Some(t) => t,
                    None => {
                        owned = QuotientTable::new(e.n())?;
                        &owned
                    }
                };
                let size = e.coeffs().len();
                par::map_range(size, |i| {
                    let mut counts = vec![0u32; size];
                    for j in 0..size {
                        counts[t.get(i, j)] += 1;
                    }
                    counts
                        .iter()
                        .zip(e.coeffs())
                        .filter(|(c, _)| **c > 0)
                        .map(|(c, f)| f.scale(&Rational::from(*c as usize)))
                        .sum::<LinForm>()
                })
            }
            MatrixSource::Explicit(m) => m.row_sums(),
        };
        let mut distinct: Vec<LinForm> = Vec::new();
        for s in sums {
            if !distinct.contains(&s) {
                distinct.push(s);
            }
        }
        Ok(distinct)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct EigenReport {
    pub value: String,
    pub mult: usize,
    pub kernel_dims: Vec<usize>,
}

#[derive(Clone, Debug, Serialize)]
pub struct AssignmentReport {
    pub seed: u64,
    pub values: std::collections::BTreeMap<String, String>,
    /// Sum of kernel dimensions equals the dimension.
    pub diagonalizable: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct CheckFailure {
    pub check: String,
    pub detail: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct CertificationReport {
    pub kind: MatrixKind,
    pub n: usize,
    pub verdict: &'static str,
    pub eigen: Vec<EigenReport>,
    pub seeds: Vec<u64>,
    pub provenance: String,
    pub dim: usize,
    pub assignments: Vec<AssignmentReport>,
    pub trace_check: bool,
    pub row_sum_check: Option<bool>,
    pub minimal_polynomial: Option<MinPolyReport>,
    pub failures: Vec<CheckFailure>,
    pub elapsed_ms: u64,
}

impl CertificationReport {
    pub fn passed(&self) -> bool {
        self.verdict == "PASS"
    }

    fn finish(&mut self) {
        let mp_ok = self.minimal_polynomial.as_ref().is_none_or(|m| m.verdict);
        self.verdict = if self.failures.is_empty() && mp_ok { "PASS" } else { "FAIL" };
    }

    pub fn attach_minimal_polynomial(&mut self, mp: MinPolyReport) {
        if !mp.verdict {
            self.failures.push(CheckFailure {
                check: "minimal_polynomial".into(),
                detail: format!("roots {:?}: product vanishes = {}", mp.roots, mp.product_vanishes),
            });
        }
        self.minimal_polynomial = Some(mp);
        self.finish();
    }
}

pub fn check_certify_caps(kind: MatrixKind, n: usize, caps: &Caps) -> Result<()> {
    if kind != MatrixKind::SpechtIF && n > caps.max_certify_n {
        return Err(Error::ResourceCap(format!(
            "certifying {kind} needs {}x{} exact ranks; cap is n <= {}",
            factorial(n),
            factorial(n),
            caps.max_certify_n
        )));
    }
    Ok(())
}

/// Builds the matrix for `spec` and certifies it at every seed.
pub fn certify(spec: &SpectrumSpec, seeds: &[u64]) -> Result<CertificationReport> {
    certify_with_caps(spec, seeds, &Caps::default())
}

pub fn certify_with_caps(spec: &SpectrumSpec, seeds: &[u64], caps: &Caps) -> Result<CertificationReport> {
    check_certify_caps(spec.kind, spec.n, caps)?;
    let source = MatrixSource::build(spec.kind, spec.n)?;
    certify_source(spec, &source, seeds)
}

/// Certification against a caller-supplied matrix.
pub fn certify_source(spec: &SpectrumSpec, source: &MatrixSource, seeds: &[u64]) -> Result<CertificationReport> {
    let start = Instant::now();
    if seeds.is_empty() {
        return Err(Error::Usage("certification needs at least one seed".into()));
    }
    let dim = source.dim();
    let mut failures = Vec::new();
    if spec.total_multiplicity() != dim {
        failures.push(CheckFailure {
            check: "dimension".into(),
            detail: format!("multiplicities sum to {}, matrix has dimension {dim}", spec.total_multiplicity()),
        });
    }
    if !spec.pairwise_distinct() {
        return Err(Error::Precondition("predicted eigenvalues are not pairwise distinct".into()));
    }

    let mut vars = source.vars();
    for v in spec.values() {
        vars.extend(v.vars());
    }
    let values = spec.values();
    let table = match source {
        MatrixSource::Regular(e) => Some(QuotientTable::new(e.n())?),
        MatrixSource::Explicit(_) => None,
    };

    let per_seed: Vec<Result<(Assignment, Vec<usize>)>> = par::map_slice(seeds, |&seed| {
        let a = random_assignment(&vars, seed, &values)?;
        let m = source.specialize(&a, table.as_ref())?;
        let dims = values
            .iter()
            .map(|v| kernel_dim(&m.shift_diagonal(&v.eval(&a)?)?))
            .collect::<Result<Vec<_>>>()?;
        Ok((a, dims))
    });
    let per_seed = per_seed.into_iter().collect::<Result<Vec<_>>>()?;

    let mut eigen: Vec<EigenReport> = spec
        .eigenpairs
        .iter()
        .map(|e| EigenReport { value: e.value.to_string(), mult: e.mult, kernel_dims: Vec::new() })
        .collect();
    let mut assignments = Vec::new();
    for (a, dims) in &per_seed {
        for (k, d) in dims.iter().enumerate() {
            eigen[k].kernel_dims.push(*d);
            if *d != spec.eigenpairs[k].mult {
                failures.push(CheckFailure {
                    check: "multiplicity".into(),
                    detail: format!(
                        "eigenvalue {} at seed {}: kernel dim {d}, predicted {}",
                        spec.eigenpairs[k].value, a.seed, spec.eigenpairs[k].mult
                    ),
                });
            }
        }
        let total: usize = dims.iter().sum();
        if total != dim {
            failures.push(CheckFailure {
                check: "diagonalizability".into(),
                detail: format!("kernel dims sum to {total} of {dim} at seed {}", a.seed),
            });
        }
        assignments.push(AssignmentReport {
            seed: a.seed,
            values: a.iter().map(|(v, x)| (v.to_string(), x.to_string())).collect(),
            diagonalizable: total == dim,
        });
    }

    let trace = source.trace_form();
    let trace_check = trace == spec.weighted_trace();
    if !trace_check {
        failures.push(CheckFailure {
            check: "trace".into(),
            detail: format!("trace {trace} vs Σ m λ = {}", spec.weighted_trace()),
        });
    }

    let row_sum_check = if spec.kind.perron() {
        let sums = source.row_sums(table.as_ref())?;
        let ok = sums.len() == 1 && sums[0] == spec.eigenpairs[0].value;
        if !ok {
            failures.push(CheckFailure {
                check: "row_sums".into(),
                detail: format!("row sums {:?} vs top eigenvalue {}", sums, spec.eigenpairs[0].value),
            });
        }
        Some(ok)
    } else {
        None
    };

    let mut report = CertificationReport {
        kind: spec.kind,
        n: spec.n,
        verdict: "FAIL",
        eigen,
        seeds: seeds.to_vec(),
        provenance: spec.provenance.clone(),
        dim,
        assignments,
        trace_check,
        row_sum_check,
        minimal_polynomial: None,
        failures,
        elapsed_ms: start.elapsed().as_millis() as u64,
    };
    report.finish();
    Ok(report)
}

#[derive(Clone, Debug, Serialize)]
pub struct OmittedFactor {
    pub root: String,
    pub nonzero: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct MinPolyReport {
    pub kind: MatrixKind,
    pub n: usize,
    pub roots: Vec<String>,
    /// `integer` when entries and roots are multiples of one variable.
    pub route: &'static str,
    pub product_vanishes: bool,
    pub omitted: Vec<OmittedFactor>,
    pub verdict: bool,
}

/// Entries and roots as integers after factoring out a single variable and
/// clearing denominators.
fn integer_reduction(m: &Matrix<LinForm>, roots: &[LinForm]) -> Option<(Matrix<i128>, Vec<i128>)> {
    let mut var: Option<VarId> = None;
    let mut scalar = |f: &LinForm| -> Option<Rational> {
        if !f.constant_term().is_zero() && var.is_some() {
            return None;
        }
        match f.terms() {
            [] => Some(f.constant_term().clone()),
            [(v, c)] if f.constant_term().is_zero() => match var {
                Some(w) if w != *v => None,
                _ => {
                    var = Some(*v);
                    Some(c.clone())
                }
            },
            _ => None,
        }
    };
    let entries: Vec<Rational> = m.entries().iter().map(&mut scalar).collect::<Option<_>>()?;
    let rs: Vec<Rational> = roots.iter().map(&mut scalar).collect::<Option<_>>()?;
    // A constant entry mixed with variable entries is not homogeneous.
    if var.is_some() && entries.iter().zip(m.entries()).any(|(e, f)| !e.is_zero() && f.is_constant()) {
        return None;
    }
    if var.is_some() && rs.iter().zip(roots).any(|(e, f)| !e.is_zero() && f.is_constant()) {
        return None;
    }
    let mut den = num_bigint::BigInt::from(1);
    for r in entries.iter().chain(&rs) {
        den = num_integer::Integer::lcm(&den, &r.denom());
    }
    let den = Rational::from_bigint(den);
    let to_int = |r: &Rational| -> Option<i128> {
        let v = r * &den;
        num_traits::ToPrimitive::to_i128(&v.numer())
    };
    let ints: Vec<i128> = entries.iter().map(to_int).collect::<Option<_>>()?;
    let ri: Vec<i128> = rs.iter().map(to_int).collect::<Option<_>>()?;
    Some((Matrix::from_vec(m.rows(), m.cols(), ints), ri))
}

fn product_of<E: Ring>(factors: &[&Matrix<E>]) -> Result<Matrix<E>> {
    let mut acc = factors[0].clone();
    for f in &factors[1..] {
        acc = mat_mul(&acc, f)?;
    }
    Ok(acc)
}

/// Whether `Π_k (M - r_k I)` vanishes and whether each product with one
/// factor left out is nonzero.
pub fn minimal_polynomial_check(kind: MatrixKind, n: usize, roots: &[LinForm]) -> Result<MinPolyReport> {
    if roots.is_empty() {
        return Err(Error::Usage("minimal polynomial check needs at least one root".into()));
    }
    if kind != MatrixKind::SpechtIF && n > MAX_SYMBOLIC_SCALAR_N {
        return Err(Error::ResourceCap(format!("symbolic products support n <= {MAX_SYMBOLIC_SCALAR_N}")));
    }
    let m = MatrixSource::build(kind, n)?.symbolic()?;
    let dim = m.rows();
    let mut report = MinPolyReport {
        kind,
        n,
        roots: roots.iter().map(LinForm::to_string).collect(),
        route: "integer",
        product_vanishes: false,
        omitted: Vec::new(),
        verdict: false,
    };
    let nonzero_without: Vec<bool>;
    if let Some((a, rs)) = integer_reduction(&m, roots) {
        let factors: Vec<Matrix<i128>> = rs.iter().map(|r| a.shift_diagonal(r)).collect::<Result<_>>()?;
        let max_entry = factors.iter().flat_map(|f| f.entries().iter()).map(|v| v.unsigned_abs()).max().unwrap_or(0);
        let bits = (factors.len() as f64) * (max_entry.max(1) as f64).log2()
            + (factors.len().saturating_sub(1) as f64) * (dim as f64).log2();
        if bits > 120.0 {
            return Err(Error::ResourceCap(format!("integer product needs ~{bits:.0} bits")));
        }
        let refs: Vec<&Matrix<i128>> = factors.iter().collect();
        report.product_vanishes = product_of(&refs)?.is_zero();
        nonzero_without = (0..factors.len())
            .map(|k| {
                let rest: Vec<&Matrix<i128>> = refs.iter().enumerate().filter(|(l, _)| *l != k).map(|(_, f)| *f).collect();
                Ok(rest.is_empty() || !product_of(&rest)?.is_zero())
            })
            .collect::<Result<_>>()?;
    } else {
        if kind != MatrixKind::SpechtIF && n > MAX_SYMBOLIC_MULTIVAR_N {
            return Err(Error::ResourceCap(format!(
                "polynomial-matrix products for {kind} support n <= {MAX_SYMBOLIC_MULTIVAR_N}"
            )));
        }
        report.route = "polynomial";
        let mp = m.to_poly();
        let factors: Vec<Matrix<Poly>> =
            roots.iter().map(|r| mp.shift_diagonal(&Poly::from(r))).collect::<Result<_>>()?;
        let refs: Vec<&Matrix<Poly>> = factors.iter().collect();
        report.product_vanishes = product_of(&refs)?.is_zero();
        // A nonzero value at any point proves a polynomial matrix nonzero;
        // only a zero value needs the symbolic product.
        let mut vars = m.vars();
        for r in roots {
            vars.extend(r.vars());
        }
        nonzero_without = (0..factors.len())
            .map(|k| -> Result<bool> {
                let rest: Vec<&Matrix<Poly>> = refs.iter().enumerate().filter(|(l, _)| *l != k).map(|(_, f)| *f).collect();
                if rest.is_empty() {
                    return Ok(true);
                }
                for seed in crate::config::DEFAULT_SEEDS {
                    let a = random_assignment(&vars, seed, &[])?;
                    let numeric: Vec<Matrix<Rational>> = rest.iter().map(|f| f.specialize(&a)).collect::<Result<_>>()?;
                    let nrefs: Vec<&Matrix<Rational>> = numeric.iter().collect();
                    if !product_of(&nrefs)?.is_zero() {
                        return Ok(true);
                    }
                }
                Ok(!product_of(&rest)?.is_zero())
            })
            .collect::<Result<_>>()?;
    }
    report.omitted = roots
        .iter()
        .zip(nonzero_without)
        .map(|(r, nonzero)| OmittedFactor { root: r.to_string(), nonzero })
        .collect();
    report.verdict = report.product_vanishes && report.omitted.iter().all(|o| o.nonzero);
    Ok(report)
}

#[derive(Clone, Debug, Serialize)]
pub struct LejReport {
    pub n: usize,
    pub p: String,
    pub certification: CertificationReport,
    /// `J·(Σσ) = n!p·(Σσ)`
    pub perron_vector: bool,
    /// `J·(ι - σ) = 0` for every σ.
    pub difference_vectors: bool,
    pub verdict: bool,
}

/// Spectrum and eigenvectors of the matrix with every entry `p`.
pub fn lej_spectrum_check(n: usize, p: &LinForm, seeds: &[u64]) -> Result<LejReport> {
    if p.is_zero() {
        return Err(Error::Precondition("p must be nonzero".into()));
    }
    if n > 5 {
        return Err(Error::ResourceCap(format!("constant-matrix check supports n <= 5, got {n}")));
    }
    let size = factorial(n);
    let elem = GroupAlgebraElement::new(n, vec![p.clone(); size])?;
    let spec = j_spectrum(n, p);
    let source = MatrixSource::Regular(elem.clone());
    let certification = certify_source(&spec, &source, seeds)?;
    let jm = elem.regular_matrix()?;
    let top = p.scale(&Rational::from(size));
    let perron_vector = jm.row_sums().iter().all(|s| *s == top);
    let difference_vectors = (1..size).all(|s| (0..size).all(|r| (jm.get(r, 0) - jm.get(r, s)).is_zero()));
    let verdict = certification.passed() && perron_vector && difference_vectors;
    Ok(LejReport { n, p: p.to_string(), certification, perron_vector, difference_vectors, verdict })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::DEFAULT_SEEDS;
    use crate::groupalg::{descent_substitution, substitute_all};

    #[test]
    fn registry_shapes() {
        for n in 4..=8 {
            for kind in [MatrixKind::F, MatrixKind::IF, MatrixKind::DIF, MatrixKind::MIF, MatrixKind::SpechtIF] {
                let s = predicted_spectrum(kind, n).unwrap();
                assert_eq!(s.total_multiplicity(), kind.dim(n), "{kind} {n}");
                assert!(s.pairwise_distinct(), "{kind} {n}");
            }
        }
        for n in 1..=3 {
            let s = predicted_spectrum(MatrixKind::IF, n).unwrap();
            assert_eq!(s.total_multiplicity(), factorial(n));
        }
        assert!(matches!(predicted_spectrum(MatrixKind::F, 3), Err(Error::Registry { .. })));
        assert!(matches!(predicted_spectrum(MatrixKind::DIF, 2), Err(Error::Registry { .. })));
    }

    #[test]
    fn registry_values() {
        let f4 = predicted_spectrum(MatrixKind::F, 4).unwrap();
        let got: Vec<(String, usize)> = f4.eigenpairs.iter().map(|e| (e.value.to_string(), e.mult)).collect();
        assert_eq!(got, vec![("24*z".into(), 1), ("8*z".into(), 9), ("0".into(), 14)]);
        let if3 = predicted_spectrum(MatrixKind::IF, 3).unwrap();
        let got: Vec<(String, usize)> = if3.eigenpairs.iter().map(|e| (e.value.to_string(), e.mult)).collect();
        assert_eq!(
            got,
            vec![
                ("3*y[1,2] + 3*y[1,3] + 3*y[2,3] + 6*z".into(), 1),
                ("-y[1,2] + y[1,3] - y[2,3]".into(), 1),
                ("-y[1,2] - 2*y[1,3] - y[2,3] + 3*z".into(), 2),
                ("3*z".into(), 2),
            ]
        );
        let mif4 = predicted_spectrum(MatrixKind::MIF, 4).unwrap();
        let got: Vec<(String, usize)> = mif4.eigenpairs.iter().map(|e| (e.value.to_string(), e.mult)).collect();
        assert_eq!(
            got,
            vec![("168".into(), 1), ("-24".into(), 3), ("-16".into(), 3), ("8".into(), 6), ("0".into(), 11)]
        );
        let m5: Vec<usize> = predicted_spectrum(MatrixKind::IF, 5).unwrap().eigenpairs.iter().map(|e| e.mult).collect();
        assert_eq!(m5, vec![1, 4, 6, 12, 97]);
        let sp4 = predicted_spectrum(MatrixKind::SpechtIF, 4).unwrap();
        assert_eq!(
            sp4.eigenpairs[0].value.to_string(),
            "-2*y[1,2] - 4*y[1,3] - 6*y[1,4] - 2*y[2,3] - 4*y[2,4] - 2*y[3,4] + 8*z"
        );
        assert_eq!(sp4.eigenpairs[1].value.to_string(), "8*z");
        assert_eq!(sp4.eigenpairs[1].mult, 2);
    }

    #[test]
    fn substitution_maps_if_onto_dif() {
        for n in 4..=7 {
            let subs = descent_substitution(n);
            let mapped = predicted_spectrum(MatrixKind::IF, n)
                .unwrap()
                .map_values(MatrixKind::DIF, |v| substitute_all(v, &subs), "DIF corollary");
            assert_eq!(mapped.eigenpairs, predicted_spectrum(MatrixKind::DIF, n).unwrap().eigenpairs, "n={n}");
        }
    }

    #[test]
    fn mif_is_dif_at_the_scalar_point() {
        for n in 4..=7 {
            let a = Assignment::maj_inv_fix(n);
            let mapped = predicted_spectrum(MatrixKind::DIF, n)
                .unwrap()
                .map_values(MatrixKind::MIF, |v| LinForm::constant(v.eval(&a).unwrap()), "");
            assert_eq!(mapped.eigenpairs, predicted_spectrum(MatrixKind::MIF, n).unwrap().eigenpairs, "n={n}");
        }
    }

    #[test]
    fn certify_small_golden_cases() {
        for n in 1..=3 {
            let r = certify(&predicted_spectrum(MatrixKind::IF, n).unwrap(), &[7]).unwrap();
            assert!(r.passed(), "{r:?}");
        }
    }

    #[test]
    fn certify_detects_wrong_multiplicity() {
        let mut s = predicted_spectrum(MatrixKind::F, 4).unwrap();
        s.eigenpairs[1].mult = 8;
        s.eigenpairs[2].mult = 15;
        let r = certify(&s, &[1]).unwrap();
        assert!(!r.passed());
        assert!(r.failures.iter().any(|f| f.check == "multiplicity"));
    }

    #[test]
    fn certify_f4() {
        let r = certify(&predicted_spectrum(MatrixKind::F, 4).unwrap(), &DEFAULT_SEEDS).unwrap();
        assert!(r.passed());
        let dims: Vec<Vec<usize>> = r.eigen.iter().map(|e| e.kernel_dims.clone()).collect();
        assert_eq!(dims, vec![vec![1; 3], vec![9; 3], vec![14; 3]]);
        let json = serde_json::to_value(&r).unwrap();
        assert_eq!(json["kind"], "F");
        assert_eq!(json["verdict"], "PASS");
    }

    #[test]
    fn certify_caps() {
        let s = predicted_spectrum(MatrixKind::F, 7).unwrap();
        assert!(matches!(certify(&s, &[1]), Err(Error::ResourceCap(_))));
    }

    #[test]
    fn min_poly_of_f() {
        for n in 4..=5 {
            let nf = factorial(n) as i64;
            let mid = (n * factorial(n - 2)) as i64;
            let roots = [LinForm::zero(), LinForm::term(VarId::Z, nf), LinForm::term(VarId::Z, mid)];
            let r = minimal_polynomial_check(MatrixKind::F, n, &roots).unwrap();
            assert_eq!(r.route, "integer");
            assert!(r.verdict, "{r:?}");
        }
        // Dropping the middle root leaves a nonzero product.
        let r = minimal_polynomial_check(MatrixKind::F, 4, &[LinForm::zero(), LinForm::term(VarId::Z, 24)]).unwrap();
        assert!(!r.product_vanishes);
    }

    #[test]
    fn lej() {
        let r = lej_spectrum_check(4, &LinForm::var(VarId::Z), &DEFAULT_SEEDS).unwrap();
        assert!(r.verdict);
        assert_eq!(r.certification.eigen[0].kernel_dims, vec![1; 3]);
        assert_eq!(r.certification.eigen[1].kernel_dims, vec![23; 3]);
        let r = lej_spectrum_check(2, &LinForm::constant(1), &[1]).unwrap();
        assert!(r.verdict);
        assert!(lej_spectrum_check(3, &LinForm::zero(), &[1]).is_err());
    }

    #[test]
    fn kind_names() {
        for k in MatrixKind::ALL {
            assert_eq!(k.name().parse::<MatrixKind>().unwrap(), k);
        }
    }
}
