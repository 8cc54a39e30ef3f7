//! Partitions, hook-length dimensions, class sizes and irreducible
//! characters of `S_n` by the Murnaghan–Nakayama rule.

use std::collections::HashMap;
use std::fmt;
use std::io::Write;
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::config::MAX_PARTITION_N;
use crate::error::{Error, Result};
use crate::par;
use crate::perm::factorial;

/// Weakly decreasing positive parts.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Partition {
    parts: Vec<usize>,
}

impl Partition {
    pub fn new(parts: Vec<usize>) -> Result<Self> {
        if parts.is_empty() || parts.contains(&0) || parts.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::Usage(format!("{parts:?} is not a partition")));
        }
        Ok(Partition { parts })
    }

    pub fn from_unsorted(mut parts: Vec<usize>) -> Self {
        parts.retain(|&p| p > 0);
        parts.sort_unstable_by(|a, b| b.cmp(a));
        Partition { parts }
    }

    pub fn parts(&self) -> &[usize] {
        &self.parts
    }

    pub fn n(&self) -> usize {
        self.parts.iter().sum()
    }

    /// Number of parts equal to 1, i.e. fixed points of the class.
    pub fn fix(&self) -> usize {
        self.parts.iter().filter(|&&p| p == 1).count()
    }

    /// `(part, multiplicity)` in decreasing part order.
    pub fn multiplicities(&self) -> Vec<(usize, usize)> {
        let mut out: Vec<(usize, usize)> = Vec::new();
        for &p in &self.parts {
            match out.last_mut() {
                Some((q, m)) if *q == p => *m += 1,
                _ => out.push((p, 1)),
            }
        }
        out
    }

    pub fn conjugate(&self) -> Partition {
        let cols = self.parts[0];
        Partition { parts: (1..=cols).map(|c| self.parts.iter().filter(|&&p| p >= c).count()).collect() }
    }

    /// Label such as `3+1`.
    pub fn label(&self) -> String {
        self.parts.iter().map(usize::to_string).collect::<Vec<_>>().join("+")
    }

    /// `n! / prod hooks`.
    pub fn hook_dim(&self) -> u64 {
        let conj = self.conjugate();
        let mut hooks = 1u64;
        for (r, &len) in self.parts.iter().enumerate() {
            for c in 0..len {
                hooks *= ((len - c - 1) + (conj.parts[c] - r - 1) + 1) as u64;
            }
        }
        factorial(self.n()) as u64 / hooks
    }

    /// `z_μ = prod_i i^{m_i} m_i!`.
    pub fn centralizer(&self) -> u64 {
        self.multiplicities()
            .into_iter()
            .map(|(p, m)| (p as u64).pow(m as u32) * factorial(m) as u64)
            .product()
    }

    pub fn class_size(&self) -> u64 {
        factorial(self.n()) as u64 / self.centralizer()
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.parts.iter().map(usize::to_string).collect();
        write!(f, "({})", parts.join(","))
    }
}

impl fmt::Debug for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl FromStr for Partition {
    type Err = Error;

    /// Accepts `3+1` or `(3,1)`.
    fn from_str(s: &str) -> Result<Self> {
        let body = s.trim().trim_start_matches('(').trim_end_matches(')');
        let parts = body
            .split(['+', ','])
            .map(|t| t.trim().parse::<usize>().map_err(|e| Error::Parse(format!("{s:?}: {e}"))))
            .collect::<Result<Vec<_>>>()?;
        Partition::new(parts)
    }
}

impl Serialize for Partition {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.label())
    }
}

/// All partitions of `n` in reverse-lexicographic order, `(n)` first.
pub fn partitions(n: usize) -> Result<Vec<Partition>> {
    if n == 0 || n > MAX_PARTITION_N {
        return Err(Error::ResourceCap(format!("partitions supports 1 <= n <= {MAX_PARTITION_N}, got {n}")));
    }
    fn go(rest: usize, max: usize, prefix: &mut Vec<usize>, out: &mut Vec<Partition>) {
        if rest == 0 {
            out.push(Partition { parts: prefix.clone() });
            return;
        }
        for p in (1..=rest.min(max)).rev() {
            prefix.push(p);
            go(rest - p, p, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    go(n, n, &mut Vec::new(), &mut out);
    Ok(out)
}

/// Memo of character values keyed by `(λ, remaining μ parts)`.
#[derive(Default, Clone, Debug, Serialize, Deserialize)]
pub struct CharacterMemo {
    entries: HashMap<String, i64>,
}

impl CharacterMemo {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn merge(&mut self, other: CharacterMemo) {
        self.entries.extend(other.entries);
    }

    pub fn load(path: &Path) -> Result<Self> {
        if !path.exists() {
            return Ok(Self::default());
        }
        Ok(serde_json::from_reader(std::io::BufReader::new(std::fs::File::open(path)?))?)
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        if let Some(dir) = path.parent() {
            std::fs::create_dir_all(dir)?;
        }
        let mut sorted: Vec<_> = self.entries.iter().collect();
        sorted.sort();
        let map: serde_json::Map<String, serde_json::Value> =
            sorted.into_iter().map(|(k, v)| (k.clone(), (*v).into())).collect();
        let mut f = std::io::BufWriter::new(std::fs::File::create(path)?);
        serde_json::to_writer(&mut f, &serde_json::json!({ "entries": map }))?;
        f.flush()?;
        Ok(())
    }

    fn key(beta: &[usize], mu: &[usize]) -> String {
        format!("{beta:?}|{mu:?}")
    }
}

/// First-column beta set of a partition with `len` beads.
fn beta_set(parts: &[usize], len: usize) -> Vec<usize> {
    (0..len).map(|i| parts.get(i).copied().unwrap_or(0) + (len - 1 - i)).collect()
}

/// Border-strip recursion on beta sets: removing a strip of length `k` moves
/// one bead from `b` to the empty position `b - k`, with sign
/// `(-1)^{beads strictly between}`.
fn mn_beta(beta: &mut [usize], mu: &[usize], memo: &mut CharacterMemo) -> i64 {
    let Some((&k, rest)) = mu.split_first() else {
        return 1;
    };
    let key = CharacterMemo::key(beta, mu);
    if let Some(&v) = memo.entries.get(&key) {
        return v;
    }
    let mut total = 0i64;
    for idx in 0..beta.len() {
        let b = beta[idx];
        if b < k || beta.contains(&(b - k)) {
            continue;
        }
        let between = beta.iter().filter(|&&c| c > b - k && c < b).count();
        beta[idx] = b - k;
        let mut sorted = beta.to_vec();
        sorted.sort_unstable_by(|a, b| b.cmp(a));
        let v = mn_beta(&mut sorted, rest, memo);
        beta[idx] = b;
        total += if between % 2 == 0 { v } else { -v };
    }
    memo.entries.insert(key, total);
    total
}

/// `χ_λ^μ` by the Murnaghan–Nakayama rule.
pub fn mn_character_memo(lambda: &Partition, mu: &Partition, memo: &mut CharacterMemo) -> Result<i64> {
    if lambda.n() != mu.n() {
        return Err(Error::Usage(format!("|{lambda}| != |{mu}|")));
    }
    let mut beta = beta_set(&lambda.parts, lambda.parts.len());
    Ok(mn_beta(&mut beta, &mu.parts, memo))
}

pub fn mn_character(lambda: &Partition, mu: &Partition) -> Result<i64> {
    mn_character_memo(lambda, mu, &mut CharacterMemo::new())
}

#[derive(Clone, Debug, Serialize)]
pub struct CharacterTable {
    pub n: usize,
    pub partitions: Vec<Partition>,
    pub dims: Vec<u64>,
    pub class_sizes: Vec<u64>,
    /// `values[l][m] = χ_{partitions[l]}^{partitions[m]}`.
    pub values: Vec<Vec<i64>>,
}

impl CharacterTable {
    pub fn compute(n: usize, memo: &mut CharacterMemo) -> Result<Self> {
        let parts = partitions(n)?;
        let shared = memo.clone();
        let rows: Vec<(Vec<i64>, CharacterMemo)> = par::map_slice(&parts, |lambda| {
            let mut local = shared.clone();
            let row = parts
                .iter()
                .map(|mu| mn_character_memo(lambda, mu, &mut local).expect("same degree"))
                .collect();
            (row, local)
        });
        let mut values = Vec::with_capacity(rows.len());
        for (row, local) in rows {
            values.push(row);
            memo.merge(local);
        }
        Ok(CharacterTable {
            n,
            dims: parts.iter().map(Partition::hook_dim).collect(),
            class_sizes: parts.iter().map(Partition::class_size).collect(),
            partitions: parts,
            values,
        })
    }

    pub fn index_of(&self, p: &Partition) -> Option<usize> {
        self.partitions.iter().position(|q| q == p)
    }

    /// `Σ_λ χ_λ^μ χ_λ^ν = δ_{μν} z_μ` for all class pairs.
    pub fn column_orthogonality(&self) -> bool {
        let k = self.partitions.len();
        (0..k).all(|a| {
            (0..k).all(|b| {
                let s: i64 = (0..k).map(|l| self.values[l][a] * self.values[l][b]).sum();
                let expected = if a == b { self.partitions[a].centralizer() as i64 } else { 0 };
                s == expected
            })
        })
    }

    /// `Σ_μ |class μ| χ_λ^μ χ_κ^μ = δ_{λκ} n!`.
    pub fn row_orthogonality(&self) -> bool {
        let k = self.partitions.len();
        let nf = factorial(self.n) as i64;
        (0..k).all(|a| {
            (0..k).all(|b| {
                let s: i64 = (0..k).map(|m| self.class_sizes[m] as i64 * self.values[a][m] * self.values[b][m]).sum();
                s == if a == b { nf } else { 0 }
            })
        })
    }

    /// Partition labels on the first row and column.
    pub fn write_csv<W: Write>(&self, w: W) -> Result<()> {
        let mut out = csv::Writer::from_writer(w);
        let mut header = vec![String::new()];
        header.extend(self.partitions.iter().map(Partition::label));
        out.write_record(&header)?;
        for (p, row) in self.partitions.iter().zip(&self.values) {
            let mut rec = vec![p.label()];
            rec.extend(row.iter().map(i64::to_string));
            out.write_record(&rec)?;
        }
        out.flush()?;
        Ok(())
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct DichotomyEntry {
    pub partition: Partition,
    pub dim: u64,
    pub sum: i64,
}

#[derive(Clone, Debug, Serialize)]
pub struct DichotomyReport {
    pub n: usize,
    pub entries: Vec<DichotomyEntry>,
    /// Partitions whose sum is nonzero.
    pub nonzero: Vec<Partition>,
    pub verdict: bool,
    /// Scalar `S(λ)/d_λ` with multiplicity `d_λ²`, merged by scalar.
    pub block_spectrum: Vec<(String, u64)>,
}

/// `S(λ) = Σ_μ fix(μ)·|class μ|·χ_λ^μ` for every λ. The verdict requires
/// exactly two nonzero values, both `n!`, on partitions of dimensions 1 and
/// `n - 1`.
pub fn character_sum_dichotomy(n: usize, memo: &mut CharacterMemo) -> Result<DichotomyReport> {
    if !(4..=8).contains(&n) {
        return Err(Error::ResourceCap(format!("dichotomy check supports 4 <= n <= 8, got {n}")));
    }
    let table = CharacterTable::compute(n, memo)?;
    let nf = factorial(n) as i64;
    let entries: Vec<DichotomyEntry> = table
        .partitions
        .iter()
        .enumerate()
        .map(|(l, p)| DichotomyEntry {
            partition: p.clone(),
            dim: table.dims[l],
            sum: table
                .partitions
                .iter()
                .enumerate()
                .map(|(m, mu)| mu.fix() as i64 * table.class_sizes[m] as i64 * table.values[l][m])
                .sum(),
        })
        .collect();
    let nonzero: Vec<&DichotomyEntry> = entries.iter().filter(|e| e.sum != 0).collect();
    let mut dims: Vec<u64> = nonzero.iter().map(|e| e.dim).collect();
    dims.sort_unstable();
    let verdict = nonzero.len() == 2 && nonzero.iter().all(|e| e.sum == nf) && dims == [1, n as u64 - 1];

    let mut blocks: Vec<(crate::algebra::Rational, u64)> = Vec::new();
    for e in &entries {
        let scalar = crate::algebra::Rational::new(e.sum, e.dim as i64);
        match blocks.iter_mut().find(|(s, _)| *s == scalar) {
            Some((_, m)) => *m += e.dim * e.dim,
            None => blocks.push((scalar, e.dim * e.dim)),
        }
    }
    blocks.sort_by(|a, b| b.0.cmp(&a.0));
    Ok(DichotomyReport {
        n,
        nonzero: nonzero.iter().map(|e| e.partition.clone()).collect(),
        entries,
        verdict,
        block_spectrum: blocks.into_iter().map(|(s, m)| (s.to_string(), m)).collect(),
    })
}
