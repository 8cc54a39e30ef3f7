//! Permutations of `[n]` in one-line notation.
//!
//! Composition is right to left: `compose(s, t)(i) = s(t(i))`. The canonical
//! index of a permutation is the lexicographic rank of its word.

use std::fmt;
use std::str::FromStr;

use smallvec::SmallVec;

use crate::characters::Partition;
use crate::config::MAX_ENUM_N;
use crate::error::{Error, Result};

type Word = SmallVec<[u8; 8]>;

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation {
    word: Word,
}

/// A cycle `(c_1 c_2 ... c_k)` sending `c_l` to `c_{l+1}` and `c_k` to `c_1`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Cycle {
    support: Vec<u8>,
}

impl Cycle {
    pub fn new(support: Vec<u8>) -> Self {
        debug_assert!(support.len() >= 2);
        Cycle { support }
    }

    pub fn transposition(i: usize, j: usize) -> Self {
        Cycle { support: vec![i as u8, j as u8] }
    }

    pub fn support(&self) -> &[u8] {
        &self.support
    }

    pub fn len(&self) -> usize {
        self.support.len()
    }

    pub fn is_empty(&self) -> bool {
        self.support.is_empty()
    }

    pub fn to_permutation(&self, n: usize) -> Permutation {
        let mut word: Word = (1..=n as u8).collect();
        let k = self.support.len();
        for l in 0..k {
            word[self.support[l] as usize - 1] = self.support[(l + 1) % k];
        }
        Permutation { word }
    }
}

impl fmt::Display for Cycle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.support.iter().map(u8::to_string).collect();
        write!(f, "({})", parts.join(" "))
    }
}

impl Permutation {
    /// Validates a one-line word with values in `1..=n`.
    pub fn from_word(word: &[usize]) -> Result<Self> {
        let n = word.len();
        if n == 0 || n > u8::MAX as usize {
            return Err(Error::Usage(format!("permutation degree {n} out of range")));
        }
        let mut seen = vec![false; n + 1];
        for &v in word {
            if v == 0 || v > n || seen[v] {
                return Err(Error::Usage(format!("{word:?} is not a permutation of [{n}]")));
            }
            seen[v] = true;
        }
        Ok(Permutation { word: word.iter().map(|&v| v as u8).collect() })
    }

    pub fn identity(n: usize) -> Self {
        Permutation { word: (1..=n as u8).collect() }
    }

    pub fn n(&self) -> usize {
        self.word.len()
    }

    /// `σ(i)` for `i` in `1..=n`.
    #[inline]
    pub fn apply(&self, i: usize) -> usize {
        self.word[i - 1] as usize
    }

    pub fn word(&self) -> impl Iterator<Item = usize> + '_ {
        self.word.iter().map(|&v| v as usize)
    }

    pub fn is_identity(&self) -> bool {
        self.word.iter().enumerate().all(|(k, &v)| v as usize == k + 1)
    }

    pub fn compose(&self, t: &Permutation) -> Result<Permutation> {
        if self.n() != t.n() {
            return Err(Error::Usage(format!(
                "cannot compose permutations of degrees {} and {}",
                self.n(),
                t.n()
            )));
        }
        Ok(self.compose_unchecked(t))
    }

    #[inline]
    pub(crate) fn compose_unchecked(&self, t: &Permutation) -> Permutation {
        Permutation { word: t.word.iter().map(|&v| self.word[v as usize - 1]).collect() }
    }

    pub fn inverse(&self) -> Permutation {
        let mut word: Word = smallvec::smallvec![0; self.n()];
        for (k, &v) in self.word.iter().enumerate() {
            word[v as usize - 1] = (k + 1) as u8;
        }
        Permutation { word }
    }

    pub fn fixed_points(&self) -> impl Iterator<Item = usize> + '_ {
        self.word.iter().enumerate().filter(|(k, &v)| v as usize == k + 1).map(|(k, _)| k + 1)
    }

    pub fn fix_count(&self) -> usize {
        self.fixed_points().count()
    }

    /// Non-trivial cycles, each starting at its least element, ordered by
    /// that element.
    pub fn cycles(&self) -> Vec<Cycle> {
        let n = self.n();
        let mut seen = vec![false; n + 1];
        let mut out = Vec::new();
        for start in 1..=n {
            if seen[start] {
                continue;
            }
            let mut support = vec![start as u8];
            seen[start] = true;
            let mut cur = self.apply(start);
            while cur != start {
                seen[cur] = true;
                support.push(cur as u8);
                cur = self.apply(cur);
            }
            if support.len() > 1 {
                out.push(Cycle { support });
            }
        }
        out
    }

    pub fn cycle_type(&self) -> Partition {
        let mut parts: Vec<usize> = self.cycles().iter().map(Cycle::len).collect();
        parts.extend(std::iter::repeat_n(1, self.fix_count()));
        Partition::from_unsorted(parts)
    }

    /// Lexicographic rank among all permutations of the same degree.
    pub fn rank(&self) -> usize {
        let n = self.n();
        let mut used = 0u32;
        let mut rank = 0usize;
        for (k, &v) in self.word.iter().enumerate() {
            let smaller_unused = (v as u32 - 1) - (used & ((1 << (v - 1)) - 1)).count_ones();
            rank += smaller_unused as usize * factorial(n - 1 - k);
            used |= 1 << (v - 1);
        }
        rank
    }

    pub fn unrank(n: usize, mut rank: usize) -> Result<Permutation> {
        if n == 0 || n > 20 || rank >= factorial(n) {
            return Err(Error::Usage(format!("rank {rank} out of range for degree {n}")));
        }
        let mut pool: Vec<u8> = (1..=n as u8).collect();
        let mut word = Word::with_capacity(n);
        for k in (0..n).rev() {
            let f = factorial(k);
            word.push(pool.remove(rank / f));
            rank %= f;
        }
        Ok(Permutation { word })
    }

    /// Transpositions `(i_1 j_1) ... (i_k j_k)` whose left-to-right product
    /// is `self`, such that at step `l` either both `i_l, j_l` are fixed by
    /// the prefix product, or `i_l` is moved and `j_l` is fixed.
    ///
    /// The identity yields the empty chain.
    pub fn fixdisc_transposition_chain(&self) -> Vec<Cycle> {
        // (c1 .. cm) * (cm c_{m+1}) = (c1 .. cm c_{m+1}).
        self.cycles()
            .iter()
            .flat_map(|c| c.support.windows(2).map(|w| Cycle::transposition(w[0] as usize, w[1] as usize)))
            .collect()
    }
}

/// Checks the step discipline of a transposition chain and returns the
/// prefix products `τ_0 = ι, τ_1, ..., τ_k`, or `None` if a step violates it.
pub fn chain_prefixes(n: usize, chain: &[Cycle]) -> Option<Vec<Permutation>> {
    let mut prefixes = vec![Permutation::identity(n)];
    for t in chain {
        let prev = prefixes.last().expect("nonempty");
        let &[i, j] = t.support() else { return None };
        let (i, j) = (i as usize, j as usize);
        let fixed = |k: usize| prev.apply(k) == k;
        if !((fixed(i) && fixed(j)) || (!fixed(i) && fixed(j))) {
            return None;
        }
        prefixes.push(prev.compose_unchecked(&t.to_permutation(n)));
    }
    Some(prefixes)
}

pub fn factorial(n: usize) -> usize {
    (1..=n).product()
}

/// All permutations of `[n]` in lexicographic order.
pub fn enumerate(n: usize) -> Result<Vec<Permutation>> {
    if n == 0 || n > MAX_ENUM_N {
        return Err(Error::ResourceCap(format!("enumeration supports 1 <= n <= {MAX_ENUM_N}, got {n}")));
    }
    let mut out = Vec::with_capacity(factorial(n));
    let mut word: Vec<u8> = (1..=n as u8).collect();
    loop {
        out.push(Permutation { word: word.iter().copied().collect() });
        // Next lexicographic permutation.
        let Some(k) = (0..n - 1).rev().find(|&k| word[k] < word[k + 1]) else {
            break;
        };
        let l = (k + 1..n).rev().find(|&l| word[l] > word[k]).expect("successor exists");
        word.swap(k, l);
        word[k + 1..].reverse();
    }
    Ok(out)
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, v) in self.word.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{v}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{self}]")
    }
}

impl FromStr for Permutation {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let word = s
            .trim()
            .trim_start_matches('[')
            .trim_end_matches(']')
            .split(',')
            .map(|t| t.trim().parse::<usize>().map_err(|e| Error::Parse(format!("{s:?}: {e}"))))
            .collect::<Result<Vec<_>>>()?;
        Permutation::from_word(&word)
    }
}

impl serde::Serialize for Permutation {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn p(s: &str) -> Permutation {
        s.parse().unwrap()
    }

    #[test]
    fn enumeration_order_and_size() {
        assert_eq!(enumerate(1).unwrap(), vec![p("1")]);
        let s3 = enumerate(3).unwrap();
        assert_eq!(s3.len(), 6);
        assert_eq!(s3[0], p("1,2,3"));
        assert_eq!(s3[5], p("3,2,1"));
        assert!(s3.windows(2).all(|w| w[0] < w[1]));
        assert!(matches!(enumerate(9), Err(Error::ResourceCap(_))));
        assert!(matches!(enumerate(0), Err(Error::ResourceCap(_))));
    }

    #[test]
    fn rank_unrank_round_trip() {
        for n in 1..=6 {
            for (k, s) in enumerate(n).unwrap().iter().enumerate() {
                assert_eq!(s.rank(), k);
                assert_eq!(&Permutation::unrank(n, k).unwrap(), s);
            }
        }
    }

    #[test]
    fn composition_is_right_to_left() {
        assert_eq!(p("2,1,3").compose(&p("1,3,2")).unwrap(), p("2,3,1"));
        assert_eq!(p("2,3,1").inverse(), p("3,1,2"));
        assert!(p("1,2").compose(&p("1,2,3")).is_err());
    }

    #[test]
    fn group_axioms_exhaustive() {
        for n in 1..=5 {
            let all = enumerate(n).unwrap();
            let id = Permutation::identity(n);
            for s in &all {
                assert_eq!(s.compose(&id).unwrap(), *s);
                assert_eq!(id.compose(s).unwrap(), *s);
                assert!(s.compose(&s.inverse()).unwrap().is_identity());
                assert!(s.inverse().compose(s).unwrap().is_identity());
            }
        }
    }

    #[test]
    fn fix_of_quotient_is_agreement_set() {
        for n in 1..=5 {
            let all = enumerate(n).unwrap();
            for s in &all {
                for t in &all {
                    let q = s.inverse().compose(t).unwrap();
                    let lhs: Vec<usize> = q.fixed_points().collect();
                    let rhs: Vec<usize> = (1..=n).filter(|&i| s.apply(i) == t.apply(i)).collect();
                    assert_eq!(lhs, rhs);
                }
            }
        }
    }

    #[test]
    fn cycle_types() {
        assert_eq!(Permutation::identity(4).cycle_type().parts(), &[1, 1, 1, 1]);
        assert_eq!(p("2,1,4,3").cycle_type().parts(), &[2, 2]);
        let mut counts = std::collections::BTreeMap::new();
        for s in enumerate(4).unwrap() {
            *counts.entry(s.cycle_type().label()).or_insert(0) += 1;
        }
        let expected: std::collections::BTreeMap<String, i32> =
            [("1+1+1+1", 1), ("2+1+1", 6), ("2+2", 3), ("3+1", 8), ("4", 6)]
                .into_iter()
                .map(|(k, v)| (k.to_string(), v))
                .collect();
        assert_eq!(counts, expected);
    }

    #[test]
    fn class_sizes_match_centralizer_formula() {
        for n in 1..=7 {
            let mut counts = std::collections::HashMap::new();
            for s in enumerate(n).unwrap() {
                *counts.entry(s.cycle_type()).or_insert(0usize) += 1;
            }
            for (mu, c) in counts {
                let mut z = 1usize;
                for (part, mult) in mu.multiplicities() {
                    z *= part.pow(mult as u32) * factorial(mult);
                }
                assert_eq!(c, factorial(n) / z, "{mu}");
            }
        }
    }

    #[test]
    fn transposition_chains() {
        let t = p("2,1,3,4");
        assert_eq!(t.fixdisc_transposition_chain(), vec![Cycle::transposition(1, 2)]);
        let c3 = Cycle::new(vec![1, 2, 3]).to_permutation(4);
        assert_eq!(c3.fixdisc_transposition_chain().len(), 2);
        assert!(Permutation::identity(4).fixdisc_transposition_chain().is_empty());
        for n in 4..=5 {
            for s in enumerate(n).unwrap().into_iter().filter(|s| !s.is_identity()) {
                let chain = s.fixdisc_transposition_chain();
                assert!(chain.len() <= n);
                let prefixes = chain_prefixes(n, &chain).expect("discipline holds");
                assert_eq!(prefixes.last().unwrap(), &s);
            }
        }
    }

    #[test]
    fn chain_discipline_rejects_bad_step() {
        // Second step moves two points already moved by (1 2).
        let chain = [Cycle::transposition(1, 2), Cycle::transposition(2, 1)];
        assert!(chain_prefixes(3, &chain).is_none());
    }

    #[test]
    fn display_parse() {
        assert_eq!(p("2,1,4,3").to_string(), "2,1,4,3");
        assert!("1,1,2".parse::<Permutation>().is_err());
        assert!("1,x".parse::<Permutation>().is_err());
        assert_eq!(Cycle::new(vec![1, 3, 2]).to_string(), "(1 3 2)");
    }

    proptest! {
        #[test]
        fn associativity(n in 1usize..8, a in any::<usize>(), b in any::<usize>(), c in any::<usize>()) {
            let f = factorial(n);
            let (a, b, c) = (
                Permutation::unrank(n, a % f).unwrap(),
                Permutation::unrank(n, b % f).unwrap(),
                Permutation::unrank(n, c % f).unwrap(),
            );
            prop_assert_eq!(
                a.compose(&b).unwrap().compose(&c).unwrap(),
                a.compose(&b.compose(&c).unwrap()).unwrap()
            );
        }

        #[test]
        fn cycle_type_counts_fixed_points(n in 1usize..9, r in any::<usize>()) {
            let s = Permutation::unrank(n, r % factorial(n)).unwrap();
            let mu = s.cycle_type();
            prop_assert_eq!(mu.parts().iter().sum::<usize>(), n);
            prop_assert_eq!(mu.parts().iter().filter(|&&p| p == 1).count(), s.fix_count());
            prop_assert!(mu.parts().windows(2).all(|w| w[0] >= w[1]));
        }
    }
}
