//! The symmetric group `S_N` acting on particle labels of product states.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// `10! = 3 628 800` permutations is the most we will enumerate.
pub const MAX_PERMUTATION_SIZE: usize = 10;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PermError {
    #[error("permutations of {0} labels exceed the cap of {MAX_PERMUTATION_SIZE}")]
    CapacityExceeded(usize),
    #[error("permutations need at least one label")]
    Empty,
    #[error("not a bijection on 1..={0}: {1:?}")]
    NotBijection(usize, Vec<usize>),
    #[error("length mismatch: permutation on {perm} labels, state with {state} particles")]
    LengthMismatch { perm: usize, state: usize },
    #[error("S_{0} is abelian; no noncommuting pair exists")]
    NoWitness(usize),
    #[error("cannot parse cycle notation {0:?}")]
    Parse(String),
}

/// A bijection of particle labels, stored 0-based: `mapping[i]` is the image
/// of label `i`.
///
/// Serialized as the 1-based image array, e.g. `[2, 1, 3]` for `(1 2)(3)`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<usize>", into = "Vec<usize>")]
pub struct Permutation {
    mapping: Vec<usize>,
}

impl Permutation {
    pub fn identity(n: usize) -> Self {
        Self {
            mapping: (0..n).collect(),
        }
    }

    /// Builds a permutation from a 0-based image array.
    pub fn from_mapping(mapping: Vec<usize>) -> Result<Self, PermError> {
        let n = mapping.len();
        let mut seen = vec![false; n];
        for &m in &mapping {
            if m >= n || seen[m] {
                return Err(PermError::NotBijection(n, mapping));
            }
            seen[m] = true;
        }
        Ok(Self { mapping })
    }

    /// Builds a permutation from 1-based images (`images[i-1] = p(i)`).
    pub fn from_images(images: &[usize]) -> Result<Self, PermError> {
        if images.contains(&0) {
            return Err(PermError::NotBijection(images.len(), images.to_vec()));
        }
        Self::from_mapping(images.iter().map(|x| x - 1).collect())
    }

    /// The swap of 0-based labels `i` and `j` in `S_n`.
    pub fn transposition(n: usize, i: usize, j: usize) -> Self {
        let mut mapping: Vec<usize> = (0..n).collect();
        mapping.swap(i, j);
        Self { mapping }
    }

    pub fn len(&self) -> usize {
        self.mapping.len()
    }

    pub fn is_empty(&self) -> bool {
        self.mapping.is_empty()
    }

    pub fn mapping(&self) -> &[usize] {
        &self.mapping
    }

    pub fn image(&self, i: usize) -> usize {
        self.mapping[i]
    }

    pub fn images(&self) -> Vec<usize> {
        self.mapping.iter().map(|m| m + 1).collect()
    }

    pub fn is_identity(&self) -> bool {
        self.mapping.iter().enumerate().all(|(i, m)| i == *m)
    }

    /// `self ∘ other`, i.e. apply `other` first.
    pub fn compose(&self, other: &Self) -> Self {
        assert_eq!(self.len(), other.len(), "composing permutations of different degree");
        Self {
            mapping: other.mapping.iter().map(|&m| self.mapping[m]).collect(),
        }
    }

    pub fn inverse(&self) -> Self {
        let mut mapping = vec![0; self.len()];
        for (i, &m) in self.mapping.iter().enumerate() {
            mapping[m] = i;
        }
        Self { mapping }
    }

    pub fn inversions(&self) -> usize {
        let m = &self.mapping;
        (0..m.len())
            .map(|i| (i + 1..m.len()).filter(|&j| m[i] > m[j]).count())
            .sum()
    }

    /// `+1` for even permutations, `-1` for odd ones.
    pub fn sign(&self) -> i32 {
        if self.inversions().is_multiple_of(2) {
            1
        } else {
            -1
        }
    }

    /// Disjoint cycles in 0-based labels, including fixed points, each
    /// starting at its smallest element.
    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.len()];
        let mut out = Vec::new();
        for start in 0..self.len() {
            if seen[start] {
                continue;
            }
            let mut cycle = vec![start];
            seen[start] = true;
            let mut next = self.mapping[start];
            while next != start {
                seen[next] = true;
                cycle.push(next);
                next = self.mapping[next];
            }
            out.push(cycle);
        }
        out
    }

    /// One-line cycle notation with 1-based labels, e.g. `(1 2)(3)`.
    pub fn cycle_notation(&self) -> String {
        self.cycles()
            .iter()
            .map(|c| {
                let inner: Vec<String> = c.iter().map(|x| (x + 1).to_string()).collect();
                format!("({})", inner.join(" "))
            })
            .collect()
    }

    /// Parses 1-based cycle notation on `n` labels; omitted labels are fixed.
    pub fn parse_cycles(text: &str, n: usize) -> Result<Self, PermError> {
        let err = || PermError::Parse(text.to_string());
        let mut mapping: Vec<usize> = (0..n).collect();
        let mut seen = vec![false; n];
        let mut rest = text.trim();
        while !rest.is_empty() {
            let body_end = rest.find(')').ok_or_else(err)?;
            let body = rest.strip_prefix('(').ok_or_else(err)?;
            let body = &body[..body_end - 1];
            let labels = body
                .split([' ', ','])
                .filter(|s| !s.is_empty())
                .map(|s| s.parse::<usize>().ok().filter(|v| (1..=n).contains(v)).map(|v| v - 1))
                .collect::<Option<Vec<_>>>()
                .ok_or_else(err)?;
            for (k, &label) in labels.iter().enumerate() {
                if seen[label] {
                    return Err(err());
                }
                seen[label] = true;
                mapping[label] = labels[(k + 1) % labels.len()];
            }
            rest = rest[body_end + 1..].trim_start();
        }
        Ok(Self { mapping })
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.cycle_notation())
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Permutation{}", self.cycle_notation())
    }
}

impl TryFrom<Vec<usize>> for Permutation {
    type Error = PermError;

    fn try_from(images: Vec<usize>) -> Result<Self, PermError> {
        Self::from_images(&images)
    }
}

impl From<Permutation> for Vec<usize> {
    fn from(p: Permutation) -> Self {
        p.images()
    }
}

/// All of `S_n` in lexicographic order of the image array. Cloning restarts
/// nothing; call [`enumerate_permutations`] again for a fresh pass.
#[derive(Debug, Clone)]
pub struct Permutations {
    next: Option<Vec<usize>>,
}

impl Iterator for Permutations {
    type Item = Permutation;

    fn next(&mut self) -> Option<Permutation> {
        let current = self.next.take()?;
        let mut succ = current.clone();
        // standard next-lexicographic-permutation step
        if let Some(i) = (0..succ.len().saturating_sub(1)).rev().find(|&i| succ[i] < succ[i + 1]) {
            let j = (i + 1..succ.len()).rev().find(|&j| succ[j] > succ[i]).unwrap();
            succ.swap(i, j);
            succ[i + 1..].reverse();
            self.next = Some(succ);
        }
        Some(Permutation { mapping: current })
    }
}

pub fn enumerate_permutations(n: usize) -> Result<Permutations, PermError> {
    if n == 0 {
        return Err(PermError::Empty);
    }
    if n > MAX_PERMUTATION_SIZE {
        return Err(PermError::CapacityExceeded(n));
    }
    Ok(Permutations {
        next: Some((0..n).collect()),
    })
}

/// `n!` as `u64`; exact for `n ≤ 20`.
pub fn factorial(n: usize) -> u64 {
    (1..=n as u64).product()
}

/// Number of distinct arrangements of `items`: `N!/∏ m_j!` where `m_j` are
/// the multiplicities of the distinct values.
pub fn orbit_size<T: Ord>(items: &[T]) -> u64 {
    let mut counts: BTreeMap<&T, usize> = BTreeMap::new();
    for it in items {
        *counts.entry(it).or_default() += 1;
    }
    multinomial(counts.values().copied())
}

/// `(Σ k_j)! / ∏ k_j!`, computed as a product of binomials so it stays exact
/// for any result that fits in `u64`.
pub fn multinomial(counts: impl IntoIterator<Item = usize>) -> u64 {
    let mut total = 0u64;
    let mut acc = 1u64;
    for k in counts {
        for i in 1..=k as u64 {
            total += 1;
            acc = acc * total / i;
        }
    }
    acc
}

/// Single-particle level occupied by each particle: `levels[i]` is the level
/// of particle `i`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ProductState {
    levels: Vec<usize>,
}

impl ProductState {
    pub fn new(levels: Vec<usize>) -> Self {
        Self { levels }
    }

    pub fn levels(&self) -> &[usize] {
        &self.levels
    }

    pub fn n_particles(&self) -> usize {
        self.levels.len()
    }

    pub fn level(&self, particle: usize) -> usize {
        self.levels[particle]
    }

    pub fn fits_basis(&self, basis_size: usize) -> bool {
        self.levels.iter().all(|&l| l < basis_size)
    }

    pub fn has_repeated_level(&self) -> bool {
        let mut sorted = self.levels.clone();
        sorted.sort_unstable();
        sorted.windows(2).any(|w| w[0] == w[1])
    }

    /// Levels sorted ascending: the canonical representative of the orbit.
    pub fn sorted(&self) -> Self {
        let mut levels = self.levels.clone();
        levels.sort_unstable();
        Self { levels }
    }
}

impl fmt::Debug for ProductState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.levels)
    }
}

impl From<Vec<usize>> for ProductState {
    fn from(levels: Vec<usize>) -> Self {
        Self::new(levels)
    }
}

/// Relabels particles: the level held by particle `i` moves to particle
/// `p(i)`, so `apply(p∘q, s) = apply(p, apply(q, s))`.
pub fn apply(p: &Permutation, s: &ProductState) -> Result<ProductState, PermError> {
    if p.len() != s.n_particles() {
        return Err(PermError::LengthMismatch {
            perm: p.len(),
            state: s.n_particles(),
        });
    }
    let mut levels = vec![0; s.n_particles()];
    for (i, &level) in s.levels.iter().enumerate() {
        levels[p.image(i)] = level;
    }
    Ok(ProductState { levels })
}

/// Two transpositions sharing one label whose products in the two orders act
/// differently on the all-distinct state `(0, 1, …, n-1)`.
pub fn noncommutation_witness(n: usize) -> Result<(Permutation, Permutation), PermError> {
    if n < 3 {
        return Err(PermError::NoWitness(n));
    }
    let a = Permutation::transposition(n, 0, 1);
    let b = Permutation::transposition(n, 1, 2);
    let probe = ProductState::new((0..n).collect());
    let ab = apply(&a.compose(&b), &probe)?;
    let ba = apply(&b.compose(&a), &probe)?;
    debug_assert_ne!(ab, ba);
    Ok((a, b))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn all(n: usize) -> Vec<Permutation> {
        enumerate_permutations(n).unwrap().collect()
    }

    #[test]
    fn counts_and_order() {
        assert_eq!(all(1), vec![Permutation::identity(1)]);
        let s3 = all(3);
        assert_eq!(s3.len(), 6);
        assert!(s3.windows(2).all(|w| w[0] < w[1]));
        assert_eq!(all(4).len(), 24);
        assert!(matches!(
            enumerate_permutations(11),
            Err(PermError::CapacityExceeded(11))
        ));
        assert!(matches!(enumerate_permutations(0), Err(PermError::Empty)));
    }

    #[test]
    fn signs() {
        assert_eq!(Permutation::identity(3).sign(), 1);
        assert_eq!(Permutation::transposition(3, 0, 1).sign(), -1);
        let cycle = Permutation::from_images(&[2, 3, 1]).unwrap();
        assert_eq!(cycle.inversions(), 2);
        assert_eq!(cycle.sign(), 1);
    }

    #[test]
    fn apply_relabels_particles() {
        let s = ProductState::new(vec![10, 20, 30]);
        assert_eq!(apply(&Permutation::identity(3), &s).unwrap(), s);
        let swapped = apply(&Permutation::transposition(3, 0, 1), &s).unwrap();
        assert_eq!(swapped.levels(), &[20, 10, 30]);
        assert!(matches!(
            apply(&Permutation::identity(2), &s),
            Err(PermError::LengthMismatch { perm: 2, state: 3 })
        ));
    }

    #[test]
    fn apply_is_a_homomorphism_on_s3() {
        let s = ProductState::new(vec![7, 8, 9]);
        let s3 = all(3);
        let mut checked = 0;
        for p in &s3 {
            for q in &s3 {
                let lhs = apply(&p.compose(q), &s).unwrap();
                let rhs = apply(p, &apply(q, &s).unwrap()).unwrap();
                assert_eq!(lhs, rhs);
                checked += 1;
            }
        }
        assert_eq!(checked, 36);
    }

    #[test]
    fn witnesses() {
        let (a, b) = noncommutation_witness(3).unwrap();
        assert_eq!(a, Permutation::transposition(3, 0, 1));
        assert_eq!(b, Permutation::transposition(3, 1, 2));
        let probe = ProductState::new(vec![0, 1, 2]);
        assert_ne!(
            apply(&a.compose(&b), &probe).unwrap(),
            apply(&b.compose(&a), &probe).unwrap()
        );
        assert_eq!(noncommutation_witness(2), Err(PermError::NoWitness(2)));
        let (a, b) = noncommutation_witness(4).unwrap();
        let probe = ProductState::new(vec![0, 1, 2, 3]);
        assert_ne!(
            apply(&a.compose(&b), &probe).unwrap(),
            apply(&b.compose(&a), &probe).unwrap()
        );
    }

    #[test]
    fn group_axioms_exhaustive() {
        for n in 1..=5 {
            let group = all(n);
            let members: std::collections::HashSet<_> = group.iter().cloned().collect();
            let e = Permutation::identity(n);
            assert!(members.contains(&e));
            for p in &group {
                assert_eq!(p.compose(&p.inverse()), e);
                assert_eq!(p.compose(&e), *p);
                for q in &group {
                    let pq = p.compose(q);
                    assert!(members.contains(&pq));
                    assert_eq!(pq.sign(), p.sign() * q.sign());
                }
            }
        }
    }

    #[test]
    fn cycle_notation_round_trip() {
        let p = Permutation::from_images(&[2, 1, 3]).unwrap();
        assert_eq!(p.cycle_notation(), "(1 2)(3)");
        assert_eq!(Permutation::parse_cycles("(1 2)(3)", 3).unwrap(), p);
        assert_eq!(Permutation::parse_cycles("(1 2)", 3).unwrap(), p);
        assert_eq!(serde_json::to_string(&p).unwrap(), "[2,1,3]");
        assert!(serde_json::from_str::<Permutation>("[1,1,3]").is_err());
        assert!(Permutation::parse_cycles("(1 4)", 3).is_err());
        assert!(Permutation::parse_cycles("(1 2)(2 3)", 3).is_err());
    }

    #[test]
    fn orbit_sizes() {
        assert_eq!(orbit_size(&[0, 0, 0]), 1);
        assert_eq!(orbit_size(&[0, 0, 1]), 3);
        assert_eq!(orbit_size(&[0, 1, 2]), 6);
        assert_eq!(multinomial([2, 2]), 6);
        assert_eq!(factorial(10), 3_628_800);
    }

    proptest! {
        #[test]
        fn apply_preserves_level_multiset(levels in prop::collection::vec(0usize..4, 1..6), seed in 0usize..720) {
            let n = levels.len();
            let perms: Vec<_> = enumerate_permutations(n).unwrap().collect();
            let p = &perms[seed % perms.len()];
            let s = ProductState::new(levels);
            let out = apply(p, &s).unwrap();
            prop_assert_eq!(out.sorted(), s.sorted());
        }
    }
}
