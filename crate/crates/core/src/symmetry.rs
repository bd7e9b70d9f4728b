//! N-particle state vectors in the product basis, (anti)symmetrization, the
//! explicit three-particle mixed-symmetry basis, projections and symmetry
//! classification.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exactnum::{ratio, rsqrt_of_rational, ExactError, RadicalRational, Rational};
use crate::perm::{apply, enumerate_permutations, factorial, orbit_size, PermError, Permutation, ProductState};

/// Largest particle number accepted by [`symmetrize`]; `8!` terms per vector.
pub const MAX_SYMMETRIZE_N: usize = 8;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SymmetryError {
    #[error(transparent)]
    Perm(#[from] PermError),
    #[error(transparent)]
    Exact(#[from] ExactError),
    #[error("symmetrization of {0} particles exceeds the cap of {MAX_SYMMETRIZE_N}")]
    CapacityExceeded(usize),
    #[error("the three-particle mixed basis needs three distinct levels, got {0:?}")]
    RequiresDistinctLevels(Vec<usize>),
    #[error("the mixed basis is only defined for three particles, got {0}")]
    RequiresThreeParticles(usize),
    #[error("particle number mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),
    #[error("basis vectors {0} and {1} are not orthonormal (overlap {2})")]
    BasisNotOrthonormal(usize, usize, String),
    #[error("cannot classify the zero vector")]
    ZeroVectorInput,
    #[error("level {level} outside a single-particle basis of size {basis_size}")]
    LevelOutOfRange { level: usize, basis_size: usize },
}

pub type Result<T, E = SymmetryError> = std::result::Result<T, E>;

/// Sparse wavefunction `Σ_s c_s |s⟩` over product states of a fixed particle
/// number. Zero amplitudes are never stored.
#[derive(Clone, PartialEq, Eq)]
pub struct StateVector {
    n_particles: usize,
    basis_size: usize,
    amplitudes: BTreeMap<ProductState, RadicalRational>,
}

impl StateVector {
    pub fn zero(n_particles: usize, basis_size: usize) -> Self {
        Self {
            n_particles,
            basis_size,
            amplitudes: BTreeMap::new(),
        }
    }

    /// The bare product state with amplitude one.
    pub fn product(s: &ProductState, basis_size: usize) -> Result<Self> {
        let mut v = Self::zero(s.n_particles(), basis_size);
        v.add_term(s.clone(), &RadicalRational::one())?;
        Ok(v)
    }

    pub fn from_terms(
        n_particles: usize,
        basis_size: usize,
        terms: impl IntoIterator<Item = (ProductState, RadicalRational)>,
    ) -> Result<Self> {
        let mut v = Self::zero(n_particles, basis_size);
        for (s, amp) in terms {
            v.add_term(s, &amp)?;
        }
        Ok(v)
    }

    pub fn n_particles(&self) -> usize {
        self.n_particles
    }

    pub fn basis_size(&self) -> usize {
        self.basis_size
    }

    pub fn num_terms(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn is_zero(&self) -> bool {
        self.amplitudes.is_empty()
    }

    pub fn amplitude(&self, s: &ProductState) -> RadicalRational {
        self.amplitudes.get(s).cloned().unwrap_or_default()
    }

    /// Terms in lexicographic order of the product state.
    pub fn terms(&self) -> impl Iterator<Item = (&ProductState, &RadicalRational)> {
        self.amplitudes.iter()
    }

    pub fn add_term(&mut self, s: ProductState, amp: &RadicalRational) -> Result<()> {
        if s.n_particles() != self.n_particles {
            return Err(SymmetryError::DimensionMismatch(self.n_particles, s.n_particles()));
        }
        if let Some(&level) = s.levels().iter().find(|&&l| l >= self.basis_size) {
            return Err(SymmetryError::LevelOutOfRange {
                level,
                basis_size: self.basis_size,
            });
        }
        if amp.is_zero() {
            return Ok(());
        }
        let entry = self.amplitudes.entry(s.clone()).or_default();
        *entry += amp;
        if entry.is_zero() {
            self.amplitudes.remove(&s);
        }
        Ok(())
    }

    pub fn scaled(&self, factor: &RadicalRational) -> Self {
        let mut out = Self::zero(self.n_particles, self.basis_size);
        if factor.is_zero() {
            return out;
        }
        out.amplitudes = self.amplitudes.iter().map(|(s, a)| (s.clone(), a * factor)).collect();
        out
    }

    pub fn scaled_rational(&self, factor: &Rational) -> Self {
        self.scaled(&RadicalRational::from_rational(factor.clone()))
    }

    pub fn plus(&self, other: &Self) -> Result<Self> {
        if self.n_particles != other.n_particles {
            return Err(SymmetryError::DimensionMismatch(self.n_particles, other.n_particles));
        }
        let mut out = self.clone();
        out.basis_size = self.basis_size.max(other.basis_size);
        for (s, a) in &other.amplitudes {
            out.add_term(s.clone(), a)?;
        }
        Ok(out)
    }

    pub fn minus(&self, other: &Self) -> Result<Self> {
        self.plus(&other.scaled(&RadicalRational::from_integer(-1)))
    }

    pub fn negated(&self) -> Self {
        self.scaled(&RadicalRational::from_integer(-1))
    }

    pub fn norm_squared(&self) -> RadicalRational {
        self.amplitudes
            .values()
            .fold(RadicalRational::zero(), |acc, a| &acc + &(a * a))
    }

    pub fn is_normalized(&self) -> bool {
        self.norm_squared() == RadicalRational::one()
    }

    /// Squared amplitudes keyed by product state.
    pub fn probabilities(&self) -> BTreeMap<ProductState, RadicalRational> {
        self.amplitudes.iter().map(|(s, a)| (s.clone(), a * a)).collect()
    }
}

impl fmt::Debug for StateVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_map()
            .entries(self.amplitudes.iter().map(|(s, a)| (s, a.to_string())))
            .finish()
    }
}

#[derive(Serialize, Deserialize)]
struct TermRepr {
    state: Vec<usize>,
    amp: RadicalRational,
}

#[derive(Serialize, Deserialize)]
struct StateVectorRepr {
    n: usize,
    terms: Vec<TermRepr>,
}

impl Serialize for StateVector {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        StateVectorRepr {
            n: self.n_particles,
            terms: self
                .amplitudes
                .iter()
                .map(|(s, a)| TermRepr {
                    state: s.levels().to_vec(),
                    amp: a.clone(),
                })
                .collect(),
        }
        .serialize(serializer)
    }
}

/// The basis size is not part of the wire form; it is recovered as one more
/// than the highest level that appears.
impl<'de> Deserialize<'de> for StateVector {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let repr = StateVectorRepr::deserialize(deserializer)?;
        let basis_size = repr
            .terms
            .iter()
            .flat_map(|t| t.state.iter().copied())
            .max()
            .map_or(0, |m| m + 1);
        StateVector::from_terms(
            repr.n,
            basis_size,
            repr.terms.into_iter().map(|t| (ProductState::new(t.state), t.amp)),
        )
        .map_err(serde::de::Error::custom)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Parity {
    Symmetric,
    Antisymmetric,
}

impl Parity {
    fn weight(self, p: &Permutation) -> i64 {
        match self {
            Parity::Symmetric => 1,
            Parity::Antisymmetric => p.sign() as i64,
        }
    }
}

fn check_basis(s: &ProductState, basis_size: usize) -> Result<()> {
    match s.levels().iter().find(|&&l| l >= basis_size) {
        Some(&level) => Err(SymmetryError::LevelOutOfRange { level, basis_size }),
        None => Ok(()),
    }
}

/// `(1/√N!)·Σ_P (±1)^P·P(s)` with no renormalization.
pub fn symmetrize_raw(s: &ProductState, parity: Parity, basis_size: usize) -> Result<StateVector> {
    let n = s.n_particles();
    if n > MAX_SYMMETRIZE_N {
        return Err(SymmetryError::CapacityExceeded(n));
    }
    check_basis(s, basis_size)?;
    // Accumulate integer weights first; the radical prefactor is applied once.
    let mut weights: BTreeMap<ProductState, i64> = BTreeMap::new();
    for p in enumerate_permutations(n)? {
        *weights.entry(apply(&p, s)?).or_default() += parity.weight(&p);
    }
    let prefactor = rsqrt_of_rational(&ratio(1, factorial(n) as i64))?;
    StateVector::from_terms(
        n,
        basis_size,
        weights
            .into_iter()
            .filter(|(_, w)| *w != 0)
            .map(|(state, w)| (state, prefactor.scale(&ratio(w, 1)))),
    )
}

/// Result of [`symmetrize`]: a unit vector (or the zero vector) plus the norm
/// the bare `1/√N!` prefactor produced.
#[derive(Debug, Clone, PartialEq)]
pub struct Symmetrized {
    pub vector: StateVector,
    pub raw_norm_squared: Rational,
    pub zero_vector: bool,
}

/// Symmetrizes or antisymmetrizes `s` and renormalizes to unit norm when
/// levels repeat. Antisymmetrizing a state with a repeated level yields the
/// zero vector, flagged in [`Symmetrized::zero_vector`].
pub fn symmetrize(s: &ProductState, parity: Parity, basis_size: usize) -> Result<Symmetrized> {
    let raw = symmetrize_raw(s, parity, basis_size)?;
    let raw_norm_squared = raw
        .norm_squared()
        .as_rational()
        .expect("single-radical amplitudes have rational squares");
    if raw.is_zero() {
        return Ok(Symmetrized {
            vector: raw,
            raw_norm_squared,
            zero_vector: true,
        });
    }
    let vector = if raw_norm_squared.is_one() {
        raw
    } else {
        let inv_norm = rsqrt_of_rational(&raw_norm_squared)?.recip()?;
        raw.scaled(&inv_norm)
    };
    Ok(Symmetrized {
        vector,
        raw_norm_squared,
        zero_vector: false,
    })
}

/// Relabelings `ψ(x,y,z)` of a three-particle product, in the order the
/// coefficient table uses. The tuple `(x,y,z)` means particle `x` takes the
/// first base level, `y` the second and `z` the third.
pub const THREE_PARTICLE_TUPLES: [[usize; 3]; 6] = [[1, 2, 3], [1, 3, 2], [2, 1, 3], [2, 3, 1], [3, 1, 2], [3, 2, 1]];

/// One mixed-symmetry vector: `(1/√norm_inverse_square)·Σ weight·ψ(tuple)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MixedRow {
    pub inverse_prefactor_squared: i64,
    pub weights: [i64; 6],
}

/// Coefficient table for `(s₁, s₂, s₁′, s₂′)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MixedBasisTable {
    pub rows: [MixedRow; 4],
}

pub const MIXED_BASIS_TABLE: MixedBasisTable = MixedBasisTable {
    rows: [
        MixedRow {
            inverse_prefactor_squared: 12,
            weights: [2, -1, 2, -1, -1, -1],
        },
        MixedRow {
            inverse_prefactor_squared: 4,
            weights: [0, 1, 0, -1, 1, -1],
        },
        MixedRow {
            inverse_prefactor_squared: 12,
            weights: [2, 1, -2, -1, -1, 1],
        },
        MixedRow {
            inverse_prefactor_squared: 4,
            weights: [0, 1, 0, 1, -1, -1],
        },
    ],
};

/// The four three-particle mixed-symmetry vectors. `(s1, s2)` and
/// `(s1_prime, s2_prime)` each span a two-dimensional subspace that is stable
/// under every relabeling.
#[derive(Debug, Clone, PartialEq)]
pub struct MixedBasis {
    pub s1: StateVector,
    pub s2: StateVector,
    pub s1_prime: StateVector,
    pub s2_prime: StateVector,
}

impl MixedBasis {
    pub fn to_array(&self) -> [StateVector; 4] {
        [
            self.s1.clone(),
            self.s2.clone(),
            self.s1_prime.clone(),
            self.s2_prime.clone(),
        ]
    }

    pub fn pair(&self, pair: u8) -> [&StateVector; 2] {
        match pair {
            1 => [&self.s1, &self.s2],
            _ => [&self.s1_prime, &self.s2_prime],
        }
    }
}

fn require_three_distinct(s: &ProductState) -> Result<()> {
    if s.n_particles() != 3 {
        return Err(SymmetryError::RequiresThreeParticles(s.n_particles()));
    }
    if s.has_repeated_level() {
        return Err(SymmetryError::RequiresDistinctLevels(s.levels().to_vec()));
    }
    Ok(())
}

/// `ψ(x,y,z)` for base state `s`.
pub fn relabeled(s: &ProductState, tuple: [usize; 3]) -> Result<ProductState> {
    Ok(apply(&Permutation::from_images(&tuple)?, s)?)
}

pub fn mixed_basis_from_table(table: &MixedBasisTable, s: &ProductState, basis_size: usize) -> Result<MixedBasis> {
    require_three_distinct(s)?;
    check_basis(s, basis_size)?;
    let build = |row: &MixedRow| -> Result<StateVector> {
        let prefactor = rsqrt_of_rational(&ratio(1, row.inverse_prefactor_squared))?;
        let mut v = StateVector::zero(3, basis_size);
        for (tuple, &w) in THREE_PARTICLE_TUPLES.iter().zip(&row.weights) {
            v.add_term(relabeled(s, *tuple)?, &prefactor.scale(&ratio(w, 1)))?;
        }
        Ok(v)
    };
    Ok(MixedBasis {
        s1: build(&table.rows[0])?,
        s2: build(&table.rows[1])?,
        s1_prime: build(&table.rows[2])?,
        s2_prime: build(&table.rows[3])?,
    })
}

pub fn mixed_basis_n3(s: &ProductState, basis_size: usize) -> Result<MixedBasis> {
    mixed_basis_from_table(&MIXED_BASIS_TABLE, s, basis_size)
}

/// The full orthonormal basis of a distinct-level three-particle orbit, in the
/// order `(ψ^S, ψ^A, s₁, s₂, s₁′, s₂′)`.
///
/// The antisymmetric member is oriented so that the unpermuted product
/// `ψ(1,2,3)` carries a negative coefficient, i.e. it is `-symmetrize(s, A)`.
pub fn orbit_basis_n3(s: &ProductState, basis_size: usize) -> Result<[StateVector; 6]> {
    orbit_basis_from_table(&MIXED_BASIS_TABLE, s, basis_size)
}

pub fn orbit_basis_from_table(
    table: &MixedBasisTable,
    s: &ProductState,
    basis_size: usize,
) -> Result<[StateVector; 6]> {
    let mixed = mixed_basis_from_table(table, s, basis_size)?;
    let sym = symmetrize(s, Parity::Symmetric, basis_size)?.vector;
    let anti = symmetrize(s, Parity::Antisymmetric, basis_size)?.vector.negated();
    Ok([sym, anti, mixed.s1, mixed.s2, mixed.s1_prime, mixed.s2_prime])
}

/// `⟨u|v⟩` with an orthonormal product basis. Amplitudes are real, so no
/// conjugation is needed.
pub fn inner_product(u: &StateVector, v: &StateVector) -> Result<RadicalRational> {
    if u.n_particles != v.n_particles {
        return Err(SymmetryError::DimensionMismatch(u.n_particles, v.n_particles));
    }
    let (small, large) = if u.num_terms() <= v.num_terms() { (u, v) } else { (v, u) };
    let mut acc = RadicalRational::zero();
    for (s, a) in &small.amplitudes {
        if let Some(b) = large.amplitudes.get(s) {
            acc += &(a * b);
        }
    }
    Ok(acc)
}

pub fn permute_vector(p: &Permutation, v: &StateVector) -> Result<StateVector> {
    if p.len() != v.n_particles {
        return Err(PermError::LengthMismatch {
            perm: p.len(),
            state: v.n_particles,
        }
        .into());
    }
    let mut out = StateVector::zero(v.n_particles, v.basis_size);
    for (s, a) in &v.amplitudes {
        out.add_term(apply(p, s)?, a)?;
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq)]
pub struct Decomposition {
    pub coefficients: Vec<RadicalRational>,
    pub residual: StateVector,
}

impl Decomposition {
    pub fn residual_is_zero(&self) -> bool {
        self.residual.is_zero()
    }

    pub fn coefficient_weight(&self) -> RadicalRational {
        self.coefficients
            .iter()
            .fold(RadicalRational::zero(), |acc, c| &acc + &(c * c))
    }
}

/// Checks `⟨b_i|b_j⟩ = δ_ij` exactly for every pair.
pub fn check_orthonormal(basis: &[StateVector]) -> Result<()> {
    for (i, bi) in basis.iter().enumerate() {
        for (j, bj) in basis.iter().enumerate().skip(i) {
            let overlap = inner_product(bi, bj)?;
            let expected = if i == j {
                RadicalRational::one()
            } else {
                RadicalRational::zero()
            };
            if overlap != expected {
                return Err(SymmetryError::BasisNotOrthonormal(i, j, overlap.to_string()));
            }
        }
    }
    Ok(())
}

/// Projects `v` onto an orthonormal `basis`: `c_i = ⟨b_i|v⟩`, together with
/// the residual `v − Σ c_i b_i`.
pub fn decompose(v: &StateVector, basis: &[StateVector]) -> Result<Decomposition> {
    check_orthonormal(basis)?;
    let mut residual = v.clone();
    let mut coefficients = Vec::with_capacity(basis.len());
    for b in basis {
        let c = inner_product(b, v)?;
        residual = residual.minus(&b.scaled(&c))?;
        coefficients.push(c);
    }
    Ok(Decomposition { coefficients, residual })
}

/// Size of the orbit of `s` under relabeling: `N!/∏ m_j!`.
pub fn exchange_degeneracy_dimension(s: &ProductState) -> u64 {
    orbit_size(s.levels())
}

fn rank(mut rows: Vec<Vec<Rational>>) -> usize {
    let cols = rows.first().map_or(0, Vec::len);
    let mut rank = 0;
    for col in 0..cols {
        let Some(pivot) = (rank..rows.len()).find(|&r| !rows[r][col].is_zero()) else {
            continue;
        };
        rows.swap(rank, pivot);
        let pivot_row = rows[rank].clone();
        for (r, row) in rows.iter_mut().enumerate() {
            if r != rank && !row[col].is_zero() {
                let f = &row[col] / &pivot_row[col];
                for (x, p) in row[col..].iter_mut().zip(&pivot_row[col..]) {
                    *x -= &f * p;
                }
            }
        }
        rank += 1;
    }
    rank
}

/// Dimension of the subspace of the orbit space of `s` with the given
/// exchange parity, found as the rank of the (rational) projector images of
/// every orbit element.
pub fn sector_dimension(s: &ProductState, parity: Parity) -> Result<usize> {
    let n = s.n_particles();
    if n > MAX_SYMMETRIZE_N {
        return Err(SymmetryError::CapacityExceeded(n));
    }
    let perms: Vec<Permutation> = enumerate_permutations(n)?.collect();
    let mut orbit: Vec<ProductState> = perms
        .iter()
        .map(|p| apply(p, s))
        .collect::<std::result::Result<_, _>>()?;
    orbit.sort();
    orbit.dedup();
    let index: BTreeMap<&ProductState, usize> = orbit.iter().enumerate().map(|(i, t)| (t, i)).collect();
    let norm = ratio(1, perms.len() as i64);
    let mut rows = Vec::with_capacity(orbit.len());
    for t in &orbit {
        let mut row = vec![Rational::zero(); orbit.len()];
        for p in &perms {
            row[index[&apply(p, t)?]] += &norm * ratio(parity.weight(p), 1);
        }
        rows.push(row);
    }
    Ok(rank(rows))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SymmetryClass {
    Symmetric,
    Antisymmetric,
    /// Lies in one of the two stable mixed pairs of the three-particle basis.
    /// `member` is 1 or 2 when the vector is proportional to that member of
    /// the pair, `None` for a generic combination within the pair.
    Mixed {
        pair: u8,
        member: Option<u8>,
    },
    NoSymmetry,
}

impl fmt::Display for SymmetryClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SymmetryClass::Symmetric => write!(f, "symmetric"),
            SymmetryClass::Antisymmetric => write!(f, "antisymmetric"),
            SymmetryClass::Mixed { pair, member: Some(m) } => write!(f, "mixed(pair {pair}, member {m})"),
            SymmetryClass::Mixed { pair, member: None } => write!(f, "mixed(pair {pair})"),
            SymmetryClass::NoSymmetry => write!(f, "none"),
        }
    }
}

fn all_transpositions(n: usize) -> impl Iterator<Item = Permutation> {
    (0..n).flat_map(move |i| (i + 1..n).map(move |j| Permutation::transposition(n, i, j)))
}

pub fn classify_symmetry(v: &StateVector) -> Result<SymmetryClass> {
    if v.is_zero() {
        return Err(SymmetryError::ZeroVectorInput);
    }
    let n = v.n_particles();
    let mut symmetric = true;
    let mut antisymmetric = true;
    let neg = v.negated();
    for t in all_transpositions(n) {
        let image = permute_vector(&t, v)?;
        symmetric &= image == *v;
        antisymmetric &= image == neg;
    }
    if symmetric {
        return Ok(SymmetryClass::Symmetric);
    }
    if antisymmetric {
        return Ok(SymmetryClass::Antisymmetric);
    }
    Ok(mixed_pair_of(v)?.unwrap_or(SymmetryClass::NoSymmetry))
}

fn mixed_pair_of(v: &StateVector) -> Result<Option<SymmetryClass>> {
    if v.n_particles() != 3 {
        return Ok(None);
    }
    let base = v.terms().next().expect("nonzero vector").0.sorted();
    if base.has_repeated_level() {
        return Ok(None);
    }
    let basis = orbit_basis_n3(&base, v.basis_size())?;
    let d = decompose(v, &basis)?;
    if !d.residual_is_zero() {
        return Ok(None);
    }
    let c = &d.coefficients;
    let zero = |x: &RadicalRational| x.is_zero();
    if !zero(&c[0]) || !zero(&c[1]) {
        return Ok(None);
    }
    let classify = |pair: u8, a: &RadicalRational, b: &RadicalRational| {
        let member = match (zero(a), zero(b)) {
            (false, true) => Some(1),
            (true, false) => Some(2),
            _ => None,
        };
        SymmetryClass::Mixed { pair, member }
    };
    Ok(match (zero(&c[4]) && zero(&c[5]), zero(&c[2]) && zero(&c[3])) {
        (true, false) => Some(classify(1, &c[2], &c[3])),
        (false, true) => Some(classify(2, &c[4], &c[5])),
        _ => None,
    })
}

/// Relabeling images of `v` under all of `S_N`.
pub fn orbit_images(v: &StateVector) -> Result<Vec<(Permutation, StateVector)>> {
    enumerate_permutations(v.n_particles())?
        .map(|p| {
            let image = permute_vector(&p, v)?;
            Ok((p, image))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ps(levels: &[usize]) -> ProductState {
        ProductState::new(levels.to_vec())
    }

    fn inv_sqrt(n: i64) -> RadicalRational {
        rsqrt_of_rational(&ratio(1, n)).unwrap()
    }

    #[test]
    fn product_vector_is_normalized() {
        let v = StateVector::product(&ps(&[0, 1, 2]), 3).unwrap();
        assert_eq!(v.num_terms(), 1);
        assert_eq!(v.amplitude(&ps(&[0, 1, 2])), RadicalRational::one());
        assert!(v.is_normalized());
        assert!(StateVector::product(&ps(&[0, 0, 0]), 1).unwrap().is_normalized());
        assert!(matches!(
            StateVector::product(&ps(&[0, 3]), 3),
            Err(SymmetryError::LevelOutOfRange {
                level: 3,
                basis_size: 3
            })
        ));
    }

    #[test]
    fn two_particle_symmetrization() {
        let out = symmetrize(&ps(&[0, 1]), Parity::Symmetric, 2).unwrap();
        assert_eq!(out.vector.num_terms(), 2);
        assert_eq!(out.vector.amplitude(&ps(&[0, 1])), inv_sqrt(2));
        assert_eq!(out.vector.amplitude(&ps(&[1, 0])), inv_sqrt(2));
        assert_eq!(out.raw_norm_squared, Rational::one());
    }

    #[test]
    fn three_particle_symmetrization() {
        let sym = symmetrize(&ps(&[0, 1, 2]), Parity::Symmetric, 3).unwrap().vector;
        assert_eq!(sym.num_terms(), 6);
        assert!(sym.terms().all(|(_, a)| *a == inv_sqrt(6)));

        let anti = symmetrize(&ps(&[0, 0, 1]), Parity::Antisymmetric, 2).unwrap();
        assert!(anti.zero_vector && anti.vector.is_zero());

        let rep = symmetrize(&ps(&[0, 0, 1]), Parity::Symmetric, 2).unwrap();
        assert_eq!(rep.raw_norm_squared, ratio(2, 1));
        assert_eq!(rep.vector.num_terms(), 3);
        assert!(rep.vector.terms().all(|(_, a)| *a == inv_sqrt(3)));
        let raw = symmetrize_raw(&ps(&[0, 0, 1]), Parity::Symmetric, 2).unwrap();
        assert!(raw.terms().all(|(_, a)| *a == inv_sqrt(6).scale(&ratio(2, 1))));
    }

    #[test]
    fn symmetrize_cap() {
        let s = ps(&[0, 1, 2, 3, 4, 5, 6, 7, 8]);
        assert_eq!(
            symmetrize(&s, Parity::Symmetric, 9),
            Err(SymmetryError::CapacityExceeded(9))
        );
    }

    #[test]
    fn mixed_basis_coefficients() {
        let base = ps(&[0, 1, 2]);
        let m = mixed_basis_n3(&base, 3).unwrap();
        assert_eq!(m.s1.amplitude(&base), inv_sqrt(3));
        assert_eq!(m.s2.num_terms(), 4);
        assert!(m
            .s2
            .terms()
            .all(|(_, a)| *a == RadicalRational::from_rational(ratio(1, 2))
                || *a == RadicalRational::from_rational(ratio(-1, 2))));
        assert_eq!(
            mixed_basis_n3(&ps(&[0, 0, 1]), 2),
            Err(SymmetryError::RequiresDistinctLevels(vec![0, 0, 1]))
        );
    }

    #[test]
    fn relabeled_tuple_convention() {
        // ψ(2,3,1): particle 2 takes level a, particle 3 level b, particle 1 level c.
        let s = ps(&[10, 20, 30]);
        assert_eq!(relabeled(&s, [2, 3, 1]).unwrap(), ps(&[30, 10, 20]));
        assert_eq!(relabeled(&s, [1, 3, 2]).unwrap(), ps(&[10, 30, 20]));
    }

    #[test]
    fn orbit_basis_orthonormal() {
        let basis = orbit_basis_n3(&ps(&[0, 1, 2]), 3).unwrap();
        check_orthonormal(&basis).unwrap();
    }

    #[test]
    fn inner_products() {
        let s = ps(&[0, 1, 2]);
        let sym = symmetrize(&s, Parity::Symmetric, 3).unwrap().vector;
        let anti = symmetrize(&s, Parity::Antisymmetric, 3).unwrap().vector;
        assert!(inner_product(&sym, &anti).unwrap().is_zero());
        assert_eq!(inner_product(&sym, &sym).unwrap(), RadicalRational::one());
        let m = mixed_basis_n3(&s, 3).unwrap();
        let prod = StateVector::product(&s, 3).unwrap();
        assert_eq!(inner_product(&m.s1, &prod).unwrap(), inv_sqrt(3));
        let two = StateVector::product(&ps(&[0, 1]), 3).unwrap();
        assert_eq!(inner_product(&two, &prod), Err(SymmetryError::DimensionMismatch(2, 3)));
    }

    #[test]
    fn permuting_sector_vectors() {
        let s = ps(&[0, 1, 2]);
        let sym = symmetrize(&s, Parity::Symmetric, 3).unwrap().vector;
        let anti = symmetrize(&s, Parity::Antisymmetric, 3).unwrap().vector;
        for p in enumerate_permutations(3).unwrap() {
            assert_eq!(permute_vector(&p, &sym).unwrap(), sym);
        }
        let t = Permutation::transposition(3, 0, 1);
        assert_eq!(permute_vector(&t, &anti).unwrap(), anti.negated());

        let m = mixed_basis_n3(&s, 3).unwrap();
        let image = permute_vector(&t, &m.s1).unwrap();
        let d = decompose(&image, &[m.s1.clone(), m.s2.clone()]).unwrap();
        assert!(d.residual_is_zero());
    }

    #[test]
    fn decomposition_of_product_state() {
        let s = ps(&[0, 1, 2]);
        let basis = orbit_basis_n3(&s, 3).unwrap();
        let d = decompose(&StateVector::product(&s, 3).unwrap(), &basis).unwrap();
        let expected = vec![
            inv_sqrt(6),
            -inv_sqrt(6),
            inv_sqrt(3),
            RadicalRational::zero(),
            inv_sqrt(3),
            RadicalRational::zero(),
        ];
        assert_eq!(d.coefficients, expected);
        assert!(d.residual_is_zero());
        assert_eq!(d.coefficient_weight(), RadicalRational::one());

        let d = decompose(&basis[0], &basis).unwrap();
        assert_eq!(d.coefficients[0], RadicalRational::one());
        assert!(d.coefficients[1..].iter().all(RadicalRational::is_zero));
    }

    #[test]
    fn decomposition_with_repeated_levels() {
        let s = ps(&[0, 0, 1]);
        let sym = symmetrize(&s, Parity::Symmetric, 2).unwrap().vector;
        let d = decompose(&StateVector::product(&s, 2).unwrap(), &[sym]).unwrap();
        assert_eq!(d.coefficients, vec![inv_sqrt(3)]);
        assert_eq!(d.residual.norm_squared(), RadicalRational::from_rational(ratio(2, 3)));
    }

    #[test]
    fn decompose_rejects_non_orthonormal() {
        let s = ps(&[0, 1]);
        let a = StateVector::product(&s, 2).unwrap();
        let b = a.scaled_rational(&ratio(2, 1));
        assert!(matches!(
            decompose(&a, &[b]),
            Err(SymmetryError::BasisNotOrthonormal(0, 0, _))
        ));
    }

    #[test]
    fn degeneracy_dimensions() {
        assert_eq!(exchange_degeneracy_dimension(&ps(&[0, 0, 0])), 1);
        assert_eq!(exchange_degeneracy_dimension(&ps(&[0, 0, 1])), 3);
        assert_eq!(exchange_degeneracy_dimension(&ps(&[0, 1, 2])), 6);
    }

    #[test]
    fn classification() {
        let s = ps(&[0, 1, 2]);
        let sym = symmetrize(&s, Parity::Symmetric, 3).unwrap().vector;
        let anti = symmetrize(&s, Parity::Antisymmetric, 3).unwrap().vector;
        let m = mixed_basis_n3(&s, 3).unwrap();
        assert_eq!(classify_symmetry(&sym).unwrap(), SymmetryClass::Symmetric);
        assert_eq!(classify_symmetry(&anti).unwrap(), SymmetryClass::Antisymmetric);
        assert_eq!(
            classify_symmetry(&m.s2).unwrap(),
            SymmetryClass::Mixed {
                pair: 1,
                member: Some(2)
            }
        );
        assert_eq!(
            classify_symmetry(&m.s1_prime).unwrap(),
            SymmetryClass::Mixed {
                pair: 2,
                member: Some(1)
            }
        );
        let combo = m.s1.plus(&m.s2).unwrap();
        assert_eq!(
            classify_symmetry(&combo).unwrap(),
            SymmetryClass::Mixed { pair: 1, member: None }
        );
        let prod = StateVector::product(&s, 3).unwrap();
        assert_eq!(classify_symmetry(&prod).unwrap(), SymmetryClass::NoSymmetry);
        assert_eq!(
            classify_symmetry(&StateVector::zero(3, 3)),
            Err(SymmetryError::ZeroVectorInput)
        );
    }

    #[test]
    fn sector_dimensions() {
        let s = ps(&[0, 1, 2]);
        assert_eq!(sector_dimension(&s, Parity::Symmetric).unwrap(), 1);
        assert_eq!(sector_dimension(&s, Parity::Antisymmetric).unwrap(), 1);
        assert_eq!(sector_dimension(&ps(&[0, 0, 1]), Parity::Antisymmetric).unwrap(), 0);
    }

    #[test]
    fn json_form() {
        let v = symmetrize(&ps(&[0, 1]), Parity::Antisymmetric, 2).unwrap().vector;
        let json = serde_json::to_string(&v).unwrap();
        assert_eq!(
            json,
            r#"{"n":2,"terms":[{"state":[0,1],"amp":{"terms":[[2,"1/2"]]}},{"state":[1,0],"amp":{"terms":[[2,"-1/2"]]}}]}"#
        );
        let back: StateVector = serde_json::from_str(&json).unwrap();
        assert_eq!(back, v);
    }
}
