//! One-body operator expectations over N-particle state vectors, the
//! particle-in-a-box position matrix, and plane-wave checks.

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::fmt;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exactnum::{RadicalRational, Rational};
use crate::perm::{orbit_size, ProductState};
use crate::symmetry::{symmetrize, Parity, StateVector, SymmetryError};

const HERMITIAN_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ObservableError {
    #[error("state is not normalized (norm² = {0})")]
    NotNormalized(String),
    #[error("operator of dimension {dim} cannot act on level {level}")]
    DimensionMismatch { dim: usize, level: usize },
    #[error("particle index {particle} out of range for {n} particles")]
    ParticleOutOfRange { particle: usize, n: usize },
    #[error("operator matrix is not square")]
    NotSquare,
    #[error("operator matrix is not hermitian at ({0}, {1})")]
    NotHermitian(usize, usize),
    #[error("position expectation needs distinct levels, got {0:?}")]
    RequiresDistinctLevels(Vec<usize>),
    #[error("invalid box parameters: {0}")]
    InvalidBox(String),
    #[error(transparent)]
    Symmetry(#[from] SymmetryError),
}

pub type Result<T, E = ObservableError> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq)]
pub enum OperatorEntries {
    Exact(Vec<Vec<Rational>>),
    Float(Vec<Vec<f64>>),
}

/// Single-particle operator `O` given by its matrix in the level basis; it is
/// lifted to particle `i` as `O^{(i)} = 1 ⊗ … ⊗ O ⊗ … ⊗ 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct OneBodyOperator {
    dim: usize,
    entries: OperatorEntries,
    hermitian: bool,
}

fn square_dim<T>(m: &[Vec<T>]) -> Result<usize> {
    let dim = m.len();
    if m.iter().any(|row| row.len() != dim) {
        return Err(ObservableError::NotSquare);
    }
    Ok(dim)
}

impl OneBodyOperator {
    /// Diagonal operator with exact eigenvalues, e.g. a one-body Hamiltonian
    /// with level energies `ε_k`.
    pub fn diagonal_exact(diagonal: &[Rational]) -> Self {
        let dim = diagonal.len();
        let mut m = vec![vec![Rational::zero(); dim]; dim];
        for (k, e) in diagonal.iter().enumerate() {
            m[k][k] = e.clone();
        }
        Self {
            dim,
            entries: OperatorEntries::Exact(m),
            hermitian: true,
        }
    }

    pub fn exact(matrix: Vec<Vec<Rational>>) -> Result<Self> {
        let dim = square_dim(&matrix)?;
        let hermitian = (0..dim).all(|m| (0..m).all(|n| matrix[m][n] == matrix[n][m]));
        Ok(Self {
            dim,
            entries: OperatorEntries::Exact(matrix),
            hermitian,
        })
    }

    /// Real symmetric float matrix; asymmetry beyond `1e-12` (relative to the
    /// largest entry) is rejected.
    pub fn hermitian_float(matrix: Vec<Vec<f64>>) -> Result<Self> {
        let dim = square_dim(&matrix)?;
        let scale = matrix.iter().flatten().fold(1.0f64, |acc, x| acc.max(x.abs()));
        for (m, row) in matrix.iter().enumerate() {
            for (n, &x) in row.iter().enumerate().take(m) {
                if (x - matrix[n][m]).abs() > HERMITIAN_TOLERANCE * scale {
                    return Err(ObservableError::NotHermitian(m, n));
                }
            }
        }
        Ok(Self {
            dim,
            entries: OperatorEntries::Float(matrix),
            hermitian: true,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn is_hermitian(&self) -> bool {
        self.hermitian
    }

    pub fn is_exact(&self) -> bool {
        matches!(self.entries, OperatorEntries::Exact(_))
    }

    pub fn entries(&self) -> &OperatorEntries {
        &self.entries
    }

    pub fn entry_f64(&self, m: usize, n: usize) -> f64 {
        match &self.entries {
            OperatorEntries::Exact(e) => num_traits::ToPrimitive::to_f64(&e[m][n]).unwrap_or(f64::NAN),
            OperatorEntries::Float(e) => e[m][n],
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Expectation {
    Exact(RadicalRational),
    Float(f64),
}

impl Expectation {
    pub fn to_f64(&self) -> f64 {
        match self {
            Expectation::Exact(v) => v.to_f64(),
            Expectation::Float(v) => *v,
        }
    }

    pub fn exact(&self) -> Option<&RadicalRational> {
        match self {
            Expectation::Exact(v) => Some(v),
            Expectation::Float(_) => None,
        }
    }
}

fn check_particle(v: &StateVector, particle: usize) -> Result<()> {
    if particle >= v.n_particles() {
        return Err(ObservableError::ParticleOutOfRange {
            particle,
            n: v.n_particles(),
        });
    }
    Ok(())
}

fn check_normalized(v: &StateVector) -> Result<()> {
    let norm = v.norm_squared();
    if norm != RadicalRational::one() {
        return Err(ObservableError::NotNormalized(norm.to_string()));
    }
    Ok(())
}

/// Terms of `v` grouped by the levels of every particle except `particle`;
/// only terms in the same group are connected by a one-body operator.
fn spectator_groups(v: &StateVector, particle: usize) -> BTreeMap<Vec<usize>, Vec<(usize, &RadicalRational)>> {
    let mut groups: BTreeMap<Vec<usize>, Vec<(usize, &RadicalRational)>> = BTreeMap::new();
    for (s, amp) in v.terms() {
        let mut spectators = s.levels().to_vec();
        let own = spectators.remove(particle);
        groups.entry(spectators).or_default().push((own, amp));
    }
    groups
}

/// `⟨v|O^{(i)}|v⟩` for a normalized `v`; `particle` is 0-based. Exact when the
/// operator is exact.
pub fn one_body_expectation(v: &StateVector, op: &OneBodyOperator, particle: usize) -> Result<Expectation> {
    check_particle(v, particle)?;
    check_normalized(v)?;
    if let Some((s, _)) = v.terms().find(|(s, _)| s.levels().iter().any(|&l| l >= op.dim)) {
        let level = *s.levels().iter().find(|&&l| l >= op.dim).unwrap();
        return Err(ObservableError::DimensionMismatch { dim: op.dim, level });
    }
    let groups = spectator_groups(v, particle);
    Ok(match &op.entries {
        OperatorEntries::Exact(m) => {
            let mut acc = RadicalRational::zero();
            for terms in groups.values() {
                for (a, ca) in terms {
                    for (b, cb) in terms {
                        if !m[*a][*b].is_zero() {
                            acc += &(*ca * *cb).scale(&m[*a][*b]);
                        }
                    }
                }
            }
            Expectation::Exact(acc)
        }
        OperatorEntries::Float(m) => {
            let mut acc = 0.0;
            for terms in groups.values() {
                for (a, ca) in terms {
                    for (b, cb) in terms {
                        acc += ca.to_f64() * cb.to_f64() * m[*a][*b];
                    }
                }
            }
            Expectation::Float(acc)
        }
    })
}

/// `⟨H_i⟩ = Σ_k w_k ε_k` as a linear form in the level energies, valid for
/// any diagonal one-body Hamiltonian. The weight `w_k` is the probability
/// that particle `i` occupies level `k`.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct EnergyForm {
    weights: BTreeMap<usize, RadicalRational>,
}

impl EnergyForm {
    pub fn from_weights(weights: impl IntoIterator<Item = (usize, RadicalRational)>) -> Self {
        let mut out = Self::default();
        for (k, w) in weights {
            out.add(k, &w);
        }
        out
    }

    fn add(&mut self, level: usize, w: &RadicalRational) {
        let entry = self.weights.entry(level).or_default();
        *entry += w;
        if entry.is_zero() {
            self.weights.remove(&level);
        }
    }

    pub fn weight(&self, level: usize) -> RadicalRational {
        self.weights.get(&level).cloned().unwrap_or_default()
    }

    pub fn weights(&self) -> impl Iterator<Item = (usize, &RadicalRational)> {
        self.weights.iter().map(|(k, w)| (*k, w))
    }

    pub fn plus(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (k, w) in &other.weights {
            out.add(*k, w);
        }
        out
    }

    pub fn evaluate(&self, energies: &[Rational]) -> RadicalRational {
        self.weights
            .iter()
            .fold(RadicalRational::zero(), |acc, (k, w)| &acc + &w.scale(&energies[*k]))
    }
}

impl fmt::Display for EnergyForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.weights.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self.weights.iter().map(|(k, w)| format!("({w})*e{}", k + 1)).collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// Symbolic `⟨H_i⟩` of a normalized vector; exact for arbitrary energies.
pub fn symbolic_one_body_energy(v: &StateVector, particle: usize) -> Result<EnergyForm> {
    check_particle(v, particle)?;
    check_normalized(v)?;
    let mut form = EnergyForm::default();
    for (s, amp) in v.terms() {
        form.add(s.level(particle), &(amp * amp));
    }
    Ok(form)
}

/// `Σ_i ⟨H_i⟩` as a linear form in the level energies.
pub fn symbolic_energy_sum(v: &StateVector) -> Result<EnergyForm> {
    (0..v.n_particles()).try_fold(EnergyForm::default(), |acc, i| {
        Ok(acc.plus(&symbolic_one_body_energy(v, i)?))
    })
}

/// `Σ_i ⟨H_i⟩` with a diagonal Hamiltonian; for any normalized vector built
/// from one orbit it equals the total energy of the base product.
pub fn energy_sum_rule(v: &StateVector, h: &OneBodyOperator) -> Result<Expectation> {
    let mut exact = RadicalRational::zero();
    let mut float = 0.0;
    for i in 0..v.n_particles() {
        match one_body_expectation(v, h, i)? {
            Expectation::Exact(x) => exact += &x,
            Expectation::Float(x) => float += x,
        }
    }
    Ok(if h.is_exact() {
        Expectation::Exact(exact)
    } else {
        Expectation::Float(float)
    })
}

/// One-dimensional infinite well of width `length`, eigenfunctions
/// `φ_n(x) = √(2/L)·sin(nπx/L)`, `n = 1, 2, …`. Level index `k` in a
/// [`ProductState`] is quantum number `n = k + 1`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Box1D {
    pub length: f64,
    pub mass: f64,
    pub planck: f64,
}

impl Box1D {
    pub fn new(length: f64, mass: f64, planck: f64) -> Result<Self> {
        if !(length > 0.0 && mass > 0.0 && planck > 0.0)
            || !(length.is_finite() && mass.is_finite() && planck.is_finite())
        {
            return Err(ObservableError::InvalidBox(format!("L={length}, m={mass}, h={planck}")));
        }
        Ok(Self { length, mass, planck })
    }

    /// `h = m = 1`.
    pub fn dimensionless(length: f64) -> Result<Self> {
        Self::new(length, 1.0, 1.0)
    }

    /// `ε_n = n²h²/(8mL²)`.
    pub fn energy(&self, n: u64) -> f64 {
        let n = n as f64;
        n * n * self.planck * self.planck / (8.0 * self.mass * self.length * self.length)
    }
}

/// `x_mn = ∫₀^L φ_m x φ_n dx` in closed form, for levels `1..=n_levels`.
pub fn box_position_matrix_element(length: f64, m: u64, n: u64) -> f64 {
    if m == n {
        return length / 2.0;
    }
    if (m + n).is_multiple_of(2) {
        return 0.0;
    }
    let (mf, nf) = (m as f64, n as f64);
    let d = mf * mf - nf * nf;
    -8.0 * length * mf * nf / (PI * PI * d * d)
}

pub fn box_position_operator(basis: &Box1D, n_levels: usize) -> Result<OneBodyOperator> {
    let matrix = (1..=n_levels as u64)
        .map(|m| {
            (1..=n_levels as u64)
                .map(|n| box_position_matrix_element(basis.length, m, n))
                .collect()
        })
        .collect();
    OneBodyOperator::hermitian_float(matrix)
}

/// `⟨x_i⟩` in the (anti)symmetrized box state built from distinct levels.
pub fn position_expectation_symmetrized(
    levels: &ProductState,
    basis: &Box1D,
    parity: Parity,
    particle: usize,
) -> Result<f64> {
    if levels.has_repeated_level() {
        return Err(ObservableError::RequiresDistinctLevels(levels.levels().to_vec()));
    }
    let basis_size = levels.levels().iter().max().map_or(0, |m| m + 1);
    let state = symmetrize(levels, parity, basis_size)?.vector;
    let x = box_position_operator(basis, basis_size)?;
    Ok(one_body_expectation(&state, &x, particle)?.to_f64())
}

/// Sharp-momentum product of plane waves `V^{-1/2}·exp(i p·q/ħ)`; momenta are
/// exact three-vectors in whatever unit the caller fixes (e.g. `h/L`).
#[derive(Debug, Clone, PartialEq)]
pub struct PlaneWaveState {
    pub momenta: Vec<[Rational; 3]>,
    pub mass: Rational,
    pub volume: f64,
}

fn norm_sq(v: &[Rational; 3]) -> Rational {
    v.iter().map(|c| c * c).sum()
}

/// `E = Σ_j |p_j|²/(2m)`.
pub fn plane_wave_energy(pw: &PlaneWaveState) -> Rational {
    let two_m = &pw.mass * Rational::from_integer(2.into());
    pw.momenta.iter().map(norm_sq).sum::<Rational>() / two_m
}

/// Coefficients of the linear phase `f = Σ_j a_j·q_j` with `a_j = p_j/ħ`.
pub fn phase_coefficients(pw: &PlaneWaveState, hbar: &Rational) -> Vec<[Rational; 3]> {
    pw.momenta
        .iter()
        .map(|p| [&p[0] / hbar, &p[1] / hbar, &p[2] / hbar])
        .collect()
}

/// `E = Σ_j ħ²|a_j|²/(2m)`, the energy read off the phase coefficients.
pub fn energy_from_phase(coefficients: &[[Rational; 3]], hbar: &Rational, mass: &Rational) -> Rational {
    let two_m = mass * Rational::from_integer(2.into());
    coefficients.iter().map(norm_sq).sum::<Rational>() * hbar * hbar / two_m
}

/// Evaluates the linear phase `Σ_j a_j·q_j` at a point of configuration space
/// laid out as `[q_1x, q_1y, q_1z, q_2x, …]`.
pub fn linear_phase(coefficients: &[[Rational; 3]], point: &[Rational]) -> Rational {
    coefficients.iter().flatten().zip(point).map(|(a, q)| a * q).sum()
}

/// `Σ_j ∇²_j f` at `point` by exact central second differences with the given
/// step. The stencil is exact for polynomials up to cubic order, so linear
/// phases give exactly zero and `|q|²` gives exactly 2 per coordinate.
pub fn laplacian_residual(f: impl Fn(&[Rational]) -> Rational, point: &[Rational], step: &Rational) -> Rational {
    let centre = f(point);
    let two = Rational::from_integer(2.into());
    let mut acc = Rational::zero();
    let mut probe = point.to_vec();
    for k in 0..point.len() {
        probe[k] = &point[k] + step;
        let up = f(&probe);
        probe[k] = &point[k] - step;
        let down = f(&probe);
        probe[k] = point[k].clone();
        acc += (up - &two * &centre + down) / (step * step);
    }
    acc
}

/// Laplacian residual of the linear phase built from `coefficients`.
pub fn laplacian_condition_residual(coefficients: &[[Rational; 3]], point: &[Rational]) -> Rational {
    laplacian_residual(|q| linear_phase(coefficients, q), point, &Rational::one())
}

/// Number of distinct relabelings of a sharp-momentum plane-wave product:
/// `N!/∏ n_j!` with `n_j` particles sharing momentum `p_j`.
pub fn momentum_degeneracy(pw: &PlaneWaveState) -> u64 {
    orbit_size(&pw.momenta)
}

/// Sharp-momentum expectation `⟨p_i⟩` in the (anti)symmetrized plane-wave
/// state built from the given momenta: the mean of the single-particle
/// momenta, the same for every particle.
pub fn symmetrized_momentum_expectation(pw: &PlaneWaveState, parity: Parity, particle: usize) -> Result<[Rational; 3]> {
    // Index the distinct momenta as levels and reuse the exact engine.
    let mut distinct: Vec<[Rational; 3]> = pw.momenta.clone();
    distinct.sort();
    distinct.dedup();
    let levels: Vec<usize> = pw
        .momenta
        .iter()
        .map(|p| distinct.binary_search(p).expect("present"))
        .collect();
    let state = symmetrize(&ProductState::new(levels), parity, distinct.len())?;
    if state.zero_vector {
        return Err(ObservableError::RequiresDistinctLevels(vec![]));
    }
    let form = symbolic_one_body_energy(&state.vector, particle)?;
    let mut out = [Rational::zero(), Rational::zero(), Rational::zero()];
    for (k, w) in form.weights() {
        let w = w.as_rational().expect("rational occupation weights");
        for c in 0..3 {
            out[c] += &w * &distinct[k][c];
        }
    }
    Ok(out)
}

/// JSON record for one expectation value.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExpectationRecord {
    pub state: String,
    pub operator: String,
    pub particle: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub value_exact: Option<RadicalRational>,
    pub value_float: f64,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::ratio;
    use crate::symmetry::{mixed_basis_n3, orbit_basis_n3};

    fn ps(levels: &[usize]) -> ProductState {
        ProductState::new(levels.to_vec())
    }

    fn r(n: i64, d: i64) -> RadicalRational {
        RadicalRational::from_rational(ratio(n, d))
    }

    fn hamiltonian(e: [i64; 3]) -> OneBodyOperator {
        OneBodyOperator::diagonal_exact(&e.map(|x| ratio(x, 1)))
    }

    #[test]
    fn symmetrized_mean_energy() {
        let s = ps(&[0, 1, 2]);
        let h = hamiltonian([1, 2, 3]);
        for parity in [Parity::Symmetric, Parity::Antisymmetric] {
            let v = symmetrize(&s, parity, 3).unwrap().vector;
            for i in 0..3 {
                assert_eq!(one_body_expectation(&v, &h, i).unwrap(), Expectation::Exact(r(2, 1)));
            }
        }
    }

    #[test]
    fn mixed_splittings_numeric() {
        let m = mixed_basis_n3(&ps(&[0, 1, 2]), 3).unwrap();
        let h = hamiltonian([1, 2, 3]);
        assert_eq!(
            one_body_expectation(&m.s1, &h, 0).unwrap(),
            Expectation::Exact(r(5 + 10 + 6, 12))
        );
        assert_eq!(
            one_body_expectation(&m.s1, &h, 1).unwrap(),
            Expectation::Exact(r(21, 12))
        );
        assert_eq!(
            one_body_expectation(&m.s1, &h, 2).unwrap(),
            Expectation::Exact(r(2 + 4 + 24, 12))
        );
        assert_eq!(one_body_expectation(&m.s2, &h, 2).unwrap(), Expectation::Exact(r(3, 2)));
    }

    #[test]
    fn product_state_is_unentangled() {
        let v = StateVector::product(&ps(&[0, 1, 2]), 3).unwrap();
        let h = hamiltonian([5, 7, 11]);
        assert_eq!(one_body_expectation(&v, &h, 1).unwrap(), Expectation::Exact(r(7, 1)));
    }

    #[test]
    fn sum_rule_for_orbit_basis() {
        let h = hamiltonian([3, 5, 13]);
        for v in orbit_basis_n3(&ps(&[0, 1, 2]), 3).unwrap() {
            assert_eq!(energy_sum_rule(&v, &h).unwrap(), Expectation::Exact(r(21, 1)));
        }
    }

    #[test]
    fn expectation_errors() {
        let v = StateVector::product(&ps(&[0, 1]), 2).unwrap();
        let h = OneBodyOperator::diagonal_exact(&[ratio(1, 1)]);
        assert!(matches!(
            one_body_expectation(&v, &h, 0),
            Err(ObservableError::DimensionMismatch { dim: 1, level: 1 })
        ));
        let doubled = v.scaled_rational(&ratio(2, 1));
        let h2 = hamiltonian([1, 2, 3]);
        assert!(matches!(
            one_body_expectation(&doubled, &h2, 0),
            Err(ObservableError::NotNormalized(_))
        ));
        assert!(matches!(
            one_body_expectation(&v, &h2, 2),
            Err(ObservableError::ParticleOutOfRange { particle: 2, n: 2 })
        ));
        assert!(OneBodyOperator::hermitian_float(vec![vec![0.0, 1.0], vec![0.0, 0.0]]).is_err());
        assert_eq!(
            OneBodyOperator::exact(vec![vec![ratio(1, 1)], vec![]]),
            Err(ObservableError::NotSquare)
        );
    }

    /// Composite Simpson quadrature of `φ_m x φ_n` on `[0, L]`.
    fn quadrature(length: f64, m: u64, n: u64) -> f64 {
        let steps = 20_000;
        let h = length / steps as f64;
        let phi = |k: u64, x: f64| (2.0 / length).sqrt() * (k as f64 * PI * x / length).sin();
        let g = |x: f64| phi(m, x) * x * phi(n, x);
        let mut acc = g(0.0) + g(length);
        for j in 1..steps {
            let x = j as f64 * h;
            acc += if j % 2 == 1 { 4.0 } else { 2.0 } * g(x);
        }
        acc * h / 3.0
    }

    #[test]
    fn position_matrix_against_quadrature() {
        let length = 1.7;
        assert_eq!(box_position_matrix_element(length, 1, 1), length / 2.0);
        assert!((box_position_matrix_element(length, 1, 2) - (-16.0 * length / (9.0 * PI * PI))).abs() < 1e-15);
        for m in 1..=5 {
            for n in 1..=5 {
                let closed = box_position_matrix_element(length, m, n);
                assert!((closed - quadrature(length, m, n)).abs() < 1e-10, "x_{m}{n}");
            }
        }
        let op = box_position_operator(&Box1D::dimensionless(length).unwrap(), 5).unwrap();
        assert!(op.is_hermitian());
    }

    #[test]
    fn position_centre() {
        let b = Box1D::dimensionless(1.0).unwrap();
        let x = position_expectation_symmetrized(&ps(&[0, 1]), &b, Parity::Symmetric, 0).unwrap();
        assert!((x - 0.5).abs() < 1e-10);
        let x = position_expectation_symmetrized(&ps(&[0, 1]), &b, Parity::Antisymmetric, 1).unwrap();
        assert!((x - 0.5).abs() < 1e-10);
        let x = position_expectation_symmetrized(&ps(&[0, 1, 2]), &b, Parity::Symmetric, 2).unwrap();
        assert!((x - 0.5).abs() < 1e-10);
        assert!(position_expectation_symmetrized(&ps(&[0, 0]), &b, Parity::Symmetric, 0).is_err());
    }

    fn pw(momenta: &[[i64; 3]]) -> PlaneWaveState {
        PlaneWaveState {
            momenta: momenta.iter().map(|p| p.map(|c| ratio(c, 1))).collect(),
            mass: ratio(3, 2),
            volume: 1.0,
        }
    }

    #[test]
    fn plane_wave_energies() {
        assert!(plane_wave_energy(&pw(&[[0, 0, 0], [0, 0, 0]])).is_zero());
        assert_eq!(plane_wave_energy(&pw(&[[1, 2, 0]])), ratio(5, 3));
        let state = pw(&[[1, 0, 0], [0, -2, 1], [3, 1, 1]]);
        let hbar = ratio(7, 5);
        let a = phase_coefficients(&state, &hbar);
        assert_eq!(energy_from_phase(&a, &hbar, &state.mass), plane_wave_energy(&state));
    }

    #[test]
    fn laplacian_of_phases() {
        let a: Vec<[Rational; 3]> = vec![
            [ratio(1, 2), ratio(-3, 1), ratio(2, 7)],
            [ratio(5, 1), ratio(0, 1), ratio(1, 3)],
        ];
        let point: Vec<Rational> = (0..6).map(|k| ratio(k * 3 - 4, 5)).collect();
        assert!(laplacian_condition_residual(&a, &point).is_zero());
        let quadratic = |q: &[Rational]| q.iter().map(|x| x * x).sum::<Rational>();
        assert_eq!(laplacian_residual(quadratic, &point, &ratio(1, 10)), ratio(12, 1));
    }

    #[test]
    fn momentum_degeneracies() {
        assert_eq!(momentum_degeneracy(&pw(&[[1, 0, 0], [2, 0, 0], [3, 0, 0]])), 6);
        assert_eq!(momentum_degeneracy(&pw(&[[1, 0, 0]; 3])), 1);
        assert_eq!(
            momentum_degeneracy(&pw(&[[1, 0, 0], [1, 0, 0], [0, 1, 0], [0, 1, 0]])),
            6
        );
    }

    #[test]
    fn momentum_mean_is_shared() {
        let state = pw(&[[1, 0, 0], [0, 2, 0], [0, 0, 3]]);
        for parity in [Parity::Symmetric, Parity::Antisymmetric] {
            for i in 0..3 {
                let p = symmetrized_momentum_expectation(&state, parity, i).unwrap();
                assert_eq!(p, [ratio(1, 3), ratio(2, 3), ratio(1, 1)]);
            }
        }
    }
}
