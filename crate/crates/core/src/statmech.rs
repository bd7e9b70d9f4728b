//! Occupation-number enumeration and canonical / grand-canonical partition
//! functions for Bose-Einstein, Fermi-Dirac and Maxwell-Boltzmann gases.
//!
//! Partition functions are accumulated as logarithms relative to the ground
//! configuration; raw `Z` values are only formed on request.

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::fmt;
use std::io::Read;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exactnum::Rational;
use crate::perm::multinomial;

/// Largest particle number for exact occupation enumeration.
pub const MAX_ENUM_PARTICLES: usize = 12;
/// Largest number of levels for exact occupation enumeration.
pub const MAX_ENUM_LEVELS: usize = 20;
/// Largest particle number for the recursion.
pub const MAX_RECURSION_PARTICLES: usize = 50;
/// Largest spectrum a generator will build.
pub const MAX_SPECTRUM_LEVELS: usize = 10_000;

pub const PLANCK_SI: f64 = 6.626_070_15e-34;
pub const BOLTZMANN_SI: f64 = 1.380_649e-23;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum StatmechError {
    #[error("capacity exceeded: {0}")]
    CapacityExceeded(String),
    #[error("Bose-Einstein grand sum diverges: mu = {mu} is not below the lowest level {lowest}")]
    BoseDivergence { mu: f64, lowest: f64 },
    #[error("spectrum cutoff {0} exceeds {MAX_SPECTRUM_LEVELS} levels")]
    CutoffTooLarge(usize),
    #[error("invalid spectrum: {0}")]
    InvalidSpectrum(String),
    #[error("invalid thermodynamic input: {0}")]
    InvalidInput(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
}

pub type Result<T, E = StatmechError> = std::result::Result<T, E>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum StatisticsKind {
    BoseEinstein,
    FermiDirac,
    /// Semiclassical counting with `Z = z₁^N / N^N`.
    MaxwellBoltzmannNN,
    /// Conventional counting with `Z = z₁^N / N!`.
    MaxwellBoltzmannFactorial,
}

impl StatisticsKind {
    pub fn is_quantum(self) -> bool {
        matches!(self, StatisticsKind::BoseEinstein | StatisticsKind::FermiDirac)
    }

    /// Exchange sign in the cycle recursion: `+1` for bosons, `-1` for fermions.
    pub fn exchange_sign(self) -> Option<i32> {
        match self {
            StatisticsKind::BoseEinstein => Some(1),
            StatisticsKind::FermiDirac => Some(-1),
            _ => None,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            StatisticsKind::BoseEinstein => "be",
            StatisticsKind::FermiDirac => "fd",
            StatisticsKind::MaxwellBoltzmannNN => "mb-nn",
            StatisticsKind::MaxwellBoltzmannFactorial => "mb-fact",
        }
    }
}

impl fmt::Display for StatisticsKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for StatisticsKind {
    type Err = StatmechError;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "be" | "bose" | "bose-einstein" => Ok(StatisticsKind::BoseEinstein),
            "fd" | "fermi" | "fermi-dirac" => Ok(StatisticsKind::FermiDirac),
            "mb-nn" | "mbnn" => Ok(StatisticsKind::MaxwellBoltzmannNN),
            "mb-fact" | "mb-factorial" | "mbfact" => Ok(StatisticsKind::MaxwellBoltzmannFactorial),
            other => Err(StatmechError::InvalidInput(format!("unknown statistics {other:?}"))),
        }
    }
}

/// Physical constants used to turn temperatures and lengths into energies.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Constants {
    pub planck: f64,
    pub boltzmann: f64,
    pub mass: f64,
}

impl Constants {
    /// `h = k = m = 1`.
    pub fn dimensionless() -> Self {
        Self {
            planck: 1.0,
            boltzmann: 1.0,
            mass: 1.0,
        }
    }

    pub fn si(mass_kg: f64) -> Self {
        Self {
            planck: PLANCK_SI,
            boltzmann: BOLTZMANN_SI,
            mass: mass_kg,
        }
    }
}

impl Default for Constants {
    fn default() -> Self {
        Self::dimensionless()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum SpectrumSource {
    /// `ε_n = n²h²/(8mL²)`, `n = 1..=cutoff`.
    Box1D { length: f64, constants: Constants },
    /// `ε = (h²/8mL²)(n_x² + n_y² + n_z²)`, lowest `cutoff` states with
    /// degeneracies expanded.
    Box3D { length: f64, constants: Constants },
    /// `ε_n = n²`, `n = 1..=cutoff`.
    Dimensionless,
    /// Energies supplied directly or read from a file.
    Explicit,
}

/// Ascending single-particle energies.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Spectrum {
    energies: Vec<f64>,
    source: SpectrumSource,
}

impl Spectrum {
    pub fn new(energies: Vec<f64>, source: SpectrumSource) -> Result<Self> {
        if let Some(bad) = energies.iter().find(|e| !e.is_finite()) {
            return Err(StatmechError::InvalidSpectrum(format!("non-finite energy {bad}")));
        }
        if energies.windows(2).any(|w| w[1] < w[0]) {
            return Err(StatmechError::InvalidSpectrum("energies must be ascending".into()));
        }
        Ok(Self { energies, source })
    }

    pub fn explicit(energies: Vec<f64>) -> Result<Self> {
        Self::new(energies, SpectrumSource::Explicit)
    }

    /// Reads CSV with an `energy` column and an optional integer `degeneracy`
    /// column; degenerate levels are expanded into repeated entries.
    pub fn from_csv<R: Read>(reader: R) -> Result<Self> {
        let bad = |msg: String| StatmechError::InvalidSpectrum(msg);
        let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(reader);
        let headers = rdr.headers().map_err(|e| bad(e.to_string()))?.clone();
        let col = |name: &str| headers.iter().position(|h| h.eq_ignore_ascii_case(name));
        let energy_col = col("energy").ok_or_else(|| bad("missing \"energy\" header".into()))?;
        let degeneracy_col = col("degeneracy");
        let mut energies = Vec::new();
        for (line, record) in rdr.records().enumerate() {
            let record = record.map_err(|e| bad(e.to_string()))?;
            let field = |c: usize| record.get(c).unwrap_or("").to_string();
            let e: f64 = field(energy_col)
                .parse()
                .map_err(|_| bad(format!("row {}: bad energy {:?}", line + 1, field(energy_col))))?;
            let g: usize = match degeneracy_col {
                Some(c) if !field(c).is_empty() => field(c)
                    .parse()
                    .map_err(|_| bad(format!("row {}: bad degeneracy {:?}", line + 1, field(c))))?,
                _ => 1,
            };
            energies.extend(std::iter::repeat_n(e, g));
        }
        if energies.len() > MAX_SPECTRUM_LEVELS {
            return Err(StatmechError::CutoffTooLarge(energies.len()));
        }
        Self::explicit(energies)
    }

    pub fn energies(&self) -> &[f64] {
        &self.energies
    }

    pub fn source(&self) -> &SpectrumSource {
        &self.source
    }

    pub fn len(&self) -> usize {
        self.energies.len()
    }

    pub fn is_empty(&self) -> bool {
        self.energies.is_empty()
    }

    /// Ground-state energy; energies relative to it are nonnegative.
    pub fn offset(&self) -> f64 {
        self.energies.first().copied().unwrap_or(0.0)
    }

    pub fn shifted(&self) -> Vec<f64> {
        let e0 = self.offset();
        self.energies.iter().map(|e| e - e0).collect()
    }

    /// `ln z(β) = ln Σ_k e^{-βε_k}`.
    pub fn ln_single_particle_z(&self, beta: f64) -> f64 {
        let e0 = self.offset();
        -beta * e0 + self.energies.iter().map(|e| (-beta * (e - e0)).exp()).sum::<f64>().ln()
    }

    pub fn single_particle_z(&self, beta: f64) -> f64 {
        self.ln_single_particle_z(beta).exp()
    }
}

pub fn build_spectrum(source: SpectrumSource, cutoff: usize) -> Result<Spectrum> {
    if cutoff == 0 {
        return Err(StatmechError::InvalidSpectrum("cutoff must be at least 1".into()));
    }
    if cutoff > MAX_SPECTRUM_LEVELS {
        return Err(StatmechError::CutoffTooLarge(cutoff));
    }
    let unit = |length: f64, c: &Constants| -> Result<f64> {
        if !(length > 0.0 && c.mass > 0.0 && c.planck > 0.0) {
            return Err(StatmechError::InvalidSpectrum("L, m and h must be positive".into()));
        }
        Ok(c.planck * c.planck / (8.0 * c.mass * length * length))
    };
    let energies = match &source {
        SpectrumSource::Box1D { length, constants } => {
            let u = unit(*length, constants)?;
            (1..=cutoff as u64).map(|n| (n * n) as f64 * u).collect()
        }
        SpectrumSource::Box3D { length, constants } => {
            let u = unit(*length, constants)?;
            box3d_quantum_sums(cutoff).into_iter().map(|s| s as f64 * u).collect()
        }
        SpectrumSource::Dimensionless => (1..=cutoff as u64).map(|n| (n * n) as f64).collect(),
        SpectrumSource::Explicit => {
            return Err(StatmechError::InvalidSpectrum(
                "explicit spectra are built with Spectrum::explicit".into(),
            ))
        }
    };
    Spectrum::new(energies, source)
}

/// The `count` smallest values of `n_x² + n_y² + n_z²` over positive
/// integers, repeated by multiplicity.
pub fn box3d_quantum_sums(count: usize) -> Vec<u64> {
    let side = (count as f64).cbrt().ceil() as u64;
    // Any triple outside [1, k]³ has a sum above 3·side², the largest sum
    // inside [1, side]³, once k + 1 > √3·side.
    let k = 2 * side + 1;
    let mut sums: Vec<u64> = Vec::with_capacity((k * k * k) as usize);
    for x in 1..=k {
        for y in 1..=k {
            for z in 1..=k {
                sums.push(x * x + y * y + z * z);
            }
        }
    }
    sums.sort_unstable();
    sums.truncate(count);
    sums
}

/// Occupation numbers `n_k ≥ 1` keyed by level; absent levels are empty.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct OccupationState {
    counts: BTreeMap<usize, u32>,
}

impl OccupationState {
    pub fn from_vector(counts: &[u32]) -> Self {
        Self {
            counts: counts
                .iter()
                .enumerate()
                .filter(|(_, &n)| n > 0)
                .map(|(k, &n)| (k, n))
                .collect(),
        }
    }

    pub fn count(&self, level: usize) -> u32 {
        self.counts.get(&level).copied().unwrap_or(0)
    }

    pub fn counts(&self) -> impl Iterator<Item = (usize, u32)> + '_ {
        self.counts.iter().map(|(k, n)| (*k, *n))
    }

    pub fn total(&self) -> u32 {
        self.counts.values().sum()
    }

    pub fn energy(&self, energies: &[f64]) -> f64 {
        self.counts.iter().map(|(k, n)| *n as f64 * energies[*k]).sum()
    }

    /// `N!/∏ n_k!`: the number of labeled arrangements of this occupation.
    pub fn arrangements(&self) -> u64 {
        multinomial(self.counts.values().map(|&n| n as usize))
    }

    pub fn to_vector(&self, n_levels: usize) -> Vec<u32> {
        (0..n_levels).map(|k| self.count(k)).collect()
    }
}

/// Stream of occupation vectors summing to `N`, each entry bounded by the
/// per-level cap, in descending lexicographic order. The first item is the
/// ground configuration when levels are ordered by energy.
#[derive(Debug, Clone)]
pub struct Occupations {
    current: Option<Vec<u32>>,
    cap: u32,
}

fn greedy_fill(slots: &mut [u32], mut remaining: u32, cap: u32) -> bool {
    for s in slots.iter_mut() {
        let take = remaining.min(cap);
        *s = take;
        remaining -= take;
    }
    remaining == 0
}

impl Iterator for Occupations {
    type Item = OccupationState;

    fn next(&mut self) -> Option<OccupationState> {
        let current = self.current.take()?;
        let out = OccupationState::from_vector(&current);
        let len = current.len();
        let mut succ = current;
        let mut tail: u32 = 0;
        for i in (0..len.saturating_sub(1)).rev() {
            tail += succ[i + 1];
            let room = self.cap as u64 * (len - i - 1) as u64;
            if succ[i] > 0 && room > tail as u64 {
                succ[i] -= 1;
                greedy_fill(&mut succ[i + 1..], tail + 1, self.cap);
                self.current = Some(succ);
                break;
            }
        }
        Some(out)
    }
}

fn check_enum_caps(n_levels: usize, n: usize) -> Result<()> {
    if n > MAX_ENUM_PARTICLES {
        return Err(StatmechError::CapacityExceeded(format!(
            "enumeration of {n} particles (cap {MAX_ENUM_PARTICLES})"
        )));
    }
    if n_levels > MAX_ENUM_LEVELS {
        return Err(StatmechError::CapacityExceeded(format!(
            "enumeration over {n_levels} levels (cap {MAX_ENUM_LEVELS})"
        )));
    }
    Ok(())
}

/// Fock-space states with `Σ n_k = N`: occupations in `{0, 1}` for fermions,
/// unrestricted otherwise. Both Maxwell-Boltzmann kinds share the bosonic
/// support; their weights differ downstream.
pub fn enumerate_occupations(n_levels: usize, n: usize, stat: StatisticsKind) -> Result<Occupations> {
    check_enum_caps(n_levels, n)?;
    let cap = match stat {
        StatisticsKind::FermiDirac => 1,
        _ => n.max(1) as u32,
    };
    let mut first = vec![0u32; n_levels];
    let feasible = greedy_fill(&mut first, n as u32, cap);
    Ok(Occupations {
        current: feasible.then_some(first),
        cap,
    })
}

/// `C(n, k)` as `u64`.
pub fn binomial(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1u64, |acc, i| acc * (n - i) / (i + 1))
}

/// `ln n!`, summed directly for small `n` and by the Stirling series above.
pub fn ln_factorial(n: u64) -> f64 {
    if n < 256 {
        return (2..=n).map(|k| (k as f64).ln()).sum();
    }
    let x = n as f64;
    let inv = 1.0 / x;
    let inv2 = inv * inv;
    x * x.ln() - x
        + 0.5 * (2.0 * PI * x).ln()
        + inv * (1.0 / 12.0 - inv2 * (1.0 / 360.0 - inv2 * (1.0 / 1260.0 - inv2 / 1680.0)))
}

fn check_beta(beta: f64) -> Result<()> {
    if !(beta > 0.0 && beta.is_finite()) {
        return Err(StatmechError::InvalidInput(format!(
            "beta must be positive and finite, got {beta}"
        )));
    }
    Ok(())
}

/// `ln Z_N(β)`. Quantum statistics sum `e^{-βE}` over enumerated occupations;
/// the Maxwell-Boltzmann kinds use `N ln z₁ − ln N^N` or `N ln z₁ − ln N!`.
pub fn ln_canonical_z(spec: &Spectrum, n: usize, beta: f64, stat: StatisticsKind) -> Result<f64> {
    check_beta(beta)?;
    match stat {
        StatisticsKind::BoseEinstein | StatisticsKind::FermiDirac => {
            let mut states = enumerate_occupations(spec.len(), n, stat)?.peekable();
            let Some(ground) = states.peek() else {
                return Ok(f64::NEG_INFINITY);
            };
            let e0 = ground.energy(spec.energies());
            let sum: f64 = states.map(|s| (-beta * (s.energy(spec.energies()) - e0)).exp()).sum();
            Ok(-beta * e0 + sum.ln())
        }
        StatisticsKind::MaxwellBoltzmannNN => {
            let nf = n as f64;
            let correction = if n == 0 { 0.0 } else { nf * nf.ln() };
            Ok(nf * spec.ln_single_particle_z(beta) - correction)
        }
        StatisticsKind::MaxwellBoltzmannFactorial => {
            Ok(n as f64 * spec.ln_single_particle_z(beta) - ln_factorial(n as u64))
        }
    }
}

pub fn canonical_z(spec: &Spectrum, n: usize, beta: f64, stat: StatisticsKind) -> Result<f64> {
    Ok(ln_canonical_z(spec, n, beta, stat)?.exp())
}

/// Ideal-gas cycle recursion
/// `Z_N = (1/N) Σ_{k=1}^{N} (±1)^{k+1} z(kβ) Z_{N−k}`, `Z_0 = 1`, with `+` for
/// bosons and `−` for fermions. Returns `Z_0..=Z_N`.
///
/// The fermionic sum alternates in sign and cancels catastrophically once
/// `β(ε_max − ε_min)` is a few units, so that branch is carried out in exact
/// rational arithmetic on the floating-point Boltzmann factors; the result is
/// then accurate to a few ulps. The bosonic branch has only positive terms and
/// runs in `f64`.
pub fn canonical_z_recursive_table(spec: &Spectrum, n: usize, beta: f64, sign: i32) -> Result<Vec<f64>> {
    check_beta(beta)?;
    if n > MAX_RECURSION_PARTICLES {
        return Err(StatmechError::CapacityExceeded(format!(
            "recursion to {n} particles (cap {MAX_RECURSION_PARTICLES})"
        )));
    }
    // Relative to the ground level, z̃(kβ) = e^{kβε₀} z(kβ) and
    // Z̃_N = e^{Nβε₀} Z_N obey the same recursion.
    let factors: Vec<f64> = spec.shifted().iter().map(|e| (-beta * e).exp()).collect();
    let shifted_table = match sign {
        1 => boson_recursion(&factors, n),
        -1 => fermion_recursion_exact(&factors, n),
        _ => {
            return Err(StatmechError::InvalidInput(format!(
                "exchange sign must be ±1, got {sign}"
            )))
        }
    };
    let e0 = spec.offset();
    Ok(shifted_table
        .into_iter()
        .enumerate()
        .map(|(m, zt)| zt * (-(m as f64) * beta * e0).exp())
        .collect())
}

fn boson_recursion(factors: &[f64], n: usize) -> Vec<f64> {
    let z: Vec<f64> = (0..=n as i32)
        .map(|k| factors.iter().map(|x| x.powi(k)).sum())
        .collect();
    let mut table = vec![1.0f64; n + 1];
    for m in 1..=n {
        let acc: f64 = (1..=m).map(|k| z[k] * table[m - k]).sum();
        table[m] = acc / m as f64;
    }
    table
}

fn fermion_recursion_exact(factors: &[f64], n: usize) -> Vec<f64> {
    // Each positive factor is exactly m_i / 2^{s_i}. With S = max s_i the
    // power sums are P_k / 2^{kS} for integers P_k, and
    // Z_m = A_m / (m!·2^{mS}) with A_m = Σ_k (−1)^{k+1} P_k A_{m−k} (m−1)!/(m−k)!.
    let dyadic: Vec<(BigInt, u64)> = factors
        .iter()
        .filter(|x| **x > 0.0)
        .map(|&x| {
            let (mantissa, exponent, _) = num_traits::Float::integer_decode(x);
            let tz = mantissa.trailing_zeros() as i64;
            let shift = -(exponent as i64) - tz;
            (BigInt::from(mantissa >> tz), shift.max(0) as u64)
        })
        .collect();
    let big_s = dyadic.iter().map(|(_, s)| *s).max().unwrap_or(0);
    let mut powers: Vec<BigInt> = dyadic.iter().map(|(m, _)| m.clone()).collect();
    let mut p = vec![BigInt::zero(); n + 1];
    for (k, pk) in p.iter_mut().enumerate().skip(1) {
        let mut acc = BigInt::zero();
        for (pw, (_, s)) in powers.iter().zip(&dyadic) {
            acc += pw << (k as u64 * (big_s - s));
        }
        *pk = acc;
        if k < n {
            for (pw, (m, _)) in powers.iter_mut().zip(&dyadic) {
                *pw *= m;
            }
        }
    }
    let mut a = vec![BigInt::one(); n + 1];
    for m in 1..=n {
        let mut acc = BigInt::zero();
        // falling = (m−1)!/(m−k)!
        let mut falling = BigInt::one();
        for k in 1..=m {
            if k > 1 {
                falling *= m - k + 1;
            }
            let term = &p[k] * &a[m - k] * &falling;
            if k % 2 == 1 {
                acc += term;
            } else {
                acc -= term;
            }
        }
        a[m] = acc;
    }
    let mut factorial = BigInt::one();
    a.into_iter()
        .enumerate()
        .map(|(m, am)| {
            if m > 0 {
                factorial *= m;
            }
            let denom = &factorial << (m as u64 * big_s);
            Rational::new(am, denom).to_f64().unwrap_or(f64::NAN)
        })
        .collect()
}

pub fn canonical_z_recursive(spec: &Spectrum, n: usize, beta: f64, sign: i32) -> Result<f64> {
    Ok(canonical_z_recursive_table(spec, n, beta, sign)?[n])
}

/// `ln Ξ(β, μ)`: `Σ_k ln(1 + x_k)` for fermions, `−Σ_k ln(1 − x_k)` for
/// bosons, with `x_k = e^{−β(ε_k − μ)}`.
pub fn ln_grand_xi(spec: &Spectrum, beta: f64, mu: f64, stat: StatisticsKind) -> Result<f64> {
    check_beta(beta)?;
    if !mu.is_finite() {
        return Err(StatmechError::InvalidInput(format!("mu must be finite, got {mu}")));
    }
    match stat {
        StatisticsKind::FermiDirac => Ok(spec.energies().iter().map(|e| (-beta * (e - mu)).exp().ln_1p()).sum()),
        StatisticsKind::BoseEinstein => {
            if spec.energies().iter().any(|&e| e <= mu) {
                return Err(StatmechError::BoseDivergence {
                    mu,
                    lowest: spec.offset(),
                });
            }
            Ok(-spec
                .energies()
                .iter()
                .map(|e| (-(-beta * (e - mu)).exp()).ln_1p())
                .sum::<f64>())
        }
        other => Err(StatmechError::Unsupported(format!(
            "grand partition function for {other} statistics"
        ))),
    }
}

pub fn grand_xi(spec: &Spectrum, beta: f64, mu: f64, stat: StatisticsKind) -> Result<f64> {
    Ok(ln_grand_xi(spec, beta, mu, stat)?.exp())
}

/// `Σ_{N=0}^{n_max} e^{βμN} Z_N`, with `Z_N` from enumeration for fermions
/// and from the recursion for bosons.
pub fn fugacity_series(spec: &Spectrum, beta: f64, mu: f64, stat: StatisticsKind, n_max: usize) -> Result<f64> {
    let z = match stat {
        StatisticsKind::FermiDirac => (0..=n_max)
            .map(|n| canonical_z(spec, n, beta, stat))
            .collect::<Result<Vec<_>>>()?,
        StatisticsKind::BoseEinstein => canonical_z_recursive_table(spec, n_max, beta, 1)?,
        other => {
            return Err(StatmechError::Unsupported(format!(
                "fugacity series for {other} statistics"
            )));
        }
    };
    let fugacity = (beta * mu).exp();
    Ok(z.iter().enumerate().map(|(n, zn)| fugacity.powi(n as i32) * zn).sum())
}

/// `Σ` over multisets of `N` labels drawn from `energies` of
/// `(N!/∏ n_k!)·e^{−βE}`. Equals `z₁^N` for any labels.
pub fn multiset_weighted_sum(energies: &[f64], n: usize, beta: f64) -> Result<f64> {
    check_beta(beta)?;
    Ok(
        enumerate_occupations(energies.len(), n, StatisticsKind::MaxwellBoltzmannFactorial)?
            .map(|s| s.arrangements() as f64 * (-beta * s.energy(energies)).exp())
            .sum(),
    )
}

/// State point for the continuum Maxwell-Boltzmann gas.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ThermoPoint {
    pub temperature: f64,
    pub volume: f64,
    pub n: u64,
    pub mu: Option<f64>,
    pub constants: Constants,
}

impl ThermoPoint {
    pub fn new(temperature: f64, volume: f64, n: u64, constants: Constants) -> Result<Self> {
        if !(temperature > 0.0 && temperature.is_finite()) {
            return Err(StatmechError::InvalidInput(format!(
                "temperature must be positive, got {temperature}"
            )));
        }
        if !(volume > 0.0 && volume.is_finite()) {
            return Err(StatmechError::InvalidInput(format!(
                "volume must be positive, got {volume}"
            )));
        }
        Ok(Self {
            temperature,
            volume,
            n,
            mu: None,
            constants,
        })
    }

    pub fn kt(&self) -> f64 {
        self.constants.boltzmann * self.temperature
    }

    pub fn beta(&self) -> f64 {
        1.0 / self.kt()
    }

    pub fn with_volume_and_n(&self, volume: f64, n: u64) -> Self {
        Self { volume, n, ..*self }
    }
}

/// `Λ = h/√(2π m k T)`.
pub fn thermal_wavelength(tp: &ThermoPoint) -> f64 {
    let c = &tp.constants;
    c.planck / (2.0 * PI * c.mass * c.boltzmann * tp.temperature).sqrt()
}

/// `ln Z` of the continuum ideal gas in three dimensions, `z₁ = V/Λ³`.
pub fn mb_continuum_ln_z(tp: &ThermoPoint, stat: StatisticsKind) -> Result<f64> {
    let lambda = thermal_wavelength(tp);
    let n = tp.n as f64;
    let ln_z1 = tp.volume.ln() - 3.0 * lambda.ln();
    match stat {
        StatisticsKind::MaxwellBoltzmannNN if tp.n == 0 => Ok(0.0),
        StatisticsKind::MaxwellBoltzmannNN => Ok(n * (ln_z1 - n.ln())),
        StatisticsKind::MaxwellBoltzmannFactorial => Ok(n * ln_z1 - ln_factorial(tp.n)),
        other => Err(StatmechError::Unsupported(format!(
            "continuum canonical partition function for {other} statistics"
        ))),
    }
}

/// `F = −kT ln Z`.
pub fn free_energy(ln_z: f64, kt: f64) -> f64 {
    -kt * ln_z
}

/// Helmholtz free energy of the semiclassical gas,
/// `F = −N kT ln(V/(NΛ³))`.
pub fn mb_free_energy(tp: &ThermoPoint) -> Result<f64> {
    if tp.n == 0 {
        return Err(StatmechError::InvalidInput("free energy needs N > 0".into()));
    }
    let lambda = thermal_wavelength(tp);
    let n = tp.n as f64;
    Ok(-n * tp.kt() * (tp.volume / (n * lambda.powi(3))).ln())
}

/// `Z·N^N·e^{aN}`; `a` is a free constant.
pub fn nfactor_correction(z: f64, n: u64, a: f64) -> Result<f64> {
    if z.is_nan() || z <= 0.0 {
        return Err(StatmechError::InvalidInput(format!("Z must be positive, got {z}")));
    }
    Ok(ln_nfactor_correction(z.ln(), n, a).exp())
}

/// Log form of [`nfactor_correction`]: `ln Z + N ln N + aN`.
pub fn ln_nfactor_correction(ln_z: f64, n: u64, a: f64) -> f64 {
    let nf = n as f64;
    let nn = if n == 0 { 0.0 } else { nf * nf.ln() };
    ln_z + nn + a * nf
}

/// How a system of volume `V` is realized for the extensivity sweep.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum GasModel {
    /// Three-dimensional ideal gas with `z₁ = V/Λ³`; Maxwell-Boltzmann only.
    Continuum { constants: Constants },
    /// One-dimensional box of length `V` truncated to `cutoff` levels.
    Box1D { constants: Constants, cutoff: usize },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExtensivityRow {
    pub volume: f64,
    pub n: u64,
    pub ln_z: f64,
    pub free_energy: f64,
    pub free_energy_per_particle: f64,
    /// `F/N` minus its large-`N` limit at the same density. The continuum
    /// limit is analytic; the truncated box uses the largest size given.
    pub drift: f64,
    /// Continuum `N!` counting only: `kT(ln N! − N ln N + N)/N`, the excess
    /// of `F/N` over its large-`N` limit.
    pub stirling_excess: Option<f64>,
}

/// `Z`, `F = −kT ln Z` and `F/N` along a sequence of sizes at fixed density.
pub fn extensivity_report(
    model: &GasModel,
    stat: StatisticsKind,
    temperature: f64,
    sizes: &[(f64, u64)],
) -> Result<Vec<ExtensivityRow>> {
    let Some(&(v0, n0)) = sizes.first() else {
        return Ok(Vec::new());
    };
    if sizes.iter().any(|&(_, n)| n == 0) {
        return Err(StatmechError::InvalidInput("every size needs N > 0".into()));
    }
    let density = n0 as f64 / v0;
    if let Some(&(v, n)) = sizes
        .iter()
        .find(|&&(v, n)| ((n as f64 / v) - density).abs() > 1e-12 * density)
    {
        return Err(StatmechError::InvalidInput(format!(
            "sizes must share one density; ({v}, {n}) differs from ({v0}, {n0})"
        )));
    }
    let mut rows: Vec<ExtensivityRow> = Vec::with_capacity(sizes.len());
    for &(volume, n) in sizes {
        let (ln_z, kt, excess) = match model {
            GasModel::Continuum { constants } => {
                let tp = ThermoPoint::new(temperature, volume, n, *constants)?;
                let ln_z = mb_continuum_ln_z(&tp, stat)?;
                let excess = (stat == StatisticsKind::MaxwellBoltzmannFactorial).then(|| {
                    let nf = n as f64;
                    tp.kt() * (ln_factorial(n) - nf * nf.ln() + nf) / nf
                });
                (ln_z, tp.kt(), excess)
            }
            GasModel::Box1D { constants, cutoff } => {
                let spec = build_spectrum(
                    SpectrumSource::Box1D {
                        length: volume,
                        constants: *constants,
                    },
                    *cutoff,
                )?;
                let kt = constants.boltzmann * temperature;
                (ln_canonical_z(&spec, n as usize, 1.0 / kt, stat)?, kt, None)
            }
        };
        let f = free_energy(ln_z, kt);
        let per = f / n as f64;
        let limit = match model {
            GasModel::Continuum { constants } => {
                let tp = ThermoPoint::new(temperature, volume / n as f64, 1, *constants)?;
                let ln_z1 = mb_continuum_ln_z(&tp, StatisticsKind::MaxwellBoltzmannNN)?;
                let stirling = if stat == StatisticsKind::MaxwellBoltzmannFactorial {
                    1.0
                } else {
                    0.0
                };
                Some(-kt * (ln_z1 + stirling))
            }
            GasModel::Box1D { .. } => None,
        };
        rows.push(ExtensivityRow {
            volume,
            n,
            ln_z,
            free_energy: f,
            free_energy_per_particle: per,
            drift: limit.map_or(0.0, |l| per - l),
            stirling_excess: excess,
        });
    }
    if let GasModel::Box1D { .. } = model {
        let last = rows.last().map_or(0.0, |r| r.free_energy_per_particle);
        for r in &mut rows {
            r.drift = r.free_energy_per_particle - last;
        }
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rel(a: f64, b: f64) -> f64 {
        (a - b).abs() / b.abs().max(f64::MIN_POSITIVE)
    }

    #[test]
    fn spectra() {
        let d = build_spectrum(SpectrumSource::Dimensionless, 3).unwrap();
        assert_eq!(d.energies(), &[1.0, 4.0, 9.0]);
        let b = build_spectrum(
            SpectrumSource::Box1D {
                length: 2.0,
                constants: Constants::dimensionless(),
            },
            4,
        )
        .unwrap();
        assert_eq!(b.energies()[1] / b.energies()[0], 4.0);
        assert!(matches!(
            build_spectrum(SpectrumSource::Dimensionless, MAX_SPECTRUM_LEVELS + 1),
            Err(StatmechError::CutoffTooLarge(_))
        ));
        assert!(Spectrum::explicit(vec![1.0, 0.0]).is_err());
        assert!(Spectrum::explicit(vec![0.0, f64::NAN]).is_err());
    }

    #[test]
    fn box3d_degeneracies() {
        let sums = box3d_quantum_sums(10);
        assert_eq!(sums, vec![3, 6, 6, 6, 9, 9, 9, 11, 11, 11]);
        // Brute-force lattice count of the lowest 200 states.
        let mut brute: Vec<u64> = Vec::new();
        for x in 1..=20u64 {
            for y in 1..=20 {
                for z in 1..=20 {
                    brute.push(x * x + y * y + z * z);
                }
            }
        }
        brute.sort_unstable();
        assert_eq!(box3d_quantum_sums(200), brute[..200].to_vec());
    }

    #[test]
    fn spectrum_csv() {
        let text = "energy,degeneracy\n0.0,1\n1.5,3\n2.0,\n";
        let s = Spectrum::from_csv(text.as_bytes()).unwrap();
        assert_eq!(s.energies(), &[0.0, 1.5, 1.5, 1.5, 2.0]);
        let s = Spectrum::from_csv("energy\n1\n2\n".as_bytes()).unwrap();
        assert_eq!(s.len(), 2);
        assert!(Spectrum::from_csv("e\n1\n".as_bytes()).is_err());
        assert!(Spectrum::from_csv("energy\n2\n1\n".as_bytes()).is_err());
        assert!(Spectrum::from_csv("energy\nabc\n".as_bytes()).is_err());
    }

    #[test]
    fn occupation_examples() {
        let fd: Vec<_> = enumerate_occupations(3, 2, StatisticsKind::FermiDirac)
            .unwrap()
            .collect();
        assert_eq!(fd.len(), 3);
        let be: Vec<_> = enumerate_occupations(3, 2, StatisticsKind::BoseEinstein)
            .unwrap()
            .collect();
        assert_eq!(be.len(), 6);
        assert_eq!(be[0].to_vector(3), vec![2, 0, 0]);
        let empty: Vec<_> = enumerate_occupations(4, 0, StatisticsKind::BoseEinstein)
            .unwrap()
            .collect();
        assert_eq!(empty, vec![OccupationState::default()]);
        assert_eq!(
            enumerate_occupations(2, 3, StatisticsKind::FermiDirac).unwrap().count(),
            0
        );
        assert!(enumerate_occupations(21, 2, StatisticsKind::BoseEinstein).is_err());
        assert!(enumerate_occupations(3, 13, StatisticsKind::BoseEinstein).is_err());
    }

    #[test]
    fn occupation_counts_match_binomials() {
        for levels in 0..=8usize {
            for n in 0..=6usize {
                let states: Vec<_> = enumerate_occupations(levels, n, StatisticsKind::FermiDirac)
                    .unwrap()
                    .collect();
                assert_eq!(states.len() as u64, binomial(levels as u64, n as u64));
                assert!(states
                    .iter()
                    .all(|s| s.total() as usize == n && s.counts().all(|(_, c)| c == 1)));
                let distinct: std::collections::BTreeSet<_> = states.iter().collect();
                assert_eq!(distinct.len(), states.len());

                let states: Vec<_> = enumerate_occupations(levels, n, StatisticsKind::BoseEinstein)
                    .unwrap()
                    .collect();
                let expected = if levels == 0 {
                    u64::from(n == 0)
                } else {
                    binomial((levels + n - 1) as u64, n as u64)
                };
                assert_eq!(states.len() as u64, expected, "levels={levels} n={n}");
                let distinct: std::collections::BTreeSet<_> = states.iter().collect();
                assert_eq!(distinct.len(), states.len());
            }
        }
    }

    #[test]
    fn fd_three_level_sum() {
        let s = Spectrum::explicit(vec![0.0, 1.0, 2.0]).unwrap();
        let z = canonical_z(&s, 2, 1.0, StatisticsKind::FermiDirac).unwrap();
        let expected = (-1.0f64).exp() + (-2.0f64).exp() + (-3.0f64).exp();
        assert!(rel(z, expected) < 1e-14);
        let zr = canonical_z_recursive(&s, 2, 1.0, -1).unwrap();
        assert!(rel(zr, expected) < 1e-12);
    }

    #[test]
    fn fermion_recursion_at_large_spread() {
        let s = Spectrum::explicit(vec![0.0, 0.5, 3.0, 7.0, 9.0, 12.0, 15.0, 20.0]).unwrap();
        for n in 1..=5 {
            let a = canonical_z(&s, n, 3.0, StatisticsKind::FermiDirac).unwrap();
            let b = canonical_z_recursive(&s, n, 3.0, -1).unwrap();
            assert!(rel(a, b) < 1e-13, "n={n}: {a} vs {b}");
        }
    }

    #[test]
    fn recursion_on_a_large_spectrum() {
        let s = build_spectrum(SpectrumSource::Dimensionless, 400).unwrap();
        let fd = canonical_z_recursive_table(&s, 50, 0.01, -1).unwrap();
        let be = canonical_z_recursive_table(&s, 50, 0.01, 1).unwrap();
        assert!(fd.iter().chain(&be).all(|z| z.is_finite() && *z > 0.0));
        assert!(fd[50] < be[50]);
    }

    #[test]
    fn single_particle_cases() {
        let s = Spectrum::explicit(vec![0.3, 0.7, 2.0]).unwrap();
        let z1 = s.single_particle_z(1.3);
        for stat in [
            StatisticsKind::BoseEinstein,
            StatisticsKind::FermiDirac,
            StatisticsKind::MaxwellBoltzmannNN,
            StatisticsKind::MaxwellBoltzmannFactorial,
        ] {
            assert!(rel(canonical_z(&s, 1, 1.3, stat).unwrap(), z1) < 1e-14, "{stat}");
        }
        assert!(rel(canonical_z_recursive(&s, 1, 1.3, 1).unwrap(), z1) < 1e-14);
        let nn = canonical_z(&s, 2, 1.3, StatisticsKind::MaxwellBoltzmannNN).unwrap();
        assert!(rel(nn, z1 * z1 / 4.0) < 1e-14);
    }

    #[test]
    fn bose_two_levels_against_recursion() {
        let s = Spectrum::explicit(vec![0.0, 1.0]).unwrap();
        let z = canonical_z(&s, 3, 1.0, StatisticsKind::BoseEinstein).unwrap();
        // (3,0), (2,1), (1,2), (0,3)
        let expected: f64 = (0..=3).map(|k| (-(k as f64)).exp()).sum();
        assert!(rel(z, expected) < 1e-14);
        assert!(rel(canonical_z_recursive(&s, 3, 1.0, 1).unwrap(), expected) < 1e-12);
    }

    #[test]
    fn grand_single_level() {
        let s = Spectrum::explicit(vec![0.0]).unwrap();
        let mu = -(2.0f64).ln();
        assert!(rel(grand_xi(&s, 1.0, mu, StatisticsKind::BoseEinstein).unwrap(), 2.0) < 1e-14);
        assert!(rel(grand_xi(&s, 1.0, mu, StatisticsKind::FermiDirac).unwrap(), 1.5) < 1e-14);
        assert!(matches!(
            grand_xi(&s, 1.0, 0.0, StatisticsKind::BoseEinstein),
            Err(StatmechError::BoseDivergence { .. })
        ));
        assert!(grand_xi(&s, 1.0, 0.0, StatisticsKind::MaxwellBoltzmannNN).is_err());
    }

    #[test]
    fn monotonicity() {
        let s = Spectrum::explicit(vec![0.5, 1.0, 1.7, 3.0]).unwrap();
        for stat in [
            StatisticsKind::BoseEinstein,
            StatisticsKind::FermiDirac,
            StatisticsKind::MaxwellBoltzmannNN,
        ] {
            let zs: Vec<f64> = [0.2, 0.5, 1.0, 2.0, 4.0]
                .iter()
                .map(|&b| canonical_z(&s, 2, b, stat).unwrap())
                .collect();
            assert!(zs.windows(2).all(|w| w[1] < w[0]), "{stat}");
        }
        for stat in [StatisticsKind::BoseEinstein, StatisticsKind::FermiDirac] {
            let xs: Vec<f64> = [-2.0, -1.0, 0.0, 0.4]
                .iter()
                .map(|&mu| grand_xi(&s, 1.0, mu, stat).unwrap())
                .collect();
            assert!(xs.windows(2).all(|w| w[1] > w[0]), "{stat}");
        }
    }

    #[test]
    fn wavelength() {
        let c = Constants::dimensionless();
        let tp = ThermoPoint::new(1.0 / (2.0 * PI), 1.0, 1, c).unwrap();
        assert!((thermal_wavelength(&tp) - 1.0).abs() < 1e-15);
        let t1 = ThermoPoint::new(0.7, 1.0, 1, c).unwrap();
        let t4 = ThermoPoint::new(2.8, 1.0, 1, c).unwrap();
        assert!((thermal_wavelength(&t4) - thermal_wavelength(&t1) / 2.0).abs() < 1e-15);
        assert!(thermal_wavelength(&t1) > 0.0);
        assert!(ThermoPoint::new(0.0, 1.0, 1, c).is_err());
    }

    #[test]
    fn free_energy_single_and_doubling() {
        let c = Constants::dimensionless();
        let tp = ThermoPoint::new(1.3, 5.0, 1, c).unwrap();
        let lambda = thermal_wavelength(&tp);
        let f1 = mb_free_energy(&tp).unwrap();
        assert!(rel(f1, -1.3 * (5.0 / lambda.powi(3)).ln()) < 1e-14);
        let tp = ThermoPoint::new(1.3, 40.0, 7, c).unwrap();
        let f = mb_free_energy(&tp).unwrap();
        let f2 = mb_free_energy(&tp.with_volume_and_n(80.0, 14)).unwrap();
        assert!(rel(f2, 2.0 * f) < 1e-13);
    }

    #[test]
    fn nfactor() {
        assert!(rel(nfactor_correction(1.0, 2, 0.0).unwrap(), 4.0) < 1e-15);
        assert!(rel(nfactor_correction(3.0, 1, 0.25).unwrap(), 3.0 * 0.25f64.exp()) < 1e-15);
        assert!(nfactor_correction(0.0, 1, 0.0).is_err());
    }

    #[test]
    fn ln_factorial_matches_sum() {
        for n in [0u64, 1, 5, 255, 256, 300, 1000, 5000] {
            let direct: f64 = (2..=n).map(|k| (k as f64).ln()).sum();
            assert!((ln_factorial(n) - direct).abs() <= 1e-12 * direct.max(1.0), "n={n}");
        }
    }

    #[test]
    fn drift_is_distance_from_the_large_n_limit() {
        let model = GasModel::Continuum {
            constants: Constants::dimensionless(),
        };
        let sizes = [(3.0, 1), (6.0, 2), (300.0, 100)];
        let nn = extensivity_report(&model, StatisticsKind::MaxwellBoltzmannNN, 0.7, &sizes).unwrap();
        assert!(nn.iter().all(|r| r.drift.abs() < 1e-13 && r.stirling_excess.is_none()));
        let fact = extensivity_report(&model, StatisticsKind::MaxwellBoltzmannFactorial, 0.7, &sizes).unwrap();
        for r in &fact {
            assert!((r.drift - r.stirling_excess.unwrap()).abs() < 1e-12, "{r:?}");
        }
        assert!((fact[0].drift - 0.7).abs() < 1e-12);

        let boxed = GasModel::Box1D {
            constants: Constants::dimensionless(),
            cutoff: 40,
        };
        let rows = extensivity_report(&boxed, StatisticsKind::MaxwellBoltzmannNN, 1.0, &sizes[..2]).unwrap();
        assert_eq!(rows[1].drift, 0.0);
        assert!(rows[0].drift != 0.0);
    }

    #[test]
    fn extensivity_requires_fixed_density() {
        let model = GasModel::Continuum {
            constants: Constants::dimensionless(),
        };
        assert!(extensivity_report(&model, StatisticsKind::MaxwellBoltzmannNN, 1.0, &[(1.0, 1), (3.0, 2)]).is_err());
        assert!(extensivity_report(&model, StatisticsKind::FermiDirac, 1.0, &[(1.0, 1)]).is_err());
    }
}
