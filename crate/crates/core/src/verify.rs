//! A self-contained ledger of identity checks spanning every module. Each
//! check records the two sides it compared and whether they agree.

use std::fmt;
use std::fmt::Display;

use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::exactnum::{ratio, rsqrt_of_rational, RadicalRational, Rational};
use crate::observables::{
    energy_from_phase, energy_sum_rule, laplacian_condition_residual, momentum_degeneracy, phase_coefficients,
    plane_wave_energy, position_expectation_symmetrized, symbolic_energy_sum, symbolic_one_body_energy,
    symmetrized_momentum_expectation, Box1D, EnergyForm, OneBodyOperator, PlaneWaveState,
};
use crate::perm::{apply, enumerate_permutations, factorial, multinomial, noncommutation_witness, ProductState};
use crate::statmech::{
    binomial, canonical_z, canonical_z_recursive, enumerate_occupations, extensivity_report, fugacity_series, grand_xi,
    ln_factorial, ln_nfactor_correction, mb_continuum_ln_z, mb_free_energy, multiset_weighted_sum, thermal_wavelength,
    Constants, GasModel, Spectrum, StatisticsKind, StatmechError, ThermoPoint,
};
use crate::symmetry::{
    check_orthonormal, decompose, exchange_degeneracy_dimension, mixed_basis_from_table, orbit_basis_from_table,
    orbit_images, sector_dimension, symmetrize, MixedBasisTable, Parity, StateVector, MIXED_BASIS_TABLE,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CheckStatus {
    Pass,
    Fail,
    /// Agreement with the engine's convention, but a documented difference
    /// from the displayed reference value.
    Noted,
}

impl fmt::Display for CheckStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CheckStatus::Pass => "pass",
            CheckStatus::Fail => "fail",
            CheckStatus::Noted => "noted",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub id: String,
    pub location: String,
    pub status: CheckStatus,
    pub lhs: String,
    pub rhs: String,
    /// `None` for exact comparisons.
    pub tolerance: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Ledger {
    pub checks: Vec<Check>,
}

impl Ledger {
    pub fn count(&self, status: CheckStatus) -> usize {
        self.checks.iter().filter(|c| c.status == status).count()
    }

    pub fn passed(&self) -> bool {
        self.count(CheckStatus::Fail) == 0
    }

    pub fn get(&self, id: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.id == id)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct VerifyOptions {
    pub mixed_table: MixedBasisTable,
    /// Seed for the randomized sweep.
    pub seed: u64,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        Self {
            mixed_table: MIXED_BASIS_TABLE,
            seed: 0,
        }
    }
}

type Outcome = Result<(CheckStatus, String, String), String>;

fn verdict(ok: bool, lhs: impl Display, rhs: impl Display) -> Outcome {
    let status = if ok { CheckStatus::Pass } else { CheckStatus::Fail };
    Ok((status, lhs.to_string(), rhs.to_string()))
}

fn rel_err(a: f64, b: f64) -> f64 {
    if a == b {
        0.0
    } else {
        (a - b).abs() / a.abs().max(b.abs())
    }
}

fn err<E: Display>(e: E) -> String {
    e.to_string()
}

fn inv_sqrt(n: i64) -> RadicalRational {
    rsqrt_of_rational(&ratio(1, n)).expect("small radicand")
}

fn abc() -> ProductState {
    ProductState::new(vec![0, 1, 2])
}

fn form(weights: [(i64, i64); 3]) -> EnergyForm {
    EnergyForm::from_weights(
        weights
            .iter()
            .enumerate()
            .map(|(k, &(n, d))| (k, RadicalRational::from_rational(ratio(n, d)))),
    )
}

struct Runner {
    checks: Vec<Check>,
}

impl Runner {
    fn run(&mut self, id: &str, location: &str, tolerance: Option<f64>, f: impl FnOnce() -> Outcome) {
        let (status, lhs, rhs) = f().unwrap_or_else(|e| (CheckStatus::Fail, format!("error: {e}"), "-".into()));
        self.checks.push(Check {
            id: id.into(),
            location: location.into(),
            status,
            lhs,
            rhs,
            tolerance,
        });
    }
}

/// Runs every check with the stock coefficient table.
pub fn verify_all() -> Ledger {
    verify_with(&VerifyOptions::default())
}

pub fn verify_with(opts: &VerifyOptions) -> Ledger {
    let table = opts.mixed_table;
    let mut r = Runner { checks: Vec::new() };

    r.run("P1", "number of permutations of three labels", None, || {
        let n = enumerate_permutations(3).map_err(err)?.count();
        verdict(n == 6, n, "3! = 6")
    });

    r.run("P2", "group axioms and sign homomorphism, n <= 5", None, || {
        for n in 1..=5 {
            let all: Vec<_> = enumerate_permutations(n).map_err(err)?.collect();
            for p in &all {
                if !p.compose(&p.inverse()).is_identity() {
                    return verdict(false, format!("{} has no inverse", p.cycle_notation()), "identity");
                }
                for q in &all {
                    let pq = p.compose(q);
                    if !all.contains(&pq) || pq.sign() != p.sign() * q.sign() {
                        return verdict(
                            false,
                            format!("{} o {}", p.cycle_notation(), q.cycle_notation()),
                            "closed, sign multiplicative",
                        );
                    }
                }
            }
        }
        verdict(true, "all pairs for n = 1..5", "closed, inverses, sign multiplicative")
    });

    r.run("P3", "relabeling is a group action on (a,b,c)", None, || {
        let all: Vec<_> = enumerate_permutations(3).map_err(err)?.collect();
        let s = abc();
        let mut pairs = 0;
        for p in &all {
            for q in &all {
                let lhs = apply(&p.compose(q), &s).map_err(err)?;
                let rhs = apply(p, &apply(q, &s).map_err(err)?).map_err(err)?;
                if lhs != rhs {
                    return verdict(false, format!("{lhs:?}"), format!("{rhs:?}"));
                }
                pairs += 1;
            }
        }
        verdict(pairs == 36, format!("{pairs} pairs agree"), "36 pairs")
    });

    r.run(
        "S1",
        "two-particle symmetrized and antisymmetrized states",
        None,
        || {
            let s = ProductState::new(vec![0, 1]);
            let half = inv_sqrt(2);
            for parity in [Parity::Symmetric, Parity::Antisymmetric] {
                let v = symmetrize(&s, parity, 2).map_err(err)?.vector;
                let swapped = ProductState::new(vec![1, 0]);
                let expected_swapped = match parity {
                    Parity::Symmetric => half.clone(),
                    Parity::Antisymmetric => -half.clone(),
                };
                if v.num_terms() != 2 || v.amplitude(&s) != half || v.amplitude(&swapped) != expected_swapped {
                    return verdict(false, format!("{v:?}"), "(ab ± ba)/sqrt(2)");
                }
            }
            verdict(true, "(ab ± ba) * 1/2*sqrt(2)", "(ab ± ba)/sqrt(2)")
        },
    );

    r.run("S2", "three-particle antisymmetrized state and exclusion", None, || {
        let v = symmetrize(&abc(), Parity::Antisymmetric, 3).map_err(err)?.vector;
        let sixth = inv_sqrt(6);
        let ok_terms = v.num_terms() == 6 && v.terms().all(|(_, a)| *a == sixth || *a == -sixth.clone());
        let repeated = symmetrize(&ProductState::new(vec![0, 0, 1]), Parity::Antisymmetric, 2).map_err(err)?;
        verdict(
            ok_terms && repeated.zero_vector,
            format!(
                "{} terms of ±{sixth}; (a,a,b) zero: {}",
                v.num_terms(),
                repeated.zero_vector
            ),
            "6 terms of ±1/sqrt(6); (a,a,b) zero: true",
        )
    });

    r.run("S3", "transpositions sharing an index do not commute", None, || {
        let (p, q) = noncommutation_witness(3).map_err(err)?;
        let s = abc();
        let pq = apply(&p.compose(&q), &s).map_err(err)?;
        let qp = apply(&q.compose(&p), &s).map_err(err)?;
        verdict(pq != qp, format!("{:?}", pq.levels()), format!("!= {:?}", qp.levels()))
    });

    r.run("M1", "six three-particle basis vectors are orthonormal", None, || {
        let basis = orbit_basis_from_table(&table, &abc(), 3).map_err(err)?;
        match check_orthonormal(&basis) {
            Ok(()) => verdict(true, "<b_i|b_j> = delta_ij", "delta_ij"),
            Err(e) => verdict(false, e, "delta_ij"),
        }
    });

    r.run("M2", "each mixed pair is stable under every relabeling", None, || {
        let mixed = mixed_basis_from_table(&table, &abc(), 3).map_err(err)?;
        for pair in [1u8, 2] {
            let span: Vec<StateVector> = mixed.pair(pair).iter().map(|v| (*v).clone()).collect();
            check_orthonormal(&span).map_err(err)?;
            for v in &span {
                for (p, image) in orbit_images(v).map_err(err)? {
                    let d = decompose(&image, &span).map_err(err)?;
                    if !d.residual_is_zero() {
                        return verdict(
                            false,
                            format!("pair {pair}, {} leaves the span", p.cycle_notation()),
                            "zero residual",
                        );
                    }
                }
            }
        }
        verdict(true, "zero residual for all 24 images", "zero residual")
    });

    r.run(
        "B1",
        "symmetric plus antisymmetric sectors span 2 of 6 dimensions",
        None,
        || {
            let s = abc();
            let sym = sector_dimension(&s, Parity::Symmetric).map_err(err)?;
            let anti = sector_dimension(&s, Parity::Antisymmetric).map_err(err)?;
            let total = exchange_degeneracy_dimension(&s);
            verdict(
                sym + anti == 2 && total == 6,
                format!("{sym} + {anti} of {total}"),
                "2 of 6",
            )
        },
    );

    r.run(
        "B2",
        "interchange degeneracy of (a,a,a), (a,a,b), (a,b,c)",
        None,
        || {
            let d: Vec<u64> = [[0, 0, 0], [0, 0, 1], [0, 1, 2]]
                .iter()
                .map(|l| exchange_degeneracy_dimension(&ProductState::new(l.to_vec())))
                .collect();
            verdict(d == [1, 3, 6], format!("{d:?}"), "[1, 3, 6]")
        },
    );

    r.run(
        "B3",
        "multinomial degeneracy equals orbit size for N <= 6",
        None,
        || {
            let mut cases = 0;
            for n in 1..=6usize {
                for parts in integer_partitions(n) {
                    let levels: Vec<usize> = parts
                        .iter()
                        .enumerate()
                        .flat_map(|(k, &m)| std::iter::repeat_n(k, m))
                        .collect();
                    let s = ProductState::new(levels);
                    let mut images: Vec<ProductState> = enumerate_permutations(n)
                        .map_err(err)?
                        .map(|p| apply(&p, &s))
                        .collect::<Result<_, _>>()
                        .map_err(err)?;
                    images.sort();
                    images.dedup();
                    let formula = multinomial(parts.iter().copied());
                    if images.len() as u64 != formula
                        || formula != factorial(n) / parts.iter().map(|&m| factorial(m)).product::<u64>()
                    {
                        return verdict(false, format!("{parts:?}: {formula}"), images.len());
                    }
                    cases += 1;
                }
            }
            verdict(true, format!("{cases} partitions agree"), "exhaustive orbit count")
        },
    );

    let decomposition = || -> Result<(Vec<RadicalRational>, bool, RadicalRational), String> {
        let s = abc();
        let basis = orbit_basis_from_table(&table, &s, 3).map_err(err)?;
        let v = StateVector::product(&s, 3).map_err(err)?;
        let d = decompose(&v, &basis).map_err(err)?;
        let weight = d.coefficient_weight();
        let residual_zero = d.residual_is_zero();
        Ok((d.coefficients, residual_zero, weight))
    };

    r.run(
        "D1",
        "decomposition of psi(1,2,3) over the six-vector basis",
        None,
        || {
            let (c, residual_zero, weight) = decomposition()?;
            let z = RadicalRational::zero();
            let expected = vec![inv_sqrt(6), -inv_sqrt(6), inv_sqrt(3), z.clone(), inv_sqrt(3), z];
            let show = |v: &[RadicalRational]| v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(", ");
            verdict(
                c == expected && residual_zero && weight == RadicalRational::one(),
                format!(
                    "({}); residual zero: {residual_zero}; sum of squares {weight}",
                    show(&c)
                ),
                format!("({}); residual zero: true; sum of squares 1", show(&expected)),
            )
        },
    );

    r.run(
        "D2",
        "sign of the antisymmetric coefficient in the decomposition display",
        None,
        || {
            let (c, _, _) = decomposition()?;
            let displayed = inv_sqrt(6);
            let status = if c[1] == -displayed.clone() {
                CheckStatus::Noted
            } else if c[1] == displayed {
                CheckStatus::Pass
            } else {
                CheckStatus::Fail
            };
            Ok((
                status,
                format!("{} (antisymmetric vector with psi(1,2,3) at -1/sqrt(6))", c[1]),
                format!("+{displayed} as displayed"),
            ))
        },
    );

    r.run(
        "E1",
        "each particle has the mean energy in the symmetrized and antisymmetrized states",
        None,
        || {
            let third = (1i64, 3i64);
            let expected = form([third; 3]);
            for parity in [Parity::Symmetric, Parity::Antisymmetric] {
                let v = symmetrize(&abc(), parity, 3).map_err(err)?.vector;
                for i in 0..3 {
                    let got = symbolic_one_body_energy(&v, i).map_err(err)?;
                    if got != expected {
                        return verdict(false, format!("{parity:?}, particle {}: {got}", i + 1), &expected);
                    }
                }
            }
            verdict(
                true,
                "<H_i> = (e1 + e2 + e3)/3 for i = 1,2,3, both parities",
                "(e1 + e2 + e3)/3",
            )
        },
    );

    r.run("E2", "mixed-symmetry energy splittings", None, || {
        let mixed = mixed_basis_from_table(&table, &abc(), 3).map_err(err)?;
        let cases = [
            (&mixed.s1, 0, form([(5, 12), (5, 12), (2, 12)])),
            (&mixed.s1, 1, form([(5, 12), (5, 12), (2, 12)])),
            (&mixed.s1, 2, form([(2, 12), (2, 12), (8, 12)])),
            (&mixed.s2, 0, form([(1, 4), (1, 4), (2, 4)])),
            (&mixed.s2, 1, form([(1, 4), (1, 4), (2, 4)])),
            (&mixed.s2, 2, form([(1, 2), (1, 2), (0, 1)])),
        ];
        for (k, (v, i, expected)) in cases.iter().enumerate() {
            let got = symbolic_one_body_energy(v, *i).map_err(err)?;
            if got != *expected {
                let name = if k < 3 { "s1" } else { "s2" };
                return verdict(false, format!("{name}, particle {}: {got}", i + 1), expected);
            }
        }
        verdict(
            true,
            "s1: (5,5,2)/12, (5,5,2)/12, (2,2,8)/12; s2: (1,1,2)/4, (1,1,2)/4, (1,1,0)/2",
            "same",
        )
    });

    r.run(
        "E3",
        "sum of one-body energies equals the level sum for all six vectors",
        None,
        || {
            let basis = orbit_basis_from_table(&table, &abc(), 3).map_err(err)?;
            let total = form([(1, 1); 3]);
            let h = OneBodyOperator::diagonal_exact(&[ratio(3, 1), ratio(5, 1), ratio(13, 1)]);
            for (k, v) in basis.iter().enumerate() {
                let sum = symbolic_energy_sum(v).map_err(err)?;
                let numeric = energy_sum_rule(v, &h).map_err(err)?;
                if sum != total || numeric.exact() != Some(&RadicalRational::from_integer(21)) {
                    return verdict(false, format!("vector {}: {sum}", k + 1), &total);
                }
            }
            verdict(true, "e1 + e2 + e3 for every vector", "E_alpha = e1 + e2 + e3")
        },
    );

    r.run(
        "E4",
        "position expectation at the geometric center of the container",
        Some(1e-10),
        || {
            let length = 1.7;
            let b = Box1D::dimensionless(length).map_err(err)?;
            let mut worst = 0.0f64;
            let mut cases = 0;
            for n in [2usize, 3] {
                for levels in combinations(5, n) {
                    let s = ProductState::new(levels);
                    for parity in [Parity::Symmetric, Parity::Antisymmetric] {
                        for i in 0..n {
                            let x = position_expectation_symmetrized(&s, &b, parity, i).map_err(err)?;
                            worst = worst.max((x - length / 2.0).abs());
                            cases += 1;
                        }
                    }
                }
            }
            verdict(
                worst <= 1e-10,
                format!("max |<x_i> - L/2| = {worst:.3e} over {cases} cases"),
                "0",
            )
        },
    );

    r.run("X1", "mean momentum of symmetrized plane-wave products", None, || {
        let pw = PlaneWaveState {
            momenta: vec![
                [ratio(1, 1), ratio(0, 1), ratio(-2, 1)],
                [ratio(3, 1), ratio(1, 2), ratio(0, 1)],
                [ratio(-1, 1), ratio(2, 1), ratio(1, 1)],
            ],
            mass: ratio(1, 1),
            volume: 1.0,
        };
        let n = Rational::from_integer(3.into());
        let mean: Vec<Rational> = (0..3)
            .map(|c| pw.momenta.iter().map(|p| &p[c]).sum::<Rational>() / &n)
            .collect();
        for parity in [Parity::Symmetric, Parity::Antisymmetric] {
            for i in 0..3 {
                let got = symmetrized_momentum_expectation(&pw, parity, i).map_err(err)?;
                if got.as_slice() != mean.as_slice() {
                    return verdict(false, format!("{got:?}"), format!("{mean:?}"));
                }
            }
        }
        verdict(
            true,
            "<p_i> = (p1 + p2 + p3)/3 for every particle",
            "mean of the momenta",
        )
    });

    let grid_pw = || PlaneWaveState {
        momenta: vec![
            [ratio(2, 1), ratio(-1, 1), ratio(0, 1)],
            [ratio(-1, 1), ratio(1, 3), ratio(5, 1)],
            [ratio(0, 1), ratio(0, 1), ratio(-7, 2)],
        ],
        mass: ratio(3, 2),
        volume: 1.0,
    };

    r.run("G1", "plane-wave phase satisfies the Laplacian condition", None, || {
        let hbar = ratio(1, 7);
        let a = phase_coefficients(&grid_pw(), &hbar);
        let point: Vec<Rational> = (0..9).map(|k| ratio(k * 3 - 11, 5)).collect();
        let residual = laplacian_condition_residual(&a, &point);
        verdict(residual.is_zero(), residual, "0")
    });

    r.run("G2", "plane-wave energy equals the sum of p^2/2m", None, || {
        let hbar = ratio(1, 7);
        let pw = grid_pw();
        let a = phase_coefficients(&pw, &hbar);
        let lhs = energy_from_phase(&a, &hbar, &pw.mass);
        let rhs = plane_wave_energy(&pw);
        verdict(lhs == rhs, &lhs, &rhs)
    });

    r.run(
        "G3",
        "degeneracy-weighted momentum multisets reproduce z1^N",
        Some(1e-12),
        || {
            let grid = [-2i64, -1, 0, 1, 2];
            let mass = 1.0;
            let energies: Vec<f64> = grid.iter().map(|&p| (p * p) as f64 / (2.0 * mass)).collect();
            let beta = 0.8;
            let z1: f64 = energies.iter().map(|e| (-beta * e).exp()).sum();
            let mut worst = 0.0f64;
            for n in 1..=4 {
                let sum = multiset_weighted_sum(&energies, n, beta).map_err(err)?;
                worst = worst.max(rel_err(sum, z1.powi(n as i32)));
                for occ in
                    enumerate_occupations(grid.len(), n, StatisticsKind::MaxwellBoltzmannFactorial).map_err(err)?
                {
                    let momenta: Vec<[Rational; 3]> = occ
                        .counts()
                        .flat_map(|(k, c)| {
                            std::iter::repeat_n([ratio(grid[k], 1), Rational::zero(), Rational::zero()], c as usize)
                        })
                        .collect();
                    let pw = PlaneWaveState {
                        momenta,
                        mass: ratio(1, 1),
                        volume: 1.0,
                    };
                    if momentum_degeneracy(&pw) != occ.arrangements() {
                        return verdict(
                            false,
                            format!("degeneracy mismatch at {:?}", occ.to_vector(grid.len())),
                            "multinomial",
                        );
                    }
                }
            }
            verdict(
                worst <= 1e-12,
                format!("max relative error {worst:.3e} for N = 1..4"),
                "z1^N",
            )
        },
    );

    r.run("Z1", "occupation counts match the binomial formulas", None, || {
        for levels in 0..=8usize {
            for n in 0..=6usize {
                let fd = enumerate_occupations(levels, n, StatisticsKind::FermiDirac)
                    .map_err(err)?
                    .count() as u64;
                let be = enumerate_occupations(levels, n, StatisticsKind::BoseEinstein)
                    .map_err(err)?
                    .count() as u64;
                let be_expected = if levels == 0 {
                    u64::from(n == 0)
                } else {
                    binomial((levels + n - 1) as u64, n as u64)
                };
                if fd != binomial(levels as u64, n as u64) || be != be_expected {
                    return verdict(
                        false,
                        format!("levels {levels}, N {n}: FD {fd}, BE {be}"),
                        "C(L,N), C(L+N-1,N)",
                    );
                }
            }
        }
        verdict(true, "all levels <= 8, N <= 6", "C(L,N), C(L+N-1,N)")
    });

    r.run(
        "Z2",
        "canonical enumeration agrees with the cycle recursion",
        Some(1e-12),
        || {
            let energies = [0.0, 0.35, 0.9, 1.2, 1.2, 2.05, 3.3, 4.0];
            let mut worst = 0.0f64;
            for levels in 1..=energies.len() {
                let spec = Spectrum::explicit(energies[..levels].to_vec()).map_err(err)?;
                for (stat, sign) in [(StatisticsKind::BoseEinstein, 1), (StatisticsKind::FermiDirac, -1)] {
                    for n in 1..=5usize.min(if sign < 0 { levels } else { 5 }) {
                        for beta in [0.3, 1.0, 2.5] {
                            let a = canonical_z(&spec, n, beta, stat).map_err(err)?;
                            let b = canonical_z_recursive(&spec, n, beta, sign).map_err(err)?;
                            worst = worst.max(rel_err(a, b));
                        }
                    }
                }
            }
            verdict(
                worst <= 1e-12,
                format!("max relative error {worst:.3e}"),
                "enumeration = recursion",
            )
        },
    );

    r.run("Z3", "grand product equals the fugacity series", Some(1e-10), || {
        let spec = Spectrum::explicit(vec![0.0, 0.5, 1.1, 1.6, 2.4, 3.0]).map_err(err)?;
        let (beta, mu) = (1.0, -0.4);
        let fd_product = grand_xi(&spec, beta, mu, StatisticsKind::FermiDirac).map_err(err)?;
        let fd_series = fugacity_series(&spec, beta, mu, StatisticsKind::FermiDirac, spec.len()).map_err(err)?;
        let (beta_b, mu_b) = (2.0, -1.5);
        let be_product = grand_xi(&spec, beta_b, mu_b, StatisticsKind::BoseEinstein).map_err(err)?;
        let be_series = fugacity_series(&spec, beta_b, mu_b, StatisticsKind::BoseEinstein, 50).map_err(err)?;
        let fd_err = rel_err(fd_product, fd_series);
        let be_err = rel_err(be_product, be_series);
        verdict(
            fd_err <= 1e-12 && be_err <= 1e-10,
            format!("FD {fd_product:.15e} vs {fd_series:.15e}; BE {be_product:.15e} vs {be_series:.15e}"),
            format!("relative errors FD {fd_err:.1e} (<= 1e-12), BE {be_err:.1e} (<= 1e-10)"),
        )
    });

    r.run(
        "Z4",
        "Bose grand sum diverges exactly when mu reaches the lowest level",
        None,
        || {
            let spec = Spectrum::explicit(vec![0.25, 1.0, 2.0]).map_err(err)?;
            for mu in [-3.0, 0.0, 0.2499, 0.25, 0.26, 1.5] {
                let diverges = matches!(
                    grand_xi(&spec, 1.0, mu, StatisticsKind::BoseEinstein),
                    Err(StatmechError::BoseDivergence { .. })
                );
                if diverges != (mu >= 0.25) {
                    return verdict(
                        false,
                        format!("mu = {mu}: diverges {diverges}"),
                        "diverges iff mu >= 0.25",
                    );
                }
            }
            verdict(true, "divergence iff mu >= min energy", "diverges iff mu >= min energy")
        },
    );

    r.run("T1", "thermal wavelength scaling", Some(1e-15), || {
        let c = Constants::dimensionless();
        let at = |t: f64| {
            ThermoPoint::new(t, 1.0, 1, c)
                .map(|tp| thermal_wavelength(&tp))
                .map_err(err)
        };
        let unit = at(1.0 / (2.0 * std::f64::consts::PI))?;
        let ratio = at(0.9)? / at(3.6)?;
        verdict(
            (unit - 1.0).abs() <= 1e-15 && (ratio - 2.0).abs() <= 1e-15,
            format!("{unit}, {ratio}"),
            "1, 2",
        )
    });

    r.run(
        "F1",
        "F(T,V,N) = N F(T,V/N,1) for the V/N-counted gas",
        Some(1e-12),
        || {
            let c = Constants::dimensionless();
            let (t, v1) = (1.3, 25.0);
            let mut worst = 0.0f64;
            for n in [1u64, 2, 10, 100, 10_000] {
                let big = mb_free_energy(&ThermoPoint::new(t, v1 * n as f64, n, c).map_err(err)?).map_err(err)?;
                let one = mb_free_energy(&ThermoPoint::new(t, v1, 1, c).map_err(err)?).map_err(err)?;
                worst = worst.max(rel_err(big, n as f64 * one));
            }
            verdict(
                worst <= 1e-12,
                format!("max relative error {worst:.3e}"),
                "N in {1, 2, 10, 100, 10^4}",
            )
        },
    );

    r.run(
        "F2",
        "N! counting leaves a shrinking per-particle drift",
        Some(1e-9),
        || {
            let model = GasModel::Continuum {
                constants: Constants::dimensionless(),
            };
            let t = 1.3;
            let sizes: Vec<(f64, u64)> = [1u64, 2, 10, 100, 10_000]
                .iter()
                .map(|&n| (25.0 * n as f64, n))
                .collect();
            let rows = extensivity_report(&model, StatisticsKind::MaxwellBoltzmannFactorial, t, &sizes).map_err(err)?;
            let limit = {
                let tp = ThermoPoint::new(t, 25.0, 1, Constants::dimensionless()).map_err(err)?;
                -t * ((25.0 / thermal_wavelength(&tp).powi(3)).ln() + 1.0)
            };
            let drifts: Vec<f64> = rows.iter().map(|r| r.free_energy_per_particle - limit).collect();
            if rows.iter().zip(&drifts).any(|(r, d)| (r.drift - d).abs() > 1e-9) {
                return verdict(
                    false,
                    "reported drift column disagrees with F/N minus its limit",
                    "agreement",
                );
            }
            let predicted: Vec<f64> = rows.iter().map(|r| r.stirling_excess.unwrap_or(f64::NAN)).collect();
            let shrinking = drifts.windows(2).all(|w| w[1].abs() < w[0].abs());
            let nonzero = drifts.iter().all(|d| d.abs() > 0.0);
            let matches = drifts.iter().zip(&predicted).all(|(d, p)| (d - p).abs() <= 1e-9);
            verdict(
                shrinking && nonzero && matches,
                format!("{:?}", drifts.iter().map(|d| format!("{d:.6e}")).collect::<Vec<_>>()),
                "nonzero, shrinking, = kT(ln N! - N ln N + N)/N",
            )
        },
    );

    r.run("F3", "sign of the free energy", None, || {
        let c = Constants::dimensionless();
        let tp = ThermoPoint::new(1.0, 50.0, 4, c).map_err(err)?;
        let ln_z = mb_continuum_ln_z(&tp, StatisticsKind::MaxwellBoltzmannNN).map_err(err)?;
        let f = mb_free_energy(&tp).map_err(err)?;
        let displayed = tp.kt() * ln_z;
        let status = if rel_err(f, -tp.kt() * ln_z) <= 1e-12 && f != displayed {
            CheckStatus::Noted
        } else {
            CheckStatus::Fail
        };
        Ok((
            status,
            format!("F = -kT ln Z = {f:.16e}"),
            format!("+kT ln Z = {displayed:.16e} as displayed"),
        ))
    });

    r.run(
        "C1",
        "N^N e^{aN} factor relates N! counting to z1^N up to Stirling error",
        None,
        || {
            let spec = Spectrum::explicit(vec![0.0, 0.7, 1.1, 2.3]).map_err(err)?;
            let beta = 0.9;
            let ln_z1 = spec.ln_single_particle_z(beta);
            for n in 1..=50u64 {
                let ln_fact =
                    crate::statmech::ln_canonical_z(&spec, n as usize, beta, StatisticsKind::MaxwellBoltzmannFactorial)
                        .map_err(err)?;
                let corrected = ln_nfactor_correction(ln_fact, n, -1.0);
                let gap = n as f64 * ln_z1 - corrected;
                let stirling = 0.5 * (2.0 * std::f64::consts::PI * n as f64).ln();
                let excess = gap - stirling;
                let bound = 1.0 / (12.0 * n as f64);
                if !(excess > 1.0 / (12.0 * n as f64 + 1.0) - 1e-12 && excess < bound + 1e-12) {
                    return verdict(
                        false,
                        format!("N = {n}: gap - Stirling = {excess:.6e}"),
                        "in (1/(12N+1), 1/(12N))".to_string(),
                    );
                }
                let direct = ln_factorial(n) - (n as f64 * (n as f64).ln() - n as f64);
                if (gap - direct).abs() > 1e-9 {
                    return verdict(false, format!("N = {n}: {gap}"), direct);
                }
            }
            verdict(
                true,
                "N ln z1 - ln(Z_fact N^N e^{-N}) = ln N! - N ln N + N",
                "1/2 ln(2 pi N) + O(1/(12N)), N = 1..50",
            )
        },
    );

    r.run(
        "R1",
        "randomized sweep: ring identities and enumeration against recursion",
        Some(1e-12),
        || {
            let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
            let radicands = [1u64, 2, 3, 5, 6, 7, 10, 15];
            let random_value = |rng: &mut ChaCha8Rng| {
                (0..3).fold(RadicalRational::zero(), |acc, _| {
                    let q = ratio(rng.gen_range(-9..=9), rng.gen_range(1..=9));
                    let r = radicands[rng.gen_range(0..radicands.len())];
                    &acc + &RadicalRational::term(q, r).expect("small radicand")
                })
            };
            for _ in 0..64 {
                let (a, b, c) = (random_value(&mut rng), random_value(&mut rng), random_value(&mut rng));
                if &a * &(&b + &c) != &(&a * &b) + &(&a * &c) || &(&a - &b) + &b != a {
                    return verdict(false, format!("a = {a}, b = {b}, c = {c}"), "ring identities");
                }
            }
            let mut worst = 0.0f64;
            for _ in 0..64 {
                let levels = rng.gen_range(1..=8usize);
                let mut energies: Vec<f64> = (0..levels).map(|_| rng.gen_range(0.0..4.0)).collect();
                energies.sort_by(f64::total_cmp);
                let spec = Spectrum::explicit(energies).map_err(err)?;
                let beta = rng.gen_range(0.2..3.0);
                let (stat, sign) = if rng.gen_bool(0.5) {
                    (StatisticsKind::BoseEinstein, 1)
                } else {
                    (StatisticsKind::FermiDirac, -1)
                };
                let max_n = if sign < 0 { levels.min(5) } else { 5 };
                let n = rng.gen_range(1..=max_n);
                let a = canonical_z(&spec, n, beta, stat).map_err(err)?;
                let b = canonical_z_recursive(&spec, n, beta, sign).map_err(err)?;
                worst = worst.max(rel_err(a, b));
            }
            verdict(
                worst <= 1e-12,
                format!("seed {}: max relative error {worst:.3e}", opts.seed),
                "64 + 64 random cases",
            )
        },
    );

    Ledger { checks: r.checks }
}

fn integer_partitions(n: usize) -> Vec<Vec<usize>> {
    fn go(n: usize, max: usize, prefix: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if n == 0 {
            out.push(prefix.clone());
            return;
        }
        for part in (1..=n.min(max)).rev() {
            prefix.push(part);
            go(n - part, part, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    go(n, n, &mut Vec::new(), &mut out);
    out
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![vec![]];
    }
    (k - 1..n)
        .flat_map(|last| {
            combinations(last, k - 1).into_iter().map(move |mut c| {
                c.push(last);
                c
            })
        })
        .collect()
}
