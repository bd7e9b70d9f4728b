use idstat::exactnum::RadicalRational;
use idstat::observables::{
    box_position_operator, one_body_expectation, symbolic_one_body_energy, Box1D, Expectation, OneBodyOperator,
};
use idstat::perm::ProductState;
use idstat::statmech::{
    binomial, build_spectrum, canonical_z_recursive, enumerate_occupations, extensivity_report, free_energy,
    ln_canonical_z, ln_grand_xi, mb_continuum_ln_z, thermal_wavelength, GasModel, Spectrum, SpectrumSource,
    StatisticsKind, ThermoPoint, MAX_RECURSION_PARTICLES,
};
use idstat::symmetry::{
    self as sym, check_orthonormal, classify_symmetry, mixed_basis_n3, orbit_basis_n3, relabeled, MixedBasisTable,
    Parity, StateVector, SymmetryClass, MIXED_BASIS_TABLE,
};
use idstat::verify::{verify_with, CheckStatus, VerifyOptions};
use serde_json::{json, Value};

use crate::config::RunConfig;
use crate::error::CliError;
use crate::parse::{format_state, parse_counts, parse_floats, parse_levels, parse_rationals, parse_terms};
use crate::render::{to_value, Report, Table};
use crate::{MethodArg, ModelArg, NamedState, OperatorKind, ParityArg, SpectrumKind, SpectrumSpec, StatArg, StateSpec};

fn exact_json(v: &RadicalRational) -> Value {
    json!({ "exact": v.to_string(), "float": v.to_f64() })
}

fn vector_json(v: &StateVector) -> Value {
    let terms: Vec<Value> = v
        .terms()
        .map(|(s, a)| json!({ "state": format_state(s), "amp": a.to_string(), "float": a.to_f64() }))
        .collect();
    json!({ "n": v.n_particles(), "terms": terms })
}

fn vector_rows(table: &mut Table, name: &str, v: &StateVector) {
    for (s, a) in v.terms() {
        table.push(vec![
            to_value(name),
            to_value(format_state(s)),
            to_value(a.to_string()),
            to_value(a.to_f64()),
        ]);
    }
}

fn parity_of(p: ParityArg) -> Parity {
    match p {
        ParityArg::S => Parity::Symmetric,
        ParityArg::A => Parity::Antisymmetric,
    }
}

fn stat_of(s: StatArg) -> StatisticsKind {
    match s {
        StatArg::Be => StatisticsKind::BoseEinstein,
        StatArg::Fd => StatisticsKind::FermiDirac,
        StatArg::MbNn => StatisticsKind::MaxwellBoltzmannNN,
        StatArg::MbFact => StatisticsKind::MaxwellBoltzmannFactorial,
    }
}

fn cap_particles(cfg: &RunConfig, n: usize) -> Result<(), CliError> {
    if n > cfg.max_n {
        return Err(CliError::Capacity(format!(
            "{n} particles exceed the configured cap max_n = {}",
            cfg.max_n
        )));
    }
    Ok(())
}

fn cap_levels(cfg: &RunConfig, levels: usize) -> Result<(), CliError> {
    if levels > cfg.max_levels {
        return Err(CliError::Capacity(format!(
            "{levels} levels exceed the configured cap max_levels = {}",
            cfg.max_levels
        )));
    }
    Ok(())
}

fn basis_size_for(levels: &[usize]) -> usize {
    levels.iter().max().map_or(0, |m| m + 1)
}

pub fn symmetrize(
    cfg: &RunConfig,
    n: usize,
    levels: &str,
    parity: ParityArg,
    basis_size: Option<usize>,
) -> Result<Report, CliError> {
    let lv = parse_levels(levels)?;
    if lv.len() != n {
        return Err(CliError::input(format!("{} levels given for {n} particles", lv.len())));
    }
    cap_particles(cfg, n)?;
    let basis = basis_size.unwrap_or_else(|| basis_size_for(&lv));
    let s = ProductState::new(lv.clone());
    let sym = sym::symmetrize(&s, parity_of(parity), basis)?;
    let mut r = Report::new("symmetrize");
    r.input("n", n)
        .input("levels", format_state(&s))
        .input("parity", format!("{parity:?}"));
    r.output("vector", vector_json(&sym.vector))
        .output("norm_squared", sym.vector.norm_squared().to_string())
        .output("raw_norm_squared", sym.raw_norm_squared.to_string())
        .output("zero_vector", sym.zero_vector)
        .output("terms", sym.vector.num_terms());
    let mut t = Table::new(&["vector", "state", "amplitude", "float"]);
    vector_rows(&mut t, "psi", &sym.vector);
    r.table = Some(t);
    if !sym.zero_vector {
        r.check(
            "normalized",
            sym.vector.is_normalized(),
            sym.vector.norm_squared().to_string(),
            "1",
            None,
        );
    }
    Ok(r)
}

fn three_levels(levels: &str) -> Result<ProductState, CliError> {
    let lv = parse_levels(levels)?;
    if lv.len() != 3 {
        return Err(CliError::input(format!(
            "three base levels are required, got {}",
            lv.len()
        )));
    }
    Ok(ProductState::new(lv))
}

const BASIS_NAMES: [&str; 6] = ["psi_s", "psi_a", "s1", "s2", "s1p", "s2p"];

pub fn mixed_basis(levels: &str) -> Result<Report, CliError> {
    let s = three_levels(levels)?;
    let basis = basis_size_for(s.levels());
    let m = mixed_basis_n3(&s, basis)?;
    let vectors = m.to_array();
    let mut r = Report::new("mixed-basis");
    r.input("levels", format_state(&s));
    let mut t = Table::new(&["vector", "state", "amplitude", "float"]);
    for (name, v) in BASIS_NAMES[2..].iter().zip(&vectors) {
        r.output(name, vector_json(v));
        vector_rows(&mut t, name, v);
    }
    let ortho = check_orthonormal(&orbit_basis_n3(&s, basis)?);
    r.output("orthonormal", ortho.is_ok());
    r.check(
        "six-vector basis orthonormal",
        ortho.is_ok(),
        ortho.err().map_or("delta_ij".to_string(), |e| e.to_string()),
        "delta_ij",
        None,
    );
    r.table = Some(t);
    Ok(r)
}

pub fn decompose(levels: &str, tuple: &str) -> Result<Report, CliError> {
    let s = three_levels(levels)?;
    let tup = parse_counts(tuple)?;
    if tup.len() != 3 {
        return Err(CliError::input(format!("tuple needs three entries, got {tuple:?}")));
    }
    let tup = [tup[0] as usize, tup[1] as usize, tup[2] as usize];
    let basis_size = basis_size_for(s.levels());
    let target = relabeled(&s, tup)?;
    let v = StateVector::product(&target, basis_size)?;
    let basis = orbit_basis_n3(&s, basis_size)?;
    let d = sym::decompose(&v, &basis)?;
    let mut r = Report::new("decompose");
    r.input("levels", format_state(&s))
        .input("tuple", format!("({},{},{})", tup[0], tup[1], tup[2]))
        .input("product", format_state(&target));
    let mut t = Table::new(&["vector", "coefficient", "float"]);
    let mut coeffs = serde_json::Map::new();
    for (name, c) in BASIS_NAMES.iter().zip(&d.coefficients) {
        coeffs.insert(name.to_string(), exact_json(c));
        t.push(vec![to_value(name), to_value(c.to_string()), to_value(c.to_f64())]);
    }
    let weight = d.coefficient_weight();
    r.output("coefficients", coeffs)
        .output("residual_zero", d.residual_is_zero())
        .output("sum_of_squares", weight.to_string())
        .output(
            "antisymmetric_orientation",
            "psi_a carries psi(1,2,3) with coefficient -1/sqrt(6)",
        );
    r.check(
        "residual is zero",
        d.residual_is_zero(),
        d.residual_is_zero(),
        true,
        None,
    );
    r.check(
        "squares sum to one",
        weight == RadicalRational::one(),
        weight.to_string(),
        "1",
        None,
    );
    r.table = Some(t);
    Ok(r)
}

fn resolve_state(spec: &StateSpec) -> Result<(StateVector, Value), CliError> {
    if let Some(terms) = &spec.terms {
        let v = parse_terms(terms)?;
        return Ok((v, json!({ "terms": terms })));
    }
    let levels = spec
        .levels
        .as_deref()
        .ok_or_else(|| CliError::input("give --levels with --state, or --terms"))?;
    let lv = parse_levels(levels)?;
    let s = ProductState::new(lv.clone());
    let basis = basis_size_for(&lv);
    let name = spec.state.unwrap_or(NamedState::Product);
    let v = match name {
        NamedState::Product => StateVector::product(&s, basis)?,
        NamedState::S | NamedState::A => {
            let parity = if name == NamedState::S {
                Parity::Symmetric
            } else {
                Parity::Antisymmetric
            };
            let sym = sym::symmetrize(&s, parity, basis)?;
            if sym.zero_vector {
                return Err(CliError::input(format!(
                    "the {parity:?} state of {} vanishes",
                    format_state(&s)
                )));
            }
            sym.vector
        }
        other => {
            let m = mixed_basis_n3(&s, basis)?;
            match other {
                NamedState::S1 => m.s1,
                NamedState::S2 => m.s2,
                NamedState::S1p => m.s1_prime,
                _ => m.s2_prime,
            }
        }
    };
    Ok((
        v,
        json!({ "levels": format_state(&s), "state": format!("{name:?}").to_lowercase() }),
    ))
}

pub fn classify(spec: &StateSpec) -> Result<Report, CliError> {
    let (v, desc) = resolve_state(spec)?;
    let class = classify_symmetry(&v)?;
    let mut r = Report::new("classify");
    r.input("state", desc);
    r.output("class", class.to_string());
    match class {
        SymmetryClass::Mixed { pair, member } => {
            r.output("pair", pair).output("member", member);
        }
        _ => {
            r.output("pair", Value::Null).output("member", Value::Null);
        }
    }
    r.output("vector", vector_json(&v));
    Ok(r)
}

pub fn expect(
    spec: &StateSpec,
    op: OperatorKind,
    energies: Option<&str>,
    length: f64,
    particle: Option<usize>,
) -> Result<Report, CliError> {
    let (v, desc) = resolve_state(spec)?;
    let n = v.n_particles();
    let particles: Vec<usize> = match particle {
        Some(0) => return Err(CliError::input("particles are numbered from 1")),
        Some(i) if i > n => return Err(CliError::input(format!("particle {i} out of range for {n} particles"))),
        Some(i) => vec![i - 1],
        None => (0..n).collect(),
    };
    let mut r = Report::new("expect");
    r.input("state", desc)
        .input("operator", format!("{op:?}").to_lowercase());
    let operator: OneBodyOperator = match op {
        OperatorKind::Energy => {
            let text = energies.ok_or_else(|| CliError::input("--energies is required for the energy operator"))?;
            let e = parse_rationals(text)?;
            r.input("energies", text);
            OneBodyOperator::diagonal_exact(&e)
        }
        OperatorKind::Position => {
            let b = Box1D::dimensionless(length)?;
            r.input("length", length);
            box_position_operator(&b, v.basis_size())?
        }
    };
    let mut t = Table::new(&["particle", "exact", "float", "level_weights"]);
    let mut per_particle = Vec::new();
    for &i in &particles {
        let value = one_body_expectation(&v, &operator, i)?;
        let weights = match op {
            OperatorKind::Energy => symbolic_one_body_energy(&v, i)?.to_string(),
            OperatorKind::Position => String::new(),
        };
        let exact = match &value {
            Expectation::Exact(x) => Value::String(x.to_string()),
            Expectation::Float(_) => Value::Null,
        };
        t.push(vec![
            to_value(i + 1),
            exact.clone(),
            to_value(value.to_f64()),
            to_value(&weights),
        ]);
        per_particle
            .push(json!({ "particle": i + 1, "exact": exact, "float": value.to_f64(), "level_weights": weights }));
    }
    r.output("expectations", per_particle);
    r.table = Some(t);
    Ok(r)
}

pub fn occupations(
    cfg: &RunConfig,
    n_levels: usize,
    n: usize,
    stat: StatArg,
    energies: Option<&str>,
) -> Result<Report, CliError> {
    cap_particles(cfg, n)?;
    cap_levels(cfg, n_levels)?;
    let kind = stat_of(stat);
    let e = energies.map(parse_floats).transpose()?;
    if let Some(e) = &e {
        if e.len() != n_levels {
            return Err(CliError::input(format!(
                "{} energies given for {n_levels} levels",
                e.len()
            )));
        }
    }
    let mut r = Report::new("occupations");
    r.input("n_levels", n_levels).input("N", n).input("stat", kind.label());
    let mut t = Table::new(&["index", "occupations", "energy"]);
    let mut count = 0u64;
    for (k, occ) in enumerate_occupations(n_levels, n, kind)?.enumerate() {
        let vector = occ
            .to_vector(n_levels)
            .iter()
            .map(u32::to_string)
            .collect::<Vec<_>>()
            .join(" ");
        let energy = e.as_ref().map(|e| occ.energy(e));
        t.push(vec![to_value(k), to_value(vector), to_value(energy)]);
        count += 1;
    }
    let expected = match kind {
        StatisticsKind::FermiDirac => binomial(n_levels as u64, n as u64),
        _ if n_levels == 0 => u64::from(n == 0),
        _ => binomial((n_levels + n - 1) as u64, n as u64),
    };
    r.output("count", count).output("closed_form_count", expected);
    r.check("count matches closed form", count == expected, count, expected, None);
    r.table = Some(t);
    Ok(r)
}

pub struct PartitionArgs<'a> {
    pub stat: StatArg,
    pub spectrum: &'a SpectrumSpec,
    pub n: Option<u64>,
    pub mu: Option<f64>,
    pub beta: Option<f64>,
    pub temperature: Option<f64>,
    pub continuum: bool,
    pub volume: Option<f64>,
    pub method: MethodArg,
}

fn load_spectrum(cfg: &RunConfig, spec: &SpectrumSpec) -> Result<(Spectrum, Value), CliError> {
    if let Some(levels) = &spec.levels {
        return Ok((Spectrum::explicit(parse_floats(levels)?)?, json!({ "levels": levels })));
    }
    if let Some(path) = &spec.spectrum_file {
        let file = std::fs::File::open(path)
            .map_err(|e| CliError::input(format!("cannot open spectrum file {}: {e}", path.display())))?;
        return Ok((
            Spectrum::from_csv(file)?,
            json!({ "spectrum_file": path.display().to_string() }),
        ));
    }
    let kind = spec
        .spectrum
        .ok_or_else(|| CliError::input("give --levels, --spectrum or --spectrum-file"))?;
    let constants = cfg.constants();
    let source = match kind {
        SpectrumKind::Dimensionless => SpectrumSource::Dimensionless,
        SpectrumKind::Box1d => SpectrumSource::Box1D {
            length: spec.length,
            constants,
        },
        SpectrumKind::Box3d => SpectrumSource::Box3D {
            length: spec.length,
            constants,
        },
    };
    let desc = json!({ "spectrum": format!("{kind:?}").to_lowercase(), "cutoff": spec.cutoff, "length": spec.length });
    Ok((build_spectrum(source, spec.cutoff)?, desc))
}

fn beta_from(cfg: &RunConfig, beta: Option<f64>, temperature: Option<f64>) -> Result<(f64, f64), CliError> {
    let k = cfg.constants().boltzmann;
    match (beta, temperature) {
        (Some(_), Some(_)) => Err(CliError::input("give either --beta or --T, not both")),
        (Some(b), None) if b > 0.0 && b.is_finite() => Ok((b, 1.0 / (k * b))),
        (None, Some(t)) if t > 0.0 && t.is_finite() => Ok((1.0 / (k * t), t)),
        (None, None) => Err(CliError::input("give --beta or --T")),
        _ => Err(CliError::input("beta and T must be positive and finite")),
    }
}

pub fn partition(cfg: &RunConfig, a: &PartitionArgs<'_>) -> Result<Report, CliError> {
    let kind = stat_of(a.stat);
    let mut r = Report::new("partition");
    r.input("stat", kind.label())
        .input("mode", format!("{:?}", cfg.mode).to_lowercase());
    let constants = cfg.constants();
    r.output("free_energy_convention", "F = -kT ln Z");

    if a.continuum {
        let volume = a.volume.ok_or_else(|| CliError::input("--continuum needs --V"))?;
        let n = a.n.ok_or_else(|| CliError::input("--continuum needs --N"))?;
        let (_, t) = beta_from(cfg, a.beta, a.temperature)?;
        let tp = ThermoPoint::new(t, volume, n, constants)?;
        let ln_z = mb_continuum_ln_z(&tp, kind)?;
        let lambda = thermal_wavelength(&tp);
        r.input("V", volume)
            .input("N", n)
            .input("T", t)
            .input("continuum", true);
        r.output("thermal_wavelength", lambda)
            .output("ln_z", ln_z)
            .output("z", ln_z.exp())
            .output("free_energy", free_energy(ln_z, tp.kt()));
        return Ok(r);
    }

    let (spec, desc) = load_spectrum(cfg, a.spectrum)?;
    let (beta, t) = beta_from(cfg, a.beta, a.temperature)?;
    r.input("spectrum", desc).input("beta", beta).input("T", t);
    match (a.n, a.mu) {
        (Some(_), Some(_)) => Err(CliError::input("give either -N (canonical) or --mu (grand canonical)")),
        (None, None) => Err(CliError::input("give -N (canonical) or --mu (grand canonical)")),
        (None, Some(mu)) => {
            r.input("mu", mu);
            let ln_xi = ln_grand_xi(&spec, beta, mu, kind)?;
            r.output("ln_xi", ln_xi).output("xi", ln_xi.exp());
            Ok(r)
        }
        (Some(n), None) => {
            let n = n as usize;
            r.input("N", n);
            let kt = 1.0 / beta;
            let ln_z = match (kind.exchange_sign(), a.method) {
                (Some(_), MethodArg::Enumerate) => {
                    cap_particles(cfg, n)?;
                    cap_levels(cfg, spec.len())?;
                    ln_canonical_z(&spec, n, beta, kind)?
                }
                (Some(sign), MethodArg::Recursion) => {
                    if n > MAX_RECURSION_PARTICLES {
                        return Err(CliError::Capacity(format!(
                            "recursion to {n} particles exceeds {MAX_RECURSION_PARTICLES}"
                        )));
                    }
                    let z = canonical_z_recursive(&spec, n, beta, sign)?;
                    if z.is_nan() || z <= 0.0 {
                        return Err(CliError::input(format!("recursion produced non-positive Z = {z}")));
                    }
                    z.ln()
                }
                (None, _) => ln_canonical_z(&spec, n, beta, kind)?,
            };
            r.input("method", format!("{:?}", a.method).to_lowercase());
            r.output("ln_z", ln_z)
                .output("z", ln_z.exp())
                .output("free_energy", free_energy(ln_z, kt));
            Ok(r)
        }
    }
}

pub fn extensivity(
    cfg: &RunConfig,
    stat: StatArg,
    model: ModelArg,
    temperature: f64,
    volume_per_particle: f64,
    sizes: &str,
    cutoff: usize,
) -> Result<Report, CliError> {
    let kind = stat_of(stat);
    let ns = parse_counts(sizes)?;
    if kind.is_quantum() {
        for &n in &ns {
            cap_particles(cfg, n as usize)?;
        }
    }
    let constants = cfg.constants();
    let gas = match model {
        ModelArg::Continuum => GasModel::Continuum { constants },
        ModelArg::Box1d => GasModel::Box1D { constants, cutoff },
    };
    if kind.is_quantum() && model == ModelArg::Box1d {
        cap_levels(cfg, cutoff)?;
    }
    let pairs: Vec<(f64, u64)> = ns.iter().map(|&n| (volume_per_particle * n as f64, n)).collect();
    let rows = extensivity_report(&gas, kind, temperature, &pairs)?;
    let mut r = Report::new("extensivity");
    r.input("stat", kind.label())
        .input("model", format!("{model:?}").to_lowercase())
        .input("T", temperature)
        .input("volume_per_particle", volume_per_particle)
        .input("sizes", sizes);
    let mut t = Table::new(&[
        "volume",
        "n",
        "ln_z",
        "free_energy",
        "free_energy_per_particle",
        "drift",
        "stirling_excess",
    ]);
    for row in &rows {
        t.push(vec![
            to_value(row.volume),
            to_value(row.n),
            to_value(row.ln_z),
            to_value(row.free_energy),
            to_value(row.free_energy_per_particle),
            to_value(row.drift),
            to_value(row.stirling_excess),
        ]);
    }
    let max_drift = rows.iter().map(|r| r.drift.abs()).fold(0.0, f64::max);
    let f1 = rows.first().map(|r| r.free_energy_per_particle).unwrap_or(0.0);
    r.output("max_abs_drift", max_drift)
        .output("max_relative_drift", if f1 != 0.0 { max_drift / f1.abs() } else { 0.0 })
        .output("free_energy_convention", "F = -kT ln Z");
    r.table = Some(t);
    Ok(r)
}

/// The coefficient table with one weight of `s₁` flipped, used as a
/// negative control for the ledger.
pub fn tampered_table() -> MixedBasisTable {
    let mut t = MIXED_BASIS_TABLE;
    t.rows[0].weights[1] = -t.rows[0].weights[1];
    t
}

pub fn verify_paper(cfg: &RunConfig, tamper: bool) -> (Report, Option<CliError>) {
    let opts = VerifyOptions {
        mixed_table: if tamper { tampered_table() } else { MIXED_BASIS_TABLE },
        seed: cfg.seed,
    };
    let ledger = verify_with(&opts);
    let mut r = Report::new("verify-paper");
    r.input("seed", cfg.seed);
    let mut t = Table::new(&["id", "location", "status", "lhs", "rhs", "tolerance"]);
    for c in &ledger.checks {
        t.push(vec![
            to_value(&c.id),
            to_value(&c.location),
            to_value(c.status.to_string()),
            to_value(&c.lhs),
            to_value(&c.rhs),
            to_value(c.tolerance),
        ]);
        let mut m = serde_json::Map::new();
        m.insert("id".into(), to_value(&c.id));
        m.insert("location".into(), to_value(&c.location));
        m.insert("status".into(), to_value(c.status));
        m.insert("pass".into(), Value::Bool(c.status != CheckStatus::Fail));
        m.insert("lhs".into(), to_value(&c.lhs));
        m.insert("rhs".into(), to_value(&c.rhs));
        m.insert("tolerance".into(), to_value(c.tolerance));
        r.checks.push(Value::Object(m));
    }
    let failed = ledger.count(CheckStatus::Fail);
    r.output("passed", ledger.count(CheckStatus::Pass))
        .output("noted", ledger.count(CheckStatus::Noted))
        .output("failed", failed)
        .output("total", ledger.checks.len());
    r.table = Some(t);
    let deferred = (failed > 0).then(|| {
        let ids: Vec<&str> = ledger
            .checks
            .iter()
            .filter(|c| c.status == CheckStatus::Fail)
            .map(|c| c.id.as_str())
            .collect();
        CliError::VerifyFailed(format!("{failed} check(s) failed: {}", ids.join(", ")))
    });
    (r, deferred)
}
