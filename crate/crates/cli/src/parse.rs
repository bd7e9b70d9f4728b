//! Parsers for level labels, exact numbers and state specifications.

use idstat::exactnum::{RadicalRational, Rational};
use idstat::perm::ProductState;
use idstat::symmetry::StateVector;
use num_bigint::BigInt;

use crate::error::CliError;

/// Levels written either as letters (`a` is level 0) or as 0-based integers.
/// A list mixing the two forms is rejected.
pub fn parse_levels(text: &str) -> Result<Vec<usize>, CliError> {
    let items: Vec<&str> = text.split(',').map(str::trim).collect();
    if items.iter().any(|s| s.is_empty()) {
        return Err(CliError::input(format!("empty level label in {text:?}")));
    }
    let letters = items
        .iter()
        .all(|s| s.len() == 1 && s.chars().all(|c| c.is_ascii_lowercase()));
    let numbers = items.iter().all(|s| s.chars().all(|c| c.is_ascii_digit()));
    match (letters, numbers) {
        (true, _) => Ok(items.iter().map(|s| (s.as_bytes()[0] - b'a') as usize).collect()),
        (_, true) => items
            .iter()
            .map(|s| s.parse().map_err(|_| CliError::input(format!("bad level {s:?}"))))
            .collect(),
        _ => Err(CliError::input(format!(
            "level labels must be all letters (a,b,c) or all numbers (0,1,2), got {text:?}"
        ))),
    }
}

/// Letters when every level is below 26, comma-separated numbers otherwise.
pub fn format_state(s: &ProductState) -> String {
    if s.levels().iter().all(|&l| l < 26) {
        s.levels().iter().map(|&l| (b'a' + l as u8) as char).collect()
    } else {
        s.levels().iter().map(usize::to_string).collect::<Vec<_>>().join(",")
    }
}

/// `p`, `p/q` or a finite decimal such as `-0.125`, all exact.
pub fn parse_rational(text: &str) -> Result<Rational, CliError> {
    let t = text.trim();
    let bad = || CliError::input(format!("bad exact number {text:?}"));
    if let Ok(q) = t.parse::<Rational>() {
        return Ok(q);
    }
    let (negative, body) = match t.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, t.strip_prefix('+').unwrap_or(t)),
    };
    let (int, frac) = body.split_once('.').ok_or_else(bad)?;
    if int.is_empty() && frac.is_empty() || !int.chars().chain(frac.chars()).all(|c| c.is_ascii_digit()) {
        return Err(bad());
    }
    let digits: BigInt = format!("{int}{frac}").parse().map_err(|_| bad())?;
    let scale = num_traits::pow(BigInt::from(10), frac.len());
    let q = Rational::new(digits, scale);
    Ok(if negative { -q } else { q })
}

pub fn parse_rationals(text: &str) -> Result<Vec<Rational>, CliError> {
    text.split(',').map(parse_rational).collect()
}

/// Numeric list for thermodynamic input. Letter labels are rejected here:
/// levels are energies, not symbols.
pub fn parse_floats(text: &str) -> Result<Vec<f64>, CliError> {
    text.split(',')
        .map(|s| {
            let s = s.trim();
            if s.chars().any(|c| c.is_ascii_alphabetic() && c != 'e' && c != 'E') {
                return Err(CliError::input(format!(
                    "expected numeric energies, got {s:?}; symbolic labels are only valid for exact-state commands"
                )));
            }
            s.parse::<f64>()
                .map_err(|_| CliError::input(format!("bad number {s:?}")))
        })
        .collect()
}

pub fn parse_counts(text: &str) -> Result<Vec<u64>, CliError> {
    text.split(',')
        .map(|s| {
            s.trim()
                .parse()
                .map_err(|_| CliError::input(format!("bad count {s:?}")))
        })
        .collect()
}

/// `abc=1/2*sqrt(2); bac=-1/2*sqrt(2)`: product states written as letter
/// strings (or comma-separated numbers in brackets, `[0,1,27]`) with exact
/// amplitudes.
pub fn parse_terms(text: &str) -> Result<StateVector, CliError> {
    let mut terms = Vec::new();
    for item in text.split(';').map(str::trim).filter(|s| !s.is_empty()) {
        let (state, amp) = item
            .split_once('=')
            .ok_or_else(|| CliError::input(format!("expected state=amplitude, got {item:?}")))?;
        let state = state.trim();
        let levels = if let Some(inner) = state.strip_prefix('[').and_then(|s| s.strip_suffix(']')) {
            parse_levels(inner)?
        } else if !state.is_empty() && state.chars().all(|c| c.is_ascii_lowercase()) {
            state.bytes().map(|b| (b - b'a') as usize).collect()
        } else {
            return Err(CliError::input(format!("bad product state {state:?}")));
        };
        let amp: RadicalRational = amp.trim().parse()?;
        terms.push((ProductState::new(levels), amp));
    }
    let n = terms
        .first()
        .map(|(s, _)| s.n_particles())
        .ok_or_else(|| CliError::input("no terms given"))?;
    if terms.iter().any(|(s, _)| s.n_particles() != n) {
        return Err(CliError::input("all product states must have the same particle number"));
    }
    let basis = terms
        .iter()
        .flat_map(|(s, _)| s.levels().iter().copied())
        .max()
        .map_or(0, |m| m + 1);
    Ok(StateVector::from_terms(n, basis, terms)?)
}
