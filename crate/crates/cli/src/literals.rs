//! Parsers for the small textual literals accepted on the command line and in
//! config files: temperatures, probe states and representation unitaries.

use num_complex::Complex64;
use thermosup::qmath::{cyclic_shift, pauli_x, random_unitary, ComplexMatrix, DensityMatrix, StateVector};
use thermosup::thermal::Temperature;

use crate::error::CliError;

/// `inf` (or `infinity`, `∞`) is β = 0 and `0` is β = ∞; anything else is a
/// non-negative temperature.
pub fn parse_temperature(s: &str) -> Result<Temperature, CliError> {
    let s = s.trim();
    match s.to_ascii_lowercase().as_str() {
        "inf" | "+inf" | "infinity" | "∞" => return Ok(Temperature::infinite()),
        _ => {}
    }
    let t: f64 = s.parse().map_err(|_| CliError::Parse(format!("invalid temperature literal {s:?}")))?;
    if t.is_nan() {
        return Err(CliError::Parse(format!("invalid temperature literal {s:?}")));
    }
    Temperature::from_t(t).map_err(CliError::from)
}

/// Inverse of [`parse_temperature`] for echoing inputs.
pub fn format_temperature(t: Temperature) -> String {
    let x = t.t();
    if x.is_infinite() {
        "inf".to_string()
    } else {
        x.to_string()
    }
}

fn parse_number(s: &str) -> Result<f64, CliError> {
    let x: f64 = s.trim().parse().map_err(|_| CliError::Parse(format!("invalid number {s:?}")))?;
    if !x.is_finite() {
        return Err(CliError::Parse(format!("non-finite number {s:?}")));
    }
    Ok(x)
}

/// `re` or `re:im`
fn parse_amplitude(s: &str) -> Result<Complex64, CliError> {
    match s.split_once(':') {
        Some((re, im)) => Ok(Complex64::new(parse_number(re)?, parse_number(im)?)),
        None => Ok(Complex64::new(parse_number(s)?, 0.0)),
    }
}

/// Probe state on `dim` levels:
/// `ground`, `excited`, `plus`, `mixed`, `diag:p0,p1,...` or `ket:a0,a1,...`
/// where amplitudes are `re` or `re:im` and are normalised on parsing.
pub fn parse_probe(s: &str, dim: usize) -> Result<DensityMatrix, CliError> {
    let s = s.trim();
    let (head, body) = match s.split_once(':') {
        Some((h, b)) => (h, Some(b)),
        None => (s, None),
    };
    let basis = |k: usize| -> Result<DensityMatrix, CliError> {
        Ok(DensityMatrix::pure(&StateVector::basis(dim, k)?)?)
    };
    match (head.to_ascii_lowercase().as_str(), body) {
        ("ground", None) => basis(0),
        ("excited", None) => basis(dim - 1),
        ("mixed", None) => Ok(DensityMatrix::maximally_mixed(dim)),
        ("plus", None) => {
            let a = Complex64::new((dim as f64).sqrt().recip(), 0.0);
            Ok(DensityMatrix::pure(&StateVector::new(vec![a; dim], vec![dim])?)?)
        }
        ("diag", Some(list)) => {
            let p = list.split(',').map(parse_number).collect::<Result<Vec<_>, _>>()?;
            if p.len() != dim {
                return Err(CliError::Validation(format!("diag probe has {} entries, expected {dim}", p.len())));
            }
            Ok(DensityMatrix::diagonal(&p)?)
        }
        ("ket", Some(list)) => {
            let a = list.split(',').map(parse_amplitude).collect::<Result<Vec<_>, _>>()?;
            if a.len() != dim {
                return Err(CliError::Validation(format!("ket probe has {} entries, expected {dim}", a.len())));
            }
            let n = a.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
            if n == 0.0 || !n.is_finite() {
                return Err(CliError::Validation("ket probe has zero norm".into()));
            }
            let a = a.into_iter().map(|z| z / n).collect();
            Ok(DensityMatrix::pure(&StateVector::new(a, vec![dim])?)?)
        }
        _ => Err(CliError::Parse(format!("unknown probe spec {s:?}"))),
    }
}

/// Representation unitary on `dim` levels: `identity`, `x` (qubit only),
/// `cycle`, `random` (seeded by `default_seed`) or `random:SEED`.
pub fn parse_unitary(s: &str, dim: usize, default_seed: u64) -> Result<ComplexMatrix, CliError> {
    let s = s.trim();
    let lower = s.to_ascii_lowercase();
    match lower.as_str() {
        "identity" | "id" => Ok(ComplexMatrix::identity(dim)),
        "x" if dim == 2 => Ok(pauli_x()),
        "x" => Err(CliError::Validation(format!("unitary x needs a qubit, got dimension {dim}"))),
        "cycle" => Ok(cyclic_shift(dim)),
        "random" => Ok(random_unitary(dim, default_seed)),
        _ => match lower.strip_prefix("random:") {
            Some(seed) => {
                let seed = seed.trim().parse().map_err(|_| CliError::Parse(format!("invalid seed in {s:?}")))?;
                Ok(random_unitary(dim, seed))
            }
            None => Err(CliError::Parse(format!("unknown unitary spec {s:?}"))),
        },
    }
}
