//! State specifications: built-in names or JSON files.

use std::path::Path;

use crate::qstate::{named_pure, sigma_family, DensityFile, DensityMatrix, Family, PureState, Sign, StateFile, StateLabel};
use crate::{Error, Result};

#[derive(Debug, Clone)]
pub enum Input {
    Pure { spec: String, state: PureState },
    Mixed { spec: String, rho: DensityMatrix, family: Option<Family> },
}

impl Input {
    pub fn spec(&self) -> &str {
        match self {
            Input::Pure { spec, .. } | Input::Mixed { spec, .. } => spec,
        }
    }

    pub fn density(&self) -> DensityMatrix {
        match self {
            Input::Pure { state, .. } => state.projector(),
            Input::Mixed { rho, .. } => rho.clone(),
        }
    }

    pub fn dim(&self) -> usize {
        match self {
            Input::Pure { state, .. } => state.dim(),
            Input::Mixed { rho, .. } => rho.dim(),
        }
    }

    pub fn is_pure(&self) -> bool {
        matches!(self, Input::Pure { .. })
    }
}

/// Parses `1.5`, `pi`, `2pi/3`, `2*pi/3`, `-pi/4`.
pub fn parse_number(text: &str) -> Result<f64> {
    let t = text.trim();
    let bad = || Error::Parse(format!("cannot read number {text:?}"));
    if let Some(pos) = t.find("pi") {
        let head = t[..pos].trim_end_matches('*');
        let tail = &t[pos + 2..];
        let coeff = match head {
            "" | "+" => 1.0,
            "-" => -1.0,
            h => h.parse::<f64>().map_err(|_| bad())?,
        };
        let denom = match tail {
            "" => 1.0,
            d => d.strip_prefix('/').ok_or_else(bad)?.parse::<f64>().map_err(|_| bad())?,
        };
        return Ok(coeff * std::f64::consts::PI / denom);
    }
    let v: f64 = t.parse().map_err(|_| bad())?;
    if v.is_finite() {
        Ok(v)
    } else {
        Err(bad())
    }
}

/// Splits `a=1,b=2` or `1,2` into values, checking names when given.
fn parameters(args: &str, names: &[&str]) -> Result<Vec<f64>> {
    let parts: Vec<&str> = args.split(',').map(str::trim).collect();
    if parts.len() != names.len() {
        return Err(Error::Parse(format!("expected {} parameters ({}), got {:?}", names.len(), names.join(", "), args)));
    }
    parts
        .iter()
        .zip(names)
        .map(|(part, name)| match part.split_once('=') {
            Some((k, v)) if k.trim() == *name => parse_number(v),
            Some((k, _)) => Err(Error::Parse(format!("unexpected parameter {k:?}, wanted {name:?}"))),
            None => parse_number(part),
        })
        .collect()
}

fn pure(spec: &str, label: StateLabel) -> Result<Input> {
    Ok(Input::Pure { spec: spec.to_string(), state: named_pure(label)? })
}

fn mixed(spec: &str, family: Family) -> Result<Input> {
    Ok(Input::Mixed { spec: spec.to_string(), rho: sigma_family(family)?, family: Some(family) })
}

fn ghz_basis_label(name: &str) -> Option<StateLabel> {
    let rest = name.strip_prefix("ghz")?;
    let mut chars = rest.chars();
    let k = chars.next()?.to_digit(10)? as u8;
    let sign = match chars.as_str() {
        "+" => Sign::Plus,
        "-" => Sign::Minus,
        _ => return None,
    };
    (1..=4).contains(&k).then_some(StateLabel::GhzBasis { k, sign })
}

/// Resolves a built-in name, falling back to a JSON file path.
///
/// Names: `ghz`, `w`, `psi5`, `ghz1+` .. `ghz4-`, `pi-ghz`, `sigma:x=…`,
/// `sigma-tilde:y=…`, `rho:xi=…,x=…,y=…`, `j:θ₁,θ₂`, `x-state:x,φ₁,φ₂,φ₃`.
pub fn resolve(spec: &str) -> Result<Input> {
    let (name, args) = match spec.split_once(':') {
        Some((n, a)) => (n, Some(a)),
        None => (spec, None),
    };
    match (name, args) {
        ("ghz", None) => pure(spec, StateLabel::Ghz),
        ("w", None) => pure(spec, StateLabel::W),
        ("psi5", None) => pure(spec, StateLabel::Psi5),
        ("pi-ghz", None) => mixed(spec, Family::PiGhz),
        ("sigma", Some(a)) => mixed(spec, Family::Sigma { x: parameters(a, &["x"])?[0] }),
        ("sigma-tilde", Some(a)) => mixed(spec, Family::SigmaTilde { y: parameters(a, &["y"])?[0] }),
        ("rho", Some(a)) => {
            let v = parameters(a, &["xi", "x", "y"])?;
            mixed(spec, Family::Rho { xi: v[0], x: v[1], y: v[2] })
        }
        ("j", Some(a)) => {
            let v = parameters(a, &["theta1", "theta2"])?;
            pure(spec, StateLabel::J { theta1: v[0], theta2: v[1] })
        }
        ("x-state", Some(a)) => {
            let v = parameters(a, &["x", "phi1", "phi2", "phi3"])?;
            pure(spec, StateLabel::X { x: v[0], phi: [v[1], v[2], v[3]] })
        }
        _ => {
            if let Some(label) = ghz_basis_label(spec) {
                return pure(spec, label);
            }
            load_file(spec)
        }
    }
}

fn load_file(spec: &str) -> Result<Input> {
    let path = Path::new(spec);
    if !path.is_file() {
        return Err(Error::Parse(format!("{spec:?} is neither a known state name nor a readable file")));
    }
    let text = std::fs::read_to_string(path).map_err(|e| Error::Parse(format!("{spec}: {e}")))?;
    let value: serde_json::Value = serde_json::from_str(&text).map_err(|e| Error::Parse(format!("{spec}: {e}")))?;
    if value.get("amplitudes").is_some() {
        Ok(Input::Pure { spec: spec.to_string(), state: StateFile::from_json(&text)?.into_state()? })
    } else if value.get("matrix").is_some() {
        Ok(Input::Mixed { spec: spec.to_string(), rho: DensityFile::from_json(&text)?.into_density()?, family: None })
    } else {
        Err(Error::Parse(format!("{spec}: expected an \"amplitudes\" or \"matrix\" field")))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn numbers() {
        assert_eq!(parse_number("0.25").unwrap(), 0.25);
        assert!((parse_number("2pi/3").unwrap() - 2.0 * PI / 3.0).abs() < 1e-15);
        assert!((parse_number("2*pi/3").unwrap() - 2.0 * PI / 3.0).abs() < 1e-15);
        assert!((parse_number("-pi/4").unwrap() + PI / 4.0).abs() < 1e-15);
        assert_eq!(parse_number("pi").unwrap(), PI);
        assert!(parse_number("nan").is_err());
        assert!(parse_number("pie").is_err());
    }

    #[test]
    fn names() {
        assert!(resolve("ghz").unwrap().is_pure());
        assert!(!resolve("pi-ghz").unwrap().is_pure());
        assert!(matches!(resolve("sigma:x=0.3").unwrap(), Input::Mixed { family: Some(Family::Sigma { x }), .. } if x == 0.3));
        assert!(matches!(resolve("sigma:0.3").unwrap(), Input::Mixed { .. }));
        assert!(resolve("rho:xi=0.5,x=0.2,y=0.1").is_ok());
        assert!(resolve("j:pi/3,2pi/3").is_ok());
        assert!(resolve("x-state:0.75,0,pi,pi").is_ok());
        assert_eq!(resolve("psi5").unwrap().dim(), 32);
        assert!(resolve("ghz3-").unwrap().is_pure());
        assert!(resolve("ghz5+").is_err());
        assert!(resolve("sigma:y=0.3").is_err());
        assert!(resolve("sigma:x=1.5").is_err());
        assert!(resolve("no-such-state").is_err());
    }
}
