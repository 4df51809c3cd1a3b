use clap::Args;
use lemniscate::catalog::Example;
use lemniscate::preimage::{polynomial_from_endpoints, solve_endpoints, EndpointSolution};
use lemniscate::ComplexPoly;
use num_complex::Complex64;
use serde::Serialize;

use crate::report::Failure;

#[derive(Args, Debug)]
pub struct Input {
    /// Coefficients of P in ascending order, `p0,p1,...,pn`.
    #[arg(long, allow_hyphen_values = true)]
    coeffs: Option<String>,
    /// Endpoints `c1,...,c2n`; write `?x` for a free coordinate with initial
    /// guess `x`.
    #[arg(long, allow_hyphen_values = true)]
    endpoints: Option<String>,
    /// Named example.
    #[arg(long)]
    example: Option<String>,
    /// First example parameter.
    #[arg(long, allow_hyphen_values = true)]
    alpha: Option<f64>,
    /// Second example parameter.
    #[arg(long, allow_hyphen_values = true)]
    beta: Option<f64>,
}

/// The polynomial to work with, as given on the command line.
#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "kebab-case", tag = "kind")]
pub enum Source {
    Coefficients {
        coefficients: Vec<f64>,
    },
    Endpoints {
        pinned: Vec<Option<f64>>,
        guesses: Vec<f64>,
    },
    Example {
        example: Example,
    },
}

pub fn parse_number(s: &str) -> Result<f64, Failure> {
    let x: f64 = s
        .trim()
        .parse()
        .map_err(|_| Failure::validation(&format!("not a number: {s:?}")))?;
    if !x.is_finite() {
        return Err(Failure::validation(&format!("not a finite number: {s:?}")));
    }
    Ok(x)
}

/// A comma-separated list of exactly `len` numbers.
pub fn parse_list(s: &str, len: usize) -> Result<Vec<f64>, Failure> {
    let v = s
        .split(',')
        .map(parse_number)
        .collect::<Result<Vec<_>, _>>()?;
    if v.len() != len {
        return Err(Failure::validation(&format!(
            "expected {len} comma-separated numbers, got {s:?}"
        )));
    }
    Ok(v)
}

/// `re,im`, or a single real number.
pub fn parse_complex(s: &str) -> Result<Complex64, Failure> {
    match s.split(',').count() {
        1 => Ok(Complex64::new(parse_number(s)?, 0.0)),
        _ => {
            let v = parse_list(s, 2)?;
            Ok(Complex64::new(v[0], v[1]))
        }
    }
}

impl Input {
    pub fn source(&self) -> Result<Source, Failure> {
        let given = [
            self.coeffs.is_some(),
            self.endpoints.is_some(),
            self.example.is_some(),
        ];
        if given.iter().filter(|&&g| g).count() != 1 {
            return Err(Failure::validation(
                "give exactly one of --coeffs, --endpoints, --example",
            ));
        }
        if (self.alpha.is_some() || self.beta.is_some()) && self.example.is_none() {
            return Err(Failure::validation("--alpha and --beta need --example"));
        }
        if let Some(s) = &self.coeffs {
            let coefficients = s
                .split(',')
                .map(parse_number)
                .collect::<Result<Vec<_>, _>>()?;
            return Ok(Source::Coefficients { coefficients });
        }
        if let Some(s) = &self.endpoints {
            let mut pinned = Vec::new();
            let mut guesses = Vec::new();
            for tok in s.split(',') {
                match tok.trim().strip_prefix('?') {
                    Some(g) => {
                        pinned.push(None);
                        guesses.push(parse_number(g)?);
                    }
                    None => pinned.push(Some(parse_number(tok)?)),
                }
            }
            return Ok(Source::Endpoints { pinned, guesses });
        }
        let id = self.example.as_deref().unwrap_or_default();
        let base = Example::from_id(id).ok_or_else(|| {
            Failure::validation(&format!(
                "unknown example {id:?}; known: {}",
                Example::IDS.join(", ")
            ))
        })?;
        let example = base.with_params(self.alpha, self.beta)?;
        Ok(Source::Example { example })
    }
}

impl Source {
    /// Solves for the free endpoints, if any.
    pub fn endpoint_solution(&self) -> Result<Option<EndpointSolution>, Failure> {
        match self {
            Source::Endpoints { pinned, guesses } if !guesses.is_empty() => {
                Ok(Some(solve_endpoints(pinned, guesses)?))
            }
            _ => Ok(None),
        }
    }

    pub fn polynomial(&self) -> Result<ComplexPoly, Failure> {
        Ok(match self {
            Source::Coefficients { coefficients } => ComplexPoly::from_real(coefficients),
            Source::Endpoints { pinned, .. } => match self.endpoint_solution()? {
                Some(sol) => polynomial_from_endpoints(&sol.endpoints)?,
                None => {
                    let c: Vec<f64> = pinned.iter().map(|p| p.unwrap_or_default()).collect();
                    polynomial_from_endpoints(&c)?
                }
            },
            Source::Example { example } => example.polynomial()?,
        })
    }
}
