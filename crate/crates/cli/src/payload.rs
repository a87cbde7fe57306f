//! Request payloads. Each verb taking a JSON document deserializes it into
//! one of these types; the library constructors run their own validation
//! during deserialization, so a payload that parses is well-formed.

use std::io::Read;

use genfermat::arrangement::StandardParameter;
use genfermat::exactfield::{Cyclotomic, CyclotomicField, Matrix, Rational};
use genfermat::fermatgroup::{GfmType, GroupElement};
use genfermat::Error;
use serde::Deserialize;

/// Reads the payload argument: inline JSON, `@path`, or `-` for stdin.
pub fn read_source(arg: &str) -> Result<String, Error> {
    let io = |e: std::io::Error| Error::InvalidInput(format!("cannot read payload: {e}"));
    if arg == "-" {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s).map_err(io)?;
        Ok(s)
    } else if let Some(path) = arg.strip_prefix('@') {
        std::fs::read_to_string(path).map_err(io)
    } else {
        Ok(arg.to_string())
    }
}

pub fn parse<T: for<'de> Deserialize<'de>>(arg: &str) -> Result<T, Error> {
    let text = read_source(arg)?;
    serde_json::from_str(&text).map_err(|e| Error::InvalidInput(format!("payload: {e}")))
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
pub struct IsoRequest {
    pub a: StandardParameter,
    pub b: StandardParameter,
    #[serde(default)]
    pub k: Option<u32>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ParameterWithDegree {
    pub parameter: StandardParameter,
    pub k: u32,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FixedLocusRequest {
    #[serde(rename = "type")]
    pub gfm_type: GfmType,
    pub element: GroupElement,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FreeRequest {
    #[serde(rename = "type")]
    pub gfm_type: GfmType,
    pub generators: Vec<GroupElement>,
}

#[derive(Deserialize)]
#[serde(untagged)]
pub enum Entry {
    Rational(Rational),
    Cyclotomic { order: u32, coeffs: Vec<Rational> },
}

impl Entry {
    fn order(&self) -> u32 {
        match self {
            Entry::Rational(_) => 1,
            Entry::Cyclotomic { order, .. } => *order,
        }
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VerifyRequest {
    pub parameter: StandardParameter,
    pub k: u32,
    pub matrix: Vec<Vec<Entry>>,
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

impl VerifyRequest {
    /// The matrix over Q(ζ_L), `L` the lcm of the entry orders.
    pub fn cyclotomic_matrix(&self) -> Result<Matrix<Cyclotomic>, Error> {
        let lcm = self
            .matrix
            .iter()
            .flatten()
            .try_fold(1u64, |acc, e| {
                let o = e.order() as u64;
                if o == 0 {
                    return None;
                }
                Some(acc / gcd(acc, o) * o).filter(|&l| l <= 10_000)
            })
            .ok_or_else(|| {
                Error::InvalidInput("entry orders must be positive with lcm <= 10000".into())
            })? as u32;
        let field = CyclotomicField::new(lcm)?;
        let rows = self
            .matrix
            .iter()
            .map(|row| {
                row.iter()
                    .map(|e| match e {
                        Entry::Rational(r) => Ok(field.rational(r.clone())),
                        Entry::Cyclotomic { order, coeffs } => {
                            Cyclotomic::from_coefficients(*order, coeffs.clone())?.embed(lcm)
                        }
                    })
                    .collect::<Result<Vec<_>, Error>>()
            })
            .collect::<Result<Vec<_>, Error>>()?;
        Matrix::from_rows(rows)
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
pub struct KummerRequest {
    pub alpha: Vec<Rational>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RestrictRequest {
    pub parameter: StandardParameter,
    pub rho: Vec<Rational>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConicEtaRequest {
    pub a: Rational,
    pub parameter: StandardParameter,
}
