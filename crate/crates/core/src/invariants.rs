//! Twisted section counts, plurigenera, genera, and Kodaira dimension of a
//! generalized Fermat manifold of type `(d; k, n)`.
//!
//! M is a smooth complete intersection of `n−d` forms of degree `k` in Pⁿ,
//! with ω_M = O_M(r₁) for `r₁ = (n−d)k − n − 1`.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::exactfield::Rational;
use crate::fermatgroup::GfmType;
use crate::par::{self, Exec};

fn overflow() -> Error {
    Error::InvalidInput("value exceeds 128 bits".into())
}

/// `binom(a, b)`, zero when `b < 0` or `a < b`.
pub fn binomial(a: i64, b: i64) -> Result<u128> {
    if b < 0 || a < b {
        return Ok(0);
    }
    let b = b.min(a - b) as u128;
    let a = a as u128;
    let mut acc: u128 = 1;
    for i in 0..b {
        // acc·(a−i) is divisible by (i+1); divide by the gcd first to
        // postpone overflow.
        let num = a - i;
        let den = i + 1;
        let g = gcd(acc, den);
        acc = (acc / g)
            .checked_mul(num / (den / g))
            .ok_or_else(overflow)?;
    }
    Ok(acc)
}

fn gcd(mut a: u128, mut b: u128) -> u128 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Coefficients of `(1 + t + ⋯ + t^{k−1})^{s}`: the number of `j` in
/// `{0,…,k−1}^s` with each coordinate sum.
fn box_counts(k: u32, s: usize) -> Result<Vec<u128>> {
    let mut counts = vec![1u128];
    for _ in 0..s {
        let mut next = vec![0u128; counts.len() + k as usize - 1];
        for (i, &c) in counts.iter().enumerate() {
            for slot in &mut next[i..i + k as usize] {
                *slot = slot.checked_add(c).ok_or_else(overflow)?;
            }
        }
        counts = next;
    }
    Ok(counts)
}

/// `h⁰(M, O_M(r))` from the monomial basis indexed by `Δ_r`.
pub fn h0_twist(t: &GfmType, r: i64) -> Result<u128> {
    let (d, k, n) = (t.d() as i64, t.k() as i64, t.n() as i64);
    if r < 0 {
        return Ok(0);
    }
    if r < k {
        return binomial(r + n, n);
    }
    let counts = box_counts(t.k(), t.n() - t.d())?;
    let mut total: u128 = 0;
    for (jbar, &c) in counts.iter().enumerate() {
        let jbar = jbar as i64;
        if jbar > r {
            break;
        }
        let term = binomial(r - jbar + d, d)?
            .checked_mul(c)
            .ok_or_else(overflow)?;
        total = total.checked_add(term).ok_or_else(overflow)?;
    }
    Ok(total)
}

/// Coefficient of `t^r` in `(1 − t^k)^{n−d} (1 − t)^{−(n+1)}`.
pub fn hilbert_series_coefficient(t: &GfmType, r: i64) -> Result<u128> {
    let (k, n) = (t.k() as i64, t.n() as i64);
    let c = (t.n() - t.d()) as i64;
    let mut total: i128 = 0;
    for s in 0..=c {
        if s * k > r {
            break;
        }
        let term = binomial(c, s)?
            .checked_mul(binomial(r - s * k + n, n)?)
            .ok_or_else(overflow)?;
        let term = i128::try_from(term).map_err(|_| overflow())?;
        total = if s % 2 == 0 {
            total.checked_add(term)
        } else {
            total.checked_sub(term)
        }
        .ok_or_else(overflow)?;
    }
    u128::try_from(total).map_err(|_| Error::InvalidInput("negative Hilbert coefficient".into()))
}

/// `r₁ = (n−d)k − n − 1`, the twist with `O_M(r₁) = ω_M`.
pub fn canonical_degree(t: &GfmType) -> i64 {
    (t.n() - t.d()) as i64 * t.k() as i64 - t.n() as i64 - 1
}

/// `P_m = h⁰(O_M(m·r₁))`.
pub fn plurigenus(t: &GfmType, m: u32) -> Result<u128> {
    let r = canonical_degree(t)
        .checked_mul(m as i64)
        .ok_or_else(overflow)?;
    h0_twist(t, r)
}

/// `h^d(O_M(r)) = h⁰(O_M(r₁ − r))` by Serre duality.
pub fn top_cohomology(t: &GfmType, r: i64) -> Result<u128> {
    h0_twist(t, canonical_degree(t) - r)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Kodaira {
    NegativeInfinity,
    Finite(usize),
}

impl fmt::Display for Kodaira {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Kodaira::NegativeInfinity => write!(f, "-infinity"),
            Kodaira::Finite(v) => write!(f, "{v}"),
        }
    }
}

impl Serialize for Kodaira {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Kodaira::NegativeInfinity => s.serialize_str("-infinity"),
            Kodaira::Finite(v) => s.serialize_u64(*v as u64),
        }
    }
}

impl<'de> Deserialize<'de> for Kodaira {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Repr {
            Num(usize),
            Text(String),
        }
        match Repr::deserialize(d)? {
            Repr::Num(v) => Ok(Kodaira::Finite(v)),
            Repr::Text(s) if s == "-infinity" => Ok(Kodaira::NegativeInfinity),
            Repr::Text(s) => Err(serde::de::Error::custom(format!(
                "bad Kodaira dimension {s}"
            ))),
        }
    }
}

pub fn kodaira_dimension(t: &GfmType) -> Kodaira {
    match canonical_degree(t) {
        r if r < 0 => Kodaira::NegativeInfinity,
        0 => Kodaira::Finite(0),
        _ => Kodaira::Finite(t.d()),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Label {
    #[serde(rename = "negative-kodaira")]
    NegativeKodaira,
    #[serde(rename = "rational")]
    Rational,
    #[serde(rename = "Calabi-Yau")]
    CalabiYau,
    K3,
    #[serde(rename = "general-type")]
    GeneralType,
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Label::NegativeKodaira => "negative-kodaira",
            Label::Rational => "rational",
            Label::CalabiYau => "Calabi-Yau",
            Label::K3 => "K3",
            Label::GeneralType => "general-type",
        };
        f.write_str(s)
    }
}

/// Rationality is only asserted for the three listed surfaces; other
/// types with `r₁ < 0` are labelled by their Kodaira dimension alone.
pub fn classify(t: &GfmType) -> Label {
    if t.d() == 2 {
        match (t.k(), t.n()) {
            (4, 3) | (2, 5) => return Label::K3,
            (2, 3) | (3, 3) | (2, 4) => return Label::Rational,
            _ => {}
        }
    }
    match canonical_degree(t) {
        0 => Label::CalabiYau,
        r if r > 0 => Label::GeneralType,
        _ => Label::NegativeKodaira,
    }
}

/// `k^{n−d} r₁^d / d!`, the leading coefficient of `m ↦ P_m`.
pub fn leading_coefficient(t: &GfmType) -> Result<Rational> {
    let r1 = canonical_degree(t);
    if r1 <= 0 {
        return Err(Error::Precondition(format!(
            "leading coefficient needs r1 > 0, type {t} has r1 = {r1}"
        )));
    }
    let d = t.d() as u32;
    let num =
        Rational::from(t.k() as i64).pow((t.n() - t.d()) as i32) * Rational::from(r1).pow(d as i32);
    let fact = (1..=d as i64).fold(Rational::one(), |acc, i| acc * Rational::from(i));
    Ok(num / fact)
}

/// The leading coefficient of the degree-`d` polynomial through
/// `(m, P_m)` for `d+1` consecutive `m` in the polynomial range, as the
/// `d`-th finite difference over `d!`.
pub fn interpolated_leading_coefficient(t: &GfmType) -> Result<Rational> {
    let r1 = canonical_degree(t);
    if r1 <= 0 {
        return Err(Error::Precondition(format!("type {t} has r1 = {r1} <= 0")));
    }
    let start = (t.k() as i64).max(((t.n() - t.d()) as i64) * (t.k() as i64 - 1));
    let m0 = ((start + r1 - 1) / r1).max(1) as u32;
    let d = t.d();
    let mut diffs: Vec<Rational> = (0..=d as u32)
        .map(|i| plurigenus(t, m0 + i).map(|v| Rational::from(num_bigint::BigInt::from(v))))
        .collect::<Result<_>>()?;
    for _ in 0..d {
        diffs = diffs.windows(2).map(|w| &w[1] - &w[0]).collect();
    }
    let fact = (1..=d as i64).fold(Rational::one(), |acc, i| acc * Rational::from(i));
    Ok(diffs[0].clone() / fact)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct InvariantReport {
    pub gfm_type: GfmType,
    pub r1: i64,
    pub kodaira: Kodaira,
    /// Arithmetic genus, equal to the geometric genus `h⁰(ω_M)`.
    pub pa_pg: u128,
    /// `h^d(O_M)`, computed through Serre duality; equals `pa_pg`.
    pub h_top_structure_sheaf: u128,
    pub plurigenera: BTreeMap<u32, u128>,
    pub label: Label,
    pub leading_coefficient: Option<Rational>,
    pub intermediate_vanishing_note: String,
}

pub fn invariant_report(t: &GfmType, pluri: &[u32], exec: Exec) -> Result<InvariantReport> {
    let r1 = canonical_degree(t);
    let values = par::map_slice(exec, pluri, |&m| plurigenus(t, m));
    let plurigenera = pluri
        .iter()
        .copied()
        .zip(values)
        .map(|(m, v)| v.map(|v| (m, v)))
        .collect::<Result<_>>()?;
    Ok(InvariantReport {
        gfm_type: *t,
        r1,
        kodaira: kodaira_dimension(t),
        pa_pg: h0_twist(t, r1)?,
        h_top_structure_sheaf: top_cohomology(t, 0)?,
        plurigenera,
        label: classify(t),
        leading_coefficient: (r1 > 0).then(|| leading_coefficient(t)).transpose()?,
        intermediate_vanishing_note: if t.d() >= 2 {
            format!("h^i(M, O_M(r)) = 0 for 0 < i < {} and all r", t.d())
        } else {
            "no intermediate cohomology for curves".into()
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t(d: usize, k: u32, n: usize) -> GfmType {
        GfmType::new(d, k, n).unwrap()
    }

    #[test]
    fn binomial_edges() {
        assert_eq!(binomial(5, 2).unwrap(), 10);
        assert_eq!(binomial(2, 5).unwrap(), 0);
        assert_eq!(binomial(-1, 0).unwrap(), 0);
        assert_eq!(binomial(7, -1).unwrap(), 0);
        assert_eq!(binomial(60, 30).unwrap(), 118_264_581_564_861_424);
    }

    #[test]
    fn h0_examples() {
        assert_eq!(h0_twist(&t(2, 4, 3), -1).unwrap(), 0);
        assert_eq!(h0_twist(&t(2, 4, 3), 0).unwrap(), 1);
        assert_eq!(h0_twist(&t(2, 3, 4), 3).unwrap(), 33);
        assert_eq!(hilbert_series_coefficient(&t(2, 3, 4), 3).unwrap(), 33);
        assert_eq!(hilbert_series_coefficient(&t(3, 5, 7), 0).unwrap(), 1);
    }

    #[test]
    fn canonical_degrees() {
        assert_eq!(canonical_degree(&t(2, 4, 3)), 0);
        assert_eq!(canonical_degree(&t(2, 2, 5)), 0);
        assert_eq!(canonical_degree(&t(1, 2, 3)), 0);
    }

    #[test]
    fn plurigenera_examples() {
        for m in 1..6 {
            assert_eq!(plurigenus(&t(2, 4, 3), m).unwrap(), 1);
            assert_eq!(plurigenus(&t(2, 2, 3), m).unwrap(), 0);
        }
        assert_eq!(plurigenus(&t(2, 3, 4), 1).unwrap(), 5);
    }

    #[test]
    fn kodaira_and_labels() {
        assert_eq!(kodaira_dimension(&t(2, 2, 3)), Kodaira::NegativeInfinity);
        assert_eq!(kodaira_dimension(&t(2, 4, 3)), Kodaira::Finite(0));
        assert_eq!(kodaira_dimension(&t(2, 3, 4)), Kodaira::Finite(2));
        assert_eq!(classify(&t(2, 4, 3)), Label::K3);
        assert_eq!(classify(&t(2, 3, 3)), Label::Rational);
        assert_eq!(classify(&t(3, 2, 7)), Label::CalabiYau);
        assert_eq!(classify(&t(3, 2, 5)), Label::NegativeKodaira);
    }

    #[test]
    fn leading_coefficients() {
        let r = |p, q| Rational::new(p, q).unwrap();
        assert_eq!(leading_coefficient(&t(2, 3, 4)).unwrap(), r(9, 2));
        assert_eq!(leading_coefficient(&t(1, 3, 3)).unwrap(), r(18, 1));
        assert_eq!(leading_coefficient(&t(2, 2, 6)).unwrap(), r(8, 1));
        for ty in [t(2, 3, 4), t(1, 3, 3), t(2, 2, 6)] {
            assert_eq!(
                interpolated_leading_coefficient(&ty).unwrap(),
                leading_coefficient(&ty).unwrap()
            );
        }
        assert!(leading_coefficient(&t(2, 4, 3)).is_err());
    }

    #[test]
    fn report_for_k3() {
        let rep = invariant_report(&t(2, 4, 3), &[1, 2, 3], Exec::Sequential).unwrap();
        assert_eq!(rep.label, Label::K3);
        assert_eq!(rep.pa_pg, 1);
        assert_eq!(rep.h_top_structure_sheaf, rep.pa_pg);
        assert!(rep.plurigenera.values().all(|&v| v == 1));
        let json = serde_json::to_string(&rep).unwrap();
        assert!(json.contains(r#""kodaira":0"#) && json.contains(r#""label":"K3""#));
        let back: InvariantReport = serde_json::from_str(&json).unwrap();
        assert_eq!(back, rep);
    }
}
