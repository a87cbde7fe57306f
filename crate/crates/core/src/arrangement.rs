//! Hyperplane arrangements in P^d and their standard parameters.
//!
//! A hyperplane `{ρ₁t₁ + ⋯ + ρ_{d+1}t_{d+1} = 0}` is stored through its dual
//! point `[ρ₁:⋯:ρ_{d+1}]`. An ordered arrangement of `n+1` hyperplanes in
//! general position is carried by a unique projective map onto one whose
//! first `d+2` members are the coordinate hyperplanes and `t₁+⋯+t_{d+1}=0`;
//! the remaining members `[λ_{i,1}:⋯:λ_{i,d}:1]` form the standard parameter.

use std::cmp::Ordering;
use std::fmt;

use itertools::Itertools;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactfield::{projective_normalize, Matrix, Rational};

/// A hyperplane of P^d given by its canonical dual point.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Hyperplane {
    dual_point: Vec<Rational>,
}

impl Hyperplane {
    pub fn new(dual_point: &[Rational]) -> Result<Self> {
        Ok(Hyperplane {
            dual_point: projective_normalize(dual_point)?,
        })
    }

    pub fn dual_point(&self) -> &[Rational] {
        &self.dual_point
    }

    /// Evaluates the defining linear form at a point.
    pub fn eval(&self, point: &[Rational]) -> Rational {
        self.dual_point
            .iter()
            .zip(point)
            .fold(Rational::zero(), |acc, (a, b)| acc + a * b)
    }
}

/// Whether every `d+1` of the dual points are linearly independent.
///
/// This is the geometric general-position condition: any `s ≤ d+1` of the
/// hyperplanes meet in a plane of dimension `d - s`.
pub fn is_general_position(points: &[Vec<Rational>], d: usize) -> Result<bool> {
    check_points(points, d)?;
    if points.len() < d + 2 {
        return Err(Error::InvalidInput(format!(
            "general position needs at least {} points in P^{d}, got {}",
            d + 2,
            points.len()
        )));
    }
    Ok(general_position_unchecked(points, d))
}

fn check_points(points: &[Vec<Rational>], d: usize) -> Result<()> {
    if d == 0 {
        return Err(Error::InvalidInput("dimension must be at least 1".into()));
    }
    for (j, p) in points.iter().enumerate() {
        if p.len() != d + 1 {
            return Err(Error::InvalidInput(format!(
                "point {} has {} coordinates, expected {}",
                j + 1,
                p.len(),
                d + 1
            )));
        }
        if p.iter().all(Rational::is_zero) {
            return Err(Error::InvalidInput(format!(
                "point {} is the zero vector",
                j + 1
            )));
        }
    }
    Ok(())
}

fn general_position_unchecked(points: &[Vec<Rational>], d: usize) -> bool {
    points.iter().combinations(d + 1).all(|subset| {
        let cols: Vec<Vec<Rational>> = subset.into_iter().cloned().collect();
        !Matrix::from_columns(&cols)
            .and_then(|m| m.det())
            .map_or(true, |det| det.is_zero())
    })
}

/// An ordered arrangement of `n+1 ≥ d+2` hyperplanes in general position.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "ArrangementRepr", into = "ArrangementRepr")]
pub struct Arrangement {
    d: usize,
    hyperplanes: Vec<Hyperplane>,
}

#[derive(Serialize, Deserialize)]
struct ArrangementRepr {
    d: usize,
    points: Vec<Vec<Rational>>,
}

impl TryFrom<ArrangementRepr> for Arrangement {
    type Error = Error;
    fn try_from(r: ArrangementRepr) -> Result<Self> {
        Arrangement::new(r.d, r.points)
    }
}

impl From<Arrangement> for ArrangementRepr {
    fn from(a: Arrangement) -> Self {
        ArrangementRepr {
            d: a.d,
            points: a.points(),
        }
    }
}

impl Arrangement {
    pub fn new(d: usize, points: Vec<Vec<Rational>>) -> Result<Self> {
        if !is_general_position(&points, d)? {
            return Err(Error::NotGeneralPosition);
        }
        let hyperplanes = points
            .iter()
            .map(|p| Hyperplane::new(p))
            .collect::<Result<_>>()?;
        Ok(Arrangement { d, hyperplanes })
    }

    pub fn dimension(&self) -> usize {
        self.d
    }

    /// `n`, one less than the number of hyperplanes.
    pub fn n(&self) -> usize {
        self.hyperplanes.len() - 1
    }

    pub fn hyperplanes(&self) -> &[Hyperplane] {
        &self.hyperplanes
    }

    pub fn points(&self) -> Vec<Vec<Rational>> {
        self.hyperplanes
            .iter()
            .map(|h| h.dual_point.clone())
            .collect()
    }

    /// Applies an invertible linear map to every dual point.
    pub fn map_dual(&self, m: &Matrix<Rational>) -> Result<Arrangement> {
        if m.rows() != self.d + 1 || !m.is_square() {
            return Err(Error::InvalidInput("map has the wrong size".into()));
        }
        if m.det()?.is_zero() {
            return Err(Error::Singular);
        }
        let points = self
            .hyperplanes
            .iter()
            .map(|h| m.mul_vec(&h.dual_point))
            .collect::<Result<Vec<_>>>()?;
        Arrangement::new(self.d, points)
    }

    /// Reorders the hyperplanes: position `j` receives hyperplane `order[j]`.
    pub fn reordered(&self, order: &[usize]) -> Arrangement {
        Arrangement {
            d: self.d,
            hyperplanes: order.iter().map(|&i| self.hyperplanes[i].clone()).collect(),
        }
    }
}

/// A point of X_{n,d}: the table `λ_{i,j}` with `n-d-1` rows and `d` columns.
///
/// Row `i` is the dual point `Λ_i = [λ_{i,1}:⋯:λ_{i,d}:1]` of hyperplane
/// `d+2+i`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "ParameterRepr", into = "ParameterRepr")]
pub struct StandardParameter {
    d: usize,
    n: usize,
    lambda: Vec<Vec<Rational>>,
}

#[derive(Serialize, Deserialize)]
struct ParameterRepr {
    d: usize,
    n: usize,
    #[serde(default)]
    lambda: Vec<Vec<Rational>>,
}

impl TryFrom<ParameterRepr> for StandardParameter {
    type Error = Error;
    fn try_from(r: ParameterRepr) -> Result<Self> {
        StandardParameter::new(r.d, r.n, r.lambda)
    }
}

impl From<StandardParameter> for ParameterRepr {
    fn from(p: StandardParameter) -> Self {
        ParameterRepr {
            d: p.d,
            n: p.n,
            lambda: p.lambda,
        }
    }
}

impl StandardParameter {
    /// Validates the table shape and membership in X_{n,d}.
    pub fn new(d: usize, n: usize, lambda: Vec<Vec<Rational>>) -> Result<Self> {
        let p = StandardParameter::from_table(d, n, lambda)?;
        if !general_position_unchecked(&p.dual_points(), d) {
            return Err(Error::NotStandardParameter(
                "the associated hyperplanes are not in general position".into(),
            ));
        }
        Ok(p)
    }

    /// Checks only the table shape.
    pub(crate) fn from_table(d: usize, n: usize, lambda: Vec<Vec<Rational>>) -> Result<Self> {
        if d == 0 {
            return Err(Error::InvalidInput("dimension must be at least 1".into()));
        }
        if n < d + 1 {
            return Err(Error::InvalidInput(format!(
                "need n >= d+1, got n={n}, d={d}"
            )));
        }
        if lambda.len() != n - d - 1 || lambda.iter().any(|row| row.len() != d) {
            return Err(Error::InvalidInput(format!(
                "parameter table for (n,d)=({n},{d}) must have {} rows of length {d}",
                n - d - 1
            )));
        }
        Ok(StandardParameter { d, n, lambda })
    }

    /// The one-point space X_{d+1,d}.
    pub fn fermat(d: usize) -> Self {
        StandardParameter {
            d,
            n: d + 1,
            lambda: Vec::new(),
        }
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn rows(&self) -> &[Vec<Rational>] {
        &self.lambda
    }

    /// `λ_{i,j}` with zero-based indices.
    pub fn get(&self, i: usize, j: usize) -> &Rational {
        &self.lambda[i][j]
    }

    /// The column vector `λ_j = (λ_{1,j}, …, λ_{n-d-1,j})`, zero-based `j`.
    pub fn column(&self, j: usize) -> Vec<Rational> {
        self.lambda.iter().map(|row| row[j].clone()).collect()
    }

    pub fn flattened(&self) -> Vec<Rational> {
        self.lambda.iter().flatten().cloned().collect()
    }

    /// Dual points `e₁, …, e_{d+1}, (1,…,1), Λ₁, …, Λ_{n-d-1}`.
    pub fn dual_points(&self) -> Vec<Vec<Rational>> {
        let d = self.d;
        let mut pts: Vec<Vec<Rational>> = (0..=d)
            .map(|j| {
                (0..=d)
                    .map(|i| {
                        if i == j {
                            Rational::one()
                        } else {
                            Rational::zero()
                        }
                    })
                    .collect()
            })
            .collect();
        pts.push(vec![Rational::one(); d + 1]);
        for row in &self.lambda {
            let mut p = row.clone();
            p.push(Rational::one());
            pts.push(p);
        }
        pts
    }
}

impl PartialOrd for StandardParameter {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for StandardParameter {
    /// Lexicographic on `(d, n, flattened table)`.
    fn cmp(&self, other: &Self) -> Ordering {
        (self.d, self.n).cmp(&(other.d, other.n)).then_with(|| {
            self.lambda
                .iter()
                .flatten()
                .cmp(other.lambda.iter().flatten())
        })
    }
}

impl fmt::Display for StandardParameter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows = self
            .lambda
            .iter()
            .map(|r| format!("({})", r.iter().join(", ")))
            .join(", ");
        write!(f, "[{rows}]")
    }
}

/// The canonical ordered arrangement `(L₁(Λ), …, L_{n+1}(Λ))`.
pub fn arrangement_of(param: &StandardParameter) -> Arrangement {
    Arrangement {
        d: param.d,
        hyperplanes: param
            .dual_points()
            .into_iter()
            .map(|dual_point| Hyperplane { dual_point })
            .collect(),
    }
}

/// Membership of a table in X_{n,d}.
pub fn is_standard_parameter(d: usize, n: usize, lambda: &[Vec<Rational>]) -> bool {
    StandardParameter::new(d, n, lambda.to_vec()).is_ok()
}

/// Result of [`normalize`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Normalization {
    /// Linear map on dual points (column vectors) taking `q_j` to a
    /// multiple of `e_j` for `j ≤ d+1` and `q_{d+2}` to `(1,…,1)`.
    pub dual_map: Matrix<Rational>,
    pub parameter: StandardParameter,
}

/// Computes the standard parameter of an ordered arrangement.
pub fn normalize(arr: &Arrangement) -> Result<Normalization> {
    let (dual_map, lambda) = normalize_points(&arr.points(), arr.d)?;
    Ok(Normalization {
        dual_map,
        parameter: StandardParameter {
            d: arr.d,
            n: arr.n(),
            lambda,
        },
    })
}

/// Projective frame normalization on raw dual points.
///
/// Fails with [`Error::NotGeneralPosition`] when the frame is degenerate; it
/// does not check general position of the later points.
pub(crate) fn normalize_points(
    points: &[Vec<Rational>],
    d: usize,
) -> Result<(Matrix<Rational>, Vec<Vec<Rational>>)> {
    if points.len() < d + 2 {
        return Err(Error::InvalidInput(
            "too few hyperplanes to normalize".into(),
        ));
    }
    let basis = Matrix::from_columns(&points[..=d])?;
    let basis_inv = basis.inverse().map_err(|_| Error::NotGeneralPosition)?;
    let scales = basis_inv.mul_vec(&points[d + 1])?;
    if scales.iter().any(Rational::is_zero) {
        return Err(Error::NotGeneralPosition);
    }
    // S = diag(c)^{-1} B^{-1}
    let mut map = basis_inv;
    for (i, c) in scales.iter().enumerate() {
        let inv = c.recip().unwrap();
        for j in 0..=d {
            let v = map.get(i, j) * &inv;
            map.set(i, j, v);
        }
    }
    let mut lambda = Vec::with_capacity(points.len() - d - 2);
    for p in &points[d + 2..] {
        let img = map.mul_vec(p)?;
        let last = img[d].recip().ok_or(Error::NotGeneralPosition)?;
        lambda.push(img[..d].iter().map(|x| x * &last).collect());
    }
    Ok((map, lambda))
}

/// A random point of X_{n,d} with small entries, by rejection sampling.
pub fn random_parameter<R: Rng + ?Sized>(d: usize, n: usize, rng: &mut R) -> StandardParameter {
    assert!(d >= 1 && n > d, "random_parameter needs n >= d+1 >= 2");
    loop {
        let lambda = (0..n - d - 1)
            .map(|_| (0..d).map(|_| random_small_rational(rng)).collect())
            .collect();
        if let Ok(p) = StandardParameter::new(d, n, lambda) {
            return p;
        }
    }
}

/// A rational `p/q` with `|p| ≤ 12`, `1 ≤ q ≤ 7`.
pub fn random_small_rational<R: Rng + ?Sized>(rng: &mut R) -> Rational {
    let p: i64 = rng.gen_range(-12..=12);
    let q: i64 = rng.gen_range(1..=7);
    Rational::new(p, q).unwrap()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64) -> Rational {
        Rational::from(n)
    }

    fn pts(v: &[&[i64]]) -> Vec<Vec<Rational>> {
        v.iter()
            .map(|p| p.iter().map(|&x| q(x)).collect())
            .collect()
    }

    #[test]
    fn canonical_frame_is_in_general_position() {
        let p = pts(&[&[1, 0, 0], &[0, 1, 0], &[0, 0, 1], &[1, 1, 1]]);
        assert!(is_general_position(&p, 2).unwrap());
    }

    #[test]
    fn repeated_point_fails() {
        let p = pts(&[&[1, 0], &[0, 1], &[2, 3], &[4, 6]]);
        assert!(!is_general_position(&p, 1).unwrap());
    }

    #[test]
    fn dependent_triple_fails() {
        let p = pts(&[&[1, 0, 0], &[0, 1, 0], &[0, 0, 1], &[1, 1, 0]]);
        assert!(!is_general_position(&p, 2).unwrap());
    }

    #[test]
    fn wrong_length_and_zero_vector_rejected() {
        assert!(is_general_position(&pts(&[&[1, 0], &[0, 1], &[1, 1, 1]]), 1).is_err());
        assert!(is_general_position(&pts(&[&[1, 0], &[0, 0], &[1, 1]]), 1).is_err());
    }

    #[test]
    fn canonical_arrangement_in_p3_is_general_despite_zero_small_minors() {
        // [I | 1] has vanishing 3x3 minors when d = 3; the rank condition holds.
        let p = pts(&[
            &[1, 0, 0, 0],
            &[0, 1, 0, 0],
            &[0, 0, 1, 0],
            &[0, 0, 0, 1],
            &[1, 1, 1, 1],
        ]);
        assert!(is_general_position(&p, 3).unwrap());
    }

    #[test]
    fn normalize_on_p1() {
        let arr = Arrangement::new(1, pts(&[&[1, 0], &[0, 1], &[1, 1], &[2, 1]])).unwrap();
        let norm = normalize(&arr).unwrap();
        assert_eq!(norm.parameter.rows(), &[vec![q(2)]]);
    }

    #[test]
    fn normalize_fixed_point_is_identity() {
        let param = StandardParameter::new(2, 5, vec![vec![q(2), q(5)], vec![q(3), q(7)]]).unwrap();
        let norm = normalize(&arrangement_of(&param)).unwrap();
        assert_eq!(norm.parameter, param);
        assert_eq!(norm.dual_map, Matrix::identity_like(&q(0), 3));
    }

    #[test]
    fn arrangement_of_assembles_dual_points() {
        let param = StandardParameter::new(2, 4, vec![vec![q(2), q(3)]]).unwrap();
        let arr = arrangement_of(&param);
        assert_eq!(arr.points().last().unwrap(), &vec![q(2), q(3), q(1)]);
        assert_eq!(arr.n(), 4);
        let fermat = arrangement_of(&StandardParameter::fermat(3));
        assert_eq!(fermat.hyperplanes().len(), 5);
    }

    #[test]
    fn membership_examples() {
        assert!(is_standard_parameter(1, 3, &[vec![q(2)]]));
        assert!(!is_standard_parameter(1, 3, &[vec![q(1)]]));
        assert!(!is_standard_parameter(2, 4, &[vec![q(1), q(1)]]));
        assert!(!is_standard_parameter(2, 4, &[vec![q(0), q(3)]]));
        assert!(!is_standard_parameter(2, 4, &[vec![q(3)]]));
    }

    #[test]
    fn parameter_json_shape() {
        let p = StandardParameter::new(1, 4, vec![vec![q(2)], vec![Rational::new(1, 3).unwrap()]])
            .unwrap();
        let json = serde_json::to_string(&p).unwrap();
        assert_eq!(json, r#"{"d":1,"n":4,"lambda":[["2"],["1/3"]]}"#);
        let bad = r#"{"d":1,"n":3,"lambda":[["1"]]}"#;
        assert!(serde_json::from_str::<StandardParameter>(bad).is_err());
    }
}
