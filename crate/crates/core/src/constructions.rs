//! Worked constructions: Kummer surface parameters, restriction of a
//! generalized Fermat surface to a line, and conics tangent to the four
//! canonical lines of P².

use serde::{Deserialize, Serialize};

use crate::arrangement::{is_general_position, normalize_points, StandardParameter};
use crate::error::{Error, Result};
use crate::exactfield::{projective_normalize, Matrix, Rational};

/// Parameter in X_{5,2} of the six lines tangent to the Kummer surface of
/// the genus-two curve branched over `α₁, …, α₆`.
///
/// Column `j` (for `j = 1, 2`) holds the cross-ratios
/// `[α_j, α₃; α₄, α₅]` and `[α_j, α₃; α₄, α₆]`.
pub fn kummer_parameters(alpha: &[Rational]) -> Result<StandardParameter> {
    if alpha.len() != 6 {
        return Err(Error::InvalidInput(format!(
            "need six branch values, got {}",
            alpha.len()
        )));
    }
    for i in 0..6 {
        for j in i + 1..6 {
            if alpha[i] == alpha[j] {
                return Err(Error::InvalidInput(format!(
                    "branch values {} and {} coincide",
                    i + 1,
                    j + 1
                )));
            }
        }
    }
    let cr = |a: &Rational, e: &Rational| {
        let (a3, a4) = (&alpha[2], &alpha[3]);
        &(&(a - a4) * &(a3 - e)) / &(&(a - e) * &(a3 - a4))
    };
    let lambda = (4..6)
        .map(|e| vec![cr(&alpha[0], &alpha[e]), cr(&alpha[1], &alpha[e])])
        .collect();
    StandardParameter::new(2, 5, lambda)
}

/// The line of P² restricted against the arrangement of a parameter.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LineRestriction {
    pub rho: Vec<Rational>,
    /// Intersection points with `L₁(Λ), …, L_{n+1}(Λ)` in the coordinate
    /// `[t₁ : t₂]` of the line.
    pub points: Vec<Vec<Rational>>,
    /// The curve parameter, absent when the restricted curve is singular.
    pub eta: Option<StandardParameter>,
    /// The line fails general position with the arrangement.
    pub singular: bool,
}

/// Restricts M_n^k(Λ), Λ ∈ X_{n,2}, to the preimage of the line `L_ρ`,
/// giving a generalized Fermat curve with parameter in X_{n,1}.
///
/// Fails with [`Error::NotGeneralPosition`] when `L_ρ` and the arrangement
/// are not in general position.
pub fn restrict_to_line(param: &StandardParameter, rho: &[Rational]) -> Result<LineRestriction> {
    let r = restrict_to_line_lenient(param, rho)?;
    if r.singular {
        return Err(Error::NotGeneralPosition);
    }
    Ok(r)
}

/// As [`restrict_to_line`], but reports degenerate lines as `singular`
/// instead of failing.
pub fn restrict_to_line_lenient(
    param: &StandardParameter,
    rho: &[Rational],
) -> Result<LineRestriction> {
    if param.d() != 2 {
        return Err(Error::InvalidInput(
            "line restriction needs a parameter in X_{n,2}".into(),
        ));
    }
    if rho.len() != 3 {
        return Err(Error::InvalidInput(
            "a line of P^2 has three coordinates".into(),
        ));
    }
    let rho = projective_normalize(rho)?;
    let mut augmented = vec![rho.clone()];
    augmented.extend(param.dual_points());
    let singular = !is_general_position(&augmented, 2)?;

    let (r1, r2, r3) = (&rho[0], &rho[1], &rho[2]);
    let zero = Rational::zero();
    let one = Rational::one();
    let mut raw = vec![
        vec![zero.clone(), one.clone()],
        vec![one.clone(), zero.clone()],
        vec![-r2.clone(), r1.clone()],
        vec![r3 - r2, r1 - r3],
    ];
    for row in param.rows() {
        let (l, m) = (&row[0], &row[1]);
        raw.push(vec![&(m * r3) - r2, r1 - &(l * r3)]);
    }
    let points = raw
        .into_iter()
        .map(|p| projective_normalize(&p).unwrap_or(p))
        .collect();

    let eta = if singular {
        None
    } else {
        // η₁ = ρ₂(ρ₃−ρ₁)/(ρ₁(ρ₃−ρ₂)), η_{i+1} = ρ₂(λ_iρ₃−ρ₁)/(ρ₁(μ_iρ₃−ρ₂)).
        let mut values = vec![vec![&(r2 * &(r3 - r1)) / &(r1 * &(r3 - r2))]];
        for row in param.rows() {
            let (l, m) = (&row[0], &row[1]);
            values.push(vec![&(r2 * &(&(l * r3) - r1)) / &(r1 * &(&(m * r3) - r2))]);
        }
        Some(StandardParameter::new(1, param.n(), values)?)
    };
    Ok(LineRestriction {
        rho,
        points,
        eta,
        singular,
    })
}

/// `α₁t₁² + α₂t₂² + α₃t₃² + α₄t₁t₂ + α₅t₁t₃ + α₆t₂t₃`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Conic {
    pub coefficients: [Rational; 6],
}

impl Conic {
    pub fn new(coefficients: [Rational; 6]) -> Self {
        Conic { coefficients }
    }

    /// The symmetric matrix `S` with `Q(t) = tᵀ S t`.
    pub fn matrix(&self) -> Matrix<Rational> {
        let [a1, a2, a3, a4, a5, a6] = &self.coefficients;
        let h = |x: &Rational| x / &Rational::from(2);
        Matrix::from_rows(vec![
            vec![a1.clone(), h(a4), h(a5)],
            vec![h(a4), a2.clone(), h(a6)],
            vec![h(a5), h(a6), a3.clone()],
        ])
        .unwrap()
    }

    /// The adjugate of [`Conic::matrix`], i.e. the dual conic.
    pub fn adjugate(&self) -> Matrix<Rational> {
        let s = self.matrix();
        let mut rows = vec![vec![Rational::zero(); 3]; 3];
        for (i, row) in rows.iter_mut().enumerate() {
            for (j, entry) in row.iter_mut().enumerate() {
                // adj(S)_{i,j} = (−1)^{i+j} minor_{j,i}
                let keep_r: Vec<usize> = (0..3).filter(|&r| r != j).collect();
                let keep_c: Vec<usize> = (0..3).filter(|&c| c != i).collect();
                let minor = s.submatrix(&keep_r, &keep_c).det().unwrap();
                *entry = if (i + j) % 2 == 0 { minor } else { -minor };
            }
        }
        Matrix::from_rows(rows).unwrap()
    }

    pub fn is_smooth(&self) -> bool {
        !self.matrix().det().unwrap().is_zero()
    }

    pub fn eval(&self, t: &[Rational]) -> Rational {
        quadratic_form(&self.matrix(), t)
    }
}

fn quadratic_form(m: &Matrix<Rational>, v: &[Rational]) -> Rational {
    let mv = m.mul_vec(v).unwrap();
    v.iter()
        .zip(&mv)
        .fold(Rational::zero(), |acc, (a, b)| acc + a * b)
}

/// The smooth conic tangent to `t₁ = 0`, `t₂ = 0`, `t₃ = 0` and
/// `t₁ + t₂ + t₃ = 0`:
/// `4t₁² + a²t₂² + (2−a)²t₃² + 4a t₁t₂ + 4(2−a) t₁t₃ − 2a(2−a) t₂t₃`.
pub fn tangent_conic(a: &Rational) -> Result<Conic> {
    let two = Rational::from(2);
    if a.is_zero() || *a == two {
        return Err(Error::InvalidInput(format!(
            "a = {a} gives a singular conic"
        )));
    }
    let b = &two - a;
    let four = Rational::from(4);
    Ok(Conic::new([
        four.clone(),
        a * a,
        &b * &b,
        &four * a,
        &four * &b,
        -(&(&two * a) * &b),
    ]))
}

/// Whether the line with dual point `rho` is tangent to the smooth conic.
pub fn is_tangent(rho: &[Rational], q: &Conic) -> bool {
    rho.len() == 3 && quadratic_form(&q.adjugate(), rho).is_zero()
}

/// The point where a tangent line touches the conic, `adj(S)·ρ`.
pub fn tangency_point(rho: &[Rational], q: &Conic) -> Option<Vec<Rational>> {
    if !is_tangent(rho, q) {
        return None;
    }
    projective_normalize(&q.adjugate().mul_vec(rho).ok()?).ok()
}

/// A rational tangent line from the pencil of dual-conic points through
/// `[1:0:0]`: the second intersection of the dual conic with the line of
/// dual points `[1:0:0] + u·(0, 1, s)`. `None` when the pencil line is
/// itself tangent to the dual conic.
pub fn rational_tangent_line(q: &Conic, s: &Rational) -> Option<Vec<Rational>> {
    let a = q.adjugate();
    let e1 = [Rational::one(), Rational::zero(), Rational::zero()];
    if !quadratic_form(&a, &e1).is_zero() {
        return None;
    }
    let v = [Rational::zero(), Rational::one(), s.clone()];
    let av = a.mul_vec(&v).ok()?;
    let cross: Rational = e1
        .iter()
        .zip(&av)
        .fold(Rational::zero(), |acc, (x, y)| acc + x * y);
    let vv = quadratic_form(&a, &v);
    if vv.is_zero() {
        return None;
    }
    let u = -(&(&Rational::from(2) * &cross) / &vv);
    let line: Vec<Rational> = e1.iter().zip(&v).map(|(x, y)| x + &(&u * y)).collect();
    projective_normalize(&line).ok()
}

/// Parameters read off the tangency points of a conic.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConicCurve {
    pub conic: Conic,
    /// Tangency points with `L₁(Λ), …, L_{n+1}(Λ)`.
    pub tangency_points: Vec<Vec<Rational>>,
    /// Coordinates of the tangency points on the conic, via the pencil of
    /// lines through the first one.
    pub conic_coordinates: Vec<Vec<Rational>>,
    /// Curve parameter in X_{n,1}; the first three tangency points anchor
    /// the frame.
    pub eta: StandardParameter,
}

/// The generalized Fermat curve parameter attached to Λ ∈ W_a.
pub fn conic_curve_parameters(a: &Rational, param: &StandardParameter) -> Result<ConicCurve> {
    if param.d() != 2 {
        return Err(Error::InvalidInput(
            "conic parameters need Λ in X_{n,2}".into(),
        ));
    }
    let q = tangent_conic(a)?;
    let lines = param.dual_points();
    let mut tangency_points = Vec::with_capacity(lines.len());
    for (j, rho) in lines.iter().enumerate() {
        let p = tangency_point(rho, &q).ok_or_else(|| {
            Error::Precondition(format!("line {} is not tangent to the conic", j + 1))
        })?;
        tangency_points.push(p);
    }
    let coords = pencil_coordinates(&q, &tangency_points);
    let (_, lambda) = normalize_points(&coords, 1)?;
    let eta = StandardParameter::new(1, param.n(), lambda)?;
    Ok(ConicCurve {
        conic: q,
        tangency_points,
        conic_coordinates: coords,
        eta,
    })
}

fn cross(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    vec![
        &(&a[1] * &b[2]) - &(&a[2] * &b[1]),
        &(&a[2] * &b[0]) - &(&a[0] * &b[2]),
        &(&a[0] * &b[1]) - &(&a[1] * &b[0]),
    ]
}

/// Coordinates `[s:t]` of points of the conic: the line through the base
/// point `P = points[0]` and `X` is `s·b₁ + t·b₂` for a fixed basis of
/// the lines through `P`; at `X = P` it is the tangent line `S·P`.
fn pencil_coordinates(q: &Conic, points: &[Vec<Rational>]) -> Vec<Vec<Rational>> {
    let base = &points[0];
    let pivot = base.iter().position(|x| !x.is_zero()).unwrap();
    // Lines ℓ with ℓ·P = 0, with ℓ_pivot solved from the other two entries.
    let free: Vec<usize> = (0..3).filter(|&i| i != pivot).collect();
    let s = q.matrix();
    points
        .iter()
        .map(|x| {
            let line = if x == base {
                s.mul_vec(base).unwrap()
            } else {
                cross(base, x)
            };
            let coords = vec![line[free[0]].clone(), line[free[1]].clone()];
            projective_normalize(&coords).expect("a line through P has free coordinates")
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arrangement::{normalize, Arrangement};

    fn q(p: i64) -> Rational {
        Rational::from(p)
    }

    fn r(p: i64, d: i64) -> Rational {
        Rational::new(p, d).unwrap()
    }

    #[test]
    fn kummer_example() {
        let alpha: Vec<Rational> = (0..6).map(q).collect();
        let p = kummer_parameters(&alpha).unwrap();
        assert_eq!(p.column(0), vec![r(3, 2), r(9, 5)]);
        assert_eq!(p.column(1), vec![r(4, 3), r(3, 2)]);
        let mut twice = alpha.clone();
        twice[1] = q(0);
        assert!(kummer_parameters(&twice).is_err());
    }

    /// The six lines `u_i = 0` on the plane `Σu = Σαu = Σα²u = 0` in P⁵.
    fn kummer_lines(alpha: &[Rational]) -> Vec<Vec<Rational>> {
        let rows: Vec<Vec<Rational>> = (0..3)
            .map(|p| alpha.iter().map(|a| a.pow(p)).collect())
            .collect();
        let v = Matrix::from_rows(rows).unwrap();
        let (rref, pivots) = v.rref();
        let free: Vec<usize> = (0..6).filter(|c| !pivots.contains(c)).collect();
        // Null-space basis vectors, one per free column.
        let basis: Vec<Vec<Rational>> = free
            .iter()
            .map(|&f| {
                let mut x = vec![Rational::zero(); 6];
                x[f] = Rational::one();
                for (row, &pc) in pivots.iter().enumerate() {
                    x[pc] = -rref.get(row, f).clone();
                }
                x
            })
            .collect();
        (0..6)
            .map(|i| basis.iter().map(|b| b[i].clone()).collect())
            .collect()
    }

    #[test]
    fn kummer_matches_normalized_lines() {
        let alpha: Vec<Rational> = [0, 1, 2, 3, 4, 5].into_iter().map(q).collect();
        let lines = kummer_lines(&alpha);
        let arr = Arrangement::new(2, lines).unwrap();
        assert_eq!(
            normalize(&arr).unwrap().parameter,
            kummer_parameters(&alpha).unwrap()
        );
        let alpha: Vec<Rational> = vec![r(-3, 2), q(7), r(1, 3), q(2), q(-5), r(11, 4)];
        let arr = Arrangement::new(2, kummer_lines(&alpha)).unwrap();
        assert_eq!(
            normalize(&arr).unwrap().parameter,
            kummer_parameters(&alpha).unwrap()
        );
    }

    #[test]
    fn line_restriction_matches_renormalized_points() {
        let p = StandardParameter::new(2, 5, vec![vec![r(3, 2), r(4, 3)], vec![r(9, 5), r(3, 2)]])
            .unwrap();
        let res = restrict_to_line(&p, &[q(1), q(2), q(5)]).unwrap();
        assert!(!res.singular);
        let (_, lambda) = normalize_points(&res.points, 1).unwrap();
        assert_eq!(res.eta.unwrap().rows(), &lambda[..]);
    }

    #[test]
    fn degenerate_line_is_singular() {
        let p = StandardParameter::new(2, 4, vec![vec![q(2), q(3)]]).unwrap();
        assert_eq!(
            restrict_to_line(&p, &[q(1), q(0), q(0)]),
            Err(Error::NotGeneralPosition)
        );
        let lenient = restrict_to_line_lenient(&p, &[q(1), q(1), q(1)]).unwrap();
        assert!(lenient.singular && lenient.eta.is_none());
        // passes through L₁ ∩ L₂ = [0:0:1]
        assert!(
            restrict_to_line_lenient(&p, &[q(1), q(1), q(0)])
                .unwrap()
                .singular
        );
    }

    #[test]
    fn tangent_conic_coefficients() {
        let c = tangent_conic(&q(1)).unwrap();
        assert_eq!(
            c.coefficients.to_vec(),
            vec![q(4), q(1), q(1), q(4), q(4), q(-2)]
        );
        assert!(tangent_conic(&q(0)).is_err());
        assert!(tangent_conic(&q(2)).is_err());
        assert!(c.is_smooth());
    }

    #[test]
    fn canonical_lines_are_tangent() {
        let canon = StandardParameter::fermat(2).dual_points();
        for a in [q(1), q(-1), r(1, 3), q(5), r(-7, 2)] {
            let c = tangent_conic(&a).unwrap();
            for l in &canon {
                assert!(is_tangent(l, &c), "a = {a}, line {l:?}");
                let p = tangency_point(l, &c).unwrap();
                assert!(c.eval(&p).is_zero());
            }
        }
    }

    #[test]
    fn t3_coefficient_four_plus_a_squared_is_not_tangent_to_t1() {
        let c = Conic::new([q(4), q(1), q(5), q(4), q(4), q(-2)]);
        assert!(!is_tangent(&[q(1), q(0), q(0)], &c));
    }

    #[test]
    fn hand_expanded_dual_conic() {
        // adj = [[0,-4,-4],[-4,0,8],[-4,8,0]] for a = 1
        let c = tangent_conic(&q(1)).unwrap();
        assert_eq!(
            c.adjugate().to_rows(),
            vec![
                vec![q(0), q(-4), q(-4)],
                vec![q(-4), q(0), q(8)],
                vec![q(-4), q(8), q(0)]
            ]
        );
        assert!(!is_tangent(&[q(0), q(1), q(-1)], &c));
        // a secant through two rational points of the conic
        let p1 = vec![q(0), q(1), q(1)];
        assert!(c.eval(&p1).is_zero());
        let p2 = tangency_point(&[q(0), q(1), q(0)], &c).unwrap();
        assert_ne!(p1, p2);
        assert!(!is_tangent(&cross(&p1, &p2), &c));
    }

    #[test]
    fn constructed_conic_example() {
        let a = q(1);
        let c = tangent_conic(&a).unwrap();
        let rows: Vec<Vec<Rational>> = [r(1, 2), q(3)]
            .iter()
            .map(|s| {
                let l = rational_tangent_line(&c, s).unwrap();
                assert!(is_tangent(&l, &c));
                let inv = l[2].recip().unwrap();
                vec![&l[0] * &inv, &l[1] * &inv]
            })
            .collect();
        let p = StandardParameter::new(2, 5, rows).unwrap();
        let curve = conic_curve_parameters(&a, &p).unwrap();
        assert_eq!(curve.eta.n(), 5);
        assert_eq!(curve.eta.rows().len(), 3);
        for pt in &curve.tangency_points {
            assert!(c.eval(pt).is_zero());
        }
        let three = conic_curve_parameters(&a, &StandardParameter::fermat(2)).unwrap();
        assert_eq!(three.tangency_points.len(), 4);
        assert_eq!(three.eta.rows().len(), 1);
    }

    #[test]
    fn non_tangent_line_reports_index() {
        let p = StandardParameter::new(2, 4, vec![vec![q(2), q(3)]]).unwrap();
        let err = conic_curve_parameters(&q(1), &p).unwrap_err();
        assert_eq!(
            err,
            Error::Precondition("line 5 is not tangent to the conic".into())
        );
    }
}
