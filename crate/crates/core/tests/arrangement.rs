use genfermat::arrangement::{
    arrangement_of, is_general_position, is_standard_parameter, normalize, random_parameter,
    Arrangement, StandardParameter,
};
use genfermat::exactfield::{projective_normalize, Matrix, Rational};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn rational() -> impl Strategy<Value = Rational> {
    (-9i64..=9, 1i64..=5).prop_map(|(p, q)| Rational::new(p, q).unwrap())
}

fn invertible(m: usize) -> impl Strategy<Value = Matrix<Rational>> {
    proptest::collection::vec(rational(), m * m)
        .prop_map(move |e| Matrix::new(m, m, e).unwrap())
        .prop_filter("singular", |t| t.inverse().is_ok())
}

fn dims() -> impl Strategy<Value = (usize, usize)> {
    (1usize..=3).prop_flat_map(|d| (Just(d), d + 1..=d + 4))
}

fn q(n: i64) -> Rational {
    Rational::from(n)
}

fn det3(rows: [[&Rational; 3]; 3]) -> Rational {
    let m = Matrix::from_rows(
        rows.iter()
            .map(|r| r.iter().map(|x| (*x).clone()).collect())
            .collect(),
    )
    .unwrap();
    m.det().unwrap()
}

/// The usual determinant conditions for lines in general position.
fn determinant_conditions(delta: &[Rational], mu: &[Rational]) -> bool {
    let one = Rational::one();
    let m = delta.len();
    for i in 0..m {
        if delta[i] == mu[i] {
            return false;
        }
        for j in 0..m {
            if i == j {
                continue;
            }
            if &delta[i] * &mu[j] == &delta[j] * &mu[i] {
                return false;
            }
            if det3([
                [&one, &one, &one],
                [&delta[i], &mu[i], &one],
                [&delta[j], &mu[j], &one],
            ])
            .is_zero()
            {
                return false;
            }
            for l in 0..m {
                if l != i
                    && l != j
                    && det3([
                        [&delta[i], &mu[i], &one],
                        [&delta[j], &mu[j], &one],
                        [&delta[l], &mu[l], &one],
                    ])
                    .is_zero()
                {
                    return false;
                }
            }
        }
    }
    true
}

/// Conditions from the triples involving e₁, e₂, e₃ or (1,1,1) that the
/// determinant list leaves implicit.
fn coordinate_conditions(delta: &[Rational], mu: &[Rational]) -> bool {
    let (zero, one) = (Rational::zero(), Rational::one());
    let m = delta.len();
    (0..m).all(|i| {
        ![&zero, &one].contains(&&delta[i])
            && ![&zero, &one].contains(&&mu[i])
            && (0..m).all(|j| i == j || (delta[i] != delta[j] && mu[i] != mu[j]))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn normalization_is_projectively_invariant(
        (d, n) in dims(),
        seed in any::<u64>(),
        t in (1usize..=4).prop_flat_map(invertible),
        scales in proptest::collection::vec(rational(), 8),
    ) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        prop_assume!(t.rows() == d + 1);
        prop_assume!(scales.iter().all(|c| !c.is_zero()));
        let p = random_parameter(d, n, &mut rng);
        let moved = arrangement_of(&p).map_dual(&t).unwrap();
        // each dual point is only defined up to scale
        let rescaled: Vec<Vec<Rational>> = moved
            .points()
            .iter()
            .zip(scales.iter().cycle())
            .map(|(pt, c)| pt.iter().map(|x| x * c).collect())
            .collect();
        let arr = Arrangement::new(d, rescaled).unwrap();
        prop_assert_eq!(normalize(&arr).unwrap().parameter, p);
    }

    #[test]
    fn dual_map_recovers_the_canonical_arrangement(
        d in 1usize..=3,
        extra in 0usize..=3,
        entries in proptest::collection::vec(rational(), 64),
    ) {
        let n = d + 1 + extra;
        let points: Vec<Vec<Rational>> =
            (0..=n).map(|i| entries[i * (d + 1)..(i + 1) * (d + 1)].to_vec()).collect();
        prop_assume!(is_general_position(&points, d).unwrap_or(false));
        let arr = Arrangement::new(d, points.clone()).unwrap();
        let norm = normalize(&arr).unwrap();
        let canonical = norm.parameter.dual_points();
        for (p, c) in points.iter().zip(&canonical) {
            let image = norm.dual_map.mul_vec(p).unwrap();
            prop_assert_eq!(projective_normalize(&image).unwrap(), projective_normalize(c).unwrap());
        }
        prop_assert!(is_standard_parameter(d, n, norm.parameter.rows()));
    }

    #[test]
    fn general_position_is_order_independent(
        d in 1usize..=3,
        entries in proptest::collection::vec(-3i64..=3, 28),
        shift in 0usize..7,
    ) {
        let m = d + 3;
        let points: Vec<Vec<Rational>> =
            (0..m).map(|i| entries[i * (d + 1)..(i + 1) * (d + 1)].iter().map(|&x| q(x)).collect()).collect();
        prop_assume!(points.iter().all(|p| p.iter().any(|x| !x.is_zero())));
        let mut rotated = points.clone();
        rotated.rotate_left(shift % m);
        prop_assert_eq!(
            is_general_position(&points, d).unwrap(),
            is_general_position(&rotated, d).unwrap()
        );
    }
}

#[test]
fn plane_conditions_agree_with_general_position() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    use rand::Rng;
    let mut admitted_by_determinants_alone = 0;
    for case in 0..200 {
        let n = 4 + case % 3;
        let m = n - 3;
        // small entries so that degenerate tuples are common
        let mut draw = || Rational::new(rng.gen_range(-3..=4), rng.gen_range(1..=2)).unwrap();
        let delta: Vec<Rational> = (0..m).map(|_| draw()).collect();
        let mu: Vec<Rational> = (0..m).map(|_| draw()).collect();
        let lambda: Vec<Vec<Rational>> = (0..m)
            .map(|i| vec![delta[i].clone(), mu[i].clone()])
            .collect();
        let by_determinants = determinant_conditions(&delta, &mu);
        let full = by_determinants && coordinate_conditions(&delta, &mu);
        assert_eq!(is_standard_parameter(2, n, &lambda), full, "{lambda:?}");
        if by_determinants != full {
            admitted_by_determinants_alone += 1;
        }
    }
    assert!(admitted_by_determinants_alone > 0);
}

#[test]
fn determinant_conditions_alone_admit_a_coordinate_line() {
    // δ = 0 puts Λ₁ on the line through e₂ and e₃
    let (delta, mu) = (vec![q(0)], vec![q(3)]);
    assert!(determinant_conditions(&delta, &mu));
    assert!(!is_standard_parameter(2, 4, &[vec![q(0), q(3)]]));
}

#[test]
fn serde_round_trip() {
    let p = StandardParameter::new(2, 5, vec![vec![q(2), q(3)], vec![q(5), q(7)]]).unwrap();
    let json = serde_json::to_string(&p).unwrap();
    assert_eq!(serde_json::from_str::<StandardParameter>(&json).unwrap(), p);
    let bad = r#"{"d":2,"n":4,"lambda":[["1","1"]]}"#;
    assert!(serde_json::from_str::<StandardParameter>(bad).is_err());
}
