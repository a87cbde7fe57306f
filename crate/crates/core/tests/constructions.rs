use genfermat::arrangement::{
    normalize, random_parameter, random_small_rational, Arrangement, StandardParameter,
};
use genfermat::constructions::{
    conic_curve_parameters, is_tangent, rational_tangent_line, restrict_to_line,
    restrict_to_line_lenient, tangent_conic, Conic,
};
use genfermat::exactfield::{solve_linear, Matrix, Rational};
use genfermat::modaction::{act, are_isomorphic, Permutation, DEFAULT_BUDGET};
use genfermat::{Error, Exec};
use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn cross(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    vec![
        &(&a[1] * &b[2]) - &(&a[2] * &b[1]),
        &(&a[2] * &b[0]) - &(&a[0] * &b[2]),
        &(&a[0] * &b[1]) - &(&a[1] * &b[0]),
    ]
}

/// A point of W_a with `extra` tangent lines beyond the canonical four.
fn tangent_parameter(
    a: &Rational,
    extra: usize,
    rng: &mut ChaCha8Rng,
) -> Option<StandardParameter> {
    let q = tangent_conic(a).ok()?;
    let mut rows = Vec::new();
    for _ in 0..50 {
        if rows.len() == extra {
            break;
        }
        let Some(line) = rational_tangent_line(&q, &random_small_rational(rng)) else {
            continue;
        };
        let Some(inv) = line[2].recip() else { continue };
        let row = vec![&line[0] * &inv, &line[1] * &inv];
        let mut candidate = rows.clone();
        candidate.push(row);
        if StandardParameter::new(2, 4 + candidate.len() - 1, candidate.clone()).is_ok() {
            rows = candidate;
        }
    }
    (rows.len() == extra).then(|| StandardParameter::new(2, 3 + extra, rows).unwrap())
}

/// Coordinates on the conic from the pencil of lines through `base`.
fn pencil_from(q: &Conic, base: &[Rational], points: &[Vec<Rational>]) -> Vec<Vec<Rational>> {
    let units: Vec<Vec<Rational>> = (0..3)
        .map(|i| (0..3).map(|j| Rational::from((i == j) as i64)).collect())
        .collect();
    let mut basis: Vec<Vec<Rational>> = Vec::new();
    for e in &units {
        let l = cross(base, e);
        let m = Matrix::from_columns(&[basis.clone(), vec![l.clone()]].concat()).unwrap();
        if m.rank() == basis.len() + 1 && basis.len() < 2 {
            basis.push(l);
        }
    }
    let b = Matrix::from_columns(&basis).unwrap();
    points
        .iter()
        .map(|x| {
            let line = if x.as_slice() == base {
                q.matrix().mul_vec(base).unwrap()
            } else {
                cross(base, x)
            };
            solve_linear(&b, &line)
                .unwrap()
                .solution()
                .unwrap()
                .to_vec()
        })
        .collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn restricted_lines_give_curve_parameters(
        seed in any::<u64>(),
        n in 3usize..=7,
        rho in proptest::collection::vec((-9i64..=9, 1i64..=4), 3),
    ) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let p = random_parameter(2, n, &mut rng);
        let rho: Vec<Rational> = rho.into_iter().map(|(a, b)| Rational::new(a, b).unwrap()).collect();
        prop_assume!(rho.iter().any(|x| !x.is_zero()));
        let lenient = restrict_to_line_lenient(&p, &rho).unwrap();
        prop_assert_eq!(lenient.points.len(), n + 1);
        match restrict_to_line(&p, &rho) {
            Ok(r) => {
                let eta = r.eta.unwrap();
                prop_assert_eq!((eta.d(), eta.n()), (1, n));
                let arr = Arrangement::new(1, r.points.clone()).unwrap();
                prop_assert_eq!(normalize(&arr).unwrap().parameter, eta);
            }
            Err(e) => {
                prop_assert!(matches!(e, Error::NotGeneralPosition));
                prop_assert!(lenient.singular && lenient.eta.is_none());
            }
        }
    }
}

#[test]
fn conic_parameters_do_not_depend_on_the_base_point() {
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    let mut checked = 0;
    while checked < 25 {
        let a = random_small_rational(&mut rng);
        let extra = rng.gen_range(1..=3);
        let Some(p) = tangent_parameter(&a, extra, &mut rng) else {
            continue;
        };
        let curve = conic_curve_parameters(&a, &p).unwrap();
        let q = tangent_conic(&a).unwrap();
        for rho in p.dual_points() {
            assert!(is_tangent(&rho, &q));
        }
        let base = curve.tangency_points[rng.gen_range(0..curve.tangency_points.len())].clone();
        let coords = pencil_from(&q, &base, &curve.tangency_points);
        let arr = Arrangement::new(1, coords.clone()).unwrap();
        assert_eq!(normalize(&arr).unwrap().parameter, curve.eta);

        // relabelling the lines relabels the points on the conic
        let mut images: Vec<usize> = (1..=p.n() + 1).collect();
        images.shuffle(&mut rng);
        let eta = Permutation::from_images(&images).unwrap();
        let order: Vec<usize> = (1..=p.n() + 1)
            .map(|i| eta.inverse().apply(i) - 1)
            .collect();
        let moved = normalize(&arr.reordered(&order)).unwrap().parameter;
        assert_eq!(moved, act(&eta, &curve.eta).unwrap());
        let iso = are_isomorphic(&curve.eta, &moved, None, DEFAULT_BUDGET, Exec::Parallel).unwrap();
        assert!(iso.isomorphic);
        checked += 1;
    }
}

#[test]
fn lines_off_the_conic_are_rejected() {
    let mut rng = ChaCha8Rng::seed_from_u64(22);
    let p = random_parameter(2, 5, &mut rng);
    let err = conic_curve_parameters(&Rational::from(3), &p).unwrap_err();
    assert!(matches!(err, Error::Precondition(_)));
}
