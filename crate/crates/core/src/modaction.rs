//! The action of the symmetric group S_{n+1} on standard parameters.
//!
//! `act(η, Λ)` reorders the hyperplanes of `arrangement_of(Λ)` so that
//! position `j` holds hyperplane `η⁻¹(j)` and renormalizes. Products follow
//! the left-multiplication convention: `η.then(ρ)` applies `η` first, and
//! `act(η.then(ρ), Λ) = act(ρ, act(η, Λ))`.

use std::fmt;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::arrangement::{normalize_points, random_parameter, StandardParameter};
use crate::error::{Error, Result};
use crate::exactfield::Rational;
use crate::par::{self, Exec};

/// Default cap on the number of enumerated permutations or group elements.
pub const DEFAULT_BUDGET: u128 = 1_000_000;

/// `m!`, saturating at `u128::MAX`.
pub fn factorial(m: usize) -> u128 {
    (1..=m as u128).fold(1u128, |acc, x| acc.saturating_mul(x))
}

pub(crate) fn check_budget(needed: u128, budget: u128) -> Result<()> {
    if needed > budget {
        Err(Error::BudgetExceeded { needed, budget })
    } else {
        Ok(())
    }
}

/// A bijection of `{1, …, m}`, serialized in one-line image notation.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation {
    // zero-based images
    images: Vec<usize>,
}

impl Permutation {
    pub fn identity(m: usize) -> Self {
        Permutation {
            images: (0..m).collect(),
        }
    }

    /// From one-based images `[η(1), …, η(m)]`.
    pub fn from_images(images: &[usize]) -> Result<Self> {
        let m = images.len();
        let mut seen = vec![false; m];
        for &x in images {
            if x == 0 || x > m || seen[x - 1] {
                return Err(Error::InvalidInput(format!(
                    "{images:?} is not a permutation of 1..={m}"
                )));
            }
            seen[x - 1] = true;
        }
        Ok(Permutation {
            images: images.iter().map(|x| x - 1).collect(),
        })
    }

    /// From disjoint cycles in one-based notation, e.g. `[[1, 2], [3, 4]]`.
    pub fn from_cycles(m: usize, cycles: &[&[usize]]) -> Result<Self> {
        let mut images: Vec<usize> = (0..m).collect();
        let mut moved = vec![false; m];
        for cycle in cycles {
            for (pos, &a) in cycle.iter().enumerate() {
                let b = cycle[(pos + 1) % cycle.len()];
                if a == 0 || a > m || b == 0 || b > m || moved[a - 1] {
                    return Err(Error::InvalidInput(format!(
                        "bad cycle {cycle:?} for m={m}"
                    )));
                }
                moved[a - 1] = true;
                images[a - 1] = b - 1;
            }
        }
        Ok(Permutation { images })
    }

    /// The transposition `(a b)`, one-based.
    pub fn transposition(m: usize, a: usize, b: usize) -> Self {
        Permutation::from_cycles(m, &[&[a, b]]).expect("transposition out of range")
    }

    /// The long cycle `(1 2 … m)`.
    pub fn long_cycle(m: usize) -> Self {
        Permutation {
            images: (0..m).map(|i| (i + 1) % m).collect(),
        }
    }

    pub fn degree(&self) -> usize {
        self.images.len()
    }

    /// One-based image of a one-based point.
    pub fn apply(&self, i: usize) -> usize {
        self.images[i - 1] + 1
    }

    pub fn images(&self) -> Vec<usize> {
        self.images.iter().map(|x| x + 1).collect()
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &x)| i == x)
    }

    pub fn inverse(&self) -> Self {
        let mut inv = vec![0; self.images.len()];
        for (i, &x) in self.images.iter().enumerate() {
            inv[x] = i;
        }
        Permutation { images: inv }
    }

    /// The product `self · other` that applies `self` first.
    pub fn then(&self, other: &Permutation) -> Permutation {
        assert_eq!(self.degree(), other.degree(), "permutation degrees differ");
        Permutation {
            images: self.images.iter().map(|&x| other.images[x]).collect(),
        }
    }

    /// Position in the lexicographic order of image sequences.
    pub fn rank(&self) -> u128 {
        let m = self.images.len();
        let mut rank = 0u128;
        for i in 0..m {
            let smaller = self.images[i + 1..]
                .iter()
                .filter(|&&x| x < self.images[i])
                .count();
            rank += smaller as u128 * factorial(m - 1 - i);
        }
        rank
    }

    /// Inverse of [`Permutation::rank`].
    pub fn unrank(m: usize, mut rank: u128) -> Self {
        assert!(rank < factorial(m), "rank out of range");
        let mut available: Vec<usize> = (0..m).collect();
        let mut images = Vec::with_capacity(m);
        for i in 0..m {
            let f = factorial(m - 1 - i);
            let idx = (rank / f) as usize;
            rank %= f;
            images.push(available.remove(idx));
        }
        Permutation { images }
    }

    /// Disjoint cycles of length at least two, one-based, each starting at
    /// its smallest point.
    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.images.len()];
        let mut out = Vec::new();
        for start in 0..self.images.len() {
            if seen[start] || self.images[start] == start {
                continue;
            }
            let mut cycle = Vec::new();
            let mut x = start;
            while !seen[x] {
                seen[x] = true;
                cycle.push(x + 1);
                x = self.images[x];
            }
            out.push(cycle);
        }
        out
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cycles = self.cycles();
        if cycles.is_empty() {
            return write!(f, "e");
        }
        for c in cycles {
            let parts: Vec<String> = c.iter().map(ToString::to_string).collect();
            write!(f, "({})", parts.join(" "))?;
        }
        Ok(())
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl Serialize for Permutation {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.images().serialize(s)
    }
}

impl<'de> Deserialize<'de> for Permutation {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let images = Vec::<usize>::deserialize(d)?;
        Permutation::from_images(&images).map_err(serde::de::Error::custom)
    }
}

fn check_degree(eta: &Permutation, param: &StandardParameter) -> Result<()> {
    if eta.degree() != param.n() + 1 {
        return Err(Error::InvalidInput(format!(
            "permutation of degree {} does not act on X_{{{},{}}}",
            eta.degree(),
            param.n(),
            param.d()
        )));
    }
    Ok(())
}

fn act_on_points(
    eta: &Permutation,
    points: &[Vec<Rational>],
    param: &StandardParameter,
) -> StandardParameter {
    let inv = eta.inverse();
    let reordered: Vec<Vec<Rational>> = inv.images.iter().map(|&i| points[i].clone()).collect();
    let (_, lambda) = normalize_points(&reordered, param.d())
        .expect("a reordering of a general-position arrangement is in general position");
    StandardParameter::from_table(param.d(), param.n(), lambda).expect("shape is preserved")
}

/// `R_η(Λ)` by reorder-and-renormalize.
pub fn act(eta: &Permutation, param: &StandardParameter) -> Result<StandardParameter> {
    check_degree(eta, param)?;
    Ok(act_on_points(eta, &param.dual_points(), param))
}

/// `R_{(1 2)}`: swaps the first two columns when `d ≥ 2`.
///
/// For `d = 1` there is no column to swap with and the image is computed by
/// renormalization.
pub fn act_sigma1(param: &StandardParameter) -> StandardParameter {
    if param.d() == 1 {
        return act_on_points(
            &Permutation::transposition(param.n() + 1, 1, 2),
            &param.dual_points(),
            param,
        );
    }
    let lambda = param
        .rows()
        .iter()
        .map(|row| {
            let mut r = row.clone();
            r.swap(0, 1);
            r
        })
        .collect();
    StandardParameter::from_table(param.d(), param.n(), lambda).unwrap()
}

/// `R_{(1 2 … n+1)}` by the closed formulas.
pub fn act_sigma2(param: &StandardParameter) -> StandardParameter {
    let d = param.d();
    let rows = param.rows();
    let Some(last) = rows.last() else {
        return param.clone();
    };
    let one = Rational::one();
    let ld = &last[d - 1];
    let mut out = Vec::with_capacity(rows.len());

    let mut first = Vec::with_capacity(d);
    first.push(ld / &(ld - &one));
    for j in 1..d {
        let lj = &last[j - 1];
        first.push(&(ld * &(lj - &one)) / &(lj * &(ld - &one)));
    }
    out.push(first);

    for row in &rows[..rows.len() - 1] {
        let mut r = Vec::with_capacity(d);
        r.push(ld / &(ld - &row[d - 1]));
        for j in 1..d {
            let lj = &last[j - 1];
            r.push(&(ld * &(lj - &row[j - 1])) / &(lj * &(ld - &row[d - 1])));
        }
        out.push(r);
    }
    StandardParameter::from_table(d, param.n(), out).unwrap()
}

/// Orbit of a parameter under S_{n+1} and its stabilizer in S_{n+1}.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrbitReport {
    pub base: StandardParameter,
    /// Distinct orbit elements in increasing order.
    pub elements: Vec<StandardParameter>,
    /// Stabilizer in S_{n+1}, including the kernel of the action.
    pub stabilizer: Vec<Permutation>,
    /// Set for `(n, d) = (3, 1)`, where the Klein four-group acts trivially.
    pub kernel_is_klein: bool,
}

impl OrbitReport {
    pub fn orbit_size(&self) -> usize {
        self.elements.len()
    }

    pub fn stabilizer_order(&self) -> usize {
        self.stabilizer.len()
    }
}

fn enumerate_orbit(
    param: &StandardParameter,
    budget: u128,
    exec: Exec,
) -> Result<Vec<StandardParameter>> {
    let m = param.n() + 1;
    let total = factorial(m);
    check_budget(total, budget)?;
    let points = param.dual_points();
    Ok(par::map_range(exec, total as usize, |r| {
        act_on_points(&Permutation::unrank(m, r as u128), &points, param)
    }))
}

/// Enumerates `act(η, Λ)` over all of S_{n+1}.
pub fn orbit_and_stabilizer(
    param: &StandardParameter,
    budget: u128,
    exec: Exec,
) -> Result<OrbitReport> {
    let m = param.n() + 1;
    let images = enumerate_orbit(param, budget, exec)?;
    let stabilizer = images
        .iter()
        .enumerate()
        .filter(|(_, img)| *img == param)
        .map(|(r, _)| Permutation::unrank(m, r as u128))
        .collect();
    let mut elements = images;
    elements.sort();
    elements.dedup();
    Ok(OrbitReport {
        base: param.clone(),
        elements,
        stabilizer,
        kernel_is_klein: (param.n(), param.d()) == (3, 1),
    })
}

/// Permutations fixing every sampled parameter.
///
/// Exact for `(n, d) = (3, 1)` (the Klein four-group) and for `n = d+1`
/// (the whole group, since X is a point); otherwise the intersection of
/// the stabilizers of `samples` random parameters.
pub fn kernel_of_r<R: Rng + ?Sized>(
    n: usize,
    d: usize,
    samples: usize,
    rng: &mut R,
    budget: u128,
    exec: Exec,
) -> Result<Vec<Permutation>> {
    if d == 0 || n < d + 1 {
        return Err(Error::InvalidInput(format!(
            "need n >= d+1 >= 2, got n={n}, d={d}"
        )));
    }
    let m = n + 1;
    check_budget(factorial(m), budget)?;
    if (n, d) == (3, 1) {
        let mut klein = vec![
            Permutation::identity(4),
            Permutation::from_cycles(4, &[&[1, 2], &[3, 4]])?,
            Permutation::from_cycles(4, &[&[1, 3], &[2, 4]])?,
            Permutation::from_cycles(4, &[&[1, 4], &[2, 3]])?,
        ];
        klein.sort();
        return Ok(klein);
    }
    if n == d + 1 {
        return Ok((0..factorial(m))
            .map(|r| Permutation::unrank(m, r))
            .collect());
    }
    let first = random_parameter(d, n, rng);
    let mut kernel = orbit_and_stabilizer(&first, budget, exec)?.stabilizer;
    for _ in 1..samples.max(1) {
        let p = random_parameter(d, n, rng);
        let points = p.dual_points();
        kernel.retain(|eta| act_on_points(eta, &points, &p) == p);
    }
    Ok(kernel)
}

/// Whether `(d; k, n)` is one of the two pairs whose automorphism group is
/// infinite, so that orbit data describes only linear automorphisms.
pub fn is_exceptional(d: usize, k: u32, n: usize) -> bool {
    matches!((d, k, n), (2, 2, 5) | (2, 4, 3))
}

/// Result of [`are_isomorphic`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IsomorphismReport {
    pub isomorphic: bool,
    /// The first `η` in lexicographic order with `act(η, a) = b`.
    pub witness: Option<Permutation>,
    /// The verdict concerns linear automorphisms only.
    pub linear_category: bool,
}

/// Orbit membership of `b` in the orbit of `a`.
pub fn are_isomorphic(
    a: &StandardParameter,
    b: &StandardParameter,
    k: Option<u32>,
    budget: u128,
    exec: Exec,
) -> Result<IsomorphismReport> {
    if (a.d(), a.n()) != (b.d(), b.n()) {
        return Err(Error::InvalidInput(
            "parameters live in different spaces".into(),
        ));
    }
    let m = a.n() + 1;
    let total = factorial(m);
    check_budget(total, budget)?;
    let points = a.dual_points();
    let witness = par::find_first(exec, total as usize, |r| {
        let eta = Permutation::unrank(m, r as u128);
        (act_on_points(&eta, &points, a) == *b).then_some(eta)
    });
    Ok(IsomorphismReport {
        isomorphic: witness.is_some(),
        witness,
        linear_category: k.is_some_and(|k| is_exceptional(a.d(), k, a.n())),
    })
}

/// The lexicographically least element of the orbit.
pub fn canonical_representative(
    param: &StandardParameter,
    budget: u128,
    exec: Exec,
) -> Result<StandardParameter> {
    Ok(enumerate_orbit(param, budget, exec)?
        .into_iter()
        .min()
        .expect("orbits are nonempty"))
}
