//! Generalized Fermat manifolds M_n^k(Λ) and the group H₀ ≅ Z_kⁿ.
//!
//! H₀ is generated by the coordinate multipliers φ_j (x_j ↦ ζ_k x_j) subject
//! to φ₁⋯φ_{n+1} = 1, so an element is an exponent vector in Z_k^{n+1}
//! modulo the diagonal. Elements are stored with last exponent 0.

use std::collections::BTreeSet;
use std::fmt;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::arrangement::StandardParameter;
use crate::error::{Error, Result};
use crate::exactfield::{
    all_minors_nonzero, solve_linear, Cyclotomic, Field, LinearSolution, Matrix, Rational,
};
use crate::modaction::{check_budget, is_exceptional, orbit_and_stabilizer, Permutation};
use crate::par::{self, Exec};

/// Type `(d; k, n)`: dimension, degree, and `n+1` branch hyperplanes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "GfmTypeRepr", into = "GfmTypeRepr")]
pub struct GfmType {
    d: usize,
    k: u32,
    n: usize,
}

#[derive(Serialize, Deserialize)]
struct GfmTypeRepr {
    d: usize,
    k: u32,
    n: usize,
}

impl TryFrom<GfmTypeRepr> for GfmType {
    type Error = Error;
    fn try_from(r: GfmTypeRepr) -> Result<Self> {
        GfmType::new(r.d, r.k, r.n)
    }
}

impl From<GfmType> for GfmTypeRepr {
    fn from(t: GfmType) -> Self {
        GfmTypeRepr {
            d: t.d,
            k: t.k,
            n: t.n,
        }
    }
}

impl GfmType {
    pub fn new(d: usize, k: u32, n: usize) -> Result<Self> {
        if d == 0 {
            return Err(Error::InvalidInput("dimension must be at least 1".into()));
        }
        if k < 2 {
            return Err(Error::InvalidInput(format!(
                "degree must be at least 2, got {k}"
            )));
        }
        if n < d + 1 {
            return Err(Error::InvalidInput(format!(
                "type ({d};{k},{n}) needs n >= d+1; use classify_low_n for n <= d"
            )));
        }
        Ok(GfmType { d, k, n })
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn n(&self) -> usize {
        self.n
    }
}

impl fmt::Display for GfmType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({};{},{})", self.d, self.k, self.n)
    }
}

/// An element of H₀ as exponents `(m₁, …, m_{n+1})` mod `k`, last one 0.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "GroupElementRepr", into = "GroupElementRepr")]
pub struct GroupElement {
    k: u32,
    exponents: Vec<u32>,
}

#[derive(Serialize, Deserialize)]
struct GroupElementRepr {
    k: u32,
    exponents: Vec<i64>,
}

impl TryFrom<GroupElementRepr> for GroupElement {
    type Error = Error;
    fn try_from(r: GroupElementRepr) -> Result<Self> {
        GroupElement::new(r.k, &r.exponents)
    }
}

impl From<GroupElement> for GroupElementRepr {
    fn from(g: GroupElement) -> Self {
        GroupElementRepr {
            k: g.k,
            exponents: g.exponents.iter().map(|&e| e as i64).collect(),
        }
    }
}

impl GroupElement {
    /// Reduces the exponents mod `k` and shifts by the diagonal.
    pub fn new(k: u32, exponents: &[i64]) -> Result<Self> {
        if k < 2 {
            return Err(Error::InvalidInput(format!(
                "modulus must be at least 2, got {k}"
            )));
        }
        if exponents.len() < 2 {
            return Err(Error::InvalidInput("need at least two exponents".into()));
        }
        let shift = *exponents.last().unwrap();
        Ok(GroupElement {
            k,
            exponents: exponents
                .iter()
                .map(|&e| (e - shift).rem_euclid(k as i64) as u32)
                .collect(),
        })
    }

    pub fn identity(k: u32, n: usize) -> Self {
        GroupElement {
            k,
            exponents: vec![0; n + 1],
        }
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    /// `n`, one less than the number of exponents.
    pub fn n(&self) -> usize {
        self.exponents.len() - 1
    }

    pub fn exponents(&self) -> &[u32] {
        &self.exponents
    }

    pub fn is_identity(&self) -> bool {
        self.exponents.iter().all(|&e| e == 0)
    }

    fn check_compatible(&self, other: &Self) {
        assert!(
            self.k == other.k && self.exponents.len() == other.exponents.len(),
            "group elements from different groups"
        );
    }

    pub fn mul(&self, other: &Self) -> Self {
        self.check_compatible(other);
        GroupElement {
            k: self.k,
            exponents: self
                .exponents
                .iter()
                .zip(&other.exponents)
                .map(|(a, b)| (a + b) % self.k)
                .collect(),
        }
    }

    pub fn inverse(&self) -> Self {
        GroupElement {
            k: self.k,
            exponents: self
                .exponents
                .iter()
                .map(|&a| (self.k - a) % self.k)
                .collect(),
        }
    }

    pub fn pow(&self, e: u64) -> Self {
        let e = (e % self.k as u64) as u32;
        GroupElement {
            k: self.k,
            exponents: self.exponents.iter().map(|&a| (a * e) % self.k).collect(),
        }
    }

    /// Index sets `L_l = {j : m_j = l}` (one-based), for `l = 0, …, k−1`.
    pub fn level_sets(&self) -> Vec<Vec<usize>> {
        let mut levels = vec![Vec::new(); self.k as usize];
        for (j, &m) in self.exponents.iter().enumerate() {
            levels[m as usize].push(j + 1);
        }
        levels
    }

    /// A uniformly random element.
    pub fn random<R: Rng + ?Sized>(k: u32, n: usize, rng: &mut R) -> Self {
        let mut exponents: Vec<u32> = (0..n).map(|_| rng.gen_range(0..k)).collect();
        exponents.push(0);
        GroupElement { k, exponents }
    }

    /// Every element of H₀ in increasing order.
    pub fn all(k: u32, n: usize, budget: u128) -> Result<Vec<GroupElement>> {
        let total = (k as u128)
            .checked_pow(n as u32)
            .ok_or(Error::BudgetExceeded {
                needed: u128::MAX,
                budget,
            })?;
        check_budget(total, budget)?;
        let mut out = Vec::with_capacity(total as usize);
        let mut digits = vec![0u32; n + 1];
        for _ in 0..total {
            out.push(GroupElement {
                k,
                exponents: digits.clone(),
            });
            for j in (0..n).rev() {
                digits[j] += 1;
                if digits[j] < k {
                    break;
                }
                digits[j] = 0;
            }
        }
        Ok(out)
    }
}

impl fmt::Display for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let e: Vec<String> = self.exponents.iter().map(ToString::to_string).collect();
        write!(f, "({}) mod {}", e.join(","), self.k)
    }
}

impl fmt::Debug for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// `φ₁, …, φ_{n+1}`.
pub fn canonical_generators(k: u32, n: usize) -> Result<Vec<GroupElement>> {
    (0..=n)
        .map(|j| {
            let mut e = vec![0i64; n + 1];
            e[j] = 1;
            GroupElement::new(k, &e)
        })
        .collect()
}

/// The `n−d` diagonal forms cutting out M_n^k(Λ) in P^n.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EquationSystem {
    pub k: u32,
    /// Sparse rows of `(variable, coefficient)` for the monomials `x_i^k`,
    /// variables one-based.
    pub forms: Vec<Vec<(usize, Rational)>>,
    pub coefficient_matrix: Matrix<Rational>,
}

impl EquationSystem {
    /// Readable polynomial text, one string per form.
    pub fn render(&self) -> Vec<String> {
        self.forms
            .iter()
            .map(|form| {
                let mut out = String::new();
                for (pos, (var, c)) in form.iter().enumerate() {
                    let neg = c < &Rational::zero();
                    let mag = c.abs();
                    match (pos, neg) {
                        (0, true) => out.push('-'),
                        (0, false) => {}
                        (_, true) => out.push_str(" - "),
                        (_, false) => out.push_str(" + "),
                    }
                    if !mag.is_one() {
                        out.push_str(&format!("{mag}*"));
                    }
                    out.push_str(&format!("x{var}^{}", self.k));
                }
                out
            })
            .collect()
    }
}

/// Equations for a table that is only checked for shape.
///
/// Row 0 is `x₁^k + ⋯ + x_{d+2}^k`; row `i` is
/// `λ_{i,1}x₁^k + ⋯ + λ_{i,d}x_d^k + x_{d+1}^k + x_{d+2+i}^k`.
pub fn equations_for_table(
    d: usize,
    n: usize,
    k: u32,
    lambda: &[Vec<Rational>],
) -> Result<EquationSystem> {
    if k < 2 {
        return Err(Error::InvalidInput(format!(
            "degree must be at least 2, got {k}"
        )));
    }
    let p = StandardParameter::from_table(d, n, lambda.to_vec())?;
    let mut rows = Vec::with_capacity(n - d);
    let mut first = vec![Rational::zero(); n + 1];
    for c in first.iter_mut().take(d + 2) {
        *c = Rational::one();
    }
    rows.push(first);
    for (i, lam) in p.rows().iter().enumerate() {
        let mut row = vec![Rational::zero(); n + 1];
        row[..d].clone_from_slice(lam);
        row[d] = Rational::one();
        row[d + 2 + i] = Rational::one();
        rows.push(row);
    }
    let forms = rows
        .iter()
        .map(|row| {
            row.iter()
                .enumerate()
                .filter(|(_, c)| !c.is_zero())
                .map(|(j, c)| (j + 1, c.clone()))
                .collect()
        })
        .collect();
    Ok(EquationSystem {
        k,
        forms,
        coefficient_matrix: Matrix::from_rows(rows)?,
    })
}

/// The defining equations of M_n^k(Λ).
pub fn equations(param: &StandardParameter, k: u32) -> Result<EquationSystem> {
    let checked = StandardParameter::new(param.d(), param.n(), param.rows().to_vec())?;
    equations_for_table(checked.d(), checked.n(), k, checked.rows())
}

/// Whether every maximal minor of the coefficient matrix is nonzero, the
/// condition for a smooth complete intersection.
pub fn smoothness_certificate(sys: &EquationSystem) -> bool {
    let m = &sys.coefficient_matrix;
    m.rows() <= m.cols() && all_minors_nonzero(m, m.rows()).unwrap_or(false)
}

/// One component of a fixed-point set.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FixedComponent {
    pub level: u32,
    /// The coordinates left free on the component, one-based.
    pub indices: Vec<usize>,
    pub dimension: usize,
    /// The component is a generalized Fermat manifold of type
    /// `(dimension; k, n_prime)`, or `k^{n_prime}` points in dimension 0.
    pub n_prime: usize,
    pub point_count: Option<u128>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FixedLocusReport {
    pub element: GroupElement,
    pub gfm_type: GfmType,
    pub components: Vec<FixedComponent>,
}

fn check_element(g: &GroupElement, t: &GfmType) -> Result<()> {
    if g.k != t.k || g.n() != t.n {
        return Err(Error::InvalidInput(format!(
            "element {g} does not belong to H0 of type {t}"
        )));
    }
    Ok(())
}

/// Fixed points of `g` on any M of type `t`.
///
/// A point is fixed iff its nonzero coordinates all share one exponent
/// level, so each large level set `L_l` contributes the slice of M on
/// which the other coordinates vanish.
pub fn fixed_locus(g: &GroupElement, t: &GfmType) -> Result<FixedLocusReport> {
    check_element(g, t)?;
    let threshold = t.n + 1 - t.d;
    let components = g
        .level_sets()
        .into_iter()
        .enumerate()
        .filter(|(_, set)| set.len() >= threshold)
        .map(|(l, indices)| {
            let dimension = indices.len() - threshold;
            let n_prime = indices.len() - 1;
            FixedComponent {
                level: l as u32,
                point_count: (dimension == 0).then(|| (t.k as u128).pow(n_prime as u32)),
                indices,
                dimension,
                n_prime,
            }
        })
        .collect();
    Ok(FixedLocusReport {
        element: g.clone(),
        gfm_type: *t,
        components,
    })
}

/// Whether `g` has no fixed points: every level set has at most `n−d`
/// members.
pub fn acts_freely(g: &GroupElement, t: &GfmType) -> Result<bool> {
    check_element(g, t)?;
    Ok(g.level_sets().iter().all(|s| s.len() <= t.n - t.d))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FreenessReport {
    pub acts_freely: bool,
    pub order: u128,
    /// The least nontrivial element with a fixed point, when one exists.
    pub offending: Option<GroupElement>,
}

/// All elements of the subgroup generated by `generators`, sorted.
pub fn subgroup_elements(
    generators: &[GroupElement],
    k: u32,
    n: usize,
    budget: u128,
) -> Result<Vec<GroupElement>> {
    let id = GroupElement::identity(k, n);
    for g in generators {
        if g.k != k || g.n() != n {
            return Err(Error::InvalidInput(format!(
                "generator {g} is not in Z_{k}^{n}"
            )));
        }
    }
    let mut seen: BTreeSet<GroupElement> = BTreeSet::from([id.clone()]);
    let mut frontier = vec![id];
    while let Some(x) = frontier.pop() {
        for g in generators {
            let y = x.mul(g);
            if seen.insert(y.clone()) {
                check_budget(seen.len() as u128, budget)?;
                frontier.push(y);
            }
        }
    }
    Ok(seen.into_iter().collect())
}

/// Whether every nontrivial element of the generated subgroup acts freely.
pub fn subgroup_acts_freely(
    generators: &[GroupElement],
    t: &GfmType,
    budget: u128,
    exec: Exec,
) -> Result<FreenessReport> {
    let elements = subgroup_elements(generators, t.k, t.n, budget)?;
    let limit = t.n - t.d;
    let fixed = par::map_slice(exec, &elements, |g| {
        !g.is_identity() && g.level_sets().iter().any(|s| s.len() > limit)
    });
    let offending = elements
        .iter()
        .zip(fixed)
        .find(|(_, f)| *f)
        .map(|(g, _)| g.clone());
    Ok(FreenessReport {
        acts_freely: offending.is_none(),
        order: elements.len() as u128,
        offending,
    })
}

/// The necessary condition `n+1 ≤ (p^r − 1)/(p − 1)` for a subgroup
/// `Z_p^{n−r}` of `Z_pⁿ` to act freely.
pub fn bound_feasible(p: u32, r: u32, n: usize) -> bool {
    let p = p as u128;
    match p.checked_pow(r) {
        Some(pr) => (n as u128 + 1) * (p - 1) < pr,
        None => true,
    }
}

/// Normalized functionals `c` on Z_p^{n+1} with `Σ c_j = 0` and first
/// nonzero entry 1; their kernels are exactly the index-`p` subgroups of
/// H₀ when `p` is prime.
pub fn index_p_functionals(p: u32, n: usize) -> Vec<Vec<u32>> {
    let mut out = Vec::new();
    let total = (p as u64).pow(n as u32 + 1);
    for code in 0..total {
        let mut c = Vec::with_capacity(n + 1);
        let mut x = code;
        for _ in 0..=n {
            c.push((x % p as u64) as u32);
            x /= p as u64;
        }
        c.reverse();
        let first = c.iter().find(|&&v| v != 0);
        if first == Some(&1) && c.iter().map(|&v| v as u64).sum::<u64>() % p as u64 == 0 {
            out.push(c);
        }
    }
    out
}

/// Elements `g` of H₀ (modulus `p`) with `Σ c_j m_j ≡ 0`.
pub fn functional_kernel(c: &[u32], p: u32, n: usize, budget: u128) -> Result<Vec<GroupElement>> {
    if c.len() != n + 1 {
        return Err(Error::InvalidInput(
            "functional has the wrong length".into(),
        ));
    }
    Ok(GroupElement::all(p, n, budget)?
        .into_iter()
        .filter(|g| {
            g.exponents
                .iter()
                .zip(c)
                .map(|(&m, &cj)| m as u64 * cj as u64)
                .sum::<u64>()
                % p as u64
                == 0
        })
        .collect())
}

/// The nonzero pattern of a monomial matrix: `pattern[i]` is the column of
/// the single nonzero entry in row `i`.
pub fn monomial_pattern<F: Field>(a: &Matrix<F>) -> Option<Vec<usize>> {
    if !a.is_square() {
        return None;
    }
    let mut pattern = Vec::with_capacity(a.rows());
    let mut used = vec![false; a.cols()];
    for i in 0..a.rows() {
        let mut nz = (0..a.cols()).filter(|&j| !a.get(i, j).is_zero());
        let j = nz.next()?;
        if nz.next().is_some() || used[j] {
            return None;
        }
        used[j] = true;
        pattern.push(j);
    }
    Some(pattern)
}

/// The permutation of the branch hyperplanes induced by a monomial matrix.
///
/// The matrix sends `x ↦ y` with `y_i = a_{i,π(i)} x_{π(i)}`, so the
/// coordinate hyperplane `x_j = 0`, which lies over `L_j`, goes to
/// `y_{π⁻¹(j)} = 0`.
pub fn induced_permutation<F: Field>(a: &Matrix<F>) -> Option<Permutation> {
    let pattern = monomial_pattern(a)?;
    let one_based: Vec<usize> = pattern.iter().map(|j| j + 1).collect();
    Some(Permutation::from_images(&one_based).ok()?.inverse())
}

/// Whether the projective map of `a` preserves M_n^k(Λ).
///
/// `a` must be monomial, and each transformed form `f_i ∘ a` must be a
/// linear combination of the defining forms. Entries may lie in any
/// cyclotomic field.
pub fn is_linear_automorphism(
    a: &Matrix<Cyclotomic>,
    param: &StandardParameter,
    k: u32,
) -> Result<bool> {
    let m = param.n() + 1;
    if !a.is_square() || a.rows() != m {
        return Err(Error::InvalidInput(format!("matrix must be {m}x{m}")));
    }
    if a.det()?.is_zero() {
        return Err(Error::Singular);
    }
    let sys = equations(param, k)?;
    let Some(pattern) = monomial_pattern(a) else {
        return Ok(false);
    };
    let field = a.get(0, pattern[0]).field().clone();
    let lift = |r: &Rational| field.rational(r.clone());
    let c = &sys.coefficient_matrix;
    let span = Matrix::from_rows(
        (0..c.cols())
            .map(|j| (0..c.rows()).map(|i| lift(c.get(i, j))).collect())
            .collect(),
    )?;
    let powers: Vec<Cyclotomic> = (0..m).map(|i| a.get(i, pattern[i]).pow(k as u64)).collect();
    for row in 0..c.rows() {
        let mut target = vec![field.zero(); m];
        for (i, &pi) in pattern.iter().enumerate() {
            target[pi] = lift(c.get(row, i)).mul(&powers[i]);
        }
        if matches!(solve_linear(&span, &target)?, LinearSolution::Inconsistent) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// `|Aut(M)| = |G₀|·kⁿ` with its breakdown.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AutomorphismOrder {
    pub gfm_type: GfmType,
    /// Stabilizer of Λ in S_{n+1}; G₀ maps isomorphically onto it.
    pub stabilizer_order: u128,
    /// Permutations acting trivially on X_{n,d} (inside the stabilizer).
    pub kernel_order: u128,
    /// Image of the stabilizer in 𝔾_{n,d}.
    pub image_order: u128,
    pub k_power_n: u128,
    pub order: u128,
    /// `"Lin"` for the two pairs with infinite automorphism group, where
    /// the count is the order of the linear automorphism group.
    pub group: String,
}

/// Orders of the automorphism group of M_n^k(Λ) and of its pieces.
pub fn automorphism_order<R: Rng + ?Sized>(
    param: &StandardParameter,
    k: u32,
    budget: u128,
    exec: Exec,
    rng: &mut R,
) -> Result<AutomorphismOrder> {
    let t = GfmType::new(param.d(), k, param.n())?;
    let report = orbit_and_stabilizer(param, budget, exec)?;
    let stab = report.stabilizer;
    let kernel = kernel_within(&stab, param, 8, rng);
    let stabilizer_order = stab.len() as u128;
    let kernel_order = kernel as u128;
    let overflow = || Error::InvalidInput("automorphism order exceeds 128 bits".into());
    let k_power_n = (k as u128)
        .checked_pow(param.n() as u32)
        .ok_or_else(overflow)?;
    Ok(AutomorphismOrder {
        gfm_type: t,
        stabilizer_order,
        kernel_order,
        image_order: stabilizer_order / kernel_order,
        k_power_n,
        order: stabilizer_order
            .checked_mul(k_power_n)
            .ok_or_else(overflow)?,
        group: if is_exceptional(t.d, k, t.n) {
            "Lin"
        } else {
            "Aut"
        }
        .into(),
    })
}

fn kernel_within<R: Rng + ?Sized>(
    stab: &[Permutation],
    param: &StandardParameter,
    samples: usize,
    rng: &mut R,
) -> usize {
    let (d, n) = (param.d(), param.n());
    if n == d + 1 {
        return stab.len();
    }
    let probes: Vec<StandardParameter> = (0..samples)
        .map(|_| crate::arrangement::random_parameter(d, n, rng))
        .collect();
    stab.iter()
        .filter(|eta| {
            probes
                .iter()
                .all(|p| crate::modaction::act(eta, p).as_ref() == Ok(p))
        })
        .count()
}

/// `k^{(n−d)(d+1)−n}`, the number of irreducible components of the fiber
/// product of the `n−d` Fermat hypersurfaces over P^d.
pub fn fiber_product_components(t: &GfmType) -> Result<u128> {
    let e = (t.n - t.d) * (t.d + 1) - t.n;
    (t.k as u128)
        .checked_pow(e as u32)
        .ok_or_else(|| Error::InvalidInput("component count exceeds 128 bits".into()))
}

/// Outcome of the classification for `2 ≤ n ≤ d`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LowNClassification {
    pub d: usize,
    pub n: usize,
    /// `"projective-space"` or `"nonexistent"`.
    pub case: String,
    pub description: String,
}

pub fn classify_low_n(d: usize, n: usize) -> Result<LowNClassification> {
    if n < 2 {
        return Err(Error::InvalidInput(format!("need n >= 2, got {n}")));
    }
    if n > d {
        return Err(Error::Precondition(format!(
            "n = {n} >= d+1 = {}; this is a generalized Fermat manifold of type (d;k,n)",
            d + 1
        )));
    }
    let (case, description) = if n == d {
        (
            "projective-space",
            format!(
                "M = P^{d} and H is generated by the {d} coordinate multipliers x_j -> w_k x_j"
            ),
        )
    } else {
        (
            "nonexistent",
            format!("no generalized Fermat pair of dimension {d} with n = {n} exists"),
        )
    };
    Ok(LowNClassification {
        d,
        n,
        case: case.into(),
        description,
    })
}
