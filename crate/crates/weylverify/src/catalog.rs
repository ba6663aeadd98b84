//! The eight saturated indecomposable spherical modules of type A, with their
//! basic weights, closed-form d_W, admissible intermediate tori, expected
//! tangent weight sets and exclusion recipes.
//!
//! Families are numbered 1 through 8:
//!
//! | family | group                 | module                     | range        |
//! |--------|-----------------------|----------------------------|--------------|
//! | 1      | GL(m) x GL(n)         | C^m ⊗ C^n                  | 1 <= m <= n  |
//! | 2      | GL(n)                 | S^2 C^n                    | n >= 1       |
//! | 3      | GL(n)                 | Λ^2 C^n                    | n >= 2       |
//! | 4      | GL(n) x Gm            | Λ^2 C^n ⊕ C^n              | n >= 4       |
//! | 5      | GL(n) x Gm            | Λ^2 C^n ⊕ (C^n)*           | n >= 4       |
//! | 6      | GL(m) x GL(n)         | (C^m ⊗ C^n) ⊕ C^n          | m >= 1, n >= 2 |
//! | 7      | GL(m) x GL(n)         | (C^m ⊗ C^n) ⊕ (C^n)*       | m >= 1, n >= 2 |
//! | 8      | GL(m) x SL(2) x GL(n) | (C^m ⊗ C^2) ⊕ (C^2 ⊗ C^n)  | 2 <= m <= n  |
//!
//! Families 2 to 5 have a single size parameter; their instances carry `m = 0`.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use crate::rootdata::{self, GroupFactor, GroupSpec, SimpleRootId, Weight};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CatalogError {
    #[error("unknown family {0}")]
    UnknownFamily(u8),
    #[error("parameters out of range for family {family}: m={m}, n={n}")]
    OutOfRange { family: u8, m: usize, n: usize },
    #[error("torus choice {torus} is not available for family {family} with m={m}, n={n}")]
    TorusUnavailable { family: u8, m: usize, n: usize, torus: TorusChoice },
    #[error("invalid torus descriptor {0:?}")]
    BadTorus(String),
    #[error("consecutive-fundamental parameters out of range: m={m}, k={k}")]
    ConsecutiveRange { m: usize, k: usize },
}

/// Which maximal torus sits between the derived group and the full group.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum TorusChoice {
    /// The full group Ḡ; no kernel.
    Full,
    /// The derived group; the kernel is spanned by all central characters.
    Derived,
    /// A one-parameter intermediate torus (the integer `a` or `b`).
    Param(i64),
}

impl fmt::Display for TorusChoice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TorusChoice::Full => write!(f, "full"),
            TorusChoice::Derived => write!(f, "derived"),
            TorusChoice::Param(k) => write!(f, "param:{k}"),
        }
    }
}

impl FromStr for TorusChoice {
    type Err = CatalogError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "full" => Ok(TorusChoice::Full),
            "derived" => Ok(TorusChoice::Derived),
            _ => s
                .strip_prefix("param:")
                .and_then(|k| k.parse().ok())
                .map(TorusChoice::Param)
                .ok_or_else(|| CatalogError::BadTorus(s.to_string())),
        }
    }
}

impl Serialize for TorusChoice {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for TorusChoice {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct FamilyInstance {
    pub family: u8,
    pub m: usize,
    pub n: usize,
    pub torus: TorusChoice,
}

impl FamilyInstance {
    pub fn new(family: u8, m: usize, n: usize, torus: TorusChoice) -> Self {
        FamilyInstance { family, m, n, torus }
    }

    /// Instance of a family with a single size parameter.
    pub fn single(family: u8, n: usize, torus: TorusChoice) -> Self {
        FamilyInstance { family, m: 0, n, torus }
    }

    pub fn full(family: u8, m: usize, n: usize) -> Self {
        Self::new(family, m, n, TorusChoice::Full)
    }
}

impl fmt::Display for FamilyInstance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if is_single_parameter(self.family) {
            write!(f, "family {} n={} torus={}", self.family, self.n, self.torus)
        } else {
            write!(f, "family {} m={} n={} torus={}", self.family, self.m, self.n, self.torus)
        }
    }
}

pub fn is_single_parameter(family: u8) -> bool {
    (2..=5).contains(&family)
}

/// Checks the size ranges, ignoring the torus.
pub fn check_range(family: u8, m: usize, n: usize) -> Result<(), CatalogError> {
    let ok = match family {
        1 => 1 <= m && m <= n,
        2 => m == 0 && n >= 1,
        3 => m == 0 && n >= 2,
        4 | 5 => m == 0 && n >= 4,
        6 | 7 => m >= 1 && n >= 2,
        8 => 2 <= m && m <= n,
        _ => return Err(CatalogError::UnknownFamily(family)),
    };
    if ok {
        Ok(())
    } else {
        Err(CatalogError::OutOfRange { family, m, n })
    }
}

/// Every instance of the given families with `m, n ≤ max_size`, with all
/// torus options for the given parameters, in sorted order.
pub fn enumerate_instances(
    families: &[u8],
    max_size: usize,
    params: &[i64],
) -> Result<Vec<FamilyInstance>, CatalogError> {
    let mut out = Vec::new();
    for &family in families {
        let ms: Vec<usize> = if is_single_parameter(family) { vec![0] } else { (1..=max_size).collect() };
        for &m in &ms {
            for n in 1..=max_size {
                match check_range(family, m, n) {
                    Ok(()) => {}
                    Err(CatalogError::OutOfRange { .. }) => continue,
                    Err(e) => return Err(e),
                }
                for torus in torus_options(family, m, n, params)? {
                    out.push(FamilyInstance::new(family, m, n, torus));
                }
            }
        }
    }
    out.sort();
    out.dedup();
    Ok(out)
}

/// An eigenvector shadow: the weight and the basic weights (indices into E)
/// onto which the eigenvector projects nonzero. `alt_support` records a
/// second, equal expression of the same class when one is known.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TangentCertificate {
    pub weight: Weight,
    pub support: Vec<usize>,
    pub alt_support: Option<Vec<usize>>,
}

/// How to exclude one weight: the certificate, the chosen λ, and optionally
/// the ξ for the fourth condition. A missing ξ is searched for.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExclusionRecipe {
    pub certificate: TangentCertificate,
    pub lambda: usize,
    pub xi: Option<usize>,
}

#[derive(Debug, Clone)]
pub struct CaseData {
    pub instance: FamilyInstance,
    pub group: GroupSpec,
    pub basic_weights: Vec<Weight>,
    pub summands: usize,
    pub dw_closed: i64,
    pub expected_final: BTreeSet<Weight>,
    pub expected_gprime: BTreeSet<Weight>,
    pub certificates: Vec<TangentCertificate>,
    pub exclusion_recipes: Vec<ExclusionRecipe>,
    /// When set, the two filters cut the candidates down to exactly the
    /// expected final set at the level of the chosen torus.
    pub filters_exact: bool,
    /// Generators of the kernel of `X(T̄) -> X(T)`.
    pub kernel_chars: Vec<Weight>,
}

impl CaseData {
    pub fn quotient(&self) -> rootdata::QuotientMap {
        rootdata::quotient_by_subtorus(&self.group, &self.kernel_chars)
    }
}

/// An equality `lhs = Σ c_i w_i` in the ambient character lattice.
#[derive(Debug, Clone)]
pub struct ExpansionIdentity {
    pub label: String,
    pub lhs: Weight,
    pub rhs: Vec<(i64, Weight)>,
}

/// Weight-building helper over a fixed group.
struct Basis {
    spec: GroupSpec,
}

impl Basis {
    fn new(factors: Vec<GroupFactor>) -> Self {
        Basis { spec: GroupSpec::new(factors).expect("catalog groups are valid") }
    }

    fn dim(&self) -> usize {
        self.spec.basis_dim()
    }

    fn zero(&self) -> Weight {
        Weight::zero(self.dim())
    }

    /// `ω_i` of factor `f`; `ω_0` and `ω_k` on SL(k) are zero. For a torus `ω_1 = ε`.
    fn omega(&self, f: usize, i: usize) -> Weight {
        let fac = self.spec.factors()[f];
        if i == 0 || i > fac.lattice_rank() {
            return self.zero();
        }
        Weight::unit(self.dim(), self.spec.offset(f) + i - 1)
    }

    fn alpha(&self, f: usize, i: usize) -> Weight {
        rootdata::simple_root(&self.spec, SimpleRootId { factor: f, position: i }).expect("catalog roots are valid")
    }

    /// `α_from + ... + α_to` in factor `f`.
    fn string(&self, f: usize, from: usize, to: usize) -> Weight {
        (from..=to).fold(self.zero(), |acc, i| &acc + &self.alpha(f, i))
    }

    fn combo(&self, terms: &[(i64, &Weight)]) -> Weight {
        terms.iter().fold(self.zero(), |acc, (c, w)| &acc + &(*w * *c))
    }
}

fn two_gl(m: usize, n: usize) -> Basis {
    Basis::new(vec![GroupFactor::gl(m), GroupFactor::gl(n)])
}

fn gl_torus(n: usize) -> Basis {
    Basis::new(vec![GroupFactor::gl(n), GroupFactor::torus()])
}

/// Index bookkeeping for families 6 and 7: `λ_1..λ_K`, then `λ'_1..λ'_L`,
/// then `μ` for family 7.
struct LambdaIndex {
    k: usize,
    l: usize,
}

impl LambdaIndex {
    fn lam(&self, i: usize) -> usize {
        assert!((1..=self.k).contains(&i), "λ_{i} out of range");
        i - 1
    }

    fn lamp(&self, i: usize) -> usize {
        assert!((1..=self.l).contains(&i), "λ'_{i} out of range");
        self.k + i - 1
    }

    fn mu(&self) -> usize {
        self.k + self.l
    }
}

fn family6_kl(m: usize, n: usize) -> (usize, usize) {
    ((m + 1).min(n), m.min(n))
}

fn family7_kl(m: usize, n: usize) -> (usize, usize) {
    (m.min(n - 1), m.min(n))
}

/// Torus choices available for `(family, m, n)`, with the parametric ones
/// taken from `params`. The full group always comes first.
pub fn torus_options(family: u8, m: usize, n: usize, params: &[i64]) -> Result<Vec<TorusChoice>, CatalogError> {
    check_range(family, m, n)?;
    let mut out = vec![TorusChoice::Full];
    if derived_available(family, m, n) {
        out.push(TorusChoice::Derived);
    }
    if has_parametric_torus(family, m, n) {
        out.extend(params.iter().map(|&k| TorusChoice::Param(k)));
    }
    Ok(out)
}

/// Whether the module stays spherical for the derived group.
fn derived_available(family: u8, m: usize, n: usize) -> bool {
    match family {
        1 => m < n,
        3 => n % 2 == 1,
        8 => m > 2,
        _ => false,
    }
}

pub fn has_parametric_torus(family: u8, m: usize, n: usize) -> bool {
    match family {
        5 => n % 2 == 1 && n >= 5,
        6 => n + 1 == m || m + 2 == n,
        7 => n + 1 == m || (m + 2 == n && m > 1),
        _ => false,
    }
}

/// The two central characters spanning the kernel of the restriction to the
/// derived group, for the families with a parametric torus: `(ω_n, ε)` for
/// family 5 and `(ω_m, ω'_n)` for families 6 and 7.
pub fn central_pair(family: u8, m: usize, n: usize) -> Option<(Weight, Weight)> {
    match family {
        5 => {
            let b = gl_torus(n);
            Some((b.omega(0, n), b.omega(1, 1)))
        }
        6 | 7 => {
            let b = two_gl(m, n);
            Some((b.omega(0, m), b.omega(1, n)))
        }
        _ => None,
    }
}

/// `(c, d)` such that the parametric kernel is `c·first + d·second` in terms
/// of [`central_pair`].
pub fn parametric_kernel_coefficients(family: u8, m: usize, n: usize, param: i64) -> Option<(i64, i64)> {
    if !has_parametric_torus(family, m, n) {
        return None;
    }
    match family {
        // (a+1)ω_n - (a-1)ε
        5 => Some((param + 1, 1 - param)),
        // ω_m - bω'_n  or  aω_m - ω'_n
        6 | 7 if n + 1 == m => Some((1, -param)),
        6 | 7 => Some((param, -1)),
        _ => None,
    }
}

/// The weight whose membership in the weight group singles out the
/// parametric tori.
pub fn parametric_weight(family: u8, m: usize, n: usize) -> Option<Weight> {
    if !has_parametric_torus(family, m, n) {
        return None;
    }
    match family {
        5 => Some(gl_torus(n).string(0, n - 2, n - 1)),
        6 | 7 if n + 1 == m => Some(two_gl(m, n).string(0, m - 2, m - 1)),
        6 => Some(two_gl(m, n).string(1, n - 2, n - 1)),
        7 => Some(two_gl(m, n).string(1, n - 3, n - 2)),
        _ => None,
    }
}

/// Whether a primitive kernel character `c·first + d·second` has the form
/// of one of the parametric tori, up to sign.
pub fn kernel_has_parametric_form(family: u8, m: usize, n: usize, c: i64, d: i64) -> bool {
    if !has_parametric_torus(family, m, n) {
        return false;
    }
    match family {
        5 => matches!((c + d).abs(), 1 | 2),
        6 | 7 if n + 1 == m => c.abs() == 1,
        6 | 7 => d.abs() == 1,
        _ => false,
    }
}

fn kernel_for(family: u8, m: usize, n: usize, torus: TorusChoice, spec: &GroupSpec) -> Vec<Weight> {
    match torus {
        TorusChoice::Full => Vec::new(),
        TorusChoice::Derived => rootdata::central_characters(spec),
        TorusChoice::Param(k) => {
            let (first, second) = central_pair(family, m, n).expect("parametric family");
            let (c, d) = parametric_kernel_coefficients(family, m, n, k).expect("parametric family");
            vec![&(&first * c) + &(&second * d)]
        }
    }
}

pub fn resolve(inst: &FamilyInstance) -> Result<CaseData, CatalogError> {
    let FamilyInstance { family, m, n, torus } = *inst;
    check_range(family, m, n)?;
    let available = match torus {
        TorusChoice::Full => true,
        TorusChoice::Derived => derived_available(family, m, n),
        TorusChoice::Param(_) => has_parametric_torus(family, m, n),
    };
    if !available {
        return Err(CatalogError::TorusUnavailable { family, m, n, torus });
    }
    let mut case = match family {
        1 => family1(m, n, torus),
        2 => family2(n),
        3 => family3(n, torus),
        4 => family4(n),
        5 => family5(n, torus),
        6 => family6(m, n, torus),
        7 => family7(m, n, torus),
        8 => family8(m, n),
        _ => unreachable!("range already checked"),
    };
    case.instance = inst.clone();
    case.kernel_chars = kernel_for(family, m, n, torus, &case.group);
    case.certificates = case.exclusion_recipes.iter().map(|r| r.certificate.clone()).collect();
    Ok(case)
}

fn case(
    basis: Basis,
    basic_weights: Vec<Weight>,
    summands: usize,
    dw_closed: i64,
    expected_final: BTreeSet<Weight>,
    expected_gprime: BTreeSet<Weight>,
) -> CaseData {
    CaseData {
        instance: FamilyInstance::full(0, 0, 0),
        group: basis.spec,
        basic_weights,
        summands,
        dw_closed,
        expected_final,
        expected_gprime,
        certificates: Vec::new(),
        exclusion_recipes: Vec::new(),
        filters_exact: false,
        kernel_chars: Vec::new(),
    }
}

fn family1(m: usize, n: usize, torus: TorusChoice) -> CaseData {
    let b = two_gl(m, n);
    let e = (1..=m).map(|i| &b.omega(0, i) + &b.omega(1, i)).collect();
    let expected: BTreeSet<Weight> = (1..m).map(|i| &b.alpha(0, i) + &b.alpha(1, i)).collect();
    let mut c = case(b, e, 1, m as i64 - 1, expected.clone(), expected);
    c.filters_exact = m == n || torus == TorusChoice::Full;
    c
}

fn family2(n: usize) -> CaseData {
    let b = Basis::new(vec![GroupFactor::gl(n)]);
    let e = (1..=n).map(|i| &b.omega(0, i) * 2).collect();
    let expected: BTreeSet<Weight> = (1..n).map(|i| &b.alpha(0, i) * 2).collect();
    let mut c = case(b, e, 1, n as i64 - 1, expected.clone(), expected);
    c.filters_exact = true;
    c
}

fn family3(n: usize, torus: TorusChoice) -> CaseData {
    let b = Basis::new(vec![GroupFactor::gl(n)]);
    let e = (1..=n / 2).map(|i| b.omega(0, 2 * i)).collect();
    // i odd with i + 2 <= n - 1
    let expected: BTreeSet<Weight> = (1..n.saturating_sub(2))
        .step_by(2)
        .map(|i| b.combo(&[(1, &b.alpha(0, i)), (2, &b.alpha(0, i + 1)), (1, &b.alpha(0, i + 2))]))
        .collect();
    let mut c = case(b, e, 1, (n / 2) as i64 - 1, expected.clone(), expected);
    c.filters_exact = n.is_multiple_of(2) || torus == TorusChoice::Full;
    c
}

fn consecutive_pairs(b: &Basis, f: usize, last: usize) -> BTreeSet<Weight> {
    (1..=last).map(|i| b.string(f, i, i + 1)).collect()
}

fn family4(n: usize) -> CaseData {
    let b = gl_torus(n);
    let eps = b.omega(1, 1);
    let e = (1..=n).map(|i| if i % 2 == 1 { &b.omega(0, i) + &eps } else { b.omega(0, i) }).collect();
    let expected = consecutive_pairs(&b, 0, n - 2);
    case(b, e, 2, n as i64 - 2, expected.clone(), expected)
}

fn family5(n: usize, torus: TorusChoice) -> CaseData {
    let b = gl_torus(n);
    let eps = b.omega(1, 1);
    let mut e: Vec<Weight> = (1..=n)
        .filter(|&i| if i % 2 == 1 { i <= n - 2 } else { true })
        .map(|i| if i % 2 == 1 { &b.omega(0, i) + &eps } else { b.omega(0, i) })
        .collect();
    let mu = b.combo(&[(1, &b.omega(0, n - 1)), (-1, &b.omega(0, n)), (1, &eps)]);
    e.push(mu);
    let pairs = consecutive_pairs(&b, 0, n - 2);
    if n.is_multiple_of(2) {
        return case(b, e, 2, n as i64 - 2, pairs.clone(), pairs);
    }
    // For odd n the basic weights are λ_1..λ_{n-1} followed by μ.
    let beta = b.string(0, n - 2, n - 1);
    let mut gprime = pairs;
    gprime.insert(b.alpha(0, n - 1));
    let mut expected = gprime.clone();
    expected.remove(&beta);
    let mut c = case(b, e, 2, n as i64 - 2, expected, gprime);
    if let TorusChoice::Param(a) = torus {
        let lam = |i: usize| i - 1;
        let mu_idx = n - 1;
        let certificate =
            TangentCertificate { weight: beta, support: vec![lam(n - 2)], alt_support: Some(vec![lam(n - 1), mu_idx]) };
        let (lambda, xi) = if a < 0 { (mu_idx, lam(n - 1)) } else { (lam(n - 1), mu_idx) };
        c.exclusion_recipes.push(ExclusionRecipe { certificate, lambda, xi: Some(xi) });
    }
    c
}

fn family6(m: usize, n: usize, torus: TorusChoice) -> CaseData {
    let b = two_gl(m, n);
    let (k, l) = family6_kl(m, n);
    let ix = LambdaIndex { k, l };
    let mut e: Vec<Weight> = (1..=k).map(|i| &b.omega(0, i - 1) + &b.omega(1, i)).collect();
    e.extend((1..=l).map(|i| &b.omega(0, i) + &b.omega(1, i)));

    let mut expected: BTreeSet<Weight> = (1..l).map(|i| b.alpha(0, i)).collect();
    expected.extend((1..k).map(|j| b.alpha(1, j)));

    let mut gprime = expected.clone();
    let mut recipes = Vec::new();
    for r in 2..l {
        let weight = b.string(0, r - 1, r);
        gprime.insert(weight.clone());
        recipes.push(ExclusionRecipe {
            certificate: TangentCertificate {
                weight,
                support: vec![ix.lam(r), ix.lamp(r - 1)],
                alt_support: Some(vec![ix.lam(r + 1), ix.lamp(r)]),
            },
            lambda: ix.lam(r + 1),
            xi: Some(ix.lamp(r)),
        });
    }
    for s in 2..k {
        let weight = b.string(1, s - 1, s);
        gprime.insert(weight.clone());
        recipes.push(ExclusionRecipe {
            certificate: TangentCertificate {
                weight,
                support: vec![ix.lam(s - 1), ix.lamp(s - 1)],
                alt_support: Some(vec![ix.lam(s), ix.lamp(s)]),
            },
            lambda: ix.lamp(s),
            xi: Some(ix.lam(s)),
        });
    }
    if n + 1 == m {
        let weight = b.string(0, m - 2, m - 1);
        gprime.insert(weight.clone());
        if let TorusChoice::Param(bp) = torus {
            let (lambda, xi) = if bp <= -2 { (ix.lam(m - 1), ix.lamp(m - 2)) } else { (ix.lamp(m - 2), ix.lam(m - 1)) };
            recipes.push(ExclusionRecipe {
                certificate: TangentCertificate {
                    weight,
                    support: vec![ix.lamp(m - 1)],
                    alt_support: Some(vec![ix.lam(m - 1), ix.lamp(m - 2)]),
                },
                lambda,
                xi: Some(xi),
            });
        }
    }
    if m + 2 == n {
        let weight = b.string(1, n - 2, n - 1);
        gprime.insert(weight.clone());
        if let TorusChoice::Param(a) = torus {
            let (lambda, xi) = if a <= -2 { (ix.lamp(n - 2), ix.lam(n - 2)) } else { (ix.lam(n - 2), ix.lamp(n - 2)) };
            recipes.push(ExclusionRecipe {
                certificate: TangentCertificate {
                    weight,
                    support: vec![ix.lam(n - 1)],
                    alt_support: Some(vec![ix.lam(n - 2), ix.lamp(n - 2)]),
                },
                lambda,
                xi: Some(xi),
            });
        }
    }
    let mut c = case(b, e, 2, (k + l) as i64 - 2, expected, gprime);
    c.exclusion_recipes = recipes;
    c
}

fn family7(m: usize, n: usize, torus: TorusChoice) -> CaseData {
    let b = two_gl(m, n);
    let (k, l) = family7_kl(m, n);
    let ix = LambdaIndex { k, l };
    let mut e: Vec<Weight> = (1..=k).map(|i| &b.omega(0, i) + &b.omega(1, i - 1)).collect();
    e.extend((1..=l).map(|i| &b.omega(0, i) + &b.omega(1, i)));
    e.push(&b.omega(1, n - 1) - &b.omega(1, n));

    let mut expected: BTreeSet<Weight> = (1..l).map(|i| b.alpha(0, i)).collect();
    expected.extend((1..k).map(|j| b.alpha(1, j)));
    expected.insert(b.string(1, k, n - 1));

    let mut gprime = expected.clone();
    let mut recipes = Vec::new();
    let mut push = |weight: Weight, support: Vec<usize>, alt: Vec<usize>, lambda: usize| {
        recipes.push(ExclusionRecipe {
            certificate: TangentCertificate { weight, support, alt_support: Some(alt) },
            lambda,
            xi: None,
        });
    };
    for r in 2..l {
        let weight = b.string(0, r - 1, r);
        gprime.insert(weight.clone());
        // r = K covers β_{n-1} when 3 <= n <= m
        push(weight, vec![ix.lam(r), ix.lamp(r)], vec![ix.lam(r - 1), ix.lamp(r - 1)], ix.lam(r - 1));
    }
    for s in 2..k {
        let weight = b.string(1, s - 1, s);
        gprime.insert(weight.clone());
        push(weight, vec![ix.lam(s + 1), ix.lamp(s)], vec![ix.lam(s), ix.lamp(s - 1)], ix.lamp(s - 1));
    }
    if n >= 3 && n - 1 <= m {
        let weight = b.string(1, n - 2, n - 1);
        gprime.insert(weight.clone());
        push(weight, vec![ix.lam(n - 1), ix.lamp(n - 2)], vec![ix.lamp(n - 1), ix.mu()], ix.mu());
    }
    if n + 1 == m {
        let weight = b.string(0, m - 2, m - 1);
        gprime.insert(weight.clone());
        if let TorusChoice::Param(bp) = torus {
            let lambda = if bp >= -1 { ix.lam(m - 2) } else { ix.lamp(m - 2) };
            push(weight, vec![ix.lamp(m - 1)], vec![ix.lam(m - 2), ix.lamp(m - 2)], lambda);
        }
    }
    if m + 2 == n && m > 1 {
        let weight = b.string(1, n - 3, n - 2);
        gprime.insert(weight.clone());
        if let TorusChoice::Param(a) = torus {
            let lambda = if a >= -1 { ix.lamp(n - 3) } else { ix.lam(n - 2) };
            push(weight, vec![ix.lamp(n - 2)], vec![ix.lam(n - 2), ix.lamp(n - 3)], lambda);
        }
    }
    let mut c = case(b, e, 2, (k + l) as i64 - 1, expected, gprime);
    c.exclusion_recipes = recipes;
    c
}

fn family8(m: usize, n: usize) -> CaseData {
    let b = Basis::new(vec![GroupFactor::gl(m), GroupFactor::sl(2), GroupFactor::gl(n)]);
    let w1 = b.omega(0, 1);
    let wp = b.omega(1, 1);
    let wpp1 = b.omega(2, 1);
    let e = vec![&w1 + &wp, &wp + &wpp1, &w1 + &wpp1, b.omega(0, 2), b.omega(2, 2)];
    let expected: BTreeSet<Weight> = [b.alpha(0, 1), b.alpha(1, 1), b.alpha(2, 1)].into_iter().collect();
    case(b, e, 2, 3, expected.clone(), expected)
}

/// Family 8 lattice check data: `(ω_1, ω', ω''_1)` and the three mixed
/// generators `ω_1+ω'`, `ω'+ω''_1`, `ω_1+ω''_1`, over GL(m) x SL(2) x GL(n).
pub fn family8_mixed_generators(m: usize, n: usize) -> (GroupSpec, [Weight; 3], [Weight; 3]) {
    let b = Basis::new(vec![GroupFactor::gl(m), GroupFactor::sl(2), GroupFactor::gl(n)]);
    let w1 = b.omega(0, 1);
    let wp = b.omega(1, 1);
    let wpp1 = b.omega(2, 1);
    let gens = [&w1 + &wp, &wp + &wpp1, &w1 + &wpp1];
    (b.spec, [w1, wp, wpp1], gens)
}

/// Expected tangent weights of `⊕_{i<=k} V(ω_i)` for SL(m).
pub fn consecfund_weights(m: usize, k: usize) -> Result<BTreeSet<Weight>, CatalogError> {
    if m < 2 || k < 1 || k > m - 1 {
        return Err(CatalogError::ConsecutiveRange { m, k });
    }
    let p = if k < m - 1 { k - 1 } else { k };
    let b = Basis::new(vec![GroupFactor::sl(m)]);
    Ok((1..p).map(|i| b.string(0, i, i + 1)).collect())
}

/// Expected tangent weights of `⊕_{i<=k} V(ω_i) ⊕ V(ω_{m-1})` for SL(m).
pub fn consecfundgap_weights(m: usize, k: usize) -> Result<BTreeSet<Weight>, CatalogError> {
    if m < 4 || k < 1 || k > m - 3 {
        return Err(CatalogError::ConsecutiveRange { m, k });
    }
    let b = Basis::new(vec![GroupFactor::sl(m)]);
    let mut out: BTreeSet<Weight> = (1..k.saturating_sub(1)).map(|i| b.string(0, i, i + 1)).collect();
    out.insert(b.string(0, k, m - 1));
    Ok(out)
}

/// Expansion identities that hold in `X(T̄)` for the given family and sizes.
/// `param` is the `a` or `b` of the parametric identities.
pub fn expansion_identities(
    family: u8,
    m: usize,
    n: usize,
    param: i64,
) -> Result<Vec<ExpansionIdentity>, CatalogError> {
    check_range(family, m, n)?;
    Ok(match family {
        5 => family5_identities(n, param),
        6 => family6_identities(m, n, param),
        7 => family7_identities(m, n, param),
        _ => Vec::new(),
    })
}

fn family5_identities(n: usize, a: i64) -> Vec<ExpansionIdentity> {
    if n.is_multiple_of(2) || n < 5 {
        return Vec::new();
    }
    let b = gl_torus(n);
    let case = family5(n, TorusChoice::Full);
    let e = &case.basic_weights;
    let lam = |i: usize| e[i - 1].clone();
    let mu = e[n - 1].clone();
    let beta = b.string(0, n - 2, n - 1);
    let lhs = b.combo(&[(1, &beta), (a + 1, &b.omega(0, n)), (-(a - 1), &b.omega(1, 1))]);
    vec![ExpansionIdentity {
        label: format!("beta shift n={n} a={a}"),
        lhs,
        rhs: vec![(1, lam(n - 2)), (a + 1, lam(n - 1)), (-a, mu), (-1, lam(n - 3))],
    }]
}

/// `Σ_{k=from}^{to} c·(x_k - y_k)` as a term list; empty when `to < from`.
fn telescoping(
    terms: &mut Vec<(i64, Weight)>,
    c: i64,
    from: usize,
    to: usize,
    x: &dyn Fn(usize) -> Weight,
    y: &dyn Fn(usize) -> Weight,
) {
    for k in from..=to {
        terms.push((c, x(k)));
        terms.push((-c, y(k)));
    }
}

fn family6_identities(m: usize, n: usize, param: i64) -> Vec<ExpansionIdentity> {
    let b = two_gl(m, n);
    let (k, l) = family6_kl(m, n);
    let case = family6(m, n, TorusChoice::Full);
    let e = case.basic_weights;
    let z = b.zero();
    let lam = |i: usize| if i == 0 { z.clone() } else { e[i - 1].clone() };
    let lamp = |i: usize| if i == 0 { z.clone() } else { e[k + i - 1].clone() };
    let mut out = Vec::new();

    for i in 1..=k {
        let mut rhs = vec![(1, lam(i))];
        telescoping(&mut rhs, -1, 1, i - 1, &lamp, &lam);
        out.push(ExpansionIdentity { label: format!("omega'_{i} in E"), lhs: b.omega(1, i), rhs });
    }
    for j in 1..=l {
        let mut rhs = Vec::new();
        telescoping(&mut rhs, 1, 1, j, &lamp, &lam);
        out.push(ExpansionIdentity { label: format!("omega_{j} in E"), lhs: b.omega(0, j), rhs });
    }
    for i in 1..l {
        out.push(ExpansionIdentity {
            label: format!("alpha_{i} in E"),
            lhs: b.alpha(0, i),
            rhs: vec![(1, lam(i + 1)), (1, lamp(i)), (-1, lam(i)), (-1, lamp(i + 1))],
        });
    }
    for j in 1..k {
        out.push(ExpansionIdentity {
            label: format!("alpha'_{j} in E"),
            lhs: b.alpha(1, j),
            rhs: vec![(1, lam(j)), (1, lamp(j)), (-1, lam(j + 1)), (-1, lamp(j - 1))],
        });
    }
    for r in 2..l {
        out.push(ExpansionIdentity {
            label: format!("beta_{r} in E"),
            lhs: b.string(0, r - 1, r),
            rhs: vec![(1, lamp(r - 1)), (1, lam(r + 1)), (-1, lam(r - 1)), (-1, lamp(r + 1))],
        });
    }
    for s in 2..k {
        out.push(ExpansionIdentity {
            label: format!("beta'_{s} in E"),
            lhs: b.string(1, s - 1, s),
            rhs: vec![(1, lam(s - 1)), (1, lamp(s)), (-1, lamp(s - 2)), (-1, lam(s + 1))],
        });
    }
    if n + 1 == m {
        let bp = param;
        let lhs = b.combo(&[(1, &b.string(0, m - 2, m - 1)), (1, &b.omega(0, m)), (-bp, &b.omega(1, n))]);
        let mut rhs = vec![(1, lamp(m - 1)), (-1 - bp, lam(m - 1)), (bp + 2, lamp(m - 2)), (-(bp + 2), lam(m - 2))];
        telescoping(&mut rhs, bp + 1, 1, m - 3, &lamp, &lam);
        out.push(ExpansionIdentity { label: format!("beta_{} shift b={bp}", m - 1), lhs, rhs });
    }
    if m + 2 == n {
        let a = param;
        let lhs = b.combo(&[(1, &b.string(1, n - 2, n - 1)), (-a, &b.omega(0, m)), (1, &b.omega(1, n))]);
        let mut rhs = vec![
            (1, lam(n - 1)),
            (2 + a, lam(n - 2)),
            (-2 - a, lamp(n - 3)),
            (1 + a, lam(n - 3)),
            (-1 - a, lamp(n - 2)),
        ];
        telescoping(&mut rhs, 1 + a, 1, n.saturating_sub(4), &lam, &lamp);
        out.push(ExpansionIdentity { label: format!("beta'_{} shift a={a}", n - 1), lhs, rhs });
    }
    out
}

fn family7_identities(m: usize, n: usize, param: i64) -> Vec<ExpansionIdentity> {
    let b = two_gl(m, n);
    let (k, l) = family7_kl(m, n);
    let case = family7(m, n, TorusChoice::Full);
    let e = case.basic_weights;
    let z = b.zero();
    let lam = |i: usize| if i == 0 { z.clone() } else { e[i - 1].clone() };
    let lamp = |i: usize| if i == 0 { z.clone() } else { e[k + i - 1].clone() };
    let mu = e[k + l].clone();
    let mut out = Vec::new();

    for i in 1..=k {
        let mut rhs = vec![(1, lam(i))];
        telescoping(&mut rhs, -1, 1, i - 1, &lamp, &lam);
        out.push(ExpansionIdentity { label: format!("omega_{i} in E"), lhs: b.omega(0, i), rhs });
        let mut rhs = Vec::new();
        telescoping(&mut rhs, 1, 1, i, &lamp, &lam);
        out.push(ExpansionIdentity { label: format!("omega'_{i} in E"), lhs: b.omega(1, i), rhs });
    }
    if m + 1 >= n {
        let mut rhs = vec![(-1, mu.clone())];
        telescoping(&mut rhs, 1, 1, n - 1, &lamp, &lam);
        out.push(ExpansionIdentity { label: format!("omega'_{n} in E"), lhs: b.omega(1, n), rhs });
    }
    if m + 1 > n {
        let mut rhs = vec![(1, lamp(n)), (1, mu.clone())];
        telescoping(&mut rhs, -1, 1, n - 1, &lamp, &lam);
        out.push(ExpansionIdentity { label: format!("omega_{n} in E"), lhs: b.omega(0, n), rhs });
    }
    for r in 2..k {
        out.push(ExpansionIdentity {
            label: format!("beta_{r} in E"),
            lhs: b.string(0, r - 1, r),
            rhs: vec![(-1, lamp(r - 2)), (1, lam(r - 1)), (1, lamp(r)), (-1, lam(r + 1))],
        });
    }
    for s in 2..k {
        out.push(ExpansionIdentity {
            label: format!("beta'_{s} in E"),
            lhs: b.string(1, s - 1, s),
            rhs: vec![(-1, lam(s - 1)), (1, lamp(s - 1)), (1, lam(s + 1)), (-1, lamp(s + 1))],
        });
    }
    if 3 <= n && n <= m {
        out.push(ExpansionIdentity {
            label: format!("beta_{} in E", n - 1),
            lhs: b.string(0, n - 2, n - 1),
            rhs: vec![(1, lam(n - 2)), (1, lamp(n - 1)), (-1, mu.clone()), (-1, lamp(n)), (-1, lamp(n - 3))],
        });
    }
    if n >= 3 && n - 1 <= m {
        out.push(ExpansionIdentity {
            label: format!("beta'_{} in E", n - 1),
            lhs: b.string(1, n - 2, n - 1),
            rhs: vec![(-1, lam(n - 2)), (1, lamp(n - 2)), (1, mu.clone())],
        });
    }
    if n + 1 == m {
        let bp = param;
        let lhs = b.combo(&[(1, &b.string(0, m - 2, m - 1)), (1, &b.omega(0, m)), (-bp, &b.omega(1, n))]);
        let mut rhs = vec![
            (1, lamp(m - 1)),
            (1 + bp, mu.clone()),
            (bp + 2, lam(m - 2)),
            (-(bp + 2), lamp(m - 3)),
            (-(bp + 1), lamp(m - 2)),
            (bp + 1, lam(m - 3)),
        ];
        telescoping(&mut rhs, -(bp + 1), 1, m.saturating_sub(4), &lamp, &lam);
        out.push(ExpansionIdentity { label: format!("beta_{} shift b={bp}", m - 1), lhs, rhs });
    }
    if m + 2 == n && m > 1 {
        let a = param;
        let lhs = b.combo(&[(1, &b.string(1, n - 3, n - 2)), (-a, &b.omega(0, m)), (1, &b.omega(1, n))]);
        let mut rhs = vec![(1, lamp(n - 2)), (-1, mu.clone()), (-(1 + a), lam(n - 2))];
        telescoping(&mut rhs, 1 + a, 1, n.saturating_sub(4), &lamp, &lam);
        rhs.push((2 + a, lamp(n - 3)));
        rhs.push((-(2 + a), lam(n - 3)));
        out.push(ExpansionIdentity { label: format!("beta'_{} shift a={a}", n - 2), lhs, rhs });
    }
    out
}
