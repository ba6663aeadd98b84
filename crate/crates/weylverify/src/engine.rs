//! The verification pipeline: candidate weights, the lattice and simple-root
//! filters, sphericality, the four exclusion conditions, d_W, and
//! per-instance reports.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::catalog::{self, CaseData, CatalogError, FamilyInstance, TangentCertificate};
use crate::intlattice::{self, IntegerLattice, LatticeError};
use crate::rootdata::{self, FactorKind, GroupSpec, PositiveRoot, QuotientMap, SimpleRootId, Weight};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum EngineError {
    #[error(transparent)]
    Catalog(#[from] CatalogError),
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error("weight is not in the lattice spanned by the restricted basic weights")]
    NotInLattice,
    #[error("restriction is not injective on the span of the basic weights")]
    NotInjective,
    #[error("weight is not one of the basic weights")]
    NotBasicWeight,
    #[error("basic weight index {0} out of range")]
    BadIndex(usize),
    #[error("coefficient does not fit in 64 bits")]
    Overflow,
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
}

/// Positive roots orthogonal to every basic weight.
pub fn e_perp(spec: &GroupSpec, e: &[Weight]) -> BTreeSet<PositiveRoot> {
    rootdata::positive_roots(spec)
        .into_iter()
        .filter(|&r| e.iter().all(|w| rootdata::coroot_pairing(spec, w, r) == 0))
        .collect()
}

/// `(R⁺ ∖ E⊥) ∪ {0}` as weights.
pub fn gx0_weight_set(spec: &GroupSpec, e: &[Weight]) -> BTreeSet<Weight> {
    let perp = e_perp(spec, e);
    let mut out: BTreeSet<Weight> = rootdata::positive_roots(spec)
        .into_iter()
        .filter(|r| !perp.contains(r))
        .map(|r| rootdata::root_as_weight(spec, r))
        .collect();
    out.insert(Weight::zero(spec.basis_dim()));
    out
}

fn simple_roots(spec: &GroupSpec) -> Vec<(SimpleRootId, Weight)> {
    rootdata::simple_root_ids(spec)
        .into_iter()
        .map(|id| (id, rootdata::simple_root(spec, id).expect("listed ids are valid")))
        .collect()
}

/// The spherical-root table: orthogonal pairs of simple roots (across
/// factors too), doubled simple roots, strings of at least two consecutive
/// simple roots, and `α_i + 2α_{i+1} + α_{i+2}`.
pub fn candidate_weights(spec: &GroupSpec) -> BTreeSet<Weight> {
    let simple = simple_roots(spec);
    let mut out = BTreeSet::new();
    for (i, (_, a)) in simple.iter().enumerate() {
        out.insert(a * 2);
        for (id_b, b) in &simple[i + 1..] {
            if rootdata::simple_coroot_pairing(spec, a, *id_b) == 0 {
                out.insert(a + b);
            }
        }
    }
    for (fi, f) in spec.factors().iter().enumerate() {
        let r = f.semisimple_rank();
        let alpha = |p: usize| rootdata::simple_root(spec, SimpleRootId { factor: fi, position: p }).expect("valid");
        for start in 1..=r {
            let mut acc = alpha(start);
            for end in start + 1..=r {
                acc = &acc + &alpha(end);
                out.insert(acc.clone());
            }
            if start + 2 <= r {
                out.insert(&(&alpha(start) + &(&alpha(start + 1) * 2)) + &alpha(start + 2));
            }
        }
    }
    out
}

/// `{δ + ρ : δ ∈ Π, ρ ∈ R⁺ ∪ {0}}`. Any weight passing the simple-root
/// filter lies here.
pub fn root_shift_candidates(spec: &GroupSpec) -> BTreeSet<Weight> {
    let mut roots: Vec<Weight> =
        rootdata::positive_roots(spec).into_iter().map(|r| rootdata::root_as_weight(spec, r)).collect();
    roots.push(Weight::zero(spec.basis_dim()));
    let mut out = BTreeSet::new();
    for (_, d) in simple_roots(spec) {
        for r in &roots {
            out.insert(&d + r);
        }
    }
    out
}

/// The full candidate universe used by [`verify_instance`].
pub fn candidate_universe(spec: &GroupSpec) -> BTreeSet<Weight> {
    let mut out = candidate_weights(spec);
    out.extend(root_shift_candidates(spec));
    out
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LatticeTrace {
    pub candidate: Weight,
    pub passed: bool,
    /// Coefficients over the restricted basic weights.
    pub witness: Option<Vec<BigInt>>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SimpleRootTrace {
    pub candidate: Weight,
    pub passed: bool,
    pub delta: Option<SimpleRootId>,
    /// `γ - δ` as a positive root; `None` with `passed` means `γ = δ`.
    pub remainder: Option<PositiveRoot>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FilterTrace {
    pub candidate: Weight,
    pub passed_lattice: bool,
    pub lattice_witness: Option<Vec<BigInt>>,
    pub passed_simple_root: bool,
    pub simple_root: Option<SimpleRootId>,
    pub in_expected: bool,
}

/// Keeps `γ` with `q(γ) ∈ <q(E)>`.
pub fn lattice_filter(candidates: &[Weight], e: &[Weight], qmap: &QuotientMap) -> Vec<LatticeTrace> {
    let image = qmap.image_lattice(e);
    candidates
        .iter()
        .map(|c| {
            let witness = intlattice::member(&qmap.image(c), &image).expect("dimensions agree");
            LatticeTrace { candidate: c.clone(), passed: witness.is_some(), witness }
        })
        .collect()
}

/// Keeps `γ` such that `γ - δ ∈ (R⁺ ∖ E⊥) ∪ {0}` for some simple root `δ`.
pub fn simple_root_filter(candidates: &[Weight], spec: &GroupSpec, e: &[Weight]) -> Vec<SimpleRootTrace> {
    let perp = e_perp(spec, e);
    let allowed: Vec<(PositiveRoot, Weight)> = rootdata::positive_roots(spec)
        .into_iter()
        .filter(|r| !perp.contains(r))
        .map(|r| (r, rootdata::root_as_weight(spec, r)))
        .collect();
    let simple = simple_roots(spec);
    candidates
        .iter()
        .map(|c| {
            for (id, d) in &simple {
                let rest = c - d;
                if rest.is_zero() {
                    return SimpleRootTrace { candidate: c.clone(), passed: true, delta: Some(*id), remainder: None };
                }
                if let Some((r, _)) = allowed.iter().find(|(_, w)| *w == rest) {
                    return SimpleRootTrace {
                        candidate: c.clone(),
                        passed: true,
                        delta: Some(*id),
                        remainder: Some(*r),
                    };
                }
            }
            SimpleRootTrace { candidate: c.clone(), passed: false, delta: None, remainder: None }
        })
        .collect()
}

/// Both filters over `candidates`, flagging membership in `expected`.
pub fn filter_traces(
    candidates: &[Weight],
    spec: &GroupSpec,
    e: &[Weight],
    qmap: &QuotientMap,
    expected: &BTreeSet<Weight>,
) -> Vec<FilterTrace> {
    let lat = lattice_filter(candidates, e, qmap);
    let sr = simple_root_filter(candidates, spec, e);
    lat.into_iter()
        .zip(sr)
        .map(|(l, s)| FilterTrace {
            in_expected: expected.contains(&l.candidate),
            candidate: l.candidate,
            passed_lattice: l.passed,
            lattice_witness: l.witness,
            passed_simple_root: s.passed,
            simple_root: s.delta,
        })
        .collect()
}

/// True iff `ker q ∩ <E> = 0`, i.e. `q` keeps the rank of `<E>`.
pub fn is_spherical_restriction(e: &[Weight], qmap: &QuotientMap) -> bool {
    let ambient = IntegerLattice::from_weights(qmap.ambient_dim(), e).rank();
    qmap.image_lattice(e).rank() == ambient
}

/// `rank <E> - b`.
pub fn dw_camus(e: &[Weight], dim: usize, summands: usize) -> i64 {
    IntegerLattice::from_weights(dim, e).rank() as i64 - summands as i64
}

/// The unique `c` with `q(β) = Σ c_λ q(λ)`.
pub fn expand_in_e(beta: &Weight, e: &[Weight], qmap: &QuotientMap) -> Result<Vec<i64>, EngineError> {
    if beta.len() != qmap.ambient_dim() {
        return Err(EngineError::DimensionMismatch { expected: qmap.ambient_dim(), found: beta.len() });
    }
    if !is_spherical_restriction(e, qmap) || IntegerLattice::from_weights(qmap.ambient_dim(), e).rank() != e.len() {
        return Err(EngineError::NotInjective);
    }
    let coeffs = intlattice::member(&qmap.image(beta), &qmap.image_lattice(e))?.ok_or(EngineError::NotInLattice)?;
    coeffs.iter().map(|c| c.to_i64().ok_or(EngineError::Overflow)).collect()
}

fn perp_simple(spec: &GroupSpec, e: &[&Weight]) -> BTreeSet<SimpleRootId> {
    rootdata::simple_root_ids(spec)
        .into_iter()
        .filter(|&id| e.iter().all(|w| rootdata::simple_coroot_pairing(spec, w, id) == 0))
        .collect()
}

/// Whether `E⊥ ∩ Π = (E ∖ {λ})⊥ ∩ Π`.
pub fn codim1_orbit_check(spec: &GroupSpec, e: &[Weight], lambda: &Weight) -> Result<bool, EngineError> {
    let pos = e.iter().position(|w| w == lambda).ok_or(EngineError::NotBasicWeight)?;
    let all: Vec<&Weight> = e.iter().collect();
    let rest: Vec<&Weight> = e.iter().enumerate().filter(|&(i, _)| i != pos).map(|(_, w)| w).collect();
    Ok(perp_simple(spec, &all) == perp_simple(spec, &rest))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Es3Witness {
    pub eta: SimpleRootId,
    pub other: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExclusionTrace {
    pub weight: Weight,
    pub lambda_index: usize,
    pub es1_coefficient: i64,
    pub es3_witnesses: Vec<Es3Witness>,
    /// The positive root equal to the weight, if it is one outside `E⊥`.
    pub es4_root: Option<PositiveRoot>,
    pub es4_xi: Option<usize>,
    pub es: [bool; 4],
}

impl ExclusionTrace {
    pub fn excluded(&self) -> bool {
        self.es.iter().all(|&b| b)
    }
}

/// Evaluates the four exclusion conditions for `cert` with the basic weight
/// `e[lambda]`. When `xi` is absent a suitable ξ is searched for in E order.
pub fn exclusion_applicable(
    spec: &GroupSpec,
    e: &[Weight],
    qmap: &QuotientMap,
    cert: &TangentCertificate,
    lambda: usize,
    xi: Option<usize>,
) -> Result<ExclusionTrace, EngineError> {
    let lam = e.get(lambda).ok_or(EngineError::BadIndex(lambda))?;
    if let Some(x) = xi {
        e.get(x).ok_or(EngineError::BadIndex(x))?;
    }
    let coeffs = expand_in_e(&cert.weight, e, qmap)?;
    let es1_coefficient = coeffs[lambda];
    let es1 = es1_coefficient > 0;
    let es2 = !cert.support.contains(&lambda);

    let mut es3_witnesses = Vec::new();
    for id in rootdata::simple_root_ids(spec) {
        if rootdata::simple_coroot_pairing(spec, lam, id) == 0 {
            continue;
        }
        let other = (0..e.len()).find(|&i| i != lambda && rootdata::simple_coroot_pairing(spec, &e[i], id) != 0);
        es3_witnesses.push(Es3Witness { eta: id, other });
    }
    let es3 = es3_witnesses.iter().all(|w| w.other.is_some());

    let perp = e_perp(spec, e);
    let es4_root = rootdata::positive_roots(spec)
        .into_iter()
        .find(|&r| !perp.contains(&r) && rootdata::root_as_weight(spec, r) == cert.weight);
    let (es4, es4_xi) = match es4_root {
        None => (true, None),
        Some(r) => {
            let ok =
                |i: usize| i != lambda && !cert.support.contains(&i) && rootdata::coroot_pairing(spec, &e[i], r) != 0;
            match xi {
                Some(x) => (ok(x), Some(x)),
                None => {
                    let found = (0..e.len()).find(|&i| ok(i));
                    (found.is_some(), found)
                }
            }
        }
    };

    Ok(ExclusionTrace {
        weight: cert.weight.clone(),
        lambda_index: lambda,
        es1_coefficient,
        es3_witnesses,
        es4_root,
        es4_xi,
        es: [es1, es2, es3, es4],
    })
}

/// Exact equality `lhs = Σ c_i w_i`.
pub fn verify_identity(lhs: &Weight, rhs_terms: &[(i64, Weight)]) -> Result<bool, EngineError> {
    for (_, w) in rhs_terms {
        if w.len() != lhs.len() {
            return Err(EngineError::DimensionMismatch { expected: lhs.len(), found: w.len() });
        }
    }
    Ok(*lhs == rootdata::linear_combination(lhs.len(), rhs_terms))
}

/// For family 8 over the derived group: none of `ω_1, ω', ω''_1` lies in
/// `<ω_1+ω', ω'+ω''_1, ω_1+ω''_1>`.
pub fn noomone_check(m: usize, n: usize) -> bool {
    let (spec, singles, gens) = catalog::family8_mixed_generators(m, n);
    let (derived, _) = spec.derived();
    let restrict = |w: &Weight| rootdata::restrict_to_derived(&spec, w);
    let gens: Vec<Weight> = gens.iter().map(restrict).collect();
    let lattice = IntegerLattice::from_weights(derived.basis_dim(), &gens);
    singles.iter().all(|w| !lattice.contains_weight(&restrict(w))) && gens.iter().all(|g| lattice.contains_weight(g))
}

/// Indices of the non-torus factors on which `w` has a nonzero block.
pub fn factors_touched(spec: &GroupSpec, w: &Weight) -> Vec<usize> {
    spec.factors()
        .iter()
        .enumerate()
        .filter(|(_, f)| f.kind != FactorKind::Torus)
        .filter(|&(fi, f)| {
            let off = spec.offset(fi);
            w.coeffs()[off..off + f.lattice_rank()].iter().any(|&c| c != 0)
        })
        .map(|(fi, _)| fi)
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Status {
    #[serde(rename = "PASS")]
    Pass,
    #[serde(rename = "SURPLUS")]
    Surplus,
    #[serde(rename = "FAIL")]
    Fail,
    #[serde(rename = "NON-SPHERICAL")]
    NonSpherical,
}

impl std::fmt::Display for Status {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Status::Pass => "PASS",
            Status::Surplus => "SURPLUS",
            Status::Fail => "FAIL",
            Status::NonSpherical => "NON-SPHERICAL",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct VerifyOptions {
    /// Coefficient bound for the brute-force saturation cross-check.
    pub brute_force_box: i64,
    /// The cross-check only runs when `|E|` is at most this.
    pub brute_force_max_rank: usize,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions { brute_force_box: 4, brute_force_max_rank: 4 }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub instance: FamilyInstance,
    pub d_w: i64,
    pub d_w_closed: i64,
    pub candidates: Vec<Weight>,
    /// Candidates passing both filters for the derived group.
    pub survivors: Vec<Weight>,
    /// Survivors whose restriction lies in the weight group of the chosen torus.
    pub group_survivors: Vec<Weight>,
    pub exclusions: Vec<ExclusionTrace>,
    #[serde(rename = "final")]
    pub final_set: Vec<Weight>,
    pub surplus: Vec<Weight>,
    pub filters_exact: bool,
    pub saturated: Option<bool>,
    pub saturated_bruteforce: Option<bool>,
    pub status: Status,
    pub failures: Vec<String>,
}

pub fn verify_instance(inst: &FamilyInstance) -> Result<VerificationReport, EngineError> {
    verify_instance_with(inst, &VerifyOptions::default())
}

pub fn verify_instance_with(inst: &FamilyInstance, opts: &VerifyOptions) -> Result<VerificationReport, EngineError> {
    let case = catalog::resolve(inst)?;
    Ok(verify_case(&case, opts))
}

/// Saturation of the weight monoid for the group of the chosen torus, where
/// that group is a product of GL/SL/torus factors.
fn saturation(case: &CaseData, opts: &VerifyOptions) -> (Option<bool>, Option<bool>) {
    let (spec, e) = match case.instance.torus {
        catalog::TorusChoice::Full => (case.group.clone(), case.basic_weights.clone()),
        catalog::TorusChoice::Derived => {
            let (d, _) = case.group.derived();
            let e = case.basic_weights.iter().map(|w| rootdata::restrict_to_derived(&case.group, w)).collect();
            (d, e)
        }
        catalog::TorusChoice::Param(_) => return (None, None),
    };
    let criterion = intlattice::is_saturated_criterion(&e, &spec).ok();
    let brute = (e.len() <= opts.brute_force_max_rank)
        .then(|| intlattice::is_saturated_bruteforce(&e, &spec, opts.brute_force_box));
    (criterion, brute)
}

pub fn verify_case(case: &CaseData, opts: &VerifyOptions) -> VerificationReport {
    let spec = &case.group;
    let e = &case.basic_weights;
    let q = case.quotient();
    let r = rootdata::derived_quotient(spec);
    let d_w = dw_camus(e, spec.basis_dim(), case.summands);
    let universe: Vec<Weight> = candidate_universe(spec).into_iter().collect();

    let mut report = VerificationReport {
        instance: case.instance.clone(),
        d_w,
        d_w_closed: case.dw_closed,
        candidates: universe.clone(),
        survivors: Vec::new(),
        group_survivors: Vec::new(),
        exclusions: Vec::new(),
        final_set: Vec::new(),
        surplus: Vec::new(),
        filters_exact: case.filters_exact,
        saturated: None,
        saturated_bruteforce: None,
        status: Status::Pass,
        failures: Vec::new(),
    };

    if !is_spherical_restriction(e, &q) {
        report.status = Status::NonSpherical;
        report.failures.push("restriction to the chosen torus is not injective on <E>".into());
        return report;
    }

    let (sat, brute) = saturation(case, opts);
    report.saturated = sat;
    report.saturated_bruteforce = brute;

    let traces = filter_traces(&universe, spec, e, &r, &case.expected_gprime);
    let survivors: BTreeSet<Weight> =
        traces.into_iter().filter(|t| t.passed_lattice && t.passed_simple_root).map(|t| t.candidate).collect();
    for w in case.expected_gprime.difference(&survivors) {
        report.failures.push(format!("expected weight {w} did not survive the filters"));
    }

    let image = q.image_lattice(e);
    let in_group = |w: &Weight| image.contains(&q.image(w));
    let group_survivors: BTreeSet<Weight> = survivors.iter().filter(|w| in_group(w)).cloned().collect();
    let candidates_in_group: BTreeSet<Weight> = case.expected_gprime.iter().filter(|w| in_group(w)).cloned().collect();

    let mut excluded = BTreeSet::new();
    for recipe in &case.exclusion_recipes {
        if !candidates_in_group.contains(&recipe.certificate.weight) {
            continue;
        }
        match exclusion_applicable(spec, e, &q, &recipe.certificate, recipe.lambda, recipe.xi) {
            Ok(trace) => {
                if trace.excluded() {
                    excluded.insert(trace.weight.clone());
                } else {
                    report.failures.push(format!("exclusion of {} failed: {:?}", trace.weight, trace.es));
                }
                report.exclusions.push(trace);
            }
            Err(err) => report.failures.push(format!("exclusion of {} errored: {err}", recipe.certificate.weight)),
        }
    }
    report.exclusions.sort_by(|a, b| a.weight.cmp(&b.weight));

    let final_set: BTreeSet<Weight> = candidates_in_group.difference(&excluded).cloned().collect();
    let surplus: BTreeSet<Weight> = group_survivors.difference(&candidates_in_group).cloned().collect();

    if final_set != case.expected_final {
        report.failures.push("final set differs from the expected set".into());
    }
    if final_set.len() as i64 != d_w {
        report.failures.push(format!("|final| = {} but d_W = {d_w}", final_set.len()));
    }
    if d_w != case.dw_closed {
        report.failures.push(format!("d_W = {d_w} but the closed form gives {}", case.dw_closed));
    }
    if let (Some(a), Some(b)) = (sat, brute) {
        if a != b {
            report.failures.push(format!("saturation criterion {a} disagrees with brute force {b}"));
        }
    }

    report.status = if !report.failures.is_empty() {
        Status::Fail
    } else if case.filters_exact && !surplus.is_empty() {
        Status::Surplus
    } else {
        Status::Pass
    };
    report.survivors = survivors.into_iter().collect();
    report.group_survivors = group_survivors.into_iter().collect();
    report.final_set = final_set.into_iter().collect();
    report.surplus = surplus.into_iter().collect();
    report
}
