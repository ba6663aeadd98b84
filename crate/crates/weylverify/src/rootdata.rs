//! Character lattices of products of GL(k), SL(k) and rank-one tori, with
//! simple roots, positive roots, coroot pairings, duals and restriction maps.
//!
//! Weights are stored in the fundamental-weight basis, factor by factor:
//! GL(k) uses `ω_1..ω_k`, SL(k) uses `ω_1..ω_{k-1}`, a torus uses `ε`.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::intlattice::{self, IntMatrix, IntegerLattice};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RootDataError {
    #[error("invalid factor {0:?}")]
    InvalidFactor(GroupFactor),
    #[error("no simple root at factor {factor}, position {position}")]
    InvalidSimpleRoot { factor: usize, position: usize },
    #[error("weight is not dominant")]
    NotDominant,
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum FactorKind {
    GL,
    SL,
    Torus,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct GroupFactor {
    pub kind: FactorKind,
    pub size: usize,
}

impl GroupFactor {
    pub fn gl(k: usize) -> Self {
        GroupFactor { kind: FactorKind::GL, size: k }
    }

    pub fn sl(k: usize) -> Self {
        GroupFactor { kind: FactorKind::SL, size: k }
    }

    pub fn torus() -> Self {
        GroupFactor { kind: FactorKind::Torus, size: 1 }
    }

    /// Number of basis coordinates the factor contributes.
    pub fn lattice_rank(&self) -> usize {
        match self.kind {
            FactorKind::GL => self.size,
            FactorKind::SL => self.size - 1,
            FactorKind::Torus => 1,
        }
    }

    /// Number of simple roots.
    pub fn semisimple_rank(&self) -> usize {
        match self.kind {
            FactorKind::GL | FactorKind::SL => self.size - 1,
            FactorKind::Torus => 0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GroupSpec {
    factors: Vec<GroupFactor>,
    offsets: Vec<usize>,
    basis_dim: usize,
}

impl GroupSpec {
    pub fn new(factors: Vec<GroupFactor>) -> Result<Self, RootDataError> {
        let mut offsets = Vec::with_capacity(factors.len());
        let mut dim = 0;
        for f in &factors {
            let ok = match f.kind {
                FactorKind::GL => f.size >= 1,
                FactorKind::SL => f.size >= 2,
                FactorKind::Torus => f.size == 1,
            };
            if !ok {
                return Err(RootDataError::InvalidFactor(*f));
            }
            offsets.push(dim);
            dim += f.lattice_rank();
        }
        Ok(GroupSpec { factors, offsets, basis_dim: dim })
    }

    pub fn factors(&self) -> &[GroupFactor] {
        &self.factors
    }

    pub fn basis_dim(&self) -> usize {
        self.basis_dim
    }

    /// First coordinate of factor `f`.
    pub fn offset(&self, f: usize) -> usize {
        self.offsets[f]
    }

    /// Derived subgroup: GL(k) becomes SL(k), GL(1) and tori disappear.
    /// The second component maps old factor indices to new ones.
    pub fn derived(&self) -> (GroupSpec, Vec<Option<usize>>) {
        let mut kept = Vec::new();
        let mut map = Vec::with_capacity(self.factors.len());
        for f in &self.factors {
            match f.kind {
                FactorKind::GL | FactorKind::SL if f.size >= 2 => {
                    map.push(Some(kept.len()));
                    kept.push(GroupFactor::sl(f.size));
                }
                _ => map.push(None),
            }
        }
        (GroupSpec::new(kept).expect("derived factors are valid"), map)
    }
}

impl fmt::Display for GroupSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .factors
            .iter()
            .map(|g| match g.kind {
                FactorKind::GL => format!("GL({})", g.size),
                FactorKind::SL => format!("SL({})", g.size),
                FactorKind::Torus => "Gm".to_string(),
            })
            .collect();
        write!(f, "{}", parts.join(" x "))
    }
}

/// Integer coordinates in the fundamental-weight / ε basis of a [`GroupSpec`].
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Weight(Vec<i64>);

impl Weight {
    pub fn new(coeffs: Vec<i64>) -> Self {
        Weight(coeffs)
    }

    pub fn zero(dim: usize) -> Self {
        Weight(vec![0; dim])
    }

    pub fn unit(dim: usize, idx: usize) -> Self {
        let mut v = vec![0; dim];
        v[idx] = 1;
        Weight(v)
    }

    pub fn coeffs(&self) -> &[i64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&c| c == 0)
    }

    pub fn to_big(&self) -> Vec<BigInt> {
        intlattice::to_big(&self.0)
    }
}

impl fmt::Display for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|c| c.to_string()).collect();
        write!(f, "[{}]", parts.join(","))
    }
}

impl Add for &Weight {
    type Output = Weight;
    fn add(self, rhs: &Weight) -> Weight {
        assert_eq!(self.len(), rhs.len(), "weight dimensions differ");
        Weight(self.0.iter().zip(&rhs.0).map(|(a, b)| a + b).collect())
    }
}

impl Sub for &Weight {
    type Output = Weight;
    fn sub(self, rhs: &Weight) -> Weight {
        assert_eq!(self.len(), rhs.len(), "weight dimensions differ");
        Weight(self.0.iter().zip(&rhs.0).map(|(a, b)| a - b).collect())
    }
}

impl Neg for &Weight {
    type Output = Weight;
    fn neg(self) -> Weight {
        Weight(self.0.iter().map(|a| -a).collect())
    }
}

impl Mul<i64> for &Weight {
    type Output = Weight;
    fn mul(self, k: i64) -> Weight {
        Weight(self.0.iter().map(|a| a * k).collect())
    }
}

/// `Σ c_i w_i`; the empty sum is the zero weight of dimension `dim`.
pub fn linear_combination(dim: usize, terms: &[(i64, Weight)]) -> Weight {
    terms.iter().fold(Weight::zero(dim), |acc, (c, w)| &acc + &(w * *c))
}

/// The `position`-th simple root of factor `factor` (1-based position).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct SimpleRootId {
    pub factor: usize,
    pub position: usize,
}

/// `e_i - e_j` in factor `factor`, with `1 <= i < j <= size`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct PositiveRoot {
    pub factor: usize,
    pub i: usize,
    pub j: usize,
}

impl PositiveRoot {
    pub fn is_simple(&self) -> bool {
        self.j == self.i + 1
    }
}

impl From<SimpleRootId> for PositiveRoot {
    fn from(id: SimpleRootId) -> Self {
        PositiveRoot { factor: id.factor, i: id.position, j: id.position + 1 }
    }
}

fn check_dim(spec: &GroupSpec, w: &Weight) -> Result<(), RootDataError> {
    if w.len() != spec.basis_dim() {
        return Err(RootDataError::DimensionMismatch { expected: spec.basis_dim(), found: w.len() });
    }
    Ok(())
}

pub fn simple_root(spec: &GroupSpec, id: SimpleRootId) -> Result<Weight, RootDataError> {
    let invalid = RootDataError::InvalidSimpleRoot { factor: id.factor, position: id.position };
    let f = spec.factors().get(id.factor).ok_or(invalid.clone())?;
    if id.position == 0 || id.position > f.semisimple_rank() {
        return Err(invalid);
    }
    let off = spec.offset(id.factor);
    let len = f.lattice_rank();
    let mut w = vec![0; spec.basis_dim()];
    // α_i = -ω_{i-1} + 2ω_i - ω_{i+1}; ω_0 is zero, and so is ω_k on SL(k).
    let i = id.position;
    w[off + i - 1] = 2;
    if i >= 2 {
        w[off + i - 2] = -1;
    }
    if i < len {
        w[off + i] = -1;
    }
    Ok(Weight(w))
}

pub fn simple_root_ids(spec: &GroupSpec) -> Vec<SimpleRootId> {
    let mut out = Vec::new();
    for (fi, f) in spec.factors().iter().enumerate() {
        for p in 1..=f.semisimple_rank() {
            out.push(SimpleRootId { factor: fi, position: p });
        }
    }
    out
}

pub fn positive_roots(spec: &GroupSpec) -> Vec<PositiveRoot> {
    let mut out = Vec::new();
    for (fi, f) in spec.factors().iter().enumerate() {
        if f.kind == FactorKind::Torus {
            continue;
        }
        for i in 1..=f.size {
            for j in i + 1..=f.size {
                out.push(PositiveRoot { factor: fi, i, j });
            }
        }
    }
    out
}

/// `e_i - e_j = α_i + ... + α_{j-1}` in the ω-basis.
pub fn root_as_weight(spec: &GroupSpec, r: PositiveRoot) -> Weight {
    let mut w = Weight::zero(spec.basis_dim());
    for p in r.i..r.j {
        let a = simple_root(spec, SimpleRootId { factor: r.factor, position: p }).expect("valid positive root");
        w = &w + &a;
    }
    w
}

/// Coordinates of the block of factor `f` in the e-basis. SL blocks are
/// lifted with last coordinate zero; torus blocks are returned unchanged.
pub fn to_e_coords(spec: &GroupSpec, f: usize, w: &Weight) -> Vec<i64> {
    let fac = spec.factors()[f];
    let off = spec.offset(f);
    let block = &w.coeffs()[off..off + fac.lattice_rank()];
    match fac.kind {
        FactorKind::Torus => block.to_vec(),
        FactorKind::GL | FactorKind::SL => {
            // ω_a = e_1 + ... + e_a, so e_j collects the coefficients of ω_a, a >= j.
            let mut e = vec![0; fac.size];
            let mut acc = 0;
            for j in (0..fac.size).rev() {
                if j < block.len() {
                    acc += block[j];
                }
                e[j] = acc;
            }
            e
        }
    }
}

/// Inverse of [`to_e_coords`] for one block. For SL any lift is accepted.
pub fn from_e_coords(spec: &GroupSpec, f: usize, e: &[i64]) -> Vec<i64> {
    let fac = spec.factors()[f];
    match fac.kind {
        FactorKind::Torus => e.to_vec(),
        FactorKind::GL => (0..fac.size).map(|a| if a + 1 < fac.size { e[a] - e[a + 1] } else { e[a] }).collect(),
        FactorKind::SL => (0..fac.size - 1).map(|a| e[a] - e[a + 1]).collect(),
    }
}

pub fn coroot_pairing(spec: &GroupSpec, w: &Weight, r: PositiveRoot) -> i64 {
    let e = to_e_coords(spec, r.factor, w);
    e[r.i - 1] - e[r.j - 1]
}

pub fn simple_coroot_pairing(spec: &GroupSpec, w: &Weight, id: SimpleRootId) -> i64 {
    // ⟨w, α_i^∨⟩ is the ω_i coordinate.
    w.coeffs()[spec.offset(id.factor) + id.position - 1]
}

pub fn is_dominant(spec: &GroupSpec, w: &Weight) -> bool {
    simple_root_ids(spec).into_iter().all(|id| simple_coroot_pairing(spec, w, id) >= 0)
}

/// `λ* = -w_0 λ`.
pub fn dual_weight(spec: &GroupSpec, w: &Weight) -> Result<Weight, RootDataError> {
    check_dim(spec, w)?;
    if !is_dominant(spec, w) {
        return Err(RootDataError::NotDominant);
    }
    let mut out = Vec::with_capacity(spec.basis_dim());
    for f in 0..spec.factors().len() {
        let e = to_e_coords(spec, f, w);
        let flipped: Vec<i64> = e.iter().rev().map(|x| -x).collect();
        out.extend(from_e_coords(spec, f, &flipped));
    }
    Ok(Weight(out))
}

/// Restriction of characters to the maximal torus of the derived subgroup.
pub fn restrict_to_derived(spec: &GroupSpec, w: &Weight) -> Weight {
    let mut out = Vec::new();
    for (fi, f) in spec.factors().iter().enumerate() {
        let off = spec.offset(fi);
        match f.kind {
            FactorKind::GL if f.size >= 2 => out.extend_from_slice(&w.coeffs()[off..off + f.size - 1]),
            FactorKind::SL => out.extend_from_slice(&w.coeffs()[off..off + f.size - 1]),
            _ => {}
        }
    }
    Weight(out)
}

/// Central characters: `ω_k` of each GL(k) and `ε` of each torus. They span
/// the kernel of [`restrict_to_derived`].
pub fn central_characters(spec: &GroupSpec) -> Vec<Weight> {
    let mut out = Vec::new();
    for (fi, f) in spec.factors().iter().enumerate() {
        let off = spec.offset(fi);
        match f.kind {
            FactorKind::GL => out.push(Weight::unit(spec.basis_dim(), off + f.size - 1)),
            FactorKind::Torus => out.push(Weight::unit(spec.basis_dim(), off)),
            FactorKind::SL => {}
        }
    }
    out
}

/// Restriction `X(T̄) -> X(T)` to a subtorus, realised as `w ↦ P w` where the
/// rows of `P` span the annihilator of the saturated kernel.
#[derive(Clone, Debug)]
pub struct QuotientMap {
    ambient_dim: usize,
    kernel: IntegerLattice,
    projection: IntMatrix,
}

impl QuotientMap {
    pub fn identity(dim: usize) -> Self {
        quotient_by_lattice(&IntegerLattice::zero(dim))
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn target_dim(&self) -> usize {
        self.projection.rows()
    }

    /// The saturated kernel lattice.
    pub fn kernel(&self) -> &IntegerLattice {
        &self.kernel
    }

    pub fn is_identity(&self) -> bool {
        self.kernel.rank() == 0
    }

    pub fn image(&self, w: &Weight) -> Vec<BigInt> {
        assert_eq!(w.len(), self.ambient_dim, "weight dimension differs from quotient ambient");
        self.projection.mul_vec(&w.to_big())
    }

    pub fn same_image(&self, u: &Weight, v: &Weight) -> bool {
        self.image(u) == self.image(v)
    }

    /// Lattice spanned by the images of `ws`, generators in the given order.
    pub fn image_lattice(&self, ws: &[Weight]) -> IntegerLattice {
        let cols: Vec<Vec<BigInt>> = ws.iter().map(|w| self.image(w)).collect();
        IntegerLattice::new(IntMatrix::from_columns(self.target_dim(), &cols))
    }
}

fn quotient_by_lattice(k: &IntegerLattice) -> QuotientMap {
    let kernel = intlattice::saturate(k);
    let annihilator = intlattice::kernel(&kernel.generators().transpose());
    let canonical = IntegerLattice::new(annihilator).hnf_basis();
    QuotientMap { ambient_dim: k.ambient_dim(), kernel, projection: canonical.transpose() }
}

pub fn quotient_by_subtorus(spec: &GroupSpec, kernel_chars: &[Weight]) -> QuotientMap {
    quotient_by_lattice(&IntegerLattice::from_weights(spec.basis_dim(), kernel_chars))
}

/// Quotient modelling restriction to the derived subgroup's torus.
pub fn derived_quotient(spec: &GroupSpec) -> QuotientMap {
    quotient_by_subtorus(spec, &central_characters(spec))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gl(k: usize) -> GroupSpec {
        GroupSpec::new(vec![GroupFactor::gl(k)]).unwrap()
    }

    fn sl(k: usize) -> GroupSpec {
        GroupSpec::new(vec![GroupFactor::sl(k)]).unwrap()
    }

    fn sr(factor: usize, position: usize) -> SimpleRootId {
        SimpleRootId { factor, position }
    }

    #[test]
    fn simple_root_examples() {
        assert_eq!(simple_root(&gl(3), sr(0, 1)).unwrap(), Weight::new(vec![2, -1, 0]));
        assert_eq!(simple_root(&sl(2), sr(0, 1)).unwrap(), Weight::new(vec![2]));
        assert!(simple_root(&gl(1), sr(0, 1)).is_err());
        assert_eq!(simple_root(&gl(3), sr(0, 2)).unwrap(), Weight::new(vec![-1, 2, -1]));
        assert_eq!(simple_root(&sl(3), sr(0, 2)).unwrap(), Weight::new(vec![-1, 2]));
    }

    #[test]
    fn invalid_factors_rejected() {
        assert!(GroupSpec::new(vec![GroupFactor::sl(1)]).is_err());
        assert!(GroupSpec::new(vec![GroupFactor::gl(0)]).is_err());
    }

    #[test]
    fn positive_root_counts() {
        assert_eq!(positive_roots(&gl(3)).len(), 3);
        let s = GroupSpec::new(vec![GroupFactor::gl(2), GroupFactor::sl(2), GroupFactor::gl(2)]).unwrap();
        assert_eq!(positive_roots(&s).len(), 3);
        let t = GroupSpec::new(vec![GroupFactor::torus(), GroupFactor::torus()]).unwrap();
        assert!(positive_roots(&t).is_empty());
    }

    #[test]
    fn roots_as_weights() {
        assert_eq!(root_as_weight(&gl(3), PositiveRoot { factor: 0, i: 1, j: 3 }), Weight::new(vec![1, 1, -1]));
        assert_eq!(root_as_weight(&gl(3), PositiveRoot { factor: 0, i: 1, j: 2 }), Weight::new(vec![2, -1, 0]));
        assert_eq!(root_as_weight(&sl(3), PositiveRoot { factor: 0, i: 1, j: 3 }), Weight::new(vec![1, 1]));
    }

    #[test]
    fn pairing_examples() {
        let g = gl(4);
        for i in 0..4 {
            for j in 1..4 {
                let w = Weight::unit(4, i);
                let expected = i64::from(i + 1 == j);
                assert_eq!(coroot_pairing(&g, &w, PositiveRoot { factor: 0, i: j, j: j + 1 }), expected);
            }
        }
        let a1 = simple_root(&gl(3), sr(0, 1)).unwrap();
        assert_eq!(coroot_pairing(&gl(3), &a1, PositiveRoot { factor: 0, i: 1, j: 2 }), 2);
        assert_eq!(coroot_pairing(&g, &Weight::unit(4, 1), PositiveRoot { factor: 0, i: 1, j: 4 }), 1);
    }

    #[test]
    fn dual_examples() {
        assert_eq!(dual_weight(&gl(3), &Weight::unit(3, 0)).unwrap(), Weight::new(vec![0, 1, -1]));
        for n in 2..6 {
            let w = dual_weight(&sl(n), &Weight::unit(n - 1, 0)).unwrap();
            assert_eq!(w, Weight::unit(n - 1, n - 2));
        }
        assert_eq!(dual_weight(&gl(2), &Weight::zero(2)).unwrap(), Weight::zero(2));
        assert_eq!(dual_weight(&gl(2), &Weight::new(vec![-1, 0])), Err(RootDataError::NotDominant));
        let t = GroupSpec::new(vec![GroupFactor::torus()]).unwrap();
        assert_eq!(dual_weight(&t, &Weight::new(vec![3])).unwrap(), Weight::new(vec![-3]));
    }

    #[test]
    fn restriction_examples() {
        assert!(restrict_to_derived(&gl(3), &Weight::unit(3, 2)).is_zero());
        assert_eq!(restrict_to_derived(&gl(3), &Weight::unit(3, 0)), Weight::new(vec![1, 0]));
        let s = GroupSpec::new(vec![GroupFactor::gl(2), GroupFactor::torus()]).unwrap();
        assert!(restrict_to_derived(&s, &Weight::new(vec![0, 1, 1])).is_zero());
        let (d, map) = GroupSpec::new(vec![GroupFactor::gl(1), GroupFactor::gl(3)]).unwrap().derived();
        assert_eq!(d.factors(), &[GroupFactor::sl(3)]);
        assert_eq!(map, vec![None, Some(0)]);
    }

    #[test]
    fn quotient_examples() {
        let s = GroupSpec::new(vec![GroupFactor::gl(2), GroupFactor::gl(3)]).unwrap();
        // kernel {ω_2 - 3 ω'_3}
        let chi = Weight::new(vec![0, 1, 0, 0, -3]);
        let q = quotient_by_subtorus(&s, &[chi]);
        assert!(q.same_image(&Weight::unit(5, 1), &(&Weight::unit(5, 4) * 3)));
        assert!(!q.same_image(&Weight::unit(5, 1), &Weight::unit(5, 4)));
        assert_eq!(q.target_dim(), 4);

        let id = quotient_by_subtorus(&s, &[]);
        assert!(id.is_identity());
        assert_eq!(id.image(&Weight::unit(5, 3)), intlattice::to_big(&[0, 0, 0, 1, 0]));

        let t = GroupSpec::new(vec![GroupFactor::gl(2), GroupFactor::torus()]).unwrap();
        let q = quotient_by_subtorus(&t, &[Weight::new(vec![0, 0, 2])]);
        assert!(q.same_image(&Weight::new(vec![0, 0, 1]), &Weight::zero(3)));
    }

    #[test]
    fn derived_quotient_matches_restriction() {
        let s = GroupSpec::new(vec![GroupFactor::gl(3), GroupFactor::torus(), GroupFactor::gl(2)]).unwrap();
        let q = derived_quotient(&s);
        let a = Weight::new(vec![1, 2, 3, 4, 5, 6]);
        let b = Weight::new(vec![1, 2, -3, 0, 5, 1]);
        assert!(q.same_image(&a, &b));
        assert_eq!(restrict_to_derived(&s, &a), restrict_to_derived(&s, &b));
        assert_eq!(q.target_dim(), 3);
    }
}
