//! Exact integer linear algebra: column Hermite normal form, membership with
//! witnesses, kernels, intersections and saturation of sublattices of `Z^d`.
//!
//! Everything runs over `BigInt`. Matrices are small, so the algorithms favour
//! clarity over asymptotics.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::rootdata::{self, GroupSpec, Weight};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LatticeError {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("weights are linearly dependent")]
    Dependent,
}

/// Dense row-major integer matrix.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix { rows, cols, data: vec![BigInt::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = BigInt::one();
        }
        m
    }

    pub fn from_rows<T: Clone + Into<BigInt>>(rows: &[Vec<T>]) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        let mut m = Self::zeros(rows.len(), cols);
        for (i, r) in rows.iter().enumerate() {
            assert_eq!(r.len(), cols, "ragged rows");
            for (j, x) in r.iter().enumerate() {
                m.data[i * cols + j] = x.clone().into();
            }
        }
        m
    }

    /// Builds a `dim x cols.len()` matrix whose columns are the given vectors.
    pub fn from_columns<T: Clone + Into<BigInt>>(dim: usize, cols: &[Vec<T>]) -> Self {
        let mut m = Self::zeros(dim, cols.len());
        for (j, c) in cols.iter().enumerate() {
            assert_eq!(c.len(), dim, "column length differs from dimension");
            for (i, x) in c.iter().enumerate() {
                m.data[i * cols.len() + j] = x.clone().into();
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: BigInt) {
        self.data[i * self.cols + j] = v;
    }

    pub fn column(&self, j: usize) -> Vec<BigInt> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn columns(&self) -> Vec<Vec<BigInt>> {
        (0..self.cols).map(|j| self.column(j)).collect()
    }

    pub fn row(&self, i: usize) -> Vec<BigInt> {
        self.data[i * self.cols..(i + 1) * self.cols].to_vec()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.data[j * self.rows + i] = self.get(i, j).clone();
            }
        }
        t
    }

    pub fn mul(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, other.rows, "inner dimensions differ");
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if !b.is_zero() {
                        out.data[i * other.cols + j] += a * b;
                    }
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[BigInt]) -> Vec<BigInt> {
        assert_eq!(self.cols, v.len(), "vector length differs from column count");
        (0..self.rows)
            .map(|i| {
                let mut acc = BigInt::zero();
                for (j, x) in v.iter().enumerate() {
                    if !x.is_zero() {
                        acc += self.get(i, j) * x;
                    }
                }
                acc
            })
            .collect()
    }

    /// Columns `start..end` as a new matrix.
    pub fn column_range(&self, start: usize, end: usize) -> IntMatrix {
        let cols: Vec<Vec<BigInt>> = (start..end).map(|j| self.column(j)).collect();
        IntMatrix::from_columns(self.rows, &cols)
    }

    /// Horizontal concatenation `[self | other]`.
    pub fn hcat(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.rows, other.rows);
        let mut cols = self.columns();
        cols.extend(other.columns());
        IntMatrix::from_columns(self.rows, &cols)
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.data.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    fn negate_col(&mut self, j: usize) {
        for i in 0..self.rows {
            let idx = i * self.cols + j;
            self.data[idx] = -std::mem::take(&mut self.data[idx]);
        }
    }

    /// `col[dst] -= q * col[src]`
    fn sub_col_multiple(&mut self, dst: usize, src: usize, q: &BigInt) {
        if q.is_zero() {
            return;
        }
        for i in 0..self.rows {
            let s = &self.data[i * self.cols + src] * q;
            self.data[i * self.cols + dst] -= s;
        }
    }

    /// Replaces columns `a`, `b` by `(s a + t b, u a + v b)`.
    fn combine_cols(&mut self, a: usize, b: usize, s: &BigInt, t: &BigInt, u: &BigInt, v: &BigInt) {
        for i in 0..self.rows {
            let x = self.data[i * self.cols + a].clone();
            let y = self.data[i * self.cols + b].clone();
            self.data[i * self.cols + a] = s * &x + t * &y;
            self.data[i * self.cols + b] = u * &x + v * &y;
        }
    }
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, "; ")?;
            }
            let row: Vec<String> = self.row(i).iter().map(|x| x.to_string()).collect();
            write!(f, "{}", row.join(" "))?;
        }
        write!(f, "]")
    }
}

/// Column Hermite normal form `H = M U` together with the unimodular `U`.
#[derive(Clone, Debug)]
pub struct HnfDecomposition {
    pub h: IntMatrix,
    pub transform: IntMatrix,
    /// Row index of the pivot in each of the first `rank` columns.
    pub pivot_rows: Vec<usize>,
}

impl HnfDecomposition {
    pub fn rank(&self) -> usize {
        self.pivot_rows.len()
    }
}

/// Lower-triangular column HNF: pivots sit in strictly increasing rows, are
/// positive, have zeros to their right, and the entries to their left lie in
/// `[0, pivot)`. Zero columns are moved to the end.
pub fn hnf_with_transform(m: &IntMatrix) -> HnfDecomposition {
    let mut h = m.clone();
    let mut u = IntMatrix::identity(m.cols);
    let mut pivot_rows = Vec::new();
    let mut piv = 0;
    for i in 0..m.rows {
        if piv == m.cols {
            break;
        }
        for j in piv + 1..m.cols {
            if h.get(i, j).is_zero() {
                continue;
            }
            if h.get(i, piv).is_zero() {
                h.swap_cols(piv, j);
                u.swap_cols(piv, j);
                continue;
            }
            let a = h.get(i, piv).clone();
            let b = h.get(i, j).clone();
            let eg = a.extended_gcd(&b);
            let (mut g, mut s, mut t) = (eg.gcd, eg.x, eg.y);
            if g.is_negative() {
                g = -g;
                s = -s;
                t = -t;
            }
            let ua = -(&b / &g);
            let va = &a / &g;
            h.combine_cols(piv, j, &s, &t, &ua, &va);
            u.combine_cols(piv, j, &s, &t, &ua, &va);
        }
        if h.get(i, piv).is_zero() {
            continue;
        }
        if h.get(i, piv).is_negative() {
            h.negate_col(piv);
            u.negate_col(piv);
        }
        let p = h.get(i, piv).clone();
        for k in 0..piv {
            let q = h.get(i, k).div_floor(&p);
            h.sub_col_multiple(k, piv, &q);
            u.sub_col_multiple(k, piv, &q);
        }
        pivot_rows.push(i);
        piv += 1;
    }
    HnfDecomposition { h, transform: u, pivot_rows }
}

/// Column Hermite normal form of `m` (same shape; zero columns last).
pub fn hnf(m: &IntMatrix) -> IntMatrix {
    hnf_with_transform(m).h
}

/// A basis (as columns) of the integer kernel `{x : M x = 0}`.
pub fn kernel(m: &IntMatrix) -> IntMatrix {
    let d = hnf_with_transform(m);
    d.transform.column_range(d.rank(), m.cols)
}

/// Sublattice of `Z^d` spanned by the columns of a generator matrix.
#[derive(Clone, Debug)]
pub struct IntegerLattice {
    ambient_dim: usize,
    generators: IntMatrix,
    decomposition: HnfDecomposition,
}

impl IntegerLattice {
    pub fn new(generators: IntMatrix) -> Self {
        let decomposition = hnf_with_transform(&generators);
        IntegerLattice { ambient_dim: generators.rows(), generators, decomposition }
    }

    pub fn from_vectors<T: Clone + Into<BigInt>>(dim: usize, vectors: &[Vec<T>]) -> Self {
        Self::new(IntMatrix::from_columns(dim, vectors))
    }

    pub fn from_weights(dim: usize, weights: &[Weight]) -> Self {
        let cols: Vec<Vec<i64>> = weights.iter().map(|w| w.coeffs().to_vec()).collect();
        Self::from_vectors(dim, &cols)
    }

    pub fn zero(dim: usize) -> Self {
        Self::new(IntMatrix::zeros(dim, 0))
    }

    pub fn full(dim: usize) -> Self {
        Self::new(IntMatrix::identity(dim))
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn generators(&self) -> &IntMatrix {
        &self.generators
    }

    /// Canonical basis: the nonzero columns of the Hermite normal form.
    pub fn hnf_basis(&self) -> IntMatrix {
        self.decomposition.h.column_range(0, self.decomposition.rank())
    }

    pub fn rank(&self) -> usize {
        self.decomposition.rank()
    }

    pub fn contains(&self, v: &[BigInt]) -> bool {
        matches!(member(v, self), Ok(Some(_)))
    }

    pub fn contains_weight(&self, w: &Weight) -> bool {
        self.contains(&w.to_big())
    }
}

pub fn rank(l: &IntegerLattice) -> usize {
    l.rank()
}

/// Coefficients `c` with `G c = v` over the original generators `G`, if any.
pub fn member(v: &[BigInt], l: &IntegerLattice) -> Result<Option<Vec<BigInt>>, LatticeError> {
    if v.len() != l.ambient_dim {
        return Err(LatticeError::DimensionMismatch { expected: l.ambient_dim, found: v.len() });
    }
    let d = &l.decomposition;
    let mut residual = v.to_vec();
    let mut y = Vec::with_capacity(d.rank());
    for (k, &p) in d.pivot_rows.iter().enumerate() {
        let pivot = d.h.get(p, k);
        let (q, r) = residual[p].div_rem(pivot);
        if !r.is_zero() {
            return Ok(None);
        }
        if !q.is_zero() {
            for (i, res) in residual.iter_mut().enumerate() {
                *res -= d.h.get(i, k) * &q;
            }
        }
        y.push(q);
    }
    if residual.iter().any(|x| !x.is_zero()) {
        return Ok(None);
    }
    let basis_part = d.transform.column_range(0, d.rank());
    Ok(Some(basis_part.mul_vec(&y)))
}

pub fn intersect(a: &IntegerLattice, b: &IntegerLattice) -> Result<IntegerLattice, LatticeError> {
    if a.ambient_dim != b.ambient_dim {
        return Err(LatticeError::DimensionMismatch { expected: a.ambient_dim, found: b.ambient_dim });
    }
    let mut neg_b = b.generators.clone();
    for j in 0..neg_b.cols() {
        neg_b.negate_col(j);
    }
    let stacked = a.generators.hcat(&neg_b);
    let ker = kernel(&stacked);
    let ga = a.generators.cols();
    let top: Vec<Vec<BigInt>> = ker.columns().into_iter().map(|c| c[..ga].to_vec()).collect();
    let coeffs = IntMatrix::from_columns(ga, &top);
    Ok(IntegerLattice::new(a.generators.mul(&coeffs)))
}

/// `Q L ∩ Z^d`, computed as the kernel of the orthogonal complement.
pub fn saturate(l: &IntegerLattice) -> IntegerLattice {
    let annihilator = kernel(&l.generators.transpose());
    IntegerLattice::new(kernel(&annihilator.transpose()))
}

pub fn lattice_equal(a: &IntegerLattice, b: &IntegerLattice) -> bool {
    a.ambient_dim == b.ambient_dim && a.hnf_basis() == b.hnf_basis()
}

/// Whether every generator of `a` lies in `b`.
pub fn is_sublattice(a: &IntegerLattice, b: &IntegerLattice) -> bool {
    a.ambient_dim == b.ambient_dim && a.hnf_basis().columns().iter().all(|c| b.contains(c))
}

fn pairing_table(e: &[Weight], spec: &GroupSpec) -> Vec<Vec<i64>> {
    let roots = rootdata::simple_root_ids(spec);
    e.iter().map(|w| roots.iter().map(|&id| rootdata::simple_coroot_pairing(spec, w, id)).collect()).collect()
}

/// Saturation test for the monoid freely generated by `e`: every generator
/// needs a simple root pairing nonzero with it and with no other generator.
/// Such a root is private to one generator, so the required injective
/// assignment exists exactly when each row of the pairing table has one.
pub fn is_saturated_criterion(e: &[Weight], spec: &GroupSpec) -> Result<bool, LatticeError> {
    for w in e {
        if w.len() != spec.basis_dim() {
            return Err(LatticeError::DimensionMismatch { expected: spec.basis_dim(), found: w.len() });
        }
    }
    if IntegerLattice::from_weights(spec.basis_dim(), e).rank() != e.len() {
        return Err(LatticeError::Dependent);
    }
    let table = pairing_table(e, spec);
    let n_roots = rootdata::simple_root_ids(spec).len();
    Ok((0..e.len()).all(|j| (0..n_roots).any(|t| table[j][t] != 0 && (0..e.len()).all(|i| i == j || table[i][t] == 0))))
}

/// Bounded check of `<S>_Z ∩ Λ+ = S`: enumerate integer combinations with
/// coefficients in `[-bound, bound]`, and require every dominant one to be
/// reachable with nonnegative coefficients in the same box.
pub fn is_saturated_bruteforce(e: &[Weight], spec: &GroupSpec, bound: i64) -> bool {
    use std::collections::HashSet;
    let dim = spec.basis_dim();
    let roots = rootdata::simple_root_ids(spec);
    let is_dominant = |w: &Weight| roots.iter().all(|&id| rootdata::simple_coroot_pairing(spec, w, id) >= 0);
    let mut nonneg: HashSet<Weight> = HashSet::new();
    let mut dominant: Vec<Weight> = Vec::new();
    let mut coeffs = vec![-bound; e.len()];
    loop {
        let mut w = Weight::zero(dim);
        for (c, lam) in coeffs.iter().zip(e) {
            w = &w + &(lam * *c);
        }
        if coeffs.iter().all(|&c| c >= 0) {
            nonneg.insert(w);
        } else if is_dominant(&w) {
            dominant.push(w);
        }
        // odometer increment
        let mut pos = 0;
        loop {
            if pos == coeffs.len() {
                return dominant.iter().all(|w| nonneg.contains(w));
            }
            if coeffs[pos] < bound {
                coeffs[pos] += 1;
                break;
            }
            coeffs[pos] = -bound;
            pos += 1;
        }
    }
}

pub fn to_big(v: &[i64]) -> Vec<BigInt> {
    v.iter().map(|&x| BigInt::from(x)).collect()
}
