//! Exact linear algebra over ℚ and the Gaussian rationals ℚ(i).
//!
//! Everything downstream (filtrations, spectral sequences, extension classes)
//! reduces to subspace arithmetic in here, so the module is deliberately
//! conservative: arbitrary-precision scalars, no floating point, and subspaces
//! kept in unique reduced row-echelon form so that equality of spans is
//! equality of representations.
//!
//! Conventions:
//! - Vectors are rows. A linear map with matrix `M` sends `v` to `v·M`, so a
//!   morphism matrix has shape `dim(source) × dim(target)` and "apply f then g"
//!   is the product `M_f · M_g`.
//! - [`kernel`], [`image`] and [`solve`] nevertheless use the classical column
//!   semantics (`kernel(m) = {v : m·v = 0}`, `image(m)` = column space,
//!   `solve(m, v)` finds `w` with `m·w = v`); the row-oriented counterparts are
//!   [`Matrix::left_kernel`] and [`Matrix::row_space`].

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_complex::Complex;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};

/// Arbitrary-precision rational. `BigRational` keeps itself reduced with a
/// positive denominator, which is exactly the canonical form required here.
pub type Rat = BigRational;

/// Gaussian rational a + b·i with exact complex conjugation.
pub type GaussRat = Complex<BigRational>;

/// Convenience constructor: the rational n/d.
pub fn rat(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

/// Convenience constructor: the integer n as a rational.
pub fn rat_i(n: i64) -> Rat {
    Rat::from(BigInt::from(n))
}

/// Convenience constructor: the Gaussian rational re + im·i (integers).
pub fn gauss_i(re: i64, im: i64) -> GaussRat {
    Complex::new(rat_i(re), rat_i(im))
}

/// Scalars the matrix code can work over: ℚ and ℚ(i).
pub trait Scalar:
    Clone
    + PartialEq
    + fmt::Debug
    + fmt::Display
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    /// Complex conjugation; the identity on ℚ.
    fn conj(&self) -> Self;
    /// Embed a rational.
    fn from_rat(r: &Rat) -> Self;
    /// Extract a rational if the value is real.
    fn as_rat(&self) -> Option<Rat>;
}

impl Scalar for Rat {
    fn conj(&self) -> Self {
        self.clone()
    }
    fn from_rat(r: &Rat) -> Self {
        r.clone()
    }
    fn as_rat(&self) -> Option<Rat> {
        Some(self.clone())
    }
}

impl Scalar for GaussRat {
    fn conj(&self) -> Self {
        Complex::new(self.re.clone(), -self.im.clone())
    }
    fn from_rat(r: &Rat) -> Self {
        Complex::new(r.clone(), Rat::zero())
    }
    fn as_rat(&self) -> Option<Rat> {
        if self.im.is_zero() {
            Some(self.re.clone())
        } else {
            None
        }
    }
}

// ---------------------------------------------------------------------------
// Matrix
// ---------------------------------------------------------------------------

/// Dense matrix with entries in `K`, stored row-major.
#[derive(Clone, PartialEq)]
pub struct Matrix<K: Scalar> {
    rows: usize,
    cols: usize,
    entries: Vec<K>,
}

impl<K: Scalar> fmt::Debug for Matrix<K> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|j| self.get(i, j).to_string()).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}

impl<K: Scalar> Matrix<K> {
    pub fn new(rows: usize, cols: usize, entries: Vec<K>) -> Result<Self> {
        if entries.len() != rows * cols {
            return Err(Error::input(format!(
                "matrix entry count {} does not match {}x{}",
                entries.len(),
                rows,
                cols
            )));
        }
        Ok(Matrix { rows, cols, entries })
    }

    pub fn from_rows(rows: Vec<Vec<K>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map(|x| x.len()).unwrap_or(0);
        if rows.iter().any(|x| x.len() != c) {
            return Err(Error::input("ragged rows in matrix literal"));
        }
        Ok(Matrix { rows: r, cols: c, entries: rows.into_iter().flatten().collect() })
    }

    pub fn zero(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, entries: vec![K::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Matrix::zero(n, n);
        for i in 0..n {
            m.set(i, i, K::one());
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &K {
        &self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: K) {
        self.entries[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> Vec<K> {
        self.entries[i * self.cols..(i + 1) * self.cols].to_vec()
    }

    pub fn entries(&self) -> &[K] {
        &self.entries
    }

    pub fn is_zero_matrix(&self) -> bool {
        self.entries.iter().all(|e| e.is_zero())
    }

    pub fn is_identity(&self) -> bool {
        self.rows == self.cols
            && (0..self.rows).all(|i| {
                (0..self.cols).all(|j| {
                    if i == j {
                        self.get(i, j).is_one()
                    } else {
                        self.get(i, j).is_zero()
                    }
                })
            })
    }

    pub fn transpose(&self) -> Self {
        let mut m = Matrix::zero(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                m.set(j, i, self.get(i, j).clone());
            }
        }
        m
    }

    pub fn map<L: Scalar>(&self, f: impl Fn(&K) -> L) -> Matrix<L> {
        Matrix { rows: self.rows, cols: self.cols, entries: self.entries.iter().map(f).collect() }
    }

    /// Entrywise complex conjugation.
    pub fn conj(&self) -> Self {
        self.map(|e| e.conj())
    }

    pub fn scale(&self, s: &K) -> Self {
        self.map(|e| e.clone() * s.clone())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::input("matrix addition shape mismatch"));
        }
        Ok(Matrix {
            rows: self.rows,
            cols: self.cols,
            entries: self
                .entries
                .iter()
                .zip(&other.entries)
                .map(|(a, b)| a.clone() + b.clone())
                .collect(),
        })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.map(|e| -e.clone()))
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::input(format!(
                "matrix product shape mismatch: {}x{} times {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut m = Matrix::zero(self.rows, other.cols);
        for i in 0..self.rows {
            for j in 0..other.cols {
                let mut acc = K::zero();
                for k in 0..self.cols {
                    acc = acc + self.get(i, k).clone() * other.get(k, j).clone();
                }
                m.set(i, j, acc);
            }
        }
        Ok(m)
    }

    /// Apply the map to a row vector: v ↦ v·M.
    pub fn apply_row(&self, v: &[K]) -> Result<Vec<K>> {
        if v.len() != self.rows {
            return Err(Error::input("row vector length does not match matrix rows"));
        }
        let mut out = vec![K::zero(); self.cols];
        for (i, vi) in v.iter().enumerate() {
            if vi.is_zero() {
                continue;
            }
            for (j, slot) in out.iter_mut().enumerate() {
                *slot = slot.clone() + vi.clone() * self.get(i, j).clone();
            }
        }
        Ok(out)
    }

    /// Stack `other` below `self`.
    pub fn vstack(&self, other: &Self) -> Result<Self> {
        if self.cols != other.cols {
            return Err(Error::input("vstack column mismatch"));
        }
        let mut entries = self.entries.clone();
        entries.extend(other.entries.iter().cloned());
        Ok(Matrix { rows: self.rows + other.rows, cols: self.cols, entries })
    }

    /// Place `other` to the right of `self`.
    pub fn hstack(&self, other: &Self) -> Result<Self> {
        if self.rows != other.rows {
            return Err(Error::input("hstack row mismatch"));
        }
        let mut m = Matrix::zero(self.rows, self.cols + other.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                m.set(i, j, self.get(i, j).clone());
            }
            for j in 0..other.cols {
                m.set(i, self.cols + j, other.get(i, j).clone());
            }
        }
        Ok(m)
    }

    /// Unique reduced row-echelon form together with the pivot columns.
    pub fn rref_with_pivots(&self) -> (Self, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut pivot_row = 0usize;
        for col in 0..m.cols {
            if pivot_row >= m.rows {
                break;
            }
            // Find a row at or below pivot_row with a nonzero entry in this column.
            let found = (pivot_row..m.rows).find(|&r| !m.get(r, col).is_zero());
            let r = match found {
                Some(r) => r,
                None => continue,
            };
            if r != pivot_row {
                for j in 0..m.cols {
                    let a = m.get(pivot_row, j).clone();
                    let b = m.get(r, j).clone();
                    m.set(pivot_row, j, b);
                    m.set(r, j, a);
                }
            }
            let p = m.get(pivot_row, col).clone();
            for j in col..m.cols {
                let v = m.get(pivot_row, j).clone() / p.clone();
                m.set(pivot_row, j, v);
            }
            for i in 0..m.rows {
                if i == pivot_row || m.get(i, col).is_zero() {
                    continue;
                }
                let f = m.get(i, col).clone();
                for j in col..m.cols {
                    let v = m.get(i, j).clone() - f.clone() * m.get(pivot_row, j).clone();
                    m.set(i, j, v);
                }
            }
            pivots.push(col);
            pivot_row += 1;
        }
        (m, pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref_with_pivots().1.len()
    }

    /// Inverse of a square matrix, or None when singular.
    pub fn inverse(&self) -> Option<Self> {
        if self.rows != self.cols {
            return None;
        }
        let aug = self.hstack(&Matrix::identity(self.rows)).expect("shapes agree");
        let (r, pivots) = aug.rref_with_pivots();
        if pivots.len() != self.rows || pivots.iter().enumerate().any(|(i, &p)| p != i) {
            return None;
        }
        let mut inv = Matrix::zero(self.rows, self.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                inv.set(i, j, r.get(i, self.cols + j).clone());
            }
        }
        Some(inv)
    }

    /// Right kernel {v : M·v = 0}, in canonical form.
    pub fn kernel(&self) -> Subspace<K> {
        let (r, pivots) = self.rref_with_pivots();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        let mut basis = Vec::new();
        for &fc in &free {
            let mut v = vec![K::zero(); self.cols];
            v[fc] = K::one();
            for (row, &pc) in pivots.iter().enumerate() {
                v[pc] = -r.get(row, fc).clone();
            }
            basis.push(v);
        }
        Subspace::from_rows(self.cols, basis)
    }

    /// Left kernel {v : v·M = 0} — the kernel of the row-action map.
    pub fn left_kernel(&self) -> Subspace<K> {
        self.transpose().kernel()
    }

    /// Column space, as a subspace of K^rows.
    pub fn image(&self) -> Subspace<K> {
        self.transpose().row_space()
    }

    /// Row space — the image of the row-action map v ↦ v·M is the row space of M
    /// applied to a full source, i.e. the span of the rows.
    pub fn row_space(&self) -> Subspace<K> {
        let rows: Vec<Vec<K>> = (0..self.rows).map(|i| self.row(i)).collect();
        Subspace::from_rows(self.cols, rows)
    }

    /// Solve M·w = v (column semantics). Returns None when v ∉ image(M).
    pub fn solve(&self, v: &[K]) -> Option<Vec<K>> {
        if v.len() != self.rows {
            return None;
        }
        let mut aug = Matrix::zero(self.rows, self.cols + 1);
        for (i, vi) in v.iter().enumerate() {
            for j in 0..self.cols {
                aug.set(i, j, self.get(i, j).clone());
            }
            aug.set(i, self.cols, vi.clone());
        }
        let (r, pivots) = aug.rref_with_pivots();
        // Inconsistent iff a pivot lands in the augmented column.
        if pivots.contains(&self.cols) {
            return None;
        }
        let mut w = vec![K::zero(); self.cols];
        for (row, &pc) in pivots.iter().enumerate() {
            w[pc] = r.get(row, self.cols).clone();
        }
        Some(w)
    }

    /// Solve x·M = v (row semantics).
    pub fn solve_left(&self, v: &[K]) -> Option<Vec<K>> {
        self.transpose().solve(v)
    }

    /// Solve X·M = C row-by-row: expresses every row of `c` as a combination of
    /// the rows of `self`. Returns None when some row is not in the row space.
    pub fn factor_rows(&self, c: &Matrix<K>) -> Option<Matrix<K>> {
        if c.cols != self.cols {
            return None;
        }
        let mut out = Matrix::zero(c.rows, self.rows);
        for i in 0..c.rows {
            let x = self.solve_left(&c.row(i))?;
            for (j, xj) in x.into_iter().enumerate() {
                out.set(i, j, xj);
            }
        }
        Some(out)
    }
}

impl Matrix<Rat> {
    /// Extend scalars to ℚ(i).
    pub fn to_gauss(&self) -> Matrix<GaussRat> {
        self.map(GaussRat::from_rat)
    }
}

impl Matrix<GaussRat> {
    /// Restrict scalars to ℚ when every entry is real.
    pub fn try_to_rat(&self) -> Option<Matrix<Rat>> {
        let mut entries = Vec::with_capacity(self.entries.len());
        for e in &self.entries {
            entries.push(e.as_rat()?);
        }
        Some(Matrix { rows: self.rows, cols: self.cols, entries })
    }
}

/// Unique reduced row-echelon form (free-function spelling of
/// [`Matrix::rref_with_pivots`]).
pub fn rref<K: Scalar>(m: &Matrix<K>) -> Matrix<K> {
    m.rref_with_pivots().0
}

/// Entrywise complex conjugation (free-function spelling of [`Matrix::conj`]).
pub fn conj_matrix(m: &Matrix<GaussRat>) -> Matrix<GaussRat> {
    m.conj()
}

// ---------------------------------------------------------------------------
// Subspace
// ---------------------------------------------------------------------------

/// Subspace of K^n, stored as an RREF basis with zero rows removed. The RREF
/// basis of a span is unique, so `==` decides equality of subspaces.
#[derive(Clone, PartialEq)]
pub struct Subspace<K: Scalar> {
    ambient_dim: usize,
    basis: Matrix<K>,
    pivots: Vec<usize>,
}

impl<K: Scalar> fmt::Debug for Subspace<K> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Subspace(dim {} of K^{}) {:?}", self.dim(), self.ambient_dim, self.basis)
    }
}

impl<K: Scalar> Subspace<K> {
    /// Span of the given row vectors inside K^ambient_dim.
    pub fn from_rows(ambient_dim: usize, rows: Vec<Vec<K>>) -> Self {
        let m = Matrix::from_rows(if rows.is_empty() {
            Vec::new()
        } else {
            rows
        })
        .expect("caller provides equal-length rows");
        if m.rows() == 0 {
            return Subspace {
                ambient_dim,
                basis: Matrix::zero(0, ambient_dim),
                pivots: Vec::new(),
            };
        }
        assert_eq!(m.cols(), ambient_dim, "span vectors must have ambient length");
        Self::from_matrix_rows(ambient_dim, &m)
    }

    /// Span of the rows of a matrix.
    pub fn from_matrix_rows(ambient_dim: usize, m: &Matrix<K>) -> Self {
        assert_eq!(m.cols(), ambient_dim);
        let (r, pivots) = m.rref_with_pivots();
        let mut rows = Vec::new();
        for i in 0..pivots.len() {
            rows.push(r.row(i));
        }
        let basis = if rows.is_empty() {
            Matrix::zero(0, ambient_dim)
        } else {
            Matrix::from_rows(rows).expect("rref rows are rectangular")
        };
        Subspace { ambient_dim, basis, pivots }
    }

    pub fn zero(ambient_dim: usize) -> Self {
        Subspace { ambient_dim, basis: Matrix::zero(0, ambient_dim), pivots: Vec::new() }
    }

    pub fn full(ambient_dim: usize) -> Self {
        Subspace {
            ambient_dim,
            basis: Matrix::identity(ambient_dim),
            pivots: (0..ambient_dim).collect(),
        }
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn dim(&self) -> usize {
        self.basis.rows()
    }

    pub fn is_zero(&self) -> bool {
        self.dim() == 0
    }

    pub fn is_full(&self) -> bool {
        self.dim() == self.ambient_dim
    }

    /// Canonical (RREF) basis, one row per basis vector.
    pub fn basis(&self) -> &Matrix<K> {
        &self.basis
    }

    pub fn basis_rows(&self) -> Vec<Vec<K>> {
        (0..self.dim()).map(|i| self.basis.row(i)).collect()
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    /// Residual of v after eliminating along the RREF basis. Zero iff v lies
    /// in the subspace.
    pub fn reduce(&self, v: &[K]) -> Vec<K> {
        assert_eq!(v.len(), self.ambient_dim);
        let mut res = v.to_vec();
        for (row, &p) in self.pivots.iter().enumerate() {
            let c = res[p].clone();
            if c.is_zero() {
                continue;
            }
            for (j, slot) in res.iter_mut().enumerate() {
                *slot = slot.clone() - c.clone() * self.basis.get(row, j).clone();
            }
        }
        res
    }

    pub fn contains_vec(&self, v: &[K]) -> bool {
        self.reduce(v).iter().all(|e| e.is_zero())
    }

    pub fn contains(&self, other: &Subspace<K>) -> bool {
        other.basis_rows().iter().all(|v| self.contains_vec(v))
    }

    /// Coordinates of v w.r.t. the canonical basis (x with x·basis = v), if
    /// v lies in the subspace. Because the basis is RREF, the coordinate on
    /// basis row r is just v[pivot(r)].
    pub fn coords(&self, v: &[K]) -> Option<Vec<K>> {
        if !self.contains_vec(v) {
            return None;
        }
        Some(self.pivots.iter().map(|&p| v[p].clone()).collect())
    }

    pub fn sum(&self, other: &Subspace<K>) -> Result<Subspace<K>> {
        if self.ambient_dim != other.ambient_dim {
            return Err(Error::input("subspace sum: ambient dimension mismatch"));
        }
        let mut rows = self.basis_rows();
        rows.extend(other.basis_rows());
        Ok(Subspace::from_rows(self.ambient_dim, rows))
    }

    /// Intersection via the left kernel of the stacked bases: for basis
    /// matrices A, B, the combinations (u, v) with u·A + v·B = 0 parametrize
    /// the intersection as u·A.
    pub fn intersect(&self, other: &Subspace<K>) -> Result<Subspace<K>> {
        if self.ambient_dim != other.ambient_dim {
            return Err(Error::input("subspace intersection: ambient dimension mismatch"));
        }
        if self.is_zero() || other.is_zero() {
            return Ok(Subspace::zero(self.ambient_dim));
        }
        let stacked = self.basis.vstack(&other.basis)?;
        let lk = stacked.left_kernel();
        let mut rows = Vec::new();
        for uv in lk.basis_rows() {
            let u = &uv[..self.dim()];
            rows.push(self.basis.apply_row(u)?);
        }
        Ok(Subspace::from_rows(self.ambient_dim, rows))
    }

    /// Image of the subspace under the row-action map v ↦ v·M.
    pub fn apply(&self, m: &Matrix<K>) -> Result<Subspace<K>> {
        if m.rows() != self.ambient_dim {
            return Err(Error::input("subspace apply: matrix shape mismatch"));
        }
        let rows: Result<Vec<Vec<K>>> =
            self.basis_rows().iter().map(|v| m.apply_row(v)).collect();
        Ok(Subspace::from_rows(m.cols(), rows?))
    }
}

impl Subspace<Rat> {
    /// Extend scalars to ℚ(i); the RREF basis over ℚ stays RREF over ℚ(i).
    pub fn to_gauss(&self) -> Subspace<GaussRat> {
        Subspace {
            ambient_dim: self.ambient_dim,
            basis: self.basis.to_gauss(),
            pivots: self.pivots.clone(),
        }
    }
}

impl Subspace<GaussRat> {
    /// Entrywise conjugate of the span (the span of the conjugated basis).
    pub fn conj(&self) -> Subspace<GaussRat> {
        Subspace::from_matrix_rows(self.ambient_dim, &self.basis.conj())
    }
}

/// Coset representatives completing `sub` to `ambient`: the rows of the
/// canonical basis of `ambient` whose pivot column is not a pivot column of
/// `sub`. Deterministic, and a genuine complement of `sub` inside `ambient`
/// (leading coordinates of the two row families are disjoint).
pub fn quotient_basis<K: Scalar>(
    ambient: &Subspace<K>,
    sub: &Subspace<K>,
) -> Result<Vec<Vec<K>>> {
    if ambient.ambient_dim() != sub.ambient_dim() {
        return Err(Error::input("quotient_basis: ambient dimension mismatch"));
    }
    if !ambient.contains(sub) {
        return Err(Error::input("quotient_basis: sub is not contained in ambient"));
    }
    let sub_pivots = sub.pivots();
    let mut reps = Vec::new();
    for (row, &p) in ambient.pivots().iter().enumerate() {
        if !sub_pivots.contains(&p) {
            reps.push(ambient.basis().row(row));
        }
    }
    debug_assert_eq!(reps.len(), ambient.dim() - sub.dim());
    Ok(reps)
}

/// Coordinates on the quotient `inside / sub`: given representatives `reps`
/// (completing `sub` to the space containing `v`), expresses `v` as
/// Σ aᵢ·repᵢ + (element of sub) and returns the aᵢ. None when v is not in
/// span(reps) + sub.
pub fn quotient_coords<K: Scalar>(
    reps: &[Vec<K>],
    sub: &Subspace<K>,
    v: &[K],
) -> Option<Vec<K>> {
    let d = reps.len();
    let mut rows = reps.to_vec();
    rows.extend(sub.basis_rows());
    if rows.is_empty() {
        return if v.iter().all(|e| e.is_zero()) { Some(Vec::new()) } else { None };
    }
    let stacked = Matrix::from_rows(rows).ok()?;
    let x = stacked.solve_left(v)?;
    Some(x[..d].to_vec())
}
