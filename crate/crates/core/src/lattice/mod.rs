//! Exact integer and rational lattice algebra.
//!
//! Integer matrices with arbitrary-precision entries, Smith and Hermite
//! normal forms, saturated sublattices of `Z^N`, Gram/covolume data, and
//! (in [`quotient`]) quotient metrics with shortest-vector enumeration.

mod quotient;

pub use quotient::{enumerate_quadratic, sign_normalize, FirstMinimum, QuotientLattice};

pub(crate) use quotient::norm_sq_int;

use crate::{Error, Int, Rat, Result};
use num::{One, Signed, Zero};
use std::fmt;

/// Dense integer matrix, row-major, arbitrary-precision entries.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Int>,
}

impl IntMatrix {
    pub fn zero(rows: usize, cols: usize) -> Self {
        IntMatrix { rows, cols, data: vec![Int::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zero(n, n);
        for i in 0..n {
            m.set(i, i, Int::one());
        }
        m
    }

    pub fn from_rows<T: Into<Int> + Clone>(rows: &[Vec<T>]) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        let mut m = Self::zero(r, c);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != c {
                return Err(Error::Dimension("ragged rows".into()));
            }
            for (j, e) in row.iter().enumerate() {
                m.set(i, j, e.clone().into());
            }
        }
        Ok(m)
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Int) -> Self {
        let mut m = Self::zero(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                m.set(i, j, f(i, j));
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

    pub fn get(&self, i: usize, j: usize) -> &Int {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Int) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[Int] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_vec(&self, i: usize) -> Vec<Int> {
        self.row(i).to_vec()
    }

    pub fn col_vec(&self, j: usize) -> Vec<Int> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Int::is_zero)
    }

    pub fn transpose(&self) -> IntMatrix {
        Self::from_fn(self.cols, self.rows, |i, j| self.get(j, i).clone())
    }

    pub fn mul(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, other.rows, "matrix product shape mismatch");
        let mut m = Self::zero(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let v = m.get(i, j) + a * other.get(k, j);
                    m.set(i, j, v);
                }
            }
        }
        m
    }

    /// `M * v` for a column vector `v`.
    pub fn mul_vec(&self, v: &[Int]) -> Vec<Int> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|i| self.row(i).iter().zip(v).map(|(a, b)| a * b).sum())
            .collect()
    }

    /// `v * M` for a row vector `v`.
    pub fn vec_mul(&self, v: &[Int]) -> Vec<Int> {
        assert_eq!(self.rows, v.len());
        (0..self.cols)
            .map(|j| (0..self.rows).map(|i| v[i].clone() * self.get(i, j)).sum())
            .collect()
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.data.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    /// `row_a -= q * row_b`
    fn row_sub(&mut self, a: usize, b: usize, q: &Int) {
        if q.is_zero() {
            return;
        }
        for j in 0..self.cols {
            let v = self.get(a, j) - q * self.get(b, j);
            self.set(a, j, v);
        }
    }

    fn col_sub(&mut self, a: usize, b: usize, q: &Int) {
        if q.is_zero() {
            return;
        }
        for i in 0..self.rows {
            let v = self.get(i, a) - q * self.get(i, b);
            self.set(i, a, v);
        }
    }

    fn negate_row(&mut self, i: usize) {
        for j in 0..self.cols {
            let v = -self.get(i, j).clone();
            self.set(i, j, v);
        }
    }

    /// Exact determinant by fraction-free (Bareiss) elimination.
    pub fn det(&self) -> Int {
        assert_eq!(self.rows, self.cols, "determinant of non-square matrix");
        let n = self.rows;
        if n == 0 {
            return Int::one();
        }
        let mut a = self.clone();
        let mut prev = Int::one();
        let mut sign = Int::one();
        for k in 0..n - 1 {
            if a.get(k, k).is_zero() {
                let Some(p) = (k + 1..n).find(|&i| !a.get(i, k).is_zero()) else {
                    return Int::zero();
                };
                a.swap_rows(k, p);
                sign = -sign;
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = (a.get(i, j) * a.get(k, k) - a.get(i, k) * a.get(k, j)) / &prev;
                    a.set(i, j, v);
                }
            }
            for i in k + 1..n {
                a.set(i, k, Int::zero());
            }
            prev = a.get(k, k).clone();
        }
        sign * a.get(n - 1, n - 1).clone()
    }

    /// Rank over the rationals.
    pub fn rank(&self) -> usize {
        rational_rank(&self.to_rat())
    }

    pub fn to_rat(&self) -> Vec<Vec<Rat>> {
        (0..self.rows)
            .map(|i| self.row(i).iter().map(|e| Rat::from(e.clone())).collect())
            .collect()
    }

    /// Inverse of a unimodular integer matrix.
    pub fn inverse_unimodular(&self) -> Result<IntMatrix> {
        let inv = rat_inverse(&self.to_rat())
            .ok_or_else(|| Error::Invalid("matrix is singular".into()))?;
        let n = self.rows;
        let mut m = IntMatrix::zero(n, n);
        for i in 0..n {
            for j in 0..n {
                if !inv[i][j].denom().is_one() {
                    return Err(Error::Invalid("matrix is not unimodular".into()));
                }
                m.set(i, j, inv[i][j].numer().clone());
            }
        }
        Ok(m)
    }

    /// Smith normal form: returns `(U, D, V)` with `U * M * V = D`,
    /// `U`, `V` unimodular and `D` diagonal with `d_1 | d_2 | ...`.
    pub fn smith_normal_form(&self) -> Snf {
        let mut d = self.clone();
        let mut u = IntMatrix::identity(self.rows);
        let mut v = IntMatrix::identity(self.cols);
        let bound = self.rows.min(self.cols);
        let mut t = 0;
        while t < bound {
            // move a minimal-magnitude nonzero entry of the trailing block to (t, t)
            let mut pivot: Option<(usize, usize)> = None;
            for i in t..self.rows {
                for j in t..self.cols {
                    if !d.get(i, j).is_zero()
                        && pivot.is_none_or(|(pi, pj)| d.get(i, j).abs() < d.get(pi, pj).abs())
                    {
                        pivot = Some((i, j));
                    }
                }
            }
            let Some((pi, pj)) = pivot else { break };
            d.swap_rows(t, pi);
            u.swap_rows(t, pi);
            d.swap_cols(t, pj);
            v.swap_cols(t, pj);

            'reduce: loop {
                // clear the pivot column
                for i in t + 1..self.rows {
                    if !d.get(i, t).is_zero() {
                        let q = rounded_quotient(d.get(i, t), d.get(t, t));
                        d.row_sub(i, t, &q);
                        u.row_sub(i, t, &q);
                        if !d.get(i, t).is_zero() {
                            // remainder became the smaller pivot
                            d.swap_rows(t, i);
                            u.swap_rows(t, i);
                            continue 'reduce;
                        }
                    }
                }
                // clear the pivot row
                for j in t + 1..self.cols {
                    if !d.get(t, j).is_zero() {
                        let q = rounded_quotient(d.get(t, j), d.get(t, t));
                        d.col_sub(j, t, &q);
                        v.col_sub(j, t, &q);
                        if !d.get(t, j).is_zero() {
                            d.swap_cols(t, j);
                            v.swap_cols(t, j);
                            continue 'reduce;
                        }
                    }
                }
                // force divisibility of the trailing block by the pivot
                for i in t + 1..self.rows {
                    for j in t + 1..self.cols {
                        if !(d.get(i, j) % d.get(t, t)).is_zero() {
                            // add row i to row t and restart the reduction
                            let minus_one = -Int::one();
                            d.row_sub(t, i, &minus_one);
                            u.row_sub(t, i, &minus_one);
                            continue 'reduce;
                        }
                    }
                }
                break;
            }
            if d.get(t, t).is_negative() {
                d.negate_row(t);
                u.negate_row(t);
            }
            t += 1;
        }
        Snf { u, d, v }
    }

    /// Row-style Hermite normal form of the row lattice: canonical basis with
    /// positive pivots, entries above each pivot reduced into `[0, pivot)`.
    /// Zero rows are dropped, so the result has `rank` rows.
    pub fn hnf(&self) -> IntMatrix {
        let mut h = self.clone();
        let mut r = 0;
        for j in 0..self.cols {
            if r == h.rows {
                break;
            }
            loop {
                let Some(p) = (r..h.rows)
                    .filter(|&i| !h.get(i, j).is_zero())
                    .min_by_key(|&i| h.get(i, j).abs())
                else {
                    break;
                };
                h.swap_rows(r, p);
                let mut done = true;
                for i in r + 1..h.rows {
                    if !h.get(i, j).is_zero() {
                        let q = rounded_quotient(h.get(i, j), h.get(r, j));
                        h.row_sub(i, r, &q);
                        if !h.get(i, j).is_zero() {
                            done = false;
                        }
                    }
                }
                if done {
                    break;
                }
            }
            if h.get(r, j).is_zero() {
                continue;
            }
            if h.get(r, j).is_negative() {
                h.negate_row(r);
            }
            for i in 0..r {
                let q = h.get(i, j).div_euclid(h.get(r, j));
                h.row_sub(i, r, &q);
            }
            r += 1;
        }
        let mut out = IntMatrix::zero(r, self.cols);
        for i in 0..r {
            for j in 0..self.cols {
                out.set(i, j, h.get(i, j).clone());
            }
        }
        out
    }

    /// Gram matrix of the rows.
    pub fn gram(&self) -> IntMatrix {
        self.mul(&self.transpose())
    }
}

impl fmt::Display for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            writeln!(f, "{:?}", self.row(i))?;
        }
        Ok(())
    }
}

/// Result of [`IntMatrix::smith_normal_form`].
#[derive(Debug, Clone)]
pub struct Snf {
    pub u: IntMatrix,
    pub d: IntMatrix,
    pub v: IntMatrix,
}

impl Snf {
    /// Nonzero diagonal entries `d_1 | d_2 | ...`.
    pub fn elementary_divisors(&self) -> Vec<Int> {
        let n = self.d.rows().min(self.d.cols());
        (0..n)
            .map(|i| self.d.get(i, i).clone())
            .filter(|e| !e.is_zero())
            .collect()
    }

    pub fn rank(&self) -> usize {
        self.elementary_divisors().len()
    }
}

/// Quotient rounded to nearest (ties toward zero), so the remainder has
/// magnitude at most `|b|/2`.
fn rounded_quotient(a: &Int, b: &Int) -> Int {
    let (mut q, r) = num::Integer::div_rem(a, b);
    let two_r = Int::from(2) * r.abs();
    if two_r > b.abs() {
        if (a.is_negative()) == (b.is_negative()) {
            q += 1;
        } else {
            q -= 1;
        }
    }
    q
}

trait DivEuclidExt {
    fn div_euclid(&self, other: &Int) -> Int;
}

impl DivEuclidExt for Int {
    fn div_euclid(&self, other: &Int) -> Int {
        num::Integer::div_floor(self, other)
    }
}

/// Rank of a rational matrix by Gaussian elimination.
pub fn rational_rank(m: &[Vec<Rat>]) -> usize {
    let rows = m.len();
    if rows == 0 {
        return 0;
    }
    let cols = m[0].len();
    let mut a: Vec<Vec<Rat>> = m.to_vec();
    let mut rank = 0;
    for j in 0..cols {
        if rank == rows {
            break;
        }
        let Some(p) = (rank..rows).find(|&i| !a[i][j].is_zero()) else {
            continue;
        };
        a.swap(rank, p);
        let pivot = a[rank][j].clone();
        for i in rank + 1..rows {
            if !a[i][j].is_zero() {
                let f = &a[i][j] / &pivot;
                for l in j..cols {
                    let v = &a[i][l] - &f * &a[rank][l];
                    a[i][l] = v;
                }
            }
        }
        rank += 1;
    }
    rank
}

/// Inverse of a square rational matrix; `None` if singular.
pub fn rat_inverse(m: &[Vec<Rat>]) -> Option<Vec<Vec<Rat>>> {
    let n = m.len();
    let mut a = m.to_vec();
    let mut inv: Vec<Vec<Rat>> = (0..n)
        .map(|i| (0..n).map(|j| if i == j { Rat::one() } else { Rat::zero() }).collect())
        .collect();
    for j in 0..n {
        let p = (j..n).find(|&i| !a[i][j].is_zero())?;
        a.swap(j, p);
        inv.swap(j, p);
        let pivot = a[j][j].clone();
        for l in 0..n {
            a[j][l] /= &pivot;
            inv[j][l] /= &pivot;
        }
        for i in 0..n {
            if i != j && !a[i][j].is_zero() {
                let f = a[i][j].clone();
                for l in 0..n {
                    let v = &a[i][l] - &f * &a[j][l];
                    a[i][l] = v;
                    let w = &inv[i][l] - &f * &inv[j][l];
                    inv[i][l] = w;
                }
            }
        }
    }
    Some(inv)
}

/// A sublattice of `Z^N` given by a basis of linearly independent rows,
/// stored in canonical Hermite normal form.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Sublattice {
    ambient: usize,
    basis: IntMatrix,
    saturated: bool,
}

impl Sublattice {
    /// Builds from basis rows; rejects linearly dependent input.
    pub fn from_basis(ambient: usize, rows: &[Vec<Int>]) -> Result<Self> {
        for r in rows {
            if r.len() != ambient {
                return Err(Error::Dimension(format!(
                    "basis vector length {} in ambient {}",
                    r.len(),
                    ambient
                )));
            }
        }
        let m = IntMatrix::from_rows(rows)?;
        let h = if rows.is_empty() { IntMatrix::zero(0, ambient) } else { m.hnf() };
        if h.rows() != rows.len() {
            return Err(Error::Invalid("basis rows are linearly dependent".into()));
        }
        Ok(Self::from_hnf(ambient, h))
    }

    /// Builds from a generating set (dependencies allowed).
    pub fn from_generators(ambient: usize, rows: &[Vec<Int>]) -> Result<Self> {
        for r in rows {
            if r.len() != ambient {
                return Err(Error::Dimension("generator length mismatch".into()));
            }
        }
        let h = if rows.is_empty() {
            IntMatrix::zero(0, ambient)
        } else {
            IntMatrix::from_rows(rows)?.hnf()
        };
        Ok(Self::from_hnf(ambient, h))
    }

    fn from_hnf(ambient: usize, h: IntMatrix) -> Self {
        let saturated = if h.rows() == 0 {
            true
        } else {
            h.smith_normal_form()
                .elementary_divisors()
                .iter()
                .all(Int::is_one)
        };
        Sublattice { ambient, basis: h, saturated }
    }

    pub fn zero(ambient: usize) -> Self {
        Sublattice { ambient, basis: IntMatrix::zero(0, ambient), saturated: true }
    }

    pub fn full(ambient: usize) -> Self {
        Sublattice { ambient, basis: IntMatrix::identity(ambient), saturated: true }
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient
    }

    pub fn rank(&self) -> usize {
        self.basis.rows()
    }

    pub fn basis(&self) -> &IntMatrix {
        &self.basis
    }

    pub fn basis_rows(&self) -> Vec<Vec<Int>> {
        (0..self.rank()).map(|i| self.basis.row_vec(i)).collect()
    }

    pub fn is_saturated(&self) -> bool {
        self.saturated
    }

    /// Coordinates of `v` in the basis, or `None` if `v` is not in the lattice.
    pub fn coordinates(&self, v: &[Int]) -> Option<Vec<Int>> {
        if v.len() != self.ambient {
            return None;
        }
        let mut rem: Vec<Int> = v.to_vec();
        let mut coeffs = vec![Int::zero(); self.rank()];
        for i in 0..self.rank() {
            // pivot column of row i
            let j = (0..self.ambient).find(|&j| !self.basis.get(i, j).is_zero())?;
            let (q, r) = num::Integer::div_rem(&rem[j], self.basis.get(i, j));
            if !r.is_zero() {
                return None;
            }
            for l in 0..self.ambient {
                let v = &rem[l] - &q * self.basis.get(i, l);
                rem[l] = v;
            }
            coeffs[i] = q;
        }
        if rem.iter().all(Int::is_zero) {
            Some(coeffs)
        } else {
            None
        }
    }

    pub fn contains_vector(&self, v: &[Int]) -> bool {
        self.coordinates(v).is_some()
    }

    pub fn contains_lattice(&self, other: &Sublattice) -> bool {
        other
            .basis_rows()
            .iter()
            .all(|r| self.contains_vector(r))
    }

    /// Index of this lattice inside its saturation (product of elementary
    /// divisors of the basis).
    pub fn index_in_saturation(&self) -> Int {
        self.basis
            .smith_normal_form()
            .elementary_divisors()
            .iter()
            .product()
    }

    /// Squared covolume: determinant of the Gram matrix of the basis.
    pub fn covolume_sq(&self) -> Rat {
        Rat::from(self.basis.gram().det())
    }

    /// Smallest saturated sublattice containing this one (same rank).
    pub fn saturate(&self) -> Sublattice {
        if self.saturated {
            return self.clone();
        }
        // double integer-orthogonal complement
        let perp = kernel_basis(&self.basis);
        kernel_basis(perp.basis())
    }

    /// Intersection with another sublattice of the same ambient space.
    pub fn intersect(&self, other: &Sublattice) -> Result<Sublattice> {
        if self.ambient != other.ambient {
            return Err(Error::Dimension("ambient mismatch in intersection".into()));
        }
        let a = self.rank();
        let b = other.rank();
        if a == 0 || b == 0 {
            return Ok(Sublattice::zero(self.ambient));
        }
        // solve x * A = y * B: kernel of the N x (a+b) matrix [A^T | -B^T]
        let stacked = IntMatrix::from_fn(self.ambient, a + b, |i, j| {
            if j < a {
                self.basis.get(j, i).clone()
            } else {
                -other.basis.get(j - a, i).clone()
            }
        });
        let ker = kernel_basis(&stacked);
        let rows: Vec<Vec<Int>> = (0..ker.rank())
            .map(|r| {
                let xy = ker.basis().row(r);
                self.basis.vec_mul(&xy[..a])
            })
            .collect();
        Sublattice::from_generators(self.ambient, &rows)
    }
}

/// Saturated basis of the integer kernel `{v : M v = 0}` of `M`.
/// The ambient dimension of the result is the number of columns of `M`.
pub fn kernel_basis(m: &IntMatrix) -> Sublattice {
    let n = m.cols();
    if m.rows() == 0 {
        return Sublattice::full(n);
    }
    let snf = m.smith_normal_form();
    let r = snf.rank();
    // kernel = span of the last n - r columns of V
    let rows: Vec<Vec<Int>> = (r..n).map(|j| snf.v.col_vec(j)).collect();
    Sublattice::from_basis(n, &rows).expect("SNF kernel columns are independent")
}
