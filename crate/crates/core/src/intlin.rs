//! Dense matrices over the integers: Smith and Hermite normal forms with
//! transformation matrices, kernels, lattice solving and integer eigenpairs.
//!
//! Entries are arbitrary precision. Coefficient blow-up during elimination is
//! real for the coboundary and substitution matrices handled here, so no fixed
//! width type is used anywhere.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub type IntVector = Vec<BigInt>;

/// Row-major dense integer matrix.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix {
            rows,
            cols,
            data: vec![BigInt::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = BigInt::one();
        }
        m
    }

    pub fn from_rows<T: Clone + Into<BigInt>>(rows: &[Vec<T>]) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        let mut data = Vec::with_capacity(r * c);
        for row in rows {
            if row.len() != c {
                return Err(Error::Dimension("ragged rows".into()));
            }
            data.extend(row.iter().cloned().map(Into::into));
        }
        Ok(IntMatrix { rows: r, cols: c, data })
    }

    /// Builds from `rows × cols` entries in row-major order.
    pub fn from_vec(rows: usize, cols: usize, data: Vec<BigInt>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::Dimension("entry count does not match shape".into()));
        }
        Ok(IntMatrix { rows, cols, data })
    }

    pub fn from_columns(rows: usize, columns: &[IntVector]) -> Result<Self> {
        let mut m = Self::zeros(rows, columns.len());
        for (j, col) in columns.iter().enumerate() {
            if col.len() != rows {
                return Err(Error::Dimension("column length".into()));
            }
            for (i, v) in col.iter().enumerate() {
                m.data[i * m.cols + j] = v.clone();
            }
        }
        Ok(m)
    }

    pub fn diagonal(entries: &[BigInt]) -> Self {
        let n = entries.len();
        let mut m = Self::zeros(n, n);
        for (i, e) in entries.iter().enumerate() {
            m.data[i * n + i] = e.clone();
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

    pub fn entry_mut(&mut self, i: usize, j: usize) -> &mut BigInt {
        &mut self.data[i * self.cols + j]
    }

    pub fn row(&self, i: usize) -> &[BigInt] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> IntVector {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn columns(&self) -> Vec<IntVector> {
        (0..self.cols).map(|j| self.column(j)).collect()
    }

    pub fn to_rows(&self) -> Vec<IntVector> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn transpose(&self) -> IntMatrix {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.data[j * self.rows + i] = self.get(i, j).clone();
            }
        }
        t
    }

    pub fn mul(&self, rhs: &IntMatrix) -> Result<IntMatrix> {
        if self.cols != rhs.rows {
            return Err(Error::Dimension(alloc::format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        let mut out = Self::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let b = rhs.get(k, j);
                    if !b.is_zero() {
                        out.data[i * rhs.cols + j] += a * b;
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &[BigInt]) -> Result<IntVector> {
        if v.len() != self.cols {
            return Err(Error::Dimension("vector length".into()));
        }
        Ok((0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .filter(|(a, b)| !a.is_zero() && !b.is_zero())
                    .map(|(a, b)| a * b)
                    .sum()
            })
            .collect())
    }

    pub fn add(&self, rhs: &IntMatrix) -> Result<IntMatrix> {
        if self.rows != rhs.rows || self.cols != rhs.cols {
            return Err(Error::Dimension("sum of differently shaped matrices".into()));
        }
        Ok(IntMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect(),
        })
    }

    pub fn sub(&self, rhs: &IntMatrix) -> Result<IntMatrix> {
        if self.rows != rhs.rows || self.cols != rhs.cols {
            return Err(Error::Dimension("difference of differently shaped matrices".into()));
        }
        Ok(IntMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect(),
        })
    }

    pub fn scale(&self, k: &BigInt) -> IntMatrix {
        IntMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|a| a * k).collect(),
        }
    }

    pub fn pow(&self, k: u32) -> Result<IntMatrix> {
        if !self.is_square() {
            return Err(Error::Dimension("power of a non-square matrix".into()));
        }
        let mut acc = Self::identity(self.rows);
        for _ in 0..k {
            acc = acc.mul(self)?;
        }
        Ok(acc)
    }

    /// Concatenates columns: `[self | rhs]`.
    pub fn hstack(&self, rhs: &IntMatrix) -> Result<IntMatrix> {
        if self.rows != rhs.rows {
            return Err(Error::Dimension("hstack row mismatch".into()));
        }
        let mut out = Self::zeros(self.rows, self.cols + rhs.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(i, j, self.get(i, j).clone());
            }
            for j in 0..rhs.cols {
                out.set(i, self.cols + j, rhs.get(i, j).clone());
            }
        }
        Ok(out)
    }

    pub fn vstack(&self, rhs: &IntMatrix) -> Result<IntMatrix> {
        if self.cols != rhs.cols {
            return Err(Error::Dimension("vstack column mismatch".into()));
        }
        let mut data = self.data.clone();
        data.extend(rhs.data.iter().cloned());
        Ok(IntMatrix {
            rows: self.rows + rhs.rows,
            cols: self.cols,
            data,
        })
    }

    pub fn select_columns(&self, idx: &[usize]) -> IntMatrix {
        let mut out = Self::zeros(self.rows, idx.len());
        for i in 0..self.rows {
            for (k, &j) in idx.iter().enumerate() {
                out.set(i, k, self.get(i, j).clone());
            }
        }
        out
    }

    pub fn select_rows(&self, idx: &[usize]) -> IntMatrix {
        let mut data = Vec::with_capacity(idx.len() * self.cols);
        for &i in idx {
            data.extend_from_slice(self.row(i));
        }
        IntMatrix {
            rows: idx.len(),
            cols: self.cols,
            data,
        }
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

    /// row[dst] += k · row[src]
    fn add_row_multiple(&mut self, dst: usize, src: usize, k: &BigInt) {
        if k.is_zero() {
            return;
        }
        for j in 0..self.cols {
            let v = &self.data[src * self.cols + j] * k;
            if !v.is_zero() {
                self.data[dst * self.cols + j] += v;
            }
        }
    }

    /// col[dst] += k · col[src]
    fn add_col_multiple(&mut self, dst: usize, src: usize, k: &BigInt) {
        if k.is_zero() {
            return;
        }
        for i in 0..self.rows {
            let v = &self.data[i * self.cols + src] * k;
            if !v.is_zero() {
                self.data[i * self.cols + dst] += v;
            }
        }
    }

    fn negate_row(&mut self, i: usize) {
        for j in 0..self.cols {
            let v = -core::mem::take(&mut self.data[i * self.cols + j]);
            self.data[i * self.cols + j] = v;
        }
    }

    fn negate_col(&mut self, j: usize) {
        for i in 0..self.rows {
            let v = -core::mem::take(&mut self.data[i * self.cols + j]);
            self.data[i * self.cols + j] = v;
        }
    }

    /// Exact determinant by fraction-free (Bareiss) elimination.
    pub fn determinant(&self) -> Result<BigInt> {
        if !self.is_square() {
            return Err(Error::Dimension("determinant of a non-square matrix".into()));
        }
        let n = self.rows;
        if n == 0 {
            return Ok(BigInt::one());
        }
        let mut a = self.clone();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n - 1 {
            if a.get(k, k).is_zero() {
                match (k + 1..n).find(|&i| !a.get(i, k).is_zero()) {
                    Some(i) => {
                        a.swap_rows(i, k);
                        sign = -sign;
                    }
                    None => return Ok(BigInt::zero()),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = (a.get(i, j) * a.get(k, k) - a.get(i, k) * a.get(k, j)) / &prev;
                    a.set(i, j, v);
                }
            }
            prev = a.get(k, k).clone();
        }
        Ok(sign * a.get(n - 1, n - 1))
    }

    /// Rank over Q.
    pub fn rank(&self) -> usize {
        smith(self).rank()
    }

    pub fn max_abs_row_sum(&self) -> BigInt {
        (0..self.rows)
            .map(|i| self.row(i).iter().map(|v| v.abs()).sum::<BigInt>())
            .max()
            .unwrap_or_else(BigInt::zero)
    }
}

impl fmt::Display for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            let row: Vec<alloc::string::String> =
                self.row(i).iter().map(|v| alloc::format!("{v}")).collect();
            writeln!(f, "[{}]", row.join(", "))?;
        }
        Ok(())
    }
}

/// `U·A·V = D` with `U`, `V` unimodular and `D` diagonal, `d₁ | d₂ | …`.
///
/// The inverses of both transforms are carried along because the abelian
/// group layer needs them to map between ambient and normal-form coordinates.
#[derive(Clone, Debug)]
pub struct SmithDecomposition {
    pub u: IntMatrix,
    pub d: IntMatrix,
    pub v: IntMatrix,
    pub u_inv: IntMatrix,
    pub v_inv: IntMatrix,
}

impl SmithDecomposition {
    /// Diagonal entries, including zeros, up to `min(rows, cols)`.
    pub fn diagonal(&self) -> Vec<BigInt> {
        (0..self.d.rows().min(self.d.cols()))
            .map(|i| self.d.get(i, i).clone())
            .collect()
    }

    pub fn rank(&self) -> usize {
        self.diagonal().iter().filter(|x| !x.is_zero()).count()
    }

    /// Invariant factors of the cokernel that differ from one.
    pub fn torsion(&self) -> Vec<BigInt> {
        self.diagonal()
            .into_iter()
            .filter(|d| !d.is_zero() && !d.is_one())
            .collect()
    }
}

struct SnfState {
    a: IntMatrix,
    u: IntMatrix,
    u_inv: IntMatrix,
    v: IntMatrix,
    v_inv: IntMatrix,
}

impl SnfState {
    fn row_add(&mut self, dst: usize, src: usize, k: &BigInt) {
        self.a.add_row_multiple(dst, src, k);
        self.u.add_row_multiple(dst, src, k);
        self.u_inv.add_col_multiple(src, dst, &-k);
    }

    fn col_add(&mut self, dst: usize, src: usize, k: &BigInt) {
        self.a.add_col_multiple(dst, src, k);
        self.v.add_col_multiple(dst, src, k);
        self.v_inv.add_row_multiple(src, dst, &-k);
    }

    fn row_swap(&mut self, x: usize, y: usize) {
        self.a.swap_rows(x, y);
        self.u.swap_rows(x, y);
        self.u_inv.swap_cols(x, y);
    }

    fn col_swap(&mut self, x: usize, y: usize) {
        self.a.swap_cols(x, y);
        self.v.swap_cols(x, y);
        self.v_inv.swap_rows(x, y);
    }

    fn row_negate(&mut self, i: usize) {
        self.a.negate_row(i);
        self.u.negate_row(i);
        self.u_inv.negate_col(i);
    }

    /// Smallest nonzero |entry| in the trailing block starting at `t`.
    fn min_pivot(&self, t: usize) -> Option<(usize, usize)> {
        let mut best: Option<(usize, usize, BigInt)> = None;
        for i in t..self.a.rows() {
            for j in t..self.a.cols() {
                let v = self.a.get(i, j);
                if v.is_zero() {
                    continue;
                }
                let av = v.abs();
                if best.as_ref().map_or(true, |b| av < b.2) {
                    let one = av.is_one();
                    best = Some((i, j, av));
                    if one {
                        let (bi, bj, _) = best.unwrap();
                        return Some((bi, bj));
                    }
                }
            }
        }
        best.map(|(i, j, _)| (i, j))
    }
}

/// Smith normal form with transforms. Pivots are chosen with minimal absolute
/// value to limit coefficient growth.
pub fn smith(a: &IntMatrix) -> SmithDecomposition {
    let (m, n) = (a.rows(), a.cols());
    let mut s = SnfState {
        a: a.clone(),
        u: IntMatrix::identity(m),
        u_inv: IntMatrix::identity(m),
        v: IntMatrix::identity(n),
        v_inv: IntMatrix::identity(n),
    };
    let mut t = 0;
    while t < m.min(n) {
        let Some((pi, pj)) = s.min_pivot(t) else {
            break;
        };
        s.row_swap(t, pi);
        s.col_swap(t, pj);
        loop {
            let mut dirty = false;
            for i in t + 1..m {
                if s.a.get(i, t).is_zero() {
                    continue;
                }
                let q = s.a.get(i, t).div_floor(s.a.get(t, t));
                s.row_add(i, t, &-q);
                if !s.a.get(i, t).is_zero() {
                    dirty = true;
                }
            }
            for j in t + 1..n {
                if s.a.get(t, j).is_zero() {
                    continue;
                }
                let q = s.a.get(t, j).div_floor(s.a.get(t, t));
                s.col_add(j, t, &-q);
                if !s.a.get(t, j).is_zero() {
                    dirty = true;
                }
            }
            if dirty {
                // a smaller remainder exists in row or column t; move it to the pivot
                let mut best = (t, t, s.a.get(t, t).abs());
                for i in t + 1..m {
                    let v = s.a.get(i, t).abs();
                    if !v.is_zero() && v < best.2 {
                        best = (i, t, v);
                    }
                }
                for j in t + 1..n {
                    let v = s.a.get(t, j).abs();
                    if !v.is_zero() && v < best.2 {
                        best = (t, j, v);
                    }
                }
                s.row_swap(t, best.0);
                s.col_swap(t, best.1);
                continue;
            }
            // row and column are clear; enforce divisibility on the trailing block
            let p = s.a.get(t, t).clone();
            let mut offender = None;
            'search: for i in t + 1..m {
                for j in t + 1..n {
                    if !s.a.get(i, j).is_multiple_of(&p) {
                        offender = Some(i);
                        break 'search;
                    }
                }
            }
            match offender {
                Some(i) => s.row_add(t, i, &BigInt::one()),
                None => break,
            }
        }
        if s.a.get(t, t).is_negative() {
            s.row_negate(t);
        }
        t += 1;
    }
    SmithDecomposition {
        u: s.u,
        d: s.a,
        v: s.v,
        u_inv: s.u_inv,
        v_inv: s.v_inv,
    }
}

/// Row-style Hermite normal form `U·A = H`: `H` is in row echelon form with
/// positive pivots and entries above each pivot reduced into `[0, pivot)`.
pub fn hermite(a: &IntMatrix) -> (IntMatrix, IntMatrix) {
    let (m, n) = (a.rows(), a.cols());
    let mut h = a.clone();
    let mut u = IntMatrix::identity(m);
    let mut r = 0;
    for c in 0..n {
        if r == m {
            break;
        }
        loop {
            // smallest nonzero entry at or below row r in column c
            let mut best: Option<(usize, BigInt)> = None;
            for i in r..m {
                let v = h.get(i, c).abs();
                if !v.is_zero() && best.as_ref().map_or(true, |b| v < b.1) {
                    best = Some((i, v));
                }
            }
            let Some((bi, _)) = best else { break };
            h.swap_rows(r, bi);
            u.swap_rows(r, bi);
            let mut clean = true;
            for i in r + 1..m {
                if h.get(i, c).is_zero() {
                    continue;
                }
                let q = h.get(i, c).div_floor(h.get(r, c));
                let nq = -q;
                h.add_row_multiple(i, r, &nq);
                u.add_row_multiple(i, r, &nq);
                if !h.get(i, c).is_zero() {
                    clean = false;
                }
            }
            if clean {
                break;
            }
        }
        if h.get(r, c).is_zero() {
            continue;
        }
        if h.get(r, c).is_negative() {
            h.negate_row(r);
            u.negate_row(r);
        }
        let p = h.get(r, c).clone();
        for i in 0..r {
            let q = h.get(i, c).div_floor(&p);
            if !q.is_zero() {
                let nq = -q;
                h.add_row_multiple(i, r, &nq);
                u.add_row_multiple(i, r, &nq);
            }
        }
        r += 1;
    }
    (h, u)
}

/// Basis (as columns) of the lattice `{x : A·x = 0}`. The basis is primitive:
/// it spans the full kernel lattice, not a finite-index sublattice.
pub fn kernel_basis(a: &IntMatrix) -> IntMatrix {
    let snf = smith(a);
    let r = snf.rank();
    let idx: Vec<usize> = (r..a.cols()).collect();
    let k = snf.v.select_columns(&idx);
    reduce_column_basis(&k)
}

/// Basis (as columns) of the lattice spanned by the columns of `a`.
pub fn column_space_basis(a: &IntMatrix) -> IntMatrix {
    let snf = smith(a);
    let r = snf.rank();
    let mut cols = Vec::with_capacity(r);
    for i in 0..r {
        let d = snf.d.get(i, i);
        cols.push(snf.u_inv.column(i).iter().map(|x| x * d).collect::<IntVector>());
    }
    let b = IntMatrix::from_columns(a.rows(), &cols).expect("shape");
    reduce_column_basis(&b)
}

/// Canonical basis of a column lattice: the transpose of the nonzero rows of
/// the Hermite form of the transposed basis.
pub fn reduce_column_basis(b: &IntMatrix) -> IntMatrix {
    if b.cols() == 0 {
        return b.clone();
    }
    let (h, _) = hermite(&b.transpose());
    let keep: Vec<usize> = (0..h.rows())
        .filter(|&i| h.row(i).iter().any(|x| !x.is_zero()))
        .collect();
    h.select_rows(&keep).transpose()
}

/// Solves `A·x = b` over the integers, or returns `None` when no integer
/// solution exists.
pub fn solve_in_lattice(a: &IntMatrix, b: &[BigInt]) -> Result<Option<IntVector>> {
    if b.len() != a.rows() {
        return Err(Error::Dimension("right-hand side length".into()));
    }
    let snf = smith(a);
    Ok(solve_with_smith(&snf, b))
}

/// Lattice solve reusing a precomputed decomposition of `A`.
pub fn solve_with_smith(snf: &SmithDecomposition, b: &[BigInt]) -> Option<IntVector> {
    let ub = snf.u.mul_vec(b).ok()?;
    let n = snf.v.rows();
    let mut y = vec![BigInt::zero(); n];
    for (i, c) in ub.iter().enumerate() {
        let d = if i < snf.d.rows().min(snf.d.cols()) {
            snf.d.get(i, i).clone()
        } else {
            BigInt::zero()
        };
        if d.is_zero() {
            if !c.is_zero() {
                return None;
            }
        } else {
            let (q, r) = c.div_rem(&d);
            if !r.is_zero() {
                return None;
            }
            y[i] = q;
        }
    }
    snf.v.mul_vec(&y).ok()
}

/// Characteristic polynomial `det(xI − A)`, coefficients from the constant
/// term upward, by the Faddeev–LeVerrier recurrence (all divisions exact).
pub fn characteristic_polynomial(a: &IntMatrix) -> Result<Vec<BigInt>> {
    if !a.is_square() {
        return Err(Error::Dimension("characteristic polynomial of a non-square matrix".into()));
    }
    let n = a.rows();
    let mut coeffs = vec![BigInt::zero(); n + 1];
    coeffs[n] = BigInt::one();
    let mut m = IntMatrix::zeros(n, n);
    for k in 1..=n {
        // M_k = A·M_{k−1} + c_{n−k+1}·I
        let mut next = a.mul(&m)?;
        for i in 0..n {
            *next.entry_mut(i, i) += &coeffs[n - k + 1];
        }
        m = next;
        let am = a.mul(&m)?;
        let tr: BigInt = (0..n).map(|i| am.get(i, i).clone()).sum();
        let kk = BigInt::from(k);
        let (q, r) = (-tr).div_rem(&kk);
        debug_assert!(r.is_zero());
        coeffs[n - k] = q;
    }
    Ok(coeffs)
}

fn eval_poly(coeffs: &[BigInt], x: &BigInt) -> BigInt {
    let mut acc = BigInt::zero();
    for c in coeffs.iter().rev() {
        acc = acc * x + c;
    }
    acc
}

/// Synthetic division by `(x − r)`; `r` must be a root.
fn deflate(coeffs: &[BigInt], r: &BigInt) -> Vec<BigInt> {
    let n = coeffs.len() - 1;
    let mut out = vec![BigInt::zero(); n];
    let mut carry = BigInt::zero();
    for i in (0..n).rev() {
        carry = &coeffs[i + 1] + carry * r;
        out[i] = carry.clone();
    }
    out
}

/// Integer roots of a polynomial (coefficients from the constant term up)
/// with their multiplicities. Root candidates are divisors of the lowest
/// nonzero coefficient bounded by `bound` in absolute value.
pub fn integer_roots(coeffs: &[BigInt], bound: &BigInt) -> Vec<(BigInt, usize)> {
    let mut poly: Vec<BigInt> = coeffs.to_vec();
    while poly.len() > 1 && poly.last().is_some_and(Zero::is_zero) {
        poly.pop();
    }
    let mut roots = Vec::new();
    let mut zero_mult = 0;
    while poly.len() > 1 && poly[0].is_zero() {
        poly.remove(0);
        zero_mult += 1;
    }
    if zero_mult > 0 {
        roots.push((BigInt::zero(), zero_mult));
    }
    if poly.len() <= 1 {
        return roots;
    }
    let c0 = poly[0].abs();
    let root = c0.sqrt();
    let limit = if &root < bound { root.clone() } else { bound.clone() };
    let mut candidates: Vec<BigInt> = Vec::new();
    let mut d = BigInt::one();
    while d <= limit {
        if c0.is_multiple_of(&d) {
            candidates.push(d.clone());
            let co = &c0 / &d;
            if &co <= bound && co != d {
                candidates.push(co);
            }
        }
        d += 1;
    }
    candidates.sort();
    let mut found = Vec::new();
    for c in candidates {
        for r in [c.clone(), -c] {
            let mut mult = 0;
            while poly.len() > 1 && eval_poly(&poly, &r).is_zero() {
                poly = deflate(&poly, &r);
                mult += 1;
            }
            if mult > 0 {
                found.push((r, mult));
            }
        }
    }
    roots.extend(found);
    roots.sort_by(|a, b| b.0.cmp(&a.0));
    roots
}

/// An integer eigenvalue with one primitive integer eigenvector.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EigenPair {
    pub value: BigInt,
    pub vector: IntVector,
}

/// All integer eigenvalues of a square integer matrix, each reported with a
/// reduced basis of its eigenlattice (one pair per basis vector). Vectors are
/// primitive with a positive leading nonzero entry.
pub fn eigen_integer(a: &IntMatrix) -> Result<Vec<EigenPair>> {
    let cp = characteristic_polynomial(a)?;
    let bound = a.max_abs_row_sum().max(BigInt::one());
    let mut out = Vec::new();
    for (value, _) in integer_roots(&cp, &bound) {
        let mut shifted = a.clone();
        for i in 0..a.rows() {
            *shifted.entry_mut(i, i) -= &value;
        }
        let k = kernel_basis(&shifted);
        let mut basis = lattice_reduce(k.columns());
        for v in basis.iter_mut() {
            normalize_sign(v);
        }
        for vector in basis {
            out.push(EigenPair {
                value: value.clone(),
                vector,
            });
        }
    }
    Ok(out)
}

/// Makes the leading nonzero entry positive.
pub fn normalize_sign(v: &mut [BigInt]) {
    if let Some(first) = v.iter().find(|x| !x.is_zero()) {
        if first.is_negative() {
            for x in v.iter_mut() {
                *x = -core::mem::take(x);
            }
        }
    }
}

/// Divides out the content of a vector.
pub fn primitive(v: &[BigInt]) -> IntVector {
    let g = v.iter().fold(BigInt::zero(), |g, x| g.gcd(x));
    if g.is_zero() || g.is_one() {
        return v.to_vec();
    }
    v.iter().map(|x| x / &g).collect()
}

fn dot(a: &[BigInt], b: &[BigInt]) -> BigInt {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Pairwise size reduction of a lattice basis until no vector can be
/// shortened by subtracting an integer multiple of a shorter one. The result
/// spans the same lattice and is sorted by Euclidean norm.
pub fn lattice_reduce(mut basis: Vec<IntVector>) -> Vec<IntVector> {
    loop {
        basis.sort_by(|a, b| dot(a, a).cmp(&dot(b, b)).then_with(|| b.cmp(a)));
        let mut changed = false;
        for i in 1..basis.len() {
            for j in 0..i {
                let nj = dot(&basis[j], &basis[j]);
                if nj.is_zero() {
                    continue;
                }
                let mu = BigRational::new(dot(&basis[i], &basis[j]), nj);
                let two_mu = (&mu * BigRational::from_integer(BigInt::from(2))).abs();
                if two_mu <= BigRational::one() {
                    continue;
                }
                let q = mu.round().to_integer();
                let bj = basis[j].clone();
                for (x, y) in basis[i].iter_mut().zip(&bj) {
                    *x -= &q * y;
                }
                changed = true;
            }
        }
        if !changed {
            return basis;
        }
    }
}

/// Lossy conversion for display paths only.
pub fn to_i64_lossy(v: &BigInt) -> i64 {
    v.to_i64().unwrap_or(if v.is_negative() { i64::MIN } else { i64::MAX })
}

pub fn ints(v: &[i64]) -> IntVector {
    v.iter().map(|&x| BigInt::from(x)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[&[i64]]) -> IntMatrix {
        let rows: Vec<Vec<i64>> = rows.iter().map(|r| r.to_vec()).collect();
        IntMatrix::from_rows(&rows).unwrap()
    }

    fn check_smith(a: &IntMatrix) -> SmithDecomposition {
        let s = smith(a);
        assert_eq!(s.u.mul(a).unwrap().mul(&s.v).unwrap(), s.d);
        assert_eq!(s.u.mul(&s.u_inv).unwrap(), IntMatrix::identity(a.rows()));
        assert_eq!(s.v.mul(&s.v_inv).unwrap(), IntMatrix::identity(a.cols()));
        let diag = s.diagonal();
        for i in 0..s.d.rows() {
            for j in 0..s.d.cols() {
                if i != j {
                    assert!(s.d.get(i, j).is_zero());
                }
            }
        }
        for w in diag.windows(2) {
            assert!(!w[0].is_negative());
            if w[0].is_zero() {
                assert!(w[1].is_zero());
            } else {
                assert!(w[1].is_multiple_of(&w[0]));
            }
        }
        s
    }

    #[test]
    fn smith_one_by_one() {
        let s = check_smith(&m(&[&[25]]));
        assert_eq!(s.diagonal(), ints(&[25]));
        let s = check_smith(&m(&[&[-25]]));
        assert_eq!(s.diagonal(), ints(&[25]));
    }

    #[test]
    fn smith_diag_2_3() {
        let s = check_smith(&m(&[&[2, 0], &[0, 3]]));
        assert_eq!(s.diagonal(), ints(&[1, 6]));
    }

    #[test]
    fn smith_zero() {
        let s = check_smith(&IntMatrix::zeros(2, 3));
        assert!(s.d.is_zero());
    }

    #[test]
    fn hermite_shape() {
        let a = m(&[&[2, 4, 4], &[-6, 6, 12], &[10, -4, -16]]);
        let (h, u) = hermite(&a);
        assert_eq!(u.mul(&a).unwrap(), h);
        assert!(u.determinant().unwrap().abs().is_one());
        // upper triangular with reduced columns above pivots
        assert_eq!(h, m(&[&[2, 4, 4], &[0, 6, 0], &[0, 0, 12]]));
    }

    #[test]
    fn kernel_examples() {
        let k = kernel_basis(&m(&[&[1, -1]]));
        assert_eq!(k.cols(), 1);
        let mut v = k.column(0);
        normalize_sign(&mut v);
        assert_eq!(v, ints(&[1, 1]));
        assert_eq!(kernel_basis(&IntMatrix::identity(3)).cols(), 0);
    }

    #[test]
    fn kernel_is_saturated() {
        // x + 2y + 4z = 0 has kernel lattice of index 1 in its rational span
        let a = m(&[&[2, 4, 8]]);
        let k = kernel_basis(&a);
        assert_eq!(k.cols(), 2);
        let s = smith(&k);
        assert!(s.diagonal().iter().all(|d| d.is_one()));
    }

    #[test]
    fn solve_examples() {
        assert_eq!(solve_in_lattice(&m(&[&[2]]), &ints(&[4])).unwrap(), Some(ints(&[2])));
        assert_eq!(solve_in_lattice(&m(&[&[2]]), &ints(&[3])).unwrap(), None);
        assert_eq!(
            solve_in_lattice(&m(&[&[2, 0], &[0, 3]]), &ints(&[2, 3])).unwrap(),
            Some(ints(&[1, 1]))
        );
    }

    #[test]
    fn determinant_bareiss() {
        assert_eq!(m(&[&[2, 0], &[0, 3]]).determinant().unwrap(), BigInt::from(6));
        assert_eq!(m(&[&[0, 1], &[1, 0]]).determinant().unwrap(), BigInt::from(-1));
        assert_eq!(m(&[&[1, 2, 3], &[4, 5, 6], &[7, 8, 9]]).determinant().unwrap(), BigInt::zero());
    }

    #[test]
    fn charpoly_small() {
        // [[2,1],[1,2]]: x² − 4x + 3
        let cp = characteristic_polynomial(&m(&[&[2, 1], &[1, 2]])).unwrap();
        assert_eq!(cp, ints(&[3, -4, 1]));
    }

    #[test]
    fn reference_m_eigenpairs() {
        let mm = m(&[
            &[25, 0, 0, 0, 0],
            &[0, 3, 0, 0, 0],
            &[0, 0, 3, 0, 0],
            &[15300, 75, -450, 1, 0],
            &[5400, 75, -450, 0, 1],
        ]);
        let pairs = eigen_integer(&mm).unwrap();
        let of = |v: i64| -> Vec<IntVector> {
            pairs.iter().filter(|p| p.value == BigInt::from(v)).map(|p| p.vector.clone()).collect()
        };
        assert_eq!(of(25), vec![ints(&[2, 0, 0, 1275, 450])]);
        assert_eq!(of(3), vec![ints(&[0, 6, 1, 0, 0]), ints(&[0, 2, 0, 75, 75])]);
        assert_eq!(of(1).len(), 2);
    }

    #[test]
    fn eigen_identity_and_nilpotent() {
        let pairs = eigen_integer(&IntMatrix::identity(3)).unwrap();
        assert_eq!(pairs.len(), 3);
        assert!(pairs.iter().all(|p| p.value.is_one()));
        let pairs = eigen_integer(&m(&[&[0, 1], &[0, 0]])).unwrap();
        assert_eq!(pairs, vec![EigenPair { value: BigInt::zero(), vector: ints(&[1, 0]) }]);
    }

    #[test]
    fn integer_roots_with_multiplicity() {
        // (x − 3)²(x + 2)x = x⁴ − 4x³ − 3x² + 18x
        let roots = integer_roots(&ints(&[0, 18, -3, -4, 1]), &BigInt::from(100));
        assert_eq!(
            roots,
            vec![(BigInt::from(3), 2), (BigInt::zero(), 1), (BigInt::from(-2), 1)]
        );
    }
}
