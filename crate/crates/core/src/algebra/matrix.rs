use std::collections::BTreeSet;
use std::fmt;
use std::io::Write;

use super::{Assignment, LinForm, Poly, Rational, VarId};
use crate::error::{Error, Result};
use crate::par;

/// The coefficient operations matrix multiplication needs.
pub trait Ring: Clone + PartialEq + Send + Sync {
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn add(&self, other: &Self) -> Self;
    fn sub(&self, other: &Self) -> Self;
    fn mul(&self, other: &Self) -> Self;

    fn add_mul_assign(&mut self, a: &Self, b: &Self) {
        *self = self.add(&a.mul(b));
    }
}

impl Ring for Rational {
    fn zero() -> Self {
        Rational::zero()
    }
    fn one() -> Self {
        Rational::one()
    }
    fn is_zero(&self) -> bool {
        Rational::is_zero(self)
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn sub(&self, other: &Self) -> Self {
        self - other
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
}

impl Ring for Poly {
    fn zero() -> Self {
        Poly::zero()
    }
    fn one() -> Self {
        Poly::one()
    }
    fn is_zero(&self) -> bool {
        Poly::is_zero(self)
    }
    fn add(&self, other: &Self) -> Self {
        Poly::add(self, other)
    }
    fn sub(&self, other: &Self) -> Self {
        Poly::sub(self, other)
    }
    fn mul(&self, other: &Self) -> Self {
        Poly::mul(self, other)
    }
    fn add_mul_assign(&mut self, a: &Self, b: &Self) {
        Poly::add_mul_assign(self, a, b)
    }
}

/// Machine integers for products whose entry bound is checked up front.
/// Overflow here is a caller bug, so it panics.
impl Ring for i128 {
    fn zero() -> Self {
        0
    }
    fn one() -> Self {
        1
    }
    fn is_zero(&self) -> bool {
        *self == 0
    }
    fn add(&self, other: &Self) -> Self {
        self.checked_add(*other).expect("i128 overflow in exact product")
    }
    fn sub(&self, other: &Self) -> Self {
        self.checked_sub(*other).expect("i128 overflow in exact product")
    }
    fn mul(&self, other: &Self) -> Self {
        self.checked_mul(*other).expect("i128 overflow in exact product")
    }
}

/// Dense row-major matrix.
#[derive(Clone, PartialEq, Eq)]
pub struct Matrix<E> {
    rows: usize,
    cols: usize,
    data: Vec<E>,
}

impl<E> Matrix<E> {
    pub fn from_vec(rows: usize, cols: usize, data: Vec<E>) -> Self {
        assert_eq!(data.len(), rows * cols, "matrix data length");
        Matrix { rows, cols, data }
    }

    pub fn from_fn(rows: usize, cols: usize, f: impl Fn(usize, usize) -> E + Sync + Send) -> Self
    where
        E: Send,
    {
        let data = par::map_range(rows * cols, |k| f(k / cols.max(1), k % cols.max(1)));
        Matrix { rows, cols, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &E {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, value: E) {
        self.data[i * self.cols + j] = value;
    }

    pub fn row(&self, i: usize) -> &[E] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn entries(&self) -> &[E] {
        &self.data
    }

    pub fn map<F, T>(&self, f: F) -> Matrix<T>
    where
        E: Sync,
        T: Send,
        F: Fn(&E) -> T + Sync + Send,
    {
        Matrix { rows: self.rows, cols: self.cols, data: par::map_slice(&self.data, f) }
    }

    pub fn try_map<F, T>(&self, f: F) -> Result<Matrix<T>>
    where
        E: Sync,
        T: Send,
        F: Fn(&E) -> Result<T> + Sync + Send,
    {
        let data = par::map_slice(&self.data, f).into_iter().collect::<Result<Vec<T>>>()?;
        Ok(Matrix { rows: self.rows, cols: self.cols, data })
    }

    pub fn transpose(&self) -> Matrix<E>
    where
        E: Clone + Send + Sync,
    {
        Matrix::from_fn(self.cols, self.rows, |i, j| self.get(j, i).clone())
    }

    /// CSV dump: the first row and column carry labels, entries use `Display`.
    pub fn write_csv<W: Write>(
        &self,
        out: W,
        row_labels: &[String],
        col_labels: &[String],
    ) -> Result<()>
    where
        E: fmt::Display,
    {
        if row_labels.len() != self.rows || col_labels.len() != self.cols {
            return Err(Error::Usage("label count does not match matrix shape".into()));
        }
        let mut w = csv::Writer::from_writer(out);
        let mut header = vec![String::new()];
        header.extend(col_labels.iter().cloned());
        w.write_record(&header)?;
        for (i, label) in row_labels.iter().enumerate().take(self.rows) {
            let mut rec = vec![label.clone()];
            rec.extend(self.row(i).iter().map(|e| e.to_string()));
            w.write_record(&rec)?;
        }
        w.flush()?;
        Ok(())
    }
}

impl<E: Ring> Matrix<E> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, data: vec![E::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, E::one());
        }
        m
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(E::is_zero)
    }

    pub fn add(&self, other: &Matrix<E>) -> Result<Matrix<E>> {
        self.check_same_shape(other)?;
        let data = par::map_range(self.data.len(), |k| self.data[k].add(&other.data[k]));
        Ok(Matrix { rows: self.rows, cols: self.cols, data })
    }

    pub fn sub(&self, other: &Matrix<E>) -> Result<Matrix<E>> {
        self.check_same_shape(other)?;
        let data = par::map_range(self.data.len(), |k| self.data[k].sub(&other.data[k]));
        Ok(Matrix { rows: self.rows, cols: self.cols, data })
    }

    /// `self - shift * I`.
    pub fn shift_diagonal(&self, shift: &E) -> Result<Matrix<E>> {
        if !self.is_square() {
            return Err(Error::Usage("diagonal shift of a non-square matrix".into()));
        }
        let mut out = self.clone();
        for i in 0..self.rows {
            let v = out.get(i, i).sub(shift);
            out.set(i, i, v);
        }
        Ok(out)
    }

    pub fn trace(&self) -> E {
        let mut acc = E::zero();
        for i in 0..self.rows.min(self.cols) {
            acc = acc.add(self.get(i, i));
        }
        acc
    }

    fn check_same_shape(&self, other: &Matrix<E>) -> Result<()> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::Usage(format!(
                "shape mismatch: {}x{} vs {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        Ok(())
    }
}

/// Exact product. Rows of the output are computed independently.
pub fn mat_mul<E: Ring>(a: &Matrix<E>, b: &Matrix<E>) -> Result<Matrix<E>> {
    if a.cols != b.rows {
        return Err(Error::Usage(format!(
            "inner dimensions disagree: {}x{} times {}x{}",
            a.rows, a.cols, b.rows, b.cols
        )));
    }
    let (n, m) = (a.rows, b.cols);
    let rows: Vec<Vec<E>> = par::map_range(n, |i| {
        let mut out = vec![E::zero(); m];
        for (l, ail) in a.row(i).iter().enumerate() {
            if ail.is_zero() {
                continue;
            }
            for (j, o) in out.iter_mut().enumerate() {
                let blj = b.get(l, j);
                if !blj.is_zero() {
                    o.add_mul_assign(ail, blj);
                }
            }
        }
        out
    });
    Ok(Matrix { rows: n, cols: m, data: rows.into_iter().flatten().collect() })
}

impl Matrix<LinForm> {
    pub fn trace_form(&self) -> LinForm {
        (0..self.rows.min(self.cols)).map(|i| self.get(i, i).clone()).sum()
    }

    pub fn row_sums(&self) -> Vec<LinForm> {
        par::map_range(self.rows, |i| self.row(i).iter().cloned().sum())
    }

    pub fn vars(&self) -> BTreeSet<VarId> {
        self.data.iter().flat_map(|f| f.vars()).collect()
    }

    pub fn specialize(&self, a: &Assignment) -> Result<Matrix<Rational>> {
        self.try_map(|f| f.eval(a))
    }

    pub fn to_poly(&self) -> Matrix<Poly> {
        self.map(|f| Poly::from(f))
    }

    /// `self - shift * I` for a linear-form shift.
    pub fn shift_diagonal_form(&self, shift: &LinForm) -> Result<Matrix<LinForm>> {
        if !self.is_square() {
            return Err(Error::Usage("diagonal shift of a non-square matrix".into()));
        }
        let mut out = self.clone();
        for i in 0..self.rows {
            let v = out.get(i, i) - shift;
            out.set(i, i, v);
        }
        Ok(out)
    }

    pub fn substitute(&self, v: VarId, replacement: &LinForm) -> Matrix<LinForm> {
        self.map(|f| f.substitute(v, replacement))
    }
}

impl Matrix<Poly> {
    pub fn specialize(&self, a: &Assignment) -> Result<Matrix<Rational>> {
        self.try_map(|p| p.eval(a))
    }
}

impl<E: fmt::Display> fmt::Debug for Matrix<E> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            let row: Vec<String> = self.row(i).iter().map(|e| e.to_string()).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}
