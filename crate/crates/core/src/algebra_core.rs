//! Exact scalars, dense matrices and Laurent polynomials in `z`.

use std::fmt;
use std::ops::{Add, Div, Index, IndexMut, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_complex::Complex;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub type Rational = BigRational;
pub type GaussianRational = Complex<Rational>;

pub fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn frac(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn gauss(re: Rational, im: Rational) -> GaussianRational {
    Complex::new(re, im)
}

pub fn gint(re: i64, im: i64) -> GaussianRational {
    Complex::new(rat(re), rat(im))
}

pub fn from_rat(r: Rational) -> GaussianRational {
    Complex::new(r, Rational::zero())
}

/// The imaginary unit.
pub fn i_unit() -> GaussianRational {
    gint(0, 1)
}

pub fn to_f64(r: &Rational) -> f64 {
    use num_traits::ToPrimitive;
    r.to_f64().unwrap_or(f64::NAN)
}

/// Scalars admitting exact Gaussian elimination.
pub trait Field:
    Clone
    + PartialEq
    + fmt::Debug
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
}

impl<T> Field for T where
    T: Clone
        + PartialEq
        + fmt::Debug
        + Zero
        + One
        + Add<Output = T>
        + Sub<Output = T>
        + Mul<Output = T>
        + Div<Output = T>
        + Neg<Output = T>
{
}

#[derive(Clone, Debug, PartialEq)]
pub struct Matrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

impl<T: Field> Matrix<T> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, data: vec![T::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = T::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<T>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        Matrix { rows: r, cols: c, data: rows.into_iter().flatten().collect() }
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> T) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Matrix { rows, cols, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[T] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn col(&self, j: usize) -> Vec<T> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].clone())
    }

    pub fn map<U: Field>(&self, f: impl Fn(&T) -> U) -> Matrix<U> {
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(f).collect() }
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }

    pub fn scale(&self, s: &T) -> Self {
        self.map(|x| x.clone() * s.clone())
    }

    pub fn mul_vec(&self, v: &[T]) -> Vec<T> {
        assert_eq!(v.len(), self.cols);
        (0..self.rows)
            .map(|i| {
                let mut acc = T::zero();
                for (a, b) in self.row(i).iter().zip(v) {
                    if !a.is_zero() && !b.is_zero() {
                        acc = acc + a.clone() * b.clone();
                    }
                }
                acc
            })
            .collect()
    }

    /// Row echelon form in place; returns pivot columns.
    fn eliminate(&mut self) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            if r == self.rows {
                break;
            }
            let Some(p) = (r..self.rows).find(|&i| !self[(i, c)].is_zero()) else {
                continue;
            };
            if p != r {
                for j in 0..self.cols {
                    self.data.swap(p * self.cols + j, r * self.cols + j);
                }
            }
            let inv = T::one() / self[(r, c)].clone();
            for j in c..self.cols {
                let v = self[(r, j)].clone() * inv.clone();
                self[(r, j)] = v;
            }
            for i in 0..self.rows {
                if i == r || self[(i, c)].is_zero() {
                    continue;
                }
                let f = self[(i, c)].clone();
                for j in c..self.cols {
                    if self[(r, j)].is_zero() {
                        continue;
                    }
                    let v = self[(i, j)].clone() - f.clone() * self[(r, j)].clone();
                    self[(i, j)] = v;
                }
            }
            pivots.push(c);
            r += 1;
        }
        pivots
    }

    pub fn rank(&self) -> usize {
        self.clone().eliminate().len()
    }

    /// Solves `self * x = b`; `None` if inconsistent. Free variables are set to zero.
    pub fn solve(&self, b: &[T]) -> Option<Vec<T>> {
        assert_eq!(b.len(), self.rows);
        let mut aug = Self::from_fn(self.rows, self.cols + 1, |i, j| {
            if j < self.cols {
                self[(i, j)].clone()
            } else {
                b[i].clone()
            }
        });
        let pivots = aug.eliminate();
        if pivots.last() == Some(&self.cols) {
            return None;
        }
        let mut x = vec![T::zero(); self.cols];
        for (r, &c) in pivots.iter().enumerate() {
            x[c] = aug[(r, self.cols)].clone();
        }
        Some(x)
    }

    pub fn inverse(&self) -> Option<Self> {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        let mut aug = Self::from_fn(n, 2 * n, |i, j| {
            if j < n {
                self[(i, j)].clone()
            } else if j - n == i {
                T::one()
            } else {
                T::zero()
            }
        });
        let pivots = aug.eliminate();
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return None;
        }
        Some(Self::from_fn(n, n, |i, j| aug[(i, n + j)].clone()))
    }

    pub fn det(&self) -> T {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        let mut m = self.clone();
        let mut det = T::one();
        for c in 0..n {
            let Some(p) = (c..n).find(|&i| !m[(i, c)].is_zero()) else {
                return T::zero();
            };
            if p != c {
                for j in 0..n {
                    m.data.swap(p * n + j, c * n + j);
                }
                det = -det;
            }
            let piv = m[(c, c)].clone();
            det = det * piv.clone();
            for i in c + 1..n {
                if m[(i, c)].is_zero() {
                    continue;
                }
                let f = m[(i, c)].clone() / piv.clone();
                for j in c..n {
                    let v = m[(i, j)].clone() - f.clone() * m[(c, j)].clone();
                    m[(i, j)] = v;
                }
            }
        }
        det
    }

    /// Leading principal minors of a square matrix.
    pub fn leading_minors(&self) -> Vec<T> {
        (1..=self.rows)
            .map(|k| Self::from_fn(k, k, |i, j| self[(i, j)].clone()).det())
            .collect()
    }
}

impl<T> Index<(usize, usize)> for Matrix<T> {
    type Output = T;
    fn index(&self, (i, j): (usize, usize)) -> &T {
        &self.data[i * self.cols + j]
    }
}

impl<T> IndexMut<(usize, usize)> for Matrix<T> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut T {
        &mut self.data[i * self.cols + j]
    }
}

impl<T: Field> Mul for &Matrix<T> {
    type Output = Matrix<T>;
    fn mul(self, rhs: &Matrix<T>) -> Matrix<T> {
        assert_eq!(self.cols, rhs.rows);
        let mut out: Matrix<T> = Matrix::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let b = &rhs[(k, j)];
                    if b.is_zero() {
                        continue;
                    }
                    let v = out[(i, j)].clone() + a.clone() * b.clone();
                    out[(i, j)] = v;
                }
            }
        }
        out
    }
}

impl<T: Field> Add for &Matrix<T> {
    type Output = Matrix<T>;
    fn add(self, rhs: &Matrix<T>) -> Matrix<T> {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        Matrix::from_fn(self.rows, self.cols, |i, j| self[(i, j)].clone() + rhs[(i, j)].clone())
    }
}

impl<T: Field> Sub for &Matrix<T> {
    type Output = Matrix<T>;
    fn sub(self, rhs: &Matrix<T>) -> Matrix<T> {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        Matrix::from_fn(self.rows, self.cols, |i, j| self[(i, j)].clone() - rhs[(i, j)].clone())
    }
}

pub fn mat_rank<T: Field>(m: &Matrix<T>) -> usize {
    m.rank()
}

/// Laurent polynomial `z^shift * (c_0 + c_1 z + ...)` with exact rational coefficients.
///
/// Normalized so that `c_0 != 0` and the last coefficient is nonzero; zero is the
/// empty coefficient list with shift 0.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ZetaPoly {
    shift: i64,
    coeffs: Vec<Rational>,
}

impl ZetaPoly {
    pub fn new(shift: i64, coeffs: Vec<Rational>) -> Self {
        let mut p = ZetaPoly { shift, coeffs };
        p.normalize();
        p
    }

    pub fn from_ints(shift: i64, coeffs: &[i64]) -> Self {
        Self::new(shift, coeffs.iter().map(|&c| rat(c)).collect())
    }

    pub fn zero() -> Self {
        ZetaPoly { shift: 0, coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(rat(1))
    }

    pub fn constant(c: Rational) -> Self {
        Self::new(0, vec![c])
    }

    pub fn monomial(c: Rational, k: i64) -> Self {
        Self::new(k, vec![c])
    }

    /// `z^k`
    pub fn z_pow(k: i64) -> Self {
        Self::monomial(rat(1), k)
    }

    fn normalize(&mut self) {
        while self.coeffs.last().is_some_and(|c| c.is_zero()) {
            self.coeffs.pop();
        }
        let lead = self.coeffs.iter().take_while(|c| c.is_zero()).count();
        if lead > 0 {
            self.coeffs.drain(..lead);
            self.shift += lead as i64;
        }
        if self.coeffs.is_empty() {
            self.shift = 0;
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Lowest exponent with a nonzero coefficient (`None` for zero).
    pub fn valuation(&self) -> Option<i64> {
        (!self.is_zero()).then_some(self.shift)
    }

    /// Highest exponent with a nonzero coefficient (`None` for zero).
    pub fn degree(&self) -> Option<i64> {
        (!self.is_zero()).then(|| self.shift + self.coeffs.len() as i64 - 1)
    }

    pub fn coeff(&self, k: i64) -> Rational {
        let i = k - self.shift;
        if i < 0 || i as usize >= self.coeffs.len() {
            Rational::zero()
        } else {
            self.coeffs[i as usize].clone()
        }
    }

    /// `(exponent, coefficient)` pairs for nonzero terms, ascending.
    pub fn terms(&self) -> Vec<(i64, Rational)> {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| (self.shift + i as i64, c.clone()))
            .collect()
    }

    pub fn is_polynomial(&self) -> bool {
        self.is_zero() || self.shift >= 0
    }

    pub fn scale(&self, s: &Rational) -> Self {
        Self::new(self.shift, self.coeffs.iter().map(|c| c * s).collect())
    }

    pub fn mul_z_pow(&self, k: i64) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        ZetaPoly { shift: self.shift + k, coeffs: self.coeffs.clone() }
    }

    /// Substitutes `z -> lambda * z`.
    pub fn subst_scale(&self, lambda: &Rational) -> Self {
        let terms = self.terms();
        let mut out = Self::zero();
        for (k, c) in terms {
            let f = pow_rat(lambda, k);
            out = &out + &Self::monomial(c * f, k);
        }
        out
    }

    pub fn eval(&self, z: &Rational) -> Rational {
        self.terms().into_iter().map(|(k, c)| c * pow_rat(z, k)).sum()
    }

    pub fn eval_f64(&self, z: f64) -> f64 {
        self.terms().into_iter().map(|(k, c)| to_f64(&c) * z.powi(k as i32)).sum()
    }

    /// Exact quotient `self / d`; `None` when `d` does not divide `self` in `Q[z, 1/z]`.
    pub fn div_exact(&self, d: &ZetaPoly) -> Option<ZetaPoly> {
        assert!(!d.is_zero(), "division by zero polynomial");
        if self.is_zero() {
            return Some(Self::zero());
        }
        let mut rem = self.coeffs.clone();
        let dc = &d.coeffs;
        if rem.len() < dc.len() {
            return None;
        }
        let qlen = rem.len() - dc.len() + 1;
        let mut q = vec![Rational::zero(); qlen];
        let lead = dc.last().unwrap();
        for i in (0..qlen).rev() {
            let c = &rem[i + dc.len() - 1] / lead;
            if c.is_zero() {
                continue;
            }
            for (j, dj) in dc.iter().enumerate() {
                rem[i + j] = &rem[i + j] - &c * dj;
            }
            q[i] = c;
        }
        if rem.iter().any(|c| !c.is_zero()) {
            return None;
        }
        Some(Self::new(self.shift - d.shift, q))
    }
}

fn pow_rat(x: &Rational, k: i64) -> Rational {
    if k >= 0 {
        num_traits::pow(x.clone(), k as usize)
    } else {
        num_traits::pow(x.recip(), (-k) as usize)
    }
}

impl Add for &ZetaPoly {
    type Output = ZetaPoly;
    fn add(self, rhs: &ZetaPoly) -> ZetaPoly {
        if self.is_zero() {
            return rhs.clone();
        }
        if rhs.is_zero() {
            return self.clone();
        }
        let lo = self.shift.min(rhs.shift);
        let hi = self.degree().unwrap().max(rhs.degree().unwrap());
        let coeffs = (lo..=hi).map(|k| self.coeff(k) + rhs.coeff(k)).collect();
        ZetaPoly::new(lo, coeffs)
    }
}

impl Sub for &ZetaPoly {
    type Output = ZetaPoly;
    fn sub(self, rhs: &ZetaPoly) -> ZetaPoly {
        self + &(-rhs)
    }
}

impl Neg for &ZetaPoly {
    type Output = ZetaPoly;
    fn neg(self) -> ZetaPoly {
        ZetaPoly { shift: self.shift, coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }
}

impl Mul for &ZetaPoly {
    type Output = ZetaPoly;
    fn mul(self, rhs: &ZetaPoly) -> ZetaPoly {
        poly_mul(self, rhs)
    }
}

macro_rules! forward_owned {
    ($tr:ident, $f:ident) => {
        impl $tr for ZetaPoly {
            type Output = ZetaPoly;
            fn $f(self, rhs: ZetaPoly) -> ZetaPoly {
                (&self).$f(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

pub fn poly_mul(p: &ZetaPoly, q: &ZetaPoly) -> ZetaPoly {
    if p.is_zero() || q.is_zero() {
        return ZetaPoly::zero();
    }
    let mut out = vec![Rational::zero(); p.coeffs.len() + q.coeffs.len() - 1];
    for (i, a) in p.coeffs.iter().enumerate() {
        for (j, b) in q.coeffs.iter().enumerate() {
            out[i + j] += a * b;
        }
    }
    ZetaPoly::new(p.shift + q.shift, out)
}

impl fmt::Display for ZetaPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (n, (k, c)) in self.terms().into_iter().enumerate() {
            let neg = c.is_negative();
            let a = c.abs();
            if n == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { "-" } else { "+" })?;
            }
            let unit = a.is_one();
            match k {
                0 => write!(f, "{a}")?,
                1 if unit => write!(f, "z")?,
                1 => write!(f, "{a}*z")?,
                _ if unit => write!(f, "z^{k}")?,
                _ => write!(f, "{a}*z^{k}")?,
            }
        }
        Ok(())
    }
}

impl fmt::Debug for ZetaPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ZetaPoly({self})")
    }
}

/// Serializes a rational as its `n/d` string.
pub fn ser_rational<S: serde::Serializer>(r: &Rational, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_str(r)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn difference_of_squares() {
        let a = ZetaPoly::from_ints(0, &[1, -1]);
        let b = ZetaPoly::from_ints(0, &[1, 1]);
        assert_eq!(poly_mul(&a, &b), ZetaPoly::from_ints(0, &[1, 0, -1]));
    }

    #[test]
    fn cube_difference() {
        let a = ZetaPoly::from_ints(0, &[1, -1]);
        let b = ZetaPoly::from_ints(0, &[1, 1, 1]);
        assert_eq!(&a * &b, ZetaPoly::from_ints(0, &[1, 0, 0, -1]));
    }

    #[test]
    fn zero_annihilates() {
        let a = ZetaPoly::from_ints(0, &[1, 5]);
        assert!(poly_mul(&a, &ZetaPoly::zero()).is_zero());
    }

    #[test]
    fn laurent_shift_normalizes() {
        let p = ZetaPoly::from_ints(-3, &[0, 0, 2, 0]);
        assert_eq!(p.valuation(), Some(-1));
        assert_eq!(p.degree(), Some(-1));
        assert_eq!(p.to_string(), "2*z^-1");
    }

    #[test]
    fn exact_division() {
        let num = ZetaPoly::from_ints(2, &[1, 0, 0, -1]);
        let den = ZetaPoly::from_ints(0, &[1, 1, 1]);
        assert_eq!(num.div_exact(&den), Some(ZetaPoly::from_ints(2, &[1, -1])));
        assert_eq!(num.div_exact(&ZetaPoly::from_ints(0, &[1, 2])), None);
    }

    #[test]
    fn ranks() {
        let id: Matrix<Rational> = Matrix::identity(3);
        assert_eq!(mat_rank(&id), 3);
        let z: Matrix<Rational> = Matrix::zeros(4, 4);
        assert_eq!(mat_rank(&z), 0);
    }

    #[test]
    fn inverse_and_det() {
        let m = Matrix::from_rows(vec![vec![rat(2), rat(1)], vec![rat(5), rat(3)]]);
        assert_eq!(m.det(), rat(1));
        let inv = m.inverse().unwrap();
        assert_eq!(&m * &inv, Matrix::identity(2));
        let g = Matrix::from_rows(vec![vec![gint(0, 1), gint(1, 0)], vec![gint(1, 0), gint(0, 1)]]);
        assert_eq!(g.det(), gint(-2, 0));
    }
}
