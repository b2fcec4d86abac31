//! Truncated power series in one and two variables.
//!
//! Coefficients are complex numbers over a generic real field so the same
//! routines run in `f64` and in double-double (`twofloat::TwoFloat`).

use num_complex::{Complex, Complex64};
use num_traits::Float;

pub(crate) fn lift<T: Float>(z: Complex64) -> Complex<T> {
    Complex::new(T::from(z.re).unwrap(), T::from(z.im).unwrap())
}

pub(crate) fn lower<T: Float>(z: Complex<T>) -> Complex64 {
    Complex64::new(z.re.to_f64().unwrap(), z.im.to_f64().unwrap())
}

/// Complex reciprocal with one Newton correction, so the result is accurate to
/// the precision of `T` even when `T`'s own division is not.
pub(crate) fn inv<T: Float>(c: Complex<T>) -> Complex<T> {
    let one = Complex::new(T::one(), T::zero());
    let x = one / c;
    x + x * (one - c * x)
}

/// Cauchy product truncated to `len` terms. Missing coefficients count as zero.
pub fn mul<T: Float>(a: &[Complex<T>], b: &[Complex<T>], len: usize) -> Vec<Complex<T>> {
    let mut out = vec![Complex::new(T::zero(), T::zero()); len];
    for (i, &ai) in a.iter().enumerate().take(len) {
        for (j, &bj) in b.iter().enumerate().take(len - i) {
            out[i + j] = out[i + j] + ai * bj;
        }
    }
    out
}

/// Reciprocal series, `a[0]` must be nonzero.
pub fn recip<T: Float>(a: &[Complex<T>], len: usize) -> Vec<Complex<T>> {
    let zero = Complex::new(T::zero(), T::zero());
    let mut out = vec![zero; len];
    if len == 0 {
        return out;
    }
    let a0 = a[0];
    let inv_a0 = inv(a0);
    out[0] = inv_a0;
    for n in 1..len {
        let mut acc = zero;
        for k in 1..=n.min(a.len().saturating_sub(1)) {
            acc = acc + a[k] * out[n - k];
        }
        out[n] = -acc * inv_a0;
    }
    out
}

/// Bivariate truncated series: entry `(l, r)` is the coefficient of `x^l y^r`,
/// kept for `l <= l_max`, `r <= r_max`.
#[derive(Debug, Clone, PartialEq)]
pub struct BiSeries<T> {
    rows: usize,
    cols: usize,
    coeffs: Vec<Complex<T>>,
}

impl<T: Float> BiSeries<T> {
    pub fn zeros(l_max: usize, r_max: usize) -> Self {
        let (rows, cols) = (l_max + 1, r_max + 1);
        Self {
            rows,
            cols,
            coeffs: vec![Complex::new(T::zero(), T::zero()); rows * cols],
        }
    }

    /// `a(x) * b(y)`.
    pub fn outer(a: &[Complex<T>], b: &[Complex<T>], l_max: usize, r_max: usize) -> Self {
        let mut s = Self::zeros(l_max, r_max);
        for l in 0..s.rows.min(a.len()) {
            for r in 0..s.cols.min(b.len()) {
                s.set(l, r, a[l] * b[r]);
            }
        }
        s
    }

    pub fn l_max(&self) -> usize {
        self.rows - 1
    }

    pub fn r_max(&self) -> usize {
        self.cols - 1
    }

    pub fn get(&self, l: usize, r: usize) -> Complex<T> {
        self.coeffs[l * self.cols + r]
    }

    pub fn set(&mut self, l: usize, r: usize, v: Complex<T>) {
        self.coeffs[l * self.cols + r] = v;
    }

    pub fn scale_neg(mut self) -> Self {
        for c in &mut self.coeffs {
            *c = -*c;
        }
        self
    }

    pub fn add_constant(mut self, c: Complex<T>) -> Self {
        self.coeffs[0] = self.coeffs[0] + c;
        self
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let mut out = Self::zeros(self.l_max(), self.r_max());
        for l in 0..self.rows {
            for r in 0..self.cols {
                let mut acc = Complex::new(T::zero(), T::zero());
                for p in 0..=l {
                    for q in 0..=r {
                        acc = acc + self.get(p, q) * other.get(l - p, r - q);
                    }
                }
                out.set(l, r, acc);
            }
        }
        out
    }

    /// `self / den` by recursive coefficient solve; `den(0,0)` must be nonzero.
    pub fn div(&self, den: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (den.rows, den.cols));
        let inv_d00 = inv(den.get(0, 0));
        let mut q = Self::zeros(self.l_max(), self.r_max());
        for l in 0..self.rows {
            for r in 0..self.cols {
                let mut acc = self.get(l, r);
                for p in 0..=l {
                    for s in 0..=r {
                        if p == 0 && s == 0 {
                            continue;
                        }
                        acc = acc - den.get(p, s) * q.get(l - p, r - s);
                    }
                }
                q.set(l, r, acc * inv_d00);
            }
        }
        q
    }

    pub fn to_f64(&self) -> BiSeries<f64> {
        BiSeries {
            rows: self.rows,
            cols: self.cols,
            coeffs: self.coeffs.iter().map(|&c| lower(c)).collect(),
        }
    }
}
