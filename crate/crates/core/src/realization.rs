//! Unitary state-space realizations `w(z) = D + z C (I - zA)^-1 B` of finite
//! Blaschke products, and the factorization route `P = R R*` for Schwarz-Pick
//! matrices.

use nalgebra::linalg::LU;
use nalgebra::{Dyn, SVD};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::blaschke::{check_finite, BlaschkeProduct};
use crate::error::{invalid, Error, Result};
use crate::hermitian::CMatrix;
use crate::schwarz_pick::SchwarzPickMatrix;

/// Resolvents with reciprocal condition below this are treated as singular.
pub const RCOND_MIN: f64 = 1e-14;

/// Realization with unitary system matrix `[[A, B], [C, D]]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct UnitaryRealization {
    #[serde(rename = "A", with = "crate::io::matrix")]
    pub a: CMatrix,
    #[serde(rename = "B", with = "crate::io::matrix")]
    pub b: CMatrix,
    #[serde(rename = "C", with = "crate::io::matrix")]
    pub c: CMatrix,
    #[serde(rename = "D", with = "crate::io::pair")]
    pub d: Complex64,
}

/// Stacked rows `C A^l (I - z_i A)^(-l-1)`, one group of `k_i` rows per point.
#[derive(Debug, Clone, PartialEq)]
pub struct RBlock {
    pub matrix: CMatrix,
    pub orders: Vec<usize>,
}

impl UnitaryRealization {
    /// Realization of the constant `u` (empty state).
    pub fn constant(u: Complex64) -> Self {
        Self {
            a: CMatrix::zeros(0, 0),
            b: CMatrix::zeros(0, 1),
            c: CMatrix::zeros(1, 0),
            d: u,
        }
    }

    pub fn state_dim(&self) -> usize {
        self.a.nrows()
    }

    pub fn system_matrix(&self) -> CMatrix {
        let n = self.state_dim();
        let mut u = CMatrix::zeros(n + 1, n + 1);
        u.view_mut((0, 0), (n, n)).copy_from(&self.a);
        u.view_mut((0, n), (n, 1)).copy_from(&self.b);
        u.view_mut((n, 0), (1, n)).copy_from(&self.c);
        u[(n, n)] = self.d;
        u
    }

    /// `max(|U U* - I|_F, |U* U - I|_F)`.
    pub fn unitarity_defect(&self) -> f64 {
        let u = self.system_matrix();
        let id = CMatrix::identity(u.nrows(), u.ncols());
        let left = (&u * u.adjoint() - &id).norm();
        let right = (u.adjoint() * &u - id).norm();
        left.max(right)
    }

    /// `[C; CA; ...; CA^(d-1)]`.
    pub fn observability_matrix(&self) -> CMatrix {
        let n = self.state_dim();
        let mut o = CMatrix::zeros(n, n);
        let mut row = self.c.clone();
        for j in 0..n {
            o.row_mut(j).copy_from(&row);
            row *= &self.a;
        }
        o
    }
}

/// `(z - a) / (1 - conj(a) z)` as `A = conj(a)`, `B = C = sqrt(1 - |a|^2)`, `D = -a`.
pub fn elementary_realization(a: Complex64) -> Result<UnitaryRealization> {
    check_finite(a, "zero")?;
    let modulus = a.norm();
    if modulus >= 1.0 {
        return Err(Error::ZeroOnOrOutsideDisk { index: 0, modulus });
    }
    let s = Complex64::new((1.0 - modulus * modulus).sqrt(), 0.0);
    Ok(UnitaryRealization {
        a: CMatrix::from_element(1, 1, a.conj()),
        b: CMatrix::from_element(1, 1, s),
        c: CMatrix::from_element(1, 1, s),
        d: -a,
    })
}

/// Series connection: the output of `first` drives `second`; the transfer
/// function is the product.
pub fn cascade(first: &UnitaryRealization, second: &UnitaryRealization) -> UnitaryRealization {
    let (n1, n2) = (first.state_dim(), second.state_dim());
    let n = n1 + n2;
    let mut a = CMatrix::zeros(n, n);
    a.view_mut((0, 0), (n1, n1)).copy_from(&first.a);
    a.view_mut((n1, 0), (n2, n1)).copy_from(&(&second.b * &first.c));
    a.view_mut((n1, n1), (n2, n2)).copy_from(&second.a);
    let mut b = CMatrix::zeros(n, 1);
    b.view_mut((0, 0), (n1, 1)).copy_from(&first.b);
    b.view_mut((n1, 0), (n2, 1)).copy_from(&(&second.b * first.d));
    let mut c = CMatrix::zeros(1, n);
    c.view_mut((0, 0), (1, n1)).copy_from(&(&first.c * second.d));
    c.view_mut((0, n1), (1, n2)).copy_from(&second.c);
    UnitaryRealization {
        a,
        b,
        c,
        d: second.d * first.d,
    }
}

/// Cascade of the elementary factors in zero-list order, with the output row
/// scaled by the unimodular constant.
pub fn realize(b: &BlaschkeProduct) -> UnitaryRealization {
    let mut r = UnitaryRealization::constant(Complex64::new(1.0, 0.0));
    for &a in b.zeros() {
        let e = elementary_realization(a).expect("zeros validated at construction");
        r = cascade(&r, &e);
    }
    let u = b.unimodular_constant();
    r.c *= u;
    r.d *= u;
    r
}

/// LU factors of `I - zA` and its transpose.
struct Resolvent {
    lu: LU<Complex64, Dyn, Dyn>,
    lu_t: LU<Complex64, Dyn, Dyn>,
}

impl Resolvent {
    fn new(a: &CMatrix, z: Complex64) -> Result<Self> {
        check_finite(z, "evaluation point")?;
        let n = a.nrows();
        let m = CMatrix::identity(n, n) - a * z;
        if n > 0 {
            let rcond = match m.clone().lu().try_inverse() {
                Some(inv) => 1.0 / (norm1(&m) * norm1(&inv)),
                None => 0.0,
            };
            if !(rcond >= RCOND_MIN) {
                return Err(Error::SingularResolvent(rcond));
            }
        }
        Ok(Self {
            lu_t: m.transpose().lu(),
            lu: m.lu(),
        })
    }

    /// `(I - zA)^-1 x` for a column `x`.
    fn solve(&self, x: &CMatrix) -> CMatrix {
        if x.nrows() == 0 {
            return x.clone();
        }
        self.lu.solve(x).expect("nonsingular by construction")
    }

    /// `y (I - zA)^-1` for a row `y`.
    fn solve_row(&self, y: &CMatrix) -> CMatrix {
        if y.ncols() == 0 {
            return y.clone();
        }
        self.lu_t
            .solve(&y.transpose())
            .expect("nonsingular by construction")
            .transpose()
    }
}

fn norm1(m: &CMatrix) -> f64 {
    (0..m.ncols())
        .map(|j| m.column(j).iter().map(|z| z.norm()).sum::<f64>())
        .fold(0.0, f64::max)
}

pub fn transfer_eval(r: &UnitaryRealization, z: Complex64) -> Result<Complex64> {
    let res = Resolvent::new(&r.a, z)?;
    let x = res.solve(&r.b);
    let tail = if r.state_dim() == 0 {
        Complex64::new(0.0, 0.0)
    } else {
        (&r.c * x)[(0, 0)]
    };
    Ok(r.d + z * tail)
}

/// Number of singular values of the observability matrix above `tol * sigma_max`.
pub fn observability_rank(r: &UnitaryRealization, tol: f64) -> usize {
    if r.state_dim() == 0 {
        return 0;
    }
    let sv = SVD::new(r.observability_matrix(), false, false).singular_values;
    let smax = sv.iter().cloned().fold(0.0, f64::max);
    if smax == 0.0 {
        return 0;
    }
    sv.iter().filter(|&&s| s > tol * smax).count()
}

/// Observability rank equals the state dimension.
pub fn check_minimality(r: &UnitaryRealization, tol: f64) -> bool {
    observability_rank(r, tol) == r.state_dim()
}

/// Rows `C A^l (I - zA)^(-l-1)` for `l = 0..k`.
pub fn r_block(r: &UnitaryRealization, z: Complex64, k: usize) -> Result<RBlock> {
    if k == 0 {
        return Err(invalid("r_block order must be at least 1"));
    }
    let res = Resolvent::new(&r.a, z)?;
    let n = r.state_dim();
    let mut m = CMatrix::zeros(k, n);
    let mut row = res.solve_row(&r.c);
    for l in 0..k {
        m.row_mut(l).copy_from(&row);
        row = res.solve_row(&(row * &r.a));
    }
    Ok(RBlock {
        matrix: m,
        orders: vec![k],
    })
}

/// Stacks `r_block` for every point.
pub fn r_stack(r: &UnitaryRealization, points: &[Complex64], orders: &[usize]) -> Result<RBlock> {
    if points.len() != orders.len() {
        return Err(invalid("points and orders differ in length"));
    }
    let total: usize = orders.iter().sum();
    let mut m = CMatrix::zeros(total, r.state_dim());
    let mut offset = 0;
    for (&z, &k) in points.iter().zip(orders) {
        let block = r_block(r, z, k)?;
        m.view_mut((offset, 0), (k, r.state_dim())).copy_from(&block.matrix);
        offset += k;
    }
    Ok(RBlock {
        matrix: m,
        orders: orders.to_vec(),
    })
}

/// `P = R R*`; valid on the whole domain of holomorphy, boundary included.
pub fn sp_via_realization(r: &UnitaryRealization, points: &[Complex64], orders: &[usize]) -> Result<SchwarzPickMatrix> {
    let stack = r_stack(r, points, orders)?;
    let flat = &stack.matrix * stack.matrix.adjoint();
    SchwarzPickMatrix::new(points.to_vec(), orders.to_vec(), flat)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn elementary_examples() {
        let r = elementary_realization(c(0.0, 0.0)).unwrap();
        let u = r.system_matrix();
        assert_eq!(u[(0, 0)], c(0.0, 0.0));
        assert_eq!(u[(0, 1)], c(1.0, 0.0));
        assert_eq!(u[(1, 0)], c(1.0, 0.0));
        assert_eq!(u[(1, 1)], c(0.0, 0.0));

        let r = elementary_realization(c(0.5, 0.0)).unwrap();
        assert!((r.b[(0, 0)].re - 0.75f64.sqrt()).abs() < 1e-16);
        assert_eq!(r.d, c(-0.5, 0.0));
        assert!(r.unitarity_defect() < 1e-15);

        let r = elementary_realization(c(0.0, 0.6)).unwrap();
        assert_eq!(r.a[(0, 0)], c(0.0, -0.6));
        assert!((r.b[(0, 0)] - c(0.8, 0.0)).norm() < 1e-15);
        assert!(r.unitarity_defect() < 1e-15);

        assert!(elementary_realization(c(1.0, 0.0)).is_err());
    }

    #[test]
    fn cascade_examples() {
        let z = elementary_realization(c(0.0, 0.0)).unwrap();
        let z2 = cascade(&z, &z);
        assert_eq!(z2.state_dim(), 2);
        assert!((transfer_eval(&z2, c(0.3, 0.0)).unwrap() - c(0.09, 0.0)).norm() < 1e-15);

        let x = elementary_realization(c(0.3, -0.2)).unwrap();
        let neutral = UnitaryRealization::constant(c(1.0, 0.0));
        assert_eq!(cascade(&x, &neutral), x);

        let p = cascade(
            &elementary_realization(c(0.5, 0.0)).unwrap(),
            &elementary_realization(c(-0.5, 0.0)).unwrap(),
        );
        assert!((p.d - c(-0.25, 0.0)).norm() < 1e-16);
        assert!((transfer_eval(&p, c(0.0, 0.0)).unwrap() - c(-0.25, 0.0)).norm() < 1e-16);
        assert!(p.unitarity_defect() < 1e-15);
    }

    #[test]
    fn realize_examples() {
        let r = realize(&BlaschkeProduct::power(1));
        assert_eq!(
            (r.a[(0, 0)], r.b[(0, 0)], r.c[(0, 0)], r.d),
            (c(0.0, 0.0), c(1.0, 0.0), c(1.0, 0.0), c(0.0, 0.0))
        );

        let r = realize(&BlaschkeProduct::constant(c(0.0, 1.0)).unwrap());
        assert_eq!(r.state_dim(), 0);
        assert_eq!(r.d, c(0.0, 1.0));
        assert_eq!(transfer_eval(&r, c(0.4, 0.1)).unwrap(), c(0.0, 1.0));

        let r = realize(&BlaschkeProduct::power(2));
        assert!((transfer_eval(&r, c(0.3, 0.0)).unwrap() - c(0.09, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn transfer_examples() {
        let b = BlaschkeProduct::new(vec![c(0.5, 0.0)], c(1.0, 0.0)).unwrap();
        let r = realize(&b);
        assert_eq!(transfer_eval(&r, c(0.0, 0.0)).unwrap(), r.d);
        assert!((transfer_eval(&r, c(1.0, 0.0)).unwrap() - c(1.0, 0.0)).norm() < 1e-15);
        let t = Complex64::from_polar(1.0, 2.0);
        assert!((transfer_eval(&realize(&BlaschkeProduct::power(1)), t).unwrap() - t).norm() < 1e-15);
        assert!(matches!(
            transfer_eval(&r, c(2.0, 0.0)),
            Err(Error::SingularResolvent(_))
        ));
    }

    #[test]
    fn minimality_examples() {
        assert!(check_minimality(&realize(&BlaschkeProduct::power(1)), 1e-10));
        assert!(check_minimality(&realize(&BlaschkeProduct::power(2)), 1e-10));
        let mut r = realize(&BlaschkeProduct::power(2));
        r.c = CMatrix::zeros(1, 2);
        assert!(!check_minimality(&r, 1e-10));
    }

    #[test]
    fn r_block_examples() {
        let r = realize(&BlaschkeProduct::power(1));
        assert_eq!(r_block(&r, c(0.0, 0.0), 1).unwrap().matrix[(0, 0)], c(1.0, 0.0));
        let t = Complex64::from_polar(1.0, 0.4);
        assert_eq!(r_block(&r, t, 1).unwrap().matrix[(0, 0)], c(1.0, 0.0));

        // A = [[0,0],[1,0]], C = [0,1]: (I - A)^-1 = [[1,0],[1,1]]
        let r2 = realize(&BlaschkeProduct::power(2));
        let blk = r_block(&r2, c(1.0, 0.0), 2).unwrap().matrix;
        let m = CMatrix::identity(2, 2) - &r2.a;
        let inv = m.clone().try_inverse().unwrap();
        let want0 = &r2.c * &inv;
        let want1 = &r2.c * &r2.a * &inv * &inv;
        assert!((blk.row(0) - want0.row(0)).norm() < 1e-15);
        assert!((blk.row(1) - want1.row(0)).norm() < 1e-15);
    }

    #[test]
    fn factorization_examples() {
        let one = c(1.0, 0.0);
        let p = sp_via_realization(&realize(&BlaschkeProduct::power(1)), &[one], &[1]).unwrap();
        assert!((p.flat[(0, 0)] - one).norm() < 1e-15);

        let p = sp_via_realization(&realize(&BlaschkeProduct::power(2)), &[one], &[1]).unwrap();
        assert!((p.flat[(0, 0)] - c(2.0, 0.0)).norm() < 1e-15);

        let p = sp_via_realization(&realize(&BlaschkeProduct::power(1)), &[one, -one], &[1, 1]).unwrap();
        assert!(p.flat.iter().all(|v| (v - one).norm() < 1e-15));
    }
}
