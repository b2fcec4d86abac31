//! Finite Blaschke products `u * prod (z - a_k) / (1 - conj(a_k) z)`.

use nalgebra::{DMatrix, Schur};
use num_complex::{Complex, Complex64};
use num_traits::Float;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::series::{self, lift};

/// Zeros must satisfy `|a| <= 1 - INTERIOR_MARGIN`.
pub const INTERIOR_MARGIN: f64 = 1e-12;
/// Allowed deviation of `|u|` from one.
pub const UNIMODULAR_TOL: f64 = 1e-12;
/// Points closer than this (relative to the pole modulus) to a pole are rejected.
pub const POLE_TOL: f64 = 1e-12;
/// Residual bound `|b(z) - tau|` accepted for level-set roots.
pub const LEVEL_SET_RESIDUAL: f64 = 1e-8;

pub(crate) fn check_finite(z: Complex64, what: &'static str) -> Result<()> {
    if z.re.is_finite() && z.im.is_finite() {
        Ok(())
    } else {
        Err(Error::NonFinite(what))
    }
}

/// A finite Blaschke product of degree `zeros.len()`; repeated zeros encode multiplicity.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "crate::io::BlaschkeJson", into = "crate::io::BlaschkeJson")]
pub struct BlaschkeProduct {
    zeros: Vec<Complex64>,
    unimodular: Complex64,
}

/// Taylor coefficients `w_j = w^(j)(center) / j!`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Jet {
    #[serde(with = "crate::io::pair")]
    pub center: Complex64,
    #[serde(with = "crate::io::pairs")]
    pub coefficients: Vec<Complex64>,
}

impl Jet {
    pub fn len(&self) -> usize {
        self.coefficients.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coefficients.is_empty()
    }

    /// Jet of the coefficient-conjugated function `w^(u) = conj(w(conj u))`
    /// centered at `conj(center)`.
    pub fn conjugated(&self) -> Jet {
        Jet {
            center: self.center.conj(),
            coefficients: self.coefficients.iter().map(|c| c.conj()).collect(),
        }
    }
}

impl BlaschkeProduct {
    /// Validates and normalizes; `u` is rescaled to modulus one exactly.
    pub fn new(zeros: Vec<Complex64>, unimodular: Complex64) -> Result<Self> {
        check_finite(unimodular, "unimodular constant")?;
        for (index, a) in zeros.iter().enumerate() {
            check_finite(*a, "zero")?;
            let modulus = a.norm();
            if modulus > 1.0 - INTERIOR_MARGIN {
                return Err(Error::ZeroOnOrOutsideDisk { index, modulus });
            }
        }
        let m = unimodular.norm();
        if (m - 1.0).abs() > UNIMODULAR_TOL {
            return Err(Error::ConstantNotUnimodular(m));
        }
        Ok(Self {
            zeros,
            unimodular: unimodular / m,
        })
    }

    /// The constant function `u`.
    pub fn constant(unimodular: Complex64) -> Result<Self> {
        Self::new(Vec::new(), unimodular)
    }

    /// `z^d`.
    pub fn power(d: usize) -> Self {
        Self {
            zeros: vec![Complex64::new(0.0, 0.0); d],
            unimodular: Complex64::new(1.0, 0.0),
        }
    }

    pub fn zeros(&self) -> &[Complex64] {
        &self.zeros
    }

    pub fn unimodular_constant(&self) -> Complex64 {
        self.unimodular
    }

    pub fn degree(&self) -> usize {
        self.zeros.len()
    }

    pub fn poles(&self) -> Vec<Complex64> {
        self.zeros
            .iter()
            .filter(|a| a.norm() > 0.0)
            .map(|a| Complex64::new(1.0, 0.0) / a.conj())
            .collect()
    }

    fn check_domain(&self, z: Complex64) -> Result<()> {
        check_finite(z, "evaluation point")?;
        for pole in self.poles() {
            if (z - pole).norm() < POLE_TOL * pole.norm().max(1.0) {
                return Err(Error::PoleEvaluation { pole });
            }
        }
        Ok(())
    }

    pub fn eval(&self, z: Complex64) -> Result<Complex64> {
        self.check_domain(z)?;
        Ok(self
            .zeros
            .iter()
            .fold(self.unimodular, |acc, a| acc * (z - a) / (1.0 - a.conj() * z)))
    }

    /// Taylor coefficients `w_0, ..., w_order` at `z0`, computed by multiplying
    /// the truncated series of the factors.
    pub fn taylor_jet(&self, z0: Complex64, order: usize) -> Result<Jet> {
        self.check_domain(z0)?;
        let coefficients = self.jet_in::<f64>(z0, order + 1).into_iter().collect();
        Ok(Jet {
            center: z0,
            coefficients,
        })
    }

    /// Series of the product at `z0` with `len` terms, in the working precision `T`.
    ///
    /// The zeros and `z0` are taken as exact; the constant is renormalized in `T`
    /// so the product is inner to working precision.
    pub(crate) fn jet_in<T: Float>(&self, z0: Complex64, len: usize) -> Vec<Complex<T>> {
        let z0: Complex<T> = lift(z0);
        let u: Complex<T> = lift(self.unimodular);
        let m = u.norm_sqr().sqrt();
        let u = u * series::inv(Complex::new(m, T::zero()));
        let one = Complex::new(T::one(), T::zero());
        let mut acc = vec![Complex::new(T::zero(), T::zero()); len];
        if len == 0 {
            return acc;
        }
        acc[0] = u;
        for &a in &self.zeros {
            let a: Complex<T> = lift(a);
            let num = [z0 - a, one];
            let den = [one - a.conj() * z0, -a.conj()];
            let factor = series::mul(&num, &series::recip(&den, len), len);
            acc = series::mul(&acc, &factor, len);
        }
        acc
    }

    /// The `d` solutions of `b(z) = tau` on the unit circle, sorted by angle.
    pub fn level_set(&self, tau: Complex64) -> Result<Vec<Complex64>> {
        check_finite(tau, "level value")?;
        let m = tau.norm();
        if (m - 1.0).abs() > UNIMODULAR_TOL {
            return Err(Error::PointOffCircle { index: 0, modulus: m });
        }
        let d = self.degree();
        if d == 0 {
            return Err(invalid("level set of a constant Blaschke product is undefined"));
        }
        // u * prod(z - a) - tau * prod(1 - conj(a) z), ascending coefficients
        let one = Complex64::new(1.0, 0.0);
        let mut num = vec![self.unimodular];
        let mut den = vec![tau];
        for a in &self.zeros {
            num = poly_mul(&num, &[-a, one]);
            den = poly_mul(&den, &[one, -a.conj()]);
        }
        let p: Vec<Complex64> = num.iter().zip(&den).map(|(n, q)| n - q).collect();
        let lead = p[d];
        let monic: Vec<Complex64> = p.iter().map(|c| c / lead).collect();

        let mut companion = DMatrix::<Complex64>::zeros(d, d);
        for i in 1..d {
            companion[(i, i - 1)] = one;
        }
        for i in 0..d {
            companion[(i, d - 1)] = -monic[i];
        }
        let schur = Schur::try_new(companion, f64::EPSILON, 10_000).ok_or(Error::RootFindingFailure(f64::INFINITY))?;
        let (_, tri) = schur.unpack();

        let dp: Vec<Complex64> = (1..=d).map(|k| monic[k] * k as f64).collect();
        let mut roots = Vec::with_capacity(d);
        for i in 0..d {
            let mut z = tri[(i, i)];
            let deriv = horner(&dp, z);
            if deriv.norm() > 0.0 {
                z -= horner(&monic, z) / deriv;
            }
            let z = z / z.norm();
            let residual = (self.eval(z)? - tau).norm();
            if !(residual <= LEVEL_SET_RESIDUAL) {
                return Err(Error::RootFindingFailure(residual));
            }
            roots.push(z);
        }
        roots.sort_by(|a, b| a.arg().total_cmp(&b.arg()));
        Ok(roots)
    }
}

fn poly_mul(a: &[Complex64], b: &[Complex64]) -> Vec<Complex64> {
    let mut out = vec![Complex64::new(0.0, 0.0); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

fn horner(coeffs: &[Complex64], z: Complex64) -> Complex64 {
    coeffs.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, c| acc * z + c)
}
