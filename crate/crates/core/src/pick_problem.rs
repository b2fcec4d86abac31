//! Boundary interpolation data, its Pick matrices, and the positive definite
//! completion of an extended Pick matrix.

use std::convert::TryFrom;

use num_complex::{Complex, Complex64};
use serde::{Deserialize, Serialize};
use twofloat::TwoFloat;

use crate::blaschke::{check_finite, BlaschkeProduct};
use crate::error::{invalid, Error, Result};
use crate::hermitian::{eigen_h, schur_complement, CMatrix, HermitianMatrix, HermitianReport, Tolerances};
use crate::schwarz_pick::{hankel_psi_toeplitz, offsets, psi_toeplitz_adjoint, validate_boundary_points};
use crate::series::{lift, lower};

/// Residual allowed when inverting the affine map `b_{2k+1} -> gamma`,
/// relative to `max(1, |target|)`.
pub const SUPPLEMENTARY_RESIDUAL: f64 = 1e-10;

/// Boundary points with prescribed Taylor coefficients `values[i][j]` at `points[i]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "JetDataJson", into = "JetDataJson")]
pub struct JetData {
    points: Vec<Complex64>,
    values: Vec<Vec<Complex64>>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct JetDataJson {
    #[serde(with = "crate::io::pairs")]
    points: Vec<Complex64>,
    #[serde(with = "crate::io::nested_pairs")]
    values: Vec<Vec<Complex64>>,
}

impl TryFrom<JetDataJson> for JetData {
    type Error = Error;

    fn try_from(j: JetDataJson) -> Result<Self> {
        JetData::new(j.points, j.values)
    }
}

impl From<JetData> for JetDataJson {
    fn from(d: JetData) -> Self {
        JetDataJson {
            points: d.points,
            values: d.values,
        }
    }
}

impl JetData {
    pub fn new(points: Vec<Complex64>, values: Vec<Vec<Complex64>>) -> Result<Self> {
        if points.len() != values.len() {
            return Err(invalid("points and values differ in length"));
        }
        validate_boundary_points(&points)?;
        for v in &values {
            if v.is_empty() {
                return Err(invalid("every point needs at least one value"));
            }
            for &z in v {
                check_finite(z, "jet value")?;
            }
        }
        Ok(Self { points, values })
    }

    pub fn points(&self) -> &[Complex64] {
        &self.points
    }

    pub fn values(&self) -> &[Vec<Complex64>] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Copy with `values[point][index]` replaced, padding with zeros if needed.
    pub fn with_value(&self, point: usize, index: usize, value: Complex64) -> Result<Self> {
        if point >= self.len() {
            return Err(invalid(format!("point index {point} out of range")));
        }
        check_finite(value, "jet value")?;
        let mut values = self.values.clone();
        let v = &mut values[point];
        if v.len() <= index {
            v.resize(index + 1, Complex64::new(0.0, 0.0));
        }
        v[index] = value;
        Ok(Self {
            points: self.points.clone(),
            values,
        })
    }

    /// Data restricted to the given points, in the given order.
    pub fn select(&self, indices: &[usize]) -> Result<Self> {
        if indices.iter().any(|&i| i >= self.len()) {
            return Err(invalid("point index out of range"));
        }
        Self::new(
            indices.iter().map(|&i| self.points[i]).collect(),
            indices.iter().map(|&i| self.values[i].clone()).collect(),
        )
    }
}

/// Coefficients `b^(j)(t_i) / j!` for `j = 0..=max_orders[i]`.
pub fn extract_data(b: &BlaschkeProduct, points: &[Complex64], max_orders: &[usize]) -> Result<JetData> {
    if points.len() != max_orders.len() {
        return Err(invalid("points and orders differ in length"));
    }
    let values = points
        .iter()
        .zip(max_orders)
        .map(|(&t, &j)| b.taylor_jet(t, j).map(|jet| jet.coefficients))
        .collect::<Result<Vec<_>>>()?;
    JetData::new(points.to_vec(), values)
}

/// A Pick matrix with its block layout: point `i` owns `orders[i]` consecutive rows.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PickMatrix {
    #[serde(with = "crate::io::matrix")]
    pub matrix: CMatrix,
    pub orders: Vec<usize>,
}

impl PickMatrix {
    pub fn new(matrix: CMatrix, orders: Vec<usize>) -> Result<Self> {
        let total: usize = orders.iter().sum();
        if matrix.shape() != (total, total) {
            return Err(invalid("Pick matrix shape does not match its orders"));
        }
        Ok(Self { matrix, orders })
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn offsets(&self) -> Vec<usize> {
        offsets(&self.orders)
    }

    /// Flat row of derivative row `row` at point `point`.
    pub fn flat_index(&self, point: usize, row: usize) -> Option<usize> {
        (point < self.orders.len() && row < self.orders[point]).then(|| self.offsets()[point] + row)
    }

    /// `(point, row)` owning flat row `index`.
    pub fn block_index(&self, index: usize) -> Option<(usize, usize)> {
        let mut start = 0;
        for (point, &k) in self.orders.iter().enumerate() {
            if index < start + k {
                return Some((point, index - start));
            }
            start += k;
        }
        None
    }

    pub fn block(&self, i: usize, j: usize) -> CMatrix {
        let off = self.offsets();
        self.matrix
            .view((off[i], off[j]), (self.orders[i], self.orders[j]))
            .into_owned()
    }

    pub fn to_hermitian(&self) -> Result<HermitianMatrix> {
        HermitianMatrix::new(self.matrix.clone())
    }
}

/// Pick matrix of the data for orders `k_i`, using `values[i][0..2 k_i]`.
pub fn build_pick(data: &JetData, orders: &[usize]) -> Result<PickMatrix> {
    let values: Vec<&[Complex64]> = data.values.iter().map(|v| v.as_slice()).collect();
    let matrix = hankel_psi_toeplitz(&data.points, &values, orders)?;
    PickMatrix::new(matrix, orders.to_vec())
}

/// Outcome of the necessary conditions for solvability.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Admissibility {
    pub admissible: bool,
    /// `max_i | |b_{i,0}| - 1 |`.
    pub modulus_defect: f64,
    pub pick: HermitianReport,
}

/// Unimodular leading values and a positive semidefinite Pick matrix, both to `tol`.
pub fn admissible(data: &JetData, orders: &[usize], tol: f64) -> Result<Admissibility> {
    let p = build_pick(data, orders)?;
    let report = HermitianReport::new(
        &p.to_hermitian()?,
        Tolerances {
            pd: tol,
            ..Tolerances::default()
        },
    )?;
    let modulus_defect = data
        .values
        .iter()
        .map(|v| (v[0].norm() - 1.0).abs())
        .fold(0.0, f64::max);
    Ok(Admissibility {
        admissible: modulus_defect <= tol && report.psd,
        modulus_defect,
        pick: report,
    })
}

/// Pick matrix with order `k_i + 1` at the points in `extend_set`.
pub fn extend_pick(data: &JetData, orders: &[usize], extend_set: &[usize]) -> Result<PickMatrix> {
    let mut extended = orders.to_vec();
    for &i in extend_set {
        if i >= extended.len() {
            return Err(invalid(format!("extend index {i} out of range")));
        }
        extended[i] += 1;
    }
    build_pick(data, &extended)
}

/// Bottom diagonal entry of the order `k + 1` diagonal block at `t`:
/// `[b_{k+1}, ..., b_{2k+1}] Psi_{k+1}(t) [b_k, ..., b_0]^*`.
pub fn gamma(values: &[Complex64], t: Complex64, k: usize) -> Result<Complex64> {
    if values.len() < 2 * k + 2 {
        return Err(Error::InsufficientJet {
            point: 0,
            needed: 2 * k + 2,
            available: values.len(),
        });
    }
    let lifted: Vec<Complex<TwoFloat>> = values[..2 * k + 2].iter().map(|&z| lift(z)).collect();
    let right = psi_toeplitz_adjoint(lift(t), &lifted, k + 1);
    let mut acc = Complex::new(TwoFloat::from(0.0), TwoFloat::from(0.0));
    for r in 0..=k {
        acc += lifted[k + 1 + r] * right[r][k];
    }
    Ok(lower(acc))
}

/// Coefficient of `b_{2k+1}` in [`gamma`]: `(-1)^k t^(2k+1) conj(b_0)`.
pub fn gamma_slope(t: Complex64, k: usize, b0: Complex64) -> Complex64 {
    let sign = if k.is_multiple_of(2) { 1.0 } else { -1.0 };
    t.powu(2 * k as u32 + 1) * b0.conj() * sign
}

/// The value of `b_{2k+1}` making [`gamma`] equal `target`. Entries up to
/// `b_{2k}` are read from `values`; any entry at `2k+1` is ignored.
pub fn solve_supplementary(values: &[Complex64], t: Complex64, k: usize, target: Complex64) -> Result<Complex64> {
    if values.len() < 2 * k + 1 {
        return Err(Error::InsufficientJet {
            point: 0,
            needed: 2 * k + 1,
            available: values.len(),
        });
    }
    check_finite(target, "gamma target")?;
    let b0 = values[0].norm();
    if b0 < 0.5 {
        return Err(Error::ZeroLeadingValue(b0));
    }
    let mut trial = values[..2 * k + 1].to_vec();
    trial.push(Complex64::new(0.0, 0.0));
    let g0 = gamma(&trial, t, k)?;
    trial[2 * k + 1] = Complex64::new(1.0, 0.0);
    let slope = gamma(&trial, t, k)? - g0;
    let mut solution = (target - g0) / slope;
    trial[2 * k + 1] = solution;
    // one secant correction
    solution += (target - gamma(&trial, t, k)?) / slope;
    trial[2 * k + 1] = solution;
    let residual = (gamma(&trial, t, k)? - target).norm();
    if residual > SUPPLEMENTARY_RESIDUAL * target.norm().max(1.0) {
        return Err(Error::ConvergenceFailure);
    }
    Ok(solution)
}

/// A Pick matrix made positive definite by raising its complementary diagonal entries.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Completion {
    pub original: PickMatrix,
    pub modified: PickMatrix,
    pub rho: f64,
    pub margin: f64,
    pub complementary_indices: Vec<usize>,
    /// `(point, new diagonal value)` for each complementary index.
    pub gamma_targets: Vec<(usize, f64)>,
    /// Smallest eigenvalue of `D - R P^-1 R*` before the shift; `None` when
    /// there are no complementary entries.
    pub schur_lambda_min: Option<f64>,
    pub modified_lambda_min: f64,
}

/// Adds `rho = max(0, -lambda_min(D - R P^-1 R*)) + margin` to every diagonal
/// entry outside `principal`, where `P` is the principal submatrix and `D`, `R`
/// the complementary blocks. With no complementary entries `rho = 0`.
pub fn complete_to_pd(p_tilde: &PickMatrix, principal: &[usize], margin: f64) -> Result<Completion> {
    if !(margin > 0.0 && margin.is_finite()) {
        return Err(invalid("margin must be positive and finite"));
    }
    let h = p_tilde.to_hermitian()?;
    if !h.within_tolerance() {
        return Err(invalid(format!(
            "extended Pick matrix is not Hermitian (defect {:e})",
            h.defect()
        )));
    }
    let n = h.dim();
    let mut in_principal = vec![false; n];
    for &i in principal {
        if i >= n {
            return Err(invalid(format!("principal index {i} out of range")));
        }
        in_principal[i] = true;
    }
    let complementary: Vec<usize> = (0..n).filter(|&i| !in_principal[i]).collect();

    let (rho, schur_lambda_min) = if complementary.is_empty() {
        let p = eigen_h(&h)?;
        if !(p.values.first().copied().unwrap_or(1.0) > 0.0) {
            return Err(Error::PrincipalNotPD);
        }
        (0.0, None)
    } else {
        let s = schur_complement(&h, principal)?;
        let lambda = eigen_h(&s)?.values[0];
        ((-lambda).max(0.0) + margin, Some(lambda))
    };

    let mut modified = h.matrix().clone();
    for &i in &complementary {
        modified[(i, i)] += Complex64::new(rho, 0.0);
    }
    let modified = PickMatrix::new(modified, p_tilde.orders.clone())?;
    let modified_lambda_min = eigen_h(&modified.to_hermitian()?)?
        .values
        .first()
        .copied()
        .unwrap_or(f64::INFINITY);
    let gamma_targets = complementary
        .iter()
        .map(|&i| {
            let point = p_tilde.block_index(i).map_or(i, |(p, _)| p);
            (point, modified.matrix[(i, i)].re)
        })
        .collect();
    Ok(Completion {
        original: p_tilde.clone(),
        modified,
        rho,
        margin,
        complementary_indices: complementary,
        gamma_targets,
        schur_lambda_min,
        modified_lambda_min,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::schwarz_pick::{boundary_jets, sp_boundary_structured};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn reals(v: &[f64]) -> Vec<Complex64> {
        v.iter().map(|&x| c(x, 0.0)).collect()
    }

    fn close(a: Complex64, b: Complex64, tol: f64) -> bool {
        (a - b).norm() <= tol
    }

    fn real_pick(rows: &[&[f64]], orders: Vec<usize>) -> PickMatrix {
        let n = rows.len();
        PickMatrix::new(CMatrix::from_fn(n, n, |i, j| c(rows[i][j], 0.0)), orders).unwrap()
    }

    #[test]
    fn extract_examples() {
        let one = c(1.0, 0.0);
        let d = extract_data(&BlaschkeProduct::power(1), &[one], &[3]).unwrap();
        assert_eq!(d.values()[0], reals(&[1.0, 1.0, 0.0, 0.0]));

        let d = extract_data(&BlaschkeProduct::power(2), &[one, -one], &[2, 2]).unwrap();
        for (got, want) in d.values().iter().zip([[1.0, 2.0, 1.0], [1.0, -2.0, 1.0]]) {
            for (g, w) in got.iter().zip(want) {
                assert!(close(*g, c(w, 0.0), 1e-14));
            }
        }

        let b = BlaschkeProduct::new(vec![c(0.5, 0.0)], one).unwrap();
        let d = extract_data(&b, &[one], &[2]).unwrap();
        for (g, w) in d.values()[0].iter().zip([1.0, 3.0, 3.0]) {
            assert!(close(*g, c(w, 0.0), 1e-13));
        }
    }

    #[test]
    fn build_pick_examples() {
        let one = c(1.0, 0.0);
        let z = BlaschkeProduct::power(1);
        let p = build_pick(&extract_data(&z, &[one], &[1]).unwrap(), &[1]).unwrap();
        assert!(close(p.matrix[(0, 0)], one, 1e-15));

        let p = build_pick(&extract_data(&z, &[one, -one], &[1, 1]).unwrap(), &[1, 1]).unwrap();
        for i in 0..2 {
            for j in 0..2 {
                assert!(close(p.matrix[(i, j)], one, 1e-15));
            }
        }

        let d = JetData::new(vec![one], vec![reals(&[1.0, 0.0])]).unwrap();
        assert!(build_pick(&d, &[1]).unwrap().matrix[(0, 0)].norm() < 1e-15);

        assert!(matches!(
            build_pick(&JetData::new(vec![one], vec![reals(&[1.0])]).unwrap(), &[1]),
            Err(Error::InsufficientJet { .. })
        ));
    }

    #[test]
    fn build_pick_matches_structured_route() {
        let b = BlaschkeProduct::new(vec![c(0.2, 0.4), c(-0.5, 0.1), c(0.0, -0.6)], c(0.0, 1.0)).unwrap();
        let points = [Complex64::from_polar(1.0, 0.4), Complex64::from_polar(1.0, 2.5)];
        let orders = [2, 3];
        let data = extract_data(&b, &points, &[3, 5]).unwrap();
        let p = build_pick(&data, &orders).unwrap();
        let s = sp_boundary_structured(&boundary_jets(&b, &points, &orders).unwrap(), &orders).unwrap();
        assert!(crate::hermitian::max_abs_diff(&p.matrix, &s.flat) <= 1e-12);
    }

    #[test]
    fn admissibility_examples() {
        let one = c(1.0, 0.0);
        let b = BlaschkeProduct::new(vec![c(0.3, 0.3), c(-0.4, 0.0)], one).unwrap();
        let d = extract_data(&b, &[one, c(0.0, 1.0)], &[3, 1]).unwrap();
        assert!(admissible(&d, &[2, 1], 1e-10).unwrap().admissible);

        let d = JetData::new(vec![one], vec![reals(&[0.5, 1.0])]).unwrap();
        let a = admissible(&d, &[1], 1e-10).unwrap();
        assert!(!a.admissible && (a.modulus_defect - 0.5).abs() < 1e-15);

        let d = JetData::new(vec![one], vec![reals(&[1.0, -1.0])]).unwrap();
        let a = admissible(&d, &[1], 1e-10).unwrap();
        assert!(!a.admissible && !a.pick.psd);
    }

    #[test]
    fn extend_examples() {
        let one = c(1.0, 0.0);
        let d = extract_data(&BlaschkeProduct::power(2), &[one], &[3]).unwrap();
        assert_eq!(extend_pick(&d, &[1], &[]).unwrap(), build_pick(&d, &[1]).unwrap());

        let p = extend_pick(&d, &[1], &[0]).unwrap();
        let r = HermitianReport::new(&p.to_hermitian().unwrap(), Tolerances::default()).unwrap();
        assert_eq!((p.dim(), r.numerical_rank), (2, 2));
        assert!(r.psd);

        let d = extract_data(&BlaschkeProduct::power(1), &[one], &[3]).unwrap();
        let p = extend_pick(&d, &[1], &[0]).unwrap();
        let r = HermitianReport::new(&p.to_hermitian().unwrap(), Tolerances::default()).unwrap();
        assert_eq!((p.dim(), r.numerical_rank), (2, 1));
        assert!(r.psd);
    }

    #[test]
    fn gamma_examples() {
        let one = c(1.0, 0.0);
        assert!(close(
            gamma(&reals(&[1.0, 3.0, 0.0, 0.0]), one, 1).unwrap(),
            c(0.0, 0.0),
            1e-15
        ));
        assert!(close(
            gamma(&reals(&[1.0, 3.0, 1.0, 0.0]), one, 1).unwrap(),
            c(2.0, 0.0),
            1e-15
        ));
        assert!(close(
            gamma(&reals(&[1.0, 3.0, 0.0, -5.0]), one, 1).unwrap(),
            c(5.0, 0.0),
            1e-15
        ));
        assert!(matches!(
            gamma(&reals(&[1.0, 3.0, 0.0]), one, 1),
            Err(Error::InsufficientJet { .. })
        ));
    }

    #[test]
    fn gamma_is_bottom_entry_of_extended_block() {
        let b = BlaschkeProduct::new(vec![c(0.1, 0.5), c(0.6, -0.2)], Complex64::from_polar(1.0, 1.1)).unwrap();
        let t = Complex64::from_polar(1.0, -0.8);
        for k in 1..=3 {
            let d = extract_data(&b, &[t], &[2 * k + 1]).unwrap();
            let p = extend_pick(&d, &[k], &[0]).unwrap();
            let g = gamma(&d.values()[0], t, k).unwrap();
            assert!(close(g, p.matrix[(k, k)], 1e-10));
        }
    }

    #[test]
    fn supplementary_examples() {
        let one = c(1.0, 0.0);
        let b = solve_supplementary(&reals(&[1.0, 3.0, 0.0, 7.0]), one, 1, c(5.0, 0.0)).unwrap();
        assert!(close(b, c(-5.0, 0.0), 1e-14));
        let b = solve_supplementary(&reals(&[1.0, 3.0, 1.0]), one, 1, c(2.0, 0.0)).unwrap();
        assert!(close(b, c(0.0, 0.0), 1e-14));
        assert!(matches!(
            solve_supplementary(&reals(&[0.1, 3.0, 1.0]), one, 1, one),
            Err(Error::ZeroLeadingValue(_))
        ));
    }

    #[test]
    fn completion_examples() {
        let c1 = complete_to_pd(&real_pick(&[&[1.0, 2.0], &[2.0, 1.0]], vec![2]), &[0], 1.0).unwrap();
        assert!((c1.rho - 4.0).abs() < 1e-14);
        assert!(close(c1.modified.matrix[(1, 1)], c(5.0, 0.0), 1e-14));
        assert!(close(c1.modified.matrix[(0, 1)], c(2.0, 0.0), 0.0));
        assert_eq!(c1.complementary_indices, vec![1]);
        assert!(c1.modified_lambda_min > 0.0);

        let pd = real_pick(&[&[2.0, 1.0], &[1.0, 2.0]], vec![1, 1]);
        let c2 = complete_to_pd(&pd, &[0, 1], 1.0).unwrap();
        assert_eq!(c2.rho, 0.0);
        assert_eq!(c2.modified, pd);
        assert!(c2.complementary_indices.is_empty());

        let c3 = complete_to_pd(&real_pick(&[&[1.0, 0.0], &[0.0, -1.0]], vec![1, 1]), &[0], 0.5).unwrap();
        assert!(close(c3.modified.matrix[(1, 1)], c(0.5, 0.0), 1e-15));
        assert_eq!(c3.gamma_targets, vec![(1, 0.5)]);

        assert_eq!(
            complete_to_pd(&real_pick(&[&[-1.0, 0.0], &[0.0, 1.0]], vec![2]), &[0], 1.0),
            Err(Error::PrincipalNotPD)
        );
    }

    #[test]
    fn jet_data_json_roundtrip() {
        let text = r#"{"points": [[1.0, 0.0], [0.0, 1.0]], "values": [[[1.0, 0.0], [1.0, 0.0]], [[0.0, 1.0]]]}"#;
        let d: JetData = serde_json::from_str(text).unwrap();
        assert_eq!(d.len(), 2);
        let back: JetData = serde_json::from_str(&serde_json::to_string(&d).unwrap()).unwrap();
        assert_eq!(d, back);
        assert!(serde_json::from_str::<JetData>(
            r#"{"points": [[1.0, 0.0], [1.0, 0.0]], "values": [[[1, 0]], [[1, 0]]]}"#
        )
        .is_err());
    }
}
