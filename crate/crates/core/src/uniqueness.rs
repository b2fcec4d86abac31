//! Uniqueness of a Schur function sharing boundary jets with a finite Blaschke
//! product, decided by comparing `sum_i floor((m_i + 1) / 2)` with the degree and
//! certified by the Pick matrix of the truncated problem.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::blaschke::BlaschkeProduct;
use crate::error::{invalid, Error, Result};
use crate::hermitian::{max_abs_diff, HermitianReport, Tolerances};
use crate::pick_problem::{build_pick, complete_to_pd, extend_pick, extract_data, solve_supplementary, Completion};
use crate::schwarz_pick::validate_boundary_points;

/// A Blaschke product with contact orders `m_i` at boundary points `t_i`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ContactProblem {
    pub b: BlaschkeProduct,
    #[serde(with = "crate::io::pairs")]
    pub points: Vec<Complex64>,
    pub contact_orders: Vec<usize>,
}

impl ContactProblem {
    pub fn new(b: BlaschkeProduct, points: Vec<Complex64>, contact_orders: Vec<usize>) -> Result<Self> {
        if points.len() != contact_orders.len() {
            return Err(invalid("points and contact orders differ in length"));
        }
        if contact_orders.contains(&0) {
            return Err(invalid("contact orders must be at least 1"));
        }
        validate_boundary_points(&points)?;
        for &t in &points {
            b.eval(t)?;
        }
        Ok(Self {
            b,
            points,
            contact_orders,
        })
    }

    /// `k_i = floor((m_i + 1) / 2)`.
    pub fn k(&self) -> Vec<usize> {
        half_orders(&self.contact_orders)
    }
}

/// `floor((m_i + 1) / 2)` for each `m_i`.
pub fn half_orders(m: &[usize]) -> Vec<usize> {
    m.iter().map(|&mi| mi.div_ceil(2)).collect()
}

/// True when `sum_i floor((m_i + 1) / 2) > d`, the uniqueness condition.
pub fn criterion(m: &[usize], d: usize) -> bool {
    half_orders(m).iter().sum::<usize>() > d
}

/// Whether `candidate` and the problem's `b` have the same Taylor coefficients
/// through order `m_i` at every `t_i`, entrywise within `tol`.
pub fn matches_jets(candidate: &BlaschkeProduct, problem: &ContactProblem, tol: f64) -> bool {
    problem.points.iter().zip(&problem.contact_orders).all(|(&t, &m)| {
        match (candidate.taylor_jet(t, m), problem.b.taylor_jet(t, m)) {
            (Ok(a), Ok(b)) => a
                .coefficients
                .iter()
                .zip(&b.coefficients)
                .all(|(x, y)| (x - y).norm() <= tol),
            _ => false,
        }
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DecideOptions {
    pub tolerances: Tolerances,
    /// Completion margin in units of `max(1, lambda_max)` of the extended matrix.
    pub margin: f64,
}

impl Default for DecideOptions {
    fn default() -> Self {
        Self {
            tolerances: Tolerances::default(),
            margin: 1.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Tag {
    Unique,
    NonUnique,
}

/// A replaced supplementary coefficient `b_{i, 2k_i + 1}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Supplementary {
    pub point: usize,
    #[serde(with = "crate::io::pair")]
    pub original: Complex64,
    #[serde(with = "crate::io::pair")]
    pub replaced: Complex64,
    pub gamma_original: f64,
    pub gamma_target: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Certificate {
    /// The Pick matrix is singular with rank equal to the degree.
    SingularPick {
        numerical_rank: usize,
        rank_cutoff: f64,
        lambda_min: f64,
    },
    /// The truncated Pick matrix is positive definite and the extended matrix,
    /// after raising the entries tied to supplementary data, is too.
    PositiveDefiniteExtension {
        odd_points: Vec<usize>,
        even_points: Vec<usize>,
        extended_orders: Vec<usize>,
        completion: Completion,
        supplementary: Vec<Supplementary>,
        /// `max |extend_pick(modified data) - completion.modified|`.
        round_trip_residual: f64,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Verdict {
    pub tag: Tag,
    pub k: Vec<usize>,
    pub k_total: usize,
    pub degree: usize,
    pub pick: HermitianReport,
    pub certificate: Certificate,
}

impl Verdict {
    pub fn is_unique(&self) -> bool {
        self.tag == Tag::Unique
    }

    /// Round-trip residual of the completion certificate; zero for singular certificates.
    pub fn residual(&self) -> f64 {
        match &self.certificate {
            Certificate::SingularPick { .. } => 0.0,
            Certificate::PositiveDefiniteExtension {
                round_trip_residual, ..
            } => *round_trip_residual,
        }
    }
}

/// Decides uniqueness and builds the certificate for the branch that holds.
///
/// Fails with [`Error::RankMismatch`] when the computed rank of the Pick matrix
/// disagrees with `min(|k|, d)`, which only happens through loss of accuracy.
pub fn decide(problem: &ContactProblem, options: &DecideOptions) -> Result<Verdict> {
    if !(options.margin > 0.0 && options.margin.is_finite()) {
        return Err(invalid("margin must be positive and finite"));
    }
    let k = problem.k();
    let k_total: usize = k.iter().sum();
    let degree = problem.b.degree();
    let even: Vec<usize> = (0..k.len())
        .filter(|&i| problem.contact_orders[i].is_multiple_of(2))
        .collect();
    let odd: Vec<usize> = (0..k.len()).filter(|&i| problem.contact_orders[i] % 2 == 1).collect();

    // odd points need b_{0..2k-1}; even points also b_{2k} and the supplementary b_{2k+1}
    let depth: Vec<usize> = (0..k.len())
        .map(|i| {
            if problem.contact_orders[i].is_multiple_of(2) {
                2 * k[i] + 1
            } else {
                2 * k[i] - 1
            }
        })
        .collect();
    let data = extract_data(&problem.b, &problem.points, &depth)?;
    let p = build_pick(&data, &k)?;
    let pick = HermitianReport::new(&p.to_hermitian()?, options.tolerances)?;

    if criterion(&problem.contact_orders, degree) {
        if pick.numerical_rank != degree {
            return Err(Error::RankMismatch {
                expected: degree,
                found: pick.numerical_rank,
            });
        }
        let certificate = Certificate::SingularPick {
            numerical_rank: pick.numerical_rank,
            rank_cutoff: options.tolerances.rank * pick.lambda_max().max(1.0),
            lambda_min: pick.lambda_min(),
        };
        return Ok(Verdict {
            tag: Tag::Unique,
            k,
            k_total,
            degree,
            pick,
            certificate,
        });
    }

    if !pick.pd || pick.numerical_rank != k_total {
        return Err(Error::RankMismatch {
            expected: k_total,
            found: pick.numerical_rank,
        });
    }
    let p_tilde = extend_pick(&data, &k, &even)?;
    let mut extended_orders = k.clone();
    for &i in &even {
        extended_orders[i] += 1;
    }
    let principal: Vec<usize> = (0..p_tilde.dim())
        .filter(|&r| {
            let (point, row) = p_tilde.block_index(r).expect("row inside matrix");
            !(problem.contact_orders[point].is_multiple_of(2) && row == k[point])
        })
        .collect();
    let scale = crate::hermitian::eigen_h(&p_tilde.to_hermitian()?)?
        .values
        .last()
        .copied()
        .unwrap_or(0.0)
        .max(1.0);
    let completion = complete_to_pd(&p_tilde, &principal, options.margin * scale)?;
    if !(completion.modified_lambda_min > options.tolerances.pd * scale) {
        return Err(Error::RankMismatch {
            expected: p_tilde.dim(),
            found: p_tilde.dim() - completion.complementary_indices.len(),
        });
    }

    let mut modified_data = data.clone();
    let mut supplementary = Vec::with_capacity(even.len());
    for (&idx, &(point, target)) in completion.complementary_indices.iter().zip(&completion.gamma_targets) {
        let values = &data.values()[point];
        let replaced = solve_supplementary(values, problem.points[point], k[point], Complex64::new(target, 0.0))?;
        modified_data = modified_data.with_value(point, 2 * k[point] + 1, replaced)?;
        supplementary.push(Supplementary {
            point,
            original: values[2 * k[point] + 1],
            replaced,
            gamma_original: p_tilde.matrix[(idx, idx)].re,
            gamma_target: target,
        });
    }
    let round_trip = extend_pick(&modified_data, &k, &even)?;
    let round_trip_residual = max_abs_diff(&round_trip.matrix, &completion.modified.matrix);

    Ok(Verdict {
        tag: Tag::NonUnique,
        k,
        k_total,
        degree,
        pick,
        certificate: Certificate::PositiveDefiniteExtension {
            odd_points: odd,
            even_points: even,
            extended_orders,
            completion,
            supplementary,
            round_trip_residual,
        },
    })
}
