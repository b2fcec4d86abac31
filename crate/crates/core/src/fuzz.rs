//! Seeded random instances and the property checks run on them.

use std::f64::consts::PI;

use num_complex::Complex64;
use rand::{Rng, RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::blaschke::BlaschkeProduct;
use crate::error::Result;
use crate::hermitian::{max_abs, max_abs_diff, HermitianReport, Tolerances, HERMITIAN_TOL};
use crate::pick_problem::{admissible, extract_data};
use crate::realization::{realize, sp_via_realization};
use crate::schwarz_pick::{boundary_jets, sp_boundary_structured};

/// Zeros are drawn uniformly from the disk of this radius.
pub const ZERO_RADIUS: f64 = 0.7;
/// Smallest circular gap between random boundary points, in radians.
pub const MIN_SEPARATION: f64 = 1.0;
/// Allowed entrywise gap between the structured and realization routes.
pub const ROUTE_TOL: f64 = 1e-8;

/// A uniformly random point of the disk `|z| < radius`.
pub fn random_disk_point<R: Rng>(rng: &mut R, radius: f64) -> Complex64 {
    let r = radius * rng.random::<f64>().sqrt();
    Complex64::from_polar(r, rng.random_range(0.0..2.0 * PI))
}

pub fn random_unimodular<R: Rng>(rng: &mut R) -> Complex64 {
    Complex64::from_polar(1.0, rng.random_range(0.0..2.0 * PI))
}

/// Degree `d` product with zeros uniform in `|z| < radius` and a random constant.
pub fn random_blaschke<R: Rng>(rng: &mut R, d: usize, radius: f64) -> BlaschkeProduct {
    let zeros = (0..d).map(|_| random_disk_point(rng, radius)).collect();
    BlaschkeProduct::new(zeros, random_unimodular(rng)).expect("zeros drawn inside the disk")
}

/// `n` boundary points with pairwise circular gap at least
/// `min(min_separation, pi / n)`.
pub fn random_boundary_points<R: Rng>(rng: &mut R, n: usize, min_separation: f64) -> Vec<Complex64> {
    let gap = min_separation.min(PI / n.max(1) as f64);
    let mut angles: Vec<f64> = Vec::with_capacity(n);
    while angles.len() < n {
        let a = rng.random_range(0.0..2.0 * PI);
        let far = angles.iter().all(|&b| {
            let d = (a - b).rem_euclid(2.0 * PI);
            d.min(2.0 * PI - d) >= gap
        });
        if far {
            angles.push(a);
        }
    }
    angles.into_iter().map(|a| Complex64::from_polar(1.0, a)).collect()
}

/// Generator for trial `trial` of a run seeded with `seed`; trials are
/// independent streams so any one can be replayed alone.
pub fn trial_rng(seed: u64, trial: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    rng
}

/// A product, boundary points, and orders `k_i`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Instance {
    pub b: BlaschkeProduct,
    #[serde(with = "crate::io::pairs")]
    pub points: Vec<Complex64>,
    pub orders: Vec<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FuzzConfig {
    pub trials: usize,
    pub degree_max: usize,
    pub points_max: usize,
    pub order_max: usize,
    pub seed: u64,
    pub tolerances: Tolerances,
}

impl Default for FuzzConfig {
    fn default() -> Self {
        Self {
            trials: 200,
            degree_max: 6,
            points_max: 3,
            order_max: 3,
            seed: 42,
            tolerances: Tolerances::default(),
        }
    }
}

/// Instance for trial `trial`: `d` in `0..=degree_max`, `n` in `1..=points_max`,
/// `k_i` in `1..=order_max`.
pub fn random_instance(config: &FuzzConfig, trial: u64) -> Instance {
    let mut rng = trial_rng(config.seed, trial);
    let d = rng.random_range(0..=config.degree_max);
    let n = rng.random_range(1..=config.points_max.max(1));
    let b = random_blaschke(&mut rng, d, ZERO_RADIUS);
    let points = random_boundary_points(&mut rng, n, MIN_SEPARATION);
    let orders = (0..n).map(|_| rng.random_range(1..=config.order_max.max(1))).collect();
    Instance { b, points, orders }
}

/// Measurements of one instance and the properties they violate.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InstanceCheck {
    pub numerical_rank: usize,
    pub expected_rank: usize,
    pub hermitian_defect: f64,
    pub norm: f64,
    pub route_residual: f64,
    pub admissible: bool,
    pub failures: Vec<String>,
}

impl InstanceCheck {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Rank law, Hermitianness, structured vs realization agreement, admissibility.
pub fn check_instance(instance: &Instance, tolerances: Tolerances) -> Result<InstanceCheck> {
    let Instance { b, points, orders } = instance;
    let structured = sp_boundary_structured(&boundary_jets(b, points, orders)?, orders)?;
    let realized = sp_via_realization(&realize(b), points, orders)?;
    let report = HermitianReport::new(&structured.to_hermitian()?, tolerances)?;
    let k_total: usize = orders.iter().sum();
    let expected_rank = k_total.min(b.degree());
    let norm = max_abs(&structured.flat);
    let hermitian_defect = structured.hermitian_defect();
    let route_residual = max_abs_diff(&structured.flat, &realized.flat);
    let depth: Vec<usize> = orders.iter().map(|&k| 2 * k - 1).collect();
    let admissible = admissible(&extract_data(b, points, &depth)?, orders, tolerances.pd)?.admissible;

    let mut failures = Vec::new();
    if report.numerical_rank != expected_rank {
        failures.push(format!(
            "rank {} != min(|k|, d) = {}",
            report.numerical_rank, expected_rank
        ));
    }
    if hermitian_defect > HERMITIAN_TOL * norm.max(1.0) {
        failures.push(format!("hermitian defect {hermitian_defect:e}"));
    }
    if !(route_residual <= ROUTE_TOL) {
        failures.push(format!("structured vs realization {route_residual:e}"));
    }
    if !admissible {
        failures.push("extracted data not admissible".into());
    }
    Ok(InstanceCheck {
        numerical_rank: report.numerical_rank,
        expected_rank,
        hermitian_defect,
        norm,
        route_residual,
        admissible,
        failures,
    })
}

fn fails(instance: &Instance, tolerances: Tolerances) -> bool {
    check_instance(instance, tolerances).map_or(true, |c| !c.passed())
}

/// Greedily drops points, lowers orders and removes zeros while the instance
/// keeps failing.
pub fn minimize(instance: &Instance, tolerances: Tolerances) -> Instance {
    let mut best = instance.clone();
    loop {
        let mut candidates = Vec::new();
        for i in 0..best.points.len() {
            if best.points.len() > 1 {
                let mut c = best.clone();
                c.points.remove(i);
                c.orders.remove(i);
                candidates.push(c);
            }
            if best.orders[i] > 1 {
                let mut c = best.clone();
                c.orders[i] -= 1;
                candidates.push(c);
            }
        }
        for j in 0..best.b.degree() {
            let mut zeros = best.b.zeros().to_vec();
            zeros.remove(j);
            if let Ok(b) = BlaschkeProduct::new(zeros, best.b.unimodular_constant()) {
                candidates.push(Instance { b, ..best.clone() });
            }
        }
        match candidates.into_iter().find(|c| fails(c, tolerances)) {
            Some(c) => best = c,
            None => return best,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Counterexample {
    pub trial: u64,
    pub original: Instance,
    pub minimized: Instance,
    /// Check of the minimized instance, or the error it raised.
    pub check: std::result::Result<InstanceCheck, String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FuzzSummary {
    pub config: FuzzConfig,
    pub failures: usize,
    pub max_route_residual: f64,
    pub max_relative_hermitian_defect: f64,
    pub counterexample: Option<Counterexample>,
}

impl FuzzSummary {
    pub fn passed(&self) -> bool {
        self.failures == 0
    }
}

/// Runs every trial and keeps the first failure, minimized.
pub fn run_fuzz(config: &FuzzConfig) -> FuzzSummary {
    let mut summary = FuzzSummary {
        config: *config,
        failures: 0,
        max_route_residual: 0.0,
        max_relative_hermitian_defect: 0.0,
        counterexample: None,
    };
    for trial in 0..config.trials as u64 {
        let instance = random_instance(config, trial);
        let check = check_instance(&instance, config.tolerances);
        if let Ok(c) = &check {
            summary.max_route_residual = summary.max_route_residual.max(c.route_residual);
            summary.max_relative_hermitian_defect = summary
                .max_relative_hermitian_defect
                .max(c.hermitian_defect / c.norm.max(1.0));
        }
        if check.as_ref().map_or(true, |c| !c.passed()) {
            summary.failures += 1;
            if summary.counterexample.is_none() {
                let minimized = minimize(&instance, config.tolerances);
                let check = check_instance(&minimized, config.tolerances).map_err(|e| e.to_string());
                summary.counterexample = Some(Counterexample {
                    trial,
                    original: instance,
                    minimized,
                    check,
                });
            }
        }
    }
    summary
}
